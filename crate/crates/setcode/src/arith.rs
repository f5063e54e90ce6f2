//! Exact big-integer combinatorics and log-free bound comparisons.
//!
//! Code sizes are binomial-scale and compared for exact (in)equality, so
//! everything here is integer arithmetic; base-2 logarithms appear only in
//! reporting helpers, never in a verdict.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::{Error, Result};

/// Binomial coefficient C(n, k), exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= BigUint::from(n - (k - i));
        acc /= BigUint::from(i);
    }
    acc
}

/// C(2^bits, k), exact, for spaces too large for a u64 count.
pub fn binomial_pow2(bits: u64, k: u64) -> BigUint {
    let n = BigUint::one() << bits;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= &n - BigUint::from(i);
    }
    for i in 1..=k {
        acc /= BigUint::from(i);
    }
    acc
}

/// C(n, k) clamped into u128; enumeration budgets don't need more.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    binomial(n, k).to_u128().unwrap_or(u128::MAX)
}

/// Rank of an ascending combination in lexicographic order over `[0, n)`.
pub fn rank_combination(n: usize, combo: &[usize]) -> BigUint {
    let k = combo.len();
    let mut rank = BigUint::zero();
    let mut start = 0usize;
    for (i, &c) in combo.iter().enumerate() {
        debug_assert!(c >= start && c < n);
        for j in start..c {
            rank += binomial((n - j - 1) as u64, (k - i - 1) as u64);
        }
        start = c + 1;
    }
    rank
}

/// Inverse of [`rank_combination`]; `rank` must be below C(n, k).
pub fn unrank_combination(n: usize, k: usize, rank: &BigUint) -> Result<Vec<usize>> {
    if *rank >= binomial(n as u64, k as u64) {
        return Err(Error::OutOfRange(alloc::format!(
            "combination rank {rank} >= C({n}, {k})"
        )));
    }
    let mut rank = rank.clone();
    let mut combo = Vec::with_capacity(k);
    let mut c = 0usize;
    for i in 0..k {
        loop {
            let count = binomial((n - c - 1) as u64, (k - i - 1) as u64);
            if count <= rank {
                rank -= count;
                c += 1;
            } else {
                combo.push(c);
                c += 1;
                break;
            }
        }
    }
    Ok(combo)
}

/// Floor of log2; zero input is an error at call sites, asserted here.
pub fn log2_floor(x: &BigUint) -> u64 {
    assert!(!x.is_zero(), "log of zero");
    x.bits() - 1
}

/// log2 of a positive big integer, for reports only.
pub fn log2_approx(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 53 {
        return libm::log2(x.to_u64().unwrap() as f64);
    }
    let top = (x >> (bits - 53)).to_u64().unwrap();
    (bits - 53) as f64 + libm::log2(top as f64)
}

// e = 2.718281828459045235360287...; the fraction below is strictly smaller,
// so using it as a lower bound keeps `redundancy_le` sound.
const E_LO_NUM: u128 = 2_718_281_828_459_045_235;
const E_LO_DEN: u128 = 1_000_000_000_000_000_000;

/// Decides log2(total) - log2(size) <= bound_int + loge_coeff * log2(e)
/// by pure integer arithmetic (a strictly-smaller rational stands in for e).
pub fn redundancy_le(total: &BigUint, size: &BigUint, bound_int: i64, loge_coeff: u32) -> bool {
    // total / size <= 2^bound_int * e^loge_coeff
    let mut lhs = total.clone();
    let mut rhs = size.clone();
    if bound_int >= 0 {
        rhs <<= bound_int as u64;
    } else {
        lhs <<= (-bound_int) as u64;
    }
    let e_num = BigUint::from(E_LO_NUM);
    let e_den = BigUint::from(E_LO_DEN);
    for _ in 0..loge_coeff {
        lhs *= &e_den;
        rhs *= &e_num;
    }
    lhs <= rhs
}

/// Decides log2(total) - log2(size) < bound_int strictly.
pub fn redundancy_lt_int(total: &BigUint, size: &BigUint, bound_int: u64) -> bool {
    *total < (size.clone() << bound_int)
}

/// Uniform BigUint below `bound` by rejection sampling.
pub fn rand_below<R: Rng>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero());
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mask_shift = (bytes as u64) * 8 - bits;
    loop {
        let mut buf = alloc::vec![0u8; bytes];
        rng.fill(&mut buf[..]);
        buf[0] >>= mask_shift; // big-endian top byte
        let candidate = BigUint::from_bytes_be(&buf);
        if candidate < *bound {
            return candidate;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0).to_u64(), Some(1));
        assert_eq!(binomial(5, 2).to_u64(), Some(10));
        assert_eq!(binomial(5, 6).to_u64(), Some(0));
        assert_eq!(binomial(256, 3).to_u64(), Some(2_763_520));
    }

    #[test]
    fn combination_round_trip_exhaustive_universe_64() {
        // Bijection over the full universe the subset codecs use: n = 64,
        // every rank for k <= 4.
        for k in 1..=4usize {
            let total = binomial(64, k as u64).to_u64().unwrap();
            for r in 0..total {
                let combo = unrank_combination(64, k, &BigUint::from(r)).unwrap();
                assert_eq!(rank_combination(64, &combo).to_u64(), Some(r));
            }
        }
    }

    #[test]
    fn combination_round_trip_exhaustive() {
        // Bijection over every (n, k) with n <= 8.
        for n in 0..=8usize {
            for k in 0..=n {
                let total = binomial(n as u64, k as u64).to_u64().unwrap();
                let mut seen = alloc::vec::Vec::new();
                for r in 0..total {
                    let combo = unrank_combination(n, k, &BigUint::from(r)).unwrap();
                    assert_eq!(combo.len(), k);
                    assert!(combo.windows(2).all(|w| w[0] < w[1]));
                    assert_eq!(rank_combination(n, &combo).to_u64(), Some(r));
                    seen.push(combo);
                }
                seen.dedup();
                assert_eq!(seen.len(), total as usize);
            }
        }
    }

    #[test]
    fn redundancy_comparisons() {
        // log2(1024/2) = 9 <= 8 + 1*log2(e) ~ 9.44
        assert!(redundancy_le(
            &BigUint::from(1024u32),
            &BigUint::from(2u32),
            8,
            1
        ));
        // 9 <= 8 is false with no e term
        assert!(!redundancy_le(
            &BigUint::from(1024u32),
            &BigUint::from(2u32),
            8,
            0
        ));
        // strict: log2(8) < 4, not < 3
        assert!(redundancy_lt_int(&BigUint::from(8u32), &BigUint::one(), 4));
        assert!(!redundancy_lt_int(&BigUint::from(8u32), &BigUint::one(), 3));
    }

    #[test]
    fn log2_approx_matches_bits() {
        let x = BigUint::from(1u8) << 100;
        let l = log2_approx(&x);
        assert!((l - 100.0).abs() < 1e-9);
    }
}
