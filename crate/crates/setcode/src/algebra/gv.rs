//! Greedy codebook constructions: the all-ones-anchored address code and
//! constant-weight codes.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::arith::binomial;
use crate::bits::Bits;
use core::cmp::Reverse;

use crate::seq::{all_sequences, seq_rank, Sequence};
use crate::{Error, Result};

/// An address code: M words of `F_2^{L'}`, first word all-ones, pairwise
/// Hamming distance at least 2*eps + 1.
#[derive(Debug, Clone)]
pub struct AddressCode {
    pub eps: usize,
    /// Words in descending rank order; the all-ones word leads.
    pub words: Vec<Sequence>,
}

impl AddressCode {
    pub fn min_distance_ok(&self) -> bool {
        for (i, a) in self.words.iter().enumerate() {
            for b in &self.words[i + 1..] {
                if a.hamming_distance(b) < 2 * self.eps + 1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Size of the radius-2eps Hamming ball in F_2^{L'}; the exclusion volume of
/// the greedy construction.
pub fn hamming_ball_q(l_prime: usize, eps: usize) -> num_bigint::BigUint {
    let mut q = num_bigint::BigUint::ZERO;
    for i in 0..=2 * eps {
        q += binomial(l_prime as u64, i as u64);
    }
    q
}

/// The greedy lower-bound guarantee: prod_{i=2}^{M} (2^{L'} - (i-1) Q).
/// Positive means the greedy pick provably cannot get stuck; the greedy
/// itself may still succeed below that.
pub fn gv_guarantee(l_prime: usize, m: usize, eps: usize) -> BigInt {
    let q: BigInt = hamming_ball_q(l_prime, eps).into();
    let space = BigInt::from(1u8) << l_prime;
    let mut prod = BigInt::from(1u8);
    for i in 2..=m {
        prod *= &space - BigInt::from(i as u64 - 1) * &q;
    }
    prod
}

/// Greedy address code: start from the all-ones word, then repeatedly take
/// the smallest-rank word at distance >= 2*eps+1 from everything chosen.
pub fn gv_address_code(l_prime: usize, m: usize, eps: usize) -> Result<AddressCode> {
    if l_prime == 0 || l_prime > 24 {
        return Err(Error::InvalidParams("address length out of desk-scale range".into()));
    }
    let ones = Sequence::new(2, alloc::vec![1u16; l_prime]).unwrap();
    let mut words = alloc::vec![ones];
    if m > 1 {
        for cand in all_sequences(2, l_prime) {
            if words.len() == m {
                break;
            }
            if words.iter().all(|w| w.hamming_distance(&cand) > 2 * eps) {
                words.push(cand);
            }
        }
    }
    if words.len() < m {
        return Err(Error::InvalidParams(alloc::format!(
            "greedy exhausted F_2^{l_prime} after {} of {m} words",
            words.len()
        )));
    }
    words.sort_unstable_by_key(|w| Reverse(seq_rank(w)));
    Ok(AddressCode { eps, words })
}

/// Every M-subset of `F_2^{L'}` that contains the all-ones word and has
/// pairwise distance >= 2*eps+1, in a fixed enumeration order. This is the
/// full address code of the no-loss construction; its index is the
/// message's address component.
pub fn enumerate_address_sets(
    l_prime: usize,
    m: usize,
    eps: usize,
    budget: u128,
) -> Result<Vec<Vec<Sequence>>> {
    let ones = Sequence::new(2, alloc::vec![1u16; l_prime]).unwrap();
    let d = 2 * eps + 1;
    // candidates compatible with the anchor, ascending rank
    let cands: Vec<Sequence> = all_sequences(2, l_prime)
        .filter(|w| w.hamming_distance(&ones) >= d)
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        cands: &[Sequence],
        d: usize,
        need: usize,
        from: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Sequence>>,
        ones: &Sequence,
        budget: u128,
    ) -> Result<()> {
        if chosen.len() == need {
            let mut set = alloc::vec![ones.clone()];
            set.extend(chosen.iter().map(|&i| cands[i].clone()));
            set.sort_unstable_by_key(|w| Reverse(seq_rank(w)));
            out.push(set);
            if out.len() as u128 > budget {
                return Err(Error::BudgetExceeded { needed: out.len() as u128, budget });
            }
            return Ok(());
        }
        for i in from..cands.len() {
            if chosen.iter().all(|&j| cands[j].hamming_distance(&cands[i]) >= d) {
                chosen.push(i);
                rec(cands, d, need, i + 1, chosen, out, ones, budget)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    rec(&cands, d, m - 1, 0, &mut chosen, &mut out, &ones, budget)?;
    if out.is_empty() {
        return Err(Error::InvalidParams("no admissible address set exists".into()));
    }
    Ok(out)
}

/// Greedy constant-weight code: words of length n and weight w, pairwise
/// distance >= d, supports visited in combinatorial-number-system order.
pub fn constant_weight_greedy(n: usize, w: usize, d: usize, budget: u128) -> Result<Vec<Bits>> {
    if w > n {
        return Err(Error::InvalidParams("weight exceeds length".into()));
    }
    let total = crate::arith::binomial_u128(n as u64, w as u64);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut support: Vec<usize> = (0..w).collect();
    loop {
        if out
            .iter()
            .all(|s| 2 * (w - intersection_size(s, &support)) >= d)
        {
            out.push(support.clone());
        }
        // next support in lex order
        let mut i = w;
        loop {
            if i == 0 {
                let words = out
                    .into_iter()
                    .map(|s| {
                        let mut b = Bits::zeros(n);
                        for p in s {
                            b.set(p, true);
                        }
                        b
                    })
                    .collect();
                return Ok(words);
            }
            i -= 1;
            if support[i] < n - (w - i) {
                support[i] += 1;
                for j in i + 1..w {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn gv_examples() {
        // eps = 0: any M distinct words, the all-ones word first
        let code = gv_address_code(4, 3, 0).unwrap();
        assert_eq!(code.words.len(), 3);
        assert_eq!(code.words[0], Sequence::new(2, alloc::vec![1, 1, 1, 1]).unwrap());
        assert!(code.min_distance_ok());
        // M = 1 is just the anchor
        let one = gv_address_code(5, 1, 2).unwrap();
        assert_eq!(one.words.len(), 1);
        assert_eq!(one.words[0].symbols(), &[1, 1, 1, 1, 1]);
        // L' = 6, M = 4, eps = 1: four words pairwise distance >= 3
        let code = gv_address_code(6, 4, 1).unwrap();
        assert_eq!(code.words.len(), 4);
        assert!(code.min_distance_ok());
        for (i, a) in code.words.iter().enumerate() {
            for b in &code.words[i + 1..] {
                assert!(a.hamming_distance(b) >= 3);
            }
        }
    }

    #[test]
    fn gv_greedy_can_outlive_the_guarantee() {
        // At (L'=6, M=4, eps=1) the product bound is negative yet admissible
        // sets exist; the greedy must still find one.
        assert!(gv_guarantee(6, 4, 1) < num_bigint::BigInt::from(0));
        assert!(gv_address_code(6, 4, 1).is_ok());
        assert_eq!(hamming_ball_q(6, 1).to_u64(), Some(22));
    }

    #[test]
    fn enumeration_contains_greedy_and_counts() {
        let sets = enumerate_address_sets(6, 4, 1, 1 << 30).unwrap();
        // every set: anchored, distinct, pairwise distance >= 3
        for s in &sets {
            assert_eq!(s[0].symbols(), &[1; 6]);
            for (i, a) in s.iter().enumerate() {
                for b in &s[i + 1..] {
                    assert!(a.hamming_distance(b) >= 3);
                }
            }
        }
        // deterministic order, no duplicates
        let mut sorted = sets.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), sets.len());
        let greedy = gv_address_code(6, 4, 1).unwrap();
        assert!(sets.contains(&greedy.words));
    }

    #[test]
    fn constant_weight_examples() {
        // d = 1: all C(n, w) words admissible, in enumeration order
        let all = constant_weight_greedy(5, 2, 1, 1 << 20).unwrap();
        assert_eq!(all.len(), 10);
        // n=8, w=2, d=3: pairwise distance >= 3, checked exhaustively
        let code = constant_weight_greedy(8, 2, 3, 1 << 20).unwrap();
        for (i, a) in code.iter().enumerate() {
            assert_eq!(a.weight(), 2);
            for b in &code[i + 1..] {
                assert!(a.hamming_distance(b) >= 3);
            }
        }
        assert!(!code.is_empty());
        // w = n: the single all-ones word
        let full = constant_weight_greedy(6, 6, 3, 1 << 20).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].weight(), 6);
    }
}
