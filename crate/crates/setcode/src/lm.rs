//! Codes against limited-magnitude symbol errors over `Z_q`.
//!
//! Two constructions. The prefix-window codec reserves a two-value-per-digit
//! address window whose corruptions stay inside a detection zone no other
//! address can enter, and stores the address parity scaled by `K = k+ + k- + 1`
//! so that rounding to the nearest multiple of `K` strips the errors. The
//! mod-p wrapper reduces symbols mod `p`, lets any substitution-correcting
//! set code fix the projections, and lifts the per-symbol errors back.

use alloc::vec::Vec;
use core::cmp::Reverse;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{bch_systematic, rs_code, BchCode, Gf2m, RsCode};
use crate::arith::{binomial, rank_combination, unrank_combination};
use crate::bits::Bits;
use crate::channel::{ChannelSpec, Eps, ErrorKind};
use crate::noloss::{Tcon, TconMessage};
use crate::seq::{char_vector, seq_rank, Sequence, SequenceSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmParams {
    pub q: u32,
    pub k_plus: u16,
    pub k_minus: u16,
    pub s: usize,
    pub t: usize,
    pub m: usize,
    pub l: usize,
    pub l1: usize,
}

/// The prefix-window `(s,t,•,k+,k-)` codec.
#[derive(Debug, Clone)]
pub struct LmCode {
    params: LmParams,
    /// High-window addresses (ascending rank); the first s+1 sequences use these.
    high_zone: Vec<Sequence>,
    /// Addresses outside the forbidden zone (ascending rank); the rest use these.
    others_zone: Vec<Sequence>,
    ca: BchCode,
    rs: RsCode,
    l2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmMessage {
    /// Which s+1 high-window addresses, below C(2^L1, s+1).
    pub high_rank: BigUint,
    /// Which M-s-1 ordinary addresses, below C(q^L1 - (K+k+ +1)^L1, M-s-1).
    pub others_rank: BigUint,
    /// Free symbols of the first s+1 payloads, each L - L1 - L2 long.
    pub head_syms: Vec<Vec<u16>>,
    /// Free payloads s+2..M-delta, each L - L1 long.
    pub free_syms: Vec<Vec<u16>>,
}

impl LmParams {
    pub fn big_k(&self) -> u16 {
        self.k_plus + self.k_minus + 1
    }

    pub fn delta(&self) -> usize {
        self.s + 2 * self.t
    }

    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            s: self.s,
            t: self.t,
            eps: Eps::Unbounded,
            kind: ErrorKind::LimitedMagnitude { k_plus: self.k_plus, k_minus: self.k_minus },
        }
    }
}

impl LmCode {
    pub fn new(params: LmParams) -> Result<Self> {
        let LmParams { q, k_plus, s, t: _, m, l, l1, .. } = params;
        let big_k = params.big_k() as u32;
        let delta = params.delta();
        if !q.is_power_of_two() {
            return Err(Error::InvalidParams(
                "q must be a power of two (payloads embed into a binary extension field)".into(),
            ));
        }
        if q % big_k != 0 {
            return Err(Error::InvalidParams("need K = k+ + k- + 1 dividing q".into()));
        }
        if q / big_k < 2 {
            return Err(Error::InvalidParams("need q/K >= 2".into()));
        }
        if q < big_k + k_plus as u32 + 2 {
            return Err(Error::InvalidParams(
                "forbidden zone swallows the alphabet: need q >= K + k+ + 2".into(),
            ));
        }
        if l1 == 0 || l1 * (q.ilog2() as usize) > 16 || l <= l1 {
            return Err(Error::InvalidParams("need 0 < L1 < L with q^L1 <= 2^16".into()));
        }
        if m < delta + s + 1 {
            return Err(Error::InvalidParams("need M - delta >= s + 1".into()));
        }
        // zones
        let (hi_lo, hi_hi) = (q as u16 - 2 - k_plus, q as u16 - 1 - k_plus);
        let forbid_lo = (q - big_k - k_plus as u32) as u16 - 1;
        let mut high_zone = Vec::new();
        let mut others_zone = Vec::new();
        for x in crate::seq::all_sequences(q, l1) {
            if x.symbols().iter().all(|&v| v == hi_lo || v == hi_hi) {
                high_zone.push(x.clone());
            }
            if !x.symbols().iter().all(|&v| v >= forbid_lo) {
                others_zone.push(x);
            }
        }
        debug_assert_eq!(high_zone.len(), 1 << l1);
        if others_zone.len() < m - s - 1 {
            return Err(Error::InvalidParams("not enough addresses outside the forbidden zone".into()));
        }
        // address parity code on the q-ary characteristic vector
        let ell = l1 as u32 * q.ilog2();
        let ca = bch_systematic(ell, delta)?;
        let nb = ca.redundancy();
        if nb > 63 {
            return Err(Error::InvalidParams("address parity exceeds 63 bits".into()));
        }
        // f: bits -> Z_{q/K} digits, big-endian; L2 digits suffice
        let base = (q / big_k) as u64;
        let mut l2 = 0usize;
        let mut reach = BigUint::one();
        while reach < (BigUint::one() << nb) {
            reach *= base;
            l2 += 1;
        }
        if l - l1 < l2 {
            return Err(Error::InvalidParams(alloc::format!(
                "payload too short for the scaled parity: L - L1 = {} < L2 = {l2}",
                l - l1
            )));
        }
        let w = (l - l1) * q.ilog2() as usize;
        if w > 63 {
            return Err(Error::InvalidParams("payload field degree exceeds 63 bits".into()));
        }
        let rs = rs_code(Gf2m::new(w as u32), m, m - delta)?;
        Ok(LmCode { params, high_zone, others_zone, ca, rs, l2 })
    }

    pub fn params(&self) -> &LmParams {
        &self.params
    }

    pub fn l2(&self) -> usize {
        self.l2
    }

    pub fn others_count(&self) -> usize {
        self.others_zone.len()
    }

    pub fn head_width(&self) -> usize {
        self.params.l - self.params.l1 - self.l2
    }

    /// C(2^L1, s+1) * C(others, M-s-1) * q^{(L-L1-L2)(s+1)} * q^{(L-L1)(M-delta-s-1)}.
    pub fn code_size(&self) -> BigUint {
        let p = &self.params;
        let delta = p.delta();
        let highs = binomial(self.high_zone.len() as u64, p.s as u64 + 1);
        let others = binomial(self.others_zone.len() as u64, (p.m - p.s - 1) as u64);
        let head = BigUint::from(p.q).pow((self.head_width() * (p.s + 1)) as u32);
        let free = BigUint::from(p.q).pow(((p.l - p.l1) * (p.m - delta - p.s - 1)) as u32);
        highs * others * head * free
    }

    pub fn total_space(&self) -> BigUint {
        // C(q^L, M); q is a power of two so the space is a power of two
        let p = &self.params;
        crate::arith::binomial_pow2(p.l as u64 * p.q.ilog2() as u64, p.m as u64)
    }

    pub fn zero_message(&self) -> LmMessage {
        let p = &self.params;
        LmMessage {
            high_rank: BigUint::ZERO,
            others_rank: BigUint::ZERO,
            head_syms: alloc::vec![alloc::vec![0; self.head_width()]; p.s + 1],
            free_syms: alloc::vec![alloc::vec![0; p.l - p.l1]; p.m - p.delta() - p.s - 1],
        }
    }

    fn check_message(&self, msg: &LmMessage) -> Result<()> {
        let p = &self.params;
        if msg.high_rank >= binomial(self.high_zone.len() as u64, p.s as u64 + 1) {
            return Err(Error::OutOfRange("high-window rank too large".into()));
        }
        if msg.others_rank >= binomial(self.others_zone.len() as u64, (p.m - p.s - 1) as u64) {
            return Err(Error::OutOfRange("ordinary-address rank too large".into()));
        }
        let sym_ok = |v: &Vec<u16>, len: usize| {
            v.len() == len && v.iter().all(|&x| (x as u32) < p.q)
        };
        if msg.head_syms.len() != p.s + 1
            || !msg.head_syms.iter().all(|v| sym_ok(v, self.head_width()))
        {
            return Err(Error::OutOfRange("head symbols have the wrong shape".into()));
        }
        if msg.free_syms.len() != p.m - p.delta() - p.s - 1
            || !msg.free_syms.iter().all(|v| sym_ok(v, p.l - p.l1))
        {
            return Err(Error::OutOfRange("free payloads have the wrong shape".into()));
        }
        Ok(())
    }

    /// The indexed address list: s+1 high-window addresses (descending), then
    /// the ordinary ones (descending).
    fn addresses(&self, msg: &LmMessage) -> Result<Vec<Sequence>> {
        let p = &self.params;
        let mut addrs = Vec::with_capacity(p.m);
        let hi = unrank_combination(self.high_zone.len(), p.s + 1, &msg.high_rank)?;
        let mut hi: Vec<Sequence> = hi.into_iter().map(|i| self.high_zone[i].clone()).collect();
        hi.sort_unstable_by_key(|w| Reverse(seq_rank(w)));
        addrs.extend(hi);
        let ot = unrank_combination(self.others_zone.len(), p.m - p.s - 1, &msg.others_rank)?;
        let mut ot: Vec<Sequence> = ot.into_iter().map(|i| self.others_zone[i].clone()).collect();
        ot.sort_unstable_by_key(|w| Reverse(seq_rank(w)));
        addrs.extend(ot);
        Ok(addrs)
    }

    fn scaled_parity(&self, addrs: &[Sequence]) -> Result<Vec<u16>> {
        let p = &self.params;
        let set = SequenceSet::codeword(p.q, p.l1, addrs.to_vec())?;
        let parity = self.ca.encode(&char_vector(&set)?);
        let mut value = parity.to_uint_be();
        let base = (p.q / p.big_k() as u32) as u64;
        let mut digits = alloc::vec![0u16; self.l2];
        for d in digits.iter_mut().rev() {
            *d = (value % base) as u16 * p.big_k();
            value /= base;
        }
        debug_assert_eq!(value, 0);
        Ok(digits)
    }

    fn pack(&self, syms: &[u16]) -> u64 {
        let w = self.params.q.ilog2();
        syms.iter().fold(0u64, |acc, &v| (acc << w) | v as u64)
    }

    fn unpack(&self, mut value: u64, len: usize) -> Vec<u16> {
        let w = self.params.q.ilog2();
        let mut out = alloc::vec![0u16; len];
        for v in out.iter_mut().rev() {
            *v = (value & ((1 << w) - 1)) as u16;
            value >>= w;
        }
        out
    }

    pub fn encode(&self, msg: &LmMessage) -> Result<SequenceSet> {
        self.check_message(msg)?;
        let p = &self.params;
        let addrs = self.addresses(msg)?;
        let scaled = self.scaled_parity(&addrs)?;
        let mut payloads: Vec<Vec<u16>> = Vec::with_capacity(p.m);
        for head in &msg.head_syms {
            let mut u = scaled.clone();
            u.extend_from_slice(head);
            payloads.push(u);
        }
        payloads.extend(msg.free_syms.iter().cloned());
        let mut symbols: Vec<u64> = payloads.iter().map(|u| self.pack(u)).collect();
        symbols = self.rs.encode(&symbols);
        let elems: Vec<Sequence> = addrs
            .iter()
            .zip(symbols.iter())
            .map(|(a, &sym)| {
                let u = Sequence::new(p.q, self.unpack(sym, p.l - p.l1)).expect("packed symbols");
                a.concat(&u)
            })
            .collect();
        SequenceSet::codeword(p.q, p.l, elems)
    }

    pub fn decode(&self, received: &SequenceSet) -> Result<LmMessage> {
        let p = &self.params;
        let big_k = p.big_k() as i64;
        // step 1: any payload head seen under the detection window
        let detect_lo = (p.q - p.big_k() as u32 - 1) as u16;
        let probe = received
            .iter()
            .find(|x| {
                x.len() == p.l && x.symbols()[..p.l1].iter().all(|&v| v >= detect_lo)
            })
            .ok_or(Error::DecodeFailure("detection window empty"))?;
        let mut digits = Vec::with_capacity(self.l2);
        for j in 0..self.l2 {
            let c = probe.symbol(p.l1 + j) as i64;
            // the unique x with K*x in [c - k+, c + k-]
            let x = (c - p.k_plus as i64 + big_k - 1).div_euclid(big_k).max(0);
            if big_k * x < c - p.k_plus as i64
                || big_k * x > c + p.k_minus as i64
                || x >= (p.q / p.big_k() as u32) as i64
            {
                return Err(Error::DecodeFailure("parity digit rounding failed"));
            }
            digits.push(x as u64);
        }
        let base = (p.q / p.big_k() as u32) as u64;
        let mut value = 0u64;
        for &d in &digits {
            value = value * base + d;
        }
        let nb = self.ca.redundancy();
        if value >> nb != 0 {
            return Err(Error::DecodeFailure("parity value out of range"));
        }
        let parity = Bits::from_uint_be(value, nb);

        // step 2: correct the q-ary address indicator
        let space = crate::seq::space_size(p.q, p.l1).unwrap() as usize;
        let mut cv = Bits::zeros(space);
        for x in received.iter().filter(|x| x.len() == p.l) {
            cv.set(seq_rank(&x.subword(0, p.l1)) as usize, true);
        }
        let corrected = self.ca.decode(&cv.concat(&parity))?;
        let cv = corrected.slice(0, space);
        if cv.weight() != p.m {
            return Err(Error::DecodeFailure("corrected address set has the wrong size"));
        }
        let all: Vec<Sequence> = cv
            .support()
            .into_iter()
            .map(|r| crate::seq::seq_unrank(p.q, p.l1, r as u128))
            .collect();
        let (hi_lo, hi_hi) = (p.q as u16 - 2 - p.k_plus, p.q as u16 - 1 - p.k_plus);
        let mut highs: Vec<Sequence> = all
            .iter()
            .filter(|a| a.symbols().iter().all(|&v| v == hi_lo || v == hi_hi))
            .cloned()
            .collect();
        let mut others: Vec<Sequence> =
            all.iter().filter(|a| !highs.contains(a)).cloned().collect();
        if highs.len() != p.s + 1 {
            return Err(Error::DecodeFailure("wrong number of high-window addresses"));
        }
        highs.sort_unstable_by_key(|w| Reverse(seq_rank(w)));
        others.sort_unstable_by_key(|w| Reverse(seq_rank(w)));
        let addrs: Vec<Sequence> = highs.iter().chain(others.iter()).cloned().collect();

        // step 3: per-address payloads, erasures where lost or ambiguous
        let mut word: Vec<Option<u64>> = Vec::with_capacity(p.m);
        for a in &addrs {
            let carriers: Vec<&Sequence> = received
                .iter()
                .filter(|x| x.len() == p.l && x.subword(0, p.l1) == *a)
                .collect();
            match carriers.as_slice() {
                [x] => word.push(Some(self.pack(&x.symbols()[p.l1..]))),
                _ => word.push(None),
            }
        }
        let symbols = self.rs.decode(&word, p.delta())?;

        // read the message components back
        let scaled = self.scaled_parity(&addrs)?;
        let mut head_syms = Vec::with_capacity(p.s + 1);
        let mut free_syms = Vec::new();
        for (i, &sym) in symbols.iter().enumerate() {
            let u = self.unpack(sym, p.l - p.l1);
            if i <= p.s {
                if u[..self.l2] != scaled[..] {
                    return Err(Error::DecodeFailure("scaled parity replica mismatch"));
                }
                head_syms.push(u[self.l2..].to_vec());
            } else {
                free_syms.push(u);
            }
        }
        let hi_ranks: Vec<usize> = {
            let mut idx: Vec<usize> = highs
                .iter()
                .map(|a| self.high_zone.binary_search_by(|c| seq_rank(c).cmp(&seq_rank(a))).unwrap())
                .collect();
            idx.sort_unstable();
            idx
        };
        let ot_ranks: Vec<usize> = {
            let mut idx: Vec<usize> = others
                .iter()
                .map(|a| {
                    self.others_zone
                        .binary_search_by(|c| seq_rank(c).cmp(&seq_rank(a)))
                        .map_err(|_| Error::DecodeFailure("address outside its zone"))
                })
                .collect::<Result<_>>()?;
            idx.sort_unstable();
            idx
        };
        Ok(LmMessage {
            high_rank: rank_combination(self.high_zone.len(), &hi_ranks),
            others_rank: rank_combination(self.others_zone.len(), &ot_ranks),
            head_syms,
            free_syms,
        })
    }
}

/// Redundancy-tuned parameter picker: L1 = 2 log_q M, enforcing the
/// log_q(2K) < 1/2 condition the redundancy bound needs.
pub fn lm_params_cor(
    q: u32,
    k_plus: u16,
    k_minus: u16,
    s: usize,
    t: usize,
    m: usize,
    l: usize,
) -> Result<LmParams> {
    let big_k = (k_plus + k_minus + 1) as u64;
    // log_q(2K) < 1/2  <=>  (2K)^2 < q
    if (2 * big_k).pow(2) >= q as u64 {
        return Err(Error::InvalidParams("needs (2K)^2 < q".into()));
    }
    let mut log_q_m = 0usize;
    let mut power = 1u64;
    while power < m as u64 {
        power *= q as u64;
        log_q_m += 1;
    }
    if power != m as u64 {
        return Err(Error::InvalidParams("M must be a power of q for this picker".into()));
    }
    let params = LmParams { q, k_plus, k_minus, s, t, m, l, l1: 2 * log_q_m };
    LmCode::new(params)?;
    Ok(params)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModWrapParams {
    pub p: u32,
    pub q: u32,
    pub k_plus: u16,
    pub k_minus: u16,
}

/// The mod-p wrapper: symbols split as x = chi + p*digit with the chi-sets
/// drawn from a substitution-correcting inner codec whose codewords have
/// pairwise distance >= 2*eps + 1.
#[derive(Debug, Clone)]
pub struct ModWrap {
    params: ModWrapParams,
    inner: Tcon,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModWrapMessage {
    pub inner: TconMessage,
    /// One digit row per inner sequence (in descending inner order), each
    /// digit below q/p.
    pub digits: Vec<Vec<u16>>,
}

impl ModWrap {
    pub fn new(params: ModWrapParams, inner: Tcon) -> Result<Self> {
        let ModWrapParams { p, q, k_plus, k_minus } = params;
        if p != 2 {
            return Err(Error::InvalidParams(
                "the inner substitution codec here is binary, so p = 2".into(),
            ));
        }
        if p < (k_plus + k_minus + 1) as u32 {
            return Err(Error::InvalidParams("needs p >= k+ + k- + 1".into()));
        }
        if q % p != 0 {
            return Err(Error::InvalidParams("needs p | q (exact size equality)".into()));
        }
        Ok(ModWrap { params, inner })
    }

    pub fn params(&self) -> &ModWrapParams {
        &self.params
    }

    pub fn inner(&self) -> &Tcon {
        &self.inner
    }

    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            s: 0,
            t: self.inner.params().t,
            eps: Eps::Bounded(self.inner.params().eps),
            kind: ErrorKind::LimitedMagnitude {
                k_plus: self.params.k_plus,
                k_minus: self.params.k_minus,
            },
        }
    }

    /// floor(q/p)^{ML} * |C|; exact because p | q.
    pub fn code_size(&self) -> BigUint {
        let inner_p = self.inner.params();
        let digits = BigUint::from(self.params.q / self.params.p)
            .pow((inner_p.m * inner_p.l) as u32);
        digits * self.inner.code_size()
    }

    pub fn digit_range(&self) -> u16 {
        (self.params.q / self.params.p) as u16
    }

    pub fn encode(&self, msg: &ModWrapMessage) -> Result<SequenceSet> {
        let inner_p = *self.inner.params();
        if msg.digits.len() != inner_p.m
            || msg
                .digits
                .iter()
                .any(|row| row.len() != inner_p.l || row.iter().any(|&d| d >= self.digit_range()))
        {
            return Err(Error::OutOfRange(alloc::format!(
                "digits must be {} rows of {} values below {}",
                inner_p.m,
                inner_p.l,
                self.digit_range()
            )));
        }
        let chi = self.inner.encode(&msg.inner)?;
        let p = self.params.p as u16;
        let elems: Vec<Sequence> = chi
            .elems()
            .iter()
            .zip(msg.digits.iter())
            .map(|(c, row)| {
                let symbols: Vec<u16> =
                    c.symbols().iter().zip(row.iter()).map(|(&x, &d)| x + p * d).collect();
                Sequence::new(self.params.q, symbols)
            })
            .collect::<Result<_>>()?;
        SequenceSet::codeword(self.params.q, inner_p.l, elems)
    }

    pub fn decode(&self, received: &SequenceSet) -> Result<ModWrapMessage> {
        let inner_p = *self.inner.params();
        let p = self.params.p as u16;
        if received.len() != inner_p.m || received.uniform_len() != Some(inner_p.l) {
            return Err(Error::DecodeFailure("LM channel preserves the set shape"));
        }
        let psi: Vec<Sequence> = received
            .iter()
            .map(|y| {
                Sequence::new(2, y.symbols().iter().map(|&v| v % p).collect()).expect("mod p")
            })
            .collect();
        let projected = SequenceSet::received(2, psi.clone())?;
        if projected.len() != inner_p.m {
            return Err(Error::DecodeFailure("mod-p projections collide"));
        }
        let (inner_msg, chi_set) = self.inner.decode_full(&projected)?;

        // match each decoded inner sequence to its unique nearby projection
        let eps = inner_p.eps;
        let mut digits = Vec::with_capacity(inner_p.m);
        for chi in chi_set.elems() {
            let mut near = received
                .iter()
                .zip(psi.iter())
                .filter(|(_, proj)| proj.hamming_distance(chi) <= eps);
            let (y, proj) =
                near.next().ok_or(Error::DecodeFailure("no projection near a codeword"))?;
            if near.next().is_some() {
                return Err(Error::DecodeFailure("two projections near one codeword"));
            }
            let mut row = Vec::with_capacity(inner_p.l);
            for i in 0..inner_p.l {
                let err = (proj.symbol(i) + p - chi.symbol(i)) % p;
                // congruent lift into [-k-, k+]
                let lift: i32 = if err as u32 <= self.params.k_plus as u32 {
                    err as i32
                } else {
                    err as i32 - p as i32
                };
                let x = y.symbol(i) as i32 - lift;
                if x < 0 || x >= self.params.q as i32 || (x - chi.symbol(i) as i32) % p as i32 != 0
                {
                    return Err(Error::DecodeFailure("lifted symbol out of range"));
                }
                row.push(((x - chi.symbol(i) as i32) / p as i32) as u16);
            }
            digits.push(row);
        }
        Ok(ModWrapMessage { inner: inner_msg, digits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel;
    use crate::noloss::TconParams;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lm_toy() -> LmCode {
        LmCode::new(LmParams {
            q: 8,
            k_plus: 1,
            k_minus: 0,
            s: 1,
            t: 1,
            m: 5,
            l: 16,
            l1: 2,
        })
        .unwrap()
    }

    fn random_message(code: &LmCode, rng: &mut ChaCha8Rng) -> LmMessage {
        let p = code.params();
        LmMessage {
            high_rank: crate::arith::rand_below(
                rng,
                &binomial(1 << p.l1, p.s as u64 + 1),
            ),
            others_rank: crate::arith::rand_below(
                rng,
                &binomial(code.others_count() as u64, (p.m - p.s - 1) as u64),
            ),
            head_syms: (0..p.s + 1)
                .map(|_| (0..code.head_width()).map(|_| rng.gen_range(0..p.q) as u16).collect())
                .collect(),
            free_syms: (0..p.m - p.delta() - p.s - 1)
                .map(|_| (0..p.l - p.l1).map(|_| rng.gen_range(0..p.q) as u16).collect())
                .collect(),
        }
    }

    #[test]
    fn lm_shapes_and_zones() {
        let code = lm_toy();
        assert_eq!(code.l2(), 11); // ceil(21 / log2 4)
        assert_eq!(code.head_width(), 3);
        assert_eq!(code.others_count(), 64 - 16); // q^2 minus [4,7]^2
        // windows, enumerated over the alphabet: high-zone symbols stay
        // inside the detection zone under admissible shifts, and a symbol
        // outside the forbidden zone can never enter it
        for a in 0..8u16 {
            let in_high = a == 5 || a == 6;
            let outside_forbidden = a < 4;
            for e in 0..=1u16 {
                if a + e >= 8 {
                    continue;
                }
                if in_high {
                    assert!((5..=7).contains(&(a + e)));
                }
                if outside_forbidden {
                    assert!(!(5..=7).contains(&(a + e)));
                }
            }
        }
    }

    #[test]
    fn lm_q4_is_degenerate() {
        // with q = 4, k+ = 1: the forbidden zone is the whole alphabet
        let err = LmCode::new(LmParams {
            q: 4,
            k_plus: 1,
            k_minus: 0,
            s: 0,
            t: 1,
            m: 2,
            l: 16,
            l1: 2,
        });
        assert!(err.is_err());
    }

    #[test]
    fn lm_round_trip_uncorrupted() {
        let code = lm_toy();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let msg = random_message(&code, &mut rng);
            let set = code.encode(&msg).unwrap();
            assert_eq!(set.len(), 5);
            assert_eq!(code.decode(&set).unwrap(), msg);
        }
    }

    #[test]
    fn lm_rounding_recovers_every_scaled_digit() {
        // c = K*x + e with e in [-k-, k+] maps back to x, for all x and e
        let (big_k, k_plus, k_minus, q) = (2i64, 1i64, 0i64, 8i64);
        for x in 0..q / big_k {
            for e in -k_minus..=k_plus {
                let c = big_k * x + e;
                if !(0..q).contains(&c) {
                    continue;
                }
                let rounded = (c - k_plus + big_k - 1).div_euclid(big_k).max(0);
                assert_eq!(rounded, x, "c = {c}");
            }
        }
    }

    #[test]
    fn lm_randomized_channel_sweep() {
        let code = lm_toy();
        let spec = code.params().channel_spec();
        assert_eq!(spec.format(), "1:1:*:LM:1:0");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let msg = random_message(&code, &mut rng);
        let set = code.encode(&msg).unwrap();
        for seed in 0..2_000 {
            let received = channel::corrupt(&set, &spec, seed).unwrap();
            assert_eq!(code.decode(&received).unwrap(), msg, "seed {seed}");
        }
    }

    #[test]
    fn lm_size_formula_counts_components() {
        let code = lm_toy();
        // highs: C(4,2) = 6; others: C(48, M-s-1) = C(48,3); heads: 8^(3*2)
        let expect = BigUint::from(6u32)
            * binomial(48, 3)
            * BigUint::from(8u32).pow(6);
        assert_eq!(code.code_size(), expect);
        // sampled injectivity
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut seen = alloc::collections::BTreeSet::new();
        for _ in 0..200 {
            let msg = random_message(&code, &mut rng);
            assert!(seen.insert(code.encode(&msg).unwrap()));
        }
    }

    fn wrap_toy() -> ModWrap {
        let inner = Tcon::new(TconParams { m: 4, l: 25, l_prime: 6, t: 1, eps: 1 }, 1 << 20).unwrap();
        ModWrap::new(ModWrapParams { p: 2, q: 4, k_plus: 1, k_minus: 0 }, inner).unwrap()
    }

    #[test]
    fn modwrap_exhaustive_lm_ball() {
        let code = wrap_toy();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let msg = ModWrapMessage {
            inner: TconMessage {
                address_index: rng.gen_range(0..code.inner().address_count()),
                u1_free: Bits::zeros(0),
                syndrome_syms: alloc::vec![rng.gen_range(0..32)],
                coset_free: (0..3)
                    .map(|_| Bits::from_bools((0..14).map(|_| rng.gen()).collect()))
                    .collect(),
            },
            digits: (0..4).map(|_| (0..25).map(|_| rng.gen_range(0..2)).collect()).collect(),
        };
        let set = code.encode(&msg).unwrap();
        assert_eq!(set.q(), 4);
        let spec = code.channel_spec();
        assert_eq!(spec.format(), "0:1:1:LM:1:0");
        let ball = channel::error_ball(&set, &spec, 1 << 22).unwrap();
        assert!(ball.members.len() > 50);
        for member in &ball.members {
            assert_eq!(code.decode(member).unwrap(), msg);
        }
    }

    #[test]
    fn modwrap_size_equality() {
        let code = wrap_toy();
        let inner_size = code.inner().code_size();
        let expect = BigUint::from(2u32).pow(4 * 25) * inner_size;
        assert_eq!(code.code_size(), expect);
    }

    #[test]
    fn modwrap_rejects_bad_parameters() {
        let inner = Tcon::new(TconParams { m: 4, l: 25, l_prime: 6, t: 1, eps: 1 }, 1 << 20).unwrap();
        // p does not divide q
        assert!(ModWrap::new(ModWrapParams { p: 2, q: 5, k_plus: 1, k_minus: 0 }, inner.clone())
            .is_err());
        // p below k+ + k- + 1
        assert!(ModWrap::new(ModWrapParams { p: 2, q: 4, k_plus: 1, k_minus: 1 }, inner).is_err());
    }

    #[test]
    fn lm_cor_picker() {
        // M = q^1, L1 = 2: the toy shape under the picker's extra condition
        assert!(lm_params_cor(8, 1, 0, 1, 1, 8, 16).is_err()); // (2K)^2 = 16 >= 8
        let p = lm_params_cor(32, 1, 0, 1, 1, 32, 13);
        match p {
            Ok(p) => {
                assert_eq!(p.l1, 2);
                LmCode::new(p).unwrap();
            }
            Err(e) => panic!("picker failed: {e}"),
        }
    }
}
