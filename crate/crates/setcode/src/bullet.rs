//! The address-indexed codec for channels that lose `s` sequences and
//! arbitrarily corrupt `t` of them (the `(s,t,•)` regime, edit or deletion
//! flavor).
//!
//! A codeword is `M` sequences `(a_i, u_i)`: a per-codeword address set `A`
//! of `L1`-bit prefixes, its BCH parity replicated in the first `mu` payloads
//! behind an all-ones marker, the remaining message payloads marked not-all-
//! ones, and an MDS code across all payloads. Decoding recovers the BCH
//! parity by majority, the address set by BCH, and the payloads by
//! Reed-Solomon error/erasure decoding.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{bch_systematic, rs_code, BchCode, RsCode};
use crate::arith::binomial;
use crate::bits::Bits;
use crate::channel::{ChannelSpec, Eps, ErrorKind};
use crate::seq::{char_vector, seq_unrank, sort_set, subset_rank, subset_unrank, OrderingConvention, Sequence, SequenceSet};
use crate::{Error, Result};

/// Which corruption flavor the instance is built to survive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BulletKind {
    /// Arbitrary edits (`L`): needs s + 2t <= delta, mu >= delta + s + 2t + 1.
    Edit,
    /// Deletions (`D`): needs s + t <= delta, mu >= delta + s + t + 1.
    Deletion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletParams {
    pub m: usize,
    pub l: usize,
    pub l1: usize,
    pub l2: usize,
    pub mu: usize,
    pub delta: usize,
    pub s: usize,
    pub t: usize,
    pub kind: BulletKind,
}

impl BulletParams {
    /// The channel this instance is declared to correct.
    pub fn channel_spec(&self) -> ChannelSpec {
        let kind = match self.kind {
            BulletKind::Edit => ErrorKind::Edit,
            BulletKind::Deletion => ErrorKind::Deletion,
        };
        ChannelSpec { s: self.s, t: self.t, eps: Eps::Unbounded, kind }
    }
}

/// A constructed instance: parameters plus the two classical codes.
#[derive(Debug, Clone)]
pub struct Bullet {
    params: BulletParams,
    ca: BchCode,
    rs: RsCode,
}

/// Message space of one instance; the mixed-radix bijection onto codewords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BulletMessage {
    /// Which address set, below C(2^L1, M).
    pub address_rank: BigUint,
    /// Free bits of the first mu payloads, each `L - L1 - L2 - delta(L1+1)` wide.
    pub head: Vec<Bits>,
    /// Values of payloads mu..M-delta, each below `(2^L2 - 1) * 2^(L-L1-L2)`.
    pub body: Vec<u64>,
}

impl Bullet {
    pub fn new(params: BulletParams) -> Result<Self> {
        let BulletParams { m, l, l1, l2, mu, delta, s, t, kind } = params;
        if l1 == 0 || l1 > 20 || l <= l1 {
            return Err(Error::InvalidParams("need 0 < L1 < L (desk scale L1 <= 20)".into()));
        }
        let w = l - l1;
        if w > 63 {
            return Err(Error::InvalidParams("payload width L - L1 exceeds 63 bits".into()));
        }
        if m > 1 << l1 {
            return Err(Error::InvalidParams("more sequences than addresses: M > 2^L1".into()));
        }
        if l2 == 0 || l1 + l2 + delta * (l1 + 1) > l {
            return Err(Error::InvalidParams(
                "marker and parity must fit: L1 + L2 + delta(L1+1) <= L".into(),
            ));
        }
        if m < delta || m - delta < mu {
            return Err(Error::InvalidParams("need M - delta >= mu".into()));
        }
        let (err_budget, mu_min) = match kind {
            BulletKind::Edit => (s + 2 * t, delta + s + 2 * t + 1),
            BulletKind::Deletion => (s + t, delta + s + t + 1),
        };
        if err_budget > delta {
            return Err(Error::InvalidParams(alloc::format!(
                "delta = {delta} cannot absorb the channel (needs >= {err_budget})"
            )));
        }
        if mu < mu_min {
            return Err(Error::InvalidParams(alloc::format!(
                "majority needs mu >= {mu_min}, got {mu}"
            )));
        }
        let ca = bch_systematic(l1 as u32, delta)?;
        debug_assert_eq!(ca.redundancy(), delta * (l1 + 1));
        let rs = rs_code(crate::algebra::Gf2m::new(w as u32), m, m - delta)?;
        Ok(Bullet { params, ca, rs })
    }

    pub fn params(&self) -> &BulletParams {
        &self.params
    }

    fn payload_width(&self) -> usize {
        self.params.l - self.params.l1
    }

    /// Free bits per replicated payload.
    pub fn head_width(&self) -> usize {
        self.payload_width() - self.params.l2 - self.params.delta * (self.params.l1 + 1)
    }

    /// Admissible values per body payload: (2^L2 - 1) * 2^(W - L2).
    pub fn body_range(&self) -> u64 {
        let w = self.payload_width();
        ((1u64 << self.params.l2) - 1) << (w - self.params.l2)
    }

    pub fn address_space(&self) -> BigUint {
        binomial(1u64 << self.params.l1, self.params.m as u64)
    }

    /// Exact code cardinality (the closed-form size).
    pub fn code_size(&self) -> BigUint {
        let p = &self.params;
        let head = BigUint::one() << (self.head_width() * p.mu);
        let body = BigUint::from(self.body_range()).pow((p.m - p.delta - p.mu) as u32);
        self.address_space() * head * body
    }

    /// C(2^L, M), the unconstrained space of M-sets.
    pub fn total_space(&self) -> BigUint {
        crate::arith::binomial_pow2(self.params.l as u64, self.params.m as u64)
    }

    pub fn zero_message(&self) -> BulletMessage {
        let p = &self.params;
        BulletMessage {
            address_rank: BigUint::ZERO,
            head: alloc::vec![Bits::zeros(self.head_width()); p.mu],
            body: alloc::vec![0; p.m - p.delta - p.mu],
        }
    }

    fn check_message(&self, msg: &BulletMessage) -> Result<()> {
        let p = &self.params;
        if msg.address_rank >= self.address_space() {
            return Err(Error::OutOfRange(alloc::format!(
                "address rank must be below {}",
                self.address_space()
            )));
        }
        if msg.head.len() != p.mu || msg.head.iter().any(|b| b.len() != self.head_width()) {
            return Err(Error::OutOfRange(alloc::format!(
                "head must be {} strings of {} bits",
                p.mu,
                self.head_width()
            )));
        }
        if msg.body.len() != p.m - p.delta - p.mu
            || msg.body.iter().any(|&v| v >= self.body_range())
        {
            return Err(Error::OutOfRange(alloc::format!(
                "body must be {} values below {}",
                p.m - p.delta - p.mu,
                self.body_range()
            )));
        }
        Ok(())
    }

    pub fn encode(&self, msg: &BulletMessage) -> Result<SequenceSet> {
        self.check_message(msg)?;
        let p = &self.params;
        let w = self.payload_width();
        let addresses = subset_unrank(&msg.address_rank, 2, p.l1, p.m)?;
        let addrs = sort_set(&addresses, OrderingConvention::descending());
        let enc_a = self.ca.encode(&char_vector(&addresses)?);

        let mut payloads: Vec<Bits> = Vec::with_capacity(p.m);
        for i in 0..p.mu {
            payloads.push(Bits::ones(p.l2).concat(&enc_a).concat(&msg.head[i]));
        }
        for (i, &v) in msg.body.iter().enumerate() {
            let hi = v >> (w - p.l2);
            let lo = v & ((1u64 << (w - p.l2)) - 1);
            debug_assert!(hi < (1 << p.l2) - 1);
            let _ = i;
            payloads.push(Bits::from_uint_be(hi, p.l2).concat(&Bits::from_uint_be(lo, w - p.l2)));
        }
        let mut symbols: Vec<u64> = payloads.iter().map(|b| b.to_uint_be()).collect();
        symbols = self.rs.encode(&symbols);
        let elems: Vec<Sequence> = addrs
            .iter()
            .zip(symbols.iter())
            .map(|(a, &sym)| {
                a.concat(&Sequence::from_bits(&Bits::from_uint_be(sym, w)))
            })
            .collect();
        SequenceSet::codeword(2, p.l, elems)
    }

    pub fn decode(&self, received: &SequenceSet) -> Result<BulletMessage> {
        let p = &self.params;
        let w = self.payload_width();
        let tag_len = p.delta * (p.l1 + 1);
        let full: Vec<&Sequence> = received.iter().filter(|x| x.len() == p.l).collect();

        // step 1: majority over the replicated BCH parity
        let mut votes: BTreeMap<Bits, usize> = BTreeMap::new();
        for x in &full {
            let u = x.subword(p.l1, p.l).to_bits();
            if u.slice(0, p.l2).weight() == p.l2 {
                *votes.entry(u.slice(p.l2, p.l2 + tag_len)).or_insert(0) += 1;
            }
        }
        let best = votes.values().max().copied().unwrap_or(0);
        if best == 0 {
            return Err(Error::DecodeFailure("no replicated parity marker present"));
        }
        let mut leaders = votes.iter().filter(|(_, &c)| c == best).map(|(b, _)| b.clone());
        let enc_a = leaders.next().unwrap();
        if leaders.next().is_some() {
            return Err(Error::DecodeFailure("majority tie on the address parity"));
        }

        // step 2: BCH-correct the received address indicator
        let mut cv = Bits::zeros(1 << p.l1);
        for x in &full {
            cv.set(crate::seq::seq_rank(&x.subword(0, p.l1)) as usize, true);
        }
        let corrected = self.ca.decode(&cv.concat(&enc_a))?;
        let cv = corrected.slice(0, 1 << p.l1);
        if cv.weight() != p.m {
            return Err(Error::DecodeFailure("corrected address set has the wrong size"));
        }
        let mut addrs: Vec<Sequence> =
            cv.support().into_iter().map(|r| seq_unrank(2, p.l1, r as u128)).collect();
        addrs.reverse(); // ascending rank -> descending order

        // step 3: per-address payload assembly, then RS error/erasure decode
        let mut word: Vec<Option<u64>> = Vec::with_capacity(p.m);
        for a in &addrs {
            let carriers: Vec<&&Sequence> =
                full.iter().filter(|x| x.subword(0, p.l1) == *a).collect();
            match carriers.as_slice() {
                [x] => word.push(Some(x.subword(p.l1, p.l).to_bits().to_uint_be())),
                _ => word.push(None),
            }
        }
        let symbols = self.rs.decode(&word, p.delta)?;

        // read the message back out of the structured payloads
        let addresses = SequenceSet::codeword(2, p.l1, addrs)?;
        let address_rank = subset_rank(&addresses)?;
        let mut head = Vec::with_capacity(p.mu);
        let mut body = Vec::with_capacity(p.m - p.delta - p.mu);
        for (i, &sym) in symbols.iter().enumerate() {
            let u = Bits::from_uint_be(sym, w);
            if i < p.mu {
                if u.slice(0, p.l2).weight() != p.l2 || u.slice(p.l2, p.l2 + tag_len) != enc_a {
                    return Err(Error::DecodeFailure("replicated payload lost its structure"));
                }
                head.push(u.slice(p.l2 + tag_len, w));
            } else {
                let hi = u.slice(0, p.l2).to_uint_be();
                if hi == (1 << p.l2) - 1 {
                    return Err(Error::DecodeFailure("body payload carries the marker prefix"));
                }
                body.push((hi << (w - p.l2)) | u.slice(p.l2, w).to_uint_be());
            }
        }
        Ok(BulletMessage { address_rank, head, body })
    }

    /// Re-verifies the defining conditions of a set claimed to be a codeword,
    /// clause by clause, using the BCH root test rather than the encoder.
    pub fn check_conditions(&self, set: &SequenceSet) -> Result<()> {
        let p = &self.params;
        if set.len() != p.m || set.uniform_len() != Some(p.l) || set.q() != 2 {
            return Err(Error::InvalidParams("wrong shape for this instance".into()));
        }
        let elems = sort_set(set, OrderingConvention::descending());
        let addrs: Vec<Sequence> = elems.iter().map(|x| x.subword(0, p.l1)).collect();
        let mut distinct = addrs.clone();
        distinct.dedup();
        if distinct.len() != p.m {
            return Err(Error::InvalidParams("condition (1): addresses not distinct".into()));
        }
        // descending full-sequence order must equal descending address order
        for pair in addrs.windows(2) {
            if crate::seq::seq_rank(&pair[0]) <= crate::seq::seq_rank(&pair[1]) {
                return Err(Error::InvalidParams("address order broken".into()));
            }
        }
        let payloads: Vec<Bits> =
            elems.iter().map(|x| x.subword(p.l1, p.l).to_bits()).collect();
        let tag_len = p.delta * (p.l1 + 1);
        let tag = payloads[0].slice(p.l2, p.l2 + tag_len);
        for (i, u) in payloads.iter().enumerate() {
            if i < p.mu {
                if u.slice(0, p.l2).weight() != p.l2 {
                    return Err(Error::InvalidParams(alloc::format!(
                        "condition (2a): payload {i} lacks the all-ones marker"
                    )));
                }
                if u.slice(p.l2, p.l2 + tag_len) != tag {
                    return Err(Error::InvalidParams("condition (2a): parity replica differs".into()));
                }
            } else if i < p.m - p.delta && u.slice(0, p.l2).weight() == p.l2 {
                return Err(Error::InvalidParams(alloc::format!(
                    "condition (2b): payload {i} must not carry the marker"
                )));
            }
        }
        let addresses = SequenceSet::codeword(2, p.l1, addrs)?;
        let ca_word = char_vector(&addresses)?.concat(&tag);
        if !self.ca.is_codeword_by_roots(&ca_word) {
            return Err(Error::InvalidParams("condition (2a): (1(A), enc(A)) not in C_A".into()));
        }
        let symbols: Vec<u64> = payloads.iter().map(|b| b.to_uint_be()).collect();
        if !self.rs.is_codeword(&symbols) {
            return Err(Error::InvalidParams("condition (3): payload vector not in the MDS code".into()));
        }
        Ok(())
    }
}

/// The redundancy-tuned parameter choice: mu = 2*delta + 1,
/// L1 = 2*log M, L2 = log M. Requires M a power of two, M >= 3*delta + 1 and
/// L >= (2*delta + 3)*log M + delta.
pub fn bullet_params_cor1(s: usize, t: usize, m: usize, l: usize, kind: BulletKind) -> Result<BulletParams> {
    if !m.is_power_of_two() || m < 2 {
        return Err(Error::InvalidParams("M must be a power of two".into()));
    }
    let log_m = m.trailing_zeros() as usize;
    let delta = match kind {
        BulletKind::Edit => s + 2 * t,
        BulletKind::Deletion => s + t,
    };
    if m < 3 * delta + 1 {
        return Err(Error::InvalidParams(alloc::format!("needs M >= {}", 3 * delta + 1)));
    }
    if l < (2 * delta + 3) * log_m + delta {
        return Err(Error::InvalidParams(alloc::format!(
            "needs L >= {}",
            (2 * delta + 3) * log_m + delta
        )));
    }
    Ok(BulletParams {
        m,
        l,
        l1: 2 * log_m,
        l2: log_m,
        mu: 2 * delta + 1,
        delta,
        s,
        t,
        kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel;
    use alloc::collections::BTreeSet;
    use num_traits::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> Bullet {
        // smallest deletion-flavor instance: delta=1, mu=3
        Bullet::new(BulletParams {
            m: 4,
            l: 8,
            l1: 3,
            l2: 1,
            mu: 3,
            delta: 1,
            s: 0,
            t: 1,
            kind: BulletKind::Deletion,
        })
        .unwrap()
    }

    #[test]
    fn invariants_rejected() {
        // edit flavor at M=4 cannot satisfy mu >= delta + s + 2t + 1 <= M - delta
        let p = BulletParams {
            m: 4,
            l: 8,
            l1: 3,
            l2: 1,
            mu: 3,
            delta: 2,
            s: 0,
            t: 1,
            kind: BulletKind::Edit,
        };
        assert!(Bullet::new(p).is_err());
        let p2 = BulletParams { l2: 2, ..toy().params } ; // 3+2+4 > 8
        assert!(Bullet::new(p2).is_err());
    }

    #[test]
    fn zero_message_round_trip_and_conditions() {
        let code = toy();
        let set = code.encode(&code.zero_message()).unwrap();
        assert_eq!(set.len(), 4);
        code.check_conditions(&set).unwrap();
        assert_eq!(code.decode(&set).unwrap(), code.zero_message());
    }

    #[test]
    fn enumerated_size_matches_formula_exactly() {
        let code = toy();
        // head width: 8-3-1-4 = 0, body payloads: none; size = C(8,4) = 70
        assert_eq!(code.head_width(), 0);
        assert_eq!(code.code_size().to_u64(), Some(70));
        let mut seen = BTreeSet::new();
        for rank in 0..70u32 {
            let msg = BulletMessage {
                address_rank: rank.into(),
                head: alloc::vec![Bits::zeros(0); 3],
                body: alloc::vec![],
            };
            let set = code.encode(&msg).unwrap();
            code.check_conditions(&set).unwrap();
            assert_eq!(code.decode(&set).unwrap(), msg);
            seen.insert(set);
        }
        assert_eq!(seen.len(), 70, "encode must be injective");
        // out-of-range rank rejected
        let bad = BulletMessage {
            address_rank: 70u32.into(),
            head: alloc::vec![Bits::zeros(0); 3],
            body: alloc::vec![],
        };
        assert!(matches!(code.encode(&bad), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn enumerated_size_with_body_payloads() {
        // M=8, L1=3 forces the single address set; size = body_range^4 = 16^4
        let code = Bullet::new(BulletParams {
            m: 8,
            l: 8,
            l1: 3,
            l2: 1,
            mu: 3,
            delta: 1,
            s: 0,
            t: 1,
            kind: BulletKind::Deletion,
        })
        .unwrap();
        assert_eq!(code.body_range(), 16);
        assert_eq!(code.code_size().to_u64(), Some(65536));
        let mut seen = BTreeSet::new();
        for v in 0..65536u64 {
            let body: Vec<u64> = (0..4).map(|i| (v >> (4 * i)) & 0xF).collect();
            let msg = BulletMessage {
                address_rank: BigUint::ZERO,
                head: alloc::vec![Bits::zeros(0); 3],
                body,
            };
            let set = code.encode(&msg).unwrap();
            assert_eq!(code.decode(&set).unwrap(), msg);
            seen.insert(set);
        }
        assert_eq!(seen.len(), 65536);
    }

    #[test]
    fn exhaustive_deletion_ball_round_trip() {
        let code = toy();
        let msg = BulletMessage {
            address_rank: 17u32.into(),
            head: alloc::vec![Bits::zeros(0); 3],
            body: alloc::vec![],
        };
        let set = code.encode(&msg).unwrap();
        let spec = code.params().channel_spec();
        let ball = channel::error_ball(&set, &spec, 1 << 24).unwrap();
        assert!(ball.members.len() > 100);
        for member in &ball.members {
            assert_eq!(code.decode(member).unwrap(), msg, "failed on {member:?}");
        }
    }

    #[test]
    fn randomized_loss_plus_corruption_round_trip() {
        // s=1, t=1 deletion flavor: delta=2, mu=5, M=8
        let code = Bullet::new(BulletParams {
            m: 8,
            l: 23,
            l1: 6,
            l2: 3,
            mu: 5,
            delta: 2,
            s: 1,
            t: 1,
            kind: BulletKind::Deletion,
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let msg = BulletMessage {
            address_rank: crate::arith::rand_below(&mut rng, &code.address_space()),
            head: (0..5)
                .map(|_| Bits::from_bools((0..code.head_width()).map(|_| rng.gen()).collect()))
                .collect(),
            body: (0..1).map(|_| rng.gen_range(0..code.body_range())).collect(),
        };
        let set = code.encode(&msg).unwrap();
        code.check_conditions(&set).unwrap();
        let spec = code.params().channel_spec();
        for seed in 0..10_000 {
            let received = channel::corrupt(&set, &spec, seed).unwrap();
            assert_eq!(code.decode(&received).unwrap(), msg, "seed {seed}");
        }
    }

    #[test]
    fn cor1_parameter_picker() {
        let p = bullet_params_cor1(0, 1, 8, 16, BulletKind::Deletion).unwrap();
        assert_eq!((p.delta, p.mu, p.l1, p.l2), (1, 3, 6, 3));
        Bullet::new(p).unwrap();
        // delta=1 -> mu=3 always
        assert!(bullet_params_cor1(0, 1, 8, 14, BulletKind::Deletion).is_err()); // L too short
        assert!(bullet_params_cor1(0, 1, 3, 30, BulletKind::Deletion).is_err()); // M below 3delta+1 and not a power of two
    }
}
