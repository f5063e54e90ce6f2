//! Codes for channels with no sequence loss.
//!
//! Two families: the hash-sum code (all sets whose elementwise deletion-hash
//! XOR equals a fixed target; corrects deletions confined to one sequence),
//! and the four-stage syndrome construction against `t` sequences with up to
//! `eps` substitutions each.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{bch_systematic, bch_with_total_len, enumerate_address_sets, rs_code, BchCode, Gf2m, RsCode};
use crate::arith::binomial;
use crate::bits::Bits;
use crate::channel::{ChannelSpec, Eps, ErrorKind};
use crate::delhash::{bf_hash, DeletionHash};
use crate::seq::{char_vector, seq_rank, seq_unrank, Sequence, SequenceSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashSumParams {
    pub m: usize,
    pub l: usize,
    pub eps: usize,
    /// The target XOR value, within the hash width.
    pub a: u64,
}

/// The code `{ S : XOR of Hash_eps over S equals a }`, a
/// `(0,1,eps)`-deletion-correcting code for every target `a`.
#[derive(Debug, Clone)]
pub struct HashSum {
    params: HashSumParams,
    hash: DeletionHash,
}

impl HashSum {
    pub fn new(params: HashSumParams) -> Result<Self> {
        let hash =
            if params.eps == 1 { DeletionHash::vt(params.l) } else { bf_hash(params.eps, params.l)? };
        Self::with_hash(params, hash)
    }

    /// Builds the code around an already-constructed (possibly cached) hash.
    pub fn with_hash(params: HashSumParams, hash: DeletionHash) -> Result<Self> {
        let HashSumParams { m, l, eps, a } = params;
        if m < 1 || l < 1 {
            return Err(Error::InvalidParams("need M >= 1 and L >= 1".into()));
        }
        if hash.n() != l || hash.eps() != eps {
            return Err(Error::InvalidParams("hash instance does not match the parameters".into()));
        }
        if hash.h() < 64 && a >= 1 << hash.h() {
            return Err(Error::InvalidParams(alloc::format!(
                "target a must fit in the hash width {} bits",
                hash.h()
            )));
        }
        Ok(HashSum { params, hash })
    }

    pub fn params(&self) -> &HashSumParams {
        &self.params
    }

    pub fn hash(&self) -> &DeletionHash {
        &self.hash
    }

    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            s: 0,
            t: 1,
            eps: Eps::Bounded(self.params.eps),
            kind: ErrorKind::Deletion,
        }
    }

    fn sum_of(&self, set: &SequenceSet) -> u64 {
        set.iter().fold(0u64, |acc, x| acc ^ self.hash.hash(&x.to_bits()))
    }

    /// True iff the set belongs to this code (XOR of hashes equals `a`).
    pub fn membership(&self, set: &SequenceSet) -> bool {
        set.len() == self.params.m
            && set.uniform_len() == Some(self.params.l)
            && self.sum_of(set) == self.params.a
    }

    /// Recovers the stored set from an output with deletions confined to a
    /// single sequence.
    pub fn decode(&self, received: &SequenceSet) -> Result<SequenceSet> {
        let l = self.params.l;
        let mut shorts = received.iter().filter(|x| x.len() < l);
        let short = shorts.next();
        if shorts.next().is_some() {
            return Err(Error::DecodeFailure("more than one shortened sequence"));
        }
        match short {
            None => {
                if received.len() != self.params.m {
                    return Err(Error::DecodeFailure("sequences missing without a deletion trace"));
                }
                Ok(received.clone())
            }
            Some(short) => {
                let mut target = self.params.a;
                for x in received.iter().filter(|x| x.len() == l) {
                    target ^= self.hash.hash(&x.to_bits());
                }
                let restored = self.hash.decode_lost(&short.to_bits(), target)?;
                let out = received.replace(short, Some(Sequence::from_bits(&restored)));
                if out.len() != self.params.m {
                    return Err(Error::DecodeFailure("restored sequence collides"));
                }
                Ok(out)
            }
        }
    }

    /// Visits every codeword of the class in canonical subset order.
    pub fn for_each_member(
        &self,
        budget: u128,
        mut visit: impl FnMut(&SequenceSet) -> Result<()>,
    ) -> Result<()> {
        let (m, l) = (self.params.m, self.params.l);
        let space = 1usize << l;
        let total = crate::arith::binomial_u128(space as u64, m as u64);
        if total > budget {
            return Err(Error::BudgetExceeded { needed: total, budget });
        }
        let hashes: Vec<u64> =
            (0..space).map(|r| self.hash.hash(&Bits::from_uint_be(r as u64, l))).collect();
        let mut support: Vec<usize> = (0..m).collect();
        loop {
            let sum = support.iter().fold(0u64, |acc, &i| acc ^ hashes[i]);
            if sum == self.params.a {
                let elems: Vec<Sequence> =
                    support.iter().map(|&r| seq_unrank(2, l, r as u128)).collect();
                visit(&SequenceSet::codeword(2, l, elems)?)?;
            }
            let mut i = m;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                if support[i] < space - (m - i) {
                    support[i] += 1;
                    for j in i + 1..m {
                        support[j] = support[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Desk-scale encoder: the index-th codeword of the class in canonical
    /// order. Enumeration-based; no efficient encoder is known.
    pub fn encode_by_index(&self, index: &BigUint, budget: u128) -> Result<SequenceSet> {
        let mut count = BigUint::ZERO;
        let mut found = None;
        let res = self.for_each_member(budget, |set| {
            if count == *index {
                found = Some(set.clone());
                return Err(Error::DecodeFailure("stop"));
            }
            count += 1u32;
            Ok(())
        });
        match (found, res) {
            (Some(set), _) => Ok(set),
            (None, Err(e @ Error::BudgetExceeded { .. })) => Err(e),
            (None, _) => Err(Error::OutOfRange(alloc::format!(
                "class holds only {count} codewords"
            ))),
        }
    }
}

/// Census of all hash-sum classes: how the M-subsets of `{0,1}^L` distribute
/// over the 2^h targets.
#[derive(Debug, Clone)]
pub struct Census {
    pub counts: Vec<u64>,
    pub best_a: u64,
    pub best_count: u64,
    pub total: BigUint,
}

pub fn hashsum_census(m: usize, l: usize, eps: usize, budget: u128) -> Result<Census> {
    hashsum_census_for(&HashSum::new(HashSumParams { m, l, eps, a: 0 })?, budget)
}

/// Census over the classes of an already-built instance (its target `a` is
/// irrelevant; all classes are tallied).
pub fn hashsum_census_for(probe: &HashSum, budget: u128) -> Result<Census> {
    let (m, l) = (probe.params.m, probe.params.l);
    let space = 1usize << l;
    let total_u = crate::arith::binomial_u128(space as u64, m as u64);
    if total_u > budget {
        return Err(Error::BudgetExceeded { needed: total_u, budget });
    }
    let hashes: Vec<u64> =
        (0..space).map(|r| probe.hash.hash(&Bits::from_uint_be(r as u64, l))).collect();
    let mut counts = alloc::vec![0u64; 1 << probe.hash.h()];
    let mut support: Vec<usize> = (0..m).collect();
    'outer: loop {
        let sum = support.iter().fold(0u64, |acc, &i| acc ^ hashes[i]);
        counts[sum as usize] += 1;
        let mut i = m;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if support[i] < space - (m - i) {
                support[i] += 1;
                for j in i + 1..m {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
    let (best_a, &best_count) =
        counts.iter().enumerate().max_by_key(|(_, &c)| c).expect("nonempty");
    Ok(Census {
        counts,
        best_a: best_a as u64,
        best_count,
        total: binomial(space as u64, m as u64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TconParams {
    pub m: usize,
    pub l: usize,
    pub l_prime: usize,
    pub t: usize,
    pub eps: usize,
}

/// The `(0,t,eps)`-substitution codec: anchored address code, BCH-protected
/// address indicator, an inner code `B` on the first payload, and a syndrome
/// code `C` across the rest.
#[derive(Debug, Clone)]
pub struct Tcon {
    params: TconParams,
    address_sets: Vec<Vec<Sequence>>,
    address_index: BTreeMap<Vec<Sequence>, u64>,
    ca: BchCode,
    b: BchCode,
    c: RsCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TconMessage {
    /// Which address set of the enumerated anchored code.
    pub address_index: u64,
    /// Free message bits of the first payload beyond the pinned parity.
    pub u1_free: Bits,
    /// Free syndrome symbols (elements of GF(2^r)).
    pub syndrome_syms: Vec<u64>,
    /// Per-payload coset information, M-1 strings of dim(B) bits.
    pub coset_free: Vec<Bits>,
}

impl Tcon {
    pub fn new(params: TconParams, address_budget: u128) -> Result<Self> {
        let TconParams { m, l, l_prime, t, eps } = params;
        if m < 2 || l_prime >= l || m >= 1 << l_prime {
            return Err(Error::InvalidParams("need log M < L' < L".into()));
        }
        let b = bch_with_total_len(l - l_prime, eps)?;
        let r = b.redundancy();
        if l - l_prime < r + 2 * t * (l_prime + 1) {
            return Err(Error::InvalidParams(alloc::format!(
                "need L - L' - r >= 2t(L'+1): {} - {r} < {}",
                l - l_prime,
                2 * t * (l_prime + 1)
            )));
        }
        let ca = bch_systematic(l_prime as u32, 2 * t)?;
        if m - 1 < 2 * t {
            return Err(Error::InvalidParams("syndrome code needs M - 1 >= 2t".into()));
        }
        let c = rs_code(Gf2m::new(r as u32), m - 1, m - 1 - 2 * t)?;
        let address_sets = enumerate_address_sets(l_prime, m, eps, address_budget)?;
        let address_index =
            address_sets.iter().enumerate().map(|(i, s)| (s.clone(), i as u64)).collect();
        Ok(Tcon { params, address_sets, address_index, ca, b, c })
    }

    pub fn params(&self) -> &TconParams {
        &self.params
    }

    /// Redundancy r of the inner code B (instance-true).
    pub fn r(&self) -> usize {
        self.b.redundancy()
    }

    /// Redundancy of the syndrome code C in GF(2^r) symbols (instance-true).
    pub fn r_tilde(&self) -> usize {
        self.c.n() - self.c.k()
    }

    /// Cardinality of the enumerated address code.
    pub fn address_count(&self) -> u64 {
        self.address_sets.len() as u64
    }

    /// Message width of the inner code B.
    pub fn b_dim(&self) -> usize {
        self.b.dim()
    }

    /// Free bits of the first payload beyond the pinned parity.
    pub fn u1_free_width(&self) -> usize {
        self.b.dim() - self.pinned()
    }

    fn pinned(&self) -> usize {
        2 * self.params.t * (self.params.l_prime + 1)
    }

    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            s: 0,
            t: self.params.t,
            eps: Eps::Bounded(self.params.eps),
            kind: ErrorKind::Substitution,
        }
    }

    /// |A| * 2^{M(L-L') - 2t(L'+1) - r(r_tilde+1)}.
    pub fn code_size(&self) -> BigUint {
        let p = &self.params;
        let exp = p.m * (p.l - p.l_prime) - self.pinned() - self.r() * (self.r_tilde() + 1);
        BigUint::from(self.address_count()) * (BigUint::one() << exp)
    }

    pub fn total_space(&self) -> BigUint {
        crate::arith::binomial_pow2(self.params.l as u64, self.params.m as u64)
    }

    pub fn zero_message(&self) -> TconMessage {
        let p = &self.params;
        TconMessage {
            address_index: 0,
            u1_free: Bits::zeros(self.b.dim() - self.pinned()),
            syndrome_syms: alloc::vec![0; p.m - 1 - self.r_tilde()],
            coset_free: alloc::vec![Bits::zeros(self.b.dim()); p.m - 1],
        }
    }

    fn check_message(&self, msg: &TconMessage) -> Result<()> {
        let p = &self.params;
        if msg.address_index >= self.address_count() {
            return Err(Error::OutOfRange(alloc::format!(
                "address index must be below {}",
                self.address_count()
            )));
        }
        if msg.u1_free.len() != self.b.dim() - self.pinned() {
            return Err(Error::OutOfRange("u1 free bits have the wrong width".into()));
        }
        if msg.syndrome_syms.len() != p.m - 1 - self.r_tilde()
            || msg.syndrome_syms.iter().any(|&v| v >= 1 << self.r())
        {
            return Err(Error::OutOfRange("syndrome symbols out of range".into()));
        }
        if msg.coset_free.len() != p.m - 1
            || msg.coset_free.iter().any(|b| b.len() != self.b.dim())
        {
            return Err(Error::OutOfRange("coset information has the wrong shape".into()));
        }
        Ok(())
    }

    pub fn encode(&self, msg: &TconMessage) -> Result<SequenceSet> {
        self.check_message(msg)?;
        let p = &self.params;
        let addrs = &self.address_sets[msg.address_index as usize];
        let cv = char_vector(&SequenceSet::codeword(2, p.l_prime, addrs.clone())?)?;
        let parity = self.ca.encode(&cv);

        let mut payloads: Vec<Bits> = Vec::with_capacity(p.m);
        payloads.push(self.b.codeword(&parity.concat(&msg.u1_free)));
        let syndromes = self.c.encode(&msg.syndrome_syms);
        for (i, &s) in syndromes.iter().enumerate() {
            let y = self.b.coset_rep(&Bits::from_uint_be(s, self.r()));
            payloads.push(self.b.codeword(&msg.coset_free[i]).xor(&y));
        }
        let elems: Vec<Sequence> = addrs
            .iter()
            .zip(payloads.iter())
            .map(|(a, u)| a.concat(&Sequence::from_bits(u)))
            .collect();
        SequenceSet::codeword(2, p.l, elems)
    }

    pub fn decode(&self, received: &SequenceSet) -> Result<TconMessage> {
        Ok(self.decode_full(received)?.0)
    }

    /// Decodes and also returns the reconstructed codeword set.
    pub fn decode_full(&self, received: &SequenceSet) -> Result<(TconMessage, SequenceSet)> {
        let p = &self.params;
        if received.len() != p.m || received.uniform_len() != Some(p.l) {
            return Err(Error::DecodeFailure("substitution channel preserves shape"));
        }
        let ones = Sequence::new(2, alloc::vec![1u16; p.l_prime]).unwrap();
        // step 1: the unique sequence anchored near the all-ones prefix
        let x1 = self.unique_near(received, &ones)?;
        let u1 = self.b.decode(&x1.subword(p.l_prime, p.l).to_bits())?;
        let parity = u1.slice(0, self.pinned());

        // step 2: BCH-correct the address indicator
        let mut cv = Bits::zeros(1 << p.l_prime);
        for x in received.iter() {
            cv.set(seq_rank(&x.subword(0, p.l_prime)) as usize, true);
        }
        let corrected = self.ca.decode(&cv.concat(&parity))?;
        let cv = corrected.slice(0, 1 << p.l_prime);
        if cv.weight() != p.m {
            return Err(Error::DecodeFailure("corrected address set has the wrong size"));
        }
        let mut addrs: Vec<Sequence> =
            cv.support().into_iter().map(|rk| seq_unrank(2, p.l_prime, rk as u128)).collect();
        addrs.reverse();
        if addrs[0] != ones {
            return Err(Error::DecodeFailure("address set lost its anchor"));
        }
        let address_index = *self
            .address_index
            .get(&addrs)
            .ok_or(Error::DecodeFailure("decoded address set not in the code"))?;

        // step 2b: match every address to its unique nearby carrier
        let carriers: Vec<&Sequence> = addrs
            .iter()
            .map(|a| self.unique_near(received, a))
            .collect::<Result<_>>()?;

        // step 3: correct the syndrome word
        let word: Vec<Option<u64>> = carriers[1..]
            .iter()
            .map(|x| {
                Some(self.b.syndrome_bits(&x.subword(p.l_prime, p.l).to_bits()).to_uint_be())
            })
            .collect();
        let syndrome_syms = self.c.decode(&word, p.t)?;
        let syndromes = self.c.encode(&syndrome_syms);

        // step 4: coset-decode every remaining payload
        let mut coset_free = Vec::with_capacity(p.m - 1);
        let mut payloads = alloc::vec![u1.clone()];
        for (i, &s) in syndromes.iter().enumerate() {
            let y = self.b.coset_rep(&Bits::from_uint_be(s, self.r()));
            let shifted = carriers[i + 1].subword(p.l_prime, p.l).to_bits().xor(&y);
            let b_word = self.b.decode(&shifted)?;
            coset_free.push(b_word.slice(0, self.b.dim()));
            payloads.push(b_word.xor(&y));
        }
        let msg = TconMessage {
            address_index,
            u1_free: u1.slice(self.pinned(), self.b.dim()),
            syndrome_syms,
            coset_free,
        };
        let elems: Vec<Sequence> = addrs
            .iter()
            .zip(payloads.iter())
            .map(|(a, u)| a.concat(&Sequence::from_bits(u)))
            .collect();
        Ok((msg, SequenceSet::codeword(2, p.l, elems)?))
    }

    fn unique_near<'a>(&self, received: &'a SequenceSet, addr: &Sequence) -> Result<&'a Sequence> {
        let p = &self.params;
        let mut hits = received
            .iter()
            .filter(|x| x.subword(0, p.l_prime).hamming_distance(addr) <= p.eps);
        let first = hits.next().ok_or(Error::DecodeFailure("no sequence near an address"))?;
        if hits.next().is_some() {
            return Err(Error::DecodeFailure("two sequences near one address"));
        }
        Ok(first)
    }

    /// Every codeword's sequences are pairwise at distance >= 2*eps + 1
    /// (addresses are); required by the mod-p wrapper.
    pub fn min_intra_distance_ok(&self, set: &SequenceSet) -> bool {
        let elems = set.elems();
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i + 1..] {
                if a.hamming_distance(b) < 2 * self.params.eps + 1 {
                    return false;
                }
            }
        }
        true
    }
}
