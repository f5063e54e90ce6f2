//! Loss-only outer codes and outer-inner concatenation.
//!
//! `Outcode` survives pure sequence loss `(s,0,0)` with only `s*L_o + O(h)`
//! redundancy: the address-set parity is threaded through the first bit of
//! the first payloads together with a deletion-hash of itself, so losing
//! sequences just deletes bits of that column string. Concatenation then
//! lifts it to `(s, M-s, eps)` channels by pushing every sequence through an
//! inner block code correcting eps substitutions or deletions.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{bch_shortened_systematic, bch_systematic, rs_code, BchCode, Gf2m, RsCode};
use crate::arith::binomial;
use crate::bits::Bits;
use crate::channel::{ChannelSpec, Eps, ErrorKind};
use crate::delhash::{systematic_hash, DeletionHash};
use crate::seq::{char_vector, seq_rank, seq_unrank, sort_set, subset_rank, subset_unrank, OrderingConvention, Sequence, SequenceSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcodeParams {
    pub s: usize,
    pub m: usize,
    pub l_prime: usize,
    pub l_o: usize,
}

/// The `(s,0,0)`-correcting code over `X_M^{2,L_o}`.
#[derive(Debug, Clone)]
pub struct Outcode {
    params: OutcodeParams,
    hash: DeletionHash,
    ca: BchCode,
    rs: RsCode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcodeMessage {
    pub address_rank: BigUint,
    /// All free payload bits, packed in payload order.
    pub payload: Bits,
}

impl Outcode {
    pub fn new(params: OutcodeParams) -> Result<Self> {
        let OutcodeParams { s, m, l_prime, l_o } = params;
        if s == 0 {
            return Err(Error::InvalidParams("s must be positive".into()));
        }
        if l_o <= l_prime || l_o - l_prime > 63 || l_prime > 16 {
            return Err(Error::InvalidParams("need L' < L_o (desk scale L' <= 16)".into()));
        }
        // log M < min(L', L_o - L')
        if m >= 1 << l_prime || m >= 1 << (l_o - l_prime) {
            return Err(Error::InvalidParams("need log M < min(L', L_o - L')".into()));
        }
        let n_hash = s * (l_prime + 1);
        // The hash must make (enc(A), Hash(enc(A))) an s-deletion-correcting
        // string code; plain VT is not (deletions may straddle into the
        // appended hash), so the greedy systematic table is used.
        let hash = systematic_hash(s, n_hash, 1)?;
        let pinned = n_hash + hash.h() as usize;
        if pinned + s > m {
            return Err(Error::InvalidParams(alloc::format!(
                "pinned column needs s(L'+1) + h <= M - s: {n_hash} + {} > {} - {s}",
                hash.h(),
                m
            )));
        }
        let ca = bch_systematic(l_prime as u32, s)?;
        let rs = rs_code(Gf2m::new((l_o - l_prime) as u32), m, m - s)?;
        Ok(Outcode { params, hash, ca, rs })
    }

    pub fn params(&self) -> &OutcodeParams {
        &self.params
    }

    pub fn hash(&self) -> &DeletionHash {
        &self.hash
    }

    /// Length of the pinned first-bit column: s(L'+1) + h.
    pub fn pinned_len(&self) -> usize {
        self.params.s * (self.params.l_prime + 1) + self.hash.h() as usize
    }

    /// Free payload bits: (L_o - L')(M - s) - pinned.
    pub fn free_bits(&self) -> usize {
        let p = &self.params;
        (p.l_o - p.l_prime) * (p.m - p.s) - self.pinned_len()
    }

    pub fn address_space(&self) -> BigUint {
        binomial(1u64 << self.params.l_prime, self.params.m as u64)
    }

    /// Closed-form size C(2^L', M) * 2^{(L_o-L')(M-s) - s(L'+1) - h}.
    pub fn code_size(&self) -> BigUint {
        self.address_space() * (BigUint::one() << self.free_bits())
    }

    pub fn total_space(&self) -> BigUint {
        crate::arith::binomial_pow2(self.params.l_o as u64, self.params.m as u64)
    }

    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            s: self.params.s,
            t: 0,
            eps: Eps::Bounded(0),
            kind: ErrorKind::Substitution,
        }
    }

    pub fn zero_message(&self) -> OutcodeMessage {
        OutcodeMessage { address_rank: BigUint::ZERO, payload: Bits::zeros(self.free_bits()) }
    }

    pub fn encode(&self, msg: &OutcodeMessage) -> Result<SequenceSet> {
        let p = &self.params;
        if msg.address_rank >= self.address_space() {
            return Err(Error::OutOfRange(alloc::format!(
                "address rank must be below {}",
                self.address_space()
            )));
        }
        if msg.payload.len() != self.free_bits() {
            return Err(Error::OutOfRange(alloc::format!(
                "payload must be exactly {} bits",
                self.free_bits()
            )));
        }
        let w = p.l_o - p.l_prime;
        let addresses = subset_unrank(&msg.address_rank, 2, p.l_prime, p.m)?;
        let addrs = sort_set(&addresses, OrderingConvention::descending());
        let enc_a = self.ca.encode(&char_vector(&addresses)?);
        let pinned = enc_a.concat(&self.hash.hash_bits(&enc_a));
        debug_assert_eq!(pinned.len(), self.pinned_len());

        let mut cursor = 0usize;
        let mut take = |n: usize| {
            let slice = msg.payload.slice(cursor, cursor + n);
            cursor += n;
            slice
        };
        let mut symbols: Vec<u64> = Vec::with_capacity(p.m);
        for i in 0..p.m - p.s {
            let u = if i < pinned.len() {
                let mut u = Bits::zeros(1);
                u.set(0, pinned.get(i));
                u.concat(&take(w - 1))
            } else {
                take(w)
            };
            symbols.push(u.to_uint_be());
        }
        let symbols = self.rs.encode(&symbols);
        let elems: Vec<Sequence> = addrs
            .iter()
            .zip(symbols.iter())
            .map(|(a, &sym)| a.concat(&Sequence::from_bits(&Bits::from_uint_be(sym, w))))
            .collect();
        SequenceSet::codeword(2, p.l_o, elems)
    }

    pub fn decode(&self, received: &SequenceSet) -> Result<OutcodeMessage> {
        let p = &self.params;
        let w = p.l_o - p.l_prime;
        if received.uniform_len() != Some(p.l_o) {
            return Err(Error::DecodeFailure("loss-only channel cannot change lengths"));
        }
        if received.len() > p.m || p.m - received.len() > p.s {
            return Err(Error::DecodeFailure("more than s sequences lost"));
        }
        // Sequences sort in address order because addresses are prefixes.
        let elems = received.elems();
        let read = self.pinned_len() - p.s;
        let column = Bits::from_bools(
            (0..read).map(|i| elems[i].symbol(p.l_prime) == 1).collect(),
        );
        let enc_a = self.hash.decode_embedded(&column)?;

        let mut cv = Bits::zeros(1 << p.l_prime);
        for x in elems {
            cv.set(seq_rank(&x.subword(0, p.l_prime)) as usize, true);
        }
        let corrected = self.ca.decode(&cv.concat(&enc_a))?;
        let cv = corrected.slice(0, 1 << p.l_prime);
        if cv.weight() != p.m {
            return Err(Error::DecodeFailure("corrected address set has the wrong size"));
        }
        let mut addrs: Vec<Sequence> =
            cv.support().into_iter().map(|r| seq_unrank(2, p.l_prime, r as u128)).collect();
        addrs.reverse();

        let mut word: Vec<Option<u64>> = Vec::with_capacity(p.m);
        for a in &addrs {
            let carriers: Vec<&Sequence> =
                elems.iter().filter(|x| x.subword(0, p.l_prime) == *a).collect();
            match carriers.as_slice() {
                [x] => word.push(Some(x.subword(p.l_prime, p.l_o).to_bits().to_uint_be())),
                [] => word.push(None),
                _ => return Err(Error::DecodeFailure("duplicated address prefix")),
            }
        }
        let symbols = self.rs.decode(&word, 0)?;

        let pinned = enc_a.concat(&Bits::from_uint_le(
            self.hash.hash(&enc_a),
            self.hash.h() as usize,
        ));
        let mut payload = Bits::zeros(0);
        for (i, &sym) in symbols.iter().enumerate() {
            let u = Bits::from_uint_be(sym, w);
            if i < pinned.len() {
                if u.get(0) != pinned.get(i) {
                    return Err(Error::DecodeFailure("pinned column bit mismatch"));
                }
                payload = payload.concat(&u.slice(1, w));
            } else {
                payload = payload.concat(&u);
            }
        }
        let addresses = SequenceSet::codeword(2, p.l_prime, addrs)?;
        Ok(OutcodeMessage { address_rank: subset_rank(&addresses)?, payload })
    }

    /// Clause-by-clause re-verification of the defining conditions.
    pub fn check_conditions(&self, set: &SequenceSet) -> Result<()> {
        let p = &self.params;
        if set.len() != p.m || set.uniform_len() != Some(p.l_o) || set.q() != 2 {
            return Err(Error::InvalidParams("wrong shape for this instance".into()));
        }
        let elems = sort_set(set, OrderingConvention::descending());
        let addrs: Vec<Sequence> = elems.iter().map(|x| x.subword(0, p.l_prime)).collect();
        let mut dedup = addrs.clone();
        dedup.dedup();
        if dedup.len() != p.m {
            return Err(Error::InvalidParams("condition (1): addresses not distinct".into()));
        }
        let addresses = SequenceSet::codeword(2, p.l_prime, addrs)?;
        // condition (2): the pinned column spells (enc(A), Hash(enc(A)))
        let enc_a = self.ca.encode(&char_vector(&addresses)?);
        let pinned = enc_a.concat(&self.hash.hash_bits(&enc_a));
        for (i, want) in pinned.iter().enumerate() {
            if (elems[i].symbol(p.l_prime) == 1) != want {
                return Err(Error::InvalidParams(alloc::format!(
                    "condition (2): pinned bit {i} differs"
                )));
            }
        }
        if !self.ca.is_codeword_by_roots(&char_vector(&addresses)?.concat(&enc_a)) {
            return Err(Error::InvalidParams("condition (2): (1(A), enc(A)) not in C_A".into()));
        }
        // condition (3): payload vector in the MDS code
        let symbols: Vec<u64> = elems
            .iter()
            .map(|x| x.subword(p.l_prime, p.l_o).to_bits().to_uint_be())
            .collect();
        if !self.rs.is_codeword(&symbols) {
            return Err(Error::InvalidParams("condition (3): payloads not in the MDS code".into()));
        }
        Ok(())
    }
}

/// The inner block code of the concatenation: a systematic map on `L_o` bits
/// correcting eps errors of its kind.
#[derive(Debug, Clone)]
pub enum InnerCode {
    /// Shortened BCH `[L_o + r, L_o, 2eps+1]` against substitutions.
    Substitution { code: BchCode },
    /// `(c, Hash_eps(c))` against deletions; the hash is embedded-sound.
    Deletion { hash: DeletionHash },
}

#[allow(clippy::len_without_is_empty)]
impl InnerCode {
    pub fn for_substitutions(l_o: usize, eps: usize) -> Result<Self> {
        Ok(InnerCode::Substitution { code: bch_shortened_systematic(l_o, eps)? })
    }

    pub fn for_deletions(l_o: usize, eps: usize) -> Result<Self> {
        Ok(InnerCode::Deletion { hash: systematic_hash(eps, l_o, 1)? })
    }

    pub fn dim(&self) -> usize {
        match self {
            InnerCode::Substitution { code } => code.dim(),
            InnerCode::Deletion { hash } => hash.n(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            InnerCode::Substitution { code } => code.len(),
            InnerCode::Deletion { hash } => hash.n() + hash.h() as usize,
        }
    }

    pub fn eps(&self) -> usize {
        match self {
            InnerCode::Substitution { code } => code.delta(),
            InnerCode::Deletion { hash } => hash.eps(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            InnerCode::Substitution { .. } => ErrorKind::Substitution,
            InnerCode::Deletion { .. } => ErrorKind::Deletion,
        }
    }

    pub fn encode_word(&self, w: &Bits) -> Bits {
        match self {
            InnerCode::Substitution { code } => code.codeword(w),
            InnerCode::Deletion { hash } => w.concat(&hash.hash_bits(w)),
        }
    }

    /// Recovers the dimension bits; an error means the block is lost.
    pub fn decode_word(&self, w: &Bits) -> Result<Bits> {
        match self {
            InnerCode::Substitution { code } => {
                if w.len() != code.len() {
                    return Err(Error::DecodeFailure("inner block has the wrong length"));
                }
                Ok(code.decode(w)?.slice(0, code.dim()))
            }
            InnerCode::Deletion { hash } => {
                let total = hash.n() + hash.h() as usize;
                if w.len() == total {
                    // full length under a deletion channel means untouched
                    let c = w.slice(0, hash.n());
                    if hash.hash_bits(&c) == w.slice(hash.n(), total) {
                        return Ok(c);
                    }
                    return Err(Error::DecodeFailure("inner block structure mismatch"));
                }
                hash.decode_embedded(w)
            }
        }
    }
}

/// Maps an outer codeword set through the inner encoder.
pub fn concat_map_set(outer_set: &SequenceSet, inner: &InnerCode) -> Result<SequenceSet> {
    let elems: Vec<Sequence> = outer_set
        .iter()
        .map(|x| Sequence::from_bits(&inner.encode_word(&x.to_bits())))
        .collect();
    SequenceSet::codeword(2, inner.len(), elems)
}

/// Inner-decodes every received sequence, dropping failures as losses, and
/// returns the surviving outer sequences.
pub fn concat_recover_outer(received: &SequenceSet, inner: &InnerCode) -> Result<SequenceSet> {
    let mut elems = Vec::with_capacity(received.len());
    for x in received.iter() {
        if let Ok(w) = inner.decode_word(&x.to_bits()) {
            elems.push(Sequence::from_bits(&w));
        } // failures are losses, absorbed by the outer code's budget
    }
    if elems.is_empty() {
        return Err(Error::DecodeFailure("no inner block decoded"));
    }
    SequenceSet::received(2, elems)
}

/// The full `(s, M-s, eps)` codec: `Outcode` outside, a block code inside.
#[derive(Debug, Clone)]
pub struct Concat {
    outer: Outcode,
    inner: InnerCode,
}

#[allow(clippy::len_without_is_empty)]
impl Concat {
    pub fn new(outer: Outcode, inner: InnerCode) -> Result<Self> {
        if inner.dim() != outer.params().l_o {
            return Err(Error::InvalidParams(alloc::format!(
                "inner dimension {} must equal L_o = {}",
                inner.dim(),
                outer.params().l_o
            )));
        }
        Ok(Concat { outer, inner })
    }

    pub fn outer(&self) -> &Outcode {
        &self.outer
    }

    pub fn inner(&self) -> &InnerCode {
        &self.inner
    }

    /// Sequence length after inner encoding.
    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn channel_spec(&self) -> ChannelSpec {
        ChannelSpec {
            s: self.outer.params().s,
            t: self.outer.params().m - self.outer.params().s,
            eps: Eps::Bounded(self.inner.eps()),
            kind: self.inner.kind(),
        }
    }

    pub fn code_size(&self) -> BigUint {
        self.outer.code_size()
    }

    pub fn total_space(&self) -> BigUint {
        crate::arith::binomial_pow2(self.len() as u64, self.outer.params().m as u64)
    }

    pub fn encode(&self, msg: &OutcodeMessage) -> Result<SequenceSet> {
        concat_map_set(&self.outer.encode(msg)?, &self.inner)
    }

    pub fn decode(&self, received: &SequenceSet) -> Result<OutcodeMessage> {
        let outer_set = concat_recover_outer(received, &self.inner)?;
        let p = self.outer.params();
        if outer_set.len() + p.s < p.m {
            return Err(Error::DecodeFailure("more than s inner blocks lost"));
        }
        self.outer.decode(&outer_set)
    }
}
