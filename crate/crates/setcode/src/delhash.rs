//! Deletion-correcting hashes.
//!
//! The contract: a hash `H: {0,1}^n -> {0,1}^h` such that distinct words
//! with equal hash values have disjoint eps-deletion balls. Three
//! realizations live here:
//!
//! * the Varshamov-Tenengolts syndrome-and-parity hash, exact for eps = 1;
//! * a brute-force coloring of the confusability graph for eps >= 2 at
//!   small n (`bf_hash`);
//! * a greedy systematic table (`systematic_hash`) with the stronger
//!   guarantee that the concatenated words `(c, H(c))` themselves form an
//!   eps-deletion-correcting code, which is what codecs that store the hash
//!   inside the protected string need.
//!
//! `h` is whatever the instance produces; the asymptotic 4*eps*log(n)
//! estimate is never used for accounting.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::bits::{deletion_ball, deletion_balls_intersect, Bits};
use crate::{Error, Result};

/// Varshamov-Tenengolts syndrome of a bit string: the weighted sum of the
/// 1-indexed positions of its set bits, mod n+1, plus the weight parity.
pub fn vt_hash(c: &Bits) -> (u64, bool) {
    let n = c.len() as u64;
    let syndrome = c
        .iter()
        .enumerate()
        .filter(|(_, b)| *b)
        .map(|(i, _)| i as u64 + 1)
        .sum::<u64>()
        % (n + 1);
    (syndrome, c.weight() % 2 == 1)
}

fn ceil_log2(x: u64) -> u32 {
    64 - (x - 1).leading_zeros()
}

/// A deletion hash instance over `{0,1}^n`.
#[derive(Debug, Clone)]
pub enum DeletionHash {
    Vt { n: usize },
    Table { eps: usize, n: usize, h: u32, table: Vec<u32> },
}

impl DeletionHash {
    pub fn vt(n: usize) -> Self {
        DeletionHash::Vt { n }
    }

    pub fn eps(&self) -> usize {
        match self {
            DeletionHash::Vt { .. } => 1,
            DeletionHash::Table { eps, .. } => *eps,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            DeletionHash::Vt { n } | DeletionHash::Table { n, .. } => *n,
        }
    }

    /// Hash length in bits. For VT this is exactly ceil(log2(n+1)) + 1.
    pub fn h(&self) -> u32 {
        match self {
            DeletionHash::Vt { n } => ceil_log2(*n as u64 + 1) + 1,
            DeletionHash::Table { h, .. } => *h,
        }
    }

    pub fn hash(&self, c: &Bits) -> u64 {
        assert_eq!(c.len(), self.n());
        match self {
            DeletionHash::Vt { n } => {
                let (syn, parity) = vt_hash(c);
                syn | (parity as u64) << (ceil_log2(*n as u64 + 1))
            }
            DeletionHash::Table { table, .. } => table[c.to_uint_be() as usize] as u64,
        }
    }

    /// Hash value serialized little-endian within h bits.
    pub fn hash_bits(&self, c: &Bits) -> Bits {
        Bits::from_uint_le(self.hash(c), self.h() as usize)
    }

    /// Recovers `c` from a version with at most eps deletions when the exact
    /// hash value is known out-of-band.
    pub fn decode_lost(&self, received: &Bits, hash_value: u64) -> Result<Bits> {
        let n = self.n();
        if received.len() > n || n - received.len() > self.eps() {
            return Err(Error::DecodeFailure("received length outside deletion radius"));
        }
        if received.len() == n {
            if self.hash(received) == hash_value {
                return Ok(received.clone());
            }
            return Err(Error::DecodeFailure("full-length word contradicts its hash"));
        }
        if let (DeletionHash::Vt { n }, true) = (self, received.len() + 1 == self.n()) {
            let out = vt_decode_one(received, *n, hash_value)?;
            debug_assert_eq!(self.hash(&out), hash_value);
            return Ok(out);
        }
        // supersequence intersection, exact at desk scale
        let mut candidates: Vec<Bits> = Vec::new();
        for c in supersequences(received, n) {
            if self.hash(&c) == hash_value {
                candidates.push(c);
            }
        }
        candidates.dedup();
        match candidates.len() {
            0 => Err(Error::DecodeFailure("no preimage matches the hash")),
            1 => Ok(candidates.pop().unwrap()),
            _ => {
                debug_assert!(false, "deletion hash invariant violated");
                Err(Error::DecodeFailure("ambiguous preimage: hash invariant violated"))
            }
        }
    }

    /// Recovers `c` from `w`, a version of `(c, H(c))` with at most eps
    /// deletions. Requires the stronger embedded soundness (the systematic
    /// table construction guarantees it; VT instances must be checked).
    pub fn decode_embedded(&self, w: &Bits) -> Result<Bits> {
        let total = self.n() + self.h() as usize;
        if w.len() > total || total - w.len() > self.eps() {
            return Err(Error::DecodeFailure("received length outside deletion radius"));
        }
        let mut found: Option<Bits> = None;
        for cand in supersequences(w, total) {
            let c = cand.slice(0, self.n());
            if self.hash_bits(&c) == cand.slice(self.n(), total) {
                match &found {
                    Some(prev) if *prev != c => {
                        debug_assert!(false, "embedded deletion code not sound");
                        return Err(Error::DecodeFailure(
                            "ambiguous embedded preimage: code not sound",
                        ));
                    }
                    _ => found = Some(c),
                }
            }
        }
        found.ok_or(Error::DecodeFailure("no embedded preimage"))
    }

    /// Exhaustively checks the stated invariant: equal-hash words have
    /// disjoint eps-deletion balls.
    pub fn check_sound(&self) -> bool {
        let n = self.n();
        assert!(n <= 16, "soundness check is exponential in n");
        let mut by_hash: BTreeMap<u64, Vec<Bits>> = BTreeMap::new();
        for v in 0..1u64 << n {
            let c = Bits::from_uint_be(v, n);
            by_hash.entry(self.hash(&c)).or_default().push(c);
        }
        for group in by_hash.values() {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    if deletion_balls_intersect(a, b, self.eps()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exhaustively checks the stronger property needed when the hash is
    /// stored inside the protected string: the eps-deletion balls of the
    /// concatenated words `(c, H(c))` are pairwise disjoint.
    pub fn check_embedded_sound(&self) -> bool {
        let n = self.n();
        assert!(n <= 16, "soundness check is exponential in n");
        let mut seen: BTreeMap<Bits, u64> = BTreeMap::new();
        for v in 0..1u64 << n {
            let c = Bits::from_uint_be(v, n);
            let word = c.concat(&self.hash_bits(&c));
            for member in deletion_ball(&word, self.eps()) {
                if let Some(&owner) = seen.get(&member) {
                    if owner != v {
                        return false;
                    }
                } else {
                    seen.insert(member, v);
                }
            }
        }
        true
    }

    /// Cache format: three u32 LE header fields (eps, n, h), then 2^n u32 LE
    /// hash values. VT instances are formulaic and are not serialized.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        match self {
            DeletionHash::Vt { .. } => {
                Err(Error::InvalidParams("VT hash needs no cache file".into()))
            }
            DeletionHash::Table { eps, n, h, table } => {
                let mut out = Vec::with_capacity(12 + table.len() * 4);
                for head in [*eps as u32, *n as u32, *h] {
                    out.extend_from_slice(&head.to_le_bytes());
                }
                for v in table {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                Ok(out)
            }
        }
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self> {
        if data.len() < 12 {
            return Err(Error::Parse("hash cache too short".into()));
        }
        let word = |i: usize| u32::from_le_bytes(data[4 * i..4 * i + 4].try_into().unwrap());
        let (eps, n, h) = (word(0) as usize, word(1) as usize, word(2));
        if n > 24 || data.len() != 12 + (1usize << n) * 4 {
            return Err(Error::Parse("hash cache length mismatch".into()));
        }
        let table = (0..1usize << n).map(|i| word(3 + i)).collect();
        Ok(DeletionHash::Table { eps, n, h, table })
    }
}

/// Classic single-deletion VT reconstruction, O(n).
fn vt_decode_one(received: &Bits, n: usize, hash_value: u64) -> Result<Bits> {
    let syn_bits = ceil_log2(n as u64 + 1);
    let target_syn = hash_value & ((1 << syn_bits) - 1);
    let target_parity = (hash_value >> syn_bits) & 1 == 1;
    if target_syn > n as u64 {
        return Err(Error::DecodeFailure("VT syndrome out of range"));
    }
    let w1 = received.weight() as u64;
    let deleted_one = target_parity != (w1 % 2 == 1);
    let cur = received
        .iter()
        .enumerate()
        .filter(|(_, b)| *b)
        .map(|(i, _)| i as u64 + 1)
        .sum::<u64>()
        % (n as u64 + 1);
    let delta = (target_syn + n as u64 + 1 - cur) % (n as u64 + 1);
    // Inserting bit b before position k changes the syndrome by
    // b*(k+1) + (ones at positions >= k); both quantities stay below n+1,
    // so no modular wrap is possible and a linear scan finds k.
    if !deleted_one {
        let mut ones_right = w1;
        for k in 0..=received.len() {
            if ones_right == delta {
                return Ok(received.insert(k, false));
            }
            if k < received.len() && received.get(k) {
                ones_right -= 1;
            }
        }
    } else {
        let need = delta
            .checked_sub(w1 + 1)
            .ok_or(Error::DecodeFailure("VT: inconsistent syndrome"))?;
        let mut zeros_left = 0;
        for k in 0..=received.len() {
            if zeros_left == need {
                return Ok(received.insert(k, true));
            }
            if k < received.len() && !received.get(k) {
                zeros_left += 1;
            }
        }
    }
    Err(Error::DecodeFailure("VT: no insertion position fits"))
}

/// All distinct supersequences of `w` of the given length.
pub fn supersequences(w: &Bits, len: usize) -> Vec<Bits> {
    let mut level: BTreeSet<Bits> = BTreeSet::new();
    level.insert(w.clone());
    while level.first().map(|b| b.len()) != Some(len) {
        let mut next = BTreeSet::new();
        for word in &level {
            for i in 0..=word.len() {
                next.insert(word.insert(i, false));
                next.insert(word.insert(i, true));
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

/// Greedy coloring of the confusability graph on `{0,1}^n` (words adjacent
/// iff their eps-deletion balls intersect). The color index is the hash.
pub fn bf_hash(eps: usize, n: usize) -> Result<DeletionHash> {
    if n > 18 {
        return Err(Error::InvalidParams("bf_hash needs n <= 18".into()));
    }
    if eps == 0 {
        return Ok(DeletionHash::Table { eps, n, h: 0, table: alloc::vec![0; 1 << n] });
    }
    let size = 1usize << n;
    let balls: Vec<Vec<Bits>> =
        (0..size).map(|v| deletion_ball(&Bits::from_uint_be(v as u64, n), eps)).collect();
    let mut colors: Vec<u32> = alloc::vec![0; size];
    let mut max_color = 0u32;
    for v in 0..size {
        let mut used = BTreeSet::new();
        for u in 0..v {
            if balls_intersect_sorted(&balls[u], &balls[v]) {
                used.insert(colors[u]);
            }
        }
        let mut c = 0u32;
        while used.contains(&c) {
            c += 1;
        }
        colors[v] = c;
        max_color = max_color.max(c);
    }
    let h = if max_color == 0 { 0 } else { ceil_log2(max_color as u64 + 1) };
    Ok(DeletionHash::Table { eps, n, h, table: colors })
}

fn balls_intersect_sorted(a: &[Bits], b: &[Bits]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Greedy systematic hash with the embedded guarantee: assigns to each `c`
/// (ascending) the least value `v` keeping the eps-deletion balls of all
/// chosen `(c, v)` pairwise disjoint. Falls back to a wider `h` if needed.
pub fn systematic_hash(eps: usize, n: usize, h_min: u32) -> Result<DeletionHash> {
    if n > 16 {
        return Err(Error::InvalidParams("systematic_hash needs n <= 16".into()));
    }
    'grow: for h in h_min..=12 {
        let mut taken: BTreeSet<Bits> = BTreeSet::new();
        let mut table: Vec<u32> = Vec::with_capacity(1 << n);
        'words: for cv in 0..1u64 << n {
            let c = Bits::from_uint_be(cv, n);
            'values: for v in 0..1u64 << h {
                let word = c.concat(&Bits::from_uint_le(v, h as usize));
                let ball = deletion_ball(&word, eps);
                for member in &ball {
                    if taken.contains(member) {
                        continue 'values;
                    }
                }
                taken.extend(ball);
                table.push(v as u32);
                continue 'words;
            }
            continue 'grow;
        }
        return Ok(DeletionHash::Table { eps, n, h, table });
    }
    Err(Error::InvalidParams(alloc::format!(
        "no systematic {eps}-deletion hash of width <= 12 for n = {n}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vt_hash_examples() {
        let zeros = Bits::zeros(6);
        assert_eq!(vt_hash(&zeros), (0, false));
        let c = Bits::parse("1010").unwrap();
        assert_eq!(vt_hash(&c), (4, false)); // (1 + 3) mod 5
        let vt = DeletionHash::vt(4);
        assert_eq!(vt.h(), 4); // ceil(log2 5) + 1
    }

    #[test]
    fn vt_decode_named_example() {
        let vt = DeletionHash::vt(4);
        let c = Bits::parse("1010").unwrap();
        let hash = vt.hash(&c);
        let received = c.delete(1); // "110"
        assert_eq!(received.to_uint_be(), 0b110);
        assert_eq!(vt.decode_lost(&received, hash).unwrap(), c);
    }

    #[test]
    fn vt_exhaustive_single_deletion() {
        for n in 1..=12usize {
            let vt = DeletionHash::vt(n);
            for v in 0..1u64 << n {
                let c = Bits::from_uint_be(v, n);
                let hash = vt.hash(&c);
                assert_eq!(vt.decode_lost(&c, hash).unwrap(), c); // zero deletions
                for i in 0..n {
                    let r = c.delete(i);
                    assert_eq!(vt.decode_lost(&r, hash).unwrap(), c, "c = {c}, i = {i}");
                }
            }
        }
    }

    #[test]
    fn vt_fast_path_agrees_with_brute_force() {
        let n = 9usize;
        let vt = DeletionHash::vt(n);
        for v in 0..1u64 << n {
            let c = Bits::from_uint_be(v, n);
            let hash = vt.hash(&c);
            for i in 0..n {
                let r = c.delete(i);
                let fast = vt_decode_one(&r, n, hash).unwrap();
                // brute force: all supersequences with matching hash
                let brute: Vec<Bits> = supersequences(&r, n)
                    .into_iter()
                    .filter(|cand| vt.hash(cand) == hash)
                    .collect();
                assert_eq!(brute.len(), 1);
                assert_eq!(fast, brute[0]);
            }
        }
    }

    #[test]
    fn vt_hash_is_sound() {
        for n in [4usize, 8, 12] {
            assert!(DeletionHash::vt(n).check_sound(), "n = {n}");
        }
    }

    #[test]
    fn bf_hash_eps0_single_color() {
        let h = bf_hash(0, 6).unwrap();
        assert_eq!(h.h(), 0);
        let c = Bits::parse("101010").unwrap();
        assert_eq!(h.hash(&c), 0);
    }

    #[test]
    fn bf_hash_eps1_valid_coloring() {
        for n in [6usize, 8, 10] {
            let h = bf_hash(1, n).unwrap();
            assert!(h.check_sound(), "n = {n}");
        }
    }

    #[test]
    fn bf_hash_eps2_exhaustive_decode() {
        for n in [8usize, 10] {
            let h = bf_hash(2, n).unwrap();
            assert!(h.check_sound());
            for v in 0..1u64 << n {
                let c = Bits::from_uint_be(v, n);
                let hv = h.hash(&c);
                for r in deletion_ball(&c, 2) {
                    assert_eq!(h.decode_lost(&r, hv).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn table_cache_round_trip() {
        let h = bf_hash(2, 8).unwrap();
        let bytes = h.to_bytes().unwrap();
        let back = DeletionHash::from_bytes(&bytes).unwrap();
        assert_eq!(back.eps(), 2);
        assert_eq!(back.n(), 8);
        assert_eq!(back.h(), h.h());
        for v in 0..256u64 {
            let c = Bits::from_uint_be(v, 8);
            assert_eq!(back.hash(&c), h.hash(&c));
        }
        assert!(DeletionHash::vt(8).to_bytes().is_err());
        assert!(DeletionHash::from_bytes(&bytes[..10]).is_err());
    }

    #[test]
    fn systematic_hash_is_embedded_sound() {
        let h = systematic_hash(1, 6, 4).unwrap();
        assert!(h.check_embedded_sound());
        assert!(h.check_sound());
        // embedded decode over every codeword and deletion
        let total = h.n() + h.h() as usize;
        for v in 0..1u64 << 6 {
            let c = Bits::from_uint_be(v, 6);
            let word = c.concat(&h.hash_bits(&c));
            assert_eq!(word.len(), total);
            for w in deletion_ball(&word, 1) {
                assert_eq!(h.decode_embedded(&w).unwrap(), c);
            }
        }
    }
}
