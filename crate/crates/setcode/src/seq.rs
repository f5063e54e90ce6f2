//! Sequences over `Z_q`, sets of them, orderings and characteristic vectors.
//!
//! Every codec in this crate speaks this vocabulary. One global ordering
//! convention is fixed to avoid codec mismatch: the rank of a sequence is its
//! integer value with the first symbol most significant, a larger integer is
//! lexicographically larger, and codecs index the sequences of a set in
//! descending lexicographic order.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::bits::Bits;
use crate::{Error, Result};

/// A word over `Z_q`. Codewords are non-empty; channel outputs may be
/// shortened all the way to the empty word by deletions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sequence {
    q: u32,
    symbols: Vec<u16>,
}

impl Sequence {
    pub fn new(q: u32, symbols: Vec<u16>) -> Result<Self> {
        if !(2..=1 << 16).contains(&q) {
            return Err(Error::InvalidParams(alloc::format!("alphabet size {q} out of range")));
        }
        if symbols.iter().any(|&s| (s as u32) >= q) {
            return Err(Error::InvalidParams(alloc::format!("symbol >= q = {q}")));
        }
        Ok(Sequence { q, symbols })
    }

    /// Binary sequence from bits (0 -> symbol 0, 1 -> symbol 1).
    pub fn from_bits(bits: &Bits) -> Self {
        Sequence { q: 2, symbols: bits.iter().map(|b| b as u16).collect() }
    }

    pub fn to_bits(&self) -> Bits {
        debug_assert_eq!(self.q, 2);
        Bits::from_bools(self.symbols.iter().map(|&s| s == 1).collect())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> u16 {
        self.symbols[i]
    }

    /// Subword covering positions `from..to` (0-based, half-open).
    pub fn subword(&self, from: usize, to: usize) -> Sequence {
        Sequence { q: self.q, symbols: self.symbols[from..to].to_vec() }
    }

    pub fn concat(&self, other: &Sequence) -> Sequence {
        debug_assert_eq!(self.q, other.q);
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Sequence { q: self.q, symbols }
    }

    pub fn hamming_distance(&self, other: &Sequence) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.symbols
            .iter()
            .zip(other.symbols.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    pub fn delete(&self, i: usize) -> Sequence {
        let mut symbols = self.symbols.clone();
        symbols.remove(i);
        Sequence { q: self.q, symbols }
    }

    pub fn insert(&self, i: usize, sym: u16) -> Sequence {
        debug_assert!((sym as u32) < self.q);
        let mut symbols = self.symbols.clone();
        symbols.insert(i, sym);
        Sequence { q: self.q, symbols }
    }

    pub fn with_symbol(&self, i: usize, sym: u16) -> Sequence {
        debug_assert!((sym as u32) < self.q);
        let mut symbols = self.symbols.clone();
        symbols[i] = sym;
        Sequence { q: self.q, symbols }
    }
}

impl core::fmt::Debug for Sequence {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Seq[")?;
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// Integer value of a sequence, first symbol most significant.
/// A bijection between `Z_q^L` and `[0, q^L)`.
pub fn seq_rank(x: &Sequence) -> u128 {
    let q = x.q as u128;
    x.symbols.iter().fold(0u128, |acc, &s| acc * q + s as u128)
}

/// Inverse of [`seq_rank`] for fixed `(q, len)`.
pub fn seq_unrank(q: u32, len: usize, rank: u128) -> Sequence {
    let mut symbols = alloc::vec![0u16; len];
    let mut r = rank;
    for i in (0..len).rev() {
        symbols[i] = (r % q as u128) as u16;
        r /= q as u128;
    }
    debug_assert_eq!(r, 0, "rank out of range");
    Sequence { q, symbols }
}

/// Number of sequences in `Z_q^L`, or None if it exceeds u128.
pub fn space_size(q: u32, len: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..len {
        acc = acc.checked_mul(q as u128)?;
    }
    Some(acc)
}

/// Iterates all of `Z_q^L` in ascending rank order.
pub fn all_sequences(q: u32, len: usize) -> impl Iterator<Item = Sequence> {
    let total = space_size(q, len).expect("sequence space too large to enumerate");
    (0..total).map(move |r| seq_unrank(q, len, r))
}

/// Direction of the global lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Ascending,
    Descending,
}

/// The ordering convention used for index assignment. Codecs use
/// [`OrderingConvention::descending`], per-address payload order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingConvention {
    pub direction: Direction,
}

impl OrderingConvention {
    pub fn descending() -> Self {
        OrderingConvention { direction: Direction::Descending }
    }

    pub fn ascending() -> Self {
        OrderingConvention { direction: Direction::Ascending }
    }
}

/// A set of distinct sequences sharing one alphabet. Stored canonically in
/// descending lexicographic order, so equality and hashing are structural.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SequenceSet {
    q: u32,
    elems: Vec<Sequence>,
}

impl SequenceSet {
    /// A codeword set: all sequences distinct, same positive length.
    pub fn codeword(q: u32, len: usize, elems: Vec<Sequence>) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParams("codeword length must be positive".into()));
        }
        if elems.is_empty() {
            return Err(Error::InvalidParams("a set must hold at least one sequence".into()));
        }
        if elems.iter().any(|x| x.q != q || x.len() != len) {
            return Err(Error::InvalidParams("codeword set must be uniform in (q, L)".into()));
        }
        let set = Self::received(q, elems.clone())?;
        if set.len() != elems.len() {
            return Err(Error::InvalidParams("codeword set has duplicate sequences".into()));
        }
        Ok(set)
    }

    /// A channel output: lengths may differ, duplicates collapse.
    pub fn received(q: u32, mut elems: Vec<Sequence>) -> Result<Self> {
        if elems.iter().any(|x| x.q != q) {
            return Err(Error::InvalidParams("mixed alphabets in one set".into()));
        }
        elems.sort_unstable_by(|a, b| b.cmp(a));
        elems.dedup();
        Ok(SequenceSet { q, elems })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Cardinality M.
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Elements in descending lexicographic order.
    pub fn elems(&self) -> &[Sequence] {
        &self.elems
    }

    /// The common length, if all elements share one.
    pub fn uniform_len(&self) -> Option<usize> {
        let first = self.elems.first()?.len();
        self.elems.iter().all(|x| x.len() == first).then_some(first)
    }

    pub fn contains(&self, x: &Sequence) -> bool {
        self.elems.binary_search_by(|e| x.cmp(e)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sequence> {
        self.elems.iter()
    }

    /// Set minus one element plus another; used by channel enumeration.
    pub fn replace(&self, remove: &Sequence, add: Option<Sequence>) -> SequenceSet {
        let mut elems: Vec<Sequence> =
            self.elems.iter().filter(|e| *e != remove).cloned().collect();
        if let Some(a) = add {
            elems.push(a);
        }
        SequenceSet::received(self.q, elems).expect("same alphabet")
    }
}

impl core::fmt::Debug for SequenceSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e:?}")?;
        }
        write!(f, "}}")
    }
}

/// The elements of `s` listed per the given convention.
pub fn sort_set(s: &SequenceSet, conv: OrderingConvention) -> Vec<Sequence> {
    let mut v = s.elems().to_vec();
    match conv.direction {
        Direction::Descending => {} // canonical storage order
        Direction::Ascending => v.reverse(),
    }
    v
}

/// Characteristic vector: bit i set iff the rank-i sequence is in the set.
/// Requires a uniform length and q^L small enough to materialize.
pub fn char_vector(s: &SequenceSet) -> Result<Bits> {
    let len = s
        .uniform_len()
        .ok_or_else(|| Error::InvalidParams("characteristic vector needs uniform length".into()))?;
    let total = space_size(s.q, len)
        .filter(|&t| t <= 1 << 26)
        .ok_or_else(|| Error::InvalidParams("q^L too large for a characteristic vector".into()))?;
    let mut bits = Bits::zeros(total as usize);
    for x in s.iter() {
        bits.set(seq_rank(x) as usize, true);
    }
    Ok(bits)
}

/// Inverse of [`char_vector`].
pub fn set_from_char_vector(q: u32, len: usize, bits: &Bits) -> Result<SequenceSet> {
    let expected = space_size(q, len).map(|t| t as usize);
    if expected != Some(bits.len()) {
        return Err(Error::InvalidParams("characteristic vector length mismatch".into()));
    }
    let elems: Vec<Sequence> = bits
        .support()
        .into_iter()
        .map(|i| seq_unrank(q, len, i as u128))
        .collect();
    SequenceSet::codeword(q, len, elems)
}

/// Rank of a uniform-length set among all M-subsets of `Z_q^L`, via the
/// combinatorial number system on sequence ranks.
pub fn subset_rank(s: &SequenceSet) -> Result<BigUint> {
    let len = s
        .uniform_len()
        .ok_or_else(|| Error::InvalidParams("subset rank needs uniform length".into()))?;
    let total = space_size(s.q, len)
        .filter(|&t| t <= usize::MAX as u128)
        .ok_or_else(|| Error::InvalidParams("q^L too large for subset ranking".into()))?;
    let mut ranks: Vec<usize> = s.iter().map(|x| seq_rank(x) as usize).collect();
    ranks.sort_unstable();
    Ok(arith::rank_combination(total as usize, &ranks))
}

/// Inverse of [`subset_rank`] for given `(q, len, m)`.
pub fn subset_unrank(rank: &BigUint, q: u32, len: usize, m: usize) -> Result<SequenceSet> {
    let total = space_size(q, len)
        .filter(|&t| t <= usize::MAX as u128)
        .ok_or_else(|| Error::InvalidParams("q^L too large for subset ranking".into()))?;
    let combo = arith::unrank_combination(total as usize, m, rank)?;
    let elems: Vec<Sequence> =
        combo.into_iter().map(|r| seq_unrank(q, len, r as u128)).collect();
    SequenceSet::codeword(q, len, elems)
}

/// Serializes a set: header `q L M`, then the sequences in canonical
/// (descending) order, one per line, symbols space-separated.
pub fn set_to_text(s: &SequenceSet) -> String {
    let len = s.uniform_len().unwrap_or(0);
    let mut out = alloc::format!("{} {} {}\n", s.q, len, s.len());
    for x in s.iter() {
        let line: Vec<String> = x.symbols().iter().map(|v| alloc::format!("{v}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the [`set_to_text`] format. Lines shorter than the header length
/// are accepted so channel outputs can be stored too.
pub fn set_from_text(text: &str) -> Result<SequenceSet> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty set file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse("header must be `q L M`".into()));
    }
    let q: u32 = fields[0].parse().map_err(|_| Error::Parse("bad q".into()))?;
    let _len: usize = fields[1].parse().map_err(|_| Error::Parse("bad L".into()))?;
    let m: usize = fields[2].parse().map_err(|_| Error::Parse("bad M".into()))?;
    let mut elems = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| Error::Parse("missing sequence line".into()))?;
        let symbols: Result<Vec<u16>> = line
            .split_whitespace()
            .map(|t| t.parse::<u16>().map_err(|_| Error::Parse(alloc::format!("bad symbol {t:?}"))))
            .collect();
        elems.push(Sequence::new(q, symbols?)?);
    }
    let set = SequenceSet::received(q, elems)?;
    if set.len() != m {
        return Err(Error::Parse("duplicate sequences in set file".into()));
    }
    Ok(set)
}
