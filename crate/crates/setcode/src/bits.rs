//! Fixed-length bit strings.
//!
//! Bit 0 is the first (leftmost) bit; integer conversions treat it as the
//! most significant digit unless the name says otherwise.


use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A bit string of arbitrary fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    bits: Vec<bool>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { bits: vec![false; len] }
    }

    pub fn ones(len: usize) -> Self {
        Bits { bits: vec![true; len] }
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Bits { bits }
    }

    /// Parses a `01` string.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Parse(alloc::format!("invalid bit character {c:?}"))),
            }
        }
        Ok(Bits { bits })
    }

    /// Big-endian: bit 0 of the result is the most significant bit of `value`.
    pub fn from_uint_be(value: u64, len: usize) -> Self {
        let mut bits = vec![false; len];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = (value >> (len - 1 - i)) & 1 == 1;
        }
        Bits { bits }
    }

    /// Little-endian: bit i of the result is bit i of `value`.
    pub fn from_uint_le(value: u64, len: usize) -> Self {
        let mut bits = vec![false; len];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = (value >> i) & 1 == 1;
        }
        Bits { bits }
    }

    pub fn to_uint_be(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn to_uint_le(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn push(&mut self, v: bool) {
        self.bits.push(v);
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Positions of set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    pub fn slice(&self, from: usize, to: usize) -> Bits {
        Bits { bits: self.bits[from..to].to_vec() }
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Bits { bits }
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        assert_eq!(self.len(), other.len(), "xor of unequal lengths");
        for (a, b) in self.bits.iter_mut().zip(other.bits.iter()) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn hamming_distance(&self, other: &Bits) -> usize {
        assert_eq!(self.len(), other.len());
        self.bits
            .iter()
            .zip(other.bits.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Deletes the bit at position `i`.
    pub fn delete(&self, i: usize) -> Bits {
        let mut bits = self.bits.clone();
        bits.remove(i);
        Bits { bits }
    }

    /// Inserts `v` before position `i`.
    pub fn insert(&self, i: usize, v: bool) -> Bits {
        let mut bits = self.bits.clone();
        bits.insert(i, v);
        Bits { bits }
    }

    /// True iff `self` can be obtained from `sup` by deletions.
    pub fn is_subsequence_of(&self, sup: &Bits) -> bool {
        let mut it = sup.bits.iter();
        self.bits.iter().all(|b| it.any(|s| s == b))
    }
}

impl core::fmt::Display for Bits {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl core::fmt::Debug for Bits {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Bits({self})")
    }
}

/// All distinct results of deleting at most `eps` bits (lengths `n-eps..=n`).
pub fn deletion_ball(c: &Bits, eps: usize) -> Vec<Bits> {
    let mut level = vec![c.clone()];
    let mut out = vec![c.clone()];
    for _ in 0..eps.min(c.len()) {
        let mut next = Vec::new();
        for w in &level {
            for i in 0..w.len() {
                next.push(w.delete(i));
            }
        }
        next.sort();
        next.dedup();
        out.extend_from_slice(&next);
        level = next;
    }
    out.sort();
    out.dedup();
    out
}

/// True iff the `eps`-deletion balls of `a` and `b` intersect.
pub fn deletion_balls_intersect(a: &Bits, b: &Bits, eps: usize) -> bool {
    let ba = deletion_ball(a, eps);
    let bb = deletion_ball(b, eps);
    // Both are sorted and deduped; merge-scan.
    let (mut i, mut j) = (0, 0);
    while i < ba.len() && j < bb.len() {
        match ba[i].cmp(&bb[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => return true,
        }
    }
    false
}
