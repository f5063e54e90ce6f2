//! Shortened systematic binary BCH codes.
//!
//! Construction: take the cyclic BCH code of length 2^m - 1 whose generator
//! has roots alpha^1..alpha^{2*delta}, shorten it to the wanted dimension and
//! put the message first. The systematic layout is therefore
//! `(message, parity, zero padding)`, where the padding widens the parity
//! block to an advertised width when a caller needs exact bit accounting.
//! Decoding is Peterson-Gorenstein-Zierler with a Chien search, which is
//! plenty for the desk-scale deltas used here.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::gf::{poly_deg, Field, Gf2m};
use crate::bits::Bits;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BchCode {
    field: Gf2m,
    delta: usize,
    gen: u64,
    parity: usize,
    pad: usize,
    dim: usize,
}

/// The power-of-two systematic map: message length 2^ell, parity exactly
/// delta*(ell+1) bits (zero-padded beyond the generator degree), distance
/// at least 2*delta + 1. Requires delta <= (2^ell - 1) / (ell + 1).
pub fn bch_systematic(ell: u32, delta: usize) -> Result<BchCode> {
    let msg_len = 1usize << ell;
    if delta == 0 || delta * (ell as usize + 1) >= msg_len {
        return Err(Error::InvalidParams(alloc::format!(
            "bch_systematic needs 1 <= delta <= (2^{ell} - 1)/({ell} + 1), got {delta}"
        )));
    }
    let code = BchCode::with_dim_and_field(ell + 1, msg_len, delta)?;
    let advertised = delta * (ell as usize + 1);
    debug_assert!(code.parity <= advertised);
    Ok(BchCode { pad: advertised - code.parity, ..code })
}

/// Shortened BCH with a given message length, parity padded (when possible)
/// to the standard `delta * (ceil(log2 dim) + 1)` accounting width.
pub fn bch_shortened_systematic(dim: usize, delta: usize) -> Result<BchCode> {
    if dim < 2 {
        return Err(Error::InvalidParams("message length must be at least 2".into()));
    }
    let mut m = 2u32;
    loop {
        let gen = generator_poly(&Gf2m::new(m), delta)?;
        let r = poly_deg(gen as u128) as usize;
        if (1usize << m) > dim + r {
            break;
        }
        m += 1;
    }
    let code = BchCode::with_dim_and_field(m, dim, delta)?;
    let advertised = delta * (usize::BITS - (dim - 1).leading_zeros()) as usize + delta;
    let pad = advertised.saturating_sub(code.parity);
    Ok(BchCode { pad, ..code })
}

/// Shortened BCH of a given total length: `[total, total - r, >= 2*delta+1]`
/// with `r` the generator degree over the smallest field that fits.
pub fn bch_with_total_len(total: usize, delta: usize) -> Result<BchCode> {
    let mut m = 2u32;
    while (1usize << m) - 1 < total {
        m += 1;
    }
    let gen = generator_poly(&Gf2m::new(m), delta)?;
    let r = poly_deg(gen as u128) as usize;
    if r >= total {
        return Err(Error::InvalidParams(alloc::format!(
            "bch parity {r} leaves no message bits in total length {total}"
        )));
    }
    BchCode::with_dim_and_field(m, total - r, delta)
}

fn generator_poly(field: &Gf2m, delta: usize) -> Result<u64> {
    let n = (1u64 << field.m()) - 1;
    let mut reps = BTreeSet::new();
    for c in 1..=(2 * delta as u64) {
        // minimum representative of the cyclotomic coset of c mod n
        let mut min = c % n;
        let mut cur = (c * 2) % n;
        while cur != c % n {
            min = min.min(cur);
            cur = (cur * 2) % n;
        }
        reps.insert(min);
    }
    // g = product of the minimal polynomials of alpha^rep
    let mut g: u128 = 1;
    for rep in reps {
        g = super::gf::poly_mul(g, min_poly(field, rep));
        if poly_deg(g) > 63 {
            return Err(Error::InvalidParams("BCH generator degree exceeds 63".into()));
        }
    }
    Ok(g as u64)
}

/// Minimal polynomial of alpha^c as a GF(2) bitmask.
fn min_poly(field: &Gf2m, c: u64) -> u128 {
    let n = (1u64 << field.m()) - 1;
    let mut exps = alloc::vec![c % n];
    loop {
        let next = (exps.last().unwrap() * 2) % n;
        if next == exps[0] {
            break;
        }
        exps.push(next);
    }
    // product over the conjugacy class, coefficients in the field
    let mut coeffs: Vec<u64> = alloc::vec![1];
    for e in exps {
        let root = field.exp(e);
        let mut next = alloc::vec![0u64; coeffs.len() + 1];
        for (d, &co) in coeffs.iter().enumerate() {
            next[d + 1] ^= co;
            next[d] ^= field.mul(co, root);
        }
        coeffs = next;
    }
    let mut mask: u128 = 0;
    for (d, &co) in coeffs.iter().enumerate() {
        debug_assert!(co <= 1, "minimal polynomial must land in GF(2)");
        if co == 1 {
            mask |= 1 << d;
        }
    }
    mask
}

#[allow(clippy::len_without_is_empty)]
impl BchCode {
    fn with_dim_and_field(m: u32, dim: usize, delta: usize) -> Result<BchCode> {
        let field = Gf2m::new(m);
        let gen = generator_poly(&field, delta)?;
        let parity = poly_deg(gen as u128) as usize;
        let n_full = (1usize << m) - 1;
        if dim + parity > n_full {
            return Err(Error::InvalidParams(alloc::format!(
                "BCH dimension {dim} + parity {parity} exceeds cyclic length {n_full}"
            )));
        }
        Ok(BchCode { field, delta, gen, parity, pad: 0, dim })
    }

    /// Message length.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total codeword length including padding.
    pub fn len(&self) -> usize {
        self.dim + self.parity + self.pad
    }

    /// Parity width including padding (the advertised redundancy).
    pub fn redundancy(&self) -> usize {
        self.parity + self.pad
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Design distance 2*delta + 1.
    pub fn distance(&self) -> usize {
        2 * self.delta + 1
    }

    /// Parity (plus padding) for a message; LFSR division by the generator.
    pub fn encode(&self, msg: &Bits) -> Bits {
        assert_eq!(msg.len(), self.dim);
        let r = self.parity;
        let gen_low = self.gen & !(1u64 << r);
        let mask = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        let mut reg: u64 = 0;
        for b in msg.iter() {
            let feedback = b ^ ((reg >> (r - 1)) & 1 == 1);
            reg = (reg << 1) & mask;
            if feedback {
                reg ^= gen_low;
            }
        }
        let mut out = Bits::zeros(r + self.pad);
        for j in 0..r {
            out.set(j, (reg >> (r - 1 - j)) & 1 == 1);
        }
        out
    }

    pub fn codeword(&self, msg: &Bits) -> Bits {
        msg.concat(&self.encode(msg))
    }

    pub fn is_codeword(&self, word: &Bits) -> bool {
        assert_eq!(word.len(), self.len());
        let msg = word.slice(0, self.dim);
        self.codeword(&msg) == *word
    }

    /// Membership by the defining property: the word (as a polynomial)
    /// vanishes at alpha^1..alpha^{2*delta}. Independent of the encoder.
    pub fn is_codeword_by_roots(&self, word: &Bits) -> bool {
        assert_eq!(word.len(), self.len());
        if (self.dim + self.parity..self.len()).any(|i| word.get(i)) {
            return false; // padding must stay zero
        }
        self.syndromes(word).iter().all(|&s| s == 0)
    }

    // Exponent of alpha attached to codeword position i (pad positions carry
    // no information and are skipped everywhere).
    fn power(&self, i: usize) -> u64 {
        (self.dim + self.parity - 1 - i) as u64
    }

    fn syndromes(&self, word: &Bits) -> Vec<u64> {
        let mut s = alloc::vec![0u64; 2 * self.delta];
        for i in 0..self.dim + self.parity {
            if word.get(i) {
                let p = self.power(i);
                for (j, sj) in s.iter_mut().enumerate() {
                    *sj ^= self.field.exp(p * (j as u64 + 1));
                }
            }
        }
        s
    }

    /// Corrects up to `delta` substitutions anywhere in `(message, parity)`;
    /// returns the corrected codeword. Errors on padding bits are ignored.
    pub fn decode(&self, word: &Bits) -> Result<Bits> {
        assert_eq!(word.len(), self.len());
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(word.clone());
        }
        let f = &self.field;
        for nu in (1..=self.delta).rev() {
            // lambda_1..lambda_nu from the Newton identities, by elimination
            let mut a = alloc::vec![alloc::vec![0u64; nu + 1]; nu];
            for row in 0..nu {
                for col in 0..nu {
                    a[row][col] = synd[nu + row - col - 1];
                }
                a[row][nu] = synd[nu + row];
            }
            let Some(lambda) = solve(f, &mut a, nu) else {
                continue;
            };
            // Chien search over the un-shortened positions
            let mut errs = Vec::new();
            for i in 0..self.dim + self.parity {
                let xinv = f.inv(f.exp(self.power(i)));
                let mut acc = 1u64;
                let mut xp = 1u64;
                for &l in &lambda {
                    xp = f.mul(xp, xinv);
                    acc ^= f.mul(l, xp);
                }
                if acc == 0 {
                    errs.push(i);
                }
            }
            if errs.len() != nu {
                continue;
            }
            let mut fixed = word.clone();
            for &i in &errs {
                fixed.flip(i);
            }
            if self.syndromes(&fixed).iter().all(|&s| s == 0) {
                return Ok(fixed);
            }
        }
        Err(Error::DecodeFailure("BCH: no codeword within delta substitutions"))
    }

    /// Rows of a parity-check matrix in `[P^T | I]` form.
    pub fn parity_check_rows(&self) -> Vec<Bits> {
        let r = self.parity + self.pad;
        let mut rows = alloc::vec![Bits::zeros(self.len()); r];
        for i in 0..self.dim {
            let mut unit = Bits::zeros(self.dim);
            unit.set(i, true);
            let par = self.encode(&unit);
            for (j, row) in rows.iter_mut().enumerate() {
                if par.get(j) {
                    row.set(i, true);
                }
            }
        }
        for (j, row) in rows.iter_mut().enumerate() {
            row.set(self.dim + j, true);
        }
        rows
    }

    /// Syndrome `word * H^T` with the `[P^T | I]` check matrix above.
    pub fn syndrome_bits(&self, word: &Bits) -> Bits {
        assert_eq!(word.len(), self.len());
        let msg = word.slice(0, self.dim);
        let mut s = self.encode(&msg);
        for j in 0..s.len() {
            if word.get(self.dim + j) {
                s.flip(j);
            }
        }
        s
    }

    /// The canonical solution of `y * H^T = s`: zeros on the message bits.
    pub fn coset_rep(&self, s: &Bits) -> Bits {
        assert_eq!(s.len(), self.parity + self.pad);
        Bits::zeros(self.dim).concat(s)
    }

    pub fn descriptor(&self) -> super::CodeDescriptor {
        let mut rows = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut unit = Bits::zeros(self.dim);
            unit.set(i, true);
            let word = self.codeword(&unit);
            let row: Vec<u64> = word.iter().map(|b| b as u64).collect();
            rows.push(super::hex_row(&row));
        }
        super::CodeDescriptor {
            field: self.field.spec(),
            n: self.len(),
            k: self.dim,
            d: self.distance(),
            generator_rows: rows,
        }
    }
}

/// Gaussian elimination over the field; `a` is nu rows of nu+1 columns.
#[allow(clippy::needless_range_loop)]
fn solve(f: &Gf2m, a: &mut [Vec<u64>], nu: usize) -> Option<Vec<u64>> {
    for col in 0..nu {
        let pivot = (col..nu).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let inv = f.inv(a[col][col]);
        for c in col..=nu {
            a[col][c] = f.mul(a[col][c], inv);
        }
        for r in 0..nu {
            if r != col && a[r][col] != 0 {
                let factor = a[r][col];
                for c in col..=nu {
                    let v = f.mul(factor, a[col][c]);
                    a[r][c] = f.add(a[r][c], v);
                }
            }
        }
    }
    Some((0..nu).map(|i| a[i][nu]).collect())
}
