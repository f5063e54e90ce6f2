//! Finite fields: GF(2^m) with runtime-chosen modulus, and GF(p).
//!
//! Elements are carried as `u64`. GF(2^m) keeps log/exp tables for m <= 16;
//! larger degrees (used by wide Reed-Solomon payload symbols) fall back to
//! shift-and-xor multiplication.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Carry-less product of two GF(2) polynomials (bit i = coefficient of x^i).
pub fn poly_mul(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    let mut a = a;
    let mut shift = 0;
    while a != 0 {
        if a & 1 == 1 {
            acc ^= b << shift;
        }
        a >>= 1;
        shift += 1;
    }
    acc
}

pub fn poly_deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` over GF(2).
pub fn poly_rem(mut a: u128, m: u128) -> u128 {
    let dm = poly_deg(m);
    debug_assert!(dm >= 0);
    while poly_deg(a) >= dm {
        a ^= m << (poly_deg(a) - dm);
    }
    a
}

pub fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: u128, b: u128, m: u128) -> u128 {
    poly_rem(poly_mul(a, b), m)
}

/// x^(2^e) mod f by repeated squaring.
fn x_pow_pow2_mod(e: u32, f: u128) -> u128 {
    let mut y = 0b10u128; // x
    for _ in 0..e {
        y = poly_mulmod(y, y, f);
    }
    y
}

/// Complete irreducibility test over GF(2): `f` has a degree-d factor iff
/// gcd(x^(2^d) - x, f) is nontrivial, so checking d up to deg(f)/2 decides.
pub fn is_irreducible(f: u128) -> bool {
    let m = poly_deg(f);
    if m < 1 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if f & 1 == 0 {
        return false; // divisible by x
    }
    for d in 1..=(m as u32) / 2 {
        let xp = x_pow_pow2_mod(d, f);
        if poly_gcd(xp ^ 0b10, f) != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically least irreducible polynomial of degree m
/// (smallest bitmask with bit m set). Fixed per degree so serialized code
/// descriptors are portable.
pub fn least_irreducible(m: u32) -> u64 {
    assert!((1..=63).contains(&m));
    let base = 1u128 << m;
    let mut f = base | 1;
    loop {
        if is_irreducible(f) {
            return f as u64;
        }
        f += 2;
        assert!(f < base << 1, "no irreducible of degree {m}?");
    }
}

/// Serializable description of a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u64,
    pub degree: u32,
    /// Modulus polynomial bitmask for extension fields; 0 for prime fields.
    pub modulus: u64,
}

impl FieldSpec {
    pub fn binary_ext(m: u32) -> Self {
        FieldSpec { characteristic: 2, degree: m, modulus: least_irreducible(m) }
    }

    pub fn prime(p: u64) -> Self {
        FieldSpec { characteristic: p, degree: 1, modulus: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 1 {
            if !is_prime(self.characteristic) {
                return Err(Error::InvalidParams("field characteristic must be prime".into()));
            }
            return Ok(());
        }
        if self.characteristic != 2 {
            return Err(Error::InvalidParams("extension fields are binary here".into()));
        }
        if poly_deg(self.modulus as u128) != self.degree as i32 || !is_irreducible(self.modulus as u128)
        {
            return Err(Error::InvalidParams("modulus is not irreducible of the stated degree".into()));
        }
        Ok(())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Field operations on `u64`-carried elements.
pub trait Field {
    fn spec(&self) -> FieldSpec;
    fn size(&self) -> u128;
    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    fn inv(&self, a: u64) -> u64;

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    fn pow(&self, mut a: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}

/// GF(2^m), 1 <= m <= 63.
#[derive(Debug, Clone)]
pub struct Gf2m {
    m: u32,
    modulus: u64,
    generator: u64,
    /// exp[i] = generator^i for i < 2^m - 1; only for m <= 16.
    exp: Vec<u32>,
    /// log[a] defined for a != 0.
    log: Vec<u32>,
}

impl Gf2m {
    pub fn new(m: u32) -> Self {
        Self::with_modulus(m, least_irreducible(m)).expect("least irreducible is valid")
    }

    pub fn with_modulus(m: u32, modulus: u64) -> Result<Self> {
        let spec = FieldSpec { characteristic: 2, degree: m, modulus };
        spec.validate()?;
        let mut f = Gf2m { m, modulus, generator: 0, exp: Vec::new(), log: Vec::new() };
        f.generator = f.find_generator();
        if m <= 16 {
            let order = (1u64 << m) - 1;
            let mut exp = alloc::vec![0u32; order as usize];
            let mut log = alloc::vec![0u32; 1 << m];
            let mut cur = 1u64;
            for (i, e) in exp.iter_mut().enumerate() {
                *e = cur as u32;
                log[cur as usize] = i as u32;
                cur = f.mul_slow(cur, f.generator);
            }
            debug_assert_eq!(cur, 1);
            f.exp = exp;
            f.log = log;
        }
        Ok(f)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// A fixed primitive element (its powers run through all nonzero elements).
    pub fn generator(&self) -> u64 {
        self.generator
    }

    fn order(&self) -> u64 {
        ((1u128 << self.m) - 1) as u64
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        poly_rem(poly_mul(a as u128, b as u128), self.modulus as u128) as u64
    }

    fn find_generator(&self) -> u64 {
        let order = self.order();
        let primes = prime_factors(order);
        'outer: for g in 2..=order {
            for &p in &primes {
                if self.pow_slow(g, order / p) == 1 {
                    continue 'outer;
                }
            }
            return g;
        }
        1 // m = 1
    }

    fn pow_slow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, a);
            }
            a = self.mul_slow(a, a);
            e >>= 1;
        }
        acc
    }

    /// generator^e, table-backed when available.
    pub fn exp(&self, e: u64) -> u64 {
        let e = e % self.order();
        if !self.exp.is_empty() {
            self.exp[e as usize] as u64
        } else {
            self.pow_slow(self.generator, e)
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field for Gf2m {
    fn spec(&self) -> FieldSpec {
        FieldSpec { characteristic: 2, degree: self.m, modulus: self.modulus }
    }

    fn size(&self) -> u128 {
        1u128 << self.m
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    fn neg(&self, a: u64) -> u64 {
        a
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let order = self.order();
            let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
            self.exp[(s % order) as usize] as u64
        } else {
            self.mul_slow(a, b)
        }
    }

    fn inv(&self, a: u64) -> u64 {
        assert_ne!(a, 0, "inverse of zero");
        if !self.exp.is_empty() {
            let order = self.order();
            let l = self.log[a as usize] as u64;
            self.exp[((order - l) % order) as usize] as u64
        } else {
            self.pow_slow(a, self.order() - 1)
        }
    }
}

/// GF(p) for a prime p < 2^32.
#[derive(Debug, Clone)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 32 {
            return Err(Error::InvalidParams(alloc::format!("{p} is not a small prime")));
        }
        Ok(PrimeField { p })
    }
}

impl Field for PrimeField {
    fn spec(&self) -> FieldSpec {
        FieldSpec::prime(self.p)
    }

    fn size(&self) -> u128 {
        self.p as u128
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        assert_ne!(a % self.p, 0, "inverse of zero");
        self.pow(a, (self.p - 2) as u128)
    }
}
