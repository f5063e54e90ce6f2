//! Classical-code primitives: finite fields, Reed-Solomon with error/erasure
//! decoding, shortened systematic BCH, and greedy codebooks.

mod bch;
mod gf;
mod gv;
mod rs;

pub use bch::{bch_shortened_systematic, bch_systematic, bch_with_total_len, BchCode};
pub use gf::{is_irreducible, least_irreducible, poly_deg, poly_mul, Field, FieldSpec, Gf2m, PrimeField};
pub use gv::{
    constant_weight_greedy, enumerate_address_sets, gv_address_code, gv_guarantee,
    hamming_ball_q, AddressCode,
};
pub use rs::{rs_code, RsCode};

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Portable description of a linear code: field, shape and generator rows
/// (hex, one row per message symbol).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDescriptor {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub generator_rows: Vec<String>,
}

pub(crate) fn hex_row(row: &[u64]) -> String {
    let mut s = String::new();
    for v in row {
        s.push_str(&alloc::format!("{v:x},"));
    }
    s.pop();
    s
}
