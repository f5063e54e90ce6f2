//! Text formats shared with the CLI: message files, params descriptions,
//! and a family dispatcher.
//!
//! Message files are line-based: `rank <decimal>` for big integers,
//! `bits <01...>` for bit strings, `int <decimal>` for machine integers and
//! `sym <v v v ...>` for q-ary symbol rows. Each codec family consumes a
//! fixed item sequence, documented in the README.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::rand_below;
use crate::bits::Bits;
use crate::bullet::{Bullet, BulletMessage, BulletParams};
use crate::channel::ChannelSpec;
use crate::concat::{Concat, InnerCode, Outcode, OutcodeMessage, OutcodeParams};
use crate::lm::{LmCode, LmMessage, LmParams, ModWrap, ModWrapMessage, ModWrapParams};
use crate::noloss::{HashSum, HashSumParams, Tcon, TconMessage, TconParams};
use crate::seq::SequenceSet;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MsgItem {
    Big(BigUint),
    Bits(Bits),
    Int(u64),
    Syms(Vec<u16>),
}

pub fn message_to_text(items: &[MsgItem]) -> String {
    let mut out = String::new();
    for item in items {
        match item {
            MsgItem::Big(v) => out.push_str(&alloc::format!("rank {v}\n")),
            MsgItem::Bits(b) => out.push_str(&alloc::format!("bits {b}\n")),
            MsgItem::Int(v) => out.push_str(&alloc::format!("int {v}\n")),
            MsgItem::Syms(v) => {
                let row: Vec<String> = v.iter().map(|x| alloc::format!("{x}")).collect();
                out.push_str(&alloc::format!("sym {}\n", row.join(" ")));
            }
        }
    }
    out
}

pub fn message_from_text(text: &str) -> Result<Vec<MsgItem>> {
    let mut items = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
        let rest = rest.trim();
        match tag {
            "rank" => items.push(MsgItem::Big(
                rest.parse().map_err(|_| Error::Parse(alloc::format!("bad rank {rest:?}")))?,
            )),
            "bits" => items.push(MsgItem::Bits(Bits::parse(rest)?)),
            "int" => items.push(MsgItem::Int(
                rest.parse().map_err(|_| Error::Parse(alloc::format!("bad int {rest:?}")))?,
            )),
            "sym" => {
                let row: Result<Vec<u16>> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Parse(alloc::format!("bad symbol {t:?}"))))
                    .collect();
                items.push(MsgItem::Syms(row?));
            }
            other => return Err(Error::Parse(alloc::format!("unknown message line {other:?}"))),
        }
    }
    Ok(items)
}

/// Which inner block code a concatenated instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerKind {
    Substitution,
    Deletion,
}

/// The JSON params file: one tagged variant per codec family.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ParamsFile {
    Bullet { params: BulletParams },
    Outcode { params: OutcodeParams },
    Concat { outer: OutcodeParams, eps: usize, inner: InnerKind },
    Hashsum { params: HashSumParams },
    Tcon { params: TconParams, address_budget: Option<u64> },
    Lm { params: LmParams },
    Modwrap { params: ModWrapParams, inner: TconParams, address_budget: Option<u64> },
}

/// A constructed codec of any family, with a uniform item-level interface.
pub enum Codec {
    Bullet(Bullet),
    Outcode(Outcode),
    Concat(Concat),
    HashSum(HashSum),
    Tcon(Tcon),
    Lm(LmCode),
    ModWrap(ModWrap),
}

const DEFAULT_ADDRESS_BUDGET: u64 = 1 << 22;

impl Codec {
    pub fn from_params(file: &ParamsFile) -> Result<Codec> {
        Ok(match file {
            ParamsFile::Bullet { params } => Codec::Bullet(Bullet::new(*params)?),
            ParamsFile::Outcode { params } => Codec::Outcode(Outcode::new(*params)?),
            ParamsFile::Concat { outer, eps, inner } => {
                let outer = Outcode::new(*outer)?;
                let inner = match inner {
                    InnerKind::Substitution => {
                        InnerCode::for_substitutions(outer.params().l_o, *eps)?
                    }
                    InnerKind::Deletion => InnerCode::for_deletions(outer.params().l_o, *eps)?,
                };
                Codec::Concat(Concat::new(outer, inner)?)
            }
            ParamsFile::Hashsum { params } => Codec::HashSum(HashSum::new(*params)?),
            ParamsFile::Tcon { params, address_budget } => Codec::Tcon(Tcon::new(
                *params,
                address_budget.unwrap_or(DEFAULT_ADDRESS_BUDGET) as u128,
            )?),
            ParamsFile::Lm { params } => Codec::Lm(LmCode::new(*params)?),
            ParamsFile::Modwrap { params, inner, address_budget } => {
                let inner =
                    Tcon::new(*inner, address_budget.unwrap_or(DEFAULT_ADDRESS_BUDGET) as u128)?;
                Codec::ModWrap(ModWrap::new(*params, inner)?)
            }
        })
    }

    pub fn family(&self) -> &'static str {
        match self {
            Codec::Bullet(_) => "bullet",
            Codec::Outcode(_) => "outcode",
            Codec::Concat(_) => "concat",
            Codec::HashSum(_) => "hashsum",
            Codec::Tcon(_) => "tcon",
            Codec::Lm(_) => "lm",
            Codec::ModWrap(_) => "modwrap",
        }
    }

    /// The channel the instance is declared to correct.
    pub fn channel_spec(&self) -> ChannelSpec {
        match self {
            Codec::Bullet(c) => c.params().channel_spec(),
            Codec::Outcode(c) => c.channel_spec(),
            Codec::Concat(c) => c.channel_spec(),
            Codec::HashSum(c) => c.channel_spec(),
            Codec::Tcon(c) => c.channel_spec(),
            Codec::Lm(c) => c.params().channel_spec(),
            Codec::ModWrap(c) => c.channel_spec(),
        }
    }

    pub fn code_size(&self) -> BigUint {
        match self {
            Codec::Bullet(c) => c.code_size(),
            Codec::Outcode(c) => c.code_size(),
            Codec::Concat(c) => c.code_size(),
            Codec::HashSum(_) => BigUint::zero(), // known only by census
            Codec::Tcon(c) => c.code_size(),
            Codec::Lm(c) => c.code_size(),
            Codec::ModWrap(c) => c.code_size(),
        }
    }

    /// Exact redundancy in bits where the size is closed-form; None for the
    /// census-only family.
    pub fn redundancy_bits(&self) -> Option<f64> {
        let size = self.code_size();
        if size.is_zero() {
            return None;
        }
        let total = match self {
            Codec::Bullet(c) => c.total_space(),
            Codec::Outcode(c) => c.total_space(),
            Codec::Concat(c) => c.total_space(),
            Codec::Tcon(c) => c.total_space(),
            Codec::Lm(c) => c.total_space(),
            Codec::ModWrap(c) => {
                let p = c.inner().params();
                crate::arith::binomial_pow2(
                    p.l as u64 * c.params().q.ilog2() as u64,
                    p.m as u64,
                )
            }
            Codec::HashSum(_) => unreachable!(),
        };
        Some(crate::arith::log2_approx(&total) - crate::arith::log2_approx(&size))
    }

    pub fn encode_items(&self, items: &[MsgItem], budget: u128) -> Result<SequenceSet> {
        match self {
            Codec::Bullet(c) => c.encode(&bullet_msg_from_items(c, items)?),
            Codec::Outcode(c) => c.encode(&outcode_msg_from_items(items)?),
            Codec::Concat(c) => c.encode(&outcode_msg_from_items(items)?),
            Codec::HashSum(c) => match items {
                [MsgItem::Big(index)] => c.encode_by_index(index, budget),
                _ => Err(Error::Parse("hashsum message is a single `rank` line".into())),
            },
            Codec::Tcon(c) => c.encode(&tcon_msg_from_items(items)?),
            Codec::Lm(c) => c.encode(&lm_msg_from_items_for(c, items)?),
            Codec::ModWrap(c) => c.encode(&modwrap_msg_from_items(c, items)?),
        }
    }

    pub fn decode_items(&self, received: &SequenceSet) -> Result<Vec<MsgItem>> {
        Ok(match self {
            Codec::Bullet(c) => bullet_msg_to_items(&c.decode(received)?),
            Codec::Outcode(c) => outcode_msg_to_items(&c.decode(received)?),
            Codec::Concat(c) => outcode_msg_to_items(&c.decode(received)?),
            Codec::HashSum(c) => {
                // the recovered codeword set itself is the answer
                let set = c.decode(received)?;
                alloc::vec![MsgItem::Big(crate::seq::subset_rank(&set)?)]
            }
            Codec::Tcon(c) => tcon_msg_to_items(&c.decode(received)?),
            Codec::Lm(c) => lm_msg_to_items(&c.decode(received)?),
            Codec::ModWrap(c) => modwrap_msg_to_items(&c.decode(received)?),
        })
    }

    /// Decodes and re-encodes, recovering the stored codeword set.
    pub fn decode_to_set(&self, received: &SequenceSet) -> Result<SequenceSet> {
        match self {
            Codec::Bullet(c) => c.encode(&c.decode(received)?),
            Codec::Outcode(c) => c.encode(&c.decode(received)?),
            Codec::Concat(c) => c.encode(&c.decode(received)?),
            Codec::HashSum(c) => c.decode(received),
            Codec::Tcon(c) => Ok(c.decode_full(received)?.1),
            Codec::Lm(c) => c.encode(&c.decode(received)?),
            Codec::ModWrap(c) => c.encode(&c.decode(received)?),
        }
    }

    /// A uniformly random codeword; deterministic given the rng state.
    pub fn sample_codeword<R: Rng>(&self, rng: &mut R, budget: u128) -> Result<SequenceSet> {
        match self {
            Codec::Bullet(c) => {
                let msg = BulletMessage {
                    address_rank: rand_below(rng, &c.address_space()),
                    head: (0..c.params().mu)
                        .map(|_| random_bits(rng, c.head_width()))
                        .collect(),
                    body: (0..c.params().m - c.params().delta - c.params().mu)
                        .map(|_| rng.gen_range(0..c.body_range()))
                        .collect(),
                };
                c.encode(&msg)
            }
            Codec::Outcode(c) => c.encode(&random_outcode_msg(rng, c)),
            Codec::Concat(c) => c.encode(&random_outcode_msg(rng, c.outer())),
            Codec::HashSum(c) => {
                // rejection sampling over uniform M-subsets
                let p = *c.params();
                let space = crate::arith::binomial(1u64 << p.l, p.m as u64);
                for _ in 0..budget.max(1) {
                    let set =
                        crate::seq::subset_unrank(&rand_below(rng, &space), 2, p.l, p.m)?;
                    if c.membership(&set) {
                        return Ok(set);
                    }
                }
                Err(Error::BudgetExceeded { needed: 0, budget })
            }
            Codec::Tcon(c) => c.encode(&random_tcon_msg(rng, c)),
            Codec::Lm(c) => {
                let p = *c.params();
                let delta = p.delta();
                let msg = LmMessage {
                    high_rank: rand_below(
                        rng,
                        &crate::arith::binomial(1u64 << p.l1, p.s as u64 + 1),
                    ),
                    others_rank: rand_below(
                        rng,
                        &crate::arith::binomial(c.others_count() as u64, (p.m - p.s - 1) as u64),
                    ),
                    head_syms: (0..p.s + 1)
                        .map(|_| random_syms(rng, c.head_width(), p.q))
                        .collect(),
                    free_syms: (0..p.m - delta - p.s - 1)
                        .map(|_| random_syms(rng, p.l - p.l1, p.q))
                        .collect(),
                };
                c.encode(&msg)
            }
            Codec::ModWrap(c) => {
                let inner_p = *c.inner().params();
                let msg = ModWrapMessage {
                    inner: random_tcon_msg(rng, c.inner()),
                    digits: (0..inner_p.m)
                        .map(|_| {
                            (0..inner_p.l)
                                .map(|_| rng.gen_range(0..c.digit_range()))
                                .collect()
                        })
                        .collect(),
                };
                c.encode(&msg)
            }
        }
    }
}

fn random_bits<R: Rng>(rng: &mut R, len: usize) -> Bits {
    Bits::from_bools((0..len).map(|_| rng.gen()).collect())
}

fn random_syms<R: Rng>(rng: &mut R, len: usize, q: u32) -> Vec<u16> {
    (0..len).map(|_| rng.gen_range(0..q) as u16).collect()
}

fn random_outcode_msg<R: Rng>(rng: &mut R, c: &Outcode) -> OutcodeMessage {
    OutcodeMessage {
        address_rank: rand_below(rng, &c.address_space()),
        payload: random_bits(rng, c.free_bits()),
    }
}

fn random_tcon_msg<R: Rng>(rng: &mut R, c: &Tcon) -> TconMessage {
    let p = *c.params();
    TconMessage {
        address_index: rng.gen_range(0..c.address_count()),
        u1_free: random_bits(rng, c.u1_free_width()),
        syndrome_syms: (0..p.m - 1 - c.r_tilde())
            .map(|_| rng.gen_range(0..1u64 << c.r()))
            .collect(),
        coset_free: (0..p.m - 1).map(|_| random_bits(rng, c.b_dim())).collect(),
    }
}

pub fn bullet_msg_to_items(msg: &BulletMessage) -> Vec<MsgItem> {
    let mut items = alloc::vec![MsgItem::Big(msg.address_rank.clone())];
    items.extend(msg.head.iter().map(|b| MsgItem::Bits(b.clone())));
    items.extend(msg.body.iter().map(|&v| MsgItem::Int(v)));
    items
}

pub fn bullet_msg_from_items(code: &Bullet, items: &[MsgItem]) -> Result<BulletMessage> {
    let p = code.params();
    let want = 1 + p.mu + (p.m - p.delta - p.mu);
    if items.len() != want {
        return Err(Error::Parse(alloc::format!(
            "bullet message needs {want} items: rank, {} bits lines, {} int lines",
            p.mu,
            p.m - p.delta - p.mu
        )));
    }
    let MsgItem::Big(rank) = &items[0] else {
        return Err(Error::Parse("first item must be `rank`".into()));
    };
    let mut head = Vec::with_capacity(p.mu);
    for item in &items[1..1 + p.mu] {
        match item {
            MsgItem::Bits(b) => head.push(b.clone()),
            _ => return Err(Error::Parse("head items must be `bits`".into())),
        }
    }
    let mut body = Vec::new();
    for item in &items[1 + p.mu..] {
        match item {
            MsgItem::Int(v) => body.push(*v),
            _ => return Err(Error::Parse("body items must be `int`".into())),
        }
    }
    Ok(BulletMessage { address_rank: rank.clone(), head, body })
}

pub fn outcode_msg_to_items(msg: &OutcodeMessage) -> Vec<MsgItem> {
    alloc::vec![MsgItem::Big(msg.address_rank.clone()), MsgItem::Bits(msg.payload.clone())]
}

pub fn outcode_msg_from_items(items: &[MsgItem]) -> Result<OutcodeMessage> {
    match items {
        [MsgItem::Big(rank), MsgItem::Bits(payload)] => Ok(OutcodeMessage {
            address_rank: rank.clone(),
            payload: payload.clone(),
        }),
        _ => Err(Error::Parse("outcode message is `rank` then `bits`".into())),
    }
}

pub fn tcon_msg_to_items(msg: &TconMessage) -> Vec<MsgItem> {
    let mut items = alloc::vec![
        MsgItem::Int(msg.address_index),
        MsgItem::Bits(msg.u1_free.clone())
    ];
    items.extend(msg.syndrome_syms.iter().map(|&v| MsgItem::Int(v)));
    items.extend(msg.coset_free.iter().map(|b| MsgItem::Bits(b.clone())));
    items
}

pub fn tcon_msg_from_items(items: &[MsgItem]) -> Result<TconMessage> {
    let [MsgItem::Int(address_index), MsgItem::Bits(u1_free), rest @ ..] = items else {
        return Err(Error::Parse("tcon message starts with `int` then `bits`".into()));
    };
    let mut syndrome_syms = Vec::new();
    let mut coset_free = Vec::new();
    for item in rest {
        match item {
            MsgItem::Int(v) if coset_free.is_empty() => syndrome_syms.push(*v),
            MsgItem::Bits(b) => coset_free.push(b.clone()),
            _ => return Err(Error::Parse("tcon message: ints then bits".into())),
        }
    }
    Ok(TconMessage {
        address_index: *address_index,
        u1_free: u1_free.clone(),
        syndrome_syms,
        coset_free,
    })
}

pub fn lm_msg_to_items(msg: &LmMessage) -> Vec<MsgItem> {
    let mut items = alloc::vec![
        MsgItem::Big(msg.high_rank.clone()),
        MsgItem::Big(msg.others_rank.clone())
    ];
    items.extend(msg.head_syms.iter().map(|v| MsgItem::Syms(v.clone())));
    items.extend(msg.free_syms.iter().map(|v| MsgItem::Syms(v.clone())));
    items
}

pub fn lm_msg_from_items_for(code: &LmCode, items: &[MsgItem]) -> Result<LmMessage> {
    let [MsgItem::Big(high), MsgItem::Big(others), rest @ ..] = items else {
        return Err(Error::Parse("lm message starts with two `rank` lines".into()));
    };
    let p = code.params();
    let heads = p.s + 1;
    let frees = p.m - p.delta() - p.s - 1;
    if rest.len() != heads + frees {
        return Err(Error::Parse(alloc::format!(
            "lm message needs {heads} head rows then {frees} free rows"
        )));
    }
    let row = |i: &MsgItem| match i {
        MsgItem::Syms(v) => Ok(v.clone()),
        _ => Err(Error::Parse("lm message rows must be `sym`".into())),
    };
    Ok(LmMessage {
        high_rank: high.clone(),
        others_rank: others.clone(),
        head_syms: rest[..heads].iter().map(row).collect::<Result<_>>()?,
        free_syms: rest[heads..].iter().map(row).collect::<Result<_>>()?,
    })
}

pub fn modwrap_msg_to_items(msg: &ModWrapMessage) -> Vec<MsgItem> {
    let mut items = tcon_msg_to_items(&msg.inner);
    items.extend(msg.digits.iter().map(|v| MsgItem::Syms(v.clone())));
    items
}

pub fn modwrap_msg_from_items(code: &ModWrap, items: &[MsgItem]) -> Result<ModWrapMessage> {
    let m = code.inner().params().m;
    if items.len() < m {
        return Err(Error::Parse("modwrap message too short".into()));
    }
    let (inner_items, digit_items) = items.split_at(items.len() - m);
    let digits: Result<Vec<Vec<u16>>> = digit_items
        .iter()
        .map(|i| match i {
            MsgItem::Syms(v) => Ok(v.clone()),
            _ => Err(Error::Parse("digit rows must be `sym`".into())),
        })
        .collect();
    Ok(ModWrapMessage { inner: tcon_msg_from_items(inner_items)?, digits: digits? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn message_text_round_trip() {
        let items = alloc::vec![
            MsgItem::Big(BigUint::from(12345u32)),
            MsgItem::Bits(Bits::parse("0101").unwrap()),
            MsgItem::Int(17),
            MsgItem::Syms(alloc::vec![0, 1, 2, 3]),
        ];
        let text = message_to_text(&items);
        assert_eq!(text, "rank 12345\nbits 0101\nint 17\nsym 0 1 2 3\n");
        assert_eq!(message_from_text(&text).unwrap(), items);
        assert!(message_from_text("bogus 1\n").is_err());
    }

    #[test]
    fn codec_dispatch_round_trip() {
        let file = ParamsFile::Bullet {
            params: BulletParams {
                m: 4,
                l: 8,
                l1: 3,
                l2: 1,
                mu: 3,
                delta: 1,
                s: 0,
                t: 1,
                kind: crate::bullet::BulletKind::Deletion,
            },
        };
        let codec = Codec::from_params(&file).unwrap();
        assert_eq!(codec.family(), "bullet");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let set = codec.sample_codeword(&mut rng, 1 << 20).unwrap();
        let items = codec.decode_items(&set).unwrap();
        let again = codec.encode_items(&items, 1 << 20).unwrap();
        assert_eq!(set, again);
        assert!(codec.redundancy_bits().unwrap() > 0.0);
    }

    #[test]
    fn code_descriptor_json_round_trip() {
        use crate::algebra::{bch_systematic, rs_code, Gf2m};
        let rs = rs_code(Gf2m::new(5), 7, 4).unwrap().descriptor();
        let json = serde_json::to_string(&rs).unwrap();
        let back: crate::algebra::CodeDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rs);
        assert_eq!(back.generator_rows.len(), 4);
        let bch = bch_systematic(4, 2).unwrap().descriptor();
        assert_eq!(bch.n, 26);
        assert_eq!(bch.d, 5);
        assert!(serde_json::to_string(&bch).unwrap().contains("\"modulus\""));
    }

    #[test]
    fn params_json_round_trip() {
        let file = ParamsFile::Tcon {
            params: TconParams { m: 4, l: 25, l_prime: 6, t: 1, eps: 1 },
            address_budget: None,
        };
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"family\":\"tcon\""));
        let back: ParamsFile = serde_json::from_str(&json).unwrap();
        let codec = Codec::from_params(&back).unwrap();
        assert_eq!(codec.family(), "tcon");
    }
}
