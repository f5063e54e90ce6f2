//! The set-storage channel: seeded corruption sampling, exhaustive error-ball
//! enumeration, and the ball-disjointness oracle.
//!
//! The channel drops up to `s` sequences and corrupts up to `t` of the rest,
//! each by at most `eps` errors of one kind. `verify_correcting` is the
//! ground truth every codec in this crate is tested against: it enumerates
//! error balls completely and checks pairwise disjointness, failing loudly
//! when the enumeration would exceed its budget.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::seq::{seq_unrank, space_size, Sequence, SequenceSet};
use crate::{Error, Result};

/// Default cap on enumerated candidate sets.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Per-sequence error budget; `Unbounded` is the starred regime (a corrupted
/// sequence may become arbitrary).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Eps {
    Bounded(usize),
    Unbounded,
}

impl Eps {
    pub fn effective(&self, len: usize) -> usize {
        match self {
            Eps::Bounded(e) => *e,
            Eps::Unbounded => len,
        }
    }
}

/// The error type a corrupted sequence suffers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorKind {
    /// `S`: symbol substitutions.
    Substitution,
    /// `D`: symbol deletions.
    Deletion,
    /// `L`: substitutions, deletions and insertions.
    Edit,
    /// `LM`: integer perturbations within `[-k_minus, +k_plus]`.
    LimitedMagnitude { k_plus: u16, k_minus: u16 },
}

/// The corruption contract `(s, t, eps)_T`, plus magnitudes for `LM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelSpec {
    /// Maximum number of sequences never drawn.
    pub s: usize,
    /// Maximum number of erroneous sequences.
    pub t: usize,
    /// Maximum errors per erroneous sequence.
    pub eps: Eps,
    pub kind: ErrorKind,
}

impl ChannelSpec {
    pub fn new(s: usize, t: usize, eps: Eps, kind: ErrorKind) -> Result<Self> {
        if let ErrorKind::LimitedMagnitude { k_plus, k_minus } = kind {
            if k_plus as u32 + k_minus as u32 == 0 {
                return Err(Error::InvalidParams("LM channel needs k_plus + k_minus >= 1".into()));
            }
        }
        Ok(ChannelSpec { s, t, eps, kind })
    }

    /// Parses the CLI form `s:t:eps:KIND[:kplus:kminus]`; eps is a number or
    /// `*` for the unbounded `•` regime.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 4 && parts.len() != 6 {
            return Err(Error::Parse("spec must be s:t:eps:KIND[:kplus:kminus]".into()));
        }
        let s = parts[0].parse().map_err(|_| Error::Parse("bad s".into()))?;
        let t = parts[1].parse().map_err(|_| Error::Parse("bad t".into()))?;
        let eps = match parts[2] {
            "*" | "inf" => Eps::Unbounded,
            other => Eps::Bounded(other.parse().map_err(|_| Error::Parse("bad eps".into()))?),
        };
        let kind = match (parts[3], parts.len()) {
            ("S", 4) => ErrorKind::Substitution,
            ("D", 4) => ErrorKind::Deletion,
            ("L", 4) => ErrorKind::Edit,
            ("LM", 6) => ErrorKind::LimitedMagnitude {
                k_plus: parts[4].parse().map_err(|_| Error::Parse("bad k_plus".into()))?,
                k_minus: parts[5].parse().map_err(|_| Error::Parse("bad k_minus".into()))?,
            },
            ("LM", _) => return Err(Error::Parse("LM spec needs :kplus:kminus".into())),
            _ => return Err(Error::Parse("kind must be S, D, L or LM".into())),
        };
        ChannelSpec::new(s, t, eps, kind)
    }

    pub fn format(&self) -> String {
        let eps = match self.eps {
            Eps::Bounded(e) => alloc::format!("{e}"),
            Eps::Unbounded => "*".into(),
        };
        match self.kind {
            ErrorKind::Substitution => alloc::format!("{}:{}:{}:S", self.s, self.t, eps),
            ErrorKind::Deletion => alloc::format!("{}:{}:{}:D", self.s, self.t, eps),
            ErrorKind::Edit => alloc::format!("{}:{}:{}:L", self.s, self.t, eps),
            ErrorKind::LimitedMagnitude { k_plus, k_minus } => {
                alloc::format!("{}:{}:{}:LM:{}:{}", self.s, self.t, eps, k_plus, k_minus)
            }
        }
    }
}

fn check_compat(s: &SequenceSet, spec: &ChannelSpec) -> Result<()> {
    if spec.s + spec.t > s.len() {
        return Err(Error::InvalidParams(alloc::format!(
            "spec needs s + t <= M, got {} + {} > {}",
            spec.s,
            spec.t,
            s.len()
        )));
    }
    Ok(())
}

/// One uniformly sampled admissible corruption. Deterministic per seed.
pub fn corrupt(s: &SequenceSet, spec: &ChannelSpec, seed: u64) -> Result<SequenceSet> {
    check_compat(s, spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..s.len()).collect();
    idx.shuffle(&mut rng);
    let lost = rng.gen_range(0..=spec.s);
    let survivors = &idx[lost..];
    let victims = rng.gen_range(0..=spec.t.min(survivors.len()));
    let mut out: Vec<Sequence> = Vec::with_capacity(survivors.len());
    for (pos, &i) in survivors.iter().enumerate() {
        let x = &s.elems()[i];
        if pos < victims {
            out.push(corrupt_one(x, spec, &mut rng));
        } else {
            out.push(x.clone());
        }
    }
    SequenceSet::received(s.q(), out)
}

fn corrupt_one<R: Rng>(x: &Sequence, spec: &ChannelSpec, rng: &mut R) -> Sequence {
    let eps = spec.eps.effective(x.len());
    match spec.kind {
        ErrorKind::Substitution => {
            let e = rng.gen_range(0..=eps.min(x.len()));
            let mut pos: Vec<usize> = (0..x.len()).collect();
            pos.shuffle(rng);
            let mut y = x.clone();
            for &p in &pos[..e] {
                let old = y.symbol(p) as u32;
                let next = (old + rng.gen_range(1..x.q())) % x.q();
                y = y.with_symbol(p, next as u16);
            }
            y
        }
        ErrorKind::Deletion => {
            let e = rng.gen_range(0..=eps.min(x.len()));
            let mut pos: Vec<usize> = (0..x.len()).collect();
            pos.shuffle(rng);
            let mut chosen = pos[..e].to_vec();
            chosen.sort_unstable_by(|a, b| b.cmp(a));
            let mut y = x.clone();
            for p in chosen {
                y = y.delete(p);
            }
            y
        }
        ErrorKind::Edit => {
            let e = rng.gen_range(0..=eps);
            let max_len = x.len() + eps;
            let mut y = x.clone();
            for _ in 0..e {
                let can_shrink = !y.is_empty();
                let can_grow = y.len() < max_len;
                let op = loop {
                    let op = rng.gen_range(0..3u8);
                    match op {
                        0 | 1 if can_shrink => break op,
                        2 if can_grow => break op,
                        _ if !can_shrink && !can_grow => break 3,
                        _ => continue,
                    }
                };
                match op {
                    0 => {
                        let p = rng.gen_range(0..y.len());
                        let next = (y.symbol(p) as u32 + rng.gen_range(1..x.q())) % x.q();
                        y = y.with_symbol(p, next as u16);
                    }
                    1 => {
                        let p = rng.gen_range(0..y.len());
                        y = y.delete(p);
                    }
                    2 => {
                        let p = rng.gen_range(0..=y.len());
                        y = y.insert(p, rng.gen_range(0..x.q()) as u16);
                    }
                    _ => {}
                }
            }
            y
        }
        ErrorKind::LimitedMagnitude { k_plus, k_minus } => {
            let e = rng.gen_range(0..=eps.min(x.len()));
            let mut pos: Vec<usize> = (0..x.len()).collect();
            pos.shuffle(rng);
            let mut y = x.clone();
            for &p in &pos[..e] {
                let old = y.symbol(p) as i64;
                let lo = (old - k_minus as i64).max(0);
                let hi = (old + k_plus as i64).min(x.q() as i64 - 1);
                let choices: Vec<i64> = (lo..=hi).filter(|&v| v != old).collect();
                if let Some(&v) = choices.as_slice().choose(rng) {
                    y = y.with_symbol(p, v as u16);
                }
            }
            y
        }
    }
}

/// All sequences reachable from `x` by at most `eps` errors of the given
/// kind. For `Edit`, outputs longer than `cap_len` are omitted when a cap is
/// given (decoders in this crate never inspect them).
pub fn reachable(
    x: &Sequence,
    kind: ErrorKind,
    eps: Eps,
    cap_len: Option<usize>,
    budget: u128,
) -> Result<Vec<Sequence>> {
    let e = eps.effective(x.len());
    match kind {
        ErrorKind::Substitution => {
            let mut count: u128 = 0;
            for i in 0..=e.min(x.len()) {
                count = count.saturating_add(
                    crate::arith::binomial_u128(x.len() as u64, i as u64)
                        .saturating_mul((x.q() as u128 - 1).saturating_pow(i as u32)),
                );
            }
            if count > budget {
                return Err(Error::BudgetExceeded { needed: count, budget });
            }
            let mut out = Vec::new();
            let mut cur = x.symbols().to_vec();
            subst_rec(x.q(), 0, e.min(x.len()), &mut cur, &mut out);
            Ok(out)
        }
        ErrorKind::Deletion => {
            let mut level = alloc::vec![x.clone()];
            let mut seen: BTreeSet<Sequence> = level.iter().cloned().collect();
            for _ in 0..e.min(x.len()) {
                let mut next = Vec::new();
                for w in &level {
                    for i in 0..w.len() {
                        let d = w.delete(i);
                        if seen.insert(d.clone()) {
                            next.push(d);
                        }
                    }
                }
                if seen.len() as u128 > budget {
                    return Err(Error::BudgetExceeded { needed: seen.len() as u128, budget });
                }
                level = next;
            }
            Ok(seen.into_iter().collect())
        }
        ErrorKind::Edit => reach_edit(x, e, cap_len, budget),
        ErrorKind::LimitedMagnitude { k_plus, k_minus } => {
            let mut out = Vec::new();
            lm_rec(x, 0, e.min(x.len()), k_plus, k_minus, &mut x.clone(), &mut out, budget)?;
            Ok(out)
        }
    }
}

// Each output word is reached by exactly one (positions, values) choice, so
// the enumeration is duplicate-free.
fn subst_rec(q: u32, from: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Sequence>) {
    out.push(Sequence::new(q, cur.clone()).expect("symbols stay below q"));
    if left == 0 {
        return;
    }
    for p in from..cur.len() {
        let old = cur[p];
        for v in 0..q as u16 {
            if v == old {
                continue;
            }
            cur[p] = v;
            subst_rec(q, p + 1, left - 1, cur, out);
        }
        cur[p] = old;
    }
}

#[allow(clippy::too_many_arguments)]
fn lm_rec(
    x: &Sequence,
    from: usize,
    left: usize,
    k_plus: u16,
    k_minus: u16,
    cur: &mut Sequence,
    out: &mut Vec<Sequence>,
    budget: u128,
) -> Result<()> {
    out.push(cur.clone());
    if out.len() as u128 > budget {
        return Err(Error::BudgetExceeded { needed: out.len() as u128, budget });
    }
    if left == 0 {
        return Ok(());
    }
    for p in from..x.len() {
        let old = cur.symbol(p) as i64;
        let lo = (old - k_minus as i64).max(0);
        let hi = (old + k_plus as i64).min(x.q() as i64 - 1);
        for v in lo..=hi {
            if v == old {
                continue;
            }
            *cur = cur.with_symbol(p, v as u16);
            lm_rec(x, p + 1, left - 1, k_plus, k_minus, cur, out, budget)?;
            *cur = cur.with_symbol(p, old as u16);
        }
    }
    Ok(())
}

fn reach_edit(x: &Sequence, eps: usize, cap_len: Option<usize>, budget: u128) -> Result<Vec<Sequence>> {
    let max_len = cap_len.unwrap_or(x.len() + eps).min(x.len() + eps);
    if eps >= x.len() {
        // Every word of length <= |x| is within |x| edits; longer candidates
        // are filtered by exact edit distance.
        let mut count: u128 = 0;
        for l in 0..=max_len {
            count = count.saturating_add(space_size(x.q(), l).unwrap_or(u128::MAX));
        }
        if count > budget {
            return Err(Error::BudgetExceeded { needed: count, budget });
        }
        let mut out = Vec::new();
        for l in 0..=max_len {
            for r in 0..space_size(x.q(), l).expect("within budget") {
                let w = seq_unrank(x.q(), l, r);
                if l <= x.len() || edit_distance(x, &w) <= eps {
                    out.push(w);
                }
            }
        }
        return Ok(out);
    }
    // BFS over single edits; intermediates above the cap are kept so that a
    // later deletion can bring them back under it.
    let mut seen: BTreeSet<Sequence> = BTreeSet::new();
    seen.insert(x.clone());
    let mut level = alloc::vec![x.clone()];
    for _ in 0..eps {
        let mut next = Vec::new();
        for w in &level {
            let push = |c: Sequence, seen: &mut BTreeSet<Sequence>, next: &mut Vec<Sequence>| {
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            };
            for i in 0..w.len() {
                for v in 0..x.q() as u16 {
                    if v != w.symbol(i) {
                        push(w.with_symbol(i, v), &mut seen, &mut next);
                    }
                }
                push(w.delete(i), &mut seen, &mut next);
            }
            if w.len() < x.len() + eps {
                for i in 0..=w.len() {
                    for v in 0..x.q() as u16 {
                        push(w.insert(i, v), &mut seen, &mut next);
                    }
                }
            }
        }
        if seen.len() as u128 > budget {
            return Err(Error::BudgetExceeded { needed: seen.len() as u128, budget });
        }
        level = next;
    }
    Ok(seen.into_iter().filter(|w| w.len() <= max_len).collect())
}

/// Levenshtein distance.
pub fn edit_distance(a: &Sequence, b: &Sequence) -> usize {
    let (n, m) = (a.len(), b.len());
    let mut prev: Vec<usize> = (0..=m).collect();
    let mut cur = alloc::vec![0usize; m + 1];
    for i in 1..=n {
        cur[0] = i;
        for j in 1..=m {
            let sub = prev[j - 1] + (a.symbol(i - 1) != b.symbol(j - 1)) as usize;
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// The exhaustive error ball of a codeword set.
#[derive(Debug, Clone)]
pub struct ErrorBall {
    pub center: SequenceSet,
    pub spec: ChannelSpec,
    pub members: Vec<SequenceSet>,
}

/// Complete, deduplicated error-ball enumeration.
pub fn error_ball(s: &SequenceSet, spec: &ChannelSpec, budget: u128) -> Result<ErrorBall> {
    let mut members = BTreeSet::new();
    stream_ball(s, spec, budget, None, |m| {
        members.insert(m.clone());
        Ok(())
    })?;
    Ok(ErrorBall { center: s.clone(), spec: *spec, members: members.into_iter().collect() })
}

/// Visits every ball member (possibly with repeats). With `cap_len = Some(L)`
/// the enumeration omits members containing sequences longer than `L`; only
/// meaningful for `Edit` with large eps, where decoders ignore such words.
pub fn stream_ball(
    s: &SequenceSet,
    spec: &ChannelSpec,
    budget: u128,
    cap_len: Option<usize>,
    mut visit: impl FnMut(&SequenceSet) -> Result<()>,
) -> Result<()> {
    check_compat(s, spec)?;
    let m = s.len();
    let elems = s.elems();
    // Budget estimate: loss patterns times per-victim reach sizes.
    let mut reaches: Vec<Vec<Sequence>> = Vec::with_capacity(m);
    for x in elems {
        reaches.push(reachable(x, spec.kind, spec.eps, cap_len, budget)?);
    }
    let mut estimate: u128 = 0;
    for lost in 0..=spec.s.min(m) {
        let vt = spec.t.min(m - lost);
        let loss_ways = crate::arith::binomial_u128(m as u64, lost as u64);
        let max_reach = reaches.iter().map(|r| r.len() as u128).max().unwrap_or(1);
        estimate = estimate.saturating_add(
            loss_ways
                .saturating_mul(crate::arith::binomial_u128((m - lost) as u64, vt as u64))
                .saturating_mul(max_reach.saturating_pow(vt as u32)),
        );
    }
    if estimate > budget {
        return Err(Error::BudgetExceeded { needed: estimate, budget });
    }

    let mut lost_sel = Vec::new();
    enumerate_losses(s, spec, &reaches, &mut lost_sel, 0, &mut visit)
}

fn enumerate_losses(
    s: &SequenceSet,
    spec: &ChannelSpec,
    reaches: &[Vec<Sequence>],
    lost: &mut Vec<usize>,
    from: usize,
    visit: &mut impl FnMut(&SequenceSet) -> Result<()>,
) -> Result<()> {
    // Corruption patterns for the current loss set.
    let survivors: Vec<usize> = (0..s.len()).filter(|i| !lost.contains(i)).collect();
    let vt = spec.t.min(survivors.len());
    let mut victims = Vec::new();
    enumerate_victims(s, reaches, &survivors, vt, 0, &mut victims, visit)?;
    if lost.len() < spec.s {
        for i in from..s.len() {
            lost.push(i);
            enumerate_losses(s, spec, reaches, lost, i + 1, visit)?;
            lost.pop();
        }
    }
    Ok(())
}

fn enumerate_victims(
    s: &SequenceSet,
    reaches: &[Vec<Sequence>],
    survivors: &[usize],
    vt: usize,
    from: usize,
    victims: &mut Vec<usize>,
    visit: &mut impl FnMut(&SequenceSet) -> Result<()>,
) -> Result<()> {
    if victims.len() == vt {
        // Odometer over the victims' reach sets; identity corruptions are in
        // the reach sets, so smaller victim counts are covered.
        let mut choice = alloc::vec![0usize; vt];
        loop {
            let mut elems: Vec<Sequence> = Vec::with_capacity(survivors.len());
            for &i in survivors {
                match victims.iter().position(|&v| v == i) {
                    Some(k) => elems.push(reaches[i][choice[k]].clone()),
                    None => elems.push(s.elems()[i].clone()),
                }
            }
            let member = SequenceSet::received(s.q(), elems)?;
            visit(&member)?;
            // advance odometer
            let mut k = 0;
            loop {
                if k == vt {
                    return Ok(());
                }
                choice[k] += 1;
                if choice[k] < reaches[victims[k]].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }
    for idx in from..survivors.len() {
        victims.push(survivors[idx]);
        enumerate_victims(s, reaches, survivors, vt, idx + 1, victims, visit)?;
        victims.pop();
    }
    Ok(())
}

/// Result of a disjointness check over a codebook.
#[derive(Debug, Clone)]
pub enum Verdict {
    Correcting,
    Confusable { i: usize, j: usize, common: SequenceSet },
}

/// True (with witness on failure) iff all pairwise error balls are disjoint.
pub fn verify_correcting(
    codebook: &[SequenceSet],
    spec: &ChannelSpec,
    budget: u128,
) -> Result<Verdict> {
    let mut balls: Vec<Vec<SequenceSet>> = Vec::with_capacity(codebook.len());
    let mut used: u128 = 0;
    for s in codebook {
        let ball = error_ball(s, spec, budget.saturating_sub(used))?;
        used = used.saturating_add(ball.members.len() as u128);
        balls.push(ball.members);
    }
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            // both sorted ascending (BTreeSet order): merge scan
            let (a, b) = (&balls[i], &balls[j]);
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    core::cmp::Ordering::Less => x += 1,
                    core::cmp::Ordering::Greater => y += 1,
                    core::cmp::Ordering::Equal => {
                        return Ok(Verdict::Confusable { i, j, common: a[x].clone() });
                    }
                }
            }
        }
    }
    Ok(Verdict::Correcting)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::all_sequences;
    use alloc::vec;

    fn bin(sym: &[u16]) -> Sequence {
        Sequence::new(2, sym.to_vec()).unwrap()
    }

    fn spec(s: usize, t: usize, eps: Eps, kind: ErrorKind) -> ChannelSpec {
        ChannelSpec::new(s, t, eps, kind).unwrap()
    }

    #[test]
    fn spec_string_round_trip() {
        for text in ["0:1:2:S", "1:0:*:D", "2:1:3:L", "0:1:*:LM:1:0"] {
            let sp = ChannelSpec::parse(text).unwrap();
            assert_eq!(sp.format(), text);
        }
        assert!(ChannelSpec::parse("1:2:S").is_err());
        assert!(ChannelSpec::parse("0:1:2:LM").is_err());
    }

    #[test]
    fn identity_channel() {
        let s = SequenceSet::codeword(2, 2, vec![bin(&[0, 0]), bin(&[1, 1])]).unwrap();
        let sp = spec(0, 0, Eps::Bounded(0), ErrorKind::Substitution);
        for seed in 0..50 {
            assert_eq!(corrupt(&s, &sp, seed).unwrap(), s);
        }
        let ball = error_ball(&s, &sp, DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.members, vec![s]);
    }

    #[test]
    fn loss_only_examples() {
        let s = SequenceSet::codeword(2, 2, vec![bin(&[0, 0]), bin(&[1, 1])]).unwrap();
        let sp = spec(1, 0, Eps::Bounded(0), ErrorKind::Substitution);
        for seed in 0..50 {
            let out = corrupt(&s, &sp, seed).unwrap();
            assert!(!out.is_empty() && out.len() <= 2);
            for x in out.iter() {
                assert!(s.contains(x));
            }
        }
        let ball = error_ball(&s, &sp, DEFAULT_BUDGET).unwrap();
        assert_eq!(ball.members.len(), 3); // {00,11}, {00}, {11}
    }

    #[test]
    fn single_substitution_ball() {
        let s = SequenceSet::codeword(2, 2, vec![bin(&[0, 0])]).unwrap();
        let sp = spec(0, 1, Eps::Bounded(1), ErrorKind::Substitution);
        let ball = error_ball(&s, &sp, DEFAULT_BUDGET).unwrap();
        let expect: Vec<SequenceSet> = [[0, 0], [1, 0], [0, 1]]
            .iter()
            .map(|sym| SequenceSet::codeword(2, 2, vec![bin(sym)]).unwrap())
            .collect();
        for e in &expect {
            assert!(ball.members.contains(e));
        }
        assert_eq!(ball.members.len(), 3);
    }

    #[test]
    fn deletion_output_lengths() {
        let s = SequenceSet::codeword(2, 3, vec![bin(&[1, 0, 1]), bin(&[0, 1, 0])]).unwrap();
        let sp = spec(0, 1, Eps::Bounded(1), ErrorKind::Deletion);
        let ball = error_ball(&s, &sp, DEFAULT_BUDGET).unwrap();
        for m in &ball.members {
            for x in m.iter() {
                assert!(x.len() >= 2, "kind D output below L - eps");
            }
        }
        // each member: one word replaced by a length-2 subsequence, or unchanged
        for m in &ball.members {
            let changed: Vec<&Sequence> = m.iter().filter(|x| !s.contains(x)).collect();
            assert!(changed.len() <= 1);
        }
    }

    #[test]
    fn corrupt_lands_in_ball() {
        let s = SequenceSet::codeword(2, 3, vec![bin(&[1, 0, 1]), bin(&[0, 1, 0])]).unwrap();
        for kind in [
            ErrorKind::Substitution,
            ErrorKind::Deletion,
            ErrorKind::Edit,
            ErrorKind::LimitedMagnitude { k_plus: 1, k_minus: 0 },
        ] {
            let sp = spec(1, 1, Eps::Bounded(1), kind);
            let ball = error_ball(&s, &sp, DEFAULT_BUDGET).unwrap();
            for seed in 0..10_000 {
                let out = corrupt(&s, &sp, seed).unwrap();
                assert!(ball.members.contains(&out), "{kind:?} seed {seed} escaped the ball");
            }
        }
    }

    #[test]
    fn ball_monotonicity_and_kind_nesting() {
        let s = SequenceSet::codeword(2, 3, vec![bin(&[1, 0, 1]), bin(&[0, 1, 0])]).unwrap();
        let small = error_ball(&s, &spec(0, 1, Eps::Bounded(1), ErrorKind::Substitution), DEFAULT_BUDGET)
            .unwrap();
        let large = error_ball(&s, &spec(1, 1, Eps::Bounded(2), ErrorKind::Substitution), DEFAULT_BUDGET)
            .unwrap();
        for m in &small.members {
            assert!(large.members.contains(m));
        }
        let edit = error_ball(&s, &spec(0, 1, Eps::Bounded(1), ErrorKind::Edit), DEFAULT_BUDGET).unwrap();
        for m in &small.members {
            assert!(edit.members.contains(m), "S-ball not inside L-ball");
        }
        let del = error_ball(&s, &spec(0, 1, Eps::Bounded(1), ErrorKind::Deletion), DEFAULT_BUDGET).unwrap();
        for m in &del.members {
            assert!(edit.members.contains(m), "D-ball not inside L-ball");
        }
    }

    #[test]
    fn unbounded_edit_reach_is_all_short_words() {
        let x = bin(&[1, 0, 1]);
        let r = reachable(&x, ErrorKind::Edit, Eps::Unbounded, Some(3), DEFAULT_BUDGET).unwrap();
        // all words of length <= 3: 1 + 2 + 4 + 8 = 15
        assert_eq!(r.len(), 15);
        // without a cap, longer words must pass the exact edit-distance filter
        let full = reachable(&x, ErrorKind::Edit, Eps::Unbounded, None, DEFAULT_BUDGET).unwrap();
        for w in &full {
            assert!(edit_distance(&x, w) <= 3);
        }
        assert!(full.len() > r.len());
    }

    #[test]
    fn small_eps_edit_reach_matches_distance() {
        let x = bin(&[1, 0, 1, 1]);
        let r = reachable(&x, ErrorKind::Edit, Eps::Bounded(1), None, DEFAULT_BUDGET).unwrap();
        for l in 0..=5usize {
            for rank in 0..space_size(2, l).unwrap() {
                let w = seq_unrank(2, l, rank);
                assert_eq!(
                    r.contains(&w),
                    edit_distance(&x, &w) <= 1,
                    "reach mismatch at {w:?}"
                );
            }
        }
    }

    #[test]
    fn verify_correcting_examples() {
        // identical codewords: confusable, witness is the codeword itself
        let s1 = SequenceSet::codeword(2, 2, vec![bin(&[0, 0]), bin(&[1, 1])]).unwrap();
        let sp = spec(0, 0, Eps::Bounded(0), ErrorKind::Substitution);
        match verify_correcting(&[s1.clone(), s1.clone()], &sp, DEFAULT_BUDGET).unwrap() {
            Verdict::Confusable { common, .. } => assert_eq!(common, s1),
            _ => panic!("identical codewords must be confusable"),
        }
        // {00} vs {11} with one substitution: both balls contain {01}
        let a = SequenceSet::codeword(2, 2, vec![bin(&[0, 0])]).unwrap();
        let b = SequenceSet::codeword(2, 2, vec![bin(&[1, 1])]).unwrap();
        let sp1 = spec(0, 1, Eps::Bounded(1), ErrorKind::Substitution);
        match verify_correcting(&[a, b], &sp1, DEFAULT_BUDGET).unwrap() {
            Verdict::Confusable { .. } => {}
            _ => panic!("distance-2 singletons cannot correct one substitution"),
        }
        // {000} vs {111}: distance 3, radius-1 balls disjoint
        let a3 = SequenceSet::codeword(2, 3, vec![bin(&[0, 0, 0])]).unwrap();
        let b3 = SequenceSet::codeword(2, 3, vec![bin(&[1, 1, 1])]).unwrap();
        match verify_correcting(&[a3, b3], &sp1, DEFAULT_BUDGET).unwrap() {
            Verdict::Correcting => {}
            v => panic!("expected disjoint balls, got {v:?}"),
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = SequenceSet::codeword(2, 8, (0..4).map(|i| seq_unrank(2, 8, i)).collect()).unwrap();
        let sp = spec(0, 2, Eps::Unbounded, ErrorKind::Edit);
        match error_ball(&s, &sp, 1000) {
            Err(Error::BudgetExceeded { .. }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn collisions_deduplicate() {
        // victim corrupted onto another codeword sequence shrinks the set
        let all: Vec<Sequence> = all_sequences(2, 2).collect();
        let s = SequenceSet::codeword(2, 2, all).unwrap();
        let sp = spec(0, 1, Eps::Bounded(1), ErrorKind::Substitution);
        let ball = error_ball(&s, &sp, DEFAULT_BUDGET).unwrap();
        assert!(ball.members.iter().any(|m| m.len() == 3));
    }
}
