//! Exhaustive verifiers.
//!
//! Each verifier sweeps a whole function space (or a seeded sample of one),
//! checks one family of statements on every function or adjacent pair, and
//! returns a [`VerificationReport`]. Implementation values are cross-checked
//! against the plain transcriptions in [`reference`], and enumeration sizes
//! against closed forms, so a verifier fails if it silently skipped work.
//!
//! Every verifier accepts a [`Fault`] that corrupts the implementation side
//! (one arc value, or the direction of the half-label comparison); the
//! self-tests require each fault to be reported.

pub mod bench;
pub mod reference;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, ArcRule, ArcValue, Assignment, Color, Half, OddCycleCtx};
use crate::colorize::{self, Branch, ColorVerdict, CycleCache};
use crate::error::{Error, Result};
use crate::expo::{self, Target};
use crate::graph::{self, Graph};

const MAX_LISTED_VIOLATIONS: usize = 20;

/// Outcome of one verifier run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement: String,
    /// Cycle half-length, for verifiers over `C_{2n+1}`.
    pub n: Option<usize>,
    pub k: u32,
    pub functions: u64,
    pub expected_functions: Option<u64>,
    pub pairs: u64,
    pub expected_pairs: Option<u64>,
    pub violation_count: u64,
    /// The first few violations, in enumeration order.
    pub violations: Vec<String>,
    /// Extra counts and distributions specific to the statement.
    pub notes: BTreeMap<String, serde_json::Value>,
    pub wall_ms: f64,
}

impl VerificationReport {
    /// No violations and every enumeration count matches its closed form.
    pub fn passed(&self) -> bool {
        self.violation_count == 0
            && self.expected_functions.is_none_or(|e| e == self.functions)
            && self.expected_pairs.is_none_or(|e| e == self.pairs)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }

    fn finish(mut self, started: Instant) -> Self {
        self.wall_ms = started.elapsed().as_secs_f64() * 1e3;
        self
    }
}

/// Partial sweep result; merging is associative and keeps enumeration order.
#[derive(Clone, Debug, Default)]
struct Tally {
    functions: u64,
    pairs: u64,
    violation_count: u64,
    violations: Vec<String>,
    counters: BTreeMap<String, i64>,
}

impl Tally {
    fn violation(&mut self, msg: impl FnOnce() -> String) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED_VIOLATIONS {
            self.violations.push(msg());
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.violation(msg);
        }
    }

    fn bump(&mut self, key: impl Into<String>) {
        *self.counters.entry(key.into()).or_default() += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.functions += other.functions;
        self.pairs += other.pairs;
        self.violation_count += other.violation_count;
        let room = MAX_LISTED_VIOLATIONS.saturating_sub(self.violations.len());
        self.violations.extend(other.violations.into_iter().take(room));
        for (key, v) in other.counters {
            *self.counters.entry(key).or_default() += v;
        }
        self
    }

    fn into_report(self, statement: &str, n: Option<usize>, k: u32) -> VerificationReport {
        VerificationReport {
            statement: statement.to_string(),
            n,
            k,
            functions: self.functions,
            expected_functions: None,
            pairs: self.pairs,
            expected_pairs: None,
            violation_count: self.violation_count,
            violations: self.violations,
            notes: self
                .counters
                .into_iter()
                .map(|(key, v)| (key, serde_json::Value::from(v)))
                .collect(),
            wall_ms: 0.0,
        }
    }
}

/// A deliberate corruption of the implementation under test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    #[default]
    None,
    /// Replace the arc value of the color pair `(i, j)` with `doubled / 2`.
    DeltaEntry { i: Color, j: Color, doubled: i64 },
    /// Decide with the half-label comparison reversed.
    FlipComparison,
}

/// Implementation-side arithmetic, optionally corrupted by a [`Fault`].
/// With [`Fault::None`] every method delegates to the library routine.
#[derive(Clone, Copy, Debug, Default)]
pub struct Arith {
    pub fault: Fault,
}

impl Arith {
    pub fn new(fault: Fault) -> Self {
        Arith { fault }
    }

    pub fn arc(&self, rule: ArcRule, i: Color, j: Color) -> ArcValue {
        match self.fault {
            Fault::DeltaEntry { i: fi, j: fj, doubled } if (fi, fj) == (i, j) => {
                ArcValue::Step(Half::from_doubled(doubled))
            }
            _ => rule.value(i, j),
        }
    }

    /// Like [`Arith::arc`], with the chord-cycle isolation rule applied.
    pub fn chord_arc(&self, rule: ArcRule, i: Color, j: Color) -> ArcValue {
        match self.fault {
            Fault::DeltaEntry { i: fi, j: fj, .. } if (fi, fj) == (i, j) => self.arc(rule, i, j),
            _ => rule.chord_value(i, j),
        }
    }

    /// Doubled arc value between colors known to be at most two steps apart.
    fn arc2(&self, rule: ArcRule, i: Color, j: Color) -> Option<i64> {
        match self.arc(rule, i, j) {
            ArcValue::Step(h) => Some(h.doubled()),
            ArcValue::Far => None,
        }
    }

    pub fn label(&self, f: &Assignment, ctx: &OddCycleCtx) -> Result<Half> {
        match self.fault {
            Fault::DeltaEntry { .. } => arith::label_with(f, ctx, |i, j| self.chord_arc(ctx.rule(), i, j)),
            _ => arith::label(f, ctx),
        }
    }

    pub fn little_path(&self, f: &Assignment, ctx: &OddCycleCtx) -> Result<Half> {
        match self.fault {
            Fault::DeltaEntry { .. } => {
                arith::little_path_with(f, ctx, |i, j| self.chord_arc(ctx.rule(), i, j))
            }
            _ => arith::little_path(f, ctx),
        }
    }

    /// The per-vertex coloring routine for the context's target.
    pub fn color(&self, f: &Assignment, ctx: &OddCycleCtx) -> Result<ColorVerdict> {
        let honest = || {
            if ctx.k() == 3 {
                colorize::color_vertex(f, ctx)
            } else {
                colorize::color_vertex_ck(f, ctx)
            }
        };
        match self.fault {
            Fault::None => honest(),
            Fault::DeltaEntry { .. } => {
                let ell = self.label(f, ctx)?;
                let p = self.little_path(f, ctx)?;
                colorize::decide(f[ctx.a()], f[ctx.b()], ell, p)
            }
            Fault::FlipComparison => {
                let mut v = honest()?;
                match v.branch {
                    Branch::EqualEndpoints => {}
                    Branch::BelowHalf => {
                        v.branch = Branch::AboveHalf;
                        v.color = f[ctx.b()];
                    }
                    Branch::AboveHalf => {
                        v.branch = Branch::BelowHalf;
                        v.color = f[ctx.a()];
                    }
                }
                Ok(v)
            }
        }
    }
}

fn target_for(k: u32) -> Result<Target> {
    match ArcRule::for_k(k)? {
        ArcRule::Complete3 => Ok(Target::K3),
        ArcRule::Cycle(k) => Ok(Target::Cycle(k)),
    }
}

/// Sweeps `f` over all `k^{2n+1}` functions in parallel.
fn sweep<F>(n: usize, k: u32, cap: u64, visit: F) -> Result<Tally>
where
    F: Fn(&mut Tally, Assignment) + Sync,
{
    let m = 2 * n + 1;
    let total = expo::space_size(k, m, cap)?;
    Ok((0..total)
        .into_par_iter()
        .fold(Tally::default, |mut t, idx| {
            t.functions += 1;
            visit(&mut t, expo::decode(idx, k, m));
            t
        })
        .reduce(Tally::default, Tally::merge))
}

fn fmt_pair(f: &Assignment, g: &Assignment) -> String {
    format!("f={f} g={g}")
}

/// For every adjacent pair `f ~ g` of `K_3^{C_{2n+1}}` and every `i`:
/// `2 D(f_i f_{i+2}) = -(D(f_i g_{i+1}) + D(g_{i+1} f_{i+2}))`.
pub fn verify_claim_map(n: usize, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let rule = ArcRule::Complete3;
    let cycle = graph::make_cycle(2 * n + 1)?;
    let m = 2 * n + 1;
    let tally = sweep(n, 3, cap, |t, f| {
        for g in expo::neighbors(&cycle, &f, Target::K3).expect("valid sweep input") {
            t.pairs += 1;
            for i in 0..m {
                let (i1, i2) = ((i + 1) % m, (i + 2) % m);
                let lhs = ops.arc2(rule, f[i], f[i2]).map(|d| 2 * d);
                let rhs = match (ops.arc2(rule, f[i], g[i1]), ops.arc2(rule, g[i1], f[i2])) {
                    (Some(x), Some(y)) => Some(-(x + y)),
                    _ => None,
                };
                t.check(lhs.is_some() && lhs == rhs, || {
                    format!("{} at i={i}: {lhs:?} vs {rhs:?}", fmt_pair(&f, &g))
                });
            }
        }
    })?;
    let mut report = tally.into_report("claim-map", Some(n), 3);
    report.expected_functions = Some(3u64.pow(m as u32));
    report.expected_pairs = Some(reference::pair_count_k3(m as u32));
    Ok(report.finish(started))
}

/// Adjacent functions have equal labels, and the label equals the value of
/// the interleaved cycle `D` (`-D/2` for `K_3`, `D` for `C_k`).
pub fn verify_label_invariance(n: usize, k: u32, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let target = target_for(k)?;
    let ctx = OddCycleCtx::canonical(n, k)?;
    let cycle = graph::make_cycle(2 * n + 1)?;
    let m = 2 * n + 1;
    let tally = sweep(n, k, cap, |t, f| {
        let mut nbrs = expo::neighbors(&cycle, &f, target).expect("valid sweep input").peekable();
        if nbrs.peek().is_none() {
            return;
        }
        let ell_f = ops.label(&f, &ctx);
        let ref_f = reference::label(target, f.values());
        t.check(ell_f.as_ref().ok().map(|h| h.doubled()) == ref_f, || {
            format!("label of {f}: {ell_f:?} vs reference {ref_f:?}")
        });
        for g in nbrs {
            t.pairs += 1;
            let ell_g = ops.label(&g, &ctx);
            let (Ok(lf), Ok(lg)) = (&ell_f, &ell_g) else {
                t.violation(|| format!("{}: label undefined for a non-isolated function", fmt_pair(&f, &g)));
                continue;
            };
            t.check(lf == lg, || format!("{}: labels {lf} != {lg}", fmt_pair(&f, &g)));
            let mut d = Some(0i64);
            for i in 0..m {
                let j = (i + 1) % m;
                for (x, y) in [(f[i], g[j]), (g[i], f[j])] {
                    d = d.zip(ops.arc2(ctx.rule(), x, y)).map(|(s, v)| s + v);
                }
            }
            let consistent = match (d, target) {
                (Some(d), Target::Complete(_)) => 2 * lf.doubled() == -d,
                (Some(d), Target::Cycle(_)) => lf.doubled() == d,
                (None, _) => false,
            };
            t.check(consistent, || {
                format!("{}: label {lf} vs interleaved cycle value {d:?}/2", fmt_pair(&f, &g))
            });
        }
    })?;
    let mut report = tally.into_report("label-invariance", Some(n), k);
    report.expected_functions = Some((k as u64).pow(m as u32));
    report.expected_pairs = Some(match target {
        Target::Cycle(k) => reference::pair_count_cycle(m as u32, k),
        Target::Complete(_) => reference::pair_count_k3(m as u32),
    });
    Ok(report.finish(started))
}

/// `l - 1 <= p_f + p_g <= l + 1` for adjacent `f, g`; records the
/// distribution of `p_f + p_g - l`.
pub fn verify_little_path_bound(n: usize, k: u32, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let target = target_for(k)?;
    let ctx = OddCycleCtx::canonical(n, k)?;
    let cycle = graph::make_cycle(2 * n + 1)?;
    let m = 2 * n + 1;
    let tally = sweep(n, k, cap, |t, f| {
        let mut nbrs = expo::neighbors(&cycle, &f, target).expect("valid sweep input").peekable();
        if nbrs.peek().is_none() {
            return;
        }
        let vals_f = ops.label(&f, &ctx).and_then(|l| Ok((l, ops.little_path(&f, &ctx)?)));
        let ref_p = reference::little_path(target, f.values(), ctx.a());
        if let Ok((_, p)) = &vals_f {
            t.check(Some(p.doubled()) == ref_p, || {
                format!("little path of {f}: {p} vs reference {ref_p:?}/2")
            });
        }
        for g in nbrs {
            t.pairs += 1;
            let vals_g = ops.little_path(&g, &ctx);
            let (Ok((ell, pf)), Ok(pg)) = (&vals_f, &vals_g) else {
                t.violation(|| format!("{}: values undefined", fmt_pair(&f, &g)));
                continue;
            };
            let excess = (*pf + *pg - *ell).doubled();
            t.check((-2..=2).contains(&excess), || {
                format!("{}: p_f + p_g - l = {}/2", fmt_pair(&f, &g), excess)
            });
            t.bump(format!("excess {}", Half::from_doubled(excess)));
        }
    })?;
    let mut report = tally.into_report("little-path-bound", Some(n), k);
    report.expected_functions = Some((k as u64).pow(m as u32));
    report.expected_pairs = Some(match target {
        Target::Cycle(k) => reference::pair_count_cycle(m as u32, k),
        Target::Complete(_) => reference::pair_count_k3(m as u32),
    });
    Ok(report.finish(started))
}

/// Colors every function of the space that the routine accepts and checks
/// its certificate against the reference values.
fn certified_verdicts(
    n: usize,
    k: u32,
    cap: u64,
    ops: Arith,
    per_function: impl Fn(&mut Tally, &Assignment, &OddCycleCtx) + Sync,
) -> Result<(Tally, Vec<Option<ColorVerdict>>)> {
    let target = target_for(k)?;
    let ctx = OddCycleCtx::canonical(n, k)?;
    let m = 2 * n + 1;
    let total = expo::space_size(k, m, cap)?;
    let (tally, verdicts) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut t = Tally {
                functions: 1,
                ..Tally::default()
            };
            let f = expo::decode(idx, k, m);
            per_function(&mut t, &f, &ctx);
            let even = reference::fixed_point_count(f.values()) % 2 == 0;
            let ref_ell = reference::label(target, f.values());
            if !even || ref_ell.is_none() {
                return (t, None);
            }
            t.bump("colored");
            let ref_p = reference::little_path(target, f.values(), ctx.a());
            match ops.color(&f, &ctx) {
                Ok(v) => {
                    if let Err(e) = v.check(f[ctx.a()], f[ctx.b()]) {
                        t.violation(|| format!("{f}: {e}"));
                    }
                    t.check(
                        Some(v.ell.doubled()) == ref_ell && Some(v.p.doubled()) == ref_p,
                        || format!("{f}: certificate {v:?} vs reference ({ref_ell:?}, {ref_p:?})/2"),
                    );
                    (t, Some(v))
                }
                Err(e) => {
                    t.violation(|| format!("{f}: coloring failed: {e}"));
                    (t, None)
                }
            }
        })
        .fold(
            || (Tally::default(), Vec::new()),
            |(acc, mut vs), (t, v)| {
                vs.push(v);
                (acc.merge(t), vs)
            },
        )
        .reduce(
            || (Tally::default(), Vec::new()),
            |(a, mut va), (b, vb)| {
                va.extend(vb);
                (a.merge(b), va)
            },
        );
    Ok((tally, verdicts))
}

/// Checks adjacent pairs among colored functions with `check_pair`.
fn sweep_colored_pairs(
    n: usize,
    target: Target,
    verdicts: &[Option<ColorVerdict>],
    check_pair: impl Fn(&mut Tally, &Assignment, &ColorVerdict, &Assignment, &ColorVerdict) + Sync,
) -> Tally {
    let m = 2 * n + 1;
    let k = target.k();
    let cycle = graph::make_cycle(m).expect("odd length");
    (0..verdicts.len())
        .into_par_iter()
        .fold(Tally::default, |mut t, idx| {
            let Some(vf) = &verdicts[idx] else {
                return t;
            };
            let f = expo::decode(idx as u64, k, m);
            for g in expo::neighbors(&cycle, &f, target).expect("valid sweep input") {
                let j = expo::encode(&g, k) as usize;
                let Some(vg) = &verdicts[j] else { continue };
                t.pairs += 1;
                if j == idx {
                    t.violation(|| format!("{f} is adjacent to itself inside the colored class"));
                    continue;
                }
                check_pair(&mut t, &f, vf, &g, vg);
            }
            t
        })
        .reduce(Tally::default, Tally::merge)
}

/// Per-function facts over all of `K_3^{C_{2n+1}}`: labels are multiples
/// of 3, little paths with distinct endpoint colors are not, and the label
/// has the parity of the fixed-point count.
pub fn verify_observations(n: usize, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let ctx = OddCycleCtx::canonical(n, 3)?;
    let tally = sweep(n, 3, cap, |t, f| {
        let (Ok(ell), Ok(p)) = (ops.label(&f, &ctx), ops.little_path(&f, &ctx)) else {
            t.violation(|| format!("{f}: label or little path undefined"));
            return;
        };
        let ref_ell = reference::label(Target::K3, f.values());
        t.check(Some(ell.doubled()) == ref_ell, || {
            format!("{f}: label {ell} vs reference {ref_ell:?}/2")
        });
        let ell = ell.doubled() / 2;
        let p = p.doubled() / 2;
        t.check(ell.rem_euclid(3) == 0, || format!("{f}: label {ell} not a multiple of 3"));
        if f[ctx.a()] != f[ctx.b()] {
            t.check(p.rem_euclid(3) != 0, || format!("{f}: little path {p} is a multiple of 3"));
        }
        let fixed = arith::fixed_point_count(&f) as i64;
        t.check((ell - fixed).rem_euclid(2) == 0, || {
            format!("{f}: label {ell} and {fixed} fixed points differ in parity")
        });
        t.bump(if fixed % 2 == 0 { "even" } else { "odd" });
    })?;
    let mut report = tally.into_report("observations", Some(n), 3);
    report.expected_functions = Some(3u64.pow((2 * n + 1) as u32));
    Ok(report.finish(started))
}

/// Colors the whole even class of `K_3^{C_{2n+1}}` with the per-vertex
/// routine and checks that adjacent functions get different colors and
/// that adjacent functions with distinct endpoint colors fall on opposite
/// sides. Every verdict's certificate is checked against the reference.
pub fn verify_proper_k3(n: usize, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let m = 2 * n + 1;
    let (mut tally, verdicts) = certified_verdicts(n, 3, cap, ops, |_, _, _| {})?;
    let pairs = sweep_colored_pairs(n, Target::K3, &verdicts, |t, f, vf, g, vg| {
        t.check(vf.color != vg.color, || {
            format!("{}: both colored {}", fmt_pair(f, g), vf.color)
        });
        if vf.branch != Branch::EqualEndpoints && vg.branch != Branch::EqualEndpoints {
            t.check(vf.branch != vg.branch, || {
                format!("{}: both on side {:?}", fmt_pair(f, g), vf.branch)
            });
        }
    });
    tally = tally.merge(pairs);
    let colored = tally.counters.get("colored").copied().unwrap_or(0) as u64;
    let expected_even = reference::even_class_count_k3(m as u32);
    tally.check(colored == expected_even, || {
        format!("colored {colored} functions, the even class has {expected_even}")
    });
    let mut report = tally.into_report("proper-k3", Some(n), 3);
    report.expected_functions = Some(3u64.pow(m as u32));
    Ok(report.finish(started))
}

/// Maps every non-isolated even-class function of `C_k^{C_{2n+1}}` to
/// `C_k` and checks that adjacent functions land on adjacent vertices. Also
/// checks that the isolation signal of the label agrees with an empty
/// neighbor stream, and that labels of non-isolated functions are integers
/// divisible by `k`.
pub fn verify_proper_ck(n: usize, k: u32, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    if k < 5 {
        return Err(Error::arg(format!("cycle target needs odd k >= 5, got {k}")));
    }
    let ops = Arith::new(fault);
    let target = target_for(k)?;
    let m = 2 * n + 1;
    let cycle = graph::make_cycle(m)?;
    let (mut tally, verdicts) = certified_verdicts(n, k, cap, ops, |t, f, ctx| {
        let brute = expo::neighbors(&cycle, f, target)
            .expect("valid sweep input")
            .next()
            .is_none();
        let ell = ops.label(f, ctx);
        let signalled = matches!(ell, Err(Error::Isolated(_)));
        t.check(brute == signalled, || {
            format!("{f}: isolation by neighbors {brute}, by label {signalled}")
        });
        if brute {
            t.bump("isolated");
            return;
        }
        t.bump("non-isolated");
        if let Ok(ell) = ell {
            let p = ops.little_path(f, ctx);
            t.check(
                ell.is_integral() && p.map(|p| p.is_integral()).unwrap_or(false),
                || format!("{f}: label {ell} or little path not integral"),
            );
            t.check(ell.doubled().rem_euclid(2 * k as i64) == 0, || {
                format!("{f}: label {ell} not a multiple of {k}")
            });
        }
    })?;
    let pairs = sweep_colored_pairs(n, target, &verdicts, |t, f, vf, g, vg| {
        t.check(target.adjacent(vf.color, vg.color), || {
            format!("{}: colors {} and {} not adjacent in C_{k}", fmt_pair(f, g), vf.color, vg.color)
        });
    });
    tally = tally.merge(pairs);
    let (non_iso, even) = reference::non_isolated_counts_cycle(m as u32, k);
    let got_non_iso = tally.counters.get("non-isolated").copied().unwrap_or(0) as u64;
    let got_even = tally.counters.get("colored").copied().unwrap_or(0) as u64;
    tally.check(got_non_iso == non_iso && got_even == even, || {
        format!("non-isolated/even counts {got_non_iso}/{got_even}, expected {non_iso}/{even}")
    });
    let mut report = tally.into_report("proper-ck", Some(n), k);
    report.expected_functions = Some((k as u64).pow(m as u32));
    Ok(report.finish(started))
}

/// The bipartition baseline properly 3-colors the even class and agrees
/// with the per-vertex routine on every function with `f(a) = f(b)`.
pub fn verify_baseline(n: usize, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let ctx = OddCycleCtx::canonical(n, 3)?;
    let baseline_started = Instant::now();
    let ke = colorize::even_class_graph(n, cap)?;
    let colors = colorize::color_graph_baseline(&ke, &ctx)?;
    let baseline_us = baseline_started.elapsed().as_micros() as i64;
    let mut t = Tally {
        functions: ke.vertices.len() as u64,
        pairs: ke.graph.edge_count() as u64,
        ..Tally::default()
    };
    t.check(graph::is_proper_coloring(&ke.graph, &colors, 3)?, || {
        "baseline coloring is not proper".into()
    });
    for (f, &c) in ke.vertices.iter().zip(&colors) {
        let v = match ops.color(f, &ctx) {
            Ok(v) => v,
            Err(e) => {
                t.violation(|| format!("{f}: coloring failed: {e}"));
                continue;
            }
        };
        if let Err(e) = v.check(f[ctx.a()], f[ctx.b()]) {
            t.violation(|| format!("{f}: {e}"));
        }
        let ref_ell = reference::label(Target::K3, f.values());
        let ref_p = reference::little_path(Target::K3, f.values(), ctx.a());
        t.check(
            Some(v.ell.doubled()) == ref_ell && Some(v.p.doubled()) == ref_p,
            || format!("{f}: certificate {v:?} vs reference ({ref_ell:?}, {ref_p:?})/2"),
        );
        if f[ctx.a()] == f[ctx.b()] {
            t.bump("equal_endpoints");
            t.check(v.branch == Branch::EqualEndpoints && v.color == c, || {
                format!("{f}: baseline {c}, routine {} ({:?})", v.color, v.branch)
            });
        }
    }
    t.counters.insert("assignments_touched".into(), 3i64.pow((2 * n + 1) as u32));
    t.counters.insert("baseline_us".into(), baseline_us);
    let mut report = t.into_report("baseline", Some(n), 3);
    report.expected_functions = Some(reference::even_class_count_k3((2 * n + 1) as u32));
    Ok(report.finish(started))
}

/// Removing the even-class functions with `f(a) = f(b)` leaves a bipartite
/// graph, and the below/above branches of the per-vertex routine form a
/// valid bipartition of it. The full even class, by contrast, is not
/// bipartite; the bipartition baseline 3-colors it.
pub fn verify_hitting_set(n: usize, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let ops = Arith::new(fault);
    let ctx = OddCycleCtx::canonical(n, 3)?;
    let ke = colorize::even_class_graph(n, cap)?;
    let (a, b) = (ctx.a(), ctx.b());
    let mut t = Tally {
        functions: ke.vertices.len() as u64,
        ..Tally::default()
    };

    let rest: Vec<usize> = (0..ke.vertices.len())
        .filter(|&i| ke.vertices[i][a] != ke.vertices[i][b])
        .collect();
    let by_definition = (0..3u64.pow((2 * n + 1) as u32))
        .map(|i| expo::decode(i, 3, 2 * n + 1))
        .filter(|f| reference::fixed_point_count(f.values()) % 2 == 0 && f[a] != f[b])
        .count();
    t.check(rest.len() == by_definition, || {
        format!("B_T has {} vertices, definition gives {by_definition}", rest.len())
    });
    t.counters.insert("bt_vertices".into(), rest.len() as i64);

    let bt = ke.graph.induced(&rest);
    t.pairs = bt.edge_count() as u64;
    t.check(graph::bipartition(&bt).is_some(), || "B_T is not bipartite".into());

    let mut side = Vec::with_capacity(rest.len());
    for &i in &rest {
        let f = &ke.vertices[i];
        match ops.color(f, &ctx) {
            Ok(v) => {
                if let Err(e) = v.check(f[a], f[b]) {
                    t.violation(|| format!("{f}: {e}"));
                }
                let ref_p = reference::little_path(Target::K3, f.values(), a);
                t.check(Some(v.p.doubled()) == ref_p, || {
                    format!("{f}: certificate little path {} vs reference {ref_p:?}/2", v.p)
                });
                side.push(Some(v.branch));
            }
            Err(e) => {
                t.violation(|| format!("{f}: coloring failed: {e}"));
                side.push(None);
            }
        }
    }
    for (u, v) in bt.edges() {
        t.check(side[u].is_some() && side[u] != side[v], || {
            format!(
                "{}: same side {:?}",
                fmt_pair(&ke.vertices[rest[u]], &ke.vertices[rest[v]]),
                side[u]
            )
        });
    }

    let full_bipartite = graph::bipartition(&ke.graph).is_some();
    t.check(!full_bipartite, || "the full even class is bipartite".into());
    match colorize::color_graph_baseline(&ke, &ctx) {
        Ok(colors) => {
            let proper = graph::is_proper_coloring(&ke.graph, &colors, 3)?;
            t.check(proper, || "baseline coloring is not proper".into());
            if proper && !full_bipartite {
                t.counters.insert("even_class_chromatic_number".into(), 3);
            }
        }
        Err(e) => t.violation(|| format!("baseline failed: {e}")),
    }
    let mut report = t.into_report("hitting-set", Some(n), 3);
    report.expected_functions = Some(reference::even_class_count_k3((2 * n + 1) as u32));
    Ok(report.finish(started))
}

fn require_not_3_colorable(h: &Graph) -> Result<usize> {
    let chi = graph::chromatic_number_exact(h)?;
    if chi < 4 {
        return Err(Error::arg(format!(
            "host has chromatic number {chi}; it must be at least 4"
        )));
    }
    Ok(chi)
}

/// Colors every non-isolated function of `K_3^h` through the general-host
/// pipeline with one shared cycle cache. Checks that all members of a
/// component restrict into the even class on the cycle chosen for the
/// component and that every edge of `K_3^h` is bichromatic.
pub fn verify_end_to_end(h: &Graph, cap: u64, fault: Fault) -> Result<VerificationReport> {
    let started = Instant::now();
    let chi = require_not_3_colorable(h)?;
    let ops = Arith::new(fault);
    let e = expo::build_exponential(h, Target::K3, cap)?;
    let mut t = Tally {
        functions: e.len() as u64,
        ..Tally::default()
    };
    t.counters.insert("host_chromatic_number".into(), chi as i64);
    let mut cache = CycleCache::new();
    let mut colors = vec![0 as Color; e.len()];
    let mut non_isolated = Vec::new();
    for comp in e.components() {
        if comp.len() == 1 && !e.has_loop(comp[0]) {
            t.bump("isolated");
            continue;
        }
        t.bump("components");
        non_isolated.extend_from_slice(&comp);
        let class = e.classify_component(&comp)?;
        t.bump(format!("class {class:?}"));
        let mut chosen = None;
        for &i in &comp {
            let f = &e.vertices()[i];
            let colored = colorize::color_in_kh(h, f, &mut cache).and_then(|kc| {
                let entry = &cache.entries()[kc.cycle_index];
                let r = expo::restrict(h, f, &entry.cycle)?;
                Ok((kc, ops.color(&r, &entry.ctx()?)?))
            });
            match colored {
                Ok((kc, v)) => {
                    colors[i] = v.color;
                    let cycle_index = *chosen.get_or_insert(kc.cycle_index);
                    let entry = &cache.entries()[cycle_index];
                    let r = expo::restrict(h, f, &entry.cycle)?;
                    t.check(reference::fixed_point_count(r.values()) % 2 == 0, || {
                        format!("{f}: odd fixed-point count on its component's cycle")
                    });
                    t.check(kc.cycle_index == cycle_index, || {
                        format!("{f}: used cycle {} instead of {cycle_index}", kc.cycle_index)
                    });
                    let ctx = entry.ctx()?;
                    let ref_p = reference::little_path(Target::K3, r.values(), ctx.a());
                    if let Err(err) = v.check(r[ctx.a()], r[ctx.b()]) {
                        t.violation(|| format!("{f}: {err}"));
                    }
                    t.check(Some(v.p.doubled()) == ref_p, || {
                        format!("{f}: certificate little path {} vs reference {ref_p:?}/2", v.p)
                    });
                }
                Err(err) => t.violation(|| format!("{f}: {err}")),
            }
        }
        for &i in &comp {
            for &j in e.neighbors(i) {
                if i < j {
                    t.pairs += 1;
                    t.check(colors[i] != colors[j], || {
                        fmt_pair(&e.vertices()[i], &e.vertices()[j]) + " share a color"
                    });
                }
            }
        }
    }
    non_isolated.sort_unstable();
    t.counters.insert("non_isolated".into(), non_isolated.len() as i64);
    t.counters.insert("cache_entries".into(), cache.len() as i64);
    let union = e.graph().induced(&non_isolated);
    match graph::chromatic_number_exact(&union) {
        Ok(chi) => {
            t.counters.insert("non_isolated_chromatic_number".into(), chi as i64);
        }
        Err(Error::Capacity { .. }) => {}
        Err(err) => return Err(err),
    }
    let mut report = t.into_report("end-to-end", None, 3);
    report.expected_functions = Some(3u64.pow(h.vertex_count() as u32));
    Ok(report.finish(started))
}

/// A uniformly random neighbor of a non-isolated `f`.
pub fn random_neighbor<R: Rng + ?Sized>(h: &Graph, f: &Assignment, rng: &mut R) -> Result<Assignment> {
    let stream = expo::neighbors(h, f, Target::K3)?;
    let allowed = stream.allowed();
    if allowed.iter().any(Vec::is_empty) {
        return Err(Error::Isolated(format!("{f} has no neighbor")));
    }
    Ok(Assignment::from(
        allowed
            .iter()
            .map(|set| set[rng.gen_range(0..set.len())])
            .collect::<Vec<_>>(),
    ))
}

/// Seeded sampling version of [`verify_end_to_end`] for hosts whose
/// exponential graph is too large to enumerate: draws `samples` uniform
/// non-isolated functions, colors each together with a random neighbor,
/// and checks that the two colors differ. A fresh cycle search is also
/// run for every sample, independent of the cache.
pub fn verify_sampled_end_to_end(
    h: &Graph,
    samples: u64,
    seed: u64,
    fault: Fault,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let chi = require_not_3_colorable(h)?;
    let ops = Arith::new(fault);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = CycleCache::new();
    let mut t = Tally::default();
    t.counters.insert("host_chromatic_number".into(), chi as i64);
    let m = h.vertex_count();
    let color_one = |t: &mut Tally, cache: &mut CycleCache, f: &Assignment| -> Option<(usize, Color)> {
        let kc = match colorize::color_in_kh(h, f, cache) {
            Ok(kc) => kc,
            Err(err) => {
                t.violation(|| format!("{f}: {err}"));
                return None;
            }
        };
        if kc.searched {
            t.bump("cycle_searches");
        }
        let entry = &cache.entries()[kc.cycle_index];
        let r = expo::restrict(h, f, &entry.cycle).ok()?;
        t.check(reference::fixed_point_count(r.values()) % 2 == 0, || {
            format!("{f}: odd fixed-point count on its cycle")
        });
        let ctx = entry.ctx().ok()?;
        match ops.color(&r, &ctx) {
            Ok(v) => {
                if let Err(err) = v.check(r[ctx.a()], r[ctx.b()]) {
                    t.violation(|| format!("{f}: {err}"));
                }
                Some((kc.cycle_index, v.color))
            }
            Err(err) => {
                t.violation(|| format!("{f}: {err}"));
                None
            }
        }
    };
    while t.functions < samples {
        let f = Assignment::from((0..m).map(|_| rng.gen_range(1..=3)).collect::<Vec<_>>());
        if expo::is_isolated(h, &f, Target::K3)? {
            t.bump("rejected_isolated");
            continue;
        }
        t.functions += 1;
        match colorize::find_even_cycle(h, &f, m) {
            Ok(_) => t.bump("even_cycle_found"),
            Err(err) => t.violation(|| format!("{f}: no even-class cycle: {err}")),
        }
        let g = random_neighbor(h, &f, &mut rng)?;
        let (Some((cf, color_f)), Some((cg, color_g))) =
            (color_one(&mut t, &mut cache, &f), color_one(&mut t, &mut cache, &g))
        else {
            continue;
        };
        t.pairs += 1;
        t.check(cf == cg, || format!("{}: colored via cycles {cf} and {cg}", fmt_pair(&f, &g)));
        t.check(color_f != color_g, || format!("{}: both colored {color_f}", fmt_pair(&f, &g)));
    }
    t.counters.insert("cache_entries".into(), cache.len() as i64);
    let mut report = t.into_report("sampled-end-to-end", None, 3);
    report.expected_functions = Some(samples);
    report.expected_pairs = Some(samples);
    report.notes.insert("seed".into(), seed.into());
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expo::DEFAULT_CAP;
    use crate::graph::make_complete;

    const CORRUPT_12: Fault = Fault::DeltaEntry {
        i: 1,
        j: 2,
        doubled: 0,
    };
    const CORRUPT_13_C5: Fault = Fault::DeltaEntry {
        i: 1,
        j: 3,
        doubled: 0,
    };

    #[test]
    fn honest_runs_pass() {
        for n in 1..=2 {
            assert!(verify_claim_map(n, DEFAULT_CAP, Fault::None).unwrap().passed());
            assert!(verify_label_invariance(n, 3, DEFAULT_CAP, Fault::None).unwrap().passed());
            assert!(verify_little_path_bound(n, 3, DEFAULT_CAP, Fault::None).unwrap().passed());
            assert!(verify_observations(n, DEFAULT_CAP, Fault::None).unwrap().passed());
            assert!(verify_proper_k3(n, DEFAULT_CAP, Fault::None).unwrap().passed());
            assert!(verify_baseline(n, DEFAULT_CAP, Fault::None).unwrap().passed());
            assert!(verify_hitting_set(n, DEFAULT_CAP, Fault::None).unwrap().passed());
        }
        assert!(verify_proper_ck(1, 5, DEFAULT_CAP, Fault::None).unwrap().passed());
        assert!(verify_label_invariance(1, 7, DEFAULT_CAP, Fault::None).unwrap().passed());
    }

    #[test]
    fn constant_pairs_have_zero_values() {
        let ctx = OddCycleCtx::canonical(3, 3).unwrap();
        let (f, g) = (Assignment::constant(7, 1), Assignment::constant(7, 2));
        assert_eq!(arith::label(&f, &ctx).unwrap(), Half::ZERO);
        assert_eq!(arith::label(&g, &ctx).unwrap(), Half::ZERO);
        assert_eq!(arith::little_path(&f, &ctx).unwrap(), Half::ZERO);
        assert_eq!(arith::little_path(&g, &ctx).unwrap(), Half::ZERO);
    }

    #[test]
    fn delta_corruption_is_detected() {
        let n = 1;
        assert!(!verify_claim_map(n, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_label_invariance(n, 3, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_little_path_bound(n, 3, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_observations(n, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_proper_k3(n, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_baseline(n, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_hitting_set(n, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
        assert!(!verify_proper_ck(1, 5, DEFAULT_CAP, CORRUPT_13_C5).unwrap().passed());
        assert!(!verify_label_invariance(1, 5, DEFAULT_CAP, CORRUPT_13_C5).unwrap().passed());
        let k4 = make_complete(4).unwrap();
        assert!(!verify_end_to_end(&k4, DEFAULT_CAP, CORRUPT_12).unwrap().passed());
    }

    #[test]
    fn comparison_flip_is_detected() {
        let flip = Fault::FlipComparison;
        assert!(!verify_proper_k3(1, DEFAULT_CAP, flip).unwrap().passed());
        assert!(!verify_proper_ck(1, 5, DEFAULT_CAP, flip).unwrap().passed());
        assert!(!verify_baseline(1, DEFAULT_CAP, flip).unwrap().passed());
        assert!(!verify_hitting_set(1, DEFAULT_CAP, flip).unwrap().passed());
        let k4 = make_complete(4).unwrap();
        assert!(!verify_end_to_end(&k4, DEFAULT_CAP, flip).unwrap().passed());
        let grotzsch = graph::make_mycielski(&graph::make_cycle(5).unwrap());
        assert!(!verify_sampled_end_to_end(&grotzsch, 50, 0, flip).unwrap().passed());
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(
            verify_proper_k3(10, DEFAULT_CAP, Fault::None),
            Err(Error::Capacity { .. })
        ));
        assert!(verify_end_to_end(&graph::make_cycle(5).unwrap(), DEFAULT_CAP, Fault::None).is_err());
    }

    #[test]
    fn reports_serialize_as_single_lines() {
        let r = verify_claim_map(1, DEFAULT_CAP, Fault::None).unwrap();
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        let back: VerificationReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back.pairs, 66);
        assert_eq!(back.functions, 27);
    }
}
