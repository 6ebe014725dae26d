//! Coloring functions of the even class, one vertex at a time.
//!
//! For `f` on `C_{2n+1}` with an even number of fixed points and a fixed
//! reference edge `(a, b)`:
//!
//! 1. if `f(a) = f(b)` the color is `f(a)`;
//! 2. otherwise compare the little-path value `p_f` with half the label
//!    `l_f`: below gives `f(a)`, above gives `f(b)`. Equality cannot occur.
//!
//! The pair `(l_f, p_f)` is the certificate carried by every
//! [`ColorVerdict`]. All comparisons are `2 p_f` against `l_f` on exact
//! integers.
//!
//! For a general host `H` a function is first restricted to an odd cycle of
//! `H` on which it has an even number of fixed points; the cycles found so
//! far live in a [`CycleCache`] that is scanned in insertion order.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{self, Assignment, Color, Half, OddCycleCtx};
use crate::error::{Error, Result};
use crate::expo::{self, InducedExpo, Target};
use crate::graph::{self, CycleWitness, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    EqualEndpoints,
    BelowHalf,
    AboveHalf,
}

/// A color together with the values that justify it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "VerdictJson", from = "VerdictJson")]
pub struct ColorVerdict {
    pub color: Color,
    pub branch: Branch,
    /// Label `l_f`.
    pub ell: Half,
    /// Little-path value `p_f`.
    pub p: Half,
}

#[derive(Serialize, Deserialize)]
struct VerdictJson {
    color: Color,
    branch: Branch,
    ell2: i64,
    p2: i64,
}

impl From<ColorVerdict> for VerdictJson {
    fn from(v: ColorVerdict) -> Self {
        VerdictJson {
            color: v.color,
            branch: v.branch,
            ell2: v.ell.doubled(),
            p2: v.p.doubled(),
        }
    }
}

impl From<VerdictJson> for ColorVerdict {
    fn from(v: VerdictJson) -> Self {
        ColorVerdict {
            color: v.color,
            branch: v.branch,
            ell: Half::from_doubled(v.ell2),
            p: Half::from_doubled(v.p2),
        }
    }
}

impl ColorVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serialization is infallible")
    }

    /// Checks the branch invariants against the endpoint colors.
    pub fn check(&self, fa: Color, fb: Color) -> Result<()> {
        let twice_p = 2 * self.p.doubled();
        let ell = self.ell.doubled();
        let ok = match self.branch {
            Branch::EqualEndpoints => fa == fb && self.color == fa,
            Branch::BelowHalf => fa != fb && self.color == fa && twice_p < ell,
            Branch::AboveHalf => fa != fb && self.color == fb && twice_p > ell,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invariant(format!(
                "verdict {self:?} inconsistent with endpoints ({fa}, {fb})"
            )))
        }
    }
}

/// The decision rule applied to endpoint colors and a certificate.
pub fn decide(fa: Color, fb: Color, ell: Half, p: Half) -> Result<ColorVerdict> {
    let (color, branch) = if fa == fb {
        (fa, Branch::EqualEndpoints)
    } else {
        match (2 * p.doubled()).cmp(&ell.doubled()) {
            Ordering::Less => (fa, Branch::BelowHalf),
            Ordering::Greater => (fb, Branch::AboveHalf),
            Ordering::Equal => {
                return Err(Error::Invariant(format!(
                    "little path {p} equals half the label {ell} with distinct endpoints"
                )))
            }
        }
    };
    Ok(ColorVerdict {
        color,
        branch,
        ell,
        p,
    })
}

fn require_even(f: &Assignment) -> Result<()> {
    let fixed_points = arith::fixed_point_count(f);
    if fixed_points % 2 == 1 {
        return Err(Error::OddParity { fixed_points });
    }
    Ok(())
}

/// Colors `f` in `K_3^{C_{2n+1}}`, `O(n)`. `f` must be in the even class.
pub fn color_vertex(f: &Assignment, ctx: &OddCycleCtx) -> Result<ColorVerdict> {
    if ctx.k() != 3 {
        return Err(Error::arg(format!(
            "color_vertex targets K_3, context has k = {}",
            ctx.k()
        )));
    }
    ctx.check(f)?;
    require_even(f)?;
    certify(f, ctx)
}

/// [`color_vertex`] without the input validation and even-class check.
/// Panics on out-of-range colors; gives meaningless colors outside the even
/// class.
pub fn color_vertex_unchecked(f: &Assignment, ctx: &OddCycleCtx) -> Result<ColorVerdict> {
    certify(f, ctx)
}

fn certify(f: &Assignment, ctx: &OddCycleCtx) -> Result<ColorVerdict> {
    let ell = arith::label(f, ctx)?;
    let p = arith::little_path(f, ctx)?;
    decide(f[ctx.a()], f[ctx.b()], ell, p)
}

/// Maps `f` in `C_k^{C_{2n+1}}` (odd `k >= 5`) to a vertex of `C_k`.
/// Isolated functions and odd fixed-point counts are domain errors.
pub fn color_vertex_ck(f: &Assignment, ctx: &OddCycleCtx) -> Result<ColorVerdict> {
    if ctx.k() < 5 {
        return Err(Error::arg(format!(
            "color_vertex_ck needs odd k >= 5, context has k = {}",
            ctx.k()
        )));
    }
    ctx.check(f)?;
    let ell = arith::label(f, ctx)?;
    require_even(f)?;
    let p = arith::little_path(f, ctx)?;
    decide(f[ctx.a()], f[ctx.b()], ell, p)
}

/// Uniform random assignment on `C_{2n+1}` conditioned on the even class,
/// by rejection. Also returns the number of draws.
pub fn random_even_class<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Assignment, u32) {
    let m = 2 * n + 1;
    let mut tries = 0;
    loop {
        tries += 1;
        let f = Assignment::from((0..m).map(|_| rng.gen_range(1..=3)).collect::<Vec<_>>());
        if arith::fixed_point_count(&f) % 2 == 0 {
            return (f, tries);
        }
    }
}

/// The induced subgraph of `K_3^{C_{2n+1}}` on the even class.
pub fn even_class_graph(n: usize, cap: u64) -> Result<InducedExpo> {
    let cycle = graph::make_cycle(2 * n + 1)?;
    let full = expo::build_exponential(&cycle, Target::K3, cap)?;
    Ok(full.induced_by(|f| arith::fixed_point_count(f) % 2 == 0))
}

/// Colors the whole even class via a bipartition of the functions with
/// distinct endpoint colors. Colors are aligned with `ke.vertices`.
///
/// `ke` must be the even class of `K_3^{C_{2n+1}}` (see
/// [`even_class_graph`]) for the cycle of `ctx`.
pub fn color_graph_baseline(ke: &InducedExpo, ctx: &OddCycleCtx) -> Result<Vec<Color>> {
    if ke.loops.iter().any(|&l| l) {
        return Err(Error::Invariant("even class contains a self-adjacent function".into()));
    }
    let (a, b) = (ctx.a(), ctx.b());
    let mut colors = vec![0; ke.vertices.len()];
    let mut rest = Vec::new();
    for (i, f) in ke.vertices.iter().enumerate() {
        ctx.check(f)?;
        if f[a] == f[b] {
            colors[i] = f[a];
        } else {
            rest.push(i);
        }
    }
    let sub = ke.graph.induced(&rest);
    let (side_a, side_b) = graph::bipartition(&sub).ok_or_else(|| {
        Error::Invariant("functions with distinct endpoint colors are not bipartite".into())
    })?;
    for i in side_a {
        let v = rest[i];
        colors[v] = ke.vertices[v][a];
    }
    for i in side_b {
        let v = rest[i];
        colors[v] = ke.vertices[v][b];
    }
    Ok(colors)
}

/// Finds an odd cycle of `h` on which `f` has an even number of fixed
/// points.
///
/// Tries an odd cycle inside the vertices colored `{1, 2}` and inside those
/// colored `3` first (at most two colors on a cycle force an even count),
/// then enumerates odd cycles up to `max_len`, shortest first.
pub fn find_even_cycle(h: &Graph, f: &Assignment, max_len: usize) -> Result<CycleWitness> {
    if expo::is_isolated(h, f, Target::K3)? {
        return Err(Error::Isolated(format!("{f} has no neighbor in K_3^H")));
    }
    let even_on = |c: &CycleWitness| -> bool {
        expo::restrict(h, f, c)
            .map(|r| arith::fixed_point_count(&r) % 2 == 0)
            .unwrap_or(false)
    };
    for class in [&[1, 2][..], &[3][..]] {
        let keep: Vec<bool> = f.values().iter().map(|c| class.contains(c)).collect();
        if let Some(c) = graph::odd_cycle_within(h, &keep) {
            if even_on(&c) {
                return Ok(c);
            }
        }
    }
    graph::odd_cycles(h, max_len)
        .find(|c| even_on(c))
        .ok_or_else(|| {
            Error::NotFound(format!(
                "no odd cycle of length <= {max_len} with an even number of fixed points of {f}"
            ))
        })
}

/// A cycle of `H` with its reference edge, given as positions in the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub cycle: CycleWitness,
    pub edge: (usize, usize),
}

impl CacheEntry {
    /// Uses the closing edge `{c_{2n}, c_0}` as reference edge.
    pub fn new(cycle: CycleWitness) -> Self {
        let last = cycle.len() - 1;
        CacheEntry {
            cycle,
            edge: (0, last),
        }
    }

    pub fn ctx(&self) -> Result<OddCycleCtx> {
        OddCycleCtx::new(self.cycle.half_len(), 3, self.edge)
    }
}

/// Odd cycles used so far, in the order they were first needed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleCache {
    entries: Vec<CacheEntry>,
}

impl CycleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[CacheEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends unless the same vertex sequence is already present; returns
    /// the entry's index.
    pub fn push(&mut self, entry: CacheEntry) -> usize {
        if let Some(i) = self.entries.iter().position(|e| e.cycle == entry.cycle) {
            return i;
        }
        self.entries.push(entry);
        self.entries.len() - 1
    }

    /// Checks every entry against the host and the orientation rule.
    pub fn check_in(&self, h: &Graph) -> Result<()> {
        for e in &self.entries {
            e.cycle.check_in(h)?;
            e.ctx()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cache serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::arg(format!("bad cycle cache JSON: {e}")))
    }
}

/// Color of a function of `K_3^H` and how it was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KhColor {
    pub verdict: ColorVerdict,
    /// Index of the cache entry whose cycle was used.
    pub cycle_index: usize,
    /// Whether a new cycle had to be searched for.
    pub searched: bool,
}

/// Colors a non-isolated `f` in `K_3^h`.
///
/// Scans `cache` in order for a cycle on which `f` restricts into the even
/// class; failing that, finds one with [`find_even_cycle`] and appends it.
pub fn color_in_kh(h: &Graph, f: &Assignment, cache: &mut CycleCache) -> Result<KhColor> {
    if expo::is_isolated(h, f, Target::K3)? {
        return Err(Error::Isolated(format!("{f} has no neighbor in K_3^H")));
    }
    for (i, entry) in cache.entries.iter().enumerate() {
        let r = expo::restrict(h, f, &entry.cycle)?;
        if arith::fixed_point_count(&r) % 2 == 0 {
            let verdict = color_vertex(&r, &entry.ctx()?)?;
            return Ok(KhColor {
                verdict,
                cycle_index: i,
                searched: false,
            });
        }
    }
    let cycle = find_even_cycle(h, f, h.vertex_count())?;
    let entry = CacheEntry::new(cycle);
    let r = expo::restrict(h, f, &entry.cycle)?;
    let verdict = color_vertex(&r, &entry.ctx()?)?;
    let cycle_index = cache.push(entry);
    Ok(KhColor {
        verdict,
        cycle_index,
        searched: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_cycle};

    fn a(v: &[u32]) -> Assignment {
        Assignment::from(v.to_vec())
    }

    #[test]
    fn color_vertex_examples() {
        let ctx = OddCycleCtx::new(2, 3, (4, 0)).unwrap();
        let v = color_vertex(&a(&[1; 5]), &ctx).unwrap();
        assert_eq!((v.color, v.branch), (1, Branch::EqualEndpoints));

        let v = color_vertex(&a(&[2, 1, 1, 1, 1]), &ctx).unwrap();
        assert_eq!(v.ell, Half::ZERO);
        assert_eq!(v.p, Half::from_int(-1));
        assert_eq!((v.color, v.branch), (2, Branch::BelowHalf));
        assert_eq!(v.to_json(), r#"{"color":2,"branch":"BelowHalf","ell2":0,"p2":-2}"#);

        let v = color_vertex(&a(&[1, 1, 1, 1, 2]), &ctx).unwrap();
        assert_eq!((v.ell, v.p), (Half::ZERO, Half::from_int(1)));
        assert_eq!((v.color, v.branch), (2, Branch::AboveHalf));

        assert_eq!(
            color_vertex(&a(&[1, 2, 1, 2, 3]), &ctx),
            Err(Error::OddParity { fixed_points: 3 })
        );
        assert!(color_vertex(&a(&[1, 1, 1]), &ctx).is_err());
        let c5 = OddCycleCtx::canonical(2, 5).unwrap();
        assert!(color_vertex(&a(&[1; 5]), &c5).is_err());
    }

    #[test]
    fn color_vertex_ck_examples() {
        let ctx = OddCycleCtx::new(1, 5, (0, 2)).unwrap();
        assert_eq!((ctx.a(), ctx.b()), (0, 2));
        let v = color_vertex_ck(&a(&[1, 3, 1]), &ctx).unwrap();
        assert_eq!((v.color, v.branch, v.ell), (1, Branch::EqualEndpoints, Half::ZERO));
        let w = color_vertex_ck(&a(&[2, 5, 2]), &ctx).unwrap();
        assert_eq!(w.color, 2);
        assert!(Target::Cycle(5).adjacent(v.color, w.color));
        assert!(matches!(
            color_vertex_ck(&a(&[1, 3, 5]), &ctx),
            Err(Error::Isolated(_))
        ));
        let k3 = OddCycleCtx::canonical(1, 3).unwrap();
        assert!(color_vertex_ck(&a(&[1, 3, 1]), &k3).is_err());
    }

    #[test]
    fn decide_rejects_ties_and_checks_round_trip() {
        assert!(matches!(
            decide(1, 2, Half::from_int(6), Half::from_int(3)),
            Err(Error::Invariant(_))
        ));
        let v = decide(1, 2, Half::from_int(6), Half::from_int(2)).unwrap();
        assert_eq!(v.branch, Branch::BelowHalf);
        v.check(1, 2).unwrap();
        assert!(v.check(2, 1).is_err());
        let back: ColorVerdict = serde_json::from_str(&v.to_json()).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn baseline_on_small_cycles() {
        for n in 1..=2 {
            let ke = even_class_graph(n, expo::DEFAULT_CAP).unwrap();
            let ctx = OddCycleCtx::canonical(n, 3).unwrap();
            let colors = color_graph_baseline(&ke, &ctx).unwrap();
            assert!(graph::is_proper_coloring(&ke.graph, &colors, 3).unwrap());
        }
        assert_eq!(even_class_graph(1, expo::DEFAULT_CAP).unwrap().vertices.len(), 21);
    }

    #[test]
    fn even_cycle_search() {
        let k4 = make_complete(4).unwrap();
        let c = find_even_cycle(&k4, &a(&[1, 1, 2, 2]), 4).unwrap();
        let r = expo::restrict(&k4, &a(&[1, 1, 2, 2]), &c).unwrap();
        assert_eq!(arith::fixed_point_count(&r) % 2, 0);
        // Constants have no fixed points anywhere; the first odd cycle will do.
        let c = find_even_cycle(&k4, &a(&[3; 4]), 4).unwrap();
        c.check_in(&k4).unwrap();
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(
            find_even_cycle(&c4, &a(&[1; 4]), 4),
            Err(Error::NotFound(_))
        ));
        assert!(matches!(
            find_even_cycle(&k4, &a(&[1, 2, 3, 1]), 4),
            Err(Error::Isolated(_))
        ));
    }

    #[test]
    fn kh_pipeline_reuses_cache() {
        let k4 = make_complete(4).unwrap();
        let mut cache = CycleCache::new();
        let first = color_in_kh(&k4, &a(&[1, 1, 2, 2]), &mut cache).unwrap();
        assert!(first.searched);
        assert_eq!(cache.len(), 1);
        let second = color_in_kh(&k4, &a(&[3, 3, 3, 3]), &mut cache).unwrap();
        assert!(!second.searched);
        assert_eq!(second.cycle_index, 0);
        assert_ne!(first.verdict.color, second.verdict.color);
        assert!(color_in_kh(&k4, &a(&[1, 2, 3, 1]), &mut cache).is_err());

        let text = cache.to_json();
        assert_eq!(CycleCache::from_json(&text).unwrap(), cache);
        cache.check_in(&k4).unwrap();
        assert!(cache.check_in(&make_cycle(5).unwrap()).is_err());
    }
}
