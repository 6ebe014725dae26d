//! Arc values on odd cycles.
//!
//! The host cycle `C_{2n+1}` has vertices `u_1 .. u_{2n+1}`; this crate
//! speaks 0-based ids throughout, so `u_i` is vertex `i - 1`. The chord
//! cycle steps by two, `0 -> 2 -> 4 -> .. -> 2n -> 1 -> 3 -> .. -> 2n-1 -> 0`,
//! so every arc is `v -> v + 2 (mod 2n+1)`.
//!
//! An arc `uv` colored `(i, j)` has a value: for `K_3` targets it is `+1`
//! on `12, 23, 31`, `-1` on the reverses and `0` when monochromatic; for
//! `C_k` targets a step of two around `C_k` is worth one unit and a step of
//! one half a unit. Summing over the chord cycle gives the label of a
//! function (a winding number); summing over the `n` arcs from `a` to `b`
//! gives its little-path value.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Color = u32;

/// Exact half-integer, stored doubled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);

    pub const fn from_doubled(doubled: i64) -> Self {
        Half(doubled)
    }

    pub const fn from_int(value: i64) -> Self {
        Half(2 * value)
    }

    /// Twice the represented value.
    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub const fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_integer(self) -> Option<i64> {
        self.is_integral().then_some(self.0 / 2)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, rhs: Half) -> Half {
        Half(self.0 + rhs.0)
    }
}

impl AddAssign for Half {
    fn add_assign(&mut self, rhs: Half) {
        self.0 += rhs.0;
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, rhs: Half) -> Half {
        Half(self.0 - rhs.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl Sum for Half {
    fn sum<I: Iterator<Item = Half>>(iter: I) -> Half {
        Half(iter.map(|h| h.0).sum())
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

/// Value of one arc: a half-integer step, or the marker for a color pair
/// that no two-step walk in `C_k` connects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcValue {
    Step(Half),
    Far,
}

const DELTA3: [[i8; 4]; 4] = [
    [0, 0, 0, 0],
    [0, 0, 1, -1],
    [0, -1, 0, 1],
    [0, 1, -1, 0],
];

/// Arc value for colors of `K_3`: `+1` on `12, 23, 31`, `-1` on the
/// reverses, `0` on equal colors.
pub fn delta3(i: Color, j: Color) -> Result<i32> {
    if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
        return Err(Error::arg(format!("colors ({i}, {j}) outside 1..=3")));
    }
    Ok(DELTA3[i as usize][j as usize] as i32)
}

/// Arc value for vertices of `C_k`, `k` odd and at least 5.
///
/// `k = 3` is rejected: there a step of one and a step of two coincide, and
/// [`delta3`] is the rule to use.
pub fn delta_k(i: Color, j: Color, k: u32) -> Result<ArcValue> {
    if k < 5 || k % 2 == 0 {
        return Err(Error::arg(format!(
            "cycle target needs odd k >= 5, got {k} (use delta3 for K_3)"
        )));
    }
    if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
        return Err(Error::arg(format!("colors ({i}, {j}) outside 1..={k}")));
    }
    Ok(cycle_step(i, j, k))
}

#[inline]
fn cycle_step(i: Color, j: Color, k: u32) -> ArcValue {
    let r = (j + k - i) % k;
    match r {
        0 => ArcValue::Step(Half::ZERO),
        1 => ArcValue::Step(Half(1)),
        2 => ArcValue::Step(Half(2)),
        r if r == k - 1 => ArcValue::Step(Half(-1)),
        r if r == k - 2 => ArcValue::Step(Half(-2)),
        _ => ArcValue::Far,
    }
}

/// The arc-value table selected by the codomain size: `K_3` when `k = 3`,
/// the cycle `C_k` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcRule {
    Complete3,
    Cycle(u32),
}

impl ArcRule {
    pub fn for_k(k: u32) -> Result<Self> {
        match k {
            3 => Ok(ArcRule::Complete3),
            k if k >= 5 && k % 2 == 1 => Ok(ArcRule::Cycle(k)),
            _ => Err(Error::arg(format!("k must be odd and >= 3, got {k}"))),
        }
    }

    pub fn k(self) -> u32 {
        match self {
            ArcRule::Complete3 => 3,
            ArcRule::Cycle(k) => k,
        }
    }

    /// Colors must already be in `1..=k`.
    #[inline]
    pub fn value(self, i: Color, j: Color) -> ArcValue {
        match self {
            ArcRule::Complete3 => {
                ArcValue::Step(Half::from_int(DELTA3[i as usize][j as usize] as i64))
            }
            ArcRule::Cycle(k) => cycle_step(i, j, k),
        }
    }

    /// Arc value as seen along the chord cycle. In `C_k` two colors two
    /// chord steps apart need a common neighbor, so a one-step arc isolates
    /// the function just like a far one and is reported as `Far`.
    #[inline]
    pub fn chord_value(self, i: Color, j: Color) -> ArcValue {
        match self.value(i, j) {
            ArcValue::Step(h) if matches!(self, ArcRule::Cycle(_)) && !h.is_integral() => {
                ArcValue::Far
            }
            v => v,
        }
    }
}

/// The arcs of the chord cycle of `C_{2n+1}` in traversal order, starting
/// at vertex 0.
pub fn chord_order(n: usize) -> Vec<(usize, usize)> {
    let m = 2 * n + 1;
    let mut arcs = Vec::with_capacity(m);
    let mut v = 0;
    for _ in 0..m {
        let w = (v + 2) % m;
        arcs.push((v, w));
        v = w;
    }
    arcs
}

/// Orients an edge of `C_{2n+1}` as `(a, b)` so that the chord path from
/// `a` to `b` has exactly `n` arcs. For the edge `{v, v+1}` that is
/// `(v+1, v)`.
pub fn orient_edge(edge: (usize, usize), n: usize) -> Result<(usize, usize)> {
    let m = 2 * n + 1;
    let (u, v) = edge;
    if n == 0 || u >= m || v >= m {
        return Err(Error::arg(format!("({u}, {v}) is not an edge of C_{m}")));
    }
    if (u + 1) % m == v {
        Ok((v, u))
    } else if (v + 1) % m == u {
        Ok((u, v))
    } else {
        Err(Error::arg(format!("({u}, {v}) is not an edge of C_{m}")))
    }
}

/// A function from cycle (or host graph) vertices to colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(Vec<Color>);

impl Assignment {
    /// Validates that every entry lies in `1..=k`.
    pub fn new(values: Vec<Color>, k: u32) -> Result<Self> {
        let f = Assignment(values);
        f.check_range(k)?;
        Ok(f)
    }

    /// Constant function.
    pub fn constant(len: usize, color: Color) -> Self {
        Assignment(vec![color; len])
    }

    pub fn check_range(&self, k: u32) -> Result<()> {
        match self.0.iter().position(|&c| c == 0 || c > k) {
            Some(i) => Err(Error::arg(format!(
                "color {} at position {i} is outside 1..={k}",
                self.0[i]
            ))),
            None => Ok(()),
        }
    }

    pub fn values(&self) -> &[Color] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Color> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Color>> for Assignment {
    /// Unchecked; use [`Assignment::new`] at trust boundaries.
    fn from(values: Vec<Color>) -> Self {
        Assignment(values)
    }
}

impl Index<usize> for Assignment {
    type Output = Color;
    fn index(&self, i: usize) -> &Color {
        &self.0[i]
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An odd cycle `C_{2n+1}`, the target size `k`, and the oriented reference
/// edge `(a, b)` whose chord path has `n` arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OddCycleCtx {
    n: usize,
    rule: ArcRule,
    a: usize,
    b: usize,
}

impl OddCycleCtx {
    /// `edge` may be given in either order; it is oriented by [`orient_edge`].
    pub fn new(n: usize, k: u32, edge: (usize, usize)) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("n must be positive"));
        }
        let rule = ArcRule::for_k(k)?;
        let (a, b) = orient_edge(edge, n)?;
        Ok(OddCycleCtx { n, rule, a, b })
    }

    /// Reference edge `{u_{2n+1}, u_1}`, i.e. `(a, b) = (0, 2n)`.
    pub fn canonical(n: usize, k: u32) -> Result<Self> {
        Self::new(n, k, (0, 2 * n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cycle length `2n + 1`.
    pub fn len(&self) -> usize {
        2 * self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k(&self) -> u32 {
        self.rule.k()
    }

    pub fn rule(&self) -> ArcRule {
        self.rule
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn chord_order(&self) -> Vec<(usize, usize)> {
        chord_order(self.n)
    }

    /// The `n` arcs of the little path from `a` to `b`.
    pub fn little_path_arcs(&self) -> impl Iterator<Item = (usize, usize)> {
        let m = self.len();
        let a = self.a;
        (0..self.n).map(move |j| ((a + 2 * j) % m, (a + 2 * j + 2) % m))
    }

    /// Length and range checks for an assignment on this cycle.
    pub fn check(&self, f: &Assignment) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::arg(format!(
                "assignment has {} entries, cycle has {}",
                f.len(),
                self.len()
            )));
        }
        f.check_range(self.k())
    }
}

fn check_len(f: &Assignment, n: usize) -> Result<()> {
    if f.len() != 2 * n + 1 {
        return Err(Error::arg(format!(
            "assignment has {} entries, C_{} has {}",
            f.len(),
            2 * n + 1,
            2 * n + 1
        )));
    }
    Ok(())
}

/// Vertices `v` with `f(v-1) != f(v+1)`, indices mod `2n+1`.
pub fn fixed_points(f: &Assignment, n: usize) -> Result<Vec<usize>> {
    check_len(f, n)?;
    let m = f.len();
    let c = f.values();
    Ok((0..m)
        .filter(|&v| c[(v + m - 1) % m] != c[(v + 1) % m])
        .collect())
}

/// Number of fixed points of `f` on the cycle of its own length.
pub fn fixed_point_count(f: &Assignment) -> usize {
    let c = f.values();
    let m = c.len();
    if m < 3 {
        return 0;
    }
    // v is fixed iff the chord arc (v-1) -> (v+1) joins different colors.
    let inner = c.windows(3).filter(|w| w[0] != w[2]).count();
    inner + usize::from(c[m - 2] != c[0]) + usize::from(c[m - 1] != c[1])
}

/// True iff `f` has an even number of fixed points on `C_{2n+1}`.
pub fn in_even_class(f: &Assignment, n: usize) -> Result<bool> {
    check_len(f, n)?;
    Ok(fixed_point_count(f) % 2 == 0)
}

fn sum_arcs<F>(c: &[Color], arcs: impl Iterator<Item = (usize, usize)>, rule: F) -> Result<Half>
where
    F: Fn(Color, Color) -> ArcValue,
{
    let mut total = Half::ZERO;
    for (u, v) in arcs {
        match rule(c[u], c[v]) {
            ArcValue::Step(h) => total += h,
            ArcValue::Far => {
                return Err(Error::Isolated(format!(
                    "chord arc {u}->{v} joins colors {} and {} with no common neighbor",
                    c[u], c[v]
                )))
            }
        }
    }
    Ok(total)
}

/// Label of `f` under a caller-supplied arc rule.
pub fn label_with<F>(f: &Assignment, ctx: &OddCycleCtx, rule: F) -> Result<Half>
where
    F: Fn(Color, Color) -> ArcValue,
{
    ctx.check(f)?;
    let c = f.values();
    let m = c.len();
    // Arcs v -> v+2 in index order; the wrap-around pair is handled last.
    let straight = (0..m - 2).map(|v| (v, v + 2));
    let wrap = [(m - 2, 0), (m - 1, 1)];
    sum_arcs(c, straight.chain(wrap), rule)
}

/// Little-path value of `f` under a caller-supplied arc rule.
pub fn little_path_with<F>(f: &Assignment, ctx: &OddCycleCtx, rule: F) -> Result<Half>
where
    F: Fn(Color, Color) -> ArcValue,
{
    ctx.check(f)?;
    sum_arcs(f.values(), ctx.little_path_arcs(), rule)
}

/// Total arc value of `f` around the chord cycle.
///
/// For `C_k` targets an arc whose colors are neither equal nor two steps
/// apart makes `f` isolated; that is reported as [`Error::Isolated`].
pub fn label(f: &Assignment, ctx: &OddCycleCtx) -> Result<Half> {
    let rule = ctx.rule();
    label_with(f, ctx, move |i, j| rule.chord_value(i, j))
}

/// Total arc value of `f` along the little path from `a` to `b`.
pub fn little_path(f: &Assignment, ctx: &OddCycleCtx) -> Result<Half> {
    let rule = ctx.rule();
    little_path_with(f, ctx, move |i, j| rule.chord_value(i, j))
}
