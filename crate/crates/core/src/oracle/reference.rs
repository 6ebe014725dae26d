//! Direct transcriptions of the definitions, written against plain slices
//! and kept apart from the optimized paths they check. Values are doubled
//! so that half-unit steps stay integral.

use crate::expo::Target;

/// Doubled arc value; `None` for color pairs more than two steps apart in
/// `C_k`.
pub fn delta(target: Target, i: u32, j: u32) -> Option<i64> {
    match target {
        Target::Complete(3) => Some(match (i, j) {
            (1, 2) | (2, 3) | (3, 1) => 2,
            (2, 1) | (3, 2) | (1, 3) => -2,
            _ if i == j => 0,
            _ => unreachable!("colors outside 1..=3"),
        }),
        Target::Cycle(k) => {
            let up = |d: u32| (i + d - 1) % k + 1 == j;
            if i == j {
                Some(0)
            } else if up(2) {
                Some(2)
            } else if up(k - 2) {
                Some(-2)
            } else if up(1) {
                Some(1)
            } else if up(k - 1) {
                Some(-1)
            } else {
                None
            }
        }
        other => panic!("no arc values for {other:?}"),
    }
}

/// Doubled value of one chord arc; `None` when the arc isolates `f`, i.e.
/// the two colors have no common neighbor in `C_k`.
fn chord(target: Target, i: u32, j: u32) -> Option<i64> {
    delta(target, i, j).filter(|d| d % 2 == 0)
}

/// Doubled label: sum of `delta(f(u_i), f(u_{i+2}))` over all `i`.
pub fn label(target: Target, f: &[u32]) -> Option<i64> {
    let m = f.len();
    (0..m).map(|i| chord(target, f[i], f[(i + 2) % m])).sum()
}

/// Doubled value of the `n` arcs `a, a+2, .., a+2n`.
pub fn little_path(target: Target, f: &[u32], a: usize) -> Option<i64> {
    let m = f.len();
    let n = m / 2;
    (0..n)
        .map(|j| chord(target, f[(a + 2 * j) % m], f[(a + 2 * j + 2) % m]))
        .sum()
}

pub fn fixed_point_count(f: &[u32]) -> usize {
    let m = f.len();
    (0..m).filter(|&i| f[(i + m - 1) % m] != f[(i + 1) % m]).count()
}

/// Adjacency in `target^{C_m}` straight from the definition.
pub fn adjacent_on_cycle(target: Target, f: &[u32], g: &[u32]) -> bool {
    let m = f.len();
    (0..m).all(|i| {
        let j = (i + 1) % m;
        target.adjacent(f[i], g[j]) && target.adjacent(f[j], g[i])
    })
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r.min(n - r)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn multinomial(n: u64, a: u64, b: u64) -> u64 {
    binomial(n, a) * binomial(n - a, b)
}

/// Ordered adjacent pairs (loops included) of `K_3^{C_m}`, `m` odd:
/// proper 3-colorings of `C_{2m}`.
pub fn pair_count_k3(m: u32) -> u64 {
    4u64.pow(m) + 2
}

/// Ordered adjacent pairs (loops included) of `C_k^{C_m}`, `m` odd:
/// closed walks of length `2m` in `C_k`.
pub fn pair_count_cycle(m: u32, k: u32) -> u64 {
    let steps = 2 * m as u64;
    let k = k as i64;
    let ways: u64 = (0..=steps)
        .filter(|&up| (2 * up as i64 - steps as i64).rem_euclid(k) == 0)
        .map(|up| binomial(steps, up))
        .sum();
    k as u64 * ways
}

/// Functions on `C_m` with an even number of fixed points, `k = 3`.
///
/// The chord arcs form one Hamiltonian cycle; choosing `j` arcs whose ends
/// differ leaves `j` blocks to be colored like a `j`-cycle, which can be
/// done in `2^j + 2` ways for `j >= 2` (and 3 ways for `j = 0`).
pub fn even_class_count_k3(m: u32) -> u64 {
    let m = m as u64;
    3 + (2..=m)
        .step_by(2)
        .map(|j| binomial(m, j) * (2u64.pow(j as u32) + 2))
        .sum::<u64>()
}

/// `(non-isolated, non-isolated and even)` function counts of
/// `C_k^{C_m}`, `k >= 5`: chord steps of `0, +2, -2` summing to zero mod
/// `k`, with an even number of nonzero steps for the second count.
pub fn non_isolated_counts_cycle(m: u32, k: u32) -> (u64, u64) {
    let m = m as u64;
    let (mut all, mut even) = (0u64, 0u64);
    for plus in 0..=m {
        for minus in 0..=(m - plus) {
            if (2 * (plus as i64 - minus as i64)).rem_euclid(k as i64) != 0 {
                continue;
            }
            let w = multinomial(m, plus, minus);
            all += w;
            if (plus + minus) % 2 == 0 {
                even += w;
            }
        }
    }
    (k as u64 * all, k as u64 * even)
}
