//! Latency measurements for the per-vertex routine and the baseline.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::OddCycleCtx;
use crate::colorize;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub mode: String,
    pub n: usize,
    pub reps: usize,
    pub median_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    /// Assignments the measured call reads: one cycle for the per-vertex
    /// routine, the whole function space for the baseline.
    pub assignments_touched: u64,
    /// Uniform draws needed to obtain the even-class inputs; about two per
    /// repetition since the parity classes are close to balanced.
    pub sampling_draws: u64,
}

fn summarize(mode: &str, n: usize, mut samples: Vec<f64>, touched: u64, draws: u64) -> Timing {
    samples.sort_by(f64::total_cmp);
    Timing {
        mode: mode.to_string(),
        n,
        reps: samples.len(),
        median_ms: samples[samples.len() / 2],
        min_ms: samples[0],
        max_ms: samples[samples.len() - 1],
        assignments_touched: touched,
        sampling_draws: draws,
    }
}

/// Times `color_vertex` (with all input checks) on a fresh random
/// even-class function of `C_{2n+1}` per repetition.
pub fn time_color_vertex(n: usize, reps: usize, seed: u64) -> Result<Timing> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = OddCycleCtx::canonical(n, 3)?;
    let mut samples = Vec::with_capacity(reps);
    let mut draws = 0;
    for _ in 0..reps.max(1) {
        let (f, tries) = colorize::random_even_class(n, &mut rng);
        draws += tries as u64;
        let started = Instant::now();
        let verdict = colorize::color_vertex(&f, &ctx)?;
        samples.push(started.elapsed().as_secs_f64() * 1e3);
        std::hint::black_box(verdict);
    }
    Ok(summarize("explicit", n, samples, 1, draws))
}

/// Times building the even class of `K_3^{C_{2n+1}}` and 3-coloring it
/// through the bipartition baseline.
pub fn time_baseline(n: usize, reps: usize, cap: u64) -> Result<Timing> {
    let ctx = OddCycleCtx::canonical(n, 3)?;
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let started = Instant::now();
        let ke = colorize::even_class_graph(n, cap)?;
        let colors = colorize::color_graph_baseline(&ke, &ctx)?;
        samples.push(started.elapsed().as_secs_f64() * 1e3);
        std::hint::black_box(colors);
    }
    Ok(summarize("baseline", n, samples, 3u64.pow((2 * n + 1) as u32), 0))
}

/// Least-squares slope of `ln(median)` against `ln(n)`.
pub fn loglog_slope(timings: &[Timing]) -> f64 {
    let pts: Vec<(f64, f64)> = timings
        .iter()
        .map(|t| ((t.n as f64).ln(), t.median_ms.max(1e-9).ln()))
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let mk = |n: usize, ms: f64| summarize("explicit", n, vec![ms], 1, 1);
        let ts = [mk(10, 1.0), mk(100, 10.0), mk(1000, 100.0)];
        assert!((loglog_slope(&ts) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn small_runs_report_medians() {
        let t = time_color_vertex(10, 5, 1).unwrap();
        assert_eq!((t.n, t.reps), (10, 5));
        assert!(t.min_ms <= t.median_ms && t.median_ms <= t.max_ms);
        let b = time_baseline(1, 3, 1_000_000).unwrap();
        assert_eq!(b.assignments_touched, 27);
    }
}
