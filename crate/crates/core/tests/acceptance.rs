//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p expocolor --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use expocolor::expo::DEFAULT_CAP;
use expocolor::graph::{self, chromatic_number_exact, make_complete, make_cycle, make_mycielski};
use expocolor::oracle::{self, bench, Fault, VerificationReport};

const BUDGET_OBSERVATIONS: Duration = Duration::from_secs(60);
const BUDGET_PAIRS: Duration = Duration::from_secs(120);
const BUDGET_CYCLE_TARGET: Duration = Duration::from_secs(300);
const BUDGET_GROTZSCH_CHI: Duration = Duration::from_secs(60);
const PERF_MEDIAN_MS_AT_1E6: f64 = 50.0;
const PERF_SLOPE: (f64, f64) = (0.8, 1.2);
const PERF_REPS: usize = 11;
const SAMPLES: u64 = 10_000;
const SEED: u64 = 0;

struct Criterion {
    id: u32,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn run_all(
    reports: impl IntoIterator<Item = expocolor::Result<VerificationReport>>,
) -> (bool, u64, u64, Vec<String>) {
    let (mut ok, mut pairs, mut violations, mut errors) = (true, 0, 0, Vec::new());
    for r in reports {
        match r {
            Ok(r) => {
                ok &= r.passed();
                pairs += r.pairs;
                violations += r.violation_count;
                if !r.passed() {
                    errors.push(format!("{} n={:?} k={}: {:?}", r.statement, r.n, r.k, r.violations.first()));
                }
            }
            Err(e) => {
                ok = false;
                errors.push(e.to_string());
            }
        }
    }
    (ok, pairs, violations, errors)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let started = Instant::now();
    let out = f();
    (out, started.elapsed())
}

fn criterion_1() -> Criterion {
    let ((ok, _, violations, errors), took) = timed(|| {
        run_all((1..=3).map(|n| oracle::verify_observations(n, DEFAULT_CAP, Fault::None)))
    });
    Criterion {
        id: 1,
        name: "observations and parity bridge, n=1..3",
        ok: ok && took < BUDGET_OBSERVATIONS,
        detail: format!("violations={violations} time={took:.2?} {errors:?}"),
    }
}

fn criterion_2() -> Criterion {
    let ((ok, pairs, violations, errors), took) = timed(|| {
        run_all((1..=3).flat_map(|n| {
            [
                oracle::verify_claim_map(n, DEFAULT_CAP, Fault::None),
                oracle::verify_label_invariance(n, 3, DEFAULT_CAP, Fault::None),
                oracle::verify_little_path_bound(n, 3, DEFAULT_CAP, Fault::None),
            ]
        }))
    });
    Criterion {
        id: 2,
        name: "claim map, label invariance, little-path bound, n=1..3",
        ok: ok && took < BUDGET_PAIRS,
        detail: format!("pairs={pairs} violations={violations} time={took:.2?} {errors:?}"),
    }
}

fn criterion_3() -> Criterion {
    let (ok, pairs, violations, errors) =
        run_all((1..=3).map(|n| oracle::verify_proper_k3(n, DEFAULT_CAP, Fault::None)));
    Criterion {
        id: 3,
        name: "per-vertex coloring proper on the even class, n=1..3",
        ok,
        detail: format!("colored pairs={pairs} violations={violations} {errors:?}"),
    }
}

fn criterion_4() -> Criterion {
    let (ok, pairs, violations, errors) =
        run_all((1..=3).map(|n| oracle::verify_hitting_set(n, DEFAULT_CAP, Fault::None)));
    Criterion {
        id: 4,
        name: "B_T bipartite, branches form a bipartition, n=1..3",
        ok,
        detail: format!("B_T edges={pairs} violations={violations} {errors:?}"),
    }
}

fn criterion_5() -> Criterion {
    let (ok, _, violations, errors) =
        run_all((1..=2).map(|n| oracle::verify_baseline(n, DEFAULT_CAP, Fault::None)));
    Criterion {
        id: 5,
        name: "baseline proper, agrees on equal endpoints, n=1..2",
        ok,
        detail: format!("violations={violations} {errors:?}"),
    }
}

fn criterion_6() -> Criterion {
    let cases = [(1usize, 5u32), (2, 5), (1, 7)];
    let ((ok, pairs, violations, errors), took) = timed(|| {
        run_all(cases.iter().flat_map(|&(n, k)| {
            [
                oracle::verify_label_invariance(n, k, DEFAULT_CAP, Fault::None),
                oracle::verify_little_path_bound(n, k, DEFAULT_CAP, Fault::None),
                oracle::verify_proper_ck(n, k, DEFAULT_CAP, Fault::None),
            ]
        }))
    });
    Criterion {
        id: 6,
        name: "cycle targets (3,5) (5,5) (3,7)",
        ok: ok && took < BUDGET_CYCLE_TARGET,
        detail: format!("pairs={pairs} violations={violations} time={took:.2?} {errors:?}"),
    }
}

fn criterion_7() -> Criterion {
    let k4 = make_complete(4).expect("K_4");
    match oracle::verify_end_to_end(&k4, DEFAULT_CAP, Fault::None) {
        Ok(r) => {
            let chi = r.notes.get("non_isolated_chromatic_number").and_then(|v| v.as_i64());
            Criterion {
                id: 7,
                name: "end to end on K_4",
                ok: r.passed() && r.functions == 81 && chi == Some(3),
                detail: format!(
                    "functions={} edges={} non-isolated chi={chi:?} violations={}",
                    r.functions, r.pairs, r.violation_count
                ),
            }
        }
        Err(e) => Criterion {
            id: 7,
            name: "end to end on K_4",
            ok: false,
            detail: e.to_string(),
        },
    }
}

fn criterion_8() -> Criterion {
    let g = make_mycielski(&make_cycle(5).expect("C_5"));
    let (chi, took) = timed(|| chromatic_number_exact(&g));
    let shape_ok = g.vertex_count() == 11 && chi == Ok(4) && took < BUDGET_GROTZSCH_CHI;
    match oracle::verify_sampled_end_to_end(&g, SAMPLES, SEED, Fault::None) {
        Ok(r) => {
            let found = r.notes.get("even_cycle_found").and_then(|v| v.as_i64());
            Criterion {
                id: 8,
                name: "sampled end to end on the Groetzsch graph",
                ok: shape_ok && r.passed() && found == Some(SAMPLES as i64),
                detail: format!(
                    "chi={chi:?} in {took:.2?}; samples={} pairs={} cycles found={found:?} violations={}",
                    r.functions, r.pairs, r.violation_count
                ),
            }
        }
        Err(e) => Criterion {
            id: 8,
            name: "sampled end to end on the Groetzsch graph",
            ok: false,
            detail: e.to_string(),
        },
    }
}

fn criterion_9() -> Criterion {
    let sizes = [1_000usize, 10_000, 100_000, 1_000_000];
    let timings: Result<Vec<_>, _> =
        sizes.iter().map(|&n| bench::time_color_vertex(n, PERF_REPS, SEED)).collect();
    let baseline = bench::time_baseline(3, PERF_REPS, DEFAULT_CAP);
    match (timings, baseline) {
        (Ok(ts), Ok(b)) => {
            let slope = bench::loglog_slope(&ts);
            let top = ts.last().expect("four sizes").median_ms;
            let medians: Vec<String> =
                ts.iter().map(|t| format!("n={}:{:.3}ms", t.n, t.median_ms)).collect();
            Criterion {
                id: 9,
                name: "per-vertex latency linear, < 50 ms at n=10^6",
                ok: top < PERF_MEDIAN_MS_AT_1E6 && (PERF_SLOPE.0..=PERF_SLOPE.1).contains(&slope),
                detail: format!(
                    "{} slope={slope:.3}; baseline n=3 median={:.3}ms over {} assignments vs one cycle of length {}",
                    medians.join(" "),
                    b.median_ms,
                    b.assignments_touched,
                    2 * sizes[3] + 1
                ),
            }
        }
        (Err(e), _) | (_, Err(e)) => Criterion {
            id: 9,
            name: "per-vertex latency linear, < 50 ms at n=10^6",
            ok: false,
            detail: e.to_string(),
        },
    }
}

fn main() -> ExitCode {
    // Sanity on the solver the criteria lean on.
    assert_eq!(graph::chromatic_number_exact(&make_complete(4).expect("K_4")), Ok(4));
    let criteria = [
        criterion_1 as fn() -> Criterion,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut failed = 0;
    for run in criteria {
        let c = run();
        let tag = if c.ok { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {} | {}", c.id, c.name, c.detail);
        failed += usize::from(!c.ok);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
