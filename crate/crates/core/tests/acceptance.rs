//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proper_eff::approx::{is_amin, is_approx_benson, lambda_bound, AMinQuery, ApproxSet, ApproxSpec};
use proper_eff::augdual::AugmentedFunctional;
use proper_eff::efficiency::{FeasibleSet, Verdict};
use proper_eff::harness::{
    instances, ssp_pairs, suite_approx_soundness, suite_chain, suite_dichotomy, suite_monotonicity, suite_necessity,
    suite_oracles, suite_soundness, suite_symmetry, suite_witness, OracleGrid, SuiteRow,
};
use proper_eff::numlin::{Norm, PolyhedralCone, Polytope, Space};
use proper_eff::Result;

const SEED: u64 = 20_240_601;
const NORMS: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];

struct Outcome {
    passed: bool,
    detail: String,
}

fn rows(rows: &[&SuiteRow], min_checked: usize) -> Outcome {
    let passed = rows.iter().all(|r| r.failures == 0) && rows[0].checked >= min_checked;
    let detail = rows
        .iter()
        .map(|r| format!("{}: {} checked, {} failures, {} skipped", r.suite, r.checked, r.failures, r.skipped))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn within(mut o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    o.passed &= elapsed < limit;
    o.detail = format!("{} [{:.2?}, limit {:.0?}]", o.detail, elapsed, limit);
    o
}

fn golden() -> Result<Outcome> {
    let a = FeasibleSet::new(vec![Polytope::new(vec![vec![-1.0, 0.0], vec![0.0, 0.0]])?])?;
    let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2)?;
    let s = Space::new(2, Norm::L2)?;
    let h = 0.5f64.sqrt();
    let spec = ApproxSpec::new(ApproxSet::Points(vec![vec![1.0, 0.0], vec![h, -h], vec![0.0, -1.0]]), 1.0, &c)?;
    let fa = AugmentedFunctional::new(&c, vec![1.0, 1.0], 4.0 / 3.0, &s)?;
    let lambda = lambda_bound(&spec, &fa, &s)?;
    let amin = is_amin(&a, &AMinQuery { fa, x0: vec![0.0, 0.0], lambda }, &s)?;
    let witness = match is_approx_benson(&a, &c, &spec, &[0.0, 0.0])? {
        Verdict::No(y) => Some(y),
        _ => None,
    };
    let witness_ok = witness.as_ref().is_some_and(|y| (y[0] + 1.0).abs() < 1e-9 && (y[1] + 1.0).abs() < 1e-9);
    Ok(Outcome {
        passed: (lambda - 1.0 / 3.0).abs() < 1e-12 && amin && witness_ok,
        detail: format!("lambda {lambda:.17}, amin {amin}, witness {witness:?}"),
    })
}

fn timed<F: FnOnce() -> Result<Outcome>>(f: F) -> (Result<Outcome>, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() -> ExitCode {
    let total = Instant::now();
    let insts = instances(SEED, 500);
    let mut results: Vec<(&str, Result<Outcome>)> = Vec::new();

    let (out, t) = timed(golden);
    results.push(("golden approximate example", out.map(|o| within(o, t, Duration::from_secs(1)))));

    let (out, t) = timed(|| Ok(rows(&[&suite_chain(&insts)?.0], 500)));
    results.push(("inclusion chain over 500 instances", out.map(|o| within(o, t, Duration::from_secs(30)))));

    results.push((
        "certificate soundness",
        (|| Ok(rows(&[&suite_soundness(&insts)?, &suite_approx_soundness(&insts)?], 1)))(),
    ));

    results.push(("scalarization necessity on 50 linf instances", suite_necessity(SEED, 50).map(|r| rows(&[&r], 50))));

    results.push((
        "witness inequalities on 100 pairs",
        (|| {
            let pairs = ssp_pairs(SEED, 100, &NORMS)?;
            let (w, e) = suite_witness(&pairs, 10_000)?;
            Ok(rows(&[&w, &e], 1000))
        })(),
    ));

    results.push((
        "relative position dichotomy on 200 pairs",
        ssp_pairs(SEED ^ 0x5eed, 200, &NORMS).map(|p| rows(&[&suite_dichotomy(&p)], 200)),
    ));

    results.push((
        "strong monotonicity on 50 instances",
        suite_monotonicity(&insts[..50], 10_000).map(|r| rows(&[&r], 50)),
    ));

    results.push((
        "oracle agreement over 500 instances",
        suite_oracles(&insts, &OracleGrid { seed: SEED, ..OracleGrid::default() }).map(|r| rows(&[&r], 1)),
    ));

    results.push(("ssp symmetry on 100 pairs", suite_symmetry(SEED, 100).map(|r| rows(&[&r], 100))));

    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(o) => {
                println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
                failed += usize::from(!o.passed);
            }
            Err(e) => {
                println!("FAIL {name}: error {e}");
                failed += 1;
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", results.len() - failed, results.len(), total.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
