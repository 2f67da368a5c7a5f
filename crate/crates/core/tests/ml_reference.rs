//! Mittag-Leffler values against the frozen extended-precision table
//! produced by `tools/oracles/ml_oracle.py`.

use fracterm_core::mittag_leffler::{MLParams, MlEvaluator};

const TABLE: &str = include_str!("data/ml_reference.csv");

fn rows() -> Vec<(f64, f64, f64, f64)> {
    TABLE
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.trim().parse().unwrap()).collect();
            (v[0], v[1], v[2], v[3])
        })
        .collect()
}

#[test]
fn plain_evaluator_matches_table() {
    check(false);
}

#[test]
fn tabulated_evaluator_matches_table() {
    check(true);
}

fn check(tabulated: bool) {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut cached: Option<((f64, f64), MlEvaluator)> = None;
    for (a, b, z, reference) in rows() {
        if cached.as_ref().map(|c| c.0) != Some((a, b)) {
            let p = MLParams::new(a, b).unwrap();
            let ev = if tabulated { MlEvaluator::tabulated(p) } else { MlEvaluator::new(p) };
            cached = Some(((a, b), ev));
        }
        let ev = &cached.as_ref().unwrap().1;
        let v = ev.eval(z).unwrap();
        let scale = reference.abs().max(v.envelope);
        let err = (v.value - reference).abs();
        let rel = err / scale.max(1e-300);
        if err > 1e-15 {
            worst = worst.max(rel);
        }
        let ok = err <= (1e-12 * scale).max(1e-15);
        if !ok || !v.is_certified() {
            failures.push(format!(
                "a={a} b={b} z={z}: got {} ref {} rel {rel:.2e} bound {:.2e} branch {} certified {}",
                v.value,
                reference,
                v.error_bound,
                v.branch.name(),
                v.is_certified()
            ));
        }
        // a certified bound must actually hold
        if v.is_certified() {
            assert!(
                err <= 10.0 * v.error_bound.max(1e-16 * scale),
                "bound violated at a={a} b={b} z={z}: err {err:e} bound {:e}",
                v.error_bound
            );
        }
    }
    eprintln!("worst relative error {worst:.3e}");
    assert!(failures.is_empty(), "{} failures:\n{}", failures.len(), failures.join("\n"));
}
