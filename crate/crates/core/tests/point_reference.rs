//! Single-mode solver values against `tools/oracles/point_oracle.py`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use fracterm_core::mittag_leffler::{ml, ml_kernel, MLParams};
use fracterm_core::solver::{solve_ivp_forward, DerivativeOrder};
use fracterm_core::*;

const TABLE: &str = include_str!("data/point_reference.csv");

fn table() -> BTreeMap<String, f64> {
    TABLE
        .lines()
        .skip(1)
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

fn close(got: f64, want: f64, rel: f64, what: &str) {
    let err = (got - want).abs() / want.abs();
    assert!(err <= rel, "{what}: got {got}, want {want}, rel {err:.2e}");
}

fn phi1_problem(j: usize) -> ProblemSpec {
    let b = Arc::new(SpectralBasis::dirichlet_1d(PI, j).unwrap());
    let setup = TerminalSetup::new(1.5, 2.0, b.clone()).unwrap();
    let f = SpectralField::single_mode(b, 1).unwrap();
    ProblemSpec::new(setup, f, NonlinearitySpec::zero(), Regularity::default()).unwrap()
}

#[test]
fn mittag_leffler_points() {
    let t = table();
    close(ml(MLParams::new(1.5, 1.0).unwrap(), -2.0).unwrap(), t["ml_1.5_1_m2"], 1e-13, "E(-2)");
    close(ml_kernel(1.5, 4.0, 0.5).unwrap(), t["kernel_1.5_4_0.5"], 1e-13, "kernel");
}

#[test]
fn terminal_problem_initial_value() {
    let t = table();
    let p = phi1_problem(4);
    let grid = TimeGrid::new(2.0, 8, 1.0).unwrap();
    let s = TvpSolver::new(p, grid).unwrap();
    let tr = s.solve(SolveMode::Picard, 1e-12, 5, None).unwrap();
    let u0 = s.reconstruct_initial(&tr).unwrap();
    close(u0.coeffs()[0], t["u0_1.5_2"], 1e-12, "u(0)");
    assert!(u0.coeffs()[1..].iter().all(|&c| c == 0.0));
}

#[test]
fn forward_linear_solution() {
    let t = table();
    let p = phi1_problem(4);
    let grid = TimeGrid::new(2.0, 8, 1.0).unwrap();
    let fw = solve_ivp_forward(&p.setup, &grid, &p.f, &p.nonlinearity, 1e-12, 10).unwrap();
    for s in ["0.25", "0.5", "1", "1.5", "2"] {
        let n = grid.index_of(s.parse().unwrap()).unwrap();
        close(fw.states[n].coeffs()[0], t[&format!("fwd_1.5_{s}")], 1e-12, s);
    }
}

#[test]
fn first_derivative_closed_form_and_differences() {
    let t = table();
    let p = phi1_problem(2);
    let grid = TimeGrid::new(2.0, 2048, 1.0).unwrap();
    let s = TvpSolver::new(p, grid.clone()).unwrap();
    let tr = s.solve(SolveMode::Picard, 1e-12, 5, None).unwrap();
    let d = s.reconstruct_derivatives(&tr, DerivativeOrder::First).unwrap();
    let h = grid.node(1);
    for name in ["0.25", "0.5", "1", "1.5"] {
        let want = t[&format!("dudt_1.5_2_{name}")];
        let n = grid.index_of(name.parse().unwrap()).unwrap();
        close(d[n].as_ref().unwrap().coeffs()[0], want, 1e-12, name);
        let fd = (tr.states[n + 1].coeffs()[0] - tr.states[n - 1].coeffs()[0]) / (2.0 * h);
        close(fd, want, 1e-4, name);
    }
}
