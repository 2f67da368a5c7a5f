//! Property tests for the basis, operators, source terms, solver and fits.

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;

use fracterm_core::analysis::fit_log_log;
use fracterm_core::integrate::adaptive;
use fracterm_core::operators::DerivativeOp;
use fracterm_core::*;

type FieldOp<'a> = Box<dyn Fn(&SpectralField) -> SpectralField + 'a>;

fn interval(j: usize) -> Arc<SpectralBasis> {
    Arc::new(SpectralBasis::dirichlet_1d(PI, j).unwrap())
}

fn field(b: &Arc<SpectralBasis>, c: &[f64]) -> SpectralField {
    SpectralField::new(b.clone(), c[..b.len()].to_vec()).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    let scale = b.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesis_is_linear(c1 in vec(-1.0f64..1.0, 12), c2 in vec(-1.0f64..1.0, 12), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let basis = interval(12);
        let (u, v) = (field(&basis, &c1), field(&basis, &c2));
        let lhs = u.combine(a, &v, b).to_samples().unwrap();
        let su = u.to_samples().unwrap();
        let sv = v.to_samples().unwrap();
        let rhs: Vec<f64> = su.iter().zip(&sv).map(|(x, y)| a * x + b * y).collect();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn parseval(c in vec(-1.0f64..1.0, 16)) {
        let basis = interval(16);
        let u = field(&basis, &c);
        let s = u.to_samples().unwrap();
        let w = basis.weights().unwrap();
        let discrete: f64 = s.iter().zip(w).map(|(x, w)| w * x * x).sum::<f64>().sqrt();
        prop_assert!((discrete - u.norm_hs(0.0)).abs() <= 1e-10 * u.norm_hs(0.0).max(1e-300));
        let back = SpectralField::from_samples(&s, basis.clone()).unwrap();
        prop_assert!(close(back.coeffs(), u.coeffs(), 1e-10));
    }

    #[test]
    fn norm_is_monotone_in_order(c in vec(-1.0f64..1.0, 10), g1 in -2.0f64..2.0, g2 in -2.0f64..2.0) {
        let basis = interval(10);
        let u = field(&basis, &c);
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        prop_assert!(u.norm_hs(lo) <= u.norm_hs(hi) * (1.0 + 1e-14));
    }

    #[test]
    fn weyl_constant_is_stable(j in 8usize..48, ratio in 1.0f64..3.0) {
        let c1 = SpectralBasis::dirichlet_1d(PI, j).unwrap().weyl_constant();
        let c2 = SpectralBasis::dirichlet_1d(PI, 2 * j).unwrap().weyl_constant();
        prop_assert!(c1 > 0.0 && (c2 / c1 - 1.0).abs() <= 0.05);
        // in 2D the infimum creeps down to 4π/|Ω| like j^{-1/2}; Pólya keeps it above
        let limit = 4.0 * PI / (PI * ratio * PI);
        let r1 = SpectralBasis::dirichlet_2d(PI, ratio * PI, 4 * j).unwrap().weyl_constant();
        let r2 = SpectralBasis::dirichlet_2d(PI, ratio * PI, 8 * j).unwrap().weyl_constant();
        prop_assert!(limit * (1.0 - 1e-12) <= r2 && r2 <= r1 && r1 <= 1.5 * limit, "{limit} {r1} {r2}");
    }

    #[test]
    fn operators_are_linear_and_decoupled(
        c1 in vec(-1.0f64..1.0, 8),
        c2 in vec(-1.0f64..1.0, 8),
        a in -2.0f64..2.0,
        t in 0.05f64..2.0,
        masked in 0usize..8,
    ) {
        let basis = interval(8);
        let setup = TerminalSetup::new(1.5, 2.0, basis.clone()).unwrap();
        let (u, v) = (field(&basis, &c1), field(&basis, &c2));
        let w = u.combine(a, &v, 1.0);
        let ops: Vec<FieldOp> = vec![
            Box::new(|f| setup.apply_b(t, f).unwrap()),
            Box::new(|f| setup.apply_p(t, f).unwrap()),
            Box::new(|f| setup.apply_b0(t, f).unwrap()),
            Box::new(|f| setup.apply_d(DerivativeOp::D1, t, f).unwrap()),
            Box::new(|f| setup.apply_d(DerivativeOp::D2, t, f).unwrap()),
            Box::new(|f| setup.apply_d(DerivativeOp::D3, t, f).unwrap()),
            Box::new(|f| setup.apply_d(DerivativeOp::D4, t, f).unwrap()),
        ];
        for op in &ops {
            let lhs = op(&w);
            let rhs = op(&u).combine(a, &op(&v), 1.0);
            prop_assert!(close(lhs.coeffs(), rhs.coeffs(), 1e-12));
            let single = u.map_modes(|j, c| if j == masked { c } else { 0.0 });
            let out = op(&single);
            prop_assert!(out.coeffs().iter().enumerate().all(|(j, &x)| j == masked || x == 0.0));
        }
    }

    #[test]
    fn kernel_antiderivative(lambda in 0.5f64..50.0, a in 0.0f64..1.0, width in 0.05f64..1.0, gap in 0.01f64..1.0) {
        let setup = TerminalSetup::new(1.5, 2.0, interval(1)).unwrap();
        let b = a + width;
        let t = b + gap;
        let quad = adaptive(|r| setup.p_multiplier(lambda, t - r), a, b, 1e-14, 1e-12).value;
        let e1 = setup.e1();
        let closed = (e1.eval_neg(lambda * gap.powf(1.5)).value - e1.eval_neg(lambda * (t - a).powf(1.5)).value) / lambda;
        prop_assert!((quad - closed).abs() <= 1e-8 * closed.abs().max(1e-3), "{quad} vs {closed}");
    }

    #[test]
    fn lipschitz_certificate(l1 in 0.01f64..2.0, c1 in vec(-1.0f64..1.0, 8), c2 in vec(-1.0f64..1.0, 8), nu in 0.0f64..1.0, t in 0.0f64..2.0) {
        let basis = interval(8);
        let g = NonlinearitySpec::lipschitz_scaled(l1);
        let (u, v) = (field(&basis, &c1), field(&basis, &c2));
        let dg = g.eval(t, &u).unwrap().combine(1.0, &g.eval(t, &v).unwrap(), -1.0);
        let du = u.combine(1.0, &v, -1.0);
        prop_assert!(dg.norm_hs(nu) <= l1 * du.norm_hs(nu) * (1.0 + 1e-9));
    }

    #[test]
    fn zero_is_preserved(s in 0.5f64..3.0, c_rho in 0.0f64..5.0, t in 0.0f64..2.0) {
        let basis = interval(6);
        let z = SpectralField::zeros(basis.clone());
        for g in [NonlinearitySpec::ginzburg_landau(s, c_rho, 0.5), NonlinearitySpec::burgers(c_rho, 0.5), NonlinearitySpec::lipschitz_scaled(c_rho)] {
            prop_assert!(g.eval(t, &z).unwrap().coeffs().iter().all(|&x| x == 0.0));
        }
    }

    // Polynomial source terms of band-limited fields are resolved exactly
    // once the collocation grid clears the aliasing floor.
    #[test]
    fn dealiased_products_do_not_depend_on_grid(c in vec(-1.0f64..1.0, 8), t in 0.1f64..2.0) {
        let coarse = Arc::new(SpectralBasis::dirichlet_1d(PI, 8).unwrap().with_collocation(24, true).unwrap());
        let fine = Arc::new(SpectralBasis::dirichlet_1d(PI, 8).unwrap().with_collocation(48, true).unwrap());
        for g in [NonlinearitySpec::burgers(1.0, 0.5), NonlinearitySpec::ginzburg_landau(2.0, 1.0, 0.5)] {
            let a = g.eval(t, &field(&coarse, &c)).unwrap();
            let b = g.eval(t, &field(&fine, &c)).unwrap();
            prop_assert!(close(a.coeffs(), b.coeffs(), 1e-10));
        }
    }

    #[test]
    fn power_law_fit_is_exact(p in -3.0f64..3.0, c in 0.1f64..10.0, n in 6usize..40) {
        let x: Vec<f64> = (1..=n).map(|i| 0.01 * 1.3f64.powi(i as i32)).collect();
        let y: Vec<f64> = x.iter().map(|x| c * x.powf(p)).collect();
        let fit = fit_log_log(&x, &y, 0..n).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-11);
        prop_assert!((fit.intercept - c.ln()).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solver_fixed_point_and_terminal_consistency(l1 in 0.005f64..0.05, decay in 1.0f64..3.0, mode in 0usize..3) {
        let basis = interval(6);
        let setup = TerminalSetup::new(1.5, 2.0, basis.clone()).unwrap();
        let f = SpectralField::new(basis.clone(), (1..=6).map(|k| (k as f64).powf(-decay)).collect()).unwrap();
        let p = ProblemSpec::new(setup, f.clone(), NonlinearitySpec::lipschitz_scaled(l1), Regularity::default()).unwrap();
        let grid = TimeGrid::new(2.0, 32, 2.0).unwrap();
        let solver = TvpSolver::new(p, grid.clone()).unwrap();
        let mode = [SolveMode::Picard, SolveMode::Path, SolveMode::Contraction][mode];
        let tol = 1e-11;
        let tr = solver.solve(mode, tol, 200, None).unwrap();
        prop_assert!(tr.final_state().combine(1.0, &f, -1.0).norm_hs(0.0) <= tol);
        let raw: Vec<Vec<f64>> = tr.states.iter().map(|s| s.coeffs().to_vec()).collect();
        let next = solver.apply_map(&raw).unwrap();
        let w = tr.weight;
        let step = (1..=grid.intervals())
            .map(|n| {
                let d: Vec<f64> = next[n].iter().zip(&raw[n]).map(|(a, b)| a - b).collect();
                grid.node(n).powf(w) * SpectralField::new(basis.clone(), d).unwrap().norm_hs(0.0)
            })
            .fold(0.0f64, f64::max);
        prop_assert!(step <= tol, "{step:e}");
        // geometric decay once the iteration has settled
        let diffs: Vec<f64> = tr.iterations.iter().map(|r| r.weighted_diff).collect();
        for k in 2..diffs.len() {
            prop_assert!(diffs[k] <= diffs[k - 1] * (1.0 + 1e-9) || diffs[k] < 1e-14);
        }
    }
}
