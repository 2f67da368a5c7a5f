//! Exponent fitting, calibrated estimate envelopes and stability sweeps over
//! solver trajectories.

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operators::TerminalSetup;
use crate::quadrature::TimeGrid;
use crate::solver::{eta_cri, eta_glo, ConstantsBundle, DerivativeOrder, ProblemSpec, SolveMode, Trajectory, TvpSolver};
use crate::spectral_basis::SpectralField;

/// Nodes excluded at each end of a default regression window.
pub const EDGE_NODES: usize = 3;

/// Least-squares line through (log x, log y).
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Node indices used (end exclusive).
    pub window: Range<usize>,
}

/// Fit log y = slope · log x + intercept. Requires at least 5 points, all
/// positive, with distinct abscissae.
pub fn fit_log_log(x: &[f64], y: &[f64], window: Range<usize>) -> Result<ExponentFit> {
    if x.len() != y.len() || x.len() < 5 {
        return Err(Error::DegenerateWindow(format!("need at least 5 points, got {}", x.len().min(y.len()))));
    }
    if let Some(i) = x.iter().zip(y).position(|(a, b)| !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite())) {
        return Err(Error::DegenerateWindow(format!("non-positive value at point {i} (x = {}, y = {})", x[i], y[i])));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx <= 1e-24 * n {
        return Err(Error::DegenerateWindow("abscissae do not vary".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy <= 1e-300 { 1.0 } else { (1.0 - sse / syy).clamp(0.0, 1.0) };
    Ok(ExponentFit { slope, intercept, r_squared, window })
}

/// Interior window: drop the 3 nodes nearest 0 and the 3 nearest T.
pub fn interior_window(grid: &TimeGrid) -> Range<usize> {
    let n = grid.intervals();
    EDGE_NODES..(n + 1).saturating_sub(EDGE_NODES).max(EDGE_NODES)
}

/// First decade of the resolved blow-up regime: t_J ≤ t_n ≤ 10 t_J with
/// t_J = λ_max^{-1/α}. Below t_J every retained mode is frozen and the
/// truncated solution is flat, so a window starting at 0 sees no blow-up.
pub fn blowup_window(grid: &TimeGrid, lambda_max: f64, alpha: f64) -> Range<usize> {
    let nodes = grid.nodes();
    let interior = interior_window(grid);
    let t_j = lambda_max.powf(-1.0 / alpha);
    let start = nodes.iter().position(|&t| t >= t_j).unwrap_or(nodes.len()).max(interior.start);
    let end = nodes.iter().rposition(|&t| t <= 10.0 * t_j).map_or(start, |i| i + 1).min(interior.end);
    start..end.max(start)
}

fn check_window(traj: &Trajectory, window: &Range<usize>) -> Result<()> {
    if window.end > traj.states.len() || window.start >= window.end {
        return Err(Error::DegenerateWindow(format!("window {:?} outside nodes 0..{}", window, traj.states.len())));
    }
    Ok(())
}

/// Slope of log ‖u(t_n)‖_{ℍ^γ} against log t_n over `window`.
pub fn fit_blowup_exponent(traj: &Trajectory, gamma: f64, window: Range<usize>) -> Result<ExponentFit> {
    check_window(traj, &window)?;
    let x: Vec<f64> = window.clone().map(|n| traj.grid.node(n)).collect();
    let y: Vec<f64> = window.clone().map(|n| traj.states[n].norm_hs(gamma)).collect();
    fit_log_log(&x, &y, window)
}

/// How increments are paired for a Hölder fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncrementPairs {
    /// (t_n, t_{n+1}) for consecutive nodes.
    Adjacent,
    /// (t_a, t_n) with t_a the first node of the window.
    Anchored,
}

/// Result of a Hölder-modulus regression.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderFit {
    pub fit: ExponentFit,
    pub expected: f64,
    /// max ‖Δu‖ / Δt^expected over the pairs used.
    pub constant: f64,
}

/// Regress log ‖u(t̃) - u(t)‖_{ℍ^γ} on log (t̃ - t) over pairs inside
/// `window`.
pub fn fit_holder_modulus(
    traj: &Trajectory,
    gamma: f64,
    expected: f64,
    window: Range<usize>,
    pairs: IncrementPairs,
) -> Result<HolderFit> {
    check_window(traj, &window)?;
    let nodes = traj.grid.nodes();
    let idx: Vec<(usize, usize)> = match pairs {
        IncrementPairs::Adjacent => (window.start..window.end - 1).map(|n| (n, n + 1)).collect(),
        IncrementPairs::Anchored => (window.start + 1..window.end).map(|n| (window.start, n)).collect(),
    };
    let mut x = Vec::with_capacity(idx.len());
    let mut y = Vec::with_capacity(idx.len());
    let mut constant = 0.0f64;
    for &(a, b) in &idx {
        let dt = nodes[b] - nodes[a];
        let du = traj.states[b].combine(1.0, &traj.states[a], -1.0).norm_hs(gamma);
        constant = constant.max(du / dt.powf(expected));
        x.push(dt);
        y.push(du);
    }
    let fit = fit_log_log(&x, &y, window)?;
    Ok(HolderFit { fit, expected, constant })
}

/// One estimate: `lhs` is compared with `rate · ‖f‖` at the node where the
/// quotient peaks.
#[derive(Debug, Clone, PartialEq)]
struct RawEstimate {
    id: &'static str,
    lhs: f64,
    rhs_unit: f64,
}

impl RawEstimate {
    fn quotient(&self) -> f64 {
        if self.rhs_unit > 0.0 {
            self.lhs / self.rhs_unit
        } else if self.lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn peak<I: Iterator<Item = (f64, f64)>>(id: &'static str, it: I) -> RawEstimate {
    let mut best = RawEstimate { id, lhs: 0.0, rhs_unit: 0.0 };
    let mut q = -1.0;
    for (lhs, rhs) in it {
        let r = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        if r > q {
            q = r;
            best = RawEstimate { id, lhs, rhs_unit: rhs };
        }
    }
    best
}

fn hypotheses(problem: &ProblemSpec, mode: SolveMode) -> Result<()> {
    let report = match mode {
        SolveMode::Picard => problem.check_picard(),
        SolveMode::Path => problem.check_path(),
        SolveMode::Contraction => problem.check_critical(),
        SolveMode::Forward => return Err(Error::Input("estimate suite needs a terminal value mode".into())),
    };
    if report.pass() {
        Ok(())
    } else {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::Domain(format!("hypotheses not met: {}", msgs.join("; "))))
    }
}

/// Left-hand sides and unit right-hand sides of every estimate in scope for
/// `mode`.
fn raw_estimates(solver: &TvpSolver, traj: &Trajectory, mode: SolveMode) -> Result<Vec<RawEstimate>> {
    let problem = solver.problem();
    let r = &problem.regularity;
    let a = problem.alpha();
    let grid = &traj.grid;
    let nodes = grid.nodes();
    let nn = grid.intervals();
    let f = &problem.f;
    let states = &traj.states;
    let pointwise = |id, gamma: f64, rate: f64, fnorm: f64| {
        peak(id, (1..=nn).map(move |n| (states[n].norm_hs(gamma), nodes[n].powf(-rate) * fnorm)))
    };
    let adjacent = |id, gamma: f64, eta: f64, fnorm: f64| {
        let w = interior_window(grid);
        peak(
            id,
            (w.start..w.end.saturating_sub(1)).map(move |n| {
                let du = states[n + 1].combine(1.0, &states[n], -1.0).norm_hs(gamma);
                (du, (nodes[n + 1] - nodes[n]).powf(eta) * fnorm)
            }),
        )
    };
    let mut out = Vec::new();
    match mode {
        SolveMode::Picard => {
            let fnorm = f.norm_hs(r.nu + r.theta);
            out.push(pointwise("blowup", r.nu, a * (1.0 - r.theta), fnorm));
            let tp = r.theta_prime.min(r.theta);
            out.push(pointwise("spatial_gain", r.nu + r.theta - tp, a * (1.0 - tp), fnorm));
            if let Some(eta) = eta_glo(a, r.theta, r.nu_prime) {
                out.push(adjacent("holder", r.nu - r.nu_prime, eta, fnorm));
            }
            let d1 = solver.reconstruct_derivatives(traj, DerivativeOrder::First)?;
            let g1 = r.nu - r.nu1 - 1.0 / a;
            let rate1 = a * (1.0 - r.theta - r.nu1);
            out.push(peak(
                "first_derivative",
                (1..=nn).map(|n| (d1[n].as_ref().map_or(0.0, |d| d.norm_hs(g1)), nodes[n].powf(-rate1) * fnorm)),
            ));
            let da = solver.reconstruct_derivatives(traj, DerivativeOrder::Alpha)?;
            let ga = r.nu - r.nu_alpha - 1.0 / a;
            let ratea = a * (1.0 - r.theta - r.nu_alpha).min(1.0 - r.theta);
            out.push(peak(
                "fractional_derivative",
                (1..=nn).map(|n| (da[n].as_ref().map_or(0.0, |d| d.norm_hs(ga)), nodes[n].powf(-ratea) * fnorm)),
            ));
        }
        SolveMode::Path => {
            let fnorm = f.norm_hs(r.nu + r.theta + 1.0);
            let sup = states.iter().map(|s| s.norm_hs(r.nu)).fold(0.0, f64::max);
            let q = r.q.max(1.0);
            let lq: f64 = (0..nn).map(|n| (nodes[n + 1] - nodes[n]) * states[n].norm_hs(r.sigma).powf(q)).sum();
            out.push(RawEstimate { id: "path_norm", lhs: sup + lq.powf(1.0 / q), rhs_unit: fnorm });
        }
        SolveMode::Contraction => {
            let fnorm = f.norm_hs(r.nu + 1.0 - r.vartheta);
            out.push(pointwise("critical_blowup", r.nu, a * r.vartheta, fnorm));
            let vp = r.vartheta_prime.clamp(r.vartheta, 1.0);
            out.push(pointwise("critical_spatial", r.nu + vp - r.vartheta, a * vp, fnorm));
            if let Some(eta) = eta_cri(a, r.eta, r.vartheta) {
                out.push(adjacent("critical_holder", r.nu - r.eta, eta, fnorm));
            }
        }
        SolveMode::Forward => unreachable!("rejected by hypotheses()"),
    }
    Ok(out)
}

/// Constants of the "≲" estimates, fitted on linear single-mode problems and
/// then frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateEnvelope {
    pub mode: SolveMode,
    pub constants: BTreeMap<&'static str, f64>,
}

impl EstimateEnvelope {
    /// Fit each constant as the largest quotient over the problems
    /// G ≡ 0, f = φ_j, j = 1..J. Modes are orthogonal, so this is the
    /// operator norm of the linear solution map in each estimate.
    pub fn calibrate(problem: &ProblemSpec, grid: &TimeGrid, mode: SolveMode) -> Result<Self> {
        hypotheses(problem, mode)?;
        let mut constants: BTreeMap<&'static str, f64> = BTreeMap::new();
        let basis = problem.setup.basis().clone();
        for j in 1..=problem.setup.len() {
            let p = ProblemSpec::new(
                problem.setup.clone(),
                SpectralField::single_mode(basis.clone(), j)?,
                crate::nonlinearity::NonlinearitySpec::zero(),
                problem.regularity.clone(),
            )?;
            let solver = TvpSolver::new(p, grid.clone())?;
            let traj = solver.solve(mode, 1.0, 1, None)?;
            for e in raw_estimates(&solver, &traj, mode)? {
                let c = constants.entry(e.id).or_insert(0.0);
                *c = c.max(e.quotient());
            }
        }
        Ok(EstimateEnvelope { mode, constants })
    }
}

/// One line of the estimate report.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub estimate_id: String,
    pub lhs_max: f64,
    pub rhs_envelope: f64,
    pub ratio: f64,
    pub pass: bool,
}

/// Estimate rows plus advisory admissibility predicates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
    /// Admissibility predicates; informational, they never fail the report.
    pub advisory: Vec<EstimateRow>,
}

impl EstimateReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn row(&self, id: &str) -> Option<&EstimateRow> {
        self.rows.iter().find(|r| r.estimate_id == id)
    }
}

/// Compare every estimate in scope against the frozen envelope. Fails with
/// a DomainError naming the violated hypotheses when the regularity indices
/// are outside the theorem's range.
pub fn verify_estimate_suite(
    problem: &ProblemSpec,
    traj: &Trajectory,
    bundle: Option<&ConstantsBundle>,
    envelope: &EstimateEnvelope,
) -> Result<EstimateReport> {
    let mode = envelope.mode;
    hypotheses(problem, mode)?;
    let solver = TvpSolver::new(problem.clone(), traj.grid.clone())?;
    let mut report = EstimateReport::default();
    for e in raw_estimates(&solver, traj, mode)? {
        let c = envelope.constants.get(e.id).copied().unwrap_or(f64::NAN);
        let rhs = c * e.rhs_unit;
        let ratio = if rhs > 0.0 {
            e.lhs / rhs
        } else if e.lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        report.rows.push(EstimateRow {
            estimate_id: e.id.to_string(),
            lhs_max: e.lhs,
            rhs_envelope: rhs,
            ratio,
            pass: ratio <= 1.0,
        });
    }
    if let Some(b) = bundle {
        for adm in &b.admissibility {
            report.advisory.push(EstimateRow {
                estimate_id: format!("admissibility.{}", adm.name),
                lhs_max: adm.lhs,
                rhs_envelope: adm.rhs,
                ratio: adm.lhs / adm.rhs,
                pass: adm.pass,
            });
        }
    }
    Ok(report)
}

/// One solve of a stability sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub delta: f64,
    pub trial: usize,
    /// Weighted sup-norm of u(f) - u(f + δ).
    pub solution_diff: f64,
    /// ‖δ‖ in the data norm.
    pub data_diff: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
}

impl StabilityReport {
    /// Largest max / min of the ratios across δ > 0 within one trial.
    pub fn spread(&self) -> f64 {
        let trials = self.rows.iter().map(|r| r.trial + 1).max().unwrap_or(0);
        (0..trials)
            .map(|k| {
                let r: Vec<f64> = self.rows.iter().filter(|r| r.trial == k && r.delta > 0.0).map(|r| r.ratio).collect();
                let hi = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
                if r.is_empty() {
                    1.0
                } else {
                    hi / lo
                }
            })
            .fold(1.0, f64::max)
    }
}

/// Solver settings shared by the runs of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub mode: SolveMode,
    pub tol: f64,
    pub max_iter: usize,
}

/// Solve for f and f + δ·e (e a seeded random direction of unit data norm)
/// for every δ and trial, and report ‖u(f) - u(f+δe)‖ in the run's weighted
/// norm divided by ‖δe‖ in the data norm.
pub fn stability_experiment(
    problem: &ProblemSpec,
    grid: &TimeGrid,
    deltas: &[f64],
    n_trials: usize,
    settings: RunSettings,
    seed: u64,
) -> Result<StabilityReport> {
    let r = &problem.regularity;
    let (w, data_order) = match settings.mode {
        SolveMode::Contraction => (problem.alpha() * r.vartheta, r.nu + 1.0 - r.vartheta),
        SolveMode::Path => (0.0, r.nu + r.theta + 1.0),
        _ => (problem.alpha() * (1.0 - r.theta), r.nu + r.theta),
    };
    let base_solver = TvpSolver::new(problem.clone(), grid.clone())?;
    let base = base_solver.solve(settings.mode, settings.tol, settings.max_iter, None)?;
    let basis: Arc<_> = problem.setup.basis().clone();
    let lambda = problem.setup.lambdas();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = StabilityReport::default();
    for trial in 0..n_trials {
        let raw: Vec<f64> =
            (0..lambda.len()).map(|j| rng.gen_range(-1.0..1.0) * lambda[j].powf(-data_order) / (j + 1) as f64).collect();
        let dir = SpectralField::new(basis.clone(), raw)?;
        let dir = dir.scaled(1.0 / dir.norm_hs(data_order));
        for &delta in deltas {
            let f2 = problem.f.combine(1.0, &dir, delta);
            let data_diff = f2.combine(1.0, &problem.f, -1.0).norm_hs(data_order);
            let mut p2 = problem.clone();
            p2.f = f2;
            let run = TvpSolver::new(p2, grid.clone())?.solve(settings.mode, settings.tol, settings.max_iter, None)?;
            let diffs: Vec<SpectralField> = run.states.iter().zip(&base.states).map(|(a, b)| a.combine(1.0, b, -1.0)).collect();
            let solution_diff = weighted_sup(grid.nodes(), w, |n| diffs[n].norm_hs(r.nu));
            let ratio = if data_diff > 0.0 { solution_diff / data_diff } else { 0.0 };
            report.rows.push(StabilityRow { delta, trial, solution_diff, data_diff, ratio });
        }
    }
    Ok(report)
}

fn weighted_sup<F: Fn(usize) -> f64>(nodes: &[f64], w: f64, f: F) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|(_, &t)| w == 0.0 || t > 0.0)
        .map(|(n, &t)| if w == 0.0 { f(n) } else { t.powf(w) * f(n) })
        .fold(0.0, f64::max)
}

/// Build a trajectory from externally supplied node values (for fitting
/// synthetic data).
pub fn trajectory_from_states(grid: &TimeGrid, states: Vec<SpectralField>) -> Result<Trajectory> {
    if states.len() != grid.intervals() + 1 {
        return Err(Error::Grid(format!("{} states for {} nodes", states.len(), grid.intervals() + 1)));
    }
    Ok(Trajectory {
        grid: grid.clone(),
        states,
        iterations: Vec::new(),
        mode: SolveMode::Forward,
        weight: 0.0,
        norm_order: 0.0,
        converged: true,
        warnings: Vec::new(),
    })
}

/// Relative terminal mismatch ‖u_forward(T) - f‖_{ℍ^0} / ‖f‖_{ℍ^0}.
pub fn terminal_mismatch(forward: &Trajectory, f: &SpectralField) -> f64 {
    forward.final_state().combine(1.0, f, -1.0).norm_hs(0.0) / f.norm_hs(0.0)
}

/// Reconstruct u(0) from a converged terminal solve and march it forward on
/// `forward_grid`; returns (u(0), forward trajectory, relative mismatch).
pub fn round_trip(
    solver: &TvpSolver,
    traj: &Trajectory,
    setup: &TerminalSetup,
    forward_grid: &TimeGrid,
) -> Result<(SpectralField, Trajectory, f64)> {
    let u0 = solver.reconstruct_initial(traj)?;
    let p = solver.problem();
    let fw = crate::solver::solve_ivp_forward(setup, forward_grid, &u0, &p.nonlinearity, 0.0, 0)?;
    let err = terminal_mismatch(&fw, &p.f);
    Ok((u0, fw, err))
}
