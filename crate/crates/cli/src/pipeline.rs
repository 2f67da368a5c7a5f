//! The experiment pipeline behind `solve`, `roundtrip`, `regularity`,
//! `constants` and `validate`.

use std::ops::Range;
use std::path::PathBuf;

use log::{debug, info, warn};

use fracterm_core::analysis::{
    blowup_window, fit_blowup_exponent, fit_holder_modulus, fit_log_log, interior_window, round_trip, stability_experiment,
    verify_estimate_suite, EstimateEnvelope, IncrementPairs, RunSettings,
};
use fracterm_core::solver::{
    compute_constants, eta_cri, eta_glo, solve_ivp_forward, ConstantInputs, ConstantsBundle, DerivativeOrder,
};
use fracterm_core::{CheckReport, Error, MLBoundConstants, NonlinearitySpec, ProblemSpec, SolveMode, Trajectory, TvpSolver};

use crate::config::{ExperimentConfig, ModeName, Source};
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, Table};

/// Which pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Roundtrip,
    Regularity,
    Constants,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    /// Overrides the configured output directory.
    pub out: Option<PathBuf>,
    pub seed: u64,
}

/// One line of report.csv. Advisory rows carry the `advisory.` prefix and
/// never affect the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
}

impl ReportRow {
    fn new(id: impl Into<String>, lhs: f64, rhs: f64, pass: bool) -> Self {
        let ratio = if rhs != 0.0 { lhs / rhs } else { f64::NAN };
        ReportRow { id: id.into(), lhs, rhs, ratio, pass }
    }

    fn advisory(id: impl AsRef<str>, lhs: f64, rhs: f64, pass: bool) -> Self {
        Self::new(format!("advisory.{}", id.as_ref()), lhs, rhs, pass)
    }

    pub fn is_advisory(&self) -> bool {
        self.id.starts_with("advisory.")
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub report: Vec<ReportRow>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    /// All hard checks passed.
    pub fn pass(&self) -> bool {
        self.report.iter().filter(|r| !r.is_advisory()).all(|r| r.pass)
    }
}

fn report_table(rows: &[ReportRow]) -> Table {
    let mut t = Table::new(&["estimate_id", "lhs_max", "rhs_envelope", "ratio", "pass"]);
    for r in rows {
        t.push(vec![r.id.clone(), fmt_f64(r.lhs), fmt_f64(r.rhs), fmt_f64(r.ratio), r.pass.to_string()]);
    }
    t
}

/// Run a pipeline. On failure report.csv still records the error code
/// (and a partial trajectory when the iteration did not converge).
pub fn run(cfg: &ExperimentConfig, cmd: Command, opts: &RunOptions) -> Result<RunSummary> {
    let out_dir = opts.out.clone().unwrap_or_else(|| cfg.output.clone());
    let mut ctx = Context { cfg, cmd, opts, out_dir: out_dir.clone(), report: Vec::new(), files: Vec::new() };
    match ctx.execute() {
        Ok(()) => {
            let p = report_table(&ctx.report).write(&out_dir, "report.csv")?;
            ctx.files.push(p);
            Ok(RunSummary { out_dir, report: ctx.report, files: ctx.files })
        }
        Err(e) => {
            if let CliError::Core(Error::NonConvergence { partial, .. }) = &e {
                // best effort: the error itself is what gets returned
                let _ = ctx.write_trajectory(partial);
            }
            let mut rows = ctx.report.clone();
            rows.push(ReportRow::new(format!("error.{}", e.code()), f64::NAN, f64::NAN, false));
            let _ = report_table(&rows).write(&out_dir, "report.csv");
            Err(e)
        }
    }
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    cmd: Command,
    opts: &'a RunOptions,
    out_dir: PathBuf,
    report: Vec<ReportRow>,
    files: Vec<PathBuf>,
}

/// The problem with its resolved source term and constants.
pub struct Prepared {
    pub problem: ProblemSpec,
    pub source: Source,
    pub bounds: Option<MLBoundConstants>,
    pub bundle: Option<ConstantsBundle>,
}

/// Build the problem, fitting bound and growth constants as needed.
pub fn prepare(cfg: &ExperimentConfig, seed: u64, want_constants: bool) -> Result<Prepared> {
    let basis = cfg.basis()?;
    let setup = cfg.setup(basis.clone())?;
    let (j, amp) = setup.worst_amplification();
    info!("{} modes, worst amplification {amp:.3e} at mode {j}", setup.len());
    let f = cfg.terminal_data(&basis)?;
    let mut problem = ProblemSpec::new(setup, f, NonlinearitySpec::zero(), cfg.problem.regularity.clone())?;
    let bounds = if want_constants || cfg.needs_bounds_for_source() {
        let b = problem.setup.bound_constants(cfg.analysis.bound_points)?;
        debug!("bound constants m = {}, M = {}", b.m_alpha, b.big_m_alpha);
        Some(b)
    } else {
        None
    };
    let source = cfg.source(&problem, bounds.as_ref(), seed)?;
    problem.nonlinearity = source.spec.clone();
    let bundle = match (&bounds, want_constants) {
        (Some(b), true) => match compute_constants(&constant_inputs(cfg, &problem, &source, b)) {
            Ok(c) => Some(c),
            Err(e) => {
                warn!("constants unavailable: {e}");
                None
            }
        },
        _ => None,
    };
    Ok(Prepared { problem, source, bounds, bundle })
}

fn constant_inputs(cfg: &ExperimentConfig, problem: &ProblemSpec, source: &Source, bounds: &MLBoundConstants) -> ConstantInputs {
    let r = &problem.regularity;
    let mut inp = ConstantInputs::for_problem(problem, bounds);
    match &problem.nonlinearity.kind {
        fracterm_core::NonlinearityKind::LipschitzScaled { l1 } => inp.l1 = Some(*l1),
        _ if cfg.nonlinearity.is_critical() => {
            inp.k0 = source.k0;
            inp.f_norm_critical = Some(problem.f.norm_hs(r.nu + 1.0 - r.vartheta));
        }
        _ => {}
    }
    inp
}

impl Context<'_> {
    fn execute(&mut self) -> Result<()> {
        let cfg = self.cfg;
        let want_constants = cfg.analysis.constants || self.cmd == Command::Constants;
        let prep = prepare(cfg, self.opts.seed, want_constants)?;
        if let Some(b) = &prep.bundle {
            self.write_constants(b, &prep)?;
            for a in &b.admissibility {
                self.report.push(ReportRow::advisory(format!("admissibility.{}", a.name), a.lhs, a.rhs, a.pass));
            }
        }
        if self.cmd == Command::Constants {
            return Ok(());
        }
        let mode = if self.cmd == Command::Roundtrip && cfg.solver.mode == ModeName::Forward {
            return Err(CliError::Config { field: "solver.mode".into(), message: "a round trip needs a terminal solve".into() });
        } else {
            cfg.mode()
        };
        let grid = cfg.grid()?;
        let problem = prep.problem.clone();

        if mode == SolveMode::Forward {
            info!("forward march from f on {} intervals", grid.intervals());
            let traj =
                solve_ivp_forward(&problem.setup, &grid, &problem.f, &problem.nonlinearity, cfg.solver.tol, cfg.solver.max_iter)?;
            self.write_trajectory(&traj)?;
            return Ok(());
        }

        let solver = TvpSolver::new(problem.clone(), grid.clone())?;
        let radius = match mode {
            SolveMode::Contraction => cfg.solver.radius.or(prep.bundle.as_ref().and_then(|b| b.r_hat)),
            _ => cfg.solver.radius,
        };
        // the envelope calibration is independent of the main solve
        let (traj, envelope) = rayon::join(
            || solver.solve(mode, cfg.solver.tol, cfg.solver.max_iter, radius),
            || cfg.analysis.estimates.then(|| EstimateEnvelope::calibrate(&problem, &grid, mode)),
        );
        let traj = traj?;
        info!("{} converged in {} iterations", mode.name(), traj.iterations.len());
        for w in &traj.warnings {
            warn!("{w}");
        }
        // a single step means the map is constant, so there is no difference to report
        let last = match traj.iterations.len() {
            0 | 1 => 0.0,
            _ => traj.iterations.last().map_or(0.0, |r| r.weighted_diff),
        };
        self.report.push(ReportRow::new("converged", last, cfg.solver.tol, traj.converged));
        if let Some(f) = traj.contraction_factor() {
            let limit = match mode {
                SolveMode::Contraction => {
                    let s = problem.nonlinearity.meta.s;
                    (2.0 + s) / (2.0 + 2.0 * s)
                }
                _ => 1.0,
            };
            self.report.push(ReportRow::advisory("contraction_factor", f, limit, f <= limit));
        }
        if let Some(r) = radius {
            let peak = traj.iterations.iter().map(|i| i.weighted_norm).fold(0.0, f64::max);
            self.report.push(ReportRow::advisory("radius", peak, r, peak <= r));
        }
        if cfg.analysis.residual {
            let res = solver.weighted_residual(&traj)?;
            self.report.push(ReportRow::new("equation_residual", res, 10.0 * cfg.solver.tol, res <= 10.0 * cfg.solver.tol));
        }
        if let Some(env) = envelope {
            let env = env?;
            let rep = verify_estimate_suite(&problem, &traj, prep.bundle.as_ref(), &env)?;
            for r in &rep.rows {
                self.report.push(ReportRow {
                    id: format!("estimate.{}", r.estimate_id),
                    lhs: r.lhs_max,
                    rhs: r.rhs_envelope,
                    ratio: r.ratio,
                    pass: r.pass,
                });
            }
        }
        if cfg.analysis.regularity || self.cmd == Command::Regularity {
            self.regularity_rows(&solver, &traj, mode)?;
        }
        if let Some(st) = &cfg.analysis.stability {
            let settings = RunSettings { mode, tol: cfg.solver.tol, max_iter: cfg.solver.max_iter };
            let rep = stability_experiment(&problem, &grid, &st.deltas, st.trials, settings, self.opts.seed)?;
            let mut t = Table::new(&["delta", "trial", "solution_diff", "data_diff", "ratio"]);
            for r in &rep.rows {
                t.push(vec![
                    fmt_f64(r.delta),
                    r.trial.to_string(),
                    fmt_f64(r.solution_diff),
                    fmt_f64(r.data_diff),
                    fmt_f64(r.ratio),
                ]);
            }
            self.files.push(t.write(&self.out_dir, "stability.csv")?);
            let spread = rep.spread();
            self.report.push(ReportRow::new("stability_spread", spread, 2.0, spread < 2.0));
        }

        let mut extra = Vec::new();
        if self.cmd == Command::Roundtrip || cfg.solver.mode == ModeName::Roundtrip {
            let fine = grid.refined(cfg.solver.forward_refine)?;
            let (u0, fw, err) = round_trip(&solver, &traj, &problem.setup, &fine)?;
            info!("round trip mismatch {err:.3e}");
            self.report.push(ReportRow::new("roundtrip_error", err, cfg.solver.roundtrip_tol, err <= cfg.solver.roundtrip_tol));
            let mut t = Table::new(&["j", "lambda", "u0"]);
            for (j, (l, c)) in problem.setup.lambdas().iter().zip(u0.coeffs()).enumerate() {
                t.push(vec![(j + 1).to_string(), fmt_f64(*l), fmt_f64(*c)]);
            }
            self.files.push(t.write(&self.out_dir, "initial_state.csv")?);
            extra.push(fw);
        }
        self.write_trajectory(&traj)?;
        self.write_iterations(&traj)?;
        if let Some(fw) = extra.pop() {
            self.files.push(trajectory_table(&fw, &self.norm_orders()).write(&self.out_dir, "forward.csv")?);
        }
        Ok(())
    }

    fn regularity_rows(&mut self, solver: &TvpSolver, traj: &Trajectory, mode: SolveMode) -> Result<()> {
        let problem = solver.problem();
        let r = &problem.regularity;
        let a = problem.alpha();
        let (rate, gamma, eta) = match mode {
            SolveMode::Contraction => (a * r.vartheta, r.nu - r.eta, eta_cri(a, r.eta, r.vartheta)),
            _ => (a * (1.0 - r.theta), r.nu - r.nu_prime, eta_glo(a, r.theta, r.nu_prime)),
        };
        let lambda_max = problem.setup.lambdas().last().copied().unwrap_or(1.0);
        let bw = blowup_window(&traj.grid, lambda_max, a);
        if mode == SolveMode::Contraction {
            self.critical_derivative_slope(solver, traj, bw.clone())?;
        }
        match fit_blowup_exponent(traj, r.nu, bw) {
            Ok(fit) => {
                let lo = -1.15 * rate;
                self.report.push(ReportRow::new("regularity.blowup_slope", fit.slope, lo, fit.slope >= lo && fit.slope <= 0.0));
            }
            Err(e @ Error::DegenerateWindow(_)) => {
                warn!("blow-up fit skipped: {e}");
                self.report.push(ReportRow::advisory("regularity.blowup_slope", f64::NAN, -1.15 * rate, false));
            }
            Err(e) => return Err(e.into()),
        }
        let Some(eta) = eta else {
            warn!("Hölder exponent undefined for these indices");
            return Ok(());
        };
        match fit_holder_modulus(traj, gamma, eta, interior_window(&traj.grid), IncrementPairs::Anchored) {
            Ok(h) => {
                let lo = 0.85 * eta;
                self.report.push(ReportRow::new("regularity.holder_slope", h.fit.slope, lo, h.fit.slope >= lo));
                self.report.push(ReportRow::advisory("regularity.holder_constant", h.constant, f64::NAN, true));
            }
            Err(e @ Error::DegenerateWindow(_)) => warn!("Hölder fit skipped: {e}"),
            Err(e) => return Err(e.into()),
        }
        Ok(())
    }

    /// Observed blow-up slope of ‖∂_t u(t)‖ in ℍ^{σ+ϑ'-1}. The exponent the
    /// theory predicts for it is below -1, so the row only reports the fit.
    fn critical_derivative_slope(&mut self, solver: &TvpSolver, traj: &Trajectory, window: Range<usize>) -> Result<()> {
        let r = &solver.problem().regularity;
        let gamma = r.sigma + r.vartheta_prime - 1.0;
        let d1 = solver.reconstruct_derivatives(traj, DerivativeOrder::First)?;
        let nodes = traj.grid.nodes();
        let norms: Vec<f64> = d1.iter().map(|d| d.as_ref().map_or(f64::NAN, |d| d.norm_hs(gamma))).collect();
        match fit_log_log(&nodes[window.clone()], &norms[window.clone()], window) {
            Ok(fit) => self.report.push(ReportRow::advisory("regularity.derivative_slope", fit.slope, f64::NAN, true)),
            Err(e) => warn!("derivative fit skipped: {e}"),
        }
        Ok(())
    }

    fn norm_orders(&self) -> Vec<f64> {
        if self.cfg.analysis.norms.is_empty() {
            vec![self.cfg.problem.regularity.nu]
        } else {
            self.cfg.analysis.norms.clone()
        }
    }

    fn write_trajectory(&mut self, traj: &Trajectory) -> Result<()> {
        let t = trajectory_table(traj, &self.norm_orders());
        self.files.push(t.write(&self.out_dir, "trajectory.csv")?);
        Ok(())
    }

    fn write_iterations(&mut self, traj: &Trajectory) -> Result<()> {
        let mut t = Table::new(&["k", "weighted_diff", "ratio"]);
        for r in &traj.iterations {
            t.push(vec![r.k.to_string(), fmt_f64(r.weighted_diff), fmt_f64(r.ratio)]);
        }
        self.files.push(t.write(&self.out_dir, "iterations.csv")?);
        Ok(())
    }

    fn write_constants(&mut self, b: &ConstantsBundle, prep: &Prepared) -> Result<()> {
        let mut t = Table::new(&["name", "value"]);
        for (k, v) in b.rows() {
            t.push(vec![k.to_string(), fmt_f64(v)]);
        }
        let opt = |x: Option<f64>| fmt_f64(x.unwrap_or(f64::NAN));
        t.push(vec!["L1".into(), opt(b.inputs.l1)]);
        t.push(vec!["K0".into(), opt(b.inputs.k0)]);
        t.push(vec!["K_fit".into(), opt(prep.source.k_fit)]);
        t.push(vec!["f_norm_critical".into(), opt(b.inputs.f_norm_critical)]);
        if let Some(bd) = &prep.bounds {
            t.push(vec!["scan_max".into(), fmt_f64(bd.scan_range.1)]);
            t.push(vec!["first_zero".into(), opt(bd.first_zero)]);
        }
        self.files.push(t.write(&self.out_dir, "constants.csv")?);
        Ok(())
    }
}

fn trajectory_table(traj: &Trajectory, orders: &[f64]) -> Table {
    let mut header = vec!["n".to_string(), "t".to_string()];
    header.extend(orders.iter().map(|g| format!("norm_{}", fmt_f64(*g))));
    let mut t = Table::new(&header);
    for (n, s) in traj.states.iter().enumerate() {
        let mut row = vec![n.to_string(), fmt_f64(traj.grid.node(n))];
        row.extend(orders.iter().map(|g| fmt_f64(s.norm_hs(*g))));
        t.push(row);
    }
    t
}

/// One predicate printed by `validate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub group: String,
    pub id: String,
    pub message: String,
    pub pass: bool,
    /// Failing advisory predicates warn but do not fail validation.
    pub advisory: bool,
}

/// PASS lines for the `checked` ids without violations, then one FAIL line
/// per violation.
fn predicates_from(group: &str, checked: &[&str], r: &CheckReport) -> Vec<Predicate> {
    let mut out: Vec<Predicate> = checked
        .iter()
        .filter(|id| !r.violations.iter().any(|v| v.id == **id || v.id.starts_with(&format!("{id}."))))
        .map(|id| Predicate { group: group.into(), id: (*id).into(), message: String::new(), pass: true, advisory: false })
        .collect();
    out.extend(r.violations.iter().map(|v| Predicate {
        group: group.into(),
        id: v.id.clone(),
        message: v.message.clone(),
        pass: false,
        advisory: false,
    }));
    out
}

/// Every hypothesis relevant to the configured mode, without solving.
pub fn validate(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Predicate>> {
    let mut out = Vec::new();
    if let Some((kind, params)) = cfg.application() {
        let rep = fracterm_core::nonlinearity::validate_application_params(kind, &params);
        let group = match rep.case {
            Some(c) => format!("application.{kind:?}.case_{c}"),
            None => format!("application.{kind:?}"),
        };
        let passed: &[&str] = if rep.report.pass() { &["conditions"] } else { &[] };
        out.extend(predicates_from(&group, passed, &rep.report));
    }
    let prep = match prepare(cfg, seed, true) {
        Ok(p) => p,
        Err(CliError::Core(e @ Error::TerminalTimeInadmissible { .. })) => {
            out.push(Predicate {
                group: "setup".into(),
                id: "terminal-denominators".into(),
                message: e.to_string(),
                pass: false,
                advisory: false,
            });
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.push(Predicate {
        group: "setup".into(),
        id: "terminal-denominators".into(),
        message: String::new(),
        pass: true,
        advisory: false,
    });
    let p = &prep.problem;
    match cfg.mode() {
        SolveMode::Picard => out.extend(predicates_from("lipschitz", &["theta-range", "nu-nonneg"], &p.check_picard())),
        SolveMode::Path => out.extend(predicates_from("path", &["theta-range", "sigma-range", "q-range"], &p.check_path())),
        SolveMode::Contraction => {
            let ids = ["alpha-range", "sigma-range", "nu-range", "s-positive", "vartheta-range", "zeta-bound"];
            out.extend(predicates_from("critical", &ids, &p.check_critical()));
            let side = p.nonlinearity.check_critical(p.alpha(), p.regularity.vartheta);
            out.extend(predicates_from("source", &["zeta-bound"], &side));
        }
        SolveMode::Forward => {}
    }
    if let Some(b) = &prep.bundle {
        for a in &b.admissibility {
            out.push(Predicate {
                group: "admissibility".into(),
                id: a.name.clone(),
                message: format!("{} < {}", fmt_f64(a.lhs), fmt_f64(a.rhs)),
                pass: a.pass,
                advisory: true,
            });
        }
    }
    Ok(out)
}
