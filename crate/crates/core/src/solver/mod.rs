//! Fixed-point solvers for the terminal value problem, the forward initial
//! value problem, and reconstruction of u(0), ∂_t u and ∂_t^α u.
//!
//! All iterations act on the grid-node values of the discrete mild-solution
//! map
//!
//! ```text
//! Q(w)(t_n) = B(t_n)[f - Σ_{m<N} W_{N,m} G_m] + Σ_{m<n} W_{n,m} G_m,   G_m = G(t_m, w(t_m))
//! ```
//!
//! where W are the exact-moment product-rectangle weights of the P kernel.
//! Node 0 carries u(0); node N reproduces f exactly.

pub mod constants;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

pub use constants::{compute_constants, eta_cri, eta_glo, Admissibility, ConstantInputs, ConstantsBundle};

use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearitySpec;
use crate::operators::TerminalSetup;
use crate::quadrature::{KernelTable, TimeGrid};
use crate::spectral_basis::{lt, norm_hs_coeffs, CheckReport, SpectralField};

/// Regularity indices of the theorems. Only the entries relevant to the
/// chosen solver mode are read.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Regularity {
    pub nu: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub nu_prime: f64,
    pub nu1: f64,
    pub nu_alpha: f64,
    pub sigma: f64,
    pub q: f64,
    /// ϑ
    pub vartheta: f64,
    /// ϑ'
    pub vartheta_prime: f64,
    pub eta: f64,
    pub zeta: f64,
}

impl Default for Regularity {
    fn default() -> Self {
        Regularity {
            nu: 0.0,
            theta: 0.8,
            theta_prime: 0.8,
            nu_prime: 0.5,
            nu1: 0.0,
            nu_alpha: 0.0,
            sigma: 0.0,
            q: 1.0,
            vartheta: 0.5,
            vartheta_prime: 0.5,
            eta: 1.0,
            zeta: 0.0,
        }
    }
}

impl Regularity {
    /// μ = ν - σ.
    pub fn mu(&self) -> f64 {
        self.nu - self.sigma
    }
}

/// A complete terminal value problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub setup: TerminalSetup,
    pub f: SpectralField,
    pub nonlinearity: NonlinearitySpec,
    pub regularity: Regularity,
}

impl ProblemSpec {
    pub fn new(setup: TerminalSetup, f: SpectralField, nonlinearity: NonlinearitySpec, regularity: Regularity) -> Result<Self> {
        if f.len() != setup.len() {
            return Err(Error::Input(format!("terminal data has {} modes, basis has {}", f.len(), setup.len())));
        }
        Ok(ProblemSpec { setup, f, nonlinearity, regularity })
    }

    pub fn alpha(&self) -> f64 {
        self.setup.alpha()
    }

    /// Hypotheses of the globally Lipschitz theorem.
    pub fn check_picard(&self) -> CheckReport {
        let a = self.alpha();
        let r = &self.regularity;
        let mut c = CheckReport::default();
        let lo = (a - 1.0) / a;
        c.require(lt(lo, r.theta) && r.theta < 1.0, "theta-range", || {
            format!("(α-1)/α < θ < 1, i.e. {lo} < θ < 1 (θ = {})", r.theta)
        });
        c.require(r.nu >= 0.0, "nu-nonneg", || format!("ν ≥ 0 (ν = {})", r.nu));
        c
    }

    /// Hypotheses of the path-space Lipschitz theorem.
    pub fn check_path(&self) -> CheckReport {
        let a = self.alpha();
        let r = &self.regularity;
        let mut c = CheckReport::default();
        let lo = (a * r.q - 1.0) / (a * r.q);
        c.require(lt(lo, r.theta) && r.theta < 1.0, "theta-range", || format!("(αq-1)/(αq) < θ < 1 ({lo} < θ = {})", r.theta));
        c.require(0.0 <= r.nu && r.nu <= r.sigma && r.sigma <= r.nu + 1.0, "sigma-range", || {
            format!("0 ≤ ν ≤ σ ≤ ν+1 (ν = {}, σ = {})", r.nu, r.sigma)
        });
        let qmax = 1.0 / (a * (1.0 - r.theta));
        c.require(1.0 <= r.q && r.q < qmax, "q-range", || format!("1 ≤ q < 1/(α(1-θ)) = {qmax} (q = {})", r.q));
        c
    }

    /// Hypotheses of the critical theorem.
    pub fn check_critical(&self) -> CheckReport {
        let a = self.alpha();
        let r = &self.regularity;
        let s = self.nonlinearity.meta.s;
        let mut c = CheckReport::default();
        c.require(a > 1.0 && a < 2.0, "alpha-range", || format!("1 < α < 2 (α = {a})"));
        c.require(-1.0 < r.sigma && r.sigma < 0.0, "sigma-range", || format!("σ ∈ (-1, 0) (σ = {})", r.sigma));
        c.require(0.0 < r.nu && r.nu < 1.0 + r.sigma, "nu-range", || format!("0 < ν < 1 + σ (ν = {})", r.nu));
        c.require(s > 0.0, "s-positive", || format!("s > 0 (s = {s})"));
        c.require(r.mu() < r.vartheta && r.vartheta < 1.0, "vartheta-range", || {
            format!("ϑ ∈ (ν-σ, 1) = ({}, 1) (ϑ = {})", r.mu(), r.vartheta)
        });
        let bound = (1.0 / a - (1.0 + s) * r.vartheta).min(r.vartheta * (1.0 - s) - r.nu + r.sigma);
        c.require(lt(r.zeta, bound), "zeta-bound", || format!("ζ < {bound} (ζ = {})", r.zeta));
        c
    }
}

/// Which iteration to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Globally Lipschitz source; stopping in sup t^{α(1-θ)}‖·‖_{ℍ^ν}.
    Picard,
    /// Path-space Lipschitz source; stopping in sup ‖·‖_{ℍ^ν} plus the
    /// L^q(ℍ^σ) norm.
    Path,
    /// Critical source; stopping in sup t^{αϑ}‖·‖_{ℍ^ν}.
    Contraction,
    /// Forward initial value problem.
    Forward,
}

impl SolveMode {
    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Picard => "picard",
            SolveMode::Path => "path",
            SolveMode::Contraction => "contraction",
            SolveMode::Forward => "forward",
        }
    }
}

/// Diagnostics of one fixed-point step.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// Weighted norm of w^{k+1} - w^k.
    pub weighted_diff: f64,
    /// weighted_diff divided by the previous one (NaN for k = 1).
    pub ratio: f64,
    /// max_n t_n^w ‖Λ(w^{k+1} - w^k)(t_n)‖_{ℍ^0}, the equation residual of w^k.
    pub residual_diff: f64,
    /// Weighted norm of the new iterate.
    pub weighted_norm: f64,
}

/// Node values of a solution with its iteration history.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<SpectralField>,
    pub iterations: Vec<IterationRecord>,
    pub mode: SolveMode,
    /// Exponent w of the time weight t^w used by the stopping rule.
    pub weight: f64,
    /// Spatial order ν of the stopping norm.
    pub norm_order: f64,
    pub converged: bool,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn initial_state(&self) -> &SpectralField {
        &self.states[0]
    }

    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("non-empty trajectory")
    }

    /// ‖u(t_n)‖_{ℍ^γ} at every node.
    pub fn norms(&self, gamma: f64) -> Vec<f64> {
        self.states.iter().map(|s| s.norm_hs(gamma)).collect()
    }

    /// sup_n t_n^w ‖u(t_n)‖_{ℍ^γ} (node 0 is skipped when w > 0).
    pub fn weighted_sup(&self, gamma: f64, w: f64) -> f64 {
        weighted_max(self.grid.nodes(), w, |n| self.states[n].norm_hs(gamma))
    }

    /// Observed contraction factor: the largest ratio from iteration 3 on
    /// (or over all recorded ratios when fewer exist).
    pub fn contraction_factor(&self) -> Option<f64> {
        let ratios: Vec<f64> = self.iterations.iter().map(|r| r.ratio).filter(|r| r.is_finite()).collect();
        if ratios.is_empty() {
            return None;
        }
        let tail = if ratios.len() > 1 { &ratios[1..] } else { &ratios[..] };
        tail.iter().copied().reduce(f64::max)
    }
}

fn weighted_max<F: Fn(usize) -> f64>(nodes: &[f64], w: f64, f: F) -> f64 {
    let mut best = 0.0f64;
    for (n, &t) in nodes.iter().enumerate() {
        let wt = if w == 0.0 {
            1.0
        } else if t == 0.0 {
            continue;
        } else {
            t.powf(w)
        };
        best = best.max(wt * f(n));
    }
    best
}

/// Order of a reconstructed derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Alpha,
}

/// A terminal value problem bound to a time grid, with the kernel weights
/// built on first use.
#[derive(Debug)]
pub struct TvpSolver {
    problem: ProblemSpec,
    grid: TimeGrid,
    /// B(t_n) multipliers per node, modes innermost.
    b_mult: Vec<Vec<f64>>,
    p_table: OnceLock<KernelTable>,
    d2_table: OnceLock<KernelTable>,
}

impl TvpSolver {
    pub fn new(problem: ProblemSpec, grid: TimeGrid) -> Result<Self> {
        let setup = &problem.setup;
        if (grid.t_final() - setup.t_final()).abs() > 1e-14 * setup.t_final() {
            return Err(Error::Grid(format!("grid ends at {}, problem at T = {}", grid.t_final(), setup.t_final())));
        }
        let b_mult = grid.nodes().iter().map(|&t| (0..setup.len()).map(|j| setup.b_multiplier(j, t)).collect()).collect();
        Ok(TvpSolver { problem, grid, b_mult, p_table: OnceLock::new(), d2_table: OnceLock::new() })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    /// Product-rectangle weights of the P kernel on this grid.
    pub fn p_table(&self) -> &KernelTable {
        self.p_table.get_or_init(|| KernelTable::p_kernel(&self.problem.setup, &self.grid))
    }

    fn d2_table(&self) -> &KernelTable {
        self.d2_table.get_or_init(|| KernelTable::d2_kernel(&self.problem.setup, &self.grid))
    }

    fn modes(&self) -> usize {
        self.problem.setup.len()
    }

    /// G(t_m, w_m) for m = 0..N-1 (the last node never enters a left-node
    /// rule), plus node N for completeness.
    fn density(&self, w: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let basis = self.problem.setup.basis();
        let nl = &self.problem.nonlinearity;
        self.grid.nodes().iter().zip(w).map(|(&t, c)| nl.eval_coeffs(t, basis, c)).collect()
    }

    fn convolutions(&self, table: &KernelTable, g: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let slices: Vec<&[f64]> = g.iter().map(|v| v.as_slice()).collect();
        (0..=self.grid.intervals()).map(|n| table.convolve_row(n, &slices)).collect()
    }

    /// One application of the discrete fixed-point map to node values.
    pub fn apply_map(&self, w: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let f = self.problem.f.coeffs();
        let nn = self.grid.intervals();
        if self.problem.nonlinearity.is_zero() {
            return Ok(self.b_mult.iter().map(|b| b.iter().zip(f).map(|(x, y)| x * y).collect()).collect());
        }
        let g = self.density(w)?;
        let conv = self.convolutions(self.p_table(), &g);
        let full = &conv[nn];
        let corrected: Vec<f64> = f.iter().zip(full).map(|(a, b)| a - b).collect();
        let mut out = Vec::with_capacity(nn + 1);
        for n in 0..=nn {
            let row: Vec<f64> = if n == nn {
                f.to_vec()
            } else {
                (0..self.modes()).map(|j| self.b_mult[n][j] * corrected[j] + conv[n][j]).collect()
            };
            out.push(row);
        }
        Ok(out)
    }

    fn weight_exponent(&self, mode: SolveMode) -> f64 {
        let a = self.problem.alpha();
        let r = &self.problem.regularity;
        match mode {
            SolveMode::Picard => a * (1.0 - r.theta),
            SolveMode::Contraction => a * r.vartheta,
            SolveMode::Path | SolveMode::Forward => 0.0,
        }
    }

    fn diff_norm(&self, mode: SolveMode, w: f64, d: &[Vec<f64>]) -> f64 {
        let lambda = self.problem.setup.lambdas();
        let r = &self.problem.regularity;
        let nodes = self.grid.nodes();
        let sup = weighted_max(nodes, w, |n| norm_hs_coeffs(lambda, &d[n], r.nu));
        if mode != SolveMode::Path {
            return sup;
        }
        // left-rectangle L^q(0,T; ℍ^σ) norm
        let q = r.q.max(1.0);
        let lq: f64 =
            (0..self.grid.intervals()).map(|n| (nodes[n + 1] - nodes[n]) * norm_hs_coeffs(lambda, &d[n], r.sigma).powf(q)).sum();
        sup + lq.powf(1.0 / q)
    }

    fn residual_norm(&self, w: f64, d: &[Vec<f64>]) -> f64 {
        let lambda = self.problem.setup.lambdas();
        let nodes = &self.grid.nodes()[1..];
        weighted_max(nodes, w, |n| d[n + 1].iter().zip(lambda).map(|(x, l)| (l * x) * (l * x)).sum::<f64>().sqrt())
    }

    /// Iterate the fixed-point map from w ≡ f until the weighted difference
    /// of successive iterates and the equation residual both fall below
    /// `tol`. `radius`, when given, is the ball the iterates should stay in
    /// (exits are recorded as warnings).
    pub fn solve(&self, mode: SolveMode, tol: f64, max_iter: usize, radius: Option<f64>) -> Result<Trajectory> {
        if mode == SolveMode::Forward {
            return Err(Error::Input("forward mode is solved by solve_ivp_forward".into()));
        }
        if !(tol > 0.0) || max_iter == 0 {
            return Err(Error::Input(format!("need tol > 0 and max_iter ≥ 1 (tol = {tol}, max_iter = {max_iter})")));
        }
        let w_exp = self.weight_exponent(mode);
        let f = self.problem.f.coeffs().to_vec();
        let nn = self.grid.intervals();
        let mut w: Vec<Vec<f64>> = vec![f; nn + 1];
        let mut records: Vec<IterationRecord> = Vec::new();
        let mut warnings = Vec::new();
        let exact_in_one = self.problem.nonlinearity.ignores_state();
        let nu = self.problem.regularity.nu;
        let lambda = self.problem.setup.lambdas().to_vec();
        for k in 1..=max_iter {
            let next = self.apply_map(&w)?;
            let d: Vec<Vec<f64>> = next.iter().zip(&w).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
            let diff = self.diff_norm(mode, w_exp, &d);
            let res = self.residual_norm(w_exp, &d);
            let norm = weighted_max(self.grid.nodes(), w_exp, |n| norm_hs_coeffs(&lambda, &next[n], nu));
            let ratio =
                records.last().map_or(f64::NAN, |r| if r.weighted_diff > 0.0 { diff / r.weighted_diff } else { f64::NAN });
            records.push(IterationRecord { k, weighted_diff: diff, ratio, residual_diff: res, weighted_norm: norm });
            if let Some(rad) = radius {
                if norm > rad {
                    warnings.push(format!("RadiusExceeded: iterate {k} has weighted norm {norm:e} > R = {rad:e}"));
                }
            }
            w = next;
            if exact_in_one || (diff <= tol && res <= tol) {
                return Ok(self.trajectory(w, records, mode, w_exp, true, warnings));
            }
            if !diff.is_finite() {
                break;
            }
        }
        let last_ratio = records.last().map_or(f64::NAN, |r| r.ratio);
        let iterations = records.len();
        let partial = self.trajectory(w, records, mode, w_exp, false, warnings);
        Err(Error::NonConvergence { iterations, last_ratio, partial: Box::new(partial) })
    }

    fn trajectory(
        &self,
        w: Vec<Vec<f64>>,
        iterations: Vec<IterationRecord>,
        mode: SolveMode,
        weight: f64,
        converged: bool,
        warnings: Vec<String>,
    ) -> Trajectory {
        let basis = self.problem.setup.basis().clone();
        Trajectory {
            grid: self.grid.clone(),
            states: w.into_iter().map(|c| SpectralField::from_raw(basis.clone(), c)).collect(),
            iterations,
            mode,
            weight,
            norm_order: self.problem.regularity.nu,
            converged,
            warnings,
        }
    }

    /// u(0) = [f - ∫_0^T P(T-r) G(r, u(r)) dr] / E_{α,1}(-λ T^α), evaluated
    /// with the trajectory's own density.
    pub fn reconstruct_initial(&self, traj: &Trajectory) -> Result<SpectralField> {
        let w: Vec<Vec<f64>> = traj.states.iter().map(|s| s.coeffs().to_vec()).collect();
        let q = self.apply_map(&w)?;
        Ok(SpectralField::from_raw(self.problem.setup.basis().clone(), q[0].clone()))
    }

    /// ∂_t u or ∂_t^α u at every node t_n > 0 (entry 0 is `None`):
    ///
    /// * first: D1 (f - ∫P G) + ∫_0^t D2(t-r) G(r) dr
    /// * alpha: D3 (f - ∫P G) + ∫_0^t D4(t-r) G(r) dr + G(t, u(t))
    ///
    /// Kernel integrals use exact moments on the left-node rule.
    pub fn reconstruct_derivatives(&self, traj: &Trajectory, order: DerivativeOrder) -> Result<Vec<Option<SpectralField>>> {
        let setup = &self.problem.setup;
        let basis = setup.basis().clone();
        let lambda = setup.lambdas();
        let f = self.problem.f.coeffs();
        let nn = self.grid.intervals();
        let w: Vec<Vec<f64>> = traj.states.iter().map(|s| s.coeffs().to_vec()).collect();
        let zero = self.problem.nonlinearity.is_zero();
        let g = if zero { vec![vec![0.0; self.modes()]; nn + 1] } else { self.density(&w)? };
        let p_conv = if zero { vec![vec![0.0; self.modes()]; nn + 1] } else { self.convolutions(self.p_table(), &g) };
        let corrected: Vec<f64> = f.iter().zip(&p_conv[nn]).map(|(a, b)| a - b).collect();
        let mut out = vec![None];
        match order {
            DerivativeOrder::Alpha => {
                for n in 1..=nn {
                    let c: Vec<f64> = (0..self.modes())
                        .map(|j| -lambda[j] * (self.b_mult[n][j] * corrected[j] + p_conv[n][j]) + g[n][j])
                        .collect();
                    out.push(Some(SpectralField::from_raw(basis.clone(), c)));
                }
            }
            DerivativeOrder::First => {
                let d2 = if zero { vec![vec![0.0; self.modes()]; nn + 1] } else { self.convolutions(self.d2_table(), &g) };
                for n in 1..=nn {
                    let t = self.grid.node(n);
                    let c: Vec<f64> = (0..self.modes())
                        .map(|j| setup.d_multiplier(crate::operators::DerivativeOp::D1, j, t) * corrected[j] + d2[n][j])
                        .collect();
                    out.push(Some(SpectralField::from_raw(basis.clone(), c)));
                }
            }
        }
        Ok(out)
    }

    /// ‖∂_t^α u + Λu - G(t, u)‖_{ℍ^0} at each node (NaN at t = 0).
    pub fn equation_residual(&self, traj: &Trajectory, alpha_derivs: &[Option<SpectralField>]) -> Result<Vec<f64>> {
        let lambda = self.problem.setup.lambdas();
        let basis = self.problem.setup.basis();
        let nl = &self.problem.nonlinearity;
        let mut out = Vec::with_capacity(traj.states.len());
        for (n, (u, d)) in traj.states.iter().zip(alpha_derivs).enumerate() {
            match d {
                None => out.push(f64::NAN),
                Some(d) => {
                    let g = nl.eval_coeffs(self.grid.node(n), basis, u.coeffs())?;
                    let r: f64 = (0..u.len())
                        .map(|j| {
                            let x = d.coeffs()[j] + lambda[j] * u.coeffs()[j] - g[j];
                            x * x
                        })
                        .sum();
                    out.push(r.sqrt());
                }
            }
        }
        Ok(out)
    }

    /// max over interior nodes of t_n^w · residual_n.
    pub fn weighted_residual(&self, traj: &Trajectory) -> Result<f64> {
        let d = self.reconstruct_derivatives(traj, DerivativeOrder::Alpha)?;
        let r = self.equation_residual(traj, &d)?;
        let nodes = self.grid.nodes();
        let nn = self.grid.intervals();
        Ok((1..nn).map(|n| if traj.weight == 0.0 { r[n] } else { nodes[n].powf(traj.weight) * r[n] }).fold(0.0, f64::max))
    }
}

/// Picard iteration in the θ-weighted norm.
pub fn solve_tvp_picard(spec: &ProblemSpec, grid: &TimeGrid, tol: f64, max_iter: usize) -> Result<Trajectory> {
    TvpSolver::new(spec.clone(), grid.clone())?.solve(SolveMode::Picard, tol, max_iter, None)
}

/// Contraction iteration in the ϑ-weighted norm, monitoring the ball of
/// radius `radius`.
pub fn solve_tvp_contraction(
    spec: &ProblemSpec,
    grid: &TimeGrid,
    tol: f64,
    max_iter: usize,
    radius: Option<f64>,
) -> Result<Trajectory> {
    TvpSolver::new(spec.clone(), grid.clone())?.solve(SolveMode::Contraction, tol, max_iter, radius)
}

/// March u(t_n) = B0(t_n) u0 + Σ_{m<n} W_{n,m} G(t_m, u(t_m)) node by node.
/// The left-node rule makes each step explicit, so no iteration is needed;
/// `tol` and `max_iter` are accepted for interface symmetry and unused.
/// Weights are generated one row at a time and not stored.
pub fn solve_ivp_forward(
    setup: &TerminalSetup,
    grid: &TimeGrid,
    u0: &SpectralField,
    nonlinearity: &NonlinearitySpec,
    _tol: f64,
    _max_iter: usize,
) -> Result<Trajectory> {
    if u0.len() != setup.len() {
        return Err(Error::Input(format!("initial data has {} modes, basis has {}", u0.len(), setup.len())));
    }
    let basis: Arc<_> = setup.basis().clone();
    let lambda = setup.lambdas();
    let modes = setup.len();
    let nodes = grid.nodes();
    let nn = grid.intervals();
    let mut states: Vec<Vec<f64>> = Vec::with_capacity(nn + 1);
    let mut g: Vec<Vec<f64>> = Vec::with_capacity(nn + 1);
    let mut row_f = vec![0.0; (nn + 1) * modes];
    let zero = nonlinearity.is_zero();
    for n in 0..=nn {
        let t = nodes[n];
        let mut u: Vec<f64> = (0..modes).map(|j| setup.b0_multiplier(lambda[j], t) * u0.coeffs()[j]).collect();
        if !zero && n > 0 {
            for m in 0..n {
                for j in 0..modes {
                    row_f[m * modes + j] = setup.p_antiderivative(lambda[j], t - nodes[m]);
                }
            }
            for j in 0..modes {
                row_f[n * modes + j] = 0.0;
            }
            for (m, gm) in g.iter().enumerate() {
                for j in 0..modes {
                    u[j] += (row_f[m * modes + j] - row_f[(m + 1) * modes + j]) * gm[j];
                }
            }
        }
        if !zero {
            g.push(nonlinearity.eval_coeffs(t, &basis, &u)?);
        }
        states.push(u);
    }
    Ok(Trajectory {
        grid: grid.clone(),
        states: states.into_iter().map(|c| SpectralField::from_raw(basis.clone(), c)).collect(),
        iterations: Vec::new(),
        mode: SolveMode::Forward,
        weight: 0.0,
        norm_order: 0.0,
        converged: true,
        warnings: Vec::new(),
    })
}

/// Free-function form of [`TvpSolver::reconstruct_initial`].
pub fn reconstruct_initial(spec: &ProblemSpec, traj: &Trajectory) -> Result<SpectralField> {
    TvpSolver::new(spec.clone(), traj.grid.clone())?.reconstruct_initial(traj)
}
