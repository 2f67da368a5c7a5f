//! Two-parameter Mittag-Leffler function E_{α,β}(z) on the non-positive real
//! axis, plus the bound and differentiation checks built on it.
//!
//! Three evaluation branches are combined, each returning its own error
//! bound:
//!
//! * Taylor series `Σ_{k≥0} z^k / Γ(αk+β)` with compensated summation, for
//!   small `t = -z`;
//! * the asymptotic expansion `Σ_{k≥1} (-1)^{k+1} t^{-k} / Γ(β-αk)` truncated
//!   at its smallest term, plus the two pole residues when `α > 1`;
//! * for the band in between, the real-line Laplace inversion integral
//!   (Hankel contour collapsed onto the negative axis) evaluated by tanh-sinh,
//!   plus the same residues.
//!
//! A value is certified when its bound is below `1e-12·max(|value|, A)`,
//! where `A` is the amplitude of the oscillatory pole contribution at that
//! argument (zero for α ≤ 1), or below the absolute floor `1e-15`. The
//! amplitude term only matters near zeros of E.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gamma::{cos_pi, ln_gamma, rgamma, sin_pi};
use crate::integrate::tanh_sinh;

/// Relative accuracy target for certified values.
pub const REL_TOL: f64 = 1e-12;
/// Absolute floor used near zeros of E.
pub const ABS_FLOOR: f64 = 1e-15;

const EPS: f64 = f64::EPSILON;
const SERIES_TERMS: usize = 400;
const ASYM_TERMS: usize = 400;
const SERIES_RHO_MAX: f64 = 12.0;
const ASYM_RHO_MIN: f64 = 5.0;

/// Parameters (α, β) of E_{α,β}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        Ok(MLParams { alpha, beta })
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Origin,
    Series,
    Asymptotic,
    Integral,
    ClosedForm,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Origin => "origin",
            Branch::Series => "series",
            Branch::Asymptotic => "asymptotic",
            Branch::Integral => "integral",
            Branch::ClosedForm => "closed_form",
        }
    }
}

/// A value together with an error bound and the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlValue {
    pub value: f64,
    pub error_bound: f64,
    pub branch: Branch,
    /// Oscillation amplitude used as the scale near zeros.
    pub envelope: f64,
}

impl MlValue {
    pub fn is_certified(&self) -> bool {
        self.meets(REL_TOL, ABS_FLOOR)
    }

    pub fn meets(&self, rel: f64, abs: f64) -> bool {
        self.value.is_finite() && self.error_bound <= (rel * self.value.abs().max(self.envelope)).max(abs)
    }
}

/// Precomputed coefficient tables for one (α, β) pair. Construct once and
/// reuse when evaluating at many arguments.
#[derive(Debug, Clone)]
pub struct MlEvaluator {
    alpha: f64,
    beta: f64,
    series: Vec<f64>,
    asym: Vec<f64>,
    asym_ln_env: Vec<f64>,
    /// E_{α,β-α}, used through the recurrence when β ≥ α + 1.
    lowered: Option<Box<MlEvaluator>>,
    rg_beta_minus_alpha: f64,
    band: Option<BandTable>,
}

impl MlEvaluator {
    pub fn new(params: MLParams) -> Self {
        let MLParams { alpha, beta } = params;
        let mut series = Vec::with_capacity(SERIES_TERMS);
        for k in 0..SERIES_TERMS {
            let c = rgamma(alpha * k as f64 + beta);
            if c == 0.0 && k > 0 {
                break;
            }
            series.push(c);
        }
        let asym = (1..=ASYM_TERMS).map(|k| rgamma(beta - alpha * k as f64)).collect();
        let asym_ln_env = (1..=ASYM_TERMS)
            .map(|k| {
                let x = beta - alpha * k as f64;
                if x > 0.0 {
                    -ln_gamma(x)
                } else {
                    ln_gamma(1.0 - x) - PI.ln()
                }
            })
            .collect();
        let lowered = if alpha != 1.0 && beta >= alpha + 1.0 {
            Some(Box::new(MlEvaluator::new(MLParams { alpha, beta: beta - alpha })))
        } else {
            None
        };
        MlEvaluator { alpha, beta, series, asym, asym_ln_env, lowered, rg_beta_minus_alpha: rgamma(beta - alpha), band: None }
    }

    /// Like [`MlEvaluator::new`], additionally tabulating the integral branch
    /// on the band where neither the series nor the asymptotic expansion can
    /// certify. Construction costs a few hundred integral evaluations; each
    /// later evaluation in the band costs one Chebyshev sum.
    pub fn tabulated(params: MLParams) -> Self {
        let mut ev = Self::new(params);
        if params.alpha != 1.0 {
            ev.band = BandTable::build(&ev);
        }
        ev
    }

    pub fn params(&self) -> MLParams {
        MLParams { alpha: self.alpha, beta: self.beta }
    }

    /// Evaluate with certification; uncertified results become
    /// [`Error::Accuracy`].
    pub fn eval_certified(&self, z: f64) -> Result<f64> {
        let v = self.eval(z)?;
        if v.is_certified() {
            Ok(v.value)
        } else {
            Err(Error::Accuracy { estimate: v.value, error_bound: v.error_bound })
        }
    }

    /// Best available estimate and its error bound.
    pub fn eval(&self, z: f64) -> Result<MlValue> {
        if !z.is_finite() || z > 0.0 {
            return Err(Error::Domain(format!("argument must be finite and ≤ 0, got {z}")));
        }
        Ok(self.eval_unchecked(-z))
    }

    /// Evaluate E_{α,β}(-t) for t ≥ 0 without argument checks.
    pub fn eval_neg(&self, t: f64) -> MlValue {
        self.eval_unchecked(t)
    }

    fn eval_unchecked(&self, t: f64) -> MlValue {
        if t == 0.0 {
            let v = rgamma(self.beta);
            return MlValue { value: v, error_bound: EPS * v.abs(), branch: Branch::Origin, envelope: 0.0 };
        }
        let alpha = self.alpha;
        if alpha == 1.0 && self.beta.fract() == 0.0 && t >= 1.0 {
            return self.closed_form_alpha_one(t);
        }
        let rho = root(t, alpha);
        let envelope = self.envelope(t);
        let mut best: Option<MlValue> = None;
        let mut consider = |mut v: MlValue| -> Option<MlValue> {
            v.envelope = envelope;
            if v.is_certified() {
                return Some(v);
            }
            if best.is_none_or(|b| v.error_bound < b.error_bound) {
                best = Some(v);
            }
            None
        };
        if rho <= SERIES_RHO_MAX {
            if let Some(v) = consider(self.series(t)) {
                return v;
            }
        }
        if rho >= ASYM_RHO_MIN {
            if let Some(v) = consider(self.asymptotic(t)) {
                return v;
            }
        }
        if let Some(band) = &self.band {
            if let Some(v) = band.eval(self, t, rho) {
                if let Some(v) = consider(v) {
                    return v;
                }
            }
        }
        if let Some(v) = self.integral(t) {
            if let Some(v) = consider(v) {
                return v;
            }
        }
        if rho > SERIES_RHO_MAX {
            // last resort for parameters with no integral representation
            if let Some(v) = consider(self.series(t)) {
                return v;
            }
        }
        best.expect("at least one branch evaluated")
    }

    /// Taylor series at z = -t with Neumaier summation.
    pub fn series(&self, t: f64) -> MlValue {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        let mut abs_sum = 0.0f64;
        let mut power = 1.0f64;
        let mut tail = f64::INFINITY;
        let mut prev_abs = f64::INFINITY;
        for (k, &c) in self.series.iter().enumerate() {
            if k > 0 {
                power *= -t;
            }
            if !power.is_finite() {
                break;
            }
            let term = c * power;
            let s = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - s) + term;
            } else {
                comp += (term - s) + sum;
            }
            sum = s;
            abs_sum += term.abs();
            let at = term.abs();
            if k > 2 && at <= prev_abs && at <= 1e-3 * EPS * (sum + comp).abs() {
                tail = 2.0 * at;
                break;
            }
            if k > 2 && at == 0.0 {
                tail = 0.0;
                break;
            }
            prev_abs = at;
        }
        let value = sum + comp;
        let error = tail + 4.0 * EPS * abs_sum;
        MlValue { value, error_bound: error, branch: Branch::Series, envelope: 0.0 }
    }

    /// Asymptotic expansion at z = -t, truncated before its smallest term,
    /// plus pole residues for α > 1.
    ///
    /// Truncation is driven by the envelope |Γ(1-β+αk)|/π · t^{-k} of the
    /// k-th term rather than the term itself, so that coefficients which are
    /// small only because β-αk sits near a pole of Γ do not stop the sum early.
    pub fn asymptotic(&self, t: f64) -> MlValue {
        let ln_t = t.ln();
        let mut sum = 0.0f64;
        let mut abs_sum = 0.0f64;
        let mut last_env = f64::INFINITY;
        let mut trunc = 0.0f64;
        for (i, (&a, &ln_env)) in self.asym.iter().zip(&self.asym_ln_env).enumerate() {
            let k = (i + 1) as f64;
            if a == 0.0 {
                // exact pole: the term vanishes identically
                continue;
            }
            let env = (ln_env - k * ln_t).exp();
            if env >= last_env {
                trunc = env.min(last_env);
                break;
            }
            let sign = if (i + 1) % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * a * (-k * ln_t).exp();
            sum += term;
            abs_sum += term.abs();
            last_env = env;
            trunc = env;
            if env <= 1e-3 * EPS * sum.abs() {
                break;
            }
        }
        let (res, res_err) = self.residues(t);
        let mut error = trunc + 4.0 * EPS * (abs_sum + res.abs()) + res_err;
        if self.alpha == 1.0 && self.beta.fract() != 0.0 {
            // branch-point contribution not represented by the expansion
            error += t.powf(1.0 - self.beta) * (-t).exp();
        }
        MlValue { value: sum + res, error_bound: error, branch: Branch::Asymptotic, envelope: 0.0 }
    }

    /// Amplitude (2/α)|s^{1-β} e^s| of the pole contribution; zero for α ≤ 1.
    pub fn envelope(&self, t: f64) -> f64 {
        if self.alpha <= 1.0 || t == 0.0 {
            return 0.0;
        }
        let rho = root(t, self.alpha);
        let cos_a = if self.alpha == 2.0 { 0.0 } else { (PI / self.alpha).cos() };
        (2.0 / self.alpha) * rho.powf(1.0 - self.beta) * (rho * cos_a).exp()
    }

    /// Contribution (2/α) Re[s^{1-β} e^s] of the poles s = t^{1/α} e^{±iπ/α}.
    fn residues(&self, t: f64) -> (f64, f64) {
        let alpha = self.alpha;
        if alpha <= 1.0 {
            return (0.0, 0.0);
        }
        let rho = root(t, alpha);
        let (sin_a, cos_a) = if alpha == 2.0 { (1.0, 0.0) } else { ((PI / alpha).sin(), (PI / alpha).cos()) };
        let amp = (2.0 / alpha) * rho.powf(1.0 - self.beta) * (rho * cos_a).exp();
        if amp == 0.0 {
            return (0.0, 0.0);
        }
        let phase = rho * sin_a + PI * (1.0 - self.beta) / alpha;
        let value = amp * phase.cos();
        let err = amp * EPS * (4.0 + phase.abs());
        (value, err)
    }

    /// Real-line integral representation, valid for 0 < α ≤ 2, α ≠ 1 and
    /// β < α + 1 (larger β is reduced by the recurrence).
    pub fn integral(&self, t: f64) -> Option<MlValue> {
        let alpha = self.alpha;
        let beta = self.beta;
        if alpha == 1.0 {
            return None;
        }
        if let Some(low) = &self.lowered {
            // E_{α,β}(-t) = (1/Γ(β-α) - E_{α,β-α}(-t)) / t
            let inner = low.integral(t)?;
            let value = (self.rg_beta_minus_alpha - inner.value) / t;
            let error = inner.error_bound / t + 2.0 * EPS * (self.rg_beta_minus_alpha.abs() + inner.value.abs()) / t;
            return Some(MlValue { value, error_bound: error, branch: Branch::Integral, envelope: 0.0 });
        }
        let sb = sin_pi(beta);
        let sab = sin_pi(alpha - beta);
        let ca = cos_pi(alpha);
        let sa = sin_pi(alpha);
        let kernel = |r: f64| -> f64 {
            let ra = r.powf(alpha);
            let num = ra * sb - t * sab;
            if num == 0.0 {
                return 0.0;
            }
            let d1 = ra + t * ca;
            let den = d1 * d1 + (t * sa) * (t * sa);
            (-r).exp() * num / den
        };
        let rho = root(t, alpha);
        let mid = rho.max(1e-3);
        // r = s^m with m = 1/(α-β+1) absorbs the factor r^{α-β} near zero
        let m = 1.0 / (alpha - beta + 1.0);
        let part1 = tanh_sinh(|s, _, _| m * kernel(s.powf(m)), 0.0, mid.powf(1.0 / m), 1e-13);
        let expo = alpha - beta;
        let part2 = tanh_sinh(|r, _, _| r.powf(expo) * kernel(r), mid, mid + 50.0, 1e-13);
        let integral = (part1.value + part2.value) / PI;
        let int_err = (part1.error + part2.error) / PI + 4.0 * EPS * integral.abs();
        let (res, res_err) = self.residues(t);
        let value = integral + res;
        let error = int_err + res_err + 2.0 * EPS * res.abs();
        Some(MlValue { value, error_bound: error, branch: Branch::Integral, envelope: 0.0 })
    }

    fn closed_form_alpha_one(&self, t: f64) -> MlValue {
        // E_{1,1}(-t) = e^{-t}; E_{1,m+1}(z) = (E_{1,m}(z) - 1/Γ(m)) / z
        let m = self.beta as usize;
        let mut v = (-t).exp();
        let mut err = EPS * v;
        for j in 1..m {
            let g = rgamma(j as f64);
            v = (g - v) / t;
            err = err / t + 2.0 * EPS * v.abs();
        }
        MlValue { value: v, error_bound: err, branch: Branch::ClosedForm, envelope: 0.0 }
    }
}

/// Piecewise Chebyshev interpolant, in ρ = t^{1/α}, of the non-oscillatory
/// part J(t) = E_{α,β}(-t) - residues(t) of the integral branch.
#[derive(Debug, Clone)]
struct BandTable {
    edges: Vec<f64>,
    coeffs: Vec<Vec<f64>>,
    errors: Vec<f64>,
}

const BAND_LO: f64 = 1.0;
const BAND_HI: f64 = 60.0;
const BAND_NODES: usize = 24;
const BAND_RATIO: f64 = 1.25;
const BAND_MAX_SPLIT: usize = 6;

impl BandTable {
    fn build(ev: &MlEvaluator) -> Option<Self> {
        let alpha = ev.alpha;
        let smooth = |rho: f64| -> Option<(f64, f64, f64)> {
            let t = rho.powf(alpha);
            let v = ev.integral(t)?;
            let (res, _) = ev.residues(t);
            Some((v.value - res, v.error_bound, ev.envelope(t)))
        };
        let mut initial = vec![BAND_LO];
        while *initial.last().unwrap() < BAND_HI {
            let next = (initial.last().unwrap() * BAND_RATIO).min(BAND_HI);
            initial.push(next);
        }
        let mut edges = vec![BAND_LO];
        let mut coeffs = Vec::new();
        let mut errors = Vec::new();
        let mut stack: Vec<(f64, f64, usize)> = initial.windows(2).rev().map(|w| (w[0], w[1], 0)).collect();
        while let Some((a, b, depth)) = stack.pop() {
            let (c, err, target) = Self::panel(&smooth, a, b)?;
            if err > target && depth < BAND_MAX_SPLIT {
                let m = 0.5 * (a + b);
                stack.push((m, b, depth + 1));
                stack.push((a, m, depth + 1));
                continue;
            }
            edges.push(b);
            coeffs.push(c);
            errors.push(err);
        }
        Some(BandTable { edges, coeffs, errors })
    }

    /// Chebyshev coefficients on [a, b], the validated interpolation error and
    /// the error target for the panel.
    fn panel<F: Fn(f64) -> Option<(f64, f64, f64)>>(f: &F, a: f64, b: f64) -> Option<(Vec<f64>, f64, f64)> {
        let n = BAND_NODES;
        let mut vals = Vec::with_capacity(n);
        let mut direct_err = 0.0f64;
        let mut target = f64::INFINITY;
        for i in 0..n {
            let x = (PI * (i as f64 + 0.5) / n as f64).cos();
            let rho = 0.5 * (a + b) + 0.5 * (b - a) * x;
            let (v, e, env) = f(rho)?;
            vals.push(v);
            direct_err = direct_err.max(e);
            target = target.min(0.2 * REL_TOL * v.abs().max(env));
        }
        let mut c = vec![0.0; n];
        for (k, ck) in c.iter_mut().enumerate() {
            let mut s = 0.0;
            for (i, v) in vals.iter().enumerate() {
                s += v * (PI * k as f64 * (i as f64 + 0.5) / n as f64).cos();
            }
            *ck = 2.0 * s / n as f64;
        }
        c[0] *= 0.5;
        // validate between the interpolation nodes
        let mut err = 0.0f64;
        for i in 0..n - 1 {
            let x = (PI * (i as f64 + 1.0) / n as f64).cos();
            let rho = 0.5 * (a + b) + 0.5 * (b - a) * x;
            let (v, e, env) = f(rho)?;
            err = err.max((clenshaw(&c, x) - v).abs() + e);
            target = target.min(0.2 * REL_TOL * v.abs().max(env));
        }
        Some((c, 2.0 * err + direct_err, target.max(0.2 * ABS_FLOOR)))
    }

    fn eval(&self, ev: &MlEvaluator, t: f64, rho: f64) -> Option<MlValue> {
        if !(rho >= self.edges[0] && rho <= *self.edges.last()?) {
            return None;
        }
        let i = match self.edges.partition_point(|&e| e <= rho) {
            0 => 0,
            p => (p - 1).min(self.coeffs.len() - 1),
        };
        let (a, b) = (self.edges[i], self.edges[i + 1]);
        let x = (2.0 * rho - a - b) / (b - a);
        let smooth = clenshaw(&self.coeffs[i], x);
        let (res, res_err) = ev.residues(t);
        let value = smooth + res;
        let error = self.errors[i] + res_err + 4.0 * EPS * (smooth.abs() + res.abs());
        Some(MlValue { value, error_bound: error, branch: Branch::Integral, envelope: 0.0 })
    }
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}

fn root(t: f64, alpha: f64) -> f64 {
    if alpha == 2.0 {
        t.sqrt()
    } else if alpha == 1.0 {
        t
    } else {
        t.powf(1.0 / alpha)
    }
}

/// E_{α,β}(z) for real z ≤ 0, certified to a relative error of 1e-12.
pub fn ml(params: MLParams, z: f64) -> Result<f64> {
    let params = MLParams::new(params.alpha, params.beta)?;
    MlEvaluator::new(params).eval_certified(z)
}

/// Like [`ml`] but returns the estimate with its bound and branch even when
/// it could not be certified.
pub fn ml_value(params: MLParams, z: f64) -> Result<MlValue> {
    let params = MLParams::new(params.alpha, params.beta)?;
    MlEvaluator::new(params).eval(z)
}

/// The per-mode kernel t^{α-1} E_{α,α}(-λ t^α).
pub fn ml_kernel(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let e = ml(MLParams::new(alpha, alpha)?, -lambda * t.powf(alpha))?;
    Ok(t.powf(alpha - 1.0) * e)
}

/// Central-difference residuals of the two differentiation identities
///
/// * d/dt E_{α,1}(-λt^α) = -λ t^{α-1} E_{α,α}(-λt^α)
/// * d/dt [t^{α-1} E_{α,α}(-λt^α)] = t^{α-2} E_{α,α-1}(-λt^α)
///
/// each scaled by `max(1, |closed form|)`.
pub fn ml_derivative_identity_residual(alpha: f64, lambda: f64, t: f64, h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && t > 2.0 * h && t.is_finite()) {
        return Err(Error::Domain(format!("need t > 2h > 0, got t={t}, h={h}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let e1 = MlEvaluator::new(MLParams::new(alpha, 1.0)?);
    let ea = MlEvaluator::new(MLParams::new(alpha, alpha)?);
    let eam1 = MlEvaluator::new(MLParams::new(alpha, alpha - 1.0)?);
    let arg = |s: f64| -lambda * s.powf(alpha);
    let b0 = |s: f64| e1.eval_certified(arg(s));
    let p = |s: f64| -> Result<f64> { Ok(s.powf(alpha - 1.0) * ea.eval_certified(arg(s))?) };
    // fourth-order central differences
    let fd = |f: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
        Ok((-f(t + 2.0 * h)? + 8.0 * f(t + h)? - 8.0 * f(t - h)? + f(t - 2.0 * h)?) / (12.0 * h))
    };
    let d1 = fd(&b0)?;
    let c1 = -lambda * t.powf(alpha - 1.0) * ea.eval_certified(arg(t))?;
    let d2 = fd(&p)?;
    let c2 = t.powf(alpha - 2.0) * eam1.eval_certified(arg(t))?;
    Ok(((d1 - c1).abs() / c1.abs().max(1.0), (d2 - c2).abs() / c2.abs().max(1.0)))
}

/// Empirical constants of the two-sided envelope m/(1+t) ≤ |E_{α,β}(-t)| ≤ M/(1+t).
#[derive(Debug, Clone, PartialEq)]
pub struct MLBoundConstants {
    pub m_alpha: f64,
    pub big_m_alpha: f64,
    pub scan_range: (f64, f64),
    /// Set when E_{α,β}(-t) changes sign on the scan grid, in which case no
    /// positive lower constant exists on that range.
    pub lower_bound_violated: bool,
    /// Location of the first sign change, refined by bisection.
    pub first_zero: Option<f64>,
}

/// Scan a log-spaced grid on (0, t_max] and report the extreme values of
/// (1+t)|E_{α,β}(-t)|. The maximum is refined by golden-section search.
pub fn fit_bound_constants(alpha: f64, beta: f64, t_max: f64, n_points: usize) -> Result<MLBoundConstants> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
    }
    if n_points < 100 {
        return Err(Error::Domain(format!("n_points must be at least 100, got {n_points}")));
    }
    let ev = MlEvaluator::new(MLParams::new(alpha, beta)?);
    let t_min = (t_max * 1e-8).min(1e-6);
    let grid = log_grid(t_min, t_max, n_points);
    let mut vals = Vec::with_capacity(grid.len() + 1);
    vals.push((0.0, ev.eval_certified(0.0)?));
    for &t in &grid {
        vals.push((t, ev.eval_certified(-t)?));
    }
    let scaled = |(t, e): (f64, f64)| (1.0 + t) * e.abs();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    let mut i_hi = 0;
    let mut first_zero = None;
    for (i, &p) in vals.iter().enumerate() {
        let s = scaled(p);
        lo = lo.min(s);
        if s > hi {
            hi = s;
            i_hi = i;
        }
        if i > 0 && first_zero.is_none() && vals[i - 1].1.signum() != p.1.signum() {
            first_zero = Some(bisect_zero(&ev, vals[i - 1].0, p.0)?);
        }
    }
    // local refinement of the maximum
    let a = vals[i_hi.saturating_sub(1)].0;
    let b = vals[(i_hi + 1).min(vals.len() - 1)].0;
    if b > a {
        let f = |t: f64| ev.eval_neg(t).value.abs() * (1.0 + t);
        hi = hi.max(golden_max(f, a, b));
    }
    let violated = first_zero.is_some();
    if violated {
        lo = 0.0;
    }
    Ok(MLBoundConstants { m_alpha: lo, big_m_alpha: hi, scan_range: (0.0, t_max), lower_bound_violated: violated, first_zero })
}

/// Log-spaced grid of `n` points from `a` to `b` inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| if i + 1 == n { b } else { (la + (lb - la) * i as f64 / (n - 1) as f64).exp() }).collect()
}

fn bisect_zero(ev: &MlEvaluator, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = ev.eval_certified(-a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = ev.eval_neg(m).value;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(a)).max(f(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64) -> MLParams {
        MLParams::new(a, b).unwrap()
    }

    #[test]
    fn exponential_identity() {
        let v = ml(p(1.0, 1.0), -1.0).unwrap();
        assert!((v - 0.36787944117144233).abs() < 1e-16);
    }

    #[test]
    fn cosine_zero() {
        let z = -(PI / 2.0).powi(2);
        assert!(ml(p(2.0, 1.0), z).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn origin_value() {
        let v = ml(p(1.5, 1.5), 0.0).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_positive_argument_and_bad_alpha() {
        assert!(matches!(ml(p(1.5, 1.0), 0.5), Err(Error::Domain(_))));
        assert!(MLParams::new(2.5, 1.0).is_err());
        assert!(MLParams::new(0.0, 1.0).is_err());
        assert!(MLParams::new(1.5, -1.0).is_err());
    }

    #[test]
    fn kernel_sine_identity() {
        let v = ml_kernel(2.0, 1.0, PI / 2.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(ml_kernel(1.5, 0.0, 1.0).is_err());
        assert!(ml_kernel(1.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn kernel_small_time_leading_term() {
        let t = 1e-8;
        let v = ml_kernel(1.9, 1.0, t).unwrap();
        let lead = t.powf(0.9) * rgamma(1.9);
        assert!(((v - lead) / lead).abs() < 1e-6);
    }

    #[test]
    fn derivative_identity_wave_case() {
        let (r1, r2) = ml_derivative_identity_residual(2.0, 1.0, 1.0, 1e-5).unwrap();
        assert!(r1 <= 1e-6 && r2 <= 1e-6, "{r1} {r2}");
        assert!(ml_derivative_identity_residual(1.5, 1.0, 1e-5, 1e-5).is_err());
    }

    #[test]
    fn bound_constants_exponential() {
        let c = fit_bound_constants(1.0, 1.0, 50.0, 200).unwrap();
        assert!((c.big_m_alpha - 1.0).abs() < 1e-12);
        assert!((c.m_alpha - 51.0 * (-50f64).exp()).abs() < 1e-12);
        assert!(!c.lower_bound_violated);
    }

    #[test]
    fn bound_constants_flag_sign_change() {
        let c = fit_bound_constants(1.95, 1.0, 100.0, 400).unwrap();
        assert!(c.lower_bound_violated);
        let z = c.first_zero.unwrap();
        assert!(ml_value(p(1.95, 1.0), -z).unwrap().value.abs() < 1e-10);
    }
}
