//! Coefficient-wise solution and derivative operators of the terminal value
//! problem.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::mittag_leffler::{fit_bound_constants, MLBoundConstants, MLParams, MlEvaluator};
use crate::spectral_basis::{SpectralBasis, SpectralField};

/// Default guard on |E_{α,1}(-λ_j T^α)|.
pub const EPS_DEN: f64 = 1e-10;

/// The four derivative operators.
///
/// * `D1`: -λ t^{α-1} E_{α,α}(-λt^α) / E_{α,1}(-λT^α)
/// * `D2`: t^{α-2} E_{α,α-1}(-λt^α)
/// * `D3`: -λ E_{α,1}(-λt^α) / E_{α,1}(-λT^α)
/// * `D4`: -λ t^{α-1} E_{α,α}(-λt^α)
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOp {
    D1,
    D2,
    D3,
    D4,
}

/// α, T and a basis, with the terminal denominators E_{α,1}(-λ_j T^α)
/// precomputed and checked against the guard.
#[derive(Debug, Clone)]
pub struct TerminalSetup {
    alpha: f64,
    t_final: f64,
    basis: Arc<SpectralBasis>,
    denominators: Vec<f64>,
    eps_den: f64,
    e1: Arc<MlEvaluator>,
    ea: Arc<MlEvaluator>,
    ea_plus: Arc<OnceLock<MlEvaluator>>,
    ea_minus: Arc<OnceLock<MlEvaluator>>,
}

impl TerminalSetup {
    pub fn new(alpha: f64, t_final: f64, basis: Arc<SpectralBasis>) -> Result<Self> {
        Self::with_guard(alpha, t_final, basis, EPS_DEN)
    }

    /// Construct with an explicit guard threshold. Fails with
    /// [`Error::TerminalTimeInadmissible`] naming the first mode whose
    /// denominator is within the guard.
    pub fn with_guard(alpha: f64, t_final: f64, basis: Arc<SpectralBasis>, eps_den: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (1, 2], got {alpha}")));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::Domain(format!("T must be positive, got {t_final}")));
        }
        if !(eps_den >= 0.0) {
            return Err(Error::Domain(format!("guard must be non-negative, got {eps_den}")));
        }
        let e1 = MlEvaluator::tabulated(MLParams::new(alpha, 1.0)?);
        let ea = MlEvaluator::tabulated(MLParams::new(alpha, alpha)?);
        let ta = t_final.powf(alpha);
        let mut denominators = Vec::with_capacity(basis.len());
        for (j, &l) in basis.lambdas().iter().enumerate() {
            let d = certified(&e1, l * ta)?;
            if d.abs() <= eps_den {
                return Err(Error::TerminalTimeInadmissible { mode: j + 1, value: d.abs(), eps: eps_den });
            }
            denominators.push(d);
        }
        Ok(TerminalSetup {
            alpha,
            t_final,
            basis,
            denominators,
            eps_den,
            e1: Arc::new(e1),
            ea: Arc::new(ea),
            ea_plus: Arc::new(OnceLock::new()),
            ea_minus: Arc::new(OnceLock::new()),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn lambdas(&self) -> &[f64] {
        self.basis.lambdas()
    }

    pub fn len(&self) -> usize {
        self.denominators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.denominators.is_empty()
    }

    /// E_{α,1}(-λ_j T^α) per mode.
    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    pub fn eps_den(&self) -> f64 {
        self.eps_den
    }

    /// Evaluator of E_{α,1}.
    pub fn e1(&self) -> &MlEvaluator {
        &self.e1
    }

    /// Evaluator of E_{α,α}.
    pub fn e_alpha(&self) -> &MlEvaluator {
        &self.ea
    }

    /// Evaluator of E_{α,α+1}, built on first use.
    pub fn e_alpha_plus_one(&self) -> &MlEvaluator {
        self.ea_plus.get_or_init(|| MlEvaluator::tabulated(MLParams { alpha: self.alpha, beta: self.alpha + 1.0 }))
    }

    /// Evaluator of E_{α,α-1}, built on first use.
    pub fn e_alpha_minus_one(&self) -> &MlEvaluator {
        self.ea_minus.get_or_init(|| MlEvaluator::tabulated(MLParams { alpha: self.alpha, beta: self.alpha - 1.0 }))
    }

    /// Largest amplification 1/|E_{α,1}(-λ_j T^α)| of the backward
    /// propagator at t = 0, with its (1-based) mode.
    pub fn worst_amplification(&self) -> (usize, f64) {
        self.denominators
            .iter()
            .enumerate()
            .map(|(j, d)| (j + 1, 1.0 / d.abs()))
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
    }

    /// E_{α,1}(-λ t^α).
    pub fn b0_multiplier(&self, lambda: f64, t: f64) -> f64 {
        if t == 0.0 {
            return 1.0;
        }
        self.e1.eval_neg(lambda * t.powf(self.alpha)).value
    }

    /// E_{α,1}(-λ_j t^α) / E_{α,1}(-λ_j T^α), j 0-based.
    pub fn b_multiplier(&self, j: usize, t: f64) -> f64 {
        if t == self.t_final {
            return 1.0;
        }
        self.b0_multiplier(self.lambdas()[j], t) / self.denominators[j]
    }

    /// t^{α-1} E_{α,α}(-λ t^α) for t > 0.
    pub fn p_multiplier(&self, lambda: f64, t: f64) -> f64 {
        t.powf(self.alpha - 1.0) * self.ea.eval_neg(lambda * t.powf(self.alpha)).value
    }

    /// Antiderivative of the P kernel: F(x) = ∫_0^x r^{α-1}E_{α,α}(-λr^α) dr
    /// = x^α E_{α,α+1}(-λx^α). Also valid at λ = 0.
    pub fn p_antiderivative(&self, lambda: f64, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let xa = x.powf(self.alpha);
        xa * self.e_alpha_plus_one().eval_neg(lambda * xa).value
    }

    /// Multiplier of a derivative operator for mode j (0-based) at t > 0.
    pub fn d_multiplier(&self, which: DerivativeOp, j: usize, t: f64) -> f64 {
        let l = self.lambdas()[j];
        let ta = t.powf(self.alpha);
        match which {
            DerivativeOp::D1 => -l * t.powf(self.alpha - 1.0) * self.ea.eval_neg(l * ta).value / self.denominators[j],
            DerivativeOp::D2 => t.powf(self.alpha - 2.0) * self.e_alpha_minus_one().eval_neg(l * ta).value,
            DerivativeOp::D3 => -l * self.e1.eval_neg(l * ta).value / self.denominators[j],
            DerivativeOp::D4 => -l * self.p_multiplier(l, t),
        }
    }

    fn check_field(&self, field: &SpectralField) -> Result<()> {
        if field.len() != self.len() {
            return Err(Error::Input(format!("field has {} modes, setup has {}", field.len(), self.len())));
        }
        Ok(())
    }

    fn check_time(&self, t: f64, allow_zero: bool) -> Result<()> {
        let ok = if allow_zero { t >= 0.0 } else { t > 0.0 };
        if !ok || !t.is_finite() {
            return Err(Error::Domain(format!("time must be {} and finite, got {t}", if allow_zero { "≥ 0" } else { "> 0" })));
        }
        Ok(())
    }

    /// Backward propagator B(t, T).
    pub fn apply_b(&self, t: f64, field: &SpectralField) -> Result<SpectralField> {
        self.check_field(field)?;
        self.check_time(t, true)?;
        Ok(field.map_modes(|j, c| c * self.b_multiplier(j, t)))
    }

    /// Source-response operator P(t).
    pub fn apply_p(&self, t: f64, field: &SpectralField) -> Result<SpectralField> {
        self.check_field(field)?;
        self.check_time(t, false)?;
        let l = self.lambdas();
        Ok(field.map_modes(|j, c| c * self.p_multiplier(l[j], t)))
    }

    /// Forward propagator of the initial value problem.
    pub fn apply_b0(&self, t: f64, field: &SpectralField) -> Result<SpectralField> {
        self.check_field(field)?;
        self.check_time(t, true)?;
        let l = self.lambdas();
        Ok(field.map_modes(|j, c| c * self.b0_multiplier(l[j], t)))
    }

    pub fn apply_d(&self, which: DerivativeOp, t: f64, field: &SpectralField) -> Result<SpectralField> {
        self.check_field(field)?;
        self.check_time(t, false)?;
        Ok(field.map_modes(|j, c| c * self.d_multiplier(which, j, t)))
    }

    /// Empirical bound constants for this setup. The upper constant is the
    /// larger of the scans of (1+t)|E_{α,1}(-t)| and (1+t)|E_{α,α}(-t)| up to
    /// λ_J T^α; the lower constant is min_j (1+λ_jT^α)|E_{α,1}(-λ_jT^α)|,
    /// the only points at which a lower bound is used.
    pub fn bound_constants(&self, n_points: usize) -> Result<MLBoundConstants> {
        let ta = self.t_final.powf(self.alpha);
        let t_max = self.lambdas().last().copied().unwrap_or(1.0) * ta;
        let b1 = fit_bound_constants(self.alpha, 1.0, t_max, n_points)?;
        let ba = fit_bound_constants(self.alpha, self.alpha, t_max, n_points)?;
        let m =
            self.lambdas().iter().zip(&self.denominators).map(|(l, d)| (1.0 + l * ta) * d.abs()).fold(f64::INFINITY, f64::min);
        Ok(MLBoundConstants {
            m_alpha: m,
            big_m_alpha: b1.big_m_alpha.max(ba.big_m_alpha).max(m),
            scan_range: (0.0, t_max),
            lower_bound_violated: b1.lower_bound_violated,
            first_zero: b1.first_zero,
        })
    }

    /// Check the kernel and ratio estimates on a (mode, time) grid:
    ///
    /// * a: z^{α-1}E_{α,α}(-λ_j z^α) ≤ M λ_j^{-θ} z^{α(1-θ)-1}
    /// * b: |E_{α,1}(-λ_j t^α)/E_{α,1}(-λ_j T^α)| ≤ M m^{-1}(λ_1^{-1}+T^α) λ_j^θ t^{-α(1-θ)}
    pub fn ratio_bound_check(&self, theta: f64, t_grid: &[f64], consts: &MLBoundConstants) -> Result<RatioBoundReport> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain(format!("theta must lie in (0, 1), got {theta}")));
        }
        let a = self.alpha;
        let big_m = consts.big_m_alpha;
        let m = consts.m_alpha;
        let l1 = self.basis.lambda1();
        let ta = self.t_final.powf(a);
        let mut rep = RatioBoundReport::default();
        for (j, &l) in self.lambdas().iter().enumerate() {
            for &t in t_grid {
                self.check_time(t, false)?;
                let lhs_a = self.p_multiplier(l, t).abs();
                let rhs_a = big_m * l.powf(-theta) * t.powf(a * (1.0 - theta) - 1.0);
                let lhs_b = self.b_multiplier(j, t).abs();
                let rhs_b = big_m / m * (1.0 / l1 + ta) * l.powf(theta) * t.powf(-a * (1.0 - theta));
                rep.points += 1;
                let ra = lhs_a / rhs_a;
                let rb = lhs_b / rhs_b;
                rep.max_ratio_kernel = rep.max_ratio_kernel.max(ra);
                rep.max_ratio_terminal = rep.max_ratio_terminal.max(rb);
                if ra > 1.0 {
                    rep.violations_kernel += 1;
                }
                if rb > 1.0 {
                    rep.violations_terminal += 1;
                }
            }
        }
        Ok(rep)
    }
}

/// Outcome of [`TerminalSetup::ratio_bound_check`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatioBoundReport {
    pub points: usize,
    pub max_ratio_kernel: f64,
    pub max_ratio_terminal: f64,
    pub violations_kernel: usize,
    pub violations_terminal: usize,
}

impl RatioBoundReport {
    pub fn pass(&self) -> bool {
        self.violations_kernel == 0 && self.violations_terminal == 0
    }
}

fn certified(ev: &MlEvaluator, t: f64) -> Result<f64> {
    let v = ev.eval_neg(t);
    if v.is_certified() {
        Ok(v.value)
    } else {
        Err(Error::Accuracy { estimate: v.value, error_bound: v.error_bound })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(alpha: f64, t: f64, j: usize) -> TerminalSetup {
        let b = Arc::new(SpectralBasis::dirichlet_1d(PI, j).unwrap());
        TerminalSetup::new(alpha, t, b).unwrap()
    }

    #[test]
    fn b_is_identity_at_final_time() {
        let s = setup(1.5, 2.0, 4);
        let f = SpectralField::new(s.basis().clone(), vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        assert_eq!(s.apply_b(2.0, &f).unwrap().coeffs(), f.coeffs());
    }

    #[test]
    fn wave_limit_cosine_and_sine() {
        let s = setup(2.0, 1.0, 1);
        let f = SpectralField::single_mode(s.basis().clone(), 1).unwrap();
        let c = s.apply_b0(PI, &f).unwrap().coeffs()[0];
        assert!((c + 1.0).abs() < 1e-12);
        let p = s.apply_p(PI / 2.0, &f).unwrap().coeffs()[0];
        assert!((p - 1.0).abs() < 1e-12);
        let d2 = s.d_multiplier(DerivativeOp::D2, 0, PI);
        assert!((d2 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn d4_is_minus_lambda_times_p() {
        let s = setup(1.5, 2.0, 6);
        for j in 0..6 {
            let t = 0.37;
            let l = s.lambdas()[j];
            assert_eq!(s.d_multiplier(DerivativeOp::D4, j, t), -l * s.p_multiplier(l, t));
        }
    }

    #[test]
    fn inadmissible_time_names_mode() {
        // E_{2,1}(-T^2) = cos T vanishes at T = π/2 for λ_1 = 1
        let b = Arc::new(SpectralBasis::dirichlet_1d(PI, 3).unwrap());
        match TerminalSetup::new(2.0, PI / 2.0, b) {
            Err(Error::TerminalTimeInadmissible { mode, .. }) => assert_eq!(mode, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_time_rejected() {
        let s = setup(1.5, 1.0, 2);
        let f = SpectralField::zeros(s.basis().clone());
        assert!(s.apply_p(0.0, &f).is_err());
        assert!(s.apply_b(-1.0, &f).is_err());
    }

    #[test]
    fn antiderivative_small_argument() {
        let s = setup(1.5, 1.0, 1);
        let x: f64 = 1e-6;
        let f = s.p_antiderivative(1.0, x);
        let lead = x.powf(1.5) / crate::gamma::gamma(2.5);
        assert!((f - lead).abs() < 1e-8 * lead);
    }
}
