//! Source terms G(t, u), their hypothesis metadata, and the parameter
//! validators of the Ginzburg-Landau and Burgers applications.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral_basis::{embedding_validator, le, lt, norm_hs_coeffs, CheckReport, Embedding, SpectralBasis, SpectralField};

/// Which structural hypothesis a source term is meant to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// Globally Lipschitz in ℍ^ν with a bounded coefficient.
    H1,
    /// Lipschitz into ℍ^{ν+1} on the path space.
    H2,
    /// Critical: local Lipschitz with polynomial growth of order s.
    H3,
}

/// The concrete source terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearityKind {
    Zero,
    /// G(t, u) = g, a fixed field given by its coefficients.
    LinearInhomogeneous {
        source: Vec<f64>,
    },
    /// G(t, u) = L₁ u.
    LipschitzScaled {
        l1: f64,
    },
    /// G(t, u) = C_ρ t^b |u|^s u.
    GinzburgLandau {
        s: f64,
        c_rho: f64,
        b: f64,
    },
    /// G(t, u) = -C_ρ t^b u u_x (one space dimension).
    Burgers {
        c_rho: f64,
        b: f64,
    },
}

/// Regularity metadata carried with a source term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityMeta {
    pub class: Hypothesis,
    pub sigma: f64,
    pub nu: f64,
    pub s: f64,
    pub zeta: f64,
    /// Growth constant K₀, once fitted.
    pub k0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub kind: NonlinearityKind,
    pub meta: NonlinearityMeta,
}

impl NonlinearitySpec {
    pub fn zero() -> Self {
        Self::with_class(NonlinearityKind::Zero, Hypothesis::H1, 0.0)
    }

    pub fn linear_inhomogeneous(source: Vec<f64>) -> Self {
        Self::with_class(NonlinearityKind::LinearInhomogeneous { source }, Hypothesis::H1, 0.0)
    }

    pub fn lipschitz_scaled(l1: f64) -> Self {
        Self::with_class(NonlinearityKind::LipschitzScaled { l1 }, Hypothesis::H1, 0.0)
    }

    pub fn ginzburg_landau(s: f64, c_rho: f64, b: f64) -> Self {
        Self::with_class(NonlinearityKind::GinzburgLandau { s, c_rho, b }, Hypothesis::H3, s)
    }

    pub fn burgers(c_rho: f64, b: f64) -> Self {
        Self::with_class(NonlinearityKind::Burgers { c_rho, b }, Hypothesis::H3, 1.0)
    }

    fn with_class(kind: NonlinearityKind, class: Hypothesis, s: f64) -> Self {
        NonlinearitySpec { kind, meta: NonlinearityMeta { class, sigma: 0.0, nu: 0.0, s, zeta: 0.0, k0: None } }
    }

    /// Set ν, σ and ζ.
    pub fn with_regularity(mut self, nu: f64, sigma: f64, zeta: f64) -> Self {
        self.meta.nu = nu;
        self.meta.sigma = sigma;
        self.meta.zeta = zeta;
        self
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind, NonlinearityKind::Zero)
    }

    /// Whether G(t, 0) = 0.
    pub fn preserves_zero(&self) -> bool {
        !matches!(self.kind, NonlinearityKind::LinearInhomogeneous { .. })
    }

    /// Whether G is affine in u with a time-independent part, so a single
    /// application of the fixed-point map is exact only when G ignores u.
    pub fn ignores_state(&self) -> bool {
        matches!(self.kind, NonlinearityKind::Zero | NonlinearityKind::LinearInhomogeneous { .. })
    }

    /// Time weight ρ(t) = C_ρ t^b of the nonlinear kinds (1 otherwise).
    pub fn rho(&self, t: f64) -> f64 {
        match self.kind {
            NonlinearityKind::GinzburgLandau { c_rho, b, .. } | NonlinearityKind::Burgers { c_rho, b } => {
                if c_rho == 0.0 {
                    0.0
                } else if b == 0.0 {
                    c_rho
                } else {
                    c_rho * t.powf(b)
                }
            }
            _ => 1.0,
        }
    }

    /// The same term with ρ ≡ 1.
    pub fn unit_weight(&self) -> Self {
        let mut out = self.clone();
        match &mut out.kind {
            NonlinearityKind::GinzburgLandau { c_rho, b, .. } | NonlinearityKind::Burgers { c_rho, b } => {
                *c_rho = 1.0;
                *b = 0.0;
            }
            _ => {}
        }
        out
    }

    /// Check the side condition ζ < min(1/α - (1+s)ϑ, ϑ(1-s) - ν + σ) of the
    /// critical hypothesis.
    pub fn check_critical(&self, alpha: f64, vartheta: f64) -> CheckReport {
        let mut r = CheckReport::default();
        if self.meta.class != Hypothesis::H3 {
            return r;
        }
        let m = &self.meta;
        let bound = (1.0 / alpha - (1.0 + m.s) * vartheta).min(vartheta * (1.0 - m.s) - m.nu + m.sigma);
        r.require(lt(m.zeta, bound), "zeta-bound", || {
            format!("ζ < min(1/α - (1+s)ϑ, ϑ(1-s) - ν + σ) = {bound} (ζ = {})", m.zeta)
        });
        r
    }

    pub fn eval(&self, t: f64, field: &SpectralField) -> Result<SpectralField> {
        let c = self.eval_coeffs(t, field.basis(), field.coeffs())?;
        Ok(SpectralField::from_raw(field.basis().clone(), c))
    }

    /// G(t, u) on raw coefficients.
    pub fn eval_coeffs(&self, t: f64, basis: &SpectralBasis, coeffs: &[f64]) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time must be non-negative, got {t}")));
        }
        let n = coeffs.len();
        match &self.kind {
            NonlinearityKind::Zero => Ok(vec![0.0; n]),
            NonlinearityKind::LinearInhomogeneous { source } => {
                if source.len() != n {
                    return Err(Error::Input(format!("source has {} modes, field has {n}", source.len())));
                }
                Ok(source.clone())
            }
            NonlinearityKind::LipschitzScaled { l1 } => Ok(coeffs.iter().map(|c| l1 * c).collect()),
            NonlinearityKind::GinzburgLandau { s, .. } => {
                let rho = self.weight_at(t)?;
                if rho == 0.0 {
                    return Ok(vec![0.0; n]);
                }
                let mut u = basis.synthesize(coeffs)?;
                for v in u.iter_mut() {
                    *v = if *v == 0.0 { 0.0 } else { rho * v.abs().powf(*s) * *v };
                }
                basis.analyze(&u)
            }
            NonlinearityKind::Burgers { .. } => {
                let rho = self.weight_at(t)?;
                if rho == 0.0 {
                    return Ok(vec![0.0; n]);
                }
                let u = basis.synthesize(coeffs)?;
                let ux = basis.synthesize_dx(coeffs)?;
                let prod: Vec<f64> = u.iter().zip(&ux).map(|(a, b)| -rho * a * b).collect();
                basis.analyze(&prod)
            }
        }
    }

    fn weight_at(&self, t: f64) -> Result<f64> {
        let r = self.rho(t);
        if !r.is_finite() {
            return Err(Error::Domain(format!("time weight ρ({t}) is not finite")));
        }
        Ok(r)
    }
}

/// Largest observed ratio ‖G(v₁)-G(v₂)‖ / ‖v₁-v₂‖ in ℍ^ν over random pairs:
/// an empirical Lipschitz constant.
pub fn fit_lipschitz_constant(
    spec: &NonlinearitySpec,
    basis: &SpectralBasis,
    t: f64,
    nu: f64,
    pairs: usize,
    seed: u64,
) -> Result<f64> {
    let lambda = basis.lambdas();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let v1 = random_coeffs(&mut rng, lambda, nu, 1.0);
        let v2 = random_coeffs(&mut rng, lambda, nu, 1.0);
        let g1 = spec.eval_coeffs(t, basis, &v1)?;
        let g2 = spec.eval_coeffs(t, basis, &v2)?;
        let dg: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a - b).collect();
        let dv: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a - b).collect();
        let den = norm_hs_coeffs(lambda, &dv, nu);
        if den > 0.0 {
            worst = worst.max(norm_hs_coeffs(lambda, &dg, nu) / den);
        }
    }
    Ok(worst)
}

/// Empirical growth constant of a critical term with ρ ≡ 1:
/// the largest observed
/// ‖G(v₁)-G(v₂)‖_{ℍ^σ} / ((1 + ‖v₁‖^s_{ℍ^ν} + ‖v₂‖^s_{ℍ^ν}) ‖v₁-v₂‖_{ℍ^ν})
/// over random pairs drawn at amplitudes spread over several decades.
pub fn fit_growth_constant(spec: &NonlinearitySpec, basis: &SpectralBasis, pairs: usize, seed: u64) -> Result<f64> {
    let unit = spec.unit_weight();
    let m = &spec.meta;
    let lambda = basis.lambdas();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for i in 0..pairs {
        let amp = 10f64.powf(-2.0 + 4.0 * (i as f64 + 0.5) / pairs as f64);
        let v1 = random_coeffs(&mut rng, lambda, m.nu, amp);
        let v2 = random_coeffs(&mut rng, lambda, m.nu, amp);
        let g1 = unit.eval_coeffs(1.0, basis, &v1)?;
        let g2 = unit.eval_coeffs(1.0, basis, &v2)?;
        let dg: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a - b).collect();
        let dv: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a - b).collect();
        let grow = 1.0 + norm_hs_coeffs(lambda, &v1, m.nu).powf(m.s) + norm_hs_coeffs(lambda, &v2, m.nu).powf(m.s);
        let den = grow * norm_hs_coeffs(lambda, &dv, m.nu);
        if den > 0.0 {
            worst = worst.max(norm_hs_coeffs(lambda, &dg, m.sigma) / den);
        }
    }
    Ok(worst)
}

/// Random coefficients with unit ℍ^ν-scale decay, scaled so that the ℍ^ν
/// norm is about `amp`.
fn random_coeffs(rng: &mut ChaCha8Rng, lambda: &[f64], nu: f64, amp: f64) -> Vec<f64> {
    let raw: Vec<f64> =
        lambda.iter().enumerate().map(|(j, l)| rng.gen_range(-1.0..1.0) * l.powf(-nu) / (1.0 + j as f64)).collect();
    let n = norm_hs_coeffs(lambda, &raw, nu);
    if n == 0.0 {
        return raw;
    }
    raw.iter().map(|c| c * amp / n).collect()
}

/// Which application's hypotheses to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Application {
    GinzburgLandau,
    Burgers,
}

/// Parameters of an application theorem. `mu` is derived as ν - σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApplicationParams {
    /// Space dimension N.
    pub dim: f64,
    pub alpha: f64,
    pub s: f64,
    pub nu: f64,
    pub sigma: f64,
    /// ϑ
    pub vartheta: f64,
    /// ϑ'
    pub vartheta_prime: f64,
    pub b: f64,
    /// ϱ, needed in the Ginzburg-Landau case s < 4/N.
    pub varrho: Option<f64>,
}

impl ApplicationParams {
    pub fn mu(&self) -> f64 {
        self.nu - self.sigma
    }
}

/// Result of [`validate_application_params`]; `case` names the branch taken
/// for Ginzburg-Landau ("a" for s < 4/N, "b" otherwise).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ApplicationReport {
    pub case: Option<&'static str>,
    pub report: CheckReport,
}

impl ApplicationReport {
    pub fn pass(&self) -> bool {
        self.report.pass()
    }
}

/// Evaluate every interval condition of the application theorem and the
/// embedding chain its proof relies on.
pub fn validate_application_params(kind: Application, p: &ApplicationParams) -> ApplicationReport {
    match kind {
        Application::GinzburgLandau => validate_gl(p),
        Application::Burgers => validate_burgers(p),
    }
}

fn in_half_open(r: &mut CheckReport, id: &str, name: &str, x: f64, lo: f64, hi: f64) {
    r.require(le(lo, x) && lt(x, hi), id, || format!("{name} ∈ [{lo}, {hi}) ({name} = {x})"));
}

fn in_open(r: &mut CheckReport, id: &str, name: &str, x: f64, lo: f64, hi: f64) {
    r.require(lt(lo, x) && lt(x, hi), id, || format!("{name} ∈ ({lo}, {hi}) ({name} = {x})"));
}

fn validate_gl(p: &ApplicationParams) -> ApplicationReport {
    let mut r = CheckReport::default();
    let n = p.dim;
    let s = p.s;
    let mu = p.mu();
    let top = (n + 4.0) / 8.0;
    r.require(le(2.0, n) && le(n, 4.0), "dim-range", || format!("2 ≤ N ≤ 4 (N = {n})"));
    r.require(s > 0.0, "s-positive", || format!("s > 0 (s = {s})"));
    let case_a = s < 4.0 / n;
    if case_a {
        match p.varrho {
            None => r.require(false, "varrho-missing", || "ϱ is required when s < 4/N".into()),
            Some(vr) => {
                let cap = n * s / 8.0;
                r.require(vr > 0.0 && le(vr, cap), "varrho-range", || format!("ϱ ∈ (0, Ns/8] = (0, {cap}] (ϱ = {vr})"));
                in_half_open(&mut r, "nu-range", "ν", p.nu, n / 4.0 - vr / s, n / 4.0);
            }
        }
    } else {
        in_half_open(&mut r, "nu-range", "ν", p.nu, n / 4.0 - 1.0 / (2.0 * s), n / 4.0);
    }
    let mu0 = p.nu.max(s * (n / 4.0 - p.nu));
    in_open(&mut r, "mu-range", "μ", mu, mu0, top);
    in_open(&mut r, "vartheta-range", "ϑ", p.vartheta, mu, top);
    in_half_open(&mut r, "vartheta-prime-range", "ϑ'", p.vartheta_prime, p.vartheta + (4.0 - n) / 8.0, 1.0);
    let bmin = -(1.0 / p.alpha - (1.0 + s) * p.vartheta).min((p.vartheta - mu) - s * p.vartheta);
    r.require(lt(bmin, p.b), "b-lower", || format!("b > {bmin} (b = {})", p.b));
    // embedding chain of the Lipschitz estimate
    r.extend(
        "embed-lq-to-h",
        embedding_validator(Embedding::FromLebesgue { sigma2: 2.0 * p.sigma, q2: 2.0 * n / (n - 4.0 * p.sigma), n }),
    );
    r.extend(
        "embed-h-to-lq",
        embedding_validator(Embedding::IntoLebesgue { sigma1: 2.0 * p.nu, q1: 2.0 * n * (1.0 + s) / (n - 4.0 * p.sigma), n }),
    );
    r.extend("embed-scale", embedding_validator(Embedding::HilbertScale { s: p.nu }));
    ApplicationReport { case: Some(if case_a { "a" } else { "b" }), report: r }
}

fn validate_burgers(p: &ApplicationParams) -> ApplicationReport {
    let mut r = CheckReport::default();
    let n = p.dim;
    let mu = p.mu();
    let top = (n + 4.0) / 8.0;
    r.require(le(3.0, n) && le(n, 4.0), "dim-range", || format!("3 ≤ N ≤ 4 (N = {n})"));
    in_half_open(&mut r, "nu-range", "ν", p.nu, 0.5, n / 4.0);
    let mu2 = p.nu.max((n + 2.0) / 4.0 - p.nu);
    in_half_open(&mut r, "mu-range", "μ", mu, mu2, top);
    in_open(&mut r, "vartheta-range", "ϑ", p.vartheta, mu, top);
    in_half_open(&mut r, "vartheta-prime-range", "ϑ'", p.vartheta_prime, p.vartheta + (4.0 - n) / 8.0, 1.0);
    let bmin = -(-mu).min(1.0 / p.alpha - 2.0 * p.vartheta);
    r.require(lt(bmin, p.b), "b-lower", || format!("b > {bmin} (b = {})", p.b));
    r.extend(
        "embed-lq-to-h",
        embedding_validator(Embedding::FromLebesgue { sigma2: 2.0 * p.sigma, q2: 2.0 * n / (n - 4.0 * p.sigma), n }),
    );
    r.extend("embed-scale", embedding_validator(Embedding::HilbertScale { s: p.nu }));
    r.extend(
        "embed-gradient",
        embedding_validator(Embedding::Sobolev { sigma: 2.0 * p.nu, gamma: 1.0, p: 2.0, q: 2.0 * n / (n + 2.0 - 4.0 * p.nu), n }),
    );
    r.extend(
        "embed-h-to-lq",
        embedding_validator(Embedding::IntoLebesgue { sigma1: 2.0 * p.nu, q1: 2.0 * n / (4.0 * mu - 2.0), n }),
    );
    r.extend(
        "embed-top",
        embedding_validator(Embedding::Sobolev { sigma: 2.0 - n / 4.0, gamma: 1.0, p: 2.0, q: 4.0 * n / (3.0 * n - 4.0), n }),
    );
    ApplicationReport { case: None, report: r }
}
