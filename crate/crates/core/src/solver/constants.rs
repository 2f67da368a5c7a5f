//! The constants entering the well-posedness theorems, evaluated from
//! fitted bound and embedding constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::beta;

/// Everything the constant formulas depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantInputs {
    pub alpha: f64,
    pub t_final: f64,
    pub lambda1: f64,
    /// Fitted lower bound constant m_α.
    pub m_alpha: f64,
    /// Fitted upper bound constant M_α.
    pub big_m_alpha: f64,
    pub theta: f64,
    pub nu: f64,
    pub sigma: f64,
    pub q: f64,
    /// ϑ
    pub vartheta: f64,
    pub zeta: f64,
    pub s: f64,
    /// ν' of the Hölder estimate.
    pub nu_prime: f64,
    /// η of the critical Hölder estimate.
    pub eta: f64,
    /// Embedding constant of ℍ^{ν+θ} ↪ ℍ^ν.
    pub c1: f64,
    /// Embedding constant of ℍ^{ν+1} ↪ ℍ^σ.
    pub c2: f64,
    /// ‖L₁‖_∞, when a Lipschitz source is present.
    pub l1: Option<f64>,
    /// ‖L₂‖_∞.
    pub l2: Option<f64>,
    /// Critical growth constant K₀.
    pub k0: Option<f64>,
    /// ‖f‖ in ℍ^{ν+(1-ϑ)}.
    pub f_norm_critical: Option<f64>,
}

impl ConstantInputs {
    /// Embedding constants on a spectrum with smallest eigenvalue λ₁:
    /// C₁ = λ₁^{-θ} and C₂ = λ₁^{σ-ν-1}.
    /// Inputs for `problem` with fitted bound constants; the optional
    /// source constants are left unset.
    pub fn for_problem(problem: &super::ProblemSpec, bounds: &crate::mittag_leffler::MLBoundConstants) -> Self {
        let r = &problem.regularity;
        let lambda1 = problem.setup.basis().lambda1();
        let (c1, c2) = Self::spectral_embedding(lambda1, r.nu, r.theta, r.sigma);
        ConstantInputs {
            alpha: problem.alpha(),
            t_final: problem.setup.t_final(),
            lambda1,
            m_alpha: bounds.m_alpha,
            big_m_alpha: bounds.big_m_alpha,
            theta: r.theta,
            nu: r.nu,
            sigma: r.sigma,
            q: r.q,
            vartheta: r.vartheta,
            zeta: r.zeta,
            s: problem.nonlinearity.meta.s,
            nu_prime: r.nu_prime,
            eta: r.eta,
            c1,
            c2,
            l1: None,
            l2: None,
            k0: None,
            f_norm_critical: None,
        }
    }

    pub fn spectral_embedding(lambda1: f64, nu: f64, theta: f64, sigma: f64) -> (f64, f64) {
        (lambda1.powf(-theta), lambda1.powf(sigma - nu - 1.0))
    }
}

/// A smallness condition of one of the theorems: `lhs < rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// The evaluated constants. Entries that need an input that was not given
/// (a Lipschitz bound, K₀, ‖f‖) are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsBundle {
    pub inputs: ConstantInputs,
    /// 𝓜₁
    pub m1: f64,
    /// 𝓜₂
    pub m2: f64,
    /// script 𝓜₁
    pub m1_script: f64,
    /// 𝓜̄₁
    pub m1_bar: Option<f64>,
    /// 𝓜̄₂
    pub m2_bar: Option<f64>,
    /// 𝓜̄₃
    pub m3_bar: f64,
    /// script 𝓜₂ = ‖L₂‖ (𝓜̄₁ + 𝓜̄₂ + 𝓜̄₃)
    pub m2_script: Option<f64>,
    /// 𝓝₁
    pub n1: Option<f64>,
    /// 𝓝₂
    pub n2: f64,
    /// script 𝒩₁
    pub n1_script: Option<f64>,
    /// script 𝒩₂
    pub n2_script: Option<f64>,
    /// script 𝒩₂ with overline
    pub n2_script_bar: Option<f64>,
    /// 𝓝_f
    pub n_f: Option<f64>,
    /// R̂
    pub r_hat: Option<f64>,
    pub eta_glo: Option<f64>,
    pub eta_cri: Option<f64>,
    pub admissibility: Vec<Admissibility>,
}

/// Piecewise Hölder exponent: for x in (0, 1] it is min{x, α-1}, for x in
/// (1, 2) it is min{x-1, α-1}, and undefined otherwise.
pub fn holder_exponent(alpha: f64, x: f64) -> Option<f64> {
    if x > 0.0 && x <= 1.0 {
        Some(x.min(alpha - 1.0))
    } else if x > 1.0 && x < 2.0 {
        Some((x - 1.0).min(alpha - 1.0))
    } else {
        None
    }
}

/// η_glo(α, θ, ν').
pub fn eta_glo(alpha: f64, theta: f64, nu_prime: f64) -> Option<f64> {
    holder_exponent(alpha, alpha * (theta + nu_prime - 1.0))
}

/// η_cri(α, η, ϑ).
pub fn eta_cri(alpha: f64, eta: f64, vartheta: f64) -> Option<f64> {
    holder_exponent(alpha, alpha * (eta - vartheta))
}

fn positive(name: &str, x: f64, bad: &mut Vec<String>) {
    if !(x > 0.0 && x.is_finite()) {
        bad.push(format!("{name} > 0 ({name} = {x})"));
    }
}

/// Evaluate every constant. Fails when an input makes a formula undefined,
/// naming each offending condition.
pub fn compute_constants(inp: &ConstantInputs) -> Result<ConstantsBundle> {
    let mut bad = Vec::new();
    let a = inp.alpha;
    if !(a > 1.0 && a <= 2.0) {
        bad.push(format!("1 < α ≤ 2 (α = {a})"));
    }
    positive("T", inp.t_final, &mut bad);
    positive("λ₁", inp.lambda1, &mut bad);
    positive("m_α", inp.m_alpha, &mut bad);
    positive("M_α", inp.big_m_alpha, &mut bad);
    if !(inp.theta > 0.0 && inp.theta < 1.0) {
        bad.push(format!("0 < θ < 1 (θ = {})", inp.theta));
    }
    if !(inp.vartheta > 0.0 && inp.vartheta < 1.0) {
        bad.push(format!("0 < ϑ < 1 (ϑ = {})", inp.vartheta));
    }
    if !bad.is_empty() {
        return Err(Error::Domain(format!("constants undefined: {}", bad.join("; "))));
    }
    let t = inp.t_final;
    let ta = t.powf(a);
    let l1 = inp.lambda1;
    let (m, big_m) = (inp.m_alpha, inp.big_m_alpha);
    let th = inp.theta;
    let vt = inp.vartheta;
    let s = inp.s;
    let q = inp.q;

    let m1 = big_m * big_m / m * t.powf(a * (1.0 - th)) * (t.powf(a * th) + l1.powf(-th));
    let m2 = big_m * big_m / m * t.powf(a * (1.0 - th)) / (a * a * th * (1.0 - th)) * (ta + 1.0 / l1);
    let m1_script = (PI * big_m * l1.powf(-th) * t.powf(a * (1.0 - th)) + PI * m1) / (PI * a * (1.0 - th)).sin();
    let q_ok = q >= 1.0 && 1.0 - a * (1.0 - th) * q > 0.0;
    let m1_bar = (q >= 1.0).then(|| inp.c2 * big_m * t.powf(a + 1.0 / q) / (a * (a * q + 1.0).powf(1.0 / q)));
    let m2_bar = q_ok.then(|| {
        t.powf(a * (1.0 - th)) * (t.powf(a * th + 1.0 / q) + l1.powf(-th))
            / ((1.0 - a * (1.0 - th) * q).powf(1.0 / q) * a * (1.0 - th))
    });
    let m3_bar = big_m * ta / a * (1.0 + big_m / m * (ta + 1.0 / l1));
    let m2_script = match (inp.l2, m1_bar, m2_bar) {
        (Some(l2), Some(x), Some(y)) => Some(l2 * (x + y + m3_bar)),
        _ => None,
    };
    let n1 = inp.l1.and_then(|l| {
        let gap = 1.0 - l * m1_script;
        (gap > 0.0).then(|| m1 / big_m * inp.c1 / gap)
    });
    let n2 = big_m / m * t.powf(a * vt) * (t.powf(a * (1.0 - vt)) + l1.powf(vt - 1.0));

    let mu = inp.nu - inp.sigma;
    let zs = [vt - mu, 1.0 - mu];
    let second = 1.0 - a * (1.0 + s) * vt - a * inp.zeta;
    let beta_ok = zs.iter().all(|z| *z > 0.0) && second > 0.0;
    let n1_script = beta_ok.then(|| zs.iter().map(|z| beta(a * z, second)).fold(f64::NEG_INFINITY, f64::max));
    let n2_script =
        n1_script.map(|n| big_m * n * zs.iter().map(|z| t.powf(a * (z - s * vt - inp.zeta))).fold(f64::NEG_INFINITY, f64::max));
    let n2_script_bar = n2_script.map(|n| n * (1.0 + n2 * t.powf(-a * vt)));
    let n_f = inp.f_norm_critical.filter(|f| *f > 0.0 && s > 0.0).map(|f| (s / (n2 * f)).powf(s) / (2.0 + 2.0 * s).powf(1.0 + s));
    let r_hat = match (n2_script_bar, inp.k0) {
        (Some(nb), Some(k0)) if k0 > 0.0 && s > 0.0 => {
            let num = 1.0 - nb * k0 * t.powf(s * a * vt);
            (num > 0.0).then(|| (num / ((1.0 + s) * nb * k0)).powf(1.0 / s))
        }
        _ => None,
    };

    let mut adm = Vec::new();
    if let Some(l) = inp.l1 {
        adm.push(Admissibility { name: "L1 < 1/M1_script".into(), lhs: l, rhs: 1.0 / m1_script, pass: l < 1.0 / m1_script });
    }
    if let (Some(l), Some(ms)) = (inp.l2, m2_script) {
        adm.push(Admissibility { name: "L2 < 1/M2_script".into(), lhs: l, rhs: 1.0 / ms, pass: l < 1.0 / ms });
    }
    if let (Some(k0), Some(nb)) = (inp.k0, n2_script_bar) {
        let lhs = k0 * t.powf(s * a * vt);
        let mut rhs = 0.5 / nb;
        if let Some(nf) = n_f {
            rhs = rhs.min(nf);
        }
        adm.push(Admissibility {
            name: "K0 T^(s α ϑ) < min(1/(2 N2_bar), N_f)".into(), lhs, rhs, pass: lhs > 0.0 && lhs < rhs
        });
    }
    // The ball of radius R̂ is mapped into itself only when the linear part
    // fits: N2 ‖f‖ < s/(1+s) (1 - N2_bar K0 T^{sαϑ}) R̂. This does not follow
    // from the N_f condition when N2_bar > 1, so it is reported separately.
    if let (Some(k0), Some(nb), Some(r), Some(fnorm)) = (inp.k0, n2_script_bar, r_hat, inp.f_norm_critical) {
        let lhs = n2 * fnorm;
        let rhs = s / (1.0 + s) * (1.0 - nb * k0 * t.powf(s * a * vt)) * r;
        adm.push(Admissibility { name: "N2 |f| < s/(1+s) (1 - N2_bar K0 T^(s α ϑ)) R_hat".into(), lhs, rhs, pass: lhs < rhs });
    }

    Ok(ConstantsBundle {
        inputs: inp.clone(),
        m1,
        m2,
        m1_script,
        m1_bar,
        m2_bar,
        m3_bar,
        m2_script,
        n1,
        n2,
        n1_script,
        n2_script,
        n2_script_bar,
        n_f,
        r_hat,
        eta_glo: eta_glo(a, th, inp.nu_prime),
        eta_cri: eta_cri(a, inp.eta, vt),
        admissibility: adm,
    })
}

impl ConstantsBundle {
    /// (name, value) rows in a fixed order; undefined entries are NaN.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        let o = |x: Option<f64>| x.unwrap_or(f64::NAN);
        let i = &self.inputs;
        vec![
            ("alpha", i.alpha),
            ("T", i.t_final),
            ("lambda1", i.lambda1),
            ("m_alpha", i.m_alpha),
            ("M_alpha", i.big_m_alpha),
            ("theta", i.theta),
            ("nu", i.nu),
            ("sigma", i.sigma),
            ("q", i.q),
            ("vartheta", i.vartheta),
            ("zeta", i.zeta),
            ("s", i.s),
            ("C1", i.c1),
            ("C2", i.c2),
            ("M1", self.m1),
            ("M2", self.m2),
            ("M1_script", self.m1_script),
            ("M1_bar", o(self.m1_bar)),
            ("M2_bar", o(self.m2_bar)),
            ("M3_bar", self.m3_bar),
            ("M2_script", o(self.m2_script)),
            ("N1", o(self.n1)),
            ("N2", self.n2),
            ("N1_script", o(self.n1_script)),
            ("N2_script", o(self.n2_script)),
            ("N2_script_bar", o(self.n2_script_bar)),
            ("N_f", o(self.n_f)),
            ("R_hat", o(self.r_hat)),
            ("eta_glo", o(self.eta_glo)),
            ("eta_cri", o(self.eta_cri)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holder_exponents() {
        assert!((eta_glo(1.5, 0.8, 0.5).unwrap() - 0.45).abs() < 1e-15);
        assert!((eta_cri(1.5, 1.2, 0.9).unwrap() - 0.45).abs() < 1e-14);
        assert_eq!(holder_exponent(1.5, 1.6), Some(0.5));
        assert!((holder_exponent(1.5, 1.2).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(holder_exponent(1.5, 0.0), None);
        assert_eq!(holder_exponent(1.5, 2.0), None);
    }
}
