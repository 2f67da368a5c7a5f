//! Eigenpairs of the Dirichlet Laplacian on intervals and rectangles (or a
//! user-supplied spectrum), collocation transforms and Hilbert-scale norms.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Spatial domain of a basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Interval {
        length: f64,
    },
    Rectangle {
        lx: f64,
        ly: f64,
    },
    /// Spectrum read from a table; eigenfunctions known only through samples.
    User,
}

/// One retained eigenpair. `index` is `(m, 0)` in one dimension and `(m, n)`
/// on a rectangle; user spectra use `(j, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub index: (usize, usize),
    pub lambda: f64,
}

/// Point grid with quadrature weights and the two dense transforms between
/// point values and coefficients.
#[derive(Debug, Clone)]
struct Collocation {
    points: Vec<[f64; 2]>,
    weights: Vec<f64>,
    /// per-axis point counts
    shape: (usize, usize),
    /// M×J, row-major: value of mode j at point i
    synthesis: Vec<f64>,
    /// J×M, row-major: coefficient j from sample i
    analysis: Vec<f64>,
}

/// Eigenbasis of the spatial operator truncated to J modes, with lambda
/// sorted ascending.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    domain: Domain,
    modes: Vec<Mode>,
    lambda: Vec<f64>,
    collocation: Option<Collocation>,
}

impl SpectralBasis {
    /// Sine basis on (0, L): λ_j = (jπ/L)², φ_j = √(2/L) sin(jπx/L).
    /// Collocation uses M = 3J interior points.
    pub fn dirichlet_1d(length: f64, j: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("length must be positive, got {length}")));
        }
        if j == 0 {
            return Err(Error::Domain("need at least one mode".into()));
        }
        let modes = (1..=j).map(|m| Mode { index: (m, 0), lambda: (m as f64 * PI / length).powi(2) }).collect();
        Self::closed_form(Domain::Interval { length }, modes)?.with_collocation(3 * j, false)
    }

    /// Tensor sine basis on (0, Lx)×(0, Ly), the J smallest eigenvalues.
    /// Equal eigenvalues are ordered lexicographically by (m, n).
    pub fn dirichlet_2d(lx: f64, ly: f64, j: usize) -> Result<Self> {
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Domain(format!("extents must be positive, got {lx}, {ly}")));
        }
        if j == 0 {
            return Err(Error::Domain("need at least one mode".into()));
        }
        let mut all = Vec::with_capacity(j * j);
        for m in 1..=j {
            for n in 1..=j {
                let lambda = (m as f64 * PI / lx).powi(2) + (n as f64 * PI / ly).powi(2);
                all.push(Mode { index: (m, n), lambda });
            }
        }
        all.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.index.cmp(&b.index)));
        all.truncate(j);
        let max_m = all.iter().map(|m| m.index.0).max().unwrap_or(1);
        let max_n = all.iter().map(|m| m.index.1).max().unwrap_or(1);
        let b = Self::closed_form(Domain::Rectangle { lx, ly }, all)?;
        b.with_collocation_2d(3 * max_m, 3 * max_n, false)
    }

    fn closed_form(domain: Domain, modes: Vec<Mode>) -> Result<Self> {
        let lambda = modes.iter().map(|m| m.lambda).collect();
        Ok(SpectralBasis { domain, modes, lambda, collocation: None })
    }

    /// A spectrum given directly. `samples`, when present, is an M×J matrix of
    /// eigenfunction values at M points (row-major) used for least-squares
    /// projection; `weights` are the quadrature weights of those points.
    pub fn from_spectrum(lambda: Vec<f64>, samples: Option<(usize, Vec<f64>, Vec<f64>)>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Input("empty spectrum".into()));
        }
        for w in lambda.windows(2) {
            if w[1] < w[0] {
                return Err(Error::Input("eigenvalues must be sorted ascending".into()));
            }
        }
        if lambda.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Input("eigenvalues must be positive and finite".into()));
        }
        let j = lambda.len();
        let modes = lambda.iter().enumerate().map(|(i, &l)| Mode { index: (i + 1, 0), lambda: l }).collect();
        let collocation = match samples {
            None => None,
            Some((m, values, weights)) => {
                if values.len() != m * j || weights.len() != m {
                    return Err(Error::Input(format!(
                        "sample matrix must be {m}x{j} with {m} weights, got {} values and {} weights",
                        values.len(),
                        weights.len()
                    )));
                }
                if m < j {
                    return Err(Error::Alias { points: m, modes: j, required: j });
                }
                let phi = DMatrix::from_row_slice(m, j, &values);
                let pinv =
                    phi.clone().pseudo_inverse(1e-12).map_err(|e| Error::Input(format!("sample matrix not invertible: {e}")))?;
                let mut analysis = vec![0.0; j * m];
                for r in 0..j {
                    for c in 0..m {
                        analysis[r * m + c] = pinv[(r, c)];
                    }
                }
                Some(Collocation {
                    points: (0..m).map(|i| [i as f64, 0.0]).collect(),
                    weights,
                    shape: (m, 1),
                    synthesis: values,
                    analysis,
                })
            }
        };
        Ok(SpectralBasis { domain: Domain::User, modes, lambda, collocation })
    }

    /// Load a spectrum from a CSV with header `j,lambda`, and optionally a
    /// sample matrix CSV (rows = points, columns = modes; an optional leading
    /// `weight` column gives quadrature weights, otherwise weights are 1/M).
    pub fn from_spectrum_file(spectrum: &Path, samples: Option<&Path>) -> Result<Self> {
        let text =
            std::fs::read_to_string(spectrum).map_err(|e| Error::Input(format!("cannot read {}: {e}", spectrum.display())))?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Input("empty spectrum file".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["j", "lambda"] {
            return Err(Error::Input(format!("spectrum header must be `j,lambda`, got `{header}`")));
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::Input(format!("line {}: expected two columns", n + 2)));
            }
            let j: usize = parts[0].parse().map_err(|_| Error::Input(format!("line {}: bad index", n + 2)))?;
            let l: f64 = parts[1].parse().map_err(|_| Error::Input(format!("line {}: bad eigenvalue", n + 2)))?;
            rows.push((j, l));
        }
        rows.sort_by_key(|r| r.0);
        for (i, r) in rows.iter().enumerate() {
            if r.0 != i + 1 {
                return Err(Error::Input(format!("mode indices must be 1..J, found {}", r.0)));
            }
        }
        let lambda: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let j = lambda.len();
        let samples = match samples {
            None => None,
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Input(format!("cannot read {}: {e}", p.display())))?;
                let mut values = Vec::new();
                let mut weights = Vec::new();
                let mut m = 0;
                for (n, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
                    let parts: Vec<f64> = match line.split(',').map(|x| x.trim().parse::<f64>()).collect() {
                        Ok(v) => v,
                        Err(_) if n == 0 => continue,
                        Err(_) => return Err(Error::Input(format!("sample line {}: not numeric", n + 1))),
                    };
                    match parts.len() {
                        l if l == j => {
                            values.extend_from_slice(&parts);
                            weights.push(f64::NAN);
                        }
                        l if l == j + 1 => {
                            weights.push(parts[0]);
                            values.extend_from_slice(&parts[1..]);
                        }
                        l => return Err(Error::Input(format!("sample line {}: {l} columns for {j} modes", n + 1))),
                    }
                    m += 1;
                }
                if weights.iter().any(|w| w.is_nan()) {
                    weights = vec![1.0 / m as f64; m];
                }
                Some((m, values, weights))
            }
        };
        Self::from_spectrum(lambda, samples)
    }

    /// Replace the collocation grid of a one-dimensional sine basis by M
    /// uniform interior points. With `dealias` set, M < 2J+1 is rejected.
    pub fn with_collocation(mut self, m: usize, dealias: bool) -> Result<Self> {
        let length = match self.domain {
            Domain::Interval { length } => length,
            Domain::Rectangle { .. } => return Err(Error::Domain("use with_collocation_2d on a rectangle".into())),
            Domain::User => return Err(Error::Domain("user spectra carry their own samples".into())),
        };
        let j = self.modes.len();
        check_points(m, j, dealias)?;
        let h = length / (m + 1) as f64;
        let points: Vec<[f64; 2]> = (1..=m).map(|i| [i as f64 * h, 0.0]).collect();
        let weights = vec![h; m];
        self.collocation = Some(self.build_collocation(points, weights, (m, 1)));
        Ok(self)
    }

    /// Tensor grid of `mx × my` interior points on a rectangle.
    pub fn with_collocation_2d(mut self, mx: usize, my: usize, dealias: bool) -> Result<Self> {
        let (lx, ly) = match self.domain {
            Domain::Rectangle { lx, ly } => (lx, ly),
            _ => return Err(Error::Domain("with_collocation_2d needs a rectangle".into())),
        };
        let max_m = self.modes.iter().map(|m| m.index.0).max().unwrap_or(1);
        let max_n = self.modes.iter().map(|m| m.index.1).max().unwrap_or(1);
        check_points(mx, max_m, dealias)?;
        check_points(my, max_n, dealias)?;
        let hx = lx / (mx + 1) as f64;
        let hy = ly / (my + 1) as f64;
        let mut points = Vec::with_capacity(mx * my);
        for a in 1..=mx {
            for b in 1..=my {
                points.push([a as f64 * hx, b as f64 * hy]);
            }
        }
        let weights = vec![hx * hy; mx * my];
        self.collocation = Some(self.build_collocation(points, weights, (mx, my)));
        Ok(self)
    }

    fn build_collocation(&self, points: Vec<[f64; 2]>, weights: Vec<f64>, shape: (usize, usize)) -> Collocation {
        let j = self.modes.len();
        let m = points.len();
        let mut synthesis = vec![0.0; m * j];
        let mut analysis = vec![0.0; j * m];
        for (i, p) in points.iter().enumerate() {
            for k in 0..j {
                let v = self.eval_mode(k, p);
                synthesis[i * j + k] = v;
                analysis[k * m + i] = weights[i] * v;
            }
        }
        Collocation { points, weights, shape, synthesis, analysis }
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dimension(&self) -> usize {
        match self.domain {
            Domain::Rectangle { .. } => 2,
            _ => 1,
        }
    }

    /// Number of retained modes J.
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Eigenvalues λ_1 ≤ … ≤ λ_J.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambda
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda[0]
    }

    /// Value of the k-th (0-based) eigenfunction at a point. User spectra
    /// have no closed form and return NaN.
    pub fn eval_mode(&self, k: usize, point: &[f64]) -> f64 {
        let (m, n) = self.modes[k].index;
        match self.domain {
            Domain::Interval { length } => (2.0 / length).sqrt() * (m as f64 * PI * point[0] / length).sin(),
            Domain::Rectangle { lx, ly } => {
                (2.0 / lx).sqrt()
                    * (m as f64 * PI * point[0] / lx).sin()
                    * (2.0 / ly).sqrt()
                    * (n as f64 * PI * point[1] / ly).sin()
            }
            Domain::User => f64::NAN,
        }
    }

    /// Largest c with λ_j ≥ c·j^{2/d} over the retained modes.
    pub fn weyl_constant(&self) -> f64 {
        let d = self.dimension() as f64;
        self.lambda.iter().enumerate().map(|(i, l)| l / ((i + 1) as f64).powf(2.0 / d)).fold(f64::INFINITY, f64::min)
    }

    /// Number of collocation points, if a grid is attached.
    pub fn collocation_points(&self) -> Option<usize> {
        self.collocation.as_ref().map(|c| c.points.len())
    }

    /// Collocation grid points (x, y); y is zero in one dimension.
    pub fn grid(&self) -> Option<&[[f64; 2]]> {
        self.collocation.as_ref().map(|c| c.points.as_slice())
    }

    /// Quadrature weights of the collocation grid.
    pub fn weights(&self) -> Option<&[f64]> {
        self.collocation.as_ref().map(|c| c.weights.as_slice())
    }

    fn colloc(&self) -> Result<&Collocation> {
        self.collocation.as_ref().ok_or_else(|| Error::Domain("basis has no collocation grid".into()))
    }

    /// Point values Σ_j c_j φ_j(x_i) on the collocation grid.
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let c = self.colloc()?;
        let j = self.len();
        Ok(c.synthesis.chunks_exact(j).map(|row| dot(row, coeffs)).collect())
    }

    /// Coefficients from point values on the collocation grid.
    pub fn analyze(&self, samples: &[f64]) -> Result<Vec<f64>> {
        let c = self.colloc()?;
        if samples.len() != c.points.len() {
            return Err(Error::Grid(format!("expected {} samples, got {}", c.points.len(), samples.len())));
        }
        Ok(c.analysis.chunks_exact(c.points.len()).map(|row| dot(row, samples)).collect())
    }

    /// x-derivative Σ_j c_j ∂_x φ_j(x_i) on the collocation grid of a
    /// one-dimensional sine basis (a cosine series).
    pub fn synthesize_dx(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        let length = match self.domain {
            Domain::Interval { length } => length,
            _ => return Err(Error::Domain("x-derivative synthesis needs a one-dimensional sine basis".into())),
        };
        let c = self.colloc()?;
        let amp = (2.0 / length).sqrt();
        Ok(c.points
            .iter()
            .map(|p| {
                self.modes
                    .iter()
                    .zip(coeffs)
                    .map(|(m, ck)| {
                        let k = m.index.0 as f64 * PI / length;
                        ck * amp * k * (k * p[0]).cos()
                    })
                    .sum()
            })
            .collect())
    }

    pub fn grid_shape(&self) -> Option<(usize, usize)> {
        self.collocation.as_ref().map(|c| c.shape)
    }
}

fn check_points(m: usize, j: usize, dealias: bool) -> Result<()> {
    if m < j {
        return Err(Error::Alias { points: m, modes: j, required: j });
    }
    if dealias && m < 2 * j + 1 {
        return Err(Error::Alias { points: m, modes: j, required: 2 * j + 1 });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// √(Σ λ_j^{2γ} c_j²); γ may be negative.
pub fn norm_hs_coeffs(lambda: &[f64], coeffs: &[f64], gamma: f64) -> f64 {
    if gamma == 0.0 {
        return coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    }
    lambda.iter().zip(coeffs).map(|(l, c)| l.powf(2.0 * gamma) * c * c).sum::<f64>().sqrt()
}

/// Coefficients of a function in the eigenbasis.
#[derive(Debug, Clone)]
pub struct SpectralField {
    basis: Arc<SpectralBasis>,
    coeffs: Vec<f64>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && Arc::ptr_eq(&self.basis, &other.basis)
    }
}

impl SpectralField {
    pub fn new(basis: Arc<SpectralBasis>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::Input(format!("expected {} coefficients, got {}", basis.len(), coeffs.len())));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::Input(format!("coefficient {} is not finite", i + 1)));
        }
        Ok(SpectralField { basis, coeffs })
    }

    pub fn zeros(basis: Arc<SpectralBasis>) -> Self {
        let n = basis.len();
        SpectralField { basis, coeffs: vec![0.0; n] }
    }

    /// Unit coefficient on mode `j` (1-based).
    pub fn single_mode(basis: Arc<SpectralBasis>, j: usize) -> Result<Self> {
        if j == 0 || j > basis.len() {
            return Err(Error::Input(format!("mode {j} outside 1..={}", basis.len())));
        }
        let mut f = Self::zeros(basis);
        f.coeffs[j - 1] = 1.0;
        Ok(f)
    }

    pub(crate) fn from_raw(basis: Arc<SpectralBasis>, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(basis.len(), coeffs.len());
        SpectralField { basis, coeffs }
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// ℍ^γ norm.
    pub fn norm_hs(&self, gamma: f64) -> f64 {
        norm_hs_coeffs(self.basis.lambdas(), &self.coeffs, gamma)
    }

    pub fn map_modes<F: Fn(usize, f64) -> f64>(&self, f: F) -> SpectralField {
        let coeffs = self.coeffs.iter().enumerate().map(|(j, &c)| f(j, c)).collect();
        SpectralField { basis: self.basis.clone(), coeffs }
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        self.map_modes(|_, c| a * c)
    }

    /// a·self + b·other.
    pub fn combine(&self, a: f64, other: &SpectralField, b: f64) -> SpectralField {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + b * y).collect();
        SpectralField { basis: self.basis.clone(), coeffs }
    }

    /// Point values on the basis collocation grid.
    pub fn to_samples(&self) -> Result<Vec<f64>> {
        self.basis.synthesize(&self.coeffs)
    }

    /// Project point values on the collocation grid onto the basis.
    pub fn from_samples(samples: &[f64], basis: Arc<SpectralBasis>) -> Result<Self> {
        let coeffs = basis.analyze(samples)?;
        SpectralField::new(basis, coeffs)
    }
}

/// ℍ^γ norm of a field; free-function form.
pub fn norm_hs(field: &SpectralField, gamma: f64) -> f64 {
    field.norm_hs(gamma)
}

/// The four embedding families whose arithmetic side conditions are checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Embedding {
    /// W^{σ,p} ↪ W^{γ,q}: 1 ≤ p, q < ∞, 0 ≤ γ ≤ σ, σ - γ ≥ N/p - N/q.
    Sobolev { sigma: f64, gamma: f64, p: f64, q: f64, n: f64 },
    /// W^{σ₁,2} ↪ L^{q₁}: 0 ≤ σ₁ < N/2, 1 ≤ q₁ ≤ 2N/(N - 2σ₁).
    IntoLebesgue { sigma1: f64, q1: f64, n: f64 },
    /// L^{q₂} ↪ W^{σ₂,2}: -N/2 < σ₂ ≤ 0, q₂ ≥ 2N/(N - 2σ₂).
    FromLebesgue { sigma2: f64, q2: f64, n: f64 },
    /// ℍ^s ↪ W^{2s,2}: s ≥ 0.
    HilbertScale { s: f64 },
}

impl Embedding {
    pub fn label(&self) -> &'static str {
        match self {
            Embedding::Sobolev { .. } => "W^{sigma,p} -> W^{gamma,q}",
            Embedding::IntoLebesgue { .. } => "W^{sigma1,2} -> L^{q1}",
            Embedding::FromLebesgue { .. } => "L^{q2} -> W^{sigma2,2}",
            Embedding::HilbertScale { .. } => "H^s -> W^{2s,2}",
        }
    }
}

/// One failed inequality: a stable identifier and a readable message.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub id: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.id, self.message)
    }
}

/// Outcome of an arithmetic check; `violations` lists every failed
/// inequality.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.id.as_str()).collect()
    }

    pub fn require(&mut self, ok: bool, id: &str, message: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(Violation { id: id.to_string(), message: message() });
        }
    }

    /// Append the violations of a sub-check, prefixing their ids.
    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for v in other.violations {
            self.violations.push(Violation { id: format!("{prefix}.{}", v.id), message: v.message });
        }
    }
}

const CMP_TOL: f64 = 1e-12;

pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b + CMP_TOL * (1.0 + b.abs())
}

pub(crate) fn lt(a: f64, b: f64) -> bool {
    a < b - CMP_TOL * (1.0 + b.abs())
}

/// Check the side conditions of an embedding.
pub fn embedding_validator(e: Embedding) -> CheckReport {
    let mut r = CheckReport::default();
    match e {
        Embedding::Sobolev { sigma, gamma, p, q, n } => {
            r.require(le(1.0, p) && p.is_finite(), "p-range", || format!("1 <= p < inf (p = {p})"));
            r.require(le(1.0, q) && q.is_finite(), "q-range", || format!("1 <= q < inf (q = {q})"));
            r.require(le(0.0, gamma), "gamma-nonneg", || format!("gamma >= 0 (gamma = {gamma})"));
            r.require(le(gamma, sigma), "gamma-le-sigma", || format!("gamma <= sigma ({gamma} > {sigma})"));
            let need = n / p - n / q;
            r.require(le(need, sigma - gamma), "sobolev-gap", || {
                format!("sigma - gamma >= N/p - N/q ({} < {need})", sigma - gamma)
            });
        }
        Embedding::IntoLebesgue { sigma1, q1, n } => {
            r.require(le(0.0, sigma1), "sigma1-nonneg", || format!("sigma1 >= 0 (sigma1 = {sigma1})"));
            r.require(lt(sigma1, n / 2.0), "sigma1-below-half-dim", || format!("sigma1 < N/2 ({sigma1} >= {})", n / 2.0));
            r.require(le(1.0, q1), "q1-ge-one", || format!("q1 >= 1 (q1 = {q1})"));
            if lt(sigma1, n / 2.0) {
                let cap = 2.0 * n / (n - 2.0 * sigma1);
                r.require(le(q1, cap), "q1-cap", || format!("q1 <= 2N/(N - 2 sigma1) ({q1} > {cap})"));
            }
        }
        Embedding::FromLebesgue { sigma2, q2, n } => {
            r.require(lt(-n / 2.0, sigma2), "sigma2-above-minus-half-dim", || {
                format!("sigma2 > -N/2 ({sigma2} <= {})", -n / 2.0)
            });
            r.require(le(sigma2, 0.0), "sigma2-nonpos", || format!("sigma2 <= 0 (sigma2 = {sigma2})"));
            let floor = 2.0 * n / (n - 2.0 * sigma2);
            r.require(le(floor, q2), "q2-floor", || format!("q2 >= 2N/(N - 2 sigma2) ({q2} < {floor})"));
        }
        Embedding::HilbertScale { s } => {
            r.require(le(0.0, s), "s-nonneg", || format!("s >= 0 (s = {s})"));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_eigenvalues() {
        let b = SpectralBasis::dirichlet_1d(PI, 3).unwrap();
        for (l, e) in b.lambdas().iter().zip([1.0, 4.0, 9.0]) {
            assert!((l - e).abs() < 1e-13);
        }
        let b = SpectralBasis::dirichlet_1d(1.0, 2).unwrap();
        assert!((b.lambdas()[0] - PI * PI).abs() < 1e-13);
        assert!((b.lambdas()[1] - 4.0 * PI * PI).abs() < 1e-12);
        let b = SpectralBasis::dirichlet_1d(2.0, 1).unwrap();
        assert!((b.eval_mode(0, &[1.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_eigenvalues_and_tie_break() {
        let b = SpectralBasis::dirichlet_2d(PI, PI, 4).unwrap();
        let l: Vec<f64> = b.lambdas().iter().map(|x| x.round()).collect();
        assert_eq!(l, vec![2.0, 5.0, 5.0, 8.0]);
        assert_eq!(b.modes()[1].index, (1, 2));
        assert_eq!(b.modes()[2].index, (2, 1));
        let b = SpectralBasis::dirichlet_2d(PI, PI, 1).unwrap();
        assert!((b.eval_mode(0, &[PI / 2.0, PI / 2.0]) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn rectangle_ordering() {
        let b = SpectralBasis::dirichlet_2d(1.0, 2.0, 2).unwrap();
        assert_eq!(b.modes()[0].index, (1, 1));
        assert_eq!(b.modes()[1].index, (1, 2));
        assert!(b.lambdas()[0] < b.lambdas()[1]);
    }

    #[test]
    fn norms() {
        let b = Arc::new(SpectralBasis::dirichlet_1d(PI, 3).unwrap());
        let f = SpectralField::new(b.clone(), vec![1.0, 1.0, 1.0]).unwrap();
        assert!((f.norm_hs(0.5) - 14f64.sqrt()).abs() < 1e-13);
        assert!((f.norm_hs(0.0) - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(SpectralField::zeros(b).norm_hs(-0.7), 0.0);
    }

    #[test]
    fn field_rejects_bad_input() {
        let b = Arc::new(SpectralBasis::dirichlet_1d(PI, 3).unwrap());
        assert!(SpectralField::new(b.clone(), vec![1.0, 2.0]).is_err());
        assert!(SpectralField::new(b, vec![1.0, f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn single_mode_round_trip() {
        let b = Arc::new(SpectralBasis::dirichlet_1d(PI, 8).unwrap());
        let f = SpectralField::single_mode(b.clone(), 1).unwrap();
        let s = f.to_samples().unwrap();
        let g = SpectralField::from_samples(&s, b).unwrap();
        for (x, y) in f.coeffs().iter().zip(g.coeffs()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn dealias_flag() {
        let b = SpectralBasis::dirichlet_1d(PI, 16).unwrap();
        assert!(matches!(b.clone().with_collocation(20, true), Err(Error::Alias { .. })));
        assert!(b.clone().with_collocation(20, false).is_ok());
        assert!(matches!(b.with_collocation(10, false), Err(Error::Alias { .. })));
    }

    #[test]
    fn embedding_examples() {
        assert!(embedding_validator(Embedding::IntoLebesgue { sigma1: 1.0, q1: 4.0, n: 4.0 }).pass());
        let r = embedding_validator(Embedding::FromLebesgue { sigma2: 0.5, q2: 10.0, n: 3.0 });
        assert!(!r.pass());
        assert_eq!(r.ids(), vec!["sigma2-nonpos"]);
        assert!(embedding_validator(Embedding::Sobolev { sigma: 1.0, gamma: 0.0, p: 2.0, q: 2.0, n: 3.0 }).pass());
        assert!(!embedding_validator(Embedding::HilbertScale { s: -0.1 }).pass());
    }

    #[test]
    fn user_spectrum_projection() {
        // sample an interval basis and feed it back as a user table
        let b = SpectralBasis::dirichlet_1d(PI, 4).unwrap();
        let m = b.collocation_points().unwrap();
        let mut values = Vec::new();
        for i in 0..m {
            let mut e = vec![0.0; 4];
            for (k, ek) in e.iter_mut().enumerate() {
                *ek = b.eval_mode(k, &b.grid().unwrap()[i]);
            }
            values.extend(e);
        }
        let u = Arc::new(
            SpectralBasis::from_spectrum(b.lambdas().to_vec(), Some((m, values, b.weights().unwrap().to_vec()))).unwrap(),
        );
        let f = SpectralField::new(u.clone(), vec![0.3, -1.0, 2.0, 0.5]).unwrap();
        let g = SpectralField::from_samples(&f.to_samples().unwrap(), u).unwrap();
        for (x, y) in f.coeffs().iter().zip(g.coeffs()) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
