//! Graded time grids and product-rectangle convolution with exact
//! Mittag-Leffler kernel moments.

use crate::error::{Error, Result};
use crate::gamma::{beta, ln_beta};
use crate::integrate::adaptive;
use crate::operators::TerminalSetup;
use crate::spectral_basis::SpectralField;

/// Nodes t_n = T (n/N)^γ, n = 0..N.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    n: usize,
    gamma_mesh: f64,
    nodes: Vec<f64>,
}

impl TimeGrid {
    pub fn new(t_final: f64, n: usize, gamma_mesh: f64) -> Result<Self> {
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::Grid(format!("T must be positive, got {t_final}")));
        }
        if n < 1 {
            return Err(Error::Grid("need at least one interval".into()));
        }
        if !(gamma_mesh >= 1.0 && gamma_mesh.is_finite()) {
            return Err(Error::Grid(format!("grading exponent must be ≥ 1, got {gamma_mesh}")));
        }
        let nodes = (0..=n).map(|i| if i == n { t_final } else { t_final * (i as f64 / n as f64).powf(gamma_mesh) }).collect();
        Ok(TimeGrid { t_final, n, gamma_mesh, nodes })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Number of intervals N.
    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn gamma_mesh(&self) -> f64 {
        self.gamma_mesh
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, n: usize) -> f64 {
        self.nodes[n]
    }

    /// Same grading with `factor` times as many intervals; every node of
    /// `self` is a node of the result (index multiplied by `factor`).
    pub fn refined(&self, factor: usize) -> Result<TimeGrid> {
        TimeGrid::new(self.t_final, self.n * factor.max(1), self.gamma_mesh)
    }

    /// Index of a node equal to `t` (to a relative 1e-14).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-14 * self.t_final;
        let i = self.nodes.partition_point(|&x| x < t - tol);
        (i < self.nodes.len() && (self.nodes[i] - t).abs() <= tol).then_some(i)
    }
}

/// ∫_a^b (b-r)^{z1-1} (r-a)^{z2-1} dr = (b-a)^{z1+z2-1} B(z1, z2).
pub fn beta_singular_integral(z1: f64, z2: f64, a: f64, b: f64) -> Result<f64> {
    if !(z1 > 0.0 && z2 > 0.0) {
        return Err(Error::Domain(format!("exponents must be positive, got {z1}, {z2}")));
    }
    if !(a >= 0.0 && b > a && b.is_finite()) {
        return Err(Error::Domain(format!("need 0 ≤ a < b, got a={a}, b={b}")));
    }
    let len = b - a;
    let p = z1 + z2 - 1.0;
    let direct = len.powf(p) * beta(z1, z2);
    if direct.is_finite() && direct > 0.0 {
        Ok(direct)
    } else {
        Ok((p * len.ln() + ln_beta(z1, z2)).exp())
    }
}

/// Product-rectangle weights W_{n,m,j} = F_j(t_n - t_m) - F_j(t_n - t_{m+1})
/// for 0 ≤ m < n ≤ N, where F_j is an antiderivative of the kernel of mode
/// j. Stored row by row, modes innermost.
#[derive(Debug, Clone)]
pub struct KernelTable {
    n: usize,
    modes: usize,
    weights: Vec<f64>,
}

impl KernelTable {
    /// Build from an antiderivative `f(j, x)` with f(j, 0) = 0.
    pub fn from_antiderivative<F: Fn(usize, f64) -> f64>(grid: &TimeGrid, modes: usize, f: F) -> Self {
        let n = grid.intervals();
        let t = grid.nodes();
        let mut weights = vec![0.0; n * (n + 1) / 2 * modes];
        let mut row_f = vec![0.0; (n + 1) * modes];
        for i in 1..=n {
            // row_f[m] = F(t_i - t_m); the last entry F(0) = 0
            for m in 0..=i {
                for j in 0..modes {
                    row_f[m * modes + j] = if m == i { 0.0 } else { f(j, t[i] - t[m]) };
                }
            }
            let base = Self::row_offset(i) * modes;
            for m in 0..i {
                for j in 0..modes {
                    weights[base + m * modes + j] = row_f[m * modes + j] - row_f[(m + 1) * modes + j];
                }
            }
        }
        KernelTable { n, modes, weights }
    }

    /// Weights for the P kernel t^{α-1}E_{α,α}(-λ_j t^α) of a setup.
    pub fn p_kernel(setup: &TerminalSetup, grid: &TimeGrid) -> Self {
        let lambdas = setup.lambdas().to_vec();
        Self::from_antiderivative(grid, lambdas.len(), |j, x| setup.p_antiderivative(lambdas[j], x))
    }

    /// Weights for the kernel t^{α-2}E_{α,α-1}(-λ_j t^α), whose
    /// antiderivative is the P kernel itself.
    pub fn d2_kernel(setup: &TerminalSetup, grid: &TimeGrid) -> Self {
        let lambdas = setup.lambdas().to_vec();
        Self::from_antiderivative(grid, lambdas.len(), |j, x| setup.p_multiplier(lambdas[j], x))
    }

    fn row_offset(i: usize) -> usize {
        i * (i - 1) / 2
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// W_{n,m,j}.
    pub fn weight(&self, n: usize, m: usize, j: usize) -> f64 {
        assert!(m < n && n <= self.n && j < self.modes);
        self.weights[(Self::row_offset(n) + m) * self.modes + j]
    }

    /// Σ_{m<n} W_{n,m,j} g_m[j], with the density given as one coefficient
    /// slice per node (only nodes 0..n are read).
    pub fn convolve_row(&self, n: usize, density: &[&[f64]]) -> Vec<f64> {
        let mut acc = vec![0.0; self.modes];
        if n == 0 {
            return acc;
        }
        let base = Self::row_offset(n) * self.modes;
        for (m, g) in density.iter().enumerate().take(n) {
            let w = &self.weights[base + m * self.modes..base + (m + 1) * self.modes];
            for ((a, wj), gj) in acc.iter_mut().zip(w).zip(g.iter()) {
                *a += wj * gj;
            }
        }
        acc
    }
}

fn check_density(density: &[SpectralField], grid: &TimeGrid, upto: usize) -> Result<()> {
    if upto > grid.intervals() {
        return Err(Error::Grid(format!("node {upto} outside grid of {} intervals", grid.intervals())));
    }
    if density.len() < upto {
        return Err(Error::Grid(format!("density given at {} nodes, need {upto}", density.len())));
    }
    Ok(())
}

/// ∫_0^{t_n} P(t_n - r) g(r) dr with g frozen at the left node of each
/// interval and the kernel integrated exactly per mode. `t_target` must be a
/// grid node.
pub fn convolve_p(setup: &TerminalSetup, grid: &TimeGrid, density: &[SpectralField], t_target: f64) -> Result<SpectralField> {
    let n = grid.index_of(t_target).ok_or_else(|| Error::Grid(format!("t = {t_target} is not a grid node")))?;
    check_density(density, grid, n)?;
    let lambdas = setup.lambdas();
    let t = grid.nodes();
    let mut acc = vec![0.0; setup.len()];
    for (m, g) in density.iter().enumerate().take(n) {
        if g.len() != acc.len() {
            return Err(Error::Input("density field has wrong number of modes".into()));
        }
        for (j, a) in acc.iter_mut().enumerate() {
            let w = setup.p_antiderivative(lambdas[j], t[n] - t[m]) - setup.p_antiderivative(lambdas[j], t[n] - t[m + 1]);
            *a += w * g.coeffs()[j];
        }
    }
    Ok(SpectralField::from_raw(setup.basis().clone(), acc))
}

/// B(t, T) applied to the full-interval convolution ∫_0^T P(T - r) g(r) dr.
pub fn convolve_bp(setup: &TerminalSetup, grid: &TimeGrid, density: &[SpectralField], t: f64) -> Result<SpectralField> {
    let full = convolve_p(setup, grid, density, grid.t_final())?;
    setup.apply_b(t, &full)
}

/// Outcome of [`limit_check_ap2`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    /// Closed form ∫_0^t (t-r)^{a-1} r^{b-1} dr.
    pub limit: f64,
    /// |I(h) - limit| for each h.
    pub differences: Vec<f64>,
    pub monotone: bool,
}

/// Numerical check that ∫_0^t (t+h-r)^{a-1} r^{b-1} dr tends to the Beta
/// closed form as h decreases. Each integral uses the substitution r = t s^{1/b}
/// to remove the endpoint singularity at 0; the remaining factor is smooth
/// for h > 0 and is split at a geometric point cloud near s = 1.
pub fn limit_check_ap2(a: f64, b: f64, t: f64, hs: &[f64]) -> Result<LimitReport> {
    if !(a > 0.0 && b > 0.0 && t > 0.0) {
        return Err(Error::Domain(format!("need a, b, t > 0, got {a}, {b}, {t}")));
    }
    if hs.iter().any(|&h| !(h >= 0.0)) {
        return Err(Error::Domain("h must be non-negative".into()));
    }
    let limit = beta_singular_integral(a, b, 0.0, t)?;
    let mut differences = Vec::with_capacity(hs.len());
    for &h in hs {
        let v = if h == 0.0 { limit } else { shifted_beta(a, b, t, h) };
        differences.push((v - limit).abs());
    }
    let monotone = differences.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-15);
    Ok(LimitReport { limit, differences, monotone })
}

fn shifted_beta(a: f64, b: f64, t: f64, h: f64) -> f64 {
    // r = t u^{1/b}: dr = (t/b) u^{1/b - 1} du and r^{b-1} dr = (t^b/b) du
    let scale = t.powf(b) / b;
    let g = |u: f64| (t + h - t * u.powf(1.0 / b)).powf(a - 1.0);
    // near u = 1 the factor behaves like (h + t(1-u)/b)^{a-1}; split at
    // distances h·2^k from the endpoint
    let mut cuts = vec![1.0];
    let mut d = h / t;
    while d < 0.5 {
        cuts.push(1.0 - d);
        d *= 2.0;
    }
    cuts.push(0.0);
    cuts.reverse();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            total += adaptive(g, w[0], w[1], 1e-16, 1e-13).value;
        }
    }
    scale * total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn beta_integral_examples() {
        assert!((beta_singular_integral(1.0, 1.0, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((beta_singular_integral(0.5, 0.5, 0.0, 1.0).unwrap() - PI).abs() < 1e-14);
        assert!((beta_singular_integral(2.0, 1.0, 1.0, 3.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(beta_singular_integral(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(beta_singular_integral(1.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn grid_shape() {
        let g = TimeGrid::new(2.0, 8, 2.0).unwrap();
        assert_eq!(g.nodes()[0], 0.0);
        assert_eq!(g.nodes()[8], 2.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!((g.node(4) - 0.5).abs() < 1e-15);
        let r = g.refined(4).unwrap();
        for i in 0..=8 {
            assert_eq!(r.node(4 * i), g.node(i));
        }
        assert!(TimeGrid::new(1.0, 8, 0.5).is_err());
        assert_eq!(g.index_of(0.5), Some(4));
        assert_eq!(g.index_of(0.6), None);
    }

    #[test]
    fn ap2_trivial_and_limit() {
        let r = limit_check_ap2(1.0, 1.0, 1.0, &[0.5, 0.1, 0.0]).unwrap();
        assert!(r.differences.iter().all(|d| *d < 1e-12));
        let hs: Vec<f64> = (1..=20).map(|k| 0.5f64.powi(k)).collect();
        let r = limit_check_ap2(0.5, 0.7, 1.0, &hs).unwrap();
        assert!(r.monotone, "{:?}", r.differences);
        assert!(r.differences.last().unwrap() < &r.differences[0]);
    }
}
