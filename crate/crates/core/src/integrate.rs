//! Scalar quadrature used by the Mittag-Leffler integral branch and by
//! test oracles: adaptive Gauss-Legendre bisection and tanh-sinh.

use std::f64::consts::PI;

/// Result of a numerical integration: value and an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn apply<F: FnMut(f64) -> f64>(&self, f: &mut F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive bisection with a 15-point Gauss-Legendre panel; a panel is
/// accepted when it agrees with the sum of its two halves.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Integral {
    let gl = GaussLegendre::new(15);
    let whole = gl.apply(&mut f, a, b);
    let mut total_err = 0.0;
    let value = recurse(&gl, &mut f, a, b, whole, abs_tol, rel_tol, 0, &mut total_err);
    Integral { value, error: total_err }
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: FnMut(f64) -> f64>(
    gl: &GaussLegendre,
    f: &mut F,
    a: f64,
    b: f64,
    whole: f64,
    abs_tol: f64,
    rel_tol: f64,
    depth: usize,
    err: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl.apply(f, a, m);
    let right = gl.apply(f, m, b);
    let sum = left + right;
    let diff = (sum - whole).abs();
    if diff <= abs_tol.max(rel_tol * sum.abs()) || depth >= 60 || m <= a || m >= b {
        *err += diff;
        return sum;
    }
    let sub = abs_tol * std::f64::consts::FRAC_1_SQRT_2;
    recurse(gl, f, a, m, left, sub, rel_tol, depth + 1, err) + recurse(gl, f, m, b, right, sub, rel_tol, depth + 1, err)
}

/// Tanh-sinh (double exponential) rule on [a, b]. The integrand receives the
/// abscissa together with its distances to both endpoints, so endpoint
/// singularities can be evaluated without cancellation.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Integral {
    const U_MAX: f64 = 4.5;
    const MAX_LEVEL: usize = 8;
    let width = b - a;
    let mut eval = |u: f64| -> f64 {
        let s = 0.5 * PI * u.sinh();
        // logistic split: x - a = width * sig(2s), b - x = width * sig(-2s)
        let e = (-2.0 * s.abs()).exp();
        let small = width * e / (1.0 + e);
        let large = width / (1.0 + e);
        let (dl, dr) = if s < 0.0 { (small, large) } else { (large, small) };
        let w = width * PI * u.cosh() * e / ((1.0 + e) * (1.0 + e));
        if w == 0.0 || dl == 0.0 || dr == 0.0 {
            return 0.0;
        }
        let x = if s < 0.0 { a + dl } else { b - dr };
        w * f(x, dl, dr)
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= U_MAX {
        let u = k as f64 * h;
        sum += eval(u) + eval(-u);
        k += 1;
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= U_MAX {
            let u = k as f64 * h;
            sum += eval(u) + eval(-u);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).abs();
        estimate = next;
        if error <= rel_tol * estimate.abs() {
            // the level difference overstates the error of the finer level
            error = error.min(error * error / estimate.abs().max(f64::MIN_POSITIVE)) + 4.0 * f64::EPSILON * estimate.abs();
            break;
        }
    }
    Integral { value: estimate, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(7);
        let v = gl.apply(&mut |x: f64| x.powi(12) - 3.0 * x.powi(5), -1.0, 2.0);
        let exact = (2f64.powi(13) + 1.0) / 13.0 - 3.0 * (2f64.powi(6) - 1.0) / 6.0;
        assert!((v - exact).abs() < 1e-12 * exact.abs());
    }

    #[test]
    fn adaptive_handles_weak_singularity() {
        let r = adaptive(|x: f64| x.powf(-0.25), 0.0, 1.0, 1e-11, 1e-12);
        assert!((r.value - 4.0 / 3.0).abs() < 1e-9, "{:?}", r);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        let r = tanh_sinh(|_, dl, dr| dl.powf(-0.5) * dr.powf(-0.5), 0.0, 1.0, 1e-14);
        assert!((r.value - PI).abs() < 1e-13, "{:?}", r);
        let r = tanh_sinh(|x, _, _| (-x).exp(), 0.0, 50.0, 1e-14);
        assert!((r.value - (1.0 - (-50f64).exp())).abs() < 1e-14);
    }
}
