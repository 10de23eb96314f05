//! One-dimensional quadrature rules.

use nalgebra::{DMatrix, SymmetricEigen};

/// Gauss–Jacobi nodes and weights for `∫_{-1}^{1} (1-x)^α (1+x)^β f(x) dx`
/// via the Golub–Welsch eigenvalue method. Nodes come back ascending.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && alpha > -1.0 && beta > -1.0);
    let ab = alpha + beta;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let k = i as f64;
        j[(i, i)] = if i == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
        };
        if i + 1 < n {
            let k = k + 1.0;
            let t = 2.0 * k + ab;
            let b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
            j[(i, i + 1)] = b2.sqrt();
            j[(i + 1, i)] = b2.sqrt();
        }
    }
    let mu0 = 2f64.powf(ab + 1.0)
        * (statrs::function::gamma::ln_gamma(alpha + 1.0) + statrs::function::gamma::ln_gamma(beta + 1.0)
            - statrs::function::gamma::ln_gamma(ab + 2.0))
        .exp();
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Rule for `∫_0^1 t^a f(t) dt`.
pub fn gauss_jacobi_unit(n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(n, 0.0, a);
    let scale = 2f64.powf(-(a + 1.0));
    (
        x.into_iter().map(|x| 0.5 * (1.0 + x)).collect(),
        w.into_iter().map(|w| w * scale).collect(),
    )
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_jacobi(n, 0.0, 0.0)
}

/// `∫_lo^hi f` with 64-point Gauss–Legendre.
pub fn gauss_legendre_64(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    thread_local! {
        static RULE: (Vec<f64>, Vec<f64>) = gauss_legendre(64);
    }
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    RULE.with(|(x, w)| half * x.iter().zip(w).map(|(x, w)| w * f(mid + half * x)).sum::<f64>())
}

/// Tanh-sinh (double exponential) quadrature of `f` over `[lo, hi]`.
///
/// Tolerates integrable endpoint singularities; `f` is never evaluated at
/// the endpoints themselves. Halves the step until two successive levels
/// agree to `tol` relative.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    const T_MAX: f64 = 4.0;
    let half = 0.5 * (hi - lo);
    // t and -t land symmetrically near hi and lo; d = 1 - tanh(u) without cancellation
    let pair = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let d = 2.0 / ((2.0 * u).exp() + 1.0);
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if d == 0.0 || w == 0.0 {
            return 0.0;
        }
        w * (f(hi - half * d) + f(lo + half * d))
    };
    let mut h = 1.0;
    let mut sum = FRAC_PI_2 * f(lo + half);
    let mut t = h;
    while t <= T_MAX {
        sum += pair(t);
        t += h;
    }
    let mut estimate = half * h * sum;
    for _ in 0..10 {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += pair(t);
            t += 2.0 * h;
        }
        let next = half * h * sum;
        if (next - estimate).abs() <= tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let v = gauss_legendre_64(|x| x.powi(10), 0.0, 2.0);
        assert!((v - 2f64.powi(11) / 11.0).abs() < 1e-11);
        let (_, w) = gauss_legendre(64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_unit_moments() {
        for a in [-0.5, 0.0, 1.0, 2.5] {
            let (x, w) = gauss_jacobi_unit(20, a);
            for p in 0..8 {
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
                let want = 1.0 / (a + p as f64 + 1.0);
                assert!((got - want).abs() < 1e-13 * want.max(1.0), "a={a} p={p}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let v = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 0.25, 1e-14);
        assert!((v - 1.0).abs() < 1e-12, "{v}");
        let v = tanh_sinh(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-14);
        assert!((v - 2.0).abs() < 1e-13);
    }
}
