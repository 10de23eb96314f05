//! Integration of product kernels over angle boxes.

use std::collections::HashSet;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::RangeTemplate;
use crate::kernels::ProductKernel;
use crate::numerics::quadrature::gauss_legendre_64;

/// Smallest sample count accepted by [`integrate_monte_carlo`].
pub const MIN_MC_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationMethod {
    Factorized,
    MonteCarlo,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub method: IntegrationMethod,
    pub n_evals: u64,
    pub seed: Option<u64>,
}

/// Checks that factor slots are distinct and present in `ranges`.
fn check_layout(kernel: &ProductKernel, ranges: &RangeTemplate) -> Result<()> {
    let mut seen = HashSet::new();
    for f in &kernel.factors {
        if !seen.insert(f.angle_index) {
            return Err(Error::OverlappingFactors(f.angle_index));
        }
        if ranges.range(f.angle_index).is_none() {
            return Err(Error::MissingRange(f.angle_index));
        }
    }
    Ok(())
}

/// Exact integral `ξ · ∏ ∫f_i · ∏ (widths of slots without a factor)`.
///
/// `ξ` is taken from the kernel; bind it with
/// [`ProductKernel::with_convention`] before integrating over quotient ranges.
pub fn integrate_factorized(kernel: &ProductKernel, ranges: &RangeTemplate) -> Result<IntegrationResult> {
    check_layout(kernel, ranges)?;
    let mut value = kernel.xi;
    let mut terms = 1;
    for r in &ranges.ranges {
        value *= match kernel.factor_at(r.index) {
            Some(f) => f.integral(r.lo, r.hi),
            None => r.width(),
        };
        terms += 1;
    }
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("factorized integral evaluated to {value}")));
    }
    Ok(IntegrationResult {
        value,
        abs_error_estimate: 4.0 * f64::EPSILON * terms as f64 * value.abs(),
        method: IntegrationMethod::Factorized,
        n_evals: kernel.factors.len() as u64,
        seed: None,
    })
}

/// Like [`integrate_factorized`] but with 64-point Gauss–Legendre on every
/// factor instead of antiderivatives.
pub fn integrate_separable(kernel: &ProductKernel, ranges: &RangeTemplate) -> Result<IntegrationResult> {
    check_layout(kernel, ranges)?;
    let mut value = kernel.xi;
    for r in &ranges.ranges {
        value *= match kernel.factor_at(r.index) {
            Some(f) => gauss_legendre_64(|a| f.eval(a), r.lo, r.hi),
            None => r.width(),
        };
    }
    Ok(IntegrationResult {
        value,
        abs_error_estimate: 1e-13 * value.abs(),
        method: IntegrationMethod::Quadrature,
        n_evals: 64 * kernel.factors.len() as u64,
        seed: None,
    })
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Plain Monte Carlo estimate of `ξ ∫ kernel` over the box of `ranges`.
///
/// Samples are split into `workers` chunks; chunk `c` draws from a
/// ChaCha8 stream `c` keyed by `seed`, and chunk statistics are merged in
/// chunk order, so the result depends only on `(seed, n_samples, workers)`.
pub fn integrate_monte_carlo(
    kernel: &ProductKernel,
    ranges: &RangeTemplate,
    n_samples: usize,
    seed: u64,
    workers: usize,
) -> Result<IntegrationResult> {
    check_layout(kernel, ranges)?;
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::Constraint(format!(
            "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {n_samples}"
        )));
    }
    let workers = workers.max(1);
    let width = ranges.ranges.iter().map(|r| r.index).max().unwrap_or(0).max(kernel.dims);
    let chunk = |c: usize| -> Moments {
        let count = n_samples / workers + usize::from(c < n_samples % workers);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let mut point = vec![0.0; width];
        let mut m = Moments::default();
        for _ in 0..count {
            for r in &ranges.ranges {
                point[r.index - 1] = r.lo + r.width() * rng.random::<f64>();
            }
            m.push(kernel.eval(&point));
        }
        m
    };
    let parts: Vec<Moments> = (0..workers).into_par_iter().map(chunk).collect();
    let m = parts.into_iter().fold(Moments::default(), Moments::merge);
    let volume = ranges.box_volume();
    let var = if m.n > 1.0 { m.m2 / (m.n - 1.0) } else { 0.0 };
    Ok(IntegrationResult {
        value: volume * m.mean,
        abs_error_estimate: volume * (var / m.n).sqrt(),
        method: IntegrationMethod::MonteCarlo,
        n_evals: n_samples as u64,
        seed: Some(seed),
    })
}

/// `𝕍(k, n+1)`: 1 at `k = 2`, else `1/(2(k-1))`, for `2 ≤ k ≤ n+1`.
pub fn v_table(k: usize, n: usize) -> Result<BigRational> {
    if k < 2 || k > n + 1 {
        return Err(Error::Constraint(format!("V(k, N+1) needs 2 <= k <= N+1, got k = {k}, N = {n}")));
    }
    Ok(if k == 2 {
        BigRational::from_integer(BigInt::from(1))
    } else {
        BigRational::new(BigInt::from(1), BigInt::from(2 * (k - 1)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{range_catalog, RangeContext, RangeKind};
    use crate::kernels::{haar_kernel_su, pure_state_kernel, FactorForm, KernelFactor};
    use std::f64::consts::PI;

    fn cpn(n: usize) -> RangeTemplate {
        range_catalog(n, RangeContext::CPn, RangeKind::Covering).unwrap()
    }

    #[test]
    fn cp3_volume() {
        let r = integrate_factorized(&pure_state_kernel(3).unwrap(), &cpn(3)).unwrap();
        assert!((r.value - PI.powi(3) / 6.0).abs() < 1e-14);
        assert!(r.abs_error_estimate <= 1e-12 * r.value);
    }

    #[test]
    fn su2_volume() {
        let t = range_catalog(2, RangeContext::SuFull, RangeKind::Covering).unwrap();
        let r = integrate_factorized(&haar_kernel_su(2).unwrap(), &t).unwrap();
        assert!((r.value - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn overlapping_factors_rejected() {
        let mut k = pure_state_kernel(2).unwrap();
        k.factors.push(KernelFactor::new(2, FactorForm::CosSinPow(1)));
        assert_eq!(integrate_factorized(&k, &cpn(2)), Err(Error::OverlappingFactors(2)));
        let k = pure_state_kernel(3).unwrap();
        assert_eq!(integrate_factorized(&k, &cpn(2)), Err(Error::MissingRange(6)));
    }

    #[test]
    fn quadrature_agrees_with_antiderivatives() {
        for n in 2..=5 {
            let t = range_catalog(n, RangeContext::SuFull, RangeKind::Covering).unwrap();
            let k = haar_kernel_su(n).unwrap();
            let a = integrate_factorized(&k, &t).unwrap().value;
            let b = integrate_separable(&k, &t).unwrap().value;
            assert!((a - b).abs() < 1e-12 * a);
        }
    }

    #[test]
    fn constant_kernel_is_exact_box_volume() {
        let mut k = pure_state_kernel(2).unwrap();
        k.factors.clear();
        let t = cpn(2);
        let r = integrate_monte_carlo(&k, &t, 20_000, 9, 3).unwrap();
        assert!((r.value - t.box_volume()).abs() < 1e-12 * r.value);
        assert_eq!(r.abs_error_estimate, 0.0);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let k = pure_state_kernel(3).unwrap();
        let a = integrate_monte_carlo(&k, &cpn(3), 20_000, 42, 4).unwrap();
        let b = integrate_monte_carlo(&k, &cpn(3), 20_000, 42, 4).unwrap();
        assert_eq!(a, b);
        assert!((a.value - PI.powi(3) / 6.0).abs() < 5.0 * a.abs_error_estimate);
        assert!(integrate_monte_carlo(&k, &cpn(3), 9_999, 42, 1).is_err());
    }

    #[test]
    fn v_table_values() {
        assert_eq!(v_table(2, 3).unwrap(), BigRational::from_integer(1.into()));
        assert_eq!(v_table(4, 3).unwrap(), BigRational::new(1.into(), 6.into()));
        let prod = (2..=5).map(|k| v_table(k, 4).unwrap()).fold(BigRational::from_integer(1.into()), |a, b| a * b);
        assert_eq!(prod, BigRational::new(1.into(), 192.into()));
        assert!(v_table(6, 4).is_err());
    }
}
