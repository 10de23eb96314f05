//! Fubini–Study volume density of state-vector charts by finite differences.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{cpn_state, range_catalog, RangeContext, RangeKind, RangeTemplate};
use crate::kernels::{hurwitz_kernel, pure_state_kernel, ProductKernel};

pub const DEFAULT_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// Nested spherical coordinates `(θ₁..θ_{n-1}, φ₁..φ_{n-1})`.
    Hurwitz,
    /// The last column of the Euler block, see [`cpn_state`].
    Euler,
}

/// A chart of unit vectors in ℂⁿ with `2(n-1)` real coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateVectorChart {
    pub n: usize,
    pub chart: ChartKind,
}

impl StateVectorChart {
    pub fn new(n: usize, chart: ChartKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::dim(n, "state-vector charts need n >= 2"));
        }
        Ok(Self { n, chart })
    }

    pub fn coords(&self) -> usize {
        2 * (self.n - 1)
    }

    /// Covering coordinate ranges.
    pub fn ranges(&self) -> RangeTemplate {
        match self.chart {
            ChartKind::Hurwitz => range_catalog(self.n, RangeContext::Hurwitz, RangeKind::Covering),
            ChartKind::Euler => range_catalog(self.n - 1, RangeContext::CPn, RangeKind::Covering),
        }
        .expect("n >= 2 checked at construction")
    }

    /// The analytic volume density of this chart.
    pub fn kernel(&self) -> ProductKernel {
        match self.chart {
            ChartKind::Hurwitz => hurwitz_kernel(self.n),
            ChartKind::Euler => pure_state_kernel(self.n - 1),
        }
        .expect("n >= 2 checked at construction")
    }

    pub fn state(&self, point: &[f64]) -> Result<Vec<Complex64>> {
        if point.len() != self.coords() {
            return Err(Error::AngleCount {
                expected: self.coords(),
                got: point.len(),
            });
        }
        match self.chart {
            ChartKind::Hurwitz => Ok(hurwitz_state(point)),
            ChartKind::Euler => cpn_state(point),
        }
    }
}

/// `Ψ(θ, φ)` with `Ψ₁ = cos θ_{n-1}`,
/// `Ψ_j = sin θ_{n-1}⋯sin θ_{n-j+1} cos θ_{n-j} e^{iφ_{n-j+1}}` and
/// `Ψ_n = sin θ_{n-1}⋯sin θ₁ e^{iφ₁}`.
fn hurwitz_state(point: &[f64]) -> Vec<Complex64> {
    let n = point.len() / 2 + 1;
    let theta = |k: usize| point[k - 1];
    let phi = |k: usize| point[n - 2 + k];
    let mut psi = vec![Complex64::zero(); n];
    psi[0] = Complex64::new(theta(n - 1).cos(), 0.0);
    let mut sines = 1.0;
    for j in 2..=n {
        sines *= theta(n - j + 1).sin();
        let amp = if j < n { sines * theta(n - j).cos() } else { sines };
        psi[j - 1] = Complex64::from_polar(amp, phi(n - j + 1));
    }
    psi
}

/// `√det g` of the Fubini–Study metric
/// `g_{μν} = Re⟨∂_μΨ|(1 - |Ψ⟩⟨Ψ|)|∂_νΨ⟩` at `point`, with derivatives by
/// central differences of step `h`.
pub fn fubini_study_density(chart: &StateVectorChart, point: &[f64], h: f64) -> Result<f64> {
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::Constraint(format!("step h = {h:e} outside [1e-7, 1e-3]")));
    }
    let psi = chart.state(point)?;
    let margin = 10.0 * h;
    for r in &chart.ranges().ranges {
        let x = point[r.index - 1];
        if x - r.lo <= margin || r.hi - x <= margin {
            return Err(Error::NearBoundary {
                coord: r.index,
                margin,
            });
        }
    }
    let d = point.len();
    let mut p = point.to_vec();
    let mut derivs = Vec::with_capacity(d);
    for mu in 0..d {
        p[mu] = point[mu] + h;
        let plus = chart.state(&p)?;
        p[mu] = point[mu] - h;
        let minus = chart.state(&p)?;
        p[mu] = point[mu];
        derivs.push(
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect::<Vec<_>>(),
        );
    }
    let inner = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>();
    let overlaps: Vec<Complex64> = derivs.iter().map(|dv| inner(&psi, dv)).collect();
    let g = DMatrix::from_fn(d, d, |mu, nu| {
        (inner(&derivs[mu], &derivs[nu]) - overlaps[mu].conj() * overlaps[nu]).re
    });
    let det = g.determinant();
    if !det.is_finite() || det < -1e-12 {
        return Err(Error::NonFinite(format!("metric determinant {det}")));
    }
    Ok(det.max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FsCheckReport {
    pub chart: ChartKind,
    pub n: usize,
    pub points: usize,
    pub step: f64,
    pub max_rel_error: f64,
    pub worst_point: Vec<f64>,
}

/// Compares [`fubini_study_density`] with the chart's analytic kernel at
/// `points` uniformly drawn points kept `margin` away from every boundary.
pub fn fs_check(chart: &StateVectorChart, points: usize, seed: u64, h: f64, margin: f64) -> Result<FsCheckReport> {
    let ranges = chart.ranges();
    let kernel = chart.kernel();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FsCheckReport {
        chart: chart.chart,
        n: chart.n,
        points,
        step: h,
        max_rel_error: 0.0,
        worst_point: Vec::new(),
    };
    let mut point = vec![0.0; chart.coords()];
    for _ in 0..points {
        for r in &ranges.ranges {
            point[r.index - 1] = rng.random_range(r.lo + margin..r.hi - margin);
        }
        let numeric = fubini_study_density(chart, &point, h)?;
        let exact = kernel.eval(&point);
        let rel = (numeric - exact).abs() / exact.abs();
        if rel >= report.max_rel_error || report.worst_point.is_empty() {
            report.max_rel_error = rel;
            report.worst_point = point.clone();
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_states_are_unit() {
        let chart = StateVectorChart::new(5, ChartKind::Hurwitz).unwrap();
        let psi = chart.state(&[0.3, 0.5, 0.7, 1.1, 0.2, 1.4, 2.5, 4.0]).unwrap();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hurwitz_example_point() {
        let chart = StateVectorChart::new(4, ChartKind::Hurwitz).unwrap();
        let p = [0.7, 0.8, 0.9, 1.0, 1.1, 1.2];
        let got = fubini_study_density(&chart, &p, DEFAULT_STEP).unwrap();
        let want = 0.7f64.cos() * 0.7f64.sin() * 0.8f64.cos() * 0.8f64.sin().powi(3) * 0.9f64.cos() * 0.9f64.sin().powi(5);
        assert!((got - want).abs() < 1e-5 * want, "{got} vs {want}");
    }

    #[test]
    fn euler_example_point() {
        let chart = StateVectorChart::new(4, ChartKind::Euler).unwrap();
        let p = [0.4, 0.5, 1.3, 0.6, 2.0, 1.0];
        let got = fubini_study_density(&chart, &p, DEFAULT_STEP).unwrap();
        let (s2, c2) = 0.5f64.sin_cos();
        let (s4, c4) = 0.6f64.sin_cos();
        let (s6, c6) = 1.0f64.sin_cos();
        let want = 2.0 * s2 * c2 * c4.powi(3) * s4 * c6 * s6.powi(5);
        assert!((got - want).abs() < 1e-5 * want, "{got} vs {want}");
    }

    #[test]
    fn central_difference_order() {
        let chart = StateVectorChart::new(3, ChartKind::Euler).unwrap();
        let p = [1.0, 0.5, 2.0, 0.9];
        let exact = chart.kernel().eval(&p);
        let e1 = (fubini_study_density(&chart, &p, 1e-3).unwrap() - exact).abs();
        let e2 = (fubini_study_density(&chart, &p, 5e-4).unwrap() - exact).abs();
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "error ratio {ratio}");
    }

    #[test]
    fn rejects_boundary_points_and_bad_steps() {
        let chart = StateVectorChart::new(2, ChartKind::Hurwitz).unwrap();
        assert!(matches!(
            fubini_study_density(&chart, &[1e-5, 1.0], 1e-5),
            Err(Error::NearBoundary { coord: 1, .. })
        ));
        assert!(fubini_study_density(&chart, &[0.5, 1.0], 1e-2).is_err());
    }

    #[test]
    fn euler_chart_matches_kernel_beyond_cp3() {
        for n in [2, 3, 5, 6] {
            let chart = StateVectorChart::new(n, ChartKind::Euler).unwrap();
            let r = fs_check(&chart, 10, 7, DEFAULT_STEP, 0.02).unwrap();
            assert!(r.max_rel_error < 1e-4, "n={n}: {}", r.max_rel_error);
        }
    }
}
