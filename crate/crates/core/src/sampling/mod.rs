//! Haar-distributed group elements, pure states and density matrices drawn
//! by inverting each kernel factor's CDF, plus an independent QR oracle and
//! statistical checks.

mod ks;

pub use ks::{kolmogorov_q, ks_one_sample, ks_two_sample, KsResult};

use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexSquareMatrix, UNITARY_TOL};
use crate::error::{Error, Result};
use crate::euler::{cpn_state, flag_matrix, range_catalog, su_matrix, AngleRange, RangeContext, RangeKind};
use crate::kernels::{
    conjectured_ranges, haar_kernel_su, pure_state_kernel, truncated_haar_kernel, DirichletMode, DirichletSpec,
    KernelFactor, ProductKernel,
};

/// Significance level of the statistical checks.
pub const SIGNIFICANCE: f64 = 1e-3;

/// Default rejection cap for [`sample_density_matrix`].
pub const DEFAULT_REJECTION_CAP: usize = 1_000_000;

/// A reproducible random stream: ChaCha8 keyed by `seed`, on stream `stream_id`.
#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Draws an angle with density `∝ factor` on `range`, or uniformly when the
/// slot has no factor.
pub fn sample_angle(factor: Option<&KernelFactor>, range: &AngleRange, stream: &mut SeededStream) -> f64 {
    let u = stream.uniform();
    match factor {
        None => range.lo + u * range.width(),
        Some(f) => {
            let (a, b) = (f.cdf(range.lo), f.cdf(range.hi));
            f.inverse_cdf(a + u * (b - a)).clamp(range.lo, range.hi)
        }
    }
}

fn sample_angles(kernel: &ProductKernel, ranges: &[AngleRange], stream: &mut SeededStream) -> Vec<f64> {
    let mut values = vec![0.0; ranges.iter().map(|r| r.index).max().unwrap_or(0)];
    for r in ranges {
        values[r.index - 1] = sample_angle(kernel.factor_at(r.index), r, stream);
    }
    values
}

fn check_desk_scale(n: usize) -> Result<()> {
    if !(2..=8).contains(&n) {
        return Err(Error::dim(n, "samplers support 2 <= n <= 8"));
    }
    Ok(())
}

/// Haar-random SU(n) element from the Euler chart: kernel-weighted block
/// angles, uniform odd and Cartan angles over the covering ranges.
pub fn sample_su(n: usize, stream: &mut SeededStream) -> Result<ComplexSquareMatrix> {
    check_desk_scale(n)?;
    let kernel = haar_kernel_su(n)?;
    let ranges = range_catalog(n, RangeContext::SuFull, RangeKind::Covering)?;
    su_matrix(n, &sample_angles(&kernel, &ranges.ranges, stream))
}

/// Euler-chart SU(n) element with every angle uniform over its covering
/// range. Not Haar; used as a negative control.
pub fn sample_su_uniform_angles(n: usize, stream: &mut SeededStream) -> Result<ComplexSquareMatrix> {
    check_desk_scale(n)?;
    let ranges = range_catalog(n, RangeContext::SuFull, RangeKind::Covering)?;
    let values: Vec<f64> = ranges.ranges.iter().map(|r| r.lo + stream.uniform() * r.width()).collect();
    su_matrix(n, &values)
}

/// Haar-random U(n) element: QR of a complex Ginibre matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_oracle_unitary(n: usize, stream: &mut SeededStream) -> Result<ComplexSquareMatrix> {
    if n < 1 {
        return Err(Error::dim(n, "matrices need n >= 1"));
    }
    let rng = stream.rng();
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    ComplexSquareMatrix::from_dmatrix(q)
}

/// Haar-random SU(n) element independent of the Euler machinery: a
/// [`haar_oracle_unitary`] draw divided by an n-th root of its determinant.
pub fn haar_oracle_sample(n: usize, stream: &mut SeededStream) -> Result<ComplexSquareMatrix> {
    check_desk_scale(n)?;
    let u = haar_oracle_unitary(n, stream)?;
    let det = u.determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / n as f64);
    Ok(u.scale(root))
}

/// Which SU(n) sampler to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Euler,
    Oracle,
    UniformAngles,
}

impl SamplerKind {
    pub fn draw(self, n: usize, stream: &mut SeededStream) -> Result<ComplexSquareMatrix> {
        match self {
            SamplerKind::Euler => sample_su(n, stream),
            SamplerKind::Oracle => haar_oracle_sample(n, stream),
            SamplerKind::UniformAngles => sample_su_uniform_angles(n, stream),
        }
    }
}

/// Unitarily invariant random state in ℂⁿ from the Euler chart of ℂP^{n-1}.
pub fn sample_pure_state(n: usize, stream: &mut SeededStream) -> Result<Vec<Complex64>> {
    if n < 2 {
        return Err(Error::dim(n, "pure states need n >= 2"));
    }
    let kernel = pure_state_kernel(n - 1)?;
    let ranges = range_catalog(n - 1, RangeContext::CPn, RangeKind::Covering)?;
    cpn_state(&sample_angles(&kernel, &ranges.ranges, stream))
}

/// A draw `ρ = U diag(Λ) U†` from the mixed-state product measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixSample {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub unitary: ComplexSquareMatrix,
    pub rho: ComplexSquareMatrix,
}

impl DensityMatrixSample {
    /// Largest of `‖ρ-ρ†‖`, `|tr ρ - 1|` and the negative part of the smallest eigenvalue.
    pub fn defect(&self) -> f64 {
        let herm = self.rho.hermiticity_error();
        let trace = (self.rho.trace() - Complex64::new(1.0, 0.0)).norm();
        let floor = self.rho.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
        herm.max(trace).max(-floor)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.defect() <= tol
    }
}

fn symmetric_dirichlet(n: usize, s: f64, stream: &mut SeededStream) -> Result<Vec<f64>> {
    let gamma = Gamma::new(s, 1.0).map_err(|e| Error::Constraint(e.to_string()))?;
    let rng = stream.rng();
    let g: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
    let total: f64 = g.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::NonFinite(format!("Gamma({s}) draws summed to {total}")));
    }
    Ok(g.into_iter().map(|x| x / total).collect())
}

/// Eigenvalues drawn from `∏Λ_j^{s-1}` restricted to `spec.ranges`.
///
/// For the conjectured ranges the events "every component except the `k`-th
/// is at most 1/N" are disjoint, and the symmetric Dirichlet is exchangeable,
/// so a draw satisfying any of them is accepted with the large component
/// moved to slot N. Other ranges use plain rejection.
pub fn sample_eigenvalues(spec: &DirichletSpec, stream: &mut SeededStream, cap: usize) -> Result<Vec<f64>> {
    let n = spec.n;
    let conjectured = spec.ranges == conjectured_ranges(n);
    let bound = 1.0 / n as f64;
    for _ in 0..cap {
        let mut l = symmetric_dirichlet(n, spec.s, stream)?;
        if conjectured {
            let big: Vec<usize> = (0..n).filter(|&j| l[j] > bound).collect();
            if big.len() <= 1 {
                let k = big.first().copied().unwrap_or(n - 1);
                l.swap(k, n - 1);
                if spec.admits(&l) {
                    return Ok(l);
                }
            }
        } else if spec.admits(&l) {
            return Ok(l);
        }
    }
    Err(Error::RejectionCap(cap))
}

/// Draws a density matrix: eigenvalues from the restricted Dirichlet law,
/// eigenvectors from the flag block of the Euler chart. `Λ_N`, the largest
/// eigenvalue, pairs with column N of `U`.
pub fn sample_density_matrix(
    n: usize,
    spec: &DirichletSpec,
    stream: &mut SeededStream,
    cap: usize,
) -> Result<DensityMatrixSample> {
    check_desk_scale(n)?;
    if spec.n != n {
        return Err(Error::DimensionMismatch(format!("Dirichlet spec is for n = {}, not {n}", spec.n)));
    }
    if spec.mode == DirichletMode::Literal {
        log::warn!("sampling ignores alpha_s; the literal constant does not normalize the restricted density");
    }
    let eigenvalues = sample_eigenvalues(spec, stream, cap)?;
    let kernel = truncated_haar_kernel(n)?;
    let ranges = range_catalog(n, RangeContext::TruncatedHaar, RangeKind::Covering)?;
    let unitary = flag_matrix(n, &sample_angles(&kernel, &ranges.ranges, stream))?;
    let diag: Vec<Complex64> = eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)).collect();
    let rho = unitary.mul(&ComplexSquareMatrix::from_diagonal(&diag)).mul(&unitary.adjoint());
    Ok(DensityMatrixSample {
        n,
        eigenvalues,
        unitary,
        rho,
    })
}

/// A scalar statistic of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    ReTrace,
    ImTrace,
    AbsTraceSq,
    AbsU11Sq,
}

impl Statistic {
    pub const ALL: [Statistic; 4] = [
        Statistic::ReTrace,
        Statistic::ImTrace,
        Statistic::AbsTraceSq,
        Statistic::AbsU11Sq,
    ];

    /// The statistic, rounded to 1e-10 so that round-off does not break ties
    /// (for SU(2) the imaginary trace is identically zero).
    pub fn eval(self, u: &ComplexSquareMatrix) -> f64 {
        let raw = match self {
            Statistic::ReTrace => u.trace().re,
            Statistic::ImTrace => u.trace().im,
            Statistic::AbsTraceSq => u.trace().norm_sqr(),
            Statistic::AbsU11Sq => u.get(0, 0).norm_sqr(),
        };
        (raw * 1e10).round() / 1e10
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsCheck {
    pub statistic: Statistic,
    pub ks: KsResult,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub n: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub checks: Vec<KsCheck>,
}

impl DistributionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn from_samples(n: usize, seed: u64, a: &[ComplexSquareMatrix], b: &[ComplexSquareMatrix]) -> Self {
        let checks = Statistic::ALL
            .iter()
            .map(|&statistic| {
                let xa: Vec<f64> = a.iter().map(|u| statistic.eval(u)).collect();
                let xb: Vec<f64> = b.iter().map(|u| statistic.eval(u)).collect();
                let ks = ks_two_sample(&xa, &xb);
                KsCheck {
                    statistic,
                    ks,
                    pass: ks.p_value > SIGNIFICANCE,
                }
            })
            .collect();
        Self {
            n,
            n_samples: a.len(),
            seed,
            checks,
        }
    }
}

fn draw_many(kind: SamplerKind, n: usize, count: usize, stream: &mut SeededStream) -> Result<Vec<ComplexSquareMatrix>> {
    (0..count).map(|_| kind.draw(n, stream)).collect()
}

/// Two-sample KS of `sampler` against the QR oracle on every [`Statistic`].
pub fn compare_with_oracle(sampler: SamplerKind, n: usize, n_samples: usize, seed: u64) -> Result<DistributionReport> {
    let a = draw_many(sampler, n, n_samples, &mut SeededStream::new(seed, 0))?;
    let b = draw_many(SamplerKind::Oracle, n, n_samples, &mut SeededStream::new(seed, 1))?;
    Ok(DistributionReport::from_samples(n, seed, &a, &b))
}

/// Left-invariance check: compares `f(U)` with `f(VU)` for independent draws
/// `U` from `sampler`.
pub fn invariance_test(
    sampler: SamplerKind,
    n: usize,
    n_samples: usize,
    probe: &ComplexSquareMatrix,
    seed: u64,
) -> Result<DistributionReport> {
    if probe.dim() != n {
        return Err(Error::DimensionMismatch(format!("probe is {0}x{0}, sampler is {n}x{n}", probe.dim())));
    }
    if !probe.is_unitary(1e3 * UNITARY_TOL) {
        return Err(Error::NotUnitary(format!("probe deviates by {:e}", probe.unitarity_error())));
    }
    let a = draw_many(sampler, n, n_samples, &mut SeededStream::new(seed, 0))?;
    let b: Vec<ComplexSquareMatrix> = draw_many(sampler, n, n_samples, &mut SeededStream::new(seed, 1))?
        .iter()
        .map(|u| probe.mul(u))
        .collect();
    Ok(DistributionReport::from_samples(n, seed, &a, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::FactorForm;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<f64> = {
            let mut s = SeededStream::new(5, 2);
            (0..10).map(|_| s.uniform()).collect()
        };
        let mut s = SeededStream::new(5, 2);
        assert!(a.iter().all(|&x| x == s.uniform()));
        let mut t = SeededStream::new(5, 3);
        assert_ne!(a[0], t.uniform());
    }

    #[test]
    fn angle_sampler_respects_ranges() {
        let f = KernelFactor::new(2, FactorForm::Sin2A);
        let full = AngleRange { index: 2, lo: 0.0, hi: FRAC_PI_2 };
        let part = AngleRange { index: 2, lo: 0.2, hi: 0.9 };
        let mut s = SeededStream::new(1, 0);
        for _ in 0..1000 {
            assert!(full.contains(sample_angle(Some(&f), &full, &mut s)));
            assert!(part.contains(sample_angle(Some(&f), &part, &mut s)));
            let u = sample_angle(None, &AngleRange { index: 1, lo: 0.0, hi: PI }, &mut s);
            assert!((0.0..=PI).contains(&u));
        }
    }

    #[test]
    fn samplers_produce_special_unitaries() {
        let mut s = SeededStream::new(11, 0);
        for n in 2..=6 {
            for kind in [SamplerKind::Euler, SamplerKind::Oracle, SamplerKind::UniformAngles] {
                let u = kind.draw(n, &mut s).unwrap();
                assert!(u.is_unitary(UNITARY_TOL), "{kind:?} n={n}");
                assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12, "{kind:?} n={n}");
            }
        }
        assert!(sample_su(9, &mut s).is_err());
    }

    #[test]
    fn oracle_columns_orthonormal() {
        let mut s = SeededStream::new(3, 0);
        let u = haar_oracle_unitary(5, &mut s).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let ip: Complex64 = u.column(i).iter().zip(u.column(j)).map(|(a, b)| a.conj() * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_states_are_unit() {
        let mut s = SeededStream::new(4, 0);
        for n in 2..=6 {
            let v = sample_pure_state(n, &mut s).unwrap();
            assert_eq!(v.len(), n);
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn density_matrices_valid() {
        let spec = DirichletSpec::new(4, 1.5, DirichletMode::NumericallyNormalized).unwrap();
        let mut s = SeededStream::new(8, 0);
        for _ in 0..200 {
            let d = sample_density_matrix(4, &spec, &mut s, DEFAULT_REJECTION_CAP).unwrap();
            assert!(d.is_valid(1e-12), "defect {}", d.defect());
            assert!(spec.admits(&d.eigenvalues));
        }
    }

    #[test]
    fn rejection_cap_reported() {
        let spec = DirichletSpec::new(3, 1.0, DirichletMode::NumericallyNormalized).unwrap();
        let tight = DirichletSpec::with_ranges(3, 1.0, vec![(0.0, 0.001), (0.0, 0.001), (0.0, 1.0)], spec.mode);
        let tight = tight.unwrap_or(spec);
        let mut s = SeededStream::new(0, 0);
        assert_eq!(sample_eigenvalues(&tight, &mut s, 10), Err(Error::RejectionCap(10)));
    }

    #[test]
    fn non_unitary_probe_rejected() {
        let probe = ComplexSquareMatrix::identity(3).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            invariance_test(SamplerKind::Euler, 3, 10, &probe, 0),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn identity_probe_on_same_draws_is_trivial() {
        let mut s = SeededStream::new(2, 0);
        let a = draw_many(SamplerKind::Euler, 3, 500, &mut s).unwrap();
        let r = DistributionReport::from_samples(3, 2, &a, &a);
        assert!(r.checks.iter().all(|c| c.ks.statistic == 0.0));
    }
}
