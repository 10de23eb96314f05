//! The acceptance criteria as runnable checks.
//!
//! Each criterion returns a [`CriterionReport`]; tolerances and sample sizes
//! are fixed here so the CLI and the test suite run the same checks.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::gell_mann_basis;
use crate::error::{Error, Result};
use crate::euler::{range_catalog, su_element, RangeContext, RangeConvention, RangeKind};
use crate::kernels::{haar_kernel_su, pure_state_kernel, truncated_haar_kernel, DirichletMode, DirichletSpec};
use crate::numerics::quadrature::tanh_sinh;
use crate::numerics::{fs_check, integrate_factorized, integrate_monte_carlo, ChartKind, StateVectorChart};
use crate::sampling::{
    compare_with_oracle, haar_oracle_sample, invariance_test, sample_density_matrix, SamplerKind, SeededStream,
    DEFAULT_REJECTION_CAP,
};
use crate::volumes::{
    cpn_volume_sum, omega_bracket, vol_cpn, vol_flag, vol_grassmann, vol_su, vol_su_over_su_su, vol_su_over_up_u1,
    vol_su_over_up_uq, ExactVolume, GrassmannVariant,
};

/// Relative tolerance for closed-form float comparisons.
pub const FLOAT_REL_TOL: f64 = 1e-12;
/// Monte Carlo samples per run and number of seeds.
pub const MC_SAMPLES: usize = 1_000_000;
pub const MC_SEEDS: u64 = 100;
pub const MC_MIN_HITS: usize = 99;
pub const MC_WORKERS: usize = 4;
/// Fubini–Study points, step, tolerance and boundary margin.
pub const FS_POINTS: usize = 100;
pub const FS_STEP: f64 = 1e-5;
pub const FS_REL_TOL: f64 = 1e-4;
pub const FS_MARGIN: f64 = 0.02;
/// Draws per sampler in the Haar comparison.
pub const HAAR_SAMPLES: usize = 100_000;
/// Density matrices drawn in the two-qubit suite.
pub const MIXED_SAMPLES: usize = 20_000;
pub const PSD_FLOOR: f64 = -1e-12;
pub const OMEGA_REL_TOL: f64 = 1e-8;
pub const PHI_TOL: f64 = 1e-12;
/// The sum of ℂPᴺ volumes as printed, and the allowed distance to it.
pub const PRINTED_E_PI: f64 = 23.147;
pub const PRINTED_E_PI_TOL: f64 = 0.01;
pub const E_PI_TOL: f64 = 1e-10;

const MASTER_SEED: u64 = 20_040_917;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub details: Vec<String>,
    pub elapsed_ms: u128,
}

impl CriterionReport {
    /// One line: `[PASS] 3 quotient-range normalization (12 ms)`.
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {} {} ({} ms)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed_ms
        )
    }
}

struct Checker {
    details: Vec<String>,
    pass: bool,
}

impl Checker {
    fn new() -> Self {
        Self {
            details: Vec::new(),
            pass: true,
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.details.push(format!("FAILED: {what}"));
        } else {
            self.details.push(format!("ok: {what}"));
        }
    }

    fn exact(&mut self, label: &str, got: &ExactVolume, want: &ExactVolume, want_float: f64) {
        self.check(got == want, format!("{label} = {got} (expected {want})"));
        let rel = (got.to_f64() - want_float).abs() / want_float.abs();
        self.check(rel < FLOAT_REL_TOL, format!("{label} float {} vs {want_float} (rel {rel:.1e})", got.to_f64()));
    }

    fn rel(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        let rel = (got - want).abs() / want.abs();
        self.check(rel < tol, format!("{label}: {got} vs {want} (rel {rel:.1e}, tol {tol:.0e})"));
    }

    fn budget(&mut self, elapsed: Duration, limit: Duration) {
        self.check(
            elapsed < limit,
            format!("runtime {} ms within {} ms", elapsed.as_millis(), limit.as_millis()),
        );
    }

    fn finish(self, id: u8, title: &str, start: Instant) -> CriterionReport {
        CriterionReport {
            id,
            title: title.into(),
            pass: self.pass,
            details: self.details,
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

fn q(a: i64, b: i64) -> ExactVolume {
    ExactVolume::rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
}

fn fact(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Criterion 1: exact closed-form volume table.
pub fn criterion_volume_table() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    let pi = ExactVolume::pi_pow;
    let sqrt = ExactVolume::sqrt_of;
    c.exact("V_SU(2)", &vol_su(2)?, &(q(2, 1) * pi(2)), 2.0 * PI * PI);
    c.exact("V_SU(4)", &vol_su(4)?, &(sqrt(2, 1) * pi(9) * q(1, 3)), 2f64.sqrt() * PI.powi(9) / 3.0);
    for n in 1..=8u32 {
        let want = pi(n as i64) * q(1, fact(n) as i64);
        c.exact(&format!("V_CP^{n}"), &vol_cpn(n as usize)?, &want, PI.powi(n as i32) / fact(n));
    }
    for n in 2..=6usize {
        let prod = (1..n).map(vol_cpn).try_fold(ExactVolume::one(), |a, b| b.map(|b| a * b))?;
        c.check(vol_flag(n)? == prod, format!("Flag({n}) = prod CP^k, k < {n}: {prod}"));
    }
    let (v, _) = vol_su_over_su_su(4, 2, 2)?;
    c.exact("SU(4)/SU(2)xSU(2)", &v, &(pi(5) * q(1, 6) / sqrt(2, 1)), PI.powi(5) / (6.0 * 2f64.sqrt()));
    let p5 = PI.powi(5);
    let u1_cases = [
        (2, pi(5) * q(1, 6) / sqrt(6, 1), p5 / (6.0 * 6f64.sqrt())),
        (3, pi(5) * q(1, 9) / sqrt(2, 1), p5 / (9.0 * 2f64.sqrt())),
        (4, pi(5) * q(1, 12), p5 / 12.0),
    ];
    for (m, want, f) in u1_cases {
        c.exact(&format!("SU(4)/U(2)xU(1)_SU({m})"), &vol_su_over_up_u1(4, 2, m)?.0, &want, f);
    }
    c.exact(
        "SU(9)/U(4)xU(4)",
        &vol_su_over_up_uq(9, 4, 4)?.0,
        &(pi(24) * q(1, 58_525_286_400_000)),
        PI.powi(24) / 58_525_286_400_000.0,
    );
    let gr = vol_grassmann(4, 1, GrassmannVariant::Corrected)?;
    c.exact("Gr(4,1)", &gr, &(pi(3) * q(1, 6)), PI.powi(3) / 6.0);
    let naive = vol_grassmann(4, 1, GrassmannVariant::Naive)?;
    c.check(naive.clone() / gr == sqrt(5, 8), format!("naive Gr(4,1) = {naive} = sqrt(5/8) * corrected"));
    c.budget(start.elapsed(), Duration::from_secs(1));
    Ok(c.finish(1, "closed-form volume table", start))
}

/// Criterion 2: factorized integrals of the kernels reproduce the volumes.
pub fn criterion_measure_volumes() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    for n in 1..=6 {
        let t = range_catalog(n, RangeContext::CPn, RangeKind::Covering)?;
        let got = integrate_factorized(&pure_state_kernel(n)?, &t)?.value;
        c.rel(&format!("int pure-state CP^{n}"), got, PI.powi(n as i32) / fact(n as u32), FLOAT_REL_TOL);
    }
    for n in 2..=5 {
        let t = range_catalog(n, RangeContext::SuFull, RangeKind::Covering)?;
        let got = integrate_factorized(&haar_kernel_su(n)?, &t)?.value;
        c.rel(&format!("int Haar SU({n})"), got, vol_su(n)?.to_f64(), FLOAT_REL_TOL);
        let t = range_catalog(n, RangeContext::TruncatedHaar, RangeKind::Covering)?;
        let got = integrate_factorized(&truncated_haar_kernel(n)?, &t)?.value;
        c.rel(&format!("int truncated Haar N={n}"), got, vol_flag(n)?.to_f64(), FLOAT_REL_TOL);
    }
    c.budget(start.elapsed(), Duration::from_secs(5));
    Ok(c.finish(2, "measure-to-volume cross-check", start))
}

/// Criterion 3: quotient ranges with their ξ reproduce the same volumes.
pub fn criterion_quotient_ranges() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    for n in 1..=5 {
        let conv = RangeConvention::new(RangeKind::Quotient, RangeContext::CPn, n)?;
        let t = range_catalog(n, RangeContext::CPn, RangeKind::Quotient)?;
        let k = pure_state_kernel(n)?.with_convention(&conv)?;
        let got = integrate_factorized(&k, &t)?.value;
        c.rel(&format!("CP^{n} quotient, xi = {}", conv.xi), got, PI.powi(n as i32) / fact(n as u32), FLOAT_REL_TOL);
    }
    for n in 2..=4 {
        let conv = RangeConvention::new(RangeKind::Quotient, RangeContext::TruncatedHaar, n)?;
        let t = range_catalog(n, RangeContext::TruncatedHaar, RangeKind::Quotient)?;
        let k = truncated_haar_kernel(n)?.with_convention(&conv)?;
        let got = integrate_factorized(&k, &t)?.value;
        c.rel(&format!("Flag({n}) quotient, xi = {}", conv.xi), got, vol_flag(n)?.to_f64(), FLOAT_REL_TOL);
    }
    Ok(c.finish(3, "quotient-range normalization", start))
}

/// Criterion 4: Monte Carlo estimates bracket the closed forms.
pub fn criterion_monte_carlo() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    let cases = [
        ("pure-state CP^3", pure_state_kernel(3)?, range_catalog(3, RangeContext::CPn, RangeKind::Covering)?, PI.powi(3) / 6.0),
        ("Haar SU(3)", haar_kernel_su(3)?, range_catalog(3, RangeContext::SuFull, RangeKind::Covering)?, vol_su(3)?.to_f64()),
    ];
    for (label, kernel, ranges, exact) in cases {
        let mut hits = 0;
        for seed in 0..MC_SEEDS {
            let r = integrate_monte_carlo(&kernel, &ranges, MC_SAMPLES, MASTER_SEED + seed, MC_WORKERS)?;
            if (r.value - exact).abs() <= 5.0 * r.abs_error_estimate {
                hits += 1;
            }
        }
        c.check(hits >= MC_MIN_HITS, format!("{label}: {hits}/{MC_SEEDS} seeds within 5 standard errors"));
    }
    c.budget(start.elapsed(), Duration::from_secs(60));
    Ok(c.finish(4, "Monte Carlo consistency", start))
}

/// Criterion 5: numeric Fubini–Study densities match the analytic kernels.
pub fn criterion_fubini_study() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    for (seed, chart) in [(1, ChartKind::Hurwitz), (2, ChartKind::Euler)] {
        let chart = StateVectorChart::new(4, chart)?;
        let r = fs_check(&chart, FS_POINTS, MASTER_SEED + seed, FS_STEP, FS_MARGIN)?;
        c.check(
            r.max_rel_error < FS_REL_TOL,
            format!("{:?} chart, {} points: max rel error {:.2e}", r.chart, r.points, r.max_rel_error),
        );
    }
    c.budget(start.elapsed(), Duration::from_secs(30));
    Ok(c.finish(5, "Fubini-Study verification", start))
}

/// Criterion 6: the Euler sampler is Haar; the uniform-angle control is not.
pub fn criterion_haar_sampler() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    let describe = |r: &crate::sampling::DistributionReport| {
        r.checks
            .iter()
            .map(|k| format!("{:?} p={:.3e}", k.statistic, k.ks.p_value))
            .collect::<Vec<_>>()
            .join(", ")
    };
    for n in 2..=4 {
        let r = compare_with_oracle(SamplerKind::Euler, n, HAAR_SAMPLES, MASTER_SEED + n as u64)?;
        c.check(r.all_pass(), format!("Euler vs QR oracle, SU({n}): {}", describe(&r)));
        let probe = haar_oracle_sample(n, &mut SeededStream::new(MASTER_SEED, 100 + n as u64))?;
        let r = invariance_test(SamplerKind::Euler, n, HAAR_SAMPLES, &probe, MASTER_SEED + 10 + n as u64)?;
        c.check(r.all_pass(), format!("left invariance, SU({n}): {}", describe(&r)));
    }
    let control = compare_with_oracle(SamplerKind::UniformAngles, 3, HAAR_SAMPLES, MASTER_SEED + 20)?;
    c.check(
        !control.all_pass(),
        format!("uniform-angle control vs oracle, SU(3), rejected: {}", describe(&control)),
    );
    c.budget(start.elapsed(), Duration::from_secs(120));
    Ok(c.finish(6, "Haar sampler validation", start))
}

/// Criterion 7: two-qubit mixed states and the ω bracket.
pub fn criterion_two_qubit() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    let spec = DirichletSpec::new(4, 2.0, DirichletMode::NumericallyNormalized)?;
    let mut stream = SeededStream::new(MASTER_SEED, 7);
    let (mut worst, mut in_range) = (0.0f64, true);
    for _ in 0..MIXED_SAMPLES {
        let d = sample_density_matrix(4, &spec, &mut stream, DEFAULT_REJECTION_CAP)?;
        worst = worst.max(d.defect());
        let l = &d.eigenvalues;
        in_range &= l[..3].iter().all(|&x| (0.0..=0.25).contains(&x)) && (0.25..=1.0).contains(&l[3]);
    }
    c.check(
        worst <= -PSD_FLOOR,
        format!("{MIXED_SAMPLES} draws Hermitian, trace 1, PSD: worst defect {worst:.1e}"),
    );
    c.check(in_range, "eigenvalues within L4 in [1/4,1], L1..L3 in [0,1/4]");
    for s in [0.5, 1.0, 2.0, 3.0] {
        let f = |x: f64| x.powf(s - 1.0);
        let numeric = tanh_sinh(f, 0.0, 0.25, 1e-15).powi(3) * tanh_sinh(f, 0.25, 1.0, 1e-15);
        c.rel(&format!("omega bracket at s = {s}"), omega_bracket(s)?, numeric, OMEGA_REL_TOL);
    }
    Ok(c.finish(7, "two-qubit mixed-state suite", start))
}

/// Φ(α) as printed for the two-qubit pure state.
pub fn phi_printed(a: &[f64]) -> [Complex64; 4] {
    let (s2, c2) = a[1].sin_cos();
    let (s4, c4) = a[3].sin_cos();
    let (s6, c6) = a[5].sin_cos();
    let e = |x: f64| Complex64::from_polar(1.0, x);
    [
        e(-(a[0] + a[2] + a[4])) * (s6 * c4 * c2),
        e(a[0] - a[2] - a[4]) * (-s6 * c4 * s2),
        e(-a[4]) * (-s6 * s4),
        Complex64::new(c6, 0.0),
    ]
}

/// Largest deviation between the state read off `ρ = U diag(0,0,0,1) U†`
/// (its last row, normalized) and the printed Φ(α), after aligning phases.
pub fn phi_deviation(angles: &[f64]) -> Result<f64> {
    let basis = gell_mann_basis(4)?;
    let template = range_catalog(4, RangeContext::SuFull, RangeKind::Covering)?;
    let u = su_element(&basis, &template.with_values(angles, None)?)?;
    let col: Vec<Complex64> = u.column(3);
    // last row of ρ is u₄₃·conj(U e₄)
    let row: Vec<Complex64> = col.iter().map(|z| col[3] * z.conj()).collect();
    let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-9 {
        return Err(Error::Constraint("the chosen angles put a node on the last component".into()));
    }
    let phi = phi_printed(angles);
    let k = (0..4).max_by(|&i, &j| phi[i].norm().total_cmp(&phi[j].norm())).unwrap_or(3);
    let ext: Vec<Complex64> = row.iter().map(|z| z / norm).collect();
    let phase = (phi[k] / ext[k]).unscale((phi[k] / ext[k]).norm());
    Ok((0..4).map(|i| (phi[i] - phase * ext[i]).norm()).fold(0.0, f64::max))
}

/// Criterion 8: worked examples (Φ(α) and the e^π series).
pub fn criterion_worked_examples() -> Result<CriterionReport> {
    let start = Instant::now();
    let mut c = Checker::new();
    let template = range_catalog(4, RangeContext::SuFull, RangeKind::Covering)?;
    let mut rng = ChaCha8Rng::seed_from_u64(MASTER_SEED + 8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let angles: Vec<f64> = template
            .ranges
            .iter()
            .map(|r| rng.random_range(r.lo + 0.05..r.hi - 0.05))
            .collect();
        worst = worst.max(phi_deviation(&angles)?);
    }
    c.check(worst < PHI_TOL, format!("Phi(alpha) from su_element(4) on diag(0,0,0,1): max deviation {worst:.1e}"));
    let series = cpn_volume_sum(60);
    c.check(
        (series.sum - PRINTED_E_PI).abs() < PRINTED_E_PI_TOL,
        format!("sum of CP^n volumes {} within {PRINTED_E_PI_TOL} of {PRINTED_E_PI}", series.sum),
    );
    c.check(
        (series.sum - PI.exp()).abs() < E_PI_TOL,
        format!("sum of CP^n volumes within {E_PI_TOL:e} of e^pi = {}", PI.exp()),
    );
    Ok(c.finish(8, "worked-example reproduction", start))
}

/// Named groups of criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Volumes,
    Measures,
    Sampling,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Volumes => &[1, 8],
            Suite::Measures => &[2, 3, 4, 5],
            Suite::Sampling => &[6, 7],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8],
        }
    }
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    match id {
        1 => criterion_volume_table(),
        2 => criterion_measure_volumes(),
        3 => criterion_quotient_ranges(),
        4 => criterion_monte_carlo(),
        5 => criterion_fubini_study(),
        6 => criterion_haar_sampler(),
        7 => criterion_two_qubit(),
        8 => criterion_worked_examples(),
        _ => Err(Error::Constraint(format!("no criterion {id}; valid ids are 1..=8"))),
    }
}

pub fn run_suite(suite: Suite) -> Result<Vec<CriterionReport>> {
    suite.criteria().iter().map(|&id| run_criterion(id)).collect()
}
