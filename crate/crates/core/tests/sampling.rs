use std::f64::consts::FRAC_PI_2;

use unitary_euler::kernels::{DirichletMode, DirichletSpec, FactorForm, KernelFactor};
use unitary_euler::euler::AngleRange;
use unitary_euler::sampling::{
    haar_oracle_sample, invariance_test, ks_one_sample, ks_two_sample, sample_angle, sample_density_matrix,
    sample_pure_state, sample_su, SamplerKind, SeededStream, DEFAULT_REJECTION_CAP, SIGNIFICANCE,
};

const DRAWS: usize = 100_000;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn sin2a_draws_follow_sin_squared() {
    let f = KernelFactor::new(2, FactorForm::Sin2A);
    let range = AngleRange { index: 2, lo: 0.0, hi: FRAC_PI_2 };
    let mut s = SeededStream::new(101, 0);
    let xs: Vec<f64> = (0..DRAWS).map(|_| sample_angle(Some(&f), &range, &mut s)).collect();
    let r = ks_one_sample(&xs, |a| a.sin().powi(2));
    assert!(r.statistic < 1.95 / (DRAWS as f64).sqrt(), "D = {}", r.statistic);
}

#[test]
fn mean_trace_vanishes_for_su3() {
    let mut s = SeededStream::new(102, 0);
    let re: Vec<f64> = (0..DRAWS).map(|_| sample_su(3, &mut s).unwrap().trace().re).collect();
    let (m, se) = mean_and_se(&re);
    assert!(m.abs() < 5.0 * se, "E[Re Tr U] = {m} +- {se}");
}

#[test]
fn second_moment_of_trace_matches_oracle_su4() {
    let mut s = SeededStream::new(103, 0);
    let mut t = SeededStream::new(103, 1);
    let a: Vec<f64> = (0..DRAWS).map(|_| sample_su(4, &mut s).unwrap().trace().norm_sqr()).collect();
    let b: Vec<f64> = (0..DRAWS).map(|_| haar_oracle_sample(4, &mut t).unwrap().trace().norm_sqr()).collect();
    let ((ma, sa), (mb, sb)) = (mean_and_se(&a), mean_and_se(&b));
    assert!((ma - mb).abs() < 5.0 * (sa * sa + sb * sb).sqrt(), "{ma} +- {sa} vs {mb} +- {sb}");
    assert!((ma - 1.0).abs() < 5.0 * sa);
}

#[test]
fn pure_state_last_amplitude_law() {
    let mut s = SeededStream::new(104, 0);
    let xs: Vec<f64> = (0..DRAWS).map(|_| sample_pure_state(4, &mut s).unwrap()[3].norm_sqr()).collect();
    // cos²α₆ with α₆ ∝ cos α sin⁵α: P(X <= x) = 1 - (1-x)³
    let r = ks_one_sample(&xs, |x| 1.0 - (1.0 - x).powi(3));
    assert!(r.p_value > SIGNIFICANCE, "{r:?}");
    let mut t = SeededStream::new(104, 1);
    let ys: Vec<f64> = (0..DRAWS).map(|_| haar_oracle_sample(4, &mut t).unwrap().get(3, 0).norm_sqr()).collect();
    let r = ks_two_sample(&xs, &ys);
    assert!(r.p_value > SIGNIFICANCE, "{r:?}");
}

#[test]
fn pure_state_functional_matches_oracle() {
    // modulus of a fixed linear functional ⟨w|Φ⟩
    let w = [0.5, -0.5, 0.5, 0.5];
    let mut s = SeededStream::new(105, 0);
    let mut t = SeededStream::new(105, 1);
    let xs: Vec<f64> = (0..DRAWS)
        .map(|_| sample_pure_state(4, &mut s).unwrap().iter().zip(w).map(|(z, c)| z * c).sum::<num::complex::Complex64>().norm())
        .collect();
    let ys: Vec<f64> = (0..DRAWS)
        .map(|_| {
            let u = haar_oracle_sample(4, &mut t).unwrap();
            (0..4).map(|i| u.get(i, 0) * w[i]).sum::<num::complex::Complex64>().norm()
        })
        .collect();
    assert!(ks_two_sample(&xs, &ys).p_value > SIGNIFICANCE);
}

#[test]
fn two_level_flat_dirichlet_is_truncated_uniform() {
    let spec = DirichletSpec::new(2, 1.0, DirichletMode::NumericallyNormalized).unwrap();
    let mut s = SeededStream::new(106, 0);
    let l2: Vec<f64> = (0..DRAWS)
        .map(|_| sample_density_matrix(2, &spec, &mut s, DEFAULT_REJECTION_CAP).unwrap().eigenvalues[1])
        .collect();
    assert!(l2.iter().all(|&x| (0.5..=1.0).contains(&x)));
    let (m, se) = mean_and_se(&l2);
    // uniform on [1/2, 1]: mean 3/4, sd 1/√48
    assert!((m - 0.75).abs() < 5.0 / (48.0 * DRAWS as f64).sqrt(), "{m} +- {se}");
}

#[test]
fn identity_probe_passes_invariance() {
    let probe = unitary_euler::algebra::ComplexSquareMatrix::identity(3);
    let r = invariance_test(SamplerKind::Euler, 3, 20_000, &probe, 107).unwrap();
    assert!(r.all_pass());
}

#[test]
fn uniform_angles_fail_invariance() {
    let probe = haar_oracle_sample(3, &mut SeededStream::new(108, 9)).unwrap();
    let r = invariance_test(SamplerKind::UniformAngles, 3, DRAWS, &probe, 108).unwrap();
    assert!(!r.all_pass(), "{r:?}");
}
