//! Normalization of the restricted Dirichlet density against nested
//! tanh-sinh quadrature.

use unitary_euler::kernels::{DirichletMode, DirichletSpec};
use unitary_euler::numerics::quadrature::tanh_sinh;

fn nested_mass(n: usize, s: f64) -> f64 {
    let b = 1.0 / n as f64;
    fn rec(left: usize, used: f64, b: f64, s: f64) -> f64 {
        if left == 0 {
            return (1.0 - used).powf(s - 1.0);
        }
        tanh_sinh(|x| x.powf(s - 1.0) * rec(left - 1, used + x, b, s), 0.0, b, 1e-11)
    }
    rec(n - 1, 0.0, b, s)
}

#[test]
fn normalized_density_integrates_to_one() {
    for n in 2..=4 {
        for s in [0.5, 1.0, 2.0, 3.5] {
            let spec = DirichletSpec::new(n, s, DirichletMode::NumericallyNormalized).unwrap();
            let total = spec.alpha_s * nested_mass(n, s);
            assert!((total - 1.0).abs() < 1e-8, "n={n} s={s}: {total}");
        }
    }
}

#[test]
fn literal_constant_does_not_normalize_restricted_density() {
    let spec = DirichletSpec::new(4, 2.0, DirichletMode::Literal).unwrap();
    let total = spec.alpha_s * nested_mass(4, 2.0);
    assert!((total - 1.0).abs() > 0.1, "{total}");
}

#[test]
fn density_is_flat_at_s_one() {
    let spec = DirichletSpec::new(3, 1.0, DirichletMode::NumericallyNormalized).unwrap();
    let a = spec.density(&[0.1, 0.2, 0.7]).unwrap();
    let b = spec.density(&[0.3, 0.01, 0.69]).unwrap();
    assert!((a - b).abs() < 1e-12 && (a - 9.0).abs() < 1e-9);
}
