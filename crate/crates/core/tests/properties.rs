use num::complex::Complex64;
use num::{BigInt, BigRational};
use proptest::prelude::*;
use unitary_euler::algebra::{exp_generator, gell_mann_basis, UNITARY_TOL};
use unitary_euler::euler::{cpn_state, range_catalog, su_matrix, RangeContext, RangeKind};
use unitary_euler::kernels::{haar_kernel_su, pure_state_kernel};
use unitary_euler::sampling::{ks_two_sample, SamplerKind, SeededStream};
use unitary_euler::volumes::{parse_volume_expr, vol_cpn, vol_flag, vol_su, vol_u, vol_u1_su, ExactVolume};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generator_exponentials_are_special_unitary(n in 2usize..=6, idx in 0usize..35, a in -10.0f64..10.0) {
        let basis = gell_mann_basis(n).unwrap();
        let index = 1 + idx % (n * n - 1);
        let u = exp_generator(&basis, index, a).unwrap();
        prop_assert!(u.is_unitary(UNITARY_TOL));
        prop_assert!((u.determinant().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_parameter_subgroup(n in 2usize..=5, idx in 0usize..24, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let basis = gell_mann_basis(n).unwrap();
        let index = 1 + idx % (n * n - 1);
        let lhs = exp_generator(&basis, index, a).unwrap().mul(&exp_generator(&basis, index, b).unwrap());
        let rhs = exp_generator(&basis, index, a + b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn euler_elements_are_special_unitary(n in 2usize..=6, seed in any::<u64>()) {
        let mut s = SeededStream::new(seed, 0);
        let angles: Vec<f64> = (0..n * n - 1).map(|_| 7.0 * s.uniform()).collect();
        let u = su_matrix(n, &angles).unwrap();
        prop_assert!(u.is_unitary(UNITARY_TOL));
        prop_assert!((u.determinant() - one()).norm() < 1e-12);
    }

    #[test]
    fn cpn_states_are_unit(angles in prop::collection::vec(0.0f64..6.3, 2..=12)) {
        let even = &angles[..angles.len() / 2 * 2];
        let v = cpn_state(even).unwrap();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernels_nonnegative_on_covering_ranges(n in 2usize..=5, seed in any::<u64>()) {
        let mut s = SeededStream::new(seed, 1);
        for (k, ctx, dim) in [
            (haar_kernel_su(n).unwrap(), RangeContext::SuFull, n),
            (pure_state_kernel(n).unwrap(), RangeContext::CPn, n),
        ] {
            let t = range_catalog(dim, ctx, RangeKind::Covering).unwrap();
            let point: Vec<f64> = t.ranges.iter().map(|r| r.lo + s.uniform() * r.width()).collect();
            prop_assert!(k.eval(&point) >= -1e-15);
        }
    }

    #[test]
    fn exact_arithmetic_matches_floats(a in 1i64..1000, b in 1i64..1000, p in 0i64..20, k in 1i64..200, m in 1i64..200) {
        let x = ExactVolume::rational(BigRational::new(BigInt::from(a), BigInt::from(b)))
            * ExactVolume::pi_pow(p)
            * ExactVolume::sqrt_of(k, 1);
        let y = ExactVolume::sqrt_of(m, 1) * ExactVolume::pi_pow(1);
        let prod = x.clone() * y.clone();
        prop_assert!((prod.to_f64() / (x.to_f64() * y.to_f64()) - 1.0).abs() < 1e-13);
        prop_assert_eq!(prod / y, x.clone());
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExactVolume>(&text).unwrap(), x);
    }

    #[test]
    fn volume_product_identities(n in 2usize..=8) {
        prop_assert_eq!(vol_u(n).unwrap(), vol_su(n).unwrap() * vol_u1_su(n + 1).unwrap());
        prop_assert_eq!(vol_cpn(n).unwrap(), vol_su(n + 1).unwrap() / vol_u(n).unwrap());
        let prod = (1..n).map(|k| vol_cpn(k).unwrap()).fold(ExactVolume::one(), |a, b| a * b);
        prop_assert_eq!(vol_flag(n).unwrap(), prod);
    }

    #[test]
    fn coset_closed_forms_agree_with_ratios(n in 4usize..=9, p in 2usize..=4, q in 2usize..=4) {
        if n + 1 >= p + q {
            let text = format!("SU({n})/SU({p})xSU({q})");
            let e = parse_volume_expr(&text).unwrap();
            let ratio = vol_su(n).unwrap() / (vol_su(p).unwrap() * vol_su(q).unwrap());
            prop_assert_eq!(e.volume().unwrap(), ratio);
        }
        if n > p + q {
            let e = parse_volume_expr(&format!("SU({n})/U({p})xU({q})")).unwrap();
            let ratio = vol_su(n).unwrap() / (vol_u(p).unwrap() * vol_u(q).unwrap());
            prop_assert_eq!(e.volume().unwrap(), ratio);
        }
    }

    #[test]
    fn streams_reproduce(seed in any::<u64>(), stream in 0u64..8, n in 2usize..=5) {
        let a = SamplerKind::Euler.draw(n, &mut SeededStream::new(seed, stream)).unwrap();
        let b = SamplerKind::Euler.draw(n, &mut SeededStream::new(seed, stream)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ks_statistic_bounds(a in prop::collection::vec(-5.0f64..5.0, 1..50), b in prop::collection::vec(-5.0f64..5.0, 1..50)) {
        let r = ks_two_sample(&a, &b);
        prop_assert!((0.0..=1.0).contains(&r.statistic));
        prop_assert!((0.0..=1.0).contains(&r.p_value));
    }
}
