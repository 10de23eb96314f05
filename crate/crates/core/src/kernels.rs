//! Measures as products of single-angle factors, plus the eigenvalue
//! simplex density of the mixed-state measure.
//!
//! Every kernel here is a product `ξ · ∏ f_i(α_{s_i})` over distinct angle
//! slots, where each `f_i` is one of three elementary forms. Keeping the
//! factors symbolic lets integration factorize exactly and lets sampling
//! invert each factor's CDF in closed form.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::euler::{j_offset, range_catalog, RangeContext, RangeConvention, RangeKind, RangeTemplate};
use crate::numerics::quadrature::gauss_jacobi_unit;

/// Elementary single-angle factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorForm {
    /// `sin 2α`
    Sin2A,
    /// `cos^p α · sin α`
    CosPowSin(u32),
    /// `cos α · sin^p α`
    CosSinPow(u32),
}

/// One factor of a [`ProductKernel`], bound to an angle slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FactorRepr", try_from = "FactorRepr")]
pub struct KernelFactor {
    pub angle_index: usize,
    pub form: FactorForm,
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    index: usize,
    form: String,
    p: Option<u32>,
}

impl From<KernelFactor> for FactorRepr {
    fn from(f: KernelFactor) -> Self {
        let (form, p) = match f.form {
            FactorForm::Sin2A => ("sin2a", None),
            FactorForm::CosPowSin(p) => ("cospow-sin", Some(p)),
            FactorForm::CosSinPow(p) => ("cos-sinpow", Some(p)),
        };
        FactorRepr {
            index: f.angle_index,
            form: form.to_string(),
            p,
        }
    }
}

impl TryFrom<FactorRepr> for KernelFactor {
    type Error = String;

    fn try_from(r: FactorRepr) -> std::result::Result<Self, String> {
        let form = match (r.form.as_str(), r.p) {
            ("sin2a", None) => FactorForm::Sin2A,
            ("cospow-sin", Some(p)) if p >= 1 => FactorForm::CosPowSin(p),
            ("cos-sinpow", Some(p)) if p >= 1 => FactorForm::CosSinPow(p),
            (f, p) => return Err(format!("invalid kernel factor form {f:?} with p = {p:?}")),
        };
        Ok(KernelFactor {
            angle_index: r.index,
            form,
        })
    }
}

impl KernelFactor {
    pub fn new(angle_index: usize, form: FactorForm) -> Self {
        Self { angle_index, form }
    }

    pub fn eval(&self, a: f64) -> f64 {
        match self.form {
            FactorForm::Sin2A => (2.0 * a).sin(),
            FactorForm::CosPowSin(p) => a.cos().powi(p as i32) * a.sin(),
            FactorForm::CosSinPow(p) => a.cos() * a.sin().powi(p as i32),
        }
    }

    /// An antiderivative of [`eval`](Self::eval).
    pub fn antiderivative(&self, a: f64) -> f64 {
        match self.form {
            FactorForm::Sin2A => a.sin().powi(2),
            FactorForm::CosPowSin(p) => -a.cos().powi(p as i32 + 1) / (p as f64 + 1.0),
            FactorForm::CosSinPow(p) => a.sin().powi(p as i32 + 1) / (p as f64 + 1.0),
        }
    }

    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        self.antiderivative(hi) - self.antiderivative(lo)
    }

    /// CDF of the normalized density `∝ factor` on `[0, π/2]`.
    pub fn cdf(&self, a: f64) -> f64 {
        let a = a.clamp(0.0, FRAC_PI_2);
        match self.form {
            FactorForm::Sin2A => a.sin().powi(2),
            FactorForm::CosPowSin(p) => 1.0 - a.cos().powi(p as i32 + 1),
            FactorForm::CosSinPow(p) => a.sin().powi(p as i32 + 1),
        }
    }

    /// Inverse of [`cdf`](Self::cdf) for `u ∈ [0, 1]`.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self.form {
            FactorForm::Sin2A => u.sqrt().asin(),
            FactorForm::CosPowSin(p) => (1.0 - u).powf(1.0 / (p as f64 + 1.0)).acos(),
            FactorForm::CosSinPow(p) => u.powf(1.0 / (p as f64 + 1.0)).asin(),
        }
    }
}

/// Which measure a kernel represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelContext {
    HaarSU,
    PureState,
    TruncatedHaar,
    Hurwitz,
}

impl KernelContext {
    pub fn range_context(self) -> RangeContext {
        match self {
            KernelContext::HaarSU => RangeContext::SuFull,
            KernelContext::PureState => RangeContext::CPn,
            KernelContext::TruncatedHaar => RangeContext::TruncatedHaar,
            KernelContext::Hurwitz => RangeContext::Hurwitz,
        }
    }
}

/// A measure `ξ · ∏ factors` over `dims` angle slots. Slots without a factor
/// carry the constant 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductKernel {
    pub n: usize,
    pub context: KernelContext,
    pub xi: f64,
    pub dims: usize,
    pub factors: Vec<KernelFactor>,
}

impl ProductKernel {
    /// Evaluates `ξ · ∏ f_i` at `angles` (slot order, length [`dims`](Self::dims)).
    pub fn eval(&self, angles: &[f64]) -> f64 {
        self.xi
            * self
                .factors
                .iter()
                .map(|f| f.eval(angles[f.angle_index - 1]))
                .product::<f64>()
    }

    /// Factor bound to `slot`, if any.
    pub fn factor_at(&self, slot: usize) -> Option<&KernelFactor> {
        self.factors.iter().find(|f| f.angle_index == slot)
    }

    /// Rebinds `ξ` to the convention, checking it is the one this context needs.
    pub fn with_convention(mut self, convention: &RangeConvention) -> Result<Self> {
        let expected = RangeConvention::new(convention.kind, self.context.range_context(), self.n)?;
        if (expected.xi - convention.xi).abs() > 1e-12 * expected.xi {
            return Err(Error::ConventionMismatch(format!(
                "{:?} {:?} ranges need xi = {}, got {}",
                self.context, convention.kind, expected.xi, convention.xi
            )));
        }
        self.xi = convention.xi;
        Ok(self)
    }

    /// Range catalog matching this kernel's context and dimension.
    pub fn ranges(&self, kind: RangeKind) -> Result<RangeTemplate> {
        range_catalog(self.n, self.context.range_context(), kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("kernels always serialize")
    }
}

/// `Ker(k, j)` for `2 ≤ k ≤ m`.
fn ker(k: usize, m: usize, j: usize) -> KernelFactor {
    let slot = 2 * (k - 1) + j;
    let form = if k == 2 {
        FactorForm::Sin2A
    } else if k < m {
        FactorForm::CosPowSin(2 * k as u32 - 3)
    } else {
        FactorForm::CosSinPow(2 * m as u32 - 3)
    };
    KernelFactor::new(slot, form)
}

fn flag_factors(n: usize) -> Result<Vec<KernelFactor>> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for m in (2..=n).rev() {
        let j = j_offset(m, n)?;
        out.extend((2..=m).map(|k| ker(k, m, j)));
    }
    Ok(out)
}

/// Haar kernel `K_SU(n) = ∏_{m} ∏_{k=2..m} Ker(k, j(m))` over all `n²-1` slots.
pub fn haar_kernel_su(n: usize) -> Result<ProductKernel> {
    if n < 2 {
        return Err(Error::dim(n, "SU(n) needs n >= 2"));
    }
    Ok(ProductKernel {
        n,
        context: KernelContext::HaarSU,
        xi: 1.0,
        dims: n * n - 1,
        factors: flag_factors(n)?,
    })
}

/// Truncated Haar kernel of the flag manifold `SU(n)/U(1)^{n-1}`: the same
/// factors as [`haar_kernel_su`] over the first `n(n-1)` slots.
pub fn truncated_haar_kernel(n: usize) -> Result<ProductKernel> {
    let mut k = haar_kernel_su(n)?;
    k.context = KernelContext::TruncatedHaar;
    k.dims = n * (n - 1);
    Ok(k)
}

/// Pure-state kernel on ℂPⁿ: `∏_{k=2..n+1} Ker(k, j(n+1))` over `2n` slots.
pub fn pure_state_kernel(n: usize) -> Result<ProductKernel> {
    if n < 1 {
        return Err(Error::dim(n, "CP^n needs n >= 1"));
    }
    Ok(ProductKernel {
        n,
        context: KernelContext::PureState,
        xi: 1.0,
        dims: 2 * n,
        factors: (2..=n + 1).map(|k| ker(k, n + 1, 0)).collect(),
    })
}

/// Hurwitz kernel `∏_{k=1}^{n-1} cos θ_k sin^{2k-1} θ_k` on ℂP^{n-1}, slots
/// `θ₁..θ_{n-1}` then `φ₁..φ_{n-1}`.
pub fn hurwitz_kernel(n: usize) -> Result<ProductKernel> {
    if n < 2 {
        return Err(Error::dim(n, "the Hurwitz chart needs n >= 2"));
    }
    Ok(ProductKernel {
        n,
        context: KernelContext::Hurwitz,
        xi: 1.0,
        dims: 2 * (n - 1),
        factors: (1..n)
            .map(|k| KernelFactor::new(k, FactorForm::CosSinPow(2 * k as u32 - 1)))
            .collect(),
    })
}

/// How the Dirichlet constant `α_s` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirichletMode {
    /// `α_s = Γ(Ns) / (N Γ(s))`, exactly as printed.
    Literal,
    /// `α_s` chosen so the density integrates to 1 over the declared ranges.
    NumericallyNormalized,
}

/// Symmetric Dirichlet density `α_s ∏ Λ_j^{s-1}` on the eigenvalue simplex,
/// restricted to per-eigenvalue ranges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletSpec {
    pub n: usize,
    pub s: f64,
    pub alpha_s: f64,
    pub ranges: Vec<(f64, f64)>,
    pub mode: DirichletMode,
}

/// Literal constant `Γ(Ns) / (N Γ(s))`.
pub fn alpha_s_literal(n: usize, s: f64) -> f64 {
    (ln_gamma(n as f64 * s) - ln_gamma(s)).exp() / n as f64
}

/// Conjectured eigenvalue ranges: `Λ_N ∈ [1/N, 1]`, every other `Λ_j ∈ [0, 1/N]`.
pub fn conjectured_ranges(n: usize) -> Vec<(f64, f64)> {
    let inv = 1.0 / n as f64;
    (0..n).map(|j| if j + 1 == n { (inv, 1.0) } else { (0.0, inv) }).collect()
}

impl DirichletSpec {
    /// Dirichlet spec over the conjectured ranges.
    pub fn new(n: usize, s: f64, mode: DirichletMode) -> Result<Self> {
        Self::with_ranges(n, s, conjectured_ranges(n), mode)
    }

    pub fn with_ranges(n: usize, s: f64, ranges: Vec<(f64, f64)>, mode: DirichletMode) -> Result<Self> {
        if n < 2 {
            return Err(Error::dim(n, "the eigenvalue simplex needs n >= 2"));
        }
        if s.is_nan() || s <= 0.0 || !s.is_finite() {
            return Err(Error::Constraint(format!("Dirichlet concentration must be > 0, got {s}")));
        }
        if ranges.len() != n {
            return Err(Error::DimensionMismatch(format!("{} ranges for {n} eigenvalues", ranges.len())));
        }
        let lo: f64 = ranges.iter().map(|r| r.0).sum();
        let hi: f64 = ranges.iter().map(|r| r.1).sum();
        if ranges.iter().any(|r| r.0 < 0.0 || r.1 > 1.0 || r.0 > r.1) || lo > 1.0 || hi < 1.0 {
            return Err(Error::Constraint(
                "eigenvalue ranges must lie in [0, 1] with sum(lo) <= 1 <= sum(hi)".into(),
            ));
        }
        let alpha_s = match mode {
            DirichletMode::Literal => alpha_s_literal(n, s),
            DirichletMode::NumericallyNormalized => 1.0 / simplex_mass(n, s, &ranges)?,
        };
        Ok(Self {
            n,
            s,
            alpha_s,
            ranges,
            mode,
        })
    }

    /// `α_s ∏ Λ_j^{s-1}` at a point of the simplex.
    pub fn density(&self, lambdas: &[f64]) -> Result<f64> {
        if lambdas.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} eigenvalues for n = {}", lambdas.len(), self.n)));
        }
        let total: f64 = lambdas.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Constraint(format!("eigenvalues sum to {total}, not 1")));
        }
        for (j, (&l, &(lo, hi))) in lambdas.iter().zip(&self.ranges).enumerate() {
            if l < lo || l > hi {
                return Err(Error::OutOfRange(format!("Λ_{} = {l} outside [{lo}, {hi}]", j + 1)));
            }
        }
        Ok(self.alpha_s * lambdas.iter().map(|l| l.powf(self.s - 1.0)).product::<f64>())
    }

    /// `True` when every eigenvalue lies in its declared range.
    pub fn admits(&self, lambdas: &[f64]) -> bool {
        lambdas.iter().zip(&self.ranges).all(|(&l, &(lo, hi))| l >= lo && l <= hi)
    }
}

/// `∫ ∏_{j<N} Λ_j^{s-1} · (1 - ΣΛ)^{s-1} dΛ_1…dΛ_{N-1}` over the ranges.
///
/// Only ranges with `lo = 0` for the free eigenvalues and a last range that
/// the simplex constraint already implies are supported; then the integrand's
/// only singular part is the Jacobi weight, and a tensor Gauss–Jacobi rule
/// converges geometrically.
fn simplex_mass(n: usize, s: f64, ranges: &[(f64, f64)]) -> Result<f64> {
    let free = &ranges[..n - 1];
    let (last_lo, last_hi) = ranges[n - 1];
    let max_free: f64 = free.iter().map(|r| r.1).sum();
    if free.iter().any(|r| r.0 != 0.0) || last_hi < 1.0 || 1.0 - max_free < last_lo - 1e-12 || max_free >= 1.0 {
        return Err(Error::Constraint(
            "numerical normalization needs ranges of the form [0, b_j] for Λ_1..Λ_{N-1} with Σ b_j < 1, \
             and a Λ_N range implied by the simplex"
                .into(),
        ));
    }
    let nodes_per_dim = match n - 1 {
        1..=3 => 24,
        4 => 20,
        5 => 16,
        6 => 12,
        _ => 9,
    };
    let (x, w) = gauss_jacobi_unit(nodes_per_dim, s - 1.0);
    let d = n - 1;
    // scale nodes from [0,1] to [0, b_j]: weight picks up b_j^s
    let scale: f64 = free.iter().map(|r| r.1.powf(s)).product();
    let mut idx = vec![0usize; d];
    let mut total = 0.0;
    loop {
        let mut weight = 1.0;
        let mut sum = 0.0;
        for (k, &i) in idx.iter().enumerate() {
            weight *= w[i];
            sum += free[k].1 * x[i];
        }
        total += weight * (1.0 - sum).powf(s - 1.0);
        // odometer
        let mut k = 0;
        loop {
            if k == d {
                return finite(total * scale);
            }
            idx[k] += 1;
            if idx[k] < x.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("simplex mass evaluated to {v}")))
    }
}

/// Mixed-state product density: `dμ` over the eigenvalue simplex times
/// `ξ · K_SU(N)` over the first `N(N-1)` angles.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStateDensity {
    pub dirichlet: DirichletSpec,
    pub kernel: ProductKernel,
}

impl MixedStateDensity {
    pub fn eval(&self, lambdas: &[f64], angles: &[f64]) -> Result<f64> {
        if angles.len() != self.kernel.dims {
            return Err(Error::AngleCount {
                expected: self.kernel.dims,
                got: angles.len(),
            });
        }
        Ok(self.dirichlet.density(lambdas)? * self.kernel.eval(angles))
    }
}

/// Builds the mixed-state density for `n`-dimensional density matrices.
pub fn mixed_state_density(n: usize, spec: DirichletSpec, convention: &RangeConvention) -> Result<MixedStateDensity> {
    if spec.n != n {
        return Err(Error::DimensionMismatch(format!("Dirichlet spec is for n = {}, not {n}", spec.n)));
    }
    let kernel = truncated_haar_kernel(n)?.with_convention(convention)?;
    Ok(MixedStateDensity {
        dirichlet: spec,
        kernel,
    })
}

/// `Γ(x)`, re-exported for callers that need the literal constants.
pub fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn forms(k: &ProductKernel) -> Vec<(usize, FactorForm)> {
        k.factors.iter().map(|f| (f.angle_index, f.form)).collect()
    }

    #[test]
    fn haar_su2_and_su3() {
        assert_eq!(forms(&haar_kernel_su(2).unwrap()), vec![(2, FactorForm::Sin2A)]);
        assert_eq!(
            forms(&haar_kernel_su(3).unwrap()),
            vec![(2, FactorForm::Sin2A), (4, FactorForm::CosSinPow(3)), (6, FactorForm::Sin2A)]
        );
    }

    #[test]
    fn haar_su4_matches_two_qubit_expansion() {
        use FactorForm::*;
        assert_eq!(
            forms(&haar_kernel_su(4).unwrap()),
            vec![
                (2, Sin2A),
                (4, CosPowSin(3)),
                (6, CosSinPow(5)),
                (8, Sin2A),
                (10, CosSinPow(3)),
                (12, Sin2A)
            ]
        );
    }

    #[test]
    fn pure_state_small_cases() {
        use FactorForm::*;
        assert_eq!(forms(&pure_state_kernel(1).unwrap()), vec![(2, Sin2A)]);
        assert_eq!(forms(&pure_state_kernel(2).unwrap()), vec![(2, Sin2A), (4, CosSinPow(3))]);
        assert_eq!(
            forms(&pure_state_kernel(3).unwrap()),
            vec![(2, Sin2A), (4, CosPowSin(3)), (6, CosSinPow(5))]
        );
        let k = pure_state_kernel(3).unwrap();
        let a = [0.0, 0.3, 0.0, 0.7, 0.0, 1.1];
        let want = 2.0 * 0.3f64.sin() * 0.3f64.cos() * 0.7f64.cos().powi(3) * 0.7f64.sin() * 1.1f64.cos() * 1.1f64.sin().powi(5);
        assert!((k.eval(&a) - want).abs() < 1e-15);
        assert!(pure_state_kernel(0).is_err());
    }

    #[test]
    fn hurwitz_small_cases() {
        use FactorForm::*;
        assert_eq!(forms(&hurwitz_kernel(2).unwrap()), vec![(1, CosSinPow(1))]);
        assert_eq!(
            forms(&hurwitz_kernel(4).unwrap()),
            vec![(1, CosSinPow(1)), (2, CosSinPow(3)), (3, CosSinPow(5))]
        );
    }

    #[test]
    fn factor_counts() {
        for n in 2..=10 {
            assert_eq!(haar_kernel_su(n).unwrap().factors.len(), n * (n - 1) / 2);
            assert_eq!(truncated_haar_kernel(n).unwrap().factors.len(), n * (n - 1) / 2);
        }
        for n in 1..=10 {
            assert_eq!(pure_state_kernel(n).unwrap().factors.len(), n);
        }
    }

    #[test]
    fn first_block_is_pure_state_kernel() {
        for n in 2..=8 {
            let haar = haar_kernel_su(n).unwrap();
            let ps = pure_state_kernel(n - 1).unwrap();
            assert_eq!(&haar.factors[..n - 1], &ps.factors[..]);
        }
    }

    #[test]
    fn kernels_nonnegative_on_grid() {
        for n in 2..=4 {
            for k in [haar_kernel_su(n).unwrap(), pure_state_kernel(n).unwrap(), hurwitz_kernel(n).unwrap()] {
                for f in &k.factors {
                    for i in 0..=200 {
                        let a = FRAC_PI_2 * i as f64 / 200.0;
                        assert!(f.eval(a) >= -1e-16);
                    }
                }
            }
        }
    }

    #[test]
    fn convention_binding() {
        let q = RangeConvention::new(RangeKind::Quotient, RangeContext::CPn, 4).unwrap();
        assert_eq!(pure_state_kernel(4).unwrap().with_convention(&q).unwrap().xi, 8.0);
        let wrong = RangeConvention {
            kind: RangeKind::Quotient,
            xi: 3.0,
        };
        assert!(matches!(
            pure_state_kernel(4).unwrap().with_convention(&wrong),
            Err(Error::ConventionMismatch(_))
        ));
        let q = RangeConvention::new(RangeKind::Quotient, RangeContext::TruncatedHaar, 4).unwrap();
        assert_eq!(q.xi, 8.0);
    }

    #[test]
    fn factor_json_round_trip() {
        let k = haar_kernel_su(4).unwrap();
        let back: ProductKernel = serde_json::from_str(&k.to_json()).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<KernelFactor>(r#"{"index":2,"form":"sin2a","p":3}"#).is_err());
    }

    #[test]
    fn inverse_cdf_examples() {
        let f = KernelFactor::new(2, FactorForm::Sin2A);
        assert!((f.inverse_cdf(0.5) - PI / 4.0).abs() < 1e-15);
        let g = KernelFactor::new(6, FactorForm::CosSinPow(5));
        assert!((g.inverse_cdf(1.0) - FRAC_PI_2).abs() < 1e-15);
        for form in [FactorForm::Sin2A, FactorForm::CosPowSin(3), FactorForm::CosSinPow(5)] {
            let f = KernelFactor::new(1, form);
            for i in 1..20 {
                let u = i as f64 / 20.0;
                assert!((f.cdf(f.inverse_cdf(u)) - u).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn dirichlet_literal_constant() {
        let d = DirichletSpec::new(4, 1.0, DirichletMode::Literal).unwrap();
        assert!((d.alpha_s - 1.5).abs() < 1e-14);
        // s = 1 makes the density flat
        let v = d.density(&[0.1, 0.2, 0.15, 0.55]).unwrap();
        assert!((v - 1.5).abs() < 1e-14);
    }

    #[test]
    fn dirichlet_rejections() {
        let d = DirichletSpec::new(4, 2.0, DirichletMode::Literal).unwrap();
        assert!(matches!(d.density(&[0.1, 0.2, 0.15, 0.5]), Err(Error::Constraint(_))));
        assert!(matches!(d.density(&[0.3, 0.1, 0.05, 0.55]), Err(Error::OutOfRange(_))));
        assert!(DirichletSpec::new(4, 0.0, DirichletMode::Literal).is_err());
        assert!(DirichletSpec::new(1, 1.0, DirichletMode::Literal).is_err());
    }

    #[test]
    fn normalized_uniform_mass_is_box_volume() {
        // s = 1: mass = (1/N)^{N-1}
        for n in 2..=6 {
            let d = DirichletSpec::new(n, 1.0, DirichletMode::NumericallyNormalized).unwrap();
            let want = (n as f64).powi(n as i32 - 1);
            assert!((d.alpha_s - want).abs() < 1e-9 * want, "n={n}: {}", d.alpha_s);
        }
    }

    #[test]
    fn mixed_density_components() {
        let spec = DirichletSpec::new(2, 1.0, DirichletMode::NumericallyNormalized).unwrap();
        let m = mixed_state_density(2, spec, &RangeConvention::covering()).unwrap();
        assert_eq!(m.kernel.factors, vec![KernelFactor::new(2, FactorForm::Sin2A)]);
        let v = m.eval(&[0.25, 0.75], &[0.1, 0.4]).unwrap();
        assert!((v - 2.0 * 0.8f64.sin()).abs() < 1e-12);
    }
}
