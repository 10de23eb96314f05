//! Closed-form volumes of SU(N), U(N), ℂPᴺ, flag manifolds, Grassmannians
//! and the SU(N) coset families, as exact values.
//!
//! All volumes use the normalization fixed by the Euler chart: the U(1)
//! generated by the level-`m` Cartan generator has length `π√(2m/(m-1))`.

mod coset;
mod exact;

pub use coset::{parse_volume_expr, vol_general_coset, CosetSpec, GroupFactor, VolumeExpr};
pub use exact::{factorial, inv_superfactorial, superfactorial, ExactVolume};

use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::kernels::{DirichletMode, DirichletSpec};

fn rat(a: BigInt) -> ExactVolume {
    ExactVolume::rational(BigRational::from_integer(a))
}

fn inv(a: BigInt) -> ExactVolume {
    ExactVolume::rational(BigRational::new(BigInt::one(), a))
}

fn pi(p: usize) -> ExactVolume {
    ExactVolume::pi_pow(p as i64)
}

fn sqrt(num: usize, den: usize) -> ExactVolume {
    ExactVolume::sqrt_of(num as i64, den as i64)
}

/// `2^{(N-1)/2} π^{(N-1)(N+2)/2} √N ∏_{k=1}^{N-1} 1/k!`.
pub fn vol_su(n: usize) -> Result<ExactVolume> {
    if n < 2 {
        return Err(Error::dim(n, "SU(n) needs n >= 2"));
    }
    Ok(ExactVolume::sqrt2_pow(n as i64 - 1) * pi((n - 1) * (n + 2) / 2) * sqrt(n, 1) * inv(superfactorial(n)))
}

/// Length `π√(2m/(m-1))` of the U(1) generated by the SU(m) Cartan generator `λ_{m²-1}`.
pub fn vol_u1_su(m: usize) -> Result<ExactVolume> {
    if m < 2 {
        return Err(Error::dim(m, "U(1)_SU(m) needs m >= 2"));
    }
    Ok(pi(1) * sqrt(2 * m, m - 1))
}

/// The U(N) formula `2^{N/2} π^{N(N+1)/2} √(N+1) ∏_{k=1}^{N-1} 1/k!` without the `N ≥ 2` guard.
fn vol_u_formula(n: usize) -> ExactVolume {
    ExactVolume::sqrt2_pow(n as i64) * pi(n * (n + 1) / 2) * sqrt(n + 1, 1) * inv(superfactorial(n))
}

/// `V_U(N) = V_SU(N) · V_{U(1)_{SU(N+1)}}`.
pub fn vol_u(n: usize) -> Result<ExactVolume> {
    if n < 2 {
        return Err(Error::dim(
            n,
            "the U(N) volume formula is restricted to N >= 2; at N = 1 it degenerates to the U(1) of SU(2) \
             (use U1[SU(m)] to name a specific U(1))",
        ));
    }
    Ok(vol_u_formula(n))
}

/// `πⁿ/n!`.
pub fn vol_cpn(n: usize) -> Result<ExactVolume> {
    if n < 1 {
        return Err(Error::dim(n, "CP^n needs n >= 1"));
    }
    Ok(pi(n) * inv(factorial(n)))
}

/// `π^{N(N-1)/2} ∏_{k=1}^{N-1} 1/k!`, the volume of `SU(N)/U(1)^{N-1}`.
pub fn vol_flag(n: usize) -> Result<ExactVolume> {
    if n < 2 {
        return Err(Error::dim(n, "flag manifolds need n >= 2"));
    }
    let v = pi(n * (n - 1) / 2) * inv(superfactorial(n));
    debug_assert_eq!(
        v,
        (1..n).map(|k| vol_cpn(k).expect("k >= 1")).fold(ExactVolume::one(), |a, b| a * b)
    );
    Ok(v)
}

/// Which closed form produced a coset volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaForm {
    General,
    Simplified,
}

/// `V_SU(N) / (V_SU(P) V_SU(Q))` for `N+1 ≥ P+Q`, `P, Q ≥ 2`.
pub fn vol_su_over_su_su(n: usize, p: usize, q: usize) -> Result<(ExactVolume, FormulaForm)> {
    if p < 2 || q < 2 {
        return Err(Error::Constraint(format!("SU(N)/SU(P)xSU(Q) needs P, Q >= 2, got P = {p}, Q = {q}")));
    }
    if n + 1 < p + q {
        return Err(Error::Constraint(format!("SU(N)/SU(P)xSU(Q) needs N+1 >= P+Q, got N = {n}, P = {p}, Q = {q}")));
    }
    if n + 1 == p + q {
        Ok((su_over_su_su_simplified(p, q), FormulaForm::Simplified))
    } else {
        Ok((su_over_su_su_general(n, p, q), FormulaForm::General))
    }
}

fn su_over_su_su_general(n: usize, p: usize, q: usize) -> ExactVolume {
    ExactVolume::sqrt2_pow((n + 1) as i64 - (p + q) as i64)
        * pi((n * (n + 1) + 2 - p * (p + 1) - q * (q + 1)) / 2)
        * sqrt(n, p * q)
        * inv(superfactorial(n))
        * rat(superfactorial(p))
        * rat(superfactorial(q))
}

/// The `N+1 = P+Q` form `π^{(P-1)(Q-1)} √((P+Q-1)/(PQ)) ∏_{k=1}^{P+Q-2} 1/k! ∏_{k<P} k! ∏_{k<Q} k!`.
fn su_over_su_su_simplified(p: usize, q: usize) -> ExactVolume {
    pi((p - 1) * (q - 1))
        * sqrt(p + q - 1, p * q)
        * inv(superfactorial(p + q - 1))
        * rat(superfactorial(p))
        * rat(superfactorial(q))
}

/// `V_SU(N) / (V_U(P) V_{U(1)_{SU(M)}})` for `N-1 ≥ P+1`, `P ≥ 2`, `2 ≤ M ≤ N`.
pub fn vol_su_over_up_u1(n: usize, p: usize, m: usize) -> Result<(ExactVolume, FormulaForm)> {
    if p < 2 {
        return Err(Error::Constraint(format!("SU(N)/U(P)xU(1) needs P >= 2 (P != 1), got P = {p}")));
    }
    if n < p + 2 {
        return Err(Error::Constraint(format!("SU(N)/U(P)xU(1) needs N-1 >= P+1, got N = {n}, P = {p}")));
    }
    if !(2..=n).contains(&m) {
        return Err(Error::Constraint(format!("U(1)_SU(M) needs 2 <= M <= N, got M = {m}, N = {n}")));
    }
    if n == p + 2 {
        let v = pi(2 * n - 3) * inv(factorial(n - 2) * factorial(n - 1)) * sqrt(n * (m - 1), m * (n - 1));
        Ok((v, FormulaForm::Simplified))
    } else {
        Ok((su_over_up_u1_general(n, p, m), FormulaForm::General))
    }
}

fn su_over_up_u1_general(n: usize, p: usize, m: usize) -> ExactVolume {
    ExactVolume::sqrt2_pow((n - 1) as i64 - (p + 1) as i64)
        * pi(((n * n + n - 2) - (p * p + p + 2)) / 2)
        * sqrt(n * (m - 1), m * (p + 1))
        * inv(superfactorial(n))
        * rat(superfactorial(p))
}

/// Ratio of `SU(N)/U(P)×U(1)_{SU(X)}` to `SU(N)/U(P)×U(1)_{SU(Y)}`: `√(Y(X-1)/(X(Y-1)))`.
pub fn u1_variant_ratio(x: usize, y: usize) -> Result<ExactVolume> {
    if x < 2 || y < 2 {
        return Err(Error::Constraint(format!("U(1) variants need X, Y >= 2, got X = {x}, Y = {y}")));
    }
    Ok(sqrt(y * (x - 1), x * (y - 1)))
}

/// `V_SU(N) / (V_U(P) V_U(Q))` for `N-1 ≥ P+Q`, `P, Q ≥ 2`.
pub fn vol_su_over_up_uq(n: usize, p: usize, q: usize) -> Result<(ExactVolume, FormulaForm)> {
    if p < 2 || q < 2 {
        return Err(Error::Constraint(format!("SU(N)/U(P)xU(Q) needs P, Q >= 2 (P, Q != 1), got P = {p}, Q = {q}")));
    }
    if n < p + q + 1 {
        return Err(Error::Constraint(format!("SU(N)/U(P)xU(Q) needs N-1 >= P+Q, got N = {n}, P = {p}, Q = {q}")));
    }
    if n == p + q + 1 {
        let v = pi(p + q + p * q)
            * sqrt(p + q + 1, (p + 1) * (q + 1))
            * inv((p..=p + q).fold(BigInt::one(), |a, k| a * factorial(k)))
            * rat(superfactorial(q));
        Ok((v, FormulaForm::Simplified))
    } else {
        Ok((su_over_up_uq_general(n, p, q), FormulaForm::General))
    }
}

fn su_over_up_uq_general(n: usize, p: usize, q: usize) -> ExactVolume {
    ExactVolume::sqrt2_pow((n - 1) as i64 - (p + q) as i64)
        * pi(((n - 1) * (n + 2) - p * (p + 1) - q * (q + 1)) / 2)
        * sqrt(n, (p + 1) * (q + 1))
        * inv(superfactorial(n))
        * rat(superfactorial(p))
        * rat(superfactorial(q))
}

/// How [`vol_grassmann`] treats `M = 1` (and, symmetrically, `M = N-1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrassmannVariant {
    /// Divide by `U(1)_{SU(N+1)}`, the U(1) that actually sits inside U(N).
    #[default]
    Corrected,
    /// Plug `M = 1` into the general formula, which uses the U(1) of SU(2).
    Naive,
}

/// Volume of `G(N, M) = U(N)/(U(M) × U(N-M))`.
pub fn vol_grassmann(n: usize, m: usize, variant: GrassmannVariant) -> Result<ExactVolume> {
    if m < 1 || m >= n {
        return Err(Error::Constraint(format!("G(N, M) needs N > M >= 1, got N = {n}, M = {m}")));
    }
    let k = m.min(n - m);
    if k == 1 && variant == GrassmannVariant::Corrected {
        return Ok(vol_u_formula(n) / (vol_u1_su(n + 1)? * vol_u_formula(n - 1)));
    }
    Ok(pi(m * (n - m))
        * sqrt(n + 1, (m + 1) * (n - m + 1))
        * inv((m..n).fold(BigInt::one(), |a, k| a * factorial(k)))
        * rat(superfactorial(n - m)))
}

/// Partial sums and products of `Σ πⁿ/n!` (which tends to `e^π`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpnSeries {
    pub limit: usize,
    /// `Σ_{n=0}^{limit} πⁿ/n!`
    pub sum: f64,
    /// `∏_{n=1}^{limit} πⁿ/n!`
    pub product: f64,
    /// `∏_{n=1}^{k} πⁿ/n!` for `k = 0..=limit`
    pub partial_products: Vec<f64>,
}

pub fn cpn_volume_sum(limit: usize) -> CpnSeries {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut product = 1.0;
    let mut partial_products = vec![1.0];
    for n in 1..=limit {
        term *= std::f64::consts::PI / n as f64;
        sum += term;
        product *= term;
        partial_products.push(product);
    }
    CpnSeries {
        limit,
        sum,
        product,
        partial_products,
    }
}

/// Smallest concentration accepted by the ω functions; `ω` has a pole of order 4 at 0.
pub const OMEGA_MIN_S: f64 = 1e-6;

/// `4^{-4s}(4^s - 1)/s⁴`, the integral of `∏Λ_j^{s-1}` over the two-qubit
/// eigenvalue box `Λ₁,Λ₂,Λ₃ ∈ [0,1/4]`, `Λ₄ ∈ [1/4,1]`.
pub fn omega_bracket(s: f64) -> Result<f64> {
    if s.is_nan() || s < OMEGA_MIN_S || !s.is_finite() {
        return Err(Error::Constraint(format!("omega needs s >= {OMEGA_MIN_S:e}, got {s}")));
    }
    // 4^{-3s}(1 - 4^{-s}) avoids overflow for large s
    Ok((-3.0 * s * 4f64.ln()).exp() * -(-s * 4f64.ln()).exp_m1() / s.powi(4))
}

/// Which constant multiplies the ω bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaConstant {
    /// `Γ(4s)/(4Γ(s))`
    DirichletLiteral,
    /// `Γ(4s)/(4Γ(2))`, as printed next to the two-qubit ω
    PrintedOmega,
    /// The numerically normalized `α_s` over the conjectured ranges
    Normalized,
}

/// `α_s · 4^{-4s}(4^s - 1)/s⁴`.
pub fn omega_two_qubit(s: f64, constant: OmegaConstant) -> Result<f64> {
    let bracket = omega_bracket(s)?;
    let alpha = match constant {
        OmegaConstant::DirichletLiteral => (ln_gamma(4.0 * s) - ln_gamma(s)).exp() / 4.0,
        OmegaConstant::PrintedOmega => (ln_gamma(4.0 * s) - ln_gamma(2.0)).exp() / 4.0,
        OmegaConstant::Normalized => DirichletSpec::new(4, s, DirichletMode::NumericallyNormalized)?.alpha_s,
    };
    Ok(alpha * bracket)
}
