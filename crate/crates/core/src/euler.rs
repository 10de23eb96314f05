//! Euler-angle construction of SU(N) and U(N) elements and the per-angle
//! range catalogs.
//!
//! An SU(N) element is the ordered product
//!
//! ```text
//! ∏_{m=N..2} ( ∏_{k=2..m} A(k, j(m)) ) · e^{iλ₃α} e^{iλ₈α} ⋯ e^{iλ_{N²-1}α}
//! A(k, j) = e^{iλ₃ α_{2k-3+j}} · e^{iλ_{(k-1)²+1} α_{2(k-1)+j}}
//! ```
//!
//! Angle slots are numbered from 1 in the order the product consumes them:
//!
//! | slots                         | role                                   |
//! |-------------------------------|----------------------------------------|
//! | `j(m)+1 ..= j(m)+2(m-1)`      | level-`m` block, odd = λ₃ phase, even = λ_{(k-1)²+1} rotation |
//! | `N(N-1)+1 ..= N²-1`           | Cartan string λ₃, λ₈, …, λ_{N²-1}     |
//!
//! with `j(N) = 0` and `j(m) = Σ_{l=0}^{N-m-1} 2(m+l)` otherwise, so the
//! level-`N` block comes first.

use std::f64::consts::{FRAC_PI_2, PI};

use num::complex::Complex64;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{ComplexSquareMatrix, GellMannBasis, GeneratorKind};
use crate::error::{Error, Result};

/// Which chart of angle ranges is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeKind {
    /// Ranges that cover the group (or coset) itself.
    Covering,
    /// The `SU(N)/Z_N`-style ranges; every odd angle is cut to `[0, π]`.
    Quotient,
}

/// What a range catalog is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RangeContext {
    /// All `N²-1` angles of SU(N).
    SuFull,
    /// The `2N` angles of a point of ℂPᴺ.
    CPn,
    /// The first `N(N-1)` angles of SU(N) (flag manifold).
    TruncatedHaar,
    /// Hurwitz spherical coordinates `(θ₁..θ_{N-1}, φ₁..φ_{N-1})` of a unit vector in ℂᴺ.
    Hurwitz,
}

/// Range kind plus the multiplier `ξ` that restores invariant volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeConvention {
    pub kind: RangeKind,
    pub xi: f64,
}

impl RangeConvention {
    pub fn covering() -> Self {
        Self {
            kind: RangeKind::Covering,
            xi: 1.0,
        }
    }

    /// Convention for `kind` in `context` at dimension `n` (group dimension,
    /// or the ℂPⁿ index for [`RangeContext::CPn`]).
    pub fn new(kind: RangeKind, context: RangeContext, n: usize) -> Result<Self> {
        match kind {
            RangeKind::Covering => Ok(Self::covering()),
            RangeKind::Quotient => {
                let exp = match context {
                    RangeContext::CPn => n.checked_sub(1).ok_or_else(|| Error::dim(n, "CP^n needs n >= 1"))?,
                    RangeContext::SuFull | RangeContext::TruncatedHaar => {
                        if n < 2 {
                            return Err(Error::dim(n, "SU(n) needs n >= 2"));
                        }
                        (n - 1) * (n - 2) / 2
                    }
                    RangeContext::Hurwitz => {
                        return Err(Error::ConventionMismatch(
                            "the Hurwitz chart has no quotient ranges".into(),
                        ))
                    }
                };
                Ok(Self {
                    kind,
                    xi: 2f64.powi(exp as i32),
                })
            }
        }
    }
}

/// Closed interval of one angle slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleRange {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
}

impl AngleRange {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Ranges for every slot of a chart, without values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeTemplate {
    pub n: usize,
    pub context: RangeContext,
    pub convention: RangeConvention,
    pub ranges: Vec<AngleRange>,
    /// Range of the U(1) phase β when the template describes U(N).
    pub beta: Option<(f64, f64)>,
}

impl RangeTemplate {
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn range(&self, index: usize) -> Option<AngleRange> {
        self.ranges.iter().find(|r| r.index == index).copied()
    }

    /// Product of all slot widths.
    pub fn box_volume(&self) -> f64 {
        self.ranges.iter().map(AngleRange::width).product()
    }

    /// Fills the template with values given in slot order.
    pub fn with_values(&self, values: &[f64], beta: Option<f64>) -> Result<AngleVector> {
        if values.len() != self.ranges.len() {
            return Err(Error::AngleCount {
                expected: self.ranges.len(),
                got: values.len(),
            });
        }
        let angles = self
            .ranges
            .iter()
            .zip(values)
            .map(|(r, &value)| AngleSlot {
                i: r.index,
                value,
                lo: r.lo,
                hi: r.hi,
            })
            .collect();
        let beta = match (self.beta, beta) {
            (Some((lo, hi)), Some(value)) => Some(PhaseSlot { value, lo, hi }),
            (None, Some(value)) => Some(PhaseSlot {
                value,
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }),
            _ => None,
        };
        Ok(AngleVector {
            n: self.n,
            convention: self.convention.kind,
            angles,
            beta,
        })
    }
}

/// One angle with its declared range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleSlot {
    pub i: usize,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// The U(1) phase β of a U(N) element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSlot {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Ordered Euler angles; serializes as `{n, convention, angles: [{i, value, lo, hi}], beta}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleVector {
    pub n: usize,
    pub convention: RangeKind,
    pub angles: Vec<AngleSlot>,
    #[serde(default)]
    pub beta: Option<PhaseSlot>,
}

impl AngleVector {
    /// Values ordered by slot index; fails unless slots are exactly `1..=len`.
    pub fn values(&self) -> Result<Vec<f64>> {
        let len = self.angles.len();
        let mut out = vec![f64::NAN; len];
        for slot in &self.angles {
            if slot.i == 0 || slot.i > len || !out[slot.i - 1].is_nan() {
                return Err(Error::Parse(format!(
                    "angle slots must be exactly 1..={len} (offending slot {})",
                    slot.i
                )));
            }
            out[slot.i - 1] = slot.value;
        }
        Ok(out)
    }

    /// Slot indices whose value lies outside its declared range (`0` stands for β).
    pub fn out_of_range(&self) -> Vec<usize> {
        let mut bad: Vec<usize> = self
            .angles
            .iter()
            .filter(|s| s.value < s.lo || s.value > s.hi)
            .map(|s| s.i)
            .collect();
        if let Some(b) = self.beta {
            if b.value < b.lo || b.value > b.hi {
                bad.push(0);
            }
        }
        bad
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("angle vectors always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    fn warn_out_of_range(&self) {
        for i in self.out_of_range() {
            log::warn!("angle slot {i} lies outside its declared range");
        }
    }
}

/// Offset `j(m)` of the level-`m` block inside SU(n).
pub fn j_offset(m: usize, n: usize) -> Result<usize> {
    if m < 2 || m > n {
        return Err(Error::dim(m, format!("level must satisfy 2 <= m <= {n}")));
    }
    Ok((0..n - m).map(|l| 2 * (m + l)).sum())
}

/// The `N²-1` factors of the SU(n) product, left to right, each paired with
/// the 1-based angle slot it consumes.
pub fn factor_sequence(n: usize) -> Result<Vec<(usize, GeneratorKind)>> {
    if n < 2 {
        return Err(Error::dim(n, "SU(n) needs n >= 2"));
    }
    let mut seq = Vec::with_capacity(n * n - 1);
    for m in (2..=n).rev() {
        let j = j_offset(m, n)?;
        seq.extend(block_factors(m, j));
    }
    for m in 2..=n {
        seq.push((n * (n - 1) + m - 1, GeneratorKind::Cartan { level: m }));
    }
    Ok(seq)
}

/// Factors of `∏_{k=2..m} A(k, j)`.
fn block_factors(m: usize, j: usize) -> impl Iterator<Item = (usize, GeneratorKind)> {
    (2..=m).flat_map(move |k| {
        [
            (2 * k - 3 + j, GeneratorKind::Cartan { level: 2 }),
            (2 * (k - 1) + j, GeneratorKind::Antisymmetric { row: 0, col: k - 1 }),
        ]
    })
}

/// SU(n) element from raw angle values in slot order.
pub fn su_matrix(n: usize, values: &[f64]) -> Result<ComplexSquareMatrix> {
    let seq = factor_sequence(n)?;
    if values.len() != seq.len() {
        return Err(Error::AngleCount {
            expected: seq.len(),
            got: values.len(),
        });
    }
    let mut u = ComplexSquareMatrix::identity(n);
    for (slot, kind) in seq {
        u.right_apply(kind, values[slot - 1]);
    }
    Ok(u)
}

/// Product of the truncated (flag-manifold) factors: the SU(n) product with
/// the Cartan string dropped. Takes the first `n(n-1)` angles.
pub fn flag_matrix(n: usize, values: &[f64]) -> Result<ComplexSquareMatrix> {
    if n < 2 {
        return Err(Error::dim(n, "SU(n) needs n >= 2"));
    }
    if values.len() != n * (n - 1) {
        return Err(Error::AngleCount {
            expected: n * (n - 1),
            got: values.len(),
        });
    }
    let mut u = ComplexSquareMatrix::identity(n);
    for m in (2..=n).rev() {
        for (slot, kind) in block_factors(m, j_offset(m, n)?) {
            u.right_apply(kind, values[slot - 1]);
        }
    }
    Ok(u)
}

/// SU(N) element for an angle vector. Out-of-range values are logged, not
/// rejected, since the map is periodic and both range conventions are valid charts.
pub fn su_element(basis: &GellMannBasis, angles: &AngleVector) -> Result<ComplexSquareMatrix> {
    if basis.n() != angles.n {
        return Err(Error::DimensionMismatch(format!(
            "basis is su({}) but angles are for SU({})",
            basis.n(),
            angles.n
        )));
    }
    angles.warn_out_of_range();
    su_matrix(angles.n, &angles.values()?)
}

/// U(N) element `[SU(N)] · e^{iλ_{(N+1)²-1} β}`, embedded in `(N+1) x (N+1)`.
/// Its upper-left `N x N` block is the U(N) element.
pub fn u_element(basis: &GellMannBasis, angles: &AngleVector) -> Result<ComplexSquareMatrix> {
    let n = angles.n;
    if n < 2 {
        return Err(Error::dim(
            n,
            "U(N) is only parameterized for N >= 2; at N = 1 the phase degenerates to the U(1) of SU(2)",
        ));
    }
    if basis.n() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "U({n}) needs the su({}) basis, got su({})",
            n + 1,
            basis.n()
        )));
    }
    let beta = angles.beta.ok_or(Error::MissingBeta)?;
    angles.warn_out_of_range();
    let su = su_matrix(n, &angles.values()?)?;
    let mut out = ComplexSquareMatrix::identity(n + 1);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, su.get(i, j));
        }
    }
    out.right_apply(GeneratorKind::Cartan { level: n + 1 }, beta.value);
    Ok(out)
}

/// Covering range `[0, π√(2m/(m-1))]` of the level-`m` Cartan angle; its
/// length is the volume of `U(1)_{SU(m)}`.
pub fn cartan_range(m: usize) -> f64 {
    let m = m as f64;
    PI * (2.0 * m / (m - 1.0)).sqrt()
}

fn block_ranges(m: usize, j: usize, kind: RangeKind, out: &mut Vec<AngleRange>) {
    for k in 1..m {
        let odd_hi = match (kind, k) {
            (RangeKind::Covering, 1) | (RangeKind::Quotient, _) => PI,
            (RangeKind::Covering, _) => 2.0 * PI,
        };
        out.push(AngleRange {
            index: j + 2 * k - 1,
            lo: 0.0,
            hi: odd_hi,
        });
        out.push(AngleRange {
            index: j + 2 * k,
            lo: 0.0,
            hi: FRAC_PI_2,
        });
    }
}

/// Range catalog for `context`; `n` is the group dimension, or the ℂPⁿ
/// index for [`RangeContext::CPn`].
pub fn range_catalog(n: usize, context: RangeContext, kind: RangeKind) -> Result<RangeTemplate> {
    let convention = RangeConvention::new(kind, context, n)?;
    let mut ranges = Vec::new();
    match context {
        RangeContext::CPn => {
            if n < 1 {
                return Err(Error::dim(n, "CP^n needs n >= 1"));
            }
            block_ranges(n + 1, 0, kind, &mut ranges);
        }
        RangeContext::TruncatedHaar | RangeContext::SuFull => {
            for m in (2..=n).rev() {
                block_ranges(m, j_offset(m, n)?, kind, &mut ranges);
            }
            if context == RangeContext::SuFull {
                for m in 2..=n {
                    ranges.push(AngleRange {
                        index: n * (n - 1) + m - 1,
                        lo: 0.0,
                        hi: cartan_range(m),
                    });
                }
            }
        }
        RangeContext::Hurwitz => {
            if n < 2 {
                return Err(Error::dim(n, "the Hurwitz chart needs n >= 2"));
            }
            for k in 1..n {
                ranges.push(AngleRange {
                    index: k,
                    lo: 0.0,
                    hi: FRAC_PI_2,
                });
            }
            for k in 1..n {
                ranges.push(AngleRange {
                    index: n - 1 + k,
                    lo: 0.0,
                    hi: 2.0 * PI,
                });
            }
        }
    }
    Ok(RangeTemplate {
        n,
        context,
        convention,
        ranges,
        beta: None,
    })
}

/// Covering ranges for U(n): the SU(n) catalog plus β ∈ `[0, π√(2(n+1)/n)]`.
pub fn u_range_catalog(n: usize) -> Result<RangeTemplate> {
    if n < 2 {
        return Err(Error::dim(
            n,
            "U(N) is only parameterized for N >= 2; at N = 1 the phase degenerates to the U(1) of SU(2)",
        ));
    }
    let mut t = range_catalog(n, RangeContext::SuFull, RangeKind::Covering)?;
    t.beta = Some((0.0, cartan_range(n + 1)));
    Ok(t)
}

/// Euler-chart state vector of a point of ℂPᴺ, `N = angles.len() / 2`.
///
/// This is the complex conjugate of the last column of the level-`(N+1)`
/// block `∏_{k=2..N+1} A(k, 0)`; at `N = 3` it is, component by component,
/// the two-qubit state
/// `(s₆c₄c₂ e^{-i(α₁+α₃+α₅)}, -s₆c₄s₂ e^{i(α₁-α₃-α₅)}, -s₆s₄ e^{-iα₅}, c₆)`.
pub fn cpn_state(angles: &[f64]) -> Result<Vec<Complex64>> {
    if angles.is_empty() || !angles.len().is_multiple_of(2) {
        return Err(Error::AngleCount {
            expected: 2 * (angles.len() / 2).max(1),
            got: angles.len(),
        });
    }
    let dim = angles.len() / 2 + 1;
    let mut v = vec![Complex64::zero(); dim];
    v[dim - 1] = Complex64::new(1.0, 0.0);
    for k in (2..=dim).rev() {
        // rightmost factor first: e^{iλ_{(k-1)²+1} α_{2k-2}}
        let (s, c) = angles[2 * k - 3].sin_cos();
        let (a, b) = (v[0], v[k - 1]);
        v[0] = a * c + b * s;
        v[k - 1] = b * c - a * s;
        let phase = Complex64::from_polar(1.0, angles[2 * k - 4]);
        v[0] *= phase;
        v[1] *= phase.conj();
    }
    Ok(v.into_iter().map(|z| z.conj()).collect())
}
