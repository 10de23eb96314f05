//! Complex matrices, the generalized Gell-Mann basis of su(N), and
//! exponentials of its generators.
//!
//! Generators are numbered from 1 in the nested ordering used by the Euler
//! factorization: level `m` (for `m = 2..=N`) owns the indices
//! `(m-1)^2 ..= m^2 - 1`. Within a level the off-diagonal generators couple
//! row `l` to row `m` for `l = 1..m`, symmetric first then antisymmetric,
//! and the level closes with its Cartan generator `λ_{m²-1}`. Consequently
//! `λ_{(k-1)²+1}` is always the antisymmetric generator coupling rows 1 and
//! `k`, with `(λ)_{1k} = -i` and `(λ)_{k1} = +i`.

use nalgebra::{DMatrix, SymmetricEigen};
use num::complex::Complex64;
use num::{One, Zero};

use crate::error::{Error, Result};

/// Default absolute tolerance for unitarity and orthonormality checks.
pub const UNITARY_TOL: f64 = 1e-12;

/// A dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSquareMatrix(DMatrix<Complex64>);

impl ComplexSquareMatrix {
    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds a diagonal matrix.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { Complex64::zero() })
    }

    /// Row-major construction. Fails unless `entries.len()` is a perfect square.
    pub fn from_row_major(entries: &[Complex64]) -> Result<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                entries.len()
            )));
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        self.0.column(col).iter().copied().collect()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self(&self.0 * &rhs.0)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self(&self.0 + &rhs.0)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self(&self.0 - &rhs.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − 1‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self.0.adjoint() * &self.0;
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { Complex64::one() } else { Complex64::zero() };
                worst = worst.max((gram[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() < tol
    }

    /// `‖A − A†‖_max`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part
    /// of `self` is used.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let mut vals: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    /// Upper-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self(self.0.view((0, 0), (k, k)).into_owned())
    }

    /// Right-multiplies in place by the one-parameter factor `e^{iλα}`, using
    /// the generator's structure instead of a dense product.
    pub fn right_apply(&mut self, kind: GeneratorKind, angle: f64) {
        let n = self.dim();
        match kind {
            GeneratorKind::Symmetric { row, col } => {
                // e^{iα σx} on (row, col): [[c, i s], [i s, c]]
                let (s, c) = angle.sin_cos();
                let is = Complex64::new(0.0, s);
                for r in 0..n {
                    let a = self.0[(r, row)];
                    let b = self.0[(r, col)];
                    self.0[(r, row)] = a * c + b * is;
                    self.0[(r, col)] = a * is + b * c;
                }
            }
            GeneratorKind::Antisymmetric { row, col } => {
                // e^{iα σy} on (row, col): [[c, s], [-s, c]]
                let (s, c) = angle.sin_cos();
                for r in 0..n {
                    let a = self.0[(r, row)];
                    let b = self.0[(r, col)];
                    self.0[(r, row)] = a * c - b * s;
                    self.0[(r, col)] = a * s + b * c;
                }
            }
            GeneratorKind::Cartan { level } => {
                let (low, last) = cartan_phases(level, angle);
                for col in 0..level {
                    let phase = if col + 1 == level { last } else { low };
                    for r in 0..n {
                        self.0[(r, col)] *= phase;
                    }
                }
            }
        }
    }
}

/// The two phases `e^{iα c}` and `e^{-iα (m-1) c}` with `c = √(2/(m(m-1)))`
/// that make up the exponential of the level-`m` Cartan generator.
fn cartan_phases(level: usize, angle: f64) -> (Complex64, Complex64) {
    let m = level as f64;
    let c = (2.0 / (m * (m - 1.0))).sqrt();
    (
        Complex64::from_polar(1.0, angle * c),
        Complex64::from_polar(1.0, -angle * (m - 1.0) * c),
    )
}

/// Structural kind of a basis generator. Rows and columns are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `E_{row,col} + E_{col,row}`.
    Symmetric { row: usize, col: usize },
    /// `-i E_{row,col} + i E_{col,row}`.
    Antisymmetric { row: usize, col: usize },
    /// `√(2/(m(m-1))) diag(1, …, 1, -(m-1), 0, …, 0)` for `m = level`.
    Cartan { level: usize },
}

impl GeneratorKind {
    /// Kind of the 1-based generator `index` of su(n).
    pub fn of_index(n: usize, index: usize) -> Result<Self> {
        if index == 0 || index > n * n - 1 {
            return Err(Error::GeneratorIndex {
                index,
                max: n * n - 1,
            });
        }
        // level m owns (m-1)^2 ..= m^2 - 1
        let mut m = 2;
        while m * m - 1 < index {
            m += 1;
        }
        let offset = index - (m - 1) * (m - 1);
        let col = m - 1;
        Ok(if offset == 2 * (m - 1) {
            GeneratorKind::Cartan { level: m }
        } else if offset.is_multiple_of(2) {
            GeneratorKind::Symmetric {
                row: offset / 2,
                col,
            }
        } else {
            GeneratorKind::Antisymmetric {
                row: offset / 2,
                col,
            }
        })
    }

    fn matrix(self, n: usize) -> ComplexSquareMatrix {
        let mut m = ComplexSquareMatrix::zeros(n);
        match self {
            GeneratorKind::Symmetric { row, col } => {
                m.set(row, col, Complex64::one());
                m.set(col, row, Complex64::one());
            }
            GeneratorKind::Antisymmetric { row, col } => {
                m.set(row, col, Complex64::new(0.0, -1.0));
                m.set(col, row, Complex64::new(0.0, 1.0));
            }
            GeneratorKind::Cartan { level } => {
                let l = level as f64;
                let c = (2.0 / (l * (l - 1.0))).sqrt();
                for i in 0..level - 1 {
                    m.set(i, i, Complex64::new(c, 0.0));
                }
                m.set(level - 1, level - 1, Complex64::new(-(l - 1.0) * c, 0.0));
            }
        }
        m
    }
}

/// The `N² − 1` generalized Gell-Mann generators of su(N).
#[derive(Debug, Clone)]
pub struct GellMannBasis {
    n: usize,
    kinds: Vec<GeneratorKind>,
    generators: Vec<ComplexSquareMatrix>,
}

impl GellMannBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator `λ_index` (1-based).
    pub fn generator(&self, index: usize) -> Result<&ComplexSquareMatrix> {
        self.check_index(index)?;
        Ok(&self.generators[index - 1])
    }

    pub fn kind(&self, index: usize) -> Result<GeneratorKind> {
        self.check_index(index)?;
        Ok(self.kinds[index - 1])
    }

    pub fn generators(&self) -> &[ComplexSquareMatrix] {
        &self.generators
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.generators.len() {
            return Err(Error::GeneratorIndex {
                index,
                max: self.generators.len(),
            });
        }
        Ok(())
    }
}

/// Builds the generalized Gell-Mann basis of su(n).
pub fn gell_mann_basis(n: usize) -> Result<GellMannBasis> {
    if n < 2 {
        return Err(Error::dim(n, "su(n) needs n >= 2"));
    }
    let kinds = (1..n * n)
        .map(|i| GeneratorKind::of_index(n, i))
        .collect::<Result<Vec<_>>>()?;
    let generators = kinds.iter().map(|k| k.matrix(n)).collect();
    Ok(GellMannBasis {
        n,
        kinds,
        generators,
    })
}

/// `e^{iλ_index · angle}`.
///
/// Every generator of this basis is either diagonal or supported on a 2x2
/// block, so the closed forms below cover all indices; [`exp_hermitian`] is
/// the general fallback.
pub fn exp_generator(basis: &GellMannBasis, index: usize, angle: f64) -> Result<ComplexSquareMatrix> {
    let kind = basis.kind(index)?;
    let mut out = ComplexSquareMatrix::identity(basis.n());
    out.right_apply(kind, angle);
    Ok(out)
}

/// `e^{iHt}` for Hermitian `H` via eigendecomposition.
pub fn exp_hermitian(h: &ComplexSquareMatrix, t: f64) -> ComplexSquareMatrix {
    let eig = SymmetricEigen::new(h.as_dmatrix().clone());
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|lam| Complex64::from_polar(1.0, lam * t)));
    ComplexSquareMatrix(v * phases * v.adjoint())
}

/// Serialized as rows of `[re, im]` pairs.
impl serde::Serialize for ComplexSquareMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for ComplexSquareMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("matrix rows must form a square"));
        }
        let entries: Vec<Complex64> = rows.into_iter().flatten().map(|[re, im]| Complex64::new(re, im)).collect();
        Self::from_row_major(&entries).map_err(serde::de::Error::custom)
    }
}
