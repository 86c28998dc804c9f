//! Finite-dimensional complex Hilbert spaces: vectors, closed subspaces,
//! orthogonal projectors, the lattice operations of `L(H)` and Hermitian
//! operators.
//!
//! Inner products are linear in the left argument:
//! `(x, y) = Σ xᵢ·conj(yᵢ)`.
//!
//! JSON encoding: a complex scalar is `[re, im]` (a bare number is accepted
//! on input as a real scalar); matrices are row-major arrays of rows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerances;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl From<ScalarRepr> for Complex64 {
    fn from(s: ScalarRepr) -> Self {
        match s {
            ScalarRepr::Real(re) => Complex64::new(re, 0.0),
            ScalarRepr::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ScalarRepr {
    fn from(z: Complex64) -> Self {
        ScalarRepr::Complex([z.re, z.im])
    }
}

/// Largest absolute entry of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = m.nrows();
    let mut vecs = CMatrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[i]);
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Orthonormal basis of the span of eigenvectors whose eigenvalue exceeds
/// `threshold`.
fn eigen_range(m: &CMatrix, threshold: f64) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > threshold).collect();
    let mut basis = CMatrix::zeros(m.nrows(), keep.len());
    for (k, &i) in keep.iter().enumerate() {
        basis.set_column(k, &vecs.column(i));
    }
    basis
}

/// A vector of `ℂⁿ` with finite entries and `n > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ScalarRepr>", into = "Vec<ScalarRepr>")]
pub struct ComplexVector(DVector<Complex64>);

impl TryFrom<Vec<ScalarRepr>> for ComplexVector {
    type Error = Error;
    fn try_from(v: Vec<ScalarRepr>) -> Result<Self> {
        Self::new(v.into_iter().map(Complex64::from).collect())
    }
}

impl From<ComplexVector> for Vec<ScalarRepr> {
    fn from(v: ComplexVector) -> Self {
        v.0.iter().map(|&z| z.into()).collect()
    }
}

impl ComplexVector {
    pub fn new(components: Vec<Complex64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self(DVector::from_vec(components)))
    }

    pub fn from_real(components: &[f64]) -> Result<Self> {
        Self::new(components.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The `i`-th canonical basis vector (0-indexed) of `ℂⁿ`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = DVector::from_element(dim, ZERO);
        v[i] = ONE;
        Self(v)
    }

    pub(crate) fn from_dvector(v: DVector<Complex64>) -> Self {
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn components(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    /// `(self, other)`, linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(x, y)| x * y.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| Self(self.0.unscale(n)))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self(self.0.map(|c| c * z))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A closed subspace `M` of `ℂⁿ`, stored as an `n×dim M` matrix with
/// orthonormal columns. The zero subspace has zero columns.
///
/// Equality of subspaces is projector proximity, see [`Subspace::approx_eq`].
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMatrix,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: CMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    /// Span of the canonical basis vectors with the given 0-based indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Result<Self> {
        let vs: Vec<ComplexVector> = indices
            .iter()
            .map(|&i| {
                if i < ambient_dim {
                    Ok(ComplexVector::basis(ambient_dim, i))
                } else {
                    Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        found: i + 1,
                    })
                }
            })
            .collect::<Result<_>>()?;
        orthonormalize(ambient_dim, &vs, &Tolerances::default())
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(basis: CMatrix, tol: &Tolerances) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let defect = max_abs(&(gram - CMatrix::identity(k, k)));
        if defect > tol.construction {
            return Err(Error::BadBasis(format!(
                "columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    pub fn span(ambient_dim: usize, vectors: &[ComplexVector]) -> Result<Self> {
        orthonormalize(ambient_dim, vectors, &Tolerances::default())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<ComplexVector> {
        self.basis
            .column_iter()
            .map(|c| ComplexVector(c.into_owned()))
            .collect()
    }

    pub fn projector_matrix(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// True if `‖P_M x − x‖ ≤ tol·max(1, ‖x‖)`.
    pub fn contains(&self, x: &ComplexVector, tol: f64) -> Result<bool> {
        check_dim(self.ambient_dim, x.dim())?;
        let px = self.projector_matrix() * x.as_dvector();
        Ok((px - x.as_dvector()).norm() <= tol * x.norm().max(1.0))
    }

    /// Projector proximity: `‖P_M − P_N‖_max ≤ tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() == other.dim()
            && max_abs(&(self.projector_matrix() - other.projector_matrix())) <= tol
    }

    pub fn is_subspace_of(&self, other: &Self, tol: f64) -> Result<bool> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let p = other.projector_matrix();
        let residual = &p * &self.basis - &self.basis;
        Ok(max_abs(&residual) <= tol)
    }
}

/// Gram-Schmidt with one re-orthogonalization pass. Vectors whose residual
/// falls below the pivot tolerance (`construction`, relative to the input
/// norm) are dropped as linearly dependent.
pub fn orthonormalize(
    ambient_dim: usize,
    vectors: &[ComplexVector],
    tol: &Tolerances,
) -> Result<Subspace> {
    if ambient_dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut cols: Vec<DVector<Complex64>> = Vec::new();
    for v in vectors {
        check_dim(ambient_dim, v.dim())?;
        let scale = v.norm().max(1.0);
        let mut w = v.0.clone();
        for _ in 0..2 {
            for q in &cols {
                let c = q.dotc(&w);
                w -= q * c;
            }
        }
        let n = w.norm();
        if n > tol.construction * scale {
            cols.push(w.unscale(n));
        }
        if cols.len() == ambient_dim {
            break;
        }
    }
    let basis = if cols.is_empty() {
        CMatrix::zeros(ambient_dim, 0)
    } else {
        CMatrix::from_columns(&cols)
    };
    Ok(Subspace { ambient_dim, basis })
}

pub fn projector(m: &Subspace) -> HermitianOp {
    HermitianOp(m.projector_matrix())
}

/// `M ∨ N`: the range of `P_M + P_N`.
pub fn join(m: &Subspace, n: &Subspace) -> Result<Subspace> {
    check_dim(m.ambient_dim, n.ambient_dim)?;
    let sum = m.projector_matrix() + n.projector_matrix();
    Ok(Subspace {
        ambient_dim: m.ambient_dim,
        basis: eigen_range(&sum, Tolerances::default().construction),
    })
}

/// `M⊥`: the eigenvalue-one eigenspace of `I − P_M`.
pub fn ortho_complement(m: &Subspace) -> Subspace {
    let n = m.ambient_dim;
    let c = CMatrix::identity(n, n) - m.projector_matrix();
    Subspace {
        ambient_dim: n,
        basis: eigen_range(&c, 0.5),
    }
}

/// `M ∧ N = (M⊥ ∨ N⊥)⊥`.
pub fn meet(m: &Subspace, n: &Subspace) -> Result<Subspace> {
    Ok(ortho_complement(&join(
        &ortho_complement(m),
        &ortho_complement(n),
    )?))
}

pub fn is_orthogonal(m: &Subspace, n: &Subspace, tol: &Tolerances) -> Result<bool> {
    Ok(overlap(m, n)? <= tol.comparison)
}

/// `‖P_M P_N‖_max`.
pub fn overlap(m: &Subspace, n: &Subspace) -> Result<f64> {
    check_dim(m.ambient_dim, n.ambient_dim)?;
    Ok(max_abs(&(m.projector_matrix() * n.projector_matrix())))
}

/// A Hermitian operator on `ℂⁿ`. Every finite-dimensional Hermitian operator
/// is trace class, so this type also plays the role of `Tr(H)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<ScalarRepr>>", into = "Vec<Vec<ScalarRepr>>")]
pub struct HermitianOp(CMatrix);

impl TryFrom<Vec<Vec<ScalarRepr>>> for HermitianOp {
    type Error = Error;
    fn try_from(rows: Vec<Vec<ScalarRepr>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        let m = CMatrix::from_fn(n, n, |i, j| rows[i][j].into());
        Self::new(m, &Tolerances::default())
    }
}

impl From<HermitianOp> for Vec<Vec<ScalarRepr>> {
    fn from(op: HermitianOp) -> Self {
        op.0.row_iter()
            .map(|r| r.iter().map(|&z| z.into()).collect())
            .collect()
    }
}

impl HermitianOp {
    /// Validates squareness, finiteness and `‖A − Aᴴ‖_max ≤ construction`,
    /// then stores the exactly symmetrized matrix `(A + Aᴴ)/2`.
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::EmptyDimension);
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        let defect = max_abs(&(&m - m.adjoint()));
        if defect > tol.construction {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self((&m + m.adjoint()).scale(0.5)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self(CMatrix::from_diagonal(&d))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// `Σ Aᵢᵢ`; the imaginary part is zero up to rounding and discarded.
    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    /// `tr(A·P_M) = Σⱼ (A bⱼ, bⱼ)` over the stored ONB of `M`.
    pub fn compressed_trace(&self, m: &Subspace) -> Result<f64> {
        check_dim(self.dim(), m.ambient_dim())?;
        let ab = &self.0 * m.basis();
        Ok(m.basis()
            .column_iter()
            .zip(ab.column_iter())
            .map(|(b, a)| b.dotc(&a).re)
            .sum())
    }

    /// The `dim M × dim M` matrix `Bᴴ A B` for the stored ONB `B` of `M`.
    pub fn compression(&self, m: &Subspace) -> Result<CMatrix> {
        check_dim(self.dim(), m.ambient_dim())?;
        Ok(m.basis().adjoint() * &self.0 * m.basis())
    }

    pub fn apply(&self, x: &ComplexVector) -> Result<ComplexVector> {
        check_dim(self.dim(), x.dim())?;
        Ok(ComplexVector(&self.0 * x.as_dvector()))
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Ascending eigenvalues with orthonormal eigenvectors as columns.
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        hermitian_eigen(&self.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Operator norm `max |λ|`.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0_f64, |a, l| a.max(l.abs()))
    }

    pub fn is_positive(&self, tol: &Tolerances) -> bool {
        self.min_eigenvalue() >= -tol.comparison
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 - &other.0))
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self(self.0.scale(alpha))
    }

    /// Jordan product `(AB + BA)/2`, Hermitian whenever both factors are.
    pub fn jordan(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        let ab = &self.0 * &other.0;
        let ba = &other.0 * &self.0;
        Ok(Self((ab + ba).scale(0.5)))
    }

    /// Unitary conjugation `U A Uᴴ`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<Self> {
        check_dim(self.dim(), u.nrows())?;
        let m = u * &self.0 * u.adjoint();
        Ok(Self((&m + m.adjoint()).scale(0.5)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs(&(&self.0 - &other.0))
    }
}

/// `tr(A)` as a free function.
pub fn trace(t: &HermitianOp) -> f64 {
    t.trace()
}

/// `tr(T·P_M)`.
pub fn compressed_trace(t: &HermitianOp, m: &Subspace) -> Result<f64> {
    t.compressed_trace(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[f64]) -> ComplexVector {
        ComplexVector::from_real(v).unwrap()
    }

    #[test]
    fn orthonormalize_full_space_from_two_vectors() {
        let m = Subspace::span(2, &[r(&[1.0, 0.0]), r(&[1.0, 1.0])]).unwrap();
        assert_eq!(m.dim(), 2);
        assert!(m.approx_eq(&Subspace::full(2), 1e-12));
    }

    #[test]
    fn dependent_vector_is_dropped() {
        let m = Subspace::span(2, &[r(&[1.0, 0.0]), r(&[2.0, 0.0])]).unwrap();
        assert_eq!(m.dim(), 1);
        assert!(m.approx_eq(&Subspace::coordinate(2, &[0]).unwrap(), 1e-12));
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            Subspace::span(3, &[r(&[1.0, 0.0])]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(orthonormalize(0, &[], &Tolerances::default()), Err(Error::EmptyDimension)));
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(join(&a, &b).is_err());
        assert!(meet(&a, &b).is_err());
        assert!(is_orthogonal(&a, &b, &Tolerances::default()).is_err());
    }

    #[test]
    fn projector_of_axis_and_zero() {
        let p = projector(&Subspace::coordinate(2, &[0]).unwrap());
        let expect = HermitianOp::from_real_diagonal(&[1.0, 0.0]);
        assert!(p.max_abs_diff(&expect) < 1e-15);
        let z = projector(&Subspace::zero(3));
        assert!(z.max_abs_diff(&HermitianOp::zeros(3)) == 0.0);
    }

    #[test]
    fn lattice_examples() {
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        let e2 = Subspace::coordinate(3, &[1]).unwrap();
        assert_eq!(join(&e1, &e2).unwrap().dim(), 2);
        let a = Subspace::coordinate(3, &[0, 1]).unwrap();
        let b = Subspace::coordinate(3, &[1, 2]).unwrap();
        let m = meet(&a, &b).unwrap();
        assert!(m.approx_eq(&e2, 1e-9));
        assert!(is_orthogonal(&e1, &e2, &Tolerances::default()).unwrap());
        assert!(!is_orthogonal(&a, &b, &Tolerances::default()).unwrap());
    }

    #[test]
    fn traces() {
        let t = HermitianOp::from_real_diagonal(&[0.5, 1.0 / 3.0, 1.0 / 6.0]);
        let m = Subspace::coordinate(3, &[0, 1]).unwrap();
        assert!((t.compressed_trace(&m).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((HermitianOp::identity(4).compressed_trace(&m.clone()).is_err()));
        let i3 = HermitianOp::identity(3);
        assert!((i3.compressed_trace(&m).unwrap() - 2.0).abs() < 1e-15);
        assert!((t.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[ONE, ONE, ZERO, ONE],
        );
        assert!(matches!(
            HermitianOp::new(m, &Tolerances::default()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn json_encoding() {
        let t: HermitianOp = serde_json::from_str("[[1, [0, 1]], [[0, -1], 2]]").unwrap();
        assert_eq!(t.matrix()[(0, 1)], Complex64::new(0.0, 1.0));
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, "[[[1.0,0.0],[0.0,1.0]],[[0.0,-1.0],[2.0,0.0]]]");
        assert!(serde_json::from_str::<HermitianOp>("[[1, 2], [3, 4]]").is_err());
        assert!(serde_json::from_str::<HermitianOp>("[[1, 2]]").is_err());
        let v: ComplexVector = serde_json::from_str("[1, [0.5, -0.5]]").unwrap();
        assert_eq!(v.dim(), 2);
    }
}
