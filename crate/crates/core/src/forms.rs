//! Bounded symmetric forms on `ℂⁿ`, their order and arithmetic, frame
//! functions and their weights, and polarization recovery of the generator.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{check_dim, max_abs, CMatrix, ComplexVector, HermitianOp, Subspace};
use crate::random::random_unit_vector;
use crate::tol::Tolerances;

/// `t(x, y) = (A x, y)` for a Hermitian generator `A`, so `D(t) = H` and
/// `t(x, y) = conj(t(y, x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixForm {
    op: HermitianOp,
}

impl MatrixForm {
    pub fn new(op: HermitianOp) -> Self {
        Self { op }
    }

    /// The form `o` with `o(x, y) = 0`.
    pub fn zero(dim: usize) -> Self {
        Self::new(HermitianOp::zeros(dim))
    }

    pub fn generator(&self) -> &HermitianOp {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn eval(&self, x: &ComplexVector, y: &ComplexVector) -> Result<Complex64> {
        self.op.apply(x)?.inner(y)
    }
}

/// `t(x, x)`, real by Hermitian symmetry.
pub fn quad(t: &MatrixForm, x: &ComplexVector) -> Result<f64> {
    Ok(t.eval(x, x)?.re)
}

pub fn form_sum(t: &MatrixForm, s: &MatrixForm) -> Result<MatrixForm> {
    Ok(MatrixForm::new(t.op.add(&s.op)?))
}

pub fn scalar_mul(alpha: f64, t: &MatrixForm) -> MatrixForm {
    MatrixForm::new(t.op.scale(alpha))
}

/// `t ⪯ s`. Domains coincide in finite dimension, so this is
/// `t(x,x) ≤ s(x,x)` for all `x`, i.e. `s − t` positive semidefinite.
pub fn form_leq(t: &MatrixForm, s: &MatrixForm, tol: &Tolerances) -> Result<bool> {
    check_dim(t.dim(), s.dim())?;
    Ok(s.op.sub(&t.op)?.min_eigenvalue() >= -tol.comparison)
}

/// `f(x) = t(x, x)` restricted to unit vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFunctionView {
    source: MatrixForm,
}

impl FrameFunctionView {
    pub fn new(source: MatrixForm) -> Self {
        Self { source }
    }

    pub fn from_generator(op: HermitianOp) -> Self {
        Self::new(MatrixForm::new(op))
    }

    pub fn source(&self) -> &MatrixForm {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// Value at a unit vector; rejects vectors off the unit sphere.
    pub fn value(&self, x: &ComplexVector) -> Result<f64> {
        if !x.is_unit(Tolerances::default().construction) {
            return Err(Error::NotUnit { norm: x.norm() });
        }
        quad(&self.source, x)
    }
}

/// `W_M = Σᵢ f(xᵢ)` over the given ONB of `M`, or over the stored basis when
/// none is supplied.
pub fn frame_weight(
    f: &FrameFunctionView,
    m: &Subspace,
    onb: Option<&[ComplexVector]>,
    tol: &Tolerances,
) -> Result<f64> {
    check_dim(f.dim(), m.ambient_dim())?;
    let basis = match onb {
        None => m.basis_vectors(),
        Some(vs) => {
            validate_onb(m, vs, tol)?;
            vs.to_vec()
        }
    };
    basis.iter().map(|x| quad(&f.source, x)).sum()
}

fn validate_onb(m: &Subspace, vs: &[ComplexVector], tol: &Tolerances) -> Result<()> {
    if vs.len() != m.dim() {
        return Err(Error::BadBasis(format!(
            "{} vectors given for a subspace of dimension {}",
            vs.len(),
            m.dim()
        )));
    }
    for (i, x) in vs.iter().enumerate() {
        check_dim(m.ambient_dim(), x.dim())?;
        if !m.contains(x, tol.comparison)? {
            return Err(Error::BadBasis(format!("vector {i} is not inside the subspace")));
        }
        for (j, y) in vs.iter().enumerate() {
            let g = x.inner(y)?;
            let expect = if i == j { 1.0 } else { 0.0 };
            if (g - Complex64::new(expect, 0.0)).norm() > tol.comparison {
                return Err(Error::BadBasis(format!("vectors {i} and {j} are not orthonormal")));
            }
        }
    }
    Ok(())
}

/// Result of [`polarize_recover`].
#[derive(Debug, Clone)]
pub struct Recovery {
    pub form: MatrixForm,
    /// `max |A − Aᴴ|` of the raw polarized matrix.
    pub hermitian_defect: f64,
    /// Largest `|t(x,x) − f(x)|` over the probe vectors.
    pub roundtrip_defect: f64,
    /// Set when `dim = 2`, where a frame function need not come from an
    /// operator; polarization still applies but uniqueness is not implied.
    pub outside_uniqueness_hypothesis: bool,
}

/// Recovers the generator of a quadratic form from its values on the unit
/// sphere.
///
/// `f` is extended by homogeneity, `q(z) = ‖z‖²·f(z/‖z‖)` and `q(0) = 0`,
/// and the generator is read off from
/// `t(x, y) = ¼ Σ_{k=0..3} iᵏ q(x + iᵏ y)` on the canonical basis:
/// `A_{jl} = t(e_l, e_j)`.
///
/// The reconstruction is rejected when the polarized matrix is not Hermitian
/// or fails to reproduce `f` on a fixed set of probe vectors; either means
/// `f` is not the quadratic form of any operator.
pub fn polarize_recover<F>(f: F, dim: usize, tol: &Tolerances) -> Result<Recovery>
where
    F: Fn(&ComplexVector) -> f64,
{
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let q = |z: &ComplexVector| -> f64 {
        let n = z.norm();
        if n == 0.0 {
            0.0
        } else {
            let unit = z.scale(Complex64::new(1.0 / n, 0.0));
            n * n * f(&unit)
        }
    };
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let e: Vec<ComplexVector> = (0..dim).map(|i| ComplexVector::basis(dim, i)).collect();
    let mut a = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        for l in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for &ph in &phases {
                let z = e[l].add(&e[j].scale(ph))?;
                acc += ph * q(&z);
            }
            a[(j, l)] = acc * 0.25;
        }
    }
    let hermitian_defect = max_abs(&(&a - a.adjoint()));
    if !hermitian_defect.is_finite() {
        return Err(Error::Polarization("f is not finite on the unit sphere".into()));
    }
    if hermitian_defect > tol.comparison {
        return Err(Error::Polarization(format!(
            "polarized matrix is not Hermitian (defect {hermitian_defect:e}); \
             f is not the quadratic form of an operator"
        )));
    }
    let op = HermitianOp::new(a, &Tolerances { construction: f64::INFINITY, ..*tol })?;
    let form = MatrixForm::new(op);

    // Fixed probes independent of the polarization stencil.
    let mut probe_rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut roundtrip_defect = 0.0_f64;
    for _ in 0..(2 * dim + 4) {
        let x = random_unit_vector(&mut probe_rng, dim);
        let d = (quad(&form, &x)? - f(&x)).abs();
        roundtrip_defect = roundtrip_defect.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    let scale = form.generator().operator_norm().max(1.0);
    if roundtrip_defect > tol.comparison * scale {
        return Err(Error::Polarization(format!(
            "recovered form does not reproduce f (defect {roundtrip_defect:e}); \
             f is not the quadratic form of an operator"
        )));
    }
    Ok(Recovery {
        form,
        hermitian_defect,
        roundtrip_defect,
        outside_uniqueness_hypothesis: dim == 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Subspace;
    use crate::random::{random_hermitian, rng};

    fn diag(d: &[f64]) -> MatrixForm {
        MatrixForm::new(HermitianOp::from_real_diagonal(d))
    }

    #[test]
    fn quad_examples() {
        let x = ComplexVector::from_real(&[0.6, 0.8]).unwrap();
        assert!((quad(&diag(&[1.0, 1.0]), &x).unwrap() - 1.0).abs() < 1e-15);
        let e2 = ComplexVector::basis(2, 1);
        assert_eq!(quad(&diag(&[2.0, -1.0]), &e2).unwrap(), -1.0);
        assert!(quad(&diag(&[1.0, 1.0, 1.0]), &e2).is_err());
    }

    #[test]
    fn sum_and_scaling_identities() {
        let mut r = rng(3);
        let t = MatrixForm::new(random_hermitian(&mut r, 4));
        let o = MatrixForm::zero(4);
        assert_eq!(form_sum(&t, &o).unwrap(), t);
        assert_eq!(scalar_mul(0.0, &t).generator().max_abs_diff(o.generator()), 0.0);
        assert!(form_sum(&t, &MatrixForm::zero(3)).is_err());
    }

    #[test]
    fn order_examples() {
        let tol = Tolerances::default();
        let mut r = rng(9);
        let p = MatrixForm::new(crate::random::random_positive(&mut r, 3));
        assert!(form_leq(&MatrixForm::zero(3), &p, &tol).unwrap());
        assert!(form_leq(&diag(&[1.0, 1.0]), &diag(&[1.0, 2.0]), &tol).unwrap());
        assert!(!form_leq(&diag(&[2.0, 0.0]), &diag(&[0.0, 2.0]), &tol).unwrap());
        assert!(!form_leq(&diag(&[0.0, 2.0]), &diag(&[2.0, 0.0]), &tol).unwrap());
    }

    #[test]
    fn weights_of_diagonal_and_state() {
        let tol = Tolerances::default();
        let f = FrameFunctionView::new(diag(&[1.0, 2.0, 3.0]));
        let m = Subspace::coordinate(3, &[0, 2]).unwrap();
        assert!((frame_weight(&f, &m, None, &tol).unwrap() - 4.0).abs() < 1e-14);
        let state = FrameFunctionView::new(diag(&[0.5, 0.25, 0.25]));
        let w = frame_weight(&state, &Subspace::full(3), None, &tol).unwrap();
        assert!((w - 1.0).abs() < 1e-14);
    }

    #[test]
    fn weight_rejects_basis_outside_subspace() {
        let tol = Tolerances::default();
        let f = FrameFunctionView::new(diag(&[1.0, 2.0, 3.0]));
        let m = Subspace::coordinate(3, &[0, 2]).unwrap();
        let bad = vec![ComplexVector::basis(3, 0), ComplexVector::basis(3, 1)];
        assert!(matches!(frame_weight(&f, &m, Some(&bad), &tol), Err(Error::BadBasis(_))));
        let short = vec![ComplexVector::basis(3, 0)];
        assert!(frame_weight(&f, &m, Some(&short), &tol).is_err());
    }

    #[test]
    fn value_requires_unit_vector() {
        let f = FrameFunctionView::new(diag(&[1.0, 2.0]));
        let x = ComplexVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(f.value(&x), Err(Error::NotUnit { .. })));
    }

    #[test]
    fn recover_identity_from_constant_function() {
        let rec = polarize_recover(|_| 1.0, 3, &Tolerances::default()).unwrap();
        assert!(rec.form.generator().max_abs_diff(&HermitianOp::identity(3)) < 1e-12);
        assert!(!rec.outside_uniqueness_hypothesis);
    }

    #[test]
    fn recover_complex_two_by_two_flags_dimension() {
        let t: HermitianOp = serde_json::from_str("[[1, [0, 1]], [[0, -1], 2]]").unwrap();
        let f = FrameFunctionView::from_generator(t.clone());
        let rec = polarize_recover(|x| f.value(x).unwrap(), 2, &Tolerances::default()).unwrap();
        assert!(rec.form.generator().max_abs_diff(&t) <= 1e-9);
        assert!(rec.outside_uniqueness_hypothesis);
    }

    #[test]
    fn non_quadratic_functions_are_diagnosed() {
        let tol = Tolerances::default();
        // Not phase invariant: the polarized matrix is not Hermitian.
        let im_product = |x: &ComplexVector| 1.0 + (x.components()[0] * x.components()[1]).im;
        let err = polarize_recover(im_product, 3, &tol).unwrap_err();
        assert!(err.to_string().contains("not Hermitian"), "{err}");
        // Real-part dependence polarizes to the identity, which the probes reject.
        let re_part = |x: &ComplexVector| x.components().iter().map(|z| z.re * z.re).sum::<f64>();
        let err = polarize_recover(re_part, 3, &tol).unwrap_err();
        assert!(err.to_string().contains("does not reproduce"), "{err}");
        // Phase invariant but quartic: caught by the round-trip probes.
        let quartic = |x: &ComplexVector| x.components()[0].norm_sqr().powi(2);
        assert!(matches!(polarize_recover(quartic, 3, &tol), Err(Error::Polarization(_))));
    }
}
