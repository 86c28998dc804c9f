//! Seeded random instances for property checks.
//!
//! Every randomized suite derives one generator per instance from
//! `(seed, index)`, so results do not depend on scheduling or thread count.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{orthonormalize, CMatrix, ComplexVector, HermitianOp, Subspace};
use crate::tol::Tolerances;

pub type LabRng = ChaCha8Rng;

pub fn rng(seed: u64) -> LabRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for instance `index` of a suite seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> LabRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index.wrapping_add(1));
    r
}

pub fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    ComplexVector::from_dvector(DVector::from_fn(dim, |_, _| complex_gaussian(rng)))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> ComplexVector {
    loop {
        if let Some(v) = random_vector(rng, dim).normalized() {
            return v;
        }
    }
}

/// `(G + Gᴴ)/2` for a complex Gaussian `G`.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize) -> HermitianOp {
    let g = gaussian_matrix(rng, dim, dim);
    HermitianOp::new((&g + g.adjoint()).scale(0.5), &Tolerances::default())
        .expect("symmetrized matrix is Hermitian")
}

/// `G Gᴴ`, positive semidefinite.
pub fn random_positive<R: Rng>(rng: &mut R, dim: usize) -> HermitianOp {
    let g = gaussian_matrix(rng, dim, dim);
    HermitianOp::new(&g * g.adjoint(), &Tolerances::default()).expect("GGᴴ is Hermitian")
}

/// Normalized `G Gᴴ / tr(G Gᴴ)`.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> HermitianOp {
    let p = random_positive(rng, dim);
    let t = p.trace();
    p.scale(1.0 / t)
}

/// Unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
    loop {
        let vs: Vec<ComplexVector> = (0..dim).map(|_| random_vector(rng, dim)).collect();
        let s = orthonormalize(dim, &vs, &Tolerances::default()).expect("dimensions agree");
        if s.dim() == dim {
            return s.basis().clone();
        }
    }
}

pub fn random_subspace<R: Rng>(rng: &mut R, ambient: usize, dim: usize) -> Subspace {
    let u = random_unitary(rng, ambient);
    Subspace::from_orthonormal(u.columns(0, dim).into_owned(), &Tolerances::default())
        .expect("columns of a unitary are orthonormal")
}

/// Two orthogonal subspaces with random dimensions, `1 ≤ dim M`, `dim N` and
/// `dim M + dim N ≤ ambient`.
pub fn random_orthogonal_pair<R: Rng>(rng: &mut R, ambient: usize) -> (Subspace, Subspace) {
    let u = random_unitary(rng, ambient);
    let k = rng.random_range(1..ambient);
    let l = rng.random_range(1..=ambient - k);
    let tol = Tolerances::default();
    let m = Subspace::from_orthonormal(u.columns(0, k).into_owned(), &tol).expect("orthonormal");
    let n = Subspace::from_orthonormal(u.columns(k, l).into_owned(), &tol).expect("orthonormal");
    (m, n)
}

/// A second, randomly rotated orthonormal basis of `m`.
pub fn random_onb_of<R: Rng>(rng: &mut R, m: &Subspace) -> Vec<ComplexVector> {
    let k = m.dim();
    if k == 0 {
        return Vec::new();
    }
    let w = random_unitary(rng, k);
    let b = m.basis() * w;
    b.column_iter()
        .map(|c| ComplexVector::from_dvector(c.into_owned()))
        .collect()
}
