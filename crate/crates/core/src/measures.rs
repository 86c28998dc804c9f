//! Gleason measures `m(M) = tr(T·P_M)` on the subspace lattice of `ℂⁿ`.
//!
//! In finite dimension finite, σ- and complete additivity coincide, every
//! value is finite, and signed measures come from indefinite generators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{polarize_recover, FrameFunctionView, MatrixForm};
use crate::hilbert::{check_dim, overlap, HermitianOp, Subspace};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct GleasonMeasure {
    generator: HermitianOp,
}

impl GleasonMeasure {
    pub fn new(generator: HermitianOp) -> Self {
        Self { generator }
    }

    pub fn generator(&self) -> &HermitianOp {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    /// `m(M) = tr(T·P_M)`; zero on the zero subspace.
    pub fn eval(&self, m: &Subspace) -> Result<f64> {
        self.generator.compressed_trace(m)
    }

    /// Sum in the positive cone: generator addition.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.generator.add(&other.generator)?))
    }
}

pub fn eval(m: &GleasonMeasure, subspace: &Subspace) -> Result<f64> {
    m.eval(subspace)
}

/// The signed measure `M ↦ tr(T(A·P_M + P_M·A)/2)`.
///
/// By cyclicity of the trace this equals `tr(G·P_M)` with the Jordan product
/// `G = (TA + AT)/2`, which is Hermitian because `T` and `A` are.
pub fn jordan_measure(t: &HermitianOp, a: &HermitianOp) -> Result<GleasonMeasure> {
    Ok(GleasonMeasure::new(t.jordan(a)?))
}

/// Positive generator with unit trace.
pub fn is_state(m: &GleasonMeasure, tol: &Tolerances) -> bool {
    m.generator.min_eigenvalue() >= -tol.comparison
        && (m.generator.trace() - 1.0).abs() <= tol.comparison
}

/// `m(M) := W_M`, with the generator recovered by polarization.
pub fn measure_from_frame(f: &FrameFunctionView, tol: &Tolerances) -> Result<GleasonMeasure> {
    let rec = polarize_recover(|x| f.value(x).unwrap_or(f64::NAN), f.dim(), tol)?;
    Ok(GleasonMeasure::new(rec.form.generator().clone()))
}

/// `f(x) := m(sp(x))`.
pub fn frame_from_measure(m: &GleasonMeasure) -> FrameFunctionView {
    FrameFunctionView::new(MatrixForm::new(m.generator.clone()))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AdditivityReport {
    /// `m(⋁ parts)`.
    pub lhs: f64,
    /// `Σ m(partᵢ)`.
    pub rhs: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares `m(⋁ᵢ Mᵢ)` with `Σᵢ m(Mᵢ)` for pairwise orthogonal parts.
pub fn check_additivity(
    m: &GleasonMeasure,
    parts: &[Subspace],
    tol: &Tolerances,
) -> Result<AdditivityReport> {
    let n = m.dim();
    for p in parts {
        check_dim(n, p.ambient_dim())?;
    }
    for i in 0..parts.len() {
        for j in (i + 1)..parts.len() {
            let ov = overlap(&parts[i], &parts[j])?;
            if ov > tol.comparison {
                return Err(Error::NotOrthogonal {
                    first: i,
                    second: j,
                    overlap: ov,
                });
            }
        }
    }
    let mut joined = Subspace::zero(n);
    for p in parts {
        joined = crate::hilbert::join(&joined, p)?;
    }
    let lhs = m.eval(&joined)?;
    let rhs = parts.iter().map(|p| m.eval(p)).sum::<Result<f64>>()?;
    let deviation = (lhs - rhs).abs();
    Ok(AdditivityReport {
        lhs,
        rhs,
        deviation,
        tolerance: tol.additivity,
        pass: deviation <= tol.additivity,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RegularityReport {
    /// `m(P_k)` along the ascending chain `P_1 ⊂ P_2 ⊂ … ⊂ M`.
    pub chain: Vec<f64>,
    pub target: f64,
    pub deviation: f64,
    pub pass: bool,
}

/// Checks `m(M) = sup{m(P) : P ⊆ M, dim P < ∞}` along the chain spanned by
/// eigenvectors of the compression `P_M T P_M`, largest eigenvalue first.
/// That order makes every `m(P_k)` maximal among `k`-dimensional `P ⊆ M`.
pub fn check_regularity(
    m: &GleasonMeasure,
    subspace: &Subspace,
    tol: &Tolerances,
) -> Result<RegularityReport> {
    let min = m.generator.min_eigenvalue();
    if min < -tol.comparison {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let compressed = HermitianOp::new(m.generator.compression(subspace)?, tol)?;
    let (_, vecs) = compressed.eigen();
    let k = subspace.dim();
    // eigen() is ascending; walk columns from the top.
    let lifted = subspace.basis() * vecs;
    let mut chain = Vec::with_capacity(k);
    for j in 1..=k {
        let cols = lifted.columns(k - j, j).into_owned();
        let p = Subspace::from_orthonormal(cols, tol)?;
        chain.push(m.eval(&p)?);
    }
    let target = m.eval(subspace)?;
    let last = chain.last().copied().unwrap_or(0.0);
    let deviation = (last - target).abs();
    Ok(RegularityReport {
        chain,
        target,
        deviation,
        pass: deviation <= tol.additivity,
    })
}
