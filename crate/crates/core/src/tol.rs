use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every check in the crate.
///
/// `construction` guards type invariants (Hermitian symmetry, orthonormality,
/// Gram-Schmidt pivots); `comparison` decides equality of subspaces,
/// orthogonality and positive semidefiniteness; `additivity` is the pass
/// threshold for measure-level additivity and weight identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub construction: f64,
    pub comparison: f64,
    pub additivity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            construction: 1e-10,
            comparison: 1e-9,
            additivity: 1e-8,
        }
    }
}

impl Tolerances {
    /// Scales every tolerance so that `comparison` equals `tol`.
    pub fn with_comparison(tol: f64) -> Self {
        let d = Self::default();
        let k = tol / d.comparison;
        Self {
            construction: d.construction * k,
            comparison: tol,
            additivity: d.additivity * k,
        }
    }
}
