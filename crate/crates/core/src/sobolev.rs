//! Discretized `L²(0,1)` and the form family
//! `sₙ(u,u) = (1 + 1/n)∫₀¹|u′|² + |u(0)|² + |u(1)|²`, decreasing to
//! `s = ŝ + s₀` with `ŝ(u,u) = ∫₀¹|u′|²` and the boundary form
//! `s₀(u,u) = |u(0)|² + |u(1)|²`.
//!
//! Nodes `xᵢ = i·h`, `h = 1/(N−1)`. Derivatives are forward difference
//! quotients on the `N−1` intervals, each weighted by `h`, so
//! `ŝ(u,u) = (1/h)·Σ(uᵢ₊₁ − uᵢ)²`. The boundary terms are rank-one on the
//! first and last node. A form is stored as the real symmetric matrix `A`
//! with `q(u) = uᵀAu`; spectral quantities are taken relative to the
//! weighted inner product `⟨u,v⟩ = h·Σuᵢvᵢ`, i.e. for the operator `A/h`.
//!
//! The boundary form is unbounded on `L²(0,1)`; on the grid this shows as
//! an operator norm of `1/h` per boundary term, blowing up under refinement.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{HermitianOp, Subspace};
use crate::measures::{check_additivity, AdditivityReport, GleasonMeasure};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    n_points: usize,
}

impl Grid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 points, got {n_points}")));
        }
        Ok(Self { n_points })
    }

    /// The grid with `intervals` cells, `h = 1/intervals`.
    pub fn with_intervals(intervals: usize) -> Result<Self> {
        Self::new(intervals + 1)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn intervals(&self) -> usize {
        self.n_points - 1
    }

    pub fn h(&self) -> f64 {
        1.0 / self.intervals() as f64
    }
}

/// A quadratic form `q(u) = uᵀAu` on grid functions.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteForm {
    matrix: DMatrix<f64>,
    h: f64,
}

impl DiscreteForm {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn eval(&self, u: &DVector<f64>) -> Result<f64> {
        if u.len() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: u.len(),
            });
        }
        Ok(u.dot(&(&self.matrix * u)))
    }

    /// Eigenvalues of `A/h` (the operator in the weighted geometry),
    /// ascending.
    pub fn weighted_eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (self.matrix.clone() / self.h)
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_weighted_eigenvalue(&self) -> f64 {
        self.weighted_eigenvalues()[0]
    }

    /// Smallest eigenvalue of the coefficient matrix `A`. Its sign is that
    /// of the weighted spectrum, without the `1/h` amplification of
    /// rounding errors.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn weighted_norm(&self) -> f64 {
        self.weighted_eigenvalues()
            .iter()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix - &other.matrix,
            h: self.h,
        }
    }

    /// `self ⪯ other`: `other − self` positive semidefinite up to `tol`.
    pub fn leq(&self, other: &Self, tol: f64) -> bool {
        other.sub(self).min_eigenvalue() >= -tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).amax()
    }

    /// As a Hermitian operator on `ℂᴺ` in the weighted geometry.
    pub fn to_hermitian(&self) -> HermitianOp {
        let m = (&self.matrix / self.h).map(|x| num_complex::Complex64::new(x, 0.0));
        HermitianOp::new(m, &Tolerances::default()).expect("real symmetric matrix")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormFamily {
    pub s_n: DiscreteForm,
    pub s: DiscreteForm,
    pub s_hat: DiscreteForm,
    pub s_0: DiscreteForm,
}

fn gradient_form(grid: &Grid, coefficient: f64) -> DMatrix<f64> {
    let n = grid.n_points();
    let w = coefficient / grid.h();
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i)] += w;
        a[(i + 1, i + 1)] += w;
        a[(i, i + 1)] -= w;
        a[(i + 1, i)] -= w;
    }
    a
}

fn boundary_term(grid: &Grid, node: usize) -> DMatrix<f64> {
    let n = grid.n_points();
    let mut a = DMatrix::zeros(n, n);
    a[(node, node)] = 1.0;
    a
}

/// Assembles `sₙ`, `s`, `ŝ`, `s₀` on the grid, each from its own
/// definition.
pub fn build_forms(n: u32, grid: &Grid) -> Result<FormFamily> {
    if n == 0 {
        return Err(Error::Input("form index n must be at least 1".into()));
    }
    let h = grid.h();
    let last = grid.n_points() - 1;
    let boundary = boundary_term(grid, 0) + boundary_term(grid, last);
    let form = |matrix| DiscreteForm { matrix, h };
    Ok(FormFamily {
        s_n: form(gradient_form(grid, 1.0 + 1.0 / n as f64) + &boundary),
        s: form(gradient_form(grid, 1.0) + &boundary),
        s_hat: form(gradient_form(grid, 1.0)),
        s_0: form(boundary),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub n: u32,
    /// Smallest eigenvalue of the coefficient matrix of `sₙ − sₙ₊₁`.
    pub next_gap: f64,
    /// Same for `sₙ − s`.
    pub limit_gap: f64,
    /// `max |sₙ − ((1+1/n)ŝ + s₀)|`.
    pub identity_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub n_points: usize,
    pub h: f64,
    pub steps: Vec<ChainStep>,
    /// `max |s − (ŝ + s₀)|`.
    pub split_defect: f64,
    /// Smallest eigenvalue of the coefficient matrix of `s − ŝ`.
    pub hat_gap: f64,
    pub hat_below_s: bool,
    pub s_below_hat: bool,
    /// Nonzero eigenvalues of `s − ŝ` in the weighted geometry.
    pub boundary_spectrum: Vec<f64>,
    pub boundary_rank: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verifies `sₙ₊₁ ⪯ sₙ`, `s ⪯ sₙ`, `ŝ ⪯ s` and the matrix identities for
/// `n < n_max`.
pub fn chain_report(grid: &Grid, n_max: u32) -> Result<ChainReport> {
    if n_max < 2 {
        return Err(Error::Input("n_max must be at least 2".into()));
    }
    const TOL: f64 = 1e-10;
    const IDENTITY_TOL: f64 = 1e-12;
    let base = build_forms(1, grid)?;
    let steps = (1..n_max)
        .into_par_iter()
        .map(|n| {
            let current = build_forms(n, grid)?.s_n;
            let next = build_forms(n + 1, grid)?.s_n;
            let rebuilt = DiscreteForm {
                matrix: &base.s_hat.matrix * (1.0 + 1.0 / n as f64) + &base.s_0.matrix,
                h: grid.h(),
            };
            Ok(ChainStep {
                n,
                next_gap: current.sub(&next).min_eigenvalue(),
                limit_gap: current.sub(&base.s).min_eigenvalue(),
                identity_defect: current.max_abs_diff(&rebuilt),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let split = DiscreteForm {
        matrix: &base.s_hat.matrix + &base.s_0.matrix,
        h: grid.h(),
    };
    let split_defect = base.s.max_abs_diff(&split);
    let boundary = base.s.sub(&base.s_hat);
    let spectrum = boundary.weighted_eigenvalues();
    let scale = spectrum.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
    let mut boundary_spectrum: Vec<f64> = spectrum
        .iter()
        .copied()
        .filter(|x| x.abs() > 1e-9 * scale)
        .collect();
    boundary_spectrum.reverse();
    let hat_gap = boundary.min_eigenvalue();
    let hat_below_s = base.s_hat.leq(&base.s, TOL);
    let s_below_hat = base.s.leq(&base.s_hat, TOL);
    let pass = steps
        .iter()
        .all(|s| s.next_gap >= -TOL && s.limit_gap >= -TOL && s.identity_defect <= IDENTITY_TOL)
        && split_defect <= IDENTITY_TOL
        && hat_below_s
        && !s_below_hat;
    Ok(ChainReport {
        n_points: grid.n_points(),
        h: grid.h(),
        steps,
        split_defect,
        hat_gap,
        hat_below_s,
        s_below_hat,
        boundary_rank: boundary_spectrum.len(),
        boundary_spectrum,
        tolerance: TOL,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupRow {
    pub n_points: usize,
    pub h: f64,
    /// Operator norm of `|u(0)|²` (equal to that of `|u(1)|²`).
    pub per_term_norm: f64,
    pub combined_norm: f64,
    pub expected: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub rows: Vec<BlowupRow>,
    /// Least-squares slope of `log(norm)` against `log(h)`.
    pub slope: f64,
    pub strictly_increasing: bool,
    pub pass: bool,
}

impl BlowupReport {
    /// `h,norm,slope` lines with a header; the slope is repeated per row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["h", "norm", "slope"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([r.h.to_string(), r.per_term_norm.to_string(), self.slope.to_string()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Operator norm of the boundary form on each grid (finest last after
/// sorting by `h` descending), with the log-log slope of norm against `h`.
pub fn boundary_blowup(grids: &[Grid]) -> Result<BlowupReport> {
    if grids.len() < 2 {
        return Err(Error::InvalidGrid("need at least two grids".into()));
    }
    let mut sorted = grids.to_vec();
    sorted.sort_by_key(|g| g.n_points());
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidGrid("duplicate grids".into()));
    }
    let rows: Vec<BlowupRow> = sorted
        .iter()
        .map(|g| {
            let h = g.h();
            let single = DiscreteForm {
                matrix: boundary_term(g, 0),
                h,
            };
            let both = DiscreteForm {
                matrix: boundary_term(g, 0) + boundary_term(g, g.n_points() - 1),
                h,
            };
            let per_term_norm = single.weighted_norm();
            let expected = 1.0 / h;
            BlowupRow {
                n_points: g.n_points(),
                h,
                per_term_norm,
                combined_norm: both.weighted_norm(),
                expected,
                relative_error: (per_term_norm - expected).abs() / expected,
            }
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.h.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.per_term_norm.ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    let strictly_increasing = rows.windows(2).all(|w| w[1].per_term_norm > w[0].per_term_norm);
    let pass = strictly_increasing
        && (slope + 1.0).abs() <= 0.01
        && rows.iter().all(|r| r.relative_error <= 1e-9);
    Ok(BlowupReport {
        rows,
        slope,
        strictly_increasing,
        pass,
    })
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NikodymStep {
    pub n: u32,
    /// `max_M |mₙ(M) − m(M)|` over the sampled subspaces.
    pub max_deviation: f64,
    /// Smallest slack `‖S‖·dim(M)/n − |mₙ(M) − m(M)|` over the samples.
    pub min_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NikodymReport {
    pub dim: usize,
    pub n_max: u32,
    pub s_norm: f64,
    pub steps: Vec<NikodymStep>,
    pub bound_holds: bool,
    pub nonincreasing: bool,
    /// `check_additivity` of the limit on `[M, M⊥]`, worst sample.
    pub additivity: AdditivityReport,
    pub pass: bool,
}

/// Measures `mₙ(M) = tr((T + S/n)·P_M)` converging to `m(M) = tr(T·P_M)`,
/// with deviation `|tr(S·P_M)|/n ≤ ‖S‖·dim(M)/n`.
pub fn nikodym_demo(
    t: &HermitianOp,
    s: &HermitianOp,
    n_max: u32,
    subspaces: &[Subspace],
    tol: &Tolerances,
) -> Result<NikodymReport> {
    let dim = t.dim();
    crate::hilbert::check_dim(dim, s.dim())?;
    for m in subspaces {
        crate::hilbert::check_dim(dim, m.ambient_dim())?;
    }
    if n_max == 0 {
        return Err(Error::Input("n_max must be at least 1".into()));
    }
    const SLACK: f64 = 1e-12;
    let limit = GleasonMeasure::new(t.clone());
    let s_norm = s.operator_norm();
    let limit_values: Vec<f64> = subspaces.iter().map(|m| limit.eval(m)).collect::<Result<_>>()?;
    let mut steps = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let mn = GleasonMeasure::new(t.add(&s.scale(1.0 / n as f64))?);
        let mut max_deviation = 0.0_f64;
        let mut min_slack = f64::INFINITY;
        for (m, &lim) in subspaces.iter().zip(&limit_values) {
            let dev = (mn.eval(m)? - lim).abs();
            max_deviation = max_deviation.max(dev);
            min_slack = min_slack.min(s_norm * m.dim() as f64 / n as f64 - dev);
        }
        steps.push(NikodymStep {
            n,
            max_deviation,
            min_slack,
        });
    }
    let bound_holds = steps.iter().all(|s| s.min_slack >= -SLACK);
    let nonincreasing = steps
        .windows(2)
        .all(|w| w[1].max_deviation <= w[0].max_deviation + SLACK);
    let mut worst: Option<AdditivityReport> = None;
    for m in subspaces {
        let rep = check_additivity(&limit, &[m.clone(), crate::hilbert::ortho_complement(m)], tol)?;
        if worst.as_ref().is_none_or(|w| rep.deviation > w.deviation) {
            worst = Some(rep);
        }
    }
    let additivity = match worst {
        Some(w) => w,
        None => check_additivity(&limit, &[Subspace::full(dim)], tol)?,
    };
    let pass = bound_holds && nonincreasing && additivity.pass;
    Ok(NikodymReport {
        dim,
        n_max,
        s_norm,
        steps,
        bound_holds,
        nonincreasing,
        additivity,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_subspace, rng};
    use rand::Rng;

    fn grid() -> Grid {
        Grid::with_intervals(16).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(2).is_err());
        let g = Grid::new(11).unwrap();
        assert_eq!(g.h() * g.intervals() as f64, 1.0);
    }

    #[test]
    fn constant_and_linear() {
        let g = grid();
        let f = build_forms(1, &g).unwrap();
        let one = DVector::from_element(g.n_points(), 1.0);
        assert_eq!(f.s_hat.eval(&one).unwrap(), 0.0);
        assert_eq!(f.s_0.eval(&one).unwrap(), 2.0);
        assert_eq!(f.s.eval(&one).unwrap(), 2.0);
        let x = DVector::from_fn(g.n_points(), |i, _| i as f64 * g.h());
        assert!((f.s_hat.eval(&x).unwrap() - 1.0).abs() < 1e-12);
        assert!((f.s.eval(&x).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn chain_identity_on_random_vectors() {
        let g = grid();
        let mut r = rng(2);
        for n in [1u32, 2, 7, 50] {
            let f = build_forms(n, &g).unwrap();
            let u = DVector::from_fn(g.n_points(), |_, _| r.random_range(-1.0..1.0));
            let lhs = f.s_n.eval(&u).unwrap() - f.s.eval(&u).unwrap();
            let rhs = f.s_hat.eval(&u).unwrap() / n as f64;
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn chain_report_passes() {
        let rep = chain_report(&grid(), 10).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert_eq!(rep.boundary_rank, 2);
        for e in &rep.boundary_spectrum {
            assert!((e - 16.0).abs() < 1e-9);
        }
        assert!(rep.hat_below_s && !rep.s_below_hat);
    }

    #[test]
    fn blowup_norms() {
        let grids: Vec<Grid> = [10, 100].iter().map(|&k| Grid::with_intervals(k).unwrap()).collect();
        let rep = boundary_blowup(&grids).unwrap();
        assert!((rep.rows[0].per_term_norm - 10.0).abs() < 1e-9);
        assert!((rep.rows[1].per_term_norm - 100.0).abs() < 1e-7);
        assert!((rep.rows[0].combined_norm - 10.0).abs() < 1e-9);
        assert!(rep.pass);
        assert!(boundary_blowup(&[grids[0], grids[0]]).is_err());
        assert!(boundary_blowup(&grids[..1]).is_err());
        let csv = rep.to_csv().unwrap();
        assert!(csv.starts_with("h,norm,slope\n"));
    }

    #[test]
    fn nikodym_examples() {
        let tol = Tolerances::default();
        let mut r = rng(3);
        let t = random_hermitian(&mut r, 4);
        let samples: Vec<Subspace> = (1..4).map(|k| random_subspace(&mut r, 4, k)).collect();
        let rep = nikodym_demo(&t, &HermitianOp::zeros(4), 5, &samples, &tol).unwrap();
        assert!(rep.steps.iter().all(|s| s.max_deviation < 1e-14));

        let id = HermitianOp::identity(3);
        let s = HermitianOp::from_real_diagonal(&[1.0, 0.0, 0.0]);
        let e1 = Subspace::coordinate(3, &[0]).unwrap();
        let rep = nikodym_demo(&id, &s, 4, std::slice::from_ref(&e1), &tol).unwrap();
        for st in &rep.steps {
            assert!((st.max_deviation - 1.0 / st.n as f64).abs() < 1e-14);
        }
        assert!(rep.pass);

        let s = random_hermitian(&mut r, 4);
        let rep = nikodym_demo(&t, &s, 100, &samples, &tol).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(nikodym_demo(&t, &HermitianOp::zeros(3), 2, &samples, &tol).is_err());
    }
}
