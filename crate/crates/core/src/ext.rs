//! Symbolic σ-finite regular measures on the lattice of an infinite
//! dimensional separable Hilbert space, through tagged positive forms.
//!
//! A tagged form is a bounded positive regular part (a diagonal sequence in
//! the canonical basis plus an optional finite block on `e₁…e_k`) and a
//! multiset of declared singular components. A declared singular component
//! is worth `0` on every finite-dimensional coordinate subspace and makes
//! every infinite-dimensional one non-trace-class; this is what the form
//! `t(x, y) = (Tx, Ty)` built from a Hamel-basis coefficient functional
//! looks like on the coordinate sublattice. Measures are evaluated on
//! coordinate subspaces `M_J = closed span{eₙ : n ∈ J}`.
//!
//! The partial sum `m₁ ⊕ m₂ = m₁ + m₂` is defined when one summand is
//! P₁(H)-bounded or both have the same domain. σ-additivity is decided by
//! an explicit rule table; combinations outside it are reported as
//! undecidable rather than guessed.
//!
//! Regularity (`m(M) = sup` over finite-dimensional `P ⊆ M`) involves
//! arbitrary finite-dimensional subspaces, which the coordinate lattice
//! cannot express; [`aligned_sup_gap`] only compares a value with the sup
//! over finite index subsets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gea::{is_sub_gea, FiniteGeaModel, SubGeaWitness};
use crate::hilbert::{CMatrix, ComplexVector, HermitianOp};
use crate::seq::{diagonal_measure_eval, ExtReal, IndexSet, MeasureValue, SeqDescriptor};
use crate::tol::Tolerances;

/// Domain label: an intersection of opaque dense subspaces ("atoms").
/// The full space is the empty intersection. `a ≤ b` when every atom of `b`
/// is an atom of `a`; the meet is the union of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DomainLabel(BTreeSet<String>);

impl DomainLabel {
    pub fn full() -> Self {
        Self(BTreeSet::new())
    }

    pub fn atom(name: &str) -> Result<Self> {
        name.parse()
    }

    pub fn is_full_space(&self) -> bool {
        self.0.is_empty()
    }

    pub fn meet(&self, other: &Self) -> Self {
        Self(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.0.is_subset(&self.0)
    }
}

impl fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "H")
        } else {
            let atoms: Vec<&str> = self.0.iter().map(String::as_str).collect();
            write!(f, "{}", atoms.join("&"))
        }
    }
}

impl std::str::FromStr for DomainLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "H" {
            return Ok(Self::full());
        }
        let mut atoms = BTreeSet::new();
        for a in s.split('&').map(str::trim) {
            if a.is_empty() || a == "H" {
                return Err(Error::Input(format!("domain label `{s}`: bad atom `{a}`")));
            }
            atoms.insert(a.to_string());
        }
        Ok(Self(atoms))
    }
}

impl Serialize for DomainLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DomainLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Bounded positive regular part: `diag(a₁, a₂, …)` plus a finite block
/// acting on `e₁…e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularPart {
    diagonal: SeqDescriptor,
    block: Option<HermitianOp>,
}

impl RegularPart {
    pub fn zero() -> Self {
        Self {
            diagonal: SeqDescriptor::constant(0.0),
            block: None,
        }
    }

    pub fn new(diagonal: SeqDescriptor, block: Option<HermitianOp>, tol: &Tolerances) -> Result<Self> {
        diagonal.validate()?;
        let f = diagonal.facts();
        if !f.nonneg {
            return Err(Error::SignedSequence);
        }
        if !f.bounded {
            return Err(Error::Unbounded);
        }
        if let Some(b) = &block {
            let min = b.min_eigenvalue();
            if min < -tol.comparison {
                return Err(Error::NotPositive { min_eigenvalue: min });
            }
        }
        let diagonal = if f.is_zero() {
            SeqDescriptor::constant(0.0)
        } else {
            diagonal
        };
        Ok(Self { diagonal, block })
    }

    pub fn diagonal(&self) -> &SeqDescriptor {
        &self.diagonal
    }

    pub fn block(&self) -> Option<&HermitianOp> {
        self.block.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.diagonal.facts().is_zero() && self.block.is_none()
    }

    /// `Σₙ aₙ < ∞`: the whole regular part is trace class.
    pub fn is_trace_class(&self) -> bool {
        self.diagonal.facts().positive_sum_finite == Some(true)
    }

    fn add(&self, other: &Self) -> Self {
        let block = match (&self.block, &other.block) {
            (None, None) => None,
            (Some(b), None) | (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let k = a.dim().max(b.dim());
                let pad = |h: &HermitianOp| {
                    let mut m = CMatrix::zeros(k, k);
                    m.view_mut((0, 0), (h.dim(), h.dim())).copy_from(h.matrix());
                    m
                };
                let sum = pad(a) + pad(b);
                Some(HermitianOp::new(sum, &Tolerances::default()).expect("sum of Hermitian blocks"))
            }
        };
        Self {
            diagonal: SeqDescriptor::sum_of([self.diagonal.clone(), other.diagonal.clone()]),
            block,
        }
    }

    /// `Σ_{n∈J} (aₙ + B_nn)`.
    fn eval(&self, j: &IndexSet) -> Result<MeasureValue> {
        let mut v = diagonal_measure_eval(&self.diagonal, j)?;
        if let Some(b) = &self.block {
            let extra: f64 = (1..=b.dim() as u64)
                .filter(|&n| j.contains(n))
                .map(|n| b.matrix()[(n as usize - 1, n as usize - 1)].re)
                .sum();
            v.value = v.value + ExtReal::Finite(extra);
        }
        Ok(v)
    }

    fn quad(&self, x: &ComplexVector) -> f64 {
        let c = x.components();
        let diag: f64 = c
            .iter()
            .enumerate()
            .map(|(i, z)| self.diagonal.term(i as u64 + 1) * z.norm_sqr())
            .sum();
        let block = self.block.as_ref().map_or(0.0, |b| {
            let k = b.dim().min(c.len());
            let mut acc = 0.0;
            for i in 0..k {
                for l in 0..k {
                    acc += (c[i].conj() * b.matrix()[(i, l)] * c[l]).re;
                }
            }
            acc
        });
        diag + block
    }

    fn approx_eq(&self, other: &Self, terms: u64, tol: f64) -> bool {
        let diag_ok = (1..=terms).all(|n| (self.diagonal.term(n) - other.diagonal.term(n)).abs() <= tol)
            && self.diagonal.facts().positive_sum_finite == other.diagonal.facts().positive_sum_finite;
        let k = self.block.as_ref().map_or(0, |b| b.dim()).max(other.block.as_ref().map_or(0, |b| b.dim()));
        let entry = |b: &Option<HermitianOp>, i: usize, l: usize| {
            b.as_ref()
                .filter(|b| i < b.dim() && l < b.dim())
                .map_or(num_complex::Complex64::new(0.0, 0.0), |b| b.matrix()[(i, l)])
        };
        let block_ok = (0..k).all(|i| (0..k).all(|l| (entry(&self.block, i, l) - entry(&other.block, i, l)).norm() <= tol));
        diag_ok && block_ok
    }
}

/// Regular part plus declared singular components (kept with multiplicity,
/// sorted by domain).
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedForm {
    pub regular: RegularPart,
    pub singular: Vec<DomainLabel>,
}

/// A regular finitely additive measure `m_t` with `m_t(M_J) = tr(t∘P_J)`
/// when that compression is trace class and `∞` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure", into = "RawMeasure")]
pub struct ExtMeasure {
    form: TaggedForm,
    domain: DomainLabel,
    p1_bounded: bool,
}

impl ExtMeasure {
    /// Domain is the meet of the singular domains (the full space without
    /// singular components); P₁(H)-boundedness holds exactly when there is
    /// no singular component, since the regular part is bounded and a
    /// declared singular form is unbounded on the unit sphere.
    pub fn from_parts(regular: RegularPart, mut singular: Vec<DomainLabel>) -> Self {
        singular.sort();
        let domain = singular.iter().fold(DomainLabel::full(), |acc, d| acc.meet(d));
        let p1_bounded = singular.is_empty();
        Self {
            form: TaggedForm { regular, singular },
            domain,
            p1_bounded,
        }
    }

    /// The zero measure `o`.
    pub fn zero() -> Self {
        Self::from_parts(RegularPart::zero(), Vec::new())
    }

    pub fn diagonal(seq: SeqDescriptor) -> Result<Self> {
        Ok(Self::from_parts(RegularPart::new(seq, None, &Tolerances::default())?, Vec::new()))
    }

    /// `m(M) = dim M`.
    pub fn dimension() -> Self {
        Self::diagonal(SeqDescriptor::constant(1.0)).expect("constant diagonal")
    }

    /// A pure declared singular measure with the given domain.
    pub fn singular(domain: DomainLabel) -> Self {
        Self::from_parts(RegularPart::zero(), vec![domain])
    }

    pub fn form(&self) -> &TaggedForm {
        &self.form
    }

    pub fn domain(&self) -> &DomainLabel {
        &self.domain
    }

    pub fn p1_bounded(&self) -> bool {
        self.p1_bounded
    }

    pub fn has_singular_part(&self) -> bool {
        !self.form.singular.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.form.regular.is_zero() && self.form.singular.is_empty()
    }

    /// Same singular multiset and domain, regular parts equal on the first
    /// `terms` diagonal entries and in the block, and the same trace-class
    /// status.
    pub fn approx_eq(&self, other: &Self, terms: u64, tol: f64) -> bool {
        self.domain == other.domain
            && self.form.singular == other.form.singular
            && self.form.regular.approx_eq(&other.form.regular, terms, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum OplusOutcome {
    Defined { measure: ExtMeasure },
    Undefined { reason: String },
}

impl OplusOutcome {
    pub fn defined(self) -> Option<ExtMeasure> {
        match self {
            OplusOutcome::Defined { measure } => Some(measure),
            OplusOutcome::Undefined { .. } => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, OplusOutcome::Defined { .. })
    }
}

/// `m₁ ⊕ m₂ := m₁ + m₂`, defined iff `m₁` or `m₂` is P₁(H)-bounded or
/// `D(m₁) = D(m₂)`.
pub fn oplus(m1: &ExtMeasure, m2: &ExtMeasure) -> OplusOutcome {
    if !(m1.p1_bounded || m2.p1_bounded || m1.domain == m2.domain) {
        return OplusOutcome::Undefined {
            reason: format!(
                "neither summand is P1(H)-bounded and the domains differ ({} vs {})",
                m1.domain, m2.domain
            ),
        };
    }
    let regular = m1.form.regular.add(&m2.form.regular);
    let singular = m1.form.singular.iter().chain(&m2.form.singular).cloned().collect();
    OplusOutcome::Defined {
        measure: ExtMeasure::from_parts(regular, singular),
    }
}

/// `m(M_J)`: the regular value, or `∞` when `J` is infinite and a singular
/// component is present.
pub fn eval_ext(m: &ExtMeasure, j: &IndexSet) -> Result<MeasureValue> {
    let reg = m.form.regular.eval(j)?;
    if m.has_singular_part() && !j.is_finite() {
        return Ok(MeasureValue {
            value: ExtReal::Infinite,
            exact: true,
        });
    }
    Ok(reg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaAdditivity {
    SigmaAdditive,
    NotSigmaAdditive,
    Undecidable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub index_set: String,
    /// Value of the (closed) regular part on `M_J`.
    pub regular: ExtReal,
    /// Value of the whole form on `M_J`.
    pub whole: ExtReal,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaDecision {
    pub verdict: SigmaAdditivity,
    pub rule: &'static str,
    pub explanation: &'static str,
    pub trace: Vec<TraceStep>,
}

const RULE_REGULAR: &str = "regular-only";
const RULE_COERCIVE: &str = "singular-plus-coercive-regular";
const RULE_TRACE_CLASS: &str = "singular-plus-trace-class-regular";
const RULE_NONE: &str = "outside-rule-table";

fn witness_sets() -> Vec<(String, IndexSet)> {
    vec![
        ("{1,2,3}".into(), IndexSet::range(1, 3)),
        ("evens".into(), IndexSet::evens()),
        ("all".into(), IndexSet::all()),
    ]
}

/// Decides σ-additivity by the criterion "`t∘P_M` trace class whenever the
/// closure of the regular part compressed to `M` is", checked per rule:
///
/// * no singular part: the form is closable, the criterion holds;
/// * singular part and a regular diagonal with `liminf aₙ > 0`: the closed
///   regular part is trace class on `M_J` exactly when `J` is finite, and so
///   is the whole form (the closure of the regular part of `s + c·t_I` is
///   `c·t_I`; a bounded finite-rank or trace-class perturbation does not
///   change that), so the criterion holds;
/// * singular part and trace-class regular part: on `J = ℕ` the regular part
///   is trace class while the whole form is not, and the coordinate lines
///   sum to a finite value against `m(H) = ∞`;
/// * anything else is undecidable in this model.
pub fn decide_sigma_additive(m: &ExtMeasure) -> Result<SigmaDecision> {
    let reg = &m.form.regular;
    let (verdict, rule, explanation) = if !m.has_singular_part() {
        (
            SigmaAdditivity::SigmaAdditive,
            RULE_REGULAR,
            "no singular part: the form is closable and m(M_J) is its trace on M_J whenever finite",
        )
    } else if reg.diagonal.facts().bounded_away_from_zero == Some(true) {
        (
            SigmaAdditivity::SigmaAdditive,
            RULE_COERCIVE,
            "closed regular part is trace class on M_J exactly for finite J, as is the whole form",
        )
    } else if reg.is_trace_class() {
        (
            SigmaAdditivity::NotSigmaAdditive,
            RULE_TRACE_CLASS,
            "on infinite J the regular part is trace class but the whole form is not",
        )
    } else {
        (
            SigmaAdditivity::Undecidable,
            RULE_NONE,
            "undecidable in this model: the rule table does not cover this combination",
        )
    };
    let mut trace = Vec::new();
    for (label, j) in witness_sets() {
        let regular = reg.eval(&j)?.value;
        let whole = eval_ext(m, &j)?.value;
        let note = match (regular.is_infinite(), whole.is_infinite()) {
            (false, false) => "both trace class",
            (true, true) => "neither trace class",
            (false, true) => "regular part trace class, whole form not: criterion fails",
            (true, false) => "whole form trace class, regular part not",
        };
        trace.push(TraceStep {
            index_set: label,
            regular,
            whole,
            note: note.to_string(),
        });
    }
    Ok(SigmaDecision {
        verdict,
        rule,
        explanation,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaWitness {
    pub partition: String,
    /// `Σₙ m(sp(eₙ))`.
    pub lhs: ExtReal,
    /// `m(H)`.
    pub rhs: ExtReal,
}

/// The partition `H = ⋁ₙ sp(eₙ)` on which σ-additivity visibly fails.
pub fn sigma_violation_witness(m: &ExtMeasure) -> Result<SigmaWitness> {
    let d = decide_sigma_additive(m)?;
    if d.verdict != SigmaAdditivity::NotSigmaAdditive {
        return Err(Error::Precondition(format!(
            "measure is not known to violate σ-additivity (verdict {:?})",
            d.verdict
        )));
    }
    // Each line is finite-dimensional, so only the regular part contributes.
    let lhs = m.form.regular.eval(&IndexSet::all())?.value;
    let rhs = eval_ext(m, &IndexSet::all())?.value;
    Ok(SigmaWitness {
        partition: "coordinate lines sp(e_n), n >= 1".into(),
        lhs,
        rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemoVariant {
    /// `m₁ = dim`, `m₂` pure singular with full domain.
    Default,
    /// `m₂ := o`.
    ZeroControl,
    /// `m₂ := diag(1/n²)`.
    TraceClassControl,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedMeasure {
    pub name: String,
    pub measure: ExtMeasure,
    pub sigma_additive: SigmaAdditivity,
    pub rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonSubGeaReport {
    pub variant: DemoVariant,
    pub measures: Vec<NamedMeasure>,
    pub sum_defined: bool,
    /// Two of `m₁, m₂, m₁⊕m₂` σ-additive and the third not.
    pub violation: Option<[String; 3]>,
    /// Distinct elements of `{o, m₁, m₂, m₁⊕m₂}` and their defined sums.
    pub induced_model: crate::gea::ModelFile,
    pub sigma_subset: Vec<String>,
    pub finite_check_holds: bool,
    pub finite_check_witness: Option<[String; 3]>,
    /// The symbolic and the finite-model verdicts name the same witness.
    pub consistent: bool,
}

/// Shows that the σ-additive measures are not closed under the two-of-three
/// rule: `m₁` and `m₁⊕m₂` are σ-additive while `m₂` is not. The finite
/// model induced on `{o, m₁, m₂, m₁⊕m₂}` is checked with the GEA kernel.
pub fn not_sub_gea_demo(variant: DemoVariant) -> Result<NonSubGeaReport> {
    let m1 = ExtMeasure::dimension();
    let m2 = match variant {
        DemoVariant::Default => ExtMeasure::singular(DomainLabel::full()),
        DemoVariant::ZeroControl => ExtMeasure::zero(),
        DemoVariant::TraceClassControl => ExtMeasure::diagonal(SeqDescriptor::power(2.0))?,
    };
    let sum = oplus(&m1, &m2);
    let sum_defined = sum.is_defined();
    let sum = sum
        .defined()
        .ok_or_else(|| Error::Precondition("m1 is P1(H)-bounded, so m1 ⊕ m2 must be defined".into()))?;
    let candidates = [
        ("o", ExtMeasure::zero()),
        ("m1", m1),
        ("m2", m2),
        ("m1+m2", sum),
    ];
    let mut measures = Vec::new();
    let mut names_of = Vec::new();
    for (name, m) in candidates.iter() {
        let d = decide_sigma_additive(m)?;
        measures.push(NamedMeasure {
            name: name.to_string(),
            measure: m.clone(),
            sigma_additive: d.verdict,
            rule: d.rule,
        });
        names_of.push(name.to_string());
    }
    let sigma = |i: usize| measures[i].sigma_additive;
    let yes = SigmaAdditivity::SigmaAdditive;
    let no = SigmaAdditivity::NotSigmaAdditive;
    let triple = [1usize, 2, 3];
    let inside = triple.iter().filter(|&&i| sigma(i) == yes).count();
    let outside = triple.iter().filter(|&&i| sigma(i) == no).count();
    let violation = (inside == 2 && outside == 1).then(|| {
        [names_of[1].clone(), names_of[2].clone(), names_of[3].clone()]
    });

    // Distinct elements, keeping the first name of each.
    let same = |a: &ExtMeasure, b: &ExtMeasure| a.approx_eq(b, 64, 1e-12);
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..candidates.len() {
        if !reps.iter().any(|&r| same(&candidates[r].1, &candidates[i].1)) {
            reps.push(i);
        }
    }
    let elem_names: Vec<String> = reps.iter().map(|&i| names_of[i].clone()).collect();
    let mut sums: Vec<(String, String, String)> = Vec::new();
    for (a, &ia) in reps.iter().enumerate() {
        for (b, &ib) in reps.iter().enumerate() {
            if let Some(s) = oplus(&candidates[ia].1, &candidates[ib].1).defined() {
                if let Some(c) = reps.iter().position(|&r| same(&candidates[r].1, &s)) {
                    sums.push((elem_names[a].clone(), elem_names[b].clone(), elem_names[c].clone()));
                }
            }
        }
    }
    let model = FiniteGeaModel::new(&elem_names, "o", &sums)?;
    let subset: Vec<usize> = (0..reps.len()).filter(|&r| sigma(reps[r]) == yes).collect();
    let check = is_sub_gea(&subset, &model)?;
    let finite_check_witness = match check.witness {
        Some(SubGeaWitness::Triple(x, y, z)) => {
            Some([model.name(x).to_string(), model.name(y).to_string(), model.name(z).to_string()])
        }
        _ => None,
    };
    let consistent = match (&violation, &finite_check_witness) {
        (None, None) => check.holds,
        (Some(v), Some(w)) => v == w,
        _ => false,
    };
    Ok(NonSubGeaReport {
        variant,
        measures,
        sum_defined,
        violation,
        induced_model: model.to_file(),
        sigma_subset: subset.iter().map(|&i| model.name(i).to_string()).collect(),
        finite_check_holds: check.holds,
        finite_check_witness,
        consistent,
    })
}

/// The frame type function `f(x) = t(x, x)` on `D(t)` attached to a
/// measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameTypeView {
    measure: ExtMeasure,
    pub bounded: bool,
    pub domain: DomainLabel,
}

pub fn ftf_view(m: &ExtMeasure) -> FrameTypeView {
    FrameTypeView {
        measure: m.clone(),
        bounded: m.p1_bounded,
        domain: m.domain.clone(),
    }
}

impl FrameTypeView {
    pub fn measure(&self) -> &ExtMeasure {
        &self.measure
    }

    /// `f(x)` for a unit vector with finite support in the canonical basis
    /// (components are the coefficients of `e₁, e₂, …`). Declared singular
    /// components vanish on finite-dimensional coordinate subspaces, hence
    /// on such vectors.
    pub fn value(&self, x: &ComplexVector, tol: &Tolerances) -> Result<f64> {
        if !x.is_unit(tol.construction) {
            return Err(Error::NotUnit { norm: x.norm() });
        }
        Ok(self.measure.form.regular.quad(x))
    }

    /// `f(eₙ)` (1-based).
    pub fn value_at_basis(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Err(Error::Input("basis index starts at 1".into()));
        }
        self.value(&ComplexVector::basis(n, n - 1), &Tolerances::default())
    }
}

/// Mirror of [`oplus`]: defined iff one view is bounded or the domains
/// agree.
pub fn ftf_oplus(f1: &FrameTypeView, f2: &FrameTypeView) -> std::result::Result<FrameTypeView, String> {
    match oplus(&f1.measure, &f2.measure) {
        OplusOutcome::Defined { measure } => Ok(ftf_view(&measure)),
        OplusOutcome::Undefined { reason } => Err(reason),
    }
}

/// Whether `f` (set to `∞` off its domain) is a frame function, i.e.
/// whether the measure is completely additive; here that coincides with
/// σ-additivity.
pub fn induces_frame_function(f: &FrameTypeView) -> Result<bool> {
    match decide_sigma_additive(&f.measure)?.verdict {
        SigmaAdditivity::SigmaAdditive => Ok(true),
        SigmaAdditivity::NotSigmaAdditive => Ok(false),
        SigmaAdditivity::Undecidable => Err(Error::Precondition(
            "undecidable in this model: outside the σ-additivity rule table".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupGap {
    pub value: ExtReal,
    /// `sup{m(M_J′) : J′ ⊆ J finite}`.
    pub finite_sup: ExtReal,
    pub gap: bool,
}

/// Compares `m(M_J)` with the sup over finite `J′ ⊆ J`. The two agree
/// whenever there is no singular part; a singular part on infinite `J` with
/// a trace-class regular part produces a gap (finite sup, value `∞`).
pub fn aligned_sup_gap(m: &ExtMeasure, j: &IndexSet) -> Result<SupGap> {
    let value = eval_ext(m, j)?.value;
    let finite_sup = m.form.regular.eval(j)?.value;
    Ok(SupGap {
        value,
        finite_sup,
        gap: value != finite_sup,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRegular {
    Keyword(String),
    Both {
        diagonal: SeqDescriptor,
        matrix: HermitianOp,
    },
    Matrix {
        matrix: HermitianOp,
    },
    Diagonal(SeqDescriptor),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawDomain {
    domain: DomainLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawSingular {
    Keyword(String),
    One(RawDomain),
    Many(Vec<RawDomain>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    #[serde(deserialize_with = "regular_field")]
    regular: RawRegular,
    #[serde(deserialize_with = "singular_field")]
    singular: RawSingular,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<DomainLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p1_bounded: Option<bool>,
}

/// Parses `regular` by shape so errors point at the inner problem instead
/// of "no variant matched".
fn regular_field<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<RawRegular, D::Error> {
    use serde::de::Error as _;
    let v = serde_json::Value::deserialize(d)?;
    let err = |e: serde_json::Error| D::Error::custom(format!("field `regular`: {e}"));
    match &v {
        serde_json::Value::String(k) => Ok(RawRegular::Keyword(k.clone())),
        serde_json::Value::Object(o) if o.contains_key("matrix") => {
            let matrix = serde_json::from_value(o["matrix"].clone()).map_err(err)?;
            match o.get("diagonal") {
                Some(dg) => Ok(RawRegular::Both {
                    diagonal: serde_json::from_value(dg.clone()).map_err(err)?,
                    matrix,
                }),
                None => Ok(RawRegular::Matrix { matrix }),
            }
        }
        serde_json::Value::Object(o) if o.contains_key("diagonal") => {
            serde_json::from_value(o["diagonal"].clone()).map(RawRegular::Diagonal).map_err(err)
        }
        _ => serde_json::from_value(v).map(RawRegular::Diagonal).map_err(err),
    }
}

fn singular_field<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<RawSingular, D::Error> {
    use serde::de::Error as _;
    let v = serde_json::Value::deserialize(d)?;
    let err = |e: serde_json::Error| D::Error::custom(format!("field `singular`: {e}"));
    match &v {
        serde_json::Value::String(k) => Ok(RawSingular::Keyword(k.clone())),
        serde_json::Value::Array(_) => serde_json::from_value(v).map(RawSingular::Many).map_err(err),
        _ => serde_json::from_value(v).map(RawSingular::One).map_err(err),
    }
}

impl TryFrom<RawMeasure> for ExtMeasure {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        let tol = Tolerances::default();
        let regular = match raw.regular {
            RawRegular::Keyword(k) if k == "none" => RegularPart::zero(),
            RawRegular::Keyword(k) => return Err(Error::Input(format!("field `regular`: unknown keyword `{k}`"))),
            RawRegular::Both { diagonal, matrix } => RegularPart::new(diagonal, Some(matrix), &tol)?,
            RawRegular::Matrix { matrix } => RegularPart::new(SeqDescriptor::constant(0.0), Some(matrix), &tol)?,
            RawRegular::Diagonal(d) => RegularPart::new(d, None, &tol)?,
        };
        let singular = match raw.singular {
            RawSingular::Keyword(k) if k == "none" => Vec::new(),
            RawSingular::Keyword(k) => return Err(Error::Input(format!("field `singular`: unknown keyword `{k}`"))),
            RawSingular::One(d) => vec![d.domain],
            RawSingular::Many(ds) => ds.into_iter().map(|d| d.domain).collect(),
        };
        let m = ExtMeasure::from_parts(regular, singular);
        if let Some(d) = raw.domain {
            if d != m.domain {
                return Err(Error::Input(format!(
                    "field `domain`: declared {d}, but the singular components give {}",
                    m.domain
                )));
            }
        }
        if let Some(p) = raw.p1_bounded {
            if p != m.p1_bounded {
                return Err(Error::Input(format!(
                    "field `p1_bounded`: declared {p}, but the form gives {}",
                    m.p1_bounded
                )));
            }
        }
        Ok(m)
    }
}

impl From<ExtMeasure> for RawMeasure {
    fn from(m: ExtMeasure) -> Self {
        let reg = m.form.regular;
        let zero_diag = reg.diagonal.facts().is_zero();
        let regular = match (zero_diag, reg.block) {
            (true, None) => RawRegular::Keyword("none".into()),
            (true, Some(b)) => RawRegular::Matrix { matrix: b },
            (false, None) => RawRegular::Diagonal(reg.diagonal),
            (false, Some(b)) => RawRegular::Both {
                diagonal: reg.diagonal,
                matrix: b,
            },
        };
        let singular = match m.form.singular.len() {
            0 => RawSingular::Keyword("none".into()),
            1 => RawSingular::One(RawDomain {
                domain: m.form.singular[0].clone(),
            }),
            _ => RawSingular::Many(m.form.singular.into_iter().map(|domain| RawDomain { domain }).collect()),
        };
        RawMeasure {
            regular,
            singular,
            domain: Some(m.domain),
            p1_bounded: Some(m.p1_bounded),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> DomainLabel {
        s.parse().unwrap()
    }

    #[test]
    fn oplus_examples() {
        let m1 = ExtMeasure::dimension();
        let m2 = ExtMeasure::singular(DomainLabel::full());
        assert!(oplus(&m1, &m2).is_defined());

        let a = ExtMeasure::singular(label("a"));
        let b = ExtMeasure::singular(label("b"));
        match oplus(&a, &b) {
            OplusOutcome::Undefined { reason } => assert!(reason.contains("P1(H)-bounded")),
            other => panic!("{other:?}"),
        }
        let same = oplus(&a, &ExtMeasure::singular(label("a"))).defined().unwrap();
        assert_eq!(same.domain(), &label("a"));
        assert_eq!(same.form().singular.len(), 2);

        assert_eq!(oplus(&m1, &ExtMeasure::zero()).defined().unwrap(), m1);
    }

    #[test]
    fn eval_examples() {
        let id = ExtMeasure::dimension();
        let v = eval_ext(&id, &IndexSet::range(1, 4)).unwrap();
        assert_eq!(v.value, ExtReal::Finite(4.0));
        let s = ExtMeasure::singular(DomainLabel::full());
        assert_eq!(eval_ext(&s, &IndexSet::range(1, 4)).unwrap().value, ExtReal::Finite(0.0));
        assert_eq!(eval_ext(&s, &IndexSet::all()).unwrap().value, ExtReal::Infinite);
        let sum = oplus(&id, &s).defined().unwrap();
        assert_eq!(
            eval_ext(&sum, &IndexSet::Cofinite { excluded: vec![1, 2] }).unwrap().value,
            ExtReal::Infinite
        );
    }

    #[test]
    fn sigma_examples() {
        let m1 = ExtMeasure::dimension();
        let m2 = ExtMeasure::singular(DomainLabel::full());
        let sum = oplus(&m1, &m2).defined().unwrap();
        assert_eq!(decide_sigma_additive(&m1).unwrap().verdict, SigmaAdditivity::SigmaAdditive);
        assert_eq!(decide_sigma_additive(&m2).unwrap().verdict, SigmaAdditivity::NotSigmaAdditive);
        assert_eq!(decide_sigma_additive(&sum).unwrap().verdict, SigmaAdditivity::SigmaAdditive);

        let w = sigma_violation_witness(&m2).unwrap();
        assert_eq!(w.lhs, ExtReal::Finite(0.0));
        assert_eq!(w.rhs, ExtReal::Infinite);
        assert!(sigma_violation_witness(&sum).is_err());
        assert!(sigma_violation_witness(&m1).is_err());

        let undecidable = oplus(&ExtMeasure::diagonal(SeqDescriptor::power(1.0)).unwrap(), &m2)
            .defined()
            .unwrap();
        assert_eq!(
            decide_sigma_additive(&undecidable).unwrap().verdict,
            SigmaAdditivity::Undecidable
        );
    }

    #[test]
    fn demo_default_and_controls() {
        let r = not_sub_gea_demo(DemoVariant::Default).unwrap();
        assert_eq!(r.violation, Some(["m1".into(), "m2".into(), "m1+m2".into()]));
        assert!(!r.finite_check_holds);
        assert_eq!(r.finite_check_witness, r.violation);
        assert!(r.consistent);

        for v in [DemoVariant::ZeroControl, DemoVariant::TraceClassControl] {
            let r = not_sub_gea_demo(v).unwrap();
            assert_eq!(r.violation, None, "{v:?}");
            assert!(r.finite_check_holds, "{v:?}");
            assert!(r.consistent);
        }
    }

    #[test]
    fn frame_type_views() {
        let f = ftf_view(&ExtMeasure::dimension());
        assert_eq!(f.value_at_basis(3).unwrap(), 1.0);
        let a = ftf_view(&ExtMeasure::singular(label("a")));
        let b = ftf_view(&ExtMeasure::singular(label("b")));
        assert!(ftf_oplus(&a, &b).is_err());
        assert!(!induces_frame_function(&ftf_view(&ExtMeasure::singular(DomainLabel::full()))).unwrap());
        assert!(induces_frame_function(&f).unwrap());
    }

    #[test]
    fn sup_gap() {
        let s = ExtMeasure::singular(DomainLabel::full());
        let g = aligned_sup_gap(&s, &IndexSet::all()).unwrap();
        assert!(g.gap);
        assert_eq!(g.finite_sup, ExtReal::Finite(0.0));
        let r = ExtMeasure::diagonal(SeqDescriptor::power(2.0)).unwrap();
        assert!(!aligned_sup_gap(&r, &IndexSet::all()).unwrap().gap);
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"regular":{"family":"constant","c":1},"singular":{"domain":"H"},"domain":"H","p1_bounded":false}"#;
        let m: ExtMeasure = serde_json::from_str(text).unwrap();
        assert!(m.has_singular_part());
        let back: ExtMeasure = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"regular":"none","singular":"none","domain":"H","p1_bounded":false}"#;
        assert!(serde_json::from_str::<ExtMeasure>(bad).is_err());
        let signed = r#"{"regular":{"family":"alternating_power","p":2},"singular":"none"}"#;
        assert!(serde_json::from_str::<ExtMeasure>(signed).is_err());
        let matrix = r#"{"regular":{"matrix":[[2,0],[0,1]]},"singular":"none"}"#;
        let m: ExtMeasure = serde_json::from_str(matrix).unwrap();
        assert_eq!(eval_ext(&m, &IndexSet::finite([2, 5])).unwrap().value, ExtReal::Finite(1.0));
    }

    #[test]
    fn labels() {
        let ab = label("b & a");
        assert_eq!(ab.to_string(), "a&b");
        assert!(ab.is_subset_of(&label("a")));
        assert!(!label("a").is_subset_of(&ab));
        assert!(label("a").is_subset_of(&DomainLabel::full()));
        assert_eq!(label("a").meet(&label("b")), ab);
        assert!("a&H".parse::<DomainLabel>().is_err());
    }
}
