//! Symbolic real sequences `{aₙ}` (1-indexed) standing for diagonal
//! operators `T eₙ = aₙ eₙ` on ℓ².
//!
//! Every descriptor carries exact summability facts derived by family
//! algebra ([`SeqDescriptor::facts`]); a partial-sum heuristic is available
//! as an independent, explicitly labelled second opinion.
//!
//! Frame-type classification of the diagonal form `f(x) = Σ aₙ|xₙ|²` for a
//! bounded sequence:
//!
//! | `Σaₙ⁺` | `Σaₙ⁻` | natural order     | class                                  |
//! |--------|--------|-------------------|----------------------------------------|
//! | `<∞`   | `<∞`   |                   | bounded frame function (case I)        |
//! | `=∞`   | `=∞`   | convergent        | not frame type (case II)               |
//! | `=∞`   | `<∞`   |                   | frame type with `W_H = ∞` (case III)   |
//! | `<∞`   | `=∞`   |                   | not frame type (case III, mirrored)    |
//! | `=∞`   | `=∞`   | not convergent    | not frame type (case IV)               |
//!
//! A frame type function must have ONS sums that are summable or `+∞`, so
//! only the `Σaₙ⁺ = ∞, Σaₙ⁻ < ∞` orientation of case III qualifies; some
//! printed statements of this classification have the two sides swapped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SeqDescriptor {
    /// `aₙ = n^(−p)`.
    Power { p: f64 },
    /// `aₙ = rⁿ`.
    Geometric { r: f64 },
    /// `aₙ = (−1)ⁿ n^(−p)`.
    AlternatingPower { p: f64 },
    /// `aₙ = c`.
    Constant { c: f64 },
    /// `aₙ = values[n−1]` for `n ≤ len`, then the tail family at the same
    /// absolute index (or `0` without a tail).
    Explicit {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<Box<SeqDescriptor>>,
    },
    /// `aₙ = α·bₙ`.
    Scaled { alpha: f64, inner: Box<SeqDescriptor> },
    /// `a₂ₖ = posₖ`, `a₂ₖ₋₁ = −negₖ` for non-negative `pos`, `neg`.
    SignedMerge {
        pos: Box<SeqDescriptor>,
        neg: Box<SeqDescriptor>,
    },
    /// `aₙ = max(bₙ, 0)`.
    PositivePart { of: Box<SeqDescriptor> },
    /// `aₙ = max(−bₙ, 0)`.
    NegativePart { of: Box<SeqDescriptor> },
    /// `aₙ = Σⱼ bⱼ,ₙ`.
    Sum { terms: Vec<SeqDescriptor> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SummabilityClass {
    AbsSummable,
    CondConvergent,
    DivergesToPlus,
    DivergesToMinus,
    Oscillates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

/// Exact facts about a descriptor. `None` means the family algebra cannot
/// decide the fact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeqFacts {
    pub bounded: bool,
    pub nonneg: bool,
    pub nonpos: bool,
    /// Known to tend to zero (`false` means "not known").
    pub tends_to_zero: bool,
    /// `Σ aₙ⁺ < ∞`.
    pub positive_sum_finite: Option<bool>,
    /// `Σ aₙ⁻ < ∞`.
    pub negative_sum_finite: Option<bool>,
    /// Behaviour of the partial sums in the given order.
    pub natural: Option<SummabilityClass>,
    /// `liminf |aₙ| > 0`.
    pub bounded_away_from_zero: Option<bool>,
    /// Set when every term equals this value.
    pub constant_value: Option<f64>,
}

impl SeqFacts {
    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn constant(c: f64) -> Self {
        let (natural, pos, neg) = if c > 0.0 {
            (SummabilityClass::DivergesToPlus, false, true)
        } else if c < 0.0 {
            (SummabilityClass::DivergesToMinus, true, false)
        } else {
            (SummabilityClass::AbsSummable, true, true)
        };
        Self {
            bounded: true,
            nonneg: c >= 0.0,
            nonpos: c <= 0.0,
            tends_to_zero: c == 0.0,
            positive_sum_finite: Some(pos),
            negative_sum_finite: Some(neg),
            natural: Some(natural),
            bounded_away_from_zero: Some(c != 0.0),
            constant_value: Some(c),
        }
    }

    fn natural_from_parts(pos: Option<bool>, neg: Option<bool>) -> Option<SummabilityClass> {
        match (pos?, neg?) {
            (true, true) => Some(SummabilityClass::AbsSummable),
            (false, true) => Some(SummabilityClass::DivergesToPlus),
            (true, false) => Some(SummabilityClass::DivergesToMinus),
            (false, false) => None,
        }
    }

    fn negated(self) -> Self {
        let natural = self.natural.map(|c| match c {
            SummabilityClass::DivergesToPlus => SummabilityClass::DivergesToMinus,
            SummabilityClass::DivergesToMinus => SummabilityClass::DivergesToPlus,
            other => other,
        });
        Self {
            nonneg: self.nonpos,
            nonpos: self.nonneg,
            positive_sum_finite: self.negative_sum_finite,
            negative_sum_finite: self.positive_sum_finite,
            natural,
            constant_value: self.constant_value.map(|c| -c),
            ..self
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant_value == Some(0.0)
    }
}

/// Sum over an index pattern that may diverge to either side.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Signed {
    Finite(f64),
    PlusInf,
    MinusInf,
}

impl Signed {
    fn add(self, other: Signed) -> Option<Signed> {
        use Signed::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Some(Finite(a + b)),
            (PlusInf, MinusInf) | (MinusInf, PlusInf) => None,
            (PlusInf, _) | (_, PlusInf) => Some(PlusInf),
            (MinusInf, _) | (_, MinusInf) => Some(MinusInf),
        }
    }

    fn scale(self, alpha: f64) -> Signed {
        use Signed::*;
        match self {
            _ if alpha == 0.0 => Finite(0.0),
            Finite(a) => Finite(alpha * a),
            PlusInf if alpha > 0.0 => PlusInf,
            MinusInf if alpha < 0.0 => PlusInf,
            _ => MinusInf,
        }
    }
}

/// `Σ_{k≥0} (a + b·k)^(−p)` for `p > 1`, `a, b ≥ 1`: direct summation of
/// the head and an Euler-Maclaurin tail through the third derivative.
fn power_pattern_sum(a: f64, b: f64, p: f64) -> f64 {
    const HEAD: u64 = 4000;
    let f = |x: f64| (a + b * x).powf(-p);
    let head = neumaier((0..HEAD).map(|k| f(k as f64)));
    let k = HEAD as f64;
    let base = a + b * k;
    let integral = base.powf(1.0 - p) / (b * (p - 1.0));
    let d1 = -p * b * base.powf(-p - 1.0);
    let d3 = -p * (p + 1.0) * (p + 2.0) * b.powi(3) * base.powf(-p - 3.0);
    head + integral + f(k) / 2.0 - d1 / 12.0 + d3 / 720.0
}

/// Compensated (Neumaier) summation.
pub fn neumaier<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = NeumaierSum::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl SeqDescriptor {
    pub fn power(p: f64) -> Self {
        Self::Power { p }
    }

    pub fn geometric(r: f64) -> Self {
        Self::Geometric { r }
    }

    pub fn alternating_power(p: f64) -> Self {
        Self::AlternatingPower { p }
    }

    pub fn constant(c: f64) -> Self {
        Self::Constant { c }
    }

    pub fn explicit(values: Vec<f64>, tail: Option<SeqDescriptor>) -> Self {
        Self::Explicit {
            values,
            tail: tail.map(Box::new),
        }
    }

    pub fn scaled(alpha: f64, inner: SeqDescriptor) -> Self {
        Self::Scaled {
            alpha,
            inner: Box::new(inner),
        }
    }

    pub fn signed_merge(pos: SeqDescriptor, neg: SeqDescriptor) -> Self {
        Self::SignedMerge {
            pos: Box::new(pos),
            neg: Box::new(neg),
        }
    }

    /// Normalized sum: nested sums are flattened, zero terms dropped and the
    /// remaining terms put in a canonical order, so the result does not
    /// depend on the order or grouping of its arguments.
    pub fn sum_of<I: IntoIterator<Item = SeqDescriptor>>(terms: I) -> Self {
        let mut flat = Vec::new();
        for t in terms {
            match t {
                SeqDescriptor::Sum { terms } => flat.extend(terms),
                other => flat.push(other),
            }
        }
        flat.retain(|t| !t.facts().is_zero());
        flat.sort_by_cached_key(|t| serde_json::to_string(t).unwrap_or_default());
        match flat.len() {
            0 => Self::constant(0.0),
            1 => flat.pop().expect("one term"),
            _ => Self::Sum { terms: flat },
        }
    }

    /// Structural checks: finite parameters and non-negative merge streams.
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidDescriptor(format!("{what} must be finite")))
            }
        };
        match self {
            Self::Power { p } | Self::AlternatingPower { p } => finite(*p, "p"),
            Self::Geometric { r } => finite(*r, "r"),
            Self::Constant { c } => finite(*c, "c"),
            Self::Explicit { values, tail } => {
                for v in values {
                    finite(*v, "values")?;
                }
                tail.as_ref().map_or(Ok(()), |t| t.validate())
            }
            Self::Scaled { alpha, inner } => {
                finite(*alpha, "alpha")?;
                inner.validate()
            }
            Self::SignedMerge { pos, neg } => {
                pos.validate()?;
                neg.validate()?;
                if !pos.facts().nonneg || !neg.facts().nonneg {
                    return Err(Error::InvalidDescriptor(
                        "signed_merge needs non-negative `pos` and `neg` families".into(),
                    ));
                }
                Ok(())
            }
            Self::PositivePart { of } | Self::NegativePart { of } => of.validate(),
            Self::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
        }
    }

    /// `aₙ` for `n ≥ 1`.
    pub fn term(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match self {
            Self::Power { p } => (n as f64).powf(-p),
            Self::Geometric { r } => r.powf(n as f64),
            Self::AlternatingPower { p } => {
                let s = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
                s * (n as f64).powf(-p)
            }
            Self::Constant { c } => *c,
            Self::Explicit { values, tail } => {
                if (n as usize) <= values.len() {
                    values[n as usize - 1]
                } else {
                    tail.as_ref().map_or(0.0, |t| t.term(n))
                }
            }
            Self::Scaled { alpha, inner } => alpha * inner.term(n),
            Self::SignedMerge { pos, neg } => {
                if n.is_multiple_of(2) {
                    pos.term(n / 2)
                } else {
                    -neg.term(n.div_ceil(2))
                }
            }
            Self::PositivePart { of } => of.term(n).max(0.0),
            Self::NegativePart { of } => (-of.term(n)).max(0.0),
            Self::Sum { terms } => terms.iter().map(|t| t.term(n)).sum(),
        }
    }

    pub fn facts(&self) -> SeqFacts {
        use SummabilityClass::*;
        match self {
            Self::Power { p } => {
                let p = *p;
                if p == 0.0 {
                    SeqFacts::constant(1.0)
                } else {
                    let summable = p > 1.0;
                    SeqFacts {
                        bounded: p > 0.0,
                        nonneg: true,
                        nonpos: false,
                        tends_to_zero: p > 0.0,
                        positive_sum_finite: Some(summable),
                        negative_sum_finite: Some(true),
                        natural: Some(if summable { AbsSummable } else { DivergesToPlus }),
                        bounded_away_from_zero: Some(p < 0.0),
                        constant_value: None,
                    }
                }
            }
            Self::Geometric { r } => {
                let r = *r;
                if r == 0.0 || r == 1.0 {
                    return SeqFacts::constant(r);
                }
                let small = r.abs() < 1.0;
                if r > 0.0 {
                    SeqFacts {
                        bounded: small,
                        nonneg: true,
                        nonpos: false,
                        tends_to_zero: small,
                        positive_sum_finite: Some(small),
                        negative_sum_finite: Some(true),
                        natural: Some(if small { AbsSummable } else { DivergesToPlus }),
                        bounded_away_from_zero: Some(!small),
                        constant_value: None,
                    }
                } else {
                    SeqFacts {
                        bounded: r >= -1.0,
                        nonneg: false,
                        nonpos: false,
                        tends_to_zero: small,
                        positive_sum_finite: Some(small),
                        negative_sum_finite: Some(small),
                        natural: Some(if small { AbsSummable } else { Oscillates }),
                        bounded_away_from_zero: Some(!small),
                        constant_value: None,
                    }
                }
            }
            Self::AlternatingPower { p } => {
                let p = *p;
                let summable = p > 1.0;
                SeqFacts {
                    bounded: p >= 0.0,
                    nonneg: false,
                    nonpos: false,
                    tends_to_zero: p > 0.0,
                    positive_sum_finite: Some(summable),
                    negative_sum_finite: Some(summable),
                    natural: Some(if summable {
                        AbsSummable
                    } else if p > 0.0 {
                        CondConvergent
                    } else {
                        Oscillates
                    }),
                    bounded_away_from_zero: Some(p <= 0.0),
                    constant_value: None,
                }
            }
            Self::Constant { c } => SeqFacts::constant(*c),
            Self::Explicit { values, tail } => {
                let t = tail.as_ref().map_or_else(SeqFacts::zero, |t| t.facts());
                SeqFacts {
                    nonneg: t.nonneg && values.iter().all(|&v| v >= 0.0),
                    nonpos: t.nonpos && values.iter().all(|&v| v <= 0.0),
                    constant_value: t.constant_value.filter(|c| values.iter().all(|v| v == c)),
                    ..t
                }
            }
            Self::Scaled { alpha, inner } => {
                let alpha = *alpha;
                if alpha == 0.0 {
                    return SeqFacts::zero();
                }
                let f = inner.facts();
                let f = SeqFacts {
                    constant_value: f.constant_value.map(|c| c * alpha.abs()),
                    ..f
                };
                if alpha > 0.0 {
                    f
                } else {
                    f.negated()
                }
            }
            Self::SignedMerge { pos, neg } => {
                let (p, q) = (pos.facts(), neg.facts());
                let pos_fin = p.positive_sum_finite;
                let neg_fin = q.positive_sum_finite;
                let natural = match (pos_fin, neg_fin) {
                    (Some(false), Some(false)) if pos == neg => {
                        Some(if p.tends_to_zero { CondConvergent } else { Oscillates })
                    }
                    _ => SeqFacts::natural_from_parts(pos_fin, neg_fin),
                };
                let away = match (p.bounded_away_from_zero, q.bounded_away_from_zero) {
                    (Some(true), Some(true)) => Some(true),
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    _ => None,
                };
                SeqFacts {
                    bounded: p.bounded && q.bounded,
                    nonneg: q.is_zero(),
                    nonpos: p.is_zero(),
                    tends_to_zero: p.tends_to_zero && q.tends_to_zero,
                    positive_sum_finite: pos_fin,
                    negative_sum_finite: neg_fin,
                    natural,
                    bounded_away_from_zero: away,
                    constant_value: (p.is_zero() && q.is_zero()).then_some(0.0),
                }
            }
            Self::PositivePart { of } => part_facts(of.facts()),
            Self::NegativePart { of } => part_facts(of.facts().negated()),
            Self::Sum { terms } => {
                let fs: Vec<SeqFacts> = terms.iter().map(|t| t.facts()).collect();
                let all = |pred: &dyn Fn(&SeqFacts) -> bool| fs.iter().all(pred);
                let nonneg = all(&|f| f.nonneg);
                let nonpos = all(&|f| f.nonpos);
                let abs = all(&|f| f.natural == Some(AbsSummable));
                let (pos_fin, neg_fin) = if abs {
                    (Some(true), Some(true))
                } else if nonneg {
                    (
                        fs.iter().map(|f| f.positive_sum_finite).try_fold(true, |acc, x| x.map(|b| acc && b)),
                        Some(true),
                    )
                } else if nonpos {
                    (
                        Some(true),
                        fs.iter().map(|f| f.negative_sum_finite).try_fold(true, |acc, x| x.map(|b| acc && b)),
                    )
                } else {
                    (None, None)
                };
                let away = if nonneg || nonpos {
                    if fs.iter().any(|f| f.bounded_away_from_zero == Some(true)) {
                        Some(true)
                    } else if all(&|f| f.is_zero()) {
                        Some(false)
                    } else {
                        None
                    }
                } else {
                    None
                };
                SeqFacts {
                    bounded: all(&|f| f.bounded),
                    nonneg,
                    nonpos,
                    tends_to_zero: all(&|f| f.tends_to_zero),
                    positive_sum_finite: pos_fin,
                    negative_sum_finite: neg_fin,
                    natural: SeqFacts::natural_from_parts(pos_fin, neg_fin),
                    bounded_away_from_zero: away,
                    constant_value: fs
                        .iter()
                        .map(|f| f.constant_value)
                        .try_fold(0.0, |acc, c| c.map(|c| acc + c)),
                }
            }
        }
    }

    /// Sign of the terms on even and odd indices, when it depends on parity
    /// only: `(even, odd)` with `+1`, `-1`.
    fn parity_signs(&self) -> Option<(f64, f64)> {
        match self {
            Self::AlternatingPower { .. } => Some((1.0, -1.0)),
            Self::Geometric { r } if *r < 0.0 => Some((1.0, -1.0)),
            Self::Scaled { alpha, inner } if *alpha != 0.0 => {
                inner.parity_signs().map(|(e, o)| (e * alpha.signum(), o * alpha.signum()))
            }
            _ => None,
        }
    }

    /// `Σ_{k≥0} a_{start + step·k}` when the family algebra can evaluate it.
    fn pattern_sum(&self, start: u64, step: u64) -> Option<Signed> {
        let split = |d: &Self| -> Option<Signed> {
            d.pattern_sum(start, 2 * step)?.add(d.pattern_sum(start + step, 2 * step)?)
        };
        match self {
            Self::Power { p } => {
                if *p > 1.0 {
                    Some(Signed::Finite(power_pattern_sum(start as f64, step as f64, *p)))
                } else {
                    Some(Signed::PlusInf)
                }
            }
            Self::Geometric { r } => {
                let r = *r;
                if r.abs() < 1.0 {
                    Some(Signed::Finite(r.powf(start as f64) / (1.0 - r.powf(step as f64))))
                } else if r >= 1.0 {
                    Some(Signed::PlusInf)
                } else if step.is_multiple_of(2) {
                    Some(if start.is_multiple_of(2) { Signed::PlusInf } else { Signed::MinusInf })
                } else {
                    None
                }
            }
            Self::AlternatingPower { p } => {
                if step % 2 == 1 {
                    return split(self);
                }
                let sign = if start.is_multiple_of(2) { 1.0 } else { -1.0 };
                Self::Power { p: *p }.pattern_sum(start, step).map(|s| s.scale(sign))
            }
            Self::Constant { c } => Some(if *c == 0.0 {
                Signed::Finite(0.0)
            } else {
                Signed::PlusInf.scale(*c)
            }),
            Self::Explicit { values, tail } => {
                let len = values.len() as u64;
                let head = neumaier(
                    (0..)
                        .map(|k| start + step * k)
                        .take_while(|&n| n <= len)
                        .map(|n| values[n as usize - 1]),
                );
                let first_tail = if start > len {
                    start
                } else {
                    start + step * (len + 1 - start).div_ceil(step)
                };
                let rest = match tail {
                    Some(t) => t.pattern_sum(first_tail, step)?,
                    None => Signed::Finite(0.0),
                };
                Signed::Finite(head).add(rest)
            }
            Self::Scaled { alpha, inner } => {
                if *alpha == 0.0 {
                    Some(Signed::Finite(0.0))
                } else {
                    inner.pattern_sum(start, step).map(|s| s.scale(*alpha))
                }
            }
            Self::SignedMerge { pos, neg } => {
                if step % 2 == 1 {
                    return split(self);
                }
                if start.is_multiple_of(2) {
                    pos.pattern_sum(start / 2, step / 2)
                } else {
                    neg.pattern_sum(start.div_ceil(2), step / 2).map(|s| s.scale(-1.0))
                }
            }
            Self::PositivePart { of } | Self::NegativePart { of } => {
                let flip = if matches!(self, Self::NegativePart { .. }) { -1.0 } else { 1.0 };
                let f = of.facts();
                let (nonneg, nonpos) = if flip > 0.0 { (f.nonneg, f.nonpos) } else { (f.nonpos, f.nonneg) };
                if nonneg {
                    return of.pattern_sum(start, step).map(|s| s.scale(flip));
                }
                if nonpos {
                    return Some(Signed::Finite(0.0));
                }
                let (even, odd) = of.parity_signs()?;
                if step % 2 == 1 {
                    return split(self);
                }
                let sign = flip * if start.is_multiple_of(2) { even } else { odd };
                if sign > 0.0 {
                    of.pattern_sum(start, step).map(|s| s.scale(flip))
                } else {
                    Some(Signed::Finite(0.0))
                }
            }
            Self::Sum { terms } => terms
                .iter()
                .try_fold(Signed::Finite(0.0), |acc, t| acc.add(t.pattern_sum(start, step)?)),
        }
    }
}

fn part_facts(f: SeqFacts) -> SeqFacts {
    if f.nonneg {
        return f;
    }
    if f.nonpos {
        return SeqFacts::zero();
    }
    let pos_fin = f.positive_sum_finite;
    SeqFacts {
        bounded: f.bounded,
        nonneg: true,
        nonpos: false,
        tends_to_zero: f.tends_to_zero,
        positive_sum_finite: pos_fin,
        negative_sum_finite: Some(true),
        natural: SeqFacts::natural_from_parts(pos_fin, Some(true)),
        bounded_away_from_zero: if f.negative_sum_finite == Some(false) { Some(false) } else { None },
        constant_value: None,
    }
}

/// `(aₙ⁺, aₙ⁻)` with `aₙ = aₙ⁺ − aₙ⁻` and `aₙ⁺·aₙ⁻ = 0`.
pub fn pos_neg_parts(s: &SeqDescriptor) -> (SeqDescriptor, SeqDescriptor) {
    let f = s.facts();
    if f.nonneg {
        (s.clone(), SeqDescriptor::constant(0.0))
    } else if f.nonpos {
        (SeqDescriptor::constant(0.0), SeqDescriptor::scaled(-1.0, s.clone()))
    } else {
        (
            SeqDescriptor::PositivePart { of: Box::new(s.clone()) },
            SeqDescriptor::NegativePart { of: Box::new(s.clone()) },
        )
    }
}

/// Number of terms the heuristic examines.
pub const HEURISTIC_TERMS: u64 = 1_000_000;

/// Partial-sum statistics gathered by the heuristic classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeuristicEvidence {
    /// Growth of `Σaₙ⁺` over `(N/100, N/10]` and `(N/10, N]`.
    pub positive_decades: [f64; 2],
    pub negative_decades: [f64; 2],
    /// Range of the partial sums over the same two windows.
    pub oscillation: [f64; 2],
    pub final_sum: f64,
    pub positive_sum_finite: bool,
    pub negative_sum_finite: bool,
}

fn decade_finite(d_prev: f64, d_last: f64, total: f64) -> bool {
    if !d_last.is_finite() || !total.is_finite() {
        return false;
    }
    if d_last <= 1e-12 * total.max(1.0) {
        return true;
    }
    d_prev > 0.0 && d_last < 0.8 * d_prev
}

/// Classifies from partial sums over `n ≤ terms` (`terms` a multiple of 100).
///
/// A non-negative series is judged finite when its growth over the last
/// decade of indices is negligible or below 0.8 of its growth over the
/// decade before (power tails `n^(−p)` shrink by `10^(1−p)` per decade).
/// When both sign classes diverge, the series is judged convergent if the
/// range of the partial sums shrinks between the two decade windows (by at
/// least 10%) while their drift stays inside the earlier range; divergent
/// to `±∞` if the late half of the last window lies entirely beyond the
/// earlier window; oscillating otherwise.
pub fn heuristic_evidence(s: &SeqDescriptor, terms: u64) -> HeuristicEvidence {
    scan(s, terms).0
}

struct Windows {
    lo5: f64,
    hi5: f64,
    lo_late: f64,
    hi_late: f64,
    marks: [f64; 3],
}

fn scan(s: &SeqDescriptor, terms: u64) -> (HeuristicEvidence, Windows) {
    let n4 = terms / 100;
    let n5 = terms / 10;
    let n6 = terms;
    let mut sum = NeumaierSum::default();
    let mut pos = NeumaierSum::default();
    let mut neg = NeumaierSum::default();
    let mut pos_marks = [0.0; 3];
    let mut neg_marks = [0.0; 3];
    let mut sum_marks = [0.0; 3];
    let (mut lo5, mut hi5) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo6, mut hi6) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo_late, mut hi_late) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in 1..=n6 {
        let a = s.term(n);
        sum.add(a);
        if a > 0.0 {
            pos.add(a);
        } else {
            neg.add(-a);
        }
        let v = sum.value();
        if n > n4 && n <= n5 {
            lo5 = lo5.min(v);
            hi5 = hi5.max(v);
        } else if n > n5 {
            lo6 = lo6.min(v);
            hi6 = hi6.max(v);
            if n > n6 / 2 {
                lo_late = lo_late.min(v);
                hi_late = hi_late.max(v);
            }
        }
        for (i, &mark) in [n4, n5, n6].iter().enumerate() {
            if n == mark {
                pos_marks[i] = pos.value();
                neg_marks[i] = neg.value();
                sum_marks[i] = v;
            }
        }
    }
    let pd = [pos_marks[1] - pos_marks[0], pos_marks[2] - pos_marks[1]];
    let nd = [neg_marks[1] - neg_marks[0], neg_marks[2] - neg_marks[1]];
    let evidence = HeuristicEvidence {
        positive_decades: pd,
        negative_decades: nd,
        oscillation: [hi5 - lo5, hi6 - lo6],
        final_sum: sum_marks[2],
        positive_sum_finite: decade_finite(pd[0], pd[1], pos_marks[2]),
        negative_sum_finite: decade_finite(nd[0], nd[1], neg_marks[2]),
    };
    let windows = Windows {
        lo5,
        hi5,
        lo_late,
        hi_late,
        marks: sum_marks,
    };
    (evidence, windows)
}

fn heuristic_class(s: &SeqDescriptor, terms: u64) -> (SummabilityClass, HeuristicEvidence) {
    use SummabilityClass::*;
    let (ev, w) = scan(s, terms);
    let class = match (ev.positive_sum_finite, ev.negative_sum_finite) {
        (true, true) => AbsSummable,
        (false, true) => DivergesToPlus,
        (true, false) => DivergesToMinus,
        (false, false) => {
            let [osc5, osc6] = ev.oscillation;
            let drift = (w.marks[2] - w.marks[1]).abs();
            if osc6 < 0.9 * osc5 && drift <= osc5 {
                CondConvergent
            } else if w.lo_late > w.hi5 {
                DivergesToPlus
            } else if w.hi_late < w.lo5 {
                DivergesToMinus
            } else {
                Oscillates
            }
        }
    };
    (class, ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub class: SummabilityClass,
    pub provenance: Provenance,
}

/// Exact mode returns the declared class and fails without metadata;
/// heuristic mode examines partial sums up to [`HEURISTIC_TERMS`].
pub fn classify_summability(s: &SeqDescriptor, mode: Mode) -> Result<Classification> {
    s.validate()?;
    match mode {
        Mode::Exact => s
            .facts()
            .natural
            .map(|class| Classification {
                class,
                provenance: Provenance::Exact,
            })
            .ok_or(Error::NoMetadata),
        Mode::Heuristic => Ok(Classification {
            class: heuristic_class(s, HEURISTIC_TERMS).0,
            provenance: Provenance::Heuristic,
        }),
    }
}

/// Heuristic class together with the evidence it was based on.
pub fn classify_heuristic_with_evidence(s: &SeqDescriptor, terms: u64) -> (SummabilityClass, HeuristicEvidence) {
    heuristic_class(s, terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameTypeClass {
    /// Case I: `Σ|aₙ| < ∞`.
    BoundedFrameFunction,
    /// Case II: `Σaₙ` convergent, `Σ|aₙ| = ∞`.
    NotFrameTypeCondConvergent,
    /// Case III: `Σaₙ⁺ = ∞`, `Σaₙ⁻ < ∞`; frame type with `W_H = ∞`.
    FrameTypeInfiniteWeight,
    /// Case III mirrored: `Σaₙ⁺ < ∞`, `Σaₙ⁻ = ∞`; ONB sums reach `−∞`.
    NotFrameTypeNegativeInfiniteWeight,
    /// Case IV: `Σaₙ⁺ = ∞ = Σaₙ⁻` without convergence.
    NotFrameTypeBothDiverge,
}

impl FrameTypeClass {
    pub fn is_frame_type(self) -> bool {
        matches!(self, Self::BoundedFrameFunction | Self::FrameTypeInfiniteWeight)
    }

    pub fn case(self) -> &'static str {
        match self {
            Self::BoundedFrameFunction => "I",
            Self::NotFrameTypeCondConvergent => "II",
            Self::FrameTypeInfiniteWeight => "III",
            Self::NotFrameTypeNegativeInfiniteWeight => "III (mirrored)",
            Self::NotFrameTypeBothDiverge => "IV",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameTypeVerdict {
    pub class: FrameTypeClass,
    pub provenance: Provenance,
}

/// Decides whether `f(x) = Σ aₙ|xₙ|²` on the unit sphere of ℓ² is a frame
/// type function, for bounded `{aₙ}`. Facts the family algebra cannot decide
/// are filled in by the heuristic and the verdict is labelled accordingly.
pub fn classify_frame_type(s: &SeqDescriptor) -> Result<FrameTypeVerdict> {
    s.validate()?;
    let f = s.facts();
    if !f.bounded {
        return Err(Error::Unbounded);
    }
    let mut provenance = Provenance::Exact;
    let mut heuristic: Option<(SummabilityClass, HeuristicEvidence)> = None;
    let mut heur = |provenance: &mut Provenance| {
        *provenance = Provenance::Heuristic;
        *heuristic.get_or_insert_with(|| heuristic_class(s, HEURISTIC_TERMS))
    };
    let pos = match f.positive_sum_finite {
        Some(b) => b,
        None => heur(&mut provenance).1.positive_sum_finite,
    };
    let neg = match f.negative_sum_finite {
        Some(b) => b,
        None => heur(&mut provenance).1.negative_sum_finite,
    };
    let class = match (pos, neg) {
        (true, true) => FrameTypeClass::BoundedFrameFunction,
        (false, true) => FrameTypeClass::FrameTypeInfiniteWeight,
        (true, false) => FrameTypeClass::NotFrameTypeNegativeInfiniteWeight,
        (false, false) => {
            let natural = match f.natural {
                Some(c) => c,
                None => heur(&mut provenance).0,
            };
            if natural == SummabilityClass::CondConvergent {
                FrameTypeClass::NotFrameTypeCondConvergent
            } else {
                FrameTypeClass::NotFrameTypeBothDiverge
            }
        }
    };
    Ok(FrameTypeVerdict { class, provenance })
}

/// Frame-type class from partial sums alone, ignoring declared facts; the
/// independent oracle for [`classify_frame_type`].
pub fn classify_frame_type_heuristic(s: &SeqDescriptor) -> Result<FrameTypeClass> {
    s.validate()?;
    let (natural, ev) = heuristic_class(s, HEURISTIC_TERMS);
    Ok(match (ev.positive_sum_finite, ev.negative_sum_finite) {
        (true, true) => FrameTypeClass::BoundedFrameFunction,
        (false, true) => FrameTypeClass::FrameTypeInfiniteWeight,
        (true, false) => FrameTypeClass::NotFrameTypeNegativeInfiniteWeight,
        (false, false) if natural == SummabilityClass::CondConvergent => {
            FrameTypeClass::NotFrameTypeCondConvergent
        }
        (false, false) => FrameTypeClass::NotFrameTypeBothDiverge,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Finite(f64),
    Infinite(InfiniteTarget),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfiniteTarget {
    #[serde(rename = "inf")]
    PlusInfinity,
    #[serde(rename = "-inf")]
    MinusInfinity,
}

impl std::str::FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(Target::Infinite(InfiniteTarget::PlusInfinity)),
            "-inf" | "-infinity" => Ok(Target::Infinite(InfiniteTarget::MinusInfinity)),
            "pi" => Ok(Target::Finite(std::f64::consts::PI)),
            "-pi" => Ok(Target::Finite(-std::f64::consts::PI)),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Target::Finite)
                .ok_or_else(|| Error::Input(format!("field `target`: cannot parse `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rearrangement {
    /// Original (1-based) indices in the order they were used.
    pub indices: Vec<u64>,
    pub partial_sums: Vec<f64>,
    /// Number of times the partial sums switch sides of a finite target.
    pub crossings: usize,
    /// Smallest `|Sⱼ − target|` once the target has been reached or
    /// crossed (finite targets only).
    pub closest_approach: Option<f64>,
    pub final_sum: f64,
}

/// Greedy Riemann rearrangement of a conditionally convergent series.
///
/// For a finite target, the next unused non-negative term is appended while
/// the partial sum is at most the target and the next unused negative term
/// otherwise. For `±∞`, terms of the favoured sign are appended until the
/// partial sum passes the next integer milestone, then one term of the other
/// sign. Each sign class is consumed in its original order, so every index
/// is used at most once.
pub fn rearrange_to_target(s: &SeqDescriptor, target: Target, steps: usize) -> Result<Rearrangement> {
    s.validate()?;
    let class = match s.facts().natural {
        Some(c) => c,
        None => heuristic_class(s, HEURISTIC_TERMS).0,
    };
    match class {
        SummabilityClass::CondConvergent => {}
        SummabilityClass::AbsSummable => {
            return Err(Error::Precondition(
                "series is absolutely summable; every rearrangement has the same sum".into(),
            ))
        }
        other => {
            return Err(Error::Precondition(format!(
                "series is not conditionally convergent ({other:?})"
            )))
        }
    }
    let scan_limit = 64 * (steps as u64 + 1024);
    let mut next_pos = 1u64;
    let mut next_neg = 1u64;
    let mut take = |positive: bool| -> Result<(u64, f64)> {
        let cursor = if positive { &mut next_pos } else { &mut next_neg };
        loop {
            if *cursor > scan_limit {
                return Err(Error::Precondition("sign class exhausted within the scan limit".into()));
            }
            let n = *cursor;
            *cursor += 1;
            let a = s.term(n);
            if (a >= 0.0) == positive {
                return Ok((n, a));
            }
        }
    };
    let mut indices = Vec::with_capacity(steps);
    let mut partial_sums = Vec::with_capacity(steps);
    let mut sum = NeumaierSum::default();
    let mut crossings = 0usize;
    let mut milestone = 1.0;
    let mut above: Option<bool> = None;
    let mut reached = false;
    let mut closest_approach: Option<f64> = None;
    for _ in 0..steps {
        let current = sum.value();
        let positive = match target {
            Target::Finite(t) => current <= t,
            Target::Infinite(InfiniteTarget::PlusInfinity) => {
                if current > milestone {
                    milestone += 1.0;
                    false
                } else {
                    true
                }
            }
            Target::Infinite(InfiniteTarget::MinusInfinity) => {
                if current < -milestone {
                    milestone += 1.0;
                    true
                } else {
                    false
                }
            }
        };
        let (n, a) = take(positive)?;
        sum.add(a);
        let v = sum.value();
        if let Target::Finite(t) = target {
            let side = v > t;
            if above.is_some_and(|prev| prev != side) {
                crossings += 1;
                reached = true;
            }
            above = Some(side);
            reached |= v == t;
            if reached {
                let err = (v - t).abs();
                closest_approach = Some(closest_approach.map_or(err, |c: f64| c.min(err)));
            }
        }
        indices.push(n);
        partial_sums.push(v);
    }
    Ok(Rearrangement {
        final_sum: sum.value(),
        indices,
        partial_sums,
        crossings,
        closest_approach,
    })
}

/// Index sets `J ⊆ {1, 2, …}` selecting the coordinate subspace
/// `M = closed span{eₙ : n ∈ J}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IndexSet {
    Finite { indices: Vec<u64> },
    /// Everything except `excluded`; `{"kind": "cofinite", "excluded": []}`
    /// is the whole space.
    Cofinite {
        #[serde(default)]
        excluded: Vec<u64>,
    },
    /// `{start, start + step, start + 2·step, …}`.
    Arithmetic { start: u64, step: u64 },
}

impl IndexSet {
    pub fn all() -> Self {
        Self::Cofinite { excluded: Vec::new() }
    }

    pub fn finite<I: IntoIterator<Item = u64>>(indices: I) -> Self {
        Self::Finite {
            indices: indices.into_iter().collect(),
        }
    }

    pub fn range(from: u64, to: u64) -> Self {
        Self::finite(from..=to)
    }

    pub fn evens() -> Self {
        Self::Arithmetic { start: 2, step: 2 }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            Self::Finite { indices } => indices.contains(&n),
            Self::Cofinite { excluded } => n >= 1 && !excluded.contains(&n),
            Self::Arithmetic { start, step } => n >= *start && (n - start).is_multiple_of(*step),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Input(format!("index set: {what}")));
        match self {
            Self::Finite { indices } | Self::Cofinite { excluded: indices } => {
                if indices.contains(&0) {
                    return bad("indices start at 1");
                }
            }
            Self::Arithmetic { start, step } => {
                if *start == 0 {
                    return bad("`start` must be at least 1");
                }
                if *step == 0 {
                    return bad("`step` must be at least 1");
                }
            }
        }
        Ok(())
    }

    /// Sorted distinct indices of a finite set.
    pub fn finite_indices(&self) -> Option<Vec<u64>> {
        match self {
            Self::Finite { indices } => {
                let mut v = indices.clone();
                v.sort_unstable();
                v.dedup();
                Some(v)
            }
            _ => None,
        }
    }

    /// `J ∩ {1..=n}` in increasing order.
    pub fn prefix(&self, n: u64) -> Vec<u64> {
        match self {
            Self::Finite { .. } => self
                .finite_indices()
                .unwrap_or_default()
                .into_iter()
                .filter(|&i| i <= n)
                .collect(),
            _ => (1..=n).filter(|&i| self.contains(i)).collect(),
        }
    }
}

/// A value in `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }
}

impl std::ops::Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinite,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            ExtReal::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: ExtReal,
    /// `false` when the value is a numeric estimate (partial sums plus the
    /// heuristic divergence test) rather than an exact evaluation.
    pub exact: bool,
}

/// `m(M_J) = Σ_{n∈J} aₙ ∈ [0, ∞]` for the positive diagonal form with
/// entries `aₙ`: the trace of the compression when it is trace class and
/// `∞` otherwise.
pub fn diagonal_measure_eval(s: &SeqDescriptor, j: &IndexSet) -> Result<MeasureValue> {
    s.validate()?;
    j.validate()?;
    if !s.facts().nonneg {
        return Err(Error::SignedSequence);
    }
    let exact = |v: ExtReal| MeasureValue { value: v, exact: true };
    let to_ext = |x: Signed| match x {
        Signed::Finite(v) => ExtReal::Finite(v.max(0.0)),
        _ => ExtReal::Infinite,
    };
    match j {
        IndexSet::Finite { .. } => {
            let idx = j.finite_indices().expect("finite");
            Ok(exact(ExtReal::Finite(neumaier(idx.iter().map(|&n| s.term(n))))))
        }
        IndexSet::Cofinite { excluded } => match s.pattern_sum(1, 1) {
            Some(total) => {
                let mut ex = excluded.clone();
                ex.sort_unstable();
                ex.dedup();
                Ok(exact(match to_ext(total) {
                    ExtReal::Finite(t) => {
                        ExtReal::Finite((t - neumaier(ex.iter().map(|&n| s.term(n)))).max(0.0))
                    }
                    ExtReal::Infinite => ExtReal::Infinite,
                }))
            }
            None => Ok(estimate(s, j)),
        },
        IndexSet::Arithmetic { start, step } => match s.pattern_sum(*start, *step) {
            Some(v) => Ok(exact(to_ext(v))),
            None => Ok(estimate(s, j)),
        },
    }
}

fn estimate(s: &SeqDescriptor, j: &IndexSet) -> MeasureValue {
    let restricted = SeqDescriptor::explicit(
        (1..=HEURISTIC_TERMS)
            .map(|n| if j.contains(n) { s.term(n) } else { 0.0 })
            .collect(),
        None,
    );
    let ev = heuristic_evidence(&restricted, HEURISTIC_TERMS);
    let value = if ev.positive_sum_finite {
        ExtReal::Finite(ev.final_sum)
    } else {
        ExtReal::Infinite
    };
    MeasureValue { value, exact: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SummabilityClass::*;

    #[test]
    fn parts_of_alternating_harmonic() {
        let s = SeqDescriptor::alternating_power(1.0);
        let (p, q) = pos_neg_parts(&s);
        assert_eq!(p.term(2), 0.5);
        assert_eq!(p.term(3), 0.0);
        assert_eq!(q.term(3), 1.0 / 3.0);
        assert_eq!(q.term(4), 0.0);
        let (p, q) = pos_neg_parts(&SeqDescriptor::constant(1.0));
        assert_eq!(p, SeqDescriptor::constant(1.0));
        assert_eq!(q, SeqDescriptor::constant(0.0));
    }

    #[test]
    fn exact_classes() {
        let c = |s: SeqDescriptor| classify_summability(&s, Mode::Exact).unwrap().class;
        assert_eq!(c(SeqDescriptor::power(2.0)), AbsSummable);
        assert_eq!(c(SeqDescriptor::alternating_power(1.0)), CondConvergent);
        assert_eq!(
            c(SeqDescriptor::signed_merge(SeqDescriptor::constant(1.0), SeqDescriptor::power(2.0))),
            DivergesToPlus
        );
        assert_eq!(c(SeqDescriptor::alternating_power(0.0)), Oscillates);
        assert_eq!(c(SeqDescriptor::scaled(-1.0, SeqDescriptor::power(1.0))), DivergesToMinus);
    }

    #[test]
    fn exact_mode_without_metadata_errors() {
        let s = SeqDescriptor::signed_merge(SeqDescriptor::power(0.5), SeqDescriptor::power(1.0));
        assert_eq!(classify_summability(&s, Mode::Exact), Err(Error::NoMetadata));
        let h = classify_summability(&s, Mode::Heuristic).unwrap();
        assert_eq!(h.class, DivergesToPlus);
        assert_eq!(h.provenance, Provenance::Heuristic);
    }

    #[test]
    fn frame_type_examples() {
        let c = |s: SeqDescriptor| classify_frame_type(&s).unwrap().class;
        assert_eq!(c(SeqDescriptor::power(2.0)), FrameTypeClass::BoundedFrameFunction);
        assert_eq!(c(SeqDescriptor::alternating_power(0.0)), FrameTypeClass::NotFrameTypeBothDiverge);
        assert_eq!(c(SeqDescriptor::alternating_power(1.0)), FrameTypeClass::NotFrameTypeCondConvergent);
        assert_eq!(
            c(SeqDescriptor::signed_merge(SeqDescriptor::constant(1.0), SeqDescriptor::power(2.0))),
            FrameTypeClass::FrameTypeInfiniteWeight
        );
        assert_eq!(
            c(SeqDescriptor::signed_merge(SeqDescriptor::power(2.0), SeqDescriptor::constant(1.0))),
            FrameTypeClass::NotFrameTypeNegativeInfiniteWeight
        );
        assert_eq!(classify_frame_type(&SeqDescriptor::power(-1.0)), Err(Error::Unbounded));
        assert_eq!(classify_frame_type(&SeqDescriptor::geometric(2.0)), Err(Error::Unbounded));
    }

    #[test]
    fn invalid_merge_rejected() {
        let s = SeqDescriptor::signed_merge(SeqDescriptor::alternating_power(1.0), SeqDescriptor::power(2.0));
        assert!(matches!(s.validate(), Err(Error::InvalidDescriptor(_))));
    }

    #[test]
    fn rearrangement_rejects_absolutely_summable() {
        assert!(matches!(
            rearrange_to_target(&SeqDescriptor::power(2.0), Target::Finite(1.0), 10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn rearrangement_to_zero() {
        let s = SeqDescriptor::alternating_power(1.0);
        let r = rearrange_to_target(&s, Target::Finite(0.0), 100_000).unwrap();
        assert!(r.final_sum.abs() < 1e-3, "{}", r.final_sum);
        let mut seen = r.indices.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), r.indices.len());
    }

    #[test]
    fn rearrangement_to_plus_infinity_grows() {
        let s = SeqDescriptor::alternating_power(1.0);
        let r = rearrange_to_target(&s, Target::Infinite(InfiniteTarget::PlusInfinity), 200_000).unwrap();
        assert!(r.final_sum > 3.0, "{}", r.final_sum);
        let r = rearrange_to_target(&s, Target::Infinite(InfiniteTarget::MinusInfinity), 200_000).unwrap();
        assert!(r.final_sum < -3.0, "{}", r.final_sum);
    }

    #[test]
    fn target_parsing() {
        assert_eq!("inf".parse::<Target>().unwrap(), Target::Infinite(InfiniteTarget::PlusInfinity));
        assert_eq!("-2.5".parse::<Target>().unwrap(), Target::Finite(-2.5));
        assert!("abc".parse::<Target>().is_err());
    }

    #[test]
    fn diagonal_eval_examples() {
        let v = diagonal_measure_eval(&SeqDescriptor::power(2.0), &IndexSet::range(1, 3)).unwrap();
        assert_eq!(v.value, ExtReal::Finite(1.0 + 0.25 + 1.0 / 9.0));
        assert!(v.exact);
        let v = diagonal_measure_eval(&SeqDescriptor::constant(1.0), &IndexSet::all()).unwrap();
        assert_eq!(v.value, ExtReal::Infinite);
        assert!(matches!(
            diagonal_measure_eval(&SeqDescriptor::alternating_power(2.0), &IndexSet::all()),
            Err(Error::SignedSequence)
        ));
    }

    #[test]
    fn geometric_and_cofinite() {
        let g = SeqDescriptor::geometric(0.5);
        let all = diagonal_measure_eval(&g, &IndexSet::all()).unwrap().value.finite().unwrap();
        assert!((all - 1.0).abs() < 1e-15);
        let rest = diagonal_measure_eval(&g, &IndexSet::Cofinite { excluded: vec![1] })
            .unwrap()
            .value
            .finite()
            .unwrap();
        assert!((rest - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parts_evaluate_exactly_on_patterns() {
        let (p, _) = pos_neg_parts(&SeqDescriptor::alternating_power(2.0));
        let v = diagonal_measure_eval(&p, &IndexSet::all()).unwrap();
        assert!(v.exact);
        let want = std::f64::consts::PI.powi(2) / 24.0;
        assert!((v.value.finite().unwrap() - want).abs() < 1e-10);
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::Arithmetic { start: 0, step: 1 }.validate().is_err());
        assert!(IndexSet::Arithmetic { start: 1, step: 0 }.validate().is_err());
        assert!(IndexSet::finite([0]).validate().is_err());
        let j: IndexSet = serde_json::from_str(r#"{"kind":"arithmetic","start":2,"step":2}"#).unwrap();
        assert_eq!(j, IndexSet::evens());
    }

    #[test]
    fn descriptor_json() {
        let s: SeqDescriptor =
            serde_json::from_str(r#"{"family":"explicit","values":[1,2],"tail":{"family":"power","p":2}}"#).unwrap();
        assert_eq!(s.term(2), 2.0);
        assert_eq!(s.term(4), 1.0 / 16.0);
        let a: SeqDescriptor = serde_json::from_str(r#"{"family":"alternating_power","p":1}"#).unwrap();
        assert_eq!(a, SeqDescriptor::alternating_power(1.0));
    }

    #[test]
    fn normalized_sums_ignore_order() {
        let a = SeqDescriptor::power(2.0);
        let b = SeqDescriptor::constant(1.0);
        let z = SeqDescriptor::constant(0.0);
        assert_eq!(
            SeqDescriptor::sum_of([a.clone(), b.clone()]),
            SeqDescriptor::sum_of([b.clone(), SeqDescriptor::sum_of([z, a.clone()])])
        );
        assert_eq!(SeqDescriptor::sum_of([a.clone()]), a);
    }
}
