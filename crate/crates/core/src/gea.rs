//! Finite generalized effect algebras.
//!
//! A model is a finite carrier with a zero and a partial sum table. The
//! checker verifies, by exhaustive enumeration:
//!
//! | id   | law                                                         |
//! |------|-------------------------------------------------------------|
//! | GEi  | `x⊕y = y⊕x` (either both undefined or equal)                |
//! | GEii | `(x⊕y)⊕z` defined iff `x⊕(y⊕z)` defined, and then equal     |
//! | GEiii| `x⊕0 = x`                                                   |
//! | GEiv | `x⊕y = x⊕z` implies `y = z`                                 |
//! | GEv  | `x⊕y = 0` implies `x = y = 0`                               |
//!
//! GEii is reported as two separate verdicts, one for definedness transfer
//! and one for equality.
//!
//! The derived order is `x ≤ y` iff `x⊕z = y` for some `z`, with `y⊖x := z`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense partial sum table over element indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SumTable {
    n: usize,
    zero: usize,
    cells: Vec<Option<usize>>,
}

impl SumTable {
    pub fn new(n: usize, zero: usize) -> Self {
        Self {
            n,
            zero,
            cells: vec![None; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.cells[x * self.n + y]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: Option<usize>) {
        self.cells[x * self.n + y] = z;
    }

    /// All defined entries `(x, y, x⊕y)` in row-major order.
    pub fn defined(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| (0..self.n).filter_map(move |y| self.get(x, y).map(|z| (x, y, z))))
    }

    /// Early-exit version of the full axiom check.
    pub fn satisfies_axioms(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            if self.get(x, self.zero) != Some(x) {
                return false;
            }
            for y in 0..n {
                let xy = self.get(x, y);
                if xy != self.get(y, x) {
                    return false;
                }
                if xy == Some(self.zero) && (x != self.zero || y != self.zero) {
                    return false;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let Some(a) = self.get(x, y) else { continue };
                for z in (y + 1)..n {
                    if self.get(x, z) == Some(a) {
                        return false;
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = self.get(x, y);
                for z in 0..n {
                    let left = xy.and_then(|a| self.get(a, z));
                    let right = self.get(y, z).and_then(|b| self.get(x, b));
                    if left != right {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A finite partial algebra `(E; ⊕, 0)` with named elements.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGeaModel {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    table: SumTable,
}

/// JSON model file: `{"elements": [...], "zero": id, "sums": [[x, y, z], ...]}`.
///
/// Each triple `[x, y, z]` declares `x⊕y = z` and, unless the file says
/// `"ordered": true`, also `y⊕x = z`; a conflicting mirror entry is a
/// construction error.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    pub elements: Vec<String>,
    pub zero: String,
    pub sums: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ordered: bool,
}

impl FiniteGeaModel {
    /// Builds a model from literal ordered entries `x⊕y = z`. Only structural
    /// problems (duplicate or dangling ids, two values for one pair) are
    /// errors; algebraic defects are left to [`check_axioms`].
    pub fn new<S: AsRef<str>>(elements: &[S], zero: &str, sums: &[(S, S, S)]) -> Result<Self> {
        let (elements, index) = Self::carrier(elements)?;
        let zero = Self::lookup(&index, zero, "zero")?;
        let mut table = SumTable::new(elements.len(), zero);
        for (x, y, z) in sums {
            let (x, y, z) = (
                Self::lookup(&index, x.as_ref(), "sums")?,
                Self::lookup(&index, y.as_ref(), "sums")?,
                Self::lookup(&index, z.as_ref(), "sums")?,
            );
            Self::insert(&mut table, &elements, x, y, z)?;
        }
        Ok(Self {
            elements,
            index,
            table,
        })
    }

    /// Like [`FiniteGeaModel::new`] but every entry also defines its mirror
    /// `y⊕x = z`; conflicting mirrors are rejected as asymmetric.
    pub fn commutative<S: AsRef<str>>(elements: &[S], zero: &str, sums: &[(S, S, S)]) -> Result<Self> {
        let (elements, index) = Self::carrier(elements)?;
        let zero = Self::lookup(&index, zero, "zero")?;
        let mut table = SumTable::new(elements.len(), zero);
        for (x, y, z) in sums {
            let (x, y, z) = (
                Self::lookup(&index, x.as_ref(), "sums")?,
                Self::lookup(&index, y.as_ref(), "sums")?,
                Self::lookup(&index, z.as_ref(), "sums")?,
            );
            Self::insert(&mut table, &elements, x, y, z)?;
            if x != y {
                Self::insert(&mut table, &elements, y, x, z).map_err(|_| {
                    Error::MalformedModel(format!(
                        "asymmetric table: {0}⊕{1} and {1}⊕{0} differ",
                        elements[x], elements[y]
                    ))
                })?;
            }
        }
        Ok(Self {
            elements,
            index,
            table,
        })
    }

    pub fn from_table(elements: Vec<String>, table: SumTable) -> Result<Self> {
        if elements.len() != table.len() {
            return Err(Error::MalformedModel("table size does not match carrier".into()));
        }
        let (elements, index) = Self::carrier(&elements)?;
        Ok(Self {
            elements,
            index,
            table,
        })
    }

    pub fn from_file(file: &ModelFile) -> Result<Self> {
        let sums: Vec<(&str, &str, &str)> = file
            .sums
            .iter()
            .map(|[x, y, z]| (x.as_str(), y.as_str(), z.as_str()))
            .collect();
        let elements: Vec<&str> = file.elements.iter().map(String::as_str).collect();
        if file.ordered {
            Self::new(&elements, &file.zero, &sums)
        } else {
            Self::commutative(&elements, &file.zero, &sums)
        }
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            elements: self.elements.clone(),
            zero: self.elements[self.table.zero].clone(),
            sums: self
                .table
                .defined()
                .map(|(x, y, z)| [self.elements[x].clone(), self.elements[y].clone(), self.elements[z].clone()])
                .collect(),
            ordered: true,
        }
    }

    fn carrier<S: AsRef<str>>(elements: &[S]) -> Result<(Vec<String>, HashMap<String, usize>)> {
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let e = e.as_ref().to_string();
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::MalformedModel(format!("duplicate element id `{e}`")));
            }
            out.push(e);
        }
        if out.is_empty() {
            return Err(Error::MalformedModel("empty carrier".into()));
        }
        Ok((out, index))
    }

    fn lookup(index: &HashMap<String, usize>, id: &str, field: &str) -> Result<usize> {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::MalformedModel(format!("field `{field}`: unknown element id `{id}`")))
    }

    fn insert(table: &mut SumTable, names: &[String], x: usize, y: usize, z: usize) -> Result<()> {
        match table.get(x, y) {
            Some(old) if old != z => Err(Error::MalformedModel(format!(
                "conflicting entries for {}⊕{}",
                names[x], names[y]
            ))),
            _ => {
                table.set(x, y, Some(z));
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, id: usize) -> &str {
        &self.elements[id]
    }

    pub fn id(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn ids(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.id(n)).collect()
    }

    pub fn zero(&self) -> usize {
        self.table.zero
    }

    pub fn table(&self) -> &SumTable {
        &self.table
    }

    pub fn sum(&self, x: usize, y: usize) -> Option<usize> {
        self.table.get(x, y)
    }

    /// Copy with the ordered entry `(x, y)` replaced.
    pub fn with_entry(&self, x: usize, y: usize, z: Option<usize>) -> Self {
        let mut m = self.clone();
        m.table.set(x, y, z);
        m
    }

    /// The partial algebra on `subset` with sums kept only when all three
    /// occurrences lie in `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self> {
        let keep: BTreeSet<usize> = subset.iter().copied().collect();
        if !keep.contains(&self.zero()) {
            return Err(Error::MalformedModel("restriction must contain zero".into()));
        }
        if let Some(&bad) = keep.iter().find(|&&i| i >= self.len()) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        let ids: Vec<usize> = keep.into_iter().collect();
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut table = SumTable::new(ids.len(), pos[&self.zero()]);
        for (x, y, z) in self.table.defined() {
            if let (Some(&a), Some(&b), Some(&c)) = (pos.get(&x), pos.get(&y), pos.get(&z)) {
                table.set(a, b, Some(c));
            }
        }
        Self::from_table(ids.iter().map(|&i| self.elements[i].clone()).collect(), table)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    #[serde(rename = "GEi")]
    Commutativity,
    #[serde(rename = "GEii-definedness")]
    AssociativityDefinedness,
    #[serde(rename = "GEii-equality")]
    AssociativityEquality,
    #[serde(rename = "GEiii")]
    Neutral,
    #[serde(rename = "GEiv")]
    Cancellation,
    #[serde(rename = "GEv")]
    Positivity,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Commutativity,
        Axiom::AssociativityDefinedness,
        Axiom::AssociativityEquality,
        Axiom::Neutral,
        Axiom::Cancellation,
        Axiom::Positivity,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Axiom::Commutativity => "GEi",
            Axiom::AssociativityDefinedness => "GEii-definedness",
            Axiom::AssociativityEquality => "GEii-equality",
            Axiom::Neutral => "GEiii",
            Axiom::Cancellation => "GEiv",
            Axiom::Positivity => "GEv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub axiom: Axiom,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Violation>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn passes(&self, axiom: Axiom) -> bool {
        self.verdicts.iter().any(|v| v.axiom == axiom && v.pass)
    }

    pub fn witnesses_for(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.witnesses.iter().filter(move |w| w.axiom == axiom)
    }
}

/// Exhaustively checks every axiom and lists every violating tuple.
pub fn check_axioms(model: &FiniteGeaModel) -> AxiomReport {
    let t = &model.table;
    let n = t.len();
    let zero = t.zero();
    let mut raw: Vec<(Axiom, Vec<usize>)> = Vec::new();

    for x in 0..n {
        for y in (x + 1)..n {
            if t.get(x, y) != t.get(y, x) {
                raw.push((Axiom::Commutativity, vec![x, y]));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = t.get(x, y);
            for z in 0..n {
                let left = xy.and_then(|a| t.get(a, z));
                let right = t.get(y, z).and_then(|b| t.get(x, b));
                match (left, right) {
                    (Some(l), Some(r)) if l != r => raw.push((Axiom::AssociativityEquality, vec![x, y, z])),
                    (Some(_), None) | (None, Some(_)) => {
                        raw.push((Axiom::AssociativityDefinedness, vec![x, y, z]))
                    }
                    _ => {}
                }
            }
        }
    }
    for x in 0..n {
        if t.get(x, zero) != Some(x) {
            raw.push((Axiom::Neutral, vec![x]));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let Some(a) = t.get(x, y) else { continue };
            for z in (y + 1)..n {
                if t.get(x, z) == Some(a) {
                    raw.push((Axiom::Cancellation, vec![x, y, z]));
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if t.get(x, y) == Some(zero) && (x != zero || y != zero) {
                raw.push((Axiom::Positivity, vec![x, y]));
            }
        }
    }

    let verdicts = Axiom::ALL
        .iter()
        .map(|&axiom| Verdict {
            axiom,
            pass: !raw.iter().any(|(a, _)| *a == axiom),
        })
        .collect();
    let witnesses = raw
        .into_iter()
        .map(|(axiom, ids)| Violation {
            axiom,
            elements: ids.into_iter().map(|i| model.name(i).to_string()).collect(),
        })
        .collect();
    AxiomReport { verdicts, witnesses }
}

/// The derived order `≤` and difference `⊖` of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetView {
    n: usize,
    zero: usize,
    leq: BTreeSet<(usize, usize)>,
    ominus: BTreeMap<(usize, usize), usize>,
}

impl PosetView {
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.contains(&(x, y))
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.leq
    }

    /// `y ⊖ x`, defined iff `x ≤ y`.
    pub fn ominus(&self, y: usize, x: usize) -> Option<usize> {
        self.ominus.get(&(y, x)).copied()
    }

    pub fn ominus_table(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.ominus
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.leq(x, x))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.leq.iter().all(|&(x, y)| x == y || !self.leq(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.leq.iter().all(|&(x, y)| {
            (0..self.n).all(|z| !self.leq(y, z) || self.leq(x, z))
        })
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_antisymmetric() && self.is_transitive()
    }

    pub fn zero_is_least(&self) -> bool {
        (0..self.n).all(|x| self.leq(self.zero, x))
    }
}

/// `x ≤ y` iff `x⊕z = y` for some `z`; `y⊖x` is that `z`. Fails when the
/// model violates cancellation, since `⊖` would then be ambiguous.
pub fn derived_order(model: &FiniteGeaModel) -> Result<PosetView> {
    let t = &model.table;
    let mut leq = BTreeSet::new();
    let mut ominus = BTreeMap::new();
    for (x, z, y) in t.defined() {
        if let Some(prev) = ominus.insert((y, x), z) {
            if prev != z {
                return Err(Error::CancellationFails(
                    model.name(x).into(),
                    model.name(prev.min(z)).into(),
                    model.name(prev.max(z)).into(),
                ));
            }
        }
        leq.insert((x, y));
    }
    Ok(PosetView {
        n: t.len(),
        zero: t.zero(),
        leq,
        ominus,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SubGeaWitness {
    MissingZero,
    /// `x⊕y = z` with at least two occurrences inside the subset and one
    /// outside.
    Triple(usize, usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubGeaVerdict {
    pub holds: bool,
    pub witness: Option<SubGeaWitness>,
}

/// Sub-algebra test: `0 ∈ S`, and for every defined `x⊕y = z`, if at least
/// two of the occurrences `x, y, z` (counted with multiplicity) lie in `S`
/// then all three do. The first violating triple in row-major order is
/// returned as witness.
pub fn is_sub_gea(subset: &[usize], model: &FiniteGeaModel) -> Result<SubGeaVerdict> {
    let n = model.len();
    let mut member = vec![false; n];
    for &s in subset {
        if s >= n {
            return Err(Error::UnknownElement(s.to_string()));
        }
        member[s] = true;
    }
    if !member[model.zero()] {
        return Ok(SubGeaVerdict {
            holds: false,
            witness: Some(SubGeaWitness::MissingZero),
        });
    }
    for (x, y, z) in model.table.defined() {
        let inside = [x, y, z].iter().filter(|&&e| member[e]).count();
        if inside == 2 {
            return Ok(SubGeaVerdict {
                holds: false,
                witness: Some(SubGeaWitness::Triple(x, y, z)),
            });
        }
    }
    Ok(SubGeaVerdict {
        holds: true,
        witness: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

/// Supremum (`Up`) or infimum (`Down`) of a monotone chain in the derived
/// order, if it exists in the model.
pub fn chain_extrema(model: &FiniteGeaModel, chain: &[usize], direction: Direction) -> Result<Option<usize>> {
    let order = derived_order(model)?;
    let n = model.len();
    if let Some(&bad) = chain.iter().find(|&&c| c >= n) {
        return Err(Error::UnknownElement(bad.to_string()));
    }
    for (i, w) in chain.windows(2).enumerate() {
        let ok = match direction {
            Direction::Up => order.leq(w[0], w[1]),
            Direction::Down => order.leq(w[1], w[0]),
        };
        if !ok {
            return Err(Error::NotMonotone(i + 1));
        }
    }
    let bound = |c: usize, b: usize| match direction {
        Direction::Up => order.leq(c, b),
        Direction::Down => order.leq(b, c),
    };
    let bounds: Vec<usize> = (0..n).filter(|&b| chain.iter().all(|&c| bound(c, b))).collect();
    Ok(bounds
        .iter()
        .copied()
        .find(|&b| bounds.iter().all(|&other| bound(b, other))))
}

/// The interval `[0, u]` of the integers: `x⊕y = x+y` when `x+y ≤ u`.
pub fn interval_model(u: usize) -> FiniteGeaModel {
    let names: Vec<String> = (0..=u).map(|i| i.to_string()).collect();
    let mut t = SumTable::new(u + 1, 0);
    for x in 0..=u {
        for y in 0..=(u - x) {
            t.set(x, y, Some(x + y));
        }
    }
    FiniteGeaModel::from_table(names, t).expect("valid carrier")
}

/// Componentwise interval `[0, (a, b)]` in `ℤ²`.
pub fn product_interval(a: usize, b: usize) -> FiniteGeaModel {
    let idx = |i: usize, j: usize| i * (b + 1) + j;
    let names: Vec<String> = (0..=a)
        .flat_map(|i| (0..=b).map(move |j| format!("({i},{j})")))
        .collect();
    let mut t = SumTable::new(names.len(), 0);
    for i in 0..=a {
        for j in 0..=b {
            for k in 0..=(a - i) {
                for l in 0..=(b - j) {
                    t.set(idx(i, j), idx(k, l), Some(idx(i + k, j + l)));
                }
            }
        }
    }
    FiniteGeaModel::from_table(names, t).expect("valid carrier")
}

/// Chains `[0, nᵢ]` glued along their bottom and top elements. Tops
/// `[2, 2]` give `{0, c0.1, c1.1, 1}` with `c0.1⊕c0.1 = c1.1⊕c1.1 = 1`.
pub fn horizontal_sum(chain_tops: &[usize]) -> FiniteGeaModel {
    let mut names = vec!["0".to_string()];
    let mut ids: Vec<Vec<usize>> = Vec::new();
    for (c, &top) in chain_tops.iter().enumerate() {
        let mut chain = vec![0];
        for j in 1..top {
            chain.push(names.len());
            names.push(format!("c{c}.{j}"));
        }
        ids.push(chain);
    }
    let one = names.len();
    names.push("1".to_string());
    for chain in &mut ids {
        chain.push(one);
    }
    let mut t = SumTable::new(names.len(), 0);
    for (chain, &top) in ids.iter().zip(chain_tops) {
        for x in 0..=top {
            for y in 0..=(top - x) {
                t.set(chain[x], chain[y], Some(chain[x + y]));
            }
        }
    }
    FiniteGeaModel::from_table(names, t).expect("valid carrier")
}

/// The six-element fixture `{0, a, a′, b, b′, 1}` with `a⊕a′ = b⊕b′ = 1`.
pub fn horizontal_sum_fixture() -> FiniteGeaModel {
    FiniteGeaModel::commutative(
        &["0", "a", "a'", "b", "b'", "1"],
        "0",
        &[
            ("0", "0", "0"),
            ("0", "a", "a"),
            ("0", "a'", "a'"),
            ("0", "b", "b"),
            ("0", "b'", "b'"),
            ("0", "1", "1"),
            ("a", "a'", "1"),
            ("b", "b'", "1"),
        ],
    )
    .expect("fixture is well formed")
}

/// A random valid model with at most `max_elements` elements, drawn from
/// integer intervals, product intervals and horizontal sums of chains.
pub fn random_valid_model<R: Rng>(rng: &mut R, max_elements: usize) -> FiniteGeaModel {
    let max = max_elements.max(2);
    loop {
        let model = match rng.random_range(0..3) {
            0 => interval_model(rng.random_range(1..max)),
            1 => product_interval(rng.random_range(1..=3), rng.random_range(1..=3)),
            _ => {
                let k = rng.random_range(1..=3);
                let tops: Vec<usize> = (0..k).map(|_| rng.random_range(1..=3)).collect();
                horizontal_sum(&tops)
            }
        };
        if model.len() <= max {
            return model;
        }
    }
}

/// Every model obtained by changing the value of one defined ordered entry
/// to a different element.
pub fn single_entry_mutations(model: &FiniteGeaModel) -> Vec<FiniteGeaModel> {
    let n = model.len();
    let mut out = Vec::new();
    for (x, y, z) in model.table.defined() {
        for w in (0..n).filter(|&w| w != z) {
            out.push(model.with_entry(x, y, Some(w)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepStats {
    pub elements: usize,
    pub tables: u64,
    pub passing: u64,
    /// Passing tables whose derived order is a partial order with zero least.
    pub ordered: u64,
}

/// Enumerates every commutative table on `n` elements with `0` neutral and
/// each unordered pair of non-zero elements either undefined or summing to a
/// non-zero element, and checks all of them. Sums of non-zero elements to
/// `0` are omitted from the enumeration since they break positivity
/// outright.
pub fn exhaustive_sweep(n: usize) -> SweepStats {
    assert!(n >= 1, "carrier must be non-empty");
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|x| (x..n).map(move |y| (x, y))).collect();
    let choices = n as u64; // None or one of the n − 1 non-zero elements
    let total = choices.pow(pairs.len() as u32);
    let base = {
        let mut t = SumTable::new(n, 0);
        for x in 0..n {
            t.set(x, 0, Some(x));
            t.set(0, x, Some(x));
        }
        t
    };
    let chunk = choices.pow((pairs.len() as u32).min(3));
    let (passing, ordered) = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|block| {
            let mut t = base.clone();
            let mut passing = 0u64;
            let mut ordered = 0u64;
            for code in (block * chunk)..((block + 1) * chunk).min(total) {
                let mut c = code;
                for &(x, y) in &pairs {
                    let v = (c % choices) as usize;
                    c /= choices;
                    let val = (v > 0).then_some(v);
                    t.set(x, y, val);
                    t.set(y, x, val);
                }
                if t.satisfies_axioms() {
                    passing += 1;
                    if order_is_sound(&t) {
                        ordered += 1;
                    }
                }
            }
            (passing, ordered)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    SweepStats {
        elements: n,
        tables: total,
        passing,
        ordered,
    }
}

fn order_is_sound(t: &SumTable) -> bool {
    let names: Vec<String> = (0..t.len()).map(|i| i.to_string()).collect();
    let Ok(model) = FiniteGeaModel::from_table(names, t.clone()) else {
        return false;
    };
    derived_order(&model).is_ok_and(|o| o.is_partial_order() && o.zero_is_least())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_passes() {
        let r = check_axioms(&interval_model(3));
        assert!(r.all_pass(), "{r:?}");
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn horizontal_sum_passes() {
        let fixture = horizontal_sum_fixture();
        assert!(check_axioms(&fixture).all_pass());
        let generated = horizontal_sum(&[2, 2]);
        assert_eq!(generated.len(), 4);
        assert!(check_axioms(&generated).all_pass());
    }

    #[test]
    fn cancellation_violation_has_witness() {
        let m = FiniteGeaModel::commutative(
            &["0", "a", "b", "c", "d"],
            "0",
            &[
                ("0", "0", "0"),
                ("0", "a", "a"),
                ("0", "b", "b"),
                ("0", "c", "c"),
                ("0", "d", "d"),
                ("a", "b", "d"),
                ("a", "c", "d"),
            ],
        )
        .unwrap();
        let r = check_axioms(&m);
        assert!(!r.passes(Axiom::Cancellation));
        let w: Vec<_> = r.witnesses_for(Axiom::Cancellation).collect();
        assert!(w.iter().any(|v| v.elements == ["a", "b", "c"]), "{w:?}");
        assert!(matches!(derived_order(&m), Err(Error::CancellationFails(..))));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            FiniteGeaModel::new(&["0", "a"], "z", &[]),
            Err(Error::MalformedModel(_))
        ));
        assert!(FiniteGeaModel::new(&["0", "a"], "0", &[("a", "b", "a")]).is_err());
        assert!(FiniteGeaModel::new(&["0", "0"], "0", &[]).is_err());
        assert!(FiniteGeaModel::commutative(&["0", "a", "b"], "0", &[("a", "b", "a"), ("b", "a", "b")]).is_err());
    }

    #[test]
    fn asymmetry_is_reported_by_checker() {
        let m = FiniteGeaModel::new(&["0", "a", "b"], "0", &[("0", "0", "0"), ("0", "a", "a"), ("a", "0", "a"), ("0", "b", "b"), ("b", "0", "b"), ("a", "a", "b")])
            .unwrap()
            .with_entry(1, 2, Some(2));
        let r = check_axioms(&m);
        assert!(!r.passes(Axiom::Commutativity));
    }

    #[test]
    fn interval_order_is_a_chain() {
        let m = interval_model(3);
        let o = derived_order(&m).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(o.leq(x, y), x <= y);
            }
        }
        assert_eq!(o.ominus(3, 1), Some(2));
        assert!(o.is_partial_order() && o.zero_is_least());
    }

    #[test]
    fn horizontal_sum_order() {
        let m = horizontal_sum_fixture();
        let o = derived_order(&m).unwrap();
        let [a, a2, b, one] = [m.id("a").unwrap(), m.id("a'").unwrap(), m.id("b").unwrap(), m.id("1").unwrap()];
        assert!(!o.leq(a, b) && !o.leq(b, a));
        assert_eq!(o.ominus(one, a), Some(a2));
        assert!(o.zero_is_least());
    }

    #[test]
    fn sub_gea_examples() {
        let m = interval_model(3);
        assert!(is_sub_gea(&[0, 2], &m).unwrap().holds);
        let v = is_sub_gea(&[0, 1, 3], &m).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Some(SubGeaWitness::Triple(1, 1, 2)));
        assert!(is_sub_gea(&[0, 1, 2, 3], &m).unwrap().holds);
        assert_eq!(is_sub_gea(&[1, 2], &m).unwrap().witness, Some(SubGeaWitness::MissingZero));
        assert!(is_sub_gea(&[9], &m).is_err());
    }

    #[test]
    fn chain_extrema_examples() {
        let m = interval_model(3);
        assert_eq!(chain_extrema(&m, &[0, 1, 2], Direction::Up).unwrap(), Some(2));
        assert_eq!(chain_extrema(&m, &[2, 1], Direction::Down).unwrap(), Some(1));
        assert_eq!(chain_extrema(&m, &[], Direction::Up).unwrap(), Some(0));
        let h = horizontal_sum_fixture();
        let chain = h.ids(&["a", "1"]).unwrap();
        assert_eq!(chain_extrema(&h, &chain, Direction::Up).unwrap(), Some(h.id("1").unwrap()));
        let anti = h.ids(&["a", "b"]).unwrap();
        assert!(matches!(chain_extrema(&h, &anti, Direction::Up), Err(Error::NotMonotone(1))));
    }

    #[test]
    fn restriction_keeps_closed_sums() {
        let m = interval_model(3);
        let r = m.restrict(&[0, 2]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(check_axioms(&r).all_pass());
        assert!(m.restrict(&[1, 2]).is_err());
    }

    #[test]
    fn mutations_of_fixtures_are_flagged() {
        for m in [interval_model(3), horizontal_sum_fixture()] {
            let muts = single_entry_mutations(&m);
            assert!(!muts.is_empty());
            for mutated in muts {
                assert!(!check_axioms(&mutated).all_pass());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let file: ModelFile = serde_json::from_str(
            r#"{"elements":["0","1","2","3"],"zero":"0",
                "sums":[["0","0","0"],["0","1","1"],["0","2","2"],["0","3","3"],["1","1","2"],["1","2","3"]]}"#,
        )
        .unwrap();
        let m = FiniteGeaModel::from_file(&file).unwrap();
        assert_eq!(m, interval_model(3));
        let again = FiniteGeaModel::from_file(&m.to_file()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn small_sweep_counts() {
        // n = 1: the single table {0⊕0 = 0}; n = 2: 1⊕1 undefined or 1.
        assert_eq!(exhaustive_sweep(1).passing, 1);
        let s2 = exhaustive_sweep(2);
        assert_eq!(s2.tables, 2);
        assert_eq!(s2.passing, 1);
        let s3 = exhaustive_sweep(3);
        assert_eq!(s3.passing, s3.ordered);
    }
}
