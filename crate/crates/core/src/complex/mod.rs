//! Finite bifiltered complexes over F2 with the U-action suppressed.

mod mixed;
mod serial;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank_of_columns;
use crate::seq::StepSequence;

pub use mixed::{mixed_from_steps, MixedSearch, DEFAULT_NODE_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: String,
    pub i: i64,
    pub j: i64,
    pub gr: Option<i64>,
}

impl Generator {
    pub fn new(id: impl Into<String>, i: i64, j: i64, gr: Option<i64>) -> Self {
        Self { id: id.into(), i, j, gr }
    }

    pub fn fl(&self) -> (i64, i64) {
        (self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowKind {
    Horizontal,
    Vertical,
    Diagonal,
}

/// Generators in a fixed order, arrows stored as adjacency sets in both
/// directions. An arrow `x -> y` means `y` appears in `∂x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BifilteredComplex {
    gens: Vec<Generator>,
    out: Vec<BTreeSet<usize>>,
    inn: Vec<BTreeSet<usize>>,
    index: HashMap<String, usize>,
}

impl BifilteredComplex {
    /// Builds a complex from generators and index pairs. Checks id uniqueness
    /// and rejects self-loops and repeated arrows; does not check `∂² = 0`
    /// or the filtration (see [`validate`](Self::validate)).
    pub fn from_indexed(gens: Vec<Generator>, arrows: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = gens.len();
        let mut index = HashMap::with_capacity(n);
        for (k, g) in gens.iter().enumerate() {
            if index.insert(g.id.clone(), k).is_some() {
                return Err(Error::DuplicateId(g.id.clone()));
            }
        }
        let mut c = Self { gens, out: vec![BTreeSet::new(); n], inn: vec![BTreeSet::new(); n], index };
        for (s, t) in arrows {
            if s >= n || t >= n {
                return Err(Error::InvalidComplex(format!("arrow index ({s}, {t}) out of range")));
            }
            if s == t {
                return Err(Error::InvalidComplex(format!("self-loop at {}", c.gens[s].id)));
            }
            if !c.out[s].insert(t) {
                return Err(Error::InvalidComplex(format!("repeated arrow {} -> {}", c.gens[s].id, c.gens[t].id)));
            }
            c.inn[t].insert(s);
        }
        Ok(c)
    }

    /// Builds a complex from generators and `(source id, target id)` pairs.
    pub fn new(gens: Vec<Generator>, arrows: &[(String, String)]) -> Result<Self> {
        let index: HashMap<&str, usize> = gens.iter().enumerate().map(|(k, g)| (g.id.as_str(), k)).collect();
        let lookup = |id: &String| index.get(id.as_str()).copied().ok_or_else(|| Error::UnknownId(id.clone()));
        let pairs = arrows.iter().map(|(s, t)| Ok((lookup(s)?, lookup(t)?))).collect::<Result<Vec<_>>>()?;
        Self::from_indexed(gens, pairs)
    }

    /// One generator at (0,0) and no arrows.
    pub fn unknot() -> Self {
        Self::from_indexed(vec![Generator::new("x0", 0, 0, Some(0))], []).unwrap()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, k: usize) -> &Generator {
        &self.gens[k]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn targets(&self, k: usize) -> &BTreeSet<usize> {
        &self.out[k]
    }

    pub fn sources(&self, k: usize) -> &BTreeSet<usize> {
        &self.inn[k]
    }

    pub fn has_arrow(&self, s: usize, t: usize) -> bool {
        self.out[s].contains(&t)
    }

    pub fn arrow_count(&self) -> usize {
        self.out.iter().map(BTreeSet::len).sum()
    }

    /// All arrows as index pairs, in source-then-target order.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        self.out.iter().enumerate().flat_map(|(s, ts)| ts.iter().map(move |&t| (s, t))).collect()
    }

    /// All arrows as id pairs, sorted lexicographically.
    pub fn arrow_ids(&self) -> Vec<(String, String)> {
        let mut v: Vec<_> = self
            .arrows()
            .into_iter()
            .map(|(s, t)| (self.gens[s].id.clone(), self.gens[t].id.clone()))
            .collect();
        v.sort();
        v
    }

    pub(crate) fn toggle_arrow(&mut self, s: usize, t: usize) {
        if !self.out[s].remove(&t) {
            self.out[s].insert(t);
            self.inn[t].insert(s);
        } else {
            self.inn[t].remove(&s);
        }
    }

    pub fn kind(&self, s: usize, t: usize) -> ArrowKind {
        let (a, b) = (&self.gens[s], &self.gens[t]);
        if a.j == b.j {
            ArrowKind::Horizontal
        } else if a.i == b.i {
            ArrowKind::Vertical
        } else {
            ArrowKind::Diagonal
        }
    }

    /// Arrow length along its own axis; for diagonals the larger drop.
    pub fn length(&self, s: usize, t: usize) -> i64 {
        let (a, b) = (&self.gens[s], &self.gens[t]);
        (a.i - b.i).max(a.j - b.j)
    }

    pub fn arrows_of_kind(&self, kind: ArrowKind) -> Vec<(usize, usize)> {
        self.arrows().into_iter().filter(|&(s, t)| self.kind(s, t) == kind).collect()
    }

    fn columns(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        (0..self.len())
            .map(|s| self.out[s].iter().copied().filter(|&t| keep(s, t)).collect())
            .collect()
    }

    /// Rank over F2 of the total homology.
    pub fn homology_rank(&self) -> usize {
        self.len() - 2 * rank_of_columns(self.len(), &self.columns(|_, _| true))
    }

    /// Rank of the homology of the vertical differential (arrows with equal i).
    pub fn vertical_homology_rank(&self) -> usize {
        let cols = self.columns(|s, t| self.kind(s, t) == ArrowKind::Vertical);
        self.len() - 2 * rank_of_columns(self.len(), &cols)
    }

    pub fn horizontal_homology_rank(&self) -> usize {
        let cols = self.columns(|s, t| self.kind(s, t) == ArrowKind::Horizontal);
        self.len() - 2 * rank_of_columns(self.len(), &cols)
    }

    /// Structural checks: `∂² = 0`, strict filtration drop, grading drop 1.
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        for (s, t) in self.arrows() {
            let (a, b) = (&self.gens[s], &self.gens[t]);
            if b.i > a.i || b.j > a.j || a.fl() == b.fl() {
                v.push(Violation::Filtration { source: a.id.clone(), target: b.id.clone() });
            }
            if let (Some(ga), Some(gb)) = (a.gr, b.gr) {
                if ga - gb != 1 {
                    v.push(Violation::Grading { source: a.id.clone(), target: b.id.clone(), drop: ga - gb });
                }
            }
        }
        for s in 0..self.len() {
            let mut parity: BTreeSet<usize> = BTreeSet::new();
            for &m in &self.out[s] {
                for &t in &self.out[m] {
                    if !parity.remove(&t) {
                        parity.insert(t);
                    }
                }
            }
            if let Some(&t) = parity.iter().next() {
                v.push(Violation::DSquared { generator: self.gens[s].id.clone(), target: self.gens[t].id.clone() });
            }
        }
        v
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport {
            violations: self.violations(),
            homology_rank: self.homology_rank(),
            vertical_rank: self.vertical_homology_rank(),
            horizontal_rank: self.horizontal_homology_rank(),
        }
    }

    /// Errors on the first structural violation.
    pub fn check(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(v.to_string())),
        }
    }

    /// Negated filtration and grading, reversed arrows; ids and order kept.
    pub fn dual(&self) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator::new(g.id.clone(), -g.i, -g.j, g.gr.map(|x| -x)))
            .collect();
        Self::from_indexed(gens, self.arrows().into_iter().map(|(s, t)| (t, s))).unwrap()
    }

    /// Swaps the two filtrations.
    pub fn transpose(&self) -> Self {
        let gens = self.gens.iter().map(|g| Generator::new(g.id.clone(), g.j, g.i, g.gr)).collect();
        Self::from_indexed(gens, self.arrows()).unwrap()
    }

    /// Tensor product over F2 with the Leibniz differential. Product ids are
    /// `"a*b"`; generators are ordered lexicographically by factor position.
    pub fn tensor(&self, other: &Self) -> Self {
        let (n1, n2) = (self.len(), other.len());
        let mut gens = Vec::with_capacity(n1 * n2);
        for a in &self.gens {
            for b in &other.gens {
                let gr = a.gr.zip(b.gr).map(|(x, y)| x + y);
                gens.push(Generator::new(format!("{}*{}", a.id, b.id), a.i + b.i, a.j + b.j, gr));
            }
        }
        let mut arrows = Vec::new();
        for (s, t) in self.arrows() {
            for b in 0..n2 {
                arrows.push((s * n2 + b, t * n2 + b));
            }
        }
        for (s, t) in other.arrows() {
            for a in 0..n1 {
                arrows.push((a * n2 + s, a * n2 + t));
            }
        }
        Self::from_indexed(gens, arrows).expect("tensor product of complexes with unique ids")
    }

    /// The subcomplex spanned by `keep` (in the given order), with every arrow
    /// between kept generators.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        let gens = keep.iter().map(|&g| self.gens[g].clone()).collect();
        let mut arrows = Vec::new();
        for (k, &s) in keep.iter().enumerate() {
            arrows.extend(self.out[s].iter().filter_map(|t| pos.get(t)).map(|&t| (k, t)));
        }
        Self::from_indexed(gens, arrows).unwrap()
    }

    /// Renames generators; `ids[k]` is the new id of generator `k`.
    pub fn relabeled(&self, ids: &[String]) -> Result<Self> {
        assert_eq!(ids.len(), self.len());
        let gens = self
            .gens
            .iter()
            .zip(ids)
            .map(|(g, id)| Generator::new(id.clone(), g.i, g.j, g.gr))
            .collect();
        Self::from_indexed(gens, self.arrows())
    }

    /// Shifts gradings so that generator `k` has grading 0.
    pub fn pin_grading(&mut self, k: usize) {
        if let Some(base) = self.gens[k].gr {
            for g in &mut self.gens {
                g.gr = g.gr.map(|x| x - base);
            }
        }
    }

    /// Sorted multiset of filtration levels; an isomorphism invariant.
    pub fn filtration_multiset(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = self.gens.iter().map(Generator::fl).collect();
        v.sort_unstable();
        v
    }

    /// Counts of (horizontal, vertical, diagonal) arrows.
    pub fn arrow_kind_counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for (s, t) in self.arrows() {
            match self.kind(s, t) {
                ArrowKind::Horizontal => c.0 += 1,
                ArrowKind::Vertical => c.1 += 1,
                ArrowKind::Diagonal => c.2 += 1,
            }
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    DSquared { generator: String, target: String },
    Filtration { source: String, target: String },
    Grading { source: String, target: String, drop: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DSquared { generator, target } => {
                write!(f, "∂²({generator}) is nonzero (contains {target})")
            }
            Violation::Filtration { source, target } => {
                write!(f, "arrow {source} -> {target} does not strictly lower the filtration")
            }
            Violation::Grading { source, target, drop } => {
                write!(f, "arrow {source} -> {target} drops the grading by {drop}, not 1")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub homology_rank: usize,
    pub vertical_rank: usize,
    pub horizontal_rank: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Filtration levels `x_0 .. x_{2m}` of the reduced complex of `full`
/// (the symmetrized signed sequence), starting from `(0, τ)`.
pub(crate) fn levels(full: &[i64]) -> Vec<(i64, i64)> {
    let tau: i64 = full.iter().take(full.len() / 2).sum();
    let mut fl = vec![(0, tau)];
    for (k, a) in full.iter().enumerate() {
        let (i, j) = *fl.last().unwrap();
        fl.push(if k % 2 == 0 { (i + a, j) } else { (i, j - a) });
    }
    fl
}

/// The staircase complex of a positive step sequence.
pub fn staircase_from_steps(steps: &StepSequence) -> Result<BifilteredComplex> {
    if let Some(&a) = steps.entries().iter().find(|&&a| a <= 0) {
        return Err(Error::NonPositiveStep(a));
    }
    let fl = levels(&steps.full());
    let gens = fl
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| Generator::new(format!("x{k}"), i, j, Some((k % 2) as i64)))
        .collect();
    let arrows = (1..fl.len()).step_by(2).flat_map(|k| [(k, k - 1), (k, k + 1)]);
    BifilteredComplex::from_indexed(gens, arrows)
}

/// Realizes a class by its reduced complex: a staircase, the dual of one, or
/// the diagonal-arrow search for mixed signs.
pub fn realize(steps: &StepSequence) -> Result<BifilteredComplex> {
    if steps.is_positive() {
        staircase_from_steps(steps)
    } else if steps.is_negative() {
        Ok(staircase_from_steps(&steps.negated())?.dual())
    } else {
        mixed_from_steps(steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stair(v: &[i64]) -> BifilteredComplex {
        staircase_from_steps(&StepSequence::new(v.to_vec())).unwrap()
    }

    #[test]
    fn t34_staircase() {
        let c = stair(&[1, 2]);
        let fl: Vec<_> = c.generators().iter().map(Generator::fl).collect();
        assert_eq!(fl, vec![(0, 3), (1, 3), (1, 1), (3, 1), (3, 0)]);
        let ids: Vec<_> = c.arrow_ids();
        let want: Vec<(String, String)> = [("x1", "x0"), ("x1", "x2"), ("x3", "x2"), ("x3", "x4")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(ids, want);
        let r = c.validate();
        assert!(r.is_ok());
        assert_eq!((r.homology_rank, r.vertical_rank, r.horizontal_rank), (1, 1, 1));
    }

    #[test]
    fn other_staircases() {
        let c = stair(&[2, 1]);
        let fl: Vec<_> = c.generators().iter().map(Generator::fl).collect();
        assert_eq!(fl, vec![(0, 3), (2, 3), (2, 2), (3, 2), (3, 0)]);
        let u = stair(&[]);
        assert_eq!(u, BifilteredComplex::unknot());
        assert!(matches!(
            staircase_from_steps(&StepSequence::new(vec![1, -2])),
            Err(Error::NonPositiveStep(-2))
        ));
    }

    #[test]
    fn dual_and_tensor() {
        let c = stair(&[1, 2]);
        let d = c.dual();
        assert_eq!(d.generator(1).fl(), (-1, -3));
        assert!(d.has_arrow(0, 1));
        assert_eq!(d.dual(), c);
        assert_eq!(BifilteredComplex::unknot().dual(), BifilteredComplex::unknot());
        let t = c.tensor(&d);
        assert_eq!(t.len(), 25);
        assert!(t.validate().is_ok());
        assert_eq!(t.homology_rank(), 1);
        let id = c.tensor(&BifilteredComplex::unknot());
        assert_eq!(id.filtration_multiset(), c.filtration_multiset());
        assert_eq!(id.arrow_count(), c.arrow_count());
    }

    #[test]
    fn violations_are_named() {
        let gens = vec![Generator::new("a", 0, 0, None), Generator::new("b", 1, 0, None)];
        let c = BifilteredComplex::from_indexed(gens, [(0, 1)]).unwrap();
        let v = c.violations();
        assert_eq!(v, vec![Violation::Filtration { source: "a".into(), target: "b".into() }]);

        let gens = vec![
            Generator::new("a", 2, 2, None),
            Generator::new("b", 1, 1, None),
            Generator::new("c", 0, 0, None),
        ];
        let c = BifilteredComplex::from_indexed(gens, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(c.violations(), vec![Violation::DSquared { generator: "a".into(), target: "c".into() }]);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let gens = vec![Generator::new("a", 0, 0, None), Generator::new("a", 1, 0, None)];
        assert!(matches!(BifilteredComplex::from_indexed(gens, []), Err(Error::DuplicateId(_))));
    }
}
