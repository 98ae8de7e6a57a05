//! Formal sums of step-sequence classes: addition, comparison and bounded
//! Archimedean comparison.

mod arch;
mod lemmas;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::complex::{realize, BifilteredComplex};
use crate::error::Result;
use crate::seq::StepSequence;
use crate::simplify::{epsilon_hook, reduce, Outcome};

pub use arch::{arch_compare, ArchCertificate, ArchVerdict, Relation, Witness};
pub use lemmas::{
    atoms, box_lemma, lemma_sum, order_i, order_j, polygon_lemma, OrderJMatch, PolygonMatch, SumLemma,
};

/// `∑ multiplicity·[seq]`. Terms are kept combined: positive sequences are
/// never stored negated, like terms are merged and zero terms dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct ClassExpr {
    terms: Vec<(i64, StepSequence)>,
}

impl ClassExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(s: StepSequence) -> Self {
        Self::from_terms([(1, s)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, StepSequence)>) -> Self {
        let mut acc: BTreeMap<StepSequence, i64> = BTreeMap::new();
        for (k, s) in terms {
            if s.is_empty() || k == 0 {
                continue;
            }
            let (k, s) = if s.is_negative() { (-k, s.negated()) } else { (k, s) };
            *acc.entry(s).or_default() += k;
        }
        Self { terms: acc.into_iter().filter(|&(_, k)| k != 0).map(|(s, k)| (k, s)).collect() }
    }

    pub fn terms(&self) -> &[(i64, StepSequence)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1)
    }

    pub fn scaled(&self, n: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, s)| (k * n, s.clone())))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    /// τ as the sum of `k·τ(seq)`.
    pub fn tau(&self) -> i64 {
        self.terms.iter().map(|(k, s)| k * s.tau()).sum()
    }

    /// The same sum with every positive sequence split into lemma atoms.
    pub fn atomized(&self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|(k, s)| atoms(s).into_iter().map(move |a| (*k, a))))
    }

    /// If the sum is a single class with multiplicity one.
    pub fn as_single(&self) -> Option<&StepSequence> {
        match self.terms.as_slice() {
            [(1, s)] => Some(s),
            _ => None,
        }
    }
}

impl From<StepSequence> for ClassExpr {
    fn from(s: StepSequence) -> Self {
        Self::single(s)
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, s)) in self.terms.iter().enumerate() {
            let sign = if *k < 0 { "-" } else { "+" };
            match n {
                0 if *k < 0 => write!(f, "-")?,
                0 => {}
                _ => write!(f, " {sign} ")?,
            }
            if k.abs() != 1 {
                write!(f, "{}", k.abs())?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Lemma shortcuts first, tensor products only when they do not apply.
    #[default]
    Auto,
    /// Always tensor and simplify; multiples are still collapsed by the sum
    /// lemmas before tensoring.
    Pipeline,
}

/// How an epsilon value was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "via", rename_all = "kebab-case")]
pub enum EpsilonVia {
    /// Every lemma atom cancelled.
    ExactCancellation,
    /// All remaining atoms have coefficients of one sign.
    SameSign,
    /// The named atom dominates all others through the ordering lemmas.
    Dominant { atom: StepSequence, coefficient: i64 },
    /// Reduced representative of the tensor product.
    Pipeline { reduced: StepSequence },
    /// Hook maps on the full tensor product, which did not simplify.
    Hook { generators: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonValue {
    pub epsilon: i64,
    #[serde(flatten)]
    pub via: EpsilonVia,
}

/// `k·[s]` as a list of classes to tensor, merged by the sum lemmas where
/// they apply (so `r·[(1,a)^q, 1, a+d]` becomes one staircase).
fn collapse_multiple(s: &StepSequence, k: usize) -> Vec<StepSequence> {
    let mut acc = s.clone();
    for n in 1..k {
        match lemma_sum(&acc, s) {
            Some((sum, _)) => acc = sum,
            None => {
                let mut out = vec![acc];
                out.extend(std::iter::repeat_n(s.clone(), k - n));
                return out;
            }
        }
    }
    vec![acc]
}

/// The complexes whose tensor product represents `e`.
pub fn factors(e: &ClassExpr) -> Result<Vec<BifilteredComplex>> {
    let mut out = Vec::new();
    for (k, s) in e.terms() {
        for piece in collapse_multiple(s, k.unsigned_abs() as usize) {
            let c = realize(&piece)?;
            out.push(if *k < 0 { c.dual() } else { c });
        }
    }
    Ok(out)
}

/// Largest tensor product handed to the hook epsilon.
pub const HOOK_LIMIT: usize = 6000;

enum Fold {
    Reduced(StepSequence, BifilteredComplex),
    /// The partial product that would not simplify, and the factors left.
    Stuck { why: String, product: BifilteredComplex, rest: Vec<BifilteredComplex> },
}

fn fold(e: &ClassExpr) -> Result<Fold> {
    let mut acc = BifilteredComplex::unknot();
    let mut steps = StepSequence::empty();
    let mut fs = factors(e)?.into_iter();
    while let Some(c) = fs.next() {
        let t = acc.tensor(&c);
        match reduce(&t)? {
            Outcome::Decided(r) => {
                steps = r.steps;
                acc = r.core;
            }
            Outcome::Undecided(why) => return Ok(Fold::Stuck { why, product: t, rest: fs.collect() }),
        }
    }
    Ok(Fold::Reduced(steps, acc))
}

/// Tensors the factors one at a time, replacing each partial product by its
/// reduced representative.
pub fn pipeline_reduce(e: &ClassExpr) -> Result<Outcome<(StepSequence, BifilteredComplex)>> {
    Ok(match fold(e)? {
        Fold::Reduced(s, c) => Outcome::Decided((s, c)),
        Fold::Stuck { why, .. } => Outcome::Undecided(why),
    })
}

/// Sum lemmas applied left to right over positive terms with positive
/// multiplicity.
fn fast_sum(e: &ClassExpr) -> Option<StepSequence> {
    let mut acc = StepSequence::empty();
    for (k, s) in e.terms() {
        if *k < 0 || !s.is_positive() {
            return None;
        }
        for piece in collapse_multiple(s, *k as usize) {
            acc = if acc.is_empty() { piece } else { lemma_sum(&acc, &piece)?.0 };
        }
    }
    Some(acc)
}

/// Reduced representative of the class of `e`.
pub fn class_sum(e: &ClassExpr, mode: Mode) -> Result<Outcome<StepSequence>> {
    if mode == Mode::Auto {
        let atomized = e.atomized();
        for x in [e, &atomized] {
            if x.is_zero() {
                return Ok(Outcome::Decided(StepSequence::empty()));
            }
            if let Some(s) = fast_sum(x) {
                return Ok(Outcome::Decided(s));
            }
            if let Some(s) = fast_sum(&x.negated()) {
                return Ok(Outcome::Decided(s.negated()));
            }
        }
    }
    Ok(pipeline_reduce(e)?.map(|(s, _)| s))
}

pub fn class_add(a: &ClassExpr, b: &ClassExpr) -> Result<Outcome<StepSequence>> {
    class_sum(&a.plus(b), Mode::Auto)
}

/// `x >> y` through the ordering lemmas.
pub fn dominates(x: &StepSequence, y: &StepSequence) -> bool {
    order_i(x, y) || order_j(x, y).is_some()
}

/// Epsilon from lemma atoms alone, when they settle it.
fn symbolic_epsilon(e: &ClassExpr) -> Option<EpsilonValue> {
    let at = e.atomized();
    let terms = at.terms();
    if terms.is_empty() {
        return Some(EpsilonValue { epsilon: 0, via: EpsilonVia::ExactCancellation });
    }
    if terms.iter().any(|(_, s)| !s.is_positive()) {
        return None;
    }
    if terms.iter().all(|(k, _)| *k > 0) || terms.iter().all(|(k, _)| *k < 0) {
        return Some(EpsilonValue { epsilon: terms[0].0.signum(), via: EpsilonVia::SameSign });
    }
    // transitive closure of the lemma relation
    let n = terms.len();
    let mut g: Vec<Vec<bool>> =
        (0..n).map(|x| (0..n).map(|y| x != y && dominates(&terms[x].1, &terms[y].1)).collect()).collect();
    for k in 0..n {
        for x in 0..n {
            if g[x][k] {
                for y in 0..n {
                    if g[k][y] {
                        g[x][y] = true;
                    }
                }
            }
        }
    }
    let top = (0..n).find(|&x| (0..n).all(|y| y == x || g[x][y]))?;
    let (k, atom) = terms[top].clone();
    Some(EpsilonValue { epsilon: k.signum(), via: EpsilonVia::Dominant { atom, coefficient: k } })
}

pub fn epsilon_of(e: &ClassExpr, mode: Mode) -> Result<Outcome<EpsilonValue>> {
    if mode == Mode::Auto {
        if let Some(v) = symbolic_epsilon(e) {
            return Ok(Outcome::Decided(v));
        }
    }
    let (why, mut product, rest) = match fold(e)? {
        Fold::Reduced(s, _) => {
            return Ok(Outcome::Decided(EpsilonValue { epsilon: s.epsilon(), via: EpsilonVia::Pipeline { reduced: s } }))
        }
        Fold::Stuck { why, product, rest } => (why, product, rest),
    };
    for c in rest {
        if product.len() * c.len() > HOOK_LIMIT {
            return Ok(Outcome::Undecided(format!("{why}; product too large for the hook maps")));
        }
        product = product.tensor(&c);
    }
    let epsilon = epsilon_hook(&product)?;
    Ok(Outcome::Decided(EpsilonValue { epsilon, via: EpsilonVia::Hook { generators: product.len() } }))
}

/// Compares `a` and `b` by the sign of epsilon of `a - b`.
pub fn class_compare(a: &ClassExpr, b: &ClassExpr) -> Result<Outcome<Ordering>> {
    Ok(epsilon_of(&a.minus(b), Mode::Auto)?.map(|v| v.epsilon.cmp(&0)))
}
