//! Filtered changes of basis and simplification of bifiltered complexes.

mod decompose;
mod hook;
mod invariants;

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{ArrowKind, BifilteredComplex};
use crate::error::{Error, Result};

pub use decompose::{decompose, decompose_complex, SummandDecomposition, SummandKind};
pub use hook::epsilon_hook;
pub use invariants::{
    epsilon, local_invariants, reduce, reduced_representative, tau, trace, LocalInvariants, Reduced,
};

/// The substitution `x_n -> x_n + x_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisChange {
    pub n: String,
    pub l: String,
}

/// A result that may be left open when simplification does not converge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum Outcome<T> {
    Decided(T),
    Undecided(String),
}

impl<T> Outcome<T> {
    pub fn decided(self) -> Option<T> {
        match self {
            Outcome::Decided(v) => Some(v),
            Outcome::Undecided(_) => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Decided(v) => Outcome::Decided(f(v)),
            Outcome::Undecided(r) => Outcome::Undecided(r),
        }
    }

    pub fn is_decided(&self) -> bool {
        matches!(self, Outcome::Decided(_))
    }
}

fn check_change(c: &BifilteredComplex, n: usize, l: usize) -> Result<()> {
    let (gn, gl) = (c.generator(n), c.generator(l));
    let fail = |reason: &str| {
        Err(Error::IllegalChange { n: gn.id.clone(), l: gl.id.clone(), reason: reason.to_string() })
    };
    if n == l {
        return fail("a generator cannot be added to itself");
    }
    if gl.i > gn.i || gl.j > gn.j {
        return fail("added element has higher filtration level");
    }
    if let (Some(a), Some(b)) = (gn.gr, gl.gr) {
        if a != b {
            return fail("gradings differ");
        }
    }
    Ok(())
}

/// `D' = P D P` for `P = 1 + E_{l,n}`: the new `x_n` has differential
/// `∂x_n + ∂x_l`, and every arrow into `x_n` now also toggles an arrow into `x_l`.
fn apply(c: &mut BifilteredComplex, n: usize, l: usize) {
    debug_assert!(check_change(c, n, l).is_ok());
    let lt: Vec<usize> = c.targets(l).iter().copied().collect();
    for t in lt {
        c.toggle_arrow(n, t);
    }
    let ns: Vec<usize> = c.sources(n).iter().copied().collect();
    for s in ns {
        c.toggle_arrow(s, l);
    }
}

/// Applies a checked basis change and re-validates the result.
pub fn change_basis(c: &BifilteredComplex, bc: &BasisChange) -> Result<BifilteredComplex> {
    let n = c.index_of(&bc.n).ok_or_else(|| Error::UnknownId(bc.n.clone()))?;
    let l = c.index_of(&bc.l).ok_or_else(|| Error::UnknownId(bc.l.clone()))?;
    check_change(c, n, l)?;
    let mut out = c.clone();
    apply(&mut out, n, l);
    out.check()?;
    Ok(out)
}

/// Replays a change log.
pub fn replay(c: &BifilteredComplex, log: &[BasisChange]) -> Result<BifilteredComplex> {
    log.iter().try_fold(c.clone(), |acc, bc| change_basis(&acc, bc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Vertical,
    Horizontal,
}

impl Direction {
    fn kind(self) -> ArrowKind {
        match self {
            Direction::Vertical => ArrowKind::Vertical,
            Direction::Horizontal => ArrowKind::Horizontal,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Direction::Vertical => "vertical",
            Direction::Horizontal => "horizontal",
        }
    }
}

/// A simplified basis together with the basis changes that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplified {
    pub complex: BifilteredComplex,
    pub log: Vec<BasisChange>,
    /// The generator with no arrow of the simplified kind(s); for
    /// simultaneous simplification, the vertically distinguished one.
    pub distinguished: usize,
}

#[derive(Clone, Copy)]
enum Partner {
    Source(usize, i64),
    Target(usize, i64),
    Free,
}

/// Tie orders tried by [`simultaneous_simplify`]; the first is by id.
const ATTEMPTS: u64 = 16;

struct Simplifier {
    c: BifilteredComplex,
    rank: Vec<usize>,
    log: Vec<BasisChange>,
}

impl Simplifier {
    fn new(c: &BifilteredComplex) -> Self {
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.sort_by(|&a, &b| c.generator(a).id.cmp(&c.generator(b).id));
        let mut rank = vec![0; c.len()];
        for (r, &k) in order.iter().enumerate() {
            rank[k] = r;
        }
        Self { c: c.clone(), rank, log: Vec::new() }
    }

    /// Replaces the id order used to break ties by a seeded permutation.
    fn shuffle(&mut self, seed: u64) {
        let mut order: Vec<usize> = (0..self.c.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for (r, &k) in order.iter().enumerate() {
            self.rank[k] = r;
        }
    }

    fn change(&mut self, n: usize, l: usize) {
        apply(&mut self.c, n, l);
        self.log.push(BasisChange { n: self.c.generator(n).id.clone(), l: self.c.generator(l).id.clone() });
    }

    /// The unique arrow of `kind` at `g`, if the basis is simplified for it.
    fn partner(&self, g: usize, kind: ArrowKind) -> Partner {
        let c = &self.c;
        if let Some(&t) = c.targets(g).iter().find(|&&t| c.kind(g, t) == kind) {
            return Partner::Source(t, c.length(g, t));
        }
        match c.sources(g).iter().find(|&&s| c.kind(s, g) == kind) {
            Some(&s) => Partner::Target(s, c.length(s, g)),
            None => Partner::Free,
        }
    }

    /// The partner change that keeps the `kind` arrows a matching after
    /// `n -> n + l` at equal level: `Err` if this orientation cannot be lifted.
    fn repair(&self, n: usize, l: usize, kind: ArrowKind) -> std::result::Result<Option<(usize, usize)>, ()> {
        match (self.partner(n, kind), self.partner(l, kind)) {
            (Partner::Source(bn, ln), Partner::Source(bl, ll)) if ll >= ln => Ok(Some((bn, bl))),
            (Partner::Target(an, ln), Partner::Target(al, ll)) if ll <= ln => Ok(Some((an, al))),
            (Partner::Source(..), Partner::Target(..) | Partner::Free) | (Partner::Free, Partner::Target(..)) => {
                Ok(None)
            }
            _ => Err(()),
        }
    }

    /// Merges `l` into `n` (or `n` into `l` when only that lifts, or lifts
    /// without disturbing the pass direction). Returns the generator that
    /// keeps the arrow.
    fn merge(&mut self, n: usize, l: usize, keep: Option<ArrowKind>) -> usize {
        let same = self.c.generator(n).fl() == self.c.generator(l).fl();
        let Some(kind) = keep.filter(|_| same) else {
            self.change(n, l);
            return n;
        };
        let cost = |r: &std::result::Result<Option<(usize, usize)>, ()>| match r {
            Err(()) => 2,
            Ok(Some((a, b))) if self.c.generator(*a).fl() == self.c.generator(*b).fl() => 1,
            Ok(_) => 0,
        };
        let (fwd, bwd) = (self.repair(n, l, kind), self.repair(l, n, kind));
        let (n, l, r) = if cost(&fwd) <= cost(&bwd) { (n, l, fwd) } else { (l, n, bwd) };
        self.change(n, l);
        if let Ok(Some((a, b))) = r {
            self.change(a, b);
        }
        n
    }

    /// Shortest-arrow-first elimination in one direction. With `keep`, equal
    /// level changes are lifted so the arrows of that kind stay a matching.
    /// Returns the generators left without an arrow of the pass's kind.
    fn pass(&mut self, dir: Direction, keep: Option<ArrowKind>) -> Vec<usize> {
        let kind = dir.kind();
        let n = self.c.len();
        let mut paired = vec![false; n];
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let budget = 2 * n + 4;
        loop {
            let mut best: Option<((i64, usize, usize), usize, usize)> = None;
            for s in (0..n).filter(|&s| !paired[s]) {
                for &t in self.c.targets(s) {
                    if paired[t] || self.c.kind(s, t) != kind {
                        continue;
                    }
                    let key = (self.c.length(s, t), self.rank[s], self.rank[t]);
                    if best.is_none_or(|(k, _, _)| key < k) {
                        best = Some((key, s, t));
                    }
                }
            }
            let Some((_, x, y)) = best else { break };
            pairs.push((x, y));
            for _ in 0..budget {
                let mut changed = false;
                pairs.retain(|&(x, y)| self.c.has_arrow(x, y));
                for k in 0..pairs.len() {
                    let (x, y, c) = self.clean(pairs[k], kind, keep, budget);
                    pairs[k] = (x, y);
                    changed |= c;
                }
                if !changed {
                    break;
                }
            }
            paired = vec![false; n];
            for &(x, y) in &pairs {
                paired[x] = true;
                paired[y] = true;
            }
        }
        (0..n).filter(|&k| !paired[k]).collect()
    }

    /// Removes the other arrows of `kind` at both ends of the pair `x -> y`.
    fn clean(&mut self, (mut x, mut y): (usize, usize), kind: ArrowKind, keep: Option<ArrowKind>, budget: usize) -> (usize, usize, bool) {
        let mut changed = false;
        for _ in 0..budget {
            let c = &self.c;
            let z = c.targets(x).iter().copied().find(|&z| z != y && c.kind(x, z) == kind && check_change(c, y, z).is_ok());
            let w = c.sources(y).iter().copied().find(|&w| w != x && c.kind(w, y) == kind && check_change(c, w, x).is_ok());
            match (z, w) {
                (Some(z), _) => y = self.merge(y, z, keep),
                (None, Some(w)) => {
                    if self.merge(w, x, keep) != w {
                        x = w;
                    }
                }
                (None, None) => break,
            }
            changed = true;
        }
        (x, y, changed)
    }
    fn pass_rank_one(&mut self, dir: Direction) -> Result<usize> {
        let free = self.pass(dir, None);
        match free.as_slice() {
            [d] => Ok(*d),
            _ => Err(Error::RankPrecondition { kind: dir.name(), rank: free.len() }),
        }
    }

    /// A pass that keeps the other direction's matching when there is one.
    fn lifted_pass(&mut self, dir: Direction) {
        let other = match dir {
            Direction::Vertical => Direction::Horizontal,
            Direction::Horizontal => Direction::Vertical,
        };
        let keep = is_simplified(&self.c, other).then(|| other.kind());
        self.pass(dir, keep);
    }

    fn finish(self, distinguished: usize) -> Simplified {
        Simplified { complex: self.c, log: self.log, distinguished }
    }
}

/// Whether every generator meets at most one arrow of the given kind.
pub fn is_simplified(c: &BifilteredComplex, dir: Direction) -> bool {
    let kind = dir.kind();
    let mut count = vec![0usize; c.len()];
    for (s, t) in c.arrows() {
        if c.kind(s, t) == kind {
            count[s] += 1;
            count[t] += 1;
        }
    }
    count.iter().all(|&k| k <= 1)
}

/// The generators meeting no arrow of the given kind.
pub fn free_generators(c: &BifilteredComplex, dir: Direction) -> Vec<usize> {
    let kind = dir.kind();
    (0..c.len())
        .filter(|&k| {
            c.targets(k).iter().all(|&t| c.kind(k, t) != kind) && c.sources(k).iter().all(|&s| c.kind(s, k) != kind)
        })
        .collect()
}

pub fn vertically_simplify(c: &BifilteredComplex) -> Result<Simplified> {
    let mut s = Simplifier::new(c);
    let d = s.pass_rank_one(Direction::Vertical)?;
    Ok(s.finish(d))
}

pub fn horizontally_simplify(c: &BifilteredComplex) -> Result<Simplified> {
    let mut s = Simplifier::new(c);
    let d = s.pass_rank_one(Direction::Horizontal)?;
    Ok(s.finish(d))
}

/// Alternates vertical and horizontal passes until the basis is simplified in
/// both directions, for at most `2·#generators` rounds.
pub fn simultaneous_simplify(c: &BifilteredComplex) -> Result<Outcome<Simplified>> {
    simultaneous_simplify_with(c, |s| Ok(Some(s)))
}

/// Like `simultaneous_simplify`, but hands each simplified basis to `accept`
/// and moves on to the next tie order while it returns `None`.
pub fn simultaneous_simplify_with<T>(
    c: &BifilteredComplex,
    mut accept: impl FnMut(Simplified) -> Result<Option<T>>,
) -> Result<Outcome<T>> {
    for (dir, rank) in [
        (Direction::Vertical, c.vertical_homology_rank()),
        (Direction::Horizontal, c.horizontal_homology_rank()),
    ] {
        if rank != 1 {
            return Err(Error::RankPrecondition { kind: dir.name(), rank });
        }
    }
    let limit = 2 * c.len().max(1);
    for attempt in 0..ATTEMPTS {
        let mut s = Simplifier::new(c);
        if attempt > 0 {
            s.shuffle(attempt);
        }
        let mut seen = HashSet::new();
        for _ in 0..limit {
            s.lifted_pass(Direction::Vertical);
            s.lifted_pass(Direction::Horizontal);
            if is_simplified(&s.c, Direction::Vertical) && is_simplified(&s.c, Direction::Horizontal) {
                let free = free_generators(&s.c, Direction::Vertical);
                let [d] = free[..] else {
                    return Err(Error::Invariant(format!("{} vertically free generators", free.len())));
                };
                if let Some(t) = accept(s.finish(d))? {
                    return Ok(Outcome::Decided(t));
                }
                break;
            }
            if !seen.insert(s.c.arrows()) {
                break;
            }
        }
    }
    Ok(Outcome::Undecided(format!(
        "no usable simultaneously simplified basis after {ATTEMPTS} tie orders of up to {limit} alternating passes"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::staircase_from_steps;
    use crate::seq::StepSequence;

    fn stair(v: &[i64]) -> BifilteredComplex {
        staircase_from_steps(&StepSequence::new(v.to_vec())).unwrap()
    }

    #[test]
    fn staircases_are_already_simplified() {
        let c = stair(&[1, 2]);
        for s in [vertically_simplify(&c).unwrap(), horizontally_simplify(&c).unwrap()] {
            assert_eq!(s.complex, c);
            assert!(s.log.is_empty());
        }
        let d = c.dual();
        assert_eq!(vertically_simplify(&d).unwrap().complex, d);
        let u = BifilteredComplex::unknot();
        assert_eq!(horizontally_simplify(&u).unwrap().complex, u);
    }

    #[test]
    fn change_basis_rules() {
        let c = stair(&[1, 2]);
        // x2 at (1,1) and x4 at (3,0): x4 is not below x2
        let bad = BasisChange { n: "x2".into(), l: "x4".into() };
        assert!(matches!(change_basis(&c, &bad), Err(Error::IllegalChange { .. })));
        let t = c.tensor(&stair(&[2]));
        let ok = BasisChange { n: "x1*x0".into(), l: "x2*x0".into() };
        assert!(change_basis(&t, &ok).is_err(), "gradings differ");
        let ok = BasisChange { n: "x4*x0".into(), l: "x2*x2".into() };
        let once = change_basis(&t, &ok).unwrap();
        assert_ne!(once, t);
        assert_eq!(change_basis(&once, &ok).unwrap(), t);
    }

    #[test]
    fn box_tensor_simplifies() {
        let t = stair(&[1, 3]).tensor(&stair(&[2]));
        let v = vertically_simplify(&t).unwrap();
        assert!(is_simplified(&v.complex, Direction::Vertical));
        assert_eq!(v.complex.arrow_kind_counts().1, 7);
        assert_eq!(replay(&t, &v.log).unwrap(), v.complex);
        let s = simultaneous_simplify(&t).unwrap().decided().unwrap();
        assert!(is_simplified(&s.complex, Direction::Vertical));
        assert!(is_simplified(&s.complex, Direction::Horizontal));
        assert_eq!(replay(&t, &s.log).unwrap(), s.complex);
    }

    #[test]
    fn rank_precondition() {
        let c = stair(&[1]);
        let two = BifilteredComplex::from_indexed(
            c.generators().iter().cloned().chain([crate::complex::Generator::new("y", 5, 5, None)]).collect(),
            c.arrows(),
        )
        .unwrap();
        assert!(matches!(vertically_simplify(&two), Err(Error::RankPrecondition { rank: 2, .. })));
    }
}
