use super::{levels, BifilteredComplex, Generator};
use crate::error::{Error, Result};
use crate::seq::StepSequence;

pub const DEFAULT_NODE_LIMIT: u64 = 5_000_000;

/// Depth-first search for a set of diagonal arrows completing the forced
/// horizontal and vertical arrows of a signed step sequence to a complex.
#[derive(Clone, Copy, Debug)]
pub struct MixedSearch {
    pub node_limit: u64,
}

impl Default for MixedSearch {
    fn default() -> Self {
        Self { node_limit: DEFAULT_NODE_LIMIT }
    }
}

/// Reduced representative of a (possibly mixed-sign) sequence. Diagonal
/// arrows are the lexicographically first solution of `∂² = 0`.
pub fn mixed_from_steps(steps: &StepSequence) -> Result<BifilteredComplex> {
    MixedSearch::default().run(steps)
}

#[derive(Clone, Copy)]
enum Entry {
    Zero,
    One,
    Var(usize),
}

struct Constraint {
    parity: bool,
    terms: Vec<(Option<usize>, Option<usize>)>,
}

impl MixedSearch {
    pub fn run(&self, steps: &StepSequence) -> Result<BifilteredComplex> {
        let full = steps.full();
        let fl = levels(&full);
        let n = fl.len();
        let mut forced = Vec::new();
        let mut gr = vec![0i64; n];
        for k in 1..n {
            let a = full[k - 1];
            let from_k = (k % 2 == 1) == (a > 0);
            if from_k {
                forced.push((k, k - 1));
                gr[k] = gr[k - 1] + 1;
            } else {
                forced.push((k - 1, k));
                gr[k] = gr[k - 1] - 1;
            }
        }

        let mut entry = vec![vec![Entry::Zero; n]; n];
        for &(s, t) in &forced {
            entry[s][t] = Entry::One;
        }
        let mut candidates = Vec::new();
        for u in 0..n {
            for v in 0..n {
                let strict = fl[v].0 < fl[u].0 && fl[v].1 < fl[u].1;
                if strict && gr[v] == gr[u] - 1 && matches!(entry[u][v], Entry::Zero) {
                    entry[u][v] = Entry::Var(candidates.len());
                    candidates.push((u, v));
                }
            }
        }

        // Constraints grouped by the last variable they mention.
        let nv = candidates.len();
        let mut by_last: Vec<Vec<Constraint>> = (0..=nv).map(|_| Vec::new()).collect();
        for s in 0..n {
            for t in 0..n {
                if gr[t] != gr[s] - 2 {
                    continue;
                }
                let mut c = Constraint { parity: false, terms: Vec::new() };
                for w in 0..n {
                    let (e1, e2) = (entry[s][w], entry[w][t]);
                    let var = |e: Entry| match e {
                        Entry::Var(x) => Some(x),
                        _ => None,
                    };
                    if matches!(e1, Entry::Zero) || matches!(e2, Entry::Zero) {
                        continue;
                    }
                    match (var(e1), var(e2)) {
                        (None, None) => c.parity ^= true,
                        pair => c.terms.push(pair),
                    }
                }
                let last = c.terms.iter().flat_map(|&(a, b)| [a, b]).flatten().max();
                match last {
                    Some(x) => by_last[x].push(c),
                    None if c.parity => return Err(no_rep(steps, "forced arrows already violate ∂² = 0")),
                    None => {}
                }
            }
        }

        let mut assign = vec![false; nv];
        let mut nodes = 0u64;
        match self.dfs(0, &mut assign, &by_last, &mut nodes) {
            Some(true) => {}
            Some(false) => return Err(no_rep(steps, "no set of diagonal arrows makes ∂² = 0")),
            None => {
                return Err(no_rep(steps, &format!("search budget of {} nodes exhausted", self.node_limit)));
            }
        }

        let gens = fl
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| Generator::new(format!("x{k}"), i, j, Some(gr[k])))
            .collect();
        let diagonals = candidates.iter().zip(&assign).filter(|(_, &on)| on).map(|(&p, _)| p);
        let c = BifilteredComplex::from_indexed(gens, forced.into_iter().chain(diagonals))?;
        c.check()?;
        Ok(c)
    }

    /// `Some(found)`, or `None` when the node budget runs out.
    fn dfs(&self, k: usize, assign: &mut Vec<bool>, by_last: &[Vec<Constraint>], nodes: &mut u64) -> Option<bool> {
        if k == assign.len() {
            return Some(true);
        }
        for value in [false, true] {
            *nodes += 1;
            if *nodes > self.node_limit {
                return None;
            }
            assign[k] = value;
            let ok = by_last[k].iter().all(|c| {
                let mut p = c.parity;
                for &(a, b) in &c.terms {
                    let va = a.is_none_or(|x| assign[x]);
                    let vb = b.is_none_or(|x| assign[x]);
                    p ^= va && vb;
                }
                !p
            });
            if ok {
                match self.dfs(k + 1, assign, by_last, nodes) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => return None,
                }
            }
        }
        assign[k] = false;
        Some(false)
    }
}

fn no_rep(steps: &StepSequence, why: &str) -> Error {
    Error::NoRepresentative(format!("{steps}: {why}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_three_minus_one() {
        let c = mixed_from_steps(&StepSequence::new(vec![3, -1, -2, 2])).unwrap();
        assert_eq!(c.len(), 9);
        let fl: Vec<_> = c.generators().iter().map(Generator::fl).collect();
        assert_eq!(fl, vec![(0, 2), (3, 2), (3, 3), (1, 3), (1, 1), (3, 1), (3, 3), (2, 3), (2, 0)]);
        let diag: Vec<_> = c
            .arrows_of_kind(crate::complex::ArrowKind::Diagonal)
            .into_iter()
            .map(|(s, t)| (c.generator(s).id.as_str(), c.generator(t).id.as_str()))
            .collect();
        assert_eq!(diag, vec![("x1", "x4"), ("x3", "x0"), ("x5", "x8"), ("x7", "x4")]);
    }

    #[test]
    fn unrealizable() {
        for s in [vec![1, -2], vec![1, -1]] {
            let e = mixed_from_steps(&StepSequence::new(s)).unwrap_err();
            assert!(matches!(e, Error::NoRepresentative(_)), "{e}");
        }
    }

    #[test]
    fn positive_and_negative_need_no_diagonals() {
        let s = StepSequence::new(vec![1, 2]);
        assert_eq!(mixed_from_steps(&s).unwrap(), crate::complex::staircase_from_steps(&s).unwrap());
        let d = mixed_from_steps(&s.negated()).unwrap();
        assert_eq!(d.arrow_kind_counts(), (2, 2, 0));
        assert_eq!(d.filtration_multiset(), crate::complex::staircase_from_steps(&s).unwrap().dual().filtration_multiset());
    }
}
