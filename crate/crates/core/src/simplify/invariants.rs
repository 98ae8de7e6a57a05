use serde::Serialize;

use super::{decompose, simultaneous_simplify, vertically_simplify, Direction, Outcome, Simplified};
use crate::complex::{realize, ArrowKind, BifilteredComplex};
use crate::error::{Error, Result};
use crate::seq::StepSequence;

/// Follows alternating horizontal and vertical arrows from `x0` until an
/// element without a horizontal arrow. Returns the visited generators and the
/// signed step lengths `a_1, ..., a_{2m}`.
pub fn trace(c: &BifilteredComplex, x0: usize) -> Result<(Vec<usize>, Vec<i64>)> {
    let mut path = vec![x0];
    let mut steps = Vec::new();
    let mut seen = vec![false; c.len()];
    seen[x0] = true;
    loop {
        let k = path.len();
        let cur = *path.last().unwrap();
        let kind = if k % 2 == 1 { ArrowKind::Horizontal } else { ArrowKind::Vertical };
        let outs: Vec<usize> = c.targets(cur).iter().copied().filter(|&t| c.kind(cur, t) == kind).collect();
        let ins: Vec<usize> = c.sources(cur).iter().copied().filter(|&s| c.kind(s, cur) == kind).collect();
        let (next, from_next) = match (outs.as_slice(), ins.as_slice()) {
            ([], []) if k % 2 == 1 => break,
            ([], []) => {
                return Err(Error::Invariant(format!(
                    "trace broken at {}: no vertical arrow",
                    c.generator(cur).id
                )))
            }
            ([t], []) => (*t, false),
            ([], [s]) => (*s, true),
            _ => {
                return Err(Error::Invariant(format!(
                    "basis not simplified at {}: several {kind:?} arrows",
                    c.generator(cur).id
                )))
            }
        };
        if seen[next] {
            return Err(Error::Invariant(format!("trace revisits {}", c.generator(next).id)));
        }
        seen[next] = true;
        let len = if from_next { c.length(next, cur) } else { c.length(cur, next) };
        // odd steps: positive when the arrow leaves x_k; even: when it enters x_k
        let positive = if k % 2 == 1 { from_next } else { !from_next };
        steps.push(if positive { len } else { -len });
        path.push(next);
    }
    let m = steps.len() / 2;
    for i in 0..m {
        if steps[i] != steps[2 * m - 1 - i] {
            return Err(Error::Invariant(format!("traced sequence {steps:?} is not symmetric")));
        }
    }
    Ok((path, steps))
}

/// A simplified basis, its traced class and the reduced complex of that class.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub steps: StepSequence,
    /// Reduced representative with generators `x0 .. x2m` in trace order.
    pub core: BifilteredComplex,
    pub simplified: Simplified,
    pub path: Vec<usize>,
}

/// Largest complex whose core is cut out by an explicit splitting; larger
/// ones get the realized representative instead.
const SPLIT_LIMIT: usize = 400;

fn core_of(s: &Simplified, path: &[usize], steps: &StepSequence) -> Result<BifilteredComplex> {
    let ids: Vec<String> = (0..path.len()).map(|k| format!("x{k}")).collect();
    // after splitting off the acyclic summands the path spans the core
    if s.complex.len() <= SPLIT_LIMIT {
        if let Outcome::Decided((_, split)) = decompose(s)? {
            let mut core = split.complex.induced(path).relabeled(&ids)?;
            if core.check().is_ok() {
                core.pin_grading(0);
                return Ok(core);
            }
        }
    }
    let mut core = realize(steps)?;
    core.pin_grading(0);
    Ok(core)
}

pub fn reduce(c: &BifilteredComplex) -> Result<Outcome<Reduced>> {
    let s = match simultaneous_simplify(c)? {
        Outcome::Decided(s) => s,
        Outcome::Undecided(r) => return Ok(Outcome::Undecided(r)),
    };
    let (path, full) = trace(&s.complex, s.distinguished)?;
    let steps = StepSequence::new(full[..full.len() / 2].to_vec());
    if steps.len() * 2 != full.len() {
        return Err(Error::Invariant(format!("traced sequence {full:?} contains zero steps")));
    }
    let core = core_of(&s, &path, &steps)?;
    Ok(Outcome::Decided(Reduced { steps, core, simplified: s, path }))
}

pub fn reduced_representative(c: &BifilteredComplex) -> Result<Outcome<StepSequence>> {
    Ok(reduce(c)?.map(|r| r.steps))
}

/// Epsilon read at the distinguished element of a simultaneously simplified basis.
pub(crate) fn epsilon_at(s: &Simplified) -> i64 {
    let c = &s.complex;
    let x0 = s.distinguished;
    if c.sources(x0).iter().any(|&w| c.kind(w, x0) == ArrowKind::Horizontal) {
        1
    } else if c.targets(x0).iter().any(|&t| c.kind(x0, t) == ArrowKind::Horizontal) {
        -1
    } else {
        0
    }
}

/// Epsilon without the dual cross-check.
pub(crate) fn epsilon_single(c: &BifilteredComplex) -> Result<Outcome<i64>> {
    Ok(simultaneous_simplify(c)?.map(|s| epsilon_at(&s)))
}

/// Epsilon, cross-checked against the dual.
pub fn epsilon(c: &BifilteredComplex) -> Result<Outcome<i64>> {
    let e = match epsilon_single(c)? {
        Outcome::Decided(e) => e,
        u => return Ok(u),
    };
    match epsilon_single(&c.dual())? {
        Outcome::Decided(d) if d == -e => Ok(Outcome::Decided(e)),
        Outcome::Decided(d) => Err(Error::Invariant(format!("epsilon is {e} but epsilon of the dual is {d}"))),
        Outcome::Undecided(r) => Ok(Outcome::Undecided(format!("dual cross-check: {r}"))),
    }
}

/// `j - i` of the vertically distinguished element.
pub fn tau(c: &BifilteredComplex) -> Result<i64> {
    let s = vertically_simplify(c)?;
    let g = s.complex.generator(s.distinguished);
    debug_assert!(super::free_generators(&s.complex, Direction::Vertical) == [s.distinguished]);
    Ok(g.j - g.i)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalInvariants {
    pub epsilon: i64,
    pub a1: Option<i64>,
    pub a2: Option<i64>,
}

impl LocalInvariants {
    pub fn of_steps(s: &StepSequence) -> Self {
        let e = s.epsilon();
        let a = s.entries();
        let a1 = (e == 1).then(|| a[0]);
        let a2 = a1.and_then(|_| a.get(1).copied()).filter(|&x| x > 0);
        Self { epsilon: e, a1, a2 }
    }
}

pub fn local_invariants(c: &BifilteredComplex) -> Result<Outcome<LocalInvariants>> {
    Ok(reduce(c)?.map(|r| LocalInvariants::of_steps(&r.steps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{mixed_from_steps, staircase_from_steps};

    fn stair(v: &[i64]) -> BifilteredComplex {
        staircase_from_steps(&StepSequence::new(v.to_vec())).unwrap()
    }

    fn decided<T>(o: Outcome<T>) -> T {
        o.decided().expect("decided")
    }

    #[test]
    fn epsilon_examples() {
        let c = stair(&[1, 2]);
        assert_eq!(decided(epsilon(&c).unwrap()), 1);
        assert_eq!(decided(epsilon(&c.dual()).unwrap()), -1);
        assert_eq!(decided(epsilon(&c.tensor(&c.dual())).unwrap()), 0);
        assert_eq!(decided(epsilon(&BifilteredComplex::unknot()).unwrap()), 0);
    }

    #[test]
    fn tau_examples() {
        let c = stair(&[1, 2]);
        assert_eq!(tau(&c).unwrap(), 3);
        assert_eq!(tau(&c.dual()).unwrap(), -3);
        assert_eq!(tau(&c.tensor(&stair(&[2]))).unwrap(), 5);
    }

    #[test]
    fn reduced_examples() {
        let t = stair(&[1, 3]).tensor(&stair(&[2]));
        assert_eq!(decided(reduced_representative(&t).unwrap()).entries(), &[1, 3, 2]);
        assert!(decided(reduced_representative(&BifilteredComplex::unknot()).unwrap()).is_empty());
        assert_eq!(decided(reduced_representative(&stair(&[2, 1])).unwrap()).entries(), &[2, 1]);
        let m = mixed_from_steps(&StepSequence::new(vec![3, -1, -2, 2])).unwrap();
        assert_eq!(decided(reduced_representative(&m).unwrap()).entries(), &[3, -1, -2, 2]);
    }

    #[test]
    fn local_examples() {
        let l = decided(local_invariants(&stair(&[1, 2])).unwrap());
        assert_eq!((l.a1, l.a2), (Some(1), Some(2)));
        let m = mixed_from_steps(&StepSequence::new(vec![3, -1, -2, 2])).unwrap();
        let l = decided(local_invariants(&m).unwrap());
        assert_eq!((l.epsilon, l.a1, l.a2), (1, Some(3), None));
        let l = decided(local_invariants(&BifilteredComplex::unknot()).unwrap());
        assert_eq!((l.epsilon, l.a1), (0, None));
    }
}
