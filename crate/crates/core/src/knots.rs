//! Torus knots, the two cable families of `T(p, p+1)` and the knots `K(i, j)`,
//! mapped to classes. Sequence formulas are cross-checked against the
//! Alexander polynomial route.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::falg::{epsilon_of, lemma_sum, order_i, order_j, ClassExpr, Mode, SumLemma};
use crate::laurent::{
    cable_alexander, cable_closed_form, lspace_gaps, torus_alexander, CableSign, GapSequence, LaurentPoly,
};
use crate::seq::{seq_normalize, StepSequence};
use crate::simplify::Outcome;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum KnotExpr {
    Torus { p: i64, q: i64 },
    /// The `(m, l)` cable of `child`; `m` is the longitudinal winding.
    Cable { child: Box<KnotExpr>, m: i64, l: i64 },
    Mirror { child: Box<KnotExpr> },
    Sum { children: Vec<KnotExpr> },
    Repeat { n: i64, child: Box<KnotExpr> },
    Raw { steps: StepSequence },
    /// `K(i, j)`, kept unexpanded so that printing round-trips.
    Family { i: i64, j: i64 },
}

impl KnotExpr {
    pub fn torus(p: i64, q: i64) -> Self {
        KnotExpr::Torus { p, q }
    }

    pub fn cable(child: KnotExpr, m: i64, l: i64) -> Self {
        KnotExpr::Cable { child: Box::new(child), m, l }
    }

    pub fn mirror(child: KnotExpr) -> Self {
        KnotExpr::Mirror { child: Box::new(child) }
    }

    pub fn sum(children: Vec<KnotExpr>) -> Self {
        KnotExpr::Sum { children }
    }

    pub fn repeat(n: i64, child: KnotExpr) -> Self {
        KnotExpr::Repeat { n, child: Box::new(child) }
    }

    /// Checks every leaf: coprimality, the cable bound, the family domain.
    pub fn validate(&self) -> Result<()> {
        match self {
            KnotExpr::Torus { p, q } => torus_genus(*p, *q).map(|_| ()),
            KnotExpr::Cable { child, m, l } => cable_companion(child, *m, *l).map(|_| ()),
            KnotExpr::Mirror { child } | KnotExpr::Repeat { child, .. } => child.validate(),
            KnotExpr::Sum { children } => children.iter().try_for_each(|c| c.validate()),
            KnotExpr::Raw { .. } => Ok(()),
            KnotExpr::Family { i, j } => k_ij(*i, *j).map(|_| ()),
        }
    }
}

/// Prints in the expression grammar.
impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpr::Torus { p, q } => write!(f, "T({p},{q})"),
            KnotExpr::Cable { child, m, l } => write!(f, "C({child};{m},{l})"),
            KnotExpr::Mirror { child } => match **child {
                KnotExpr::Sum { .. } | KnotExpr::Repeat { .. } => write!(f, "-({child})"),
                _ => write!(f, "-{child}"),
            },
            KnotExpr::Sum { children } => {
                if children.is_empty() {
                    return f.write_str("S[]");
                }
                for (k, c) in children.iter().enumerate() {
                    match (k, c) {
                        (0, KnotExpr::Sum { .. }) => write!(f, "({c})")?,
                        (0, _) => write!(f, "{c}")?,
                        (_, KnotExpr::Mirror { child }) if !matches!(**child, KnotExpr::Mirror { .. }) => {
                            match **child {
                                KnotExpr::Sum { .. } | KnotExpr::Repeat { .. } => write!(f, " - ({child})")?,
                                _ => write!(f, " - {child}")?,
                            }
                        }
                        (_, KnotExpr::Sum { .. }) => write!(f, " + ({c})")?,
                        _ => write!(f, " + {c}")?,
                    }
                }
                Ok(())
            }
            KnotExpr::Repeat { n, child } => match **child {
                KnotExpr::Sum { .. } | KnotExpr::Repeat { .. } => write!(f, "{n}*({child})"),
                _ => write!(f, "{n}*{child}"),
            },
            KnotExpr::Raw { steps } => {
                f.write_str("S[")?;
                for (k, a) in steps.entries().iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("]")
            }
            KnotExpr::Family { i, j } => write!(f, "K({i},{j})"),
        }
    }
}

fn torus_genus(p: i64, q: i64) -> Result<i64> {
    if p < 1 {
        return Err(Error::InvalidKnot(format!("T({p},{q}): need p >= 1")));
    }
    if q == 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidKnot(format!("T({p},{q}): parameters are not coprime")));
    }
    Ok((p - 1) * (q.abs() - 1) / 2)
}

/// The Alexander polynomial and genus of a cable companion, after checking
/// the L-space bound `l >= m(2g - 1)`.
fn cable_companion(child: &KnotExpr, m: i64, l: i64) -> Result<(LaurentPoly, i64)> {
    let KnotExpr::Torus { p, q } = *child else {
        return Err(Error::InvalidKnot(format!("C({child};{m},{l}): the companion must be a torus knot")));
    };
    let g = torus_genus(p, q)?;
    if q < 0 && g > 0 {
        return Err(Error::InvalidKnot(format!(
            "C({child};{m},{l}): negative torus companion is not a certified L-space knot; no staircase model"
        )));
    }
    if m < 1 || m.gcd(&l) != 1 {
        return Err(Error::InvalidKnot(format!("C({child};{m},{l}): need m >= 1 and gcd(m, l) = 1")));
    }
    if l < m * (2 * g - 1) {
        return Err(Error::InvalidKnot(format!(
            "C({child};{m},{l}): {l} < {m}·(2g-1) = {} with g = {g}; not a certified L-space knot; no staircase model",
            m * (2 * g - 1)
        )));
    }
    Ok((torus_alexander(p, q.abs())?, g))
}

fn gaps_of(delta: &LaurentPoly) -> Result<StepSequence> {
    let gaps = lspace_gaps(delta)?;
    let s = StepSequence::new(gaps.gaps.clone());
    if !s.is_positive() || s.tau() != gaps.genus {
        return Err(Error::Invariant(format!("gap sequence {s} does not sum to the genus {}", gaps.genus)));
    }
    Ok(s)
}

/// `(j, p - j)` for `j = 1 .. p-1`.
pub fn torus_seq(p: i64) -> Vec<i64> {
    (1..p).flat_map(|j| [j, p - j]).collect()
}

/// Class of the positive torus knot `T(p, q)`, from its Alexander polynomial.
/// For `q = p + 1` the result is checked against `(j, p - j)`.
pub fn torus_class(p: i64, q: i64) -> Result<StepSequence> {
    torus_genus(p, q)?;
    if q < 0 {
        return Err(Error::InvalidKnot(format!("T({p},{q}) is a negative torus knot; use its mirror")));
    }
    let s = gaps_of(&torus_alexander(p, q)?)?;
    if q == p + 1 {
        let t = torus_seq(p);
        let expected = seq_normalize(&t[..(p - 1) as usize]);
        if s != expected {
            return Err(Error::Invariant(format!("T({p},{q}): polynomial gives {s}, sequence formula {expected}")));
        }
    }
    Ok(s)
}

/// The sequences `x` (plus family) or `y` (minus family), of length
/// `2mp(p-1)`, unnormalized.
pub fn cable_seq(p: i64, m: i64, sign: CableSign) -> Vec<i64> {
    let mut out = Vec::with_capacity((2 * m * p * (p - 1)) as usize);
    for i in 1..=m {
        for j in 1..p {
            let (a, b) = match sign {
                CableSign::Plus => ((i, m - i), (i - 1, m - i + 1)),
                CableSign::Minus => ((m - i, i), (m - i + 1, i - 1)),
            };
            for _ in 0..j {
                out.extend([a.0, a.1]);
            }
            for _ in 0..p - j {
                out.extend([b.0, b.1]);
            }
        }
    }
    out
}

/// Entries `from ..= to` (1-based) of a sequence.
fn range(s: &[i64], from: i64, to: i64) -> &[i64] {
    if to < from {
        return &[];
    }
    &s[(from - 1) as usize..to as usize]
}

/// Class of the `(m, mp(p-1) ± 1)` cable of `T(p, p+1)` from the sequence
/// formula, checked against the gaps of the closed-form polynomial and of the
/// cabling formula.
pub fn cable_class(p: i64, m: i64, sign: CableSign) -> Result<StepSequence> {
    let l = crate::laurent::check_cable_family(p, m, sign)?;
    let seq = cable_seq(p, m, sign);
    let half = m * p * (p - 1);
    let s = match sign {
        CableSign::Plus => seq_normalize(range(&seq, 1, half)),
        CableSign::Minus => seq_normalize(range(&seq, 2, half)),
    };
    let closed = gaps_of(&cable_closed_form(p, m, sign)?)?;
    let cabled = gaps_of(&cable_alexander(&torus_alexander(p, p + 1)?, m, l)?)?;
    if s != closed || s != cabled {
        return Err(Error::Invariant(format!(
            "cable ({p}, {m}, {sign}): sequence {s}, closed form {closed}, cabling formula {cabled}"
        )));
    }
    Ok(s)
}

/// Parameters of `K(i, j)`: `m = i + 1`, `p = |j| + 3`.
fn kij_params(i: i64, j: i64) -> Result<(i64, i64)> {
    if i < 0 || (i == 0 && j < 0) {
        return Err(Error::InvalidKnot(format!("K({i},{j}) is outside the family (need i > 0, or i = 0 and j >= 0)")));
    }
    Ok((i + 1, j.abs() + 3))
}

/// `K(i, j)` as the sum of a knot and the mirror of another.
pub fn k_ij(i: i64, j: i64) -> Result<KnotExpr> {
    let (m, p) = kij_params(i, j)?;
    let t = KnotExpr::torus(p, p + 1);
    let base = (p - 1) * p * m;
    let (a, b) = if i > 0 && j >= 0 {
        (KnotExpr::cable(t, m, base + 1), KnotExpr::torus(p * m, p * m + 1))
    } else if i > 0 {
        (KnotExpr::cable(t.clone(), m, base + 1), KnotExpr::cable(t, m, base - 1))
    } else {
        (t, KnotExpr::cable(KnotExpr::torus(2, 3), (p + 1) / 2, 2 * (p / 2) + 1))
    };
    Ok(KnotExpr::sum(vec![a, KnotExpr::mirror(b)]))
}

fn leaf_class(e: &KnotExpr) -> Result<StepSequence> {
    match e {
        KnotExpr::Torus { p, q } if *q < 0 => Ok(torus_class(*p, -q)?.negated()),
        KnotExpr::Torus { p, q } => torus_class(*p, *q),
        KnotExpr::Cable { child, m, l } => {
            let (delta, _) = cable_companion(child, *m, *l)?;
            if let KnotExpr::Torus { p, q } = **child {
                let base = (p - 1) * p * m;
                let sign = match l - base {
                    1 => Some(CableSign::Plus),
                    -1 => Some(CableSign::Minus),
                    _ => None,
                };
                if let (true, Some(sign)) = (q == p + 1 && p >= 2, sign) {
                    if crate::laurent::check_cable_family(p, *m, sign).is_ok() {
                        return cable_class(p, *m, sign);
                    }
                }
            }
            gaps_of(&cable_alexander(&delta, *m, *l)?)
        }
        _ => unreachable!("not a leaf"),
    }
}

/// Formal class of a knot expression.
pub fn knot_class(e: &KnotExpr) -> Result<ClassExpr> {
    Ok(match e {
        KnotExpr::Torus { .. } | KnotExpr::Cable { .. } => ClassExpr::single(leaf_class(e)?),
        KnotExpr::Mirror { child } => knot_class(child)?.negated(),
        KnotExpr::Sum { children } => {
            let mut acc = ClassExpr::zero();
            for c in children {
                acc = acc.plus(&knot_class(c)?);
            }
            acc
        }
        KnotExpr::Repeat { n, child } => knot_class(child)?.scaled(*n),
        KnotExpr::Raw { steps } => ClassExpr::single(steps.clone()),
        KnotExpr::Family { i, j } => knot_class(&k_ij(*i, *j)?)?,
    })
}

/// Alexander polynomial of a knot expression, normalized to start at `t^0`.
/// Raw classes count as L-space staircases and must be positive.
pub fn knot_alexander(e: &KnotExpr) -> Result<LaurentPoly> {
    Ok(match e {
        KnotExpr::Torus { p, q } => {
            torus_genus(*p, *q)?;
            torus_alexander(*p, q.abs())?
        }
        KnotExpr::Cable { child, m, l } => cable_alexander(&cable_companion(child, *m, *l)?.0, *m, *l)?,
        KnotExpr::Mirror { child } => knot_alexander(child)?,
        KnotExpr::Sum { children } => {
            let mut acc = LaurentPoly::one();
            for c in children {
                acc = &acc * &knot_alexander(c)?;
            }
            acc
        }
        KnotExpr::Repeat { n, child } => knot_alexander(child)?.pow(n.unsigned_abs() as u32),
        KnotExpr::Raw { steps } if steps.is_negative() => {
            knot_alexander(&KnotExpr::Raw { steps: steps.negated() })?
        }
        KnotExpr::Raw { steps } if steps.is_positive() || steps.is_empty() => {
            GapSequence { gaps: steps.entries().to_vec(), genus: steps.tau() }.to_polynomial()
        }
        KnotExpr::Raw { .. } => {
            return Err(Error::InvalidKnot(format!("{e}: mixed classes have no staircase polynomial")))
        }
        KnotExpr::Family { i, j } => knot_alexander(&k_ij(*i, *j)?)?,
    }
    .normalized())
}

/// Why the dominant term beats another remaining term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Domination {
    pub over: StepSequence,
    pub lemma: &'static str,
}

/// The term bookkeeping behind the Archimedean class of `K(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KijProof {
    pub i: i64,
    pub j: i64,
    pub case: u8,
    /// Signed summands of both knots before cancellation.
    pub terms: Vec<(i64, StepSequence)>,
    pub cancelled: Vec<StepSequence>,
    pub remaining: ClassExpr,
    pub dominant: StepSequence,
    pub dominations: Vec<Domination>,
    /// The stated Archimedean representative(s); two at `j = 0`, `i > 0`.
    pub representatives: Vec<StepSequence>,
}

/// `[(1, m-1)^k, 1, tail]`
fn ladder(m: i64, k: i64, tail: i64) -> StepSequence {
    let mut v: Vec<i64> = (0..k).flat_map(|_| [1, m - 1]).collect();
    v.extend([1, tail]);
    seq_normalize(&v)
}

/// Folds summands left to right with the sum lemmas, checking each step.
fn lemma_fold(parts: &[StepSequence], whole: &StepSequence, what: &str) -> Result<()> {
    let mut acc = StepSequence::empty();
    for s in parts.iter().filter(|s| !s.is_empty()) {
        acc = if acc.is_empty() {
            s.clone()
        } else {
            match lemma_sum(&acc, s) {
                Some((sum, SumLemma::Box | SumLemma::Polygon(_))) => sum,
                None => return Err(Error::Invariant(format!("{what}: no sum lemma joins {acc} and {s}"))),
            }
        };
    }
    if &acc != whole {
        return Err(Error::Invariant(format!("{what}: summands give {acc}, knot class is {whole}")));
    }
    Ok(())
}

fn dominance(x: &StepSequence, y: &StepSequence) -> Option<&'static str> {
    if order_i(x, y) {
        Some("order-i")
    } else if order_j(x, y).is_some() {
        Some("order-j")
    } else {
        None
    }
}

/// `ε(x - n·y) = 1` for `n = 1, 2, 3`.
fn sampled_dominance(x: &StepSequence, y: &StepSequence) -> Result<bool> {
    for n in 1..=3 {
        let e = ClassExpr::single(x.clone()).minus(&ClassExpr::single(y.clone()).scaled(n));
        match epsilon_of(&e, Mode::Pipeline)? {
            Outcome::Decided(v) if v.epsilon == 1 => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Archimedean representative(s) stated for `K(i, j)`, `(i, j) > (0, 0)`.
pub fn kij_representatives(i: i64, j: i64) -> Vec<StepSequence> {
    let mut out = Vec::new();
    if j >= 0 {
        out.push(seq_normalize(&[1, i, 1, 2 * i + 1 + j * (i + 1)]));
    }
    if j <= 0 {
        let mut v: Vec<i64> = (0..-j).flat_map(|_| [1, i]).collect();
        v.extend([1, i, 1, 2 * i + 1]);
        out.push(seq_normalize(&v));
    }
    out
}

/// Reproduces the summand decomposition of `K(i, j)`: each knot is split
/// into the stated summands (checked with the sum lemmas), the stated terms
/// cancel, and the dominant term beats every other remaining term by an
/// ordering lemma.
pub fn kij_proof(i: i64, j: i64) -> Result<KijProof> {
    let (m, p) = kij_params(i, j)?;
    let mut plus: Vec<StepSequence> = Vec::new();
    let mut minus: Vec<StepSequence> = Vec::new();
    let mut cancelled: Vec<StepSequence> = Vec::new();
    let case;
    let dominant;
    let half = m * p * (p - 1);
    let initial = 2 * p * (p - 1);
    if i > 0 {
        let x = cable_seq(p, m, CableSign::Plus);
        let xs: Vec<StepSequence> = (0..=p - 2).map(|k| ladder(m, k, (p - k) * m - 1)).collect();
        lemma_fold(&xs, &seq_normalize(range(&x, 1, initial)), "initial staircase of x")?;
        plus.extend(xs.iter().cloned());
        plus.push(seq_normalize(range(&x, initial + 1, half)));
        lemma_fold(&plus, &cable_class(p, m, CableSign::Plus)?, "plus cable")?;
        if j >= 0 {
            case = 1;
            let n = p * m;
            let t = torus_seq(n);
            minus.push(seq_normalize(range(&t, 1, 2)));
            minus.push(seq_normalize(range(&t, 3, n - 1)));
            lemma_fold(&minus, &torus_class(n, n + 1)?, "torus")?;
            cancelled.push(seq_normalize(&[1, n - 1]));
            dominant = ladder(m, 1, (p - 1) * m - 1);
        } else {
            case = 2;
            let y = cable_seq(p, m, CableSign::Minus);
            let ys: Vec<StepSequence> = (0..=p - 3)
                .map(|k| ladder(m, k, (p - k) * m - 1))
                .chain([ladder(m, p - 2, 2 * m - 2)])
                .collect();
            lemma_fold(&ys, &seq_normalize(range(&y, 2, initial + 1)), "initial staircase of y")?;
            minus.extend(ys.iter().cloned());
            minus.push(seq_normalize(range(&y, initial + 2, half)));
            lemma_fold(&minus, &cable_class(p, m, CableSign::Minus)?, "minus cable")?;
            cancelled.extend((0..=p - 3).map(|k| ladder(m, k, (p - k) * m - 1)));
            dominant = ladder(m, p - 2, 2 * m - 1);
        }
    } else {
        case = 3;
        let t = torus_seq(p);
        plus.push(seq_normalize(range(&t, 1, 2)));
        plus.push(seq_normalize(range(&t, 3, 4.min(p - 1))));
        plus.push(seq_normalize(range(&t, 5, p - 1)));
        lemma_fold(&plus, &torus_class(p, p + 1)?, "torus")?;
        let KnotExpr::Sum { children } = k_ij(i, j)? else { unreachable!() };
        let KnotExpr::Mirror { child } = &children[1] else { unreachable!() };
        let c = leaf_class(child)?;
        let ce = c.entries();
        minus.push(seq_normalize(&ce[..2.min(ce.len())]));
        minus.push(seq_normalize(&ce[2.min(ce.len())..]));
        lemma_fold(&minus, &c, "cable of T(2,3)")?;
        cancelled.push(seq_normalize(&[1, p - 1]));
        dominant = if j == 0 { StepSequence::empty() } else { plus[1].clone() };
    }

    let terms: Vec<(i64, StepSequence)> = plus
        .iter()
        .map(|s| (1, s.clone()))
        .chain(minus.iter().map(|s| (-1, s.clone())))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    let remaining = ClassExpr::from_terms(terms.iter().cloned());
    for s in &cancelled {
        let count = |sign: i64| terms.iter().filter(|(k, t)| *k == sign && t == s).count();
        if count(1) == 0 || count(-1) == 0 || remaining.terms().iter().any(|(_, t)| t == s) {
            return Err(Error::Invariant(format!("K({i},{j}): {s} does not cancel")));
        }
    }
    let whole = knot_class(&KnotExpr::Family { i, j })?;
    if remaining.minus(&whole).atomized() != ClassExpr::zero() {
        return Err(Error::Invariant(format!("K({i},{j}): summands {remaining} do not add up to {whole}")));
    }

    let mut dominations = Vec::new();
    let representatives = if (i, j) == (0, 0) {
        if !remaining.is_zero() {
            return Err(Error::Invariant(format!("K(0,0) leaves {remaining}")));
        }
        vec![]
    } else {
        if !remaining.terms().iter().any(|(k, s)| *k == 1 && *s == dominant) {
            return Err(Error::Invariant(format!("K({i},{j}): dominant term {dominant} is not a remaining summand")));
        }
        for (_, s) in remaining.terms().iter().filter(|(_, s)| *s != dominant) {
            let lemma = match dominance(&dominant, s) {
                Some(l) => l,
                // the even-j terms of the i = 0 case fall outside both lemmas
                None if case == 3 && sampled_dominance(&dominant, s)? => "epsilon-sample",
                None => {
                    return Err(Error::Invariant(format!("K({i},{j}): no ordering lemma gives {dominant} >> {s}")))
                }
            };
            dominations.push(Domination { over: s.clone(), lemma });
        }
        let reps = kij_representatives(i, j);
        // K(0,1) = [2], whose Archimedean representative is 2[2] = [2,2]
        let want = if (i, j) == (0, 1) { StepSequence::new(vec![2, 2]) } else { dominant.clone() };
        if let Some(r) = reps.iter().find(|r| **r != want) {
            return Err(Error::Invariant(format!("K({i},{j}): stated representative {r}, dominant term {want}")));
        }
        reps
    };
    Ok(KijProof { i, j, case, terms, cancelled, remaining, dominant, dominations, representatives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::falg::class_sum;

    fn s(v: &[i64]) -> StepSequence {
        StepSequence::new(v.to_vec())
    }

    #[test]
    fn torus_examples() {
        assert_eq!(torus_class(3, 4).unwrap(), s(&[1, 2]));
        assert_eq!(torus_class(4, 5).unwrap(), s(&[1, 3, 2]));
        assert_eq!(torus_class(2, 3).unwrap(), s(&[1]));
        assert_eq!(torus_class(2, 5).unwrap(), s(&[1, 1]));
        for p in 2..=6 {
            assert!(torus_class(p, p + 1).is_ok());
        }
        assert!(torus_class(2, 4).is_err());
    }

    #[test]
    fn cable_examples() {
        assert_eq!(cable_class(3, 2, CableSign::Plus).unwrap(), s(&[1, 5, 1, 1, 1, 3]));
        assert_eq!(cable_class(2, 2, CableSign::Plus).unwrap(), s(&[1, 3]));
        for p in 2..=5 {
            assert_eq!(cable_class(p, 1, CableSign::Plus).unwrap(), torus_class(p, p + 1).unwrap());
        }
        for p in 2..=4 {
            for m in 1..=3 {
                for sign in [CableSign::Plus, CableSign::Minus] {
                    if (p, m, sign) != (2, 1, CableSign::Minus) {
                        let c = cable_class(p, m, sign).unwrap();
                        assert!(c.is_positive(), "{p} {m} {sign}");
                    }
                }
            }
        }
        assert!(cable_class(2, 1, CableSign::Minus).is_err());
    }

    #[test]
    fn knot_classes() {
        let t34 = KnotExpr::torus(3, 4);
        assert_eq!(knot_class(&t34).unwrap(), ClassExpr::single(s(&[1, 2])));
        assert_eq!(knot_class(&KnotExpr::mirror(t34)).unwrap(), ClassExpr::single(s(&[1, 2])).negated());
        let bad = KnotExpr::cable(KnotExpr::torus(2, 3), 2, 1);
        assert!(matches!(knot_class(&bad), Err(Error::InvalidKnot(_))));
        assert!(bad.validate().is_err());
        let c = KnotExpr::cable(KnotExpr::torus(2, 3), 2, 5);
        assert_eq!(knot_class(&c).unwrap(), ClassExpr::single(s(&[1, 3])));
        assert!(knot_class(&KnotExpr::Family { i: 0, j: 0 }).unwrap().atomized().is_zero());
        assert!(k_ij(0, -1).is_err());
        assert!(k_ij(-1, 2).is_err());
    }

    #[test]
    fn alexander_of_expressions() {
        let t34 = KnotExpr::torus(3, 4);
        let d = knot_alexander(&t34).unwrap();
        assert_eq!(d.to_string(), "1 - t + t^3 - t^5 + t^6");
        assert_eq!(knot_alexander(&KnotExpr::Raw { steps: s(&[1, 2]) }).unwrap(), d);
        assert_eq!(knot_alexander(&KnotExpr::mirror(t34.clone())).unwrap(), d);
        let two = KnotExpr::sum(vec![t34.clone(), t34.clone()]);
        assert_eq!(knot_alexander(&two).unwrap(), &d * &d);
        assert_eq!(knot_alexander(&KnotExpr::repeat(-2, t34)).unwrap(), &d * &d);
        assert!(knot_alexander(&KnotExpr::Raw { steps: s(&[3, -1, -2, 2]) }).is_err());
        assert!(knot_alexander(&KnotExpr::Family { i: 0, j: 0 }).is_ok());
    }

    #[test]
    fn printing() {
        let e = KnotExpr::sum(vec![
            KnotExpr::torus(3, 4),
            KnotExpr::mirror(KnotExpr::cable(KnotExpr::torus(2, 3), 2, 3)),
            KnotExpr::repeat(2, KnotExpr::Raw { steps: s(&[1, 2]) }),
        ]);
        assert_eq!(e.to_string(), "T(3,4) - C(T(2,3);2,3) + 2*S[1,2]");
    }

    #[test]
    fn kij_small() {
        let p = kij_proof(0, 1).unwrap();
        assert_eq!(p.remaining, ClassExpr::single(s(&[2])));
        let p = kij_proof(0, 0).unwrap();
        assert!(p.remaining.is_zero());
        assert_eq!(p.cancelled, vec![s(&[1, 2])]);
        match class_sum(&ClassExpr::single(s(&[2])).scaled(2), Mode::Pipeline).unwrap() {
            Outcome::Decided(r) => assert_eq!(r, s(&[2, 2])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kij_proofs() {
        for i in 1..=2 {
            for j in -1..=1 {
                let pr = kij_proof(i, j).unwrap();
                assert_eq!(pr.case, if j >= 0 { 1 } else { 2 });
                assert!(!pr.dominations.is_empty() || pr.remaining.terms().len() == 1);
            }
        }
        let pr = kij_proof(1, 0).unwrap();
        assert_eq!(pr.dominant, s(&[1, 1, 1, 3]));
        assert_eq!(pr.representatives.len(), 2);
        for j in 2..=5 {
            let pr = kij_proof(0, j).unwrap();
            assert_eq!(pr.dominant, s(&[2, j + 1]));
        }
    }
}
