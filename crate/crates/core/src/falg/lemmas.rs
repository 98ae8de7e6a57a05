//! Syntactic matchers for the sum and ordering lemmas. All matchers work on
//! normalized sequences and never match near misses.

use serde::Serialize;

use crate::seq::StepSequence;

/// Which lemma justified a concatenation or an ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "lemma", rename_all = "kebab-case")]
pub enum SumLemma {
    Box,
    Polygon(PolygonMatch),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonMatch {
    pub a: i64,
    /// `(p_l, c_l)` for each block of the first summand.
    pub blocks: Vec<(i64, i64)>,
    pub q: i64,
    pub d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderJMatch {
    pub a: i64,
    pub p: i64,
    pub c: i64,
    pub q: i64,
    pub d: i64,
}

fn positive(s: &[i64]) -> bool {
    s.iter().all(|&x| x > 0)
}

/// `[a] + [b] = [a, b]` by the box lemma.
pub fn box_lemma(a: &StepSequence, b: &StepSequence) -> bool {
    let (a, b) = (a.entries(), b.entries());
    if a.is_empty() || b.is_empty() || a.len() % 2 != 0 || !positive(a) || !positive(b) {
        return false;
    }
    let lo = a.iter().step_by(2).max().unwrap();
    let hi = a.iter().skip(1).step_by(2).min().unwrap();
    b.iter().all(|x| lo <= x && x <= hi)
}

/// Reads `s` as `[(1, a)^q, 1, a + d]`; returns `(q, d)`.
fn ladder(s: &[i64], a: i64) -> Option<(i64, i64)> {
    if s.is_empty() || s.len() % 2 != 0 {
        return None;
    }
    let last = s.len() - 1;
    let ok = s.iter().enumerate().all(|(k, &x)| match k {
        _ if k % 2 == 0 => x == 1,
        _ if k == last => x >= a,
        _ => x == a,
    });
    ok.then(|| ((s.len() / 2 - 1) as i64, s[last] - a))
}

/// Splits `s` into blocks `((1, a)^p, 1, a + c)`. With `strict`, blocks end
/// exactly at the entries above `a`; otherwise every even entry ends one.
fn blocks(s: &[i64], a: i64, strict: bool) -> Option<Vec<(i64, i64)>> {
    if s.is_empty() || s.len() % 2 != 0 {
        return None;
    }
    let mut out = Vec::new();
    let mut p = 0;
    for (k, &x) in s.iter().enumerate() {
        if k % 2 == 0 {
            if x != 1 {
                return None;
            }
            continue;
        }
        if x < a {
            return None;
        }
        if x > a || !strict {
            out.push((p, x - a));
            p = 0;
        } else {
            p += 1;
        }
    }
    // a trailing run of plain (1, a) pairs cannot end a block when strict
    (p == 0).then_some(out)
}

/// `[A] + [B] = [A, B]` by the polygon lemma.
pub fn polygon_lemma(a: &StepSequence, b: &StepSequence) -> Option<PolygonMatch> {
    let (x, y) = (a.entries(), b.entries());
    if x.is_empty() || y.len() < 2 || !positive(x) || !positive(y) {
        return None;
    }
    let candidates: Vec<i64> = if y.len() > 2 { vec![y[1]] } else { (1..=y[1]).collect() };
    for av in candidates {
        let Some((q, d)) = ladder(y, av) else { continue };
        let Some(bl) = blocks(x, av, d > 0) else { continue };
        if bl.iter().all(|&(p, c)| p <= q && d <= c) {
            return Some(PolygonMatch { a: av, blocks: bl, q, d });
        }
    }
    None
}

/// The reduced representative of `[a] + [b]` when a sum lemma applies in
/// either order.
pub fn lemma_sum(a: &StepSequence, b: &StepSequence) -> Option<(StepSequence, SumLemma)> {
    for (x, y) in [(a, b), (b, a)] {
        if box_lemma(x, y) {
            return Some((x.concat(y), SumLemma::Box));
        }
        if let Some(m) = polygon_lemma(x, y) {
            return Some((x.concat(y), SumLemma::Polygon(m)));
        }
    }
    None
}

/// `[a] >> [b]` by the first ordering lemma.
pub fn order_i(a: &StepSequence, b: &StepSequence) -> bool {
    let (a, b) = (a.entries(), b.entries());
    if a.is_empty() || b.is_empty() || !positive(a) || !positive(b) {
        return false;
    }
    b[0] > a[0] || (b[0] == a[0] && a.len() > 1 && b.len() > 1 && b[1] < a[1])
}

/// `[(1,a)^p, 1, a+c] >> [(1,a)^q, 1, a+d]` by the second ordering lemma.
pub fn order_j(x: &StepSequence, y: &StepSequence) -> Option<OrderJMatch> {
    let (xs, ys) = (x.entries(), y.entries());
    if xs.len() < 2 || ys.len() < 2 {
        return None;
    }
    let mut candidates = vec![];
    if xs.len() > 2 {
        candidates.push(xs[1]);
    }
    if ys.len() > 2 {
        candidates.push(ys[1]);
    }
    if candidates.is_empty() {
        candidates.push(1);
    }
    candidates.into_iter().filter(|&a| a > 0).find_map(|a| {
        let (p, c) = ladder(xs, a)?;
        let (q, d) = ladder(ys, a)?;
        (c > 0 && (q > p || (q == p && d < c))).then_some(OrderJMatch { a, p, c, q, d })
    })
}

/// Splits a positive sequence into summands using the sum lemmas at the
/// earliest even cut that works, recursively. Other sequences are returned
/// whole.
pub fn atoms(s: &StepSequence) -> Vec<StepSequence> {
    let e = s.entries();
    if !s.is_positive() || e.len() < 2 {
        return if s.is_empty() { vec![] } else { vec![s.clone()] };
    }
    for k in (2..e.len()).step_by(2) {
        let (l, r) = (StepSequence::new(e[..k].to_vec()), StepSequence::new(e[k..].to_vec()));
        if box_lemma(&l, &r) || polygon_lemma(&l, &r).is_some() {
            let mut out = atoms(&l);
            out.extend(atoms(&r));
            return out;
        }
    }
    vec![s.clone()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> StepSequence {
        StepSequence::new(v.to_vec())
    }

    #[test]
    fn box_examples() {
        assert!(box_lemma(&s(&[1, 3]), &s(&[2])));
        assert!(box_lemma(&s(&[1, 3]), &s(&[1, 3, 3])));
        assert!(!box_lemma(&s(&[1, 3]), &s(&[4])));
        assert!(!box_lemma(&s(&[1, 3, 2]), &s(&[2])));
        assert_eq!(lemma_sum(&s(&[2]), &s(&[1, 3])).unwrap().0, s(&[1, 3, 2]));
    }

    #[test]
    fn polygon_examples() {
        let m = polygon_lemma(&s(&[1, 1, 1, 3]), &s(&[1, 1, 1, 1, 1, 2])).unwrap();
        assert_eq!(m, PolygonMatch { a: 1, blocks: vec![(1, 2)], q: 2, d: 1 });
        // q < p
        assert!(polygon_lemma(&s(&[1, 1, 1, 1, 1, 3]), &s(&[1, 1, 1, 2])).is_none());
        // d > c
        assert!(polygon_lemma(&s(&[1, 2]), &s(&[1, 1, 1, 3])).is_none());
        // d = 0 takes the finest segmentation
        assert!(polygon_lemma(&s(&[1, 1, 1, 3]), &s(&[1, 1])).is_some());
        assert!(polygon_lemma(&s(&[1, 5]), &s(&[1, 1, 1, 3])).is_some());
    }

    #[test]
    fn order_examples() {
        assert!(order_i(&s(&[1, 2]), &s(&[2, 2])));
        assert!(order_i(&s(&[1, 3]), &s(&[1, 2])));
        assert!(!order_i(&s(&[1, 2]), &s(&[1, 2])));
        let m = order_j(&s(&[1, 1, 1, 2]), &s(&[1, 1, 1, 1, 1, 2])).unwrap();
        assert_eq!((m.a, m.p, m.q), (1, 1, 2));
        assert!(order_j(&s(&[1, 1, 1, 1, 1, 2]), &s(&[1, 1, 1, 2])).is_none());
        assert!(order_j(&s(&[1, 3]), &s(&[1, 2])).is_some());
    }

    #[test]
    fn atom_splits() {
        assert_eq!(atoms(&s(&[1, 5, 1, 1, 1, 3])), vec![s(&[1, 5]), s(&[1, 1, 1, 3])]);
        assert_eq!(atoms(&s(&[1, 5, 2, 4, 3])), vec![s(&[1, 5]), s(&[2, 4]), s(&[3])]);
        assert_eq!(atoms(&s(&[2, 2])), vec![s(&[2, 2])]);
        assert!(atoms(&StepSequence::empty()).is_empty());
    }
}
