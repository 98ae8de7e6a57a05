use serde::Serialize;

use std::collections::HashMap;

use super::{apply, check_change, simultaneous_simplify_with, BasisChange, Outcome, Simplified};
use crate::complex::{ArrowKind, BifilteredComplex};
use crate::error::{Error, Result};
use crate::linalg::{solve, BitVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "shape", content = "generators", rename_all = "lowercase")]
pub enum SummandKind {
    Box,
    /// Closed alternating horizontal/vertical cycle on this many generators.
    Polygon(usize),
    Other,
}

#[derive(Clone, Debug)]
pub struct SummandDecomposition {
    pub core: BifilteredComplex,
    pub acyclics: Vec<(BifilteredComplex, SummandKind)>,
}

impl SummandDecomposition {
    pub fn count(&self, kind: SummandKind) -> usize {
        self.acyclics.iter().filter(|(_, k)| *k == kind).count()
    }

    pub fn kinds(&self) -> Vec<SummandKind> {
        self.acyclics.iter().map(|(_, k)| *k).collect()
    }
}

fn components(c: &BifilteredComplex, with_diagonals: bool) -> Vec<Vec<usize>> {
    let n = c.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (s, t) in c.arrows() {
        if !with_diagonals && c.kind(s, t) == ArrowKind::Diagonal {
            continue;
        }
        let (a, b) = (find(&mut parent, s), find(&mut parent, t));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 0..n {
        let r = find(&mut parent, k);
        groups[r].push(k);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

fn classify(c: &BifilteredComplex) -> SummandKind {
    if c.len() == 4 {
        return SummandKind::Box;
    }
    let n = c.len();
    let mut h = vec![Vec::new(); n];
    let mut v = vec![Vec::new(); n];
    for (s, t) in c.arrows() {
        match c.kind(s, t) {
            ArrowKind::Horizontal => {
                h[s].push(t);
                h[t].push(s);
            }
            ArrowKind::Vertical => {
                v[s].push(t);
                v[t].push(s);
            }
            ArrowKind::Diagonal => {}
        }
    }
    if n % 4 != 0 || (0..n).any(|k| h[k].len() != 1 || v[k].len() != 1) {
        return SummandKind::Other;
    }
    // walk the alternating cycle from generator 0
    let (mut cur, mut steps, mut horizontal) = (0, 0, true);
    loop {
        cur = if horizontal { h[cur][0] } else { v[cur][0] };
        horizontal = !horizontal;
        steps += 1;
        if cur == 0 && horizontal {
            break;
        }
    }
    if steps == n {
        SummandKind::Polygon(n)
    } else {
        SummandKind::Other
    }
}

/// Finds a filtered `h` with `(1 + h) D = D0 (1 + h)`, where `D0` is `D`
/// without the arrows between distinct blocks. Entries are `(a, b)` with
/// `h_{a,b} = 1`, `a` at or below `b`.
fn homotopy(c: &BifilteredComplex, block_of: &[usize]) -> Option<Vec<(usize, usize)>> {
    let n = c.len();
    let unknowns: Vec<(usize, usize)> =
        (0..n).flat_map(|b| (0..n).map(move |a| (a, b))).filter(|&(a, b)| check_change(c, b, a).is_ok()).collect();
    let mut eq: HashMap<(usize, usize), usize> = HashMap::new();
    let mut row = |t: usize, w: usize| -> usize {
        let k = eq.len();
        *eq.entry((t, w)).or_insert(k)
    };
    let cols: Vec<Vec<usize>> = unknowns
        .iter()
        .map(|&(a, b)| {
            let mut rows: Vec<usize> = c.sources(b).iter().map(|&w| row(a, w)).collect();
            rows.extend(c.targets(a).iter().filter(|&&t| block_of[t] == block_of[a]).map(|&t| row(t, b)));
            rows
        })
        .collect();
    let rhs: Vec<usize> =
        c.arrows().into_iter().filter(|&(w, t)| block_of[w] != block_of[t]).map(|(w, t)| row(t, w)).collect();
    let comb = solve(eq.len(), &cols, &rhs)?;
    Some(comb.ones().map(|k| unknowns[k]).collect())
}

/// Factors the filtered automorphism `1 + h` into elementary changes
/// `(n, l)`, meaning `n -> n + l`, by column reduction one filtration level at
/// a time. Applied in order they carry `D` to `(1 + h) D (1 + h)^-1`.
fn factor(c: &BifilteredComplex, h: &[(usize, usize)]) -> Option<Vec<(usize, usize)>> {
    let n = c.len();
    let mut cols: Vec<BitVec> = (0..n).map(|k| BitVec::from_indices(n, [k])).collect();
    for &(a, b) in h {
        cols[b].flip(a);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&k| {
        let g = c.generator(k);
        (g.i + g.j, g.i, g.j)
    });
    let mut ops = Vec::new();
    let mut add = |cols: &mut Vec<BitVec>, dst: usize, src: usize| {
        let v = cols[src].clone();
        cols[dst].xor_assign(&v);
        ops.push((dst, src));
    };
    let mut start = 0;
    while start < n {
        let fl = c.generator(order[start]).fl();
        let end = start + order[start..].iter().take_while(|&&k| c.generator(k).fl() == fl).count();
        let group = &order[start..end];
        let inside = |k: usize| group.contains(&k);
        for &b in group {
            let below: Vec<usize> = cols[b].ones().filter(|&a| !inside(a)).collect();
            for a in below {
                add(&mut cols, b, a);
            }
        }
        for &g in group {
            if !cols[g].get(g) {
                let k = group.iter().copied().find(|&k| k != g && cols[k].get(g))?;
                add(&mut cols, g, k);
            }
            for &j in group {
                if j != g && cols[j].get(g) {
                    add(&mut cols, j, g);
                }
            }
        }
        start = end;
    }
    Some(ops)
}

/// Removes the arrows between components of the horizontal/vertical arrow
/// graph by filtered changes of basis. Returns false if they cannot all be
/// cancelled.
fn split_blocks(s: &mut Simplified) -> bool {
    let c = &s.complex;
    let blocks = components(c, false);
    let mut block_of = vec![0; c.len()];
    for (b, g) in blocks.iter().enumerate() {
        for &k in g {
            block_of[k] = b;
        }
    }
    let target: Vec<(usize, usize)> = c.arrows().into_iter().filter(|&(a, b)| block_of[a] == block_of[b]).collect();
    if target.len() == c.arrow_count() {
        return true;
    }
    let Some(ops) = homotopy(c, &block_of).and_then(|h| factor(c, &h)) else { return false };
    let mut next = s.complex.clone();
    for &(n, l) in &ops {
        if check_change(&next, n, l).is_err() {
            return false;
        }
        apply(&mut next, n, l);
    }
    if next.arrows() != target {
        return false;
    }
    for (n, l) in ops {
        s.log.push(BasisChange { n: next.generator(n).id.clone(), l: next.generator(l).id.clone() });
    }
    s.complex = next;
    true
}

/// Splits a simultaneously simplified complex into its core summand, holding
/// the distinguished element, and acyclic summands. Diagonal arrows between
/// summands are first removed by changes of basis, which are appended to the
/// log of the returned basis.
pub fn decompose(s: &Simplified) -> Result<Outcome<(SummandDecomposition, Simplified)>> {
    let mut s = s.clone();
    if !split_blocks(&mut s) {
        return Ok(Outcome::Undecided("diagonal arrows between summands could not be removed".into()));
    }
    let c = &s.complex;
    let mut core = None;
    let mut acyclics = Vec::new();
    for comp in components(c, true) {
        let mut sub = c.induced(&comp);
        sub.pin_grading(0);
        if comp.contains(&s.distinguished) {
            if sub.homology_rank() != 1 {
                return Err(Error::Invariant(format!("core summand has homology rank {}", sub.homology_rank())));
            }
            core = Some(sub);
        } else {
            let rank = sub.homology_rank();
            if rank != 0 {
                return Err(Error::Invariant(format!(
                    "summand containing {} is not acyclic (homology rank {rank})",
                    sub.generator(0).id
                )));
            }
            let kind = classify(&sub);
            acyclics.push((sub, kind));
        }
    }
    let core = core.ok_or_else(|| Error::Invariant("no component contains the distinguished element".into()))?;
    Ok(Outcome::Decided((SummandDecomposition { core, acyclics }, s)))
}

/// Simplifies and then decomposes.
pub fn decompose_complex(c: &BifilteredComplex) -> Result<Outcome<SummandDecomposition>> {
    simultaneous_simplify_with(c, |s| Ok(decompose(&s)?.decided().map(|(d, _)| d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::staircase_from_steps;
    use crate::seq::StepSequence;
    use crate::simplify::simultaneous_simplify;

    fn stair(v: &[i64]) -> BifilteredComplex {
        staircase_from_steps(&StepSequence::new(v.to_vec())).unwrap()
    }

    #[test]
    fn staircase_is_all_core() {
        let d = decompose_complex(&stair(&[1, 2])).unwrap().decided().unwrap();
        assert!(d.acyclics.is_empty());
        assert_eq!(d.core.len(), 5);
    }

    #[test]
    fn box_tensor_splits() {
        let d = decompose_complex(&stair(&[1, 3]).tensor(&stair(&[2]))).unwrap().decided().unwrap();
        assert_eq!(d.core.len(), 7);
        assert_eq!(d.kinds(), vec![SummandKind::Box, SummandKind::Box]);
        assert_eq!(d.core.arrow_kind_counts(), (3, 3, 0));
    }

    #[test]
    fn split_log_replays() {
        let t = stair(&[1, 3]).tensor(&stair(&[2]));
        let s = simultaneous_simplify(&t).unwrap().decided().unwrap();
        let (_, split) = decompose(&s).unwrap().decided().unwrap();
        assert_eq!(super::super::replay(&t, &split.log).unwrap(), split.complex);
        assert!(split.complex.arrows_of_kind(ArrowKind::Diagonal).is_empty());
    }

    #[test]
    fn polygons_split_with_replayable_log() {
        let t = stair(&[1, 2, 1, 2, 1, 4]).tensor(&stair(&[1, 2, 1, 2, 1, 3]));
        let s = simultaneous_simplify(&t).unwrap().decided().unwrap();
        let (d, split) = decompose(&s).unwrap().decided().unwrap();
        assert_eq!(super::super::replay(&t, &split.log).unwrap(), split.complex);
        assert_eq!(d.count(SummandKind::Polygon(12)), 2);
        assert_eq!(d.count(SummandKind::Other), 0);
        assert_eq!(d.core.len(), 25);
    }
}
