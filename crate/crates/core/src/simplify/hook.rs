//! Epsilon from the maps between the column `{i = 0}` and the two hooks
//! `{min(i, j - τ) = 0}` and `{max(i, j - τ) = 0}` of the U-translated complex.
//! Needs no simultaneously simplified basis.

use std::collections::HashMap;

use super::tau;
use crate::complex::BifilteredComplex;
use crate::error::{Error, Result};
use crate::linalg::{kernel, BitVec, Reducer};

/// The translates `U^k x` (at `(i - k, j - k)`) inside a region that is a
/// difference of two down-closed sets, with the induced differential.
struct Region {
    cells: Vec<(usize, i64)>,
    index: HashMap<(usize, i64), usize>,
    boundary: Vec<Vec<usize>>,
}

impl Region {
    fn new(c: &BifilteredComplex, inside: impl Fn(i64, i64) -> bool, shifts: impl Fn(usize) -> Vec<i64>) -> Self {
        let mut cells = Vec::new();
        let mut index = HashMap::new();
        for x in 0..c.len() {
            let g = c.generator(x);
            for k in shifts(x) {
                if inside(g.i - k, g.j - k) && !index.contains_key(&(x, k)) {
                    index.insert((x, k), cells.len());
                    cells.push((x, k));
                }
            }
        }
        let boundary = cells
            .iter()
            .map(|&(x, k)| c.targets(x).iter().filter_map(|&y| index.get(&(y, k)).copied()).collect())
            .collect();
        Self { cells, index, boundary }
    }

    fn len(&self) -> usize {
        self.cells.len()
    }

    fn cycles(&self) -> Vec<BitVec> {
        kernel(self.len(), &self.boundary)
    }

    fn boundaries(&self) -> Reducer {
        let mut r = Reducer::new(self.len());
        for col in &self.boundary {
            r.insert(BitVec::from_indices(self.len(), col.iter().copied()));
        }
        r
    }

    /// Pushes a chain forward to `to`, dropping cells outside it.
    fn push(&self, v: &BitVec, to: &Region) -> BitVec {
        BitVec::from_indices(to.len(), v.ones().filter_map(|n| to.index.get(&self.cells[n]).copied()))
    }
}

/// Whether every cycle of `from` maps to a boundary of `to`.
fn trivial_on_homology(from: &Region, to: &Region) -> bool {
    let b = to.boundaries();
    from.cycles().iter().all(|z| b.contains(&from.push(z, to)))
}

pub fn epsilon_hook(c: &BifilteredComplex) -> Result<i64> {
    let t = tau(c)?;
    let shifts = |x: usize| {
        let g = c.generator(x);
        vec![g.i, g.j - t]
    };
    let column = Region::new(c, |i, _| i == 0, shifts);
    let min_hook = Region::new(c, |i, j| i.min(j - t) == 0, shifts);
    let max_hook = Region::new(c, |i, j| i.max(j - t) == 0, shifts);
    let f_zero = trivial_on_homology(&column, &min_hook);
    let g_zero = trivial_on_homology(&max_hook, &column);
    match (f_zero, g_zero) {
        (true, true) => Err(Error::Invariant("both hook maps vanish on homology".into())),
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (false, false) => Ok(0),
    }
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
    fn small_cases() {
        assert_eq!(epsilon_hook(&stair(&[1])).unwrap(), 1);
        assert_eq!(epsilon_hook(&stair(&[1]).dual()).unwrap(), -1);
        assert_eq!(epsilon_hook(&BifilteredComplex::unknot()).unwrap(), 0);
        let c = stair(&[1, 2]);
        assert_eq!(epsilon_hook(&c.tensor(&c.dual())).unwrap(), 0);
        assert_eq!(epsilon_hook(&stair(&[1, 3]).tensor(&stair(&[1, 2]).dual())).unwrap(), 1);
    }
}
