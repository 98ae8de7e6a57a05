//! Dense bit-packed linear algebra over F2: rank, span membership, kernels.

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, on: bool) {
        if self.get(i) != on {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

/// Incrementally reduced basis of a subspace, keyed by lowest set bit.
#[derive(Clone, Debug)]
pub struct Reducer {
    len: usize,
    pivots: Vec<Option<BitVec>>,
    rank: usize,
}

impl Reducer {
    pub fn new(len: usize) -> Self {
        Self { len, pivots: vec![None; len], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut BitVec) {
        while let Some(p) = v.lowest() {
            match &self.pivots[p] {
                Some(b) => v.xor_assign(b),
                None => return,
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(&mut v);
        match v.lowest() {
            Some(p) => {
                self.pivots[p] = Some(v);
                self.rank += 1;
                true
            }
            None => false,
        }
    }
}

/// Rank of the matrix whose columns are given as sets of row indices.
pub fn rank_of_columns(nrows: usize, cols: &[Vec<usize>]) -> usize {
    let mut r = Reducer::new(nrows);
    for c in cols {
        r.insert(BitVec::from_indices(nrows, c.iter().copied()));
    }
    r.rank()
}

/// A basis of the kernel of the map sending basis vector `k` of the domain to
/// `cols[k]` in a space of dimension `nrows`.
pub fn kernel(nrows: usize, cols: &[Vec<usize>]) -> Vec<BitVec> {
    let ncols = cols.len();
    // Each entry: (image, combination of domain vectors producing it).
    let mut pivots: Vec<Option<(BitVec, BitVec)>> = vec![None; nrows];
    let mut out = Vec::new();
    for (k, c) in cols.iter().enumerate() {
        let mut img = BitVec::from_indices(nrows, c.iter().copied());
        let mut comb = BitVec::from_indices(ncols, [k]);
        loop {
            match img.lowest() {
                None => {
                    out.push(comb);
                    break;
                }
                Some(p) => match &pivots[p] {
                    Some((bi, bc)) => {
                        img.xor_assign(bi);
                        comb.xor_assign(bc);
                    }
                    None => {
                        pivots[p] = Some((img, comb));
                        break;
                    }
                },
            }
        }
    }
    out
}

/// A set of columns summing to `rhs`, if `rhs` lies in their span.
pub fn solve(nrows: usize, cols: &[Vec<usize>], rhs: &[usize]) -> Option<BitVec> {
    let ncols = cols.len();
    let mut pivots: Vec<Option<(BitVec, BitVec)>> = vec![None; nrows];
    for (k, c) in cols.iter().enumerate() {
        let mut img = BitVec::from_indices(nrows, c.iter().copied());
        let mut comb = BitVec::from_indices(ncols, [k]);
        while let Some(p) = img.lowest() {
            match &pivots[p] {
                Some((bi, bc)) => {
                    img.xor_assign(bi);
                    comb.xor_assign(bc);
                }
                None => {
                    pivots[p] = Some((img, comb));
                    break;
                }
            }
        }
    }
    let mut v = BitVec::from_indices(nrows, rhs.iter().copied());
    let mut comb = BitVec::zeros(ncols);
    while let Some(p) = v.lowest() {
        let (bi, bc) = pivots[p].as_ref()?;
        v.xor_assign(bi);
        comb.xor_assign(bc);
    }
    Some(comb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        // columns e0+e1, e1+e2, e0+e2 are dependent over F2
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        assert_eq!(rank_of_columns(3, &cols), 2);
        let ker = kernel(3, &cols);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn reducer_membership() {
        let mut r = Reducer::new(130);
        assert!(r.insert(BitVec::from_indices(130, [3, 129])));
        assert!(r.insert(BitVec::from_indices(130, [129])));
        assert!(r.contains(&BitVec::from_indices(130, [3])));
        assert!(!r.contains(&BitVec::from_indices(130, [4])));
        assert!(!r.insert(BitVec::from_indices(130, [3, 129])));
        assert_eq!(r.rank(), 2);
    }

    #[test]
    fn solve_small() {
        let cols = vec![vec![0, 1], vec![1, 2], vec![0]];
        let x = solve(3, &cols, &[2]).unwrap();
        let mut acc = BitVec::zeros(3);
        for k in x.ones() {
            acc.xor_assign(&BitVec::from_indices(3, cols[k].iter().copied()));
        }
        assert_eq!(acc.ones().collect::<Vec<_>>(), vec![2]);
        assert!(solve(2, &[vec![0, 1]], &[0]).is_none());
    }
}
