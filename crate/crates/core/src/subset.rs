//! k-subsets of a ground set, in colexicographic order, and shuffle signs.
//!
//! Every exterior-power index in the crate uses this ordering: subsets are
//! compared by their largest element first, so the k-subsets of `{0..n}`
//! begin with `{0..k}` and the subsets of `{0..m}` form a prefix of the
//! subsets of `{0..n}` for `m < n`.

use crate::error::{Error, Result};

/// Binomial coefficient in machine integers (0 when `k > n`).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// A strictly increasing subset of `{0, .., ground - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    elements: Vec<usize>,
    ground: usize,
}

impl SubsetIndex {
    pub fn new(elements: Vec<usize>, ground: usize) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "subset {elements:?} is not strictly increasing"
            )));
        }
        if elements.last().is_some_and(|&m| m >= ground) {
            return Err(Error::IndexOutOfRange(format!(
                "subset {elements:?} exceeds ground set of size {ground}"
            )));
        }
        Ok(SubsetIndex { elements, ground })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position in the colex order of all subsets of the same size.
    pub fn colex_rank(&self) -> usize {
        colex_rank(&self.elements)
    }
}

/// Colex position of a strictly increasing sequence: `sum_i C(e_i, i + 1)`.
pub fn colex_rank(elements: &[usize]) -> usize {
    elements.iter().enumerate().map(|(i, &e)| binomial(e, i + 1)).sum()
}

/// All k-subsets of `{0..n}` in colex order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    for top in (k - 1)..n {
        for mut head in subsets(top, k - 1) {
            head.push(top);
            out.push(head);
        }
    }
    out
}

/// Sign of the shuffle that sorts the concatenation `(I, J)`, as `+1`/`-1`.
///
/// `I` and `J` must be disjoint; each inversion pair `i > j` with `i` in `I`
/// and `j` in `J` contributes a factor `-1`.
pub fn shuffle_sign(i: &[usize], j: &[usize]) -> Result<i8> {
    let mut inversions = 0usize;
    for &x in i {
        for &y in j {
            if x == y {
                return Err(Error::OverlappingSubsets(i.to_vec(), j.to_vec()));
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    Ok(if inversions.is_multiple_of(2) { 1 } else { -1 })
}

/// Splits of a sorted set `p` into `(I, J)` with `|I| = k`, together with
/// `shuffle_sign(I, J)`, with `I` running through the k-subsets of `p` in
/// colex order of positions.
pub fn signed_splits(p: &[usize], k: usize) -> Vec<(Vec<usize>, Vec<usize>, i8)> {
    subsets(p.len(), k)
        .into_iter()
        .map(|pos| {
            let first: Vec<usize> = pos.iter().map(|&q| p[q]).collect();
            let second: Vec<usize> = p.iter().copied().filter(|x| !first.contains(x)).collect();
            let sign = shuffle_sign(&first, &second).expect("disjoint by construction");
            (first, second, sign)
        })
        .collect()
}
