use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive parts; trailing zeros are
/// dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidParameter(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition((0..width).map(|j| self.0.iter().filter(|&&p| p > j).count()).collect())
    }

    /// Hook length of box `(i, j)` (0-based).
    fn hook(&self, i: usize, j: usize, conj: &Partition) -> usize {
        (self.0[i] - j - 1) + (conj.0[j] - i - 1) + 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `dim S_pi(C^n)` by the hook-content formula; zero when `pi` has more
/// than `n` parts.
pub fn dim_gl(pi: &Partition, n: usize) -> BigInt {
    if pi.len() > n {
        return BigInt::zero();
    }
    let conj = pi.conjugate();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, &row) in pi.parts().iter().enumerate() {
        for j in 0..row {
            num *= BigInt::from(n + j - i);
            den *= BigInt::from(pi.hook(i, j, &conj));
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    q
}
