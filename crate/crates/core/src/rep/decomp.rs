//! Three multiplicity-free decompositions of GL(V)-modules:
//!
//! - `L^2(S^s V) = sum_{j odd, j <= s} S_{2s-j, j} V`
//! - `L^a V (x) L^b V = sum_{v <= min(a,b)} S_{(a+b-v, v)'} V`
//! - `S_{a1,a2} V (x) S_b V = sum S_{a1+rho, a2+sigma, b-rho-sigma} V` over
//!   `sigma <= a1 - a2` and `b - rho - sigma <= a2` (Pieri)

use num_bigint::BigInt;

use super::partition::{dim_gl, Partition};
use crate::error::{Error, Result};
use crate::subset::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompKind {
    Wedge2Sym { s: usize },
    WedgeWedge { a: usize, b: usize },
    PieriTwoRow { a1: usize, a2: usize, b: usize },
}

/// The summands on the right-hand side, dropping those with more than `n`
/// rows (they vanish on `C^n`).
pub fn decomp_identity(kind: DecompKind, n: usize) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    match kind {
        DecompKind::Wedge2Sym { s } => {
            if s == 0 {
                return Err(Error::InvalidParameter("need s >= 1".into()));
            }
            for j in (1..=s).step_by(2) {
                out.push(Partition::new(vec![2 * s - j, j])?);
            }
        }
        DecompKind::WedgeWedge { a, b } => {
            for v in 0..=a.min(b) {
                out.push(Partition::new(vec![a + b - v, v])?.conjugate());
            }
        }
        DecompKind::PieriTwoRow { a1, a2, b } => {
            if a1 < a2 {
                return Err(Error::InvalidParameter(format!("({a1},{a2}) is not a partition")));
            }
            for sigma in 0..=(a1 - a2).min(b) {
                for rho in 0..=(b - sigma) {
                    let tau = b - rho - sigma;
                    if tau <= a2 {
                        out.push(Partition::new(vec![a1 + rho, a2 + sigma, tau])?);
                    }
                }
            }
        }
    }
    out.retain(|p| p.len() <= n);
    Ok(out)
}

/// Dimension of the left-hand side on `C^n`, computed without partitions
/// where possible.
pub fn lhs_dimension(kind: DecompKind, n: usize) -> Result<BigInt> {
    Ok(match kind {
        DecompKind::Wedge2Sym { s } => {
            if s == 0 {
                return Err(Error::InvalidParameter("need s >= 1".into()));
            }
            let d = binomial(n + s - 1, s);
            BigInt::from(binomial(d, 2))
        }
        DecompKind::WedgeWedge { a, b } => BigInt::from(binomial(n, a)) * BigInt::from(binomial(n, b)),
        DecompKind::PieriTwoRow { a1, a2, b } => {
            let base = Partition::new(vec![a1, a2])?;
            dim_gl(&base, n) * BigInt::from(binomial(n + b - 1, b))
        }
    })
}

/// Checks that the dimensions of both sides agree.
pub fn verify_decomp_dims(kind: DecompKind, n: usize) -> Result<bool> {
    let rhs: BigInt = decomp_identity(kind, n)?.iter().map(|p| dim_gl(p, n)).sum();
    Ok(rhs == lhs_dimension(kind, n)?)
}
