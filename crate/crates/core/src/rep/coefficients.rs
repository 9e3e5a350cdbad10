//! Closed-form sums for the coefficient of the preferred monomial in the
//! highest weight vector of the `(r, s)` module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

fn fact(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n! / k!` for `k <= n`.
fn falling(n: usize, k: usize) -> BigInt {
    ((k + 1)..=n).fold(BigInt::one(), |acc, x| acc * BigInt::from(x))
}

fn multinomial(parts: &[usize]) -> BigInt {
    let n: usize = parts.iter().sum();
    parts.iter().fold(fact(n), |acc, &p| acc / fact(p))
}

/// The summands of `T_{s, r-2s}` over compositions `a2 + a3 + a5 = s`:
///
/// ```text
/// (-1)^{a2 + (s + a2)(r - s + a2)} C(s; a)^2 (r - 2s + a2)! a3! a5! a5! (a2 + a3)! a3! (a2 + a5)!
/// ```
///
/// with `C(s; a)` the multinomial coefficient `s! / (a2! a3! a5!)`, which
/// counts the tuples of permutations in the symmetrizer giving each
/// composition.
pub fn theta_summands(r: usize, s: usize) -> Result<Vec<BigInt>> {
    if 2 * s > r {
        return Err(Error::InvalidParameter(format!("need 2s <= r, got r = {r}, s = {s}")));
    }
    let mut out = Vec::new();
    for a2 in 0..=s {
        for a3 in 0..=(s - a2) {
            let a5 = s - a2 - a3;
            let m = multinomial(&[a2, a3, a5]);
            let mag = &m
                * &m
                * fact(r - 2 * s + a2)
                * fact(a3)
                * fact(a5)
                * fact(a5)
                * fact(a2 + a3)
                * fact(a3)
                * fact(a2 + a5);
            let odd = (a2 + (s + a2) * (r - s + a2)) % 2 == 1;
            out.push(if odd { -mag } else { mag });
        }
    }
    Ok(out)
}

/// `T_{s, r-2s}`, the sum of [`theta_summands`].
pub fn theta_coefficient(r: usize, s: usize) -> Result<BigInt> {
    Ok(theta_summands(r, s)?.into_iter().sum())
}

/// `(s!)^2 sum_{a+b+c=s} (r-2s+a)! (a+b)! (a+c)! / (a! a!)`: the same
/// terms as the alternating Lemma sum, all taken positive.
pub fn theta_unsigned(r: usize, s: usize) -> Result<BigInt> {
    if 2 * s > r {
        return Err(Error::InvalidParameter(format!("need 2s <= r, got r = {r}, s = {s}")));
    }
    let f = fact(s);
    Ok(&f * &f * t_value_unsigned(s, r - 2 * s))
}

fn lemma_terms(s: usize, t: usize) -> impl Iterator<Item = (usize, BigInt)> {
    (0..=s).flat_map(move |a| {
        (0..=(s - a)).map(move |b| {
            let c = s - a - b;
            (a, fact(a + t) * falling(a + b, a) * falling(a + c, a))
        })
    })
}

/// `sum_{a+b+c=s} (-1)^a (a+t)! (a+b)! (a+c)! / (a! a!)`.
pub fn t_value_raw(s: usize, t: usize) -> BigInt {
    lemma_terms(s, t).map(|(a, v)| if a % 2 == 1 { -v } else { v }).sum()
}

/// The Lemma sum with every sign taken positive.
pub fn t_value_unsigned(s: usize, t: usize) -> BigInt {
    lemma_terms(s, t).map(|(_, v)| v).sum()
}

/// `T_{s,t} = t_value_raw(s, t) / (s!)^2`; fails when the division is not
/// exact.
pub fn t_value_lemma(s: usize, t: usize) -> Result<BigInt> {
    let raw = t_value_raw(s, t);
    let f = fact(s);
    let (q, rem) = raw.div_rem(&(&f * &f));
    if !rem.is_zero() {
        return Err(Error::InexactNormalization {
            s,
            t,
            raw: raw.to_string(),
        });
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// The `(a2, a3, a5)` closed form.
    BinomialForm,
    /// The alternating Lemma sum (before division by `(s!)^2`).
    LemmaForm,
    /// Direct expansion of the symmetrized vector.
    ExpansionOracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientReport {
    pub s: usize,
    pub t: usize,
    pub value: String,
    pub zero: bool,
    pub formula: Formula,
    /// `value / (s!)^2` when the division is exact (Lemma form only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<String>,
    /// Whether the cell lies where a nonzero value is claimed.
    pub expected_nonzero: bool,
}

impl CoefficientReport {
    /// A zero where a nonzero value is claimed.
    pub fn unexpected_zero(&self) -> bool {
        self.zero && self.expected_nonzero
    }
}

/// The Lemma sums for all odd `s <= s_max`, odd `t <= t_max`. Cells with
/// `t >= s` other than `(1, 1)` are the claimed nonzero range; `(1, 1)`
/// and `t < s` are reported without a claim.
pub fn lemma_table(s_max: usize, t_max: usize) -> Vec<CoefficientReport> {
    let mut out = Vec::new();
    for s in (1..=s_max).step_by(2) {
        for t in (1..=t_max).step_by(2) {
            let raw = t_value_raw(s, t);
            let normalized = t_value_lemma(s, t).ok().map(|v| v.to_string());
            out.push(CoefficientReport {
                s,
                t,
                zero: raw.is_zero(),
                value: raw.to_string(),
                formula: Formula::LemmaForm,
                normalized,
                expected_nonzero: t >= s && (s, t) != (1, 1),
            });
        }
    }
    out
}

/// `T_{s, r-2s}` for every even `r <= r_max` and odd `s <= r/2`, each with
/// a check that all summands share one sign.
pub fn theta_even_sweep(r_max: usize) -> Vec<(CoefficientReport, bool)> {
    let mut out = Vec::new();
    for r in (2..=r_max).step_by(2) {
        for s in (1..=r / 2).step_by(2) {
            let terms = theta_summands(r, s).expect("2s <= r");
            let uniform = terms.iter().all(|x| x.is_negative()) || terms.iter().all(|x| x.is_positive());
            let value: BigInt = terms.iter().sum();
            out.push((
                CoefficientReport {
                    s,
                    t: r - 2 * s,
                    zero: value.is_zero(),
                    value: value.to_string(),
                    formula: Formula::BinomialForm,
                    normalized: None,
                    expected_nonzero: true,
                },
                uniform,
            ));
        }
    }
    out
}
