//! Direct expansion of the symmetrized highest weight vector and extraction
//! of the preferred monomial's coefficient.
//!
//! The A-part is `Theta = sum_{sigma_1..sigma_s in S_3} eps(sigma_1)..eps(sigma_s)
//! (e_1^{r-2s} prod e_{sigma_i(1)}) (x) (prod e_{sigma_i(2)}) (x) (prod e_{sigma_i(3)})`
//! in `S^{r-s}A (x) S^sA (x) S^sA`. It is paired with `f_1 ^ .. ^ f_s` and
//! `g_1 ^ .. ^ g_s` on the second and third factors, the `L^r` highest
//! weight vectors `f_1 ^ .. ^ f_r`, `g_1 ^ .. ^ g_r` are split as
//! `sum_I eps(I, I^) f_I (x) f_{I^}`, and each of the three resulting
//! groups `(word, f's, g's)` is sent to
//! `sum_{arrangements of the word} sum_{sigma} eps(sigma) prod_l e f_l g_{sigma(l)}`.
//! The preferred monomial is the product of the letters `e_1 f_k g_k`
//! (`k <= r-s`), `e_2 f_k g_{r+1-k}` and `e_3 f_{r+1-k} g_k` (`k <= s`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::coefficients::theta_coefficient;
use crate::error::{Error, Result};
use crate::subset::{shuffle_sign, subsets};

/// Largest `r + s` the expansion accepts.
pub const THETA_ORACLE_GUARD: usize = 12;

const PERMS: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([0, 2, 1], -1),
    ([1, 0, 2], -1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([2, 1, 0], -1),
];

type Word = [usize; 3];

/// The expansion of `Theta` as word-count triples with integer coefficients.
fn expand_theta(r: usize, s: usize) -> BTreeMap<[Word; 3], i64> {
    let mut out = BTreeMap::new();
    let total = 6usize.pow(s as u32);
    for code in 0..total {
        let mut c = code;
        let mut sign = 1;
        let mut w = [[0usize; 3]; 3];
        w[0][0] = r - 2 * s;
        for _ in 0..s {
            let (p, e) = PERMS[c % 6];
            c /= 6;
            sign *= e;
            for pos in 0..3 {
                w[pos][p[pos]] += 1;
            }
        }
        *out.entry(w).or_insert(0) += sign;
    }
    out.retain(|_, v| *v != 0);
    out
}

#[derive(Clone, Copy)]
struct Letter {
    e: usize,
    f: usize,
    g: usize,
}

struct Group {
    word: Word,
    fs: Vec<usize>,
    gs: Vec<usize>,
}

struct Matcher<'a> {
    letters: &'a [Letter],
    groups: &'a [Group],
    positions: Vec<(usize, usize)>,
    used: Vec<bool>,
    chosen: Vec<Vec<usize>>,
    counts: Vec<Word>,
    total: BigInt,
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * BigInt::from(k))
}

impl Matcher<'_> {
    fn run(&mut self, idx: usize) {
        if idx == self.positions.len() {
            let mut val = BigInt::from(1);
            for (gi, g) in self.groups.iter().enumerate() {
                let sigma: Vec<usize> = self.chosen[gi]
                    .iter()
                    .map(|&li| g.gs.iter().position(|&x| x == self.letters[li].g).expect("checked"))
                    .collect();
                val *= perm_sign(&sigma);
                for &n in &g.word {
                    val *= factorial(n);
                }
            }
            self.total += val;
            return;
        }
        let (gi, l) = self.positions[idx];
        let group = &self.groups[gi];
        let f = group.fs[l];
        for li in 0..self.letters.len() {
            let letter = self.letters[li];
            if self.used[li] || letter.f != f || !group.gs.contains(&letter.g) {
                continue;
            }
            if self.chosen[gi].iter().any(|&o| self.letters[o].g == letter.g) {
                continue;
            }
            if self.counts[gi][letter.e] >= group.word[letter.e] {
                continue;
            }
            self.used[li] = true;
            self.counts[gi][letter.e] += 1;
            self.chosen[gi].push(li);
            self.run(idx + 1);
            self.chosen[gi].pop();
            self.counts[gi][letter.e] -= 1;
            self.used[li] = false;
        }
    }
}

/// Coefficient of the preferred monomial in the image of the `(r, s)`
/// highest weight vector, by brute-force expansion.
pub fn theta_expand_oracle(r: usize, s: usize) -> Result<BigInt> {
    if s == 0 || 2 * s > r {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s, 2s <= r, got r = {r}, s = {s}"
        )));
    }
    if r + s > THETA_ORACLE_GUARD {
        return Err(Error::GuardExceeded {
            count: (r + s) as u128,
            limit: THETA_ORACLE_GUARD as u128,
        });
    }
    let mut letters = Vec::new();
    for k in 1..=(r - s) {
        letters.push(Letter { e: 0, f: k, g: k });
    }
    for k in 1..=s {
        letters.push(Letter {
            e: 1,
            f: k,
            g: r + 1 - k,
        });
        letters.push(Letter {
            e: 2,
            f: r + 1 - k,
            g: k,
        });
    }
    let theta = expand_theta(r, s);
    let first: Vec<usize> = (1..=s).collect();
    let splits: Vec<(Vec<usize>, Vec<usize>, i64)> = subsets(r, s)
        .into_iter()
        .map(|i| {
            let i: Vec<usize> = i.iter().map(|x| x + 1).collect();
            let rest: Vec<usize> = (1..=r).filter(|x| !i.contains(x)).collect();
            let sign = shuffle_sign(&i, &rest).expect("disjoint") as i64;
            (i, rest, sign)
        })
        .collect();
    let mut total = BigInt::zero();
    for (words, coef) in &theta {
        for (i_set, i_rest, si) in &splits {
            for (j_set, j_rest, sj) in &splits {
                let groups = [
                    Group {
                        word: words[0],
                        fs: i_rest.clone(),
                        gs: j_rest.clone(),
                    },
                    Group {
                        word: words[1],
                        fs: first.clone(),
                        gs: j_set.clone(),
                    },
                    Group {
                        word: words[2],
                        fs: i_set.clone(),
                        gs: first.clone(),
                    },
                ];
                let positions = groups
                    .iter()
                    .enumerate()
                    .flat_map(|(gi, g)| (0..g.fs.len()).map(move |l| (gi, l)))
                    .collect();
                let mut m = Matcher {
                    letters: &letters,
                    groups: &groups,
                    positions,
                    used: vec![false; letters.len()],
                    chosen: vec![Vec::new(); 3],
                    counts: vec![[0; 3]; 3],
                    total: BigInt::zero(),
                };
                m.run(0);
                if !m.total.is_zero() {
                    total += m.total * BigInt::from(coef * si * sj);
                }
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaRow {
    pub r: usize,
    pub s: usize,
    pub theta: String,
    pub oracle: String,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaComparison {
    pub rows: Vec<ThetaRow>,
    /// `oracle / theta` on the first pair where both are nonzero.
    pub normalization: Option<String>,
    pub consistent: bool,
}

/// Compares [`theta_expand_oracle`] with [`theta_coefficient`] on each
/// `(r, s)`, under the single ratio fixed by the first pair where both are
/// nonzero.
pub fn compare_theta_oracle(pairs: &[(usize, usize)]) -> Result<ThetaComparison> {
    let mut values = Vec::with_capacity(pairs.len());
    for &(r, s) in pairs {
        values.push((r, s, theta_coefficient(r, s)?, theta_expand_oracle(r, s)?));
    }
    let ratio = values
        .iter()
        .find(|(_, _, th, or)| !th.is_zero() && !or.is_zero())
        .map(|(_, _, th, or)| BigRational::new(or.clone(), th.clone()));
    let rows: Vec<ThetaRow> = values
        .into_iter()
        .map(|(r, s, th, or)| {
            let agrees = match &ratio {
                Some(q) => &or * q.denom() == &th * q.numer(),
                None => th.is_zero() && or.is_zero(),
            };
            ThetaRow {
                r,
                s,
                theta: th.to_string(),
                oracle: or.to_string(),
                agrees,
            }
        })
        .collect();
    Ok(ThetaComparison {
        consistent: rows.iter().all(|row| row.agrees),
        normalization: ratio.map(|q| q.to_string()),
        rows,
    })
}
