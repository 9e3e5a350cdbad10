//! Brute-force coercivity of contraction templates.
//!
//! A template has `p` multi-index slots of sizes `k_1..k_p` and a list of
//! groups; each group requires its slots to be pairwise disjoint, because
//! the corresponding exterior parts are wedged together. The template is
//! r-coercive when every tuple of subsets of `{1..r}` surviving all groups
//! has equal multi-indices in the designated pair of slots.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::binomial;

/// Largest number of tuples [`ContractionTemplate::check`] may enumerate.
pub const TEMPLATE_GUARD: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionTemplate {
    pub sizes: Vec<usize>,
    /// Groups of 0-based slot indices.
    pub groups: Vec<Vec<usize>>,
    /// 0-based slots expected to coincide.
    pub pair: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TemplateReport {
    pub r: usize,
    pub coercive: bool,
    pub surviving: u64,
    pub enumerated: String,
    /// A surviving tuple (1-based elements) whose designated slots differ.
    pub counterexample: Option<Vec<Vec<usize>>>,
}

impl ContractionTemplate {
    pub fn new(sizes: Vec<usize>, groups: Vec<Vec<usize>>, pair: (usize, usize)) -> Result<Self> {
        let p = sizes.len();
        if p < 2 {
            return Err(Error::InvalidParameter("a template needs at least two slots".into()));
        }
        if pair.0 >= p || pair.1 >= p || pair.0 == pair.1 {
            return Err(Error::InvalidParameter(format!(
                "bad designated pair {pair:?} for {p} slots"
            )));
        }
        for g in &groups {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != g.len() || g.iter().any(|&i| i >= p) {
                return Err(Error::InvalidParameter(format!("bad group {g:?} for {p} slots")));
            }
        }
        Ok(ContractionTemplate { sizes, groups, pair })
    }

    /// Slots `(I, J, K)` of sizes `(s, r - s, s)`, groups `{I, J}` and
    /// `{J, K}`, pair `(I, K)`.
    pub fn strassen(r: usize, s: usize) -> Result<Self> {
        if s > r {
            return Err(Error::InvalidParameter(format!("s = {s} exceeds r = {r}")));
        }
        ContractionTemplate::new(vec![s, r - s, s], vec![vec![0, 1], vec![1, 2]], (0, 2))
    }

    /// Seven slots of sizes `(r-4s, r-4s, r-4s, s, s, s, s)` with groups
    /// `145, 167, 246, 257, 347, 356` and pair `(1, 2)` (1-based).
    pub fn sextuple(r: usize, s: usize) -> Result<Self> {
        if 4 * s > r {
            return Err(Error::InvalidParameter(format!("need 4s <= r, got r = {r}, s = {s}")));
        }
        let m = r - 4 * s;
        let groups = ["145", "167", "246", "257", "347", "356"]
            .iter()
            .map(|g| g.bytes().map(|d| (d - b'1') as usize).collect())
            .collect();
        ContractionTemplate::new(vec![m, m, m, s, s, s, s], groups, (0, 1))
    }

    /// Parses `"145,167"`-style groups (1-based digits, or dot-separated
    /// numbers like `"1.10.4"` for more than nine slots).
    pub fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>> {
        text.split(',')
            .filter(|g| !g.trim().is_empty())
            .map(|g| {
                let g = g.trim();
                let parts: Vec<&str> = if g.contains('.') {
                    g.split('.').collect()
                } else {
                    g.split("").filter(|x| !x.is_empty()).collect()
                };
                parts
                    .iter()
                    .map(|d| {
                        d.parse::<usize>()
                            .ok()
                            .and_then(|x| x.checked_sub(1))
                            .ok_or_else(|| Error::Parse(format!("bad slot {d:?} in group {g:?}")))
                    })
                    .collect()
            })
            .collect()
    }

    fn tuple_count(&self, r: usize) -> u128 {
        self.sizes
            .iter()
            .try_fold(1u128, |acc, &k| acc.checked_mul(binomial(r, k) as u128))
            .unwrap_or(u128::MAX)
    }

    /// Enumerates every tuple of subsets of `{1..r}` with the slot sizes,
    /// keeps those meeting all disjointness groups, and reports whether
    /// the designated pair always coincides.
    pub fn check(&self, r: usize) -> Result<TemplateReport> {
        if r > 63 {
            return Err(Error::InvalidParameter(format!("r = {r} is too large")));
        }
        let total = self.tuple_count(r);
        if total > TEMPLATE_GUARD {
            return Err(Error::GuardExceeded {
                count: total,
                limit: TEMPLATE_GUARD,
            });
        }
        let choices: Vec<Vec<u64>> = self.sizes.iter().map(|&k| masks(r, k)).collect();
        // for each slot, the earlier slots sharing a group with it
        let conflicts: Vec<Vec<usize>> = (0..self.sizes.len())
            .map(|i| {
                let mut v: Vec<usize> = self
                    .groups
                    .iter()
                    .filter(|g| g.contains(&i))
                    .flat_map(|g| g.iter().copied().filter(|&j| j < i))
                    .collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let mut state = Search {
            choices: &choices,
            conflicts: &conflicts,
            pair: self.pair,
            current: vec![0; self.sizes.len()],
            surviving: 0,
            counterexample: None,
        };
        state.run(0);
        let counterexample = state.counterexample.map(|t| {
            t.iter()
                .map(|&m| (0..r).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect())
                .collect()
        });
        Ok(TemplateReport {
            r,
            coercive: counterexample.is_none(),
            surviving: state.surviving,
            enumerated: total.to_string(),
            counterexample,
        })
    }
}

fn masks(r: usize, k: usize) -> Vec<u64> {
    crate::subset::subsets(r, k)
        .into_iter()
        .map(|s| s.iter().fold(0u64, |m, &b| m | 1 << b))
        .collect()
}

struct Search<'a> {
    choices: &'a [Vec<u64>],
    conflicts: &'a [Vec<usize>],
    pair: (usize, usize),
    current: Vec<u64>,
    surviving: u64,
    counterexample: Option<Vec<u64>>,
}

impl Search<'_> {
    fn run(&mut self, slot: usize) {
        if slot == self.current.len() {
            self.surviving += 1;
            if self.current[self.pair.0] != self.current[self.pair.1] && self.counterexample.is_none() {
                self.counterexample = Some(self.current.clone());
            }
            return;
        }
        for &m in &self.choices[slot] {
            if self.conflicts[slot].iter().all(|&j| self.current[j] & m == 0) {
                self.current[slot] = m;
                self.run(slot + 1);
            }
        }
    }
}
