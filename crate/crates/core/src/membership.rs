//! Set-theoretic membership tests for `sigma_3`, `sigma_4` and the
//! commuting varieties `Comm^r`.

use serde::{Deserialize, Serialize};

use crate::coercive::{exclusion_test_on, false_accept_bound, psi_defect, ExclusionVerdict};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::scalar::Field;
use crate::strassen::sigma4_degree9;
use crate::tensor::{Covector, Mode, Tensor3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Member,
    NotMember,
    Consistent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub test: String,
    pub detail: String,
}

/// Data that lets a verdict be re-evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    FlatteningRanks {
        ranks: [usize; 3],
        bound: usize,
    },
    /// A nonzero entry of `psi^{s, r-s}` on the compressed tensor with
    /// `mode` moved to the front.
    CoerciveDefect {
        mode: Mode,
        r: usize,
        s: usize,
        covectors: Vec<Vec<String>>,
        index: [Vec<usize>; 4],
        value: String,
    },
    /// A value of the degree-9 equation on the compressed tensor.
    Degree9 {
        covectors: Vec<Vec<String>>,
        value: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub target: String,
    pub r: usize,
    pub outcome: Outcome,
    pub reasons: Vec<Reason>,
    pub evidence: Vec<Evidence>,
    pub trials: usize,
    pub seed: u64,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Bound on the chance that a non-member was accepted, as a rational.
    pub false_accept_bound: String,
}

impl Verdict {
    fn new(target: &str, r: usize, field: Field, trials: usize, seed: u64) -> Self {
        Verdict {
            target: target.into(),
            r,
            outcome: Outcome::Inconclusive,
            reasons: Vec::new(),
            evidence: Vec::new(),
            trials,
            seed,
            field: field.tag().into(),
            modulus: field.modulus(),
            false_accept_bound: "0".into(),
        }
    }

    fn reason(&mut self, test: &str, detail: impl Into<String>) {
        self.reasons.push(Reason {
            test: test.into(),
            detail: detail.into(),
        });
    }

    fn field(&self) -> Result<Field> {
        match (self.field.as_str(), self.modulus) {
            ("Q", None) => Ok(Field::Rational),
            ("gfp", Some(p)) => Field::prime(p),
            (f, m) => Err(Error::Parse(format!("bad field {f:?} with modulus {m:?}"))),
        }
    }
}

fn defect_evidence(v: &ExclusionVerdict) -> Option<Evidence> {
    let w = v.witness.as_ref()?;
    Some(Evidence::CoerciveDefect {
        mode: v.mode,
        r: v.r,
        s: v.s,
        covectors: v.witness_covectors.clone(),
        index: w.index.clone(),
        value: w.value.clone(),
    })
}

/// Tests `T` against `Comm^r` for one factor: the zero set of
/// `psi^{1, r-1}` with that factor in the A-position. A nonzero defect
/// puts `T` outside `Comm^r` and hence outside `sigma_r`.
pub fn comm_membership(t: &Tensor3, r: usize, factor: Mode, trials: usize, seed: u64) -> Result<Verdict> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("Comm^r needs r >= 2, got {r}")));
    }
    let mut v = Verdict::new("comm", r, t.field(), trials, seed);
    let ex = exclusion_test_on(t, factor, r, 1, trials, seed)?;
    if let Some(e) = defect_evidence(&ex) {
        v.outcome = Outcome::NotMember;
        v.reason(
            "comm",
            format!(
                "psi^(1,{}) defect on factor {factor:?} is nonzero; not in Comm^{r}, so not in sigma_{r}",
                r - 1
            ),
        );
        v.evidence.push(e);
    } else {
        v.outcome = Outcome::Consistent;
        match ex.diagnostic {
            Some(d) => v.reason("comm", format!("consistent (equations vacuous): {d}")),
            None => {
                v.reason("comm", format!("all {trials} defects on factor {factor:?} vanish"));
                v.false_accept_bound = ex.false_accept_bound;
            }
        }
    }
    Ok(v)
}

/// Decides `sigma_3 = Comm^3_A intersected with Sub_{3,3,3}`.
///
/// With `strict`, the Comm test runs on all three factors instead of A
/// alone. Acceptance is randomized: the reported bound is the
/// Schwartz-Zippel probability that a non-member passed every trial.
pub fn sigma3_membership(t: &Tensor3, trials: usize, seed: u64, strict: bool) -> Result<Verdict> {
    let mut v = Verdict::new("sigma3", 3, t.field(), trials, seed);
    let ranks = t.multilinear_ranks();
    if ranks.iter().any(|&x| x > 3) {
        v.outcome = Outcome::NotMember;
        v.reason("sub333", format!("multilinear ranks {ranks:?} exceed (3, 3, 3)"));
        v.evidence.push(Evidence::FlatteningRanks { ranks, bound: 3 });
        return Ok(v);
    }
    v.reason("sub333", format!("multilinear ranks {ranks:?}"));
    let modes: &[Mode] = if strict { &Mode::ALL } else { &[Mode::A] };
    let mut vacuous = true;
    for &mode in modes {
        let ex = exclusion_test_on(t, mode, 3, 1, trials, seed)?;
        if let Some(e) = defect_evidence(&ex) {
            v.outcome = Outcome::NotMember;
            v.reason("comm3", format!("psi^(1,2) defect on factor {mode:?} is nonzero"));
            v.evidence.push(e);
            v.false_accept_bound = "0".into();
            return Ok(v);
        }
        match ex.diagnostic {
            Some(d) => v.reason("comm3", format!("equations vacuous on factor {mode:?}: {d}")),
            None => {
                vacuous = false;
                v.reason("comm3", format!("all {trials} defects on factor {mode:?} vanish"));
            }
        }
    }
    v.outcome = Outcome::Member;
    if !vacuous {
        v.false_accept_bound = false_accept_bound(t.field(), 4, trials).to_string();
    }
    Ok(v)
}

/// Degree of the degree-9 equation in the frame coordinates.
const DEGREE9: usize = 9;

/// Necessary conditions for `sigma_4`, and the exact test when the tensor
/// is concise in `C^3 (x) C^3 (x) C^3`.
///
/// Outside that case the verdict is at best `consistent`: the equations
/// inherited from `sigma_4(P^2 x P^2 x P^3)` are not evaluated.
pub fn sigma4_test(t: &Tensor3, trials: usize, seed: u64) -> Result<Verdict> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let field = t.field();
    let mut v = Verdict::new("sigma4", 4, field, trials, seed);
    let ranks = t.multilinear_ranks();
    if ranks.iter().any(|&x| x > 4) {
        v.outcome = Outcome::NotMember;
        v.reason("sub444", format!("multilinear ranks {ranks:?} exceed (4, 4, 4)"));
        v.evidence.push(Evidence::FlatteningRanks { ranks, bound: 4 });
        return Ok(v);
    }
    v.reason("sub444", format!("multilinear ranks {ranks:?}"));
    if ranks == [3, 3, 3] {
        let (c, _) = t.compress();
        let mut valid = 0usize;
        let mut zero_frame = None;
        for trial in 0..trials as u64 {
            let mut rng = SplitMix64::for_trial(seed, trial);
            let frame: [Covector; 3] = std::array::from_fn(|_| Covector::random(field, Mode::A, 3, &mut rng));
            if frame_matrix(&frame).det()?.is_zero() {
                continue;
            }
            let value = match sigma4_degree9(&c, &frame) {
                Ok(x) => x,
                Err(Error::SingularBase) => continue,
                Err(e) => return Err(e),
            };
            valid += 1;
            let evidence = Evidence::Degree9 {
                covectors: frame.iter().map(Covector::to_strings).collect(),
                value: value.to_string(),
            };
            if !value.is_zero() {
                v.outcome = Outcome::NotMember;
                v.reason("degree9", format!("degree-9 equation is nonzero at frame {trial}"));
                v.evidence.push(evidence);
                return Ok(v);
            }
            zero_frame.get_or_insert(evidence);
        }
        if valid == 0 {
            v.outcome = Outcome::Inconclusive;
            v.reason("degree9", format!("all {trials} frames were singular"));
            v.false_accept_bound = "1".into();
            return Ok(v);
        }
        v.outcome = Outcome::Member;
        v.reason("degree9", format!("degree-9 equation vanishes at {valid} frames"));
        v.evidence.extend(zero_frame);
        v.false_accept_bound = false_accept_bound(field, DEGREE9, valid).to_string();
        return Ok(v);
    }
    let mut any_real = false;
    for mode in Mode::ALL {
        let ex = exclusion_test_on(t, mode, 4, 1, trials, seed)?;
        if let Some(e) = defect_evidence(&ex) {
            v.outcome = Outcome::NotMember;
            v.reason("comm4", format!("psi^(1,3) defect on factor {mode:?} is nonzero"));
            v.evidence.push(e);
            v.false_accept_bound = "0".into();
            return Ok(v);
        }
        match ex.diagnostic {
            Some(d) => v.reason("comm4", format!("equations vacuous on factor {mode:?}: {d}")),
            None => {
                any_real = true;
                v.reason("comm4", format!("all {trials} defects on factor {mode:?} vanish"));
            }
        }
    }
    v.outcome = Outcome::Consistent;
    v.reason(
        "scope",
        "necessary conditions only: the equations inherited from sigma_4(P^2 x P^2 x P^3) are not evaluated",
    );
    v.false_accept_bound = if any_real {
        false_accept_bound(field, 5, trials).to_string()
    } else {
        "1".into()
    };
    Ok(v)
}

fn frame_matrix(frame: &[Covector; 3]) -> Matrix {
    Matrix::from_fn(frame[0].coeffs[0].field(), 3, 3, |i, j| frame[i].coeffs[j].clone())
}

/// Re-evaluates every piece of evidence; each entry is a description and
/// whether it reproduced exactly.
pub fn replay_verdict(t: &Tensor3, v: &Verdict) -> Result<Vec<(String, bool)>> {
    let field = v.field()?;
    if field != t.field() {
        return Err(Error::FieldMismatch("verdict and tensor fields differ".into()));
    }
    let parse = |cs: &[Vec<String>]| -> Result<Vec<Covector>> {
        cs.iter().map(|c| Covector::parse(field, Mode::A, c)).collect()
    };
    let mut out = Vec::new();
    for e in &v.evidence {
        match e {
            Evidence::FlatteningRanks { ranks, .. } => {
                let got = t.multilinear_ranks();
                out.push((format!("multilinear ranks {got:?}"), got == *ranks));
            }
            Evidence::CoerciveDefect {
                mode,
                r,
                s,
                covectors,
                index,
                value,
            } => {
                let covs = parse(covectors)?;
                if covs.len() != 3 || *s == 0 || s >= r {
                    return Err(Error::Parse("malformed coercive evidence".into()));
                }
                let (c, _) = t.with_front(*mode).compress();
                let d = psi_defect(&c, *s, r - s, &covs[0], &covs[1], &covs[2])?;
                let got = d.get(&index[0], &index[1], &index[2], &index[3])?.to_string();
                out.push((format!("defect entry {got}"), got == *value));
            }
            Evidence::Degree9 { covectors, value } => {
                let covs = parse(covectors)?;
                let frame: [Covector; 3] = covs
                    .try_into()
                    .map_err(|_| Error::Parse("a frame has three covectors".into()))?;
                let (c, _) = t.compress();
                let got = sigma4_degree9(&c, &frame)?.to_string();
                out.push((format!("degree-9 value {got}"), got == *value));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{make_witness, WitnessRecipe};

    fn generic(field: Field, dims: [usize; 3], seed: u64) -> Tensor3 {
        let mut rng = SplitMix64::new(seed);
        Tensor3::from_fn(field, dims, |_, _, _| field.sample(&mut rng, 9))
    }

    #[test]
    fn sigma3_examples() {
        let f = Field::default();
        for seed in 0..5 {
            let w = make_witness(&WitnessRecipe::random_sum(3, [4, 4, 4], seed, f)).unwrap();
            let v = sigma3_membership(&w, 5, seed, false).unwrap();
            assert_eq!(v.outcome, Outcome::Member, "{v:?}");
            let g = generic(f, [3, 3, 3], seed);
            let v = sigma3_membership(&g, 5, seed, false).unwrap();
            assert_eq!(v.outcome, Outcome::NotMember);
            assert!(replay_verdict(&g, &v).unwrap().iter().all(|(_, ok)| *ok));
        }
        let w = make_witness(&WitnessRecipe::random_sum(4, [4, 4, 4], 1, f)).unwrap();
        let v = sigma3_membership(&w, 5, 1, true).unwrap();
        assert_eq!(v.outcome, Outcome::NotMember);
        assert!(matches!(v.evidence[0], Evidence::FlatteningRanks { .. }));
    }

    #[test]
    fn sigma4_examples() {
        let f = Field::default();
        let w = make_witness(&WitnessRecipe::random_sum(4, [3, 3, 3], 2, f)).unwrap();
        assert_eq!(sigma4_test(&w, 5, 0).unwrap().outcome, Outcome::Member);
        let g = generic(f, [3, 3, 3], 2);
        let v = sigma4_test(&g, 5, 0).unwrap();
        assert_eq!(v.outcome, Outcome::NotMember);
        assert!(replay_verdict(&g, &v).unwrap().iter().all(|(_, ok)| *ok));
        let w = make_witness(&WitnessRecipe::random_sum(4, [4, 4, 4], 2, f)).unwrap();
        let v = sigma4_test(&w, 5, 0).unwrap();
        assert_eq!(v.outcome, Outcome::Consistent);
        let g = generic(f, [4, 4, 4], 3);
        assert_eq!(sigma4_test(&g, 5, 0).unwrap().outcome, Outcome::NotMember);
    }

    #[test]
    fn comm_examples() {
        let f = Field::default();
        for r in [3, 4] {
            let w = make_witness(&WitnessRecipe::random_sum(r, [3, r, r], 1, f)).unwrap();
            assert_eq!(
                comm_membership(&w, r, Mode::A, 5, 1).unwrap().outcome,
                Outcome::Consistent
            );
            let g = generic(f, [3, r, r], 1);
            assert_eq!(
                comm_membership(&g, r, Mode::A, 5, 1).unwrap().outcome,
                Outcome::NotMember
            );
        }
        assert!(comm_membership(&generic(f, [3, 3, 3], 0), 1, Mode::A, 5, 1).is_err());
    }

    #[test]
    fn verdict_json_roundtrip() {
        let g = generic(Field::Rational, [3, 3, 3], 4);
        let v = sigma4_test(&g, 3, 9).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        let back: Verdict = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}
