//! The contractions `psi^{s,t}` into `L^{s+t}B (x) L^sB (x) L^sC (x) L^{s+t}C`
//! (`L` for exterior power), their defect, randomized exclusion from
//! `sigma_r`, and the combinatorial coercivity checker.

mod template;

pub use template::{ContractionTemplate, TemplateReport, TEMPLATE_GUARD};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::scalar::{Field, Scalar, RATIONAL_DRAW_RADIUS};
use crate::subset::{binomial, colex_rank, signed_splits, subsets};
use crate::tensor::{Covector, Mode, Tensor3};

/// A dense element of `L^{s+t}B (x) L^sB (x) L^sC (x) L^{s+t}C`, indexed by
/// colex ranks of the subsets `(P, K, Ic, Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorTensor {
    grounds: [usize; 4],
    degrees: [usize; 4],
    shape: [usize; 4],
    field: Field,
    data: Vec<Scalar>,
}

impl ExteriorTensor {
    pub fn zeros(field: Field, b: usize, c: usize, s: usize, t: usize) -> Self {
        let grounds = [b, b, c, c];
        let degrees = [s + t, s, s, s + t];
        let shape = std::array::from_fn(|q| binomial(grounds[q], degrees[q]));
        ExteriorTensor {
            grounds,
            degrees,
            shape,
            field,
            data: vec![field.zero(); shape.iter().product()],
        }
    }

    pub fn shape(&self) -> [usize; 4] {
        self.shape
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn offset(&self, idx: [usize; 4]) -> usize {
        ((idx[0] * self.shape[1] + idx[1]) * self.shape[2] + idx[2]) * self.shape[3] + idx[3]
    }

    /// Entry at four strictly increasing subsets.
    pub fn get(&self, p: &[usize], k: &[usize], ic: &[usize], q: &[usize]) -> Result<&Scalar> {
        let sets = [p, k, ic, q];
        let mut idx = [0; 4];
        for n in 0..4 {
            let s = sets[n];
            if s.len() != self.degrees[n]
                || s.windows(2).any(|w| w[0] >= w[1])
                || s.last().is_some_and(|&x| x >= self.grounds[n])
            {
                return Err(Error::IndexOutOfRange(format!(
                    "{s:?} is not a {}-subset of {}",
                    self.degrees[n], self.grounds[n]
                )));
            }
            idx[n] = colex_rank(s);
        }
        Ok(&self.data[self.offset(idx)])
    }

    fn add_at(&mut self, idx: [usize; 4], v: &Scalar) {
        let o = self.offset(idx);
        self.data[o] = &self.data[o] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// The first nonzero entry in index order, with its four subsets.
    pub fn first_nonzero(&self) -> Option<([Vec<usize>; 4], Scalar)> {
        let pos = self.data.iter().position(|x| !x.is_zero())?;
        let mut rest = pos;
        let mut ranks = [0; 4];
        for n in (0..4).rev() {
            ranks[n] = rest % self.shape[n];
            rest /= self.shape[n];
        }
        let sets = std::array::from_fn(|n| subsets(self.grounds[n], self.degrees[n])[ranks[n]].clone());
        Some((sets, self.data[pos].clone()))
    }

    pub fn sub(&self, other: &ExteriorTensor) -> Result<ExteriorTensor> {
        if self.shape != other.shape || self.grounds != other.grounds {
            return Err(Error::Dimension("exterior tensors of different shapes".into()));
        }
        Ok(ExteriorTensor {
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> ExteriorTensor {
        ExteriorTensor {
            data: self.data.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }
}

fn check_psi_args(t: &Tensor3, s: usize, tt: usize, covs: [&Covector; 3]) -> Result<()> {
    let [a, b, c] = t.dims();
    if s == 0 || tt == 0 {
        return Err(Error::InvalidParameter(format!("need s, t >= 1, got ({s}, {tt})")));
    }
    if s + tt > b.min(c) {
        return Err(Error::InvalidParameter(format!(
            "s + t = {} exceeds min(b, c) = {}",
            s + tt,
            b.min(c)
        )));
    }
    for cv in covs {
        if cv.mode != Mode::A || cv.coeffs.len() != a {
            return Err(Error::Dimension(format!(
                "expected a covector on factor A of length {a}, got {:?} of length {}",
                cv.mode,
                cv.coeffs.len()
            )));
        }
    }
    Ok(())
}

/// `psi^{s,t}_{alpha, alpha1, alpha2}(T)`.
///
/// With `M1 = C_s(T_{alpha1})`, `M0 = C_t(T_alpha)`, `M2 = C_s(T_{alpha2})`
/// (compound matrices):
///
/// ```text
/// psi[P, K, Ic, Q] = sum_{S u S' = P, |S| = s} sign(S, S')
///                    sum_{J' u K' = Q, |K'| = s} sign(J', K')
///                    M1[S, Ic] M0[S', J'] M2[K, K']
/// ```
///
/// On `T = sum_i a_i (x) b_i (x) c_i` this is
/// `sum_{I,J,K} <a_I, alpha1> <a_J, alpha> <a_K, alpha2> (b_I ^ b_J) (x) b_K (x) c_I (x) (c_J ^ c_K)`.
pub fn psi(
    t: &Tensor3,
    s: usize,
    tt: usize,
    alpha: &Covector,
    alpha1: &Covector,
    alpha2: &Covector,
) -> Result<ExteriorTensor> {
    check_psi_args(t, s, tt, [alpha, alpha1, alpha2])?;
    let [_, b, c] = t.dims();
    let m1 = t.slice(alpha1)?.compound(s)?;
    let m0 = t.slice(alpha)?.compound(tt)?;
    let m2 = t.slice(alpha2)?.compound(s)?;
    Ok(psi_from_compounds(t.field(), b, c, s, tt, &m1, &m0, &m2))
}

#[allow(clippy::too_many_arguments)]
fn psi_from_compounds(
    field: Field,
    b: usize,
    c: usize,
    s: usize,
    tt: usize,
    m1: &Matrix,
    m0: &Matrix,
    m2: &Matrix,
) -> ExteriorTensor {
    let mut out = ExteriorTensor::zeros(field, b, c, s, tt);
    let (nk, nic) = (binomial(b, s), binomial(c, s));
    for (ip, p) in subsets(b, s + tt).iter().enumerate() {
        let p_splits: Vec<_> = signed_splits(p, s)
            .into_iter()
            .map(|(x, y, sg)| (colex_rank(&x), colex_rank(&y), sg))
            .collect();
        for (iq, q) in subsets(c, s + tt).iter().enumerate() {
            for (jp, kp, sq) in signed_splits(q, tt) {
                let (jp, kp) = (colex_rank(&jp), colex_rank(&kp));
                for &(si, sj, sp) in &p_splits {
                    let w = &m0[(sj, jp)];
                    if w.is_zero() {
                        continue;
                    }
                    let w = if sp * sq < 0 { -w } else { w.clone() };
                    for ic in 0..nic {
                        let u = &w * &m1[(si, ic)];
                        if u.is_zero() {
                            continue;
                        }
                        for k in 0..nk {
                            let v = &m2[(k, kp)];
                            if !v.is_zero() {
                                out.add_at([ip, k, ic, iq], &(&u * v));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// `psi(alpha, alpha1, alpha2) - psi(alpha, alpha2, alpha1)`; it vanishes on
/// `sigma_{s+t}`.
pub fn psi_defect(
    t: &Tensor3,
    s: usize,
    tt: usize,
    alpha: &Covector,
    alpha1: &Covector,
    alpha2: &Covector,
) -> Result<ExteriorTensor> {
    check_psi_args(t, s, tt, [alpha, alpha1, alpha2])?;
    let [_, b, c] = t.dims();
    let m0 = t.slice(alpha)?.compound(tt)?;
    let n1 = t.slice(alpha1)?.compound(s)?;
    let n2 = t.slice(alpha2)?.compound(s)?;
    let f = t.field();
    let forward = psi_from_compounds(f, b, c, s, tt, &n1, &m0, &n2);
    let backward = psi_from_compounds(f, b, c, s, tt, &n2, &m0, &n1);
    forward.sub(&backward)
}

/// Reference evaluation of `psi^{s,t}` on an explicit decomposition
/// `sum_i a_i (x) b_i (x) c_i`, summing over index triples `(I, J, K)` of
/// the terms and taking wedge coordinates as minors of the stacked vectors.
///
/// Independent of the compound-matrix route in [`psi`]; used to
/// cross-check it.
pub fn psi_from_terms(
    terms: &[[Vec<Scalar>; 3]],
    s: usize,
    tt: usize,
    alpha: &Covector,
    alpha1: &Covector,
    alpha2: &Covector,
) -> Result<ExteriorTensor> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidParameter("need at least one term".into()))?;
    let (a, b, c) = (first[0].len(), first[1].len(), first[2].len());
    let field = first[0]
        .first()
        .map(Scalar::field)
        .ok_or_else(|| Error::Dimension("empty factor".into()))?;
    if s == 0 || tt == 0 || s + tt > b.min(c) {
        return Err(Error::InvalidParameter(format!(
            "bad (s, t) = ({s}, {tt}) for b = {b}, c = {c}"
        )));
    }
    for cv in [alpha, alpha1, alpha2] {
        if cv.mode != Mode::A || cv.coeffs.len() != a {
            return Err(Error::Dimension("covectors must live on factor A".into()));
        }
    }
    let r = terms.len();
    let pair = |cv: &Covector, i: usize| -> Scalar {
        cv.coeffs
            .iter()
            .zip(&terms[i][0])
            .fold(field.zero(), |acc, (x, y)| &acc + &(x * y))
    };
    let bm = Matrix::from_fn(field, b, r, |row, i| terms[i][1][row].clone());
    let cm = Matrix::from_fn(field, c, r, |row, i| terms[i][2][row].clone());
    let prod = |cv: &Covector, set: &[usize]| set.iter().fold(field.one(), |acc, &i| &acc * &pair(cv, i));
    let wedge = |m: &Matrix, rows: &[usize], cols: &[usize]| m.select(rows, cols).det().expect("square");
    let mut out = ExteriorTensor::zeros(field, b, c, s, tt);
    let p_sets = subsets(b, s + tt);
    let k_sets = subsets(b, s);
    let ic_sets = subsets(c, s);
    let q_sets = subsets(c, s + tt);
    for i_set in subsets(r, s) {
        for j_set in subsets(r, tt) {
            for k_set in subsets(r, s) {
                let coef = &(&prod(alpha1, &i_set) * &prod(alpha, &j_set)) * &prod(alpha2, &k_set);
                if coef.is_zero() {
                    continue;
                }
                let ij: Vec<usize> = i_set.iter().chain(&j_set).copied().collect();
                let jk: Vec<usize> = j_set.iter().chain(&k_set).copied().collect();
                let b_ij: Vec<Scalar> = p_sets.iter().map(|p| wedge(&bm, p, &ij)).collect();
                let b_k: Vec<Scalar> = k_sets.iter().map(|k| wedge(&bm, k, &k_set)).collect();
                let c_i: Vec<Scalar> = ic_sets.iter().map(|ic| wedge(&cm, ic, &i_set)).collect();
                let c_jk: Vec<Scalar> = q_sets.iter().map(|q| wedge(&cm, q, &jk)).collect();
                for (ip, x) in b_ij.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let x = &coef * x;
                    for (ik, y) in b_k.iter().enumerate() {
                        let xy = &x * y;
                        for (ic, z) in c_i.iter().enumerate() {
                            let xyz = &xy * z;
                            for (iq, w) in c_jk.iter().enumerate() {
                                out.add_at([ip, ik, ic, iq], &(&xyz * w));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Schwartz-Zippel bound `(degree / |S|)^trials` on the chance that a
/// nonzero polynomial of the given degree vanishes at every one of
/// `trials` independent uniform draws from a set `S` of the field's sample
/// size.
pub fn false_accept_bound(field: Field, degree: usize, trials: usize) -> BigRational {
    let space = field.sample_space(RATIONAL_DRAW_RADIUS);
    let per = BigRational::new(BigInt::from(degree), space);
    let one = BigRational::from_integer(BigInt::from(1));
    let per = per.min(one.clone());
    (0..trials).fold(one, |acc, _| acc * &per)
}

/// A nonzero defect entry found by a trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectWitness {
    pub trial: u64,
    /// `(P, K, Ic, Q)`, 0-based.
    pub index: [Vec<usize>; 4],
    pub value: String,
}

/// Verdict of [`exclusion_test`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionVerdict {
    pub test: String,
    pub mode: Mode,
    pub r: usize,
    pub s: usize,
    /// `"excluded"` or `"consistent"`.
    pub verdict: String,
    pub witness_covectors: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<DefectWitness>,
    pub trials: usize,
    pub seed: u64,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
    pub false_accept_bound: String,
}

impl ExclusionVerdict {
    pub fn excluded(&self) -> bool {
        self.verdict == "excluded"
    }
}

/// Evaluates the `(r, s)`-coercive defect `psi^{s, r-s}` on seeded covector
/// triples over factor A. A nonzero entry excludes `T` from `sigma_r`;
/// all-zero defects only make `T` consistent with the equations.
pub fn exclusion_test(t: &Tensor3, r: usize, s: usize, trials: usize, seed: u64) -> Result<ExclusionVerdict> {
    exclusion_test_on(t, Mode::A, r, s, trials, seed)
}

/// [`exclusion_test`] with `mode` moved to the A-position first.
pub fn exclusion_test_on(
    t: &Tensor3,
    mode: Mode,
    r: usize,
    s: usize,
    trials: usize,
    seed: u64,
) -> Result<ExclusionVerdict> {
    if s == 0 || s >= r {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s < r, got r = {r}, s = {s}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let field = t.field();
    let (c, _) = t.with_front(mode).compress();
    let [a, bb, cc] = c.dims();
    let mut verdict = ExclusionVerdict {
        test: "coercive".into(),
        mode,
        r,
        s,
        verdict: "consistent".into(),
        witness_covectors: Vec::new(),
        witness: None,
        trials,
        seed,
        field: field.tag().into(),
        modulus: field.modulus(),
        diagnostic: None,
        false_accept_bound: false_accept_bound(field, r + s, trials).to_string(),
    };
    if r > bb.min(cc) {
        verdict.diagnostic = Some(format!(
            "equations vanish identically: r = {r} exceeds the compressed dims ({a}, {bb}, {cc})"
        ));
        verdict.false_accept_bound = "0".into();
        return Ok(verdict);
    }
    for trial in 0..trials as u64 {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let covs: [Covector; 3] = std::array::from_fn(|_| Covector::random(field, Mode::A, a, &mut rng));
        let d = psi_defect(&c, s, r - s, &covs[0], &covs[1], &covs[2])?;
        if let Some((index, value)) = d.first_nonzero() {
            verdict.verdict = "excluded".into();
            verdict.witness_covectors = covs.iter().map(Covector::to_strings).collect();
            verdict.witness = Some(DefectWitness {
                trial,
                index,
                value: value.to_string(),
            });
            verdict.false_accept_bound = "0".into();
            return Ok(verdict);
        }
    }
    Ok(verdict)
}

/// Re-evaluates the witness entry of an exclusion verdict; `None` when the
/// verdict carries no witness.
pub fn replay_exclusion(t: &Tensor3, v: &ExclusionVerdict) -> Result<Option<(String, bool)>> {
    let Some(w) = &v.witness else {
        return Ok(None);
    };
    let field = match (v.field.as_str(), v.modulus) {
        ("Q", None) => Field::Rational,
        ("gfp", Some(p)) => Field::prime(p)?,
        (f, m) => return Err(Error::Parse(format!("bad field {f:?} with modulus {m:?}"))),
    };
    if field != t.field() {
        return Err(Error::FieldMismatch("verdict and tensor fields differ".into()));
    }
    if v.witness_covectors.len() != 3 {
        return Err(Error::Parse("a coercive witness has three covectors".into()));
    }
    let covs = v
        .witness_covectors
        .iter()
        .map(|c| Covector::parse(field, Mode::A, c))
        .collect::<Result<Vec<_>>>()?;
    let (c, _) = t.with_front(v.mode).compress();
    let d = psi_defect(&c, v.s, v.r - v.s, &covs[0], &covs[1], &covs[2])?;
    let value = d.get(&w.index[0], &w.index[1], &w.index[2], &w.index[3])?.to_string();
    let matches = value == w.value && !d.is_zero();
    Ok(Some((value, matches)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{make_witness, WitnessRecipe};

    fn draw3(field: Field, a: usize, seed: u64) -> [Covector; 3] {
        let mut rng = SplitMix64::new(seed);
        std::array::from_fn(|_| Covector::random(field, Mode::A, a, &mut rng))
    }

    fn generic(field: Field, dims: [usize; 3], seed: u64) -> Tensor3 {
        let mut rng = SplitMix64::new(seed);
        Tensor3::from_fn(field, dims, |_, _, _| field.sample(&mut rng, 9))
    }

    #[test]
    fn shape_and_indexing() {
        let e = ExteriorTensor::zeros(Field::default(), 4, 5, 1, 2);
        assert_eq!(e.shape(), [4, 4, 5, 10]);
        assert!(e.get(&[0, 1, 2], &[3], &[4], &[0, 1, 4]).is_ok());
        assert!(e.get(&[0, 1], &[3], &[4], &[0, 1, 4]).is_err());
        assert!(e.get(&[0, 1, 2], &[4], &[4], &[0, 1, 4]).is_err());
        assert!(e.first_nonzero().is_none());
    }

    #[test]
    fn rank_one_kills_full_wedge() {
        let f = Field::Rational;
        let t = make_witness(&WitnessRecipe::random_sum(1, [3, 2, 2], 4, f)).unwrap();
        let [a, a1, a2] = draw3(f, 3, 1);
        let p = psi(&t, 1, 1, &a, &a1, &a2).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn homogeneity_in_alpha1() {
        let f = Field::Rational;
        let t = generic(f, [3, 4, 4], 2);
        let [a, a1, a2] = draw3(f, 3, 3);
        let lambda = f.from_i64(-3);
        for (s, tt) in [(1, 2), (2, 1), (2, 2)] {
            let base = psi(&t, s, tt, &a, &a1, &a2).unwrap();
            let scaled = psi(&t, s, tt, &a, &a1.scale(&lambda), &a2).unwrap();
            assert_eq!(scaled, base.scale(&lambda.pow(s as u32)));
            let scaled = psi(&t, s, tt, &a.scale(&lambda), &a1, &a2).unwrap();
            assert_eq!(scaled, base.scale(&lambda.pow(tt as u32)));
        }
    }

    #[test]
    fn defect_antisymmetry() {
        let f = Field::default();
        let t = generic(f, [3, 4, 4], 5);
        let [a, a1, a2] = draw3(f, 3, 6);
        let d = psi_defect(&t, 1, 3, &a, &a1, &a2).unwrap();
        let e = psi_defect(&t, 1, 3, &a, &a2, &a1).unwrap();
        assert_eq!(d, e.scale(&f.from_i64(-1)));
        assert!(!d.is_zero());
        assert!(psi_defect(&t, 1, 3, &a, &a1, &a1).unwrap().is_zero());
    }

    #[test]
    fn defect_vanishes_on_secants() {
        for seed in 0..5 {
            for (s, tt) in [(1, 1), (1, 2), (2, 2), (1, 3)] {
                let r = s + tt;
                let t = make_witness(&WitnessRecipe::random_sum(r, [3, r, r], seed, Field::default())).unwrap();
                let [a, a1, a2] = draw3(t.field(), 3, seed + 100);
                assert!(
                    psi_defect(&t, s, tt, &a, &a1, &a2).unwrap().is_zero(),
                    "{s} {tt} {seed}"
                );
            }
        }
    }

    #[test]
    fn argument_checks() {
        let f = Field::default();
        let t = generic(f, [3, 3, 3], 1);
        let [a, a1, a2] = draw3(f, 3, 1);
        assert!(psi(&t, 2, 2, &a, &a1, &a2).is_err());
        assert!(psi(&t, 0, 2, &a, &a1, &a2).is_err());
        let bad = Covector::basis(f, Mode::B, 3, 0);
        assert!(psi(&t, 1, 1, &bad, &a1, &a2).is_err());
    }

    #[test]
    fn exclusion_verdicts() {
        let f = Field::default();
        let w = make_witness(&WitnessRecipe::random_sum(4, [3, 4, 4], 7, f)).unwrap();
        let v = exclusion_test(&w, 4, 1, 5, 1).unwrap();
        assert!(!v.excluded());
        let g = generic(f, [3, 4, 4], 8);
        let v = exclusion_test(&g, 4, 1, 5, 1).unwrap();
        assert!(v.excluded());
        let (value, ok) = replay_exclusion(&g, &v).unwrap().unwrap();
        assert!(ok, "{value}");
        assert_eq!(value, v.witness.as_ref().unwrap().value);
        let v = exclusion_test(&g, 5, 1, 5, 1).unwrap();
        assert!(!v.excluded());
        assert!(v.diagnostic.is_some());
        assert!(exclusion_test(&g, 4, 4, 5, 1).is_err());
    }

    #[test]
    fn false_accept_bound_values() {
        let b = false_accept_bound(Field::prime(7).unwrap(), 5, 2);
        assert_eq!(b.to_string(), "25/49");
        let b = false_accept_bound(Field::prime(3).unwrap(), 5, 2);
        assert_eq!(b.to_string(), "1");
        let b = false_accept_bound(Field::Rational, 4, 1);
        assert_eq!(b.to_string(), "4/2049");
    }
}
