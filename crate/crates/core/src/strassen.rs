//! Strassen's commutator equations, the explicit polynomials
//! `P^{i,j|k}_{s,t}`, the two partially coercive variants, border-rank
//! certificates and the degree-9 equation of `sigma_4` in `C^3 (x) C^3 (x) C^3`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SplitMix64;
use crate::scalar::Field;
use crate::scalar::Scalar;
use crate::tensor::{Covector, Mode, Tensor3};

fn check_mode_a(t: &Tensor3, covectors: &[&Covector]) -> Result<()> {
    for c in covectors {
        if c.mode != Mode::A {
            return Err(Error::InvalidParameter(format!(
                "covectors must live on factor A, got {:?}",
                c.mode
            )));
        }
        if c.coeffs.len() != t.dims()[0] {
            return Err(Error::Dimension(format!(
                "covector of length {} for a factor of dimension {}",
                c.coeffs.len(),
                t.dims()[0]
            )));
        }
    }
    let [_, b, c] = t.dims();
    if b != c {
        return Err(Error::NotSquare { rows: b, cols: c });
    }
    Ok(())
}

/// `K = X1 adj(X0) X2 - X2 adj(X0) X1` with `X_i = T_{alpha_i}`.
///
/// When `X0` is invertible, `K = det(X0) [X1 X0^-1, X2 X0^-1] X0`, so `K` has
/// the rank of Strassen's commutator; the adjugate keeps every entry a
/// polynomial of degree `b + 1` in `T`.
pub fn strassen_commutator(t: &Tensor3, a0: &Covector, a1: &Covector, a2: &Covector) -> Result<Matrix> {
    check_mode_a(t, &[a0, a1, a2])?;
    let adj = t.slice(a0)?.adjugate()?;
    let x1 = t.slice(a1)?;
    let x2 = t.slice(a2)?;
    let left = &(&x1 * &adj) * &x2;
    let right = &(&x2 * &adj) * &x1;
    Ok(&left - &right)
}

/// `[A1, A2]` with `A1 = X_a adj(X_{a0})` and `A2 = X_{a'} adj(X_{a1})`.
pub fn mixed_defect(t: &Tensor3, a0: &Covector, a1: &Covector, a: &Covector, a_prime: &Covector) -> Result<Matrix> {
    check_mode_a(t, &[a0, a1, a, a_prime])?;
    let m1 = &t.slice(a)? * &t.slice(a0)?.adjugate()?;
    let m2 = &t.slice(a_prime)? * &t.slice(a1)?.adjugate()?;
    Ok(&(&m1 * &m2) - &(&m2 * &m1))
}

/// `A_1 ... A_k - A_{perm(1)} ... A_{perm(k)}` with `A_i = X_{alpha_i} adj(X0)`.
/// `perm` is 0-based.
pub fn kfold_defect(t: &Tensor3, a0: &Covector, alphas: &[Covector], perm: &[usize]) -> Result<Matrix> {
    check_perm(alphas.len(), perm)?;
    let mut all: Vec<&Covector> = vec![a0];
    all.extend(alphas);
    check_mode_a(t, &all)?;
    let adj = t.slice(a0)?.adjugate()?;
    let factors = alphas
        .iter()
        .map(|a| Ok(&t.slice(a)? * &adj))
        .collect::<Result<Vec<_>>>()?;
    let b = t.dims()[1];
    let product = |order: &mut dyn Iterator<Item = usize>| {
        order.fold(Matrix::identity(t.field(), b), |acc, i| &acc * &factors[i])
    };
    let straight = product(&mut (0..factors.len()));
    let permuted = product(&mut perm.iter().copied());
    Ok(&straight - &permuted)
}

fn check_perm(k: usize, perm: &[usize]) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k-fold products need k >= 2, got {k}")));
    }
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return Err(Error::InvalidParameter(format!(
            "{perm:?} is not a permutation of {k} factors"
        )));
    }
    if perm.iter().enumerate().all(|(i, &p)| i == p) {
        return Err(Error::InvalidParameter(
            "the identity permutation gives no equations".into(),
        ));
    }
    Ok(())
}

/// Evaluates `P^{i,j|k}_{s,t}(T) = sum_{u,v} (-1)^{u+v} det(X_k^{u^,v^})
/// (X_i[u,t] X_j[s,v] - X_i[s,v] X_j[u,t])`, where `X_i` is the i-th
/// A-slice and `X_k^{u^,v^}` drops row `u` and column `v`.
pub fn eval_p(t: &Tensor3, i: usize, j: usize, k: usize, s: usize, col: usize) -> Result<Scalar> {
    let [a, b, c] = t.dims();
    if b != c {
        return Err(Error::NotSquare { rows: b, cols: c });
    }
    for (name, v, bound) in [("i", i, a), ("j", j, a), ("k", k, a), ("s", s, b), ("t", col, b)] {
        if v >= bound {
            return Err(Error::IndexOutOfRange(format!("{name} = {v} >= {bound}")));
        }
    }
    let f = t.field();
    let slice = |l: usize| t.slice(&Covector::basis(f, Mode::A, a, l));
    let (xi, xj, xk) = (slice(i)?, slice(j)?, slice(k)?);
    let mut acc = f.zero();
    for u in 0..b {
        for v in 0..b {
            let minor = if b == 1 { f.one() } else { xk.minor_matrix(u, v).det()? };
            if minor.is_zero() {
                continue;
            }
            let inner = &(&xi[(u, col)] * &xj[(s, v)]) - &(&xi[(s, v)] * &xj[(u, col)]);
            let term = &minor * &inner;
            acc = if (u + v) % 2 == 0 { &acc + &term } else { &acc - &term };
        }
    }
    Ok(acc)
}

/// The degree-9 equation of `sigma_4` on a 3x3x3 tensor:
/// `det(K) / det(X0)` for `K = strassen_commutator(T, frame)`.
///
/// `det(K)` has degree 12 and is divisible by the cubic `det(X0)`, since
/// `K = det(X0) [A1, A2] X0` gives `det K = det(X0)^4 det[A1, A2]` and
/// `det(X0)^3 det[A1, A2]` is a polynomial.
pub fn sigma4_degree9(t: &Tensor3, frame: &[Covector; 3]) -> Result<Scalar> {
    if t.dims() != [3, 3, 3] {
        return Err(Error::Dimension(format!("need a 3x3x3 tensor, got {:?}", t.dims())));
    }
    let d0 = t.slice(&frame[0])?.det()?;
    if d0.is_zero() {
        return Err(Error::SingularBase);
    }
    let k = strassen_commutator(t, &frame[0], &frame[1], &frame[2])?;
    Ok(k.det()?.checked_div(&d0).expect("nonzero divisor"))
}

/// Draws seeded frames until the base slice is invertible, then evaluates
/// [`sigma4_degree9`].
pub fn sigma4_degree9_seeded(t: &Tensor3, seed: u64, max_draws: usize) -> Result<(Scalar, [Covector; 3])> {
    for draw in 0..max_draws {
        let mut rng = SplitMix64::for_trial(seed, draw as u64);
        let frame = draw_covectors::<3>(t.field(), t.dims()[0], &mut rng);
        match sigma4_degree9(t, &frame) {
            Ok(v) => return Ok((v, frame)),
            Err(Error::SingularBase) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Inconclusive(format!(
        "all {max_draws} frames had a singular base slice"
    )))
}

pub(crate) fn draw_covectors<const N: usize>(field: Field, dim: usize, rng: &mut SplitMix64) -> [Covector; N] {
    std::array::from_fn(|_| Covector::random(field, Mode::A, dim, rng))
}

fn draw_vec(field: Field, dim: usize, n: usize, rng: &mut SplitMix64) -> Vec<Covector> {
    (0..n).map(|_| Covector::random(field, Mode::A, dim, rng)).collect()
}

/// Which defect a certificate is built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    Strassen,
    Mixed,
    /// `perm` is a 0-based one-line permutation of `0..k`.
    KFold {
        k: usize,
        perm: Vec<usize>,
    },
}

impl Method {
    /// The k-fold method with the reversal `(k, ..., 1)`.
    pub fn kfold(k: usize) -> Method {
        Method::KFold {
            k,
            perm: (0..k).rev().collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Strassen => "strassen",
            Method::Mixed => "mixed",
            Method::KFold { .. } => "kfold",
        }
    }

    /// Number of covectors one trial draws.
    pub fn covector_count(&self) -> usize {
        match self {
            Method::Strassen => 3,
            Method::Mixed => 4,
            Method::KFold { k, .. } => k + 1,
        }
    }

    /// Largest defect rank a tensor of border rank `r` can reach per unit
    /// of `r - b`.
    pub fn rank_factor(&self) -> usize {
        match self {
            Method::Strassen => 2,
            Method::Mixed => 3,
            Method::KFold { k, .. } => 2 * (k - 1),
        }
    }

    /// The lower bound `b + ceil(rho / factor)`.
    pub fn implied_bound(&self, b: usize, rho: usize) -> usize {
        b + rho.div_ceil(self.rank_factor())
    }

    fn validate(&self) -> Result<()> {
        match self {
            Method::KFold { k, perm } => check_perm(*k, perm),
            _ => Ok(()),
        }
    }

    /// Base slices that must be invertible for a trial to count.
    fn base_indices(&self) -> &'static [usize] {
        match self {
            Method::Mixed => &[0, 1],
            _ => &[0],
        }
    }

    /// The defect matrix on a compressed tensor.
    pub fn defect(&self, t: &Tensor3, covectors: &[Covector]) -> Result<Matrix> {
        if covectors.len() != self.covector_count() {
            return Err(Error::InvalidParameter(format!(
                "{} needs {} covectors, got {}",
                self.name(),
                self.covector_count(),
                covectors.len()
            )));
        }
        match self {
            Method::Strassen => strassen_commutator(t, &covectors[0], &covectors[1], &covectors[2]),
            Method::Mixed => mixed_defect(t, &covectors[0], &covectors[1], &covectors[2], &covectors[3]),
            Method::KFold { perm, .. } => kfold_defect(t, &covectors[0], &covectors[1..], perm),
        }
    }

    pub fn from_parts(name: &str, k: Option<usize>, perm: Option<Vec<usize>>) -> Result<Method> {
        let m = match name {
            "strassen" => Method::Strassen,
            "mixed" => Method::Mixed,
            "kfold" => {
                let k = k.unwrap_or(3);
                match perm {
                    Some(p) => Method::KFold { k, perm: p },
                    None => Method::kfold(k),
                }
            }
            other => return Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        };
        m.validate()?;
        Ok(m)
    }
}

/// A replayable border-rank lower bound.
///
/// Covectors live on the A-factor of the compressed tensor obtained by
/// moving `mode` to the front; the compression is deterministic, so a
/// replay recomputes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub method: String,
    pub mode: Mode,
    pub covectors: Vec<Vec<String>>,
    pub rank: Option<usize>,
    pub b: usize,
    pub lower_bound: Option<usize>,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub seed: u64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    pub conclusive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// 1-based one-line notation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<usize>>,
}

impl BoundCertificate {
    pub fn method(&self) -> Result<Method> {
        let perm = self
            .perm
            .as_ref()
            .map(|p| {
                p.iter()
                    .map(|&x| x.checked_sub(1).ok_or_else(|| Error::Parse("perm is 1-based".into())))
                    .collect()
            })
            .transpose()?;
        Method::from_parts(&self.method, self.k, perm)
    }

    pub fn field(&self) -> Result<Field> {
        match (self.field.as_str(), self.modulus) {
            ("Q", None) => Ok(Field::Rational),
            ("gfp", Some(p)) => Field::prime(p),
            (f, m) => Err(Error::Parse(format!("bad field {f:?} with modulus {m:?}"))),
        }
    }
}

struct ModeOutcome {
    mode: Mode,
    b: usize,
    best: Option<(usize, u64, Vec<Covector>)>,
}

fn run_mode(t: &Tensor3, mode: Mode, method: &Method, trials: usize, seed: u64) -> Result<Option<ModeOutcome>> {
    let (c, _) = t.with_front(mode).compress();
    let [a, b, cc] = c.dims();
    if b != cc {
        return Ok(None);
    }
    if b == 0 {
        return Ok(Some(ModeOutcome {
            mode,
            b,
            best: Some((0, 0, Vec::new())),
        }));
    }
    let field = t.field();
    let mut best: Option<(usize, u64, Vec<Covector>)> = None;
    for trial in 0..trials as u64 {
        let mut rng = SplitMix64::for_trial(seed, trial);
        let covs = draw_vec(field, a, method.covector_count(), &mut rng);
        let mut singular = false;
        for &i in method.base_indices() {
            if c.slice(&covs[i])?.det()?.is_zero() {
                singular = true;
            }
        }
        if singular {
            continue;
        }
        let rho = method.defect(&c, &covs)?.rank();
        if best.as_ref().is_none_or(|(r, _, _)| rho > *r) {
            best = Some((rho, trial, covs));
        }
    }
    Ok(Some(ModeOutcome { mode, b, best }))
}

/// Certifies a border-rank lower bound by sampling defect ranks.
///
/// Every factor whose compressed complementary pair is square is tried; the
/// best bound wins (ties go to the earlier factor). When every trial of
/// every eligible factor hits a singular base slice the certificate is
/// returned with `conclusive = false` and no bound.
pub fn lower_bound(t: &Tensor3, method: &Method, trials: usize, seed: u64) -> Result<BoundCertificate> {
    method.validate()?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let mut chosen: Option<ModeOutcome> = None;
    let mut fallback: Option<ModeOutcome> = None;
    for mode in Mode::ALL {
        let Some(out) = run_mode(t, mode, method, trials, seed)? else {
            continue;
        };
        match (&out.best, &chosen) {
            (Some((rho, _, _)), Some(prev)) => {
                let (prho, _, _) = prev.best.as_ref().unwrap();
                if method.implied_bound(out.b, *rho) > method.implied_bound(prev.b, *prho) {
                    chosen = Some(out);
                }
            }
            (Some(_), None) => chosen = Some(out),
            (None, _) => {
                if fallback.is_none() {
                    fallback = Some(out);
                }
            }
        }
    }
    let out = chosen.or(fallback).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no factor of the {:?} tensor has square compressed complementary factors (multilinear ranks {:?})",
            t.dims(),
            t.multilinear_ranks()
        ))
    })?;
    let field = t.field();
    let (k, perm) = match method {
        Method::KFold { k, perm } => (Some(*k), Some(perm.iter().map(|p| p + 1).collect())),
        _ => (None, None),
    };
    let mut cert = BoundCertificate {
        method: method.name().to_string(),
        mode: out.mode,
        covectors: Vec::new(),
        rank: None,
        b: out.b,
        lower_bound: None,
        field: field.tag().to_string(),
        modulus: field.modulus(),
        seed,
        trials,
        trial: None,
        conclusive: false,
        k,
        perm,
    };
    if let Some((rho, trial, covs)) = out.best {
        cert.covectors = covs.iter().map(Covector::to_strings).collect();
        cert.rank = Some(rho);
        cert.lower_bound = Some(method.implied_bound(out.b, rho));
        cert.trial = (out.b > 0).then_some(trial);
        cert.conclusive = true;
    }
    Ok(cert)
}

/// Result of re-evaluating a certificate's covectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReplay {
    pub rank: Option<usize>,
    pub lower_bound: Option<usize>,
    pub matches: bool,
}

/// Recomputes the defect rank from the recorded covectors.
pub fn replay_bound(t: &Tensor3, cert: &BoundCertificate) -> Result<BoundReplay> {
    let field = cert.field()?;
    if field != t.field() {
        return Err(Error::FieldMismatch(format!(
            "certificate over {} but tensor over {}",
            cert.field,
            t.field().tag()
        )));
    }
    let method = cert.method()?;
    let (c, _) = t.with_front(cert.mode).compress();
    let b = c.dims()[1];
    if !cert.conclusive {
        return Ok(BoundReplay {
            rank: None,
            lower_bound: None,
            matches: cert.rank.is_none() && cert.lower_bound.is_none() && b == cert.b,
        });
    }
    let rank = if b == 0 {
        0
    } else {
        let covs = cert
            .covectors
            .iter()
            .map(|c| Covector::parse(field, Mode::A, c))
            .collect::<Result<Vec<_>>>()?;
        method.defect(&c, &covs)?.rank()
    };
    let lower_bound = method.implied_bound(b, rank);
    Ok(BoundReplay {
        rank: Some(rank),
        lower_bound: Some(lower_bound),
        matches: b == cert.b && Some(rank) == cert.rank && Some(lower_bound) == cert.lower_bound,
    })
}
