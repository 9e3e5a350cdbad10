use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use serde_json::Value;

use secant_core::coercive::{exclusion_test_on, replay_exclusion, ContractionTemplate, ExclusionVerdict};
use secant_core::io::{emit_tensor, parse_tensor};
use secant_core::membership::{comm_membership, replay_verdict, sigma3_membership, sigma4_test, Outcome, Verdict};
use secant_core::rep::{compare_theta_oracle, lemma_table, theta_even_sweep, verify_decomp_dims, DecompKind};
use secant_core::rng::SplitMix64;
use secant_core::strassen::{eval_p, lower_bound, replay_bound, strassen_commutator, BoundCertificate, Method};
use secant_core::witness::{make_witness, WitnessRecipe};
use secant_core::{Covector, Field, Mode, Tensor3};

use crate::{
    BoundArgs, BuiltinTemplate, CoerciveArgs, Command, FieldArg, FieldOpts, MembershipArgs, MethodArg, ReplayArgs,
    Suite, TargetArg, TemplateArgs, VerifyArgs, WitnessArgs, WitnessKindArg,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Affirmative = 0,
    Negative = 1,
    Usage = 2,
    Inconclusive = 3,
}

pub struct Report {
    pub document: String,
    pub summary: String,
    pub status: Status,
}

impl Report {
    fn new(doc: &impl Serialize, summary: String, status: Status) -> Result<Self> {
        Ok(Report {
            document: serde_json::to_string_pretty(doc)?,
            summary,
            status,
        })
    }

    fn save(self, out: Option<&Path>) -> Result<Self> {
        if let Some(path) = out {
            fs::write(path, format!("{}\n", self.document)).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(self)
    }
}

pub fn dispatch(command: Command) -> Result<Report> {
    match command {
        Command::Witness(a) => witness(a),
        Command::Bound(a) => bound(a),
        Command::Coercive(a) => coercive(a),
        Command::Membership(a) => membership(a),
        Command::TemplateCheck(a) => template_check(a),
        Command::Verify(a) => verify(a),
        Command::Replay(a) => replay(a),
    }
}

fn field(opts: &FieldOpts) -> Result<Field> {
    Ok(match opts.field {
        FieldArg::Q => Field::Rational,
        FieldArg::Gfp => Field::prime(opts.modulus)?,
    })
}

fn read_tensor(path: &Path) -> Result<Tensor3> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_tensor(&text).with_context(|| format!("parsing {}", path.display()))
}

fn witness(a: WitnessArgs) -> Result<Report> {
    let field = field(&a.field)?;
    let recipe = match a.kind {
        WitnessKindArg::RandomSum => {
            let dims = a.dims.context("--dims is required for a random sum")?;
            let rank = a.rank.context("--rank is required for a random sum")?;
            WitnessRecipe::random_sum(rank, dims, a.seed, field)
        }
        WitnessKindArg::Matmul => {
            let [m, n, p] = a.matmul.context("--matmul m,n,p is required")?;
            WitnessRecipe::matmul(m, n, p, field)
        }
    };
    let t = make_witness(&recipe)?;
    let summary = format!("witness {:?} dims {:?} over {}", recipe.kind, t.dims(), field.tag());
    Report {
        document: emit_tensor(&t),
        summary,
        status: Status::Affirmative,
    }
    .save(a.out.as_deref())
}

fn bound(a: BoundArgs) -> Result<Report> {
    let t = read_tensor(&a.common.tensor)?;
    let name = match a.method {
        MethodArg::Strassen => "strassen",
        MethodArg::Mixed => "mixed",
        MethodArg::Kfold => "kfold",
    };
    let perm = match a.perm {
        Some(p) => {
            ensure!(!p.contains(&0), "--perm is 1-based");
            Some(p.iter().map(|x| x - 1).collect())
        }
        None => None,
    };
    let method = Method::from_parts(name, a.k, perm)?;
    let cert = lower_bound(&t, &method, a.common.trials, a.common.seed)?;
    let (summary, status) = match cert.lower_bound {
        None => (
            "inconclusive: every trial hit a singular base slice".to_string(),
            Status::Inconclusive,
        ),
        Some(l) => {
            let mut line = format!(
                "{} on factor {:?}: b = {}, defect rank {}, border rank >= {l}",
                cert.method,
                cert.mode,
                cert.b,
                cert.rank.unwrap_or(0)
            );
            match a.expect {
                Some(want) if l < want => {
                    line.push_str(&format!(" (below requested {want})"));
                    (line, Status::Negative)
                }
                _ => (line, Status::Affirmative),
            }
        }
    };
    Report::new(&cert, summary, status)?.save(a.common.out.as_deref())
}

fn coercive(a: CoerciveArgs) -> Result<Report> {
    let t = read_tensor(&a.common.tensor)?;
    let mode: Mode = a.mode.parse()?;
    let v = exclusion_test_on(&t, mode, a.r, a.s, a.common.trials, a.common.seed)?;
    let (summary, status) = if v.excluded() {
        (
            format!(
                "excluded from sigma_{}: nonzero (r, s) = ({}, {}) defect",
                a.r, a.r, a.s
            ),
            Status::Negative,
        )
    } else {
        let note = v
            .diagnostic
            .clone()
            .unwrap_or_else(|| format!("all {} defects vanish", v.trials));
        (format!("consistent with sigma_{}: {note}", a.r), Status::Affirmative)
    };
    Report::new(&v, summary, status)?.save(a.common.out.as_deref())
}

fn membership(a: MembershipArgs) -> Result<Report> {
    let t = read_tensor(&a.common.tensor)?;
    let (trials, seed) = (a.common.trials, a.common.seed);
    let v = match a.target {
        TargetArg::Sigma3 => sigma3_membership(&t, trials, seed, a.strict)?,
        TargetArg::Sigma4 => sigma4_test(&t, trials, seed)?,
        TargetArg::Comm => {
            let r = a.r.context("--r is required for --target comm")?;
            comm_membership(&t, r, a.factor.parse()?, trials, seed)?
        }
    };
    let status = match v.outcome {
        Outcome::Member | Outcome::Consistent => Status::Affirmative,
        Outcome::NotMember => Status::Negative,
        Outcome::Inconclusive => Status::Inconclusive,
    };
    let summary = format!("{} r = {}: {:?}", v.target, v.r, v.outcome);
    Report::new(&v, summary, status)?.save(a.common.out.as_deref())
}

fn template_check(a: TemplateArgs) -> Result<Report> {
    let template = match (a.builtin, a.sizes, a.groups) {
        (Some(b), _, _) => {
            let s = a.s.context("--s is required for a builtin template")?;
            match b {
                BuiltinTemplate::Strassen => ContractionTemplate::strassen(a.r, s)?,
                BuiltinTemplate::Sextuple => ContractionTemplate::sextuple(a.r, s)?,
            }
        }
        (None, Some(sizes), Some(groups)) => {
            let (x, y) = a.pair;
            ensure!(x >= 1 && y >= 1, "--pair is 1-based");
            let groups = ContractionTemplate::parse_groups(&groups)?;
            ContractionTemplate::new(sizes, groups, (x - 1, y - 1))?
        }
        _ => bail!("give --builtin or both --sizes and --groups"),
    };
    let report = template.check(a.r)?;
    let summary = format!(
        "{}-coercive: {} ({} surviving of {} enumerated)",
        report.r, report.coercive, report.surviving, report.enumerated
    );
    let status = if report.coercive {
        Status::Affirmative
    } else {
        Status::Negative
    };
    Report::new(&report, summary, status)
}

fn verify(a: VerifyArgs) -> Result<Report> {
    match a.suite {
        Suite::TTable => t_table(&a),
        Suite::Decomp => decomp(&a),
        Suite::ThetaOracle => theta_oracle(&a),
        Suite::StrassenPolyOracle => strassen_poly_oracle(&a),
    }
}

fn t_table(a: &VerifyArgs) -> Result<Report> {
    ensure!(a.smax >= 1 && a.tmax >= 1, "--smax and --tmax must be at least 1");
    let table = lemma_table(a.smax, a.tmax);
    let sweep = theta_even_sweep(a.rmax.unwrap_or(20));
    let unexpected: Vec<(usize, usize)> = table
        .iter()
        .filter(|c| c.unexpected_zero())
        .map(|c| (c.s, c.t))
        .collect();
    let boundary = table.iter().find(|c| (c.s, c.t) == (1, 1)).map(|c| c.value.clone());
    let sweep_bad: Vec<(usize, usize)> = sweep
        .iter()
        .filter(|(c, uniform)| c.zero || !uniform)
        .map(|(c, _)| (c.s, c.t))
        .collect();
    let even_r: Vec<Value> = sweep
        .iter()
        .map(|(c, uniform)| serde_json::json!({ "r": 2 * c.s + c.t, "report": c, "uniform_sign": uniform }))
        .collect();
    let doc = serde_json::json!({
        "suite": "t-table",
        "table": table,
        "unexpected_zeros": unexpected,
        "boundary_1_1": boundary,
        "even_r": even_r,
        "even_r_failures": sweep_bad,
    });
    let ok = unexpected.is_empty() && sweep_bad.is_empty();
    let summary = format!(
        "{} Lemma cells, {} unexpected zeros; {} even-r cells, {} failures",
        table.len(),
        unexpected.len(),
        sweep.len(),
        sweep_bad.len()
    );
    Report::new(&doc, summary, if ok { Status::Affirmative } else { Status::Negative })
}

fn decomp(a: &VerifyArgs) -> Result<Report> {
    let p = a.pmax;
    let mut kinds = Vec::new();
    for s in 1..=p {
        kinds.push(DecompKind::Wedge2Sym { s });
    }
    for x in 0..=p {
        for y in 0..=p {
            kinds.push(DecompKind::WedgeWedge { a: x, b: y });
        }
    }
    for a1 in 0..=p {
        for a2 in 0..=a1 {
            for b in 0..=p {
                kinds.push(DecompKind::PieriTwoRow { a1, a2, b });
            }
        }
    }
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for kind in kinds {
        for n in 1..=a.nmax {
            checked += 1;
            if !verify_decomp_dims(kind, n)? {
                failures.push(format!("{kind:?} on C^{n}"));
            }
        }
    }
    let doc = serde_json::json!({
        "suite": "decomp",
        "pmax": p,
        "nmax": a.nmax,
        "checked": checked,
        "failures": failures,
    });
    let summary = format!("{checked} identities checked, {} failures", failures.len());
    let status = if failures.is_empty() {
        Status::Affirmative
    } else {
        Status::Negative
    };
    Report::new(&doc, summary, status)
}

fn theta_oracle(a: &VerifyArgs) -> Result<Report> {
    let pairs: Vec<(usize, usize)> = match a.rmax {
        None => vec![(2, 1), (3, 1), (4, 1)],
        Some(rmax) => (2..=rmax)
            .flat_map(|r| (1..=r / 2).map(move |s| (r, s)))
            .filter(|(r, s)| r + s <= secant_core::rep::THETA_ORACLE_GUARD)
            .collect(),
    };
    let cmp = compare_theta_oracle(&pairs)?;
    let bad: Vec<String> = cmp
        .rows
        .iter()
        .filter(|r| !r.agrees)
        .map(|r| format!("({}, {}): theta {} oracle {}", r.r, r.s, r.theta, r.oracle))
        .collect();
    let summary = format!(
        "normalization {}; {} of {} pairs disagree{}",
        cmp.normalization.as_deref().unwrap_or("undetermined"),
        bad.len(),
        cmp.rows.len(),
        if bad.is_empty() {
            String::new()
        } else {
            format!(": {}", bad.join(", "))
        }
    );
    let doc = serde_json::json!({ "suite": "theta-oracle", "comparison": cmp });
    Report::new(
        &doc,
        summary,
        if cmp.consistent {
            Status::Affirmative
        } else {
            Status::Negative
        },
    )
}

#[derive(Serialize)]
struct PolyOracle {
    suite: &'static str,
    field: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    seed: u64,
    tensors: usize,
    comparisons: usize,
    nonzero: usize,
    sign: Option<i8>,
    plus_mismatches: usize,
    minus_mismatches: usize,
}

fn strassen_poly_oracle(a: &VerifyArgs) -> Result<Report> {
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let field = field(&a.field)?;
    let mut doc = PolyOracle {
        suite: "strassen-poly-oracle",
        field: field.tag(),
        modulus: field.modulus(),
        seed: a.seed,
        tensors: a.trials,
        comparisons: 0,
        nonzero: 0,
        sign: None,
        plus_mismatches: 0,
        minus_mismatches: 0,
    };
    for trial in 0..a.trials as u64 {
        let mut rng = SplitMix64::for_trial(a.seed, trial);
        let t = Tensor3::from_fn(field, [3, 3, 3], |_, _, _| field.sample(&mut rng, 9));
        let e = |l| Covector::basis(field, Mode::A, 3, l);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let m = strassen_commutator(&t, &e(k), &e(j), &e(i))?;
                    for s in 0..3 {
                        for col in 0..3 {
                            let p = eval_p(&t, i, j, k, s, col)?;
                            let q = &m[(s, col)];
                            doc.comparisons += 1;
                            doc.nonzero += usize::from(!q.is_zero());
                            doc.plus_mismatches += usize::from(&p != q);
                            doc.minus_mismatches += usize::from(!(&p + q).is_zero());
                        }
                    }
                }
            }
        }
    }
    if doc.nonzero > 0 {
        doc.sign = match (doc.plus_mismatches, doc.minus_mismatches) {
            (0, _) => Some(1),
            (_, 0) => Some(-1),
            _ => None,
        };
    }
    let summary = match doc.sign {
        Some(s) => format!(
            "eval_P = {s:+} x commutator entry on all {} comparisons",
            doc.comparisons
        ),
        None => format!(
            "no global sign: {} / {} mismatches against +/-",
            doc.plus_mismatches, doc.minus_mismatches
        ),
    };
    let status = if doc.sign.is_some() {
        Status::Affirmative
    } else {
        Status::Negative
    };
    Report::new(&doc, summary, status)
}

#[derive(Serialize)]
struct Check {
    detail: String,
    matches: bool,
}

#[derive(Serialize)]
struct ReplayDoc {
    kind: &'static str,
    checks: Vec<Check>,
    matches: bool,
}

fn replay(a: ReplayArgs) -> Result<Report> {
    let t = read_tensor(&a.tensor)?;
    let text = fs::read_to_string(&a.certificate).with_context(|| format!("reading {}", a.certificate.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.certificate.display()))?;
    let (kind, checks) = if value.get("method").is_some() {
        let cert: BoundCertificate = serde_json::from_value(value)?;
        let r = replay_bound(&t, &cert)?;
        let detail = format!("defect rank {:?}, lower bound {:?}", r.rank, r.lower_bound);
        (
            "bound",
            vec![Check {
                detail,
                matches: r.matches,
            }],
        )
    } else if value.get("test").and_then(Value::as_str) == Some("coercive") {
        let v: ExclusionVerdict = serde_json::from_value(value)?;
        let checks = match replay_exclusion(&t, &v)? {
            Some((detail, matches)) => vec![Check { detail, matches }],
            None => Vec::new(),
        };
        ("coercive", checks)
    } else if value.get("target").is_some() {
        let v: Verdict = serde_json::from_value(value)?;
        let checks = replay_verdict(&t, &v)?
            .into_iter()
            .map(|(detail, matches)| Check { detail, matches })
            .collect();
        ("membership", checks)
    } else {
        bail!("{} is not a certificate or verdict", a.certificate.display());
    };
    let matches = checks.iter().all(|c| c.matches);
    let summary = format!(
        "{kind} replay: {} checks, {}",
        checks.len(),
        if matches { "all match" } else { "MISMATCH" }
    );
    let doc = ReplayDoc { kind, checks, matches };
    Report::new(
        &doc,
        summary,
        if matches { Status::Affirmative } else { Status::Negative },
    )
}
