//! `secant`: border-rank certificates, secant membership tests and the
//! combinatorial verification suites.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "secant",
    version,
    about = "Exact tests for tensor border rank and secant varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded witness tensor
    Witness(WitnessArgs),
    /// Certify a border-rank lower bound from a commutator-type defect
    Bound(BoundArgs),
    /// Evaluate the (r, s)-coercive exclusion test
    Coercive(CoerciveArgs),
    /// Decide or test membership in sigma_3, sigma_4 or Comm^r
    Membership(MembershipArgs),
    /// Brute-force r-coercivity of a contraction template
    TemplateCheck(TemplateArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Re-evaluate a certificate or verdict against its tensor
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FieldArg {
    #[value(name = "Q")]
    Q,
    #[value(name = "gfp")]
    Gfp,
}

#[derive(Debug, Args)]
struct FieldOpts {
    /// Coefficient field
    #[arg(long, value_enum, default_value = "gfp")]
    field: FieldArg,
    /// Prime modulus for --field gfp
    #[arg(long, default_value_t = 2_147_483_647)]
    modulus: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WitnessKindArg {
    RandomSum,
    Matmul,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    #[arg(long, value_enum, default_value = "random-sum")]
    kind: WitnessKindArg,
    /// Dimensions a,b,c of a random sum
    #[arg(long, value_parser = parse_triple)]
    dims: Option<[usize; 3]>,
    /// Number of rank-one terms
    #[arg(long)]
    rank: Option<usize>,
    /// Sizes m,n,p of the matrix multiplication tensor
    #[arg(long, value_parser = parse_triple)]
    matmul: Option<[usize; 3]>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    field: FieldOpts,
    /// Also write the document to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Strassen,
    Mixed,
    Kfold,
}

#[derive(Debug, Args)]
struct Common {
    /// Tensor document to read
    #[arg(long)]
    tensor: PathBuf,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the document to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "strassen")]
    method: MethodArg,
    /// Number of products for kfold
    #[arg(long)]
    k: Option<usize>,
    /// Permutation for kfold in one-line notation, e.g. "3,1,2"
    #[arg(long, value_delimiter = ',')]
    perm: Option<Vec<usize>>,
    /// Exit 1 unless the certified bound reaches this value
    #[arg(long)]
    expect: Option<usize>,
}

#[derive(Debug, Args)]
struct CoerciveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Factor moved to the front before testing
    #[arg(long, default_value = "A")]
    mode: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Sigma3,
    Sigma4,
    Comm,
}

#[derive(Debug, Args)]
struct MembershipArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    target: TargetArg,
    /// r for --target comm
    #[arg(long)]
    r: Option<usize>,
    /// Factor for --target comm
    #[arg(long, default_value = "A")]
    factor: String,
    /// Run the sigma_3 Comm test on all three factors
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BuiltinTemplate {
    Strassen,
    Sextuple,
}

#[derive(Debug, Args)]
struct TemplateArgs {
    #[arg(long, value_enum, conflicts_with_all = ["sizes", "groups"])]
    builtin: Option<BuiltinTemplate>,
    /// Slot sizes, e.g. "1,2,1"
    #[arg(long, value_delimiter = ',', requires = "groups")]
    sizes: Option<Vec<usize>>,
    /// Groups of 1-based slots, e.g. "12,23"
    #[arg(long, requires = "sizes")]
    groups: Option<String>,
    /// 1-based pair of slots that must coincide
    #[arg(long, value_parser = parse_pair, default_value = "1,2")]
    pair: (usize, usize),
    #[arg(long)]
    r: usize,
    /// s for a builtin template
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    TTable,
    Decomp,
    ThetaOracle,
    StrassenPolyOracle,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 13)]
    smax: usize,
    #[arg(long, default_value_t = 13)]
    tmax: usize,
    /// Largest r for the even-r theta sweep or the oracle sweep
    #[arg(long)]
    rmax: Option<usize>,
    /// Largest parameter for the decomposition sweep
    #[arg(long, default_value_t = 6)]
    pmax: usize,
    /// Largest n for the decomposition sweep
    #[arg(long, default_value_t = 6)]
    nmax: usize,
    /// Random tensors for the polynomial oracle
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    field: FieldOpts,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Certificate or verdict document
    #[arg(long)]
    certificate: PathBuf,
    #[arg(long)]
    tensor: PathBuf,
}

fn parse_list(text: &str, len: usize) -> Result<Vec<usize>, String> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if parts.len() != len {
        return Err(format!("expected {len} comma-separated integers, got {}", parts.len()));
    }
    Ok(parts)
}

fn parse_triple(text: &str) -> Result<[usize; 3], String> {
    let v = parse_list(text, 3)?;
    Ok([v[0], v[1], v[2]])
}

fn parse_pair(text: &str) -> Result<(usize, usize), String> {
    let v = parse_list(text, 2)?;
    Ok((v[0], v[1]))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(report) => {
            let _ = writeln!(std::io::stdout().lock(), "{}", report.document);
            eprintln!("{}", report.summary);
            ExitCode::from(report.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::Status::Usage as u8)
        }
    }
}
