//! The `modmac` command line.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on a usage
//! error. All mathematical output is JSON unless `--out csv` is requested
//! and supported by the subcommand.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::macdonald::{all_q, gram_of, schur_q_oracle, solve_q, specialize_q0};
use crate::newton::{check_newton, creation_by_recursion, creation_from_ring, PowerMinusOne, Tabulated};
use crate::operator::{x0_apply_diff, x0_apply_series, X0Matrix};
use crate::partitions::{all_partitions, enumerate, Partition, PartitionClass};
use crate::scalars::{Cyc, CyclotomicField, Params};
use crate::symfunc::ModularRing;
use crate::verify;

#[derive(Parser, Debug)]
#[command(
    name = "modmac",
    version,
    about = "Exact modular Macdonald functions and their identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate partitions of n in a class.
    Partitions {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "all")]
        class: ClassArg,
    },
    /// Expand q_lambda (or q_n) in power sums.
    Qexpand {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        target: Target,
    },
    /// Check the generalized Newton identity for every lambda with |lambda| <= n.
    NewtonVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
        /// Additional seeded random rational d-sequences to check.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// The matrix of X0 on the m-reduced q-basis of degree n.
    X0Matrix {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// X0 applied to q_lambda, cross-checked between both implementations.
    X0Apply {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// The modular Macdonald function Q_lambda.
    Macdonald {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// Gram matrix of all Q_lambda of degree n.
    Gram {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: usize,
    },
    /// Q_lambda at q = 0 (symbolic mode), compared with Schur Q when m = 2.
    Specialize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lambda: String,
    },
    /// Run every identity check up to degree max-n.
    Selfcheck {
        #[command(flatten)]
        common: Common,
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, value_enum, default_value = "symbolic")]
    mode: ModeArg,
    /// Evaluation point for q: a rational ("3", "1/2") or cyclotomic literal ("xi^2").
    #[arg(long)]
    q0: Option<String>,
    /// Evaluation point for c; defaults to xi^-1.
    #[arg(long)]
    c0: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    out: OutArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    All,
    MRegular,
    MReduced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Symbolic,
    Eval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutArg {
    Json,
    Csv,
}

/// Why a command did not succeed.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) | Error::PoleAtSpecialization { .. } => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Attributes partition-shape errors to `--lambda`.
fn lambda_err(e: Error) -> Failure {
    match e {
        Error::NotReduced(_) | Error::NotStrict(_) | Error::InvalidPartition(_) => {
            Failure::Usage(format!("--lambda: {e}"))
        }
        other => other.into(),
    }
}

type CmdResult = std::result::Result<Output, Failure>;

/// What a command prints, and whether it counts as a verification failure.
struct Output {
    text: String,
    verified: bool,
}

impl Output {
    fn json(value: &Value) -> Self {
        Output::checked(value, true)
    }

    fn checked(value: &Value, verified: bool) -> Self {
        Output {
            text: serde_json::to_string_pretty(value).expect("serializable") + "\n",
            verified,
        }
    }
}

impl Common {
    fn params(&self) -> std::result::Result<Params, Failure> {
        let field = CyclotomicField::get(self.m).map_err(|e| Failure::Usage(format!("--m: {e}")))?;
        match self.mode {
            ModeArg::Symbolic => {
                if self.q0.is_some() || self.c0.is_some() {
                    return Err(Failure::Usage("--q0/--c0 require --mode eval".into()));
                }
                Ok(Params::symbolic(self.m)?)
            }
            ModeArg::Eval => {
                let q0 = self
                    .q0
                    .as_deref()
                    .ok_or_else(|| Failure::Usage("--q0 is required with --mode eval".into()))?;
                let q0 = Cyc::parse(&field, q0).map_err(|e| Failure::Usage(format!("--q0: {e}")))?;
                let c0 = match &self.c0 {
                    Some(s) => Cyc::parse(&field, s).map_err(|e| Failure::Usage(format!("--c0: {e}")))?,
                    None => Cyc::xi_pow(&field, -1),
                };
                Params::eval(q0, c0).map_err(|e| Failure::Usage(format!("--q0/--c0: {e}")))
            }
        }
    }

    fn ring(&self) -> std::result::Result<ModularRing, Failure> {
        Ok(ModularRing::new(self.params()?))
    }

    fn json_only(&self, command: &str) -> std::result::Result<(), Failure> {
        if self.out == OutArg::Csv {
            return Err(Failure::Usage(format!("--out: csv is not available for {command}")));
        }
        Ok(())
    }
}

fn parse_lambda(s: &str) -> std::result::Result<Partition, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("--lambda: {e}")))
}

fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::Parse {
        input: "csv".into(),
        reason: e.to_string(),
    };
    writer.write_record(header).map_err(to_err)?;
    for row in rows {
        writer.write_record(row).map_err(to_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Parse {
        input: "csv".into(),
        reason: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn partitions_cmd(common: &Common, n: usize, class: ClassArg) -> CmdResult {
    let class = match class {
        ClassArg::All => PartitionClass::All,
        ClassArg::MRegular => PartitionClass::Regular,
        ClassArg::MReduced => PartitionClass::Reduced,
    };
    let ps = enumerate(n, class, common.m).map_err(|e| Failure::Usage(format!("--m: {e}")))?;
    match common.out {
        OutArg::Json => Ok(Output::json(&Value::from(
            ps.iter().map(Partition::to_json).collect::<Vec<_>>(),
        ))),
        OutArg::Csv => {
            let rows: Vec<Vec<String>> = ps
                .iter()
                .map(|p| vec![p.parts().iter().map(usize::to_string).collect::<Vec<_>>().join(" ")])
                .collect();
            Ok(Output {
                text: csv_table(&["partition".into()], &rows)?,
                verified: true,
            })
        }
    }
}

fn qexpand_cmd(common: &Common, target: &Target) -> CmdResult {
    common.json_only("qexpand")?;
    let ring = common.ring()?;
    let lambda = match (&target.lambda, target.n) {
        (Some(s), _) => parse_lambda(s)?,
        (None, Some(n)) => Partition::row(n),
        (None, None) => return Err(Failure::Usage("one of --n or --lambda is required".into())),
    };
    let p = ring.qprod(&lambda).map_err(lambda_err)?;
    Ok(Output::json(
        &json!({"lambda": lambda.to_json(), "expansion": p.to_json()}),
    ))
}

fn newton_cmd(common: &Common, n: usize, random: usize) -> CmdResult {
    common.json_only("newton-verify")?;
    let ring = common.ring()?;
    let params = ring.params().clone();
    let instance = PowerMinusOne(params.clone());
    let creation = creation_from_ring(&ring, n)?;
    let mut reports = Vec::new();
    let mut ok = true;
    for lambda in (1..=n).flat_map(all_partitions) {
        let r = check_newton(&ring, &lambda, &instance, &creation)?;
        ok &= r.ok();
        let mut v = r.to_json();
        v["sequence"] = json!("q^n-1");
        reports.push(v);
    }
    for i in 0..random {
        let seed = common.seed.wrapping_add(i as u64);
        let d = Tabulated::random(params.field(), n, seed);
        let creation = creation_by_recursion(&ring, &d, n)?;
        for lambda in (1..=n).flat_map(all_partitions) {
            let r = check_newton(&ring, &lambda, &d, &creation)?;
            ok &= r.ok();
            let mut v = r.to_json();
            v["sequence"] = json!(format!("random(seed={seed})"));
            reports.push(v);
        }
    }
    Ok(Output::checked(&Value::from(reports), ok))
}

fn x0_matrix_cmd(common: &Common, n: usize) -> CmdResult {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let ring = common.ring()?;
    let mx = X0Matrix::build(&ring, n)?;
    match common.out {
        OutArg::Json => Ok(Output::json(&mx.to_json())),
        OutArg::Csv => Ok(Output {
            text: mx.to_csv()?,
            verified: true,
        }),
    }
}

fn x0_apply_cmd(common: &Common, lambda: &str) -> CmdResult {
    common.json_only("x0-apply")?;
    let lambda = parse_lambda(lambda)?;
    let ring = common.ring()?;
    let series = x0_apply_series(&ring, &lambda).map_err(lambda_err)?;
    let diff = x0_apply_diff(&ring, &ring.qprod(&lambda).map_err(lambda_err)?)?;
    let agree = series == diff;
    let mut out = json!({"lambda": lambda.to_json(), "result": series.to_json(), "implementations_agree": agree});
    if !agree {
        out["residual"] = (&series - &diff).to_json();
    }
    Ok(Output::checked(&out, agree))
}

fn macdonald_cmd(common: &Common, lambda: &str) -> CmdResult {
    common.json_only("macdonald")?;
    let lambda = parse_lambda(lambda)?;
    let ring = common.ring()?;
    Ok(Output::json(&solve_q(&ring, &lambda).map_err(lambda_err)?.to_json()))
}

fn gram_cmd(common: &Common, n: usize) -> CmdResult {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let ring = common.ring()?;
    let family = all_q(&ring, n)?;
    let g = gram_of(&ring, &family)?;
    let order: Vec<&Partition> = family.iter().map(|q| &q.lambda).collect();
    match common.out {
        OutArg::Json => Ok(Output::json(&json!({
            "m": ring.m(),
            "n": n,
            "order": order.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "entries": g.iter().map(|row| row.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }))),
        OutArg::Csv => {
            let mut header = vec!["row".to_string()];
            header.extend(order.iter().map(|p| p.to_string()));
            let rows: Vec<Vec<String>> = order
                .iter()
                .zip(&g)
                .map(|(p, row)| {
                    std::iter::once(p.to_string())
                        .chain(row.iter().map(|x| x.to_string()))
                        .collect()
                })
                .collect();
            Ok(Output {
                text: csv_table(&header, &rows)?,
                verified: true,
            })
        }
    }
}

fn specialize_cmd(common: &Common, lambda: &str) -> CmdResult {
    common.json_only("specialize")?;
    let lambda = parse_lambda(lambda)?;
    let ring = common.ring()?;
    let q = solve_q(&ring, &lambda).map_err(lambda_err)?;
    let at_zero = specialize_q0(&ring, &q)?;
    let mut out = json!({"m": ring.m(), "lambda": lambda.to_json(), "q0": at_zero.to_json()});
    let mut verified = true;
    if ring.m() == 2 && lambda.is_strict() {
        let matches = at_zero == schur_q_oracle(&lambda)?;
        out["schur_q_match"] = json!(matches);
        verified = matches;
    }
    Ok(Output::checked(&out, verified))
}

fn selfcheck_cmd(common: &Common, max_n: usize) -> CmdResult {
    if common.mode != ModeArg::Symbolic || common.q0.is_some() {
        return Err(Failure::Usage("--mode: selfcheck runs both modes itself".into()));
    }
    let results = verify::selfcheck(common.m, max_n, common.seed).map_err(|e| Failure::Usage(format!("--m: {e}")))?;
    let ok = results.iter().all(verify::CheckResult::passed);
    match common.out {
        OutArg::Json => Ok(Output::checked(
            &json!({"m": common.m, "max_n": max_n, "passed": ok, "checks": results.iter().map(|r| r.to_json()).collect::<Vec<_>>()}),
            ok,
        )),
        OutArg::Csv => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.cases.to_string(),
                        if r.passed() { "ok" } else { "fail" }.to_string(),
                        r.failure.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            let header = ["check", "cases", "status", "failure"].map(String::from);
            Ok(Output {
                text: csv_table(&header, &rows)?,
                verified: ok,
            })
        }
    }
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Partitions { common, n, class } => partitions_cmd(common, *n, *class),
        Command::Qexpand { common, target } => qexpand_cmd(common, target),
        Command::NewtonVerify { common, n, random } => newton_cmd(common, *n, *random),
        Command::X0Matrix { common, n } => x0_matrix_cmd(common, *n),
        Command::X0Apply { common, lambda } => x0_apply_cmd(common, lambda),
        Command::Macdonald { common, lambda } => macdonald_cmd(common, lambda),
        Command::Gram { common, n } => gram_cmd(common, *n),
        Command::Specialize { common, lambda } => specialize_cmd(common, lambda),
        Command::Selfcheck { common, max_n } => selfcheck_cmd(common, *max_n),
    };
    match result {
        Ok(out) => {
            let _ = stdout.write_all(out.text.as_bytes());
            if out.verified {
                0
            } else {
                let _ = writeln!(stderr, "verification failed");
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {msg}");
            2
        }
        Err(Failure::Verification(msg)) => {
            let _ = writeln!(stderr, "verification failed: {msg}");
            1
        }
    }
}
