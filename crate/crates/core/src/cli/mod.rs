//! Command-line front end.
//!
//! Every command prints one JSON report on stdout. Exit codes: 0 on
//! success, 1 for validation and domain errors, 2 for I/O and parse errors
//! (including unknown flags).

pub mod matrix_file;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::dyadic::{verify_facts, DyadicParams, DyadicPoint, MAX_LEVEL};
use crate::harness::{
    collapse_experiment, generate_space, ratio_experiment, DepthLimits, GeneratorKind,
    GeneratorSpec,
};
use crate::metrize::{chain_metrize, chain_oracle, frink_check_with};
use crate::qcore::{classify, quasi_constant, snowflake, AnySpace, QuasiMetricSpace, Scalar};
use matrix_file::{format_matrix, parse_exact, parse_matrix, parse_value, write_atomic, Value};

pub const VERSION: &str = concat!("quasimetric ", env!("CARGO_PKG_VERSION"));

/// `verify_facts` touches every point, so it tolerates deeper truncations
/// than the matrix commands.
const FACTS_MAX_DEPTH: u32 = 20;

#[derive(Debug, Parser)]
#[command(
    name = "quasimetric",
    version,
    about = "Chain metrization of finite quasi-metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quasi-metric and triangle constants of a matrix.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// One label per line.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Chain closure of a matrix, with the (1/2K)ρ ≤ d ≤ ρ check.
    Metrize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Cross-check against brute-force chain enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Entrywise power ρ^p.
    Snowflake {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long)]
        output: PathBuf,
    },
    /// Dyadic counterexample experiments.
    Dyadic {
        /// Edge-length base, e.g. 2/5.
        #[arg(long)]
        a: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        check_facts: bool,
        #[arg(long)]
        ratios: bool,
        #[arg(long)]
        collapse: bool,
        #[arg(long)]
        emit_matrix: Option<PathBuf>,
        /// Emit the tent (both paths) of this point, e.g. 11/64.
        #[arg(long)]
        tent: Option<String>,
        /// Lift the depth guards.
        #[arg(long)]
        allow_deep: bool,
    },
    /// Write a random space.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Exponent for snowflaked-metric.
        #[arg(long)]
        p: Option<f64>,
        /// Perturbation size for perturbed (default 0.5).
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug)]
enum CliError {
    Domain(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

type CliResult<T> = Result<T, CliError>;

/// Run the CLI on `args` (including the program name). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            match writeln!(out, "{text}") {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: writing report: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> CliResult<Json> {
    match command {
        Command::Analyze { input, labels } => {
            let (space, digest) = read_space(&input, labels.as_deref())?;
            let body = match &space {
                AnySpace::Exact(s) => analyze(s),
                AnySpace::Float(s) => analyze(s),
            };
            Ok(with_header("analyze", &digest, body))
        }
        Command::Metrize {
            input,
            output,
            oracle,
            labels,
        } => {
            let (space, digest) = read_space(&input, labels.as_deref())?;
            let body = match &space {
                AnySpace::Exact(s) => metrize(s, &output, oracle)?,
                AnySpace::Float(s) => metrize(s, &output, oracle)?,
            };
            Ok(with_header("metrize", &digest, body))
        }
        Command::Snowflake { input, p, output } => {
            let (space, digest) = read_space(&input, None)?;
            let body = match &space {
                AnySpace::Exact(s) => {
                    let exp = parse_exact(&p)
                        .ok_or_else(|| CliError::Io(format!("cannot parse exponent {p:?}")))?;
                    snowflake_cmd(s, exp, &output)?
                }
                AnySpace::Float(s) => {
                    let exp = parse_value(&p)
                        .map(|v| v.to_f64())
                        .ok_or_else(|| CliError::Io(format!("cannot parse exponent {p:?}")))?;
                    snowflake_cmd(s, exp, &output)?
                }
            };
            Ok(with_header("snowflake", &digest, body))
        }
        Command::Dyadic {
            a,
            depth,
            check_facts,
            ratios,
            collapse,
            emit_matrix,
            tent,
            allow_deep,
        } => {
            let canonical = format!(
                "dyadic a={a} depth={depth} facts={check_facts} ratios={ratios} collapse={collapse} tent={}",
                tent.as_deref().unwrap_or("-")
            );
            let body = dyadic(DyadicArgs {
                a: &a,
                depth,
                check_facts,
                ratios,
                collapse,
                emit_matrix: emit_matrix.as_deref(),
                tent: tent.as_deref(),
                allow_deep,
            })?;
            Ok(with_header(
                "dyadic",
                &digest_of(canonical.as_bytes()),
                body,
            ))
        }
        Command::Gen {
            kind,
            n,
            seed,
            p,
            delta,
            output,
        } => {
            let param = if kind == "perturbed" { delta } else { p };
            let kind = GeneratorKind::parse(&kind, param).map_err(domain)?;
            let canonical = format!("gen kind={kind:?} n={n} seed={seed}");
            let space = generate_space(&GeneratorSpec { kind, n, seed }).map_err(domain)?;
            let body = match &space {
                AnySpace::Exact(s) => gen_body(s, &output)?,
                AnySpace::Float(s) => gen_body(s, &output)?,
            };
            let mut body = body;
            body["kind"] = json!(kind.name());
            body["seed"] = json!(seed);
            Ok(with_header("gen", &digest_of(canonical.as_bytes()), body))
        }
    }
}

fn digest_of(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn with_header(command: &str, digest: &str, mut body: Json) -> Json {
    body["command"] = json!(command);
    body["version"] = json!(VERSION);
    body["input_digest"] = json!(digest);
    body
}

fn read_space(input: &Path, labels: Option<&Path>) -> CliResult<(AnySpace, String)> {
    let bytes = std::fs::read(input).map_err(io_err(input))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Io(format!("{}: not UTF-8", input.display())))?;
    let grid =
        parse_matrix(&text).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let labels = match labels {
        Some(path) => Some(
            std::fs::read_to_string(path)
                .map_err(io_err(path))?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect(),
        ),
        None => None,
    };
    let space = grid.into_space(labels).map_err(domain)?;
    Ok((space, digest_of(&bytes)))
}

fn json_scalars<S: Scalar>(values: &[S]) -> Json {
    Json::Array(values.iter().map(Scalar::to_json).collect())
}

fn analyze<S: Scalar>(s: &QuasiMetricSpace<S>) -> Json {
    let a = classify(s);
    json!({
        "mode": s.mode(),
        "n": s.len(),
        "labels": s.labels(),
        "K": a.k.to_json(),
        "C": a.c.to_json(),
        "is_metric": a.is_metric,
        "is_ultrametric": a.is_ultrametric,
        "worst_triple_K": a.worst_triple_k,
        "worst_triple_C": a.worst_triple_c,
    })
}

fn metrize<S: Scalar>(s: &QuasiMetricSpace<S>, output: &Path, oracle: bool) -> CliResult<Json> {
    let closure = chain_metrize(s);
    let report = frink_check_with(s, &closure);
    let oracle = if oracle {
        let max_interior = s.len().saturating_sub(2);
        let brute = chain_oracle(s, max_interior).map_err(domain)?;
        let agrees = (0..s.len()).all(|i| {
            (0..s.len()).all(|j| brute[i][j].approx_eq(closure.distance(i, j), s.tolerance()))
        });
        if !agrees {
            return Err(CliError::Domain(
                "chain oracle disagrees with the shortest-path closure".into(),
            ));
        }
        json!({ "max_interior": max_interior, "agrees": agrees })
    } else {
        Json::Null
    };
    write_atomic(output, &format_matrix(&closure.rows())).map_err(io_err(output))?;
    Ok(json!({
        "mode": s.mode(),
        "n": s.len(),
        "labels": s.labels(),
        "output": output.display().to_string(),
        "K": report.k.to_json(),
        "applicable": report.applicable,
        "lower_ok": report.lower_ok,
        "upper_ok": report.upper_ok,
        "min_ratio": report.min_ratio.to_json(),
        "argmin_pair": report.argmin_pair,
        "zero_pairs": closure.zero_pairs,
        "oracle": oracle,
    }))
}

fn snowflake_cmd<S: Scalar>(s: &QuasiMetricSpace<S>, p: S, output: &Path) -> CliResult<Json> {
    let out = snowflake(s, &p).map_err(domain)?;
    let before = classify(s);
    let after = quasi_constant(&out).value;
    let power_bound = S::from_u64(2).pow_scalar(&p).map_err(domain)?;
    write_atomic(output, &format_matrix(&out.rows())).map_err(io_err(output))?;
    Ok(json!({
        "mode": s.mode(),
        "n": s.len(),
        "p": p.to_json(),
        "output": output.display().to_string(),
        "K_before": before.k.to_json(),
        "K_after": after.to_json(),
        "input_is_metric": before.is_metric,
        "power_bound": power_bound.to_json(),
        "within_power_bound": after.approx_le(&power_bound, s.tolerance()),
    }))
}

fn gen_body<S: Scalar>(s: &QuasiMetricSpace<S>, output: &Path) -> CliResult<Json> {
    write_atomic(output, &format_matrix(&s.rows())).map_err(io_err(output))?;
    let a = classify(s);
    Ok(json!({
        "mode": s.mode(),
        "n": s.len(),
        "output": output.display().to_string(),
        "K": a.k.to_json(),
        "C": a.c.to_json(),
        "is_metric": a.is_metric,
    }))
}

struct DyadicArgs<'a> {
    a: &'a str,
    depth: u32,
    check_facts: bool,
    ratios: bool,
    collapse: bool,
    emit_matrix: Option<&'a Path>,
    tent: Option<&'a str>,
    allow_deep: bool,
}

fn guard(depth: u32, limit: u32) -> CliResult<()> {
    if depth > limit {
        return Err(CliError::Domain(format!(
            "depth {depth} exceeds the limit {limit} (use --allow-deep to override)"
        )));
    }
    Ok(())
}

fn dyadic(args: DyadicArgs<'_>) -> CliResult<Json> {
    let a = match parse_value(args.a) {
        Some(Value::Exact(r)) => r,
        _ => {
            return Err(CliError::Io(format!(
                "--a must be an exact rational p/q, got {:?}",
                args.a
            )))
        }
    };
    let params = DyadicParams::new(a).map_err(domain)?;
    let depth = args.depth;
    guard(depth, MAX_LEVEL)?;
    let limits = if args.allow_deep {
        DepthLimits::unlimited()
    } else {
        DepthLimits::default()
    };
    let facts_limit = if args.allow_deep {
        MAX_LEVEL
    } else {
        FACTS_MAX_DEPTH
    };

    let tau: Vec<_> = (1..=depth)
        .map(|n| params.tau(n).expect("n >= 1"))
        .collect();
    let mut body = json!({
        "a": params.a().to_string(),
        "depth": depth,
        "point_count": (1u64 << depth) + 1,
        "tau": json_scalars(&tau),
        "tau_infinity": params.tau_infinity().to_string(),
        "bound_constant": params.bound_constant().to_string(),
        "facts": null,
        "ratios": null,
        "collapse": null,
        "matrix_output": null,
        "tent": null,
    });

    if args.check_facts {
        guard(depth, facts_limit)?;
        let report = verify_facts(depth, &params).map_err(domain)?;
        body["facts"] = json!({
            "all_passed": report.all_passed(),
            "report": report,
        });
    }
    if args.ratios {
        guard(depth, limits.triples)?;
        let r = ratio_experiment(&params, depth, &limits).map_err(domain)?;
        body["ratios"] = serde_json::to_value(r).expect("ratio report serializes");
    }
    if args.collapse {
        guard(depth, limits.matrix)?;
        let c = collapse_experiment(&params, depth, &limits).map_err(domain)?;
        let rows: Vec<Json> = c
            .rows
            .iter()
            .map(|r| {
                json!({
                    "depth": r.depth,
                    "distance": r.distance.to_string(),
                    "distance_approx": r.distance.to_f64(),
                    "upper_bound": r.upper_bound.to_string(),
                    "uniform_chain_cost": r.uniform_chain_cost.to_string(),
                })
            })
            .collect();
        body["collapse"] = json!({
            "rows": rows,
            "bound_holds": c.bound_holds,
            "nonincreasing": c.nonincreasing,
        });
    }
    if let Some(path) = args.emit_matrix {
        guard(depth, limits.matrix)?;
        let t =
            crate::dyadic::truncate_with_limit(depth, &params, limits.matrix).map_err(domain)?;
        write_atomic(path, &format_matrix(&t.space.rows())).map_err(io_err(path))?;
        body["matrix_output"] = json!(path.display().to_string());
    }
    if let Some(z) = args.tent {
        let z: DyadicPoint = z.parse().map_err(domain)?;
        let names = |v: Vec<DyadicPoint>| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        body["tent"] = json!({
            "point": z.to_string(),
            "level": z.level(),
            "left_path": names(z.left_path()),
            "right_path": names(z.right_path()),
            "csv": crate::dyadic::tent_csv(z),
        });
    }
    Ok(body)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["quasimetric"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_flags_are_errors() {
        let (code, _, err) = run_args(&["analyze", "--input", "x", "--bogus"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        assert_eq!(run_args(&[]).0, 2);
    }

    #[test]
    fn version_flag() {
        let (code, out, _) = run_args(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains(env!("CARGO_PKG_VERSION")));
    }

    #[test]
    fn missing_input_is_io_error() {
        let (code, _, err) = run_args(&["analyze", "--input", "/nonexistent/m.csv"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/m.csv"));
    }

    #[test]
    fn dyadic_parameter_errors() {
        assert_eq!(run_args(&["dyadic", "--a", "0.4", "--depth", "1"]).0, 2);
        let (code, _, err) = run_args(&["dyadic", "--a", "3/5", "--depth", "1"]);
        assert_eq!(code, 1);
        assert!(err.contains("(0, 1/2]"));
        assert_eq!(
            run_args(&["dyadic", "--a", "2/5", "--depth", "9", "--ratios"]).0,
            1
        );
        assert_eq!(
            run_args(&["dyadic", "--a", "2/5", "--depth", "3", "--tent", "1/3"]).0,
            1
        );
    }

    #[test]
    fn dyadic_tent_report() {
        let (code, out, _) = run_args(&["dyadic", "--a", "2/5", "--depth", "2", "--tent", "11/64"]);
        assert_eq!(code, 0);
        let v: Json = serde_json::from_str(&out).unwrap();
        assert_eq!(v["tent"]["left_path"], json!(["11/64", "5/32", "1/8", "0"]));
        assert_eq!(
            v["tent"]["right_path"],
            json!(["11/64", "3/16", "1/4", "1/2", "1"])
        );
        assert_eq!(v["tau"], json!(["4/5", "18/25"]));
        assert_eq!(v["tau_infinity"], "2/3");
        assert_eq!(v["bound_constant"], "3/2");
    }

    #[test]
    fn gen_rejects_bad_kind() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("g.csv");
        let (code, _, _) = run_args(&[
            "gen",
            "--kind",
            "spherical",
            "--n",
            "4",
            "--seed",
            "1",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 1);
    }
}
