//! Command-line surface for reproducible runs. Every output carries a header
//! with the binary version and the full run configuration; wall-clock
//! timestamps are opt-in so that identical configurations produce
//! byte-identical output.
//!
//! Exit codes: 0 success, 2 when a check ran but did not hold, 1 on usage or
//! input errors.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crossunion::circle::{circle_check, circle_expectation};
use crossunion::compression::{nest_normalize, shift_fixpoint, shift_tuple_fixpoint, ShiftTrace};
use crossunion::family::{full_mask, Family, FamilyTuple};
use crossunion::search::{explore_question41, max_sum_search, verify_main_theorem, SearchOpts};
use crossunion::shadow::lovasz_check;
use crossunion::verify::{
    check_different_slices, check_eq1_identity, check_lemma_computation, eq1_grid, example13_sum,
    lemma26_grid, lemma27_grid, records_to_csv, InequalityRecord,
};
use crossunion::Rational;

#[derive(Parser)]
#[command(name = "crossunion", version, about = "Exact toolkit for cross-union set families")]
struct Cli {
    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<String>,
    /// Output format; csv applies to record-grid subcommands only
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Worker threads (default: CROSSUNION_THREADS env var, else 1)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include a wall-clock timestamp in the output header (breaks
    /// byte-for-byte reproducibility)
    #[arg(long, global = true)]
    timestamp: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Nks {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    s: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact maximum of the size sum with certificates
    Search {
        #[command(flatten)]
        nks: Nks,
        #[arg(long)]
        no_circle_bound: bool,
        #[arg(long)]
        no_rwise_bound: bool,
        #[arg(long)]
        no_rest_bound: bool,
    },
    /// Verify the extremal value and star uniqueness at (n, k, s)
    VerifyMain {
        #[command(flatten)]
        nks: Nks,
    },
    /// Counting inequality: single point (--k --l --s) or full grid
    Lemma26 {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value_t = 25)]
        k_max: u32,
        #[arg(long, default_value_t = 20)]
        s_span: u32,
    },
    /// Slice inequality: single point (--n --k --l --x0) or built-in grid
    Lemma27 {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        l: Option<u32>,
        /// Rational, e.g. 19/2
        #[arg(long)]
        x0: Option<String>,
    },
    /// Asymmetric construction vs the star value
    Example13 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        s: u32,
    },
    /// Exact circle bound for a tuple of families read from --in
    Circle {
        #[arg(long = "in")]
        input: String,
        /// When positive, also run the Monte Carlo estimator on a greedy cover
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Shadow size and the Kruskal-Katona (Lovász) bound
    Shadow {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        level: u32,
    },
    /// Shift a family (or jointly a tuple) to its fixpoint
    Shift {
        #[arg(long = "in")]
        input: String,
    },
    /// Compare the exact maximum with both candidate extremal values
    Question41 {
        #[command(flatten)]
        nks: Nks,
    },
    /// Exact identity (s+1)C(n-1,k)/C(n,k) = s - (k-l)/n: point or grid
    Eq1 {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value_t = 20)]
        k_max: u32,
        #[arg(long, default_value_t = 100)]
        s_max: u32,
    },
}

#[derive(Serialize)]
struct RunConfig {
    subcommand: String,
    parameters: BTreeMap<String, String>,
    seed: u64,
    output_path: Option<String>,
    format: String,
    thread_count: usize,
}

#[derive(Serialize)]
struct Output<T: Serialize> {
    version: String,
    config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    result: T,
}

enum Payload {
    Json(serde_json::Value),
    Records(Vec<InequalityRecord>),
}

struct Outcome {
    payload: Payload,
    /// False when a verification ran and did not hold (exit 2).
    passed: bool,
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    let parse_int = |t: &str| t.trim().parse().map_err(|e| format!("bad rational {text}: {e}"));
    match text.split_once('/') {
        Some((p, q)) => Ok(Rational::new(parse_int(p)?, parse_int(q)?)),
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

fn read_families(path: &str) -> Result<Vec<Family>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let blocks: Vec<&str> = text
        .split("\n\n")
        .map(str::trim)
        .filter(|b| !b.is_empty())
        .collect();
    if blocks.is_empty() {
        return Err(format!("{path}: no families found"));
    }
    blocks
        .iter()
        .map(|b| Family::parse_text(b).map_err(|e| format!("{path}: {e}")))
        .collect()
}

/// A cover `A_0, ..., A_s` with `|A_i| = k_i` and union `[n]`; exists
/// whenever `Σ k_i >= n`.
fn greedy_cover(n: u32, ks: &[u32]) -> Vec<u64> {
    let mut uncovered = full_mask(n);
    ks.iter()
        .map(|&k| {
            let mut a = 0u64;
            for _ in 0..k {
                let pool = if uncovered != 0 { uncovered } else { full_mask(n) & !a };
                let bit = pool & pool.wrapping_neg();
                a |= bit;
                uncovered &= !bit;
            }
            a
        })
        .collect()
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(cmd: &Cmd, threads: usize) -> Result<Outcome, String> {
    let fail = |e: crossunion::Error| e.to_string();
    match cmd {
        Cmd::Search { nks, no_circle_bound, no_rwise_bound, no_rest_bound } => {
            let opts = SearchOpts {
                use_circle_bound: !no_circle_bound,
                use_rwise_bound: !no_rwise_bound,
                use_rest_bound: !no_rest_bound,
                threads,
            };
            let r = max_sum_search(nks.n, nks.k, nks.s, &opts).map_err(fail)?;
            Ok(Outcome { payload: Payload::Json(json(&r)), passed: true })
        }
        Cmd::VerifyMain { nks } => {
            let r = verify_main_theorem(nks.n, nks.k, nks.s).map_err(fail)?;
            Ok(Outcome { passed: r.holds, payload: Payload::Json(json(&r)) })
        }
        Cmd::Lemma26 { k, l, s, k_max, s_span } => {
            let records = match (k, l, s) {
                (Some(k), Some(l), Some(s)) => {
                    let (a, b) = check_lemma_computation(*k, *l, *s).map_err(fail)?;
                    vec![a, b]
                }
                (None, None, None) => lemma26_grid(*k_max, *s_span),
                _ => return Err("lemma26: give all of --k --l --s or none".into()),
            };
            let passed = records
                .iter()
                .all(|r| r.holds || r.parameters.get("applicable").map(String::as_str) == Some("false"));
            Ok(Outcome { payload: Payload::Records(records), passed })
        }
        Cmd::Lemma27 { n, k, l, x0 } => {
            let records = match (n, k, l, x0) {
                (Some(n), Some(k), Some(l), Some(x0)) => {
                    vec![check_different_slices(*n, *k, *l, &parse_rational(x0)?).map_err(fail)?]
                }
                (None, None, None, None) => lemma27_grid(),
                _ => return Err("lemma27: give all of --n --k --l --x0 or none".into()),
            };
            let passed = records.iter().all(|r| r.holds);
            Ok(Outcome { payload: Payload::Records(records), passed })
        }
        Cmd::Example13 { k, c, s } => {
            let r = example13_sum(*k, *c, *s).map_err(fail)?;
            // the comparison is a report, not a check: either way is a finding
            Ok(Outcome { payload: Payload::Records(vec![r]), passed: true })
        }
        Cmd::Circle { input, trials, seed } => {
            let fams = read_families(input)?;
            let report = circle_check(&fams).map_err(fail)?;
            let estimate = if *trials > 0 {
                let ks: Vec<u32> = fams.iter().map(Family::k).collect();
                let cover = greedy_cover(fams[0].n(), &ks);
                Some(circle_expectation(&fams, &cover, *trials, *seed).map_err(fail)?)
            } else {
                None
            };
            let value = serde_json::json!({ "check": report, "estimate": estimate });
            Ok(Outcome { payload: Payload::Json(value), passed: true })
        }
        Cmd::Shadow { input, level } => {
            let fams = read_families(input)?;
            if fams.len() != 1 {
                return Err("shadow: expected exactly one family".into());
            }
            let r = lovasz_check(&fams[0], *level).map_err(fail)?;
            Ok(Outcome { passed: r.holds, payload: Payload::Json(json(&r)) })
        }
        Cmd::Shift { input } => {
            let fams = read_families(input)?;
            let value = if fams.len() == 1 {
                let (shifted, trace) = shift_fixpoint(&fams[0]);
                serde_json::json!({ "families": [shifted.to_text()], "trace": trace })
            } else {
                let t = FamilyTuple::new(fams).map_err(fail)?;
                let (shifted, trace): (FamilyTuple, ShiftTrace) = shift_tuple_fixpoint(&t);
                let nested = t.is_cross_union().then(|| {
                    nest_normalize(&t)
                        .expect("cross-union checked")
                        .families()
                        .iter()
                        .map(Family::to_text)
                        .collect::<Vec<_>>()
                });
                let texts: Vec<String> = shifted.families().iter().map(Family::to_text).collect();
                serde_json::json!({ "families": texts, "trace": trace, "nested": nested })
            };
            Ok(Outcome { payload: Payload::Json(value), passed: true })
        }
        Cmd::Question41 { nks } => {
            let r = explore_question41(nks.n, nks.k, nks.s).map_err(fail)?;
            // open question: the report is emitted either way
            Ok(Outcome { payload: Payload::Json(json(&r)), passed: true })
        }
        Cmd::Eq1 { n, k, s, k_max, s_max } => {
            let records = match (n, k, s) {
                (Some(n), Some(k), Some(s)) => vec![check_eq1_identity(*n, *k, *s).map_err(fail)?],
                (None, None, None) => eq1_grid(*k_max, *s_max),
                _ => return Err("eq1: give all of --n --k --s or none".into()),
            };
            let passed = records.iter().all(|r| r.holds);
            Ok(Outcome { payload: Payload::Records(records), passed })
        }
    }
}

fn config_parameters(cmd: &Cmd) -> (String, BTreeMap<String, String>, u64) {
    let mut p = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        p.insert(k.to_string(), v);
    };
    let (name, seed) = match cmd {
        Cmd::Search { nks, no_circle_bound, no_rwise_bound, no_rest_bound } => {
            put("n", nks.n.to_string());
            put("k", nks.k.to_string());
            put("s", nks.s.to_string());
            put("circle_bound", (!no_circle_bound).to_string());
            put("rwise_bound", (!no_rwise_bound).to_string());
            put("rest_bound", (!no_rest_bound).to_string());
            ("search", 0)
        }
        Cmd::VerifyMain { nks } => {
            put("n", nks.n.to_string());
            put("k", nks.k.to_string());
            put("s", nks.s.to_string());
            ("verify-main", 0)
        }
        Cmd::Lemma26 { k, l, s, k_max, s_span } => {
            match (k, l, s) {
                (Some(k), Some(l), Some(s)) => {
                    put("k", k.to_string());
                    put("l", l.to_string());
                    put("s", s.to_string());
                }
                _ => {
                    put("k_max", k_max.to_string());
                    put("s_span", s_span.to_string());
                }
            }
            ("lemma26", 0)
        }
        Cmd::Lemma27 { n, k, l, x0 } => {
            if let (Some(n), Some(k), Some(l), Some(x0)) = (n, k, l, x0) {
                put("n", n.to_string());
                put("k", k.to_string());
                put("l", l.to_string());
                put("x0", x0.clone());
            } else {
                put("grid", "builtin".into());
            }
            ("lemma27", 0)
        }
        Cmd::Example13 { k, c, s } => {
            put("k", k.to_string());
            put("c", c.to_string());
            put("s", s.to_string());
            ("example13", 0)
        }
        Cmd::Circle { input, trials, seed } => {
            put("in", input.clone());
            put("trials", trials.to_string());
            ("circle", *seed)
        }
        Cmd::Shadow { input, level } => {
            put("in", input.clone());
            put("level", level.to_string());
            ("shadow", 0)
        }
        Cmd::Shift { input } => {
            put("in", input.clone());
            ("shift", 0)
        }
        Cmd::Question41 { nks } => {
            put("n", nks.n.to_string());
            put("k", nks.k.to_string());
            put("s", nks.s.to_string());
            ("question41", 0)
        }
        Cmd::Eq1 { n, k, s, k_max, s_max } => {
            match (n, k, s) {
                (Some(n), Some(k), Some(s)) => {
                    put("n", n.to_string());
                    put("k", k.to_string());
                    put("s", s.to_string());
                }
                _ => {
                    put("k_max", k_max.to_string());
                    put("s_max", s_max.to_string());
                }
            }
            ("eq1", 0)
        }
    };
    (name.to_string(), p, seed)
}

fn emit(cli: &Cli, config: RunConfig, outcome: &Outcome) -> Result<(), String> {
    let timestamp = cli.timestamp.then(|| {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .expect("clock after epoch")
            .as_secs();
        format!("{secs}")
    });
    let body = match (&outcome.payload, cli.format.as_str()) {
        (Payload::Json(v), "json") => {
            let out = Output {
                version: env!("CARGO_PKG_VERSION").to_string(),
                config,
                timestamp,
                result: v.clone(),
            };
            let mut s = serde_json::to_string_pretty(&out).expect("serializable");
            s.push('\n');
            s
        }
        (Payload::Records(rs), "json") => {
            let out = Output {
                version: env!("CARGO_PKG_VERSION").to_string(),
                config,
                timestamp,
                result: rs,
            };
            let mut s = serde_json::to_string_pretty(&out).expect("serializable");
            s.push('\n');
            s
        }
        (Payload::Records(rs), "csv") => {
            let cfg = serde_json::to_string(&config).expect("serializable");
            let mut s = format!("# version={}\n# config={}\n", env!("CARGO_PKG_VERSION"), cfg);
            if let Some(t) = timestamp {
                s.push_str(&format!("# timestamp={t}\n"));
            }
            s.push_str(&records_to_csv(rs));
            s
        }
        (Payload::Json(_), "csv") => {
            return Err("csv output is only available for record-grid subcommands".into())
        }
        (_, other) => return Err(format!("unknown format {other}")),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{path}: {e}")),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap's help/version output is a success, not a usage error
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("CROSSUNION_THREADS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1);
    if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
        // global pool already initialized; per-call pools still honor --threads
    }
    let (subcommand, parameters, seed) = config_parameters(&cli.cmd);
    let config = RunConfig {
        subcommand,
        parameters,
        seed,
        output_path: cli.out.clone(),
        format: cli.format.clone(),
        thread_count: threads,
    };
    match execute(&cli.cmd, threads) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, config, &outcome) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
