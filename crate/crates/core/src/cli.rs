//! The `chainpair` command line.
//!
//! Exit status is 0 on success, 1 when no simplification exists (or none was
//! found within the cap, time or memory limits) and 2 for usage and input
//! errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bench::{bench_cases, run_case, BenchOptions, BenchRow, BenchStatus};
use crate::geometry::{discrete_frechet, Chain};
use crate::one_sided::{one_sided_cps3f_min, simplify_min_delta, simplify_min_k, Simplification};
use crate::oracle::{make_reduction_instance, partition_brute};
use crate::pdb_io::{load_chain, parse_pdb_with, save_chain, split_selector, ChainFormat, PdbError, PdbOptions};
use crate::solver::{cps3f_min_doubling, cps3f_min_dp, wcps3f_decision, wcps3f_min, CpsError, CpsParams, EndpointMode};

/// Version of the JSON documents written by `--json` and `bench --out json`.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "chainpair", version, about = "Exact chain pair simplification under the discrete Fréchet distance")]
pub struct Cli {
    #[command(flatten)]
    pdb: PdbArgs,
    #[command(subcommand)]
    command: Command,
}

/// α-carbon selection for `file.pdb:X` inputs.
#[derive(Debug, Args)]
struct PdbArgs {
    /// Alternate location kept besides blank.
    #[arg(long, global = true, default_value_t = 'A')]
    altloc: char,
    /// MODEL serial to read (default: the first model).
    #[arg(long, global = true)]
    model: Option<u32>,
    /// Also read HETATM records.
    #[arg(long, global = true)]
    include_hetatm: bool,
}

impl PdbArgs {
    fn options(&self) -> PdbOptions {
        PdbOptions { altloc: self.altloc, model: self.model, include_hetatm: self.include_hetatm }
    }
}

#[derive(Debug, Args)]
struct Pair {
    /// First chain: `file.csv`, `file.json` or `file.pdb:CHAIN`.
    a: String,
    /// Second chain, same forms.
    b: String,
}

#[derive(Debug, Args)]
struct Tolerances {
    /// Bound on d_dF(A, A').
    #[arg(long = "d1")]
    d1: f64,
    /// Bound on d_dF(B, B').
    #[arg(long = "d2")]
    d2: f64,
    /// Bound on d_dF(A', B').
    #[arg(long = "d3")]
    d3: f64,
    /// `free_dogs` lets the simplifications start and end anywhere near the
    /// chain ends; `anchored` pins them to the end vertices.
    #[arg(long, default_value = "free_dogs")]
    endpoint_mode: EndpointMode,
}

impl Tolerances {
    fn params(&self) -> CpsParams {
        CpsParams::new(self.d1, self.d2, self.d3).with_mode(self.endpoint_mode)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Discrete Fréchet distance of two chains.
    Frechet {
        #[command(flatten)]
        pair: Pair,
        /// Also print an optimal coupling, one `i j` pair per line.
        #[arg(long)]
        witness: bool,
    },
    /// Minimum of max(|A'|, |B'|).
    Cps3f {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        tol: Tolerances,
        /// Also answer whether both simplifications fit in K vertices.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        /// Truncate hop counts at this value.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        r_cap: Option<u64>,
        /// Double the cap (from --r-cap, or 8) until the result is conclusive.
        #[arg(long)]
        warm_cap: bool,
        /// Print the vertex indices of A' and B'.
        #[arg(long)]
        reconstruct: bool,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Write a JSON report to this path (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Minimum of max(C(A'), C(B')) for weighted chains.
    Wcps3f {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        tol: Tolerances,
        /// Also answer whether both simplifications weigh at most K.
        #[arg(long)]
        k: Option<f64>,
        /// Print the vertex indices of A' and B'.
        #[arg(long)]
        reconstruct: bool,
        /// Write a JSON report to this path (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Shortest A' within --d1 of A and --d3 of B.
    OneSided {
        #[command(flatten)]
        pair: Pair,
        #[arg(long = "d1")]
        d1: f64,
        #[arg(long = "d3")]
        d3: f64,
    },
    /// Shortest A' within --delta of B.
    SimplifyMinK {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        delta: f64,
    },
    /// Smallest d_dF(A', B) over A' with at most --k vertices.
    SimplifyMinDelta {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Weighted instance from a set partition problem, solved both ways.
    Reduction {
        /// Comma separated positive integers.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        /// Use the variant with zero weights (cannot be written to files).
        #[arg(long)]
        zero_weights: bool,
        /// Write `a.csv` and `b.csv` into this directory.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Protein backbone benchmark against the bundled expected optima.
    Bench {
        /// Table number.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        /// Only these B chains, e.g. `1hfj.c,2fep.a`.
        #[arg(long, value_delimiter = ',')]
        rows: Vec<String>,
        /// Download missing PDB entries.
        #[arg(long)]
        fetch: bool,
        /// PDB cache directory.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Archive base URL.
        #[arg(long, hide = true)]
        base_url: Option<String>,
        #[arg(long, default_value = "free_dogs")]
        endpoint_mode: EndpointMode,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        r_cap: Option<u64>,
        #[arg(long)]
        warm_cap: bool,
        /// Per-row time limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
        /// Write rows here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<PdbError> for Failure {
    fn from(e: PdbError) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<CpsError> for Failure {
    fn from(e: CpsError) -> Self {
        let code = match e {
            CpsError::InvalidParameter(_) | CpsError::Geometry(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: 2, message: format!("{}: {e}", path.display()) }
}

fn seconds(v: Option<f64>) -> Result<Option<Duration>, Failure> {
    v.map(|s| Duration::try_from_secs_f64(s).map_err(|_| Failure { code: 2, message: format!("invalid timeout {s}") }))
        .transpose()
}

/// Loads `file.csv`, `file.json` or `file.pdb:X`.
fn load_input(spec: &str, pdb: &PdbOptions) -> Result<Chain, Failure> {
    if let Some((path, chain)) = split_selector(spec) {
        let path = Path::new(path);
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        return Ok(parse_pdb_with(&text, chain, pdb)?.chain);
    }
    let path = Path::new(spec);
    if ChainFormat::from_path(path).is_none() {
        return Err(Failure { code: 2, message: format!("{spec}: expected a .csv or .json file, or file.pdb:CHAIN") });
    }
    Ok(load_chain(path, None)?)
}

fn indices_line(name: &str, idx: &[usize]) -> String {
    let list: Vec<String> = idx.iter().map(usize::to_string).collect();
    format!("{name} {}", list.join(" "))
}

/// The text report, unless `--json -` claimed stdout.
fn print_unless_json_stdout(text: &[String], json: Option<&Path>) {
    if json != Some(Path::new("-")) {
        for line in text {
            println!("{line}");
        }
    }
}

fn emit_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        fs::write(path, text).map_err(|e| io_failure(path, e))
    }
}

/// Parses `args` and runs the command, returning the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let pdb = cli.pdb.options();
    match cli.command {
        Command::Frechet { pair, witness } => {
            let (a, b) = (load_input(&pair.a, &pdb)?, load_input(&pair.b, &pdb)?);
            let res = discrete_frechet(&a, &b).map_err(CpsError::from)?;
            println!("{}", res.value);
            if witness {
                for (i, j) in res.coupling {
                    println!("{i} {j}");
                }
            }
        }
        Command::Cps3f { pair, tol, k, r_cap, warm_cap, reconstruct, timeout, json } => {
            let (a, b) = (load_input(&pair.a, &pdb)?, load_input(&pair.b, &pdb)?);
            let mut text = Vec::new();
            let started = Instant::now();
            let params = tol.params().with_deadline(seconds(timeout)?.map(|t| started + t));
            let r_cap = r_cap.map(|c| c as usize);
            let (sol, cap_used) = if warm_cap {
                cps3f_min_doubling(&a, &b, &params, reconstruct, r_cap.unwrap_or(8))?
            } else {
                (cps3f_min_dp(&a, &b, &params.clone().with_r_cap(r_cap), reconstruct)?, r_cap)
            };
            text.push(format!("k_star {}", sol.k_star));
            let decision = match k {
                Some(k) => {
                    let yes = sol.k_star as u64 <= k;
                    text.push(format!("decision {}", if yes { "yes" } else { "no" }));
                    Some(yes)
                }
                None => None,
            };
            if let (Some(ai), Some(bi)) = (&sol.a_indices, &sol.b_indices) {
                text.push(indices_line("a_indices", ai).to_string());
                text.push(indices_line("b_indices", bi).to_string());
            }
            if let Some(path) = &json {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "cps3f",
                    "result": {
                        "chain_a_id": pair.a,
                        "chain_b_id": pair.b,
                        "len_a": a.len(),
                        "len_b": b.len(),
                        "delta1": tol.d1,
                        "delta2": tol.d2,
                        "delta3": tol.d3,
                        "k_star": sol.k_star,
                        "k": k,
                        "decision": decision,
                        "endpoint_mode": tol.endpoint_mode,
                        "r_cap_used": cap_used,
                        "peak_cells": sol.stats.peak_cells,
                        "possible_configurations": sol.stats.possible_configurations,
                        "a_indices": sol.a_indices,
                        "b_indices": sol.b_indices,
                    },
                    "timing": { "elapsed_seconds": sol.stats.elapsed.as_secs_f64() },
                });
                emit_json(path, &doc)?;
            }
            print_unless_json_stdout(&text, json.as_deref());
        }
        Command::Wcps3f { pair, tol, k, reconstruct, json } => {
            let (a, b) = (load_input(&pair.a, &pdb)?, load_input(&pair.b, &pdb)?);
            let mut text = Vec::new();
            let params = tol.params();
            let sol = wcps3f_min(&a, &b, &params, reconstruct)?;
            text.push(format!("k_star_weight {}", sol.k_star_weight));
            let decision = match k {
                Some(k) => {
                    let yes = wcps3f_decision(&a, &b, k, &params)?;
                    text.push(format!("decision {}", if yes { "yes" } else { "no" }));
                    Some(yes)
                }
                None => None,
            };
            if let (Some(ai), Some(bi)) = (&sol.a_indices, &sol.b_indices) {
                text.push(indices_line("a_indices", ai).to_string());
                text.push(indices_line("b_indices", bi).to_string());
            }
            if let Some(path) = &json {
                let doc = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "wcps3f",
                    "result": {
                        "chain_a_id": pair.a,
                        "chain_b_id": pair.b,
                        "len_a": a.len(),
                        "len_b": b.len(),
                        "delta1": tol.d1,
                        "delta2": tol.d2,
                        "delta3": tol.d3,
                        "k_star_weight": sol.k_star_weight,
                        "k": k,
                        "decision": decision,
                        "endpoint_mode": tol.endpoint_mode,
                        "peak_cells": sol.stats.peak_cells,
                        "a_indices": sol.a_indices,
                        "b_indices": sol.b_indices,
                    },
                    "timing": { "elapsed_seconds": sol.stats.elapsed.as_secs_f64() },
                });
                emit_json(path, &doc)?;
            }
            print_unless_json_stdout(&text, json.as_deref());
        }
        Command::OneSided { pair, d1, d3 } => {
            let (a, b) = (load_input(&pair.a, &pdb)?, load_input(&pair.b, &pdb)?);
            print_simplification("k_star", &one_sided_cps3f_min(&a, &b, d1, d3)?);
        }
        Command::SimplifyMinK { pair, delta } => {
            let (a, b) = (load_input(&pair.a, &pdb)?, load_input(&pair.b, &pdb)?);
            print_simplification("length", &simplify_min_k(&a, &b, delta)?);
        }
        Command::SimplifyMinDelta { pair, k } => {
            let (a, b) = (load_input(&pair.a, &pdb)?, load_input(&pair.b, &pdb)?);
            let (delta, s) = simplify_min_delta(&a, &b, k as usize)?;
            println!("delta {delta}");
            print_simplification("length", &s);
        }
        Command::Reduction { set, zero_weights, write } => {
            if set.contains(&0) {
                return Err(Failure { code: 2, message: "set elements must be positive".into() });
            }
            let inst = make_reduction_instance(&set, !zero_weights)
                .map_err(|e| Failure { code: 2, message: e.to_string() })?;
            let yes = wcps3f_decision(&inst.a, &inst.b, inst.budget, &inst.params)?;
            println!("budget {}", inst.budget);
            println!("d1 {}", inst.params.delta1);
            println!("d2 {}", inst.params.delta2);
            println!("d3 {}", inst.params.delta3);
            println!("decision {}", if yes { "yes" } else { "no" });
            if let Ok(p) = partition_brute(&set) {
                println!("partition {}", if p { "yes" } else { "no" });
            }
            if let Some(dir) = write {
                if zero_weights {
                    return Err(Failure { code: 2, message: "zero weights cannot be written to chain files".into() });
                }
                fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
                save_chain(&inst.a, &dir.join("a.csv"), Some(ChainFormat::Csv))?;
                save_chain(&inst.b, &dir.join("b.csv"), Some(ChainFormat::Csv))?;
            }
        }
        Command::Bench {
            table,
            rows,
            fetch,
            cache_dir,
            base_url,
            endpoint_mode,
            r_cap,
            warm_cap,
            timeout,
            out,
            output,
        } => {
            let mut opts = BenchOptions {
                fetch,
                base_url,
                pdb,
                endpoint_mode,
                r_cap: r_cap.map(|c| c as usize),
                warm_cap,
                timeout: seconds(timeout)?,
                ..Default::default()
            };
            if let Some(dir) = cache_dir {
                opts.cache_dir = dir;
            }
            let cases: Vec<_> = bench_cases()
                .into_iter()
                .filter(|c| {
                    c.table == table && (rows.is_empty() || rows.iter().any(|r| r.eq_ignore_ascii_case(&c.chain_b)))
                })
                .collect();
            if cases.is_empty() {
                return Err(Failure { code: 2, message: format!("no rows of table {table} match {rows:?}") });
            }
            let mut results = Vec::new();
            for case in &cases {
                let row = run_case(case, &opts);
                eprintln!(
                    "{} table {} {} vs {}: k_star {} expected {}{}",
                    row.status,
                    row.table,
                    row.chain_a_id,
                    row.chain_b_id,
                    row.k_star.map_or("-".to_owned(), |k| k.to_string()),
                    row.expected_k,
                    row.message.as_deref().map_or(String::new(), |m| format!(" ({m})")),
                );
                results.push(row);
            }
            let text = match out {
                OutFormat::Csv => bench_csv(&results),
                OutFormat::Json => {
                    let timing: Vec<_> = results
                        .iter()
                        .map(|r| json!({ "chain_b_id": r.chain_b_id, "elapsed_seconds": r.elapsed.as_secs_f64() }))
                        .collect();
                    let doc = json!({ "schema_version": SCHEMA_VERSION, "command": "bench", "rows": results, "timing": timing });
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
                }
            };
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| io_failure(&path, e))?,
                None => {
                    let _ = std::io::stdout().write_all(text.as_bytes());
                }
            }
            if results.iter().any(|r| r.status != BenchStatus::Pass) {
                return Err(Failure { code: 1, message: "some rows did not pass".into() });
            }
        }
    }
    Ok(())
}

fn print_simplification(label: &str, s: &Simplification) {
    println!("{label} {}", s.len);
    println!("{}", indices_line("a_indices", &s.indices));
}

#[derive(Serialize)]
struct CsvRow<'a> {
    table: u8,
    chain_a_id: &'a str,
    chain_b_id: &'a str,
    len_a: Option<usize>,
    len_b: Option<usize>,
    delta1: f64,
    delta2: f64,
    delta3: f64,
    k_star: Option<usize>,
    expected_k: usize,
    status: BenchStatus,
    elapsed_seconds: f64,
    peak_cells: Option<u64>,
    endpoint_mode: EndpointMode,
    r_cap_used: Option<usize>,
}

fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow {
            table: r.table,
            chain_a_id: &r.chain_a_id,
            chain_b_id: &r.chain_b_id,
            len_a: r.len_a,
            len_b: r.len_b,
            delta1: r.delta1,
            delta2: r.delta2,
            delta3: r.delta3,
            k_star: r.k_star,
            expected_k: r.expected_k,
            status: r.status,
            elapsed_seconds: r.elapsed.as_secs_f64(),
            peak_cells: r.peak_cells,
            endpoint_mode: r.endpoint_mode,
            r_cap_used: r.r_cap_used,
        })
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}
