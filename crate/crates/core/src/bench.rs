//! Protein backbone benchmark: the chain pairs, tolerances and expected
//! optima shipped in `data/bench_tables.csv`.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::pdb_io::{cached_pdb, parse_pdb_with, BackboneRecord, PdbError, PdbOptions};
use crate::solver::{cps3f_min_doubling, cps3f_min_dp, CpsError, CpsParams, EndpointMode};

const TABLES: &str = include_str!("../data/bench_tables.csv");

/// One configured benchmark row.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct BenchCase {
    pub table: u8,
    /// `<pdb id>.<chain>`, e.g. `107j.a`. A bare id means chain A.
    pub chain_a: String,
    pub len_a: usize,
    pub chain_b: String,
    pub len_b: usize,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// Result of the approximation heuristic; a valid hop cap.
    pub approx_k: usize,
    pub expected_k: usize,
}

pub fn bench_cases() -> Vec<BenchCase> {
    csv::Reader::from_reader(TABLES.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .expect("bundled benchmark table parses")
}

/// Splits `1hfj.c` into `("1hfj", 'C')`.
pub fn split_chain_id(name: &str) -> (String, char) {
    match name.split_once('.') {
        Some((id, chain)) if chain.chars().count() == 1 => {
            (id.to_owned(), chain.chars().next().unwrap().to_ascii_uppercase())
        }
        _ => (name.to_owned(), 'A'),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BenchStatus {
    Pass,
    Fail,
    Timeout,
    /// A parsed chain does not have the tabulated length.
    LengthMismatch,
    Error,
}

impl std::fmt::Display for BenchStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BenchStatus::Pass => "PASS",
            BenchStatus::Fail => "FAIL",
            BenchStatus::Timeout => "TIMEOUT",
            BenchStatus::LengthMismatch => "LENGTH_MISMATCH",
            BenchStatus::Error => "ERROR",
        })
    }
}

/// Outcome of one row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub table: u8,
    pub chain_a_id: String,
    pub chain_b_id: String,
    pub len_a: Option<usize>,
    pub len_b: Option<usize>,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub k_star: Option<usize>,
    pub expected_k: usize,
    pub status: BenchStatus,
    pub peak_cells: Option<u64>,
    pub endpoint_mode: EndpointMode,
    pub r_cap_used: Option<usize>,
    pub message: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub fetch: bool,
    pub cache_dir: PathBuf,
    pub base_url: Option<String>,
    pub pdb: PdbOptions,
    pub endpoint_mode: EndpointMode,
    pub r_cap: Option<usize>,
    /// Start from `r_cap` (or 8) and double while inconclusive.
    pub warm_cap: bool,
    pub timeout: Option<Duration>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            fetch: false,
            cache_dir: crate::pdb_io::default_cache_dir(),
            base_url: None,
            pdb: PdbOptions::default(),
            endpoint_mode: EndpointMode::FreeDogs,
            r_cap: None,
            warm_cap: false,
            timeout: None,
        }
    }
}

/// Reads `name` (`1hfj.c`) from the cache, downloading it if allowed.
pub fn load_backbone(name: &str, opts: &BenchOptions) -> Result<BackboneRecord, PdbError> {
    let (id, chain) = split_chain_id(name);
    let text = match cached_pdb(&opts.cache_dir, &id)? {
        Some(text) => text,
        None => download(&id, opts)?,
    };
    parse_pdb_with(&text, chain, &opts.pdb)
}

#[cfg(feature = "fetch")]
fn download(id: &str, opts: &BenchOptions) -> Result<String, PdbError> {
    if !opts.fetch {
        return Err(PdbError::Format(format!("PDB entry {id} is not cached; rerun with --fetch")));
    }
    let mut fetcher = crate::pdb_io::PdbFetcher { cache_dir: opts.cache_dir.clone(), ..Default::default() };
    if let Some(url) = &opts.base_url {
        fetcher.base_url = url.clone();
    }
    fetcher.fetch(id)
}

#[cfg(not(feature = "fetch"))]
fn download(id: &str, _opts: &BenchOptions) -> Result<String, PdbError> {
    Err(PdbError::Format(format!("PDB entry {id} is not cached and this build cannot download")))
}

/// Loads both chains, checks their lengths and solves.
pub fn run_case(case: &BenchCase, opts: &BenchOptions) -> BenchRow {
    let started = Instant::now();
    let mut row = BenchRow {
        table: case.table,
        chain_a_id: case.chain_a.clone(),
        chain_b_id: case.chain_b.clone(),
        len_a: None,
        len_b: None,
        delta1: case.delta1,
        delta2: case.delta2,
        delta3: case.delta3,
        k_star: None,
        expected_k: case.expected_k,
        status: BenchStatus::Error,
        peak_cells: None,
        endpoint_mode: opts.endpoint_mode,
        r_cap_used: None,
        message: None,
        elapsed: Duration::ZERO,
    };
    let loaded = load_backbone(&case.chain_a, opts).and_then(|a| Ok((a, load_backbone(&case.chain_b, opts)?)));
    let (a, b) = match loaded {
        Ok(pair) => pair,
        Err(e) => {
            row.message = Some(e.to_string());
            row.elapsed = started.elapsed();
            return row;
        }
    };
    row.len_a = Some(a.chain.len());
    row.len_b = Some(b.chain.len());
    if a.chain.len() != case.len_a || b.chain.len() != case.len_b {
        row.status = BenchStatus::LengthMismatch;
        row.message = Some(format!(
            "parsed lengths {} and {}, expected {} and {}",
            a.chain.len(),
            b.chain.len(),
            case.len_a,
            case.len_b
        ));
        row.elapsed = started.elapsed();
        return row;
    }

    let params = CpsParams::new(case.delta1, case.delta2, case.delta3)
        .with_mode(opts.endpoint_mode)
        .with_deadline(opts.timeout.map(|t| started + t));
    let result = if opts.warm_cap {
        cps3f_min_doubling(&a.chain, &b.chain, &params, false, opts.r_cap.unwrap_or(8))
    } else {
        cps3f_min_dp(&a.chain, &b.chain, &params.with_r_cap(opts.r_cap), false).map(|s| (s, opts.r_cap))
    };
    match result {
        Ok((sol, cap)) => {
            row.k_star = Some(sol.k_star);
            row.peak_cells = Some(sol.stats.peak_cells);
            row.r_cap_used = cap;
            row.status = if sol.k_star == case.expected_k { BenchStatus::Pass } else { BenchStatus::Fail };
        }
        Err(CpsError::Timeout) => row.status = BenchStatus::Timeout,
        Err(e) => row.message = Some(e.to_string()),
    }
    row.elapsed = started.elapsed();
    row
}
