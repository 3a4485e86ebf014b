//! Exact solvers for chain pair simplification.
//!
//! A configuration `(i, p, j, q)` places the man on `a_i`, his dog on `a_p`,
//! the woman on `b_j` and her dog on `b_q`. It is *possible* when
//! `d(a_i, a_p) <= delta1`, `d(b_j, b_q) <= delta2` and `d(a_p, b_q) <= delta3`.
//! The vertices each dog steps on form the simplifications `A'` and `B'`, and
//! the solvers minimize `max(|A'|, |B'|)` (or the weighted analogue) over
//! all walks through possible configurations.
//!
//! [`cps3f_min_graph`] builds the configuration DAG explicitly and is meant as
//! a reference for small inputs. [`cps3f_min_dp`] is the layered dynamic
//! program with running-minimum tables and is the one to use on real data.

mod dp;
mod graph;
mod proximity;
mod weighted;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Chain, GeometryError};

pub use graph::cps3f_min_graph;
pub use weighted::{obtainable_weights, wcps3f_decision, wcps3f_min, WeightedSolution};

/// Default cap on stored DP cells when reconstructing witnesses.
pub const DEFAULT_CELL_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CpsError {
    #[error("no feasible simplification pair")]
    NoSolution,
    #[error("no solution with at most {cap} vertices per simplification; retry with a larger cap")]
    RCapInconclusive { cap: usize },
    #[error("reconstruction needs {required} DP cells, budget is {budget}")]
    MemoryGuard { required: u64, budget: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("subset sums of the weights overflow")]
    WeightOverflow,
    #[error("deadline exceeded")]
    Timeout,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Where the simplifications may start and end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointMode {
    /// `A'` runs from `a_1` to `a_m` and `B'` from `b_1` to `b_n`.
    Anchored,
    /// Any possible configuration over `(a_1, b_1)` may start the walk and any
    /// over `(a_m, b_n)` may end it.
    #[default]
    FreeDogs,
}

impl std::str::FromStr for EndpointMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "anchored" => Ok(EndpointMode::Anchored),
            "free_dogs" | "free-dogs" | "free" => Ok(EndpointMode::FreeDogs),
            other => Err(format!("unknown endpoint mode `{other}`")),
        }
    }
}

impl std::fmt::Display for EndpointMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EndpointMode::Anchored => "anchored",
            EndpointMode::FreeDogs => "free_dogs",
        })
    }
}

/// Tolerances and solver options.
#[derive(Debug, Clone, PartialEq)]
pub struct CpsParams {
    /// Bound on `d_dF(A, A')`.
    pub delta1: f64,
    /// Bound on `d_dF(B, B')`.
    pub delta2: f64,
    /// Bound on `d_dF(A', B')`.
    pub delta3: f64,
    pub endpoint_mode: EndpointMode,
    /// Truncate hop counts at this value. Results at or below the cap are
    /// optimal; otherwise the solve reports [`CpsError::RCapInconclusive`].
    pub r_cap: Option<usize>,
    /// Upper bound on stored cells in reconstruct mode.
    pub cell_budget: u64,
    /// Abort with [`CpsError::Timeout`] once this instant has passed.
    pub deadline: Option<Instant>,
}

impl CpsParams {
    pub fn new(delta1: f64, delta2: f64, delta3: f64) -> Self {
        CpsParams {
            delta1,
            delta2,
            delta3,
            endpoint_mode: EndpointMode::default(),
            r_cap: None,
            cell_budget: DEFAULT_CELL_BUDGET,
            deadline: None,
        }
    }

    pub fn with_mode(mut self, mode: EndpointMode) -> Self {
        self.endpoint_mode = mode;
        self
    }

    pub fn with_r_cap(mut self, cap: Option<usize>) -> Self {
        self.r_cap = cap;
        self
    }

    pub fn with_cell_budget(mut self, budget: u64) -> Self {
        self.cell_budget = budget;
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub(crate) fn validate(&self, a: &Chain, b: &Chain) -> Result<(), CpsError> {
        if a.dim() != b.dim() {
            return Err(GeometryError::DimensionMismatch { left: a.dim(), right: b.dim() }.into());
        }
        for (name, d) in [("delta1", self.delta1), ("delta2", self.delta2), ("delta3", self.delta3)] {
            if !(d >= 0.0) || d.is_infinite() {
                return Err(CpsError::InvalidParameter(format!("{name} must be finite and >= 0, got {d}")));
            }
        }
        if self.r_cap == Some(0) {
            return Err(CpsError::InvalidParameter("r_cap must be at least 1".into()));
        }
        Ok(())
    }

    fn swapped(&self) -> CpsParams {
        CpsParams { delta1: self.delta2, delta2: self.delta1, ..self.clone() }
    }
}

/// Counters reported by a solve.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub possible_configurations: u64,
    /// Largest number of DP cells alive at one time.
    pub peak_cells: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpsSolution {
    /// `max(|A'|, |B'|)` of an optimal pair.
    pub k_star: usize,
    /// 0-based vertex indices of `A'`, when reconstruction was requested.
    pub a_indices: Option<Vec<usize>>,
    pub b_indices: Option<Vec<usize>>,
    pub stats: SolveStats,
}

/// Minimum of `max(|A'|, |B'|)` by the layered dynamic program.
///
/// With `reconstruct` the solver keeps every layer's hop arrays and returns
/// index lists for `A'` and `B'`; otherwise only two rows of layers are alive.
pub fn cps3f_min_dp(a: &Chain, b: &Chain, params: &CpsParams, reconstruct: bool) -> Result<CpsSolution, CpsError> {
    let started = Instant::now();
    params.validate(a, b)?;
    // The hop dimension runs over the shorter chain.
    let swap = b.len() < a.len();
    let (ra, rb, rp) = if swap { (b, a, params.swapped()) } else { (a, b, params.clone()) };
    let (k_star, dogs, stats) = dp::solve_unit(ra, rb, &rp, reconstruct)?;
    let (a_indices, b_indices) = match dogs {
        Some((x, y)) if swap => (Some(y), Some(x)),
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    };
    Ok(CpsSolution { k_star, a_indices, b_indices, stats: SolveStats { elapsed: started.elapsed(), ..stats } })
}

/// Whether both chains admit simplifications of at most `k` vertices each
/// under the three tolerances.
pub fn cps3f_decision(a: &Chain, b: &Chain, k: usize, params: &CpsParams) -> Result<bool, CpsError> {
    if k == 0 {
        return Err(CpsError::InvalidParameter("k must be at least 1".into()));
    }
    // Capping at k prunes every walk that could not answer yes anyway.
    let cap = (k < a.len().max(b.len())).then_some(k);
    let capped = params.clone().with_r_cap(cap);
    match cps3f_min_dp(a, b, &capped, false) {
        Ok(sol) => Ok(sol.k_star <= k),
        Err(CpsError::NoSolution) | Err(CpsError::RCapInconclusive { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// [`cps3f_min_dp`] with a hop cap that starts at `start` and doubles while
/// the result is inconclusive. Returns the solution and the cap that settled
/// it (`None` once the cap no longer truncated anything).
pub fn cps3f_min_doubling(
    a: &Chain,
    b: &Chain,
    params: &CpsParams,
    reconstruct: bool,
    start: usize,
) -> Result<(CpsSolution, Option<usize>), CpsError> {
    let full = a.len().max(b.len());
    let mut cap = start.max(1);
    loop {
        let r_cap = (cap < full).then_some(cap);
        match cps3f_min_dp(a, b, &params.clone().with_r_cap(r_cap), reconstruct) {
            Err(CpsError::RCapInconclusive { .. }) => cap = cap.saturating_mul(2),
            other => return other.map(|sol| (sol, r_cap)),
        }
    }
}
