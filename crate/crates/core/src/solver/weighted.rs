//! Weighted chain pair simplification.
//!
//! The hop slots index the distinct subset sums of one chain's weights, so
//! the running time is pseudo-polynomial in those weights. A hop of dog A
//! onto `a_p` moves from budget `c` to the largest obtainable budget `c'`
//! with `c' + w(a_p) <= c`; a hop of dog B onto `b_q` adds `w(b_q)`.

use std::time::Instant;

use super::dp::{CostModel, Engine};
use super::proximity::NONE;
use super::{CpsError, CpsParams, SolveStats};
use crate::geometry::Chain;

/// Refuse weight sets with more distinct subset sums than this.
const MAX_OBTAINABLE: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSolution {
    /// `max(C(A'), C(B'))` of an optimal pair.
    pub k_star_weight: f64,
    pub a_indices: Option<Vec<usize>>,
    pub b_indices: Option<Vec<usize>>,
    pub stats: SolveStats,
}

/// Sorted distinct sums of nonempty subsets of the chain's weights.
pub fn obtainable_weights(chain: &Chain) -> Result<Vec<f64>, CpsError> {
    let mut sums: Vec<f64> = Vec::new();
    for i in 0..chain.len() {
        let w = chain.weight(i);
        let mut next = Vec::with_capacity(sums.len() * 2 + 1);
        next.extend_from_slice(&sums);
        next.push(w);
        next.extend(sums.iter().map(|s| s + w));
        next.sort_unstable_by(f64::total_cmp);
        next.dedup();
        if next.last().is_some_and(|s| !s.is_finite()) {
            return Err(CpsError::WeightOverflow);
        }
        if next.len() > MAX_OBTAINABLE {
            return Err(CpsError::TooLarge(format!("more than {MAX_OBTAINABLE} obtainable weights")));
        }
        sums = next;
    }
    Ok(sums)
}

fn weighted_model(a: &Chain, b: &Chain, levels: Vec<f64>, budget: Option<f64>) -> CostModel<f64> {
    let slots = levels.len();
    let mut hop_slot = Vec::with_capacity(a.len() * slots);
    let mut entry_slot = Vec::with_capacity(a.len());
    for p in 0..a.len() {
        let w = a.weight(p);
        for &level in &levels {
            // `c + w <= level` rather than `c <= level - w`: the level was itself
            // formed by adding weights, and the subtraction can round below it.
            let below = levels.partition_point(|&c| c + w <= level);
            hop_slot.push(if below == 0 { NONE } else { (below - 1) as u32 });
        }
        let entry = levels.partition_point(|&c| c < w);
        entry_slot.push(if entry == slots { NONE } else { entry as u32 });
    }
    CostModel {
        levels,
        hop_slot,
        entry_slot,
        b_cost: (0..b.len()).map(|q| b.weight(q)).collect(),
        inf: f64::INFINITY,
        limit: budget.unwrap_or(f64::INFINITY),
    }
}

fn solve(
    a: &Chain,
    b: &Chain,
    params: &CpsParams,
    reconstruct: bool,
    budget: Option<f64>,
) -> Result<WeightedSolution, CpsError> {
    let started = Instant::now();
    params.validate(a, b)?;
    if params.r_cap.is_some() {
        return Err(CpsError::InvalidParameter("r_cap applies to unweighted solves only".into()));
    }
    let fa = obtainable_weights(a)?;
    let fb = obtainable_weights(b)?;
    // Slots run over the chain with fewer obtainable sums.
    let swap = fb.len() < fa.len();
    let (ra, rb, mut levels, rp) = if swap {
        (b, a, fb, CpsParams { delta1: params.delta2, delta2: params.delta1, ..params.clone() })
    } else {
        (a, b, fa, params.clone())
    };
    if let Some(k) = budget {
        levels.retain(|&c| c <= k);
        if levels.is_empty() {
            return Err(CpsError::NoSolution);
        }
    }
    let model = weighted_model(ra, rb, levels, budget);
    let out = Engine::new(ra, rb, &rp, model).run(reconstruct)?;
    let k_star_weight = out.best.ok_or(CpsError::NoSolution)?;
    let (a_indices, b_indices) = match out.dogs {
        Some((x, y)) if swap => (Some(y), Some(x)),
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    };
    Ok(WeightedSolution {
        k_star_weight,
        a_indices,
        b_indices,
        stats: SolveStats { elapsed: started.elapsed(), ..out.stats },
    })
}

/// Minimum of `max(C(A'), C(B'))` over feasible simplification pairs, where
/// `C` sums vertex weights (one for unweighted chains).
pub fn wcps3f_min(a: &Chain, b: &Chain, params: &CpsParams, reconstruct: bool) -> Result<WeightedSolution, CpsError> {
    solve(a, b, params, reconstruct, None)
}

/// Whether some feasible pair has `C(A') <= k` and `C(B') <= k`.
pub fn wcps3f_decision(a: &Chain, b: &Chain, k: f64, params: &CpsParams) -> Result<bool, CpsError> {
    if !(k > 0.0) {
        return Err(CpsError::InvalidParameter(format!("k must be positive, got {k}")));
    }
    match solve(a, b, params, false, Some(k)) {
        Ok(sol) => Ok(sol.k_star_weight <= k),
        Err(CpsError::NoSolution) => Ok(false),
        Err(e) => Err(e),
    }
}
