//! Exhaustive reference solvers and the set-partition instance generator.
//!
//! Everything here enumerates subsequences and runs in exponential time.
//! Inputs above the size guards are rejected rather than truncated.

use thiserror::Error;

use crate::geometry::{discrete_frechet, frechet_decision, Chain, Point};
use crate::solver::{CpsParams, EndpointMode};

/// Largest chain the subsequence oracles accept.
pub const MAX_ORACLE_LEN: usize = 12;
/// Largest multiset [`partition_brute`] accepts.
pub const MAX_PARTITION_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle input of size {got} exceeds the limit of {limit}")]
    SizeGuard { got: usize, limit: usize },
    #[error("oracle input is empty")]
    Empty,
}

fn guard(len: usize, limit: usize) -> Result<(), OracleError> {
    if len > limit {
        Err(OracleError::SizeGuard { got: len, limit })
    } else {
        Ok(())
    }
}

fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// All nonempty subsequences of `chain` within `delta` of it, as index lists.
fn simplifications(chain: &Chain, delta: f64, anchored: bool) -> Vec<Vec<usize>> {
    let len = chain.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << len) {
        if anchored && (mask & 1 == 0 || mask >> (len - 1) & 1 == 0) {
            continue;
        }
        let idx = indices(mask);
        let sub = chain.subchain(&idx).expect("valid mask");
        if frechet_decision(chain, &sub, delta).expect("same dimension") {
            out.push(idx);
        }
    }
    out
}

fn cost(chain: &Chain, idx: &[usize]) -> f64 {
    idx.iter().map(|&i| chain.weight(i)).sum()
}

/// Minimum of `max(C(A'), C(B'))` over all simplification pairs meeting the
/// three tolerances, or `None` when no pair does. Unweighted chains count
/// vertices.
pub fn brute_wcps3f(a: &Chain, b: &Chain, params: &CpsParams) -> Result<Option<f64>, OracleError> {
    guard(a.len(), MAX_ORACLE_LEN)?;
    guard(b.len(), MAX_ORACLE_LEN)?;
    let anchored = params.endpoint_mode == EndpointMode::Anchored;
    let mut side_a: Vec<(f64, Chain)> = simplifications(a, params.delta1, anchored)
        .into_iter()
        .map(|idx| (cost(a, &idx), a.subchain(&idx).unwrap()))
        .collect();
    let mut side_b: Vec<(f64, Chain)> = simplifications(b, params.delta2, anchored)
        .into_iter()
        .map(|idx| (cost(b, &idx), b.subchain(&idx).unwrap()))
        .collect();
    side_a.sort_by(|x, y| x.0.total_cmp(&y.0));
    side_b.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut best: Option<f64> = None;
    for (ca, sa) in &side_a {
        if best.is_some_and(|k| *ca >= k) {
            break;
        }
        for (cb, sb) in &side_b {
            let value = ca.max(*cb);
            if best.is_some_and(|k| value >= k) {
                break;
            }
            if frechet_decision(sa, sb, params.delta3).unwrap() {
                best = Some(value);
                break;
            }
        }
    }
    Ok(best)
}

/// Minimum of `max(|A'|, |B'|)`, or `None` when no pair is feasible.
pub fn brute_cps3f(a: &Chain, b: &Chain, params: &CpsParams) -> Result<Option<usize>, OracleError> {
    let (a, b) = (a.unweighted(), b.unweighted());
    Ok(brute_wcps3f(&a, &b, params)?.map(|k| k as usize))
}

/// Fewest vertices of `A'` with `d_dF(A, A') <= delta1` and
/// `d_dF(A', B) <= delta3`.
pub fn brute_one_sided(a: &Chain, b: &Chain, delta1: f64, delta3: f64) -> Result<Option<usize>, OracleError> {
    guard(a.len(), MAX_ORACLE_LEN)?;
    Ok(simplifications(a, delta1, false)
        .into_iter()
        .filter(|idx| frechet_decision(&a.subchain(idx).unwrap(), b, delta3).unwrap())
        .map(|idx| idx.len())
        .min())
}

/// Fewest vertices of `A'` with `d_dF(A', B) <= delta`.
pub fn brute_min_k(a: &Chain, b: &Chain, delta: f64) -> Result<Option<usize>, OracleError> {
    guard(a.len(), MAX_ORACLE_LEN)?;
    Ok((1u32..(1 << a.len()))
        .map(indices)
        .filter(|idx| frechet_decision(&a.subchain(idx).unwrap(), b, delta).unwrap())
        .map(|idx| idx.len())
        .min())
}

/// Smallest `d_dF(A', B)` over subsequences `A'` with at most `k` vertices.
pub fn brute_min_delta(a: &Chain, b: &Chain, k: usize) -> Result<f64, OracleError> {
    guard(a.len(), MAX_ORACLE_LEN)?;
    if k == 0 {
        return Err(OracleError::Empty);
    }
    Ok((1u32..(1 << a.len()))
        .filter(|mask| mask.count_ones() as usize <= k)
        .map(|mask| discrete_frechet(&a.subchain(&indices(mask)).unwrap(), b).unwrap().value)
        .fold(f64::INFINITY, f64::min))
}

/// Whether `set` splits into two parts of equal sum.
pub fn partition_brute(set: &[u64]) -> Result<bool, OracleError> {
    guard(set.len(), MAX_PARTITION_LEN)?;
    let total: u64 = set.iter().sum();
    if total % 2 == 1 {
        return Ok(false);
    }
    Ok((0u32..(1 << set.len())).any(|mask| {
        set.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).sum::<u64>() * 2 == total
    }))
}

/// A weighted chain pair built from a multiset so that a pair within budget
/// exists iff the multiset has an equal-sum partition.
#[derive(Debug, Clone)]
pub struct ReductionInstance {
    pub a: Chain,
    pub b: Chain,
    pub params: CpsParams,
    pub budget: f64,
    pub source_set: Vec<u64>,
}

/// Offset of the second vertex of each gadget.
const GADGET_GAP: f64 = 0.2;

/// Builds the two chains: element `s_i` becomes the gadget
/// `(i, 1), (i + 0.2, 1)` on `A` and `(i, 0), (i + 0.2, 0)` on `B`, with
/// `s_i` charged to the first vertex on `A` and to the second on `B`. The
/// positive variant adds one to every weight and `|S|` to the budget.
///
/// `delta1 = delta2` is the gadget width as computed in floating point (at
/// least 0.2): `(i + 0.2) - i` rounds above 0.2 for some `i`. Any tolerance
/// below the 0.8 gap between gadgets gives the same instance.
pub fn make_reduction_instance(set: &[u64], positive_variant: bool) -> Result<ReductionInstance, OracleError> {
    if set.is_empty() {
        return Err(OracleError::Empty);
    }
    let shift = if positive_variant { 1.0 } else { 0.0 };
    let mut pa = Vec::with_capacity(2 * set.len());
    let mut pb = Vec::with_capacity(2 * set.len());
    let mut wa = Vec::with_capacity(2 * set.len());
    let mut wb = Vec::with_capacity(2 * set.len());
    let mut width = GADGET_GAP;
    for (k, &s) in set.iter().enumerate() {
        let x = (k + 1) as f64;
        let (left_a, right_a) = (Point::new2(x, 1.0), Point::new2(x + GADGET_GAP, 1.0));
        width = width.max(left_a.dist(&right_a));
        pa.extend([left_a, right_a]);
        pb.extend([Point::new2(x, 0.0), Point::new2(x + GADGET_GAP, 0.0)]);
        wa.extend([s as f64 + shift, shift]);
        wb.extend([shift, s as f64 + shift]);
    }
    let total: u64 = set.iter().sum();
    Ok(ReductionInstance {
        a: Chain::with_weights(pa, wa).expect("finite gadget"),
        b: Chain::with_weights(pb, wb).expect("finite gadget"),
        params: CpsParams::new(width, width, 1.0),
        budget: total as f64 / 2.0 + shift * set.len() as f64,
        source_set: set.to_vec(),
    })
}
