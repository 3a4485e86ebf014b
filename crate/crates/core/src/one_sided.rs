//! Simplifying one chain against another.
//!
//! [`one_sided_cps3f_min`] keeps both tolerances: `A'` must stay within
//! `delta1` of `A` and within `delta3` of `B`. [`simplify_min_k`] and
//! [`simplify_min_delta`] drop the first constraint and trade length against
//! `d_dF(A', B)`.
//!
//! In all three, `A'` may start and end at any vertex of `A`.

use crate::geometry::{Chain, GeometryError};
use crate::solver::CpsError;

const INF: u16 = u16::MAX;

/// Vertex indices of `A'` with its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplification {
    pub len: usize,
    /// 0-based, strictly increasing.
    pub indices: Vec<usize>,
}

fn check(a: &Chain, b: &Chain, deltas: &[f64]) -> Result<(), CpsError> {
    if a.dim() != b.dim() {
        return Err(GeometryError::DimensionMismatch { left: a.dim(), right: b.dim() }.into());
    }
    if let Some(d) = deltas.iter().find(|d| !(**d >= 0.0) || d.is_infinite()) {
        return Err(CpsError::InvalidParameter(format!("tolerance must be finite and >= 0, got {d}")));
    }
    Ok(())
}

/// Fewest vertices of `A'` such that `d_dF(A, A') <= delta1` and
/// `d_dF(A', B) <= delta3`.
///
/// Configurations are `(i, p, j)`: the man on `a_i`, the dog on `a_p` and the
/// woman on `b_j`. `x[i][j][p]` is the fewest dog vertices on a walk to that
/// configuration and `A[i][j][p]` its running minimum over `p' <= p`.
pub fn one_sided_cps3f_min(a: &Chain, b: &Chain, delta1: f64, delta3: f64) -> Result<Simplification, CpsError> {
    check(a, b, &[delta1, delta3])?;
    let (m, n) = (a.len(), b.len());
    if m >= INF as usize {
        return Err(CpsError::TooLarge(format!("chain of length {m}")));
    }
    let cells = m as u64 * m as u64 * n as u64;
    if cells > crate::solver::DEFAULT_CELL_BUDGET {
        return Err(CpsError::MemoryGuard { required: cells, budget: crate::solver::DEFAULT_CELL_BUDGET });
    }
    let near: Vec<bool> = (0..m * m).map(|k| a.point(k / m).dist(a.point(k % m)) <= delta1).collect();
    let cross: Vec<bool> = (0..m * n).map(|k| a.point(k / n).dist(b.point(k % n)) <= delta3).collect();
    let possible = |i: usize, p: usize, j: usize| near[i * m + p] && cross[p * n + j];

    let at = |i: usize, j: usize| (i * n + j) * m;
    let mut x = vec![INF; m * n * m];
    let mut prev_min = vec![INF; n * m];
    let mut cur_min = vec![INF; n * m];
    let plus1 = |v: u16| if v == INF { INF } else { v + 1 };

    for i in 0..m {
        for j in 0..n {
            for p in 0..m {
                let mut best = INF;
                if possible(i, p, j) {
                    if i == 0 && j == 0 {
                        best = 1;
                    } else {
                        // (layer x, layer running minimum) for each predecessor layer
                        let mut relax = |lx: &[u16], lmin: &[u16]| {
                            best = best.min(lx[p]);
                            if p > 0 {
                                best = best.min(plus1(lmin[p - 1]));
                            }
                        };
                        if i > 0 && j > 0 {
                            relax(&x[at(i - 1, j - 1)..][..m], &prev_min[(j - 1) * m..][..m]);
                        }
                        if i > 0 {
                            relax(&x[at(i - 1, j)..][..m], &prev_min[j * m..][..m]);
                        }
                        if j > 0 {
                            relax(&x[at(i, j - 1)..][..m], &cur_min[(j - 1) * m..][..m]);
                        }
                        if p > 0 {
                            best = best.min(plus1(cur_min[j * m + p - 1]));
                        }
                    }
                }
                x[at(i, j) + p] = best;
                let below = if p > 0 { cur_min[j * m + p - 1] } else { INF };
                cur_min[j * m + p] = below.min(best);
            }
        }
        std::mem::swap(&mut prev_min, &mut cur_min);
        cur_min.fill(INF);
    }

    let last = &x[at(m - 1, n - 1)..][..m];
    let (p_end, &best) = last.iter().enumerate().min_by_key(|&(p, &v)| (v, p)).expect("nonempty");
    if best == INF {
        return Err(CpsError::NoSolution);
    }

    // Walk back: diagonal, man only, woman only, dog only; smallest p' first.
    let (mut i, mut j, mut p) = (m - 1, n - 1, p_end);
    let mut dogs = vec![p];
    while i > 0 || j > 0 {
        let v = x[at(i, j) + p];
        let mut found = None;
        'cases: for (di, dj) in [(1, 1), (1, 0), (0, 1), (0, 0)] {
            if i < di || j < dj {
                continue;
            }
            let (li, lj) = (i - di, j - dj);
            for p2 in 0..=p {
                if (di, dj) == (0, 0) && p2 == p {
                    continue;
                }
                let y = x[at(li, lj) + p2];
                let cand = if p2 < p { plus1(y) } else { y };
                if y != INF && cand == v {
                    found = Some((li, lj, p2));
                    break 'cases;
                }
            }
        }
        (i, j, p) = found.expect("finite cell has a predecessor");
        dogs.push(p);
    }
    dogs.reverse();
    dogs.dedup();
    debug_assert_eq!(dogs.len(), best as usize);
    Ok(Simplification { len: best as usize, indices: dogs })
}

/// Fewest vertices of `A'` with `d_dF(A', B) <= delta`.
///
/// `o[i][j]` is the shortest `A'` drawn from `a_i..` that starts at `a_i` and
/// couples with `b_j..`; `x[i][j]` is the minimum of `o[i'][j]` over `i' >= i`.
pub fn simplify_min_k(a: &Chain, b: &Chain, delta: f64) -> Result<Simplification, CpsError> {
    check(a, b, &[delta])?;
    let (m, n) = (a.len(), b.len());
    const NO: u32 = u32::MAX;
    let close = |i: usize, j: usize| a.point(i).dist(b.point(j)) <= delta;
    // row m of x is the empty suffix
    let mut o = vec![NO; m * n];
    let mut x = vec![NO; (m + 1) * n];
    for i in (0..m).rev() {
        for j in (0..n).rev() {
            let v = if !close(i, j) {
                NO
            } else if j == n - 1 {
                1
            } else {
                let advance = x[(i + 1) * n + j + 1];
                o[i * n + j + 1].min(if advance == NO { NO } else { advance + 1 })
            };
            o[i * n + j] = v;
            x[i * n + j] = x[(i + 1) * n + j].min(v);
        }
    }

    let (start, &best) = (0..m).map(|i| (i, &o[i * n])).min_by_key(|&(i, &v)| (v, i)).expect("nonempty");
    if best == NO {
        return Err(CpsError::NoSolution);
    }
    let mut indices = vec![start];
    let (mut i, mut j) = (start, 0);
    while j < n - 1 {
        let v = o[i * n + j];
        if o[i * n + j + 1] == v {
            j += 1;
            continue;
        }
        let target = x[(i + 1) * n + j + 1];
        i = (i + 1..m).find(|&k| o[k * n + j + 1] == target).expect("suffix minimum is attained");
        j += 1;
        indices.push(i);
    }
    debug_assert_eq!(indices.len(), best as usize);
    Ok(Simplification { len: best as usize, indices })
}

/// Smallest `d_dF(A', B)` over `A'` with at most `k` vertices, found by
/// bisection over the sorted distinct distances `d(a_i, b_j)`.
pub fn simplify_min_delta(a: &Chain, b: &Chain, k: usize) -> Result<(f64, Simplification), CpsError> {
    if k == 0 {
        return Err(CpsError::InvalidParameter("k must be at least 1".into()));
    }
    check(a, b, &[])?;
    let mut dists: Vec<f64> = a.points().iter().flat_map(|p| b.points().iter().map(move |q| p.dist(q))).collect();
    dists.sort_unstable_by(f64::total_cmp);
    dists.dedup();

    let fits = |delta: f64| match simplify_min_k(a, b, delta) {
        Ok(s) if s.len <= k => Ok(Some(s)),
        Ok(_) | Err(CpsError::NoSolution) => Ok(None),
        Err(e) => Err(e),
    };
    // The largest distance always fits: any single vertex covers B.
    let (mut lo, mut hi) = (0, dists.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fits(dists[mid])?.is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let sol = fits(dists[lo])?.expect("bisection ends on a feasible distance");
    Ok((dists[lo], sol))
}
