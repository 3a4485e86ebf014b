//! Reference solver on the explicit configuration DAG.
//!
//! Memory and time grow like `m^3 n^3`; use it to cross-check the dynamic
//! program on small inputs.

use std::collections::VecDeque;
use std::time::Instant;

use super::{CpsError, CpsParams, CpsSolution, EndpointMode, SolveStats};
use crate::geometry::Chain;

const MAX_EDGES: u64 = 60_000_000;
const ABSENT: u32 = u32::MAX;
const INF: u32 = u32::MAX;

struct ConfigGraph {
    /// `(i, p, j, q)` per vertex.
    vertices: Vec<[u32; 4]>,
    out_start: Vec<usize>,
    out_target: Vec<u32>,
    /// bit 0: dog A hops, bit 1: dog B hops
    out_hops: Vec<u8>,
}

fn build(a: &Chain, b: &Chain, params: &CpsParams) -> Result<ConfigGraph, CpsError> {
    let (m, n) = (a.len(), b.len());
    let key = |i: usize, p: usize, j: usize, q: usize| ((i * m + p) * n + j) * n + q;
    let mut index = vec![ABSENT; m * m * n * n];
    let mut vertices = Vec::new();
    for i in 0..m {
        for j in 0..n {
            for p in 0..m {
                if a.point(i).dist(a.point(p)) > params.delta1 {
                    continue;
                }
                for q in 0..n {
                    if b.point(j).dist(b.point(q)) <= params.delta2 && a.point(p).dist(b.point(q)) <= params.delta3 {
                        index[key(i, p, j, q)] = vertices.len() as u32;
                        vertices.push([i as u32, p as u32, j as u32, q as u32]);
                    }
                }
            }
        }
    }

    let free = params.endpoint_mode == EndpointMode::FreeDogs;
    let mut edges: Vec<(u32, u32, u8)> = Vec::new();
    for (v, &[i, p, j, q]) in vertices.iter().enumerate() {
        let (i, p, j, q) = (i as usize, p as usize, j as usize, q as usize);
        // Every potential initial configuration is a root.
        if free && i == 0 && j == 0 {
            continue;
        }
        for i2 in i.saturating_sub(1)..=i {
            for j2 in j.saturating_sub(1)..=j {
                for p2 in 0..=p {
                    for q2 in 0..=q {
                        if (i2, p2, j2, q2) == (i, p, j, q) {
                            continue;
                        }
                        let u = index[key(i2, p2, j2, q2)];
                        if u != ABSENT {
                            let hops = u8::from(p2 < p) | (u8::from(q2 < q) << 1);
                            edges.push((u, v as u32, hops));
                        }
                    }
                }
            }
        }
        if edges.len() as u64 > MAX_EDGES {
            return Err(CpsError::TooLarge(format!("configuration graph exceeds {MAX_EDGES} edges")));
        }
    }

    edges.sort_unstable_by_key(|e| e.0);
    let mut out_start = vec![0usize; vertices.len() + 1];
    for &(u, _, _) in &edges {
        out_start[u as usize + 1] += 1;
    }
    for k in 0..vertices.len() {
        out_start[k + 1] += out_start[k];
    }
    Ok(ConfigGraph {
        vertices,
        out_start,
        out_target: edges.iter().map(|e| e.1).collect(),
        out_hops: edges.iter().map(|e| e.2).collect(),
    })
}

/// Kahn's algorithm.
fn topological_order(g: &ConfigGraph) -> Vec<u32> {
    let nv = g.vertices.len();
    let mut indegree = vec![0u32; nv];
    for &t in &g.out_target {
        indegree[t as usize] += 1;
    }
    let mut queue: VecDeque<u32> = (0..nv as u32).filter(|&v| indegree[v as usize] == 0).collect();
    let mut order = Vec::with_capacity(nv);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        let u = u as usize;
        for &t in &g.out_target[g.out_start[u]..g.out_start[u + 1]] {
            indegree[t as usize] -= 1;
            if indegree[t as usize] == 0 {
                queue.push_back(t);
            }
        }
    }
    debug_assert_eq!(order.len(), nv, "configuration graph is acyclic");
    order
}

/// Minimum of `max(|A'|, |B'|)` by shortest paths over the explicit
/// configuration graph. Never returns witnesses.
pub fn cps3f_min_graph(a: &Chain, b: &Chain, params: &CpsParams) -> Result<CpsSolution, CpsError> {
    let started = Instant::now();
    params.validate(a, b)?;
    let (m, n) = (a.len(), b.len());
    let g = build(a, b, params)?;
    let order = topological_order(&g);

    // hops[v * slots + r]: fewest hops of dog B reaching v with at most r hops of dog A
    let slots = params.r_cap.map_or(m, |c| c.min(m));
    let nv = g.vertices.len();
    let mut hops = vec![INF; nv * slots];
    let is_source = |[i, p, j, q]: [u32; 4]| match params.endpoint_mode {
        EndpointMode::Anchored => [i, p, j, q] == [0; 4],
        EndpointMode::FreeDogs => i == 0 && j == 0,
    };
    for (v, &cfg) in g.vertices.iter().enumerate() {
        if is_source(cfg) {
            hops[v * slots..(v + 1) * slots].fill(0);
        }
    }

    for &u in &order {
        let u = u as usize;
        if hops[u * slots] == INF && hops[(u + 1) * slots - 1] == INF {
            continue;
        }
        for e in g.out_start[u]..g.out_start[u + 1] {
            let v = g.out_target[e] as usize;
            let (hop_a, hop_b) = (g.out_hops[e] & 1 == 1, g.out_hops[e] & 2 == 2);
            for r in 0..slots {
                let src = if hop_a {
                    if r == 0 {
                        continue;
                    }
                    r - 1
                } else {
                    r
                };
                let z = hops[u * slots + src];
                if z == INF {
                    continue;
                }
                let z = z + u32::from(hop_b);
                if z < hops[v * slots + r] {
                    hops[v * slots + r] = z;
                }
            }
        }
    }

    let is_sink = |[i, p, j, q]: [u32; 4]| {
        let (i, p, j, q) = (i as usize, p as usize, j as usize, q as usize);
        i == m - 1
            && j == n - 1
            && match params.endpoint_mode {
                EndpointMode::Anchored => p == m - 1 && q == n - 1,
                EndpointMode::FreeDogs => true,
            }
    };
    let cap = params.r_cap.unwrap_or(usize::MAX);
    let mut best: Option<usize> = None;
    for (v, &cfg) in g.vertices.iter().enumerate() {
        if !is_sink(cfg) {
            continue;
        }
        for r in 0..slots {
            let z = hops[v * slots + r];
            if z == INF {
                continue;
            }
            // hop counts are one less than vertex counts
            let k = 1 + r.max(z as usize);
            if k <= cap && best.is_none_or(|b| k < b) {
                best = Some(k);
            }
        }
    }

    let stats =
        SolveStats { possible_configurations: nv as u64, peak_cells: (nv * slots) as u64, elapsed: started.elapsed() };
    match best {
        Some(k_star) => Ok(CpsSolution { k_star, a_indices: None, b_indices: None, stats }),
        None if cap < m.max(n) => Err(CpsError::RCapInconclusive { cap }),
        None => Err(CpsError::NoSolution),
    }
}
