//! Layered dynamic program over configurations.
//!
//! Layers are indexed by the man/woman position `(i, j)` and processed in
//! row-major order. A layer stores, for every dog pair `(p, q)` with
//! `d(a_i, a_p) <= delta1` and `d(b_j, b_q) <= delta2`, an array over hop
//! slots `s`:
//!
//! * `x[p, q, s]`: the least B-side cost of reaching `(i, p, j, q)` with an
//!   A-side cost of at most `levels[s]`;
//! * `c`, `r`, `t`: running minima of `x` over `p' <= p`, over `q' <= q`, and
//!   over both.
//!
//! Dog positions outside the neighborhoods are never stored: their `x` and
//! `r` entries are infinite, and `c`/`t` there equal the entry at the
//! nearest stored position below. Each cell then reads a constant number of
//! entries from the four layers `(i-1, j)`, `(i, j-1)`, `(i-1, j-1)` and
//! `(i, j)`.
//!
//! Only the previous and the current row of layers are alive in value mode.
//! Reconstruct mode additionally keeps every `x` array and walks back from
//! the best final cell.

use std::time::Instant;

use super::proximity::{CrossTable, Neighborhoods, NONE};
use super::{CpsError, CpsParams, EndpointMode, SolveStats};
use crate::geometry::Chain;

pub(crate) trait Cost: Copy + PartialOrd + std::fmt::Debug {
    fn add(self, other: Self) -> Self;
}

impl Cost for u16 {
    #[inline]
    fn add(self, other: Self) -> Self {
        self.saturating_add(other)
    }
}

impl Cost for f64 {
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
}

#[inline]
fn min<V: PartialOrd>(a: V, b: V) -> V {
    if b < a {
        b
    } else {
        a
    }
}

/// How hops are charged.
pub(crate) struct CostModel<V> {
    /// Ascending A-side budgets, one per slot.
    pub levels: Vec<V>,
    /// `hop_slot[p * slots + s]`: slot to read from a predecessor when dog A
    /// lands on `a_p` while the target slot is `s`; `NONE` if infeasible.
    pub hop_slot: Vec<u32>,
    /// First slot whose budget covers a start on `a_p`.
    pub entry_slot: Vec<u32>,
    /// Cost charged when dog B lands on `b_q`.
    pub b_cost: Vec<V>,
    pub inf: V,
    /// Values above this are treated as infinite.
    pub limit: V,
}

pub(crate) struct Outcome<V> {
    pub best: Option<V>,
    pub dogs: Option<(Vec<usize>, Vec<usize>)>,
    pub stats: SolveStats,
}

struct Layer<V> {
    cols: usize,
    x: Vec<V>,
    c: Vec<V>,
    r: Vec<V>,
    t: Vec<V>,
}

impl<V: Cost> Layer<V> {
    fn new(rows: usize, cols: usize, slots: usize, inf: V) -> Self {
        let len = rows * cols * slots;
        Layer { cols, x: vec![inf; len], c: vec![inf; len], r: vec![inf; len], t: vec![inf; len] }
    }

    fn cells(&self) -> u64 {
        4 * self.x.len() as u64
    }
}

pub(crate) struct Engine<V> {
    m: usize,
    n: usize,
    slots: usize,
    near_a: Neighborhoods,
    near_b: Neighborhoods,
    cross: CrossTable,
    model: CostModel<V>,
    mode: EndpointMode,
    deadline: Option<Instant>,
    cell_budget: u64,
    #[cfg(test)]
    pub(crate) check_tables: bool,
}

impl<V: Cost> Engine<V> {
    pub(crate) fn new(a: &Chain, b: &Chain, params: &CpsParams, model: CostModel<V>) -> Self {
        let slots = model.levels.len();
        debug_assert_eq!(model.hop_slot.len(), a.len() * slots);
        Engine {
            m: a.len(),
            n: b.len(),
            slots,
            near_a: Neighborhoods::new(a, params.delta1),
            near_b: Neighborhoods::new(b, params.delta2),
            cross: CrossTable::new(a, b, params.delta3),
            model,
            mode: params.endpoint_mode,
            deadline: params.deadline,
            cell_budget: params.cell_budget,
            #[cfg(test)]
            check_tables: false,
        }
    }

    #[inline]
    fn is_start(&self, p: usize, q: usize) -> bool {
        match self.mode {
            EndpointMode::FreeDogs => true,
            EndpointMode::Anchored => p == 0 && q == 0,
        }
    }

    #[inline]
    fn is_final(&self, p: usize, q: usize) -> bool {
        match self.mode {
            EndpointMode::FreeDogs => true,
            EndpointMode::Anchored => p == self.m - 1 && q == self.n - 1,
        }
    }

    #[inline]
    fn extend(&self, v: V, w: V) -> V {
        if !(v < self.model.inf) {
            return self.model.inf;
        }
        let s = v.add(w);
        if s > self.model.limit {
            self.model.inf
        } else {
            s
        }
    }

    pub(crate) fn run(&self, reconstruct: bool) -> Result<Outcome<V>, CpsError> {
        let (m, n, slots) = (self.m, self.n, self.slots);
        if reconstruct {
            let required = self.near_a.total() as u64 * self.near_b.total() as u64 * slots as u64;
            if required > self.cell_budget {
                return Err(CpsError::MemoryGuard { required, budget: self.cell_budget });
            }
        }

        let mut archive: Vec<Vec<V>> = if reconstruct { vec![Vec::new(); m * n] } else { Vec::new() };
        let mut prev: Vec<Option<Layer<V>>> = (0..n).map(|_| None).collect();
        let mut tmp = vec![self.model.inf; slots];
        let mut live = 0u64;
        let mut peak = 0u64;
        let mut possible = 0u64;

        for i in 0..m {
            if self.deadline.is_some_and(|d| Instant::now() > d) {
                return Err(CpsError::Timeout);
            }
            let mut cur: Vec<Option<Layer<V>>> = Vec::with_capacity(n);
            for j in 0..n {
                let diag = if j > 0 { prev[j - 1].as_ref() } else { None };
                let left = if j > 0 { cur[j - 1].as_ref() } else { None };
                let layer = self.fill_layer(i, j, prev[j].as_ref(), left, diag, &mut tmp, &mut possible);
                live += layer.cells();
                peak = peak.max(live);
                cur.push(Some(layer));
                // (i-1, j-1) has no readers left.
                if j > 0 {
                    if let Some(old) = prev[j - 1].take() {
                        live -= old.cells();
                        if reconstruct {
                            live += old.x.len() as u64;
                            archive[(i - 1) * n + j - 1] = old.x;
                        }
                    }
                }
            }
            if let Some(old) = prev[n - 1].take() {
                live -= old.cells();
                if reconstruct {
                    live += old.x.len() as u64;
                    archive[(i - 1) * n + n - 1] = old.x;
                }
            }
            prev = cur;
        }

        let last = prev[n - 1].as_ref().expect("last layer");
        let best = self.best_final(last);
        let stats = SolveStats { possible_configurations: possible, peak_cells: peak, ..Default::default() };
        let Some((value, p, q, s)) = best else {
            return Ok(Outcome { best: None, dogs: None, stats });
        };
        let dogs = if reconstruct {
            for (j, layer) in prev.into_iter().enumerate() {
                archive[(m - 1) * n + j] = layer.expect("row layer").x;
            }
            Some(self.backtrack(&archive, p, q, s))
        } else {
            None
        };
        Ok(Outcome { best: Some(value), dogs, stats })
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_layer(
        &self,
        i: usize,
        j: usize,
        up: Option<&Layer<V>>,
        left: Option<&Layer<V>>,
        diag: Option<&Layer<V>>,
        tmp: &mut [V],
        possible: &mut u64,
    ) -> Layer<V> {
        let slots = self.slots;
        let inf = self.model.inf;
        let dogs_a = self.near_a.members(i);
        let dogs_b = self.near_b.members(j);
        let cols = dogs_b.len();
        let mut layer = Layer::new(dogs_a.len(), cols, slots, inf);
        let origin = i == 0 && j == 0;

        for (pi, &p) in dogs_a.iter().enumerate() {
            let p = p as usize;
            for (qi, &q) in dogs_b.iter().enumerate() {
                let q = q as usize;
                let base = (pi * cols + qi) * slots;
                if self.cross.get(p, q) {
                    *possible += 1;
                    if origin && self.is_start(p, q) {
                        let entry = self.model.entry_slot[p] as usize;
                        let w = self.model.b_cost[q];
                        let start = if w > self.model.limit { inf } else { w };
                        for (s, v) in tmp.iter_mut().enumerate() {
                            *v = if s >= entry { start } else { inf };
                        }
                    } else {
                        tmp.fill(inf);
                        if let Some(l) = diag {
                            self.relax(l, i - 1, j - 1, p, q, true, tmp);
                        }
                        if let Some(l) = up {
                            self.relax(l, i - 1, j, p, q, true, tmp);
                        }
                        if let Some(l) = left {
                            self.relax(l, i, j - 1, p, q, true, tmp);
                        }
                        self.relax(&layer, i, j, p, q, false, tmp);
                    }
                    layer.x[base..base + slots].copy_from_slice(tmp);
                }
                self.update_minima(&mut layer, pi, qi);
            }
        }
        #[cfg(test)]
        if self.check_tables {
            check_layer(&layer, dogs_a.len(), slots);
        }
        layer
    }

    /// Folds the candidates offered by layer `(li, lj)` into `out`.
    #[allow(clippy::too_many_arguments)]
    #[inline]
    fn relax(&self, l: &Layer<V>, li: usize, lj: usize, p: usize, q: usize, stay: bool, out: &mut [V]) {
        let slots = self.slots;
        let hop = &self.model.hop_slot[p * slots..(p + 1) * slots];
        let w = self.model.b_cost[q];
        let p_at = self.near_a.slot(li, p);
        let p_below = self.near_a.before(li, p);
        let q_at = self.near_b.slot(lj, q);
        let q_below = self.near_b.before(lj, q);

        // dog A hops, dog B stays
        if let (Some(pb), Some(qa)) = (p_below, q_at) {
            let row = &l.c[(pb * l.cols + qa) * slots..][..slots];
            for (o, &h) in out.iter_mut().zip(hop) {
                if h != NONE {
                    *o = min(*o, row[h as usize]);
                }
            }
        }
        // dog B hops, dog A stays
        if let (Some(pa), Some(qb)) = (p_at, q_below) {
            let row = &l.r[(pa * l.cols + qb) * slots..][..slots];
            for (o, &v) in out.iter_mut().zip(row) {
                *o = min(*o, self.extend(v, w));
            }
        }
        // both hop
        if let (Some(pb), Some(qb)) = (p_below, q_below) {
            let row = &l.t[(pb * l.cols + qb) * slots..][..slots];
            for (o, &h) in out.iter_mut().zip(hop) {
                if h != NONE {
                    *o = min(*o, self.extend(row[h as usize], w));
                }
            }
        }
        // neither dog moves
        if stay {
            if let (Some(pa), Some(qa)) = (p_at, q_at) {
                let row = &l.x[(pa * l.cols + qa) * slots..][..slots];
                for (o, &v) in out.iter_mut().zip(row) {
                    *o = min(*o, v);
                }
            }
        }
    }

    fn update_minima(&self, layer: &mut Layer<V>, pi: usize, qi: usize) {
        let slots = self.slots;
        let cols = layer.cols;
        let base = (pi * cols + qi) * slots;
        for s in 0..slots {
            let x = layer.x[base + s];
            let mut c = x;
            let mut r = x;
            let mut t = x;
            if pi > 0 {
                let up = base - cols * slots + s;
                c = min(c, layer.c[up]);
                t = min(t, layer.t[up]);
            }
            if qi > 0 {
                let back = base - slots + s;
                r = min(r, layer.r[back]);
                t = min(t, layer.t[back]);
            }
            layer.c[base + s] = c;
            layer.r[base + s] = r;
            layer.t[base + s] = t;
        }
    }

    fn best_final(&self, last: &Layer<V>) -> Option<(V, usize, usize, usize)> {
        let (m, n, slots) = (self.m, self.n, self.slots);
        let mut best: Option<(V, usize, usize, usize)> = None;
        for (pi, &p) in self.near_a.members(m - 1).iter().enumerate() {
            for (qi, &q) in self.near_b.members(n - 1).iter().enumerate() {
                if !self.is_final(p as usize, q as usize) {
                    continue;
                }
                let base = (pi * last.cols + qi) * slots;
                for s in 0..slots {
                    let v = last.x[base + s];
                    if !(v < self.model.inf) {
                        continue;
                    }
                    let level = self.model.levels[s];
                    let value = if level > v { level } else { v };
                    if best.is_none_or(|b| value < b.0) {
                        best = Some((value, pi, qi, s));
                    }
                }
            }
        }
        best
    }

    /// Recovers the dog positions along one optimal walk ending at final
    /// cell `(pi, qi, s)`. Predecessors are searched in the order diagonal,
    /// man-only, woman-only, same layer; within a layer by smallest `p'`,
    /// then smallest `q'`.
    fn backtrack(&self, archive: &[Vec<V>], pi: usize, qi: usize, s: usize) -> (Vec<usize>, Vec<usize>) {
        let (n, slots) = (self.n, self.slots);
        let (mut i, mut j) = (self.m - 1, n - 1);
        let mut p = self.near_a.members(i)[pi] as usize;
        let mut q = self.near_b.members(j)[qi] as usize;
        let mut s = s;
        let mut path = vec![(p, q)];

        loop {
            if i == 0 && j == 0 && self.is_start(p, q) {
                break;
            }
            let cols = self.near_b.count(j);
            let here = (self.near_a.slot(i, p).unwrap() * cols + self.near_b.slot(j, q).unwrap()) * slots + s;
            let x = archive[i * n + j][here];
            let w = self.model.b_cost[q];
            let mut found = None;
            'cases: for (di, dj) in [(1, 1), (1, 0), (0, 1), (0, 0)] {
                if i < di || j < dj {
                    continue;
                }
                let (li, lj) = (i - di, j - dj);
                let lx = &archive[li * n + lj];
                let lcols = self.near_b.count(lj);
                for (pi2, &p2) in self.near_a.members(li).iter().enumerate() {
                    let p2 = p2 as usize;
                    if p2 > p {
                        break;
                    }
                    let slot = if p2 < p { self.model.hop_slot[p * slots + s] } else { s as u32 };
                    if slot == NONE {
                        continue;
                    }
                    for (qi2, &q2) in self.near_b.members(lj).iter().enumerate() {
                        let q2 = q2 as usize;
                        if q2 > q {
                            break;
                        }
                        if (di, dj) == (0, 0) && p2 == p && q2 == q {
                            continue;
                        }
                        let y = lx[(pi2 * lcols + qi2) * slots + slot as usize];
                        if !(y < self.model.inf) {
                            continue;
                        }
                        let cand = if q2 < q { self.extend(y, w) } else { y };
                        if cand == x {
                            found = Some((li, lj, p2, q2, slot as usize));
                            break 'cases;
                        }
                    }
                }
            }
            let (li, lj, p2, q2, s2) = found.expect("every finite cell has a predecessor");
            (i, j, p, q, s) = (li, lj, p2, q2, s2);
            path.push((p, q));
        }

        path.reverse();
        let mut dogs_a: Vec<usize> = path.iter().map(|&(p, _)| p).collect();
        let mut dogs_b: Vec<usize> = path.iter().map(|&(_, q)| q).collect();
        dogs_a.dedup();
        dogs_b.dedup();
        (dogs_a, dogs_b)
    }
}

/// Recomputes `c`, `r`, `t` from `x` by direct scans and compares.
#[cfg(test)]
fn check_layer<V: Cost>(layer: &Layer<V>, rows: usize, slots: usize) {
    let cols = layer.cols;
    let at = |p: usize, q: usize, s: usize| (p * cols + q) * slots + s;
    for p in 0..rows {
        for q in 0..cols {
            for s in 0..slots {
                let mut c = layer.x[at(p, q, s)];
                let mut r = c;
                let mut t = c;
                for p2 in 0..=p {
                    c = min(c, layer.x[at(p2, q, s)]);
                    for q2 in 0..=q {
                        t = min(t, layer.x[at(p2, q2, s)]);
                    }
                }
                for q2 in 0..=q {
                    r = min(r, layer.x[at(p, q2, s)]);
                }
                assert_eq!(layer.c[at(p, q, s)], c, "C at ({p},{q},{s})");
                assert_eq!(layer.r[at(p, q, s)], r, "R at ({p},{q},{s})");
                assert_eq!(layer.t[at(p, q, s)], t, "T at ({p},{q},{s})");
            }
        }
    }
}

/// Unit-weight model: slot `s` allows `s + 1` vertices in `A'`.
pub(crate) fn unit_model(m: usize, n: usize, cap: Option<usize>) -> Result<CostModel<u16>, CpsError> {
    if m + n + 1 > u16::MAX as usize {
        return Err(CpsError::TooLarge(format!("chains of length {m} and {n}")));
    }
    let slots = cap.map_or(m, |c| c.min(m));
    let limit = cap.map_or(n, |c| c.min(n));
    let mut hop_slot = Vec::with_capacity(m * slots);
    for _ in 0..m {
        hop_slot.push(NONE);
        hop_slot.extend(0..slots.saturating_sub(1) as u32);
    }
    Ok(CostModel {
        levels: (1..=slots as u16).collect(),
        hop_slot,
        entry_slot: vec![0; m],
        b_cost: vec![1; n],
        inf: (m + n + 1) as u16,
        limit: limit as u16,
    })
}

pub(crate) type DogIndices = (Vec<usize>, Vec<usize>);

/// Runs the unit-weight engine; `a` must be the chain indexing the slots.
pub(crate) fn solve_unit(
    a: &Chain,
    b: &Chain,
    params: &CpsParams,
    reconstruct: bool,
) -> Result<(usize, Option<DogIndices>, SolveStats), CpsError> {
    let (m, n) = (a.len(), b.len());
    let model = unit_model(m, n, params.r_cap)?;
    let truncated = model.levels.len() < m || (model.limit as usize) < n;
    let out = Engine::new(a, b, params, model).run(reconstruct)?;
    match out.best {
        Some(k) => Ok((k as usize, out.dogs, out.stats)),
        None if truncated => Err(CpsError::RCapInconclusive { cap: params.r_cap.unwrap_or(m) }),
        None => Err(CpsError::NoSolution),
    }
}

#[cfg(test)]
pub(crate) fn solve_unit_checked(a: &Chain, b: &Chain, params: &CpsParams) -> Option<usize> {
    let model = unit_model(a.len(), b.len(), params.r_cap).unwrap();
    let mut engine = Engine::new(a, b, params, model);
    engine.check_tables = true;
    engine.run(false).unwrap().best.map(|k| k as usize)
}
