use crate::geometry::Chain;

pub(crate) const NONE: u32 = u32::MAX;

/// For each vertex `i` of a chain, the sorted vertices `p` with
/// `d(x_i, x_p) <= delta`, plus O(1) lookups into that list.
pub(crate) struct Neighborhoods {
    len: usize,
    members: Vec<Vec<u32>>,
    /// `below[i * len + p]`: how many members of `i` are `< p`.
    below: Vec<u32>,
    /// `slot[i * len + p]`: position of `p` among the members of `i`, or `NONE`.
    slot: Vec<u32>,
}

impl Neighborhoods {
    pub(crate) fn new(chain: &Chain, delta: f64) -> Self {
        let len = chain.len();
        let mut members = Vec::with_capacity(len);
        let mut below = vec![0u32; len * len];
        let mut slot = vec![NONE; len * len];
        for i in 0..len {
            let mut list = Vec::new();
            for p in 0..len {
                below[i * len + p] = list.len() as u32;
                if chain.point(i).dist(chain.point(p)) <= delta {
                    slot[i * len + p] = list.len() as u32;
                    list.push(p as u32);
                }
            }
            members.push(list);
        }
        Neighborhoods { len, members, below, slot }
    }

    #[inline]
    pub(crate) fn members(&self, i: usize) -> &[u32] {
        &self.members[i]
    }

    #[inline]
    pub(crate) fn count(&self, i: usize) -> usize {
        self.members[i].len()
    }

    pub(crate) fn total(&self) -> usize {
        self.members.iter().map(Vec::len).sum()
    }

    /// Position of `p` in the list of `i`.
    #[inline]
    pub(crate) fn slot(&self, i: usize, p: usize) -> Option<usize> {
        let s = self.slot[i * self.len + p];
        (s != NONE).then_some(s as usize)
    }

    /// Position of the largest member of `i` strictly below `p`.
    #[inline]
    pub(crate) fn before(&self, i: usize, p: usize) -> Option<usize> {
        (self.below[i * self.len + p] as usize).checked_sub(1)
    }
}

/// `d(a_p, b_q) <= delta` for every pair.
pub(crate) struct CrossTable {
    cols: usize,
    close: Vec<bool>,
}

impl CrossTable {
    pub(crate) fn new(a: &Chain, b: &Chain, delta: f64) -> Self {
        let close = a.points().iter().flat_map(|pa| b.points().iter().map(move |pb| pa.dist(pb) <= delta)).collect();
        CrossTable { cols: b.len(), close }
    }

    #[inline]
    pub(crate) fn get(&self, p: usize, q: usize) -> bool {
        self.close[p * self.cols + q]
    }
}
