// SPDX-License-Identifier: Apache-2.0

//! Pure kernels shared by every algorithm: the H-index, the dominance order
//! on coreness pairs, skyline reduction and the two-dimensional D-index.

use std::cell::RefCell;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A `(k, l)` pair: in-degree bound `k`, out-degree bound `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorenessPair {
    pub k: u32,
    pub l: u32,
}

impl CorenessPair {
    pub const ZERO: CorenessPair = CorenessPair { k: 0, l: 0 };

    #[inline]
    pub const fn new(k: u32, l: u32) -> Self {
        CorenessPair { k, l }
    }

    /// `other ⪯ self`: both coordinates of `other` are no larger.
    #[inline]
    pub fn weakly_dominates(self, other: CorenessPair) -> bool {
        other.k <= self.k && other.l <= self.l
    }

    /// `other ≺ self`: `other ⪯ self` and the pairs differ.
    #[inline]
    pub fn strictly_dominates(self, other: CorenessPair) -> bool {
        (other.k < self.k && other.l <= self.l) || (other.k <= self.k && other.l < self.l)
    }
}

impl From<(u32, u32)> for CorenessPair {
    fn from((k, l): (u32, u32)) -> Self {
        CorenessPair { k, l }
    }
}

impl fmt::Display for CorenessPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

/// `b ⪯ a`.
#[inline]
pub fn dominates_weak(a: CorenessPair, b: CorenessPair) -> bool {
    a.weakly_dominates(b)
}

/// `b ≺ a`.
#[inline]
pub fn dominates_strict(a: CorenessPair, b: CorenessPair) -> bool {
    a.strictly_dominates(b)
}

/// Largest `h` such that at least `h` of `values` are `>= h`.
pub fn h_index(values: &[u32]) -> u32 {
    let mut buckets = vec![0u32; values.len() + 1];
    h_index_with(values.iter().copied(), values.len(), &mut buckets)
}

/// H-index of `count` values drawn from `values`, reusing `buckets` as
/// counting storage.
pub(crate) fn h_index_with(
    values: impl Iterator<Item = u32>,
    count: usize,
    buckets: &mut Vec<u32>,
) -> u32 {
    buckets.clear();
    buckets.resize(count + 1, 0);
    for x in values {
        buckets[(x as usize).min(count)] += 1;
    }
    let mut at_least = 0u32;
    for h in (0..=count).rev() {
        at_least += buckets[h];
        if at_least as usize >= h {
            return h as u32;
        }
    }
    0
}

/// H-index using a per-thread bucket buffer. `count` only needs to bound the
/// number of values from above.
pub(crate) fn h_index_local(values: impl Iterator<Item = u32>, count: usize) -> u32 {
    thread_local! {
        static BUCKETS: RefCell<Vec<u32>> = const { RefCell::new(Vec::new()) };
    }
    BUCKETS.with(|b| h_index_with(values, count, &mut b.borrow_mut()))
}

/// An antichain of coreness pairs in canonical order: `k` strictly
/// increasing, `l` strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SkylineSet(Vec<CorenessPair>);

impl SkylineSet {
    /// Skyline reduction: the distinct input pairs not strictly dominated by
    /// another input pair.
    pub fn from_pairs(pairs: impl IntoIterator<Item = CorenessPair>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        // k descending, l descending: keep a pair only if its l beats every
        // pair with a larger-or-equal k seen so far.
        pairs.sort_unstable_by(|a, b| b.cmp(a));
        let mut kept = Vec::with_capacity(pairs.len());
        let mut best_l: Option<u32> = None;
        for p in pairs {
            if best_l.is_none_or(|l| p.l > l) {
                kept.push(p);
                best_l = Some(p.l);
            }
        }
        kept.reverse();
        SkylineSet(kept)
    }

    pub fn singleton(p: CorenessPair) -> Self {
        SkylineSet(vec![p])
    }

    /// Wraps pairs already in canonical order; `None` if they are not.
    pub fn from_canonical(pairs: Vec<CorenessPair>) -> Option<Self> {
        let ok = pairs.windows(2).all(|w| w[0].k < w[1].k && w[0].l > w[1].l);
        ok.then_some(SkylineSet(pairs))
    }

    pub fn pairs(&self) -> &[CorenessPair] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = CorenessPair> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_k(&self) -> u32 {
        self.0.last().map_or(0, |p| p.k)
    }

    pub fn max_l(&self) -> u32 {
        self.0.first().map_or(0, |p| p.l)
    }

    /// Largest `l'` among pairs with `k' >= k`. In canonical order that is
    /// the first pair at or past `k`.
    #[inline]
    pub fn best_l_at(&self, k: u32) -> Option<u32> {
        let i = self.0.partition_point(|p| p.k < k);
        self.0.get(i).map(|p| p.l)
    }

    /// Whether some member weakly dominates `(k, l)`.
    #[inline]
    pub fn supports(&self, p: CorenessPair) -> bool {
        self.best_l_at(p.k).is_some_and(|l| l >= p.l)
    }

    pub fn is_antichain(&self) -> bool {
        self.0.iter().enumerate().all(|(i, a)| {
            self.0
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.strictly_dominates(*b) && a != b)
        })
    }

    /// Set order `self ⪯ upper`: every member of `self` is weakly dominated
    /// by some member of `upper`.
    pub fn is_below(&self, upper: &SkylineSet) -> bool {
        self.iter().all(|p| upper.supports(p))
    }
}

impl AsRef<SkylineSet> for SkylineSet {
    fn as_ref(&self) -> &SkylineSet {
        self
    }
}

impl fmt::Display for SkylineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

pub fn skyline_reduce(pairs: &[CorenessPair]) -> SkylineSet {
    SkylineSet::from_pairs(pairs.iter().copied())
}

/// Reusable buffers for D-index evaluation.
#[derive(Debug, Default)]
pub struct DIndexScratch {
    in_best: Vec<u32>,
    out_best: Vec<u32>,
    buckets: Vec<u32>,
}

/// Walks `k` from `k_bound` down to 0 and keeps `(k, l)` whenever the
/// largest feasible `l` for that `k` exceeds every `l` kept so far.
/// `largest_l(k)` returns `None` when no `l` is feasible for `k`.
pub(crate) fn staircase(k_bound: u32, mut largest_l: impl FnMut(u32) -> Option<u32>) -> SkylineSet {
    let mut out = Vec::new();
    let mut l_min: Option<u32> = None;
    for k in (0..=k_bound).rev() {
        let Some(l) = largest_l(k) else { continue };
        if l_min.is_none_or(|m| l > m) {
            out.push(CorenessPair::new(k, l));
            l_min = Some(l);
        }
    }
    out.reverse();
    SkylineSet(out)
}

/// Largest `l` with at least `k` entries of `in_best` `>= l` and at least `l`
/// entries of `out_best` `>= l`, or `None` if fewer than `k` in-entries exist.
/// Both buffers hold, per neighbour (or per pair), the best `l` available at
/// the current `k`.
fn largest_feasible_l(
    k: u32,
    in_best: &mut [u32],
    out_best: &[u32],
    buckets: &mut Vec<u32>,
) -> Option<u32> {
    let k = k as usize;
    if in_best.len() < k {
        return None;
    }
    let in_cap = if k == 0 {
        u32::MAX
    } else {
        *in_best.select_nth_unstable_by(k - 1, |a, b| b.cmp(a)).1
    };
    let out_cap = h_index_with(out_best.iter().copied(), out_best.len(), buckets);
    Some(in_cap.min(out_cap))
}

/// D-index of two pair multisets: the maximal `(k, l)` such that at least
/// `k` pairs of `r_in` and at least `l` pairs of `r_out` weakly dominate it.
///
/// `k` is bounded by `H({k_i})` over `r_in` and `l` by `H({l_j})` over
/// `r_out`; pairs not above the last accepted `l` are skipped. The result is
/// never empty: `(0,0)` is always feasible.
pub fn d_index(r_in: &[CorenessPair], r_out: &[CorenessPair]) -> SkylineSet {
    let mut scratch = DIndexScratch::default();
    let ks: Vec<u32> = r_in.iter().map(|p| p.k).collect();
    let k_bound = h_index_with(ks.iter().copied(), ks.len(), &mut scratch.buckets);
    staircase(k_bound, |k| {
        scratch.in_best.clear();
        scratch
            .in_best
            .extend(r_in.iter().filter(|p| p.k >= k).map(|p| p.l));
        scratch.out_best.clear();
        scratch
            .out_best
            .extend(r_out.iter().filter(|p| p.k >= k).map(|p| p.l));
        largest_feasible_l(
            k,
            &mut scratch.in_best,
            &scratch.out_best,
            &mut scratch.buckets,
        )
    })
}

/// n-order D-index over neighbour skyline sets: a neighbour supports
/// `(k, l)` when any pair of its set weakly dominates `(k, l)`.
///
/// `k_bound` must be `H` of the in-neighbours' maximum `k` values; the
/// out-neighbours' `H` of maximum `l` bounds `l` implicitly.
pub fn d_index_of_sets<S: AsRef<SkylineSet>>(
    in_sets: &[S],
    out_sets: &[S],
    k_bound: u32,
    scratch: &mut DIndexScratch,
) -> SkylineSet {
    let DIndexScratch {
        in_best,
        out_best,
        buckets,
    } = scratch;
    staircase(k_bound, |k| {
        in_best.clear();
        in_best.extend(in_sets.iter().filter_map(|s| s.as_ref().best_l_at(k)));
        out_best.clear();
        out_best.extend(out_sets.iter().filter_map(|s| s.as_ref().best_l_at(k)));
        largest_feasible_l(k, in_best, out_best, buckets)
    })
}
