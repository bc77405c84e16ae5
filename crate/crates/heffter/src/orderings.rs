//! Simple orderings: partial sums that are pairwise distinct mod `v`, and a
//! backtracking search for such an ordering of a line's entries.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::array::PFArray;
use crate::error::{Error, Result};
use crate::ring::RingParams;

/// Beyond this line length the exhaustive permutation search must be
/// explicitly replaced by the randomized heuristic.
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Partial sums `s_1, ..., s_k` of `seq`, reduced to `[0, v)`.
pub fn partial_sums(seq: &[i64], v: i64) -> Vec<i64> {
    let mut acc = 0i64;
    seq.iter()
        .map(|t| {
            acc = (acc + t).rem_euclid(v);
            acc
        })
        .collect()
}

/// True iff all partial sums of `seq` are pairwise distinct mod `v`.
pub fn is_simple(seq: &[i64], v: i64) -> bool {
    let sums = partial_sums(seq, v);
    let mut seen = HashSet::with_capacity(sums.len());
    sums.into_iter().all(|s| seen.insert(s))
}

/// Equivalent characterization for sequences summing to zero mod `v`:
/// no proper nonempty subsequence of consecutive elements sums to zero.
/// Callers must ensure the total is zero mod `v`.
pub fn is_simple_via_subsums(seq: &[i64], v: i64) -> bool {
    let k = seq.len();
    for start in 0..k {
        for end in start..k {
            if end - start + 1 == k {
                continue;
            }
            let sum: i64 = seq[start..=end].iter().map(|t| t.rem_euclid(v)).sum();
            if sum % v == 0 {
                return false;
            }
        }
    }
    true
}

fn search(
    remaining: &mut Vec<i64>,
    prefix: &mut Vec<i64>,
    seen: &mut HashSet<i64>,
    acc: i64,
    v: i64,
) -> bool {
    if remaining.is_empty() {
        return true;
    }
    let mut last: Option<i64> = None;
    for idx in 0..remaining.len() {
        let candidate = remaining[idx];
        // remaining is kept sorted; equal values at the same depth are
        // interchangeable, try each only once.
        if last == Some(candidate) {
            continue;
        }
        last = Some(candidate);
        let next = (acc + candidate).rem_euclid(v);
        if seen.contains(&next) {
            continue;
        }
        remaining.remove(idx);
        prefix.push(candidate);
        seen.insert(next);
        if search(remaining, prefix, seen, next, v) {
            return true;
        }
        seen.remove(&next);
        prefix.pop();
        remaining.insert(idx, candidate);
    }
    false
}

/// Finds a simple ordering of `entries` by backtracking over permutations
/// with partial-sum pruning, candidates taken in ascending value order.
/// Complete: returns `None` only after exhausting the permutation tree.
pub fn find_simple_ordering(entries: &[i64], v: i64) -> Option<Vec<i64>> {
    let mut remaining: Vec<i64> = entries.to_vec();
    remaining.sort_unstable();
    let mut prefix = Vec::with_capacity(entries.len());
    let mut seen = HashSet::with_capacity(entries.len());
    if search(&mut remaining, &mut prefix, &mut seen, 0, v) {
        Some(prefix)
    } else {
        None
    }
}

/// Per-line simple orderings of a partially filled array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingPlan {
    pub row_orderings: Vec<Vec<i64>>,
    pub col_orderings: Vec<Vec<i64>>,
    pub modulus: i64,
}

/// Builds per-row and per-column simple orderings. Lines already simple in
/// scan order (left-to-right, top-to-bottom) keep that order; other lines
/// are searched. Returns `None` when some line admits no simple ordering.
///
/// Lines longer than [`EXHAUSTIVE_LIMIT`] are rejected with an error; use
/// [`ordering_plan_heuristic`] to allow the incomplete randomized search.
pub fn ordering_plan(a: &PFArray, params: &RingParams) -> Result<Option<OrderingPlan>> {
    plan_impl(a, params, None)
}

/// Like [`ordering_plan`], but lines longer than [`EXHAUSTIVE_LIMIT`] are
/// attempted with `restarts` random shuffles each. Incomplete: `None` then
/// means "not found", not "does not exist".
pub fn ordering_plan_heuristic(
    a: &PFArray,
    params: &RingParams,
    restarts: u64,
    seed: u64,
) -> Result<Option<OrderingPlan>> {
    plan_impl(a, params, Some((restarts, seed)))
}

fn plan_impl(
    a: &PFArray,
    params: &RingParams,
    heuristic: Option<(u64, u64)>,
) -> Result<Option<OrderingPlan>> {
    let v = params.v();
    let mut plan = OrderingPlan {
        row_orderings: Vec::with_capacity(a.n_rows()),
        col_orderings: Vec::with_capacity(a.n_cols()),
        modulus: v,
    };
    let lines = (1..=a.n_rows())
        .map(|r| a.row_entries(r))
        .chain((1..=a.n_cols()).map(|c| a.col_entries(c)));
    for (index, entries) in lines.enumerate() {
        let ordering = if is_simple(&entries, v) {
            Some(entries.clone())
        } else if entries.len() <= EXHAUSTIVE_LIMIT {
            find_simple_ordering(&entries, v)
        } else if let Some((restarts, seed)) = heuristic {
            randomized_ordering(&entries, v, restarts, seed ^ index as u64)
        } else {
            return Err(Error::domain(format!(
                "line of {} entries exceeds the exhaustive search limit {}; \
                 enable the randomized heuristic",
                entries.len(),
                EXHAUSTIVE_LIMIT
            )));
        };
        let Some(ordering) = ordering else {
            return Ok(None);
        };
        if index < a.n_rows() {
            plan.row_orderings.push(ordering);
        } else {
            plan.col_orderings.push(ordering);
        }
    }
    Ok(Some(plan))
}

/// Random restarts with a greedy legality check; incomplete but useful for
/// long lines. Deterministic for a fixed seed (xorshift generator).
fn randomized_ordering(entries: &[i64], v: i64, restarts: u64, seed: u64) -> Option<Vec<i64>> {
    let mut state = seed | 1;
    let mut next_u64 = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..restarts {
        let mut pool = entries.to_vec();
        // Fisher-Yates with the xorshift stream.
        for i in (1..pool.len()).rev() {
            let j = (next_u64() % (i as u64 + 1)) as usize;
            pool.swap(i, j);
        }
        if is_simple(&pool, v) {
            return Some(pool);
        }
    }
    None
}
