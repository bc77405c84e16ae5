//! Exhaustive backtracking search for small integer relative Heffter arrays.
//!
//! Cells are decided line by line; the final cell of every row and column is
//! forced by the zero-sum constraint, and a partial line is abandoned when
//! its residual sum exceeds what the largest unused support values can still
//! reach. In prove-empty mode, an empty answer certifies that the complete
//! tree was traversed.

use std::collections::{BTreeSet, HashMap};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::array::{diagonal_cells, PFArray, Position};
use crate::error::{Error, Result};
use crate::ring::RingParams;
use crate::verify::verify_integer;

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkeletonConstraint {
    /// Search over all skeletons with the required line counts.
    Free,
    /// Skeletons made of k consecutive diagonals (square arrays only).
    CyclicallyKDiagonal,
    /// A fixed set of filled positions.
    Fixed(BTreeSet<Position>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    FirstSolution,
    CountAll,
    ProveEmpty,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub t: usize,
    pub skeleton: SkeletonConstraint,
    pub mode: SearchMode,
    /// Global sign normalization, lexicographic row patterns (free
    /// skeletons), and a fixed starting diagonal (diagonal skeletons).
    /// Never changes the found/empty status; counts shrink accordingly.
    pub symmetry_reduction: bool,
    pub budget: u64,
    /// Split the tree at the first decision and search subtrees on a
    /// thread pool. Status is unchanged; witness identity and checkpoints
    /// are only deterministic in single-threaded runs.
    pub parallel: bool,
}

impl SearchSpec {
    /// Square integer `H_t(n;k)` search with defaults: free skeleton,
    /// symmetry reductions on, serial, default budget.
    pub fn square(n: usize, k: usize, t: usize, mode: SearchMode) -> Self {
        SearchSpec {
            m: n,
            n,
            s: k,
            k,
            t,
            skeleton: SkeletonConstraint::Free,
            mode,
            symmetry_reduction: true,
            budget: DEFAULT_BUDGET,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m * self.s != self.n * self.k {
            return Err(Error::domain(format!(
                "ms = {} but nk = {}",
                self.m * self.s,
                self.n * self.k
            )));
        }
        if self.s < 3 || self.s > self.n || self.k < 3 || self.k > self.m {
            return Err(Error::domain(
                "need 3 <= s <= n and 3 <= k <= m".to_string(),
            ));
        }
        if self.t == 0 || (2 * self.n * self.k) % self.t != 0 {
            return Err(Error::Divisibility {
                divisor: self.t,
                value: 2 * self.n * self.k,
            });
        }
        match &self.skeleton {
            SkeletonConstraint::Free => {}
            SkeletonConstraint::CyclicallyKDiagonal => {
                if self.m != self.n || self.s != self.k {
                    return Err(Error::domain(
                        "diagonal skeletons require a square array".to_string(),
                    ));
                }
            }
            SkeletonConstraint::Fixed(cells) => {
                let mut row_counts = vec![0usize; self.m + 1];
                let mut col_counts = vec![0usize; self.n + 1];
                for pos in cells {
                    if pos.row < 1 || pos.row > self.m || pos.col < 1 || pos.col > self.n {
                        return Err(Error::OutOfBounds {
                            row: pos.row,
                            col: pos.col,
                            rows: self.m,
                            cols: self.n,
                        });
                    }
                    row_counts[pos.row] += 1;
                    col_counts[pos.col] += 1;
                }
                if row_counts[1..].iter().any(|&c| c != self.s)
                    || col_counts[1..].iter().any(|&c| c != self.k)
                {
                    return Err(Error::domain(
                        "fixed skeleton has wrong line counts".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn ring(&self) -> RingParams {
        RingParams {
            m: self.m,
            n: self.n,
            s: self.s,
            k: self.k,
            t: self.t,
        }
    }
}

/// Resumable snapshot of an interrupted search: the choice indices leading
/// to the first uncounted subtree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub skeleton_index: usize,
    pub path: Vec<u32>,
    pub nodes: u64,
    pub solutions: u64,
}

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    Found,
    ExhaustedEmpty,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witnesses: Vec<PFArray>,
    pub nodes: u64,
    pub solutions: u64,
    pub checkpoint: Option<Checkpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Choice {
    Fill(i64),
    Skip,
}

#[derive(PartialEq)]
enum Flow {
    Continue,
    Stop,
    Abort,
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    found: AtomicBool,
}

struct Engine<'a> {
    spec: &'a SearchSpec,
    cells: Vec<Position>,
    free_mode: bool,
    index_of: HashMap<i64, usize>,
    used: Vec<bool>,
    unused: BTreeSet<i64>,
    row_filled: Vec<usize>,
    col_filled: Vec<usize>,
    row_sum: Vec<i64>,
    col_sum: Vec<i64>,
    pattern: Vec<bool>,
    tied: Vec<bool>,
    grid: Vec<Option<i64>>,
    filled_count: usize,
    nodes: u64,
    budget: u64,
    path: Vec<u32>,
    checkpoint_path: Vec<u32>,
    replay: Vec<u32>,
    replay_depth: usize,
    solutions: u64,
    witnesses: Vec<PFArray>,
    aborted: bool,
    root_only: Option<u32>,
    shared: Option<&'a Shared>,
}

impl<'a> Engine<'a> {
    fn new(spec: &'a SearchSpec, skeleton: Option<&BTreeSet<Position>>) -> Self {
        let cells: Vec<Position> = match skeleton {
            Some(set) => set.iter().copied().collect(),
            None => (1..=spec.m)
                .flat_map(|r| (1..=spec.n).map(move |c| Position::new(r, c)))
                .collect(),
        };
        let pool = spec.ring().expected_support();
        let index_of = pool.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let unused = pool.iter().copied().collect();
        Engine {
            spec,
            free_mode: skeleton.is_none(),
            index_of,
            used: vec![false; pool.len()],
            unused,
            row_filled: vec![0; spec.m + 1],
            col_filled: vec![0; spec.n + 1],
            row_sum: vec![0; spec.m + 1],
            col_sum: vec![0; spec.n + 1],
            pattern: vec![false; (spec.m + 1) * (spec.n + 1)],
            tied: vec![false; spec.m + 1],
            grid: vec![None; spec.m * spec.n],
            filled_count: 0,
            cells,
            nodes: 0,
            budget: spec.budget,
            path: vec![],
            checkpoint_path: vec![],
            replay: vec![],
            replay_depth: 0,
            solutions: 0,
            witnesses: vec![],
            aborted: false,
            root_only: None,
            shared: None,
        }
    }

    fn pattern_at(&self, r: usize, c: usize) -> bool {
        self.pattern[r * (self.spec.n + 1) + c]
    }

    fn set_pattern(&mut self, r: usize, c: usize, bit: bool) {
        self.pattern[r * (self.spec.n + 1) + c] = bit;
    }

    /// Largest reachable absolute contribution of `need` more entries.
    fn top_sum(&self, need: usize) -> i64 {
        self.unused.iter().rev().take(need).sum()
    }

    fn choices_at(&self, depth: usize) -> Vec<Choice> {
        let pos = self.cells[depth];
        let (r, c) = (pos.row, pos.col);
        let row_need = self.spec.s - self.row_filled[r];
        let col_need = self.spec.k - self.col_filled[c];
        let mut out = Vec::new();

        let lex_tied = self.free_mode
            && self.spec.symmetry_reduction
            && r >= 2
            && (if c == 1 { true } else { self.tied[r] });
        let fill_breaks_lex = lex_tied && !self.pattern_at(r - 1, c);

        if row_need > 0 && col_need > 0 && !fill_breaks_lex {
            let forced_row = (row_need == 1).then(|| -self.row_sum[r]);
            let forced_col = (col_need == 1).then(|| -self.col_sum[c]);
            let candidates: Vec<i64> = match (forced_row, forced_col) {
                (Some(a), Some(b)) if a == b => vec![a],
                (Some(_), Some(_)) => vec![],
                (Some(a), None) => vec![a],
                (None, Some(b)) => vec![b],
                (None, None) => {
                    let mut all = Vec::with_capacity(2 * self.unused.len());
                    for &value in &self.unused {
                        all.push(value);
                        all.push(-value);
                    }
                    all
                }
            };
            for w in candidates {
                if w == 0 {
                    continue;
                }
                match self.index_of.get(&w.abs()) {
                    Some(&idx) if !self.used[idx] => {}
                    _ => continue,
                }
                if self.spec.symmetry_reduction && self.filled_count == 0 && w < 0 {
                    continue;
                }
                out.push(Choice::Fill(w));
            }
        }

        if self.free_mode {
            let row_slots_after = self.spec.n - c;
            let col_slots_after = self.spec.m - r;
            if row_slots_after >= row_need && col_slots_after >= col_need {
                out.push(Choice::Skip);
            }
        }
        out
    }

    fn apply_fill(&mut self, pos: Position, w: i64) {
        let idx = self.index_of[&w.abs()];
        self.used[idx] = true;
        self.unused.remove(&w.abs());
        self.row_filled[pos.row] += 1;
        self.col_filled[pos.col] += 1;
        self.row_sum[pos.row] += w;
        self.col_sum[pos.col] += w;
        self.grid[(pos.row - 1) * self.spec.n + (pos.col - 1)] = Some(w);
        self.filled_count += 1;
        self.set_pattern(pos.row, pos.col, true);
    }

    fn undo_fill(&mut self, pos: Position, w: i64) {
        let idx = self.index_of[&w.abs()];
        self.used[idx] = false;
        self.unused.insert(w.abs());
        self.row_filled[pos.row] -= 1;
        self.col_filled[pos.col] -= 1;
        self.row_sum[pos.row] -= w;
        self.col_sum[pos.col] -= w;
        self.grid[(pos.row - 1) * self.spec.n + (pos.col - 1)] = None;
        self.filled_count -= 1;
    }

    /// Interval bound after a fill: the residual sum of each touched line
    /// must be reachable with the largest unused values.
    fn bounds_ok(&self, pos: Position) -> bool {
        let row_need = self.spec.s - self.row_filled[pos.row];
        if self.row_sum[pos.row].abs() > self.top_sum(row_need) {
            return false;
        }
        let col_need = self.spec.k - self.col_filled[pos.col];
        self.col_sum[pos.col].abs() <= self.top_sum(col_need)
    }

    fn record_solution(&mut self) -> Flow {
        self.solutions += 1;
        let mut a = PFArray::new(self.spec.m, self.spec.n).expect("positive dims");
        for r in 1..=self.spec.m {
            for c in 1..=self.spec.n {
                if let Some(w) = self.grid[(r - 1) * self.spec.n + (c - 1)] {
                    a.insert(Position::new(r, c), w).expect("fresh cell");
                }
            }
        }
        debug_assert!(
            verify_integer(&a, &self.spec.ring()).passes,
            "search produced an invalid witness"
        );
        if self.witnesses.is_empty() {
            self.witnesses.push(a);
        }
        if let Some(shared) = self.shared {
            shared.found.store(true, Ordering::Relaxed);
        }
        match self.spec.mode {
            SearchMode::CountAll => Flow::Continue,
            _ => Flow::Stop,
        }
    }

    fn count_node(&mut self, depth: usize, idx: u32) -> bool {
        self.nodes += 1;
        if let Some(shared) = self.shared {
            let global = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if global > self.budget {
                shared.stop.store(true, Ordering::Relaxed);
            }
            if shared.stop.load(Ordering::Relaxed) {
                self.aborted = true;
                return false;
            }
        } else if self.nodes > self.budget {
            // Snapshot the route to this uncounted subtree; the working
            // stack unwinds as the abort propagates.
            self.checkpoint_path = self.path.clone();
            self.checkpoint_path.truncate(depth);
            self.checkpoint_path.push(idx);
            self.aborted = true;
            return false;
        }
        true
    }

    fn dfs(&mut self, depth: usize) -> Flow {
        if depth == self.cells.len() {
            return self.record_solution();
        }
        let choices = self.choices_at(depth);
        let replay_here = self.replay_depth < self.replay.len() && depth == self.replay_depth;
        let start = if replay_here {
            self.replay[depth] as usize
        } else {
            0
        };
        for (idx, choice) in choices.iter().enumerate().skip(start) {
            if let Some(root) = self.root_only {
                if depth == 0 && idx as u32 != root {
                    continue;
                }
            }
            let replaying_this = replay_here && idx == start;
            if replaying_this {
                self.replay_depth += 1;
            } else if !self.count_node(depth, idx as u32) {
                return Flow::Abort;
            }
            let pos = self.cells[depth];
            let flow = match *choice {
                Choice::Fill(w) => {
                    let tied_in = self.tied[pos.row];
                    if self.free_mode && self.spec.symmetry_reduction {
                        let tied = if pos.col == 1 { pos.row >= 2 } else { tied_in };
                        // A fill matching the previous row keeps the tie.
                        self.tied[pos.row] = tied && self.pattern_at(pos.row - 1, pos.col);
                    }
                    self.apply_fill(pos, w);
                    let flow = if self.bounds_ok(pos) {
                        self.path.push(idx as u32);
                        let f = self.dfs(depth + 1);
                        self.path.pop();
                        f
                    } else {
                        Flow::Continue
                    };
                    self.undo_fill(pos, w);
                    self.tied[pos.row] = tied_in;
                    flow
                }
                Choice::Skip => {
                    let tied_in = self.tied[pos.row];
                    self.set_pattern(pos.row, pos.col, false);
                    if self.free_mode && self.spec.symmetry_reduction {
                        let tied = if pos.col == 1 { pos.row >= 2 } else { tied_in };
                        // Skipping where the previous row filled makes this
                        // row strictly smaller; the tie is broken.
                        self.tied[pos.row] = tied && !self.pattern_at(pos.row - 1, pos.col);
                    }
                    self.path.push(idx as u32);
                    let f = self.dfs(depth + 1);
                    self.path.pop();
                    self.tied[pos.row] = tied_in;
                    f
                }
            };
            if flow != Flow::Continue {
                return flow;
            }
        }
        Flow::Continue
    }
}

fn skeleton_list(spec: &SearchSpec) -> Result<Vec<Option<BTreeSet<Position>>>> {
    Ok(match &spec.skeleton {
        SkeletonConstraint::Free => vec![None],
        SkeletonConstraint::Fixed(cells) => vec![Some(cells.clone())],
        SkeletonConstraint::CyclicallyKDiagonal => {
            let starts: Vec<usize> = if spec.symmetry_reduction {
                vec![1]
            } else {
                (1..=spec.n).collect()
            };
            starts
                .into_iter()
                .map(|start| {
                    let mut set = BTreeSet::new();
                    for offset in 0..spec.k {
                        let d = crate::array::reduce_index((start + offset) as i64, spec.n);
                        set.extend(diagonal_cells(spec.n, d)?);
                    }
                    Ok(Some(set))
                })
                .collect::<Result<Vec<_>>>()?
        }
    })
}

/// Runs the backtracking search described by `spec`.
pub fn backtrack_search(spec: &SearchSpec) -> Result<SearchOutcome> {
    backtrack_search_resume(spec, None)
}

/// Resumes from a previous budget-exceeded checkpoint, or starts fresh.
pub fn backtrack_search_resume(
    spec: &SearchSpec,
    checkpoint: Option<&Checkpoint>,
) -> Result<SearchOutcome> {
    spec.validate()?;
    if spec.parallel {
        return parallel_search(spec);
    }
    let skeletons = skeleton_list(spec)?;
    let mut nodes = checkpoint.map(|c| c.nodes).unwrap_or(0);
    let mut solutions = checkpoint.map(|c| c.solutions).unwrap_or(0);
    let mut witnesses: Vec<PFArray> = vec![];
    let start_skeleton = checkpoint.map(|c| c.skeleton_index).unwrap_or(0);

    for (index, skeleton) in skeletons.iter().enumerate().skip(start_skeleton) {
        let mut engine = Engine::new(spec, skeleton.as_ref());
        engine.nodes = nodes;
        engine.solutions = solutions;
        if let Some(cp) = checkpoint {
            if index == cp.skeleton_index {
                engine.replay = cp.path.clone();
            }
        }
        let flow = engine.dfs(0);
        nodes = engine.nodes;
        solutions = engine.solutions;
        if witnesses.is_empty() {
            witnesses = engine.witnesses;
        }
        match flow {
            Flow::Abort => {
                return Ok(SearchOutcome {
                    status: SearchStatus::BudgetExceeded,
                    witnesses,
                    nodes,
                    solutions,
                    checkpoint: Some(Checkpoint {
                        version: CHECKPOINT_VERSION,
                        skeleton_index: index,
                        path: engine.checkpoint_path,
                        nodes,
                        solutions,
                    }),
                });
            }
            Flow::Stop => {
                return Ok(SearchOutcome {
                    status: SearchStatus::Found,
                    witnesses,
                    nodes,
                    solutions,
                    checkpoint: None,
                });
            }
            Flow::Continue => {}
        }
    }
    Ok(SearchOutcome {
        status: if solutions > 0 {
            SearchStatus::Found
        } else {
            SearchStatus::ExhaustedEmpty
        },
        witnesses,
        nodes,
        solutions,
        checkpoint: None,
    })
}

fn parallel_search(spec: &SearchSpec) -> Result<SearchOutcome> {
    use rayon::prelude::*;

    let skeletons = skeleton_list(spec)?;
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        found: AtomicBool::new(false),
    };
    let results: Mutex<(u64, Vec<PFArray>, bool)> = Mutex::new((0, vec![], false));

    let mut tasks: Vec<(usize, u32)> = vec![];
    for (index, skeleton) in skeletons.iter().enumerate() {
        let probe = Engine::new(spec, skeleton.as_ref());
        let roots = probe.choices_at(0).len() as u32;
        tasks.extend((0..roots).map(|r| (index, r)));
    }

    tasks.par_iter().for_each(|&(index, root)| {
        if shared.stop.load(Ordering::Relaxed) && spec.mode != SearchMode::CountAll {
            return;
        }
        let mut engine = Engine::new(spec, skeletons[index].as_ref());
        engine.root_only = Some(root);
        engine.shared = Some(&shared);
        let flow = engine.dfs(0);
        let mut guard = results.lock().expect("results lock");
        guard.0 += engine.solutions;
        if guard.1.is_empty() {
            guard.1 = engine.witnesses;
        }
        if flow == Flow::Abort
            && (spec.mode == SearchMode::CountAll || !shared.found.load(Ordering::Relaxed))
        {
            guard.2 = true;
        }
        if flow == Flow::Stop && spec.mode != SearchMode::CountAll {
            shared.stop.store(true, Ordering::Relaxed);
        }
    });

    let (solutions, witnesses, aborted) = results.into_inner().expect("results lock");
    let nodes = shared.nodes.load(Ordering::Relaxed);
    // An exceeded budget makes a count incomplete, but a witness already
    // answers the first-solution and prove-empty questions.
    let status = if solutions > 0 && spec.mode != SearchMode::CountAll {
        SearchStatus::Found
    } else if aborted {
        SearchStatus::BudgetExceeded
    } else if solutions > 0 {
        SearchStatus::Found
    } else {
        SearchStatus::ExhaustedEmpty
    };
    Ok(SearchOutcome {
        status,
        witnesses,
        nodes,
        solutions,
        checkpoint: None,
    })
}

/// The two nonexistence statements certified by exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonexistenceCase {
    /// No integer `H_8(4;3)`.
    H8_4_3,
    /// No integer `H_{3n}(n;3)` at `n = 4`, i.e. no integer `H_12(4;3)`.
    H3nAt4,
}

impl NonexistenceCase {
    pub fn spec(&self) -> SearchSpec {
        let t = match self {
            NonexistenceCase::H8_4_3 => 8,
            NonexistenceCase::H3nAt4 => 12,
        };
        SearchSpec::square(4, 3, t, SearchMode::ProveEmpty)
    }
}

impl std::str::FromStr for NonexistenceCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h8_4_3" => Ok(NonexistenceCase::H8_4_3),
            "h3n_at_4" => Ok(NonexistenceCase::H3nAt4),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// Runs the exact search for a certified nonexistence case and checks the
/// outcome. A witness would contradict the recorded result and is an error.
pub fn certify_nonexistence(case: NonexistenceCase) -> Result<SearchOutcome> {
    let spec = case.spec();
    let outcome = backtrack_search(&spec)?;
    match outcome.status {
        SearchStatus::ExhaustedEmpty => Ok(outcome),
        SearchStatus::Found => Err(Error::Contradiction),
        SearchStatus::BudgetExceeded => Err(Error::domain(
            "budget exceeded before the search space was exhausted".to_string(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_pools_for_the_certified_cases() {
        let spec = NonexistenceCase::H8_4_3.spec();
        assert_eq!(
            spec.ring().expected_support(),
            (1..=16).filter(|x| x % 4 != 0).collect::<Vec<i64>>()
        );
        let spec = NonexistenceCase::H3nAt4.spec();
        assert_eq!(
            spec.ring().expected_support(),
            (1..=18).filter(|x| x % 3 != 0).collect::<Vec<i64>>()
        );
    }

    #[test]
    fn finds_h16_4_4_with_free_skeleton() {
        let spec = SearchSpec::square(4, 4, 16, SearchMode::FirstSolution);
        let outcome = backtrack_search(&spec).unwrap();
        assert_eq!(outcome.status, SearchStatus::Found);
        let witness = &outcome.witnesses[0];
        let params = RingParams::square(4, 4, 16).unwrap();
        assert!(verify_integer(witness, &params).passes);
    }

    #[test]
    fn finds_h3_4_3_on_diagonal_skeleton() {
        let mut spec = SearchSpec::square(4, 3, 3, SearchMode::FirstSolution);
        spec.skeleton = SkeletonConstraint::CyclicallyKDiagonal;
        let outcome = backtrack_search(&spec).unwrap();
        assert_eq!(outcome.status, SearchStatus::Found);
        let params = RingParams::square(4, 3, 3).unwrap();
        assert!(verify_integer(&outcome.witnesses[0], &params).passes);
    }

    #[test]
    fn certifies_h8_4_3_empty() {
        let outcome = certify_nonexistence(NonexistenceCase::H8_4_3).unwrap();
        assert_eq!(outcome.status, SearchStatus::ExhaustedEmpty);
        assert!(outcome.witnesses.is_empty());
    }

    #[test]
    fn certifies_h12_4_3_empty() {
        let outcome = certify_nonexistence(NonexistenceCase::H3nAt4).unwrap();
        assert_eq!(outcome.status, SearchStatus::ExhaustedEmpty);
    }

    #[test]
    fn unknown_case_name_is_an_error() {
        assert!("h9_9_9".parse::<NonexistenceCase>().is_err());
    }

    #[test]
    fn symmetry_reductions_preserve_status() {
        // Reduced and unreduced searches must agree on found/empty.
        for (n, k, t, expected) in [
            (4usize, 3usize, 8usize, SearchStatus::ExhaustedEmpty),
            (4, 3, 3, SearchStatus::Found),
            (4, 4, 16, SearchStatus::Found),
        ] {
            let mut with = SearchSpec::square(n, k, t, SearchMode::FirstSolution);
            with.symmetry_reduction = true;
            let mut without = with.clone();
            without.symmetry_reduction = false;
            let a = backtrack_search(&with).unwrap();
            let b = backtrack_search(&without).unwrap();
            assert_eq!(a.status, expected, "unexpected status at ({n},{k},{t})");
            assert_eq!(a.status, b.status, "status differs at ({n},{k},{t})");
        }
    }

    #[test]
    fn node_counts_reproducible_serially() {
        let spec = SearchSpec::square(4, 3, 8, SearchMode::ProveEmpty);
        let first = backtrack_search(&spec).unwrap();
        let second = backtrack_search(&spec).unwrap();
        assert_eq!(first.nodes, second.nodes);
    }

    #[test]
    fn parallel_agrees_on_status() {
        let mut spec = SearchSpec::square(4, 3, 8, SearchMode::ProveEmpty);
        spec.parallel = true;
        let outcome = backtrack_search(&spec).unwrap();
        assert_eq!(outcome.status, SearchStatus::ExhaustedEmpty);
    }

    #[test]
    fn budget_exceeded_checkpoint_resumes_to_same_answer() {
        // Interrupt the H_12(4;3) proof repeatedly and resume; the final
        // status and total node count must match an uninterrupted run.
        let spec = SearchSpec::square(4, 3, 12, SearchMode::ProveEmpty);
        let uninterrupted = backtrack_search(&spec).unwrap();
        assert_eq!(uninterrupted.status, SearchStatus::ExhaustedEmpty);

        let mut budgeted = spec.clone();
        budgeted.budget = 5_000;
        let mut checkpoint: Option<Checkpoint> = None;
        let mut rounds = 0;
        let final_outcome = loop {
            rounds += 1;
            assert!(rounds < 10_000, "resume loop did not converge");
            let outcome = backtrack_search_resume(&budgeted, checkpoint.as_ref()).unwrap();
            match outcome.status {
                SearchStatus::BudgetExceeded => {
                    let cp = outcome.checkpoint.clone().expect("checkpoint present");
                    budgeted.budget = cp.nodes + 5_000;
                    checkpoint = Some(cp);
                }
                _ => break outcome,
            }
        };
        assert_eq!(final_outcome.status, SearchStatus::ExhaustedEmpty);
        assert_eq!(final_outcome.nodes, uninterrupted.nodes);
    }

    #[test]
    fn count_all_finds_multiple_witnesses() {
        let mut spec = SearchSpec::square(4, 3, 3, SearchMode::CountAll);
        spec.skeleton = SkeletonConstraint::CyclicallyKDiagonal;
        let outcome = backtrack_search(&spec).unwrap();
        assert_eq!(outcome.status, SearchStatus::Found);
        assert!(outcome.solutions > 1);
    }
}
