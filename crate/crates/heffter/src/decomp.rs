//! From simple orderings to cycles, relative difference families, and cyclic
//! cycle decompositions of the complete multipartite graph `K_{q x r}`.
//!
//! Vertices live in `Z_v`; the parts of `K_{q x r}` are the cosets of the
//! order-`t` subgroup `J`, so `q = v/t` and `r = t`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::array::PFArray;
use crate::error::{Error, Result};
use crate::orderings::{is_simple, partial_sums, OrderingPlan};
use crate::ring::RingParams;
use crate::verify::{verify_relative_heffter, Condition, Finding, HeffterReport};

/// A cycle on distinct vertices of `Z_v`, edges joining consecutive vertices
/// cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBlock {
    vertices: Vec<i64>,
}

impl CycleBlock {
    /// Vertices must be distinct residues in `[0, v)`, at least three.
    pub fn new(vertices: Vec<i64>, v: i64) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::domain(format!(
                "a cycle needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for &x in &vertices {
            if x < 0 || x >= v {
                return Err(Error::domain(format!("vertex {x} outside [0, {v})")));
            }
            if !seen.insert(x) {
                return Err(Error::domain(format!("repeated vertex {x}")));
            }
        }
        Ok(CycleBlock { vertices })
    }

    pub fn vertices(&self) -> &[i64] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as normalized pairs `(min, max)`.
    pub fn edges(&self) -> Vec<(i64, i64)> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % k];
                (a.min(b), a.max(b))
            })
            .collect()
    }

    /// The translate `B + g` in `Z_v`.
    pub fn translate(&self, g: i64, v: i64) -> CycleBlock {
        CycleBlock {
            vertices: self
                .vertices
                .iter()
                .map(|x| (x + g).rem_euclid(v))
                .collect(),
        }
    }

    /// Canonical representative as a graph: rotated so the minimum vertex
    /// leads, direction chosen by the smaller second vertex.
    pub fn canonical(&self) -> CycleBlock {
        let k = self.vertices.len();
        let min_idx = (0..k)
            .min_by_key(|&i| self.vertices[i])
            .expect("nonempty cycle");
        let forward: Vec<i64> = (0..k).map(|i| self.vertices[(min_idx + i) % k]).collect();
        let backward: Vec<i64> = (0..k)
            .map(|i| self.vertices[(min_idx + k - i) % k])
            .collect();
        if forward[1] <= backward[1] {
            CycleBlock { vertices: forward }
        } else {
            CycleBlock { vertices: backward }
        }
    }
}

/// The `s`-cycle whose vertices are the partial sums of a simple zero-sum
/// ordering; the last vertex is 0.
pub fn cycle_from_ordering(seq: &[i64], v: i64) -> Result<CycleBlock> {
    if seq.len() < 3 {
        return Err(Error::domain(format!(
            "a cycle needs at least 3 entries, got {}",
            seq.len()
        )));
    }
    let sums = partial_sums(seq, v);
    if *sums.last().expect("nonempty") != 0 {
        return Err(Error::NonzeroSum { v });
    }
    if !is_simple(seq, v) {
        return Err(Error::NotSimple { v });
    }
    CycleBlock::new(sums, v)
}

/// The multiset `{+-(x - y) : {x, y} an edge}`, as residues in `[0, v)`,
/// sorted. For a cycle built from an ordering this equals the signed entries
/// of the ordering.
pub fn difference_list(block: &CycleBlock, v: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity(2 * block.len());
    for (a, b) in block.edges() {
        let d = (a - b).rem_euclid(v);
        out.push(d);
        out.push((v - d) % v);
    }
    out.sort_unstable();
    out
}

/// A family of cycles together with its declared parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffFamily {
    pub blocks: Vec<CycleBlock>,
    pub v: i64,
    pub t: usize,
    pub cycle_len: usize,
    pub lambda: usize,
}

/// Checks that the difference list of the family covers every element of
/// `Z_v \ J` exactly `lambda` times and no element of `J`.
pub fn verify_df(family: &DiffFamily) -> HeffterReport {
    let v = family.v;
    let j_gen = v / family.t as i64;
    let mut failures = vec![];
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for block in &family.blocks {
        if block.len() != family.cycle_len {
            failures.push(Finding {
                condition: Condition::Shape,
                location: "block".into(),
                detail: format!(
                    "cycle of length {}, declared {}",
                    block.len(),
                    family.cycle_len
                ),
            });
        }
        for d in difference_list(block, v) {
            *counts.entry(d).or_insert(0) += 1;
        }
    }
    for x in 0..v {
        let count = counts.get(&x).copied().unwrap_or(0);
        let expected = if x % j_gen == 0 { 0 } else { family.lambda };
        if count != expected {
            failures.push(Finding {
                condition: Condition::DifferenceCoverage,
                location: format!("difference {x}"),
                detail: format!("covered {count} times, expected {expected}"),
            });
        }
    }
    HeffterReport::from_failures(failures)
}

/// Builds the row and column relative difference families of a verified
/// array under the given simple orderings. Both are `(v, t, C_len, 1)`
/// families with `v = 2nk + t`.
pub fn build_relative_dfs(
    a: &PFArray,
    params: &RingParams,
    plan: &OrderingPlan,
) -> Result<(DiffFamily, DiffFamily)> {
    let report = verify_relative_heffter(a, params);
    if !report.passes {
        return Err(Error::domain(format!(
            "array fails verification: {}",
            report
                .failures
                .first()
                .map(|f| format!("{} at {}: {}", f.condition, f.location, f.detail))
                .unwrap_or_default()
        )));
    }
    if plan.row_orderings.len() != params.m || plan.col_orderings.len() != params.n {
        return Err(Error::domain(
            "ordering plan does not match the array shape",
        ));
    }
    let v = params.v();
    let rows = plan
        .row_orderings
        .iter()
        .map(|seq| cycle_from_ordering(seq, v))
        .collect::<Result<Vec<_>>>()?;
    let cols = plan
        .col_orderings
        .iter()
        .map(|seq| cycle_from_ordering(seq, v))
        .collect::<Result<Vec<_>>>()?;
    let row_df = DiffFamily {
        blocks: rows,
        v,
        t: params.t,
        cycle_len: params.s,
        lambda: 1,
    };
    let col_df = DiffFamily {
        blocks: cols,
        v,
        t: params.t,
        cycle_len: params.k,
        lambda: 1,
    };
    Ok((row_df, col_df))
}

/// A translate-closed collection of cycles on `Z_v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub blocks: Vec<CycleBlock>,
    pub v: i64,
    pub t: usize,
    pub cycle_len: usize,
    pub lambda: usize,
}

/// Develops a verified difference family into the full translate collection
/// `{B + g : B in F, g in Z_v}`, `|F| * v` blocks.
pub fn develop(family: &DiffFamily) -> Result<Decomposition> {
    let report = verify_df(family);
    if !report.passes {
        return Err(Error::domain(format!(
            "difference family fails verification: {} failures",
            report.failures.len()
        )));
    }
    let v = family.v;
    let mut blocks = Vec::with_capacity(family.blocks.len() * v as usize);
    for base in &family.blocks {
        for g in 0..v {
            blocks.push(base.translate(g, v).canonical());
        }
    }
    Ok(Decomposition {
        blocks,
        v,
        t: family.t,
        cycle_len: family.cycle_len,
        lambda: family.lambda,
    })
}

/// Checks that a collection is a `G`-regular decomposition of
/// `lambda K_{q x r}`: no edge joins two vertices of the same coset of `J`,
/// every cross-part edge is covered exactly `lambda` times, and the
/// collection is closed under translation.
pub fn verify_decomposition(d: &Decomposition) -> HeffterReport {
    let v = d.v;
    let j_gen = v / d.t as i64;
    let mut failures = vec![];

    let mut edge_counts: HashMap<(i64, i64), usize> = HashMap::new();
    for block in &d.blocks {
        for (a, b) in block.edges() {
            if (a - b).rem_euclid(v) % j_gen == 0 {
                failures.push(Finding {
                    condition: Condition::WithinPartEdge,
                    location: format!("edge ({a}, {b})"),
                    detail: "joins two vertices in the same part".into(),
                });
            }
            *edge_counts.entry((a, b)).or_insert(0) += 1;
        }
    }
    for x in 0..v {
        for y in (x + 1)..v {
            if (y - x) % j_gen == 0 {
                continue;
            }
            let count = edge_counts.get(&(x, y)).copied().unwrap_or(0);
            if count != d.lambda {
                failures.push(Finding {
                    condition: Condition::EdgeCoverage,
                    location: format!("edge ({x}, {y})"),
                    detail: format!("covered {count} times, expected {}", d.lambda),
                });
            }
        }
    }

    let mut multiplicity: HashMap<Vec<i64>, usize> = HashMap::new();
    for block in &d.blocks {
        *multiplicity
            .entry(block.canonical().vertices.clone())
            .or_insert(0) += 1;
    }
    'closure: for block in multiplicity.keys() {
        let cycle = CycleBlock {
            vertices: block.clone(),
        };
        for g in 1..v {
            let translated = cycle.translate(g, v).canonical();
            if !multiplicity.contains_key(translated.vertices()) {
                failures.push(Finding {
                    condition: Condition::TranslationClosure,
                    location: format!("block {block:?}"),
                    detail: format!("translate by {g} missing"),
                });
                break 'closure;
            }
        }
    }

    HeffterReport::from_failures(failures)
}

/// True iff every block of `d1` shares at most one edge with every block of
/// `d2`. Both decompositions must live on the same `Z_v`.
pub fn check_orthogonality(d1: &Decomposition, d2: &Decomposition) -> bool {
    assert_eq!(d1.v, d2.v, "decompositions over different rings");
    // Index d2 blocks by edge; a shared pair of blocks is a repeated
    // (block1, block2) hit.
    let mut edge_owners: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (index, block) in d2.blocks.iter().enumerate() {
        for edge in block.edges() {
            edge_owners.entry(edge).or_default().push(index);
        }
    }
    for block in &d1.blocks {
        let mut hits: HashMap<usize, usize> = HashMap::new();
        for edge in block.edges() {
            if let Some(owners) = edge_owners.get(&edge) {
                for &owner in owners {
                    let count = hits.entry(owner).or_insert(0);
                    *count += 1;
                    if *count > 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Number of edges of `K_{q x r}` on `v = q * r` vertices: all pairs except
/// those inside a part.
pub fn multipartite_edge_count(v: i64, q: i64, r: i64) -> i64 {
    debug_assert_eq!(v, q * r);
    v * (v - 1) / 2 - q * (r * (r - 1) / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{builtin_example, BuiltinName};
    use crate::orderings::ordering_plan;

    #[test]
    fn cycle_from_published_orderings() {
        // Row ordering (1, -7, -16, 22) gives the 4-cycle (1, -6, -22, 0).
        let c = cycle_from_ordering(&[1, -7, -16, 22], 48).unwrap();
        assert_eq!(c.vertices(), &[1, 42, 26, 0]);
        // Column ordering (20, 4, -8, -16) gives (20, 24, 16, 0).
        let c3 = cycle_from_ordering(&[20, 4, -8, -16], 48).unwrap();
        assert_eq!(c3.vertices(), &[20, 24, 16, 0]);
    }

    #[test]
    fn cycle_rejects_bad_inputs() {
        assert!(matches!(
            cycle_from_ordering(&[1, -1], 5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            cycle_from_ordering(&[1, 2, 3], 48),
            Err(Error::NonzeroSum { .. })
        ));
        // (1, -1, 2, -2) sums to zero but repeats the partial sum 0.
        assert!(matches!(
            cycle_from_ordering(&[1, -1, 2, -2], 48),
            Err(Error::NotSimple { .. })
        ));
    }

    #[test]
    fn difference_list_equals_signed_entries() {
        let entries = [1i64, -7, -16, 22];
        let c = cycle_from_ordering(&entries, 48).unwrap();
        let mut expected: Vec<i64> = entries
            .iter()
            .flat_map(|&e| [e.rem_euclid(48), (-e).rem_euclid(48)])
            .collect();
        expected.sort_unstable();
        assert_eq!(difference_list(&c, 48), expected);
    }

    #[test]
    fn difference_list_of_triangle() {
        let c = CycleBlock::new(vec![5, 8, 0], 20).unwrap();
        // Edges {5,8}, {8,0}, {0,5}: differences +-3, +-8, +-5.
        let mut expected = vec![3, 17, 8, 12, 5, 15];
        expected.sort_unstable();
        assert_eq!(difference_list(&c, 20), expected);
    }

    #[test]
    fn difference_list_is_translate_invariant() {
        let c = CycleBlock::new(vec![1, 42, 26, 0], 48).unwrap();
        for g in [1, 7, 47] {
            assert_eq!(
                difference_list(&c, 48),
                difference_list(&c.translate(g, 48), 48)
            );
        }
    }

    #[test]
    fn canonical_form_is_rotation_and_reflection_invariant() {
        let c = CycleBlock::new(vec![7, 3, 9, 1], 12).unwrap();
        let rotated = CycleBlock::new(vec![9, 1, 7, 3], 12).unwrap();
        let reflected = CycleBlock::new(vec![1, 9, 3, 7], 12).unwrap();
        assert_eq!(c.canonical(), rotated.canonical());
        assert_eq!(c.canonical(), reflected.canonical());
        assert_eq!(c.canonical().vertices()[0], 1);
    }

    #[test]
    fn published_dfs_from_h16_4_4() {
        // The printed row and column orderings both yield (48,16,C_4,1)
        // difference families covering Z_48 minus the multiples of 3.
        let omegas = [
            vec![1, -7, -16, 22],
            vec![23, 2, -8, -17],
            vec![-10, 4, 19, -13],
            vec![-11, -14, 20, 5],
        ];
        let nus = [
            vec![-11, -13, 23, 1],
            vec![-7, 2, 19, -14],
            vec![20, 4, -8, -16],
            vec![5, -10, -17, 22],
        ];
        for family_orderings in [&omegas, &nus] {
            let blocks: Vec<CycleBlock> = family_orderings
                .iter()
                .map(|seq| cycle_from_ordering(seq, 48).unwrap())
                .collect();
            let family = DiffFamily {
                blocks,
                v: 48,
                t: 16,
                cycle_len: 4,
                lambda: 1,
            };
            assert!(verify_df(&family).passes);
        }
    }

    #[test]
    fn dropping_a_block_breaks_coverage() {
        let a = builtin_example(BuiltinName::H16_4_4);
        let params = RingParams::square(4, 4, 16).unwrap();
        let plan = ordering_plan(&a, &params).unwrap().unwrap();
        let (mut row_df, _) = build_relative_dfs(&a, &params, &plan).unwrap();
        row_df.blocks.pop();
        let report = verify_df(&row_df);
        assert!(!report.passes);
        // One 4-cycle covers 8 differences.
        assert_eq!(report.failures.len(), 8);
    }

    #[test]
    fn doubled_family_passes_with_lambda_two() {
        let a = builtin_example(BuiltinName::H16_4_4);
        let params = RingParams::square(4, 4, 16).unwrap();
        let plan = ordering_plan(&a, &params).unwrap().unwrap();
        let (row_df, _) = build_relative_dfs(&a, &params, &plan).unwrap();
        let mut doubled = row_df.clone();
        doubled.blocks.extend(row_df.blocks.iter().cloned());
        doubled.lambda = 2;
        assert!(verify_df(&doubled).passes);
    }

    #[test]
    fn develop_and_verify_h16() {
        let a = builtin_example(BuiltinName::H16_4_4);
        let params = RingParams::square(4, 4, 16).unwrap();
        let plan = ordering_plan(&a, &params).unwrap().unwrap();
        let (row_df, col_df) = build_relative_dfs(&a, &params, &plan).unwrap();
        let d_rows = develop(&row_df).unwrap();
        assert_eq!(d_rows.blocks.len(), 192);
        assert!(verify_decomposition(&d_rows).passes);
        let d_cols = develop(&col_df).unwrap();
        assert!(verify_decomposition(&d_cols).passes);
        assert!(check_orthogonality(&d_rows, &d_cols));
        // A decomposition with blocks of length >= 3 is never orthogonal to
        // itself: each block meets itself in all its edges.
        assert!(!check_orthogonality(&d_rows, &d_rows));
    }

    #[test]
    fn removing_a_translate_breaks_coverage_and_closure() {
        let a = builtin_example(BuiltinName::H16_4_4);
        let params = RingParams::square(4, 4, 16).unwrap();
        let plan = ordering_plan(&a, &params).unwrap().unwrap();
        let (row_df, _) = build_relative_dfs(&a, &params, &plan).unwrap();
        let mut d = develop(&row_df).unwrap();
        d.blocks.pop();
        let report = verify_decomposition(&d);
        assert!(!report.passes);
        let coverage_failures = report
            .failures
            .iter()
            .filter(|f| f.condition == Condition::EdgeCoverage)
            .count();
        // A lost 4-cycle uncovers exactly its 4 edges.
        assert_eq!(coverage_failures, 4);
        assert!(report
            .failures
            .iter()
            .any(|f| f.condition == Condition::TranslationClosure));
    }

    #[test]
    fn within_part_edges_are_flagged() {
        // A triangle with an edge inside J = 3 Z_48.
        let block = CycleBlock::new(vec![0, 3, 7], 48).unwrap();
        let d = Decomposition {
            blocks: vec![block],
            v: 48,
            t: 16,
            cycle_len: 3,
            lambda: 1,
        };
        let report = verify_decomposition(&d);
        assert!(report
            .failures
            .iter()
            .any(|f| f.condition == Condition::WithinPartEdge));
    }

    #[test]
    fn edge_count_identity() {
        assert_eq!(multipartite_edge_count(69, 23, 3), 2277);
        assert_eq!(multipartite_edge_count(48, 3, 16), 768);
    }

    proptest::proptest! {
        #[test]
        fn difference_list_inverts_ordering(
            seq in proptest::collection::vec(-30i64..=30, 2..7),
            v in 10i64..80,
        ) {
            // Close the sequence to zero sum; when it happens to be simple,
            // the cycle's difference list must be the signed entries.
            let mut seq = seq;
            let total: i64 = seq.iter().sum();
            seq.push(-total);
            if is_simple(&seq, v) {
                let block = cycle_from_ordering(&seq, v).unwrap();
                let mut expected: Vec<i64> = seq
                    .iter()
                    .flat_map(|&e| [e.rem_euclid(v), (-e).rem_euclid(v)])
                    .collect();
                expected.sort_unstable();
                proptest::prop_assert_eq!(difference_list(&block, v), expected);
            }
        }
    }
}
