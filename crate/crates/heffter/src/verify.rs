//! Checkers for relative Heffter arrays: the modular conditions, the integer
//! strengthening, and the necessary conditions on `(n, k, t)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::array::PFArray;
use crate::error::{Error, Result};
use crate::ring::RingParams;

/// Which check a finding belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// Declared shape vs actual array dimensions.
    Shape,
    /// (a1): s filled cells per row, k per column.
    FillCounts,
    /// (b1): one of {x, -x} per class outside J, nothing inside J.
    ClassCoverage,
    /// (c1): rows and columns sum to zero mod v.
    ModularSums,
    /// Integer entries lie in +-{1, ..., floor(v/2)}.
    IntegerWindow,
    /// Integer support equals the expected set, each value once.
    SupportSet,
    /// Rows and columns sum to zero over the integers.
    IntegerSums,
    /// Difference-family coverage of Z_v \ J.
    DifferenceCoverage,
    /// An edge of a block joins two vertices in the same part.
    WithinPartEdge,
    /// Edge multiset of a decomposition vs lambda copies of K_{q x r}.
    EdgeCoverage,
    /// Closure of a decomposition under translation.
    TranslationClosure,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Condition::Shape => "shape",
            Condition::FillCounts => "fill-counts",
            Condition::ClassCoverage => "class-coverage",
            Condition::ModularSums => "modular-sums",
            Condition::IntegerWindow => "integer-window",
            Condition::SupportSet => "support-set",
            Condition::IntegerSums => "integer-sums",
            Condition::DifferenceCoverage => "difference-coverage",
            Condition::WithinPartEdge => "within-part-edge",
            Condition::EdgeCoverage => "edge-coverage",
            Condition::TranslationClosure => "translation-closure",
        };
        f.write_str(name)
    }
}

/// One verification failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub condition: Condition,
    pub location: String,
    pub detail: String,
}

/// Outcome of a verification pass. All failures are collected rather than
/// stopping at the first, to support search diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeffterReport {
    pub passes: bool,
    pub failures: Vec<Finding>,
}

impl HeffterReport {
    pub fn from_failures(failures: Vec<Finding>) -> Self {
        HeffterReport {
            passes: failures.is_empty(),
            failures,
        }
    }
}

struct Collector {
    failures: Vec<Finding>,
}

impl Collector {
    fn new() -> Self {
        Collector { failures: vec![] }
    }

    fn fail(
        &mut self,
        condition: Condition,
        location: impl Into<String>,
        detail: impl fmt::Display,
    ) {
        self.failures.push(Finding {
            condition,
            location: location.into(),
            detail: detail.to_string(),
        });
    }

    fn report(self) -> HeffterReport {
        HeffterReport::from_failures(self.failures)
    }
}

fn check_shape(a: &PFArray, params: &RingParams, out: &mut Collector) -> bool {
    if a.n_rows() != params.m || a.n_cols() != params.n {
        out.fail(
            Condition::Shape,
            "array",
            format!(
                "declared {}x{} but array is {}x{}",
                params.m,
                params.n,
                a.n_rows(),
                a.n_cols()
            ),
        );
        return false;
    }
    true
}

fn check_fill_counts(a: &PFArray, params: &RingParams, out: &mut Collector) {
    for r in 1..=a.n_rows() {
        let got = a.row_entries(r).len();
        if got != params.s {
            out.fail(
                Condition::FillCounts,
                format!("row {r}"),
                format!("{got} filled cells, expected {}", params.s),
            );
        }
    }
    for c in 1..=a.n_cols() {
        let got = a.col_entries(c).len();
        if got != params.k {
            out.fail(
                Condition::FillCounts,
                format!("column {c}"),
                format!("{got} filled cells, expected {}", params.k),
            );
        }
    }
}

/// Checks Conditions (a1), (b1), (c1) of the definition of a Heffter array
/// over `Z_v` relative to `J`. Entries are reduced mod `v`; failures are
/// reported, never thrown.
pub fn verify_relative_heffter(a: &PFArray, params: &RingParams) -> HeffterReport {
    let mut out = Collector::new();
    if !check_shape(a, params, &mut out) {
        return out.report();
    }
    check_fill_counts(a, params, &mut out);

    let v = params.v();
    // (b1): exactly one representative of every class {x, -x} outside J.
    let mut class_count: HashMap<i64, usize> = HashMap::new();
    for (pos, value) in a.cells() {
        let residue = value.rem_euclid(v);
        if params.in_j(residue) {
            out.fail(
                Condition::ClassCoverage,
                format!("cell ({}, {})", pos.row, pos.col),
                format!("entry {value} lies in J (residue {residue})"),
            );
            continue;
        }
        let class = residue.min(v - residue);
        *class_count.entry(class).or_insert(0) += 1;
    }
    for (class, count) in &class_count {
        if *count > 1 {
            out.fail(
                Condition::ClassCoverage,
                format!("class {{{class}, -{class}}}"),
                format!("represented {count} times"),
            );
        }
    }
    let expected_classes = (v as usize - params.t) / 2;
    if class_count.len() < expected_classes {
        let missing: Vec<i64> = (1..=v / 2)
            .filter(|x| !params.in_j(*x) && !class_count.contains_key(x))
            .collect();
        out.fail(
            Condition::ClassCoverage,
            "array",
            format!(
                "{} of {} classes unrepresented: {:?}",
                missing.len(),
                expected_classes,
                missing
            ),
        );
    }

    // (c1): zero line sums in Z_v.
    for r in 1..=a.n_rows() {
        let sum = a
            .row_entries(r)
            .iter()
            .map(|e| e.rem_euclid(v))
            .sum::<i64>()
            % v;
        if sum != 0 {
            out.fail(
                Condition::ModularSums,
                format!("row {r}"),
                format!("sums to {sum} mod {v}"),
            );
        }
    }
    for c in 1..=a.n_cols() {
        let sum = a
            .col_entries(c)
            .iter()
            .map(|e| e.rem_euclid(v))
            .sum::<i64>()
            % v;
        if sum != 0 {
            out.fail(
                Condition::ModularSums,
                format!("column {c}"),
                format!("sums to {sum} mod {v}"),
            );
        }
    }
    out.report()
}

/// Checks the integer strengthening: entries in `+-{1, ..., floor(v/2)}`,
/// support exactly the expected set, and zero line sums over `Z`.
/// Passing implies `verify_relative_heffter` passes.
pub fn verify_integer(a: &PFArray, params: &RingParams) -> HeffterReport {
    let mut out = Collector::new();
    if !check_shape(a, params, &mut out) {
        return out.report();
    }
    check_fill_counts(a, params, &mut out);

    let half = params.v() / 2;
    for (pos, value) in a.cells() {
        if value.abs() > half {
            out.fail(
                Condition::IntegerWindow,
                format!("cell ({}, {})", pos.row, pos.col),
                format!("entry {value} outside +-[1, {half}]"),
            );
        }
    }

    let support = a.support();
    let expected = params.expected_support();
    if support != expected {
        let extra: Vec<i64> = diff_multiset(&support, &expected);
        let missing: Vec<i64> = diff_multiset(&expected, &support);
        out.fail(
            Condition::SupportSet,
            "array",
            format!("unexpected or repeated {extra:?}, missing {missing:?}"),
        );
    }

    for r in 1..=a.n_rows() {
        let sum = a.row_sum(r);
        if sum != 0 {
            out.fail(
                Condition::IntegerSums,
                format!("row {r}"),
                format!("sums to {sum} in Z"),
            );
        }
    }
    for c in 1..=a.n_cols() {
        let sum = a.col_sum(c);
        if sum != 0 {
            out.fail(
                Condition::IntegerSums,
                format!("column {c}"),
                format!("sums to {sum} in Z"),
            );
        }
    }
    out.report()
}

/// Multiset difference `a \ b` for sorted inputs.
fn diff_multiset(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut counts: HashMap<i64, i64> = HashMap::new();
    for x in a {
        *counts.entry(*x).or_insert(0) += 1;
    }
    for x in b {
        *counts.entry(*x).or_insert(0) -= 1;
    }
    let mut out: Vec<i64> = vec![];
    for (x, c) in counts {
        for _ in 0..c.max(0) {
            out.push(x);
        }
    }
    out.sort_unstable();
    out
}

/// The clause of the necessary conditions that rules a parameter set out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NecessityClause {
    /// `t | nk` but `nk` is neither `0 (mod 4)` nor `-t = +-1 (mod 4)`.
    ProductResidue,
    /// `t = 2nk` forces `k` even.
    FullSupportParity,
    /// `t` even, not dividing `nk`: `t + 2nk` must be `0 (mod 8)`.
    SumModuloEight,
    /// `t = k`: `k` odd requires `n = 0, 3 (mod 4)`.
    OddKResidue,
    /// `t = k`: `k = 2 (mod 4)` requires `n` even.
    TwoModFourEvenN,
}

impl fmt::Display for NecessityClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            NecessityClause::ProductResidue => "nk must be 0 (mod 4) or nk = -t = +-1 (mod 4)",
            NecessityClause::FullSupportParity => "t = 2nk requires k even",
            NecessityClause::SumModuloEight => "t + 2nk must be 0 (mod 8)",
            NecessityClause::OddKResidue => "k odd requires n = 0, 3 (mod 4)",
            NecessityClause::TwoModFourEvenN => "k = 2 (mod 4) requires n even",
        };
        f.write_str(msg)
    }
}

/// Verdict of the necessary-condition check. These conditions are not
/// sufficient: `(n, k, t) = (4, 3, 8)` passes them yet no array exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NecessityVerdict {
    RequiredConditionsHold,
    RuledOut { clause: NecessityClause },
}

impl NecessityVerdict {
    pub fn is_ruled_out(&self) -> bool {
        matches!(self, NecessityVerdict::RuledOut { .. })
    }
}

/// Necessary conditions for the existence of an integer `H_t(n;k)`.
/// For `t = k` the specialized three-case form is used.
pub fn check_necessary(n: usize, k: usize, t: usize) -> Result<NecessityVerdict> {
    if n == 0 || k == 0 || t == 0 {
        return Err(Error::domain("n, k, t must be positive"));
    }
    let nk = n * k;
    if (2 * nk) % t != 0 {
        return Err(Error::Divisibility {
            divisor: t,
            value: 2 * nk,
        });
    }
    let ruled = |clause| Ok(NecessityVerdict::RuledOut { clause });

    if t == k {
        return if k % 2 == 1 {
            if n % 4 == 0 || n % 4 == 3 {
                Ok(NecessityVerdict::RequiredConditionsHold)
            } else {
                ruled(NecessityClause::OddKResidue)
            }
        } else if k % 4 == 2 {
            if n % 2 == 0 {
                Ok(NecessityVerdict::RequiredConditionsHold)
            } else {
                ruled(NecessityClause::TwoModFourEvenN)
            }
        } else {
            Ok(NecessityVerdict::RequiredConditionsHold)
        };
    }

    if t == 2 * nk {
        return if k % 2 == 0 {
            Ok(NecessityVerdict::RequiredConditionsHold)
        } else {
            ruled(NecessityClause::FullSupportParity)
        };
    }
    if nk % t == 0 {
        let prod = nk % 4;
        let neg_t = (4 - t % 4) % 4;
        return if prod == 0 || (prod == neg_t && (prod == 1 || prod == 3)) {
            Ok(NecessityVerdict::RequiredConditionsHold)
        } else {
            ruled(NecessityClause::ProductResidue)
        };
    }
    if (t + 2 * nk) % 8 == 0 {
        Ok(NecessityVerdict::RequiredConditionsHold)
    } else {
        ruled(NecessityClause::SumModuloEight)
    }
}
