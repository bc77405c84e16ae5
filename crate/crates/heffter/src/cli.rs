//! Command-line surface.
//!
//! Exit codes: 0 success or verified; 1 verification failure or a
//! nonexistence verdict; 2 usage or parse error; 3 search budget exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::array::PFArray;
use crate::construct::BuiltinName;
use crate::decomp::{
    build_relative_dfs, check_orthogonality, develop, multipartite_edge_count,
    verify_decomposition, verify_df,
};
use crate::error::{Error, Result};
use crate::extend::{align_disjoint, build_hk_with_plan, extend_by_h, FillerKind, SkeletonShape};
use crate::io::{decode_csv, decode_json, encode_csv, encode_json, Format};
use crate::orderings::ordering_plan;
use crate::ring::RingParams;
use crate::search::{
    backtrack_search_resume, certify_nonexistence, Checkpoint, NonexistenceCase, SearchMode,
    SearchSpec, SearchStatus, SkeletonConstraint, DEFAULT_BUDGET,
};
use crate::verify::{check_necessary, verify_integer, verify_relative_heffter, NecessityVerdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the default search node budget.
pub const BUDGET_ENV: &str = "HEFFTER_SEARCH_BUDGET";

#[derive(Parser)]
#[command(
    name = "heffter",
    about = "Construct, verify, order, decompose and search relative Heffter arrays",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format: json or csv-grid.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the array here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build an integer H_k(n;k), or a named builtin array.
    Construct {
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: Option<usize>,
        /// Subgroup order; only t = k is constructible and it is the default.
        #[arg(short, long)]
        t: Option<usize>,
        /// A builtin name: h16_4_4, h32_4_4, h5_8_5, h5_16_5.
        #[arg(long)]
        builtin: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify an array file.
    Verify {
        file: PathBuf,
        /// Required for csv input; json carries t.
        #[arg(short, long)]
        t: Option<usize>,
        /// integer (default) or modular.
        #[arg(long, default_value = "integer")]
        level: String,
    },
    /// Extend an array file by a shiftable filler.
    Extend {
        /// Base array (json with t, or csv with --t).
        #[arg(long)]
        base: PathBuf,
        /// Filler: h4, b4, h4-blocks or b6.
        #[arg(long)]
        filler: String,
        #[arg(short, long)]
        t: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Find simple orderings for every row and column.
    Orderings {
        file: PathBuf,
        #[arg(short, long)]
        t: Option<usize>,
    },
    /// Difference families, developed decompositions, orthogonality.
    Decompose {
        file: PathBuf,
        #[arg(short, long)]
        t: Option<usize>,
        /// Include every developed block in the output.
        #[arg(long)]
        full: bool,
    },
    /// Backtracking existence search.
    Search {
        /// Required unless --certify is given.
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short, long)]
        t: Option<usize>,
        #[arg(short, long)]
        m: Option<usize>,
        #[arg(short, long)]
        s: Option<usize>,
        /// first-solution, count-all or prove-empty.
        #[arg(long, default_value = "first-solution")]
        mode: String,
        /// free or k-diagonal.
        #[arg(long, default_value = "free")]
        skeleton: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        no_symmetry: bool,
        #[arg(long)]
        parallel: bool,
        /// Certified case by name: h8_4_3 or h3n_at_4 (overrides the flags).
        #[arg(long)]
        certify: Option<String>,
        /// Witness output: json summary (default) or csv-grid witnesses.
        #[arg(long, default_value = "json")]
        format: String,
        /// Write a resumable checkpoint here when the budget is exceeded.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Resume from a checkpoint file.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Necessary-condition check for (n, k, t).
    CheckNecessary {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short, long)]
        t: usize,
    },
}

/// Parses `argv` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Nonexistent { .. } | Error::OpenCase { .. } | Error::Contradiction => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

fn load_array(path: &Path, t_flag: Option<usize>) -> Result<(PFArray, usize)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
    let looks_json = text.trim_start().starts_with('{');
    if looks_json {
        let (a, t, _) = decode_json(&text)?;
        Ok((a, t_flag.unwrap_or(t)))
    } else {
        let a = decode_csv(&text)?;
        let t = t_flag.ok_or_else(|| Error::domain("csv input requires --t"))?;
        Ok((a, t))
    }
}

fn square_params(a: &PFArray, t: usize) -> Result<RingParams> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.n_rows(), a.n_cols()));
    }
    let n = a.n_rows();
    if a.filled() % n != 0 {
        return Err(Error::domain("filled cells are not evenly distributed"));
    }
    RingParams::square(n, a.filled() / n, t)
}

fn emit_array(
    a: &PFArray,
    t: usize,
    meta: Option<BTreeMap<String, String>>,
    out: &OutputArgs,
) -> Result<()> {
    let format = Format::from_str(&out.format)?;
    let text = match format {
        Format::Json => encode_json(a, t, meta),
        Format::CsvGrid => encode_csv(a),
    };
    match &out.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::domain(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Construct {
            n,
            k,
            t,
            builtin,
            out,
        } => {
            if let Some(name) = builtin {
                let name = BuiltinName::from_str(&name)?;
                let a = crate::construct::builtin_example(name);
                let (_, _, t) = name.params();
                let mut meta = BTreeMap::new();
                meta.insert(
                    "construction".to_string(),
                    format!("builtin:{}", name.as_str()),
                );
                emit_array(&a, t, Some(meta), &out)?;
                return Ok(EXIT_OK);
            }
            let (n, k) = match (n, k) {
                (Some(n), Some(k)) => (n, k),
                _ => return Err(Error::domain("construct requires -n and -k (or --builtin)")),
            };
            if let Some(t) = t {
                if t != k {
                    return Err(Error::domain(format!(
                        "only t = k constructions are available, got t = {t}, k = {k}"
                    )));
                }
            }
            let (a, plan) = build_hk_with_plan(n, k)?;
            let mut meta = BTreeMap::new();
            meta.insert(
                "construction".to_string(),
                serde_json::to_string(&plan).expect("plan serializes"),
            );
            emit_array(&a, k, Some(meta), &out)?;
            Ok(EXIT_OK)
        }
        Command::Verify { file, t, level } => {
            let (a, t) = load_array(&file, t)?;
            let params = square_params(&a, t)?;
            let report = match level.as_str() {
                "integer" => verify_integer(&a, &params),
                "modular" => verify_relative_heffter(&a, &params),
                other => return Err(Error::domain(format!("unknown level {other:?}"))),
            };
            if report.passes {
                println!(
                    "ok: {} array H_{}({};{}) over Z_{}",
                    level,
                    params.t,
                    params.n,
                    params.k,
                    params.v()
                );
                Ok(EXIT_OK)
            } else {
                for f in &report.failures {
                    println!("FAIL [{}] {}: {}", f.condition, f.location, f.detail);
                }
                println!("{} failure(s)", report.failures.len());
                Ok(EXIT_FAILED)
            }
        }
        Command::Extend {
            base,
            filler,
            t,
            out,
        } => {
            let (a, t) = load_array(&base, t)?;
            let params = square_params(&a, t)?;
            let k = params.k;
            let filler_kind = match filler.as_str() {
                "h4" => FillerKind::H4,
                "b4" => FillerKind::B4,
                "h4-blocks" => FillerKind::H4Blocks,
                "b6" => FillerKind::B6,
                other => return Err(Error::domain(format!("unknown filler {other:?}"))),
            };
            let h = filler_kind.h();
            let target = match filler_kind {
                FillerKind::H4 | FillerKind::B4 => SkeletonShape::KDiagonal(k + 4),
                FillerKind::H4Blocks => {
                    let d = detect_block_width(&a)?;
                    SkeletonShape::SkDiagonal { s: 2, d: d + 2 }
                }
                FillerKind::B6 => {
                    let d = detect_block_width(&a)?;
                    SkeletonShape::SkDiagonal { s: 2, d: d + 3 }
                }
            };
            let filler_array = filler_kind.build(a.n_rows())?;
            let (aligned, rotation) = align_disjoint(&filler_array, &a, &target)?;
            let extended = extend_by_h(&a, k, &aligned, h)?;
            let mut meta = BTreeMap::new();
            meta.insert(
                "extension".to_string(),
                format!("{filler}+rotation{rotation}"),
            );
            emit_array(&extended, k + h, Some(meta), &out)?;
            Ok(EXIT_OK)
        }
        Command::Orderings { file, t } => {
            let (a, t) = load_array(&file, t)?;
            let params = square_params(&a, t)?;
            match ordering_plan(&a, &params)? {
                Some(plan) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&plan).expect("plan serializes")
                    );
                    Ok(EXIT_OK)
                }
                None => {
                    println!("no simple ordering plan exists for some line");
                    Ok(EXIT_FAILED)
                }
            }
        }
        Command::Decompose { file, t, full } => {
            let (a, t) = load_array(&file, t)?;
            let params = square_params(&a, t)?;
            let plan = ordering_plan(&a, &params)?
                .ok_or_else(|| Error::domain("no simple ordering plan exists"))?;
            let (row_df, col_df) = build_relative_dfs(&a, &params, &plan)?;
            let row_report = verify_df(&row_df);
            let col_report = verify_df(&col_df);
            let d_rows = develop(&row_df)?;
            let d_cols = develop(&col_df)?;
            let rows_report = verify_decomposition(&d_rows);
            let cols_report = verify_decomposition(&d_cols);
            let orthogonal = check_orthogonality(&d_rows, &d_cols);
            let all_ok = row_report.passes
                && col_report.passes
                && rows_report.passes
                && cols_report.passes
                && orthogonal;
            let mut doc = json!({
                "v": params.v(),
                "t": params.t,
                "parts": params.q(),
                "part_size": params.r(),
                "expected_edges": multipartite_edge_count(params.v(), params.q() as i64, params.r() as i64),
                "row_df": { "blocks": row_df.blocks, "verified": row_report.passes },
                "col_df": { "blocks": col_df.blocks, "verified": col_report.passes },
                "row_decomposition": { "blocks": d_rows.blocks.len(), "verified": rows_report.passes },
                "col_decomposition": { "blocks": d_cols.blocks.len(), "verified": cols_report.passes },
                "orthogonal": orthogonal,
            });
            if full {
                doc["row_decomposition"]["all_blocks"] =
                    serde_json::to_value(&d_rows.blocks).expect("blocks serialize");
                doc["col_decomposition"]["all_blocks"] =
                    serde_json::to_value(&d_cols.blocks).expect("blocks serialize");
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("doc serializes")
            );
            Ok(if all_ok { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Search {
            n,
            k,
            t,
            m,
            s,
            mode,
            skeleton,
            budget,
            no_symmetry,
            parallel,
            certify,
            format,
            checkpoint,
            resume,
        } => {
            if let Some(case) = certify {
                let case = NonexistenceCase::from_str(&case)?;
                let outcome = certify_nonexistence(case)?;
                println!("certified: exhausted-empty after {} nodes", outcome.nodes);
                return Ok(EXIT_FAILED); // nonexistence verdict delivered
            }
            let (n, k, t) = match (n, k, t) {
                (Some(n), Some(k), Some(t)) => (n, k, t),
                _ => return Err(Error::domain("search requires -n, -k and --t")),
            };
            let mode = match mode.as_str() {
                "first-solution" | "first" => SearchMode::FirstSolution,
                "count-all" | "count" => SearchMode::CountAll,
                "prove-empty" => SearchMode::ProveEmpty,
                other => return Err(Error::domain(format!("unknown mode {other:?}"))),
            };
            let env_budget = std::env::var(BUDGET_ENV)
                .ok()
                .and_then(|b| b.parse::<u64>().ok());
            let spec = SearchSpec {
                m: m.unwrap_or(n),
                n,
                s: s.unwrap_or(k),
                k,
                t,
                skeleton: match skeleton.as_str() {
                    "free" => SkeletonConstraint::Free,
                    "k-diagonal" => SkeletonConstraint::CyclicallyKDiagonal,
                    other => return Err(Error::domain(format!("unknown skeleton {other:?}"))),
                },
                mode,
                symmetry_reduction: !no_symmetry,
                budget: budget.or(env_budget).unwrap_or(DEFAULT_BUDGET),
                parallel,
            };
            let resumed: Option<Checkpoint> = match resume {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| {
                        Error::domain(format!("cannot read {}: {e}", path.display()))
                    })?;
                    Some(serde_json::from_str(&text).map_err(|e| Error::Parse {
                        line: e.line(),
                        col: e.column(),
                        msg: e.to_string(),
                    })?)
                }
                None => None,
            };
            let outcome = backtrack_search_resume(&spec, resumed.as_ref())?;
            match Format::from_str(&format)? {
                Format::Json => {
                    let witness_docs: Vec<serde_json::Value> = outcome
                        .witnesses
                        .iter()
                        .map(|w| {
                            serde_json::to_value(crate::io::ArrayDocument::from_array(w, t, None))
                                .expect("witness serializes")
                        })
                        .collect();
                    let summary = json!({
                        "status": match outcome.status {
                            SearchStatus::Found => "found",
                            SearchStatus::ExhaustedEmpty => "exhausted-empty",
                            SearchStatus::BudgetExceeded => "budget-exceeded",
                        },
                        "nodes": outcome.nodes,
                        "solutions": outcome.solutions,
                        "witnesses": witness_docs,
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&summary).expect("summary serializes")
                    );
                }
                Format::CsvGrid => {
                    for witness in &outcome.witnesses {
                        print!("{}", crate::io::encode_csv(witness));
                    }
                    eprintln!(
                        "search: {:?}, {} nodes, {} solutions",
                        outcome.status, outcome.nodes, outcome.solutions
                    );
                }
            }
            match outcome.status {
                SearchStatus::Found => Ok(EXIT_OK),
                SearchStatus::ExhaustedEmpty => Ok(EXIT_FAILED),
                SearchStatus::BudgetExceeded => {
                    if let (Some(path), Some(cp)) = (checkpoint, &outcome.checkpoint) {
                        let text = serde_json::to_string_pretty(cp).expect("checkpoint serializes");
                        fs::write(&path, text).map_err(|e| {
                            Error::domain(format!("cannot write {}: {e}", path.display()))
                        })?;
                        eprintln!("checkpoint written to {}", path.display());
                    }
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::CheckNecessary { n, k, t } => match check_necessary(n, k, t)? {
            NecessityVerdict::RequiredConditionsHold => {
                println!("required-conditions-hold");
                Ok(EXIT_OK)
            }
            NecessityVerdict::RuledOut { clause } => {
                println!("ruled-out: {clause}");
                Ok(EXIT_FAILED)
            }
        },
    }
}

/// Smallest d for which the array is cyclically (2,d)-diagonal.
fn detect_block_width(a: &PFArray) -> Result<usize> {
    let max = a.n_rows() / 2;
    for d in 1..=max {
        if a.is_cyclically_sk_diagonal(2, d)? {
            return Ok(d);
        }
    }
    Err(Error::domain(
        "array is not cyclically (2,d)-diagonal for any d",
    ))
}
