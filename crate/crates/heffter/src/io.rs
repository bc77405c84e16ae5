//! Serialization of arrays: a JSON document carrying the ring data and a
//! bare csv grid mirroring the printed tables (empty fields for empty cells).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::array::{PFArray, Position};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Free-form key/value annotations carried by a JSON document.
pub type Metadata = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

/// JSON document for a partially filled array. `v = 2nk + t` is stored
/// redundantly and checked on decode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayDocument {
    pub schema: u32,
    pub m: usize,
    pub n: usize,
    pub t: usize,
    pub v: i64,
    pub cells: Vec<CellRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl ArrayDocument {
    pub fn from_array(a: &PFArray, t: usize, metadata: Option<Metadata>) -> Self {
        ArrayDocument {
            schema: SCHEMA_VERSION,
            m: a.n_rows(),
            n: a.n_cols(),
            t,
            v: 2 * a.filled() as i64 + t as i64,
            cells: a
                .cells()
                .map(|(pos, value)| CellRecord {
                    row: pos.row,
                    col: pos.col,
                    value,
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_array(&self) -> Result<PFArray> {
        let mut a = PFArray::new(self.m, self.n)?;
        for cell in &self.cells {
            a.insert(Position::new(cell.row, cell.col), cell.value)
                .map_err(|e| Error::Parse {
                    line: 0,
                    col: 0,
                    msg: format!("cell ({}, {}): {e}", cell.row, cell.col),
                })?;
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    CsvGrid,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv-grid" | "csv" => Ok(Format::CsvGrid),
            other => Err(Error::domain(format!(
                "unknown format {other:?}; expected json or csv-grid"
            ))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::CsvGrid => "csv-grid",
        })
    }
}

pub fn encode_json(a: &PFArray, t: usize, metadata: Option<Metadata>) -> String {
    let doc = ArrayDocument::from_array(a, t, metadata);
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

pub fn decode_json(text: &str) -> Result<(PFArray, usize, Option<Metadata>)> {
    let doc: ArrayDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    if doc.schema != SCHEMA_VERSION {
        return Err(Error::Parse {
            line: 0,
            col: 0,
            msg: format!("unsupported schema version {}", doc.schema),
        });
    }
    let a = doc.to_array()?;
    let expected_v = 2 * a.filled() as i64 + doc.t as i64;
    if doc.v != expected_v {
        return Err(Error::Parse {
            line: 0,
            col: 0,
            msg: format!("v = {} inconsistent with 2nk + t = {expected_v}", doc.v),
        });
    }
    Ok((a, doc.t, doc.metadata))
}

/// An `m x n` grid, one row per line, empty cells as empty fields.
pub fn encode_csv(a: &PFArray) -> String {
    let mut out = String::new();
    for r in 1..=a.n_rows() {
        let row: Vec<String> = (1..=a.n_cols())
            .map(|c| {
                a.get(Position::new(r, c))
                    .map(|v| v.to_string())
                    .unwrap_or_default()
            })
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn decode_csv(text: &str) -> Result<PFArray> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty input".into(),
        });
    }
    let n = lines[0].split(',').count();
    let mut a = PFArray::new(lines.len(), n)?;
    for (i, line) in lines.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != n {
            return Err(Error::Parse {
                line: i + 1,
                col: fields.len(),
                msg: format!("{} fields, expected {n}", fields.len()),
            });
        }
        for (j, field) in fields.iter().enumerate() {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let value: i64 = field.parse().map_err(|_| Error::Parse {
                line: i + 1,
                col: j + 1,
                msg: format!("invalid entry {field:?}"),
            })?;
            if value == 0 {
                return Err(Error::Parse {
                    line: i + 1,
                    col: j + 1,
                    msg: "zero entries are forbidden".into(),
                });
            }
            a.insert(Position::new(i + 1, j + 1), value)
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    col: j + 1,
                    msg: e.to_string(),
                })?;
        }
    }
    Ok(a)
}

pub fn encode(a: &PFArray, t: Option<usize>, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let t = t.ok_or_else(|| Error::domain("json encoding requires t"))?;
            Ok(encode_json(a, t, None))
        }
        Format::CsvGrid => Ok(encode_csv(a)),
    }
}

/// Decodes `text`; json yields the stored `t`, csv yields no parameters.
pub fn decode(text: &str, format: Format) -> Result<(PFArray, Option<usize>)> {
    match format {
        Format::Json => decode_json(text).map(|(a, t, _)| (a, Some(t))),
        Format::CsvGrid => decode_csv(text).map(|a| (a, None)),
    }
}
