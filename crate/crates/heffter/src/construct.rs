//! Direct constructions: the `diag` filling procedure, the chain-and-ad-hoc
//! builders for k = 3, 4, 5, the strip builders for k = 6, the two shiftable
//! filler families used by the extension machinery, and the printed
//! exceptional arrays embedded verbatim.
//!
//! Every builder is a literal transcription of its construction (a list of
//! diagonal chains plus ad hoc cells, or a block/strip schedule), so outputs
//! can be compared bit-for-bit against the published tables.

use std::str::FromStr;

use crate::array::{reduce_index, PFArray, Position};
use crate::error::{Error, Result};
use crate::io::decode_csv;

/// One call of the `diag` procedure on an `n x n` array: installs
/// `A[r + i*step, c + i*step] = start + i*entry_step` for `i in [0, len)`,
/// indices reduced to `{1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagCall {
    pub row: usize,
    pub col: usize,
    pub start: i64,
    pub step: usize,
    pub entry_step: i64,
    pub len: usize,
}

impl DiagCall {
    pub fn new(
        row: usize,
        col: usize,
        start: i64,
        step: usize,
        entry_step: i64,
        len: usize,
    ) -> Self {
        DiagCall {
            row,
            col,
            start,
            step,
            entry_step,
            len,
        }
    }
}

fn install_diag(a: &mut PFArray, call: &DiagCall) -> Result<()> {
    let n = a.n_rows();
    for i in 0..call.len {
        let offset = (i * call.step) as i64;
        let pos = Position::new(
            reduce_index(call.row as i64 + offset, n),
            reduce_index(call.col as i64 + offset, n),
        );
        a.insert(pos, call.start + i as i64 * call.entry_step)?;
    }
    Ok(())
}

/// Applies a `diag` call to a copy of `a`. The generated cells must be empty.
pub fn apply_diag(a: &PFArray, call: &DiagCall) -> Result<PFArray> {
    let mut out = a.clone();
    install_diag(&mut out, call)?;
    Ok(out)
}

fn install_ad_hoc(a: &mut PFArray, cells: &[(usize, usize, i64)]) -> Result<()> {
    let n = a.n_rows();
    for &(r, c, value) in cells {
        a.insert(
            Position::new(reduce_index(r as i64, n), reduce_index(c as i64, n)),
            value,
        )?;
    }
    Ok(())
}

/// Places a 2-row block with its left column at `(top, left)`, columns
/// reduced cyclically.
fn install_block(a: &mut PFArray, top: usize, left: usize, block: &[Vec<i64>; 2]) -> Result<()> {
    let n = a.n_cols();
    for (dr, row) in block.iter().enumerate() {
        for (dc, &value) in row.iter().enumerate() {
            let pos = Position::new(top + dr, reduce_index(left as i64 + dc as i64, n));
            a.insert(pos, value)?;
        }
    }
    Ok(())
}

/// Sign-directed translate of a 2-row block: `x` is added to positive
/// entries and subtracted from negative ones.
fn block_shift(block: &[[i64; 6]; 2], x: i64) -> [Vec<i64>; 2] {
    let shift_row = |row: &[i64; 6]| {
        row.iter()
            .map(|&v| if v > 0 { v + x } else { v - x })
            .collect()
    };
    [shift_row(&block[0]), shift_row(&block[1])]
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg.into()))
    }
}

/// Integer cyclically 3-diagonal `H_3(n;3)` for `n = 3 (mod 4)`.
/// Chains A..J plus two ad hoc cells; diagonals `D_n, D_1, D_2`.
/// At `n = 3` most chains are empty or single cells, yet the transcription
/// still produces the (fully filled) array and verifies.
pub fn build_h3_odd(n: usize) -> Result<PFArray> {
    require(n % 4 == 3, format!("n = {n}: need n = 3 (mod 4)"))?;
    let v = n as i64;
    let mut a = PFArray::square(n)?;
    let chains = [
        DiagCall::new(2, 2, 1, 1, 1, (n - 3) / 2),
        DiagCall::new((n + 3) / 2, (n + 3) / 2, -(v + 1) / 2, 1, -1, (n - 1) / 2),
        DiagCall::new(2, 1, -(5 * v + 3) / 2, 2, -1, (n + 1) / 4),
        DiagCall::new(3, 2, -(3 * v + 3) / 2, 2, -1, (n - 3) / 4),
        DiagCall::new(1, 2, (3 * v + 1) / 2, 2, -1, (n + 1) / 4),
        DiagCall::new(2, 3, (5 * v + 1) / 2, 2, -1, (n - 3) / 4),
        DiagCall::new((n + 1) / 2, (n + 3) / 2, (7 * v + 3) / 4, 2, 1, (n + 1) / 4),
        DiagCall::new(
            (n + 3) / 2,
            (n + 5) / 2,
            (11 * v + 7) / 4,
            2,
            1,
            (n + 1) / 4,
        ),
        DiagCall::new(
            (n + 3) / 2,
            (n + 1) / 2,
            -(9 * v + 5) / 4,
            2,
            1,
            (n + 1) / 4,
        ),
        DiagCall::new(
            (n + 5) / 2,
            (n + 3) / 2,
            -(5 * v + 1) / 4,
            2,
            1,
            (n + 1) / 4,
        ),
    ];
    for chain in &chains {
        install_diag(&mut a, chain)?;
    }
    install_ad_hoc(
        &mut a,
        &[(1, 1, -(v - 1) / 2), ((n + 1) / 2, (n + 1) / 2, v)],
    )?;
    Ok(a)
}

/// Integer cyclically 3-diagonal `H_3(n;3)` for `n = 0 (mod 4)`.
/// Chains A..J plus eight ad hoc cells; diagonals `D_n, D_1, D_2`.
/// At `n = 4` every chain is empty or short and the ad hoc cells carry the
/// construction; the output still verifies.
pub fn build_h3_even(n: usize) -> Result<PFArray> {
    require(
        n % 4 == 0 && n >= 4,
        format!("n = {n}: need n = 0 (mod 4), n >= 4"),
    )?;
    let v = n as i64;
    let mut a = PFArray::square(n)?;
    let chains = [
        DiagCall::new(2, 2, 1, 1, 1, (n - 4) / 2),
        DiagCall::new((n + 6) / 2, (n + 6) / 2, -(v + 4) / 2, 1, -1, (n - 4) / 2),
        DiagCall::new(2, 1, -(5 * v + 4) / 2, 2, -1, n / 4),
        DiagCall::new(3, 2, -(3 * v + 2) / 2, 2, -1, (n - 4) / 4),
        DiagCall::new(1, 2, 3 * v / 2, 2, -1, n / 4),
        DiagCall::new(2, 3, (5 * v + 2) / 2, 2, -1, (n - 4) / 4),
        DiagCall::new((n + 6) / 2, (n + 4) / 2, -5 * v / 4, 2, 1, n / 4),
        DiagCall::new((n + 8) / 2, (n + 6) / 2, -9 * v / 4, 2, 1, (n - 4) / 4),
        DiagCall::new((n + 4) / 2, (n + 6) / 2, (11 * v + 8) / 4, 2, 1, n / 4),
        DiagCall::new((n + 6) / 2, (n + 8) / 2, (7 * v + 8) / 4, 2, 1, (n - 4) / 4),
    ];
    for chain in &chains {
        install_diag(&mut a, chain)?;
    }
    install_ad_hoc(
        &mut a,
        &[
            (1, 1, -(v - 2) / 2),
            (n / 2, n / 2, v),
            (n / 2, (n + 2) / 2, (7 * v + 4) / 4),
            ((n + 2) / 2, n / 2, -(9 * v + 4) / 4),
            ((n + 2) / 2, (n + 2) / 2, (v + 2) / 2),
            ((n + 2) / 2, (n + 4) / 2, 7 * v / 4),
            ((n + 4) / 2, (n + 2) / 2, -(9 * v + 8) / 4),
            ((n + 4) / 2, (n + 4) / 2, -v / 2),
        ],
    )?;
    Ok(a)
}

/// Shiftable, integer, cyclically 4-diagonal `H_4(n;4)` for `n >= 4`.
/// Support `[1, 4n+1] \ {2n+1}`.
pub fn build_h4(n: usize) -> Result<PFArray> {
    require(n >= 4, format!("n = {n}: need n >= 4"))?;
    let v = n as i64;
    let mut a = PFArray::square(n)?;
    let chains = [
        DiagCall::new(1, 1, 1, 1, 1, n),
        DiagCall::new(1, 2, -(v + 1), 1, -1, n),
        DiagCall::new(1, 3, -(2 * v + 4), 1, -1, n - 2),
        DiagCall::new(1, 4, 3 * v + 4, 1, 1, n - 2),
    ];
    for chain in &chains {
        install_diag(&mut a, chain)?;
    }
    install_ad_hoc(
        &mut a,
        &[
            (n - 1, 1, -(2 * v + 2)),
            (n - 1, 2, 3 * v + 2),
            (n, 2, -(2 * v + 3)),
            (n, 3, 3 * v + 3),
        ],
    )?;
    Ok(a)
}

/// Shiftable, cyclically 4-diagonal filler with zero line sums and support
/// `[1, 4n+2] \ {n+1, 3n+2}`, for `n >= 4`.
pub fn build_b4_filler(n: usize) -> Result<PFArray> {
    require(n >= 4, format!("n = {n}: need n >= 4"))?;
    let v = n as i64;
    let mut a = PFArray::square(n)?;
    let chains = [
        DiagCall::new(1, 1, 1, 1, 1, n),
        DiagCall::new(1, 2, -(v + 2), 1, -1, n),
        DiagCall::new(1, 3, -(2 * v + 4), 1, -1, n - 2),
        DiagCall::new(1, 4, 3 * v + 5, 1, 1, n - 2),
    ];
    for chain in &chains {
        install_diag(&mut a, chain)?;
    }
    install_ad_hoc(
        &mut a,
        &[
            (n - 1, 1, -(2 * v + 2)),
            (n - 1, 2, 3 * v + 3),
            (n, 2, -(2 * v + 3)),
            (n, 3, 3 * v + 4),
        ],
    )?;
    Ok(a)
}

/// Shiftable, integer, cyclically (2,2)-diagonal `H_4(n;4)` for even
/// `n >= 4`, assembled from 2x2 blocks `E_i` on the main block diagonal and
/// `F_i` on the next, the last `F` wrapping to the lower-left corner.
pub fn build_h4_blocks(n: usize) -> Result<PFArray> {
    require(n % 2 == 0 && n >= 4, format!("n = {n}: need even n >= 4"))?;
    let m = n / 2;
    let mut a = PFArray::square(n)?;
    let e_block = |i: i64| [vec![1 + 4 * i, -2 - 4 * i], vec![-3 - 4 * i, 4 + 4 * i]];
    let f_block = |i: i64| [vec![-2 - 4 * i, 3 + 4 * i], vec![4 + 4 * i, -5 - 4 * i]];
    for i in 0..m {
        install_block(&mut a, 2 * i + 1, 2 * i + 1, &e_block(i as i64))?;
        if i < m - 1 {
            install_block(&mut a, 2 * i + 1, 2 * i + 3, &f_block((m + i) as i64))?;
        } else {
            install_block(&mut a, n - 1, 1, &f_block((2 * m - 1) as i64))?;
        }
    }
    Ok(a)
}

const STRIP_U: [[i64; 6]; 2] = [[-1, 5, 2, -7, -9, 10], [3, -4, -6, 8, 11, -12]];
const STRIP_V5: [[i64; 6]; 2] = [[-1, 10, 7, -12, 4, -8], [3, -9, -11, 13, -2, 6]];
const STRIP_V9: [[i64; 6]; 2] = [[-1, 5, 2, -7, 13, -12], [3, -4, -6, 8, -11, 10]];

/// Installs strip `i`: a 2x6 block on rows `2i+1, 2i+2` whose left column is
/// column `2i+1`, wrapping cyclically.
fn install_strip(a: &mut PFArray, i: usize, block: &[[i64; 6]; 2], x: i64) -> Result<()> {
    install_block(a, 2 * i + 1, 2 * i + 1, &block_shift(block, x))
}

/// Shiftable, cyclically (2,3)-diagonal filler with zero line sums and
/// support `[1, 6n+3] \ {n+1, 3n+2, 5n+3}`, for `n = 0 (mod 4)`, `n >= 8`.
/// Strips follow the three cases `n = 12m, 12m+4, 12m+8`.
pub fn build_b6_filler(n: usize) -> Result<PFArray> {
    require(
        n % 4 == 0 && n >= 8,
        format!("n = {n}: need n = 0 (mod 4), n >= 8"),
    )?;
    let mut a = PFArray::square(n)?;
    let m = n / 12;
    match n % 12 {
        0 => {
            for i in 0..6 * m {
                let x = match i {
                    i if i < m => 12 * i,
                    i if i < 3 * m => 1 + 12 * i,
                    i if i < 5 * m => 2 + 12 * i,
                    i => 3 + 12 * i,
                };
                install_strip(&mut a, i, &STRIP_U, x as i64)?;
            }
        }
        4 => {
            for i in 0..6 * m + 2 {
                let (block, x) = match i {
                    i if i < m => (&STRIP_U, 12 * i),
                    i if i == m => (&STRIP_V5, 12 * i),
                    i if i <= 3 * m => (&STRIP_U, 1 + 12 * i),
                    i if i <= 5 * m => (&STRIP_U, 2 + 12 * i),
                    i if i == 5 * m + 1 => (&STRIP_V9, 2 + 12 * i),
                    i => (&STRIP_U, 3 + 12 * i),
                };
                install_strip(&mut a, i, block, x as i64)?;
            }
        }
        _ => {
            for i in 0..6 * m + 4 {
                let (block, x) = match i {
                    i if i < m => (&STRIP_U, 12 * i),
                    i if i == m => (&STRIP_V9, 12 * i),
                    i if i <= 3 * m + 1 => (&STRIP_U, 1 + 12 * i),
                    i if i <= 5 * m + 2 => (&STRIP_U, 2 + 12 * i),
                    i if i == 5 * m + 3 => (&STRIP_V5, 2 + 12 * i),
                    i => (&STRIP_U, 3 + 12 * i),
                };
                install_strip(&mut a, i, block, x as i64)?;
            }
        }
    }
    Ok(a)
}

/// Integer cyclically 5-diagonal `H_5(n;5)` for `n = 3 (mod 4)`, `n >= 7`.
/// Chains A..N plus twelve ad hoc cells; support `[1, 5n+2] \ {2n+1, 4n+2}`.
/// At `n = 7` several chains have length one and the construction is carried
/// mostly by the ad hoc cells.
pub fn build_h5(n: usize) -> Result<PFArray> {
    require(
        n % 4 == 3 && n >= 7,
        format!("n = {n}: need n = 3 (mod 4), n >= 7"),
    )?;
    let v = n as i64;
    let mut a = PFArray::square(n)?;
    let chains = [
        DiagCall::new(3, 3, (v - 3) / 2, 2, -1, (n - 5) / 2),
        DiagCall::new(4, 4, -(v - 2), 2, 1, (n - 3) / 2),
        DiagCall::new(3, 2, 2 * v + 2, 2, 2, (n - 1) / 2),
        DiagCall::new(4, 3, 2 * v - 1, 2, -2, (n - 3) / 2),
        DiagCall::new(2, 3, -2 * v, 2, 2, (n - 1) / 2),
        DiagCall::new(3, 4, -(2 * v + 3), 2, -2, (n - 3) / 2),
        DiagCall::new(3, 1, -(15 * v + 7) / 4, 4, 1, (n - 3) / 4),
        DiagCall::new(4, 2, -(3 * v + 4), 4, -1, (n + 1) / 4),
        DiagCall::new(5, 3, -(19 * v - 1) / 4, 4, 1, (n - 3) / 4),
        DiagCall::new(6, 4, -(4 * v + 3), 4, -1, (n - 3) / 4),
        DiagCall::new(1, 3, (17 * v + 9) / 4, 4, 1, (n - 3) / 4),
        DiagCall::new(2, 4, 5 * v, 4, -1, (n + 1) / 4),
        DiagCall::new(3, 5, (13 * v + 17) / 4, 4, 1, (n - 3) / 4),
        DiagCall::new(4, 6, 4 * v + 1, 4, -1, (n - 3) / 4),
    ];
    for chain in &chains {
        install_diag(&mut a, chain)?;
    }
    install_ad_hoc(
        &mut a,
        &[
            (1, 1, v),
            (1, 2, -3 * v),
            (1, n, v + 1),
            (2, 1, v + 2),
            (2, 2, v - 1),
            (2, n, -(5 * v + 1)),
            (n - 2, n - 2, -(v - 1) / 2),
            (n - 2, n, 5 * v + 2),
            (n, 1, -(3 * v + 1)),
            (n, 2, 3 * v + 3),
            (n, n - 2, -(3 * v + 2)),
            (n, n, 1),
        ],
    )?;
    Ok(a)
}

/// Integer cyclically (2,3)-diagonal `H_6(n;6)` for even `n >= 6`.
/// Strips follow the three cases `n = 6m, 6m+2, 6m+4`;
/// support `[1, 6n+2] \ {2n+1, 4n+2}`.
pub fn build_h6(n: usize) -> Result<PFArray> {
    require(n % 2 == 0 && n >= 6, format!("n = {n}: need even n >= 6"))?;
    let mut a = PFArray::square(n)?;
    let m = n / 6;
    match n % 6 {
        0 => {
            for i in 0..3 * m {
                let x = match i {
                    i if i < m => 12 * i,
                    i if i < 2 * m => 1 + 12 * i,
                    i => 2 + 12 * i,
                };
                install_strip(&mut a, i, &STRIP_U, x as i64)?;
            }
        }
        2 => {
            for i in 0..3 * m + 1 {
                let (block, x) = match i {
                    i if i < m => (&STRIP_U, 12 * i),
                    i if i == m => (&STRIP_V5, 12 * i),
                    i if i < 2 * m => (&STRIP_U, 1 + 12 * i),
                    i if i == 2 * m => (&STRIP_V9, 1 + 12 * i),
                    i => (&STRIP_U, 2 + 12 * i),
                };
                install_strip(&mut a, i, block, x as i64)?;
            }
        }
        _ => {
            for i in 0..3 * m + 2 {
                let (block, x) = match i {
                    i if i < m => (&STRIP_U, 12 * i),
                    i if i == m => (&STRIP_V9, 12 * i),
                    i if i <= 2 * m => (&STRIP_U, 1 + 12 * i),
                    i if i == 2 * m + 1 => (&STRIP_V5, 1 + 12 * i),
                    i => (&STRIP_U, 2 + 12 * i),
                };
                install_strip(&mut a, i, block, x as i64)?;
            }
        }
    }
    Ok(a)
}

/// The four published arrays that are not outputs of a parametric builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinName {
    /// 4x4 integer `H_16(4;4)` over `Z_48`.
    H16_4_4,
    /// 4x4 integer `H_32(4;4)` over `Z_64`.
    H32_4_4,
    /// 8x8 integer cyclically (2,3)-diagonal `H_5(8;5)` over `Z_85`.
    H5_8_5,
    /// 16x16 integer cyclically (2,3)-diagonal `H_5(16;5)` over `Z_165`.
    H5_16_5,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 4] = [
        BuiltinName::H16_4_4,
        BuiltinName::H32_4_4,
        BuiltinName::H5_8_5,
        BuiltinName::H5_16_5,
    ];

    /// `(n, k, t)` of the array.
    pub fn params(&self) -> (usize, usize, usize) {
        match self {
            BuiltinName::H16_4_4 => (4, 4, 16),
            BuiltinName::H32_4_4 => (4, 4, 32),
            BuiltinName::H5_8_5 => (8, 5, 5),
            BuiltinName::H5_16_5 => (16, 5, 5),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BuiltinName::H16_4_4 => "h16_4_4",
            BuiltinName::H32_4_4 => "h32_4_4",
            BuiltinName::H5_8_5 => "h5_8_5",
            BuiltinName::H5_16_5 => "h5_16_5",
        }
    }
}

impl serde::Serialize for BuiltinName {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> serde::Deserialize<'de> for BuiltinName {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for BuiltinName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h16_4_4" => Ok(BuiltinName::H16_4_4),
            "h32_4_4" => Ok(BuiltinName::H32_4_4),
            "h5_8_5" => Ok(BuiltinName::H5_8_5),
            "h5_16_5" => Ok(BuiltinName::H5_16_5),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

const TABLE_H16_4_4: &str = "\
1,-7,-16,22
23,2,-8,-17
-13,19,4,-10
-11,-14,20,5";

const TABLE_H32_4_4: &str = "\
1,-9,-21,29
31,3,-11,-23
-17,25,5,-13
-15,-19,27,7";

const TABLE_H5_8_5: &str = "\
4,,36,-28,,,-33,21
,8,-27,39,,,20,-40
-22,13,3,,-35,41,,
12,-29,,7,42,-32,,
,,26,-37,1,,-14,24
,,-38,19,,5,25,-11
15,-10,,,23,-30,2,
-9,18,,,-31,16,,6";

const TABLE_H5_16_5: &str = "\
8,,-65,81,,,,,,,,,,,55,-79
,16,82,-58,,,,,,,,,,,-80,40
60,-77,-6,,-38,61,,,,,,,,,,
-78,53,,-14,62,-23,,,,,,,,,,
,,21,-31,-5,,57,-42,,,,,,,,
,,-32,22,,-13,-41,64,,,,,,,,
,,,,-69,51,7,,-17,28,,,,,,
,,,,50,-76,,15,29,-18,,,,,,
,,,,,,45,-67,3,,39,-20,,,,
,,,,,,-68,30,,11,-19,46,,,,
,,,,,,,,56,-70,2,,-24,36,,
,,,,,,,,-71,49,,10,37,-25,,
,,,,,,,,,,-48,27,1,,-54,74
,,,,,,,,,,26,-63,,9,75,-47
-34,43,,,,,,,,,,,59,-72,4,
44,-35,,,,,,,,,,,-73,52,,12";

/// Returns the published table for `name`, bit-exact.
pub fn builtin_example(name: BuiltinName) -> PFArray {
    let table = match name {
        BuiltinName::H16_4_4 => TABLE_H16_4_4,
        BuiltinName::H32_4_4 => TABLE_H32_4_4,
        BuiltinName::H5_8_5 => TABLE_H5_8_5,
        BuiltinName::H5_16_5 => TABLE_H5_16_5,
    };
    decode_csv(table).expect("embedded table parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{diagonal_cells, diagonal_index};
    use crate::ring::RingParams;
    use crate::verify::verify_integer;

    fn assert_integer(a: &PFArray, n: usize, k: usize, t: usize) {
        let params = RingParams::square(n, k, t).unwrap();
        let report = verify_integer(a, &params);
        assert!(
            report.passes,
            "verification failed for n={n} k={k} t={t}: {:?}",
            report.failures
        );
    }

    #[test]
    fn diag_identity_chain() {
        let n = 6;
        let a = apply_diag(
            &PFArray::square(n).unwrap(),
            &DiagCall::new(1, 1, 1, 1, 1, n),
        )
        .unwrap();
        for i in 1..=n {
            assert_eq!(a.get(Position::new(i, i)), Some(i as i64));
        }
    }

    #[test]
    fn diag_empty_chain_is_noop() {
        let a = PFArray::square(5).unwrap();
        let b = apply_diag(&a, &DiagCall::new(1, 1, 99, 1, 1, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn diag_wraps_position_and_entry() {
        // The second chain of the 4-diagonal construction at n = 7 ends at
        // (7, 8) = (7, 1) carrying -(n+1) - 6 = -14.
        let n = 7;
        let a = apply_diag(
            &PFArray::square(n).unwrap(),
            &DiagCall::new(1, 2, -8, 1, -1, n),
        )
        .unwrap();
        assert_eq!(a.get(Position::new(7, 1)), Some(-14));
    }

    #[test]
    fn diag_collision_is_overlap() {
        let a = apply_diag(
            &PFArray::square(4).unwrap(),
            &DiagCall::new(1, 1, 1, 1, 1, 4),
        )
        .unwrap();
        assert!(matches!(
            apply_diag(&a, &DiagCall::new(1, 1, 9, 1, 1, 1)),
            Err(Error::Overlap { .. })
        ));
    }

    #[test]
    fn h3_odd_spot_values_and_verification() {
        let a = build_h3_odd(11).unwrap();
        assert_eq!(a.get(Position::new(1, 1)), Some(-5));
        assert_eq!(a.get(Position::new(1, 2)), Some(17));
        assert_eq!(a.get(Position::new(1, 11)), Some(-12));
        assert_integer(&a, 11, 3, 3);
        assert!(a.is_cyclically_k_diagonal(3).unwrap());
        // Row 1 holds two negatives and one positive, so not shiftable.
        assert!(!a.is_shiftable());

        let b = build_h3_odd(7).unwrap();
        assert_integer(&b, 7, 3, 3);
        let support = b.support();
        assert_eq!(support, (1..=22).filter(|x| *x != 15).collect::<Vec<_>>());

        // The degenerate n = 3 case still comes out of the chains intact.
        let c = build_h3_odd(3).unwrap();
        assert_integer(&c, 3, 3, 3);
        assert_eq!(c.row_entries(1), vec![-1, 5, -4]);

        assert!(build_h3_odd(8).is_err());
        assert!(build_h3_odd(5).is_err());
    }

    #[test]
    fn h3_even_spot_values_and_verification() {
        let a = build_h3_even(12).unwrap();
        assert_eq!(a.get(Position::new(1, 1)), Some(-5));
        assert_eq!(a.get(Position::new(6, 6)), Some(12));
        assert_eq!(a.get(Position::new(7, 7)), Some(7));
        assert_integer(&a, 12, 3, 3);
        assert!(a.is_cyclically_k_diagonal(3).unwrap());

        for n in [4, 8, 16, 20] {
            let b = build_h3_even(n).unwrap();
            assert_integer(&b, n, 3, 3);
            assert!(b.is_cyclically_k_diagonal(3).unwrap());
        }
        let b8 = build_h3_even(8).unwrap();
        assert_eq!(
            b8.support(),
            (1..=25).filter(|x| *x != 17).collect::<Vec<_>>()
        );
    }

    #[test]
    fn h4_skeleton_matches_unrolled_diagonals() {
        // Independent skeleton oracle: enumerate the four chains and the ad
        // hoc cells directly from the diagonal definition.
        let n = 7;
        let a = build_h4(n).unwrap();
        let mut expected: std::collections::BTreeSet<Position> = std::collections::BTreeSet::new();
        for (start_col, len) in [(1usize, n), (2, n), (3, n - 2), (4, n - 2)] {
            let d = diagonal_index(Position::new(1, start_col), n);
            for pos in diagonal_cells(n, d).unwrap().into_iter() {
                // chain cells are the first `len` of the diagonal from row 1
                let i = (pos.row + n - 1) % n;
                if i < len {
                    expected.insert(pos);
                }
            }
        }
        for (r, c) in [(n - 1, 1), (n - 1, 2), (n, 2), (n, 3)] {
            expected.insert(Position::new(r, c));
        }
        assert_eq!(a.skeleton(), expected);
        assert_eq!(a.filled(), 4 * n);
        assert!(a.is_cyclically_k_diagonal(4).unwrap());
        assert!(!a.is_cyclically_k_diagonal(3).unwrap());
    }

    #[test]
    fn h4_spot_values_and_shiftability() {
        let a = build_h4(7).unwrap();
        assert_eq!(a.row_entries(1), vec![1, -8, -18, 25]);
        assert_eq!(a.get(Position::new(6, 1)), Some(-16));
        assert!(a.is_shiftable());
        assert_integer(&a, 7, 4, 4);

        let b = build_h4(4).unwrap();
        assert_integer(&b, 4, 4, 4);
        assert_eq!(
            b.support(),
            (1..=17).filter(|x| *x != 9).collect::<Vec<_>>()
        );
    }

    #[test]
    fn b4_filler_support_and_sums() {
        let a = build_b4_filler(7).unwrap();
        assert_eq!(a.row_entries(1), vec![1, -9, -18, 26]);
        let support = a.support();
        assert!(!support.contains(&8) && !support.contains(&23));
        assert_eq!(
            support,
            (1..=30).filter(|x| *x != 8 && *x != 23).collect::<Vec<_>>()
        );
        assert!(a.is_shiftable());
        for line in 1..=7 {
            assert_eq!(a.row_sum(line), 0);
            assert_eq!(a.col_sum(line), 0);
        }

        let b = build_b4_filler(4).unwrap();
        assert_eq!(
            b.support(),
            (1..=18).filter(|x| *x != 5 && *x != 14).collect::<Vec<_>>()
        );
        assert!(b.is_shiftable());
        for line in 1..=4 {
            assert_eq!(b.row_sum(line), 0);
            assert_eq!(b.col_sum(line), 0);
        }
    }

    #[test]
    fn h4_blocks_structure() {
        let a = build_h4_blocks(8).unwrap();
        assert_eq!(a.row_entries(1), vec![1, -2, -18, 19]);
        assert!(a.is_shiftable());
        assert_integer(&a, 8, 4, 4);
        assert!(a.is_cyclically_sk_diagonal(2, 2).unwrap());

        let b = build_h4_blocks(4).unwrap();
        assert_eq!(
            b.support(),
            (1..=17).filter(|x| *x != 9).collect::<Vec<_>>()
        );
        assert_integer(&b, 4, 4, 4);
    }

    #[test]
    fn b6_filler_cases() {
        // The strip blocks share fixed column sums, so every size has zero
        // line sums; the support splits per the three cases of n mod 12.
        for n in [8, 12, 16, 20, 24] {
            let a = build_b6_filler(n).unwrap();
            let v = n as i64;
            assert!(a.is_shiftable(), "n = {n}");
            for line in 1..=n {
                assert_eq!(a.row_sum(line), 0, "row {line}, n = {n}");
                assert_eq!(a.col_sum(line), 0, "col {line}, n = {n}");
            }
            let banned = [v + 1, 3 * v + 2, 5 * v + 3];
            assert_eq!(
                a.support(),
                (1..=6 * v + 3)
                    .filter(|x| !banned.contains(x))
                    .collect::<Vec<_>>(),
                "support mismatch at n = {n}"
            );
            assert!(a.is_cyclically_sk_diagonal(2, 3).unwrap(), "n = {n}");
        }
        assert!(build_b6_filler(4).is_err());
        assert!(build_b6_filler(10).is_err());
    }

    #[test]
    fn b6_filler_matches_inner_block_sums() {
        // Column sums of the generating 2x6 blocks: (2, 1, -4, 1, 2, -2).
        for block in [STRIP_U, STRIP_V5, STRIP_V9] {
            let sums: Vec<i64> = (0..6).map(|c| block[0][c] + block[1][c]).collect();
            assert_eq!(sums, vec![2, 1, -4, 1, 2, -2]);
            assert_eq!(block[0].iter().sum::<i64>(), 0);
            assert_eq!(block[1].iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn h5_spot_values_and_verification() {
        let a = build_h5(15).unwrap();
        assert_eq!(a.get(Position::new(1, 1)), Some(15));
        assert_eq!(a.get(Position::new(1, 2)), Some(-45));
        assert_eq!(a.row_entries(1), vec![15, -45, 66, -52, 16]);
        assert_integer(&a, 15, 5, 5);
        assert!(a.is_cyclically_k_diagonal(5).unwrap());

        let b = build_h5(7).unwrap();
        assert_integer(&b, 7, 5, 5);
        assert_eq!(
            b.support(),
            (1..=37)
                .filter(|x| *x != 15 && *x != 30)
                .collect::<Vec<_>>()
        );
        assert!(build_h5(8).is_err());
        assert!(build_h5(3).is_err());
    }

    #[test]
    fn h6_cases() {
        let a = build_h6(10).unwrap();
        assert_eq!(a.row_entries(1), vec![-1, 5, 2, -7, -9, 10]);
        assert_integer(&a, 10, 6, 6);
        assert!(a.is_cyclically_sk_diagonal(2, 3).unwrap());

        for n in [6, 8, 12, 14] {
            let b = build_h6(n).unwrap();
            assert_integer(&b, n, 6, 6);
            assert!(b.is_cyclically_sk_diagonal(2, 3).unwrap(), "n = {n}");
        }
        let b6 = build_h6(6).unwrap();
        assert_eq!(
            b6.support(),
            (1..=38)
                .filter(|x| *x != 13 && *x != 26)
                .collect::<Vec<_>>()
        );
        // n = 8 is the 6m+2 case with m = 1: strip 1 is V5 +- 12.
        let b8 = build_h6(8).unwrap();
        assert_eq!(b8.get(Position::new(3, 3)), Some(-13));
        assert_eq!(b8.get(Position::new(3, 4)), Some(22));
        assert!(build_h6(5).is_err());
        assert!(build_h6(4).is_err());
    }

    #[test]
    fn builtins_verify() {
        for name in BuiltinName::ALL {
            let a = builtin_example(name);
            let (n, k, t) = name.params();
            assert_integer(&a, n, k, t);
        }
        let h5_8 = builtin_example(BuiltinName::H5_8_5);
        assert_eq!(h5_8.get(Position::new(1, 1)), Some(4));
        assert!(h5_8.is_cyclically_sk_diagonal(2, 3).unwrap());
        let h5_16 = builtin_example(BuiltinName::H5_16_5);
        assert_eq!(h5_16.get(Position::new(1, 1)), Some(8));
        assert_eq!(
            h5_16.support(),
            (1..=82)
                .filter(|x| *x != 33 && *x != 66)
                .collect::<Vec<_>>()
        );
        assert!(h5_16.is_cyclically_sk_diagonal(2, 3).unwrap());
        let h16 = builtin_example(BuiltinName::H16_4_4);
        assert_eq!(
            h16.support(),
            (1..=24).filter(|x| x % 3 != 0).collect::<Vec<_>>()
        );
        assert!("nonsense".parse::<BuiltinName>().is_err());
        assert_eq!(
            "h5_8_5".parse::<BuiltinName>().unwrap(),
            BuiltinName::H5_8_5
        );
    }

    #[test]
    fn h3_12_viewable_as_2_2_diagonal() {
        let a = build_h3_even(12).unwrap();
        assert!(a.is_cyclically_sk_diagonal(2, 2).unwrap());
    }

    #[test]
    fn odd_diagonal_arrays_view_as_blocks() {
        // A cyclically k-diagonal array of even size with k odd is also
        // cyclically (2, (k+1)/2)-diagonal.
        for n in [4usize, 8, 12, 16] {
            let a = build_h3_even(n).unwrap();
            assert!(a.is_cyclically_sk_diagonal(2, 2).unwrap(), "n = {n}");
        }
    }
}
