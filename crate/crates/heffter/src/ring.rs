//! Modular ring parameters: the modulus `v = 2nk + t` and the order-`t`
//! subgroup `J` of `Z_v` generated by `v/t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape and ring data for a candidate `H_t(m,n; s,k)`: an `m x n` array with
/// `s` filled cells per row and `k` per column over `Z_v`, `v = 2nk + t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingParams {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub t: usize,
}

impl RingParams {
    /// General parameters; requires `ms = nk` and `t | 2nk`.
    pub fn new(m: usize, n: usize, s: usize, k: usize, t: usize) -> Result<Self> {
        if m == 0 || n == 0 || s == 0 || k == 0 || t == 0 {
            return Err(Error::domain("all of m, n, s, k, t must be positive"));
        }
        if m * s != n * k {
            return Err(Error::domain(format!(
                "inconsistent shape: m*s = {} but n*k = {}",
                m * s,
                n * k
            )));
        }
        if (2 * n * k) % t != 0 {
            return Err(Error::Divisibility {
                divisor: t,
                value: 2 * n * k,
            });
        }
        Ok(RingParams { m, n, s, k, t })
    }

    /// Square parameters for an `H_t(n;k)`.
    pub fn square(n: usize, k: usize, t: usize) -> Result<Self> {
        RingParams::new(n, n, k, k, t)
    }

    /// Square parameters with `t = k`, the case `H_k(n;k)`.
    pub fn square_tk(n: usize, k: usize) -> Result<Self> {
        RingParams::square(n, k, k)
    }

    /// The modulus `v = 2nk + t`.
    pub fn v(&self) -> i64 {
        (2 * self.n * self.k + self.t) as i64
    }

    /// Generator index of `J`: the subgroup of order `t` is `(v/t) Z_v`.
    pub fn j_gen(&self) -> i64 {
        self.v() / self.t as i64
    }

    /// Number of parts of `K_{q x r}`: `q = v / t`.
    pub fn q(&self) -> usize {
        (self.v() as usize) / self.t
    }

    /// Part size of `K_{q x r}`: `r = t`.
    pub fn r(&self) -> usize {
        self.t
    }

    /// The elements of `J` as residues in `[0, v)`.
    pub fn subgroup(&self) -> Vec<i64> {
        (0..self.t as i64).map(|i| i * self.j_gen()).collect()
    }

    /// Whether `x` (any integer) lies in `J` modulo `v`.
    pub fn in_j(&self, x: i64) -> bool {
        x.rem_euclid(self.v()) % self.j_gen() == 0
    }

    /// The support an integer array must realize:
    /// `[1, nk + floor(t/2)]` minus the multiples of `v/t`.
    pub fn expected_support(&self) -> Vec<i64> {
        let top = (self.n * self.k + self.t / 2) as i64;
        (1..=top).filter(|x| x % self.j_gen() != 0).collect()
    }
}
