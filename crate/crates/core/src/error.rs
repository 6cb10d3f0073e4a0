// Copyright 2026 The su2-wigner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The midpoint is undefined for `a = -b`.
    #[error("antipodal pair: 1 + a.b = {gap:e} is below the midpoint cutoff")]
    AntipodalPair { gap: f64 },

    /// A hemisphere node sits on (or past) the boundary `a0 = 0`.
    #[error("hemisphere node has a0 = {a0:e}; the squaring map is singular there")]
    AntipodalNode { a0: f64 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// `have` and `need` are band limits counted in units of 1/2.
    #[error("grid too coarse: exactness covers 2j <= {have}, need 2j <= {need}")]
    GridTooCoarse { have: u32, need: u32 },

    #[error("invalid index: two_j = {two_j}, two_m = {two_m}")]
    Index { two_j: u32, two_m: i32 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
