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

//! Wigner distributions on SU(2) built from the regular representation,
//! together with the SO(2) and Cartesian baselines they generalize.

pub mod baselines;
pub mod error;
pub mod group;
pub mod harmonic;
pub mod io;
pub mod irreps;
pub mod linalg;
pub mod quadrature;
pub mod wigner;

pub use error::{Error, Result};
pub use group::{EulerAngles, Su2Element};
pub use linalg::CMatrix;
