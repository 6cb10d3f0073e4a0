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

//! The Abelian cases the SU(2) construction generalizes: the Cartesian
//! Wigner function on the real line and the angle-angular momentum pair.

pub mod angle;
pub mod cartesian;

pub use angle::{
    angle_wigner, angle_wigner_complex, so2_general_wigner, so2_midpoint, weyl_expectation,
    weyl_phase_space, AngleState,
};
pub use cartesian::{cartesian_wigner, cartesian_wigner_complex, CartesianState};
