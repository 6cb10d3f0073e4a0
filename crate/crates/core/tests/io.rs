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

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2_wigner::harmonic::{DensityEnsemble, IrrepBlockState};
use su2_wigner::io::*;
use su2_wigner::wigner::WignerPlan;
use su2_wigner::Su2Element;

#[test]
fn ensemble_round_trip() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let a = IrrepBlockState::random(2, &mut r);
    let b = IrrepBlockState::random(2, &mut r);
    let rho = DensityEnsemble::new(vec![0.25, 0.75], vec![a, b]).unwrap();
    let text = StateFile::from_ensemble(&rho).to_json();
    let LoadedState::Su2(back) = StateFile::from_json(&text).unwrap().load().unwrap() else { panic!() };
    assert_eq!(back.weights(), rho.weights());
    let g = Su2Element::random(&mut r);
    let h = Su2Element::random(&mut r);
    assert_eq!(back.kernel(&g, &h), rho.kernel(&g, &h));
}

#[test]
fn ensemble_weight_mismatch_is_a_schema_error() {
    let t = r#"{"group":"su2","jmax_twice":0,"weights":[1.0,0.5],
        "components":[{"blocks":[{"two_j":0,"re":[[1]],"im":[[0]]}]}]}"#;
    assert!(matches!(StateFile::from_json(t).unwrap().load(), Err(su2_wigner::Error::Schema(_))));
}

#[test]
fn table_formats_agree() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let rho = DensityEnsemble::pure(IrrepBlockState::random(1, &mut r));
    let plan = WignerPlan::new(1, &[0, 1], 0).unwrap();
    let mut t = WignerTable::new("su2");
    let g = Su2Element::random(&mut r);
    t.push_block(&plan.full(&rho, &g, 0).unwrap());
    t.push_block(&plan.full(&rho, &g, 1).unwrap());
    assert_eq!(t.rows.len(), 1 + 16);
    let back = WignerTable::from_json(&t.to_json()).unwrap();
    assert_eq!(back, t);
    assert_eq!(t.metadata["haar_normalized"], true);

    let csv = t.to_csv().unwrap();
    let mut lines = csv.lines();
    let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(meta["group"], "su2");
    let body = lines.collect::<Vec<_>>().join("\n");
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let rows: Vec<TableRow> = rd.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows, t.rows);
}
