//! JSON state files: `{ "dims": [d1, ...], "amps": [[re, im], ...] }`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PureState;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDocument {
    dims: Vec<usize>,
    amps: Vec<[f64; 2]>,
}

pub fn amps_to_pairs(amps: &[Complex64]) -> Vec<[f64; 2]> {
    amps.iter().map(|a| [a.re, a.im]).collect()
}

pub fn parse_state_json(text: &str) -> Result<PureState> {
    let doc: StateDocument =
        serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))?;
    let amps = doc.amps.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
    PureState::new(doc.dims, amps)
}

pub fn to_state_json(state: &PureState) -> String {
    let doc = StateDocument {
        dims: state.dims().to_vec(),
        amps: amps_to_pairs(state.amps()),
    };
    serde_json::to_string_pretty(&doc).expect("state documents always serialize")
}

pub fn state_value(state: &PureState) -> serde_json::Value {
    serde_json::json!({
        "dims": state.dims(),
        "amps": amps_to_pairs(state.amps()),
    })
}

pub fn read_state_file(path: &Path) -> std::io::Result<Result<PureState>> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_state_json(&text))
}
