use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::train::LstmModel;
use crate::error::{Error, Result};

const FORMAT: &str = "tsforge-lstm-checkpoint";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format: String,
    version: u32,
    model: LstmModel,
}

/// Writes the model (config, scalers, weights, optimizer state) as JSON.
/// Floats are written in shortest round-trip decimal form, so loading gives
/// back bit-identical weights.
pub fn save_checkpoint(model: &LstmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let doc = Checkpoint {
        format: FORMAT.into(),
        version: VERSION,
        model: model.clone(),
    };
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Numeric(e.to_string()))?;
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<LstmModel> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let parse = |message: String| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message,
    };
    let doc: Checkpoint = serde_json::from_str(&text).map_err(|e| parse(e.to_string()))?;
    if doc.format != FORMAT || doc.version != VERSION {
        return Err(parse(format!(
            "unsupported checkpoint {} v{}",
            doc.format, doc.version
        )));
    }
    let m = doc.model;
    // re-validate the weight buffer length against the recorded dimensions
    let params = super::LstmParams::from_vec(
        m.params.hidden(),
        m.params.input(),
        m.params.as_slice().to_vec(),
    )?;
    if m.optimizer.m.len() != params.len() || m.optimizer.v.len() != params.len() {
        return Err(parse("optimizer state does not match weights".into()));
    }
    Ok(LstmModel { params, ..m })
}
