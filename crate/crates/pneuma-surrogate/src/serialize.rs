use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::SurrogateConfig;
use crate::error::SurrogateError;
use crate::features::Normalization;
use crate::model::SurrogateModel;

/// File magic for serialized surrogate models.
const MAGIC: &[u8; 4] = b"PNMS";
/// Current format version. Bump on any incompatible layout change.
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    config: SurrogateConfig,
    normalization: Normalization,
    weight_count: usize,
}

/// Writes a model in the versioned hybrid format: a fixed magic and
/// version, a JSON header carrying the architecture and feature
/// normalization, then the flat weight vector as little-endian doubles —
/// human-inspectable metadata, bit-exact parameters.
pub fn write_model<W: Write>(mut out: W, model: &SurrogateModel) -> Result<(), SurrogateError> {
    let header = Header {
        config: model.config().clone(),
        normalization: model.normalization().clone(),
        weight_count: model.weight_count(),
    };
    let header_json = serde_json::to_vec(&header).map_err(|e| SurrogateError::Format {
        detail: format!("header encoding failed: {e}"),
    })?;
    let header_len = u32::try_from(header_json.len()).map_err(|_| SurrogateError::Format {
        detail: "header too large".into(),
    })?;
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&header_len.to_le_bytes())?;
    out.write_all(&header_json)?;
    for &w in model.weights() {
        out.write_all(&w.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a model written by [`write_model`], validating magic, version,
/// weight count, and trailing bytes.
pub fn read_model<R: Read>(mut input: R) -> Result<SurrogateModel, SurrogateError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SurrogateError::Format {
            detail: format!("bad magic {magic:?}, not a surrogate model file"),
        });
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != VERSION {
        return Err(SurrogateError::Format {
            detail: format!("unsupported format version {version} (expected {VERSION})"),
        });
    }
    input.read_exact(&mut word)?;
    let header_len = u32::from_le_bytes(word) as usize;
    let mut header_json = vec![0u8; header_len];
    input.read_exact(&mut header_json)?;
    let header: Header =
        serde_json::from_slice(&header_json).map_err(|e| SurrogateError::Format {
            detail: format!("header decoding failed: {e}"),
        })?;
    let mut weights = Vec::with_capacity(header.weight_count);
    let mut buf = [0u8; 8];
    for _ in 0..header.weight_count {
        input.read_exact(&mut buf)?;
        weights.push(f64::from_le_bytes(buf));
    }
    let mut trailing = [0u8; 1];
    match input.read(&mut trailing)? {
        0 => {}
        _ => {
            return Err(SurrogateError::Format {
                detail: "trailing bytes after weight block".into(),
            })
        }
    }
    SurrogateModel::from_parts(header.config, header.normalization, weights)
}

/// Saves a model to a file.
pub fn save_model(path: impl AsRef<Path>, model: &SurrogateModel) -> Result<(), SurrogateError> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    write_model(&mut writer, model)?;
    writer.flush()?;
    Ok(())
}

/// Loads a model from a file.
pub fn load_model(path: impl AsRef<Path>) -> Result<SurrogateModel, SurrogateError> {
    let file = File::open(path)?;
    read_model(BufReader::new(file))
}
