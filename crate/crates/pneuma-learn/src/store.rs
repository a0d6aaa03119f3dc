use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleMember, SurrogateEnsemble};
use crate::error::LearnError;

const MANIFEST_NAME: &str = "manifest.json";
const STORE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Manifest {
    version: u32,
    member_count: usize,
    prior_scale: f64,
}

fn member_paths(dir: &Path, index: usize) -> (std::path::PathBuf, std::path::PathBuf) {
    (
        dir.join(format!("member_{index:02}_trainable.pnms")),
        dir.join(format!("member_{index:02}_prior.pnms")),
    )
}

/// Writes an ensemble to a directory: a JSON manifest plus one pair of
/// model files (trainable and frozen companion) per member.
pub fn save_ensemble(dir: impl AsRef<Path>, ensemble: &SurrogateEnsemble) -> Result<(), LearnError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let prior_scale = ensemble.members()[0].prior_scale();
    let manifest = Manifest {
        version: STORE_VERSION,
        member_count: ensemble.member_count(),
        prior_scale,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| LearnError::Format {
        detail: format!("manifest encoding failed: {e}"),
    })?;
    fs::write(dir.join(MANIFEST_NAME), json + "\n")?;
    for (i, member) in ensemble.members().iter().enumerate() {
        let (trainable_path, prior_path) = member_paths(dir, i);
        pneuma_surrogate::save_model(trainable_path, member.trainable())?;
        pneuma_surrogate::save_model(prior_path, member.prior())?;
    }
    Ok(())
}

/// Loads an ensemble saved by [`save_ensemble`], validating the manifest
/// version and every member's architecture consistency.
pub fn load_ensemble(dir: impl AsRef<Path>) -> Result<SurrogateEnsemble, LearnError> {
    let dir = dir.as_ref();
    let manifest_path = dir.join(MANIFEST_NAME);
    let json = fs::read_to_string(&manifest_path).map_err(|e| LearnError::Format {
        detail: format!("cannot read {}: {e}", manifest_path.display()),
    })?;
    let manifest: Manifest = serde_json::from_str(&json).map_err(|e| LearnError::Format {
        detail: format!("malformed manifest: {e}"),
    })?;
    if manifest.version != STORE_VERSION {
        return Err(LearnError::Format {
            detail: format!(
                "unsupported ensemble store version {} (expected {STORE_VERSION})",
                manifest.version
            ),
        });
    }
    if manifest.member_count == 0 {
        return Err(LearnError::Format {
            detail: "manifest declares zero members".into(),
        });
    }
    let mut members = Vec::with_capacity(manifest.member_count);
    for i in 0..manifest.member_count {
        let (trainable_path, prior_path) = member_paths(dir, i);
        let trainable = pneuma_surrogate::load_model(&trainable_path).map_err(|e| {
            LearnError::Format {
                detail: format!("member {i} trainable model: {e}"),
            }
        })?;
        let prior =
            pneuma_surrogate::load_model(&prior_path).map_err(|e| LearnError::Format {
                detail: format!("member {i} companion model: {e}"),
            })?;
        members.push(EnsembleMember::new(trainable, prior, manifest.prior_scale)?);
    }
    SurrogateEnsemble::from_members(members)
}
