//! Versioned JSON persistence for trained models.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::network::Mlp;
use super::{FittedNetwork, RegressionModel, Standardizer};
use crate::domain::MemorySize;
use crate::features::FeatureSet;
use crate::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoredLayer {
    inputs: usize,
    outputs: usize,
    /// Row-major `inputs x outputs`.
    weights: Vec<f64>,
    biases: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoredModel {
    version: u32,
    base_size: MemorySize,
    target_sizes: Vec<MemorySize>,
    feature_set: FeatureSet,
    standardization: Standardizer,
    layers: Vec<StoredLayer>,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: Option<u32>,
}

pub fn to_json(model: &RegressionModel) -> String {
    let layers = model
        .fitted
        .network
        .layer_parameters()
        .into_iter()
        .map(|(w, b)| StoredLayer {
            inputs: w.nrows(),
            outputs: w.ncols(),
            weights: w.iter().copied().collect(),
            biases: b.to_vec(),
        })
        .collect();
    let stored = StoredModel {
        version: MODEL_FORMAT_VERSION,
        base_size: model.base,
        target_sizes: model.target_sizes().to_vec(),
        feature_set: model.feature_set.clone(),
        standardization: model.fitted.standardizer.clone(),
        layers,
    };
    serde_json::to_string(&stored).expect("model serialization cannot fail")
}

pub fn from_json(text: &str, source: &str) -> Result<RegressionModel> {
    let format = |e: serde_json::Error| Error::Format {
        context: source.to_string(),
        message: e.to_string(),
    };
    let invalid = |message: String| Error::Format {
        context: source.to_string(),
        message,
    };
    let probe: VersionProbe = serde_json::from_str(text).map_err(format)?;
    match probe.version {
        Some(MODEL_FORMAT_VERSION) => {}
        Some(found) => {
            return Err(Error::IncompatibleVersion {
                found,
                expected: MODEL_FORMAT_VERSION,
            })
        }
        None => return Err(invalid("missing field `version`".into())),
    }
    let stored: StoredModel = serde_json::from_str(text).map_err(format)?;
    if stored.target_sizes != stored.base_size.others() {
        return Err(invalid(format!(
            "target_sizes must be every size except the base {}",
            stored.base_size
        )));
    }
    if stored.standardization.means.len() != stored.feature_set.len()
        || stored.standardization.stds.len() != stored.feature_set.len()
    {
        return Err(invalid("standardization width does not match the feature set".into()));
    }
    if stored.standardization.stds.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(invalid("standardization scales must be positive".into()));
    }
    let mut sizes = vec![stored.feature_set.len()];
    let mut params = Vec::new();
    for (i, layer) in stored.layers.iter().enumerate() {
        if layer.inputs != *sizes.last().unwrap() {
            return Err(invalid(format!("layer {i} expects {} inputs, previous layer gives {}", layer.inputs, sizes.last().unwrap())));
        }
        if layer.weights.len() != layer.inputs * layer.outputs || layer.biases.len() != layer.outputs {
            return Err(invalid(format!("layer {i} has inconsistent weight or bias lengths")));
        }
        sizes.push(layer.outputs);
        params.extend_from_slice(&layer.weights);
        params.extend_from_slice(&layer.biases);
    }
    if sizes.len() < 2 || *sizes.last().unwrap() != 5 {
        return Err(invalid("the output layer must have 5 units".into()));
    }
    let network = Mlp::from_parameters(sizes, params).map_err(|e| invalid(e.to_string()))?;
    Ok(RegressionModel {
        base: stored.base_size,
        feature_set: stored.feature_set,
        fitted: FittedNetwork {
            standardizer: stored.standardization,
            network,
            history: Vec::new(),
        },
    })
}

pub fn save_model(model: &RegressionModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<RegressionModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json(&text, &path.display().to_string())
}
