use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};

/// Per-image scale factors `MSE_ref,H / MSE_image,H` taken at a common horizon `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationTable {
    pub reference: String,
    pub ratios: BTreeMap<String, f64>,
}

impl NormalizationTable {
    /// Builds the table from each image's MSE at the horizon iteration.
    pub fn from_horizon_mse(
        reference: &str,
        horizon_mse: impl IntoIterator<Item = (String, f64)>,
    ) -> Result<Self> {
        let horizon: BTreeMap<String, f64> = horizon_mse.into_iter().collect();
        let reference_mse = *horizon
            .get(reference)
            .ok_or_else(|| HoloError::NoNormalizer(reference.to_string()))?;
        let ratios = horizon
            .into_iter()
            .filter(|(_, mse)| *mse > 0.0)
            .map(|(id, mse)| {
                let ratio = if id == reference { 1.0 } else { reference_mse / mse };
                (id, ratio)
            })
            .collect();
        Ok(NormalizationTable {
            reference: reference.to_string(),
            ratios,
        })
    }

    pub fn ratio(&self, image_id: &str) -> Option<f64> {
        self.ratios.get(image_id).copied()
    }
}

/// Scales an MSE value by the image's normalizer.
pub fn nmse(mse_value: f64, image_id: &str, table: &NormalizationTable) -> Result<f64> {
    table
        .ratio(image_id)
        .map(|r| mse_value * r)
        .ok_or_else(|| HoloError::NoNormalizer(image_id.to_string()))
}
