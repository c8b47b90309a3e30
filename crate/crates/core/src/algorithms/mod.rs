//! Gerchberg-Saxton and its weighted and windowed (Liu-Taghizadeh) variants.
//!
//! One iteration propagates the hologram to the replay field, records the
//! error inside the target region, imposes the target amplitude there while
//! keeping the computed phase, zeroes the rest of the replay field (unless
//! configured free), propagates back, and quantises with the variant's
//! quantiser.

mod iterate;
mod start;

pub use iterate::{hologram_hash, run, run_observed, IterationRecord, IterationStep, IterationTrace};
pub use start::{random_phase_field, start_back_projection, start_random};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::field::Rect;
use crate::modulation::{check_beta, check_window, ModulationScheme};

/// Which quantiser closes the loop on the hologram side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum Variant {
    /// Full nearest-neighbour quantisation.
    Gs,
    /// Partial quantisation `H + beta * delta`.
    Wgs { beta: f64 },
    /// Quantisation restricted to a hologram window; `None` is the whole field.
    Lt {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window: Option<Rect>,
    },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Gs => "gs",
            Variant::Wgs { .. } => "wgs",
            Variant::Lt { .. } => "lt",
        }
    }

    /// Short label including parameters, e.g. `wgs(beta=0.8)`.
    pub fn label(&self) -> String {
        match self {
            Variant::Gs => "gs".into(),
            Variant::Wgs { beta } => format!("wgs(beta={beta})"),
            Variant::Lt { window: None } => "lt(full)".into(),
            Variant::Lt { window: Some(r) } => format!("lt({},{},{},{})", r.x0, r.y0, r.x1, r.y1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    Random,
    BackProjection,
}

impl FromStr for StartKind {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(StartKind::Random),
            "backproject" | "back_projection" => Ok(StartKind::BackProjection),
            other => Err(HoloError::InvalidParameter(format!("unknown start `{other}`"))),
        }
    }
}

impl fmt::Display for StartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StartKind::Random => "random",
            StartKind::BackProjection => "back_projection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    #[serde(flatten)]
    pub variant: Variant,
    pub scheme: ModulationScheme,
    pub start: StartKind,
    pub max_iterations: usize,
    pub rng_seed: u64,
    /// Leave the replay field outside the target unconstrained instead of forcing it to zero.
    #[serde(default)]
    pub free_outside_target: bool,
}

impl AlgorithmConfig {
    pub fn new(variant: Variant, scheme: ModulationScheme, start: StartKind, max_iterations: usize, rng_seed: u64) -> Self {
        AlgorithmConfig {
            variant,
            scheme,
            start,
            max_iterations,
            rng_seed,
            free_outside_target: false,
        }
    }

    pub fn gs(scheme: ModulationScheme, max_iterations: usize, rng_seed: u64) -> Self {
        Self::new(Variant::Gs, scheme, StartKind::Random, max_iterations, rng_seed)
    }

    /// Checks parameters against a hologram of the given size.
    pub fn validate(&self, width: usize, height: usize) -> Result<()> {
        self.scheme.validate()?;
        if self.max_iterations == 0 {
            return Err(HoloError::InvalidParameter("max_iterations must be >= 1".into()));
        }
        match &self.variant {
            Variant::Gs => Ok(()),
            Variant::Wgs { beta } => check_beta(*beta),
            Variant::Lt { window: None } => Ok(()),
            Variant::Lt { window: Some(w) } => check_window(w, width, height).map_err(|e| match e {
                HoloError::InvalidParameter(_) => HoloError::DimensionMismatch {
                    left: (w.x1, w.y1),
                    right: (width, height),
                },
                other => other,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_serde_shape() {
        let cfg = AlgorithmConfig::new(
            Variant::Wgs { beta: 0.75 },
            ModulationScheme::phase(8).unwrap(),
            StartKind::BackProjection,
            5,
            3,
        );
        let json = serde_json::to_value(&cfg).unwrap();
        assert_eq!(json["variant"], "wgs");
        assert_eq!(json["beta"], 0.75);
        assert_eq!(json["start"], "back_projection");
        let back: AlgorithmConfig = serde_json::from_value(json).unwrap();
        assert_eq!(back, cfg);

        let lt: Variant = serde_json::from_str(r#"{"variant":"lt"}"#).unwrap();
        assert_eq!(lt, Variant::Lt { window: None });
    }

    #[test]
    fn validation() {
        let scheme = ModulationScheme::phase(4).unwrap();
        assert!(AlgorithmConfig::gs(scheme, 0, 1).validate(8, 8).is_err());
        let mut cfg = AlgorithmConfig::gs(scheme, 3, 1);
        cfg.variant = Variant::Wgs { beta: 0.0 };
        assert!(matches!(cfg.validate(8, 8), Err(HoloError::InvalidParameter(_))));
        cfg.variant = Variant::Lt { window: Some(Rect::new(0, 0, 0, 4)) };
        assert!(matches!(cfg.validate(8, 8), Err(HoloError::DegenerateWindow(_))));
        cfg.variant = Variant::Lt { window: Some(Rect::new(0, 0, 9, 4)) };
        assert!(matches!(cfg.validate(8, 8), Err(HoloError::DimensionMismatch { .. })));
        cfg.variant = Variant::Lt { window: Some(Rect::new(0, 0, 8, 4)) };
        assert!(cfg.validate(8, 8).is_ok());
    }
}
