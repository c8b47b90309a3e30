use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmConfig, StartKind, Variant};
use crate::error::{HoloError, Result};
use crate::metrics::DEFAULT_EPSILON;
use crate::modulation::{Levels, ModulationKind, ModulationScheme};

/// Free-form labels copied into the results document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentLabels {
    #[serde(default)]
    pub machine: Option<String>,
    #[serde(default)]
    pub precision: Option<String>,
}

/// A run matrix over image x resolution x levels x start x variant.
///
/// Resolutions are target sizes; each target is embedded in a hologram twice
/// as large in each dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default)]
    pub name: String,
    /// Image paths or `synthetic:<kind>` ids.
    pub images: Vec<String>,
    /// Image whose horizon MSE normalizes all others; the first image if unset.
    #[serde(default)]
    pub reference_image: Option<String>,
    pub resolutions: Vec<usize>,
    #[serde(default = "default_kind")]
    pub kind: ModulationKind,
    pub level_counts: Vec<Levels>,
    #[serde(default = "default_starts")]
    pub starts: Vec<StartKind>,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    pub runs_per_cell: usize,
    pub iteration_horizon: usize,
    /// 1-based iteration at which normalizers are taken; `iteration_horizon` if unset.
    #[serde(default)]
    pub nmse_horizon: Option<usize>,
    #[serde(default)]
    pub seed_base: u64,
    /// Explicit per-run seeds, overriding `seed_base + run index`.
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Run every job on one thread, for timing-sensitive plans.
    #[serde(default)]
    pub serial: bool,
    #[serde(default)]
    pub free_outside_target: bool,
    #[serde(default)]
    pub environment: EnvironmentLabels,
}

fn default_kind() -> ModulationKind {
    ModulationKind::Phase
}

fn default_starts() -> Vec<StartKind> {
    vec![StartKind::Random]
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::Gs]
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

/// One point of the run matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub image: String,
    pub resolution: usize,
    pub scheme: ModulationScheme,
    pub start: StartKind,
    pub variant: Variant,
}

impl ExperimentPlan {
    /// A single-image GS plan with defaults for everything else.
    pub fn new(images: Vec<String>, resolutions: Vec<usize>, level_counts: Vec<Levels>, runs_per_cell: usize, iteration_horizon: usize) -> Self {
        ExperimentPlan {
            name: String::new(),
            images,
            reference_image: None,
            resolutions,
            kind: default_kind(),
            level_counts,
            starts: default_starts(),
            variants: default_variants(),
            runs_per_cell,
            iteration_horizon,
            nmse_horizon: None,
            seed_base: 0,
            seeds: None,
            epsilon: DEFAULT_EPSILON,
            serial: false,
            free_outside_target: false,
            environment: EnvironmentLabels::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    /// Reads a plan file; relative image paths are taken relative to the file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HoloError::io(path, e))?;
        let mut plan = Self::from_json(&text).map_err(|e| match e {
            HoloError::Json(inner) => HoloError::InvalidPlan(format!("{}: {inner}", path.display())),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |id: &mut String| {
            if !id.starts_with("synthetic:") && Path::new(id.as_str()).is_relative() {
                *id = base.join(id.as_str()).display().to_string();
            }
        };
        plan.images.iter_mut().for_each(rebase);
        plan.reference_image.iter_mut().for_each(rebase);
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HoloError::InvalidPlan(msg));
        if self.runs_per_cell < 2 {
            return bad(format!("runs_per_cell must be >= 2, got {}", self.runs_per_cell));
        }
        if self.iteration_horizon == 0 {
            return bad("iteration_horizon must be >= 1".into());
        }
        if let Some(h) = self.nmse_horizon {
            if h == 0 || h > self.iteration_horizon {
                return bad(format!("nmse_horizon {h} outside 1..={}", self.iteration_horizon));
            }
        }
        if let Some(&r) = self.resolutions.iter().find(|&&r| r < 2 || r % 2 != 0) {
            return bad(format!("resolution {r} is not an even size >= 2"));
        }
        if let Some(seeds) = &self.seeds {
            if seeds.len() != self.runs_per_cell {
                return bad(format!("{} seeds given for {} runs per cell", seeds.len(), self.runs_per_cell));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        for (name, empty) in [
            ("images", self.images.is_empty()),
            ("resolutions", self.resolutions.is_empty()),
            ("level_counts", self.level_counts.is_empty()),
            ("starts", self.starts.is_empty()),
            ("variants", self.variants.is_empty()),
        ] {
            if empty {
                return bad(format!("{name} must not be empty"));
            }
        }
        if let Some(r) = &self.reference_image {
            if !self.images.contains(r) {
                return bad(format!("reference image `{r}` is not in images"));
            }
        }
        for &levels in &self.level_counts {
            ModulationScheme::new(self.kind, levels).map_err(|e| HoloError::InvalidPlan(e.to_string()))?;
        }
        Ok(())
    }

    pub fn reference(&self) -> &str {
        self.reference_image.as_deref().unwrap_or(&self.images[0])
    }

    pub fn effective_nmse_horizon(&self) -> usize {
        self.nmse_horizon.unwrap_or(self.iteration_horizon)
    }

    pub fn seeds(&self) -> Vec<u64> {
        match &self.seeds {
            Some(s) => s.clone(),
            None => (0..self.runs_per_cell as u64).map(|i| self.seed_base.wrapping_add(i)).collect(),
        }
    }

    /// Cells in image-major order.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut out = Vec::new();
        for image in &self.images {
            for &resolution in &self.resolutions {
                for &levels in &self.level_counts {
                    for &start in &self.starts {
                        for &variant in &self.variants {
                            out.push(CellSpec {
                                image: image.clone(),
                                resolution,
                                scheme: ModulationScheme { kind: self.kind, levels },
                                start,
                                variant,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn algorithm_config(&self, cell: &CellSpec, seed: u64) -> AlgorithmConfig {
        AlgorithmConfig {
            free_outside_target: self.free_outside_target,
            ..AlgorithmConfig::new(cell.variant, cell.scheme, cell.start, self.iteration_horizon, seed)
        }
    }
}
