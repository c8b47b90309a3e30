//! SLM modulation schemes and the quantisers that project a field onto them.
//!
//! Phase schemes with `L` levels allow `exp(i 2 pi k / L)`; amplitude schemes
//! allow `k / (L - 1)`. Nearest-neighbour quantisation picks the achievable
//! value at the smallest Euclidean distance in the complex plane. Ties go to
//! the lower level index and zero pixels map to index 0.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::field::{ComplexField, Rect};

pub const MIN_LEVELS: u32 = 2;
pub const MAX_LEVELS: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulationKind {
    Phase,
    Amplitude,
}

impl FromStr for ModulationKind {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase" => Ok(ModulationKind::Phase),
            "amplitude" => Ok(ModulationKind::Amplitude),
            other => Err(HoloError::InvalidScheme(format!("unknown modulation kind `{other}`"))),
        }
    }
}

impl fmt::Display for ModulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModulationKind::Phase => "phase",
            ModulationKind::Amplitude => "amplitude",
        })
    }
}

/// Number of addressable levels, or an unquantised device.
///
/// Serialized as an integer or the string `"continuous"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "LevelsRepr", try_from = "LevelsRepr")]
pub enum Levels {
    Discrete(u32),
    Continuous,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LevelsRepr {
    Count(u32),
    Name(String),
}

impl From<Levels> for LevelsRepr {
    fn from(l: Levels) -> Self {
        match l {
            Levels::Discrete(n) => LevelsRepr::Count(n),
            Levels::Continuous => LevelsRepr::Name("continuous".into()),
        }
    }
}

impl TryFrom<LevelsRepr> for Levels {
    type Error = String;

    fn try_from(r: LevelsRepr) -> std::result::Result<Self, String> {
        match r {
            LevelsRepr::Count(n) => Ok(Levels::Discrete(n)),
            LevelsRepr::Name(s) if s == "continuous" => Ok(Levels::Continuous),
            LevelsRepr::Name(s) => Err(format!("expected a level count or \"continuous\", got `{s}`")),
        }
    }
}

impl FromStr for Levels {
    type Err = HoloError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "continuous" {
            return Ok(Levels::Continuous);
        }
        s.parse::<u32>()
            .map(Levels::Discrete)
            .map_err(|_| HoloError::InvalidScheme(format!("bad level count `{s}`")))
    }
}

impl fmt::Display for Levels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Levels::Discrete(n) => write!(f, "{n}"),
            Levels::Continuous => f.write_str("continuous"),
        }
    }
}

/// SLM constraint description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModulationScheme {
    pub kind: ModulationKind,
    pub levels: Levels,
}

impl ModulationScheme {
    pub fn new(kind: ModulationKind, levels: Levels) -> Result<Self> {
        let scheme = ModulationScheme { kind, levels };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn phase(levels: u32) -> Result<Self> {
        Self::new(ModulationKind::Phase, Levels::Discrete(levels))
    }

    pub fn amplitude(levels: u32) -> Result<Self> {
        Self::new(ModulationKind::Amplitude, Levels::Discrete(levels))
    }

    pub fn continuous_phase() -> Self {
        ModulationScheme {
            kind: ModulationKind::Phase,
            levels: Levels::Continuous,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.levels {
            Levels::Discrete(n) if !(MIN_LEVELS..=MAX_LEVELS).contains(&n) => Err(
                HoloError::InvalidScheme(format!("{n} levels outside [{MIN_LEVELS}, {MAX_LEVELS}]")),
            ),
            _ => Ok(()),
        }
    }

    pub fn is_binary(&self) -> bool {
        self.levels == Levels::Discrete(2)
    }
}

impl fmt::Display for ModulationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.levels, self.kind)
    }
}

/// The set of values a device can display.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    Discrete(Vec<Complex64>),
    /// Any unit-magnitude value.
    ContinuousPhase,
    /// Any real value in `[0, 1]`.
    ContinuousAmplitude,
}

/// Achievable values for `scheme`, in level-index order.
pub fn constraint_set(scheme: &ModulationScheme) -> Result<ConstraintSet> {
    scheme.validate()?;
    Ok(match (scheme.kind, scheme.levels) {
        (ModulationKind::Phase, Levels::Continuous) => ConstraintSet::ContinuousPhase,
        (ModulationKind::Amplitude, Levels::Continuous) => ConstraintSet::ContinuousAmplitude,
        (ModulationKind::Phase, Levels::Discrete(n)) => {
            ConstraintSet::Discrete((0..n).map(|k| unit_phase(k, n)).collect())
        }
        (ModulationKind::Amplitude, Levels::Discrete(n)) => ConstraintSet::Discrete(
            (0..n)
                .map(|k| Complex64::new(k as f64 / (n - 1) as f64, 0.0))
                .collect(),
        ),
    })
}

// Quarter turns are produced exactly so binary and 4-level sets are {1, i, -1, -i}.
fn unit_phase(k: u32, n: u32) -> Complex64 {
    let quarter = 4 * u64::from(k);
    if quarter % u64::from(n) == 0 {
        match quarter / u64::from(n) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, TAU * f64::from(k) / f64::from(n))
    }
}

/// Precomputed nearest-neighbour projector for one scheme.
#[derive(Debug, Clone)]
pub struct Quantiser {
    scheme: ModulationScheme,
    set: ConstraintSet,
}

impl Quantiser {
    pub fn new(scheme: &ModulationScheme) -> Result<Self> {
        Ok(Quantiser {
            scheme: *scheme,
            set: constraint_set(scheme)?,
        })
    }

    pub fn scheme(&self) -> &ModulationScheme {
        &self.scheme
    }

    pub fn constraint_set(&self) -> &ConstraintSet {
        &self.set
    }

    /// Level index of the nearest achievable value, `None` for continuous schemes.
    pub fn level_index(&self, v: Complex64) -> Option<usize> {
        let ConstraintSet::Discrete(values) = &self.set else {
            return None;
        };
        let n = values.len();
        // two bracketing candidates, then an exact distance comparison
        let (a, b) = match self.scheme.kind {
            ModulationKind::Phase => {
                if v.re == 0.0 && v.im == 0.0 {
                    return Some(0);
                }
                let t = v.arg() / TAU * n as f64;
                let lo = t.floor() as i64;
                let wrap = |k: i64| k.rem_euclid(n as i64) as usize;
                (wrap(lo), wrap(lo + 1))
            }
            ModulationKind::Amplitude => {
                let t = (v.re.clamp(0.0, 1.0) * (n - 1) as f64).floor() as usize;
                let lo = t.min(n - 1);
                (lo, (lo + 1).min(n - 1))
            }
        };
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let d_lo = (v - values[lo]).norm_sqr();
        let d_hi = (v - values[hi]).norm_sqr();
        Some(if d_hi < d_lo { hi } else { lo })
    }

    /// Nearest achievable value.
    pub fn project(&self, v: Complex64) -> Complex64 {
        match &self.set {
            ConstraintSet::Discrete(values) => values[self.level_index(v).expect("discrete set")],
            ConstraintSet::ContinuousPhase => {
                let r = v.norm();
                if r == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else if (r - 1.0).abs() < 1e-12 {
                    // already on the circle; renormalising could move it by an ulp
                    v
                } else {
                    v / r
                }
            }
            ConstraintSet::ContinuousAmplitude => Complex64::new(v.re.clamp(0.0, 1.0), 0.0),
        }
    }

    /// Whether `v` is exactly an achievable value.
    pub fn contains(&self, v: Complex64) -> bool {
        match &self.set {
            ConstraintSet::Discrete(values) => values.contains(&v),
            ConstraintSet::ContinuousPhase => (v.norm() - 1.0).abs() < 1e-12,
            ConstraintSet::ContinuousAmplitude => v.im == 0.0 && (0.0..=1.0).contains(&v.re),
        }
    }

    pub fn project_in_place(&self, field: &mut ComplexField) {
        for v in field.as_mut_slice() {
            *v = self.project(*v);
        }
    }
}

/// Per-pixel correction `delta` such that `quantise_nn(H) = H + delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantisationDelta(pub ComplexField);

impl QuantisationDelta {
    pub fn field(&self) -> &ComplexField {
        &self.0
    }
}

/// Nearest-neighbour quantisation. Returns the quantised field and its correction.
pub fn quantise_nn(
    h: &ComplexField,
    scheme: &ModulationScheme,
) -> Result<(ComplexField, QuantisationDelta)> {
    let q = Quantiser::new(scheme)?;
    let out = h.map(|v| q.project(v));
    let delta = ComplexField::new(
        h.width(),
        h.height(),
        out.as_slice()
            .iter()
            .zip(h.as_slice())
            .map(|(q, h)| q - h)
            .collect(),
    )?;
    Ok((out, QuantisationDelta(delta)))
}

/// Partial quantisation `H + beta * delta`.
///
/// `beta = 1` returns the nearest-neighbour field itself rather than
/// `H + (Q - H)`, which can differ from `Q` in the last bit.
pub fn quantise_weighted(h: &ComplexField, scheme: &ModulationScheme, beta: f64) -> Result<ComplexField> {
    check_beta(beta)?;
    let (q, delta) = quantise_nn(h, scheme)?;
    if beta == 1.0 {
        return Ok(q);
    }
    ComplexField::new(
        h.width(),
        h.height(),
        h.as_slice()
            .iter()
            .zip(delta.field().as_slice())
            .map(|(h, d)| h + beta * d)
            .collect(),
    )
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(HoloError::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    Ok(())
}

pub(crate) fn check_window(window: &Rect, width: usize, height: usize) -> Result<()> {
    if window.is_empty() {
        return Err(HoloError::DegenerateWindow(format!("{window:?} contains no pixels")));
    }
    if !window.fits_within(width, height) {
        return Err(HoloError::InvalidParameter(format!(
            "window {window:?} exceeds {width}x{height} field"
        )));
    }
    Ok(())
}

/// Quantises only the pixels inside `window`; the rest pass through untouched.
pub fn quantise_windowed(h: &ComplexField, scheme: &ModulationScheme, window: &Rect) -> Result<ComplexField> {
    check_window(window, h.width(), h.height())?;
    let q = Quantiser::new(scheme)?;
    let mut out = h.clone();
    let width = h.width();
    for i in window.indices(width) {
        out.as_mut_slice()[i] = q.project(h.as_slice()[i]);
    }
    Ok(out)
}
