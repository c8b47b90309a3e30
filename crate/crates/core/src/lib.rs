//! Computer-generated holography with the Gerchberg-Saxton algorithm.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`]: complex fields and the centred FFT pipeline,
//! * [`modulation`]: SLM modulation schemes and quantisers,
//! * [`metrics`]: error metrics, plateau convergence, cycle detection,
//! * [`algorithms`]: the GS loop and its WGS / LT variants,
//! * [`harness`]: experiment plans, statistics, runtime model, JSON and CSV output,
//! * [`cli`]: the `holo` command line front end.
//!
//! ```
//! use holobench::algorithms::{run, AlgorithmConfig};
//! use holobench::field::{embed_target, RealImage};
//! use holobench::modulation::ModulationScheme;
//!
//! let image = RealImage::from_fn(16, 16, |x, y| ((x + y) % 4) as f64 / 3.0).unwrap();
//! let target = embed_target(&image).unwrap();
//! let config = AlgorithmConfig::gs(ModulationScheme::phase(256).unwrap(), 10, 7);
//! let trace = run(&config, &target).unwrap();
//! assert_eq!(trace.records.len(), 10);
//! ```

pub mod algorithms;
pub mod cli;
pub mod error;
pub mod field;
pub mod harness;
pub mod metrics;
pub mod modulation;

pub use error::{HoloError, Result};
