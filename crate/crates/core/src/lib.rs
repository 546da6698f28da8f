//! Finite-volume simulation of acid-mediated tumour invasion fronts.
//!
//! The crate covers the three-field model (healthy tissue, tumour, excess
//! acid), its two-equation and one-equation reductions and an
//! `eps`-relaxed system linking the latter two, together with the tools
//! used to study their traveling fronts: a space-averaged wave-speed
//! estimator, a sharp/smooth front classifier and the exact sharp front of
//! the heterogeneous one-equation model.
//!
//! ```no_run
//! use ggfront::experiments::{builtin, run};
//!
//! let spec = builtin("oneeq_heterogeneous").unwrap();
//! let result = run(&spec).unwrap();
//! println!("speed = {:?}", result.asymptotic_speed());
//! ```

pub mod analysis;
pub mod config;
pub mod error;
pub mod experiments;
pub mod model;
pub mod output;
pub mod schemes;

pub use error::{Error, Result};
