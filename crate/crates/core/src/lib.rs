pub mod backtransform;
pub mod bdc;
pub mod bidiag;
pub mod dense;
pub mod driver;
pub mod error;
pub mod harness;
pub mod qr;

pub use error::{LinalgError, Result};

pub use driver::{gesdd, phase_profile, Jobz, PhaseProfile, SVDOptions, SVDResult};
