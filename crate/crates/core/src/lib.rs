//! Support structure of discretely infinitely divisible laws.
//!
//! A compound Poisson law on the nonnegative integers is supported on the
//! additive semigroup generated by its jump sizes; the modules here compute
//! that semigroup exactly ([`semigroup`]), the law's PMF and convolution roots
//! ([`series`]), the continuous analogue for Lévy measures supported on
//! intervals ([`levy_interval`]), left extremities from Laplace transforms
//! ([`extremity`]), and Monte Carlo checks of all of the above ([`simulator`]).

pub mod cli;
pub mod error;
pub mod extremity;
pub mod format;
pub mod levy_interval;
pub mod reference;
pub mod semigroup;
pub mod series;
pub mod simulator;

pub use error::{Error, Result};
