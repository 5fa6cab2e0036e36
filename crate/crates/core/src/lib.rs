//! Numerical core for non-Markovian diffusion equations driven by memory kernels.
//!
//! The crate evaluates the marginal law of the random time `l(t)` attached to a
//! memory kernel, the fundamental solutions obtained by subordinating a Markov
//! parent diffusion to that random time, their moments, and path samplers for
//! the corresponding stochastic processes.
//!
//! Everything here is `no_std` with `alloc`; file formats, the Monte Carlo
//! harness and the command line live in the companion `nmdiff` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod kernels;
pub mod moments;
pub mod quad;
pub mod simulate;
pub mod solutions;
pub mod specfun;
pub mod timedens;

pub use error::{Error, Result};
pub use kernels::{MemoryKernel, ScalingFunction, SuitabilityReport};
pub use solutions::{NonMarkovModel, ParentModel};
pub use timedens::{MixtureValue, TimeLaw};


pub use specfun::SeriesControl;

