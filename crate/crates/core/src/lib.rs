//! One-dimensional Wigner-Dunkl quantum mechanics.
//!
//! The library implements the Dunkl operator algebra on a symmetric grid, the
//! parity-split closed-form propagators of the free particle and the harmonic
//! oscillator, the exact oscillator spectrum and bound states, and an
//! independent grid-based numerical engine (time slicing, eigensolver,
//! imaginary-time propagation) that cross-validates every closed form.

pub mod cli;
pub mod dunkl_operators;
mod error;
pub mod linalg;
pub mod numerical_engine;
pub mod propagators;
pub mod special_functions;
pub mod spectrum;
pub mod validation;

pub use error::{DunklError, Result};
