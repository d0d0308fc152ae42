//! Reproducing kernels of Kepler manifolds attached to simple Jordan triples,
//! together with the Jack-polynomial, hypergeometric and asymptotic machinery
//! needed to evaluate them.

pub mod asymptotics;
pub mod cone_measures;
pub mod error;
pub mod hyper_series;
pub mod jack_poly;
pub mod jordan_core;
pub mod kepler_kernels;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
pub use jordan_core::{JordanType, KeplerRank, LogValue, Partition};
