//! Optomechanical membrane-in-the-middle simulator in truncated Fock space:
//! intensity-dependent cavity–membrane coupling, nonlinear coherent states,
//! cat superpositions, nonclassicality metrics, and cavity-damping effects.

pub mod damping;
pub mod error;
pub mod evolution;
pub mod fockspace;
pub mod nonlinearity;
pub mod observables;
pub mod params;
pub mod states;

pub use error::{Error, Result};
