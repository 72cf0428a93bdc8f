//! Exact computations on abelian cellular automata over finite abelian groups.

pub mod builtins;
pub mod ca;
pub mod error;
pub mod group;
pub mod io;
pub mod modular;
pub mod sample;
pub mod solitons;
pub mod spectral;

pub use ca::{AbelianCA, DependencyTable, FiniteConfiguration, PeriodicConfiguration};
pub use error::{Error, Result};
pub use group::{Endomorphism, GroupElement, GroupSpec, PhaseValue};
