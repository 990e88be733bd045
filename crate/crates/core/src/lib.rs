//! Van der Waals interaction between two ground-state atoms in the presence of
//! magnetoelectric bodies.
//!
//! Units throughout: hbar = c = eps0 = mu0 = 1. Frequencies are measured in units
//! of a reference transition frequency and lengths in units of c over that
//! frequency, so a two-level atom with unit frequency and unit squared dipole
//! moment sets the scale of every result.

pub mod error;
pub mod figures;
pub mod greens;
pub mod materials;
pub mod potential;
pub mod ptverify;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use greens::{Geometry, GreenTensor, LayerStack};
pub use materials::{AtomModel, MaterialModel, Resonance};
pub use quadrature::{QuadResult, Tolerance};
pub use potential::{AtomPair, Energy, PotentialBreakdown, Scene};
