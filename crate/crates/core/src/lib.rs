//! Exact and numerical verification of hybrid quantum-classical dynamics.
//!
//! * [`algebra`]: normal-ordered observables, quantum/Poisson/hybrid
//!   brackets, the truncated star product and its `C_n` coefficients.
//! * [`nogo`]: the inductive bracket-table construction that shows no Lie
//!   bracket obeys the decoupling axioms.
//! * [`planewave`]: floating-point checks of the plane-wave structure
//!   function formalism.
//! * [`hybridfield`]: propagators, spectral residues, reflection positivity
//!   and the Langevin simulation of two coupled quadratic fields.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod error;
pub mod hybridfield;
pub mod nogo;
pub mod planewave;
pub mod scalar;

pub use algebra::{BracketKind, Dims, Monomial, Observable, Sector, Var};
pub use error::{AlgebraError, FieldError, NoGoError};
pub use scalar::{Coeff, GaussianRational, Scalar};
