//! Spectral engine for relativistic quantum rigid bodies.
//!
//! The crate builds Klein-Gordon and Dirac gyroscope operators on finite
//! angular-momentum bases, evaluates their closed-form energies and checks
//! each one against brute-force diagonalization. A classical covariant
//! kinematics module validates the Lorentz-invariant rigid-body construction
//! the quantum operators are derived from.
//!
//! Module map:
//!
//! - [`operator_algebra`]: dense complex matrices, Kronecker products and a
//!   cyclic Jacobi Hermitian eigensolver used as the oracle everywhere else.
//! - [`angular_momentum`]: `L_i` on `|l,m⟩`, spin one-half and the Dirac-space
//!   block matrices `β_i`, `α_i`.
//! - [`kg_gyroscope`]: Klein-Gordon gyroscope at the center of mass.
//! - [`dirac_gyroscope`]: Dirac gyroscope, abelian and non-abelian inertia roots.
//! - [`covariant`]: four-vectors, boosts, Jacobi coordinates, covariant inertia,
//!   Pauli-Lubanski vector and the invariant mass-shell form.
//! - [`cli`]: spectrum tables, validation report and parameter scans.

pub mod angular_momentum;
pub mod cli;
pub mod covariant;
pub mod dirac_gyroscope;
pub mod error;
pub mod kg_gyroscope;
pub mod operator_algebra;

pub use error::{Error, Result};
pub use kg_gyroscope::{GyroParams, LineLabels, Sign, SpectralLine};
pub use operator_algebra::{eig_hermitian, hermiticity_residual, kron, EigenDecomposition, OperatorMatrix};
