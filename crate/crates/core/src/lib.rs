//! Exact combinatorics of the stationary state of the two-parameter
//! asymmetric simple exclusion process (ASEP).
//!
//! The normalisation `Z_L` of the ASEP stationary distribution can be written
//! as a weighted sum over four different families of lattice paths, each one
//! the transfer-matrix picture of one representation of the `DEHP` algebra
//! `D + E = DE`, `WE = (1/alpha) W`, `DV = (1/beta) V`.  This crate implements
//!
//! * exact multivariate polynomial arithmetic in the weight variables
//!   (`abar`, `bbar`, `kappa`, `c`, `d`) — [`symbolic`];
//! * the lattice path data model and the structural factorisations the maps
//!   are built on — [`pathcore`];
//! * validity predicates, exhaustive enumerators and weight functions for the
//!   path families `R1`, `R2`, `R3`, `R4` and their intermediate forms —
//!   [`models`];
//! * the weight-preserving bijections and sign-reversing involutions
//!   connecting `R1`, `R2`, `R3` to the one-transit (`R4`) paths —
//!   [`transforms`];
//! * truncated matrix representations, transfer-matrix computation of `Z_L`,
//!   the matrix product ansatz and the exact Markov-chain stationary solve —
//!   [`algebra`];
//! * named verification suites over all of the above — [`verify`].
//!
//! Everything is exact: integer polynomial coefficients are arbitrary
//! precision and probabilities are rationals.  No floating point is used
//! anywhere.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod models;
pub mod pathcore;
pub mod symbolic;
pub mod transforms;
pub mod verify;

pub use pathcore::{LabeledPath, Path, StepLabel, VertexLabel};
pub use symbolic::{Polynomial, Rational, Var};
