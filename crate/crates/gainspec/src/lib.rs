//! Energy of complex unit gain graphs on dumbbells.
//!
//! A dumbbell `D_{r,s,l}` is two vertex-disjoint cycles `C_r`, `C_s` joined
//! by a path with `l` edges. Assigning unit-modulus complex gains to the
//! edges turns it into a gain graph whose Hermitian adjacency matrix has a
//! real spectrum; the energy is the sum of the absolute eigenvalues. Up to
//! switching, the energy depends only on the two cycle gains, so the whole
//! problem lives on `(alpha, beta) in [-1,1]^2`.
//!
//! The crate computes that energy by two independent routes:
//!
//! * [`graphs::energy_eig`] — build the Hermitian adjacency matrix and sum
//!   the absolute eigenvalues (the ground-truth oracle);
//! * [`coulson::coulson_energy`] — evaluate the Coulson integral with a
//!   closed-form kernel per parity case, assembled from exact
//!   integer matching polynomials ([`matchpoly`], [`charpoly`]).
//!
//! On top of the two routes, [`search`] runs the grid-plus-refinement
//! extremal search over `(alpha, beta)`, checks each parity case against
//! its predicted extremizers, and scans odd-odd-odd triples for minima that
//! beat the origin. The `gainspec` binary exposes all of it on the command
//! line.

// Parity tests stay in literal `% 2` form to mirror the sign
// definitions they implement.
#![allow(clippy::manual_is_multiple_of, clippy::manual_div_ceil)]

pub mod charpoly;
pub mod cli;
pub mod coulson;
mod error;
pub mod graphs;
pub mod matchpoly;
pub mod search;

pub use error::{Error, Result};
