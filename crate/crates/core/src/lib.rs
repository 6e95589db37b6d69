//! Heat kernels and Ihara-type zeta functions on `(q+1)`-regular graphs.
//!
//! The crate is `no_std` and needs only `alloc`. Every quantity is computed
//! along at least two independent routes so callers can cross-check:
//! Bessel series against quadrature, geodesic-count series against the
//! Laplacian spectrum and time integration, and counted zeta coefficients
//! against the Euler product, the determinant formula and spectral measures.

#![no_std]

#[cfg(test)]
extern crate std;

extern crate alloc;

pub mod bessel;
pub mod error;
pub mod graph;
pub mod heat_graph;
pub mod heat_tree;
pub mod ode;
pub mod quadrature;
pub mod series;
pub mod zeta;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
