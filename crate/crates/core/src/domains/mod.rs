//! Quadrature rules and orthonormal bases for the standard domains.
//!
//! | domain   | measure                  | `V`  | basis                     |
//! |----------|--------------------------|------|---------------------------|
//! | interval | `dx` on `[-1, 1]`        | 2    | normalized Legendre       |
//! | disc     | `(1/π) dx`               | 1    | ridge polynomials         |
//! | sphere   | area on `S²`             | 4π   | real spherical harmonics  |
//! | cube     | product Chebyshev weight | 1    | product Chebyshev         |
//!
//! Custom domains pair an externally computed rule with tabulated basis
//! values; see [`custom`].

pub mod cube;
pub mod custom;
pub mod disc;
pub mod interval;
pub mod sphere;

/// Slack allowed when testing membership of the closed domains.
pub(crate) const MEMBERSHIP_SLACK: f64 = 1e-12;
