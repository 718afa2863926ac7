//! Numerical toolkit for the non-scattering analysis of planar star-shaped
//! scatterers with constant refractive index q > 1.
//!
//! The crate has two halves that deliberately do not share code paths:
//!
//! - closed-form machinery: boundary jets of radius functions, stationary
//!   points of the boundary phase with their branch structure, Hessian data,
//!   and the leading-order stationary-phase value of the non-scattering
//!   integrals;
//! - brute-force oracles: tensor-product periodic-trapezoid quadrature of the
//!   same integrals, an independent area-form route, and Bessel machinery for
//!   the centered disk, used to validate every asymptotic claim.
//!
//! See the individual modules for the mathematical conventions. Angles are
//! normalized to [0, 2*pi) at API boundaries; x^perp denotes the
//! counterclockwise rotation (-x_2, x_1); the boundary parametrization is
//! counterclockwise with outward normal -y'^perp/|y'|.

pub mod angles;
pub mod asymptotics;
pub mod density;
pub mod disk;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod stationary;
mod vec2;

pub use error::{Error, Result};
pub use vec2::Vec2;

/// Complex number alias used throughout.
pub type Complex = num_complex::Complex64;
