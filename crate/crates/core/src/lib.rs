//! Numerical study of monotone mass functionals on rotationally symmetric
//! Riemannian 3-manifolds with a positive (or any) cosmological constant.
//!
//! The crate is organised bottom-up: generic kernels in [`numerics`], special
//! functions in [`specfun`], radial metrics in [`geometry`], radial
//! p-Green's functions in [`pgreen`], the structural coefficients in
//! [`structural`], mass functionals in [`mass`], the check registry in
//! [`verify`] and the command-line front end in [`cli`].

pub mod cli;
pub mod error;
pub mod geometry;
pub mod mass;
pub mod numerics;
pub mod pgreen;
pub mod specfun;
pub mod structural;
pub mod verify;

pub use error::{Error, Result};
