//! Numerical implementation of hyperelastic materials from the strain energy
//! function alone.
//!
//! A user supplies the scalar energy density Psi(F); the kernel turns it into
//! Cauchy stress and the Jaumann-rate tangent modulus by two stages of
//! one-sided difference quotients, with no analytical derivation. The rest of
//! the crate is the verification machinery around that kernel:
//!
//! - [`materials`]: Neo-Hookean (with closed-form stress and tangent as the
//!   oracle) and the two-fiber Holzapfel artery model, plus a
//!   central-difference Richardson oracle for models without closed forms.
//! - [`sweep`]: the perturbation-size grid search scoring stress and tangent
//!   accuracy by fraction of variance unexplained over three isochoric load
//!   paths.
//! - [`element`]: single-element load programs solved at a material point by
//!   Newton iteration on zero-traction conditions, comparing numerical and
//!   analytic constitutive evaluation.
//! - [`inflation`]: incompressible thick-walled cylinder inflation with the
//!   anisotropic wall evaluated through the kernel.

// Index loops over fixed 3x3 and 6x6 ranges mirror the tensor index notation
// and stay.
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod element;
pub mod error;
pub mod inflation;
pub mod kernel;
pub mod materials;
pub mod sweep;
pub mod tensor;

pub use error::{Error, Result};
pub use kernel::{
    cauchy_stress, jaumann_to_oldroyd, numerical_pk2, oldroyd_to_jaumann, perturb_for_stress,
    perturb_for_tangent, tangent_jaumann, tangent_jaumann_with, EnergyModel, PerturbationParams,
    TangentWeighting,
};
pub use materials::{richardson_stress_oracle, AnalyticModel, Holzapfel, NeoHookean};
pub use tensor::{push_forward, voigt_pack, voigt_unpack, BasisDyad, TangentVoigt, Tensor2};
