//! Exact finite-difference calculus over ℚ, ℚ(√d) and ℚ seen inside ℚ_p.
//!
//! The crate turns restricted-step extension results for Fréchet's equation
//! `Δ_{h_1⋯h_s} f(x) = 0` into [`extension::ExtensionCertificate`]s: exact
//! signed combinations of hypothesis-domain difference instances whose
//! point-mass expansion equals an arbitrary target difference. Certificates
//! are checked by an independent verifier that re-expands every instance.

pub mod arith;
pub mod campaign;
pub mod cli;
pub mod difference;
pub mod error;
pub mod extension;
pub mod gallery;
pub mod interpolation;

pub use error::{Error, Result};
