//! Constructive extension of restricted-step difference equations.
//!
//! Given steps restricted to an open interval, a p-adic ball complement or
//! a short negative interval (equal-step case), the generators rewrite an
//! arbitrary target difference as a signed combination of admissible
//! instances. [`verify_certificate`] rechecks membership and the exact
//! functional identity without reusing generator arithmetic.

mod certificate;
mod domain;
mod generators;
pub mod soundness;

pub use certificate::{verify_certificate, Diagnostic, ExtensionCertificate, Instance, Provenance, Verdict};
pub use domain::{HypothesisDomain, StepDomain};
pub use generators::{
    equal_step_extension_certificate, equal_step_hypothesis, minimal_telescope_exponent, mixed_extension_certificate,
    order1_terms, padic_auxiliary_step, padic_order1_certificate, padic_order1_terms, real_chain_length,
    real_order1_certificate, real_order1_terms, telescoping_padic_certificate, telescoping_terms, Budgets, Order1Term,
    Side,
};
