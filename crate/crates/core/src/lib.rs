//! Finite-dimensional model of irregular translates of bandlimited generators.
//!
//! Everything lives in the frequency domain: a translate `T_λ φ` is held as
//! `e_λ · φ̂` sampled on a midpoint grid over a bounded set `E`. In that model
//! the operator identities relating exponential systems `{e_λk χ_E}` and
//! translate systems `{T_λk φ}` are exact matrix identities, so every constant
//! the library reports (frame bounds, Gram certificates, dual residuals) can be
//! cross-checked against brute-force linear algebra.

pub mod bounds;
pub mod duals;
pub mod error;
pub mod generators;
pub mod gramian;
pub mod grid;
pub mod linalg;
pub mod operators;
pub mod tolerances;

pub use bounds::{
    bound_sandwich_check, bound_transfer_check, equivalence_certificate, exactness_bridge, exactness_check,
    frame_bounds, FrameBounds,
};
pub use duals::{
    canonical_dual_exponentials, canonical_dual_translates, dual_operator_identities, inv_sqrt_frame_operator,
    parseval_system, tight_dual_generator, tight_parseval_generator, tight_parseval_scalings, DualKind, DualMethod,
    DualSystem, InvSqrtFrameOperator, ScalingCheck,
};
pub use error::{Error, Result};
pub use generators::{make_generator, phi_hat_transform, pseudo_gramian, Generator, GeneratorKind, TransformMode};
pub use gramian::{
    bessel_necessary_check, gram_matrix, riesz_diagonal_dominance, schur_bessel_certificate, Certificate, GramMatrix,
    Provenance, TranslateSet, Verdict,
};
pub use grid::{build_grid, exponential_vector, inner_product, BoundedSet, FrequencyGrid, GridVector};
pub use operators::{
    exponential_system, multiplication_operator, translate_system, verify_factorizations, IdentityResidual,
    MultiplicationOperator, SystemKind, SystemMatrices,
};
pub use tolerances::Tolerances;

/// Complex sample type used throughout.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type C64 = nalgebra::Complex<f64>;
