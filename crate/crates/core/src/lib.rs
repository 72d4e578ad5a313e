//! Exact construction of modular Macdonald functions.
//!
//! The crate works in the subring of symmetric functions generated by the
//! power sums `p_n` with `m ∤ n`, over the field `Q(ξ_m)(q)`, with the
//! deformed scalar product `⟨p_λ, p_μ⟩ = δ_{λμ} z_λ ε_λ`. It builds the
//! generalized complete functions `q_n`, the zero mode `X₀` of a vertex
//! operator, and the functions `Q_λ` (λ m-reduced) as its triangular
//! eigenvectors, and checks the supporting identities exactly.

pub mod cli;
pub mod error;
pub mod macdonald;
pub mod newton;
pub mod operator;
pub mod partitions;
pub mod scalars;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
pub use partitions::Partition;
