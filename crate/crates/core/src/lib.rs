//! Entanglement criteria and collective Bell tests for bipartite density matrices.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, Kronecker products, qubit permutations,
//!   a Jacobi Hermitian eigensolver and Gram-Schmidt.
//! - [`states`]: Werner, Gisin-type and singlet-plus-polarized families, plus the
//!   JSON interchange format.
//! - [`separability`]: partial transpose, the PPT test, partial traces and the
//!   purity (alpha = 2 entropy) test.
//! - [`bell`]: correlation matrix `T`, the CHSH maximum `2 sqrt(M)` and explicit
//!   optimal settings.
//! - [`collective`]: `n`-pair product states, local filter rows and spin-up
//!   postselection.
//! - [`optimizer`]: multistart ascent over filter rows and the Fig.-1 style scan.
//! - [`thresholds`]: bisection of criterion thresholds for the standard families.

pub mod bell;
pub mod collective;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod separability;
pub mod states;
pub mod thresholds;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use states::BipartiteState;
