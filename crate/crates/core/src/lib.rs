//! Upper bounds on the entanglement of cloning and the entanglement of
//! deleting for two-qubit pure states `a|00⟩ + b|11⟩`.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, a Jacobi Hermitian eigensolver,
//!   matrix functions, tensor products, factor permutation and partial trace.
//! - [`qstate`]: labeled states and kets, Schmidt decomposition, von Neumann
//!   and relative entropies, pure-state entanglement.
//! - [`cloning`]: the universal symmetric cloner applied locally by both
//!   parties, the resulting two-qubit copy and the cloning bound.
//! - [`deleting`]: the swap deleter and its bound, the global deleting
//!   construction and the Schmidt-rank obstruction to local deleting.
//! - [`nogo`]: measure-and-forget dilation and the distillable-entanglement
//!   argument against local cloning.
//! - [`variational`]: Nelder–Mead searches over local unitaries that
//!   tighten (or at worst reproduce) the analytic bounds.
//!
//! All entropies are in bits. An infinite relative entropy is reported as
//! `f64::INFINITY`.

#![forbid(unsafe_code)]

pub mod cloning;
pub mod deleting;
pub mod linalg;
pub mod nogo;
pub mod qstate;
pub mod variational;

mod error;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEigenSystem};
pub use qstate::{Ket, LabeledState, SchmidtDecomposition, SchmidtPair};
