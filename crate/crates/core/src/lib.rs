//! Gonosomal algebras and the dynamics of their evolution operators.
//!
//! A gonosomal algebra of type `(n, ν)` models sex-linked inheritance with
//! `n` female and `ν` male genetic types. The crate covers:
//!
//! * [`algebra`]: structure constants, products, ϖ, basis changes, the opposite algebra;
//! * [`identities`]: witness searches for failed algebraic identities;
//! * [`dynamics`]: the operators `W(z) = ½z²` and `V = W / ϖ∘W`, trajectories, bound checks;
//! * [`fixed_points`]: closed-form and Newton fixed points, Jacobians, stability;
//! * [`scenarios`]: the sex-linked lethal-gene models and their predicted limits.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common double-precision case.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod fixed_points;
pub mod identities;
pub mod linalg;
pub mod scalar;
pub mod scenarios;

pub use algebra::{AlgebraFile, AlgebraSpec, BasisChange, Element, ValidationReport, Violation};
pub use dynamics::{IterationOptions, Operator, Outcome, Trajectory};
pub use error::{GonosomalError, Result};
pub use fixed_points::{FixedPointRecord, Stability};
pub use identities::{IdentityReport, Verdict};
pub use linalg::{Eigenvalue, Matrix};
pub use scalar::Scalar;
pub use scenarios::Scenario;

/// Double-precision algebra.
pub type Algebra = AlgebraSpec<f64>;
/// Single-precision algebra.
pub type Algebra32 = AlgebraSpec<f32>;
/// Double-precision state `(x, y)`.
pub type State = Element<f64>;
/// Single-precision state.
pub type State32 = Element<f32>;
