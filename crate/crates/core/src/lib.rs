//! Exact computation of the intersection cohomology of symplectic
//! quotients by a circle, from the fixed-point data of the action.
//!
//! The input is an [`Instance`]: the fixed components of a Hamiltonian
//! `S¹` action (moment values, normal weights, cohomology rings,
//! equivariant Euler classes) together with a basis of equivariant classes
//! given by their restrictions to the components. From it the
//! [`engine`] produces Betti numbers, pairing matrices and a ring
//! presentation of `IH*(Φ⁻¹(c)/S¹)`, all over ℚ.

pub mod algebra;
pub mod engine;
pub mod error;
pub mod instances;
pub mod linalg;
pub mod model;
pub mod rational;

pub use algebra::{LaurentElement, RingPresentation};
pub use engine::{IHPresentation, KernelReport, Mode, Reduction};
pub use error::{AlgebraError, BuildError, DocumentError, EngineError, ModelError};
pub use model::{EquivariantClass, FixedComponent, IndexRule, Instance, Side, Weight};
pub use rational::Rational;
