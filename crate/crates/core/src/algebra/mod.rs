//! Graded-commutative rings over ℚ and Laurent series in `t` over them.

mod laurent;
mod ring;

pub use laurent::LaurentElement;
pub use ring::{koszul_sign, surface, truncated_polynomial, Product, RingElement, RingPresentation, MAX_RING_RANK};
