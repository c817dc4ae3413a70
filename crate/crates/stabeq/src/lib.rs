//! stabeq: an exact-arithmetic symbolic toolkit for polynomial rings.
//!
//! The crate provides sparse rational polynomial arithmetic together with the
//! machinery built on top of it: Jacobian tests for algebraic dependence,
//! z-reduction of polynomial pairs, locally nilpotent Jacobian derivations,
//! a desk-scale Buchberger engine, gradient-zero-set obstructions to (stable)
//! equivalence, and a presentation-rewriting engine that replays the explicit
//! isomorphism chain for Danielewski surfaces.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! integers; geometric statements (zero sets over the algebraic closure) are
//! decided ideal-theoretically, never numerically.

pub mod context;
pub mod degree;
pub mod expr;
pub mod monomial;
pub mod order;
pub mod jacobian;
pub mod poly;
pub mod reduction;

pub use context::{ContextError, VariableContext};
pub use degree::Degree;
pub use expr::{format_polynomial, parse_map, parse_polynomial, MapParseError, ParseError};
pub use monomial::Monomial;
pub use order::{MonomialOrder, OrderKind};
pub use poly::{frac, rat, PolyError, PolyMap, Polynomial};
