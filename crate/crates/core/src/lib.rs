//! Knot invariants from parallel transport of braids.
//!
//! This crate computes an invariant of knots presented as braid closures.
//! The value lives in a quotient of the algebra of chord diagrams over the
//! circle. The pipeline is
//!
//! ```text
//!   braid word ──transport──▶ element of the truncated braid chord algebra
//!              ──closure────▶ element of the circle chord algebra
//!              ──quotient───▶ coordinates modulo 4T relations and the ideal (r±)
//! ```
//!
//! * [`braid`] — braid words, permutations, Markov moves, and the geometric
//!   realization as paths of distinct points in the complex plane.
//! * [`exact`] — exact rational vectors, matrices and row reduction; every
//!   algebraic quotient in this crate is computed without rounding.
//! * [`circle`] — chord diagrams on the circle up to rotation, and formal
//!   linear combinations of them.
//! * [`quotient`] — the 4T relations, graded bases of the diagram algebra,
//!   the ideal generated by `r±`, and the projection onto the quotient.
//! * [`horiz`] — chord diagrams over a braid (ordered words of strand
//!   pairs) and the closure map onto circle diagrams.
//! * [`kz`] — numerical parallel transport of the Knizhnik–Zamolodchikov
//!   connection in the truncated word algebra, with step-doubling error
//!   estimates, plus the exact closed form for powers of the 2-strand
//!   generator.
//! * [`invariant`] — the composite invariant, comparison verdicts, and the
//!   Markov-move verification harness.
//!
//! Scalars are exact rationals (`num::BigRational`) wherever the data is
//! rational — relation bases, the ideal, closed-form transports — and
//! complex doubles only for the numeric integration path.

pub mod braid;
pub mod circle;
pub mod exact;
pub mod geometry;
pub mod horiz;
pub mod invariant;
pub mod kz;
pub mod quotient;
pub mod scalar;

pub use braid::{BraidWord, ParseBraidError, Permutation};
pub use circle::{CircleDiagram, CircleElement};
pub use exact::{RationalMatrix, SubspaceBasis};
pub use geometry::BraidGeometry;
pub use horiz::{BraidElement, HorizontalDiagram};
pub use invariant::{ComparisonVerdict, InvariantValue, Verdict};
pub use kz::{transport, TransportResult};
pub use quotient::{GradedBasis, IdealBasis, QuotientBases};
pub use scalar::{Complex, Rational};
