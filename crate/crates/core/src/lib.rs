//! Exact computation of Newton-Okounkov bodies, Okounkov functions (concave
//! transforms of geometric valuations) and their integrals for explicit
//! linear series on model varieties: the projective line, the projective
//! plane, and blow-ups of the plane at one or two points.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating point anywhere in the crate. Asymptotic quantities are reported
//! as (certified one-sided bound, estimate) pairs rather than bare limits.

pub mod boundary;
pub mod error;
pub mod exact;
pub mod filtration;
pub mod function;
pub mod geometry;
pub mod integrals;
pub mod okbody;
pub mod poly;
pub mod properties;
pub mod scenarios;
pub mod semigroup;
pub mod series;
pub mod valuation;

pub use error::CoreError;
pub use exact::{rat, ratq, Matrix, Rat};
pub use filtration::{JumpingProfile, ValuationSpec};
pub use geometry::{ConcavePL, Point, Polytope, QuadraticCapBody};
pub use okbody::OkounkovBodyApprox;
pub use series::{DivisorClass, GeometrySpec, LinearSeries, SeriesFamily};
pub use valuation::FlagVector;
