//! Strongly matricially free convolutions of arrays of laws.
//!
//! Three engines compute the same moments: a sum over colored non-crossing
//! partitions ([`moments`]), a truncated Fock-space model ([`fock`]), and
//! subordination recursions on power series ([`analytic`]).

pub mod analytic;
pub mod cells;
pub mod error;
pub mod fock;
pub mod matricial;
pub mod moments;
pub mod partitions;
pub mod scalar;
pub mod series;

pub use cells::{Cell, Color, Shape};
pub use error::{Error, Result};
pub use moments::DistributionArray;
pub use scalar::{Coeff, Precision, Scalar};
pub use series::TruncatedSeries;
