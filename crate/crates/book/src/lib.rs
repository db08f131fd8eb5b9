//! The guide in `book/` is written in mdBook format. Each chapter is pulled
//! in here so `cargo test` runs its Rust snippets.

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/partitions.md")]
pub mod partitions {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/fock.md")]
pub mod fock {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/subordination.md")]
pub mod subordination {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}
