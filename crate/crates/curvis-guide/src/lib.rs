//! The `curvis` guide, mirrored from the mdBook sources in `book/`.
//!
//! Each chapter is attached here as module documentation so that every Rust
//! snippet in the book compiles and runs under `cargo test --doc`; the
//! rendered book and the tested examples can never drift apart.
#![doc = include_str!("../../../book/src/introduction.md")]

#[doc = include_str!("../../../book/src/visibility.md")]
pub mod visibility {}

#[doc = include_str!("../../../book/src/base-sets.md")]
pub mod base_sets {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting {}

#[doc = include_str!("../../../book/src/densities.md")]
pub mod densities {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
