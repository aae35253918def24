//! The narrative guide, compiled.
//!
//! Each chapter of the `book/` directory is attached here as module
//! documentation, so every code snippet in the book is built and run by
//! `cargo test --doc` and the guide cannot drift from the library.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}

#[doc = include_str!("../../../book/src/surfaces.md")]
pub mod surfaces {}

#[doc = include_str!("../../../book/src/invariant.md")]
pub mod invariant {}

#[doc = include_str!("../../../book/src/cylinders.md")]
pub mod cylinders {}

#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}

#[doc = include_str!("../../../book/src/enumeration.md")]
pub mod enumeration {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
