//! The driftlab guide, compiled.
//!
//! Each chapter of the book (`book/src/*.md`) is included here as a doc
//! module, so every Rust code block in the book runs under
//! `cargo test --doc -p driftlab-guide`. The book and the doctests cannot
//! drift apart: they are the same files.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/digits-and-counting.md")]
pub mod digits_and_counting {}

#[doc = include_str!("../../../book/src/error-term.md")]
pub mod error_term {}

#[doc = include_str!("../../../book/src/roots-of-unity.md")]
pub mod roots_of_unity {}

#[doc = include_str!("../../../book/src/bounded-case.md")]
pub mod bounded_case {}

#[doc = include_str!("../../../book/src/unbounded-case.md")]
pub mod unbounded_case {}

#[doc = include_str!("../../../book/src/certified-arithmetic.md")]
pub mod certified_arithmetic {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
