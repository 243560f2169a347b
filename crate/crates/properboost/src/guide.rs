//! The user guide, embedded chapter by chapter from the `book/` directory.
//!
//! Each submodule's documentation *is* the corresponding mdbook chapter
//! (`book/src/<chapter>.md`), pulled in with `include_str!`. Rust code
//! blocks inside the chapters therefore compile and run as documentation
//! tests, which keeps the rendered book and the actual library behavior in
//! lockstep: a chapter whose example bit-rots fails `cargo test`.
//!
//! Render the standalone book with `mdbook build book/` from the workspace
//! root, or read the same content right here in rustdoc.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/losses.md")]
pub mod losses {}

#[doc = include_str!("../../../book/src/datasets.md")]
pub mod datasets {}

#[doc = include_str!("../../../book/src/boosting.md")]
pub mod boosting {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
