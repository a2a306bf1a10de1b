//! mdbook cannot run listings that depend on a local crate, so each chapter
//! is pulled in here and `cargo test --doc` runs its snippets. One module per
//! chapter keeps failures traceable to a file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/characters.md")]
pub mod characters {}
#[doc = include_str!("../../../book/src/families.md")]
pub mod families {}
#[doc = include_str!("../../../book/src/correlation.md")]
pub mod correlation {}
#[doc = include_str!("../../../book/src/bound.md")]
pub mod bound {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
