//! The guide in `book/` is plain mdbook, which cannot run snippets that
//! depend on workspace crates. Each chapter is pulled in here as the docs of
//! an empty module so `cargo test --doc` compiles and runs every block.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/sequences.md")]
pub mod sequences {}

#[doc = include_str!("../../../book/src/linear-algebra.md")]
pub mod linear_algebra {}

#[doc = include_str!("../../../book/src/schemes.md")]
pub mod schemes {}

#[doc = include_str!("../../../book/src/automata.md")]
pub mod automata {}

#[doc = include_str!("../../../book/src/refutations.md")]
pub mod refutations {}

#[doc = include_str!("../../../book/src/synchronized.md")]
pub mod synchronized {}

#[doc = include_str!("../../../book/src/report.md")]
pub mod report {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
