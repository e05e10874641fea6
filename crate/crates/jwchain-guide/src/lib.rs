//! mdbook cannot run book snippets as tests, so each chapter is included
//! here as module documentation and `cargo test --doc` exercises every
//! `rust` code block. Chapters and doc-tests therefore cannot drift
//! apart: a snippet that stops compiling fails the workspace test run.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/basis.md")]
pub mod basis {}

#[doc = include_str!("../../../book/src/hamiltonians.md")]
pub mod hamiltonians {}

#[doc = include_str!("../../../book/src/ground_states.md")]
pub mod ground_states {}

#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}

#[doc = include_str!("../../../book/src/sign_rule.md")]
pub mod sign_rule {}

#[doc = include_str!("../../../book/src/two_particle.md")]
pub mod two_particle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
