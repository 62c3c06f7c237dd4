//! The narrative guide, attached chapter by chapter as module
//! documentation so that every code block in the book compiles and runs
//! under `cargo test --doc`. The rendered version lives in `book/` at the
//! repository root (`mdbook build book`).

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/permutations.md")]
pub mod permutations {}

#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}

#[doc = include_str!("../../../book/src/single-distributions.md")]
pub mod single_distributions {}

#[doc = include_str!("../../../book/src/joint-distributions.md")]
pub mod joint_distributions {}

#[doc = include_str!("../../../book/src/springer.md")]
pub mod springer {}

#[doc = include_str!("../../../book/src/pops.md")]
pub mod pops {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
