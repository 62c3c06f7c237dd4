//! Exact enumerative combinatorics of alternating permutations.
//!
//! Everything this library computes, it computes at least twice: a
//! brute-force sweep over the permutations themselves, an exact
//! generating-function expansion, and — where one exists — a convolution
//! recurrence, with the results compared term by term. All arithmetic is
//! exact (arbitrary-precision rationals and Laurent polynomials); no
//! floating point appears anywhere.
//!
//! The pieces:
//!
//! - [`perm`]: permutations, alternation, symmetry maps, maxima/minima
//!   statistics, quadrant marked mesh patterns, partially ordered patterns,
//!   and direct backtracking generators.
//! - [`series`]: truncated formal power series over exact coefficient
//!   rings, with the calculus the closed forms need (reciprocal, exp/log,
//!   powers with polynomial exponents, variable scaling, integration).
//! - [`laurent`]: sparse Laurent polynomials in the marking variables `p`
//!   and `q`.
//! - [`dist`]: distributions of single statistics, joint marked-mesh-pattern
//!   statistics, and joint maxima/minima statistics on alternating
//!   permutations, each by brute force, closed form, and recurrence.
//! - [`springer`]: zigzag and Springer numbers, the reverse-complement-fixed
//!   permutation count, and the LLE/BE q- and (p,q)-analogues.
//! - [`pop`]: flat partially-ordered-pattern avoidance on alternating
//!   permutations and the occurrence-distribution table over all
//!   permutations.
//! - [`cli`]: the `altperm` command-line front end with its machine-readable
//!   verification records.

pub mod cli;
pub mod dist;
pub mod laurent;
pub mod perm;
pub mod pop;
pub mod series;
pub mod springer;

mod guide;

pub use laurent::LaurentPolynomial;
pub use perm::{AltClass, MmpSpec, Permutation, Pop, StatKind, Symmetry};
pub use series::{LaurentSeries, RationalSeries, TruncatedSeries};
