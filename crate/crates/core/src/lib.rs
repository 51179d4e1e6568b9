//! Symbolic machinery for mild pro-p presentations.
//!
//! The crate expands free pro-p group words through the Magnus embedding
//! `x_i -> 1 + X_i` into truncated noncommutative power series over `F_p`,
//! extracts highest terms under the degree-then-lexicographic order, decides
//! combinatorial freeness of monomial families (including families with a
//! parametric member `X_a X_b^n X_c`), and evaluates the Poincare series
//! `(1 - d t + sum_i t^{n_i})^{-1}` of the quotient algebra. An arithmetic
//! front end computes linking matrices of tame primes over `Q` and the
//! degree-two initial forms of Koch's relations.
//!
//! Modules:
//! - [`series`]: monomials, the monomial order, truncated series over `F_p`.
//! - [`magnus`]: group words, their grammar, and the Magnus expansion.
//! - [`combinatorics`]: submonomials, overlaps, freeness verdicts, cut pairs,
//!   and the normal-word counting automaton.
//! - [`poincare`]: exact integer power series and the mild Poincare formulas.
//! - [`arithmetic`]: tame primes, power residues, linking matrices, rank
//!   formulas and constrained prime search.
//! - [`document`] and [`pipeline`]: the presentation file format and the
//!   report builders behind the `mildcut` command line tool.

pub mod arithmetic;
pub mod combinatorics;
pub mod document;
pub mod error;
pub mod magnus;
pub mod pipeline;
pub mod poincare;
pub mod series;

pub use error::{Error, Result};
