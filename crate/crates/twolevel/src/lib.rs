//! Exact rational toolkit for binary pair configurations and 2-level
//! polytopes.
//!
//! A *binary pair configuration* is a pair of point sets `A`, `B` in `Q^d`
//! with every scalar product `<a, b>` in `{0, 1}`. When both sets linearly
//! span the space, the product of their sizes is at most `(d+1)·2^d`; for a
//! 2-level polytope the vertex and facet counts satisfy
//! `f_0 · f_{d-1} <= d·2^{d+1}`. This crate validates configurations,
//! completes them to inclusion-maximal ones, replays the inductive argument
//! behind the bound on concrete instances as a machine-checkable certificate,
//! enumerates polytope facets exactly, and cross-checks everything with
//! brute-force oracles at desk scale.
//!
//! All arithmetic is exact: the scalar type is an arbitrary-precision
//! rational, and no floating point appears anywhere.

pub mod config;
pub mod error;
pub mod exactlin;
pub mod graph;
pub mod oracle;
pub mod polytope;
pub mod prooftrace;

pub mod cli;

pub use error::{Error, Result};

/// The scalar used by every concrete computation in this crate.
pub type Rational = num_rational::BigRational;

/// A point or direction over [`Rational`] coordinates.
pub type RVector = exactlin::Vector<Rational>;

/// A matrix over [`Rational`] entries.
pub type RMatrix = exactlin::Matrix<Rational>;

/// A linear subspace of `Q^d` given by an independent basis.
pub type RSubspace = exactlin::Subspace<Rational>;
