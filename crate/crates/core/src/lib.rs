//! Exact operator calculus on finite vector-lattice models.
//!
//! The model is `E = ℚ^S` for a finite point set `S` with strictly positive
//! weights. Every scalar is an exact rational, so lattice suprema, operator
//! moduli, and band projections are computed without rounding. The crate
//! covers:
//!
//! - coordinatewise lattice structure, disjointness, and the Boolean algebra
//!   of fragments of an element ([`element`], [`fragments`]);
//! - order projections and Boolean homomorphisms between projection algebras,
//!   represented by point maps ([`proj`]);
//! - a small closed expression language for one-variable kernels with an
//!   exact evaluator ([`expr`]);
//! - orthogonally additive operators in kernel form, together with the
//!   brute-force lattice calculus over disjoint decompositions that serves
//!   as the ground-truth oracle ([`operator`]);
//! - atomic operators, their pointwise lattice formulas, and the band
//!   projection onto the atomic band ([`atomic`]);
//! - superposition and shift operators, the convergence-in-measure metric,
//!   and the factorization of atomic operators through a shift
//!   ([`superposition`]);
//! - lateral ideals and the minimal extension of positive orthogonally
//!   additive maps ([`lateral`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); IO, document formats,
//! and the command-line front end live in the companion `latop-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod atomic;
pub mod element;
pub mod error;
pub mod expr;
pub mod fragments;
pub mod lateral;
pub mod operator;
pub mod proj;
pub mod rat;
pub mod sample;
pub mod space;
pub mod superposition;

pub use element::Element;
pub use error::Error;
pub use expr::Expr;
pub use operator::KernelOperator;
pub use proj::{BooleanHom, OrderProjection};
pub use rat::Rat;
pub use space::Space;

/// Default cap on `|supp(x)|` for fragment/decomposition enumeration (2^n sets).
pub const DEFAULT_SUPPORT_CAP: usize = 20;
/// Default cap on the point count for exhaustive Boolean-algebra checks.
pub const DEFAULT_ALGEBRA_CAP: usize = 6;
/// Default cap on the point count for set-partition enumeration.
pub const DEFAULT_PARTITION_CAP: usize = 6;
