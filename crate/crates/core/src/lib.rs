//! Fractional cross-intersecting families of subsets of `[n]`.
//!
//! A pair of families `(A, B)` is `c/d`-cross-intersecting when every
//! `A ∈ A` meets every `B ∈ B` in exactly `(c/d)|B|` elements. This crate
//! provides:
//!
//! - GF(2) linear algebra on packed subsets ([`gf2`]),
//! - the cross-intersection predicate, the bit-append lift and the audit of
//!   the `|A||B| ≤ 2^n` chain ([`family`]),
//! - generators for the extremal pairs ([`construct`]),
//! - structural checks and atom decomposition of maximal bisecting pairs
//!   ([`structure`]),
//! - an exhaustive, sharded search engine with canonical forms ([`search`]),
//! - the command-line front end ([`cli`]).

pub mod cli;
pub mod construct;
pub mod error;
pub mod family;
pub mod format;
pub mod gf2;
pub mod search;
pub mod structure;

pub use error::{Error, Result};
pub use family::{CrossPair, Fraction, SetFamily};
pub use gf2::{BitVector, LinearCode};
