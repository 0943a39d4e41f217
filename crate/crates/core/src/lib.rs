//! Exact computations on finite rings that are unions of proper subrings.
//!
//! * [`ring`]: rings given by structure constants, and elementary constructions.
//! * [`lattice`]: subrings, ideals, quotients, Jacobson radical, isomorphisms.
//! * [`covering`]: good 4-tuples, covering numbers and the three-subring criterion.
//! * [`classify`]: exhaustive classification of good rings of order 4 and 8.
//! * [`catalog`]: the ten explicit good rings built from matrix generators.
//! * [`gf`], [`matrix`], [`counting`]: finite fields, matrices and counting functions.
//! * [`matring`]: maximal subrings and minimal covers of full matrix rings `M_n(q)`.

pub mod abelian;
pub mod bitset;
pub mod budget;
pub mod catalog;
pub mod classify;
pub mod counting;
pub mod covering;
pub mod error;
pub mod gf;
pub mod lattice;
pub mod matring;
pub mod matrix;
pub mod ring;
pub mod setcover;

pub use bitset::ElemSet;
pub use budget::Budget;
pub use error::{Error, Result};
pub use ring::{make_ring, Elem, FiniteRing, RingFile};
