//! Combinatorics of finite-alphabet phase retrieval on the cyclic group
//! `Z_N`: difference multisets, the dihedral action, homometric and
//! pseudo-equivalent ordered partitions, and the exact quadratic form of the
//! periodic autocorrelation.
//!
//! A signal whose entries come from an alphabet `α_1, …, α_K` is the same
//! thing as an ordered partition of `[0, N-1]` plus the letters. Its
//! autocorrelation is an integer quadratic form in the letters
//! ([`spectral::AutocorrForm`]); two partitions give the same form exactly
//! when they are homometric ([`classify::homometric_partitions`]).
//!
//! ```
//! use homometry_lab::{classify, OrderedPartition, RingSize};
//!
//! let n = RingSize::new(8)?;
//! let p = OrderedPartition::parse(n, "0,1,4|7|3|2,5,6")?;
//! let q = OrderedPartition::parse(n, "0,1,4|3|7|2,5,6")?;
//! let t = classify::classify_pair(&p, &q)?;
//! assert_eq!(t.class, classify::PairClass::PseudoOnly);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod classify;
pub mod diffsets;
pub mod dihedral;
pub mod domain;
pub mod error;
pub mod experiments;
pub mod relation;
pub mod spectral;

pub use domain::{
    make_partition, Alphabet, DihedralElement, DistanceMultiset, OrderedPartition, ParseError,
    RingSize, Signal, SubsetMask,
};
pub use error::{Error, Result};
pub use spectral::AutocorrForm;
