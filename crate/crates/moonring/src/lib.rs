//! Exact arithmetic for integral representation rings of small cyclic
//! subgroups of the Monster, and for the q-series attached to them.
//!
//! The crate has six layers, each usable on its own:
//!
//! - [`series`]: Laurent series and truncated bivariate series over
//!   arbitrary-precision rationals, with explicit truncation tracking.
//! - [`modfun`]: q-expansions of Delta, E4, j, and the Hauptmodul catalog
//!   for classes 1A, 2A, 2B, 3A, 4A, 4B, 6A, plus power maps.
//! - [`greenring`]: finite-basis commutative rings with integer structure
//!   constants (Green rings), exterior powers, Adams operations via the
//!   Newton recursion, and restriction maps.
//! - [`homfinder`]: complete enumeration of integer-valued ring
//!   homomorphisms from a Green ring to the complex numbers.
//! - [`decomp`]: indecomposable multiplicities of the graded Moonshine
//!   module for 4A, the 4B free-part series, and the 6A feasibility solver.
//! - [`quasirep`]: replicate families, Hecke-style bracket series, the
//!   bivariate exponential, and the quasi-replicability vanishing check.
//!
//! Everything is immutable after construction and all arithmetic is exact;
//! no operation ever rounds.

pub mod decomp;
pub mod greenring;
pub mod homfinder;
pub mod modfun;
pub mod quasirep;
pub mod series;
pub mod verify;

pub use decomp::{Decomposition, FeasibilityInterval};
pub use greenring::{GreenRing, RingElement};
pub use homfinder::{Character, CharacterTag};
pub use modfun::{ClassLabel, HauptmodulCatalog, PowerMap};
pub use quasirep::{QuasiRepReport, ReplicateFamily};
pub use series::{BiSeries, LaurentSeries, Rational};
