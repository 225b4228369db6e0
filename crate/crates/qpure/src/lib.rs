//! qpure: purifying and reversible quantum processes on finite-dimensional
//! states.
//!
//! The crate constructs and analyzes completely positive trace-preserving
//! maps whose outputs on a designated pair or set of states are pure, and
//! maps whose action can be undone on that set:
//!
//! * [`matcore`] — dense complex linear algebra with a deterministic
//!   decomposition convention and an explicit tolerance policy,
//! * [`states`] — density operators, supports, purity, trace distance, and
//!   seeded random state generation,
//! * [`channels`] — Kraus-form channels, composition, Stinespring dilation,
//!   and structural constructions,
//! * [`geometry`] — Jordan bases and angles between supports and the
//!   worst-case distinguishability they induce,
//! * [`purify`] — the optimal purifying channel for a pair of states, the
//!   angle-reducing channel it is built from, and the product-state
//!   distance bound,
//! * [`setanalysis`] — orthogonal partitions, essentially pure sets and
//!   their criteria, and unambiguous-discrimination feasibility,
//! * [`cli`] — the `qpure` command line and its JSON interchange format.

pub mod channels;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod matcore;
pub mod purify;
pub mod rng;
pub mod setanalysis;
pub mod states;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, Subsystem, Tolerances};
pub use num_complex::Complex64;
