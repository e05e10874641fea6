//! Exact diagonalization of open spin-1/2 XXZ/XY chains and their
//! Jordan-Wigner spinless-fermion counterparts, with pairwise
//! entanglement measures on both sides of the correspondence.
//!
//! The two pictures share one bit-encoded basis, one sector-blocked
//! Hamiltonian matrix and one amplitude vector; what differs is how
//! two-site observables are read off. The spin picture yields the
//! concurrence, the fermion picture the mode concurrence, and for ground
//! states of chains with uniformly signed transverse couplings the
//! Marshall sign rule pins down their relation: equality on
//! nearest-neighbor pairs, concurrence at or above mode concurrence
//! everywhere else.
//!
//! Module map:
//!
//! * [`basis`] — occupation states, sectors, Jordan-Wigner string parity
//! * [`model`] — XXZ / XY spin blocks and the tight-binding fermion blocks
//! * [`diag`] — dense symmetric eigensolution, ground-state extraction
//! * [`measures`] — two-site reduced density matrices, C and MC
//! * [`signrule`] — Marshall sign rule, pair decompositions, the product
//!   identity behind C ≥ MC
//! * [`analytic`] — closed-form two-particle states of the uniform chain
//! * [`verify`] — seeded ensembles and the verification battery
//! * [`cli`] — the `jwchain` command-line interface
//!
//! ```
//! use jwchain::basis::enumerate_sector;
//! use jwchain::diag::{ground_state, SectorChoice};
//! use jwchain::measures::measure_pair;
//! use jwchain::model::{build_xxz_spin, CouplingSet};
//!
//! // five-site XY chain with couplings (1, 2, 2, 1), three up spins
//! let couplings = CouplingSet::xy_only(vec![1.0, 2.0, 2.0, 1.0])?;
//! let gs = ground_state(build_xxz_spin, &couplings, SectorChoice::Fixed(3), true)?;
//! let m = measure_pair(&gs.state, 1, 3)?;
//! assert!(m.concurrence > m.mode_concurrence);
//! # Ok::<(), jwchain::Error>(())
//! ```

pub mod analytic;
pub mod basis;
pub mod cli;
pub mod diag;
mod error;
pub mod fixtures;
pub mod measures;
pub mod model;
pub mod signrule;
pub mod verify;

pub use error::{Error, Result};
