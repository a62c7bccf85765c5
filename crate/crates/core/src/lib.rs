//! Pure-state asymmetry for finite groups.
//!
//! Finite groups as multiplication tables, unitary representations and their
//! irrep decomposition, characteristic functions and reductions onto irreps,
//! deciders for (unitary) G-equivalence of pure states with explicit
//! G-invariant witnesses, optimal approximate interconversion, positive
//! definite functions with the GNS construction, and G-covariant channels.

pub mod approx;
pub mod bochner;
pub mod channel;
pub mod equivalence;
pub mod error;
pub mod group;
pub mod io;
pub mod linalg;
pub mod random;
pub mod rep;
pub mod state;

pub use error::{Error, Result};
pub use group::{GroupTable, SubgroupRef};
pub use rep::{decompose, IrrepBlock, IrrepDecomposition, UnitaryRep};
