//! Computational toolkit for subgroups of SO(2,n) and SL(3,R): exact
//! construction of the named subalgebra families, numerical Cartan
//! projections, growth-window estimation, the structural type classifier,
//! and empirical properness tests.
//!
//! Everything structural is decided in exact rational arithmetic; floating
//! point enters only through exponentials and singular values. All values
//! are immutable after construction and every operation is a pure function,
//! so concurrent use needs no coordination.

pub mod error;
pub mod rat;
pub mod lie;
pub mod cartan;
pub mod catalog;
pub mod classify;
pub mod growth;
pub mod properness;

pub use cartan::{ChamberPoint, MuPoint, SL3ChamberPoint};
pub use catalog::{DeformationMatrix, ExemplarParams, Subalgebra};
pub use classify::{CKVerdict, CkOutcome, TypeLabel, TypeVerdict};
pub use error::{Error, Result};
pub use growth::{GrowthWindow, OrbitSample};
pub use lie::{ANCoords, AlgElement, Ambient, BilinearSpace, GroupElement, Root};
pub use properness::PropernessReport;
