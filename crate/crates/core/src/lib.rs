//! Exact integer chain complexes for deciding weak symmetry breaking.
//!
//! The crate builds the disk and annulus complexes of the weak symmetry
//! breaking task, computes chains and homology over ℤ, acts on them with the
//! symmetric group, and decides whether a non-trivial color-preserving
//! equivariant chain map from the disk to the annulus exists. The same
//! question is also attacked combinatorially on chromatic subdivisions with
//! symmetric binary colorings.

pub mod chainmaps;
pub mod chains;
pub mod complexes;
pub mod docs;
pub mod error;
pub mod exec;
pub mod smith;
pub mod solvability;
pub mod subdivision;
pub mod symmetry;
pub mod view;

pub use chainmaps::{ChainMapTable, Property, Status, VerificationReport};
pub use chains::{AnnulusClasses, Chain, HomologyGroup};
pub use complexes::{Color, Complex, ComplexName, Label, Simplex, Vertex};
pub use error::{Error, Result};
pub use exec::Execution;
pub use solvability::{Certificate, ReducedSystem};
pub use subdivision::{BinaryColoring, SubdividedComplex};
pub use symmetry::GroupElement;
pub use view::View;
