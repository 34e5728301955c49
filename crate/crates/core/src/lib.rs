//! Structured regression (GCRF) on networks built as Kronecker products of
//! two weighted graphs.
//!
//! The crate covers the whole pipeline:
//!
//! * [`graph`]: similarity matrices, Laplacians and the Kronecker product.
//! * [`randnet`]: seeded Erdős–Rényi, Barabási–Albert and Watts–Strogatz
//!   generators plus the attribute kernel that turns topologies into weights.
//! * [`spectral`]: the exact eigenbasis of `L(S1 ⊗ S2)` and three factored
//!   estimates of it that never materialize the product.
//! * [`nkp`]: nearest Kronecker product of a non-Kronecker similarity matrix.
//! * [`gcrf`]: learning and inference in a (possibly approximate) eigenbasis.
//! * [`synthdata`]: synthetic train/test instances.
//!
//! Flat vectors over the product graph use the index `n2 * i + k` for the
//! vertex pair `(i, k)`, i.e. an `n1 × n2` array stored row-major.

pub mod error;
pub mod gcrf;
pub mod graph;
pub mod io;
pub mod nkp;
pub mod randnet;
pub mod spectral;
pub mod synthdata;

pub use error::{Error, Result};
pub use gcrf::{FitOptions, FitResult, GcrfProblem};
pub use graph::{DenseSymMatrix, SimilarityMatrix};
pub use nkp::KronFactors;
pub use randnet::{GraphKind, GraphTopology, RngStream};
pub use spectral::{BasisKind, EigenSystem, Pairing, SpectralBasis};
pub use synthdata::{Dataset, DatasetSpec, ProductSimilarity};
