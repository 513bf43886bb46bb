//! Topological and dimensional analysis of feature matrices.
//!
//! The crate covers the whole numerical path from a (possibly incomplete)
//! matrix of categorical features to its topological summaries:
//!
//! * [`dataset`]: the [`ParameterMatrix`] container with completeness
//!   filtering, midpoint imputation and random baselines.
//! * [`projection`]: principal-component reduction to a retained-variance
//!   fraction.
//! * [`filtration`]: distance matrices, the critical radius, radius grids and
//!   Vietoris-Rips filtrations.
//! * [`persistence`]: GF(2) boundary-matrix reduction and barcodes.
//! * [`comptree`]: persistent-components (H0) trees, Newick export and
//!   Robinson-Foulds comparison.
//! * [`h1loc`]: localisation of H1 generators by vertex removal.
//! * [`dimension`]: weighted local-PCA intrinsic-dimension profiles and
//!   density maps.
//!
//! Everything here is deterministic given its inputs and an explicit seed.
//! The crate is `no_std` (it needs `alloc`); file formats and the command
//! line live in the `topling` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod comptree;
pub mod dataset;
pub mod dimension;
mod error;
pub mod filtration;
pub mod h1loc;
pub mod linalg;
pub mod persistence;
pub mod projection;

pub use comptree::{ComponentsTree, Partition, RefTree};
pub use dataset::{CompletenessReport, ParameterMatrix, Schema};
pub use dimension::{DensityMap, DimensionProfile, NeighborhoodFrame, ReferenceShape};
pub use error::{Error, Result};
pub use filtration::{DistanceMatrix, FilteredComplex, RadiusGrid, Simplex};
pub use h1loc::{CandidateCycle, RemovalVerdict, SignificanceScore, Verdict};
pub use persistence::{Barcode, Interval, PersistencePairs};
pub use projection::EmbeddedPoints;
