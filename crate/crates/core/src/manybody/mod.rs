// SPDX-License-Identifier: Apache-2.0

//! Two- and three-particle dynamics: Fock sectors, exact propagation,
//! correlations and the interaction scans built on them.

mod basis;
mod propagate;
mod scans;
mod state;

pub use basis::{build_generator, build_sector_generator, sector_dim, FockBasis, Generator, Statistics};
pub use propagate::{Evolver, Propagator, EIGEN_MAX_DIM};
pub use scans::*;
pub use state::{correlation_map, evolve_grid, evolve_two_body, CorrelationMap, FockState, TwoBodyState};
