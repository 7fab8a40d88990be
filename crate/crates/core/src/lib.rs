//! Coverage path planning for agricultural fields with obstacles.
//!
//! The pipeline decomposes the free space into boustrophedon cells, lays
//! parallel tracks in each cell, and orders the tracks to minimise the
//! distance driven outside them. Two orderings are offered: cell by cell, and
//! a global order over all tracks that may enter a cell more than once.

pub mod cli;
pub mod decomposition;
pub mod geometry;
pub mod io;
pub mod planner;
pub mod sequencing;
pub mod tracks;
pub mod turns;

pub use decomposition::{decompose, headland_connectivity, CellDecomposition, End, SweepFrame};
pub use geometry::{FreeSpace, Point, Polygon};
pub use tracks::{generate_all_tracks, MachineSpec, Track};
pub use turns::{min_turn, CostModel, TeeFormula, TurnKind};
