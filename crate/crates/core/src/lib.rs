//! Geometric and algorithmic core of a localization-free mobile-manipulation
//! pipeline: synthetic 2.5D sensing, fixed-scale voxel completion,
//! PCA next-best-view planning, mesh reconstruction, navigation-map tooling,
//! a softmax-kernel associative memory, and the evaluation-metric suite.
//!
//! Everything here is deterministic: stochastic operations take explicit
//! seeds and draw from a counter-based generator (see [`rng`]).

pub mod complete;
pub mod memory;
pub mod meshgen;
pub mod metrics;
pub mod navmap;
pub mod nbv;
pub mod rng;
pub mod scene;
pub mod voxel;

pub use scene::{CameraModel, DepthView, Pose, TactileSet, TriMesh};
pub use voxel::{GridFrame, ScoreGrid, VoxelGrid};
