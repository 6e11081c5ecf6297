//! Completion strategies: mapping a partial observation (plus optional
//! tactile contacts and a previous view) to a grid of occupancy scores.
//!
//! Neural completers are deliberately absent; the [`Completer`] interface is
//! what a learned back-end would plug into.

mod hull;
mod oracle;
mod registered;
pub(crate) mod se3;

pub use hull::{complete_convex_hull, convex_hull, HullError};
pub use oracle::complete_oracle;
pub use registered::complete_registered_union;

use crate::scene::{Pose, TactileSet};
use crate::voxel::{ScoreGrid, VoxelGrid};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompleteError {
    #[error("request has no previous view / relative pose")]
    MissingPreviousView,
    #[error("degenerate hull: {0}")]
    Hull(#[from] HullError),
}

/// One completion problem. `current` is the voxelized view being completed,
/// in its own camera frame (the camera sits at that frame's origin).
#[derive(Debug, Clone)]
pub struct CompletionRequest {
    pub current: VoxelGrid,
    /// Earlier view in its own camera frame, with the true previous-camera to
    /// current-camera transform; fused under simulated odometry.
    pub previous: Option<(VoxelGrid, Pose)>,
    pub tactile: Option<TactileSet>,
    /// Fractional odometry error per motion step, in [0, 1].
    pub odometry_noise: f64,
    /// Seed for the odometry-noise draws.
    pub noise_seed: u64,
}

impl CompletionRequest {
    pub fn single_view(current: VoxelGrid) -> Self {
        Self { current, previous: None, tactile: None, odometry_noise: 0.0, noise_seed: 0 }
    }

    pub fn with_tactile(mut self, tactile: TactileSet) -> Self {
        self.tactile = Some(tactile);
        self
    }

    pub fn with_previous(mut self, grid: VoxelGrid, relative_pose: Pose) -> Self {
        self.previous = Some((grid, relative_pose));
        self
    }

    pub fn with_noise(mut self, fraction: f64, seed: u64) -> Self {
        assert!((0.0..=1.0).contains(&fraction));
        self.odometry_noise = fraction;
        self.noise_seed = seed;
        self
    }
}

/// Strategy interface: request in, occupancy scores out. Completers are
/// stateless and reentrant.
pub trait Completer: Sync {
    fn complete(&self, req: &CompletionRequest) -> Result<ScoreGrid, CompleteError>;
    fn name(&self) -> &'static str;
}

/// Union of the observed voxels and any tactile contacts, score 1; no
/// prediction in unobserved space.
pub fn complete_partial(req: &CompletionRequest) -> ScoreGrid {
    let mut out = req.current.clone();
    if let Some(tactile) = &req.tactile {
        for &[x, y, z] in tactile.contacts() {
            out.set(x, y, z, 1.0);
        }
    }
    out
}

/// The partial baseline as a [`Completer`].
pub struct PartialCompleter;

impl Completer for PartialCompleter {
    fn complete(&self, req: &CompletionRequest) -> Result<ScoreGrid, CompleteError> {
        Ok(complete_partial(req))
    }
    fn name(&self) -> &'static str {
        "partial"
    }
}

/// Convex-hull baseline as a [`Completer`].
pub struct ConvexHullCompleter;

impl Completer for ConvexHullCompleter {
    fn complete(&self, req: &CompletionRequest) -> Result<ScoreGrid, CompleteError> {
        Ok(complete_convex_hull(req)?)
    }
    fn name(&self) -> &'static str {
        "convex_hull"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::voxel::GridFrame;

    fn grid_with(coords: &[[usize; 3]]) -> VoxelGrid {
        let mut g = VoxelGrid::zeros(40, GridFrame::fixed_scale_at_origin(40));
        for &[x, y, z] in coords {
            g.set(x, y, z, 1.0);
        }
        g
    }

    #[test]
    fn partial_without_tactile_is_identity() {
        let g = grid_with(&[[1, 2, 3], [10, 10, 10]]);
        let req = CompletionRequest::single_view(g.clone());
        assert_eq!(complete_partial(&req), g);
    }

    #[test]
    fn tactile_voxel_outside_input_adds_one() {
        let g = grid_with(&[[1, 2, 3]]);
        let tactile: TactileSet = [[5usize, 5, 5]].into_iter().collect();
        let req = CompletionRequest::single_view(g.clone()).with_tactile(tactile);
        let out = complete_partial(&req);
        assert_eq!(out.count_occupied(), g.count_occupied() + 1);
        assert!(out.is_binary());
    }

    #[test]
    fn partial_is_subset_of_hull() {
        let g = grid_with(&[[5, 5, 5], [20, 6, 7], [8, 25, 9], [9, 9, 28], [22, 21, 20]]);
        let req = CompletionRequest::single_view(g);
        let partial = complete_partial(&req);
        let hull = complete_convex_hull(&req).unwrap();
        for (x, y, z) in partial.occupied() {
            assert!(hull.get(x, y, z) > 0.5, "partial voxel ({x},{y},{z}) outside hull");
        }
    }
}
