//! Synthetic tactile probing of a ground-truth voxel grid.

use super::TactileSet;
use crate::rng;
use crate::voxel::VoxelGrid;
use rand::Rng;

/// Samples `npts` random (x, y) columns and records, per column, the first
/// occupied voxel met while scanning z from the top of the grid downward.
/// Columns with no occupancy contribute nothing; repeat contacts collapse.
pub fn sample_tactile(ground_truth: &VoxelGrid, npts: usize, seed: u64) -> TactileSet {
    debug_assert!(ground_truth.is_binary(), "tactile probing expects a binary grid");
    let dim = ground_truth.dim();
    let mut r = rng::from_seed(seed);
    let mut contacts = TactileSet::new();
    for _ in 0..npts {
        let x = r.gen_range(0..dim);
        let y = r.gen_range(0..dim);
        if let Some(c) = probe_column(ground_truth, x, y) {
            contacts.push(c);
        }
    }
    contacts
}

/// First occupied voxel along the -z probe through column (x, y).
pub fn probe_column(grid: &VoxelGrid, x: usize, y: usize) -> Option<[usize; 3]> {
    (0..grid.dim()).rev().find(|&z| grid.get(x, y, z) > 0.5).map(|z| [x, y, z])
}
