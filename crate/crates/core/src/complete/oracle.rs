//! Oracle completer: a deterministic stand-in for a learned completion
//! model, scored from ground truth.
//!
//! Voxels visible from the current camera get confident scores (0.95
//! occupied / 0.05 empty). In the occluded region the oracle mimics a
//! converged model: confident away from the surface, uncertain within
//! `SURFACE_MARGIN` voxels of the ground-truth boundary, where scores sit at
//! 0.5 plus a seeded uniform draw inside the requested band. The planner's
//! uncertainty band therefore concentrates on the occluded side of the
//! object surface.

use crate::nbv::UncertaintySpec;
use crate::rng;
use crate::voxel::{ScoreGrid, VoxelGrid};
use nalgebra::Vector3;
use rand::Rng;

/// Occluded voxels within this many voxels of the ground-truth surface are
/// scored as uncertain.
const SURFACE_MARGIN: i64 = 2;

/// Visibility by 3D DDA from the camera (the current frame's coordinate
/// origin) toward the voxel center: visible when no ground-truth-occupied
/// voxel blocks the ray strictly before it.
fn visible_from_camera(gt: &VoxelGrid, target: [usize; 3]) -> bool {
    let dim = gt.dim() as i64;
    let frame = gt.frame();
    let start = Vector3::zeros(); // camera origin in the current camera frame
    let end = frame.voxel_center(target);
    let dir = end - start;
    let n_steps = (dir.norm() / (frame.voxel_size * 0.25)).ceil() as usize;
    let mut last: Option<[i64; 3]> = None;
    for k in 0..n_steps {
        let t = k as f64 / n_steps as f64;
        let p = start + dir * t;
        let cell = frame.world_to_lattice(p);
        if Some(cell) == last {
            continue;
        }
        last = Some(cell);
        let [x, y, z] = cell;
        if x < 0 || y < 0 || z < 0 || x >= dim || y >= dim || z >= dim {
            continue;
        }
        if [x as usize, y as usize, z as usize] == target {
            return true;
        }
        if gt.get(x as usize, y as usize, z as usize) > 0.5 {
            return false;
        }
    }
    true
}

fn near_surface(gt: &VoxelGrid, x: usize, y: usize, z: usize) -> bool {
    let dim = gt.dim() as i64;
    let here = gt.get(x, y, z) > 0.5;
    for dz in -SURFACE_MARGIN..=SURFACE_MARGIN {
        for dy in -SURFACE_MARGIN..=SURFACE_MARGIN {
            for dx in -SURFACE_MARGIN..=SURFACE_MARGIN {
                let (nx, ny, nz) = (x as i64 + dx, y as i64 + dy, z as i64 + dz);
                if nx < 0 || ny < 0 || nz < 0 || nx >= dim || ny >= dim || nz >= dim {
                    continue;
                }
                if (gt.get(nx as usize, ny as usize, nz as usize) > 0.5) != here {
                    return true;
                }
            }
        }
    }
    false
}

/// Completion scores from ground truth (`gt` must share the current frame):
/// visible voxels 0.95/0.05 by occupancy, occluded near-surface voxels
/// 0.5 +- uniform(0, band.epsilon), other occluded voxels 0.95/0.05.
pub fn complete_oracle(gt: &VoxelGrid, band: &UncertaintySpec, seed: u64) -> ScoreGrid {
    let dim = gt.dim();
    let mut r = rng::from_seed(seed);
    let mut out = ScoreGrid::zeros(dim, *gt.frame());
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                let occupied = gt.get(x, y, z) > 0.5;
                let confident = if occupied { 0.95 } else { 0.05 };
                let score = if visible_from_camera(gt, [x, y, z]) {
                    confident
                } else if near_surface(gt, x, y, z) {
                    band.center + r.gen_range(-1.0..1.0) * band.epsilon
                } else {
                    confident
                };
                out.set(x, y, z, score);
            }
        }
    }
    out
}
