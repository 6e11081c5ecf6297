//! Free-space carving: voxels a camera ray passed through before its first
//! surface hit are known empty.

use super::VoxelGrid;
use crate::scene::DepthView;

/// Zeros every voxel strictly in front of the observed surface along its
/// camera ray; voxels at or behind the surface keep their score. Pixels with
/// no hit carve out to the camera's max range. The grid and view share the
/// same camera frame (the camera sits at the frame's coordinate origin).
///
/// Idempotent: carving an already-carved grid changes nothing.
pub fn carve_free_space(scores: &VoxelGrid, view: &DepthView) -> VoxelGrid {
    let mut out = scores.clone();
    let dim = scores.dim();
    let frame = *scores.frame();
    // Half the voxel diagonal: a center this close to the hit may share the
    // surface voxel, so it is left untouched.
    let guard = frame.voxel_size * 3f64.sqrt() / 2.0;

    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                let center = frame.voxel_center([x, y, z]);
                let Some((col, row)) = view.camera.project(center) else {
                    continue;
                };
                let surface = view.depth(col, row).min(view.camera.max_range);
                let t = center.norm();
                if t < surface - guard {
                    out.set(x, y, z, 0.0);
                }
            }
        }
    }
    out
}
