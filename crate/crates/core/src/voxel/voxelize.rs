//! Fixed-scale voxelization.
//!
//! A view is voxelized in its own camera frame: the bounding volume is
//! centered on the cloud in x and y, and the z origin sits one voxel in
//! front of the closest point, so any object that fits the volume has room
//! to be completed behind its visible surface.

use super::{GridFrame, VoxelGrid};
use crate::scene::{render, DepthView, TriMesh};
use nalgebra::Vector3;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VoxelizeError {
    #[error("depth view has no finite pixels")]
    EmptyView,
}

#[derive(Debug, Clone)]
pub struct ViewVoxelization {
    pub grid: VoxelGrid,
    /// Points that fell outside the grid window (reported, not fatal).
    pub dropped: usize,
}

/// Voxelizes the back-projected cloud of a depth view into a `dim` cube at
/// the fixed scale. Grid coordinates live in the view's camera frame.
pub fn voxelize_view(view: &DepthView, dim: usize) -> Result<ViewVoxelization, VoxelizeError> {
    let points = view.points_camera_frame();
    if points.is_empty() {
        return Err(VoxelizeError::EmptyView);
    }
    let voxel_size = GridFrame::fixed_scale_size(dim);

    let mut lo = points[0];
    let mut hi = points[0];
    for p in &points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    // middle of the x/y extent, minimum of z
    let mid_x = (lo.x + hi.x) / 2.0;
    let mid_y = (lo.y + hi.y) / 2.0;
    let origin = Vector3::new(
        mid_x - voxel_size * dim as f64 / 2.0,
        mid_y - voxel_size * dim as f64 / 2.0,
        lo.z - voxel_size,
    );
    let frame = GridFrame::new(origin, voxel_size);

    let mut grid = VoxelGrid::zeros(dim, frame);
    let mut dropped = 0usize;
    for p in &points {
        match grid.world_to_voxel(*p) {
            Some([x, y, z]) => grid.set(x, y, z, 1.0),
            None => dropped += 1,
        }
    }
    Ok(ViewVoxelization { grid, dropped })
}

#[derive(Debug, Clone)]
pub struct MeshVoxelization {
    pub grid: VoxelGrid,
    /// Voxels where the three stabbing axes disagreed (2-1 vote).
    pub parity_conflicts: usize,
}

/// Fills interior + surface voxels of a mesh by parity ray stabbing along
/// all three axes with majority voting. Open meshes fill best-effort; the
/// vote disagreement count is reported.
pub fn voxelize_mesh(mesh: &TriMesh, frame: &GridFrame, dim: usize) -> MeshVoxelization {
    let mut votes = vec![0u8; dim * dim * dim];
    let idx = |x: usize, y: usize, z: usize| x + dim * (y + dim * z);

    // Jitter keeps column rays off exact edges/vertices; deterministic per
    // column and small relative to a voxel.
    let jitter = |a: usize, b: usize, axis: usize| -> f64 {
        let mut h = (a as u64)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((b as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9))
            .wrapping_add(axis as u64);
        h ^= h >> 31;
        h = h.wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 29;
        ((h >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 1e-4 * frame.voxel_size
    };

    for axis in 0..3 {
        let (u_axis, v_axis) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for u in 0..dim {
            for v in 0..dim {
                // Ray through the column of voxel centers, slightly jittered.
                let mut start = frame.origin;
                start[u_axis] += (u as f64 + 0.5) * frame.voxel_size + jitter(u, v, axis);
                start[v_axis] += (v as f64 + 0.5) * frame.voxel_size + jitter(v, u, axis + 3);
                start[axis] -= frame.voxel_size; // begin outside the grid
                let mut dir = Vector3::zeros();
                dir[axis] = 1.0;

                let mut crossings: Vec<f64> = Vec::new();
                for t in 0..mesh.triangles.len() {
                    let [a, b, c] = mesh.triangle_vertices(t);
                    if let Some(t_hit) = render::ray_triangle(start, dir, a, b, c) {
                        crossings.push(t_hit);
                    }
                }
                crossings.sort_by(|a, b| a.total_cmp(b));
                if crossings.is_empty() {
                    continue;
                }
                for w in 0..dim {
                    // Voxel-center position along the ray.
                    let t_center = (w as f64 + 1.5) * frame.voxel_size;
                    let inside = crossings.iter().take_while(|&&t| t < t_center).count() % 2 == 1;
                    if inside {
                        let (x, y, z) = match axis {
                            0 => (w, u, v),
                            1 => (u, w, v),
                            _ => (u, v, w),
                        };
                        votes[idx(x, y, z)] += 1;
                    }
                }
            }
        }
    }

    let mut grid = VoxelGrid::zeros(dim, *frame);
    let mut parity_conflicts = 0usize;
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                let v = votes[idx(x, y, z)];
                if v >= 2 {
                    grid.set(x, y, z, 1.0);
                }
                if v == 1 || v == 2 {
                    parity_conflicts += 1;
                }
            }
        }
    }
    MeshVoxelization { grid, parity_conflicts }
}
