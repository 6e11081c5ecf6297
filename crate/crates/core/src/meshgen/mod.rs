//! Mesh reconstruction post-processing: density matching, observed-cloud
//! merge, gap filling, score-space smoothing, and marching cubes.

mod mcubes;

pub use mcubes::marching_cubes;

use crate::scene::TriMesh;
use crate::voxel::{GridFrame, ScoreGrid};
use nalgebra::Vector3;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeshGenError {
    #[error("completion has no voxels above threshold")]
    EmptyCompletion,
}

#[derive(Debug, Clone, Copy)]
pub struct ReconParams {
    pub threshold: f64,
    pub smoothing_iters: usize,
    pub smoothing_lambda: f64,
}

impl Default for ReconParams {
    fn default() -> Self {
        Self { threshold: 0.5, smoothing_iters: 4, smoothing_lambda: 0.5 }
    }
}

/// Upsampling factor matching the completion's voxel density to the observed
/// cloud density: max(1, round(cbrt(N_observed / N_occupied))).
pub fn density_ratio(observed_points: usize, completion: &ScoreGrid, threshold: f64) -> Result<usize, MeshGenError> {
    let occupied = completion.scores().iter().filter(|&&s| s > threshold).count();
    if occupied == 0 {
        return Err(MeshGenError::EmptyCompletion);
    }
    let ratio = (observed_points as f64 / occupied as f64).cbrt().round() as i64;
    Ok(ratio.max(1) as usize)
}

/// Nearest-neighbor upsample of the score field by an integer factor;
/// the frame keeps its origin with voxel_size / factor.
fn upsample(grid: &ScoreGrid, factor: usize) -> ScoreGrid {
    if factor == 1 {
        return grid.clone();
    }
    let dim = grid.dim() * factor;
    let frame = GridFrame::new(grid.frame().origin, grid.frame().voxel_size / factor as f64);
    let mut out = ScoreGrid::zeros(dim, frame);
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                out.set(x, y, z, grid.get(x / factor, y / factor, z / factor));
            }
        }
    }
    out
}

/// One 6-connected morphological closing (dilate, then erode) of the
/// occupied set; cells the closing adds get score 1. Out-of-grid neighbors
/// count as occupied during erosion, which keeps closing extensive at the
/// boundary: the result is always a superset of the input occupancy.
pub fn fill_gaps(grid: &ScoreGrid, threshold: f64) -> ScoreGrid {
    let dim = grid.dim() as i64;
    let occupied = |g: &ScoreGrid, x: i64, y: i64, z: i64| -> bool {
        if x < 0 || y < 0 || z < 0 || x >= dim || y >= dim || z >= dim {
            false
        } else {
            g.get(x as usize, y as usize, z as usize) > threshold
        }
    };
    const NBRS: [[i64; 3]; 6] =
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];

    let mut dilated = vec![false; grid.len()];
    let idx = |x: i64, y: i64, z: i64| (x + dim * (y + dim * z)) as usize;
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                let hit = occupied(grid, x, y, z)
                    || NBRS.iter().any(|d| occupied(grid, x + d[0], y + d[1], z + d[2]));
                dilated[idx(x, y, z)] = hit;
            }
        }
    }
    let mut out = grid.clone();
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                if occupied(grid, x, y, z) {
                    continue; // closing never removes occupancy
                }
                let closed = dilated[idx(x, y, z)]
                    && NBRS.iter().all(|d| {
                        let (nx, ny, nz) = (x + d[0], y + d[1], z + d[2]);
                        if nx < 0 || ny < 0 || nz < 0 || nx >= dim || ny >= dim || nz >= dim {
                            true // pad as occupied for erosion
                        } else {
                            dilated[idx(nx, ny, nz)]
                        }
                    });
                if closed {
                    out.set(x as usize, y as usize, z as usize, 1.0);
                }
            }
        }
    }
    out
}

/// Laplacian relaxation of the score field. Voxels whose 6-neighborhood
/// shares their occupancy classification are held fixed (they are far from
/// the surface), and a relax step only applies when the result stays
/// strictly on the voxel's side of the threshold, so smoothing repositions
/// the extracted surface without changing the occupancy topology.
pub fn smooth_scores(grid: &ScoreGrid, threshold: f64, iters: usize, lambda: f64) -> ScoreGrid {
    let dim = grid.dim() as i64;
    let mut cur = grid.clone();
    const NBRS: [[i64; 3]; 6] =
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]];
    for _ in 0..iters {
        let mut next = cur.clone();
        for z in 0..dim {
            for y in 0..dim {
                for x in 0..dim {
                    let s = cur.get(x as usize, y as usize, z as usize);
                    let class = s > threshold;
                    let mut sum = 0.0;
                    let mut n = 0usize;
                    let mut uniform = true;
                    for d in NBRS {
                        let (nx, ny, nz) = (x + d[0], y + d[1], z + d[2]);
                        if nx < 0 || ny < 0 || nz < 0 || nx >= dim || ny >= dim || nz >= dim {
                            continue;
                        }
                        let v = cur.get(nx as usize, ny as usize, nz as usize);
                        sum += v;
                        n += 1;
                        if (v > threshold) != class {
                            uniform = false;
                        }
                    }
                    if uniform || n == 0 {
                        continue;
                    }
                    let relaxed = ((1.0 - lambda) * s + lambda * (sum / n as f64)).clamp(0.0, 1.0);
                    if (relaxed > threshold) == class {
                        next.set(x as usize, y as usize, z as usize, relaxed);
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

/// Full reconstruction: upsample the completion to match the observed cloud
/// density, merge the observed points in, close gaps, relax scores, and run
/// marching cubes at the threshold.
pub fn reconstruct_mesh(
    completion: &ScoreGrid,
    observed: &[Vector3<f64>],
    params: &ReconParams,
) -> Result<TriMesh, MeshGenError> {
    let d_ratio = density_ratio(observed.len(), completion, params.threshold)?;
    let mut merged = upsample(completion, d_ratio);
    for p in observed {
        if let Some([x, y, z]) = merged.world_to_voxel(*p) {
            merged.set(x, y, z, 1.0);
        }
    }
    let filled = fill_gaps(&merged, params.threshold);
    let smoothed = smooth_scores(&filled, params.threshold, params.smoothing_iters, params.smoothing_lambda);
    Ok(marching_cubes(&smoothed, params.threshold))
}
