//! Fixed-scale voxel grids, voxelization of views and meshes, free-space
//! carving, and binvox I/O.

mod binvox;
mod carve;
mod voxelize;

pub use binvox::{read_binvox, write_binvox, BinvoxError};
pub use carve::carve_free_space;
pub use voxelize::{voxelize_mesh, voxelize_view, MeshVoxelization, ViewVoxelization, VoxelizeError};

use nalgebra::Vector3;

/// Side length of the fixed bounding volume, meters.
pub const BOUNDING_VOLUME: f64 = 0.3;

/// World placement of a grid: `origin` is the corner of voxel (0,0,0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridFrame {
    pub origin: Vector3<f64>,
    pub voxel_size: f64,
}

impl GridFrame {
    pub fn new(origin: Vector3<f64>, voxel_size: f64) -> Self {
        assert!(voxel_size > 0.0, "voxel size must be positive");
        Self { origin, voxel_size }
    }

    /// The fixed-scale voxel edge for a grid of `dim` cells:
    /// bounding volume over (dim - 2), ~7.89 mm at dim 40.
    pub fn fixed_scale_size(dim: usize) -> f64 {
        BOUNDING_VOLUME / (dim as f64 - 2.0)
    }

    pub fn fixed_scale(origin: Vector3<f64>, dim: usize) -> Self {
        Self::new(origin, Self::fixed_scale_size(dim))
    }

    pub fn fixed_scale_at_origin(dim: usize) -> Self {
        Self::fixed_scale(Vector3::zeros(), dim)
    }

    pub fn voxel_center(&self, v: [usize; 3]) -> Vector3<f64> {
        self.origin
            + Vector3::new(
                (v[0] as f64 + 0.5) * self.voxel_size,
                (v[1] as f64 + 0.5) * self.voxel_size,
                (v[2] as f64 + 0.5) * self.voxel_size,
            )
    }

    /// Voxel containing a world point, unbounded (may be negative).
    pub fn world_to_lattice(&self, p: Vector3<f64>) -> [i64; 3] {
        let rel = (p - self.origin) / self.voxel_size;
        [rel.x.floor() as i64, rel.y.floor() as i64, rel.z.floor() as i64]
    }
}

/// Cubic lattice of occupancy scores in [0, 1] with a world anchor.
/// Binary grids hold only {0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    dim: usize,
    frame: GridFrame,
    scores: Vec<f64>,
}

/// A [`VoxelGrid`] whose scores are occupancy probabilities.
pub type ScoreGrid = VoxelGrid;

impl VoxelGrid {
    pub fn zeros(dim: usize, frame: GridFrame) -> Self {
        assert!(dim >= 2);
        Self { dim, frame, scores: vec![0.0; dim * dim * dim] }
    }

    pub fn from_scores(dim: usize, frame: GridFrame, scores: Vec<f64>) -> Self {
        assert_eq!(scores.len(), dim * dim * dim);
        assert!(scores.iter().all(|s| (0.0..=1.0).contains(s)), "scores must lie in [0,1]");
        Self { dim, frame, scores }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame(&self) -> &GridFrame {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.iter().all(|&s| s <= 0.5)
    }

    #[inline]
    fn index(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert!(x < self.dim && y < self.dim && z < self.dim);
        x + self.dim * (y + self.dim * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.scores[self.index(x, y, z)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, score: f64) {
        assert!((0.0..=1.0).contains(&score), "score {score} outside [0,1]");
        let i = self.index(x, y, z);
        self.scores[i] = score;
    }

    /// Raw scores in x-fastest, z-slowest order.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn is_binary(&self) -> bool {
        self.scores.iter().all(|&s| s == 0.0 || s == 1.0)
    }

    /// Coordinates with score above the 0.5 decision boundary, in storage
    /// order.
    pub fn occupied(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let dim = self.dim;
        self.scores.iter().enumerate().filter(|(_, &s)| s > 0.5).map(move |(i, _)| {
            (i % dim, (i / dim) % dim, i / (dim * dim))
        })
    }

    pub fn count_occupied(&self) -> usize {
        self.scores.iter().filter(|&&s| s > 0.5).count()
    }

    /// World positions of occupied voxel centers.
    pub fn occupied_centers(&self) -> Vec<Vector3<f64>> {
        self.occupied().map(|(x, y, z)| self.frame.voxel_center([x, y, z])).collect()
    }

    /// Voxel containing a world point, if inside the grid.
    pub fn world_to_voxel(&self, p: Vector3<f64>) -> Option<[usize; 3]> {
        let [x, y, z] = self.frame.world_to_lattice(p);
        let d = self.dim as i64;
        if x < 0 || y < 0 || z < 0 || x >= d || y >= d || z >= d {
            return None;
        }
        Some([x as usize, y as usize, z as usize])
    }

    /// Thresholded binary copy (score > threshold).
    pub fn binarized(&self, threshold: f64) -> VoxelGrid {
        let scores = self.scores.iter().map(|&s| if s > threshold { 1.0 } else { 0.0 }).collect();
        VoxelGrid { dim: self.dim, frame: self.frame, scores }
    }

    /// Occupied-set union with another grid of the same shape; result is the
    /// per-voxel max, so binary inputs stay binary.
    pub fn union(&self, other: &VoxelGrid) -> VoxelGrid {
        assert_eq!(self.dim, other.dim);
        let scores = self
            .scores
            .iter()
            .zip(other.scores.iter())
            .map(|(&a, &b)| a.max(b))
            .collect();
        VoxelGrid { dim: self.dim, frame: self.frame, scores }
    }

    pub fn same_frame(&self, other: &VoxelGrid) -> bool {
        self.dim == other.dim && self.frame == other.frame
    }
}
