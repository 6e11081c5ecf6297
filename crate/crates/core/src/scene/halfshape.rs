//! Conjoined half-shape generator: a front half (toward the sensor, +z) and
//! a back half of matching size, probed by three fixed tactile rays.

use super::TactileSet;
use crate::rng;
use crate::voxel::{GridFrame, VoxelGrid};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfShapeKind {
    Sphere,
    Cube,
    Diamond,
}

impl HalfShapeKind {
    fn contains(self, dx: i64, dy: i64, dz: i64, size: i64) -> bool {
        match self {
            HalfShapeKind::Sphere => dx * dx + dy * dy + dz * dz <= size * size,
            HalfShapeKind::Cube => dx.abs() <= size && dy.abs() <= size && dz.abs() <= size,
            HalfShapeKind::Diamond => dx.abs() + dy.abs() + dz.abs() <= size,
        }
    }
}

/// Probe rays enter at z = dim and travel -z; (x, y) column origins.
pub const HALF_SHAPE_RAYS: [[usize; 2]; 3] = [[13, 20], [20, 20], [26, 20]];

const DIM: usize = 40;

/// Builds a 40-cube binary grid holding a conjoined half-shape pair: the
/// `front` half occupies dz >= 0 (sensor side), the `back` half dz < 0, both
/// with half-size `size` voxels about a seeded center. Returns the grid and
/// the contacts of the three fixed tactile rays.
pub fn make_half_shape(
    front: HalfShapeKind,
    back: HalfShapeKind,
    size: usize,
    seed: u64,
) -> (VoxelGrid, TactileSet) {
    assert!(size >= 1 && size <= 19, "half-size must fit inside the 40-cube");
    let mut r = rng::from_seed(seed);
    let lo = size as i64;
    let hi = (DIM - 1 - size) as i64;
    let cx = r.gen_range(lo..=hi);
    let cy = r.gen_range(lo..=hi);
    let cz = r.gen_range(lo..=hi);

    let mut grid = VoxelGrid::zeros(DIM, GridFrame::fixed_scale_at_origin(DIM));
    let s = size as i64;
    for z in 0..DIM {
        for y in 0..DIM {
            for x in 0..DIM {
                let (dx, dy, dz) = (x as i64 - cx, y as i64 - cy, z as i64 - cz);
                let kind = if dz >= 0 { front } else { back };
                if kind.contains(dx, dy, dz, s) {
                    grid.set(x, y, z, 1.0);
                }
            }
        }
    }

    let mut contacts = TactileSet::new();
    for [x, y] in HALF_SHAPE_RAYS {
        if let Some(c) = super::tactile::probe_column(&grid, x, y) {
            contacts.push(c);
        }
    }
    (grid, contacts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn center_of(grid: &VoxelGrid) -> [i64; 3] {
        // Occupied bounding box midpoint; exact for symmetric shapes.
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (x, y, z) in grid.occupied() {
            let c = [x as i64, y as i64, z as i64];
            for k in 0..3 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2]
    }

    #[test]
    fn matching_halves_are_reflection_symmetric() {
        for kind in [HalfShapeKind::Sphere, HalfShapeKind::Cube, HalfShapeKind::Diamond] {
            let (grid, _) = make_half_shape(kind, kind, 8, 42);
            let [_, _, cz] = center_of(&grid);
            for (x, y, z) in grid.occupied().collect::<Vec<_>>() {
                let mirrored = 2 * cz - z as i64;
                assert!(
                    (0..40).contains(&mirrored) && grid.get(x, y, mirrored as usize) > 0.5,
                    "asymmetric at ({x},{y},{z})"
                );
            }
        }
    }

    #[test]
    fn cube_front_presents_flat_face_to_rays() {
        // Deterministic center via constructed seed search: find a seed whose
        // center covers all three ray columns.
        let seed = (0..200)
            .find(|&s| {
                let (_, contacts) = make_half_shape(HalfShapeKind::Cube, HalfShapeKind::Sphere, 9, s);
                contacts.len() == 3
            })
            .expect("some seed covers the probe columns");
        let (_, cube_contacts) = make_half_shape(HalfShapeKind::Cube, HalfShapeKind::Sphere, 9, seed);
        let zs: Vec<usize> = cube_contacts.contacts().iter().map(|c| c[2]).collect();
        assert!(zs.iter().all(|&z| z == zs[0]), "cube face toward sensor is flat: {zs:?}");

        // Sphere front from the same center: center column protrudes past the
        // off-center columns whenever all three rays make contact.
        let (_, sph_contacts) = make_half_shape(HalfShapeKind::Sphere, HalfShapeKind::Cube, 9, seed);
        if sph_contacts.len() == 3 {
            let zs: Vec<usize> = sph_contacts.contacts().iter().map(|c| c[2]).collect();
            assert!(zs[1] >= zs[0] && zs[1] >= zs[2]);
            assert!(zs[1] > zs[0] || zs[1] > zs[2]);
        }
    }

    #[test]
    fn offset_shape_misses_a_ray() {
        let seed = (0..500)
            .find(|&s| {
                let (grid, _) = make_half_shape(HalfShapeKind::Sphere, HalfShapeKind::Sphere, 4, s);
                super::super::tactile::probe_column(&grid, 13, 20).is_none()
            })
            .expect("a small offset sphere misses column x=13");
        let (_, contacts) = make_half_shape(HalfShapeKind::Sphere, HalfShapeKind::Sphere, 4, seed);
        assert!(contacts.len() < 3);
    }

    #[test]
    fn grid_is_binary_and_contacts_occupied() {
        let (grid, contacts) = make_half_shape(HalfShapeKind::Diamond, HalfShapeKind::Cube, 7, 9);
        assert!(grid.is_binary());
        for &[x, y, z] in contacts.contacts() {
            assert!(grid.get(x, y, z) > 0.5);
        }
    }
}
