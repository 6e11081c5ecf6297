//! 3D convex hull (quickhull) and the hull-completion baseline.

use super::CompletionRequest;
use crate::voxel::ScoreGrid;
use nalgebra::Vector3;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("need at least 4 points, got {0}")]
    TooFew(usize),
    #[error("input points are collinear or coplanar")]
    Degenerate,
    #[error("hull construction failed internally: {0}")]
    Internal(&'static str),
}

/// Convex hull as vertices + outward-oriented triangles.
#[derive(Debug, Clone)]
pub struct Hull {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[usize; 3]>,
    planes: Vec<(Vector3<f64>, f64)>, // (unit normal, offset): n.x <= offset inside
}

impl Hull {
    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        self.planes.iter().all(|(n, d)| n.dot(p) <= d + tol)
    }
}

struct Face {
    verts: [usize; 3],
    normal: Vector3<f64>,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(verts: [usize; 3], points: &[Vector3<f64>], interior: &Vector3<f64>) -> Option<Face> {
        let [a, b, c] = verts;
        let n = (points[b] - points[a]).cross(&(points[c] - points[a]));
        let norm = n.norm();
        if norm < 1e-24 {
            return None;
        }
        let mut n = n / norm;
        let mut verts = verts;
        if n.dot(interior) > n.dot(&points[a]) {
            // flip to outward
            verts.swap(1, 2);
            n = -n;
        }
        let offset = n.dot(&points[verts[0]]);
        Some(Face { verts, normal: n, offset, outside: Vec::new(), alive: true })
    }

    fn distance(&self, p: &Vector3<f64>) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Quickhull. Exactly degenerate inputs (fewer than 4 points, or all
/// collinear/coplanar) are rejected; a numerically wedged construction is
/// retried once with a deterministic joggle.
pub fn convex_hull(points: &[Vector3<f64>]) -> Result<Hull, HullError> {
    match quickhull(points) {
        Err(HullError::Internal(_)) => {
            let scale = cloud_scale(points);
            let joggled: Vec<Vector3<f64>> = points
                .iter()
                .enumerate()
                .map(|(i, p)| p + hash_jitter(i) * scale * 1e-7)
                .collect();
            quickhull(&joggled)
        }
        other => other,
    }
}

fn cloud_scale(points: &[Vector3<f64>]) -> f64 {
    points.iter().map(|p| p.abs().max()).fold(1e-12, f64::max)
}

fn hash_jitter(i: usize) -> Vector3<f64> {
    let mut h = (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut next = || {
        h ^= h >> 31;
        h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h ^= h >> 29;
        (h >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    Vector3::new(next(), next(), next())
}

fn quickhull(points: &[Vector3<f64>]) -> Result<Hull, HullError> {
    if points.len() < 4 {
        return Err(HullError::TooFew(points.len()));
    }
    let eps = cloud_scale(points) * 1e-9;

    // Initial simplex from extreme points.
    let (mut i0, mut i1) = (0, 0);
    let mut best = -1.0;
    for axis in 0..3 {
        let lo = (0..points.len()).min_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis])).unwrap();
        let hi = (0..points.len()).max_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis])).unwrap();
        let d = (points[hi] - points[lo]).norm();
        if d > best {
            best = d;
            (i0, i1) = (lo, hi);
        }
    }
    if best < eps {
        return Err(HullError::Degenerate);
    }
    let dir = (points[i1] - points[i0]).normalize();
    let i2 = (0..points.len())
        .max_by(|&a, &b| {
            let da = (points[a] - points[i0]).cross(&dir).norm();
            let db = (points[b] - points[i0]).cross(&dir).norm();
            da.total_cmp(&db)
        })
        .unwrap();
    if (points[i2] - points[i0]).cross(&dir).norm() < eps {
        return Err(HullError::Degenerate);
    }
    let plane_n = (points[i1] - points[i0]).cross(&(points[i2] - points[i0])).normalize();
    let i3 = (0..points.len())
        .max_by(|&a, &b| {
            let da = plane_n.dot(&(points[a] - points[i0])).abs();
            let db = plane_n.dot(&(points[b] - points[i0])).abs();
            da.total_cmp(&db)
        })
        .unwrap();
    if plane_n.dot(&(points[i3] - points[i0])).abs() < eps {
        return Err(HullError::Degenerate);
    }

    let interior =
        (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;

    let mut faces: Vec<Face> = Vec::new();
    for verts in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        faces.push(Face::new(verts, points, &interior).ok_or(HullError::Internal("degenerate seed face"))?);
    }

    // Conflict lists: each point goes to the first face it lies outside of.
    let simplex = [i0, i1, i2, i3];
    for p in 0..points.len() {
        if simplex.contains(&p) {
            continue;
        }
        if let Some(f) = faces.iter_mut().find(|f| f.distance(&points[p]) > eps) {
            f.outside.push(p);
        }
    }

    let mut guard = 0usize;
    loop {
        guard += 1;
        if guard > 16 * points.len() + 64 {
            return Err(HullError::Internal("no convergence"));
        }
        // Face with the farthest outstanding conflict point.
        let mut pick: Option<(usize, usize, f64)> = None;
        for (fi, f) in faces.iter().enumerate() {
            if !f.alive || f.outside.is_empty() {
                continue;
            }
            for &p in &f.outside {
                let d = f.distance(&points[p]);
                if pick.map_or(true, |(_, _, cur)| d > cur) {
                    pick = Some((fi, p, d));
                }
            }
        }
        let Some((_, apex, _)) = pick else { break };

        // All alive faces that see the apex.
        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && f.distance(&points[apex]) > eps)
            .map(|(i, _)| i)
            .collect();
        if visible.is_empty() {
            return Err(HullError::Internal("apex sees no face"));
        }

        // Horizon = directed edges of visible faces whose reverse is not in a
        // visible face.
        use std::collections::HashSet;
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for &fi in &visible {
            let v = faces[fi].verts;
            for k in 0..3 {
                edges.insert((v[k], v[(k + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .copied()
            .filter(|&(a, b)| !edges.contains(&(b, a)))
            .collect();
        if horizon.is_empty() {
            return Err(HullError::Internal("open horizon"));
        }

        let mut orphans: Vec<usize> = Vec::new();
        for &fi in &visible {
            faces[fi].alive = false;
            orphans.append(&mut faces[fi].outside);
        }
        orphans.retain(|&p| p != apex);
        orphans.sort_unstable();
        orphans.dedup();

        let first_new = faces.len();
        for (a, b) in horizon {
            let face = Face::new([a, b, apex], points, &interior)
                .ok_or(HullError::Internal("degenerate horizon face"))?;
            faces.push(face);
        }
        for p in orphans {
            let pt = points[p];
            if let Some(f) =
                faces[first_new..].iter_mut().find(|f| f.distance(&pt) > eps)
            {
                f.outside.push(p);
            }
        }
    }

    // Compact the alive faces into a vertex-indexed mesh.
    let mut remap = std::collections::HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut planes = Vec::new();
    for f in faces.iter().filter(|f| f.alive) {
        let tri: Vec<usize> = f
            .verts
            .iter()
            .map(|&v| {
                *remap.entry(v).or_insert_with(|| {
                    vertices.push(points[v]);
                    vertices.len() - 1
                })
            })
            .collect();
        triangles.push([tri[0], tri[1], tri[2]]);
        planes.push((f.normal, f.offset));
    }
    Ok(Hull { vertices, triangles, planes })
}

/// Convex hull of the occupied voxel centers (plus tactile contacts),
/// re-voxelized solid into the current frame.
pub fn complete_convex_hull(req: &CompletionRequest) -> Result<ScoreGrid, HullError> {
    let frame = *req.current.frame();
    let mut points = req.current.occupied_centers();
    if let Some(tactile) = &req.tactile {
        for &c in tactile.contacts() {
            points.push(frame.voxel_center(c));
        }
    }
    let hull = convex_hull(&points)?;

    let dim = req.current.dim();
    let mut out = ScoreGrid::zeros(dim, frame);
    let tol = frame.voxel_size * 1e-6;
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                if hull.contains(&frame.voxel_center([x, y, z]), tol) {
                    out.set(x, y, z, 1.0);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::voxel::{GridFrame, VoxelGrid};
    use rand::Rng;

    #[test]
    fn tetrahedron_is_its_own_hull() {
        let pts = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
        ];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 4);
        assert_eq!(hull.triangles.len(), 4);
    }

    #[test]
    fn cube_corners_hull_has_8_vertices() {
        let mut pts = Vec::new();
        for z in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for x in [0.0, 1.0] {
                    pts.push(Vector3::new(x, y, z));
                }
            }
        }
        pts.push(Vector3::new(0.5, 0.5, 0.5)); // interior point must vanish
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.vertices.len(), 8);
        assert_eq!(hull.triangles.len(), 12); // 2 per cube face
    }

    #[test]
    fn coplanar_points_are_degenerate() {
        let pts: Vec<Vector3<f64>> =
            (0..20).map(|i| Vector3::new(i as f64, (i * i % 7) as f64, 2.5)).collect();
        assert!(matches!(convex_hull(&pts), Err(HullError::Degenerate)));
        assert!(matches!(convex_hull(&pts[..3]), Err(HullError::TooFew(3))));
    }

    #[test]
    fn hull_contains_every_input_point() {
        let mut r = rng::from_seed(5);
        for _ in 0..20 {
            let pts: Vec<Vector3<f64>> = (0..60)
                .map(|_| Vector3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
                .collect();
            let hull = convex_hull(&pts).unwrap();
            for p in &pts {
                assert!(hull.contains(p, 1e-7));
            }
            // Euler: V - E + F = 2 with E = 3F/2 for triangulated surfaces.
            let v = hull.vertices.len() as i64;
            let f = hull.triangles.len() as i64;
            assert_eq!(2 * v - 4, f, "V={v} F={f}");
        }
    }

    #[test]
    fn eight_corner_voxels_fill_solid_block() {
        let mut g = VoxelGrid::zeros(40, GridFrame::fixed_scale_at_origin(40));
        for &x in &[5usize, 15] {
            for &y in &[5usize, 15] {
                for &z in &[5usize, 15] {
                    g.set(x, y, z, 1.0);
                }
            }
        }
        let req = CompletionRequest::single_view(g);
        let out = complete_convex_hull(&req).unwrap();
        assert_eq!(out.count_occupied(), 11 * 11 * 11);
        for (x, y, z) in out.occupied() {
            assert!((5..=15).contains(&x) && (5..=15).contains(&y) && (5..=15).contains(&z));
        }
    }

    #[test]
    fn hull_of_box_surface_samples_recovers_box_exactly() {
        // Brute-force oracle: a voxelized box is its own convex hull, so the
        // hull of its surface voxels must reproduce it (Jaccard 1).
        let mut gt = VoxelGrid::zeros(40, GridFrame::fixed_scale_at_origin(40));
        for z in 8..=20 {
            for y in 6..=18 {
                for x in 10..=26 {
                    gt.set(x, y, z, 1.0);
                }
            }
        }
        let mut surface = VoxelGrid::zeros(40, GridFrame::fixed_scale_at_origin(40));
        for (x, y, z) in gt.occupied() {
            let boundary = [x, y, z].iter().zip([(10, 26), (6, 18), (8, 20)]).any(|(&c, (lo, hi))| c == lo || c == hi);
            if boundary {
                surface.set(x, y, z, 1.0);
            }
        }
        let req = CompletionRequest::single_view(surface);
        let out = complete_convex_hull(&req).unwrap();
        assert_eq!(out.count_occupied(), gt.count_occupied());
        for (x, y, z) in gt.occupied() {
            assert!(out.get(x, y, z) > 0.5);
        }
    }

    #[test]
    fn coplanar_voxels_report_degenerate_hull() {
        let mut g = VoxelGrid::zeros(40, GridFrame::fixed_scale_at_origin(40));
        for y in 0..10 {
            for x in 0..10 {
                g.set(x, y, 7, 1.0);
            }
        }
        let req = CompletionRequest::single_view(g);
        assert!(matches!(complete_convex_hull(&req), Err(HullError::Degenerate)));
    }
}
