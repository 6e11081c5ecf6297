//! Depth ray casting against triangle meshes.

use super::{CameraModel, DepthView, Pose, TriMesh};
use nalgebra::Vector3;
use rayon::prelude::*;

const MT_EPSILON: f64 = 1e-9;

/// Möller–Trumbore ray/triangle intersection. Returns the ray parameter of
/// the hit, if any, for t > MT_EPSILON.
pub(crate) fn ray_triangle(
    origin: Vector3<f64>,
    dir: Vector3<f64>,
    v0: Vector3<f64>,
    v1: Vector3<f64>,
    v2: Vector3<f64>,
) -> Option<f64> {
    let e1 = v1 - v0;
    let e2 = v2 - v0;
    let pvec = dir.cross(&e2);
    let det = e1.dot(&pvec);
    if det.abs() < MT_EPSILON {
        return None; // ray parallel to triangle plane
    }
    let inv_det = 1.0 / det;
    let tvec = origin - v0;
    let u = tvec.dot(&pvec) * inv_det;
    if !(-MT_EPSILON..=1.0 + MT_EPSILON).contains(&u) {
        return None;
    }
    let qvec = tvec.cross(&e1);
    let v = dir.dot(&qvec) * inv_det;
    if v < -MT_EPSILON || u + v > 1.0 + MT_EPSILON {
        return None;
    }
    let t = e2.dot(&qvec) * inv_det;
    (t > MT_EPSILON).then_some(t)
}

/// Nearest positive hit of a ray against the whole mesh; ties resolved by
/// lowest triangle index (strict `<` while scanning in index order).
pub(crate) fn raycast_mesh(mesh: &TriMesh, origin: Vector3<f64>, dir: Vector3<f64>) -> Option<f64> {
    let mut best: Option<f64> = None;
    for t in 0..mesh.triangles.len() {
        let [a, b, c] = mesh.triangle_vertices(t);
        if let Some(hit) = ray_triangle(origin, dir, a, b, c) {
            if best.map_or(true, |cur| hit < cur) {
                best = Some(hit);
            }
        }
    }
    best
}

/// Renders the per-pixel nearest hit distance along each pixel ray.
/// Misses and hits beyond `camera.max_range` become +inf. Rows render in
/// parallel; the result is schedule-independent.
pub fn render_depth(mesh: &TriMesh, pose: &Pose, camera: &CameraModel) -> DepthView {
    let origin = pose.translation();
    let mut raster = vec![f64::INFINITY; camera.width * camera.height];
    raster
        .par_chunks_mut(camera.width)
        .enumerate()
        .for_each(|(row, out)| {
            for (col, px) in out.iter_mut().enumerate() {
                let dir = pose.transform_dir(camera.pixel_ray(col, row));
                if let Some(t) = raycast_mesh(mesh, origin, dir) {
                    if t <= camera.max_range {
                        *px = t;
                    }
                }
            }
        });
    DepthView::new(*camera, *pose, raster)
}
