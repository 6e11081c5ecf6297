//! Tabletop segmentation: radial band filter plus RANSAC fit of a
//! near-horizontal plane, returning the points above it.

use crate::rng;
use nalgebra::{Vector3, Vector4};
use rand::Rng;
use thiserror::Error;

/// Plane as (a, b, c, d) with ax + by + cz + d = 0, unit normal, normal.z > 0.
pub type Plane = Vector4<f64>;

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("no near-horizontal plane reached the {0:.0}% inlier floor")]
    NoPlaneFound(f64),
}

/// Horizontal-plane acceptance: |normal . z| must exceed this.
const HORIZONTAL_DOT: f64 = 0.95;
/// A candidate plane must claim at least this fraction of the banded cloud.
const MIN_INLIER_FRACTION: f64 = 0.30;

pub fn plane_signed_distance(plane: &Plane, p: &Vector3<f64>) -> f64 {
    plane.x * p.x + plane.y * p.y + plane.z * p.z + plane.w
}

fn plane_from_points(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> Option<Plane> {
    let n = (b - a).cross(&(c - a));
    let norm = n.norm();
    if norm < 1e-12 {
        return None;
    }
    let mut n = n / norm;
    if n.z < 0.0 {
        n = -n;
    }
    Some(Vector4::new(n.x, n.y, n.z, -n.dot(a)))
}

/// Segments the object resting on a table from a robot-centered cloud.
///
/// Points with a distance from the origin outside [near, far] are discarded,
/// the dominant near-horizontal plane is fit by random sampling consensus
/// (`iterations` candidate triples drawn from `seed`), and every remaining
/// point strictly above the plane by more than `inlier_tol` is returned as
/// object geometry.
pub fn segment_tabletop(
    cloud: &[Vector3<f64>],
    near: f64,
    far: f64,
    iterations: usize,
    inlier_tol: f64,
    seed: u64,
) -> Result<(Plane, Vec<Vector3<f64>>), SegmentError> {
    if cloud.is_empty() {
        return Err(SegmentError::EmptyCloud);
    }
    let banded: Vec<Vector3<f64>> = cloud
        .iter()
        .copied()
        .filter(|p| {
            let r = p.norm();
            r >= near && r <= far
        })
        .collect();
    if banded.len() < 3 {
        return Err(SegmentError::NoPlaneFound(MIN_INLIER_FRACTION * 100.0));
    }

    let mut r = rng::from_seed(seed);
    let mut best: Option<(usize, Plane)> = None;
    for _ in 0..iterations {
        let i = r.gen_range(0..banded.len());
        let j = r.gen_range(0..banded.len());
        let k = r.gen_range(0..banded.len());
        if i == j || j == k || i == k {
            continue;
        }
        let Some(plane) = plane_from_points(&banded[i], &banded[j], &banded[k]) else {
            continue;
        };
        if plane.z.abs() <= HORIZONTAL_DOT {
            continue;
        }
        let inliers = banded
            .iter()
            .filter(|p| plane_signed_distance(&plane, p).abs() <= inlier_tol)
            .count();
        if best.as_ref().map_or(true, |(n, _)| inliers > *n) {
            best = Some((inliers, plane));
        }
    }

    let Some((count, plane)) = best else {
        return Err(SegmentError::NoPlaneFound(MIN_INLIER_FRACTION * 100.0));
    };
    if (count as f64) < MIN_INLIER_FRACTION * banded.len() as f64 {
        return Err(SegmentError::NoPlaneFound(MIN_INLIER_FRACTION * 100.0));
    }

    // Refine with the inlier centroid: keep the consensus normal, recenter d.
    let inliers: Vec<&Vector3<f64>> = banded
        .iter()
        .filter(|p| plane_signed_distance(&plane, p).abs() <= inlier_tol)
        .collect();
    let centroid = inliers.iter().fold(Vector3::zeros(), |acc, p| acc + **p) / inliers.len() as f64;
    let normal = Vector3::new(plane.x, plane.y, plane.z);
    let plane = Vector4::new(normal.x, normal.y, normal.z, -normal.dot(&centroid));

    let object_points: Vec<Vector3<f64>> = banded
        .iter()
        .copied()
        .filter(|p| plane_signed_distance(&plane, p) > inlier_tol)
        .collect();
    Ok((plane, object_points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn table_cloud(seed: u64) -> (Vec<Vector3<f64>>, Vec<Vector3<f64>>) {
        // Table plane z = 0.5 sampled inside the radial band, plus a small box
        // of points above it.
        let mut r = rng::from_seed(seed);
        let mut cloud = Vec::new();
        while cloud.len() < 400 {
            let p = Vector3::new(r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5), 0.5);
            if p.norm() >= 0.3 && p.norm() <= 0.7 {
                cloud.push(p);
            }
        }
        let mut object = Vec::new();
        for _ in 0..100 {
            let p = Vector3::new(
                0.25 + r.gen_range(0.0..0.05),
                0.25 + r.gen_range(0.0..0.05),
                0.52 + r.gen_range(0.0..0.06),
            );
            object.push(p);
        }
        (cloud, object)
    }

    #[test]
    fn recovers_plane_and_box_points() {
        let (table, object) = table_cloud(3);
        let mut cloud = table.clone();
        cloud.extend(object.iter().copied());
        let (plane, points) = segment_tabletop(&cloud, 0.3, 0.7, 200, 0.005, 7).unwrap();
        assert!(plane.z > 0.99, "normal {plane:?}");
        assert_relative_eq!(-plane.w / plane.z, 0.5, epsilon = 1e-6);
        assert_eq!(points.len(), object.len());
        for p in &points {
            assert!(plane_signed_distance(&plane, p) > 0.005);
        }
    }

    #[test]
    fn out_of_band_cloud_has_no_plane() {
        let cloud: Vec<Vector3<f64>> = (0..50)
            .map(|i| {
                let t = i as f64 / 50.0 * std::f64::consts::TAU;
                Vector3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        assert!(matches!(
            segment_tabletop(&cloud, 0.3, 0.7, 100, 0.005, 1),
            Err(SegmentError::NoPlaneFound(_))
        ));
    }

    #[test]
    fn plane_only_cloud_yields_empty_object() {
        let (table, _) = table_cloud(5);
        let (plane, points) = segment_tabletop(&table, 0.3, 0.7, 200, 0.005, 2).unwrap();
        assert!(points.is_empty());
        assert!(plane.z > 0.99);
    }

    #[test]
    fn empty_cloud_is_an_error() {
        assert!(matches!(segment_tabletop(&[], 0.3, 0.7, 10, 0.005, 0), Err(SegmentError::EmptyCloud)));
    }

    #[test]
    fn vertical_plane_rejected() {
        // Dominant plane is vertical (x = 0.5): no horizontal candidate wins.
        let mut r = rng::from_seed(9);
        let cloud: Vec<Vector3<f64>> = (0..200)
            .map(|_| Vector3::new(0.5, r.gen_range(-0.3..0.3), r.gen_range(-0.3..0.3)))
            .filter(|p| p.norm() >= 0.3 && p.norm() <= 0.7)
            .collect();
        assert!(matches!(
            segment_tabletop(&cloud, 0.3, 0.7, 300, 0.005, 4),
            Err(SegmentError::NoPlaneFound(_))
        ));
    }
}
