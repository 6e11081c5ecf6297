//! Next-best-view planning: uncertain-voxel extraction, the minimal-variance
//! PCA axis, and the robot target pose derived from it.

use crate::voxel::{GridFrame, ScoreGrid};
use nalgebra::{Matrix3, Vector2, Vector3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NbvError {
    #[error("uncertain set is degenerate (fewer than 3 points or rank < 2)")]
    DegenerateSet,
    #[error("view axis is near vertical; no planar standoff direction")]
    NearVertical,
}

/// Score band treated as uncertain: [center - epsilon, center + epsilon].
/// The tuned default is 0.5 +- 0.025.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintySpec {
    pub center: f64,
    pub epsilon: f64,
}

impl Default for UncertaintySpec {
    fn default() -> Self {
        Self { center: 0.5, epsilon: 0.025 }
    }
}

impl UncertaintySpec {
    pub fn new(center: f64, epsilon: f64) -> Self {
        assert!(epsilon > 0.0 && epsilon < 0.5, "epsilon must lie in (0, 0.5)");
        Self { center, epsilon }
    }

    pub fn contains(&self, score: f64) -> bool {
        score >= self.center - self.epsilon && score <= self.center + self.epsilon
    }
}

/// Voxels whose score sits inside the uncertainty band.
pub fn uncertain_voxels(scores: &ScoreGrid, spec: &UncertaintySpec) -> Vec<[usize; 3]> {
    let dim = scores.dim();
    let mut out = Vec::new();
    for z in 0..dim {
        for y in 0..dim {
            for x in 0..dim {
                if spec.contains(scores.get(x, y, z)) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

/// Minimal-variance axis of the uncertain voxel cloud: the eigenvector with
/// the smallest eigenvalue of the centered covariance. The sign points away
/// from the camera (increasing the azimuthal distance from the current
/// viewpoint, which sits at the frame's coordinate origin); azimuth ties
/// break toward the uncertain-set centroid.
pub fn next_best_view(uncertain: &[[usize; 3]], frame: &GridFrame) -> Result<Vector3<f64>, NbvError> {
    if uncertain.len() < 3 {
        return Err(NbvError::DegenerateSet);
    }
    let pts: Vec<Vector3<f64>> = uncertain.iter().map(|&v| frame.voxel_center(v)).collect();
    let centroid = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
    let mut cov = Matrix3::zeros();
    for p in &pts {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    cov /= pts.len() as f64;

    let eigen = nalgebra::SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[a].total_cmp(&eigen.eigenvalues[b]));
    // rank >= 2: the two larger eigenvalues must be non-negligible.
    let scale = eigen.eigenvalues[order[2]];
    if scale <= 0.0 || eigen.eigenvalues[order[1]] < 1e-12 * scale {
        return Err(NbvError::DegenerateSet);
    }
    let axis: Vector3<f64> = eigen.eigenvectors.column(order[0]).into_owned().normalize();

    Ok(orient_away_from_camera(axis, &centroid))
}

/// Chooses the sign of `axis` whose azimuth is farther from the camera's
/// azimuth as seen from the uncertain centroid; near-ties (including
/// vertical axes) point toward the occluded centroid.
fn orient_away_from_camera(axis: Vector3<f64>, centroid: &Vector3<f64>) -> Vector3<f64> {
    let cam_dir = -centroid; // camera at the frame origin
    let cam_az = cam_dir.y.atan2(cam_dir.x);
    let gap = |v: &Vector3<f64>| -> f64 {
        let az = v.y.atan2(v.x);
        let d = (az - cam_az).rem_euclid(std::f64::consts::TAU);
        d.min(std::f64::consts::TAU - d)
    };
    let (pos, neg) = (gap(&axis), gap(&(-axis)));
    let planar = axis.x.hypot(axis.y) > 1e-9;
    if planar && (pos - neg).abs() > 1e-9 {
        if pos >= neg {
            axis
        } else {
            -axis
        }
    } else if axis.dot(centroid) >= 0.0 {
        axis
    } else {
        -axis
    }
}

/// Robot target for a view axis: planar standoff position, head tilt, and
/// head height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbvTarget {
    pub v_nbv: Vector3<f64>,
    /// (x, y, 0) relative to the robot, at `standoff` from it.
    pub planar_target: Vector3<f64>,
    /// Head tilt above the horizontal, radians.
    pub head_angle: f64,
    /// Head height, clamped to the torso travel range, meters.
    pub torso_height: f64,
}

/// Torso travel limits for the head height, meters.
pub const HEAD_HEIGHT_RANGE: (f64, f64) = (0.1, 1.1);

/// Converts a unit view axis into a navigation target: the planar components
/// are normalized and scaled by `standoff`; the head angle is the elevation
/// of the axis; the head height is chosen so the line of sight to the object
/// centroid rises at that angle across the standoff distance.
pub fn nbv_target(
    v_nbv: Vector3<f64>,
    object_centroid: Vector3<f64>,
    standoff: f64,
) -> Result<NbvTarget, NbvError> {
    debug_assert!((v_nbv.norm() - 1.0).abs() < 1e-6, "view axis must be unit length");
    let xy = Vector2::new(v_nbv.x, v_nbv.y);
    if xy.norm() < 1e-6 {
        return Err(NbvError::NearVertical);
    }
    let planar = xy.normalize() * standoff;
    let head_angle = v_nbv.z.atan2(xy.norm());
    let height = object_centroid.z - standoff * head_angle.tan();
    Ok(NbvTarget {
        v_nbv,
        planar_target: Vector3::new(planar.x, planar.y, 0.0),
        head_angle,
        torso_height: height.clamp(HEAD_HEIGHT_RANGE.0, HEAD_HEIGHT_RANGE.1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::voxel::VoxelGrid;
    use approx::assert_relative_eq;
    use rand::Rng;

    #[test]
    fn band_membership_is_inclusive() {
        let frame = GridFrame::fixed_scale_at_origin(40);
        let mut g = VoxelGrid::zeros(40, frame);
        let scores = [0.40, 0.49, 0.50, 0.51, 0.60];
        for (i, &s) in scores.iter().enumerate() {
            g.set(i, 0, 0, s);
        }
        let spec = UncertaintySpec::default();
        let picked = uncertain_voxels(&g, &spec);
        // 0.49, 0.50, 0.51 plus every untouched 0.0 voxel? No: 0.0 is far
        // outside the band, so exactly the three middle scores qualify.
        assert_eq!(picked, vec![[1, 0, 0], [2, 0, 0], [3, 0, 0]]);
        assert_relative_eq!(spec.epsilon, 0.025);
    }

    #[test]
    fn binary_grid_has_empty_band() {
        let frame = GridFrame::fixed_scale_at_origin(40);
        let mut g = VoxelGrid::zeros(40, frame);
        g.set(3, 4, 5, 1.0);
        assert!(uncertain_voxels(&g, &UncertaintySpec::default()).is_empty());
    }

    #[test]
    fn band_is_monotone_in_epsilon() {
        let frame = GridFrame::fixed_scale_at_origin(40);
        let mut g = VoxelGrid::zeros(40, frame);
        let mut r = rng::from_seed(8);
        for _ in 0..500 {
            g.set(r.gen_range(0..40), r.gen_range(0..40), r.gen_range(0..40), r.gen_range(0.3..0.7));
        }
        let small = uncertain_voxels(&g, &UncertaintySpec::new(0.5, 0.01));
        let large = uncertain_voxels(&g, &UncertaintySpec::new(0.5, 0.05));
        let large_set: std::collections::HashSet<_> = large.iter().collect();
        assert!(small.iter().all(|v| large_set.contains(v)));
    }

    #[test]
    fn slab_normal_is_minimal_variance_axis() {
        let frame = GridFrame::fixed_scale_at_origin(40);
        // x = 17 slab spread across y, z
        let vox: Vec<[usize; 3]> = (0..40)
            .flat_map(|y| (0..40).map(move |z| [17, y, z]))
            .collect();
        let v = next_best_view(&vox, &frame).unwrap();
        assert!(v.x.abs() > 1.0 - 1e-9, "axis {v:?}");

        let vox: Vec<[usize; 3]> = (0..40)
            .flat_map(|x| (0..40).map(move |y| [x, y, 23]))
            .collect();
        let v = next_best_view(&vox, &frame).unwrap();
        assert!(v.z.abs() > 1.0 - 1e-9, "axis {v:?}");
    }

    #[test]
    fn degenerate_sets_are_rejected() {
        let frame = GridFrame::fixed_scale_at_origin(40);
        assert!(matches!(next_best_view(&[[1, 2, 3], [4, 5, 6]], &frame), Err(NbvError::DegenerateSet)));
        // collinear
        let line: Vec<[usize; 3]> = (0..20).map(|i| [i, i, i]).collect();
        assert!(matches!(next_best_view(&line, &frame), Err(NbvError::DegenerateSet)));
    }

    #[test]
    fn rotation_equivariance_up_to_sign() {
        // Rotating the cloud rotates the axis (up to the sign convention).
        let mut r = rng::from_seed(12);
        let frame = GridFrame::new(Vector3::new(-0.15, -0.15, -0.15), 0.0078947);
        for _ in 0..20 {
            let vox: Vec<[usize; 3]> = (0..200)
                .map(|_| {
                    [
                        (20.0 + r.gen_range(-8.0..8.0)) as usize,
                        (20.0 + r.gen_range(-4.0..4.0)) as usize,
                        (20.0 + r.gen_range(-1.5..1.5)) as usize,
                    ]
                })
                .collect();
            let v = next_best_view(&vox, &frame).unwrap();

            // 90 degree lattice rotation about z: (x, y) -> (39 - y, x)
            let rotated: Vec<[usize; 3]> = vox.iter().map(|&[x, y, z]| [39 - y, x, z]).collect();
            let vr = next_best_view(&rotated, &frame).unwrap();
            let back = Vector3::new(vr.y, -vr.x, vr.z);
            assert!(
                (back.dot(&v).abs() - 1.0).abs() < 1e-6,
                "rotated axis {back:?} vs {v:?}"
            );
        }
    }

    #[test]
    fn target_along_x_axis() {
        let t = nbv_target(Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 0.0, 0.75), 0.5).unwrap();
        assert_relative_eq!(t.planar_target, Vector3::new(0.5, 0.0, 0.0), epsilon = 1e-12);
        assert_relative_eq!(t.head_angle, 0.0);
        assert_relative_eq!(t.torso_height, 0.75);
    }

    #[test]
    fn vertical_axis_is_rejected() {
        assert!(matches!(
            nbv_target(Vector3::new(0.0, 0.0, 1.0), Vector3::zeros(), 0.5),
            Err(NbvError::NearVertical)
        ));
    }

    #[test]
    fn oblique_axis_right_triangle_geometry() {
        let s = 2f64.sqrt() / 2.0;
        let t = nbv_target(Vector3::new(s, 0.0, s), Vector3::new(0.0, 0.0, 0.75), 0.5).unwrap();
        assert_relative_eq!(t.head_angle, 45f64.to_radians(), epsilon = 1e-12);
        assert_relative_eq!(t.planar_target, Vector3::new(0.5, 0.0, 0.0), epsilon = 1e-12);
        // standoff * tan(45) = 0.5 below the centroid height
        assert_relative_eq!(t.torso_height, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn planar_target_norm_equals_standoff() {
        let mut r = rng::from_seed(3);
        for _ in 0..50 {
            let v = Vector3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-0.9..0.9)).normalize();
            if v.x.hypot(v.y) < 1e-3 {
                continue;
            }
            let t = nbv_target(v, Vector3::new(0.0, 0.0, 0.6), 0.5).unwrap();
            assert_relative_eq!(t.planar_target.x.hypot(t.planar_target.y), 0.5, epsilon = 1e-12);
            assert_eq!(t.planar_target.z, 0.0);
            assert!(t.torso_height >= HEAD_HEIGHT_RANGE.0 && t.torso_height <= HEAD_HEIGHT_RANGE.1);
        }
    }
}
