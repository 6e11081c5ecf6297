//! View sweep enumeration and panorama headings.

use super::Pose;
use nalgebra::Vector3;
use std::f64::consts::PI;

/// Half-open sweep [start, end) stepped by `stride`.
fn half_open(start: f64, end: f64, stride: f64) -> Vec<f64> {
    let mut values = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start + stride * k as f64;
        if v >= end - 1e-12 {
            break;
        }
        values.push(v);
        k += 1;
    }
    values
}

/// Number of poses `enumerate_views` yields for a stride.
pub fn view_count(stride: f64) -> usize {
    let n_roll = half_open(0.0, 2.0 * PI, stride).len();
    let n_pitch = half_open(-PI / 2.0, PI / 2.0, stride).len();
    n_roll * n_pitch * n_roll
}

/// Camera poses for every (roll, pitch, yaw) on the half-open sweep
/// roll, yaw in [0, 2pi), pitch in [-pi/2, pi/2), each stepped by `stride`.
/// The camera sits `CAMERA_DISTANCE` from the object origin looking at it.
/// The default stride of 0.6 produces 726 poses.
pub fn enumerate_views(stride: f64) -> Vec<Pose> {
    assert!(stride > 0.0, "stride must be positive");
    let rolls = half_open(0.0, 2.0 * PI, stride);
    let pitches = half_open(-PI / 2.0, PI / 2.0, stride);
    let yaws = half_open(0.0, 2.0 * PI, stride);

    let mut poses = Vec::with_capacity(rolls.len() * pitches.len() * yaws.len());
    for &roll in &rolls {
        for &pitch in &pitches {
            for &yaw in &yaws {
                let rig = Pose::from_euler(roll, pitch, yaw);
                let eye = rig.transform_dir(Vector3::new(0.0, 0.0, -CAMERA_DISTANCE));
                poses.push(Pose::try_new(*rig.rotation(), eye).expect("euler rotation is proper"));
            }
        }
    }
    poses
}

/// Object-to-camera standoff of the view sweep, meters.
pub const CAMERA_DISTANCE: f64 = 0.5;

/// Eight poses at 45 degree heading increments about the world vertical,
/// starting from the base heading; translation is unchanged.
pub fn panorama_poses(base: &Pose) -> Vec<Pose> {
    (0..8)
        .map(|k| {
            let spin = Pose::from_yaw(k as f64 * 45f64.to_radians());
            Pose::try_new(*spin.compose(base).rotation(), base.translation())
                .expect("composition of rotations is proper")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn default_stride_yields_726_views() {
        assert_eq!(enumerate_views(0.6).len(), 726);
        assert_eq!(view_count(0.6), 726);
    }

    #[test]
    fn roll_axis_has_11_values_pitch_6() {
        // Independent re-enumeration: count multiples of the stride below the
        // interval end.
        let rolls = half_open(0.0, 2.0 * PI, 0.6);
        assert_eq!(rolls.len(), 11);
        assert_relative_eq!(rolls[10], 6.0, epsilon = 1e-12);
        let pitches = half_open(-PI / 2.0, PI / 2.0, 0.6);
        assert_eq!(pitches.len(), 6);
        assert_relative_eq!(pitches[0], -PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn count_matches_half_open_product_for_many_strides() {
        for k in 1..40 {
            let stride = 0.05 + k as f64 * 0.037;
            let n_roll = (0..).take_while(|&i| (i as f64) * stride < 2.0 * PI - 1e-12).count();
            let n_pitch = (0..).take_while(|&i| -PI / 2.0 + (i as f64) * stride < PI / 2.0 - 1e-12).count();
            assert_eq!(enumerate_views(stride).len(), n_roll * n_pitch * n_roll, "stride {stride}");
        }
    }

    #[test]
    fn cameras_sit_at_standoff_looking_at_origin() {
        for pose in enumerate_views(1.3) {
            let eye = pose.translation();
            assert_relative_eq!(eye.norm(), CAMERA_DISTANCE, epsilon = 1e-12);
            let axis = pose.transform_dir(Vector3::z());
            assert_relative_eq!(axis.dot(&(-eye).normalize()), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn panorama_headings_step_45_degrees() {
        let poses = panorama_poses(&Pose::identity());
        for (k, p) in poses.iter().enumerate() {
            let expected = (k as f64 * 45.0).to_radians();
            let wrapped = (p.heading() - expected).rem_euclid(2.0 * PI);
            assert!(wrapped < 1e-9 || (2.0 * PI - wrapped) < 1e-9);
        }
    }

    #[test]
    fn panorama_from_30_degree_base() {
        let base = Pose::from_yaw(30f64.to_radians()).with_translation(Vector3::new(1.0, 2.0, 0.0));
        let poses = panorama_poses(&base);
        assert_relative_eq!(poses[0].heading(), 30f64.to_radians(), epsilon = 1e-12);
        assert_relative_eq!(poses[4].heading(), (210f64 - 360f64).to_radians(), epsilon = 1e-12);
        for p in &poses {
            assert_relative_eq!(p.translation(), base.translation(), epsilon = 1e-12);
        }
    }

    #[test]
    fn eight_relative_turns_close_the_group() {
        let base = Pose::from_yaw(1.234);
        let full = Pose::from_yaw(8.0 * 45f64.to_radians()).compose(&base);
        assert_relative_eq!(full.heading(), base.heading(), epsilon = 1e-9);
    }
}
