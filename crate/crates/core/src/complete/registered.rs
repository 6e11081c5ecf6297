//! Two-view fusion by (possibly noisy) registration.

use super::se3::{self, Twist};
use super::{CompleteError, Completer, CompletionRequest};
use crate::rng;
use crate::scene::Pose;
use crate::voxel::ScoreGrid;
use rand::Rng;

/// Motion-step length used to discretize the relative motion, meters.
const STEP_LENGTH: f64 = 0.1;
/// Lever arm converting rotation to traveled arc (camera orbit standoff).
const ORBIT_RADIUS: f64 = 0.5;

/// Simulates executing the relative motion in `STEP_LENGTH` increments with
/// a per-step uniform error of up to `noise` fraction on both the rotational
/// and translational components. With zero noise this reproduces the true
/// pose exactly; with noise, heading errors propagate into later steps the
/// way real odometry drift does.
pub fn noisy_relative_pose(true_pose: &Pose, noise: f64, seed: u64) -> Pose {
    let twist = se3::log(true_pose);
    let arc = (twist.rho.norm()).max(ORBIT_RADIUS * twist.phi.norm());
    let steps = ((arc / STEP_LENGTH).ceil() as usize).max(1);
    let mut r = rng::from_seed(seed);
    let mut acc = Pose::identity();
    for _ in 0..steps {
        let e_rot: f64 = if noise > 0.0 { r.gen_range(-noise..noise) } else { 0.0 };
        let e_tra: f64 = if noise > 0.0 { r.gen_range(-noise..noise) } else { 0.0 };
        let step = Twist {
            rho: twist.rho / steps as f64 * (1.0 + e_tra),
            phi: twist.phi / steps as f64 * (1.0 + e_rot),
        };
        acc = acc.compose(&se3::exp(&step));
    }
    acc
}

/// Transforms the previous view's occupied voxels into the current camera
/// frame with the (noise-perturbed) relative pose, re-voxelizes them into the
/// current grid, and unions with the current view. Binary output.
pub fn complete_registered_union(req: &CompletionRequest) -> Result<ScoreGrid, CompleteError> {
    let Some((previous, relative_pose)) = &req.previous else {
        return Err(CompleteError::MissingPreviousView);
    };
    let pose = noisy_relative_pose(relative_pose, req.odometry_noise, req.noise_seed);

    let mut out = req.current.clone();
    for p in previous.occupied_centers() {
        let q = pose.transform_point(p);
        if let Some([x, y, z]) = out.world_to_voxel(q) {
            out.set(x, y, z, 1.0);
        }
    }
    if let Some(tactile) = &req.tactile {
        for &[x, y, z] in tactile.contacts() {
            out.set(x, y, z, 1.0);
        }
    }
    Ok(out)
}

pub struct RegisteredUnionCompleter;

impl Completer for RegisteredUnionCompleter {
    fn complete(&self, req: &CompletionRequest) -> Result<ScoreGrid, CompleteError> {
        complete_registered_union(req)
    }
    fn name(&self) -> &'static str {
        "registered_union"
    }
}
