//! Dead reckoning: integrating commanded motion under point-mass kinematics
//! (x' = V cos theta, y' = V sin theta), without external localization.

use super::{Command, Pose2};

/// Robot forward step, meters.
pub const FORWARD_STEP: f64 = 0.1;
/// Robot turn step, radians.
pub const TURN_STEP: f64 = 10.0 * std::f64::consts::PI / 180.0;

/// Minecraft locomotion modes; speeds per the simulator's 20 fps tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinecraftSpeed {
    Walk,
    Sprint,
    SprintJump,
}

impl MinecraftSpeed {
    /// Speed in m/s.
    pub fn speed(self) -> f64 {
        match self {
            MinecraftSpeed::Walk => 4.317,
            MinecraftSpeed::Sprint => 5.612,
            MinecraftSpeed::SprintJump => 7.127,
        }
    }

    /// Distance covered in one 20 fps frame: walk 0.216, sprint 0.281,
    /// sprint-jump 0.356 meters (to three decimals).
    pub fn per_frame(self) -> f64 {
        self.speed() / 20.0
    }
}

/// How commands translate into motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MotionProfile {
    /// 0.1 m forward steps, 10 degree turns.
    Robot,
    /// One simulator frame per Forward at the given speed; turns are still
    /// commanded in 10 degree camera increments.
    Minecraft(MinecraftSpeed),
}

impl MotionProfile {
    fn forward_distance(&self) -> f64 {
        match self {
            MotionProfile::Robot => FORWARD_STEP,
            MotionProfile::Minecraft(speed) => speed.per_frame(),
        }
    }
}

/// Integrates commands from `start`, returning the pose after every command
/// (the first element is the start pose). `Done` leaves the pose unchanged.
pub fn dead_reckon(commands: &[Command], profile: &MotionProfile, start: &Pose2) -> Vec<Pose2> {
    let mut poses = Vec::with_capacity(commands.len() + 1);
    let mut pose = *start;
    poses.push(pose);
    let step = profile.forward_distance();
    for c in commands {
        match c {
            Command::Forward => {
                pose.pos.x += step * pose.yaw.cos();
                pose.pos.y += step * pose.yaw.sin();
            }
            Command::Left => pose.yaw += TURN_STEP,
            Command::Right => pose.yaw -= TURN_STEP,
            Command::Done => {}
        }
        poses.push(pose);
    }
    poses
}
