//! Waypoint-trajectory discretization into {forward, left, right, done}
//! commands with a lookahead heading rule.

use super::{Command, CommandSeq, Pose2};

/// Waypoints to look ahead when picking a heading (clamped at the end).
pub const LOOKAHEAD: usize = 25;
/// Heading offset that triggers turning, radians.
pub const ANGLE_THRESHOLD: f64 = 20.0 * std::f64::consts::PI / 180.0;
/// Forward step, meters; doubles as the arrival tolerance.
pub const DISTANCE_STEP: f64 = 0.1;
/// Turn increment, radians.
pub const TURN_INCREMENT: f64 = 10.0 * std::f64::consts::PI / 180.0;

fn wrap_angle(a: f64) -> f64 {
    let mut a = a.rem_euclid(std::f64::consts::TAU);
    if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    }
    a
}

/// Converts a waypoint trajectory into discrete commands by simulating the
/// agent: the heading comes from the waypoint `LOOKAHEAD` steps ahead, turns
/// are emitted in 10 degree increments once the offset exceeds 20 degrees,
/// and forward commands step 0.1 m while the lookahead target is farther
/// than the tolerance. The internal agent uses exactly the replay kinematics
/// (10 degree turns, 0.1 m steps), so dead reckoning the output reproduces
/// the discretizer's terminal pose. Ends with Done.
pub fn discretize(trajectory: &[Pose2]) -> CommandSeq {
    assert!(trajectory.len() >= 2, "need at least two poses");
    let goal = trajectory.last().unwrap();
    let n = trajectory.len();

    let mut commands = Vec::new();
    let mut pos = trajectory[0].pos;
    let mut heading = trajectory[0].yaw;
    let mut next_wp = 0usize;

    let limit = 8 * n + 400;
    for _ in 0..limit {
        while next_wp < n - 1 && (trajectory[next_wp].pos - pos).norm() <= DISTANCE_STEP {
            next_wp += 1;
        }
        let arrived = (goal.pos - pos).norm() <= DISTANCE_STEP;
        if next_wp >= n - 1 && arrived {
            // align the final heading before finishing
            let offset = wrap_angle(goal.yaw - heading);
            if offset.abs() > ANGLE_THRESHOLD {
                emit_turns(&mut commands, &mut heading, offset);
                continue;
            }
            break;
        }

        let look = &trajectory[(next_wp + LOOKAHEAD).min(n - 1)];
        let to_look = look.pos - pos;
        let desired = if to_look.norm() > 1e-9 { to_look.y.atan2(to_look.x) } else { look.yaw };
        let offset = wrap_angle(desired - heading);
        if offset.abs() > ANGLE_THRESHOLD {
            emit_turns(&mut commands, &mut heading, offset);
            continue;
        }

        let distance = to_look.norm();
        let steps = ((distance / DISTANCE_STEP) + 1e-9).floor() as usize;
        if steps == 0 {
            // lookahead target within tolerance but the goal is not: fall
            // through to the next waypoint window
            if next_wp < n - 1 {
                next_wp += 1;
                continue;
            }
            break;
        }
        for _ in 0..steps {
            commands.push(Command::Forward);
            pos.x += DISTANCE_STEP * heading.cos();
            pos.y += DISTANCE_STEP * heading.sin();
        }
    }

    commands.push(Command::Done);
    commands
}

fn emit_turns(commands: &mut Vec<Command>, heading: &mut f64, offset: f64) {
    let turns = ((offset.abs() / TURN_INCREMENT) + 0.5).floor() as usize;
    let turns = turns.max(1);
    let (cmd, sign) = if offset > 0.0 { (Command::Left, 1.0) } else { (Command::Right, -1.0) };
    for _ in 0..turns {
        commands.push(cmd);
        *heading = wrap_angle(*heading + sign * TURN_INCREMENT);
    }
}
