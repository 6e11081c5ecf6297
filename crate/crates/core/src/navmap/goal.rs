//! Goal-decision rule: a confident belief triggers a 360 degree
//! verification spin scored every 10 degrees.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GoalDecisionError {
    #[error("verification spin needs exactly 36 scores, got {0}")]
    WrongSpinLength(usize),
}

/// Belief required to start the verification spin.
pub const SPIN_TRIGGER: f64 = 0.99;
/// Mean spin score required to declare done.
pub const ACCEPT_MEAN: f64 = 0.9;

/// True when `initial_belief` reached `trigger` (starting the spin) and the
/// mean of the 36 per-10-degree spin scores exceeds `accept_mean`.
pub fn goal_decision(
    initial_belief: f64,
    scores_by_heading: &[f64],
    trigger: f64,
    accept_mean: f64,
) -> Result<bool, GoalDecisionError> {
    if scores_by_heading.len() != 36 {
        return Err(GoalDecisionError::WrongSpinLength(scores_by_heading.len()));
    }
    if initial_belief < trigger {
        return Ok(false); // spin never starts
    }
    let mean = scores_by_heading.iter().sum::<f64>() / scores_by_heading.len() as f64;
    Ok(mean > accept_mean)
}
