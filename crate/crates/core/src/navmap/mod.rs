//! Navigation tooling: 2D occupancy maps from environment meshes, costmap
//! path planning, trajectory discretization into discrete commands, dead
//! reckoning, and the goal-decision rule.

mod deadreckon;
mod discretize;
mod goal;
mod pgm;
mod plan;

pub use deadreckon::{dead_reckon, MinecraftSpeed, MotionProfile, FORWARD_STEP, TURN_STEP};
pub use discretize::discretize;
pub use goal::{goal_decision, GoalDecisionError};
pub use pgm::{read_map_pgm, write_map_pgm, read_commands, write_commands, MapIoError};
pub use plan::{plan_path, PlanError, COSTMAP_INFLATION_RADIUS};

use crate::scene::TriMesh;
use nalgebra::{Vector2, Vector3};

/// Planar robot pose: position in meters + heading in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2 {
    pub pos: Vector2<f64>,
    pub yaw: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Self { pos: Vector2::new(x, y), yaw }
    }
}

/// Discrete agent commands; sequences end with Done.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Forward,
    Left,
    Right,
    Done,
}

pub type CommandSeq = Vec<Command>;

/// Collision model of the robot: a bounding box, with environment faces
/// within `floor_tolerance` of the ground ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotSpec {
    pub width: f64,
    pub depth: f64,
    pub height: f64,
    pub floor_tolerance: f64,
}

impl Default for RobotSpec {
    fn default() -> Self {
        Self { width: 0.6, depth: 0.6, height: 1.6, floor_tolerance: 0.05 }
    }
}

/// Planar grid of traversable/blocked cells.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyMap2D {
    pub cell_size: f64,
    pub width: usize,
    pub height: usize,
    pub origin: Vector2<f64>,
    blocked: Vec<bool>,
}

impl OccupancyMap2D {
    pub fn new_free(width: usize, height: usize, cell_size: f64, origin: Vector2<f64>) -> Self {
        assert!(width > 0 && height > 0 && cell_size > 0.0);
        Self { cell_size, width, height, origin, blocked: vec![false; width * height] }
    }

    #[inline]
    fn index(&self, x: usize, y: usize) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y * self.width + x
    }

    pub fn is_blocked(&self, x: usize, y: usize) -> bool {
        self.blocked[self.index(x, y)]
    }

    pub fn set_blocked(&mut self, x: usize, y: usize, blocked: bool) {
        let i = self.index(x, y);
        self.blocked[i] = blocked;
    }

    pub fn cell_center(&self, x: usize, y: usize) -> Vector2<f64> {
        self.origin + Vector2::new((x as f64 + 0.5) * self.cell_size, (y as f64 + 0.5) * self.cell_size)
    }

    pub fn world_to_cell(&self, p: Vector2<f64>) -> Option<(usize, usize)> {
        let rel = (p - self.origin) / self.cell_size;
        if rel.x < 0.0 || rel.y < 0.0 {
            return None;
        }
        let (x, y) = (rel.x.floor() as usize, rel.y.floor() as usize);
        (x < self.width && y < self.height).then_some((x, y))
    }

    pub fn count_blocked(&self) -> usize {
        self.blocked.iter().filter(|&&b| b).count()
    }
}

/// Triangle/axis-aligned-box overlap via the separating axis theorem
/// (box axes, triangle normal, and the nine edge cross products).
fn triangle_intersects_aabb(tri: &[Vector3<f64>; 3], center: Vector3<f64>, half: Vector3<f64>) -> bool {
    let v: Vec<Vector3<f64>> = tri.iter().map(|p| p - center).collect();
    let edges = [v[1] - v[0], v[2] - v[1], v[0] - v[2]];

    // box axes
    for axis in 0..3 {
        let (min, max) = v.iter().fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p[axis]), hi.max(p[axis])));
        if min > half[axis] || max < -half[axis] {
            return false;
        }
    }
    // triangle plane
    let n = edges[0].cross(&edges[1]);
    let d = n.dot(&v[0]);
    let r = half.x * n.x.abs() + half.y * n.y.abs() + half.z * n.z.abs();
    if d.abs() > r {
        return false;
    }
    // cross-product axes
    let units = [Vector3::x(), Vector3::y(), Vector3::z()];
    for e in &edges {
        for u in &units {
            let axis = u.cross(e);
            if axis.norm_squared() < 1e-24 {
                continue;
            }
            let r = half.x * axis.x.abs() + half.y * axis.y.abs() + half.z * axis.z.abs();
            let p: Vec<f64> = v.iter().map(|q| q.dot(&axis)).collect();
            let (min, max) = p.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            if min > r || max < -r {
                return false;
            }
        }
    }
    true
}

/// Rasterizes the environment into a cell grid: a cell is blocked when the
/// robot box centered there intersects any triangle above the floor band.
/// The map covers the mesh's xy bounds padded by the robot half-extent.
pub fn build_map(env: &TriMesh, robot: &RobotSpec, cell_size: f64) -> OccupancyMap2D {
    let (lo, hi) = env.bounds().unwrap_or((Vector3::zeros(), Vector3::new(1.0, 1.0, 0.0)));
    let pad = robot.width.max(robot.depth);
    let origin = Vector2::new(lo.x - pad, lo.y - pad);
    let width = (((hi.x + pad - origin.x) / cell_size).ceil() as usize).max(1);
    let height = (((hi.y + pad - origin.y) / cell_size).ceil() as usize).max(1);
    let mut map = OccupancyMap2D::new_free(width, height, cell_size, origin);

    let half = Vector3::new(robot.width / 2.0, robot.depth / 2.0, (robot.height - robot.floor_tolerance) / 2.0);
    let box_center_z = robot.floor_tolerance + half.z;

    for t in 0..env.triangles.len() {
        let tri = env.triangle_vertices(t);
        // faces entirely inside the floor band are ignored
        if tri.iter().all(|p| p.z <= robot.floor_tolerance) {
            continue;
        }
        let (tlo, thi) = tri.iter().fold(
            (Vector3::repeat(f64::MAX), Vector3::repeat(f64::MIN)),
            |(lo, hi), p| (lo.inf(p), hi.sup(p)),
        );
        let x0 = map.world_to_cell(Vector2::new(tlo.x - half.x, tlo.y - half.y)).map_or(0, |(x, _)| x);
        let y0 = map.world_to_cell(Vector2::new(tlo.x - half.x, tlo.y - half.y)).map_or(0, |(_, y)| y);
        let x1 = map
            .world_to_cell(Vector2::new(thi.x + half.x, thi.y + half.y))
            .map_or(width - 1, |(x, _)| x);
        let y1 = map
            .world_to_cell(Vector2::new(thi.x + half.x, thi.y + half.y))
            .map_or(height - 1, |(_, y)| y);
        for cy in y0..=y1 {
            for cx in x0..=x1 {
                if map.is_blocked(cx, cy) {
                    continue;
                }
                let c2 = map.cell_center(cx, cy);
                let center = Vector3::new(c2.x, c2.y, box_center_z);
                if triangle_intersects_aabb(&tri, center, half) {
                    map.set_blocked(cx, cy, true);
                }
            }
        }
    }
    map
}
