//! Expert path planning: Dijkstra over the 8-connected grid with an
//! exponential obstacle-proximity penalty.

use super::{OccupancyMap2D, Pose2};
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("start cell is blocked or outside the map")]
    BadStart,
    #[error("goal cell is blocked or outside the map")]
    BadGoal,
    #[error("no path between start and goal")]
    NoPath,
}

/// Obstacle proximity below which cells are penalized, meters.
pub const COSTMAP_INFLATION_RADIUS: f64 = 0.3;
/// Penalty magnitude (in cell-length units) at zero clearance.
const INFLATION_WEIGHT: f64 = 5.0;
/// Penalty decay length, meters.
const INFLATION_DECAY: f64 = 0.1;

/// Per-cell obstacle clearance in meters (8-connected chamfer distance),
/// capped at the inflation radius.
fn clearance_field(map: &OccupancyMap2D) -> Vec<f64> {
    let (w, h) = (map.width, map.height);
    let cap = COSTMAP_INFLATION_RADIUS / map.cell_size;
    let mut dist = vec![cap; w * h];
    let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
    for y in 0..h {
        for x in 0..w {
            if map.is_blocked(x, y) {
                dist[y * w + x] = 0.0;
                heap.push(HeapEntry { cost: 0.0, x, y });
            }
        }
    }
    while let Some(HeapEntry { cost, x, y }) = heap.pop() {
        if cost > dist[y * w + x] {
            continue;
        }
        for (dx, dy, step) in NEIGHBORS {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            let next = cost + step;
            if next < dist[ny * w + nx] && next < cap {
                dist[ny * w + nx] = next;
                heap.push(HeapEntry { cost: next, x: nx, y: ny });
            }
        }
    }
    dist.iter().map(|d| d * map.cell_size).collect()
}

/// Cost (in cell lengths) of entering a cell with the given clearance.
pub(crate) fn inflation_penalty(clearance_m: f64) -> f64 {
    if clearance_m >= COSTMAP_INFLATION_RADIUS {
        0.0
    } else {
        INFLATION_WEIGHT * (-clearance_m / INFLATION_DECAY).exp()
    }
}

const SQRT2: f64 = std::f64::consts::SQRT_2;
const NEIGHBORS: [(i64, i64, f64); 8] = [
    (1, 0, 1.0),
    (-1, 0, 1.0),
    (0, 1, 1.0),
    (0, -1, 1.0),
    (1, 1, SQRT2),
    (1, -1, SQRT2),
    (-1, 1, SQRT2),
    (-1, -1, SQRT2),
];

/// Max-heap entry ordered for a min-heap by cost, with lexicographic (y, x)
/// tie-breaking for determinism.
struct HeapEntry {
    cost: f64,
    x: usize,
    y: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.y.cmp(&self.y))
            .then_with(|| other.x.cmp(&self.x))
    }
}

/// Edge weight of moving into `to` over a `step`-length move (cell units).
pub(crate) fn edge_cost(step: f64, clearance_to_m: f64) -> f64 {
    step + inflation_penalty(clearance_to_m)
}

/// Shortest 8-connected path under base-plus-inflation cost. Waypoints are
/// cell centers; each pose's heading faces the next waypoint (the last keeps
/// the incoming heading). Returns the poses and the total cost in cell
/// units.
pub fn plan_path(
    map: &OccupancyMap2D,
    start: (usize, usize),
    goal: (usize, usize),
) -> Result<(Vec<Pose2>, f64), PlanError> {
    let (w, h) = (map.width, map.height);
    if start.0 >= w || start.1 >= h || map.is_blocked(start.0, start.1) {
        return Err(PlanError::BadStart);
    }
    if goal.0 >= w || goal.1 >= h || map.is_blocked(goal.0, goal.1) {
        return Err(PlanError::BadGoal);
    }
    let clearance = clearance_field(map);

    let mut dist = vec![f64::INFINITY; w * h];
    let mut prev: Vec<u32> = vec![u32::MAX; w * h];
    let mut heap = BinaryHeap::new();
    dist[start.1 * w + start.0] = 0.0;
    heap.push(HeapEntry { cost: 0.0, x: start.0, y: start.1 });

    while let Some(HeapEntry { cost, x, y }) = heap.pop() {
        if (x, y) == goal {
            break;
        }
        if cost > dist[y * w + x] {
            continue;
        }
        for (dx, dy, step) in NEIGHBORS {
            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
            if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            if map.is_blocked(nx, ny) {
                continue;
            }
            // no corner cutting on diagonal moves
            if dx != 0 && dy != 0 && (map.is_blocked(nx, y) || map.is_blocked(x, ny)) {
                continue;
            }
            let next = cost + edge_cost(step, clearance[ny * w + nx]);
            let slot = &mut dist[ny * w + nx];
            if next < *slot {
                *slot = next;
                prev[ny * w + nx] = (y * w + x) as u32;
                heap.push(HeapEntry { cost: next, x: nx, y: ny });
            }
        }
    }

    let total = dist[goal.1 * w + goal.0];
    if !total.is_finite() {
        return Err(PlanError::NoPath);
    }

    let mut cells = vec![goal];
    let mut cur = goal.1 * w + goal.0;
    while cells.last() != Some(&start) {
        let p = prev[cur] as usize;
        cells.push((p % w, p / w));
        cur = p;
    }
    cells.reverse();

    let mut poses: Vec<Pose2> = Vec::with_capacity(cells.len());
    for (i, &(x, y)) in cells.iter().enumerate() {
        let here = map.cell_center(x, y);
        let yaw = if i + 1 < cells.len() {
            let next = map.cell_center(cells[i + 1].0, cells[i + 1].1);
            (next.y - here.y).atan2(next.x - here.x)
        } else if let Some(last) = poses.last() {
            last.yaw
        } else {
            0.0
        };
        poses.push(Pose2 { pos: here, yaw });
    }
    Ok((poses, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector2;

    fn free_map(w: usize, h: usize) -> OccupancyMap2D {
        OccupancyMap2D::new_free(w, h, 0.01, Vector2::zeros())
    }

    /// Brute-force Bellman-Ford over the same edge weights: independent of
    /// the priority-queue search.
    fn bellman_ford_cost(map: &OccupancyMap2D, start: (usize, usize), goal: (usize, usize)) -> Option<f64> {
        let (w, h) = (map.width, map.height);
        let clearance = clearance_field(map);
        let mut dist = vec![f64::INFINITY; w * h];
        dist[start.1 * w + start.0] = 0.0;
        for _ in 0..w * h {
            let mut changed = false;
            for y in 0..h {
                for x in 0..w {
                    let d = dist[y * w + x];
                    if !d.is_finite() || map.is_blocked(x, y) {
                        continue;
                    }
                    for (dx, dy, step) in NEIGHBORS {
                        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        if map.is_blocked(nx, ny) {
                            continue;
                        }
                        if dx != 0 && dy != 0 && (map.is_blocked(nx, y) || map.is_blocked(x, ny)) {
                            continue;
                        }
                        let nd = d + edge_cost(step, clearance[ny * w + nx]);
                        if nd < dist[ny * w + nx] - 1e-15 {
                            dist[ny * w + nx] = nd;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist[goal.1 * w + goal.0].is_finite().then(|| dist[goal.1 * w + goal.0])
    }

    #[test]
    fn straight_corridor_is_straight() {
        let map = free_map(60, 9);
        let (poses, cost) = plan_path(&map, (2, 4), (57, 4)).unwrap();
        assert_eq!(poses.len(), 56);
        assert!(poses.iter().all(|p| (p.pos.y - map.cell_center(0, 4).y).abs() < 1e-12));
        let euclid = (poses.last().unwrap().pos - poses[0].pos).norm() / map.cell_size;
        assert!((cost - euclid).abs() <= 1.0 + 1e-9, "cost {cost} vs euclid {euclid}");
    }

    #[test]
    fn walled_goal_has_no_path() {
        let mut map = free_map(20, 20);
        for y in 0..20 {
            map.set_blocked(10, y, true);
        }
        assert!(matches!(plan_path(&map, (2, 10), (15, 10)), Err(PlanError::NoPath)));
        assert!(matches!(plan_path(&map, (10, 3), (15, 10)), Err(PlanError::BadStart)));
    }

    #[test]
    fn dijkstra_matches_bellman_ford_on_random_maps() {
        use rand::Rng;
        let mut r = crate::rng::from_seed(31);
        for trial in 0..20 {
            let (w, h) = (r.gen_range(10..=50), r.gen_range(10..=50));
            let mut map = free_map(w, h);
            for _ in 0..(w * h / 6) {
                map.set_blocked(r.gen_range(0..w), r.gen_range(0..h), true);
            }
            let start = (r.gen_range(0..w), r.gen_range(0..h));
            let goal = (r.gen_range(0..w), r.gen_range(0..h));
            let planned = plan_path(&map, start, goal);
            let oracle = match (start, goal) {
                _ if map.is_blocked(start.0, start.1) || map.is_blocked(goal.0, goal.1) => None,
                _ => bellman_ford_cost(&map, start, goal),
            };
            match (planned, oracle) {
                (Ok((_, cost)), Some(expected)) => {
                    assert!((cost - expected).abs() < 1e-9, "trial {trial}: {cost} vs {expected}");
                }
                (Err(_), None) => {}
                (got, want) => panic!("trial {trial}: mismatch {got:?} vs {want:?}"),
            }
        }
    }

    #[test]
    fn path_length_at_least_straight_line() {
        use rand::Rng;
        let mut r = crate::rng::from_seed(77);
        for _ in 0..20 {
            let map = free_map(40, 40);
            let start = (r.gen_range(0..40), r.gen_range(0..40));
            let goal = (r.gen_range(0..40), r.gen_range(0..40));
            let (poses, cost) = plan_path(&map, start, goal).unwrap();
            let straight = (map.cell_center(goal.0, goal.1) - map.cell_center(start.0, start.1)).norm()
                / map.cell_size;
            assert!(cost >= straight - 1e-9, "cost {cost} < straight {straight}");
            // geometric length of the returned waypoints likewise
            let len: f64 = poses.windows(2).map(|w| (w[1].pos - w[0].pos).norm()).sum::<f64>()
                / map.cell_size;
            assert!(len >= straight - 1e-9);
            assert!(len <= straight + SQRT2 + 1e-9, "empty map detour {len} vs {straight}");
        }
    }

    #[test]
    fn inflation_penalty_decays_and_vanishes() {
        assert_eq!(inflation_penalty(COSTMAP_INFLATION_RADIUS), 0.0);
        assert_eq!(inflation_penalty(1.0), 0.0);
        let near = inflation_penalty(0.01);
        let mid = inflation_penalty(0.1);
        let far = inflation_penalty(0.25);
        assert!(near > mid && mid > far && far > 0.0);
    }

    #[test]
    fn planner_keeps_margin_from_obstacles() {
        // 5 cm cells; a 4x4 pillar in the middle of a corridor. The straight
        // route hugs the pillar (5 cm clearance); the inflation penalty makes
        // a one-cell margin cheaper.
        let mut map = OccupancyMap2D::new_free(60, 21, 0.05, Vector2::zeros());
        for y in 9..13 {
            for x in 28..32 {
                map.set_blocked(x, y, true);
            }
        }
        let (poses, _) = plan_path(&map, (3, 10), (56, 10)).unwrap();
        for p in &poses {
            let (cx, cy) = map.world_to_cell(p.pos).unwrap();
            let adjacent = (27..=32).contains(&cx) && (8..=13).contains(&cy);
            assert!(!adjacent, "path hugs the pillar at ({cx},{cy})");
        }
    }
}
