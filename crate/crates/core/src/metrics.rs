//! Evaluation metrics: Jaccard similarity of voxel grids, symmetric mean
//! surface distance between meshes (the reconstruction literature's
//! "Hausdorff" is a sampled mean, and that definition is kept here), and the
//! navigation metrics SPL, OOR, and E2ESPL.

use crate::rng;
use crate::scene::TriMesh;
use crate::voxel::VoxelGrid;
use nalgebra::Vector3;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("grids have different dims or frames")]
    FrameMismatch,
    #[error("mesh has no triangles")]
    EmptyMesh,
    #[error("no successful episodes for OOR")]
    NoSuccesses,
    #[error("no episodes")]
    NoEpisodes,
}

/// Intersection over union of the occupied sets. Both-empty compares equal
/// (1.0).
pub fn jaccard(a: &VoxelGrid, b: &VoxelGrid) -> Result<f64, MetricError> {
    if !a.same_frame(b) {
        return Err(MetricError::FrameMismatch);
    }
    let mut inter = 0usize;
    let mut union = 0usize;
    for (sa, sb) in a.scores().iter().zip(b.scores().iter()) {
        let (oa, ob) = (*sa > 0.5, *sb > 0.5);
        if oa && ob {
            inter += 1;
        }
        if oa || ob {
            union += 1;
        }
    }
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

fn point_triangle_distance_sq(p: &Vector3<f64>, a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    // Ericson-style closest point on triangle.
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return ap.norm_squared();
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return bp.norm_squared();
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (ap - ab * v).norm_squared();
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return cp.norm_squared();
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (ap - ac * w).norm_squared();
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        let bc = c - b;
        return (bp - bc * w).norm_squared();
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (ap - (ab * v + ac * w)).norm_squared()
}

/// Axis-aligned-box BVH over triangles for nearest-surface queries.
struct TriBvh<'m> {
    mesh: &'m TriMesh,
    nodes: Vec<BvhNode>,
}

struct BvhNode {
    lo: Vector3<f64>,
    hi: Vector3<f64>,
    // leaf: triangle index range into `order`; inner: child node ids
    children: Option<(usize, usize)>,
    start: usize,
    end: usize,
}

impl<'m> TriBvh<'m> {
    fn build(mesh: &'m TriMesh) -> (Self, Vec<usize>) {
        let mut order: Vec<usize> = (0..mesh.triangles.len()).collect();
        let mut nodes = Vec::new();
        Self::split(mesh, &mut order, 0, mesh.triangles.len(), &mut nodes);
        (Self { mesh, nodes }, order)
    }

    fn bounds(mesh: &TriMesh, order: &[usize], start: usize, end: usize) -> (Vector3<f64>, Vector3<f64>) {
        let mut lo = Vector3::repeat(f64::MAX);
        let mut hi = Vector3::repeat(f64::MIN);
        for &t in &order[start..end] {
            for v in mesh.triangle_vertices(t) {
                lo = lo.inf(&v);
                hi = hi.sup(&v);
            }
        }
        (lo, hi)
    }

    fn split(mesh: &TriMesh, order: &mut [usize], start: usize, end: usize, nodes: &mut Vec<BvhNode>) -> usize {
        let (lo, hi) = Self::bounds(mesh, order, start, end);
        let id = nodes.len();
        nodes.push(BvhNode { lo, hi, children: None, start, end });
        if end - start > 8 {
            let extent = hi - lo;
            let axis = if extent.x >= extent.y && extent.x >= extent.z {
                0
            } else if extent.y >= extent.z {
                1
            } else {
                2
            };
            let centroid = |t: usize| {
                let [a, b, c] = mesh.triangle_vertices(t);
                (a[axis] + b[axis] + c[axis]) / 3.0
            };
            order[start..end].sort_by(|&x, &y| centroid(x).total_cmp(&centroid(y)));
            let mid = (start + end) / 2;
            let left = Self::split(mesh, order, start, mid, nodes);
            let right = Self::split(mesh, order, mid, end, nodes);
            nodes[id].children = Some((left, right));
        }
        id
    }

    fn box_distance_sq(node: &BvhNode, p: &Vector3<f64>) -> f64 {
        let mut d = 0.0;
        for axis in 0..3 {
            let v = p[axis];
            if v < node.lo[axis] {
                d += (node.lo[axis] - v).powi(2);
            } else if v > node.hi[axis] {
                d += (v - node.hi[axis]).powi(2);
            }
        }
        d
    }

    fn nearest_sq(&self, order: &[usize], p: &Vector3<f64>) -> f64 {
        let mut best = f64::MAX;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if Self::box_distance_sq(node, p) >= best {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    // visit the nearer child first
                    let dl = Self::box_distance_sq(&self.nodes[l], p);
                    let dr = Self::box_distance_sq(&self.nodes[r], p);
                    if dl <= dr {
                        stack.push(r);
                        stack.push(l);
                    } else {
                        stack.push(l);
                        stack.push(r);
                    }
                }
                None => {
                    for &t in &order[node.start..node.end] {
                        let [a, b, c] = self.mesh.triangle_vertices(t);
                        best = best.min(point_triangle_distance_sq(p, &a, &b, &c));
                    }
                }
            }
        }
        best
    }
}

/// Area-weighted surface samples with a fixed seed.
fn sample_surface(mesh: &TriMesh, samples: usize, seed: u64) -> Vec<Vector3<f64>> {
    let mut cumulative = Vec::with_capacity(mesh.triangles.len());
    let mut total = 0.0;
    for t in 0..mesh.triangles.len() {
        total += mesh.triangle_area(t);
        cumulative.push(total);
    }
    let mut r = rng::from_seed(seed);
    (0..samples)
        .map(|_| {
            let pick = r.gen_range(0.0..total);
            let t = cumulative.partition_point(|&c| c < pick).min(mesh.triangles.len() - 1);
            let [a, b, c] = mesh.triangle_vertices(t);
            // uniform barycentric sample
            let (mut u, mut v) = (r.gen::<f64>(), r.gen::<f64>());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            a + (b - a) * u + (c - a) * v
        })
        .collect()
}

fn mean_surface_distance(from: &TriMesh, to: &TriMesh, samples: usize, seed: u64) -> f64 {
    let (bvh, order) = TriBvh::build(to);
    let pts = sample_surface(from, samples, seed);
    let sum: f64 = pts.iter().map(|p| bvh.nearest_sq(&order, p).sqrt()).sum();
    sum / pts.len() as f64
}

/// Symmetric mean sampled surface distance in millimeters: `samples`
/// area-weighted points per direction, each measured to the closest point on
/// the other surface, averaged over both directions.
pub fn hausdorff_symmetric(a: &TriMesh, b: &TriMesh, samples: usize) -> Result<f64, MetricError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricError::EmptyMesh);
    }
    let samples = samples.max(1);
    let ab = mean_surface_distance(a, b, samples, 0x5eed_ab);
    let ba = mean_surface_distance(b, a, samples, 0x5eed_ba);
    Ok((ab + ba) / 2.0 * 1000.0)
}

/// One navigation (or end-to-end) trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Episode {
    pub success: bool,
    /// Shortest-path length, meters.
    pub optimal_length: f64,
    /// Realized path length, meters.
    pub realized_length: f64,
    /// Pick success for end-to-end scoring.
    pub pick_success: Option<bool>,
}

impl Episode {
    fn spl_term(&self, success: bool) -> f64 {
        if !success {
            return 0.0;
        }
        if self.optimal_length == 0.0 {
            return 1.0; // start on the goal
        }
        self.optimal_length / self.realized_length.max(self.optimal_length)
    }
}

/// Success weighted by path length: mean of S_i * l_i / max(p_i, l_i).
pub fn spl(episodes: &[Episode]) -> Result<f64, MetricError> {
    if episodes.is_empty() {
        return Err(MetricError::NoEpisodes);
    }
    Ok(episodes.iter().map(|e| e.spl_term(e.success)).sum::<f64>() / episodes.len() as f64)
}

/// Observed-over-optimal path length ratio, averaged over successes.
pub fn oor(episodes: &[Episode]) -> Result<f64, MetricError> {
    if episodes.is_empty() {
        return Err(MetricError::NoEpisodes);
    }
    let succ: Vec<&Episode> = episodes.iter().filter(|e| e.success).collect();
    if succ.is_empty() {
        return Err(MetricError::NoSuccesses);
    }
    let sum: f64 = succ
        .iter()
        .map(|e| {
            if e.optimal_length == 0.0 {
                1.0
            } else {
                e.realized_length.max(e.optimal_length) / e.optimal_length
            }
        })
        .sum();
    Ok(sum / succ.len() as f64)
}

/// SPL with the pick-success indicator in place of navigation success.
pub fn e2espl(episodes: &[Episode]) -> Result<f64, MetricError> {
    if episodes.is_empty() {
        return Err(MetricError::NoEpisodes);
    }
    Ok(episodes
        .iter()
        .map(|e| e.spl_term(e.pick_success.unwrap_or(false)))
        .sum::<f64>()
        / episodes.len() as f64)
}

pub fn success_rate(episodes: &[Episode]) -> f64 {
    if episodes.is_empty() {
        return 0.0;
    }
    episodes.iter().filter(|e| e.success).count() as f64 / episodes.len() as f64
}
