//! Marching cubes over voxel-center samples.
//!
//! The full 256-configuration table is generated once at startup by walking
//! closed iso-polygon loops around each cube case: cut edges are paired on
//! every face (ambiguous faces resolve by keeping the inside corners
//! separated, a rule that depends only on shared face data and therefore
//! matches between neighboring cells), loops are oriented outward, and
//! fan-triangulated. Grids are implicitly padded with one empty sample all
//! around, so surfaces close at the grid boundary.

use crate::scene::TriMesh;
use crate::voxel::ScoreGrid;
use nalgebra::Vector3;
use std::collections::HashMap;
use std::sync::OnceLock;

/// Corner i sits at ((i>>0)&1, (i>>1)&1, (i>>2)&1).
fn corner_pos(i: u8) -> Vector3<f64> {
    Vector3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64)
}

/// The 12 cube edges as (low corner, high corner), in a fixed canonical
/// order (pairs differing in exactly one coordinate bit, ascending).
fn edge_list() -> Vec<(u8, u8)> {
    let mut edges = Vec::new();
    for a in 0u8..8 {
        for b in a + 1..8 {
            if (a ^ b).count_ones() == 1 {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Triangulation of one configuration: loops of edge indices, each loop
/// fan-triangulated at runtime.
type CaseTable = Vec<Vec<Vec<u8>>>;

fn build_case(config: u16, edges: &[(u8, u8)]) -> Vec<Vec<u8>> {
    let inside = |c: u8| config & (1 << c) != 0;
    let cut: Vec<u8> = (0..edges.len() as u8)
        .filter(|&e| {
            let (a, b) = edges[e as usize];
            inside(a) != inside(b)
        })
        .collect();
    if cut.is_empty() {
        return Vec::new();
    }

    // Faces: (axis, side). An edge lies on the face when both endpoints have
    // bit(axis) == side.
    let edge_faces = |e: u8| -> [(usize, u8); 2] {
        let (a, b) = edges[e as usize];
        let mut faces = Vec::new();
        for axis in 0..3 {
            let (ba, bb) = ((a >> axis) & 1, (b >> axis) & 1);
            if ba == bb {
                faces.push((axis, ba));
            }
        }
        [faces[0], faces[1]]
    };
    // Inside endpoint of a cut edge.
    let inside_end = |e: u8| -> u8 {
        let (a, b) = edges[e as usize];
        if inside(a) {
            a
        } else {
            b
        }
    };
    // Partner of a cut edge on a given face.
    let partner_on_face = |e: u8, face: (usize, u8)| -> u8 {
        let on_face: Vec<u8> = cut
            .iter()
            .copied()
            .filter(|&c| edge_faces(c).contains(&face))
            .collect();
        match on_face.len() {
            2 => on_face.into_iter().find(|&c| c != e).expect("pair on face"),
            4 => on_face
                .into_iter()
                .find(|&c| c != e && inside_end(c) == inside_end(e))
                .expect("ambiguous face pairs by shared inside corner"),
            n => unreachable!("face with {n} cut edges"),
        }
    };

    let mut remaining: Vec<u8> = cut.clone();
    let mut loops = Vec::new();
    while let Some(&start) = remaining.first() {
        let mut polygon = vec![start];
        let mut face = edge_faces(start)[0];
        let mut current = start;
        loop {
            let next = partner_on_face(current, face);
            if next == start {
                break;
            }
            polygon.push(next);
            let [f0, f1] = edge_faces(next);
            face = if f0 == face { f1 } else { f0 };
            current = next;
        }
        remaining.retain(|e| !polygon.contains(e));

        // Orient the loop so its Newell normal points away from the inside
        // corners it wraps.
        let mid = |e: u8| {
            let (a, b) = edges[e as usize];
            (corner_pos(a) + corner_pos(b)) / 2.0
        };
        let pts: Vec<Vector3<f64>> = polygon.iter().map(|&e| mid(e)).collect();
        let centroid = pts.iter().sum::<Vector3<f64>>() / pts.len() as f64;
        let mut normal = Vector3::zeros();
        for i in 0..pts.len() {
            let p = pts[i];
            let q = pts[(i + 1) % pts.len()];
            normal += (p - centroid).cross(&(q - centroid));
        }
        let inside_centroid = polygon
            .iter()
            .map(|&e| corner_pos(inside_end(e)))
            .sum::<Vector3<f64>>()
            / polygon.len() as f64;
        if normal.dot(&(inside_centroid - centroid)) > 0.0 {
            polygon.reverse();
        }
        loops.push(polygon);
    }
    loops
}

fn case_table() -> &'static CaseTable {
    static TABLE: OnceLock<CaseTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let edges = edge_list();
        (0u16..256).map(|config| build_case(config, &edges)).collect()
    })
}

/// Extracts the isosurface of a score grid at `threshold` (inside means
/// score >= threshold). Samples sit at voxel centers; one empty sample of
/// padding closes the surface at the grid boundary. Vertices interpolate
/// linearly along cut edges; triangles share welded vertices and orient
/// outward.
pub fn marching_cubes(scores: &ScoreGrid, threshold: f64) -> TriMesh {
    let dim = scores.dim() as i64;
    let frame = *scores.frame();
    let edges = edge_list();
    let table = case_table();

    let sample = |x: i64, y: i64, z: i64| -> f64 {
        if x < 0 || y < 0 || z < 0 || x >= dim || y >= dim || z >= dim {
            0.0
        } else {
            scores.get(x as usize, y as usize, z as usize)
        }
    };
    let sample_pos = |x: i64, y: i64, z: i64| -> Vector3<f64> {
        frame.origin
            + Vector3::new(
                (x as f64 + 0.5) * frame.voxel_size,
                (y as f64 + 0.5) * frame.voxel_size,
                (z as f64 + 0.5) * frame.voxel_size,
            )
    };

    let mut vertices: Vec<Vector3<f64>> = Vec::new();
    let mut vertex_ids: HashMap<([i64; 3], u8), usize> = HashMap::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();

    for cz in -1..dim {
        for cy in -1..dim {
            for cx in -1..dim {
                let mut config = 0u16;
                for c in 0u8..8 {
                    let p = corner_pos(c);
                    let s = sample(cx + p.x as i64, cy + p.y as i64, cz + p.z as i64);
                    if s >= threshold {
                        config |= 1 << c;
                    }
                }
                if config == 0 || config == 255 {
                    continue;
                }
                for polygon in &table[config as usize] {
                    let ids: Vec<usize> = polygon
                        .iter()
                        .map(|&e| {
                            let (a, b) = edges[e as usize];
                            let pa = corner_pos(a);
                            let (ax, ay, az) =
                                (cx + pa.x as i64, cy + pa.y as i64, cz + pa.z as i64);
                            let axis = (a ^ b).trailing_zeros() as u8;
                            let key = ([ax, ay, az], axis);
                            *vertex_ids.entry(key).or_insert_with(|| {
                                let pb = corner_pos(b);
                                let (bx, by, bz) =
                                    (cx + pb.x as i64, cy + pb.y as i64, cz + pb.z as i64);
                                let va = sample(ax, ay, az);
                                let vb = sample(bx, by, bz);
                                let t = ((threshold - va) / (vb - va)).clamp(1e-6, 1.0 - 1e-6);
                                let pos = sample_pos(ax, ay, az)
                                    + (sample_pos(bx, by, bz) - sample_pos(ax, ay, az)) * t;
                                vertices.push(pos);
                                vertices.len() - 1
                            })
                        })
                        .collect();
                    for k in 1..ids.len() - 1 {
                        triangles.push([ids[0], ids[k], ids[k + 1]]);
                    }
                }
            }
        }
    }
    TriMesh { vertices, triangles }
}
