//! Procedural mesh fixtures: closed, outward-oriented primitives centered at
//! the origin.

use super::TriMesh;
use nalgebra::Vector3;

/// Axis-aligned box with extents (dx, dy, dz).
pub fn cuboid(dx: f64, dy: f64, dz: f64) -> TriMesh {
    let (hx, hy, hz) = (dx / 2.0, dy / 2.0, dz / 2.0);
    let vertices = vec![
        Vector3::new(-hx, -hy, -hz),
        Vector3::new(hx, -hy, -hz),
        Vector3::new(hx, hy, -hz),
        Vector3::new(-hx, hy, -hz),
        Vector3::new(-hx, -hy, hz),
        Vector3::new(hx, -hy, hz),
        Vector3::new(hx, hy, hz),
        Vector3::new(-hx, hy, hz),
    ];
    let triangles = vec![
        [0, 2, 1],
        [0, 3, 2], // bottom (-z)
        [4, 5, 6],
        [4, 6, 7], // top (+z)
        [0, 1, 5],
        [0, 5, 4], // -y
        [2, 3, 7],
        [2, 7, 6], // +y
        [1, 2, 6],
        [1, 6, 5], // +x
        [3, 0, 4],
        [3, 4, 7], // -x
    ];
    TriMesh::new(vertices, triangles).expect("cuboid is non-degenerate")
}

pub fn unit_cube() -> TriMesh {
    cuboid(1.0, 1.0, 1.0)
}

/// UV sphere; `rings >= 2`, `segments >= 3`.
pub fn uv_sphere(radius: f64, rings: usize, segments: usize) -> TriMesh {
    assert!(rings >= 2 && segments >= 3);
    let mut vertices = vec![Vector3::new(0.0, 0.0, radius)];
    for r in 1..rings {
        let phi = std::f64::consts::PI * r as f64 / rings as f64;
        for s in 0..segments {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / segments as f64;
            vertices.push(Vector3::new(
                radius * phi.sin() * theta.cos(),
                radius * phi.sin() * theta.sin(),
                radius * phi.cos(),
            ));
        }
    }
    vertices.push(Vector3::new(0.0, 0.0, -radius));
    let south = vertices.len() - 1;
    let ring = |r: usize, s: usize| 1 + (r - 1) * segments + (s % segments);

    let mut triangles = Vec::new();
    for s in 0..segments {
        triangles.push([0, ring(1, s), ring(1, s + 1)]);
    }
    for r in 1..rings - 1 {
        for s in 0..segments {
            let (a, b) = (ring(r, s), ring(r, s + 1));
            let (c, d) = (ring(r + 1, s), ring(r + 1, s + 1));
            triangles.push([a, c, d]);
            triangles.push([a, d, b]);
        }
    }
    for s in 0..segments {
        triangles.push([south, ring(rings - 1, s + 1), ring(rings - 1, s)]);
    }
    TriMesh::new(vertices, triangles).expect("sphere is non-degenerate")
}

/// Closed cylinder along z.
pub fn cylinder(radius: f64, height: f64, segments: usize) -> TriMesh {
    assert!(segments >= 3);
    let hz = height / 2.0;
    let mut vertices = Vec::new();
    for &z in &[-hz, hz] {
        for s in 0..segments {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / segments as f64;
            vertices.push(Vector3::new(radius * theta.cos(), radius * theta.sin(), z));
        }
    }
    let bottom_center = vertices.len();
    vertices.push(Vector3::new(0.0, 0.0, -hz));
    let top_center = vertices.len();
    vertices.push(Vector3::new(0.0, 0.0, hz));

    let mut triangles = Vec::new();
    for s in 0..segments {
        let s1 = (s + 1) % segments;
        let (b0, b1) = (s, s1);
        let (t0, t1) = (segments + s, segments + s1);
        triangles.push([b0, t0, t1]);
        triangles.push([b0, t1, b1]);
        triangles.push([bottom_center, b1, b0]);
        triangles.push([top_center, t0, t1]);
    }
    TriMesh::new(vertices, triangles).expect("cylinder is non-degenerate")
}

/// Octahedron (the voxel "diamond" at mesh scale).
pub fn octahedron(radius: f64) -> TriMesh {
    let vertices = vec![
        Vector3::new(radius, 0.0, 0.0),
        Vector3::new(-radius, 0.0, 0.0),
        Vector3::new(0.0, radius, 0.0),
        Vector3::new(0.0, -radius, 0.0),
        Vector3::new(0.0, 0.0, radius),
        Vector3::new(0.0, 0.0, -radius),
    ];
    let triangles = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    TriMesh::new(vertices, triangles).expect("octahedron is non-degenerate")
}

/// Axis-aligned plane facing -z at height z, spanning [-half, half]^2.
pub fn square_plane(half: f64, z: f64) -> TriMesh {
    let vertices = vec![
        Vector3::new(-half, -half, z),
        Vector3::new(half, -half, z),
        Vector3::new(half, half, z),
        Vector3::new(-half, half, z),
    ];
    TriMesh::new(vertices, vec![[0, 2, 1], [0, 3, 2]]).expect("plane is non-degenerate")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn primitives_are_watertight_and_outward() {
        for mesh in [unit_cube(), uv_sphere(1.0, 8, 12), cylinder(0.5, 1.0, 10), octahedron(1.0)] {
            assert!(mesh.is_watertight());
            assert!(mesh.signed_volume() > 0.0);
        }
    }

    #[test]
    fn cube_volume_is_exact() {
        assert_relative_eq!(cuboid(2.0, 3.0, 4.0).signed_volume(), 24.0, epsilon = 1e-12);
    }

    #[test]
    fn sphere_volume_converges() {
        let mesh = uv_sphere(1.0, 48, 64);
        let v = mesh.signed_volume();
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        assert!((v - exact).abs() / exact < 0.01, "v = {v}");
    }
}
