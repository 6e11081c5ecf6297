//! Synthetic sensing: meshes, camera models, depth rendering, view sweeps,
//! tabletop segmentation, tactile probing, and the conjoined-half-shapes
//! generator.

mod halfshape;
mod off;
mod pfm;
pub mod primitives;
pub(crate) mod render;
mod segment;
mod tactile;
mod views;

pub use halfshape::{make_half_shape, HalfShapeKind, HALF_SHAPE_RAYS};
pub use off::{load_mesh, write_mesh, OffError};
pub use pfm::{read_pfm, write_pfm, PfmError};
pub use render::render_depth;
pub use segment::{segment_tabletop, Plane, SegmentError};
pub use tactile::sample_tactile;
pub use views::{enumerate_views, panorama_poses, view_count};

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PoseError {
    #[error("rotation is not orthonormal (max deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("rotation is not proper (det = {0:.6})")]
    NotProper(f64),
}

/// Rigid transform: `x_world = R * x_local + t`.
///
/// For cameras the local frame looks along +z with +x right and +y up;
/// `rotation`/`translation` map camera coordinates into the world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl Pose {
    /// Validates RᵀR = I within 1e-9 and det R = +1.
    pub fn try_new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self, PoseError> {
        let dev = (rotation.transpose() * rotation - Matrix3::identity()).abs().max();
        if dev > 1e-9 {
            return Err(PoseError::NotOrthonormal(dev));
        }
        let det = rotation.determinant();
        if (det - 1.0).abs() > 1e-9 {
            return Err(PoseError::NotProper(det));
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Vector3::zeros() }
    }

    pub fn from_euler(roll: f64, pitch: f64, yaw: f64) -> Self {
        let r = nalgebra::Rotation3::from_euler_angles(roll, pitch, yaw).into_inner();
        Self { rotation: r, translation: Vector3::zeros() }
    }

    /// Rotation about the world vertical (z) axis.
    pub fn from_yaw(yaw: f64) -> Self {
        Self::from_euler(0.0, 0.0, yaw)
    }

    pub fn with_translation(mut self, t: Vector3<f64>) -> Self {
        self.translation = t;
        self
    }

    /// Camera-to-world pose with the optical axis (+z) aimed from `eye` at
    /// `target`. `up` controls the image vertical.
    pub fn look_at(eye: Vector3<f64>, target: Vector3<f64>, up: Vector3<f64>) -> Self {
        let fwd = (target - eye).normalize();
        let mut right = fwd.cross(&up);
        if right.norm() < 1e-12 {
            // up parallel to view direction; pick any perpendicular
            let alt = if fwd.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
            right = fwd.cross(&alt);
        }
        let right = right.normalize();
        let down_up = right.cross(&fwd); // completes right-handed (x=right, y=up, z=fwd)
        let rotation = Matrix3::from_columns(&[right, down_up, fwd]);
        Self { rotation, translation: eye }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> Vector3<f64> {
        self.translation
    }

    pub fn transform_point(&self, p: Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn transform_dir(&self, d: Vector3<f64>) -> Vector3<f64> {
        self.rotation * d
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let rt = self.rotation.transpose();
        Pose { rotation: rt, translation: -(rt * self.translation) }
    }

    /// Heading = rotation of the local +x axis about world z, in radians.
    pub fn heading(&self) -> f64 {
        self.rotation[(1, 0)].atan2(self.rotation[(0, 0)])
    }
}

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("triangle {tri} references vertex {index} out of range ({nverts} vertices)")]
    IndexOutOfRange { tri: usize, index: usize, nverts: usize },
    #[error("vertex {0} has non-finite coordinates")]
    NonFinite(usize),
    #[error("mesh has no non-degenerate triangles")]
    AllDegenerate,
}

/// Indexed triangle mesh. Degenerate (zero-area) triangles are dropped at
/// construction; a mesh that loses every triangle is rejected.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vector3<f64>>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        for (i, v) in vertices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(MeshError::NonFinite(i));
            }
        }
        let had_triangles = !triangles.is_empty();
        let mut kept = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.into_iter().enumerate() {
            for &index in &tri {
                if index >= vertices.len() {
                    return Err(MeshError::IndexOutOfRange { tri: t, index, nverts: vertices.len() });
                }
            }
            let [a, b, c] = tri;
            let area2 = (vertices[b] - vertices[a]).cross(&(vertices[c] - vertices[a])).norm();
            if area2 > 1e-18 {
                kept.push(tri);
            }
        }
        if had_triangles && kept.is_empty() {
            return Err(MeshError::AllDegenerate);
        }
        Ok(Self { vertices, triangles: kept })
    }

    /// Empty mesh (renders to an all-miss raster).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn transformed(&self, pose: &Pose) -> TriMesh {
        TriMesh {
            vertices: self.vertices.iter().map(|v| pose.transform_point(*v)).collect(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn triangle_vertices(&self, t: usize) -> [Vector3<f64>; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_vertices(t);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Signed volume by the divergence theorem; positive for outward-oriented
    /// closed surfaces.
    pub fn signed_volume(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_vertices(t);
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    pub fn bounds(&self) -> Option<(Vector3<f64>, Vector3<f64>)> {
        if self.vertices.is_empty() {
            return None;
        }
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        Some((lo, hi))
    }

    /// True when every edge is shared by exactly two triangles.
    pub fn is_watertight(&self) -> bool {
        use std::collections::HashMap;
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = if a < b { (a, b) } else { (b, a) };
                *counts.entry(key).or_insert(0) += 1;
            }
        }
        !self.triangles.is_empty() && counts.values().all(|&c| c == 2)
    }
}

#[derive(Debug, Error)]
pub enum CameraError {
    #[error("image dimensions must be positive")]
    BadDimensions,
    #[error("vertical field of view must lie in (0, pi)")]
    BadFov,
    #[error("max range must be positive")]
    BadRange,
}

/// Pinhole camera with square pixels; rays pass through pixel centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    pub width: usize,
    pub height: usize,
    pub vertical_fov: f64,
    pub max_range: f64,
}

impl CameraModel {
    pub fn new(width: usize, height: usize, vertical_fov: f64, max_range: f64) -> Result<Self, CameraError> {
        if width == 0 || height == 0 {
            return Err(CameraError::BadDimensions);
        }
        if !(vertical_fov > 0.0 && vertical_fov < std::f64::consts::PI) {
            return Err(CameraError::BadFov);
        }
        if max_range <= 0.0 {
            return Err(CameraError::BadRange);
        }
        Ok(Self { width, height, vertical_fov, max_range })
    }

    /// 480x480, 45 degree vertical field of view, 2 m range.
    pub fn default_sensor() -> Self {
        Self { width: 480, height: 480, vertical_fov: 45f64.to_radians(), max_range: 2.0 }
    }

    /// Unit ray direction in the camera frame through the center of pixel
    /// (col, row); row 0 is the top image row.
    pub fn pixel_ray(&self, col: usize, row: usize) -> Vector3<f64> {
        let tan_half = (self.vertical_fov / 2.0).tan();
        let aspect = self.width as f64 / self.height as f64;
        let u = (col as f64 + 0.5) / self.width as f64;
        let v = (row as f64 + 0.5) / self.height as f64;
        let x = (2.0 * u - 1.0) * tan_half * aspect;
        let y = (1.0 - 2.0 * v) * tan_half;
        Vector3::new(x, y, 1.0).normalize()
    }

    /// Inverse of [`pixel_ray`](Self::pixel_ray): pixel containing the
    /// projection of a camera-frame point with z > 0.
    pub fn project(&self, p: Vector3<f64>) -> Option<(usize, usize)> {
        if p.z <= 0.0 {
            return None;
        }
        let tan_half = (self.vertical_fov / 2.0).tan();
        let aspect = self.width as f64 / self.height as f64;
        let x = p.x / p.z / (tan_half * aspect);
        let y = p.y / p.z / tan_half;
        let u = (x + 1.0) / 2.0;
        let v = (1.0 - y) / 2.0;
        let col = (u * self.width as f64).floor();
        let row = (v * self.height as f64).floor();
        if col < 0.0 || row < 0.0 || col >= self.width as f64 || row >= self.height as f64 {
            return None;
        }
        Some((col as usize, row as usize))
    }
}

/// 2.5D depth raster: per-pixel distance along the pixel ray to the first
/// surface, `f64::INFINITY` where nothing was hit within range.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthView {
    pub camera: CameraModel,
    pub pose: Pose,
    depth: Vec<f64>,
}

impl DepthView {
    /// `depth` is row-major, row 0 on top. Finite values must lie in
    /// (0, max_range].
    pub fn new(camera: CameraModel, pose: Pose, depth: Vec<f64>) -> Self {
        assert_eq!(depth.len(), camera.width * camera.height, "raster size mismatch");
        debug_assert!(depth
            .iter()
            .all(|&d| d.is_infinite() || (d > 0.0 && d <= camera.max_range)));
        Self { camera, pose, depth }
    }

    pub fn depth(&self, col: usize, row: usize) -> f64 {
        self.depth[row * self.camera.width + col]
    }

    pub fn raster(&self) -> &[f64] {
        &self.depth
    }

    /// Back-projects every finite pixel into the camera frame.
    pub fn points_camera_frame(&self) -> Vec<Vector3<f64>> {
        let mut pts = Vec::new();
        for row in 0..self.camera.height {
            for col in 0..self.camera.width {
                let d = self.depth(col, row);
                if d.is_finite() {
                    pts.push(self.camera.pixel_ray(col, row) * d);
                }
            }
        }
        pts
    }

    /// Back-projects every finite pixel into the world frame.
    pub fn points_world(&self) -> Vec<Vector3<f64>> {
        self.points_camera_frame()
            .into_iter()
            .map(|p| self.pose.transform_point(p))
            .collect()
    }
}

/// Simulated touch contacts as voxel coordinates, deduplicated, in probe
/// order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TactileSet {
    contacts: Vec<[usize; 3]>,
}

impl TactileSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ignores exact duplicates.
    pub fn push(&mut self, contact: [usize; 3]) {
        if !self.contacts.contains(&contact) {
            self.contacts.push(contact);
        }
    }

    pub fn contacts(&self) -> &[[usize; 3]] {
        &self.contacts
    }

    pub fn len(&self) -> usize {
        self.contacts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contacts.is_empty()
    }
}

impl FromIterator<[usize; 3]> for TactileSet {
    fn from_iter<I: IntoIterator<Item = [usize; 3]>>(iter: I) -> Self {
        let mut set = TactileSet::new();
        for c in iter {
            set.push(c);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pose_rejects_sheared_rotation() {
        let mut m = Matrix3::identity();
        m[(0, 1)] = 0.01;
        assert!(Pose::try_new(m, Vector3::zeros()).is_err());
    }

    #[test]
    fn pose_rejects_reflection() {
        let mut m = Matrix3::identity();
        m[(2, 2)] = -1.0;
        assert!(matches!(Pose::try_new(m, Vector3::zeros()), Err(PoseError::NotProper(_))));
    }

    #[test]
    fn look_at_points_optical_axis_at_target() {
        let eye = Vector3::new(0.3, -0.4, 0.2);
        let target = Vector3::new(0.0, 0.0, 0.0);
        let pose = Pose::look_at(eye, target, Vector3::z());
        let axis = pose.transform_dir(Vector3::z());
        assert_relative_eq!(axis.dot(&(target - eye).normalize()), 1.0, epsilon = 1e-12);
        // proper rigid transform
        Pose::try_new(*pose.rotation(), pose.translation()).unwrap();
    }

    #[test]
    fn compose_inverse_is_identity() {
        let p = Pose::from_euler(0.3, -0.2, 1.1).with_translation(Vector3::new(1.0, 2.0, 3.0));
        let q = p.compose(&p.inverse());
        assert_relative_eq!(*q.rotation(), Matrix3::identity(), epsilon = 1e-12);
        assert_relative_eq!(q.translation(), Vector3::zeros(), epsilon = 1e-12);
    }

    #[test]
    fn mesh_drops_degenerate_triangles() {
        let verts = vec![
            Vector3::new(0.0, 0.0, 0.0),
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
        ];
        let mesh = TriMesh::new(verts.clone(), vec![[0, 1, 2], [0, 1, 1]]).unwrap();
        assert_eq!(mesh.triangles.len(), 1);
        assert!(matches!(TriMesh::new(verts, vec![[0, 0, 0]]), Err(MeshError::AllDegenerate)));
    }

    #[test]
    fn pixel_ray_center_is_optical_axis() {
        let cam = CameraModel::new(3, 3, 0.8, 2.0).unwrap();
        let ray = cam.pixel_ray(1, 1);
        assert_relative_eq!(ray, Vector3::z(), epsilon = 1e-12);
    }

    #[test]
    fn project_inverts_pixel_ray() {
        let cam = CameraModel::new(17, 11, 0.7, 2.0).unwrap();
        for row in 0..cam.height {
            for col in 0..cam.width {
                let p = cam.pixel_ray(col, row) * 1.3;
                assert_eq!(cam.project(p), Some((col, row)));
            }
        }
        assert_eq!(cam.project(Vector3::new(0.0, 0.0, -1.0)), None);
    }

    #[test]
    fn tactile_set_dedupes() {
        let mut t = TactileSet::new();
        t.push([1, 2, 3]);
        t.push([1, 2, 3]);
        t.push([4, 5, 6]);
        assert_eq!(t.len(), 2);
    }
}
