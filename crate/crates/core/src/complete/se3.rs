//! Minimal SE(3) log/exp used to split a relative motion into equal screw
//! steps (exp(xi/K) composed K times reproduces the motion exactly).

use crate::scene::Pose;
use nalgebra::{Matrix3, Vector3};

/// Twist (rho, phi): translation part and rotation vector (axis * angle).
#[derive(Debug, Clone, Copy)]
pub struct Twist {
    pub rho: Vector3<f64>,
    pub phi: Vector3<f64>,
}

fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Left Jacobian of SO(3).
fn left_jacobian(phi: &Vector3<f64>) -> Matrix3<f64> {
    let theta = phi.norm();
    if theta < 1e-9 {
        return Matrix3::identity() + 0.5 * skew(phi);
    }
    let a = phi / theta;
    let s = skew(&a);
    Matrix3::identity() * (theta.sin() / theta)
        + (1.0 - theta.sin() / theta) * (a * a.transpose())
        + ((1.0 - theta.cos()) / theta) * s
}

fn rotation_log(r: &Matrix3<f64>) -> Vector3<f64> {
    let cos = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    let theta = cos.acos();
    if theta < 1e-9 {
        return Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]) / 2.0;
    }
    if (std::f64::consts::PI - theta) < 1e-6 {
        // near pi: axis from the symmetric part
        let b = (r + Matrix3::identity()) / 2.0;
        let axis = Vector3::new(b[(0, 0)].sqrt(), b[(1, 1)].sqrt(), b[(2, 2)].sqrt());
        let mut axis = axis;
        // fix signs using off-diagonal terms
        if b[(0, 1)] < 0.0 {
            axis.y = -axis.y;
        }
        if b[(0, 2)] < 0.0 {
            axis.z = -axis.z;
        }
        return axis.normalize() * theta;
    }
    let w = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
    w * (theta / (2.0 * theta.sin()))
}

fn rotation_exp(phi: &Vector3<f64>) -> Matrix3<f64> {
    let theta = phi.norm();
    if theta < 1e-12 {
        return Matrix3::identity() + skew(phi);
    }
    let a = phi / theta;
    let s = skew(&a);
    Matrix3::identity() + theta.sin() * s + (1.0 - theta.cos()) * (s * s)
}

pub fn log(pose: &Pose) -> Twist {
    let phi = rotation_log(pose.rotation());
    let j = left_jacobian(&phi);
    let rho = j.try_inverse().expect("left Jacobian invertible") * pose.translation();
    Twist { rho, phi }
}

pub fn exp(twist: &Twist) -> Pose {
    let r = rotation_exp(&twist.phi);
    let t = left_jacobian(&twist.phi) * twist.rho;
    // Re-orthonormalize: long step chains must stay valid poses.
    let svd = r.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut r = u * vt;
    if r.determinant() < 0.0 {
        let mut u = u;
        u.column_mut(2).neg_mut();
        r = u * vt;
    }
    Pose::try_new(r, t).expect("exp map yields a proper pose")
}
