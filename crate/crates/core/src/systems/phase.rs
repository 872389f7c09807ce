//! Points of the ambient phase spaces and local Darboux-type charts around them.

use nalgebra::{Matrix2, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

/// Six ambient coordinates: `(q¹, q², q³, p₁, p₂, p₃)` on `T*S²`, or
/// `(x₁, y₁, z₁, x₂, y₂, z₂)` on `S² × S²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub coords: [f64; 6],
}

impl PhasePoint {
    pub fn new(first: [f64; 3], second: [f64; 3]) -> Self {
        let mut coords = [0.0; 6];
        coords[..3].copy_from_slice(&first);
        coords[3..].copy_from_slice(&second);
        Self { coords }
    }

    pub fn first(&self) -> Vector3<f64> {
        Vector3::new(self.coords[0], self.coords[1], self.coords[2])
    }

    pub fn second(&self) -> Vector3<f64> {
        Vector3::new(self.coords[3], self.coords[4], self.coords[5])
    }

    /// Residual of `‖q‖ = 1`, `q · p = 0`.
    pub fn cotangent_residual(&self) -> f64 {
        let (q, p) = (self.first(), self.second());
        (q.norm() - 1.0).abs().max(q.dot(&p).abs())
    }

    /// Residual of the two unit-norm constraints.
    pub fn spheres_residual(&self) -> f64 {
        (self.first().norm() - 1.0)
            .abs()
            .max((self.second().norm() - 1.0).abs())
    }

    /// North pole `(0, 0, 1)` and south pole `(0, 0, −1)` shorthands.
    pub fn pole(north: bool) -> [f64; 3] {
        [0.0, 0.0, if north { 1.0 } else { -1.0 }]
    }

    /// Point of the unit sphere with height `z` and longitude `phi`.
    pub fn on_sphere(z: f64, phi: f64) -> [f64; 3] {
        let r = (1.0 - z * z).max(0.0).sqrt();
        [r * phi.cos(), r * phi.sin(), z]
    }
}

/// Largest-magnitude coordinate index and the two others in cyclic order.
fn projection_axes(v: &Vector3<f64>) -> (usize, usize, usize) {
    let k = (0..3).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap();
    (k, (k + 1) % 3, (k + 2) % 3)
}

/// Lifts chart coordinates `(a, b)` to the unit sphere with the `k`-th
/// coordinate solved for, keeping the sign of the base point.
fn lift(k: usize, i: usize, j: usize, sign: f64, a: f64, b: f64) -> Vector3<f64> {
    let mut v = Vector3::zeros();
    v[i] = a;
    v[j] = b;
    v[k] = sign * (1.0 - a * a - b * b).max(0.0).sqrt();
    v
}

type Embedding = Box<dyn Fn(&[f64; 4]) -> PhasePoint + Send + Sync>;

/// Four local coordinates around a base point, an embedding back into the
/// ambient space and the constant symplectic matrix `Ω` at the base, with
/// `ω(v, w) = vᵀ Ω w`.
pub struct Chart {
    pub base: [f64; 4],
    pub omega: Matrix4<f64>,
    embed: Embedding,
}

impl Chart {
    pub fn embed(&self, u: &[f64; 4]) -> PhasePoint {
        (self.embed)(u)
    }

    /// Cotangent chart on `T*S²`: two sphere coordinates `(a, b)` plus their
    /// conjugate momenta `P_m = ⟨p, ∂q/∂u_m⟩`.
    pub fn cotangent(p: &PhasePoint) -> Chart {
        let (q0, p0) = (p.first(), p.second());
        let (k, i, j) = projection_axes(&q0);
        let sign = q0[k].signum();
        let tangents = move |a: f64, b: f64| {
            let q = lift(k, i, j, sign, a, b);
            let mut ea = Vector3::zeros();
            ea[i] = 1.0;
            ea[k] = -a / q[k];
            let mut eb = Vector3::zeros();
            eb[j] = 1.0;
            eb[k] = -b / q[k];
            (q, ea, eb)
        };
        let (_, ea0, eb0) = tangents(q0[i], q0[j]);
        let base = [q0[i], q0[j], p0.dot(&ea0), p0.dot(&eb0)];
        let embed = move |u: &[f64; 4]| {
            let (q, ea, eb) = tangents(u[0], u[1]);
            let g = Matrix2::new(ea.dot(&ea), ea.dot(&eb), eb.dot(&ea), eb.dot(&eb));
            let c = g.try_inverse().expect("chart metric is positive definite") * nalgebra::Vector2::new(u[2], u[3]);
            let mom = ea * c[0] + eb * c[1];
            PhasePoint::new([q[0], q[1], q[2]], [mom[0], mom[1], mom[2]])
        };
        let mut omega = Matrix4::zeros();
        omega[(0, 2)] = 1.0;
        omega[(1, 3)] = 1.0;
        omega[(2, 0)] = -1.0;
        omega[(3, 1)] = -1.0;
        Chart {
            base,
            omega,
            embed: Box::new(embed),
        }
    }

    /// Product of projection charts on `S² × S²` with `ω = ω₁ + weight · ω₂`,
    /// where `ω_S²` reads `du_i ∧ du_j / v_k` in the chart dropping `v_k`.
    pub fn spheres(p: &PhasePoint, weight: f64) -> Chart {
        let (s1, s2) = (p.first(), p.second());
        let (k1, i1, j1) = projection_axes(&s1);
        let (k2, i2, j2) = projection_axes(&s2);
        let (sg1, sg2) = (s1[k1].signum(), s2[k2].signum());
        let base = [s1[i1], s1[j1], s2[i2], s2[j2]];
        let embed = move |u: &[f64; 4]| {
            let a = lift(k1, i1, j1, sg1, u[0], u[1]);
            let b = lift(k2, i2, j2, sg2, u[2], u[3]);
            PhasePoint::new([a[0], a[1], a[2]], [b[0], b[1], b[2]])
        };
        let mut omega = Matrix4::zeros();
        omega[(0, 1)] = 1.0 / s1[k1];
        omega[(1, 0)] = -1.0 / s1[k1];
        omega[(2, 3)] = weight / s2[k2];
        omega[(3, 2)] = -weight / s2[k2];
        Chart {
            base,
            omega,
            embed: Box::new(embed),
        }
    }
}
