//! Spectral classification of critical points of `F = (J, H)`.

use nalgebra::{Complex, Matrix2x4, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::{Chart, PhasePoint, SemitoricSystem, SystemError};

type C64 = Complex<f64>;

const GRAD_STEP: f64 = 1e-6;
const HESS_STEP: f64 = 1e-5;
const RANK_TOL: f64 = 1e-7;
const SPECTRAL_TOL: f64 = 1e-5;
/// The tangent block at a rank-one point is nilpotent, so a Hessian error
/// `δ` moves its eigenvalues by `O(√δ)`.
const TANGENT_TOL: f64 = 1e-2;

/// Generic coefficients `(μ, ν)` for the rank-zero combination `μJ + νH`.
const GENERIC_COMBINATION: (f64, f64) = (0.618_033_988_7, 0.414_213_562_4);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityType {
    Regular,
    TransversallyElliptic,
    EllipticElliptic,
    FocusFocus,
    DegenerateOrHyperbolic,
}

impl std::fmt::Display for SingularityType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SingularityType::Regular => "regular",
            SingularityType::TransversallyElliptic => "transversally-elliptic",
            SingularityType::EllipticElliptic => "elliptic-elliptic",
            SingularityType::FocusFocus => "focus-focus",
            SingularityType::DegenerateOrHyperbolic => "degenerate-or-hyperbolic",
        })
    }
}

fn momentum_at(s: &SemitoricSystem, chart: &Chart, u: &[f64; 4]) -> (f64, f64) {
    s.raw_momentum(&chart.embed(u))
}

fn shifted(u: &[f64; 4], moves: &[(usize, f64)]) -> [f64; 4] {
    let mut v = *u;
    for &(i, d) in moves {
        v[i] += d;
    }
    v
}

fn jacobian(s: &SemitoricSystem, chart: &Chart) -> Matrix2x4<f64> {
    let u = chart.base;
    let mut d = Matrix2x4::zeros();
    for i in 0..4 {
        let (jp, hp) = momentum_at(s, chart, &shifted(&u, &[(i, GRAD_STEP)]));
        let (jm, hm) = momentum_at(s, chart, &shifted(&u, &[(i, -GRAD_STEP)]));
        d[(0, i)] = (jp - jm) / (2.0 * GRAD_STEP);
        d[(1, i)] = (hp - hm) / (2.0 * GRAD_STEP);
    }
    d
}

/// Symmetrized central-difference Hessian of `μJ + νH` in chart coordinates.
fn hessian(s: &SemitoricSystem, chart: &Chart, (mu, nu): (f64, f64)) -> Matrix4<f64> {
    let g = |u: [f64; 4]| {
        let (j, h) = momentum_at(s, chart, &u);
        mu * j + nu * h
    };
    let u = chart.base;
    let h = HESS_STEP;
    let g0 = g(u);
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        m[(i, i)] = (g(shifted(&u, &[(i, h)])) - 2.0 * g0 + g(shifted(&u, &[(i, -h)]))) / (h * h);
        for j in (i + 1)..4 {
            let v = (g(shifted(&u, &[(i, h), (j, h)]))
                - g(shifted(&u, &[(i, h), (j, -h)]))
                - g(shifted(&u, &[(i, -h), (j, h)]))
                + g(shifted(&u, &[(i, -h), (j, -h)])))
                / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Linear part `A = Ω⁻ᵀ · Hess` of the Hamiltonian vector field, so that
/// `ω(X, ·) = dg`.
fn linearization(chart: &Chart, hess: &Matrix4<f64>) -> Matrix4<f64> {
    chart
        .omega
        .transpose()
        .try_inverse()
        .expect("symplectic matrix is invertible")
        * hess
}

fn check_point(s: &SemitoricSystem, p: &PhasePoint) -> Result<(), SystemError> {
    let r = s.constraint_residual(p);
    if r > super::CONSTRAINT_TOL {
        return Err(SystemError::Constraint(r));
    }
    if !s.in_domain(p) {
        return Err(SystemError::RemovedSet);
    }
    Ok(())
}

/// Numerical rank of `dF` at `p` and the left null vector of `dF` when the
/// rank is one.
pub fn momentum_rank(s: &SemitoricSystem, p: &PhasePoint) -> Result<(usize, Option<(f64, f64)>), SystemError> {
    check_point(s, p)?;
    let chart = s.chart(p);
    let d = jacobian(s, &chart);
    let (j, h) = s.raw_momentum(p);
    let scale = 1.0 + j.abs().max(h.abs());
    let svd = (d * d.transpose()).symmetric_eigen();
    let mut pairs: Vec<(f64, nalgebra::Vector2<f64>)> = (0..2)
        .map(|i| {
            (
                svd.eigenvalues[i].max(0.0).sqrt(),
                svd.eigenvectors.column(i).into_owned(),
            )
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rank = pairs.iter().filter(|(sv, _)| *sv > RANK_TOL * scale).count();
    let null = (rank == 1).then(|| (pairs[0].1[0], pairs[0].1[1]));
    Ok((rank, null))
}

/// Eigenvalues of the linearized flow of `μJ + νH` at `p`.
pub fn linearization_spectrum(
    s: &SemitoricSystem,
    p: &PhasePoint,
    combination: (f64, f64),
) -> Result<Vec<C64>, SystemError> {
    check_point(s, p)?;
    let chart = s.chart(p);
    let a = linearization(&chart, &hessian(s, &chart, combination));
    Ok(a.complex_eigenvalues().iter().copied().collect())
}

fn is_imaginary(l: &C64, tol: f64) -> bool {
    l.re.abs() <= tol && l.im.abs() > tol
}

/// Type of a critical point from the rank of `dF` and the spectrum of a
/// suitable combination: a generic one at rank zero, the one annihilating
/// `dF` at rank one.
pub fn classify_critical_point(s: &SemitoricSystem, p: &PhasePoint) -> Result<SingularityType, SystemError> {
    let (rank, null) = momentum_rank(s, p)?;
    match rank {
        0 => {
            let spec = linearization_spectrum(s, p, GENERIC_COMBINATION)?;
            let scale = spec.iter().map(|l| l.norm()).fold(0.0, f64::max);
            let tol = SPECTRAL_TOL * scale.max(1.0);
            if spec.iter().all(|l| is_imaginary(l, tol)) {
                Ok(SingularityType::EllipticElliptic)
            } else if spec.iter().all(|l| l.re.abs() > tol && l.im.abs() > tol) {
                Ok(SingularityType::FocusFocus)
            } else {
                Ok(SingularityType::DegenerateOrHyperbolic)
            }
        }
        1 => {
            let c = null.expect("null vector at rank one");
            let mut spec = linearization_spectrum(s, p, c)?;
            spec.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
            let tol = SPECTRAL_TOL * spec[0].norm().max(1.0);
            let transverse = spec[..2].iter().all(|l| is_imaginary(l, tol));
            let tangent = spec[2..].iter().all(|l| l.norm() <= TANGENT_TOL * spec[0].norm());
            Ok(if transverse && tangent {
                SingularityType::TransversallyElliptic
            } else {
                SingularityType::DegenerateOrHyperbolic
            })
        }
        r => Err(SystemError::NotCritical(r)),
    }
}

/// Orthonormal basis of the numerical kernel of `m`, of dimension `dim`.
fn kernel(m: &Matrix4<C64>, dim: usize) -> Vec<Vector4<C64>> {
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    idx[..dim].iter().map(|&i| v_t.row(i).adjoint().into_owned()).collect()
}

/// Signs of the eigenvalues of a Hermitian matrix of size one or two.
fn hermitian_signs(m: &[Vec<C64>]) -> Vec<f64> {
    match m.len() {
        1 => vec![m[0][0].re.signum()],
        2 => {
            let (a, d, b) = (m[0][0].re, m[1][1].re, m[0][1]);
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![(mid - rad).signum(), (mid + rad).signum()]
        }
        _ => unreachable!("at most two eigenvalues share a frequency in dimension four"),
    }
}

/// Isotropy weights of the circle action generated by `J` at a fixed point,
/// in increasing order. Each frequency `ω` of `Ω⁻ᵀ Hess J` contributes
/// `±ω`, with the sign of `Hess J` on the corresponding eigenvectors.
pub fn isotropy_weights(s: &SemitoricSystem, p: &PhasePoint) -> Result<(i64, i64), SystemError> {
    check_point(s, p)?;
    let chart = s.chart(p);
    let d = jacobian(s, &chart);
    if d.row(0).norm() > RANK_TOL {
        return Err(SystemError::NotCritical(1));
    }
    let hess = hessian(s, &chart, (1.0, 0.0));
    let a = linearization(&chart, &hess);
    let mut freqs: Vec<f64> = a
        .complex_eigenvalues()
        .iter()
        .filter(|l| l.im > SPECTRAL_TOL)
        .map(|l| l.im)
        .collect();
    freqs.sort_by(f64::total_cmp);
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    for w in freqs {
        match clusters.last_mut() {
            Some((c, n)) if (w - *c).abs() < 1e-4 => *n += 1,
            _ => clusters.push((w, 1)),
        }
    }
    let sc = hess.map(|v| C64::new(v, 0.0));
    let ac = a.map(|v| C64::new(v, 0.0));
    let mut weights = Vec::new();
    for (w, mult) in clusters {
        let shifted = ac - Matrix4::<C64>::identity() * C64::new(0.0, w);
        let basis = kernel(&shifted, mult);
        let form: Vec<Vec<C64>> = basis
            .iter()
            .map(|u| basis.iter().map(|v| (u.adjoint() * sc * v)[(0, 0)]).collect())
            .collect();
        for sign in hermitian_signs(&form) {
            let wt = sign * w;
            if (wt - wt.round()).abs() > 1e-3 {
                return Err(SystemError::Unsupported(format!("non-integral isotropy weight {wt}")));
            }
            weights.push(wt.round() as i64);
        }
    }
    if weights.len() != 2 {
        return Err(SystemError::Unsupported(format!(
            "expected two isotropy weights, found {}",
            weights.len()
        )));
    }
    weights.sort();
    Ok((weights[0], weights[1]))
}
