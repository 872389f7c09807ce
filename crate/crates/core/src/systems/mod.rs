//! Catalog of integrable systems: the spherical pendulum, the toric system
//! on `S² × S²`, the Duistermaat–Heckman counterexample and the two coupled
//! spin systems with their properizations.

mod classify;
mod params;
mod phase;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::FocusFocusDatum;
use crate::numerics::{adaptive_quad, bisect, potential_minimum, NumericsError, QuadratureSpec};
use crate::region::{ExtendedReal, Interval};

pub use classify::{classify_critical_point, isotropy_weights, linearization_spectrum, momentum_rank, SingularityType};
pub use params::{validate_chi, validate_dh_f, validate_h, FnSpec, PolyPiece, ScalarFn};
pub use phase::{Chart, PhasePoint};

/// Constraint residual above which a phase point is rejected.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Tolerance on the equalities defining removed sets.
const SLIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("unknown system '{0}'")]
    UnknownSystem(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("phase point violates the constraints (residual {0:e})")]
    Constraint(f64),
    #[error("phase point lies in the removed set")]
    RemovedSet,
    #[error("x = {0} is outside the image of J")]
    OutsideImage(f64),
    #[error("x = {0} is a critical value of J")]
    CriticalAbscissa(f64),
    #[error("point is not critical (rank {0})")]
    NotCritical(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Parameter functions supplied to [`make_system`]; unused entries are ignored.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub chi: Option<FnSpec>,
    pub h: Option<FnSpec>,
    pub f: Option<FnSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SystemKind {
    SphericalPendulum,
    ToricS2S2,
    DhCounterexample { f: ScalarFn },
    CoupledM { chi: ScalarFn, h: ScalarFn },
    CoupledN { chi: ScalarFn, h: ScalarFn },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownCriticalPoint {
    pub label: String,
    pub point: PhasePoint,
    pub expected: SingularityType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemMetadata {
    /// Image of `J` on the phase space.
    pub j_image: Interval,
    /// Image of `J` on the part where the properized map is defined.
    pub properized_j_image: Interval,
    /// Critical values of `J` together with the abscissae where `J` fails to
    /// be proper; volumes are not reported there.
    pub bifurcation_abscissae: Vec<f64>,
    /// Focus-focus values in properized image coordinates, with sign `+1`.
    pub focus: Vec<FocusFocusDatum>,
    pub critical_points: Vec<KnownCriticalPoint>,
    /// Whether `F` itself (before properization) is proper.
    pub proper: bool,
    /// Whether every regular fiber of `J` has finite volume.
    pub finite_volumes: bool,
}

/// `H⁻(x)` and `H⁺(x)` with whether each is attained on `J⁻¹(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberBounds {
    pub lower: ExtendedReal,
    pub upper: ExtendedReal,
    pub lower_attained: bool,
    pub upper_attained: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemitoricSystem {
    pub name: String,
    pub dim_ambient: usize,
    pub kind: SystemKind,
    pub metadata: SystemMetadata,
}

fn parse_or(spec: &Option<FnSpec>, default: &str) -> Result<ScalarFn, SystemError> {
    match spec {
        Some(s) => ScalarFn::parse(s),
        None => ScalarFn::parse(&FnSpec::Named(default.into())),
    }
}

fn pendulum_circular_orbit(ell: f64) -> PhasePoint {
    let (theta, _) = potential_minimum(ell);
    PhasePoint::new([theta.sin(), 0.0, theta.cos()], [0.0, ell / theta.sin(), 0.0])
}

fn coupled_critical_points(modified: bool) -> Vec<KnownCriticalPoint> {
    use SingularityType::*;
    let n = PhasePoint::pole(true);
    let s = PhasePoint::pole(false);
    let mut out = Vec::new();
    let poles = [("N1,N2", n, n), ("N1,S2", n, s), ("S1,N2", s, n), ("S1,S2", s, s)];
    for (label, a, b) in poles {
        // In the modified manifold the point (N1, N2) has z1 = 1 ≥ 0 and z2 = 1, which is removed.
        if modified && label == "N1,N2" {
            continue;
        }
        out.push(KnownCriticalPoint {
            label: label.into(),
            point: PhasePoint::new(a, b),
            expected: EllipticElliptic,
        });
    }
    let zs = [-0.8, -0.4, -0.1, 0.35, 0.7];
    let first_z_n2: [f64; 5] = if modified {
        [-0.9, -0.7, -0.5, -0.3, -0.1]
    } else {
        [-0.7, -0.3, 0.2, 0.5, 0.9]
    };
    for &z in &zs {
        out.push(KnownCriticalPoint {
            label: format!("N1 x z2={z}"),
            point: PhasePoint::new(n, PhasePoint::on_sphere(z, 0.9)),
            expected: TransversallyElliptic,
        });
        out.push(KnownCriticalPoint {
            label: format!("S1 x z2={z}"),
            point: PhasePoint::new(s, PhasePoint::on_sphere(z, -0.4)),
            expected: TransversallyElliptic,
        });
        out.push(KnownCriticalPoint {
            label: format!("z1={z} x S2"),
            point: PhasePoint::new(PhasePoint::on_sphere(z, 2.2), s),
            expected: TransversallyElliptic,
        });
    }
    for &z in &first_z_n2 {
        out.push(KnownCriticalPoint {
            label: format!("z1={z} x N2"),
            point: PhasePoint::new(PhasePoint::on_sphere(z, 1.3), n),
            expected: TransversallyElliptic,
        });
    }
    out
}

/// Builds a catalog system. Parameter functions default to
/// `chi = chi_rational`, `h = h_quadratic` and `f = identity`.
pub fn make_system(name: &str, params: &SystemParams) -> Result<SemitoricSystem, SystemError> {
    use SingularityType::*;
    let (kind, metadata) = match name {
        "spherical_pendulum" => {
            let mut pts = vec![
                KnownCriticalPoint {
                    label: "north pole".into(),
                    point: PhasePoint::new(PhasePoint::pole(true), [0.0; 3]),
                    expected: FocusFocus,
                },
                KnownCriticalPoint {
                    label: "south pole".into(),
                    point: PhasePoint::new(PhasePoint::pole(false), [0.0; 3]),
                    expected: EllipticElliptic,
                },
            ];
            for ell in [-1.5, -0.5, 0.3, 0.8, 2.0] {
                pts.push(KnownCriticalPoint {
                    label: format!("circular orbit ell={ell}"),
                    point: pendulum_circular_orbit(ell),
                    expected: TransversallyElliptic,
                });
            }
            let all =
                Interval::new(ExtendedReal::NEG_INF, ExtendedReal::POS_INF, false, false).expect("valid interval");
            (
                SystemKind::SphericalPendulum,
                SystemMetadata {
                    j_image: all,
                    properized_j_image: all,
                    bifurcation_abscissae: vec![0.0],
                    focus: vec![FocusFocusDatum::new(0.0, 1.0, 1, 1)],
                    critical_points: pts,
                    proper: true,
                    finite_volumes: false,
                },
            )
        }
        "toric_s2s2" => {
            let n = PhasePoint::pole(true);
            let s = PhasePoint::pole(false);
            let mut pts: Vec<KnownCriticalPoint> = [("N1,N2", n, n), ("N1,S2", n, s), ("S1,N2", s, n), ("S1,S2", s, s)]
                .into_iter()
                .map(|(l, a, b)| KnownCriticalPoint {
                    label: l.into(),
                    point: PhasePoint::new(a, b),
                    expected: EllipticElliptic,
                })
                .collect();
            for z in [-0.5, 0.5] {
                pts.push(KnownCriticalPoint {
                    label: format!("N1 x z2={z}"),
                    point: PhasePoint::new(n, PhasePoint::on_sphere(z, 0.2)),
                    expected: TransversallyElliptic,
                });
            }
            (
                SystemKind::ToricS2S2,
                SystemMetadata {
                    j_image: Interval::closed(-1.0, 1.0),
                    properized_j_image: Interval::closed(-1.0, 1.0),
                    bifurcation_abscissae: vec![-1.0, 1.0],
                    focus: vec![],
                    critical_points: pts,
                    proper: true,
                    finite_volumes: true,
                },
            )
        }
        "dh_counterexample" => {
            let f = parse_or(&params.f, "identity")?;
            let (left_in, right_in) = validate_dh_f(&f)?;
            let iv = Interval::new((-1.0).into(), 1.0.into(), left_in, right_in).expect("valid interval");
            (
                SystemKind::DhCounterexample { f },
                SystemMetadata {
                    j_image: iv,
                    properized_j_image: iv,
                    bifurcation_abscissae: vec![-1.0, 1.0],
                    focus: vec![],
                    critical_points: vec![],
                    proper: false,
                    finite_volumes: true,
                },
            )
        }
        "coupled_m" | "coupled_n" => {
            let chi = parse_or(&params.chi, "chi_rational")?;
            let h = parse_or(&params.h, "h_quadratic")?;
            validate_chi(&chi)?;
            validate_h(&h)?;
            let modified = name == "coupled_n";
            let properized = if modified {
                Interval::new((-1.0).into(), 1.0.into(), true, false).expect("valid interval")
            } else {
                Interval::closed(-1.0, 1.0)
            };
            let metadata = SystemMetadata {
                j_image: Interval::closed(-1.0, 1.0),
                properized_j_image: properized,
                bifurcation_abscissae: vec![-1.0, 0.0, 1.0],
                focus: vec![],
                critical_points: coupled_critical_points(modified),
                proper: false,
                finite_volumes: true,
            };
            let kind = if modified {
                SystemKind::CoupledN { chi, h }
            } else {
                SystemKind::CoupledM { chi, h }
            };
            (kind, metadata)
        }
        other => return Err(SystemError::UnknownSystem(other.to_string())),
    };
    Ok(SemitoricSystem {
        name: name.to_string(),
        dim_ambient: 6,
        kind,
        metadata,
    })
}

impl SemitoricSystem {
    pub fn is_pendulum(&self) -> bool {
        matches!(self.kind, SystemKind::SphericalPendulum)
    }

    /// Whether the phase space is (an open subset of) `S² × S²`.
    pub fn is_spheres(&self) -> bool {
        !self.is_pendulum()
    }

    /// `(J, H)` without constraint or domain checks.
    pub fn raw_momentum(&self, p: &PhasePoint) -> (f64, f64) {
        let c = &p.coords;
        match self.kind {
            SystemKind::SphericalPendulum => {
                let kinetic = 0.5 * (c[3] * c[3] + c[4] * c[4] + c[5] * c[5]);
                (c[0] * c[4] - c[1] * c[3], kinetic + c[2])
            }
            _ => (c[2], c[5]),
        }
    }

    pub fn constraint_residual(&self, p: &PhasePoint) -> f64 {
        if self.is_pendulum() {
            p.cotangent_residual()
        } else {
            p.spheres_residual()
        }
    }

    /// Membership in the phase space, in momentum coordinates `(z₁, z₂)` for
    /// the sphere systems.
    pub fn in_domain_values(&self, z1: f64, z2: f64) -> bool {
        match &self.kind {
            SystemKind::SphericalPendulum | SystemKind::ToricS2S2 => true,
            SystemKind::DhCounterexample { f } => z2 < f.eval(z1),
            SystemKind::CoupledM { .. } => !(z1.abs() <= SLIT_TOL && z2 >= -SLIT_TOL),
            SystemKind::CoupledN { .. } => {
                !(z1.abs() <= SLIT_TOL && z2 >= -SLIT_TOL) && !(z1 >= -SLIT_TOL && (z2 - 1.0).abs() <= SLIT_TOL)
            }
        }
    }

    pub fn in_domain(&self, p: &PhasePoint) -> bool {
        let (j, h) = self.raw_momentum(p);
        self.in_domain_values(j, h)
    }

    pub fn has_properization(&self) -> bool {
        matches!(
            self.kind,
            SystemKind::DhCounterexample { .. } | SystemKind::CoupledM { .. } | SystemKind::CoupledN { .. }
        )
    }

    /// Second component of the properizing map `g(x, y)`.
    pub fn properize(&self, x: f64, y: f64) -> f64 {
        match &self.kind {
            SystemKind::DhCounterexample { f } => 1.0 / (f.eval(x) - y),
            SystemKind::CoupledM { h, .. } => (y + 2.0) / (x * x + h.eval(y)),
            SystemKind::CoupledN { h, .. } => (y + 2.0) / (((x - 1.0).powi(2) + h.eval(x)) * (x * x + h.eval(y))),
            _ => y,
        }
    }

    /// Inverse of [`properize`](Self::properize) in `y` at fixed `x`.
    pub fn unproperize(&self, x: f64, y_tilde: f64) -> Result<f64, SystemError> {
        match &self.kind {
            SystemKind::DhCounterexample { f } => Ok(f.eval(x) - 1.0 / y_tilde),
            SystemKind::CoupledM { .. } | SystemKind::CoupledN { .. } => {
                let b = self.fiber_boundaries(x, false)?;
                let hi = b.upper.value();
                let g = |z: f64| self.properize(x, z) - y_tilde;
                Ok(bisect(g, -1.0, hi, 1e-15)?)
            }
            _ => Ok(y_tilde),
        }
    }

    /// `(J, H)` or `(J, H̃)` at a phase point.
    #[allow(non_snake_case)]
    pub fn eval_F(&self, p: &PhasePoint, properized: bool) -> Result<(f64, f64), SystemError> {
        let r = self.constraint_residual(p);
        if r > CONSTRAINT_TOL {
            return Err(SystemError::Constraint(r));
        }
        if !self.in_domain(p) {
            return Err(SystemError::RemovedSet);
        }
        let (j, h) = self.raw_momentum(p);
        if properized && self.has_properization() {
            let y = self.properize(j, h);
            if !y.is_finite() {
                return Err(SystemError::OutsideImage(j));
            }
            return Ok((j, y));
        }
        Ok((j, h))
    }

    pub fn j_image(&self, properized: bool) -> &Interval {
        if properized {
            &self.metadata.properized_j_image
        } else {
            &self.metadata.j_image
        }
    }

    /// `H⁻(x) = inf H` and `H⁺(x) = sup H` over `J⁻¹(x)`.
    pub fn fiber_boundaries(&self, x: f64, properized: bool) -> Result<FiberBounds, SystemError> {
        if !self.j_image(properized).contains(x) {
            return Err(SystemError::OutsideImage(x));
        }
        let fb = |lo: f64, hi: f64, la: bool, ha: bool| FiberBounds {
            lower: lo.into(),
            upper: hi.into(),
            lower_attained: la,
            upper_attained: ha,
        };
        let raw = match &self.kind {
            SystemKind::SphericalPendulum => {
                let (_, u) = potential_minimum(x);
                return Ok(fb(u, f64::INFINITY, true, false));
            }
            SystemKind::ToricS2S2 => fb(-1.0, 1.0, true, true),
            SystemKind::DhCounterexample { f } => fb(-1.0, f.eval(x), true, false),
            SystemKind::CoupledM { .. } => {
                if x.abs() <= SLIT_TOL {
                    fb(-1.0, 0.0, true, false)
                } else {
                    fb(-1.0, 1.0, true, true)
                }
            }
            SystemKind::CoupledN { .. } => {
                if x.abs() <= SLIT_TOL {
                    fb(-1.0, 0.0, true, false)
                } else {
                    fb(-1.0, 1.0, true, x < 0.0)
                }
            }
        };
        if !(properized && self.has_properization()) {
            return Ok(raw);
        }
        let lower = self.properize(x, raw.lower.value());
        // At a non-attained upper end the properized height is either finite
        // (the modified system, x > 0) or the pole of g.
        let upper = self.properize(x, raw.upper.value());
        Ok(fb(lower, upper, raw.lower_attained, raw.upper_attained))
    }

    /// Liouville density of the reduced space `J⁻¹(x)/S¹` against `dθ ∧ dz₂`
    /// for the sphere systems.
    pub fn density(&self, x: f64, z2: f64) -> f64 {
        match &self.kind {
            SystemKind::CoupledM { chi, .. } | SystemKind::CoupledN { chi, .. } => {
                if x <= 0.0 {
                    1.0
                } else {
                    chi.eval(z2)
                }
            }
            _ => 1.0,
        }
    }

    /// Weight of the second sphere's area form at a phase point.
    pub fn symplectic_weight(&self, p: &PhasePoint) -> f64 {
        let (z1, z2) = (p.coords[2], p.coords[5]);
        self.density(z1, z2)
    }

    /// `α = ∫₀¹ χ` for the coupled systems.
    pub fn alpha(&self, spec: &QuadratureSpec) -> Result<f64, SystemError> {
        match &self.kind {
            SystemKind::CoupledM { chi, .. } | SystemKind::CoupledN { chi, .. } => {
                Ok(adaptive_quad(|t| chi.eval(t), 0.0, 1.0, spec)?)
            }
            _ => Err(SystemError::Unsupported(format!("{} has no chi parameter", self.name))),
        }
    }

    /// Normalized volume of `J⁻¹(x) ∩ {H ≤ z2}` for the sphere systems,
    /// `∫_{−1}^{z2} density(x, t) dt`.
    pub fn cumulative_volume(&self, x: f64, z2: f64, spec: &QuadratureSpec) -> Result<f64, SystemError> {
        if self.is_pendulum() {
            return Err(SystemError::Unsupported(
                "cumulative volume is defined for the sphere systems".into(),
            ));
        }
        let z2 = z2.clamp(-1.0, 1.0);
        let chi_side = x > 0.0 && matches!(self.kind, SystemKind::CoupledM { .. } | SystemKind::CoupledN { .. });
        if !chi_side {
            return Ok(z2 + 1.0);
        }
        let below = z2.min(0.0) + 1.0;
        if z2 <= 0.0 {
            return Ok(below);
        }
        Ok(below + adaptive_quad(|t| self.density(x, t), 0.0, z2, spec)?)
    }

    /// Normalized volume of `J⁻¹(x)`, also at abscissae where `J` fails to
    /// be proper.
    pub fn fiber_volume(&self, x: f64, spec: &QuadratureSpec) -> Result<ExtendedReal, SystemError> {
        let b = self.fiber_boundaries(x, false)?;
        if self.is_pendulum() {
            return Ok(ExtendedReal::POS_INF);
        }
        Ok(self.cumulative_volume(x, b.upper.value(), spec)?.into())
    }

    pub fn is_regular_abscissa(&self, x: f64) -> bool {
        !self
            .metadata
            .bifurcation_abscissae
            .iter()
            .any(|&c| (c - x).abs() <= SLIT_TOL)
    }

    /// Normalized reduced volume `V(x)` (raw symplectic area over `2π`).
    pub fn reduced_volume(&self, x: f64) -> Result<ExtendedReal, SystemError> {
        self.reduced_volume_with(x, &QuadratureSpec::default())
    }

    pub fn reduced_volume_with(&self, x: f64, spec: &QuadratureSpec) -> Result<ExtendedReal, SystemError> {
        if !self.metadata.j_image.contains(x) {
            return Err(SystemError::OutsideImage(x));
        }
        if !self.is_regular_abscissa(x) {
            return Err(SystemError::CriticalAbscissa(x));
        }
        self.fiber_volume(x, spec)
    }

    pub fn chart(&self, p: &PhasePoint) -> Chart {
        if self.is_pendulum() {
            Chart::cotangent(p)
        } else {
            Chart::spheres(p, self.symplectic_weight(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(name: &str) -> SemitoricSystem {
        make_system(name, &SystemParams::default()).unwrap()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn pendulum_values() {
        let s = sys("spherical_pendulum");
        assert_eq!(s.metadata.focus[0].y, 1.0);
        let bottom = PhasePoint::new(PhasePoint::pole(false), [0.0; 3]);
        assert_eq!(s.eval_F(&bottom, false).unwrap(), (0.0, -1.0));
        for n in [1.0, 10.0, 1e3] {
            let p = PhasePoint::new(PhasePoint::pole(true), [n, n, 0.0]);
            assert_eq!(s.eval_F(&p, false).unwrap().0, 0.0);
        }
        let b = s.fiber_boundaries(0.0, false).unwrap();
        assert_eq!((b.lower.value(), b.upper), (-1.0, ExtendedReal::POS_INF));
        assert!(!s.fiber_boundaries(0.7, false).unwrap().upper_attained);
    }

    #[test]
    fn coupled_m_values() {
        let s = sys("coupled_m");
        let p = PhasePoint::new(PhasePoint::pole(true), PhasePoint::pole(false));
        assert_eq!(s.eval_F(&p, false).unwrap(), (1.0, -1.0));
        let b = s.fiber_boundaries(0.5, false).unwrap();
        assert_eq!((b.lower.value(), b.upper.value()), (-1.0, 1.0));
        let b = s.fiber_boundaries(0.0, false).unwrap();
        assert_eq!((b.lower.value(), b.upper.value(), b.upper_attained), (-1.0, 0.0, false));
        let slit = PhasePoint::new(PhasePoint::on_sphere(0.0, 0.1), PhasePoint::on_sphere(0.5, 0.0));
        assert_eq!(s.eval_F(&slit, false), Err(SystemError::RemovedSet));
        assert_eq!(s.metadata.j_image, Interval::closed(-1.0, 1.0));
    }

    #[test]
    fn coupled_m_properized_image() {
        let s = sys("coupled_m");
        // Lower curve 1/(x² + h(−1)) and upper curve 3/x².
        let b = s.fiber_boundaries(0.5, true).unwrap();
        assert!((b.lower.value() - 1.0 / 1.25).abs() < 1e-14);
        assert!((b.upper.value() - 12.0).abs() < 1e-12);
        let b = s.fiber_boundaries(0.0, true).unwrap();
        assert_eq!(b.lower.value(), 1.0);
        assert_eq!(b.upper, ExtendedReal::POS_INF);
        for (x, z) in [(-0.5, -0.3), (0.5, 0.7), (0.0, -0.5), (0.9, 1.0)] {
            let y = s.properize(x, z);
            assert!((s.unproperize(x, y).unwrap() - z).abs() < 1e-12);
        }
    }

    #[test]
    fn coupled_n_upper_not_attained_right_of_slit() {
        let s = sys("coupled_n");
        assert!(!s.fiber_boundaries(0.5, false).unwrap().upper_attained);
        assert!(s.fiber_boundaries(-0.5, false).unwrap().upper_attained);
        assert!(s.fiber_boundaries(1.0, true).is_err());
        let removed = PhasePoint::new(PhasePoint::on_sphere(0.4, 0.0), PhasePoint::pole(true));
        assert_eq!(s.eval_F(&removed, false), Err(SystemError::RemovedSet));
    }

    #[test]
    fn volumes() {
        let s = sys("coupled_m");
        assert!((s.reduced_volume(-0.5).unwrap().value() - 2.0).abs() < 1e-12);
        let alpha = 2f64.ln();
        assert!((s.reduced_volume(0.5).unwrap().value() - (1.0 + alpha)).abs() < 1e-10);
        assert_eq!(s.reduced_volume(0.0), Err(SystemError::CriticalAbscissa(0.0)));
        assert!((s.fiber_volume(0.0, &spec()).unwrap().value() - 1.0).abs() < 1e-14);
        assert!((s.alpha(&spec()).unwrap() - alpha).abs() < 1e-12);
        let t = sys("toric_s2s2");
        assert_eq!(t.reduced_volume(0.2).unwrap().value(), 2.0);
        assert_eq!(
            sys("spherical_pendulum").reduced_volume(0.3).unwrap(),
            ExtendedReal::POS_INF
        );
    }

    #[test]
    fn dh_image_and_volume() {
        let s = sys("dh_counterexample");
        assert!(!s.metadata.j_image.contains(-1.0));
        assert!(s.metadata.j_image.contains(1.0));
        assert!((s.reduced_volume(0.3).unwrap().value() - 1.3).abs() < 1e-14);
        let b = s.fiber_boundaries(0.3, true).unwrap();
        assert!((b.lower.value() - 1.0 / 1.3).abs() < 1e-14);
        assert_eq!(b.upper, ExtendedReal::POS_INF);
    }

    #[test]
    fn parameter_validation() {
        let bad = SystemParams {
            chi: Some("constant:1".into()),
            ..SystemParams::default()
        };
        let err = make_system("coupled_m", &bad).unwrap_err();
        assert!(err.to_string().contains("0 < chi(z2) != 1"));
        assert!(matches!(
            make_system("nope", &SystemParams::default()),
            Err(SystemError::UnknownSystem(_))
        ));
    }

    #[test]
    fn constraints_checked() {
        let s = sys("spherical_pendulum");
        let p = PhasePoint::new([0.0, 0.0, 1.1], [0.0; 3]);
        assert!(matches!(s.eval_F(&p, false), Err(SystemError::Constraint(_))));
    }
}
