//! Scalar parameter functions `χ`, `h`, `f` of the catalog systems.

use serde::{Deserialize, Serialize};

use super::SystemError;

/// One polynomial piece `Σ coeffs[i] · t^i` on `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPiece {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

impl PolyPiece {
    fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// A real function of one variable, either a named built-in or a
/// piecewise polynomial.
///
/// Built-ins (an optional numeric parameter follows a colon, e.g. `chi_rational:2`):
///
/// | name | value |
/// |---|---|
/// | `chi_rational[:c]` | `1` for `t ≤ 0`, `1/(1 + c t)` for `t > 0` (default `c = 1`) |
/// | `h_quadratic` | `t²` for `t < 0`, `0` otherwise |
/// | `identity` | `t` |
/// | `square` | `t²` |
/// | `cosine[:a]` | `a cos(π t)` (default `a = 0.5`) |
/// | `constant[:v]` | `v` (default `1`) |
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFn {
    ChiRational(f64),
    HQuadratic,
    Identity,
    Square,
    Cosine(f64),
    Constant(f64),
    Piecewise(Vec<PolyPiece>),
}

impl ScalarFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ScalarFn::ChiRational(c) => {
                if t <= 0.0 {
                    1.0
                } else {
                    1.0 / (1.0 + c * t)
                }
            }
            ScalarFn::HQuadratic => {
                if t < 0.0 {
                    t * t
                } else {
                    0.0
                }
            }
            ScalarFn::Identity => t,
            ScalarFn::Square => t * t,
            ScalarFn::Cosine(a) => a * (std::f64::consts::PI * t).cos(),
            ScalarFn::Constant(v) => *v,
            ScalarFn::Piecewise(pieces) => {
                let piece = pieces
                    .iter()
                    .find(|p| t >= p.lo && t <= p.hi)
                    .or_else(|| {
                        if t < pieces[0].lo {
                            pieces.first()
                        } else {
                            pieces.last()
                        }
                    })
                    .expect("validated non-empty");
                piece.eval(t)
            }
        }
    }

    /// `∫₀¹` of the function, in closed form where one is known.
    pub fn closed_form_integral_01(&self) -> Option<f64> {
        match self {
            ScalarFn::ChiRational(c) if *c == 0.0 => Some(1.0),
            ScalarFn::ChiRational(c) => Some((1.0 + c).ln() / c),
            ScalarFn::Constant(v) => Some(*v),
            ScalarFn::Identity => Some(0.5),
            ScalarFn::Square => Some(1.0 / 3.0),
            _ => None,
        }
    }

    pub fn parse(spec: &FnSpec) -> Result<Self, SystemError> {
        match spec {
            FnSpec::Named(s) => Self::parse_named(s),
            FnSpec::Pieces { pieces } => {
                if pieces.is_empty() {
                    return Err(SystemError::InvalidParameter("piecewise function has no pieces".into()));
                }
                for w in pieces.windows(2) {
                    if w[1].lo < w[0].hi {
                        return Err(SystemError::InvalidParameter(
                            "polynomial pieces overlap or are unsorted".into(),
                        ));
                    }
                }
                if pieces
                    .iter()
                    .any(|p| p.lo.is_nan() || p.hi.is_nan() || p.lo > p.hi || p.coeffs.is_empty())
                {
                    return Err(SystemError::InvalidParameter(
                        "each piece needs lo <= hi and a coefficient".into(),
                    ));
                }
                Ok(ScalarFn::Piecewise(pieces.clone()))
            }
        }
    }

    fn parse_named(s: &str) -> Result<Self, SystemError> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => {
                let v: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| SystemError::InvalidParameter(format!("bad parameter in '{s}'")))?;
                (n.trim(), Some(v))
            }
            None => (s.trim(), None),
        };
        Ok(match name {
            "chi_rational" => ScalarFn::ChiRational(arg.unwrap_or(1.0)),
            "h_quadratic" => ScalarFn::HQuadratic,
            "identity" => ScalarFn::Identity,
            "square" => ScalarFn::Square,
            "cosine" => ScalarFn::Cosine(arg.unwrap_or(0.5)),
            "constant" => ScalarFn::Constant(arg.unwrap_or(1.0)),
            _ => {
                return Err(SystemError::InvalidParameter(format!(
                    "unknown built-in function '{name}'"
                )))
            }
        })
    }
}

/// Declarative form of a [`ScalarFn`] as it appears in configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FnSpec {
    Named(String),
    Pieces { pieces: Vec<PolyPiece> },
}

impl From<&str> for FnSpec {
    fn from(s: &str) -> Self {
        FnSpec::Named(s.to_string())
    }
}

const SAMPLES: usize = 2001;
const EQ_TOL: f64 = 1e-12;

fn grid() -> impl Iterator<Item = f64> {
    (0..SAMPLES).map(|i| -1.0 + 2.0 * i as f64 / (SAMPLES - 1) as f64)
}

/// `χ ≡ 1` on `[−1, 0]` and `0 < χ ≠ 1` on `(0, 1]`, checked on a grid.
pub fn validate_chi(chi: &ScalarFn) -> Result<(), SystemError> {
    for t in grid() {
        let v = chi.eval(t);
        if t <= 0.0 && (v - 1.0).abs() > EQ_TOL {
            return Err(SystemError::InvalidParameter(format!(
                "chi({t}) = {v} violates chi(z2) = 1 for z2 <= 0"
            )));
        }
        if t > 0.0 && (v <= 0.0 || (v - 1.0).abs() <= EQ_TOL || !v.is_finite()) {
            return Err(SystemError::InvalidParameter(format!(
                "chi({t}) = {v} violates 0 < chi(z2) != 1 for z2 > 0"
            )));
        }
    }
    Ok(())
}

/// `h ≥ 0`, `h = 0` exactly on `[0, 1]`, and `h` strictly decreasing on `[−1, 0)`.
pub fn validate_h(h: &ScalarFn) -> Result<(), SystemError> {
    let mut prev: Option<(f64, f64)> = None;
    for t in grid() {
        let v = h.eval(t);
        if !v.is_finite() || v < 0.0 {
            return Err(SystemError::InvalidParameter(format!("h({t}) = {v} violates h >= 0")));
        }
        if t >= 0.0 && v.abs() > EQ_TOL {
            return Err(SystemError::InvalidParameter(format!(
                "h({t}) = {v} violates h = 0 for z2 >= 0"
            )));
        }
        if t < 0.0 && v <= EQ_TOL {
            return Err(SystemError::InvalidParameter(format!(
                "h({t}) = {v} violates h > 0 for z2 < 0"
            )));
        }
        if let Some((pt, pv)) = prev {
            if t <= 0.0 && pt < 0.0 && v >= pv {
                return Err(SystemError::InvalidParameter(format!(
                    "h is not decreasing between {pt} and {t}, violating h' < 0 for z2 < 0"
                )));
            }
        }
        prev = Some((t, v));
    }
    Ok(())
}

/// `f: [−1, 1] → (−1, 1]`; the value `−1` is tolerated at an endpoint of
/// `[−1, 1]`, which is then dropped from the image of `J`.
pub fn validate_dh_f(f: &ScalarFn) -> Result<(bool, bool), SystemError> {
    for t in grid() {
        let v = f.eval(t);
        let endpoint = t == -1.0 || t == 1.0;
        if !(-1.0 - EQ_TOL..=1.0 + EQ_TOL).contains(&v) || (!endpoint && v <= -1.0 + EQ_TOL) {
            return Err(SystemError::InvalidParameter(format!(
                "f({t}) = {v} violates f(x) in (-1, 1]"
            )));
        }
    }
    Ok((f.eval(-1.0) > -1.0 + EQ_TOL, f.eval(1.0) > -1.0 + EQ_TOL))
}
