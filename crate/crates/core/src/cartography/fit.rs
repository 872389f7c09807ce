use num_rational::Rational64;

use crate::affine::PlanarPoint;

/// Adjacent chord slopes differing by more than this mark a vertex.
pub const VERTEX_SLOPE_TOL: f64 = 1e-3;

/// Largest denominator tried when reporting a slope as a rational.
pub const MAX_SLOPE_DENOMINATOR: i64 = 12;

/// Distance under which a slope is reported as a rational.
pub const RATIONAL_SLOPE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PlFit {
    pub vertices: Vec<PlanarPoint>,
    pub slopes: Vec<f64>,
    /// Largest vertical distance from a sample to the fitted polyline.
    pub residual: f64,
}

impl PlFit {
    pub fn rational_slopes(&self) -> Vec<Option<Rational64>> {
        self.slopes.iter().map(|&s| rational_slope(s)).collect()
    }
}

/// Nearest `p/q` with `q ≤ 12` when it lies within `1e-6` of `s`.
pub fn rational_slope(s: f64) -> Option<Rational64> {
    if !s.is_finite() {
        return None;
    }
    (1..=MAX_SLOPE_DENOMINATOR).find_map(|q| {
        let p = (s * q as f64).round();
        ((s - p / q as f64).abs() <= RATIONAL_SLOPE_TOL).then(|| Rational64::new(p as i64, q))
    })
}

fn pl_eval(v: &[PlanarPoint], x: f64) -> f64 {
    if v.len() == 1 {
        return v[0].y;
    }
    let i = v.windows(2).position(|w| x <= w[1].x).unwrap_or(v.len() - 2);
    let (a, b) = (v[i], v[i + 1]);
    a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)
}

/// Polyline through the samples keeping only the nodes where adjacent chord
/// slopes jump by more than [`VERTEX_SLOPE_TOL`].
pub fn fit_piecewise_linear(xs: &[f64], ys: &[f64]) -> PlFit {
    assert_eq!(xs.len(), ys.len(), "fit needs matching grids");
    assert!(!xs.is_empty(), "fit needs at least one sample");
    if xs.len() == 1 {
        return PlFit {
            vertices: vec![PlanarPoint::new(xs[0], ys[0])],
            slopes: Vec::new(),
            residual: 0.0,
        };
    }
    let chords: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect();
    let mut vertices = vec![PlanarPoint::new(xs[0], ys[0])];
    for i in 1..chords.len() {
        if (chords[i] - chords[i - 1]).abs() > VERTEX_SLOPE_TOL {
            vertices.push(PlanarPoint::new(xs[i], ys[i]));
        }
    }
    let n = xs.len() - 1;
    vertices.push(PlanarPoint::new(xs[n], ys[n]));
    let slopes = vertices
        .windows(2)
        .map(|w| (w[1].y - w[0].y) / (w[1].x - w[0].x))
        .collect();
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| (pl_eval(&vertices, x) - y).abs())
        .fold(0.0, f64::max);
    PlFit {
        vertices,
        slopes,
        residual,
    }
}

/// Least-squares line `y ≈ slope·x + intercept` and its largest deviation.
pub fn affine_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (slope * x + intercept - y).abs())
        .fold(0.0, f64::max);
    (slope, intercept, residual)
}
