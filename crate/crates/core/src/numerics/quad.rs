use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{EndpointSingularity, NumericsError, QuadratureSpec};

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Upper bound on the number of live subintervals.
const MAX_INTERVALS: usize = 20_000;

/// Kronrod estimate and |Kronrod − Gauss| on `[a, b]`.
pub fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn global_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError> {
    let (v, e) = gauss_kronrod_15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v,
        error: e,
        depth: 0,
    });
    let (mut total, mut err) = (v, e);
    loop {
        if !total.is_finite() {
            return Err(NumericsError::NonFinite { a, b });
        }
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= spec.max_depth || heap.len() >= MAX_INTERVALS {
            return Err(NumericsError::MaxDepth {
                a: worst.a,
                b: worst.b,
                depth: worst.depth,
                error: err,
            });
        }
        let m = 0.5 * (worst.a + worst.b);
        let (lv, le) = gauss_kronrod_15(f, worst.a, m);
        let (rv, re) = gauss_kronrod_15(f, m, worst.b);
        total += lv + rv - worst.value;
        err += le + re - worst.error;
        heap.push(Piece {
            a: worst.a,
            b: m,
            value: lv,
            error: le,
            depth: worst.depth + 1,
        });
        heap.push(Piece {
            a: m,
            b: worst.b,
            value: rv,
            error: re,
            depth: worst.depth + 1,
        });
    }
    // Re-sum in interval order so the result does not depend on accumulated rounding.
    let mut pieces = heap.into_vec();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(pieces.iter().map(|p| p.value).sum())
}

/// Integral of `f` over `[a, b]`.
///
/// With [`EndpointSingularity::InverseSqrt`] the substitution
/// `t = a + (b − a) sin²(s)`, `s ∈ [0, π/2]`, is applied first, which
/// removes `(t − a)^{-1/2}` and `(b − t)^{-1/2}` blowups and smooths
/// square-root zeros at either end.
pub fn adaptive_quad(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return adaptive_quad(f, b, a, spec).map(|v| -v);
    }
    match spec.endpoint_singularity {
        EndpointSingularity::None => global_adaptive(&f, a, b, spec),
        EndpointSingularity::InverseSqrt => {
            let w = b - a;
            let g = |s: f64| {
                let sn = s.sin();
                let t = a + w * sn * sn;
                f(t) * w * (2.0 * s).sin()
            };
            global_adaptive(&g, 0.0, std::f64::consts::FRAC_PI_2, spec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Composite Simpson rule with `n` panels, used as an independent oracle.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn polynomial() {
        let v = adaptive_quad(|x| x, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
        let v = adaptive_quad(|x| x * x * x, 2.0, -1.0, &QuadratureSpec::default()).unwrap();
        assert!((v + 3.75).abs() < 1e-13);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let spec = QuadratureSpec::with_singularity(EndpointSingularity::InverseSqrt);
        let v = adaptive_quad(|x| 1.0 / x.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        // Both ends singular: ∫ dt / sqrt(t(1−t)) = π.
        let v = adaptive_quad(|t| 1.0 / (t * (1.0 - t)).sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn sine_against_simpson_oracle() {
        let v = adaptive_quad(f64::sin, 0.0, PI, &QuadratureSpec::default()).unwrap();
        let oracle = simpson(f64::sin, 0.0, PI, 20_000);
        assert!((v - oracle).abs() < 1e-10);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn max_depth_reported() {
        let spec = QuadratureSpec {
            max_depth: 3,
            ..QuadratureSpec::default()
        };
        let r = adaptive_quad(|x| if x < 0.3 { 0.0 } else { 1.0 }, 0.0, 1.0, &spec);
        assert!(matches!(r, Err(NumericsError::MaxDepth { .. })));
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (10.0 * x).sin() * (-x).exp();
        let a = adaptive_quad(f, 0.0, 5.0, &QuadratureSpec::default()).unwrap();
        let b = adaptive_quad(f, 0.0, 5.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
