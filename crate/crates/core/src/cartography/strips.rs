use serde::{Deserialize, Serialize};

use super::CartographyError;
use crate::region::{ExtendedReal, Interval, TypeTag};
use crate::systems::SemitoricSystem;

/// Abscissae closer than this are merged into one split.
const SPLIT_MERGE_TOL: f64 = 1e-6;

/// Points of the scan used to locate `∂K±` numerically.
const SCAN_POINTS: usize = 400;

/// Half-width of the scanned window when the image of `J` is unbounded.
pub const SCAN_WINDOW: f64 = 4.0;

/// Which of `K⁺`, `K⁻` contain an abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StripCase {
    Both,
    MinusOnly,
    PlusOnly,
    Neither,
}

impl StripCase {
    pub fn type_tag(self) -> TypeTag {
        match self {
            StripCase::Both => TypeTag::I,
            StripCase::MinusOnly => TypeTag::II,
            StripCase::PlusOnly => TypeTag::III,
            StripCase::Neither => TypeTag::IV,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripPlan {
    pub intervals: Vec<(Interval, StripCase)>,
    pub cut_abscissae: Vec<f64>,
}

impl StripPlan {
    pub fn type_tags(&self) -> Vec<TypeTag> {
        self.intervals.iter().map(|(_, c)| c.type_tag()).collect()
    }
}

/// Case of the fiber over `x` in the properized map: compactness of
/// `J⁻¹(x) ∩ {H ≥ 0}` (resp. `≤ 0`) is read as "the upper (resp. lower)
/// boundary is finite and attained".
pub fn fiber_case(s: &SemitoricSystem, x: f64) -> Result<StripCase, CartographyError> {
    let b = s.fiber_boundaries(x, true)?;
    let plus = b.upper.is_finite() && b.upper_attained;
    let minus = b.lower.is_finite() && b.lower_attained;
    Ok(match (plus, minus) {
        (true, true) => StripCase::Both,
        (false, true) => StripCase::MinusOnly,
        (true, false) => StripCase::PlusOnly,
        (false, false) => StripCase::Neither,
    })
}

fn push_split(splits: &mut Vec<f64>, x: f64) {
    if !splits.iter().any(|&s| (s - x).abs() <= SPLIT_MERGE_TOL) {
        splits.push(x);
    }
}

/// Finite window `[lo, hi]` covering the image of `J`.
pub fn finite_window(iv: &Interval, half_width: f64) -> (f64, f64) {
    let lo = if iv.a.is_finite() { iv.a.value() } else { -half_width };
    let hi = if iv.b.is_finite() { iv.b.value() } else { half_width };
    (lo, hi)
}

/// Finite window covering the properized image of `J`.
pub fn finite_x_window(s: &SemitoricSystem, half_width: f64) -> (f64, f64) {
    finite_window(s.j_image(true), half_width)
}

/// Splits the image of `J` at interior bifurcation abscissae, focus
/// abscissae and the numerically located boundaries of `K±`. Every split
/// abscissa becomes its own zero-width strip.
pub fn partition_strips(s: &SemitoricSystem) -> Result<StripPlan, CartographyError> {
    let iv = *s.j_image(true);
    let interior = |x: f64| iv.contains_interior(x);
    let mut splits: Vec<f64> = Vec::new();
    for &x in &s.metadata.bifurcation_abscissae {
        if interior(x) {
            push_split(&mut splits, x);
        }
    }
    let cuts: Vec<f64> = s.metadata.focus.iter().map(|f| f.x).collect();
    for &x in &cuts {
        if interior(x) {
            push_split(&mut splits, x);
        }
    }
    // Scan for changes of case away from the known splits.
    let (lo, hi) = finite_window(&iv, SCAN_WINDOW);
    let eps = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| lo + eps + (hi - lo - 2.0 * eps) * i as f64 / (SCAN_POINTS - 1) as f64)
        .filter(|&x| splits.iter().all(|&sp| (sp - x).abs() > SPLIT_MERGE_TOL))
        .collect();
    let mut prev: Option<(f64, StripCase)> = None;
    for &x in &grid {
        let c = fiber_case(s, x)?;
        if let Some((px, pc)) = prev {
            let known_between = splits.iter().any(|&sp| sp > px && sp < x);
            if pc != c && !known_between {
                let (mut a, mut b) = (px, x);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    if fiber_case(s, m)? == pc {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                push_split(&mut splits, 0.5 * (a + b));
            }
        }
        prev = Some((x, c));
    }
    splits.sort_by(f64::total_cmp);

    let mut intervals = Vec::new();
    let mut left = iv.a;
    let mut left_closed = iv.include_a;
    let probe = |a: ExtendedReal, b: ExtendedReal| -> f64 {
        match (a.is_finite(), b.is_finite()) {
            (true, true) => 0.5 * (a.value() + b.value()),
            (true, false) => a.value() + 1.0,
            (false, true) => b.value() - 1.0,
            (false, false) => 0.0,
        }
    };
    for &x in &splits {
        let right = ExtendedReal::from_f64(x);
        let open = Interval::new(left, right, left_closed, false)?;
        intervals.push((open, fiber_case(s, probe(left, right))?));
        intervals.push((Interval::point(x), fiber_case(s, x)?));
        left = right;
        left_closed = false;
    }
    let last = Interval::new(left, iv.b, left_closed, iv.include_b)?;
    intervals.push((last, fiber_case(s, probe(left, iv.b))?));
    Ok(StripPlan {
        intervals,
        cut_abscissae: cuts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{make_system, SystemParams};

    fn plan(name: &str) -> StripPlan {
        partition_strips(&make_system(name, &SystemParams::default()).unwrap()).unwrap()
    }

    #[test]
    fn pendulum_all_type_ii() {
        let p = plan("spherical_pendulum");
        assert_eq!(p.type_tags(), vec![TypeTag::II; 3]);
        assert!(p.intervals[1].0.is_point());
        assert_eq!(p.cut_abscissae, vec![0.0]);
    }

    #[test]
    fn coupled_and_toric() {
        let p = plan("coupled_m");
        assert_eq!(p.type_tags(), vec![TypeTag::I, TypeTag::II, TypeTag::I]);
        assert_eq!(
            p.intervals[0].0,
            Interval::new((-1.0).into(), 0.0.into(), true, false).unwrap()
        );
        assert_eq!(
            p.intervals[2].0,
            Interval::new(0.0.into(), 1.0.into(), false, true).unwrap()
        );
        assert_eq!(plan("toric_s2s2").type_tags(), vec![TypeTag::I]);
        assert_eq!(
            plan("coupled_n").type_tags(),
            vec![TypeTag::I, TypeTag::II, TypeTag::II]
        );
        assert_eq!(plan("dh_counterexample").type_tags(), vec![TypeTag::II]);
    }
}
