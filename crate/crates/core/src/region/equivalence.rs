use super::{BoundaryDescriptor, CartographicRegion, TypedRegion};
use crate::affine::{canonical_tau, CutShear, PiecewiseShear, TauElement, LINE_TOL};

/// Maximum boundary deviation accepted between normalized regions.
pub const REGION_TOL: f64 = 1e-6;

/// Maximum number of focus abscissae for which cut powers are enumerated.
const MAX_ENUMERATED_FOCUS: usize = 12;

/// `b = tau ∘ (Π cuts) (a)`, with `signs[i] = -1` where the i-th cut flips.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceWitness {
    pub cuts: Vec<CutShear>,
    pub signs: Vec<i8>,
    pub tau: TauElement,
}

impl EquivalenceWitness {
    pub fn is_identity(&self) -> bool {
        self.cuts.is_empty() && self.tau.is_identity(REGION_TOL)
    }
}

fn focus_signature(r: &CartographicRegion) -> Vec<(f64, u32)> {
    let mut v: Vec<(f64, u32)> = r.focus.iter().map(|f| (f.x, f.multiplicity)).collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    v
}

fn descriptors_match(a: &BoundaryDescriptor, b: &BoundaryDescriptor, strip: &TypedRegion) -> bool {
    if a.is_piecewise_linear() != b.is_piecewise_linear() {
        return false;
    }
    let mut xs: Vec<f64> = a.knots().into_iter().chain(b.knots()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    // Compare only where both descriptors carry data.
    let lo = a.knots()[0].max(b.knots()[0]);
    let hi = a
        .knots()
        .last()
        .copied()
        .unwrap()
        .min(b.knots().last().copied().unwrap());
    let mut probes: Vec<f64> = xs.iter().copied().filter(|&x| x >= lo && x <= hi).collect();
    let mids: Vec<f64> = probes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    probes.extend(mids);
    if probes.is_empty() {
        probes.push(lo);
    }
    probes
        .into_iter()
        .filter(|&x| strip.interval.contains(x) || strip.interval.is_point())
        .all(|x| a.eval(x).approx_eq(b.eval(x), REGION_TOL))
}

fn strips_match(a: &TypedRegion, b: &TypedRegion) -> bool {
    a.interval.approx_eq(&b.interval, LINE_TOL)
        && a.type_tag == b.type_tag
        && a.lower_inclusion == b.lower_inclusion
        && a.upper_inclusion == b.upper_inclusion
        && descriptors_match(&a.lower, &b.lower, a)
        && descriptors_match(&a.upper, &b.upper, a)
}

fn same_shape(a: &CartographicRegion, b: &CartographicRegion) -> bool {
    a.strips.len() == b.strips.len()
        && a.strips.iter().zip(&b.strips).all(|(s, t)| strips_match(s, t))
        && a.focus
            .iter()
            .zip(&b.focus)
            .all(|(f, g)| (f.x - g.x).abs() <= LINE_TOL && (f.y - g.y).abs() <= REGION_TOL)
}

/// Searches the cut powers `u_i ∈ {0, +k_i, −k_i}` at the focus abscissae of
/// `a` and the group element that carry `a` onto `b`. Candidates are tried
/// with the identity first.
pub fn find_equivalence(a: &CartographicRegion, b: &CartographicRegion) -> Option<EquivalenceWitness> {
    if focus_signature(a) != focus_signature(b) || a.strips.len() != b.strips.len() {
        return None;
    }
    let n = a.focus.len();
    if n > MAX_ENUMERATED_FOCUS {
        return None;
    }
    let tau_b = canonical_tau(b).ok()?;
    let nb = b.transformed_by_tau(&tau_b);
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut cuts = Vec::new();
        let mut signs = Vec::with_capacity(n);
        for f in &a.focus {
            let digit = c % 3;
            c /= 3;
            let k = i64::from(f.multiplicity);
            let u = match digit {
                0 => 0,
                1 => k,
                _ => -k,
            };
            signs.push(if u == 0 { 1 } else { -1 });
            if u != 0 {
                cuts.push(CutShear::new(u, f.x));
            }
        }
        let sheared = a.apply_shear(&PiecewiseShear::from_cuts(cuts.clone()));
        let Ok(tau_a) = canonical_tau(&sheared) else { continue };
        let na = sheared.transformed_by_tau(&tau_a);
        let mut focus_a = na.clone();
        let mut focus_b = nb.clone();
        focus_a.focus.sort_by(|p, q| p.x.total_cmp(&q.x));
        focus_b.focus.sort_by(|p, q| p.x.total_cmp(&q.x));
        if same_shape(&focus_a, &focus_b) {
            return Some(EquivalenceWitness {
                cuts,
                signs,
                tau: tau_b.inverse().compose(&tau_a),
            });
        }
    }
    None
}

pub fn regions_equivalent(a: &CartographicRegion, b: &CartographicRegion) -> bool {
    find_equivalence(a, b).is_some()
}
