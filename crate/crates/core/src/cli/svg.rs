use std::fmt::Write;

use crate::region::{CartographicRegion, Inclusion, TypeTag, TypedRegion};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;

/// Visible height above the finite boundary data when the region is unbounded.
const OPEN_HEADROOM: f64 = 1.5;

fn fill(tag: TypeTag) -> &'static str {
    match tag {
        TypeTag::I => "#9ecae1",
        TypeTag::II => "#a1d99b",
        TypeTag::III => "#fdae6b",
        TypeTag::IV => "#d9d9d9",
    }
}

fn dash(inc: Inclusion) -> &'static str {
    match inc {
        Inclusion::Closed => "",
        Inclusion::Open => " stroke-dasharray=\"4 3\"",
    }
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        let y = y.clamp(self.y0, self.y1);
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Abscissae at which a strip is drawn.
fn strip_xs(s: &TypedRegion) -> Vec<f64> {
    let mut xs: Vec<f64> = s.lower.knots().into_iter().chain(s.upper.knots()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn frame(region: &CartographicRegion) -> Frame {
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut unbounded = false;
    for s in &region.strips {
        for x in strip_xs(s) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            for v in [s.lower.eval(x), s.upper.eval(x)] {
                if v.is_finite() {
                    y0 = y0.min(v.value());
                    y1 = y1.max(v.value());
                } else {
                    unbounded = true;
                }
            }
        }
    }
    for f in &region.focus {
        y0 = y0.min(f.y);
        y1 = y1.max(f.y);
    }
    if unbounded || y1 - y0 < 1e-9 {
        y1 += OPEN_HEADROOM;
    }
    if x1 - x0 < 1e-9 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    Frame { x0, x1, y0, y1 }
}

/// Schematic drawing of the strips, focus values and cut half-lines.
pub fn region_svg(region: &CartographicRegion) -> String {
    let fr = frame(region);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(out, "<title>{}</title>", region.system);
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\"/>",
        MARGIN,
        HEIGHT - MARGIN,
        WIDTH - MARGIN,
        HEIGHT - MARGIN
    );
    for s in &region.strips {
        let xs = strip_xs(s);
        let lower: Vec<(f64, f64)> = xs.iter().map(|&x| (fr.px(x), fr.py(s.lower.eval(x).value()))).collect();
        let upper: Vec<(f64, f64)> = xs.iter().map(|&x| (fr.px(x), fr.py(s.upper.eval(x).value()))).collect();
        let pts = |v: &[(f64, f64)]| {
            v.iter()
                .map(|(a, b)| format!("{a:.2},{b:.2}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        if s.interval.is_point() {
            let (x, yl) = lower[0];
            let yu = upper[0].1;
            let _ = writeln!(
                out,
                "<line x1=\"{x:.2}\" y1=\"{yl:.2}\" x2=\"{x:.2}\" y2=\"{yu:.2}\" stroke=\"{}\" stroke-width=\"3\"/>",
                fill(s.type_tag)
            );
            continue;
        }
        let mut outline = lower.clone();
        outline.extend(upper.iter().rev());
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.6\" stroke=\"none\"/>",
            pts(&outline),
            fill(s.type_tag)
        );
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"black\"{}/>",
            pts(&lower),
            dash(s.lower_inclusion)
        );
        if s.upper.infinite_sign().is_none() {
            let _ = writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"black\"{}/>",
                pts(&upper),
                dash(s.upper_inclusion)
            );
        }
    }
    for f in &region.focus {
        let (x, y) = (fr.px(f.x), fr.py(f.y));
        let end = if f.sign > 0 { fr.py(fr.y1) } else { fr.py(fr.y0) };
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{x:.2}\" y2=\"{end:.2}\" stroke=\"#c00\" stroke-dasharray=\"6 4\"/>"
        );
        let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"#c00\"/>");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::PlanarPoint;
    use crate::region::{construct_region, BoundaryDescriptor, Interval};

    #[test]
    fn draws_square() {
        let strip = construct_region(
            Interval::closed(0.0, 1.0),
            TypeTag::I,
            BoundaryDescriptor::constant(0.0, &[0.0, 1.0]).unwrap(),
            BoundaryDescriptor::piecewise_linear(vec![PlanarPoint::new(0.0, 2.0), PlanarPoint::new(1.0, 2.0)]).unwrap(),
            Inclusion::Closed,
            Inclusion::Closed,
        )
        .unwrap();
        let svg = region_svg(&CartographicRegion::new("square", vec![strip]));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
