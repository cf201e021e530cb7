//! SVG rendering in the `Z = 0` chart. Geometry stays exact until the final
//! decimal rendering.

use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use troplane::arrangement::{bounded_complex, enumerate_cells};
use troplane::normalform::{canonical_form, CanonicalResult};
use troplane::projective::{line_vertex, AffinePoint, ProjPoint, TropLine};
use troplane::semiring::{rat, Rational, TropScalar};
use troplane::triangle::{antennas_of, hrep_idempotent};
use troplane::{Error, TropMatrix3};

use crate::input::Viewport;

const DIGITS: u32 = 6;
const CANVAS: i64 = 600;

/// Exact rational to decimal with round-half-even, trailing zeros trimmed.
pub fn decimal(r: &Rational) -> String {
    let scale = BigInt::from(10u32).pow(DIGITS);
    let scaled = r * Rational::from_integer(scale.clone());
    let (mut q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let twice = &rem * 2;
    if twice > *scaled.denom() || (twice == *scaled.denom() && q.is_odd()) {
        q += 1;
    }
    let neg = q.is_negative();
    let digits = q.abs().to_string();
    let digits = format!("{digits:0>width$}", width = DIGITS as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - DIGITS as usize);
    let frac = frac.trim_end_matches('0');
    let body = if frac.is_empty() { int.to_string() } else { format!("{int}.{frac}") };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

struct Canvas {
    vp: Viewport,
    scale: Rational,
}

impl Canvas {
    fn new(vp: Viewport) -> Self {
        let span = (&vp.xmax - &vp.xmin).max(&vp.ymax - &vp.ymin);
        Canvas {
            scale: rat(CANVAS) / span,
            vp,
        }
    }

    fn width(&self) -> String {
        decimal(&((&self.vp.xmax - &self.vp.xmin) * &self.scale))
    }

    fn height(&self) -> String {
        decimal(&((&self.vp.ymax - &self.vp.ymin) * &self.scale))
    }

    fn px(&self, p: &AffinePoint) -> (String, String) {
        (
            decimal(&((&p.x - &self.vp.xmin) * &self.scale)),
            decimal(&((&self.vp.ymax - &p.y) * &self.scale)),
        )
    }

    fn inside(&self, p: &AffinePoint) -> bool {
        self.vp.xmin <= p.x && p.x <= self.vp.xmax && self.vp.ymin <= p.y && p.y <= self.vp.ymax
    }

    /// Liang–Barsky on `p + t d`, `t` in `[0, t_max]` (unbounded when `None`).
    fn clip(&self, p: &AffinePoint, d: &AffinePoint, t_max: Option<Rational>) -> Option<(AffinePoint, AffinePoint)> {
        let mut lo = Rational::zero();
        let mut hi = t_max;
        let checks = [
            (-d.x.clone(), &p.x - &self.vp.xmin),
            (d.x.clone(), &self.vp.xmax - &p.x),
            (-d.y.clone(), &p.y - &self.vp.ymin),
            (d.y.clone(), &self.vp.ymax - &p.y),
        ];
        for (pk, qk) in checks {
            if pk.is_zero() {
                if qk.is_negative() {
                    return None;
                }
            } else if pk.is_negative() {
                lo = lo.max(&qk / &pk);
            } else {
                let t = &qk / &pk;
                hi = Some(hi.map_or(t.clone(), |h| h.min(t)));
            }
        }
        let hi = hi?;
        if lo > hi {
            return None;
        }
        let at = |t: &Rational| AffinePoint::new(&p.x + t * &d.x, &p.y + t * &d.y);
        Some((at(&lo), at(&hi)))
    }

    fn segment(&self, a: &AffinePoint, b: &AffinePoint) -> Option<(AffinePoint, AffinePoint)> {
        self.clip(a, &b.sub(a), Some(Rational::one()))
    }
}

fn chart(v: [TropScalar; 3]) -> Result<AffinePoint, Error> {
    ProjPoint::new(v)?.chart()
}

fn default_viewport(points: &[AffinePoint]) -> Viewport {
    let min = |f: fn(&AffinePoint) -> &Rational| points.iter().map(f).min().cloned().unwrap_or_default();
    let max = |f: fn(&AffinePoint) -> &Rational| points.iter().map(f).max().cloned().unwrap_or_default();
    let (x0, x1, y0, y1) = (min(|p| &p.x), max(|p| &p.x), min(|p| &p.y), max(|p| &p.y));
    let pad = rat(2).max((&x1 - &x0 + &y1 - &y0) / rat(5));
    Viewport {
        xmin: x0 - &pad,
        xmax: x1 + &pad,
        ymin: y0 - &pad,
        ymax: y1 + pad,
    }
}

fn soma_outline(c: &CanonicalResult) -> Result<Vec<AffinePoint>, Error> {
    let h = hrep_idempotent(&c.params.d, &c.params.dv)?;
    let pinv = c.p.inverse();
    let mut out: Vec<AffinePoint> = Vec::new();
    for v in h.vertices() {
        let moved = chart(pinv.apply_vec(v.embed().coords()))?;
        if !out.contains(&moved) {
            out.push(moved);
        }
    }
    Ok(out)
}

/// Renders lines, triangle, soma, antennas and the cell skeleton.
pub fn render(a: &TropMatrix3, viewport: Option<Viewport>) -> Result<String, Error> {
    a.require_finite()?;
    let c = canonical_form(a)?;
    let antennas = antennas_of(&c)?;
    let soma = soma_outline(&c)?;
    let arr = enumerate_cells(a);
    let bounded = bounded_complex(a)?;
    let columns = (0..3).map(|j| chart(a.col(j))).collect::<Result<Vec<_>, _>>()?;
    let lines = (0..3)
        .map(|i| TropLine::new(ProjPoint::new(a.row(i)).expect("finite row")))
        .collect::<Vec<_>>();
    let vertices = lines
        .iter()
        .map(|l| line_vertex(l).and_then(|v| v.chart()))
        .collect::<Result<Vec<_>, _>>()?;

    let vp = viewport.unwrap_or_else(|| {
        let mut pts: Vec<AffinePoint> = columns.clone();
        pts.extend(vertices.iter().cloned());
        pts.extend(soma.iter().cloned());
        pts.extend(arr.cells.iter().filter(|c| c.dim == 0).map(|c| c.witness.clone()));
        default_viewport(&pts)
    });
    let cv = Canvas::new(vp);
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        cv.width(),
        cv.height()
    );
    let _ = writeln!(
        w,
        "<style>.line{{stroke:#555;stroke-width:1;fill:none}}.line-1{{stroke:#c0392b}}.line-2{{stroke:#27ae60}}.line-3{{stroke:#2980b9}}\
         .triangle{{fill:#f4d03f;fill-opacity:0.35;stroke:none}}.soma{{fill:none;stroke:#000;stroke-width:2}}\
         .antenna{{stroke:#8e44ad;stroke-width:3}}.cell{{fill:none;stroke:#999;stroke-dasharray:4 3}}\
         .vertex{{fill:#000}}.label{{font:10px sans-serif;fill:#333}}</style>"
    );

    let _ = writeln!(w, r#"<g id="lines">"#);
    for (i, v) in vertices.iter().enumerate() {
        for (dx, dy) in [(-1, 0), (0, -1), (1, 1)] {
            if let Some((p, q)) = cv.clip(v, &AffinePoint::ints(dx, dy), None) {
                let ((x1, y1), (x2, y2)) = (cv.px(&p), cv.px(&q));
                let _ = writeln!(w, r#"<line class="line line-{}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#, i + 1);
            }
        }
    }
    let _ = writeln!(w, "</g>");

    let poly = |pts: &[AffinePoint]| {
        pts.iter()
            .map(|p| {
                let (x, y) = cv.px(p);
                format!("{x},{y}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(w, r#"<g id="triangle">"#);
    if soma.len() >= 3 {
        let _ = writeln!(w, r#"<polygon class="triangle" points="{}"/>"#, poly(&soma));
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g id="soma">"#);
    match soma.len() {
        1 => {
            let (x, y) = cv.px(&soma[0]);
            let _ = writeln!(w, r#"<circle class="soma" cx="{x}" cy="{y}" r="3"/>"#);
        }
        2 => {
            let _ = writeln!(w, r#"<polyline class="soma" points="{}"/>"#, poly(&soma));
        }
        _ => {
            let _ = writeln!(w, r#"<polygon class="soma" points="{}"/>"#, poly(&soma));
        }
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g id="antennas">"#);
    for a in &antennas {
        if let Some((p, q)) = cv.segment(&a.base_chart, &a.tip_chart) {
            let ((x1, y1), (x2, y2)) = (cv.px(&p), cv.px(&q));
            let _ = writeln!(w, r#"<line class="antenna" data-kind="{:?}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#, a.kind);
        }
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g id="cells">"#);
    if let Some(b) = &bounded.cell {
        let ordered = convex_order(&bounded.vertices);
        let _ = writeln!(w, r#"<polygon class="cell" data-signature="{}" points="{}"/>"#, b.signature, poly(&ordered));
    }
    for cell in arr.cells.iter().filter(|c| c.dim == 2 && cv.inside(&c.witness)) {
        let (x, y) = cv.px(&cell.witness);
        let _ = writeln!(w, r#"<text class="label" x="{x}" y="{y}">{}</text>"#, cell.signature);
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g id="vertices">"#);
    for cell in arr.cells.iter().filter(|c| c.dim == 0 && cv.inside(&c.witness)) {
        let (x, y) = cv.px(&cell.witness);
        let _ = writeln!(w, r#"<circle class="vertex" cx="{x}" cy="{y}" r="2"/>"#);
    }
    for (j, p) in columns.iter().enumerate() {
        if cv.inside(p) {
            let (x, y) = cv.px(p);
            let _ = writeln!(w, r#"<circle class="vertex" cx="{x}" cy="{y}" r="3"/>"#);
            let _ = writeln!(w, r#"<text class="label" x="{x}" y="{y}">c{}</text>"#, j + 1);
        }
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

/// Counterclockwise order of the vertices of a convex polygon, exact.
fn convex_order(pts: &[AffinePoint]) -> Vec<AffinePoint> {
    let mut pts = pts.to_vec();
    pts.sort();
    pts.dedup();
    let Some(pivot) = pts.first().cloned() else {
        return pts;
    };
    let rest = &mut pts[1..];
    // Sorting by angle from the lowest-leftmost point: all others lie in a half-plane.
    rest.sort_by(|a, b| {
        let (u, v) = (a.sub(&pivot), b.sub(&pivot));
        let cross = &u.x * &v.y - &u.y * &v.x;
        Rational::zero().cmp(&cross)
    });
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use troplane::semiring::frac;

    #[test]
    fn decimal_rounds_half_even() {
        assert_eq!(decimal(&frac(1, 3)), "0.333333");
        assert_eq!(decimal(&frac(-2, 3)), "-0.666667");
        assert_eq!(decimal(&frac(5, 10_000_000)), "0");
        assert_eq!(decimal(&frac(15, 10_000_000)), "0.000002");
        assert_eq!(decimal(&frac(25, 10_000_000)), "0.000002");
        assert_eq!(decimal(&rat(-12)), "-12");
        assert_eq!(decimal(&frac(-1, 10_000_000)), "0");
    }

    #[test]
    fn convex_order_is_a_cycle() {
        let pts = [(0, 0), (2, 2), (2, 0), (0, 1)].map(|(x, y)| AffinePoint::ints(x, y));
        let o = convex_order(&pts);
        assert_eq!(o, [(0, 0), (2, 0), (2, 2), (0, 1)].map(|(x, y)| AffinePoint::ints(x, y)));
    }

    #[test]
    fn figure_is_deterministic_and_layered() {
        let a = TropMatrix3::ints([[0, -5, 0], [-7, 0, 0], [-6, -1, 0]]);
        let s1 = render(&a, None).unwrap();
        assert_eq!(s1, render(&a, None).unwrap());
        for id in ["lines", "triangle", "soma", "antennas", "cells", "vertices"] {
            assert!(s1.contains(&format!(r#"<g id="{id}">"#)));
        }
        assert_eq!(s1.matches(r#"class="antenna""#).count(), 2);
        let z = render(&TropMatrix3::zero(), None).unwrap();
        assert_eq!(z.matches("line line-").count(), 9);
    }
}
