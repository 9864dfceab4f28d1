//! Static SVG drawings of 2D complexes with facet weights.

use std::fmt::Write;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, to_f64, Rat};

const SIZE: f64 = 480.0;

/// Segment of a facet clipped to the box `[-b, b]²`.
fn segment(c: &Complex, facet: usize, b: f64) -> Option<([f64; 2], [f64; 2])> {
    let f = &c.facets[facet];
    let nu: Vec<f64> = f.normal.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    let nn = nu[0] * nu[0] + nu[1] * nu[1];
    let off = to_f64(&f.offset);
    let p0 = [nu[0] * off / nn, nu[1] * off / nn];
    let d = [-nu[1], nu[0]];
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut clip = |a: [f64; 2], c0: f64| {
        // a·(p0 + t d) ≥ c0
        let s = a[0] * d[0] + a[1] * d[1];
        let r = c0 - (a[0] * p0[0] + a[1] * p0[1]);
        if s.abs() < 1e-12 {
            if r > 1e-9 {
                lo = f64::INFINITY;
            }
        } else if s > 0.0 {
            lo = lo.max(r / s);
        } else {
            hi = hi.min(r / s);
        }
    };
    for h in &c.cells[f.pos].ineqs {
        let a: Vec<f64> = h.normal.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
        clip([a[0], a[1]], to_f64(&h.offset));
    }
    for a in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
        clip(a, -b);
    }
    (lo < hi).then(|| ([p0[0] + lo * d[0], p0[1] + lo * d[1]], [p0[0] + hi * d[0], p0[1] + hi * d[1]]))
}

/// SVG with one `<line>` per facet: solid for positive weight, dashed for negative, dotted for zero.
pub fn svg(c: &Complex, weights: Option<&[Rat]>) -> Result<String> {
    if c.dim != 2 {
        return Err(Error::WrongDim { expected: 2, got: c.dim });
    }
    let reach = (0..c.facets.len())
        .filter_map(|i| c.facet_point(i))
        .flat_map(|p| p.iter().map(|x| to_f64(x).abs()))
        .fold(0.0f64, f64::max);
    let b = (2.0 * reach + 2.0).max(5.0);
    let scale = SIZE / (2.0 * b);
    let to_px = |p: [f64; 2]| (SIZE / 2.0 + p[0] * scale, SIZE / 2.0 - p[1] * scale);
    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#).unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for i in 0..c.facets.len() {
        let Some((p, q)) = segment(c, i, b) else { continue };
        let w = weights.map(|w| &w[i]);
        let (class, style) = match w {
            Some(x) if x.is_positive() => ("convex", r##"stroke="#1f5fbf" stroke-width="2.5""##),
            Some(x) if x.is_negative() => ("concave", r##"stroke="#c0392b" stroke-width="2.5" stroke-dasharray="8,5""##),
            Some(_) => ("flat", r##"stroke="#888888" stroke-width="1.5" stroke-dasharray="2,4""##),
            None => ("facet", r##"stroke="#333333" stroke-width="2""##),
        };
        let (x1, y1) = to_px(p);
        let (x2, y2) = to_px(q);
        writeln!(out, r#"<line class="{class}" data-facet="{i}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" {style}/>"#).unwrap();
        if let Some(x) = w.filter(|x| !x.is_zero()) {
            let (lx, ly) = to_px([0.8 * q[0] + 0.2 * p[0], 0.8 * q[1] + 0.2 * p[1]]);
            writeln!(out, r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{}</text>"#, lx + 4.0, ly - 4.0, fmt_rat(x)).unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_plot_styles() {
        let f = crate::fixtures::median();
        let s = svg(&f.complex, Some(&f.weights())).unwrap();
        assert_eq!(s.matches(r#"class="convex""#).count(), 3);
        assert_eq!(s.matches(r#"class="concave""#).count(), 3);
        assert!(s.contains("stroke-dasharray=\"8,5\""));
    }

    #[test]
    fn arrangement_segments_are_clipped() {
        let c = crate::fixtures::halfplanes();
        let s = svg(&c, None).unwrap();
        assert_eq!(s.matches("<line").count(), c.facets.len());
    }
}
