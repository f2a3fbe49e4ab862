//! SVG drawing of selected convex layers.

use std::fmt::Write;

use crate::convex::ConvexLayering;
use crate::error::{Error, Result};
use crate::geometry::Scalar;

/// Layers `1, 1 + k, 1 + 2k, …` up to `total`. Without `k`, the step is
/// the smallest one giving at most ten outlines.
pub fn svg_layer_selection(total: usize, step: Option<usize>) -> Result<Vec<usize>> {
    let k = match step {
        Some(0) => return Err(Error::OutOfRange("layer step must be positive".into())),
        Some(k) => k,
        None => total.div_ceil(10).max(1),
    };
    Ok((1..=total).step_by(k).collect())
}

pub struct SvgStyle {
    pub size: f64,
    pub show_points: bool,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { size: 800.0, show_points: true }
    }
}

/// Draw the hull of each listed layer; a layer without interior is drawn
/// as the segment or dot it spans. Every shape carries `data-layer`.
pub fn layering_svg<T: Scalar>(layering: &ConvexLayering<T>, layers: &[usize], style: &SvgStyle) -> Result<String> {
    if let Some(&bad) = layers.iter().find(|&&n| n == 0 || n > layering.num_layers()) {
        return Err(Error::OutOfRange(format!("layer {bad} is not in 1..={}", layering.num_layers())));
    }
    let pts: Vec<[f64; 2]> = layering.points().iter().map(|p| [p[0].as_f64(), p[1].as_f64()]).collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if pts.is_empty() {
        (lo, hi) = ([0.0; 2], [1.0; 2]);
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let margin = 0.02 * style.size;
    let scale = (style.size - 2.0 * margin) / span;
    // Flip the vertical axis so that x2 points up.
    let map = |p: &[f64; 2]| (margin + (p[0] - lo[0]) * scale, style.size - margin - (p[1] - lo[1]) * scale);
    let stroke = 0.002 * style.size;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        style.size
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if style.show_points {
        let _ = writeln!(s, r#"<g fill="gray">"#);
        for p in &pts {
            let (x, y) = map(p);
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#, stroke);
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="{stroke:.3}">"#);
    for &n in layers {
        let verts = layering.hull_vertices(n);
        let coords: Vec<String> = verts
            .iter()
            .map(|&i| {
                let (x, y) = map(&pts[i]);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        match verts.len() {
            0 => {}
            1 => {
                let (x, y) = map(&pts[verts[0]]);
                let _ = writeln!(s, r#"<circle data-layer="{n}" cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#, 2.0 * stroke);
            }
            2 => {
                let _ = writeln!(s, r#"<polyline data-layer="{n}" points="{}"/>"#, coords.join(" "));
            }
            _ => {
                let _ = writeln!(s, r#"<polygon data-layer="{n}" points="{}"/>"#, coords.join(" "));
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_has_at_most_ten_outlines() {
        assert_eq!(svg_layer_selection(5, None).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(svg_layer_selection(25, None).unwrap(), vec![1, 4, 7, 10, 13, 16, 19, 22, 25]);
        for total in 1..300 {
            let s = svg_layer_selection(total, None).unwrap();
            assert!(s.len() <= 10 && s[0] == 1);
        }
        assert_eq!(svg_layer_selection(7, Some(3)).unwrap(), vec![1, 4, 7]);
        assert!(svg_layer_selection(7, Some(0)).is_err());
        assert!(svg_layer_selection(0, None).unwrap().is_empty());
    }
}
