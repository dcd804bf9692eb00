use std::fmt::Write as _;

use super::{Assignment, CreasePattern};

#[derive(Clone, Debug, PartialEq)]
pub struct SvgStyle {
    /// Stroke width in pattern units; `None` picks 0.5% of the drawing diagonal.
    pub stroke_width: Option<f64>,
    /// Margin around the pattern as a fraction of the drawing diagonal.
    pub margin: f64,
    pub mountain_color: String,
    pub valley_color: String,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            stroke_width: None,
            margin: 0.03,
            mountain_color: "#d62728".into(),
            valley_color: "#1f77b4".into(),
        }
    }
}

fn class(a: Assignment) -> &'static str {
    match a {
        Assignment::Mountain => "mountain",
        Assignment::Valley => "valley",
        Assignment::Boundary => "boundary",
        Assignment::Unassigned => "unassigned",
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// SVG 1.1 drawing with one `<path>` per crease. The y axis points up, as in
/// the pattern, via a flipping group transform.
pub fn save_svg(pattern: &CreasePattern, style: &SvgStyle) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let Some((lo, hi)) = pattern.bounds() else {
        out.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 0 0\"/>\n");
        return out.into_bytes();
    };
    let diag = (hi - lo).norm().max(1e-9);
    let m = style.margin * diag;
    let sw = style.stroke_width.unwrap_or(0.005 * diag);
    let (x0, y0, w, h) = (lo.x - m, -(hi.y + m), hi.x - lo.x + 2.0 * m, hi.y - lo.y + 2.0 * m);
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">",
        num(x0),
        num(y0),
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(
        out,
        "<style>path{{fill:none;stroke-linecap:round}} .mountain{{stroke:{};stroke-dasharray:{} {} {} {}}} .valley{{stroke:{};stroke-dasharray:{} {}}} .boundary{{stroke:#000000}} .unassigned{{stroke:#7f7f7f}}</style>",
        style.mountain_color,
        num(4.0 * sw),
        num(1.5 * sw),
        num(sw),
        num(1.5 * sw),
        style.valley_color,
        num(4.0 * sw),
        num(2.0 * sw),
    );
    let _ = writeln!(out, "<g transform=\"scale(1,-1)\" stroke-width=\"{}\">", num(sw));
    for c in pattern.creases() {
        let a = pattern.vertices()[c.vertices[0]];
        let b = pattern.vertices()[c.vertices[1]];
        let _ = writeln!(
            out,
            "<path class=\"{}\" d=\"M {} {} L {} {}\"/>",
            class(c.assignment),
            num(a.x),
            num(a.y),
            num(b.x),
            num(b.y)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_pattern_gives_empty_canvas() {
        let s = String::from_utf8(save_svg(&CreasePattern::empty(), &SvgStyle::default())).unwrap();
        assert!(s.contains("viewBox=\"0 0 0 0\""));
        assert!(!s.contains("<path"));
    }
}
