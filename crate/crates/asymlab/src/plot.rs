//! Deterministic SVG output: planar bodies with overlays, and pass/fail
//! bar charts for reports.

use crate::geometry::Polytope;
use crate::report::Report;
use crate::Error;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Renders labelled planar polygons as closed SVG paths (fills at low
/// opacity so overlays like K, -K, the kernel and the Blaschke body stay
/// readable). Errors with `UnsupportedDim` for anything but dimension 2.
pub fn polygons_svg(bodies: &[(&str, &Polytope)]) -> Result<String, Error> {
    if bodies.is_empty() {
        return Err(Error::DegenerateInput("nothing to plot".into()));
    }
    for (_, p) in bodies {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDim(p.dim()));
        }
    }
    let (mut xmin, mut ymin) = (f64::INFINITY, f64::INFINITY);
    let (mut xmax, mut ymax) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (_, p) in bodies {
        for v in p.vertices() {
            xmin = xmin.min(v[0]);
            xmax = xmax.max(v[0]);
            ymin = ymin.min(v[1]);
            ymax = ymax.max(v[1]);
        }
    }
    let margin = 0.05 * (xmax - xmin).max(ymax - ymin).max(1e-9);
    let (x0, y0) = (xmin - margin, ymin - margin);
    let (w, h) = (xmax - xmin + 2.0 * margin, ymax - ymin + 2.0 * margin);

    let size = 640.0;
    let scale = size / w.max(h);
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        // Flip y so the mathematical orientation reads correctly.
        ((x - x0) * scale, (h - (y - y0)) * scale)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.6} {:.6}\">\n",
        w * scale,
        h * scale,
        w * scale,
        h * scale
    ));
    for (i, (label, p)) in bodies.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        // Order vertices by angle around the centroid for a valid outline.
        let c = p.centroid();
        let mut verts: Vec<_> = p.vertices().to_vec();
        verts.sort_by(|a, b| {
            let aa = (a[1] - c[1]).atan2(a[0] - c[0]);
            let ab = (b[1] - c[1]).atan2(b[0] - c[0]);
            aa.partial_cmp(&ab).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut d = String::new();
        for (k, v) in verts.iter().enumerate() {
            let (px, py) = to_px(v[0], v[1]);
            d.push_str(&format!("{}{:.6} {:.6} ", if k == 0 { "M" } else { "L" }, px, py));
        }
        d.push('Z');
        out.push_str(&format!(
            "  <path d=\"{d}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"{color}\" stroke-width=\"2\"><title>{label}</title></path>\n"
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// One bar per check, green for pass and red for fail.
pub fn report_svg(report: &Report) -> String {
    let n = report.checks.len().max(1);
    let bar_w = 28.0;
    let gap = 8.0;
    let height = 220.0;
    let width = n as f64 * (bar_w + gap) + gap + 220.0;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.6} {height:.6}\">\n"
    ));
    out.push_str(&format!(
        "  <text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"14\">suite: {} ({} checks)</text>\n",
        report.suite,
        report.checks.len()
    ));
    for (i, c) in report.checks.iter().enumerate() {
        let x = gap + i as f64 * (bar_w + gap);
        let full = height - 60.0;
        let color = if c.pass { "#2ca02c" } else { "#d62728" };
        out.push_str(&format!(
            "  <rect x=\"{x:.6}\" y=\"{:.6}\" width=\"{bar_w:.6}\" height=\"{full:.6}\" fill=\"{color}\"><title>{}: expected {} observed {}</title></rect>\n",
            40.0, c.id, c.expected, c.observed
        ));
        out.push_str(&format!(
            "  <text x=\"{:.6}\" y=\"{:.6}\" font-family=\"monospace\" font-size=\"10\" transform=\"rotate(45 {:.6} {:.6})\">{}</text>\n",
            x,
            height - 8.0,
            x,
            height - 8.0,
            c.id
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies;
    use crate::report::{Check, Provenance};

    #[test]
    fn triangle_with_kernel_overlay_has_two_paths() {
        let t = bodies::triangle();
        let kernel = crate::kernel::symmetric_kernel(&t).unwrap().kernel;
        let svg = polygons_svg(&[("K", &t), ("kernel", &kernel)]).unwrap();
        assert_eq!(svg.matches("<path").count(), 2);
        assert!(svg.ends_with("</svg>\n"));
        // Deterministic.
        let svg2 = polygons_svg(&[("K", &t), ("kernel", &kernel)]).unwrap();
        assert_eq!(svg, svg2);
    }

    #[test]
    fn three_d_bodies_are_rejected() {
        let c = bodies::cube(3);
        assert!(matches!(polygons_svg(&[("K", &c)]), Err(Error::UnsupportedDim(3))));
    }

    #[test]
    fn report_chart_has_one_bar_per_check() {
        let mut r = Report::new("demo", 0);
        r.push(Check::close("a", "", 1.0, 1.0, 0.1, Provenance::Exact));
        r.push(Check::close("b", "", 1.0, 2.0, 0.1, Provenance::Exact));
        let svg = report_svg(&r);
        assert_eq!(svg.matches("<rect").count(), 2);
        assert!(svg.contains("#2ca02c") && svg.contains("#d62728"));
    }
}
