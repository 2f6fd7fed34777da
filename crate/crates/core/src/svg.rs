//! Root plots as standalone SVG 1.1 documents.
//!
//! The plot is centred at the origin with one fixed scale for both axes,
//! chosen so that the roots, the unit circle and every bound circle fit with
//! a 10% margin. Coordinates are written with three decimals, so the output
//! is a deterministic function of its inputs.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::analysis::BoundsReport;
use crate::roots::RootSet;

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    /// Width and height in pixels.
    pub size: u32,
    pub marker_radius: f64,
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            size: 800,
            marker_radius: 4.0,
            title: None,
        }
    }
}

/// A circle about the origin drawn as a dashed outline.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCircle {
    pub radius: f64,
    pub label: String,
    pub color: &'static str,
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Roots as red dots over axes, a dotted unit circle and the given circles.
pub fn plot_roots_svg(roots: &[Complex64], circles: &[BoundCircle], opts: &SvgOptions) -> String {
    let size = opts.size as f64;
    let half = size / 2.0;
    let extent = roots
        .iter()
        .map(|z| z.norm())
        .chain(circles.iter().map(|c| c.radius))
        .filter(|r| r.is_finite())
        .fold(1.0, f64::max)
        * 1.1;
    let scale = half / extent;
    let px = |z: Complex64| (half + z.re * scale, half - z.im * scale);

    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    )
    .unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = opts.size
    )
    .unwrap();
    if let Some(title) = &opts.title {
        writeln!(w, "<title>{}</title>", escape(title)).unwrap();
    }
    writeln!(
        w,
        r#"<rect x="0" y="0" width="{s}" height="{s}" fill="white"/>"#,
        s = opts.size
    )
    .unwrap();
    writeln!(
        w,
        r##"<g stroke="#999999" stroke-width="1"><line x1="0" y1="{h}" x2="{s}" y2="{h}"/><line x1="{h}" y1="0" x2="{h}" y2="{s}"/></g>"##,
        h = num(half),
        s = opts.size
    )
    .unwrap();
    writeln!(
        w,
        r##"<circle cx="{h}" cy="{h}" r="{r}" fill="none" stroke="#333333" stroke-width="1" stroke-dasharray="2,4"><title>unit circle</title></circle>"##,
        h = num(half),
        r = num(scale)
    )
    .unwrap();
    for c in circles.iter().filter(|c| c.radius.is_finite()) {
        writeln!(
            w,
            r#"<circle cx="{h}" cy="{h}" r="{r}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="8,4"><title>{label}</title></circle>"#,
            h = num(half),
            r = num(c.radius * scale),
            color = c.color,
            label = escape(&c.label)
        )
        .unwrap();
    }
    writeln!(w, r#"<g fill="red">"#).unwrap();
    for &z in roots {
        let (x, y) = px(z);
        writeln!(
            w,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            num(x),
            num(y),
            num(opts.marker_radius)
        )
        .unwrap();
    }
    writeln!(w, "</g>").unwrap();
    writeln!(w, "</svg>").unwrap();
    out
}

/// Voronoi roots with the closed-form modulus floor.
pub fn voronoi_root_plot(pv: &RootSet, bounds: &BoundsReport, opts: &SvgOptions) -> String {
    let circles = [BoundCircle {
        radius: bounds.d_closed_form,
        label: format!("largest root modulus floor {:.6}", bounds.d_closed_form),
        color: "#1f77b4",
    }];
    plot_roots_svg(&pv.roots, &circles, opts)
}

/// Cumulative-edge roots with the quotient annulus and both modulus floors.
pub fn e_leq_root_plot(pe: &RootSet, bounds: &BoundsReport, opts: &SvgOptions) -> String {
    let (lo, hi) = bounds.ek_annulus;
    let circles = [
        BoundCircle {
            radius: lo,
            label: format!("annulus inner radius {lo:.6}"),
            color: "#2ca02c",
        },
        BoundCircle {
            radius: hi,
            label: format!("annulus outer radius {hi:.6}"),
            color: "#2ca02c",
        },
        BoundCircle {
            radius: bounds.pe_floor_crossing,
            label: format!("crossing-ratio floor {:.6}", bounds.pe_floor_crossing),
            color: "#1f77b4",
        },
        BoundCircle {
            radius: bounds.pe_floor_hull,
            label: format!("hull-size floor {:.6}", bounds.pe_floor_hull),
            color: "#ff7f0e",
        },
    ];
    plot_roots_svg(&pe.roots, &circles, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_roots(n: usize) -> Vec<Complex64> {
        (1..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect()
    }

    fn circle_markers(svg: &str) -> Vec<(f64, f64)> {
        svg.lines()
            .filter(|l| l.starts_with("<circle cx") && l.ends_with("/>"))
            .map(|l| {
                let attr = |name: &str| -> f64 {
                    let start = l.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
                    l[start..].split('"').next().unwrap().parse().unwrap()
                };
                (attr("cx"), attr("cy"))
            })
            .collect()
    }

    #[test]
    fn markers_on_unit_circle() {
        let svg = plot_roots_svg(&unit_roots(7), &[], &SvgOptions::default());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"version="1.1""#));
        assert!(svg.trim_end().ends_with("</svg>"));
        let markers = circle_markers(&svg);
        assert_eq!(markers.len(), 6);
        let r = 400.0 / 1.1;
        for (x, y) in markers {
            let d = ((x - 400.0).powi(2) + (y - 400.0).powi(2)).sqrt();
            assert!((d - r).abs() < 2e-3, "{d} vs {r}");
        }
        assert!(svg.contains(&format!(r#"r="{}""#, num(r))));
    }

    #[test]
    fn bound_circles_set_scale() {
        let circles = [BoundCircle {
            radius: 2.0,
            label: "a < b & c".into(),
            color: "#000000",
        }];
        let opts = SvgOptions {
            title: Some("t".into()),
            ..SvgOptions::default()
        };
        let svg = plot_roots_svg(&[Complex64::new(0.5, -0.5)], &circles, &opts);
        assert!(svg.contains(r#"r="363.636""#));
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(svg.contains("<title>t</title>"));
        assert_eq!(
            svg,
            plot_roots_svg(&[Complex64::new(0.5, -0.5)], &circles, &opts)
        );
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(-1.5), "-1.500");
    }
}
