//! CSV and SVG output for simplex scans. Output is byte-stable: fixed float
//! formatting, fixed element order, LF line endings.

use std::fmt::Write;

use crate::ghz::GhzLabel;
use crate::mixture::{RegionClass, ScanPoint};

pub const CSV_HEADER: &str = "alpha,beta,gamma,noise,class,i2,i3,i4,min_pt_eig";

/// Shortest round-trip decimal of `x` after rounding to 12 significant digits.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("own formatting parses");
    if rounded == 0.0 {
        return "0".into();
    }
    let a = rounded.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

pub fn scan_csv(points: &[ScanPoint]) -> String {
    let mut out = String::with_capacity(points.len() * 80);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt12(p.alpha),
            fmt12(p.beta),
            fmt12(p.gamma),
            fmt12(p.noise),
            p.class.name(),
            fmt12(p.i2),
            fmt12(p.i3),
            fmt12(p.i4),
            fmt12(p.min_pt_eig),
        );
    }
    out
}

const PLOT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const LEGEND_W: f64 = 190.0;

fn px(x: f64) -> String {
    format!("{x:.3}")
}

fn legend(out: &mut String, x0: f64, y0: f64) {
    let _ = writeln!(
        out,
        r#"<g id="legend" font-family="sans-serif" font-size="13">"#
    );
    for (n, class) in RegionClass::ALL.iter().enumerate() {
        let y = y0 + 24.0 * n as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="16" height="16" fill="{}" stroke="#444444"/><text x="{}" y="{}">{}</text>"##,
            px(x0),
            px(y),
            class.color(),
            px(x0 + 24.0),
            px(y + 13.0),
            class.name()
        );
    }
    out.push_str("</g>\n");
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        px(width),
        px(height),
        px(width),
        px(height)
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#ffffff"/>"##,
        px(width),
        px(height)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" font-family="sans-serif" font-size="16">{}</text>"#,
        px(MARGIN),
        title
    );
}

/// Lower-left triangle raster: `α` to the right, `β` upwards.
pub fn binary_svg(points: &[ScanPoint], resolution: usize, a: GhzLabel, b: GhzLabel) -> String {
    let cell = PLOT / (resolution + 1) as f64;
    let width = MARGIN * 2.0 + PLOT + LEGEND_W;
    let height = MARGIN * 2.0 + PLOT;
    let mut out = String::with_capacity(points.len() * 90 + 2048);
    header(
        &mut out,
        width,
        height,
        &format!("GHZ_{a} (α) / GHZ_{b} (β) with white noise"),
    );
    out.push_str("<g id=\"cells\" shape-rendering=\"crispEdges\">\n");
    for p in points {
        let (i, j, _) = p.node;
        let x = MARGIN + i as f64 * cell;
        let y = MARGIN + PLOT - (j + 1) as f64 * cell;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            px(x),
            px(y),
            px(cell),
            px(cell),
            p.class.color()
        );
    }
    out.push_str("</g>\n");
    axes(&mut out, MARGIN, MARGIN, PLOT, "α", "β");
    legend(&mut out, MARGIN * 1.5 + PLOT, MARGIN + 10.0);
    out.push_str("</svg>\n");
    out
}

fn axes(out: &mut String, x0: f64, y0: f64, size: f64, xl: &str, yl: &str) {
    let _ = writeln!(
        out,
        r##"<g id="axes" font-family="sans-serif" font-size="13" stroke="#333333" fill="#333333"><line x1="{x0}" y1="{yb}" x2="{xr}" y2="{yb}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{yb}"/><text x="{xm}" y="{xt}" stroke="none">{xl}</text><text x="{xy}" y="{ym}" stroke="none">{yl}</text><text x="{x0}" y="{xt}" stroke="none">0</text><text x="{xr}" y="{xt}" stroke="none">1</text><text x="{xy}" y="{y0t}" stroke="none">1</text></g>"##,
        x0 = px(x0),
        y0 = px(y0),
        yb = px(y0 + size),
        xr = px(x0 + size),
        xm = px(x0 + size / 2.0),
        xt = px(y0 + size + 20.0),
        xy = px(x0 - 20.0),
        ym = px(y0 + size / 2.0),
        y0t = px(y0 + 10.0),
    );
}

/// Slices of the 3-simplex at up to six values of `γ`, each drawn as an
/// `(α, β)` triangle.
pub fn ternary_svg(
    points: &[ScanPoint],
    resolution: usize,
    labels: (GhzLabel, GhzLabel, GhzLabel),
) -> String {
    let mut slices: Vec<usize> = (0..6).map(|s| s * resolution / 6).collect();
    slices.dedup();
    let panel = 300.0;
    let gap = 50.0;
    let cols = 3usize;
    let rows = slices.len().div_ceil(cols);
    let cell = panel / (resolution + 1) as f64;
    let width = MARGIN * 2.0 + cols as f64 * (panel + gap) + LEGEND_W;
    let height = MARGIN * 2.0 + rows as f64 * (panel + gap);
    let (a, b, c) = labels;
    let mut out = String::with_capacity(points.len() * 90 + 4096);
    header(
        &mut out,
        width,
        height,
        &format!("GHZ_{a} (α), GHZ_{b} (β), GHZ_{c} (γ) with white noise"),
    );
    for (n, &k) in slices.iter().enumerate() {
        let x0 = MARGIN + (n % cols) as f64 * (panel + gap);
        let y0 = MARGIN + (n / cols) as f64 * (panel + gap);
        let _ = writeln!(
            out,
            r#"<g id="slice-{k}" shape-rendering="crispEdges"><text x="{}" y="{}" font-family="sans-serif" font-size="13">γ = {}</text>"#,
            px(x0),
            px(y0 - 6.0),
            fmt12(k as f64 / resolution as f64)
        );
        for p in points.iter().filter(|p| p.node.2 == k) {
            let (i, j, _) = p.node;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                px(x0 + i as f64 * cell),
                px(y0 + panel - (j + 1) as f64 * cell),
                px(cell),
                px(cell),
                p.class.color()
            );
        }
        out.push_str("</g>\n");
        axes(&mut out, x0, y0, panel, "α", "β");
    }
    legend(&mut out, width - LEGEND_W + 10.0, MARGIN + 10.0);
    out.push_str("</svg>\n");
    out
}
