use std::collections::BTreeSet;
use std::fmt::Write;

use sge_core::model::Edge;
use sge_core::{Drawing, Instance, Point, Scalar, VertexId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("vertex {0} has no position")]
    UndrawnVertex(VertexId),
    #[error("tree and path styles are identical")]
    IndistinctStyles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colour {
    Black,
    Grey,
    LightGrey,
}

impl Colour {
    fn hex(self) -> &'static str {
        match self {
            Colour::Black => "#000000",
            Colour::Grey => "#9a9a9a",
            Colour::LightGrey => "#dddddd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStyle {
    pub colour: Colour,
    pub width: Scalar,
}

/// Lengths are in output units; the drawing is scaled so that its longer
/// side spans [`CANVAS`] units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderStyle {
    pub tree: EdgeStyle,
    pub path: EdgeStyle,
    pub vertex_radius: Scalar,
    /// Faint horizontal line through every occupied y-coordinate.
    pub level_lines: bool,
    pub padding: Scalar,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            tree: EdgeStyle { colour: Colour::Grey, width: Scalar::from_int(4) },
            path: EdgeStyle { colour: Colour::Black, width: Scalar::from_ratio(3, 2) },
            vertex_radius: Scalar::from_int(4),
            level_lines: false,
            padding: Scalar::from_int(20),
        }
    }
}

pub const CANVAS: i64 = 800;

/// Decimal places written for coordinates. Rounding happens only here.
pub const PRECISION: usize = 3;

fn num(s: &Scalar) -> String {
    let v = format!("{:.*}", PRECISION, s.to_f64_lossy());
    if v == "-0.000" {
        "0.000".into()
    } else {
        v
    }
}

struct Frame {
    min_x: Scalar,
    max_y: Scalar,
    scale: Scalar,
    pad: Scalar,
}

impl Frame {
    fn map(&self, p: &Point) -> (Scalar, Scalar) {
        (
            &self.pad + &(&(&p.x - &self.min_x) * &self.scale),
            &self.pad + &(&(&self.max_y - &p.y) * &self.scale),
        )
    }
}

fn line(out: &mut String, a: (Scalar, Scalar), b: (Scalar, Scalar)) {
    writeln!(out, r#"    <line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(&a.0), num(&a.1), num(&b.0), num(&b.1))
        .expect("write to string");
}

fn group(out: &mut String, id: &str, style: &EdgeStyle, edges: &[Edge], pos: &[(Scalar, Scalar)]) {
    writeln!(
        out,
        r#"  <g id="{id}" stroke="{}" stroke-width="{}" stroke-linecap="round">"#,
        style.colour.hex(),
        num(&style.width)
    )
    .expect("write to string");
    for &(u, v) in edges {
        line(out, pos[u].clone(), pos[v].clone());
    }
    out.push_str("  </g>\n");
}

/// SVG 1.1 document: level lines, tree edges, path edges, then vertices.
pub fn render_svg(i: &Instance, d: &Drawing, style: &RenderStyle) -> Result<String, RenderError> {
    if style.tree == style.path {
        return Err(RenderError::IndistinctStyles);
    }
    let n = i.len();
    let pts: Vec<&Point> = (0..n).map(|v| d.get(v).ok_or(RenderError::UndrawnVertex(v))).collect::<Result<_, _>>()?;
    let (min_x, max_x, min_y, max_y) = match pts.first() {
        Some(p) => pts.iter().fold((p.x.clone(), p.x.clone(), p.y.clone(), p.y.clone()), |(a, b, c, e), q| {
            (a.min(q.x.clone()), b.max(q.x.clone()), c.min(q.y.clone()), e.max(q.y.clone()))
        }),
        None => (Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()),
    };
    let span = (&max_x - &min_x).max(&max_y - &min_y);
    let scale = if span.is_zero() { Scalar::one() } else { &Scalar::from_int(CANVAS) / &span };
    let frame = Frame { min_x: min_x.clone(), max_y: max_y.clone(), scale, pad: style.padding.clone() };
    let two_pad = &style.padding + &style.padding;
    let width = &two_pad + &(&(&max_x - &min_x) * &frame.scale);
    let height = &two_pad + &(&(&max_y - &min_y) * &frame.scale);
    let pos: Vec<(Scalar, Scalar)> = pts.iter().map(|p| frame.map(p)).collect();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(&width),
        h = num(&height)
    )
    .expect("write to string");
    if style.level_lines {
        let ys: BTreeSet<Scalar> = pts.iter().map(|p| p.y.clone()).collect();
        writeln!(out, r#"  <g id="levels" stroke="{}" stroke-width="1" stroke-dasharray="4 4">"#, Colour::LightGrey.hex())
            .expect("write to string");
        for y in ys.iter().rev() {
            let (_, sy) = frame.map(&Point::new(min_x.clone(), y.clone()));
            line(&mut out, (Scalar::zero(), sy.clone()), (width.clone(), sy));
        }
        out.push_str("  </g>\n");
    }
    group(&mut out, "tree", &style.tree, &i.tree.edges(), &pos);
    group(&mut out, "path", &style.path, &i.path.edges(), &pos);
    out.push_str("  <g id=\"vertices\" fill=\"#000000\" stroke=\"#ffffff\" stroke-width=\"1\">\n");
    for (v, (x, y)) in pos.iter().enumerate() {
        writeln!(
            out,
            r#"    <circle cx="{}" cy="{}" r="{}"><title>{v}</title></circle>"#,
            num(x),
            num(y),
            num(&style.vertex_radius)
        )
        .expect("write to string");
    }
    out.push_str("  </g>\n</svg>\n");
    Ok(out)
}
