//! SVG output of refinement cells, the main tree skeleton and its
//! ramification points.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::attractor::{check_budget, refine, DEFAULT_CELL_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::maintree::{MainTree, Ramification, SkeletonTree};
use crate::system::PolygonalTreeSystem;

pub const MIN_PIXELS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStyle {
    pub stroke: String,
    /// Stroke width in pixels.
    pub stroke_width: f64,
    pub fill: String,
}

impl LayerStyle {
    fn attrs(&self) -> String {
        format!(
            "stroke=\"{}\" stroke-width=\"{}\" fill=\"{}\" vector-effect=\"non-scaling-stroke\"",
            self.stroke,
            num(self.stroke_width),
            self.fill
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub depth: usize,
    /// Skeleton depth for the overlay; defaults to `depth`.
    pub tree_depth: Option<usize>,
    pub width: u32,
    pub height: u32,
    pub cells: LayerStyle,
    pub tree: LayerStyle,
    pub markers: LayerStyle,
    pub show_cells: bool,
    pub show_tree: bool,
    pub show_ramifications: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            depth: 6,
            tree_depth: None,
            width: 800,
            height: 800,
            cells: LayerStyle {
                stroke: "#4a6b8a".into(),
                stroke_width: 0.5,
                fill: "#cfdceb".into(),
            },
            tree: LayerStyle {
                stroke: "#b22222".into(),
                stroke_width: 1.5,
                fill: "none".into(),
            },
            markers: LayerStyle {
                stroke: "#000000".into(),
                stroke_width: 1.5,
                fill: "none".into(),
            },
            show_cells: true,
            show_tree: false,
            show_ramifications: false,
        }
    }
}

impl RenderOptions {
    pub fn check(&self, sys: &PolygonalTreeSystem) -> Result<()> {
        if self.width < MIN_PIXELS || self.height < MIN_PIXELS {
            return Err(Error::Schema {
                path: "render".into(),
                message: format!(
                    "width and height must be at least {MIN_PIXELS}, got {}x{}",
                    self.width, self.height
                ),
            });
        }
        check_budget(sys, self.depth, DEFAULT_CELL_BUDGET)
    }
}

// shortest round-trip form, without negative zero
fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

fn coords(points: impl IntoIterator<Item = Point>) -> String {
    let mut s = String::new();
    for (k, p) in points.into_iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", num(p.x), num(-p.y));
    }
    s
}

pub fn render_svg(sys: &PolygonalTreeSystem, opts: &RenderOptions) -> Result<String> {
    opts.check(sys)?;
    let tree_depth = opts.tree_depth.unwrap_or(opts.depth);
    let overlay = if opts.show_tree || opts.show_ramifications {
        let mt = MainTree::new(sys)?;
        let tree = mt.skeleton_tree(tree_depth)?;
        let ram = if opts.show_ramifications {
            mt.main_ramification_points(tree_depth)?
        } else {
            Vec::new()
        };
        Some((tree, ram))
    } else {
        None
    };
    let cells = if opts.show_cells {
        refine(sys, opts.depth)?
    } else {
        Vec::new()
    };

    let verts = sys.vertices();
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in verts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let margin = 0.05 * (x1 - x0).max(y1 - y0);
    let (vx, vy) = (x0 - margin, -y1 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        opts.width,
        opts.height,
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    let _ = writeln!(
        out,
        "<title>{} depth {}</title>",
        escape(sys.name()),
        opts.depth
    );

    if opts.show_cells {
        if opts.depth == 0 {
            let _ = writeln!(
                out,
                "<g id=\"cells\" {}>\n<polygon points=\"{}\"/>\n</g>",
                LayerStyle {
                    fill: "none".into(),
                    ..opts.cells.clone()
                }
                .attrs(),
                coords(verts.iter().copied())
            );
        } else {
            let _ = writeln!(out, "<g id=\"cells\" {}>", opts.cells.attrs());
            for c in &cells {
                let _ = writeln!(
                    out,
                    "<polygon points=\"{}\"/>",
                    coords(c.polygon.vertices().iter().copied())
                );
            }
            out.push_str("</g>\n");
        }
    }
    if let Some((tree, ram)) = &overlay {
        if opts.show_tree {
            tree_layer(&mut out, tree, &opts.tree);
        }
        if opts.show_ramifications {
            marker_layer(&mut out, ram, 0.015 * sys.diameter(), &opts.markers);
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn tree_layer(out: &mut String, tree: &SkeletonTree, style: &LayerStyle) {
    let _ = writeln!(
        out,
        "<g id=\"tree\" {} stroke-linecap=\"round\">",
        style.attrs()
    );
    for e in &tree.edges {
        let (a, b) = (tree.nodes[e.a], tree.nodes[e.b]);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(a.x),
            num(-a.y),
            num(b.x),
            num(-b.y)
        );
    }
    out.push_str("</g>\n");
}

fn marker_layer(out: &mut String, ram: &[Ramification], radius: f64, style: &LayerStyle) {
    let _ = writeln!(out, "<g id=\"ramifications\" {}>", style.attrs());
    for r in ram {
        let dash = if r.provisional {
            " stroke-dasharray=\"2 2\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"{dash}><title>order {}</title></circle>",
            num(r.point.x),
            num(-r.point.y),
            num(radius),
            r.degree
        );
    }
    out.push_str("</g>\n");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
