use std::fmt::Write as _;

use crate::bag::StairDirection;
use crate::cut::Boundary;
use crate::floorplan::Floorplan;
use crate::geom::Point;
use crate::tree::MscNode;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Drawing width in pixels; height follows the bbox aspect.
    pub width: f64,
    pub margin: f64,
    pub show_names: bool,
    pub mark_bends: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 800.0,
            margin: 10.0,
            show_names: true,
            mark_bends: true,
        }
    }
}

/// A staircase to overlay.
#[derive(Clone, Debug)]
pub struct Staircase<'a> {
    pub boundary: &'a Boundary,
    pub stype: StairDirection,
    pub label: String,
}

pub fn tree_staircases(tree: &MscNode) -> Vec<Staircase<'_>> {
    tree.nodes()
        .into_iter()
        .map(|n| Staircase {
            boundary: &n.cut.boundary,
            stype: n.stype,
            label: n.display_path().to_string(),
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn num(v: f64) -> String {
    let r = (v * 100.0).round() / 100.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

/// Blocks as labelled rectangles, one `<polyline>` per staircase piece (MIS
/// and MDS in different styles) and a small square on every bend.
pub fn render_svg(fp: &Floorplan, staircases: &[Staircase], opts: &SvgOptions) -> String {
    let bbox = fp.bbox();
    let scale = opts.width / bbox.width().max(1) as f64;
    let m = opts.margin;
    let height = bbox.height() as f64 * scale;
    let px = |p: Point| (m + (p.x - bbox.x0) as f64 * scale, m + (bbox.y1 - p.y) as f64 * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(opts.width + 2.0 * m),
        num(height + 2.0 * m),
        num(opts.width + 2.0 * m),
        num(height + 2.0 * m)
    );
    s.push_str(
        "<style>.block{fill:#f4f1e8;stroke:#555;stroke-width:1}.name{font:11px sans-serif;fill:#333}\
         .MIS{fill:none;stroke:#c0392b;stroke-width:3}.MDS{fill:none;stroke:#2c6fbb;stroke-width:3;stroke-dasharray:8 4}\
         .bend{fill:#111}</style>\n",
    );
    for b in fp.blocks() {
        let (x, y) = px(b.rect.top_left());
        let _ = writeln!(
            s,
            "<rect class=\"block\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            num(x),
            num(y),
            num(b.rect.width() as f64 * scale),
            num(b.rect.height() as f64 * scale)
        );
        if opts.show_names {
            let (cx, cy) = px(Point::new((b.rect.x0 + b.rect.x1) / 2, (b.rect.y0 + b.rect.y1) / 2));
            let _ = writeln!(
                s,
                "<text class=\"name\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                num(cx),
                num(cy),
                escape(&b.name)
            );
        }
    }
    for st in staircases {
        let class = st.stype.name();
        for piece in &st.boundary.pieces {
            let pts: Vec<String> = piece
                .points
                .iter()
                .map(|&p| {
                    let (x, y) = px(p);
                    format!("{},{}", num(x), num(y))
                })
                .collect();
            let _ = writeln!(
                s,
                "<polyline class=\"{class}\" data-node=\"{}\" points=\"{}\"/>",
                escape(&st.label),
                pts.join(" ")
            );
            if opts.mark_bends {
                for b in piece.bend_points() {
                    let (x, y) = px(b);
                    let _ = writeln!(s, "<path class=\"bend\" d=\"M{} {}h6v6h-6z\"/>", num(x - 3.0), num(y - 3.0));
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Renders every cut of the tree.
pub fn render_tree_svg(fp: &Floorplan, tree: &MscNode, opts: &SvgOptions) -> String {
    render_svg(fp, &tree_staircases(tree), opts)
}
