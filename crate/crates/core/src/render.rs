//! Standalone SVG figures of the tree and of its image in the disc model.

use std::fmt::Write;

use crate::error::{usage, Result};
use crate::maps::ExplicitMap;
use crate::tree::{self, EdgePoint, Word};

pub const MAX_RENDER_DEPTH: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// The tree, drawn radially with leaves evenly spaced.
    Tree,
    /// Images of all edges, projected by `r ↦ tanh(r/2)`.
    Image,
}

impl std::str::FromStr for Figure {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "figure1" => Ok(Figure::Tree),
            "figure2" => Ok(Figure::Image),
            other => Err(usage(format!("unknown figure {other:?} (expected figure1 or figure2)"))),
        }
    }
}

pub fn render(figure: Figure, depth: usize, timestamp: Option<&str>) -> Result<String> {
    if depth > MAX_RENDER_DEPTH {
        return Err(usage(format!("figures are limited to depth {MAX_RENDER_DEPTH}")));
    }
    let mut svg = Svg::new(timestamp);
    match figure {
        Figure::Tree => tree_layout(&mut svg, depth),
        Figure::Image => image_layout(&mut svg, depth),
    }
    Ok(svg.finish())
}

struct Svg(String);

impl Svg {
    fn new(timestamp: Option<&str>) -> Self {
        let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        if let Some(t) = timestamp {
            let _ = writeln!(s, "<!-- generated {t} -->");
        }
        s.push_str(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n\
             <style>.edge{stroke:#1f4e79;stroke-width:0.004}.vertex{fill:#1f4e79}\
             .boundary{fill:none;stroke:#888;stroke-width:0.004}.basepoint{fill:#c0392b}</style>\n",
        );
        Svg(s)
    }

    fn line(&mut self, (x1, y1): (f64, f64), (x2, y2): (f64, f64)) {
        let _ = writeln!(
            self.0,
            "<line class=\"edge\" x1=\"{x1:.6}\" y1=\"{:.6}\" x2=\"{x2:.6}\" y2=\"{:.6}\"/>",
            -y1, -y2
        );
    }

    fn circle(&mut self, class: &str, (x, y): (f64, f64), r: f64) {
        let _ = writeln!(self.0, "<circle class=\"{class}\" cx=\"{x:.6}\" cy=\"{:.6}\" r=\"{r}\"/>", -y);
    }

    fn finish(mut self) -> String {
        self.0.push_str("</svg>\n");
        self.0
    }
}

fn tree_layout(svg: &mut Svg, depth: usize) {
    let scale = 1.0 / depth.max(1) as f64;
    let leaves = tree::sphere_size(depth.max(1)) as f64;
    // A vertex sits at the mean angle of its depth-`depth` descendants.
    let pos = |w: &Word| -> (f64, f64) {
        if w.is_root() {
            return (0.0, 0.0);
        }
        let below = tree::sphere_size(depth) / tree::sphere_size(w.len());
        let first = leaf_rank(w, depth);
        let theta = std::f64::consts::TAU * (first as f64 + below as f64 / 2.0) / leaves;
        let r = w.len() as f64 * scale;
        (r * theta.cos(), r * theta.sin())
    };
    for w in tree::ball(depth) {
        if let Some(p) = w.parent() {
            svg.line(pos(&p), pos(&w));
        }
    }
    for w in tree::ball(depth).iter().skip(1) {
        svg.circle("vertex", pos(w), 0.008);
    }
    svg.circle("basepoint", (0.0, 0.0), 0.015);
}

/// Rank of the first depth-`depth` descendant of `w` in sphere order.
fn leaf_rank(w: &Word, depth: usize) -> usize {
    let d = w.digits();
    let mut rank = d[0] as usize;
    for &a in &d[1..] {
        rank = rank * 3 + a as usize;
    }
    rank * 3usize.pow((depth - d.len()) as u32)
}

fn image_layout(svg: &mut Svg, depth: usize) {
    let f = ExplicitMap;
    svg.circle("boundary", (0.0, 0.0), 1.0);
    let inner = if depth == 0 { vec![] } else { tree::ball(depth - 1) };
    for w in inner {
        for c in w.children() {
            let digit = *c.digits().last().expect("child is not the root");
            let start = f.edge_limit_at_parent(&EdgePoint { parent: w.clone(), child_digit: digit, t: 0.5 });
            let end = f.map_vertex(&c);
            if let Ok(start) = start {
                svg.line(start.to_disc(), end.to_disc());
            }
        }
    }
    svg.circle("basepoint", (0.0, 0.0), 0.015);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!("class=\"{class}\"")).count()
    }

    #[test]
    fn figure2_segment_counts() {
        let d0 = render(Figure::Image, 0, None).unwrap();
        assert_eq!(count(&d0, "edge"), 0);
        assert_eq!(count(&d0, "basepoint"), 1);
        let d3 = render(Figure::Image, 3, None).unwrap();
        assert_eq!(count(&d3, "basepoint") + count(&d3, "edge"), 1 + 4 + 12 + 36);
    }

    #[test]
    fn figure2_depth_one_axes() {
        let svg = render(Figure::Image, 1, None).unwrap();
        let tip = (0.5f64).tanh();
        for needle in [
            format!("x2=\"{tip:.6}\" y2=\"{:.6}\"", -0.0f64),
            format!("x2=\"{:.6}\" y2=\"{:.6}\"", 0.0, -tip),
            format!("y2=\"{:.6}\"", tip),
        ] {
            assert!(svg.contains(&needle), "{needle}\n{svg}");
        }
    }

    #[test]
    fn timestamp_only_in_comment() {
        let a = render(Figure::Tree, 3, Some("t1")).unwrap();
        let b = render(Figure::Tree, 3, Some("t2")).unwrap();
        let strip = |s: &str| s.lines().filter(|l| !l.starts_with("<!--")).collect::<Vec<_>>().join("\n");
        assert_ne!(a, b);
        assert_eq!(strip(&a), strip(&b));
        assert!(render(Figure::Tree, 8, None).is_err());
        assert_eq!(count(&a, "edge"), 4 + 12 + 36);
    }
}
