//! Static SVG scatter output.
//!
//! Fixed 600x600 view box, labeled axes, one glyph shape per class, and
//! optional dashed overlays for theoretical geometry. Everything is emitted
//! from computed coordinates; there are no external references.

const SIZE: f64 = 600.0;
const MARGIN: f64 = 70.0;
const PALETTE: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

#[derive(Debug, Clone)]
pub struct Scatter {
    title: String,
    x_label: String,
    y_label: String,
    points: Vec<(f64, f64, usize)>,
    dashed_segments: Vec<(f64, f64, f64, f64)>,
    solid_segments: Vec<(f64, f64, f64, f64)>,
    dashed_unit_circle: bool,
}

impl Scatter {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            points: Vec::new(),
            dashed_segments: Vec::new(),
            solid_segments: Vec::new(),
            dashed_unit_circle: false,
        }
    }

    /// Adds a point; `class` (1-based) picks glyph and color.
    pub fn point(&mut self, x: f64, y: f64, class: usize) {
        self.points.push((x, y, class));
    }

    pub fn dashed_segment(&mut self, x1: f64, y1: f64, x2: f64, y2: f64) {
        self.dashed_segments.push((x1, y1, x2, y2));
    }

    /// Dashed edges between every pair of vertices: a triangle for three
    /// classes, the full pyramid edge set for four.
    pub fn dashed_polygon(&mut self, vertices: &[(f64, f64)]) {
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                let (x1, y1) = vertices[i];
                let (x2, y2) = vertices[j];
                self.dashed_segment(x1, y1, x2, y2);
            }
        }
    }

    pub fn solid_segment(&mut self, x1: f64, y1: f64, x2: f64, y2: f64) {
        self.solid_segments.push((x1, y1, x2, y2));
    }

    pub fn with_unit_circle(&mut self) {
        self.dashed_unit_circle = true;
    }

    fn ranges(&self) -> (f64, f64, f64, f64) {
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for &(x, y, _) in &self.points {
            xs.push(x);
            ys.push(y);
        }
        for &(x1, y1, x2, y2) in self.dashed_segments.iter().chain(&self.solid_segments) {
            xs.extend([x1, x2]);
            ys.extend([y1, y2]);
        }
        if self.dashed_unit_circle {
            xs.extend([-1.0, 1.0]);
            ys.extend([-1.0, 1.0]);
        }
        let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().copied().fold(init, f);
        let (mut x_min, mut x_max) = (fold(&xs, f64::INFINITY, f64::min), fold(&xs, f64::NEG_INFINITY, f64::max));
        let (mut y_min, mut y_max) = (fold(&ys, f64::INFINITY, f64::min), fold(&ys, f64::NEG_INFINITY, f64::max));
        if !x_min.is_finite() {
            (x_min, x_max) = (-1.0, 1.0);
        }
        if !y_min.is_finite() {
            (y_min, y_max) = (-1.0, 1.0);
        }
        let pad = |min: &mut f64, max: &mut f64| {
            let span = *max - *min;
            if span <= 0.0 {
                *min -= 1.0;
                *max += 1.0;
            } else {
                *min -= 0.08 * span;
                *max += 0.08 * span;
            }
        };
        pad(&mut x_min, &mut x_max);
        pad(&mut y_min, &mut y_max);
        (x_min, x_max, y_min, y_max)
    }

    pub fn render(&self) -> String {
        let (x_min, x_max, y_min, y_max) = self.ranges();
        let plot = SIZE - 2.0 * MARGIN;
        let to_px = |x: f64, y: f64| -> (f64, f64) {
            (
                MARGIN + (x - x_min) / (x_max - x_min) * plot,
                SIZE - MARGIN - (y - y_min) / (y_max - y_min) * plot,
            )
        };
        let mut svg = String::new();
        svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
        ));
        svg.push_str("<rect width=\"600\" height=\"600\" fill=\"white\"/>\n");
        svg.push_str(&format!(
            "<text x=\"300\" y=\"34\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
            escape(&self.title)
        ));

        // frame
        svg.push_str(&format!(
            "<rect x=\"{m}\" y=\"{m}\" width=\"{plot}\" height=\"{plot}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n",
            m = MARGIN
        ));

        // ticks and labels
        for t in 0..5 {
            let frac = t as f64 / 4.0;
            let xv = x_min + frac * (x_max - x_min);
            let yv = y_min + frac * (y_max - y_min);
            let xp = MARGIN + frac * plot;
            let yp = SIZE - MARGIN - frac * plot;
            svg.push_str(&format!(
                "<line x1=\"{xp:.2}\" y1=\"{}\" x2=\"{xp:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
                SIZE - MARGIN,
                SIZE - MARGIN + 6.0
            ));
            svg.push_str(&format!(
                "<text x=\"{xp:.2}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                SIZE - MARGIN + 20.0,
                tick_label(xv)
            ));
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{yp:.2}\" x2=\"{}\" y2=\"{yp:.2}\" stroke=\"black\"/>\n",
                MARGIN - 6.0,
                MARGIN
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
                MARGIN - 10.0,
                yp + 4.0,
                tick_label(yv)
            ));
        }
        svg.push_str(&format!(
            "<text x=\"300\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
            SIZE - 18.0,
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"20\" y=\"300\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 300)\">{}</text>\n",
            escape(&self.y_label)
        ));

        if self.dashed_unit_circle {
            let (cx, cy) = to_px(0.0, 0.0);
            let (rx, _) = to_px(1.0, 0.0);
            let radius = rx - cx;
            svg.push_str(&format!(
                "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{radius:.2}\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n"
            ));
        }
        for &(x1, y1, x2, y2) in &self.dashed_segments {
            let (px1, py1) = to_px(x1, y1);
            let (px2, py2) = to_px(x2, y2);
            svg.push_str(&format!(
                "<line x1=\"{px1:.2}\" y1=\"{py1:.2}\" x2=\"{px2:.2}\" y2=\"{py2:.2}\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n"
            ));
        }
        for &(x1, y1, x2, y2) in &self.solid_segments {
            let (px1, py1) = to_px(x1, y1);
            let (px2, py2) = to_px(x2, y2);
            svg.push_str(&format!(
                "<line x1=\"{px1:.2}\" y1=\"{py1:.2}\" x2=\"{px2:.2}\" y2=\"{py2:.2}\" stroke=\"black\"/>\n"
            ));
        }
        for &(x, y, class) in &self.points {
            let (px, py) = to_px(x, y);
            svg.push_str(&glyph(px, py, class));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Circle, triangle, square, diamond, cross — cycling for higher classes.
fn glyph(px: f64, py: f64, class: usize) -> String {
    let color = PALETTE[(class.max(1) - 1) % PALETTE.len()];
    let r = 4.5;
    match (class.max(1) - 1) % 5 {
        0 => format!(
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"{r}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ),
        1 => format!(
            "<polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            px, py - r, px - r, py + r, px + r, py + r
        ),
        2 => format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            px - r, py - r, 2.0 * r, 2.0 * r
        ),
        3 => format!(
            "<polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            px, py - r, px + r, py, px, py + r, px - r, py
        ),
        _ => format!(
            "<path d=\"M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            px - r, py - r, px + r, py + r, px - r, py + r, px + r, py - r
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal well-formedness scan: every opened tag closes in order.
    pub(crate) fn assert_well_formed(svg: &str) {
        let mut stack: Vec<String> = Vec::new();
        let mut rest = svg;
        while let Some(start) = rest.find('<') {
            let end = rest[start..].find('>').expect("unclosed tag bracket") + start;
            let tag = &rest[start + 1..end];
            rest = &rest[end + 1..];
            if tag.starts_with('?') || tag.starts_with('!') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                let open = stack.pop().expect("closing tag without opener");
                assert_eq!(open, name, "mismatched tag");
            } else if !tag.ends_with('/') {
                let name: String = tag.split_whitespace().next().unwrap().to_string();
                stack.push(name);
            }
        }
        assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    }

    #[test]
    fn renders_well_formed_svg() {
        let mut s = Scatter::new("demo", "x", "y");
        s.point(0.0, 0.0, 1);
        s.point(1.0, 2.0, 2);
        s.point(-1.0, 0.5, 3);
        s.dashed_polygon(&[(1.0, 0.0), (-1.0, 1.4), (-1.0, -1.4)]);
        s.solid_segment(0.0, 0.0, 1.0, 0.0);
        s.with_unit_circle();
        let svg = s.render();
        assert_well_formed(&svg);
        assert!(svg.contains("viewBox=\"0 0 600 600\""));
        // no external assets beyond the namespace declaration
        assert!(!svg.contains("href"));
        assert!(!svg.contains("<image"));
    }

    #[test]
    fn degenerate_ranges_still_render() {
        let mut s = Scatter::new("flat", "x", "y");
        s.point(2.0, 2.0, 1);
        s.point(2.0, 2.0, 2);
        let svg = s.render();
        assert_well_formed(&svg);
    }
}
