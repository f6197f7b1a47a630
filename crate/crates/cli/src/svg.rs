//! Minimal SVG 1.1 rendering of decompositions and refutation witnesses.
//! Presentation artifact only; nothing parses these files back.

use gabortile::{BoxSet, ConvexPolygon, GaborSpec, OctagonReport, Rat, Verdict};

const PALETTE: [&str; 8] = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b", "#b279a2", "#9d755d",
];

struct Canvas {
    shapes: String,
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Canvas {
    fn new() -> Self {
        Canvas {
            shapes: String::new(),
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn grow(&mut self, x: f64, y: f64) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, fill: &str, opacity: f64) {
        self.grow(x0, y0);
        self.grow(x1, y1);
        self.shapes.push_str(&format!(
            "<rect x=\"{x0:.4}\" y=\"{:.4}\" width=\"{:.4}\" height=\"{:.4}\" fill=\"{fill}\" fill-opacity=\"{opacity:.2}\" stroke=\"#333\" stroke-width=\"0.01\"/>\n",
            -y1,
            x1 - x0,
            y1 - y0,
        ));
    }

    fn polygon(&mut self, points: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| {
                self.grow(x, y);
                format!("{x:.4},{:.4}", -y)
            })
            .collect();
        self.shapes.push_str(&format!(
            "<polygon points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"0.03\"/>\n",
            coords.join(" ")
        ));
    }

    fn dot(&mut self, x: f64, y: f64, fill: &str, label: &str) {
        self.grow(x, y);
        self.shapes.push_str(&format!(
            "<circle cx=\"{x:.4}\" cy=\"{:.4}\" r=\"0.06\" fill=\"{fill}\"/>\n<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"0.2\" fill=\"#111\">{label}</text>\n",
            -y,
            x + 0.1,
            -y - 0.1,
        ));
    }

    fn finish(self) -> Option<String> {
        if !self.min_x.is_finite() {
            return None;
        }
        let pad = 0.5;
        let x = self.min_x - pad;
        let y = -self.max_y - pad;
        let w = self.max_x - self.min_x + 2.0 * pad;
        let h = self.max_y - self.min_y + 2.0 * pad;
        Some(format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{x:.4} {y:.4} {w:.4} {h:.4}\">\n{}</svg>\n",
            self.shapes
        ))
    }
}

fn f(r: &Rat) -> f64 {
    r.to_f64()
}

fn draw_boxset(canvas: &mut Canvas, set: &BoxSet, fill: &str) {
    for b in set.boxes() {
        match set.dim() {
            1 => canvas.rect(f(&b.lo()[0]), 0.0, f(&b.hi()[0]), 0.3, fill, 0.55),
            2 => canvas.rect(
                f(&b.lo()[0]),
                f(&b.lo()[1]),
                f(&b.hi()[0]),
                f(&b.hi()[1]),
                fill,
                0.55,
            ),
            _ => {}
        }
    }
}

/// Color the pieces of a list of box unions (1D or 2D); None in higher
/// dimensions or when there is nothing to draw.
pub fn render_boxsets(sets: &[BoxSet]) -> Option<String> {
    if sets.iter().any(|s| s.dim() > 2) {
        return None;
    }
    let mut canvas = Canvas::new();
    for (i, set) in sets.iter().enumerate() {
        draw_boxset(&mut canvas, set, PALETTE[i % PALETTE.len()]);
    }
    canvas.finish()
}

/// The window plus, when present, its time-side decomposition.
pub fn render_verdict(spec: &GaborSpec, verdict: &Verdict) -> Option<String> {
    match &verdict.structure {
        Some(report) => render_boxsets(&report.time_domains),
        None => render_boxsets(std::slice::from_ref(&spec.window)),
    }
}

/// Octagon outline, the overlap parallelogram, and the first refuted case's
/// witness points labelled with their multiplicities.
pub fn render_octagon(report: &OctagonReport) -> Option<String> {
    let mut canvas = Canvas::new();
    let outline = |canvas: &mut Canvas, poly: &ConvexPolygon, stroke: &str| {
        let pts: Vec<(f64, f64)> = poly
            .vertices()
            .iter()
            .map(|v| (f(&v[0]), f(&v[1])))
            .collect();
        canvas.polygon(&pts, stroke);
    };
    outline(&mut canvas, &ConvexPolygon::octagon(), "#4c78a8");
    outline(&mut canvas, &report.parallelogram, "#e45756");
    if let Some(case) = report.refuted.first() {
        for (w, color) in [(&case.witness_a, "#54a24b"), (&case.witness_b, "#f58518")] {
            canvas.dot(
                f(&w.sample[0]),
                f(&w.sample[1]),
                color,
                &w.multiplicity.to_string(),
            );
        }
    }
    canvas.finish()
}
