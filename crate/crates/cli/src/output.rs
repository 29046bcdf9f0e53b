//! Deterministic artifact emission: JSON with exact "p/q" strings and
//! lexicographically sorted vertex lists, CSV for family scans, and
//! presentation-only SVG (excluded from golden comparisons).

use okounkov::exact::rat_str;
use okounkov::geometry::{Body, Value};
use okounkov::{ConcavePL, Polytope, Rat};
use serde_json::{json, Value as Json};

pub fn rat_json(r: &Rat) -> Json {
    Json::String(rat_str(r))
}

fn point_json(p: &[Rat]) -> Json {
    Json::Array(p.iter().map(rat_json).collect())
}

pub fn polytope_json(p: &Polytope) -> Json {
    let mut verts: Vec<Vec<Rat>> = p.vertices.clone();
    verts.sort();
    json!({
        "dim": p.ambient,
        "affine_dim": p.affine_dim,
        "vertices": verts.iter().map(|v| point_json(v)).collect::<Vec<_>>(),
    })
}

pub fn function_json(f: &ConcavePL) -> Json {
    let mut facets: Vec<(&Vec<Rat>, &Rat, Json)> = f
        .pieces
        .iter()
        .map(|p| (&p.gradient, &p.constant, polytope_json(&p.cell)))
        .collect();
    facets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    json!({
        "domain": polytope_json(&f.domain),
        "facets": facets
            .into_iter()
            .map(|(g, c, cell)| json!({
                "gradient": g.iter().map(rat_json).collect::<Vec<_>>(),
                "constant": rat_json(c),
                "cell": cell,
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(r) => rat_json(r),
        Value::Bracket { lo, hi } => json!({ "lo": rat_str(lo), "hi": rat_str(hi) }),
    }
}

pub fn write_json(path: &std::path::Path, value: &Json) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn f64_of(r: &Rat) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(0.0);
    let d: f64 = r.denom().to_string().parse().unwrap_or(1.0);
    n / d
}

struct SvgCanvas {
    lines: Vec<String>,
    min: (f64, f64),
    max: (f64, f64),
}

impl SvgCanvas {
    fn new() -> Self {
        SvgCanvas { lines: Vec::new(), min: (0.0, 0.0), max: (1.0, 1.0) }
    }

    fn grow(&mut self, x: f64, y: f64) {
        self.min.0 = self.min.0.min(x - 0.2);
        self.min.1 = self.min.1.min(y - 0.2);
        self.max.0 = self.max.0.max(x + 0.2);
        self.max.1 = self.max.1.max(y + 0.2);
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: &str) {
        for &(x, y) in pts {
            self.grow(x, y);
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.4},{:.4}", -y)).collect();
        self.lines.push(format!(
            "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"0.01\"/>",
            path.join(" ")
        ));
    }

    fn circle(&mut self, x: f64, y: f64, r: f64, fill: &str) {
        self.grow(x, y);
        self.lines.push(format!(
            "<circle cx=\"{x:.4}\" cy=\"{:.4}\" r=\"{r}\" fill=\"{fill}\"/>",
            -y
        ));
    }

    fn finish(self) -> String {
        let w = self.max.0 - self.min.0;
        let h = self.max.1 - self.min.1;
        let mut out = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">\n",
            self.min.0, -self.max.1, w, h
        );
        for l in self.lines {
            out.push_str(&l);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}

fn poly_points(p: &Polytope) -> Vec<(f64, f64)> {
    p.vertices
        .iter()
        .map(|v| {
            let x = f64_of(&v[0]);
            let y = if v.len() > 1 { f64_of(&v[1]) } else { 0.0 };
            (x, y)
        })
        .collect()
}

pub fn svg_polytope(p: &Polytope) -> String {
    let mut c = SvgCanvas::new();
    c.polygon(&poly_points(p), "#cfe3ff", "#1a3d7a");
    c.finish()
}

pub fn svg_function(f: &ConcavePL) -> String {
    let mut c = SvgCanvas::new();
    if f.domain.ambient == 1 {
        // graph of the function over the interval
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for piece in &f.pieces {
            for v in &piece.cell.vertices {
                pts.push((f64_of(&v[0]), f64_of(&piece.value(v))));
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut base = vec![(pts.first().map(|p| p.0).unwrap_or(0.0), 0.0)];
        base.extend(pts.iter().copied());
        base.push((pts.last().map(|p| p.0).unwrap_or(1.0), 0.0));
        c.polygon(&base, "#d9f2d9", "#1a6b1a");
    } else {
        let max_val = f
            .pieces
            .iter()
            .flat_map(|p| p.cell.vertices.iter().map(|v| f64_of(&p.value(v))))
            .fold(0.0f64, f64::max)
            .max(1e-9);
        for piece in &f.pieces {
            if piece.cell.affine_dim < 2 {
                continue;
            }
            let centroid = piece.cell.centroid();
            let shade = (240.0 - 160.0 * f64_of(&piece.value(&centroid)) / max_val) as u32;
            let fill = format!("rgb({shade},{shade},255)");
            c.polygon(&poly_points(&piece.cell), &fill, "#1a3d7a");
        }
    }
    c.finish()
}

pub fn svg_boundary(body: &Body, probes: &[(Vec<Rat>, Value)], center: &[Rat]) -> String {
    let mut c = SvgCanvas::new();
    match body {
        Body::Poly(p) => c.polygon(&poly_points(p), "#fde6cf", "#7a3d1a"),
        Body::Cap(cap) => {
            // membership raster; presentation only
            let mut pts: Vec<(f64, f64)> = Vec::new();
            let n = 48;
            for i in 0..=n {
                for j in 0..=n {
                    let x = okounkov::exact::ratq(i, n);
                    let y = okounkov::exact::ratq(2 * j, n);
                    if cap.contains(&[x.clone(), y.clone()]) {
                        pts.push((f64_of(&x), f64_of(&y)));
                    }
                }
            }
            for (x, y) in pts {
                c.circle(x, y, 0.012, "#fdd0a0");
            }
        }
    }
    for (p, v) in probes {
        let color = match v {
            Value::Exact(r) if r == &okounkov::rat(0) => "#c01010",
            _ => "#106010",
        };
        c.circle(f64_of(&p[0]), f64_of(&p[1]), 0.02, color);
    }
    c.circle(f64_of(&center[0]), f64_of(&center[1]), 0.03, "#000000");
    c.finish()
}

pub fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
