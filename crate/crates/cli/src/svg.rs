//! Plain SVG drawing of a two-dimensional fiber complex.

use std::fmt::Write as _;

use tropconf::expansions::StratumReport;
use tropconf::linalg::Rat;

const SIZE: f64 = 480.0;

fn to_f64(x: &Rat) -> f64 {
    x.to_f64().value()
}

/// Cells clipped to a box around the vertices; vertices labelled by their markings.
pub fn render(r: &StratumReport) -> Option<String> {
    let fc = &r.fiber;
    if fc.d != 2 {
        return None;
    }
    let verts = fc.vertices();
    let pts: Vec<&[Rat]> = verts.iter().map(|&v| fc.vertex_position(v)).collect();
    let mut lo = [Rat::ZERO, Rat::ZERO];
    let mut hi = [Rat::ZERO, Rat::ZERO];
    for (k, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
        *l = pts.iter().map(|p| p[k].clone()).min().unwrap_or(Rat::ZERO);
        *h = pts.iter().map(|p| p[k].clone()).max().unwrap_or(Rat::ZERO);
    }
    let two = Rat::from(2);
    let center: Vec<Rat> = (0..2).map(|k| (&lo[k] + &hi[k]) / &two).collect();
    let spread = (0..2).map(|k| &hi[k] - &lo[k]).max().unwrap_or(Rat::ZERO);
    let radius = &spread / &two + Rat::from(2);
    let (cx, cy, rad) = (to_f64(&center[0]), to_f64(&center[1]), to_f64(&radius));
    let map = |p: &[f64]| -> (f64, f64) {
        (
            (p[0] - cx + rad) / (2.0 * rad) * SIZE,
            SIZE - (p[1] - cy + rad) / (2.0 * rad) * SIZE,
        )
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for cell in fc.cells.iter().filter(|c| c.dim == 2) {
        let corners: Vec<Vec<f64>> = cell
            .polyhedron
            .clipped(&center, &radius)
            .iter()
            .map(|p| p.iter().map(to_f64).collect())
            .collect();
        if corners.len() < 3 {
            continue;
        }
        let mx = corners.iter().map(|p| p[0]).sum::<f64>() / corners.len() as f64;
        let my = corners.iter().map(|p| p[1]).sum::<f64>() / corners.len() as f64;
        let mut sorted = corners.clone();
        sorted.sort_by(|a, b| {
            let ta = (a[1] - my).atan2(a[0] - mx);
            let tb = (b[1] - my).atan2(b[0] - mx);
            ta.total_cmp(&tb)
        });
        let path: Vec<String> = sorted
            .iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let fill = if cell.polyhedron.is_bounded() {
            "#dde8f4"
        } else {
            "#f4f4f4"
        };
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#,
            path.join(" ")
        );
    }
    for &v in &verts {
        let p: Vec<f64> = fc.vertex_position(v).iter().map(to_f64).collect();
        let (x, y) = map(&p);
        let marks: Vec<String> = (0..r.rubber.markings.len())
            .filter(|&i| r.rubber.markings[i] == v)
            .map(|i| i.to_string())
            .collect();
        let fill = if marks.is_empty() { "white" } else { "black" };
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}" stroke="black"/>"#
        );
        if !marks.is_empty() {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
                x + 6.0,
                y - 6.0,
                marks.join(",")
            );
        }
    }
    s.push_str("</svg>\n");
    Some(s)
}
