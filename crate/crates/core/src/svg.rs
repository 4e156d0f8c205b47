//! SVG rendering of a result file: obstacles with their inflated outlines,
//! the optional search tree, and raw / reduced / smoothed paths.

use std::fmt::Write;

use crate::environment::Obstacle;
use crate::geometry::Point2;
use crate::pipeline::{GoalStatus, ResultFile};

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn points_attr(points: &[Point2]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", num(p.x), num(p.y)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders the result in scenario coordinates (y axis pointing up).
pub fn render(result: &ResultFile) -> String {
    let sc = &result.scenario;
    let b = sc.bounds;
    let (w, h) = (b.max.x - b.min.x, b.max.y - b.min.y);
    let stroke = w.max(h) / 500.0;
    let inflation = sc.uav.uav_radius;
    let mut out = String::new();

    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="{}">"#,
        num(b.min.x),
        num(-b.max.y),
        num(w),
        num(h),
        num(800.0 * h / w)
    );
    let _ = writeln!(
        out,
        r#"<g transform="scale(1,-1)" stroke-width="{}" fill="none">"#,
        num(stroke)
    );
    let _ = writeln!(
        out,
        r##"<rect class="bounds" x="{}" y="{}" width="{}" height="{}" fill="#ffffff" stroke="#000000"/>"##,
        num(b.min.x),
        num(b.min.y),
        num(w),
        num(h)
    );

    for o in &sc.obstacles {
        match *o {
            Obstacle::Circle { center, radius } => {
                let _ = writeln!(
                    out,
                    r##"<circle class="obstacle" cx="{}" cy="{}" r="{}" fill="#808080"/>"##,
                    num(center.x),
                    num(center.y),
                    num(radius)
                );
                let _ = writeln!(
                    out,
                    r##"<circle class="inflated" cx="{}" cy="{}" r="{}" stroke="#404040" stroke-dasharray="{} {}"/>"##,
                    num(center.x),
                    num(center.y),
                    num(radius + inflation),
                    num(3.0 * stroke),
                    num(2.0 * stroke)
                );
            }
            Obstacle::Rect { min, max } => {
                let _ = writeln!(
                    out,
                    r##"<rect class="obstacle" x="{}" y="{}" width="{}" height="{}" fill="#808080"/>"##,
                    num(min.x),
                    num(min.y),
                    num(max.x - min.x),
                    num(max.y - min.y)
                );
                let _ = writeln!(
                    out,
                    r##"<rect class="inflated" x="{}" y="{}" width="{}" height="{}" rx="{}" stroke="#404040" stroke-dasharray="{} {}"/>"##,
                    num(min.x - inflation),
                    num(min.y - inflation),
                    num(max.x - min.x + 2.0 * inflation),
                    num(max.y - min.y + 2.0 * inflation),
                    num(inflation),
                    num(3.0 * stroke),
                    num(2.0 * stroke)
                );
            }
        }
    }

    if let Some(tree) = &result.tree {
        let mut d = String::new();
        for n in tree {
            if let Some(parent) = n.parent {
                let p = tree[parent].position;
                let _ = write!(
                    d,
                    "M{},{}L{},{}",
                    num(p.x),
                    num(p.y),
                    num(n.position.x),
                    num(n.position.y)
                );
            }
        }
        let _ = writeln!(
            out,
            r##"<path class="tree" d="{d}" stroke="#c8c8c8" stroke-width="{}"/>"##,
            num(0.5 * stroke)
        );
    }

    for g in result.goals.iter().filter(|g| g.status == GoalStatus::Reached) {
        let color = PALETTE[g.index % PALETTE.len()];
        let _ = writeln!(
            out,
            r##"<polyline class="raw" points="{}" stroke="#a0a0a0"/>"##,
            points_attr(&g.raw_path)
        );
        let _ = writeln!(
            out,
            r#"<polyline class="reduced" points="{}" stroke="{color}" stroke-dasharray="{} {}" stroke-opacity="0.6"/>"#,
            points_attr(&g.reduced_path),
            num(4.0 * stroke),
            num(3.0 * stroke)
        );
        let _ = writeln!(
            out,
            r#"<polyline class="smoothed" points="{}" stroke="{color}" stroke-width="{}"/>"#,
            points_attr(&g.smoothed_path),
            num(2.0 * stroke)
        );
    }

    let marker = 4.0 * stroke;
    let _ = writeln!(
        out,
        r##"<circle class="start" cx="{}" cy="{}" r="{}" fill="#000000"/>"##,
        num(sc.start.x),
        num(sc.start.y),
        num(1.5 * marker)
    );
    for g in &result.goals {
        let color = PALETTE[g.index % PALETTE.len()];
        let fill = match g.status {
            GoalStatus::Reached => color,
            GoalStatus::Unreached => "none",
        };
        let _ = writeln!(
            out,
            r#"<rect class="goal" x="{}" y="{}" width="{}" height="{}" fill="{fill}" stroke="{color}"/>"#,
            num(g.goal.x - marker),
            num(g.goal.y - marker),
            num(2.0 * marker),
            num(2.0 * marker)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
