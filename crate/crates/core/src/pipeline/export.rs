//! Circle export as JSON or as an SVG overlay of the stereographic images.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CircleRow, CounterexampleReport};
use crate::circles::{CircleConfiguration, SphericalCircle};
use crate::error::{GeomError, Result};

/// Circles whose plane passes this close to the projection pole are drawn
/// as lines.
const POLE_EPS: f64 = 1e-6;
/// Half-width cap of the drawing window, in plane units.
const VIEW_LIMIT: f64 = 10.0;
const PX_PER_UNIT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Json,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "svg" => Ok(ExportFormat::Svg),
            _ => Err(GeomError::UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCircle {
    pub label: String,
    pub center: [f64; 3],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSet {
    pub name: String,
    pub circles: Vec<LabeledCircle>,
}

impl CircleSet {
    pub fn from_configuration(name: &str, cfg: &CircleConfiguration, labels: &[&str]) -> Self {
        let circles = cfg
            .circles()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let v = c.center();
                LabeledCircle {
                    label: labels.get(k).map_or_else(|| k.to_string(), |s| s.to_string()),
                    center: [v.x, v.y, v.z],
                    radius: c.radius(),
                }
            })
            .collect();
        Self { name: name.to_string(), circles }
    }

    fn from_rows(name: &str, rows: &[CircleRow]) -> Self {
        let circles = rows
            .iter()
            .map(|r| LabeledCircle { label: r.label.clone(), center: r.center, radius: r.radius })
            .collect();
        Self { name: name.to_string(), circles }
    }

    /// The two packings of a report, named `plus` and `minus`.
    pub fn from_report(report: &CounterexampleReport) -> Result<Vec<CircleSet>> {
        let section = report.circles.value().ok_or_else(|| {
            GeomError::InvalidParams("report has no circle section; an earlier stage failed".into())
        })?;
        Ok(vec![Self::from_rows("plus", &section.plus), Self::from_rows("minus", &section.minus)])
    }
}

/// Stereographic image of a circle, projecting from `(0, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlaneImage {
    Circle { center: [f64; 2], radius: f64 },
    /// `normal · X = offset`
    Line { normal: [f64; 2], offset: f64 },
}

pub fn stereographic_circle(center: [f64; 3], radius: f64) -> PlaneImage {
    let [nx, ny, nz] = center;
    let d = radius.cos();
    let denom = nz - d;
    if denom.abs() <= POLE_EPS {
        return PlaneImage::Line { normal: [nx, ny], offset: d };
    }
    let c = [-nx / denom, -ny / denom];
    let r2 = c[0] * c[0] + c[1] * c[1] + (nz + d) / denom;
    PlaneImage::Circle { center: c, radius: r2.max(0.0).sqrt() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExportDocument {
    pub content: String,
    pub warnings: Vec<String>,
}

pub fn export_circles(sets: &[CircleSet], format: ExportFormat) -> Result<ExportDocument> {
    for set in sets {
        for c in &set.circles {
            let v = nalgebra::Vector3::from(c.center);
            SphericalCircle::new(v, c.radius)
                .map_err(|e| GeomError::InvalidCircle(format!("{}/{}: {e}", set.name, c.label)))?;
        }
    }
    match format {
        ExportFormat::Json => Ok(ExportDocument { content: to_json(sets), warnings: Vec::new() }),
        ExportFormat::Svg => Ok(to_svg(sets)),
    }
}

fn round10(x: f64) -> f64 {
    format!("{x:.9e}").parse().expect("formatted float parses")
}

fn to_json(sets: &[CircleSet]) -> String {
    let rounded: Vec<CircleSet> = sets
        .iter()
        .map(|s| CircleSet {
            name: s.name.clone(),
            circles: s
                .circles
                .iter()
                .map(|c| LabeledCircle {
                    label: c.label.clone(),
                    center: c.center.map(round10),
                    radius: round10(c.radius),
                })
                .collect(),
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&serde_json::json!({ "sets": rounded })).expect("serializable");
    out.push('\n');
    out
}

struct Bounds {
    min: [f64; 2],
    max: [f64; 2],
}

impl Bounds {
    fn of(images: &[PlaneImage]) -> Self {
        let mut b = Bounds { min: [f64::INFINITY; 2], max: [f64::NEG_INFINITY; 2] };
        for img in images {
            if let PlaneImage::Circle { center, radius } = img {
                for (k, c) in center.iter().enumerate() {
                    b.min[k] = b.min[k].min(c - radius);
                    b.max[k] = b.max[k].max(c + radius);
                }
            }
        }
        for k in 0..2 {
            if !b.min[k].is_finite() || !b.max[k].is_finite() {
                b.min[k] = -1.0;
                b.max[k] = 1.0;
            }
            b.min[k] = b.min[k].max(-VIEW_LIMIT);
            b.max[k] = b.max[k].min(VIEW_LIMIT);
            let pad = 0.05 * (b.max[k] - b.min[k]).max(0.2);
            b.min[k] -= pad;
            b.max[k] += pad;
        }
        b
    }

    /// Part of the line `n·X = d` inside the box.
    fn clip_line(&self, n: [f64; 2], d: f64) -> Option<([f64; 2], [f64; 2])> {
        let nn = n[0] * n[0] + n[1] * n[1];
        if nn == 0.0 {
            return None;
        }
        let p0 = [n[0] * d / nn, n[1] * d / nn];
        let dir = [-n[1], n[0]];
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for k in 0..2 {
            if dir[k].abs() < 1e-15 {
                if p0[k] < self.min[k] || p0[k] > self.max[k] {
                    return None;
                }
                continue;
            }
            let s1 = (self.min[k] - p0[k]) / dir[k];
            let s2 = (self.max[k] - p0[k]) / dir[k];
            lo = lo.max(s1.min(s2));
            hi = hi.min(s1.max(s2));
        }
        (lo < hi).then(|| {
            ([p0[0] + lo * dir[0], p0[1] + lo * dir[1]], [p0[0] + hi * dir[0], p0[1] + hi * dir[1]])
        })
    }
}

fn class_name(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '-' }).collect()
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn to_svg(sets: &[CircleSet]) -> ExportDocument {
    let images: Vec<Vec<PlaneImage>> = sets
        .iter()
        .map(|s| s.circles.iter().map(|c| stereographic_circle(c.center, c.radius)).collect())
        .collect();
    let all: Vec<PlaneImage> = images.iter().flatten().copied().collect();
    let b = Bounds::of(&all);
    let px = |x: f64| x * PX_PER_UNIT;
    let (w, h) = (px(b.max[0] - b.min[0]), px(b.max[1] - b.min[1]));
    let mut warnings = Vec::new();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}" width="{:.0}" height="{:.0}">"#,
        px(b.min[0]),
        px(-b.max[1]),
        w,
        h,
        w,
        h
    );
    out.push_str("<style>\n");
    for (k, set) in sets.iter().enumerate() {
        let _ = writeln!(
            out,
            "  .set-{} {{ fill: none; stroke: {}; stroke-width: 1.5; }}",
            class_name(&set.name),
            PALETTE[k % PALETTE.len()]
        );
    }
    out.push_str("  .clipped { stroke-dasharray: 6 3; }\n</style>\n");
    for (set, imgs) in sets.iter().zip(&images) {
        let class = format!("set-{}", class_name(&set.name));
        let _ = writeln!(out, r#"<g class="{class}" id="{}">"#, class_name(&set.name));
        for (c, img) in set.circles.iter().zip(imgs) {
            match *img {
                PlaneImage::Circle { center, radius } => {
                    let _ = writeln!(
                        out,
                        r#"  <circle cx="{:.6}" cy="{:.6}" r="{:.6}"><title>{}</title></circle>"#,
                        px(center[0]),
                        px(-center[1]),
                        px(radius),
                        c.label
                    );
                }
                PlaneImage::Line { normal, offset } => {
                    warnings.push(format!(
                        "{}/{}: circle passes through the projection pole; drawn as a clipped line",
                        set.name, c.label
                    ));
                    if let Some((p, q)) = b.clip_line(normal, offset) {
                        let _ = writeln!(
                            out,
                            r#"  <line class="clipped" x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"><title>{}</title></line>"#,
                            px(p[0]),
                            px(-p[1]),
                            px(q[0]),
                            px(-q[1]),
                            c.label
                        );
                    }
                }
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    ExportDocument { content: out, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn south_polar_circle_projects_to_centered_circle() {
        match stereographic_circle([0.0, 0.0, -1.0], FRAC_PI_4) {
            PlaneImage::Circle { center, radius } => {
                assert!(center[0].abs() < 1e-15 && center[1].abs() < 1e-15);
                assert!((radius - FRAC_PI_8.tan()).abs() < 1e-12);
            }
            other => panic!("expected a circle, got {other:?}"),
        }
    }

    #[test]
    fn projected_points_lie_on_the_image_circle() {
        let c = SphericalCircle::new(nalgebra::Vector3::new(0.3, -0.5, 0.4).normalize(), 0.7).unwrap();
        let v = c.center();
        let PlaneImage::Circle { center, radius } = stereographic_circle([v.x, v.y, v.z], c.radius()) else {
            panic!("expected a circle");
        };
        for k in 0..12 {
            let u = c.point_at(k as f64 * 0.5);
            let p = [u.x / (1.0 - u.z), u.y / (1.0 - u.z)];
            let dist = ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt();
            assert!((dist - radius).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_through_pole_is_a_line_with_warning() {
        // center on the equator, radius π/2: the great circle through (0,0,1)
        let set = CircleSet {
            name: "g".into(),
            circles: vec![LabeledCircle { label: "x".into(), center: [1.0, 0.0, 0.0], radius: std::f64::consts::FRAC_PI_2 }],
        };
        let doc = export_circles(&[set], ExportFormat::Svg).unwrap();
        assert_eq!(doc.warnings.len(), 1);
        assert!(doc.content.contains("<line class=\"clipped\""));
    }

    #[test]
    fn empty_configuration_gives_valid_documents() {
        let svg = export_circles(&[], ExportFormat::Svg).unwrap();
        assert!(svg.content.starts_with("<svg") && svg.content.trim_end().ends_with("</svg>"));
        let json = export_circles(&[], ExportFormat::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json.content).unwrap();
        assert_eq!(v["sets"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn unknown_format_is_rejected() {
        assert!(matches!("png".parse::<ExportFormat>(), Err(GeomError::UnsupportedFormat(_))));
    }

    #[test]
    fn json_keeps_ten_significant_digits() {
        assert_eq!(round10(0.123456789012345), 0.1234567890);
        assert_eq!(round10(1234.56789012345), 1234.567890);
    }
}
