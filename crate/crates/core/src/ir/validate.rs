//! Structural invariants of a [`DrawingIr`].

use std::fmt;

use super::{normalize_section_type, DrawingIr, Payload, Point2, RcDrawing, Segment, Sides};

const EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            path: path.into(),
            message: message.into(),
        });
    }

    fn finite(&mut self, path: &str, p: Point2) {
        if !p.is_finite() {
            self.push(path, "non-finite coordinate");
        }
    }

    fn segment(&mut self, path: &str, s: Segment) {
        self.finite(&format!("{path}/end1"), s.end1);
        self.finite(&format!("{path}/end2"), s.end2);
        if s.length() <= EPS {
            self.push(path, "degenerate segment");
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

fn same(a: Point2, b: Point2) -> bool {
    (a.x - b.x).abs() <= EPS && (a.y - b.y).abs() <= EPS
}

fn same_seg(a: Segment, b: Segment) -> bool {
    same(a.end1, b.end1) && same(a.end2, b.end2)
}

pub fn validate(ir: &DrawingIr) -> ValidationReport {
    use super::keys::*;
    let mut r = ValidationReport::default();
    match &ir.payload {
        Payload::Rc(rc) => validate_rc(rc, &mut r),
        Payload::Steel(s) => {
            if s.section_type.trim().is_empty() {
                r.push(format!("/{SECTION_TYPE}"), "empty section type");
            }
            r.finite(&format!("/{BOTTOM_LEFT}"), s.bottom_left);
        }
        Payload::Precast(p) => {
            if normalize_section_type(&p.section_type).is_empty() {
                r.push(format!("/{SECTION_TYPE}"), "empty section type");
            }
            r.finite(&format!("/{BOTTOM_LEFT}"), p.bottom_left);
            for (i, c) in p.strand_centers.iter().enumerate() {
                r.finite(&format!("/{STRANDS}/{i}"), *c);
            }
        }
    }
    r
}

fn validate_rc(rc: &RcDrawing, r: &mut ValidationReport) {
    use super::keys::*;
    let v = &rc.vertices;
    for (name, p) in VERTEX_NAMES
        .iter()
        .zip([v.bottom_left, v.top_left, v.top_right, v.bottom_right])
    {
        r.finite(&format!("/{VERTICES}/{name}"), p);
    }
    if v.top_right.x - v.bottom_left.x <= EPS || v.top_right.y - v.bottom_left.y <= EPS {
        r.push(format!("/{VERTICES}"), "section has no area");
    }
    let expected = Sides::from_vertices(v);
    let s = &rc.sides;
    for (name, (got, want)) in SIDE_NAMES.iter().zip([
        (s.left, expected.left),
        (s.top, expected.top),
        (s.right, expected.right),
        (s.bottom, expected.bottom),
    ]) {
        if !same_seg(got, want) {
            r.push(format!("/{SIDES}/{name}"), "side does not join the vertices");
        }
    }

    if rc.rebar_centers.len() != rc.rebar_radii.len() {
        r.push(
            format!("/{REBAR_RADII}"),
            format!(
                "{} radii for {} rebar centers",
                rc.rebar_radii.len(),
                rc.rebar_centers.len()
            ),
        );
    }
    if rc.rebar_centers.is_empty() {
        r.push(format!("/{REBAR_CENTERS}"), "no rebars");
    }
    for (i, c) in rc.rebar_centers.iter().enumerate() {
        r.finite(&format!("/{REBAR_CENTERS}/{i}"), *c);
    }
    for (i, rad) in rc.rebar_radii.iter().enumerate() {
        if !(rad.is_finite() && *rad > 0.0) {
            r.push(format!("/{REBAR_RADII}/{i}"), "radius must be positive");
        }
    }

    let st = rc.stirrup;
    if !(st.radius.is_finite() && st.radius > 0.0) {
        r.push(format!("/{STIRRUP}/0"), "stirrup radius must be positive");
    }
    if (st.diameter - 2.0 * st.radius).abs() > 1e-4 {
        r.push(format!("/{STIRRUP}/1"), "diameter is not twice the radius");
    }

    for (name, seg) in LINE_NAMES.iter().zip(rc.stirrup_lines) {
        r.segment(&format!("/{STIRRUP_LINES}/{name}"), seg);
    }
    for (name, a) in ARC_NAMES.iter().zip(rc.stirrup_arcs) {
        let path = format!("/{STIRRUP_ARCS}/{name}");
        r.finite(&path, a.center);
        if !(a.radius.is_finite() && a.radius > 0.0) {
            r.push(&path, "arc radius must be positive");
        }
        for ang in [a.start_angle, a.end_angle] {
            if !(ang.is_finite() && (0.0..360.0).contains(&ang)) {
                r.push(&path, "arc angle outside [0, 360)");
            }
        }
    }
    for (name, seg) in HOOK_NAMES.iter().zip(rc.hook_lines) {
        r.segment(&format!("/{HOOK_LINES}/{name}"), seg);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{ArcSpec, DrawingIr, SaveTarget, StirrupPair, SteelDrawing, Unit, Vertices};

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(Point2::new(a.0, a.1), Point2::new(b.0, b.1))
    }

    fn sample_rc() -> RcDrawing {
        let vertices = Vertices {
            bottom_left: Point2::new(0.0, 0.0),
            top_left: Point2::new(0.0, 24.0),
            top_right: Point2::new(16.0, 24.0),
            bottom_right: Point2::new(16.0, 0.0),
        };
        let line = seg((1.0, 1.0), (2.0, 2.0));
        let arc = ArcSpec {
            center: Point2::new(3.0, 3.0),
            radius: 1.0,
            start_angle: 45.0,
            end_angle: 180.0,
        };
        RcDrawing {
            vertices,
            sides: Sides::from_vertices(&vertices),
            rebar_centers: vec![Point2::new(3.0, 3.0)],
            rebar_radii: vec![0.5],
            stirrup: StirrupPair {
                radius: 0.25,
                diameter: 0.5,
            },
            stirrup_lines: [line; 8],
            stirrup_arcs: [arc; 4],
            hook_lines: [line; 6],
        }
    }

    fn wrap(rc: RcDrawing) -> DrawingIr {
        DrawingIr {
            save: SaveTarget::NoSave,
            unit: Unit::Inch,
            payload: Payload::Rc(rc),
        }
    }

    #[test]
    fn consistent_record_passes() {
        assert!(validate(&wrap(sample_rc())).is_empty());
    }

    #[test]
    fn detects_each_violation() {
        let mut rc = sample_rc();
        rc.rebar_radii.push(0.5);
        rc.stirrup.diameter = 0.6;
        rc.stirrup_arcs[2].end_angle = 360.0;
        rc.hook_lines[0] = seg((1.0, 1.0), (1.0, 1.0));
        rc.sides.top = seg((0.0, 24.0), (15.0, 24.0));
        let report = validate(&wrap(rc));
        let paths: Vec<_> = report.violations.iter().map(|v| v.path.as_str()).collect();
        assert!(paths.contains(&"/Radius of Rebars"));
        assert!(paths.contains(&"/Radius and Diameter of Stirrup/1"));
        assert!(paths.contains(&"/Arc Lines of Stirrup/A3"));
        assert!(paths.contains(&"/Hook lines of Stirrup/Lh1"));
        assert!(paths.contains(&"/End Point of Four Sides/top"));
        assert_eq!(report.violations.len(), 5);
    }

    #[test]
    fn empty_section_type_rejected() {
        let ir = DrawingIr {
            save: SaveTarget::NoSave,
            unit: Unit::Millimeter,
            payload: Payload::Steel(SteelDrawing {
                section_type: "  ".into(),
                bottom_left: Point2::ORIGIN,
            }),
        };
        assert_eq!(validate(&ir).violations.len(), 1);
    }
}
