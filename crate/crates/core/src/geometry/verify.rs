use std::fmt;

use crate::ir::{fmt_num, keys, normalize_section_type, DrawingIr, Payload, Point2, Segment};

use super::{resolve, GeometryError, PrecastCatalog, SectionSpec};

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Mismatch {
    pub field: String,
    pub expected: String,
    pub actual: String,
    /// Absolute difference for numeric fields.
    pub delta: Option<f64>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected {}, got {}", self.field, self.expected, self.actual)?;
        if let Some(d) = self.delta {
            write!(f, " (delta {})", fmt_num(d))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mismatches.is_empty() {
            return writeln!(f, "ok: no mismatches at tolerance {}", self.tolerance);
        }
        writeln!(
            f,
            "{} mismatch(es) at tolerance {}:",
            self.mismatches.len(),
            self.tolerance
        )?;
        for m in &self.mismatches {
            writeln!(f, "  {m}")?;
        }
        Ok(())
    }
}

struct Cmp {
    tol: f64,
    out: Vec<Mismatch>,
}

// Negated comparisons so NaN counts as a mismatch.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
impl Cmp {
    fn num(&mut self, field: String, expected: f64, actual: f64) {
        let delta = (expected - actual).abs();
        if !(delta <= self.tol) {
            self.out.push(Mismatch {
                field,
                expected: fmt_num(expected),
                actual: fmt_num(actual),
                delta: Some(delta),
            });
        }
    }

    fn angle(&mut self, field: String, expected: f64, actual: f64) {
        let d = (expected - actual).rem_euclid(360.0);
        let delta = d.min(360.0 - d);
        if !(delta <= self.tol) {
            self.out.push(Mismatch {
                field,
                expected: fmt_num(expected),
                actual: fmt_num(actual),
                delta: Some(delta),
            });
        }
    }

    fn point(&mut self, field: &str, e: Point2, a: Point2) {
        self.num(format!("{field}.x"), e.x, a.x);
        self.num(format!("{field}.y"), e.y, a.y);
    }

    fn segment(&mut self, field: &str, e: Segment, a: Segment) {
        self.point(&format!("{field}.end1"), e.end1, a.end1);
        self.point(&format!("{field}.end2"), e.end2, a.end2);
    }

    fn text(&mut self, field: &str, expected: &str, actual: &str) {
        self.out.push(Mismatch {
            field: field.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            delta: None,
        });
    }

    fn points(&mut self, field: &str, e: &[Point2], a: &[Point2]) {
        if e.len() != a.len() {
            self.text(&format!("{field}.len"), &e.len().to_string(), &a.len().to_string());
        }
        for (i, (pe, pa)) in e.iter().zip(a).enumerate() {
            self.point(&format!("{field}[{i}]"), *pe, *pa);
        }
    }
}

/// Compare `ir` field by field against the deterministic resolution of `spec`.
pub fn verify_ir(
    ir: &DrawingIr,
    spec: &SectionSpec,
    catalog: &PrecastCatalog,
    tolerance: f64,
) -> Result<VerifyReport, GeometryError> {
    if ir.kind() != spec.kind() {
        return Err(GeometryError::KindMismatch {
            ir: ir.kind().to_string(),
            spec: spec.kind().to_string(),
        });
    }
    let expected = resolve(spec, catalog, ir.unit, ir.save.clone())?;
    let mut c = Cmp {
        tol: tolerance,
        out: Vec::new(),
    };
    if expected.unit != ir.unit {
        c.text(keys::UNIT, expected.unit.as_str(), ir.unit.as_str());
    }
    match (&expected.payload, &ir.payload) {
        (Payload::Rc(e), Payload::Rc(a)) => {
            let (ev, av) = (&e.vertices, &a.vertices);
            for (name, pe, pa) in [
                ("bottom left", ev.bottom_left, av.bottom_left),
                ("top left", ev.top_left, av.top_left),
                ("top right", ev.top_right, av.top_right),
                ("bottom right", ev.bottom_right, av.bottom_right),
            ] {
                c.point(&format!("{}.{name}", keys::VERTICES), pe, pa);
            }
            let (es, as_) = (&e.sides, &a.sides);
            for (name, se, sa) in [
                ("left", es.left, as_.left),
                ("top", es.top, as_.top),
                ("right", es.right, as_.right),
                ("bottom", es.bottom, as_.bottom),
            ] {
                c.segment(&format!("{}.{name}", keys::SIDES), se, sa);
            }
            c.points(keys::REBAR_CENTERS, &e.rebar_centers, &a.rebar_centers);
            if e.rebar_radii.len() != a.rebar_radii.len() {
                c.text(
                    &format!("{}.len", keys::REBAR_RADII),
                    &e.rebar_radii.len().to_string(),
                    &a.rebar_radii.len().to_string(),
                );
            }
            for (i, (re, ra)) in e.rebar_radii.iter().zip(&a.rebar_radii).enumerate() {
                c.num(format!("{}[{i}]", keys::REBAR_RADII), *re, *ra);
            }
            c.num(format!("{}[0]", keys::STIRRUP), e.stirrup.radius, a.stirrup.radius);
            c.num(format!("{}[1]", keys::STIRRUP), e.stirrup.diameter, a.stirrup.diameter);
            for (i, (se, sa)) in e.stirrup_lines.iter().zip(&a.stirrup_lines).enumerate() {
                c.segment(&format!("{}.{}", keys::STIRRUP_LINES, keys::LINE_NAMES[i]), *se, *sa);
            }
            for (i, (ae, aa)) in e.stirrup_arcs.iter().zip(&a.stirrup_arcs).enumerate() {
                let f = format!("{}.{}", keys::STIRRUP_ARCS, keys::ARC_NAMES[i]);
                c.point(&format!("{f}.center"), ae.center, aa.center);
                c.num(format!("{f}.radius"), ae.radius, aa.radius);
                c.angle(format!("{f}.start"), ae.start_angle, aa.start_angle);
                c.angle(format!("{f}.end"), ae.end_angle, aa.end_angle);
            }
            for (i, (he, ha)) in e.hook_lines.iter().zip(&a.hook_lines).enumerate() {
                c.segment(&format!("{}.{}", keys::HOOK_LINES, keys::HOOK_NAMES[i]), *he, *ha);
            }
        }
        (Payload::Steel(e), Payload::Steel(a)) => {
            if normalize_section_type(&e.section_type) != normalize_section_type(&a.section_type) {
                c.text(keys::SECTION_TYPE, &e.section_type, &a.section_type);
            }
            c.point(keys::BOTTOM_LEFT, e.bottom_left, a.bottom_left);
        }
        (Payload::Precast(e), Payload::Precast(a)) => {
            let same_entry = match (catalog.get(&e.section_type), catalog.get(&a.section_type)) {
                (Some(x), Some(y)) => x.name == y.name,
                _ => normalize_section_type(&e.section_type) == normalize_section_type(&a.section_type),
            };
            if !same_entry {
                c.text(keys::SECTION_TYPE, &e.section_type, &a.section_type);
            }
            c.point(keys::BOTTOM_LEFT, e.bottom_left, a.bottom_left);
            c.points(keys::STRANDS, &e.strand_centers, &a.strand_centers);
        }
        _ => unreachable!("kinds checked above"),
    }
    Ok(VerifyReport {
        tolerance,
        mismatches: c.out,
    })
}
