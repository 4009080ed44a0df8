//! Content checks on step results against the deterministic resolution.

use std::sync::OnceLock;

use regex::Regex;

use crate::geometry::PrecastCatalog;
use crate::ir::{fmt_num, normalize_section_type, ArcSpec, DrawingIr, Payload, Point2};

const NUM: &str = r"(-?\d+(?:\.\d+)?)";

fn pair_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let unit = r"\s*(?:in|inch|inches|mm)?\s*";
        Regex::new(&format!(r"[(\[]\s*{NUM}{unit},\s*{NUM}{unit}[)\]]")).expect("static regex")
    })
}

fn arc_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let n = format!(r"\s*{NUM}\s*");
        Regex::new(&format!(r"\[{n},{n},{n},{n},{n}\]")).expect("static regex")
    })
}

/// Every `(x, y)` or `[x, y]` pair in the text, unit suffixes allowed.
pub fn find_points(text: &str) -> Vec<Point2> {
    pair_re()
        .captures_iter(text)
        .filter_map(|c| Some(Point2::new(c[1].parse().ok()?, c[2].parse().ok()?)))
        .collect()
}

/// Every `[cx, cy, r, start, end]` list in the text.
pub fn find_arcs(text: &str) -> Vec<ArcSpec> {
    arc_re()
        .captures_iter(text)
        .filter_map(|c| {
            let v: Vec<f64> = (1..=5).map(|i| c[i].parse().ok()).collect::<Option<_>>()?;
            Some(ArcSpec {
                center: Point2::new(v[0], v[1]),
                radius: v[2],
                start_angle: v[3],
                end_angle: v[4],
            })
        })
        .collect()
}

fn near(a: Point2, b: Point2, tol: f64) -> bool {
    (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol
}

fn angle_eq(a: f64, b: f64, tol: f64) -> bool {
    let d = (a - b).rem_euclid(360.0);
    d <= tol || 360.0 - d <= tol
}

fn arc_eq(a: &ArcSpec, b: &ArcSpec, tol: f64) -> bool {
    near(a.center, b.center, tol)
        && (a.radius - b.radius).abs() <= tol
        && angle_eq(a.start_angle, b.start_angle, tol)
        && angle_eq(a.end_angle, b.end_angle, tol)
}

fn pt(p: Point2) -> String {
    format!("({}, {})", fmt_num(p.x), fmt_num(p.y))
}

/// Points a step result may mention, and the subset it must mention.
struct Expectation {
    allowed: Vec<Point2>,
    required: Vec<Point2>,
    arcs: Vec<ArcSpec>,
}

fn all_points(ir: &DrawingIr) -> Vec<Point2> {
    match &ir.payload {
        Payload::Rc(rc) => {
            let v = &rc.vertices;
            let mut out = vec![v.bottom_left, v.top_left, v.top_right, v.bottom_right];
            out.extend(&rc.rebar_centers);
            for s in rc.stirrup_lines.iter().chain(&rc.hook_lines) {
                out.push(s.end1);
                out.push(s.end2);
            }
            out.extend(rc.stirrup_arcs.iter().map(|a| a.center));
            out
        }
        Payload::Steel(s) => vec![s.bottom_left],
        Payload::Precast(p) => {
            let mut out = vec![p.bottom_left];
            out.extend(&p.strand_centers);
            out
        }
    }
}

fn expectation(tag: &str, ir: &DrawingIr) -> Expectation {
    let allowed = all_points(ir);
    let ends = |segs: &[crate::ir::Segment]| -> Vec<Point2> {
        segs.iter().flat_map(|s| [s.end1, s.end2]).collect()
    };
    match &ir.payload {
        Payload::Rc(rc) => {
            let (required, arcs) = match tag {
                "3-1" => (rc.rebar_centers.clone(), vec![]),
                "3-2" => (ends(&rc.stirrup_lines), rc.stirrup_arcs.to_vec()),
                "3-3" => (ends(&rc.hook_lines), vec![]),
                _ => {
                    let mut r = rc.rebar_centers.clone();
                    r.extend(ends(&rc.stirrup_lines));
                    r.extend(ends(&rc.hook_lines));
                    (r, rc.stirrup_arcs.to_vec())
                }
            };
            Expectation {
                allowed,
                required,
                arcs,
            }
        }
        _ => Expectation {
            required: allowed.clone(),
            allowed,
            arcs: vec![],
        },
    }
}

fn section_named(text: &str, ir: &DrawingIr, catalog: &PrecastCatalog) -> Option<String> {
    let hay = normalize_section_type(text);
    match &ir.payload {
        Payload::Rc(_) => None,
        Payload::Steel(s) => {
            let want = normalize_section_type(&s.section_type);
            (!hay.contains(&want)).then(|| format!("section type {} not stated", s.section_type))
        }
        Payload::Precast(p) => {
            let names: Vec<String> = match catalog.get(&p.section_type) {
                Some(e) => std::iter::once(&e.name)
                    .chain(&e.aliases)
                    .map(|n| normalize_section_type(n))
                    .collect(),
                None => vec![normalize_section_type(&p.section_type)],
            };
            (!names.iter().any(|n| hay.contains(n.as_str())))
                .then(|| format!("section type {} not stated", p.section_type))
        }
    }
}

fn point_issues(text: &str, exp: &Expectation, tol: f64) -> Vec<String> {
    let found = find_points(text);
    let mut issues = Vec::new();
    for p in &exp.required {
        if !found.iter().any(|q| near(*p, *q, tol)) {
            issues.push(format!("missing {}", pt(*p)));
        }
    }
    for q in &found {
        if !exp.allowed.iter().any(|p| near(*p, *q, tol)) {
            issues.push(format!("unexpected {}", pt(*q)));
        }
    }
    let arcs = find_arcs(text);
    for a in &exp.arcs {
        if !arcs.iter().any(|b| arc_eq(a, b, tol)) {
            issues.push(format!(
                "missing arc [{}, {}, {}, {}, {}]",
                fmt_num(a.center.x),
                fmt_num(a.center.y),
                fmt_num(a.radius),
                fmt_num(a.start_angle),
                fmt_num(a.end_angle)
            ));
        }
    }
    issues
}

/// Problems in a step-3 result (`tag` is `3`, `3-1`, `3-2` or `3-3`); empty
/// when every required value is present and nothing contradicts `expected`.
pub fn check_step3(
    tag: &str,
    result: &str,
    expected: &DrawingIr,
    catalog: &PrecastCatalog,
    tol: f64,
) -> Vec<String> {
    let mut issues = point_issues(result, &expectation(tag, expected), tol);
    issues.extend(section_named(result, expected, catalog));
    issues
}

fn insunits_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"INSUNITS['"]\s*,\s*(\d+)"#).expect("static regex"))
}

/// Problems in a step-6 script relative to the expected drawing.
pub fn check_script(
    script: &str,
    expected: &DrawingIr,
    catalog: &PrecastCatalog,
    tol: f64,
) -> Vec<String> {
    let mut issues = Vec::new();
    match &expected.payload {
        Payload::Rc(rc) => {
            let code = expected.unit.insunits_code().to_string();
            match insunits_re().captures(script) {
                Some(c) if c[1] == code => {}
                Some(c) => issues.push(format!("INSUNITS {} instead of {code}", &c[1])),
                None => issues.push("unit is never set".into()),
            }
            let exp = expectation("all", expected);
            let required: Vec<Point2> = exp.allowed.clone();
            issues.extend(point_issues(
                script,
                &Expectation {
                    allowed: exp.allowed,
                    required,
                    arcs: vec![],
                },
                tol,
            ));
            let circles = script.matches("AddCircle(").count();
            if circles < 1 || (circles != rc.rebar_centers.len() && !script.contains("for ")) {
                issues.push(format!("{circles} circle command(s) for {} rebars", rc.rebar_centers.len()));
            }
            if !script.contains("AddArc(") {
                issues.push("no arc command".into());
            }
        }
        Payload::Steel(s) => {
            if !script.contains(&s.section_type) {
                issues.push(format!("section {} not referenced", s.section_type));
            }
            let paste = format!("PASTECLIP {},{} ", fmt_num(s.bottom_left.x), fmt_num(s.bottom_left.y));
            if !script.contains(&paste) {
                issues.push(format!("missing {paste:?}"));
            }
        }
        Payload::Precast(p) => {
            let template = catalog
                .get(&p.section_type)
                .map(|e| e.template.clone())
                .unwrap_or_else(|| p.section_type.clone());
            if !script.contains(&template) {
                issues.push(format!("template {template} not referenced"));
            }
            if !script.contains("AddCircle(") {
                issues.push("no circle command".into());
            }
            let exp = Expectation {
                allowed: all_points(expected),
                required: p.strand_centers.clone(),
                arcs: vec![],
            };
            issues.extend(point_issues(script, &exp, tol));
        }
    }
    issues
}
