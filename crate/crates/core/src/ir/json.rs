//! JSON surface of the drawing IR.
//!
//! Key strings and their order are fixed. Parsing is strict about structure
//! (unknown keys are rejected with their path) and lenient in the places LLM
//! output is known to drift: the capitalization of the drawing-type key and
//! the string form `"(x, y)"` used for steel/precast positions.

use serde_json::{Map, Number, Value};

use super::{
    round4, validate, ArcSpec, DrawingIr, DrawingKind, Payload, Point2, PrecastDrawing,
    RcDrawing, SaveTarget, Segment, Sides, SteelDrawing, StirrupPair, Unit, Vertices,
};

pub mod keys {
    pub const SAVE: &str = "Save";
    pub const UNIT: &str = "Unit";
    pub const KIND: &str = "Type of Structural drawing";
    pub const VERTICES: &str = "Coordinates of Four Vertices";
    pub const SIDES: &str = "End Point of Four Sides";
    pub const REBAR_CENTERS: &str = "Center of Rebars";
    pub const REBAR_RADII: &str = "Radius of Rebars";
    pub const STIRRUP: &str = "Radius and Diameter of Stirrup";
    pub const STIRRUP_LINES: &str = "End Points of Internal and External Lines of Stirrup";
    pub const STIRRUP_ARCS: &str = "Arc Lines of Stirrup";
    pub const HOOK_LINES: &str = "Hook lines of Stirrup";
    pub const SECTION_TYPE: &str = "Type of the requested steel beam cross-section";
    pub const BOTTOM_LEFT: &str = "Position of the bottom left of the steel beam cross-section";
    pub const STRANDS: &str = "Position of the strands";
    /// Spelling used in the knowledge-base enumeration; accepted on input.
    pub const STRANDS_ALT: &str = "The positions of the strands";

    pub const VERTEX_NAMES: [&str; 4] = ["bottom left", "top left", "top right", "bottom right"];
    pub const SIDE_NAMES: [&str; 4] = ["left", "top", "right", "bottom"];
    pub const LINE_NAMES: [&str; 8] = ["L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8"];
    pub const ARC_NAMES: [&str; 4] = ["A1", "A2", "A3", "A4"];
    pub const HOOK_NAMES: [&str; 6] = ["Lh1", "Lh2", "Lh3", "Lh4", "Lh5", "Lh6"];
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IrError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("missing key {0}")]
    MissingKey(String),
    #[error("unexpected key {0}")]
    UnknownKey(String),
    #[error("bad type at {path}: expected {expected}")]
    BadType { path: String, expected: &'static str },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

fn child(path: &str, key: &str) -> String {
    if path.is_empty() {
        format!("/{key}")
    } else {
        format!("{path}/{key}")
    }
}

fn bad(path: &str, expected: &'static str) -> IrError {
    IrError::BadType {
        path: if path.is_empty() { "/".into() } else { path.into() },
        expected,
    }
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
    seen: Vec<&'a str>,
}

impl<'a> Obj<'a> {
    fn new(value: &'a Value, path: String) -> Result<Self, IrError> {
        let map = value.as_object().ok_or_else(|| bad(&path, "object"))?;
        Ok(Obj {
            map,
            path,
            seen: Vec::new(),
        })
    }

    fn get(&mut self, key: &str) -> Result<(&'a Value, String), IrError> {
        self.get_any(&[key])
    }

    /// First of `aliases` present (case-insensitive).
    fn get_any(&mut self, aliases: &[&str]) -> Result<(&'a Value, String), IrError> {
        for (k, v) in self.map {
            if aliases.iter().any(|a| a.eq_ignore_ascii_case(k)) {
                self.seen.push(k.as_str());
                return Ok((v, child(&self.path, k)));
            }
        }
        Err(IrError::MissingKey(child(&self.path, aliases[0])))
    }

    fn finish(self) -> Result<(), IrError> {
        for k in self.map.keys() {
            if !self.seen.contains(&k.as_str()) {
                return Err(IrError::UnknownKey(child(&self.path, k)));
            }
        }
        Ok(())
    }
}

fn number(v: &Value, path: &str) -> Result<f64, IrError> {
    v.as_f64()
        .filter(|f| f.is_finite())
        .ok_or_else(|| bad(path, "number"))
}

fn numbers(v: &Value, path: &str, len: usize, expected: &'static str) -> Result<Vec<f64>, IrError> {
    let arr = v.as_array().ok_or_else(|| bad(path, expected))?;
    if arr.len() != len {
        return Err(bad(path, expected));
    }
    arr.iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{path}/{i}")))
        .collect()
}

fn point(v: &Value, path: &str) -> Result<Point2, IrError> {
    let xy = numbers(v, path, 2, "[x, y] pair")?;
    Ok(Point2::new(xy[0], xy[1]))
}

/// Numbers inside a position string such as `"(0, 0)"` or `"[3, 2], [5, 2]"`.
fn numbers_in_str(s: &str, path: &str) -> Result<Vec<f64>, IrError> {
    let mut out = Vec::new();
    for tok in s.split(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E')) {
        if tok.is_empty() {
            continue;
        }
        let n: f64 = tok.parse().map_err(|_| bad(path, "coordinate string"))?;
        out.push(n);
    }
    Ok(out)
}

/// A position accepted either as `[x, y]` or as a `"(x, y)"` string.
fn position(v: &Value, path: &str) -> Result<Point2, IrError> {
    match v {
        Value::String(s) => {
            let n = numbers_in_str(s, path)?;
            if n.len() != 2 {
                return Err(bad(path, "\"(x, y)\" position"));
            }
            Ok(Point2::new(n[0], n[1]))
        }
        _ => point(v, path),
    }
}

fn position_list(v: &Value, path: &str) -> Result<Vec<Point2>, IrError> {
    match v {
        Value::String(s) => {
            let n = numbers_in_str(s, path)?;
            if n.len() % 2 != 0 {
                return Err(bad(path, "list of [x, y] positions"));
            }
            Ok(n.chunks(2).map(|c| Point2::new(c[0], c[1])).collect())
        }
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, p)| point(p, &format!("{path}/{i}")))
            .collect(),
        _ => Err(bad(path, "list of [x, y] positions")),
    }
}

fn segment(v: &Value, path: String) -> Result<Segment, IrError> {
    let mut obj = Obj::new(v, path)?;
    let (e1, p1) = obj.get("end1")?;
    let (e2, p2) = obj.get("end2")?;
    let seg = Segment::new(point(e1, &p1)?, point(e2, &p2)?);
    obj.finish()?;
    Ok(seg)
}

fn named_segments<const N: usize>(
    v: &Value,
    path: String,
    names: [&str; N],
) -> Result<[Segment; N], IrError> {
    let mut obj = Obj::new(v, path)?;
    let mut out = [Segment::new(Point2::ORIGIN, Point2::ORIGIN); N];
    for (slot, name) in out.iter_mut().zip(names) {
        let (s, p) = obj.get(name)?;
        *slot = segment(s, p)?;
    }
    obj.finish()?;
    Ok(out)
}

fn save_target(v: &Value, path: &str) -> Result<SaveTarget, IrError> {
    match v {
        Value::Bool(false) | Value::Null => Ok(SaveTarget::NoSave),
        Value::String(s) if s.trim().eq_ignore_ascii_case("false") || s.trim().is_empty() => {
            Ok(SaveTarget::NoSave)
        }
        Value::String(s) => Ok(SaveTarget::Path(s.trim().to_string())),
        _ => Err(bad(path, "false or a path string")),
    }
}

/// Parse and validate IR JSON text.
pub fn parse_ir(json_text: &str) -> Result<DrawingIr, IrError> {
    let root: Value =
        serde_json::from_str(json_text).map_err(|e| IrError::MalformedJson(e.to_string()))?;
    let mut obj = Obj::new(&root, String::new())?;

    let (v, p) = obj.get(keys::SAVE)?;
    let save = save_target(v, &p)?;
    let (v, p) = obj.get(keys::UNIT)?;
    let unit = v
        .as_str()
        .ok_or_else(|| bad(&p, "unit string"))?
        .parse::<Unit>()
        .map_err(|_| bad(&p, "\"Inch\" or \"Millimeter\""))?;
    let (v, p) = obj.get(keys::KIND)?;
    let kind = v
        .as_str()
        .ok_or_else(|| bad(&p, "drawing kind string"))?
        .parse::<DrawingKind>()
        .map_err(|_| bad(&p, "one of the three drawing kinds"))?;

    let payload = match kind {
        DrawingKind::RectangularConcreteBeam => Payload::Rc(parse_rc(&mut obj)?),
        DrawingKind::SteelBeam => {
            let (section_type, bottom_left) = parse_catalog_section(&mut obj)?;
            Payload::Steel(SteelDrawing {
                section_type,
                bottom_left,
            })
        }
        DrawingKind::PrecastBeam => {
            let (section_type, bottom_left) = parse_catalog_section(&mut obj)?;
            let (v, p) = obj.get_any(&[keys::STRANDS, keys::STRANDS_ALT])?;
            Payload::Precast(PrecastDrawing {
                section_type,
                bottom_left,
                strand_centers: position_list(v, &p)?,
            })
        }
    };
    obj.finish()?;

    let ir = DrawingIr {
        save,
        unit,
        payload,
    };
    let report = validate(&ir);
    if !report.is_empty() {
        return Err(IrError::InvariantViolation(report.to_string()));
    }
    Ok(ir)
}

fn parse_catalog_section(obj: &mut Obj<'_>) -> Result<(String, Point2), IrError> {
    let (v, p) = obj.get(keys::SECTION_TYPE)?;
    let section_type = v
        .as_str()
        .ok_or_else(|| bad(&p, "section type string"))?
        .trim()
        .to_string();
    let (v, p) = obj.get(keys::BOTTOM_LEFT)?;
    Ok((section_type, position(v, &p)?))
}

fn parse_rc(obj: &mut Obj<'_>) -> Result<RcDrawing, IrError> {
    let (v, p) = obj.get(keys::VERTICES)?;
    let mut vo = Obj::new(v, p)?;
    let mut pts = [Point2::ORIGIN; 4];
    for (slot, name) in pts.iter_mut().zip(keys::VERTEX_NAMES) {
        let (v, p) = vo.get(name)?;
        *slot = point(v, &p)?;
    }
    vo.finish()?;
    let vertices = Vertices {
        bottom_left: pts[0],
        top_left: pts[1],
        top_right: pts[2],
        bottom_right: pts[3],
    };

    let (v, p) = obj.get(keys::SIDES)?;
    let [left, top, right, bottom] = named_segments(v, p, keys::SIDE_NAMES)?;
    let sides = Sides {
        left,
        top,
        right,
        bottom,
    };

    let (v, p) = obj.get(keys::REBAR_CENTERS)?;
    let rebar_centers = v
        .as_array()
        .ok_or_else(|| bad(&p, "list of [x, y] pairs"))?
        .iter()
        .enumerate()
        .map(|(i, c)| point(c, &format!("{p}/{i}")))
        .collect::<Result<Vec<_>, _>>()?;

    let (v, p) = obj.get(keys::REBAR_RADII)?;
    let rebar_radii = v
        .as_array()
        .ok_or_else(|| bad(&p, "list of radii"))?
        .iter()
        .enumerate()
        .map(|(i, r)| number(r, &format!("{p}/{i}")))
        .collect::<Result<Vec<_>, _>>()?;

    let (v, p) = obj.get(keys::STIRRUP)?;
    let rd = numbers(v, &p, 2, "[radius, diameter]")?;
    let stirrup = StirrupPair {
        radius: rd[0],
        diameter: rd[1],
    };

    let (v, p) = obj.get(keys::STIRRUP_LINES)?;
    let stirrup_lines = named_segments(v, p, keys::LINE_NAMES)?;

    let (v, p) = obj.get(keys::STIRRUP_ARCS)?;
    let mut ao = Obj::new(v, p)?;
    let mut stirrup_arcs = [ArcSpec {
        center: Point2::ORIGIN,
        radius: 0.0,
        start_angle: 0.0,
        end_angle: 0.0,
    }; 4];
    for (slot, name) in stirrup_arcs.iter_mut().zip(keys::ARC_NAMES) {
        let (v, p) = ao.get(name)?;
        let n = numbers(v, &p, 5, "[x, y, radius, start angle, end angle]")?;
        *slot = ArcSpec {
            center: Point2::new(n[0], n[1]),
            radius: n[2],
            start_angle: n[3],
            end_angle: n[4],
        };
    }
    ao.finish()?;

    let (v, p) = obj.get(keys::HOOK_LINES)?;
    let hook_lines = named_segments(v, p, keys::HOOK_NAMES)?;

    Ok(RcDrawing {
        vertices,
        sides,
        rebar_centers,
        rebar_radii,
        stirrup,
        stirrup_lines,
        stirrup_arcs,
        hook_lines,
    })
}

fn num(v: f64) -> Value {
    let r = round4(v);
    if r.fract() == 0.0 && r.abs() < 1e15 {
        Value::Number(Number::from(r as i64))
    } else {
        Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
    }
}

fn pair(p: Point2) -> Value {
    Value::Array(vec![num(p.x), num(p.y)])
}

fn seg_value(s: &Segment) -> Value {
    let mut m = Map::new();
    m.insert("end1".into(), pair(s.end1));
    m.insert("end2".into(), pair(s.end2));
    Value::Object(m)
}

fn named_segs(names: &[&str], segs: &[Segment]) -> Value {
    Value::Object(
        names
            .iter()
            .zip(segs)
            .map(|(n, s)| (n.to_string(), seg_value(s)))
            .collect(),
    )
}

fn position_string(p: Point2) -> Value {
    Value::String(p.to_string())
}

fn positions_string(ps: &[Point2]) -> Value {
    Value::String(
        ps.iter()
            .map(|p| format!("[{}, {}]", super::fmt_num(p.x), super::fmt_num(p.y)))
            .collect::<Vec<_>>()
            .join(", "),
    )
}

/// Build the canonical JSON value (fixed key order).
pub fn to_value(ir: &DrawingIr) -> Value {
    let mut m = Map::new();
    m.insert(
        keys::SAVE.into(),
        match &ir.save {
            SaveTarget::NoSave => Value::Bool(false),
            SaveTarget::Path(p) => Value::String(p.clone()),
        },
    );
    m.insert(keys::UNIT.into(), Value::String(ir.unit.as_str().into()));
    m.insert(keys::KIND.into(), Value::String(ir.kind().as_str().into()));
    match &ir.payload {
        Payload::Rc(rc) => {
            let v = &rc.vertices;
            let mut vm = Map::new();
            for (name, p) in keys::VERTEX_NAMES
                .iter()
                .zip([v.bottom_left, v.top_left, v.top_right, v.bottom_right])
            {
                vm.insert(name.to_string(), pair(p));
            }
            m.insert(keys::VERTICES.into(), Value::Object(vm));
            let s = &rc.sides;
            m.insert(
                keys::SIDES.into(),
                named_segs(&keys::SIDE_NAMES, &[s.left, s.top, s.right, s.bottom]),
            );
            m.insert(
                keys::REBAR_CENTERS.into(),
                Value::Array(rc.rebar_centers.iter().map(|p| pair(*p)).collect()),
            );
            m.insert(
                keys::REBAR_RADII.into(),
                Value::Array(rc.rebar_radii.iter().map(|r| num(*r)).collect()),
            );
            m.insert(
                keys::STIRRUP.into(),
                Value::Array(vec![num(rc.stirrup.radius), num(rc.stirrup.diameter)]),
            );
            m.insert(
                keys::STIRRUP_LINES.into(),
                named_segs(&keys::LINE_NAMES, &rc.stirrup_lines),
            );
            m.insert(
                keys::STIRRUP_ARCS.into(),
                Value::Object(
                    keys::ARC_NAMES
                        .iter()
                        .zip(&rc.stirrup_arcs)
                        .map(|(n, a)| {
                            (
                                n.to_string(),
                                Value::Array(vec![
                                    num(a.center.x),
                                    num(a.center.y),
                                    num(a.radius),
                                    num(a.start_angle),
                                    num(a.end_angle),
                                ]),
                            )
                        })
                        .collect(),
                ),
            );
            m.insert(
                keys::HOOK_LINES.into(),
                named_segs(&keys::HOOK_NAMES, &rc.hook_lines),
            );
        }
        Payload::Steel(s) => {
            m.insert(keys::SECTION_TYPE.into(), Value::String(s.section_type.clone()));
            m.insert(keys::BOTTOM_LEFT.into(), position_string(s.bottom_left));
        }
        Payload::Precast(p) => {
            m.insert(keys::SECTION_TYPE.into(), Value::String(p.section_type.clone()));
            m.insert(keys::BOTTOM_LEFT.into(), position_string(p.bottom_left));
            m.insert(keys::STRANDS.into(), positions_string(&p.strand_centers));
        }
    }
    Value::Object(m)
}

/// Canonical JSON text: objects one key per line, arrays of scalars (or of
/// scalar pairs) kept on one line.
pub fn serialize_ir(ir: &DrawingIr) -> String {
    let mut out = String::new();
    write_value(&mut out, &to_value(ir), 0);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| match i {
            Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
            Value::Object(_) => false,
            _ => true,
        }),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_inline(out: &mut String, v: &Value) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(out, item);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            let pad = "  ".repeat(indent + 1);
            for (i, (k, val)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, val, indent + 1);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(items) if !is_flat(v) => {
            out.push_str("[\n");
            let pad = "  ".repeat(indent + 1);
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, item, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        other => write_inline(out, other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const STEEL_TABLE3: &str = r#"{
  "Save": false,
  "Unit": "Millimeter",
  "Type of Structural drawing": "steel beam cross-section",
  "Type of the requested steel beam cross-section": "W1100X390",
  "Position of the bottom left of the steel beam cross-section": "(0, 0)"
}"#;

    #[test]
    fn parses_steel_record() {
        let ir = parse_ir(STEEL_TABLE3).unwrap();
        assert_eq!(ir.unit, Unit::Millimeter);
        assert_eq!(ir.save, SaveTarget::NoSave);
        match &ir.payload {
            Payload::Steel(s) => {
                assert_eq!(s.section_type, "W1100X390");
                assert_eq!(s.bottom_left, Point2::ORIGIN);
            }
            other => panic!("unexpected payload {other:?}"),
        }
        let text = serialize_ir(&ir);
        assert!(text.contains("\"Position of the bottom left of the steel beam cross-section\": \"(0, 0)\""));
        assert_eq!(text.trim_end(), STEEL_TABLE3);
    }

    #[test]
    fn kind_key_capitalization_is_tolerated() {
        let text = STEEL_TABLE3.replace("Structural drawing", "Structural Drawing");
        assert!(parse_ir(&text).is_ok());
        let ir = parse_ir(&text).unwrap();
        assert!(serialize_ir(&ir).contains("\"Type of Structural drawing\""));
    }

    #[test]
    fn unknown_key_is_reported_with_path() {
        let text = STEEL_TABLE3.replace("\"Save\": false,", "\"Save\": false, \"Color\": 3,");
        assert_eq!(
            parse_ir(&text).unwrap_err(),
            IrError::UnknownKey("/Color".into())
        );
    }

    #[test]
    fn missing_and_badly_typed_keys() {
        let text = STEEL_TABLE3.replace("\"Unit\": \"Millimeter\",", "");
        assert_eq!(parse_ir(&text).unwrap_err(), IrError::MissingKey("/Unit".into()));
        let text = STEEL_TABLE3.replace("\"(0, 0)\"", "true");
        assert!(matches!(parse_ir(&text).unwrap_err(), IrError::BadType { .. }));
        assert!(matches!(parse_ir("{not json").unwrap_err(), IrError::MalformedJson(_)));
    }

    #[test]
    fn precast_accepts_string_or_list_positions() {
        let text = r#"{
  "Save": false,
  "Unit": "Millimeter",
  "Type of Structural drawing": "precast beam cross-section",
  "Type of the requested steel beam cross-section": "I-beam type I",
  "Position of the bottom left of the steel beam cross-section": "(0, 0)",
  "Position of the strands": "[3, 2], [5, 2], [7, 2], [9, 2]"
}"#;
        let ir = parse_ir(text).unwrap();
        let Payload::Precast(p) = &ir.payload else { panic!() };
        assert_eq!(p.strand_centers.len(), 4);
        assert_eq!(p.strand_centers[3], Point2::new(9.0, 2.0));
        assert_eq!(serialize_ir(&ir).trim_end(), text);

        let listed = text.replace("\"[3, 2], [5, 2], [7, 2], [9, 2]\"", "[[3, 2], [5, 2], [7, 2], [9, 2]]");
        assert_eq!(parse_ir(&listed).unwrap(), ir);
    }

    #[test]
    fn save_path_round_trips() {
        let text = STEEL_TABLE3.replace("\"Save\": false", "\"Save\": \"C:/drawings/beam.dwg\"");
        let ir = parse_ir(&text).unwrap();
        assert_eq!(ir.save, SaveTarget::Path("C:/drawings/beam.dwg".into()));
        assert_eq!(parse_ir(&serialize_ir(&ir)).unwrap(), ir);
    }
}
