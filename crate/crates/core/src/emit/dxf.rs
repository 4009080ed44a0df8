//! Minimal ASCII DXF: a header carrying `$INSUNITS` and an entities section
//! of LINE, CIRCLE and ARC records.

use std::collections::HashMap;

use crate::ir::{ArcSpec, CircleSpec, Point2, Segment, Unit};

use super::entities::{Entity, EntityList};
use super::EmitError;

fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v}")
    }
}

fn pair(out: &mut String, code: i32, value: &str) {
    out.push_str(&format!("{code:>3}\n{value}\n"));
}

/// Serializes entities; equal inputs give equal bytes.
pub fn emit_dxf(entities: &EntityList, unit: Unit) -> Vec<u8> {
    let mut out = String::new();
    pair(&mut out, 0, "SECTION");
    pair(&mut out, 2, "HEADER");
    pair(&mut out, 9, "$INSUNITS");
    pair(&mut out, 70, &unit.insunits_code().to_string());
    pair(&mut out, 0, "ENDSEC");
    pair(&mut out, 0, "SECTION");
    pair(&mut out, 2, "ENTITIES");
    for e in &entities.entities {
        pair(&mut out, 0, e.kind_name());
        match e {
            Entity::Line(s) => {
                pair(&mut out, 10, &num(s.end1.x));
                pair(&mut out, 20, &num(s.end1.y));
                pair(&mut out, 11, &num(s.end2.x));
                pair(&mut out, 21, &num(s.end2.y));
            }
            Entity::Circle(c) => {
                pair(&mut out, 10, &num(c.center.x));
                pair(&mut out, 20, &num(c.center.y));
                pair(&mut out, 40, &num(c.radius));
            }
            Entity::Arc(a) => {
                pair(&mut out, 10, &num(a.center.x));
                pair(&mut out, 20, &num(a.center.y));
                pair(&mut out, 40, &num(a.radius));
                pair(&mut out, 50, &num(a.start_angle));
                pair(&mut out, 51, &num(a.end_angle));
            }
        }
    }
    pair(&mut out, 0, "ENDSEC");
    pair(&mut out, 0, "EOF");
    out.into_bytes()
}

/// Parsed drawing: header units code (if present) and entities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DxfDocument {
    pub insunits: Option<i32>,
    pub entities: EntityList,
}

fn parse_err(message: impl Into<String>) -> EmitError {
    EmitError::TemplateParseError {
        name: String::new(),
        message: message.into(),
    }
}

fn build(kind: &str, codes: &HashMap<i32, f64>) -> Result<Entity, EmitError> {
    let get = |c: i32| {
        codes
            .get(&c)
            .copied()
            .ok_or_else(|| parse_err(format!("{kind} lacks group code {c}")))
    };
    Ok(match kind {
        "LINE" => Entity::Line(Segment::new(
            Point2::new(get(10)?, get(20)?),
            Point2::new(get(11)?, get(21)?),
        )),
        "CIRCLE" => Entity::Circle(CircleSpec::new(Point2::new(get(10)?, get(20)?), get(40)?)),
        "ARC" => Entity::Arc(ArcSpec {
            center: Point2::new(get(10)?, get(20)?),
            radius: get(40)?,
            start_angle: get(50)?,
            end_angle: get(51)?,
        }),
        other => return Err(parse_err(format!("unsupported entity {other}"))),
    })
}

/// Reads the dialect written by [`emit_dxf`]. Sections other than HEADER
/// and ENTITIES are skipped; entity kinds other than LINE, CIRCLE and ARC
/// are rejected.
pub fn parse_dxf(text: &str) -> Result<DxfDocument, EmitError> {
    let lines: Vec<&str> = text.lines().collect();
    if !lines.len().is_multiple_of(2) {
        return Err(parse_err("odd number of lines"));
    }
    let mut pairs = Vec::with_capacity(lines.len() / 2);
    for ch in lines.chunks(2) {
        let code: i32 = ch[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad group code {:?}", ch[0])))?;
        pairs.push((code, ch[1].trim()));
    }
    let mut doc = DxfDocument::default();
    let mut section: Option<&str> = None;
    let mut pending_var: Option<&str> = None;
    let mut current: Option<(&str, HashMap<i32, f64>)> = None;
    let mut saw_eof = false;
    for (code, value) in pairs {
        if saw_eof {
            break;
        }
        if code == 0 {
            if let Some((kind, codes)) = current.take() {
                doc.entities.entities.push(build(kind, &codes)?);
            }
            match value {
                "SECTION" => section = Some(""),
                "ENDSEC" => section = None,
                "EOF" => saw_eof = true,
                kind if section == Some("ENTITIES") => current = Some((kind, HashMap::new())),
                _ => {}
            }
            continue;
        }
        match section {
            Some("") if code == 2 => section = Some(value),
            Some("HEADER") => match code {
                9 => pending_var = Some(value),
                70 if pending_var == Some("$INSUNITS") => {
                    doc.insunits = Some(
                        value
                            .parse()
                            .map_err(|_| parse_err(format!("bad $INSUNITS {value:?}")))?,
                    );
                }
                _ => {}
            },
            Some("ENTITIES") => {
                if let Some((kind, codes)) = current.as_mut() {
                    if matches!(code, 10 | 11 | 20 | 21 | 40 | 50 | 51) {
                        let v: f64 = value
                            .parse()
                            .map_err(|_| parse_err(format!("{kind}: bad value {value:?} for code {code}")))?;
                        if !v.is_finite() {
                            return Err(parse_err(format!("{kind}: non-finite value")));
                        }
                        codes.insert(code, v);
                    }
                }
            }
            _ => {}
        }
    }
    if let Some((kind, codes)) = current.take() {
        doc.entities.entities.push(build(kind, &codes)?);
    }
    if !saw_eof {
        return Err(parse_err("missing EOF"));
    }
    Ok(doc)
}
