use std::sync::OnceLock;

use regex::Regex;

use crate::geometry::{BarSize, LayerSpec, PrecastCatalog, PrecastSpec, RcSectionSpec, SectionSpec, SteelSpec};
use crate::ir::{DrawingKind, Point2, SaveTarget, Unit};

use super::fields::{Field, FieldBlock};
use super::values::{
    find_length_after, fmt_exact, parse_bar_schedule, parse_count, parse_dimensions, parse_length,
    parse_point, parse_points, Length,
};
use super::FrontendError;

pub const RC_MANDATORY: [&str; 5] = [
    "Height of cross-section",
    "Width of cross-section",
    "Rebar information",
    "Stirrup information",
    "Thickness of clear cover",
];

fn unparsable(f: &Field) -> FrontendError {
    FrontendError::UnparsableQuantity {
        name: f.name.clone(),
        raw: f.value.clone(),
    }
}

fn length_of(f: &Field) -> Result<Length, FrontendError> {
    parse_length(&f.value).ok_or_else(|| unparsable(f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum LayerPos {
    Top,
    Middle(usize),
    Bottom,
}

fn layer_pos(name: &str) -> Option<LayerPos> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = CELL.get_or_init(|| {
        Regex::new(r"(?i)^\s*(top|middle|bottom)(?:\s+layer)?(?:\s+(\d+))?\s*(?:layer)?\s*$")
            .expect("valid pattern")
    });
    let c = r.captures(name)?;
    Some(match c[1].to_ascii_lowercase().as_str() {
        "top" => LayerPos::Top,
        "bottom" => LayerPos::Bottom,
        _ => LayerPos::Middle(c.get(2).and_then(|m| m.as_str().parse().ok()).unwrap_or(0)),
    })
}

fn rebar_field(block: &FieldBlock) -> Option<&Field> {
    block.find(|n| n.contains("rebar") && (n.contains("information") || n.contains("layer")) && !n.contains("number"))
}

fn layers(block: &FieldBlock) -> Result<Vec<LayerSpec>, FrontendError> {
    let mut found: Vec<(LayerPos, &Field)> = Vec::new();
    let candidates = rebar_field(block)
        .map(|f| f.children.iter())
        .into_iter()
        .flatten()
        .chain(block.fields.iter());
    for f in candidates {
        if let Some(pos) = layer_pos(&f.name) {
            if found.iter().any(|(p, _)| *p == pos && *p != LayerPos::Middle(0)) {
                return Err(FrontendError::DuplicateField(f.name.clone()));
            }
            found.push((pos, f));
        }
    }
    found.sort_by_key(|(p, _)| *p);
    found
        .into_iter()
        .map(|(_, f)| {
            let (count, n) = parse_bar_schedule(&f.value).ok_or_else(|| unparsable(f))?;
            let bar = BarSize::new(n).map_err(|_| unparsable(f))?;
            if count == 0 {
                return Err(unparsable(f));
            }
            Ok(LayerSpec { count, bar })
        })
        .collect()
}

fn mentions_other_reference(text: &str) -> bool {
    let t = text.to_ascii_lowercase();
    if t.contains("bottom left") || t.contains("bottom-left") || t.contains("left bottom") || t.contains("left-bottom") {
        return false;
    }
    ["top", "right", "center", "centre", "middle", "web", "flange"]
        .iter()
        .any(|w| t.contains(w))
}

fn reference_field(block: &FieldBlock) -> Option<&Field> {
    block.find(|n| {
        !n.contains("strand")
            && (n.contains("position")
                || n.contains("bottom left")
                || n.contains("bottom-left")
                || n.contains("vertex")
                || n.contains("origin")
                || n.contains("coordinate")
                || n.contains("insertion"))
    })
}

fn bottom_left(block: &FieldBlock) -> Result<Point2, FrontendError> {
    let Some(f) = reference_field(block) else {
        return Ok(Point2::ORIGIN);
    };
    if mentions_other_reference(&format!("{} {}", f.name, f.value)) {
        return Err(FrontendError::UnsupportedReference(format!("{}: {}", f.name, f.value)));
    }
    parse_point(&f.value).ok_or_else(|| unparsable(f))
}

fn is_kind_phrase(v: &str) -> bool {
    v.parse::<DrawingKind>().is_ok()
}

fn catalog_type(block: &FieldBlock, word: &str) -> Option<String> {
    let named = block.find(|n| {
        !n.contains("structure")
            && !n.contains("strand")
            && (n.contains(word) || n.contains("section type") || n.contains("cross-section type"))
    });
    if let Some(f) = named {
        if !f.value.is_empty() && !is_kind_phrase(&f.value) {
            return Some(f.value.trim().to_string());
        }
    }
    block
        .find(|n| n.contains("type of structure") || n == "structure" || n == "type")
        .filter(|f| !is_kind_phrase(&f.value) && !f.value.is_empty())
        .map(|f| f.value.trim().to_string())
}

fn rc_spec(block: &FieldBlock) -> Result<RcSectionSpec, FrontendError> {
    let mut missing = Vec::new();
    let mut lengths: Vec<(String, Length)> = Vec::new();

    let mut height = None;
    let mut width = None;
    if let Some(f) = block.find(|n| n.contains("height") || n.contains("depth")) {
        let l = length_of(f)?;
        height = Some(l.value);
        lengths.push((f.name.clone(), l));
    }
    if let Some(f) = block.find(|n| n.contains("width")) {
        let l = length_of(f)?;
        width = Some(l.value);
        lengths.push((f.name.clone(), l));
    }
    if height.is_none() && width.is_none() {
        if let Some(f) = block.find(|n| n.contains("dimension") || n.contains("size")) {
            let (h, w, unit) = parse_dimensions(&f.value).ok_or_else(|| unparsable(f))?;
            height = Some(h);
            width = Some(w);
            lengths.push((f.name.clone(), Length { value: h, unit }));
        }
    }
    if height.is_none() {
        missing.push(RC_MANDATORY[0]);
    }
    if width.is_none() {
        missing.push(RC_MANDATORY[1]);
    }

    let layers = layers(block)?;
    if layers.is_empty() {
        missing.push(RC_MANDATORY[2]);
    }

    let mut stirrup = None;
    let mut spacing = None;
    if let Some(f) = block.find(|n| n.contains("stirrup")) {
        let (_, n) = parse_bar_schedule(&f.value).ok_or_else(|| unparsable(f))?;
        stirrup = Some(BarSize::new(n).map_err(|_| unparsable(f))?);
        if let Some(l) = find_length_after(&f.value, "at") {
            spacing = Some(l.value);
            lengths.push((f.name.clone(), l));
        }
    } else {
        missing.push(RC_MANDATORY[3]);
    }

    let mut cover = None;
    if let Some(f) = block.find(|n| n.contains("cover")) {
        let l = length_of(f)?;
        cover = Some(l.value);
        lengths.push((f.name.clone(), l));
    } else {
        missing.push(RC_MANDATORY[4]);
    }

    if !missing.is_empty() {
        return Err(FrontendError::MissingMandatory(
            missing.into_iter().map(String::from).collect(),
        ));
    }

    let unit = lengths[0].1.unit;
    if let Some((name, l)) = lengths.iter().find(|(_, l)| l.unit != unit) {
        return Err(FrontendError::MixedUnits(format!(
            "{name} is in {} while {} is in {}",
            l.unit, lengths[0].0, unit
        )));
    }

    if let Some(f) = block.find(|n| n.contains("number") && (n.contains("rebar") || n.contains("layer"))) {
        if f.value.to_ascii_lowercase().contains("layer") {
            let declared = parse_count(&f.value).ok_or_else(|| unparsable(f))?;
            if declared != layers.len() {
                return Err(FrontendError::InconsistentLayers {
                    declared,
                    found: layers.len(),
                });
            }
        }
    }

    Ok(RcSectionSpec {
        width: width.expect("checked"),
        height: height.expect("checked"),
        origin: bottom_left(block)?,
        cover: cover.expect("checked"),
        stirrup_bar: stirrup.expect("checked"),
        layers,
        unit,
        stirrup_spacing: spacing,
    })
}

/// Drawing kind of a bullet-form description. "Type of Structure" names
/// either the kind or, for precast beams, the catalog section; without it
/// the kind-specific fields decide.
pub fn infer_kind(block: &FieldBlock, catalog: &PrecastCatalog) -> Option<DrawingKind> {
    if let Some(f) = block.get("Type of Structure") {
        if let Ok(kind) = f.value.parse() {
            return Some(kind);
        }
        if catalog.get(&f.value).is_some() {
            return Some(DrawingKind::PrecastBeam);
        }
    }
    if block.find(|n| n.contains("strand")).is_some() {
        Some(DrawingKind::PrecastBeam)
    } else if block.find(|n| n.contains("steel")).is_some() {
        Some(DrawingKind::SteelBeam)
    } else if block.find(|n| n.contains("rebar") || n.contains("stirrup")).is_some() {
        Some(DrawingKind::RectangularConcreteBeam)
    } else {
        None
    }
}

/// Build a typed spec from parsed fields.
pub fn fields_to_spec(block: &FieldBlock, kind: DrawingKind) -> Result<SectionSpec, FrontendError> {
    match kind {
        DrawingKind::RectangularConcreteBeam => rc_spec(block).map(SectionSpec::Rc),
        DrawingKind::SteelBeam => {
            let section_type = catalog_type(block, "steel").ok_or_else(|| {
                FrontendError::MissingMandatory(vec!["Type of steel beam cross-section".into()])
            })?;
            Ok(SectionSpec::Steel(SteelSpec {
                section_type,
                bottom_left: bottom_left(block)?,
            }))
        }
        DrawingKind::PrecastBeam => {
            let section_type = catalog_type(block, "precast");
            let count = match block.find(|n| n.contains("strand") && (n.contains("number") || n.contains("count"))) {
                Some(f) => Some(parse_count(&f.value).ok_or_else(|| unparsable(f))?),
                None => block
                    .find(|n| n.contains("strand") && n.contains("position"))
                    .map(|f| parse_points(&f.value).len()),
            };
            let mut missing = Vec::new();
            if section_type.is_none() {
                missing.push("Type of precast beam cross-section".to_string());
            }
            if count.is_none() {
                missing.push("Number of strands".to_string());
            }
            if !missing.is_empty() {
                return Err(FrontendError::MissingMandatory(missing));
            }
            Ok(SectionSpec::Precast(PrecastSpec {
                section_type: section_type.expect("checked"),
                bottom_left: bottom_left(block)?,
                strand_count: count.expect("checked"),
            }))
        }
    }
}

/// Save target and unit, as recorded in `Save: ...` / `Unit: ...` lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OtherInfo {
    pub save: SaveTarget,
    pub unit: Option<Unit>,
}

pub fn parse_other_info(block: &FieldBlock) -> Result<OtherInfo, FrontendError> {
    let mut info = OtherInfo::default();
    if let Some(f) = block.get("Save") {
        let v = f.value.trim().trim_matches(|c| c == '"' || c == '\'');
        info.save = match v.to_ascii_lowercase().as_str() {
            "" | "false" | "no" | "none" => SaveTarget::NoSave,
            _ => SaveTarget::Path(v.to_string()),
        };
    }
    if let Some(f) = block.get("Unit").or_else(|| block.get("Units")) {
        info.unit = Some(f.value.parse().map_err(|_| unparsable(f))?);
    }
    Ok(info)
}

fn len_text(v: f64, unit: Unit) -> String {
    format!("{}{}", fmt_exact(v), unit.suffix())
}

fn point_text(p: Point2) -> String {
    format!("({}, {})", fmt_exact(p.x), fmt_exact(p.y))
}

/// Canonical bullet form of a spec.
pub fn render_spec(spec: &SectionSpec) -> FieldBlock {
    let kind = Field::new("Type of Structure", spec.kind().as_str());
    let fields = match spec {
        SectionSpec::Rc(s) => {
            let n = s.layers.len();
            let middles = n.saturating_sub(2);
            let layer_fields = s
                .layers
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let name = if n >= 2 && i == 0 {
                        "Top layer".to_string()
                    } else if i == n - 1 {
                        "Bottom layer".to_string()
                    } else if middles == 1 {
                        "Middle layer".to_string()
                    } else {
                        format!("Middle layer {i}")
                    };
                    Field::new(name, format!("{} No {}", l.count, l.bar.designation))
                })
                .collect();
            let mut stirrup = format!("No {}", s.stirrup_bar.designation);
            if let Some(sp) = s.stirrup_spacing {
                stirrup.push_str(&format!(" at {}", len_text(sp, s.unit)));
            }
            vec![
                kind,
                Field::new("Height of cross-section", len_text(s.height, s.unit)),
                Field::new("Width of cross-section", len_text(s.width, s.unit)),
                Field::new("Position", format!("Bottom Left Vertex: {}", point_text(s.origin))),
                Field::new("Number of rebars", format!("{n} layers")),
                Field::with_children("Rebar information", layer_fields),
                Field::new("Stirrup information", stirrup),
                Field::new("Thickness of clear cover", len_text(s.cover, s.unit)),
            ]
        }
        SectionSpec::Steel(s) => vec![
            kind,
            Field::new("Steel Beam Cross-section", s.section_type.clone()),
            Field::new("Position", format!("Bottom Left Vertex: {}", point_text(s.bottom_left))),
        ],
        SectionSpec::Precast(p) => vec![
            kind,
            Field::new("Type of Precast Beam Cross-section", p.section_type.clone()),
            Field::new("Position", format!("Bottom Left Vertex: {}", point_text(p.bottom_left))),
            Field::new("Number of Strands", p.strand_count.to_string()),
        ],
    };
    FieldBlock { fields }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_fields, parse_fields_loose, render};

    const TABLE2_STEP2: &str = "- Type of Structure: rectangular concrete beam cross-section
- Height of cross-section: 24in
- Width of cross-section: 14in
- Number of rebars: 3 layers
- Rebar information:
    - Top layer: 4 No 8
    - Middle layer: 2 No 4
    - Bottom layer: 2 No 4
- Stirrup information: No 4
- Thickness of clear cover: 2in
";

    fn bar(n: i64) -> BarSize {
        BarSize::new(n).unwrap()
    }

    #[test]
    fn reference_rc_fields() {
        let spec = fields_to_spec(&parse_fields(TABLE2_STEP2).unwrap(), DrawingKind::RectangularConcreteBeam).unwrap();
        let SectionSpec::Rc(rc) = spec else { panic!() };
        assert_eq!(rc.height, 24.0);
        assert_eq!(rc.width, 14.0);
        assert_eq!(rc.cover, 2.0);
        assert_eq!(rc.unit, Unit::Inch);
        assert_eq!(rc.origin, Point2::ORIGIN);
        assert_eq!(rc.stirrup_bar, bar(4));
        assert_eq!(
            rc.layers,
            vec![
                LayerSpec { count: 4, bar: bar(8) },
                LayerSpec { count: 2, bar: bar(4) },
                LayerSpec { count: 2, bar: bar(4) },
            ]
        );
    }

    #[test]
    fn missing_cover() {
        let text = TABLE2_STEP2.replace("- Thickness of clear cover: 2in\n", "");
        let err = fields_to_spec(&parse_fields(&text).unwrap(), DrawingKind::RectangularConcreteBeam).unwrap_err();
        assert_eq!(err, FrontendError::MissingMandatory(vec!["Thickness of clear cover".into()]));
    }

    #[test]
    fn rc_rejections() {
        let kind = DrawingKind::RectangularConcreteBeam;
        let mixed = TABLE2_STEP2.replace("2in", "50mm");
        assert!(matches!(fields_to_spec(&parse_fields(&mixed).unwrap(), kind), Err(FrontendError::MixedUnits(_))));
        let wrong = TABLE2_STEP2.replace("3 layers", "2 layers");
        assert_eq!(
            fields_to_spec(&parse_fields(&wrong).unwrap(), kind),
            Err(FrontendError::InconsistentLayers { declared: 2, found: 3 })
        );
        let bad = TABLE2_STEP2.replace("24in", "two feet");
        assert!(matches!(
            fields_to_spec(&parse_fields(&bad).unwrap(), kind),
            Err(FrontendError::UnparsableQuantity { .. })
        ));
    }

    #[test]
    fn stirrup_spacing_is_kept() {
        let text = TABLE2_STEP2.replace("- Stirrup information: No 4", "- Stirrup information: No 4 closed stirrups at 5in");
        let SectionSpec::Rc(rc) = fields_to_spec(&parse_fields(&text).unwrap(), DrawingKind::RectangularConcreteBeam).unwrap() else {
            panic!()
        };
        assert_eq!(rc.stirrup_spacing, Some(5.0));
    }

    #[test]
    fn steel_and_precast_fields() {
        let steel = parse_fields("- Type of Structure: steel beam cross-section\n- Steel Beam Cross-section: W1100X390\n").unwrap();
        assert_eq!(
            fields_to_spec(&steel, DrawingKind::SteelBeam).unwrap(),
            SectionSpec::Steel(SteelSpec { section_type: "W1100X390".into(), bottom_left: Point2::ORIGIN })
        );
        let step3 = parse_fields_loose("Type of Steel Beam Cross-section: W1100X390\nCoordinate of Bottom Left of the Cross-section: (0, 0)").unwrap();
        assert_eq!(fields_to_spec(&step3, DrawingKind::SteelBeam).unwrap(), fields_to_spec(&steel, DrawingKind::SteelBeam).unwrap());

        let precast = parse_fields("- Type of Structure: I-beam type I\n- Position: Bottom Left Vertex: (0, 0)\n- Number of Strands: 4\n").unwrap();
        assert_eq!(
            fields_to_spec(&precast, DrawingKind::PrecastBeam).unwrap(),
            SectionSpec::Precast(PrecastSpec {
                section_type: "I-beam type I".into(),
                bottom_left: Point2::ORIGIN,
                strand_count: 4
            })
        );
        let other = parse_fields("- Steel Beam Cross-section: W1100X390\n- Position: top right corner at (10, 10)\n").unwrap();
        assert!(matches!(
            fields_to_spec(&other, DrawingKind::SteelBeam),
            Err(FrontendError::UnsupportedReference(_))
        ));
        let none = parse_fields("- Position: Bottom Left Vertex: (0, 0)\n").unwrap();
        assert!(matches!(fields_to_spec(&none, DrawingKind::SteelBeam), Err(FrontendError::MissingMandatory(_))));
    }

    #[test]
    fn other_info() {
        let b = parse_fields_loose("Save: False\nUnit: Inch").unwrap();
        assert_eq!(parse_other_info(&b).unwrap(), OtherInfo { save: SaveTarget::NoSave, unit: Some(Unit::Inch) });
        let b = parse_fields_loose("Save: C:/out/beam.dwg\nUnit: Millimeter").unwrap();
        let info = parse_other_info(&b).unwrap();
        assert_eq!(info.save, SaveTarget::Path("C:/out/beam.dwg".into()));
        assert!(parse_other_info(&parse_fields_loose("Unit: cubits").unwrap()).is_err());
    }

    #[test]
    fn rendering_round_trips() {
        let block = parse_fields(TABLE2_STEP2).unwrap();
        let spec = fields_to_spec(&block, DrawingKind::RectangularConcreteBeam).unwrap();
        let text = render(&render_spec(&spec));
        let back = fields_to_spec(&parse_fields(&text).unwrap(), DrawingKind::RectangularConcreteBeam).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn kinds_from_fields() {
        let cat = PrecastCatalog::bundled();
        let k = |t: &str| infer_kind(&parse_fields(t).unwrap(), &cat);
        assert_eq!(k("- Type of Structure: I-beam type I\n- Number of Strands: 4\n"), Some(DrawingKind::PrecastBeam));
        assert_eq!(k("- Type of Structure: steel beam cross-section\n"), Some(DrawingKind::SteelBeam));
        assert_eq!(k("- Steel Beam Cross-section: W1100X390\n"), Some(DrawingKind::SteelBeam));
        assert_eq!(k("- Rebar information: 2 No 4\n"), Some(DrawingKind::RectangularConcreteBeam));
        assert_eq!(k("- Save: False\n"), None);
    }
}
