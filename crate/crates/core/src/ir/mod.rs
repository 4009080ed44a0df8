//! Drawing intermediate representation.
//!
//! A [`DrawingIr`] is the validated JSON record that sits between language
//! understanding (structured front-end or the LLM chain) and the emitters.
//! Its JSON surface uses the fixed key names from the knowledge base's
//! JSON requirement, see [`json`].

mod json;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use json::{keys, parse_ir, serialize_ir, to_value, IrError};
pub use validate::{validate, ValidationReport, Violation};

/// Number of decimals every published coordinate is rounded to.
pub const DECIMALS: i32 = 4;

/// Round to [`DECIMALS`] places, half away from zero. Never returns `-0.0`.
pub fn round4(v: f64) -> f64 {
    let r = (v * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Format a number the way drawings and scripts print it: rounded to four
/// decimals, trailing zeros trimmed, integers without a decimal point.
pub fn fmt_num(v: f64) -> String {
    let r = round4(v);
    let s = format!("{:.4}", r);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DrawingKind {
    #[serde(rename = "rectangular concrete beam cross-section")]
    RectangularConcreteBeam,
    #[serde(rename = "steel beam cross-section")]
    SteelBeam,
    #[serde(rename = "precast beam cross-section")]
    PrecastBeam,
}

impl DrawingKind {
    pub const ALL: [DrawingKind; 3] = [
        DrawingKind::RectangularConcreteBeam,
        DrawingKind::SteelBeam,
        DrawingKind::PrecastBeam,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DrawingKind::RectangularConcreteBeam => "rectangular concrete beam cross-section",
            DrawingKind::SteelBeam => "steel beam cross-section",
            DrawingKind::PrecastBeam => "precast beam cross-section",
        }
    }

    /// Short name used on the command line and in file names.
    pub fn short_name(self) -> &'static str {
        match self {
            DrawingKind::RectangularConcreteBeam => "rc",
            DrawingKind::SteelBeam => "steel",
            DrawingKind::PrecastBeam => "precast",
        }
    }
}

impl fmt::Display for DrawingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown drawing kind {0:?}")]
pub struct UnknownKind(pub String);

impl FromStr for DrawingKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase();
        for kind in DrawingKind::ALL {
            if norm == kind.as_str() || norm == kind.short_name() {
                return Ok(kind);
            }
        }
        match norm.as_str() {
            "rectangular" | "concrete" | "rectangular-concrete-beam-cross-section" => {
                Ok(DrawingKind::RectangularConcreteBeam)
            }
            "steel-beam-cross-section" => Ok(DrawingKind::SteelBeam),
            "precast-beam-cross-section" => Ok(DrawingKind::PrecastBeam),
            _ => Err(UnknownKind(s.to_string())),
        }
    }
}

/// Drawing unit. The emission code is the `$INSUNITS` header value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Unit {
    Inch,
    #[default]
    Millimeter,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::Inch => "Inch",
            Unit::Millimeter => "Millimeter",
        }
    }

    pub fn insunits_code(self) -> i32 {
        match self {
            Unit::Inch => 1,
            Unit::Millimeter => 4,
        }
    }

    /// Length of one inch expressed in this unit.
    pub fn per_inch(self) -> f64 {
        match self {
            Unit::Inch => 1.0,
            Unit::Millimeter => 25.4,
        }
    }

    /// Suffix used in bullet-form quantities (`24in`, `600mm`).
    pub fn suffix(self) -> &'static str {
        match self {
            Unit::Inch => "in",
            Unit::Millimeter => "mm",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inch" | "inches" | "in" | "\"" => Ok(Unit::Inch),
            "millimeter" | "millimeters" | "millimetre" | "millimetres" | "mm" => {
                Ok(Unit::Millimeter)
            }
            other => Err(format!("unsupported unit {other:?}")),
        }
    }
}

/// Whether and where the drawing is saved.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SaveTarget {
    #[default]
    NoSave,
    Path(String),
}

impl SaveTarget {
    pub fn path(&self) -> Option<&str> {
        match self {
            SaveTarget::NoSave => None,
            SaveTarget::Path(p) => Some(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn rounded(self) -> Self {
        Point2::new(round4(self.x), round4(self.y))
    }

    pub fn translate(self, dx: f64, dy: f64) -> Self {
        Point2::new(self.x + dx, self.y + dy)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_num(self.x), fmt_num(self.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub end1: Point2,
    pub end2: Point2,
}

impl Segment {
    pub const fn new(end1: Point2, end2: Point2) -> Self {
        Segment { end1, end2 }
    }

    pub fn rounded(self) -> Self {
        Segment::new(self.end1.rounded(), self.end2.rounded())
    }

    pub fn length(self) -> f64 {
        self.end1.distance(self.end2)
    }

    pub fn translate(self, dx: f64, dy: f64) -> Self {
        Segment::new(self.end1.translate(dx, dy), self.end2.translate(dx, dy))
    }
}

/// Circular arc; angles in degrees, counter-clockwise from start to end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub center: Point2,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl ArcSpec {
    pub fn rounded(self) -> Self {
        ArcSpec {
            center: self.center.rounded(),
            radius: round4(self.radius),
            start_angle: round4(self.start_angle),
            end_angle: round4(self.end_angle),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub center: Point2,
    pub radius: f64,
}

impl CircleSpec {
    pub const fn new(center: Point2, radius: f64) -> Self {
        CircleSpec { center, radius }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vertices {
    pub bottom_left: Point2,
    pub top_left: Point2,
    pub top_right: Point2,
    pub bottom_right: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sides {
    pub left: Segment,
    pub top: Segment,
    pub right: Segment,
    pub bottom: Segment,
}

impl Sides {
    /// Sides as they follow from the vertices: left runs bottom-left to
    /// top-left, then clockwise around the section.
    pub fn from_vertices(v: &Vertices) -> Self {
        Sides {
            left: Segment::new(v.bottom_left, v.top_left),
            top: Segment::new(v.top_left, v.top_right),
            right: Segment::new(v.top_right, v.bottom_right),
            bottom: Segment::new(v.bottom_right, v.bottom_left),
        }
    }
}

/// Stirrup bar radius and diameter (`rs`, `Ds`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StirrupPair {
    pub radius: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcDrawing {
    pub vertices: Vertices,
    pub sides: Sides,
    pub rebar_centers: Vec<Point2>,
    pub rebar_radii: Vec<f64>,
    pub stirrup: StirrupPair,
    /// L1..L4 internal, L5..L8 external.
    pub stirrup_lines: [Segment; 8],
    /// A1..A4.
    pub stirrup_arcs: [ArcSpec; 4],
    /// Lh1..Lh6.
    pub hook_lines: [Segment; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteelDrawing {
    pub section_type: String,
    pub bottom_left: Point2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecastDrawing {
    pub section_type: String,
    pub bottom_left: Point2,
    pub strand_centers: Vec<Point2>,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    Rc(RcDrawing),
    Steel(SteelDrawing),
    Precast(PrecastDrawing),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawingIr {
    pub save: SaveTarget,
    pub unit: Unit,
    pub payload: Payload,
}

impl DrawingIr {
    pub fn kind(&self) -> DrawingKind {
        match self.payload {
            Payload::Rc(_) => DrawingKind::RectangularConcreteBeam,
            Payload::Steel(_) => DrawingKind::SteelBeam,
            Payload::Precast(_) => DrawingKind::PrecastBeam,
        }
    }

    pub fn as_rc(&self) -> Option<&RcDrawing> {
        match &self.payload {
            Payload::Rc(rc) => Some(rc),
            _ => None,
        }
    }
}

/// Normalize a catalog section name for comparison: case-insensitive,
/// whitespace collapsed.
pub fn normalize_section_type(s: &str) -> String {
    s.split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}
