//! Deterministic geometry for beam cross-sections.
//!
//! Everything here is computed at full precision; rounding to the published
//! four decimals happens once, when an IR is built in [`resolve`].

mod bars;
mod hook;
mod layout;
mod precast;
mod resolve;
mod stirrup;
mod verify;

use crate::ir::{Point2, Unit};

pub use bars::{bar_dims, BarSize};
pub use hook::{hook_geometry, hook_length, HookGeometry};
pub use layout::{layout_rebars, LayerRole, PlacedLayer, RebarLayout};
pub use precast::{strand_layout, PrecastCatalog, PrecastEntry, DEFAULT_STRAND_RADIUS};
pub use resolve::{resolve, resolve_rc, Resolver};
pub use stirrup::{corner_rebars, stirrup_geometry, CornerRebars, StirrupGeometry};
pub use verify::{verify_ir, Mismatch, VerifyReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("bar designation must be positive, got {0}")]
    NonPositiveDesignation(i64),
    #[error("section too small: {0}")]
    SectionTooSmall(String),
    #[error("invalid section: {0}")]
    InvalidSpec(String),
    #[error("layout has no rebars")]
    EmptyLayout,
    #[error("stirrup cannot be drawn: {0}")]
    DegenerateStirrup(String),
    #[error("unknown precast type {0:?}")]
    UnknownPrecastType(String),
    #[error("too many strands: at most {max} positions are available")]
    TooManyStrands { max: usize },
    #[error("catalog error: {0}")]
    Catalog(String),
    #[error("IR kind {ir} does not match spec kind {spec}")]
    KindMismatch { ir: String, spec: String },
}

/// One layer of identical bars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSpec {
    pub count: u32,
    pub bar: BarSize,
}

/// Parameters of a rectangular reinforced-concrete section.
#[derive(Debug, Clone, PartialEq)]
pub struct RcSectionSpec {
    pub width: f64,
    pub height: f64,
    /// Bottom-left vertex.
    pub origin: Point2,
    /// Clear cover.
    pub cover: f64,
    pub stirrup_bar: BarSize,
    /// Ordered top to bottom.
    pub layers: Vec<LayerSpec>,
    pub unit: Unit,
    /// Longitudinal stirrup spacing; recorded but not drawn in section view.
    pub stirrup_spacing: Option<f64>,
}

impl RcSectionSpec {
    pub fn x1(&self) -> f64 {
        self.origin.x
    }
    pub fn y1(&self) -> f64 {
        self.origin.y
    }
    pub fn x2(&self) -> f64 {
        self.origin.x + self.width
    }
    pub fn y2(&self) -> f64 {
        self.origin.y + self.height
    }

    /// Stirrup bar diameter `Ds` in the drawing unit.
    pub fn stirrup_diameter(&self) -> f64 {
        self.stirrup_bar.diameter(self.unit)
    }

    pub fn check(&self) -> Result<(), GeometryError> {
        let finite = [self.width, self.height, self.cover, self.origin.x, self.origin.y]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(GeometryError::InvalidSpec("non-finite dimension".into()));
        }
        if self.width <= 0.0 || self.height <= 0.0 {
            return Err(GeometryError::InvalidSpec(
                "width and height must be positive".into(),
            ));
        }
        if self.cover <= 0.0 {
            return Err(GeometryError::InvalidSpec("cover must be positive".into()));
        }
        if self.layers.is_empty() {
            return Err(GeometryError::InvalidSpec("at least one rebar layer is required".into()));
        }
        if let Some(i) = self.layers.iter().position(|l| l.count == 0) {
            return Err(GeometryError::InvalidSpec(format!("layer {} has no bars", i + 1)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteelSpec {
    pub section_type: String,
    pub bottom_left: Point2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecastSpec {
    pub section_type: String,
    pub bottom_left: Point2,
    pub strand_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SectionSpec {
    Rc(RcSectionSpec),
    Steel(SteelSpec),
    Precast(PrecastSpec),
}

impl SectionSpec {
    pub fn kind(&self) -> crate::ir::DrawingKind {
        use crate::ir::DrawingKind;
        match self {
            SectionSpec::Rc(_) => DrawingKind::RectangularConcreteBeam,
            SectionSpec::Steel(_) => DrawingKind::SteelBeam,
            SectionSpec::Precast(_) => DrawingKind::PrecastBeam,
        }
    }
}
