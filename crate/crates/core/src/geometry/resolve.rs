use crate::ir::{
    round4, validate, CircleSpec, DrawingIr, Payload, PrecastDrawing, RcDrawing, SaveTarget,
    Sides, SteelDrawing, StirrupPair, Unit, Vertices,
};

use super::{
    corner_rebars, hook_geometry, layout_rebars, stirrup_geometry, strand_layout, GeometryError,
    PrecastCatalog, RcSectionSpec, SectionSpec,
};

/// Resolve an RC section into its drawing record, in the spec's unit.
pub fn resolve_rc(spec: &RcSectionSpec, save: SaveTarget) -> Result<DrawingIr, GeometryError> {
    let layout = layout_rebars(spec)?;
    let bars: Vec<CircleSpec> = layout.drawing_order();
    let corners = corner_rebars(&bars)?;
    if corners.c1.center.y <= corners.c4.center.y {
        return Err(GeometryError::DegenerateStirrup(
            "a closed stirrup needs at least two rebar layers".into(),
        ));
    }
    if corners.c1.center.x >= corners.c2.center.x || corners.c4.center.x >= corners.c3.center.x {
        return Err(GeometryError::DegenerateStirrup(
            "top and bottom layers need at least two bars each".into(),
        ));
    }
    let ds = spec.stirrup_diameter();
    let stirrup = stirrup_geometry(&corners, ds);
    let hook = hook_geometry(&corners.c1, ds, spec.unit);

    let (x1, y1, x2, y2) = (spec.x1(), spec.y1(), spec.x2(), spec.y2());
    let p = crate::ir::Point2::new;
    let vertices = Vertices {
        bottom_left: p(x1, y1).rounded(),
        top_left: p(x1, y2).rounded(),
        top_right: p(x2, y2).rounded(),
        bottom_right: p(x2, y1).rounded(),
    };
    let rc = RcDrawing {
        sides: Sides::from_vertices(&vertices),
        vertices,
        rebar_centers: bars.iter().map(|b| b.center.rounded()).collect(),
        rebar_radii: bars.iter().map(|b| round4(b.radius)).collect(),
        stirrup: StirrupPair {
            radius: round4(ds / 2.0),
            diameter: round4(ds),
        },
        stirrup_lines: stirrup.lines.map(|s| s.rounded()),
        stirrup_arcs: stirrup.arcs.map(|a| a.rounded()),
        hook_lines: hook.lines.map(|s| s.rounded()),
    };
    let ir = DrawingIr {
        save,
        unit: spec.unit,
        payload: Payload::Rc(rc),
    };
    let report = validate(&ir);
    if !report.is_empty() {
        return Err(GeometryError::DegenerateStirrup(report.to_string()));
    }
    Ok(ir)
}

/// Deterministic resolver: spec to drawing record. RC sections carry their
/// own unit; `unit` applies to steel and precast sections.
pub fn resolve(
    spec: &SectionSpec,
    catalog: &PrecastCatalog,
    unit: Unit,
    save: SaveTarget,
) -> Result<DrawingIr, GeometryError> {
    match spec {
        SectionSpec::Rc(rc) => resolve_rc(rc, save),
        SectionSpec::Steel(s) => {
            if s.section_type.trim().is_empty() {
                return Err(GeometryError::InvalidSpec("empty steel section type".into()));
            }
            Ok(DrawingIr {
                save,
                unit,
                payload: Payload::Steel(SteelDrawing {
                    section_type: s.section_type.trim().to_string(),
                    bottom_left: s.bottom_left.rounded(),
                }),
            })
        }
        SectionSpec::Precast(p) => {
            let strands = strand_layout(catalog, &p.section_type, p.strand_count)?;
            let (dx, dy) = (p.bottom_left.x, p.bottom_left.y);
            Ok(DrawingIr {
                save,
                unit,
                payload: Payload::Precast(PrecastDrawing {
                    section_type: p.section_type.trim().to_string(),
                    bottom_left: p.bottom_left.rounded(),
                    strand_centers: strands
                        .into_iter()
                        .map(|s| s.translate(dx, dy).rounded())
                        .collect(),
                }),
            })
        }
    }
}

/// Resolver bound to a precast catalog.
#[derive(Debug, Clone, Default)]
pub struct Resolver {
    pub catalog: PrecastCatalog,
}

impl Resolver {
    pub fn new(catalog: PrecastCatalog) -> Self {
        Resolver { catalog }
    }

    pub fn resolve(
        &self,
        spec: &SectionSpec,
        unit: Unit,
        save: SaveTarget,
    ) -> Result<DrawingIr, GeometryError> {
        resolve(spec, &self.catalog, unit, save)
    }

    pub fn verify_ir(
        &self,
        ir: &DrawingIr,
        spec: &SectionSpec,
        tolerance: f64,
    ) -> Result<super::VerifyReport, GeometryError> {
        super::verify_ir(ir, spec, &self.catalog, tolerance)
    }
}
