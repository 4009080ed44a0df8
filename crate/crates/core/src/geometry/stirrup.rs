use crate::ir::{ArcSpec, CircleSpec, Point2, Segment};

use super::GeometryError;

const SAME_ROW: f64 = 1e-6;

/// The four extreme bars the stirrup wraps around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerRebars {
    /// Top left.
    pub c1: CircleSpec,
    /// Top right.
    pub c2: CircleSpec,
    /// Bottom right.
    pub c3: CircleSpec,
    /// Bottom left.
    pub c4: CircleSpec,
}

pub fn corner_rebars(bars: &[CircleSpec]) -> Result<CornerRebars, GeometryError> {
    let first = bars.first().ok_or(GeometryError::EmptyLayout)?;
    let (mut y_max, mut y_min) = (first.center.y, first.center.y);
    for b in bars {
        y_max = y_max.max(b.center.y);
        y_min = y_min.min(b.center.y);
    }
    let row = |y: f64| bars.iter().filter(move |b| (b.center.y - y).abs() <= SAME_ROW);
    let leftmost = |y: f64| {
        *row(y)
            .min_by(|a, b| a.center.x.total_cmp(&b.center.x))
            .expect("row contains its extremum")
    };
    let rightmost = |y: f64| {
        *row(y)
            .max_by(|a, b| a.center.x.total_cmp(&b.center.x))
            .expect("row contains its extremum")
    };
    Ok(CornerRebars {
        c1: leftmost(y_max),
        c2: rightmost(y_max),
        c3: rightmost(y_min),
        c4: leftmost(y_min),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirrupGeometry {
    /// L1..L4 internal, L5..L8 external.
    pub lines: [Segment; 8],
    /// A1..A4, angles in degrees.
    pub arcs: [ArcSpec; 4],
}

pub fn stirrup_geometry(c: &CornerRebars, ds: f64) -> StirrupGeometry {
    let (p1, r1) = (c.c1.center, c.c1.radius);
    let (p2, r2) = (c.c2.center, c.c2.radius);
    let (p3, r3) = (c.c3.center, c.c3.radius);
    let (p4, r4) = (c.c4.center, c.c4.radius);
    let pt = Point2::new;
    let seg = Segment::new;
    let sqrt2 = 2f64.sqrt();

    let lines = [
        seg(pt(p1.x - r1, p1.y), pt(p4.x - r4, p4.y)),
        seg(pt(p1.x + sqrt2 * (r1 + ds) - r1, p1.y + r1), pt(p2.x, p2.y + r2)),
        seg(pt(p2.x + r2, p2.y), pt(p3.x + r3, p3.y)),
        seg(pt(p4.x, p4.y - r4), pt(p3.x, p3.y - r3)),
        seg(pt(p1.x - r1 - ds, p1.y), pt(p4.x - r4 - ds, p4.y)),
        seg(pt(p1.x, p1.y + r1 + ds), pt(p2.x, p2.y + r2 + ds)),
        seg(pt(p2.x + r2 + ds, p2.y), pt(p3.x + r3 + ds, p3.y)),
        seg(pt(p4.x, p4.y - r4 - ds), pt(p3.x, p3.y - r3 - ds)),
    ];
    let arc = |center: Point2, r: f64, start: f64, end: f64| ArcSpec {
        center,
        radius: r + ds,
        start_angle: start,
        end_angle: end,
    };
    let arcs = [
        arc(p1, r1, 45.0, 180.0),
        arc(p2, r2, 0.0, 90.0),
        arc(p3, r3, 270.0, 0.0),
        arc(p4, r4, 180.0, 270.0),
    ];
    StirrupGeometry { lines, arcs }
}
