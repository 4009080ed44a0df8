use crate::ir::{CircleSpec, Point2, Segment, Unit};

/// Lh1..Lh6 and the hook extension length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HookGeometry {
    pub lines: [Segment; 6],
    pub length: f64,
}

/// `max(6 Ds, 3 in)` expressed in `unit`.
pub fn hook_length(ds: f64, unit: Unit) -> f64 {
    (6.0 * ds).max(3.0 * unit.per_inch())
}

/// Double-line hook at the top-left corner bar, running down-right at 45°.
pub fn hook_geometry(c1: &CircleSpec, ds: f64, unit: Unit) -> HookGeometry {
    let lext = hook_length(ds, unit);
    let sqrt2 = 2f64.sqrt();
    let h = sqrt2 / 2.0;
    let (c, r1) = (c1.center, c1.radius);
    let dir = Point2::new(h, -h);
    let normal = Point2::new(-h, -h);
    let along = |p: Point2, t: f64| Point2::new(p.x + t * dir.x, p.y + t * dir.y);
    let off = |p: Point2, t: f64| Point2::new(p.x + t * normal.x, p.y + t * normal.y);

    let lh1_start = Point2::new(c.x + h * (r1 + ds), c.y + h * (r1 + ds));
    let lh2_start = Point2::new(c.x + h * r1, c.y + h * r1);
    let lh4_start = Point2::new(c.x - h * r1, c.y - h * r1);
    let lh1 = Segment::new(lh1_start, along(lh1_start, lext));
    let lh2 = Segment::new(lh2_start, along(lh2_start, lext));
    let lh4 = Segment::new(lh4_start, along(lh4_start, lext));
    // Outer leg: parallel to Lh4 at distance Ds, starting on the stirrup's
    // outer face x = C1.x - r1.
    let trim = ds - (sqrt2 - 1.0) * r1;
    let lh5 = Segment::new(along(off(lh4.end1, ds), trim), off(lh4.end2, ds));
    let lh3 = Segment::new(lh1.end2, lh2.end2);
    let lh6 = Segment::new(lh4.end2, lh5.end2);
    HookGeometry {
        lines: [lh1, lh2, lh3, lh4, lh5, lh6],
        length: lext,
    }
}
