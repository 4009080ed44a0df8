use crate::ir::{ArcSpec, CircleSpec, DrawingIr, Payload, Point2, Segment};

use super::templates::TemplateLibrary;
use super::EmitError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entity {
    Line(Segment),
    Circle(CircleSpec),
    /// Angles in degrees.
    Arc(ArcSpec),
}

impl Entity {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Entity::Line(_) => "LINE",
            Entity::Circle(_) => "CIRCLE",
            Entity::Arc(_) => "ARC",
        }
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Entity {
        match *self {
            Entity::Line(s) => Entity::Line(s.translate(dx, dy)),
            Entity::Circle(c) => Entity::Circle(CircleSpec {
                center: c.center.translate(dx, dy),
                radius: c.radius,
            }),
            Entity::Arc(a) => Entity::Arc(ArcSpec {
                center: a.center.translate(dx, dy),
                ..a
            }),
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            Entity::Line(s) => s.end1.is_finite() && s.end2.is_finite(),
            Entity::Circle(c) => c.center.is_finite() && c.radius.is_finite(),
            Entity::Arc(a) => {
                a.center.is_finite()
                    && [a.radius, a.start_angle, a.end_angle].iter().all(|v| v.is_finite())
            }
        }
    }

    /// Points bounding the entity: endpoints, and for curves the extreme
    /// points on the axes they sweep through.
    fn extent_points(&self) -> Vec<Point2> {
        match *self {
            Entity::Line(s) => vec![s.end1, s.end2],
            Entity::Circle(c) => {
                let (p, r) = (c.center, c.radius);
                vec![p.translate(-r, -r), p.translate(r, r)]
            }
            Entity::Arc(a) => {
                let at = |deg: f64| {
                    let t = deg.to_radians();
                    a.center.translate(a.radius * t.cos(), a.radius * t.sin())
                };
                let start = a.start_angle.rem_euclid(360.0);
                let sweep = (a.end_angle - a.start_angle).rem_euclid(360.0);
                let sweep = if sweep == 0.0 { 360.0 } else { sweep };
                let mut pts = vec![at(start), at(start + sweep)];
                for q in [0.0, 90.0, 180.0, 270.0] {
                    if (q - start).rem_euclid(360.0) <= sweep {
                        pts.push(at(q));
                    }
                }
                pts
            }
        }
    }
}

/// Ordered drawing entities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntityList {
    pub entities: Vec<Entity>,
}

impl EntityList {
    pub fn new(entities: Vec<Entity>) -> Self {
        EntityList { entities }
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.entities.iter().all(Entity::is_finite)
    }

    /// (lines, circles, arcs)
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for e in &self.entities {
            match e {
                Entity::Line(_) => c.0 += 1,
                Entity::Circle(_) => c.1 += 1,
                Entity::Arc(_) => c.2 += 1,
            }
        }
        c
    }

    pub fn circles(&self) -> impl Iterator<Item = &CircleSpec> {
        self.entities.iter().filter_map(|e| match e {
            Entity::Circle(c) => Some(c),
            _ => None,
        })
    }

    pub fn translate(&self, dx: f64, dy: f64) -> EntityList {
        EntityList::new(self.entities.iter().map(|e| e.translate(dx, dy)).collect())
    }

    /// Lower-left corner of the bounding box.
    pub fn bottom_left(&self) -> Option<Point2> {
        let pts: Vec<Point2> = self.entities.iter().flat_map(Entity::extent_points).collect();
        let x = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
        let y = pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
        (!pts.is_empty()).then_some(Point2::new(x, y))
    }

    /// Moves the bounding box's lower-left corner onto `target`.
    pub fn place_at(&self, target: Point2) -> EntityList {
        match self.bottom_left() {
            Some(bl) => self.translate(target.x - bl.x, target.y - bl.y),
            None => self.clone(),
        }
    }
}

/// Entities for a drawing record. RC sections are drawn from the record
/// alone; steel and precast sections are placed templates.
pub fn ir_to_entities(ir: &DrawingIr, templates: &TemplateLibrary) -> Result<EntityList, EmitError> {
    match &ir.payload {
        Payload::Rc(rc) => {
            let s = &rc.sides;
            let mut out: Vec<Entity> = [s.left, s.top, s.right, s.bottom].map(Entity::Line).to_vec();
            out.extend(
                rc.rebar_centers
                    .iter()
                    .zip(&rc.rebar_radii)
                    .map(|(c, r)| Entity::Circle(CircleSpec::new(*c, *r))),
            );
            out.extend(rc.stirrup_lines.iter().copied().map(Entity::Line));
            out.extend(rc.stirrup_arcs.iter().copied().map(Entity::Arc));
            out.extend(rc.hook_lines.iter().copied().map(Entity::Line));
            Ok(EntityList::new(out))
        }
        Payload::Steel(st) => Ok(templates.load(&st.section_type)?.place_at(st.bottom_left)),
        Payload::Precast(p) => {
            let mut list = templates.load(&p.section_type)?.place_at(p.bottom_left);
            let radius = templates.strand_radius(&p.section_type);
            list.entities.extend(
                p.strand_centers
                    .iter()
                    .map(|c| Entity::Circle(CircleSpec::new(*c, radius))),
            );
            Ok(list)
        }
    }
}
