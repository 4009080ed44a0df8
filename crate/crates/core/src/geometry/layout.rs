use crate::ir::{CircleSpec, Point2};

use super::{GeometryError, RcSectionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerRole {
    Top,
    /// Middle layer `k`, counted upward from the bottom layer (k >= 1).
    Middle(usize),
    Bottom,
    /// The single layer of a one-layer section.
    Only,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedLayer {
    pub role: LayerRole,
    pub bars: Vec<CircleSpec>,
}

impl PlacedLayer {
    pub fn y(&self) -> f64 {
        self.bars[0].center.y
    }
}

/// Placed bars, one entry per spec layer, top to bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct RebarLayout {
    pub layers: Vec<PlacedLayer>,
}

impl RebarLayout {
    /// Top to bottom, left to right: the order the IR records bars in.
    pub fn drawing_order(&self) -> Vec<CircleSpec> {
        self.layers.iter().flat_map(|l| l.bars.iter().copied()).collect()
    }

    /// Top layer, bottom layer, then middle layers from the bottom up.
    pub fn analysis_order(&self) -> Vec<CircleSpec> {
        let mut order: Vec<&PlacedLayer> = Vec::with_capacity(self.layers.len());
        order.extend(self.layers.iter().filter(|l| matches!(l.role, LayerRole::Top | LayerRole::Only)));
        order.extend(self.layers.iter().filter(|l| l.role == LayerRole::Bottom));
        let mut middles: Vec<&PlacedLayer> = self
            .layers
            .iter()
            .filter(|l| matches!(l.role, LayerRole::Middle(_)))
            .collect();
        middles.sort_by_key(|l| match l.role {
            LayerRole::Middle(k) => k,
            _ => 0,
        });
        order.extend(middles);
        order.into_iter().flat_map(|l| l.bars.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.layers.iter().map(|l| l.bars.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn layer_xs(spec: &RcSectionSpec, count: u32, r: f64, ds: f64) -> Result<Vec<f64>, GeometryError> {
    let t = spec.cover;
    let x_lm = spec.x1() + t + r + ds;
    let x_rm = spec.x2() - t - r - ds;
    if count == 1 {
        if x_lm > x_rm {
            return Err(GeometryError::SectionTooSmall(format!(
                "no room for a bar of radius {r} between the covers"
            )));
        }
        return Ok(vec![(spec.x1() + spec.x2()) / 2.0]);
    }
    if x_lm >= x_rm {
        return Err(GeometryError::SectionTooSmall(format!(
            "edge bars overlap: x_lm = {x_lm}, x_rm = {x_rm}"
        )));
    }
    let dx = (x_rm - x_lm) / (count - 1) as f64;
    Ok((0..count)
        .map(|j| if j + 1 == count { x_rm } else { x_lm + dx * j as f64 })
        .collect())
}

/// Place every bar of the section.
pub fn layout_rebars(spec: &RcSectionSpec) -> Result<RebarLayout, GeometryError> {
    spec.check()?;
    let ds = spec.stirrup_diameter();
    let t = spec.cover;
    let n = spec.layers.len();
    let radius = |i: usize| spec.layers[i].bar.radius(spec.unit);

    let y_bottom = spec.y1() + t + radius(n - 1) + ds;
    let mut ys = vec![0.0; n];
    ys[n - 1] = y_bottom;
    if n >= 2 {
        let y_top = spec.y2() - t - radius(0) - ds;
        if y_bottom >= y_top {
            return Err(GeometryError::SectionTooSmall(format!(
                "top and bottom layers overlap: y_bottom = {y_bottom}, y_top = {y_top}"
            )));
        }
        ys[0] = y_top;
        let dy = (y_top - y_bottom) / (n - 1) as f64;
        for (i, y) in ys.iter_mut().enumerate().take(n - 1).skip(1) {
            let k = n - 1 - i;
            *y = y_bottom + dy * k as f64;
        }
    } else if y_bottom + radius(0) + ds + t > spec.y2() {
        return Err(GeometryError::SectionTooSmall(
            "section is shallower than the covered bar".into(),
        ));
    }

    let mut layers = Vec::with_capacity(n);
    for (i, layer) in spec.layers.iter().enumerate() {
        let r = radius(i);
        let role = match (n, i) {
            (1, _) => LayerRole::Only,
            (_, 0) => LayerRole::Top,
            (_, i) if i == n - 1 => LayerRole::Bottom,
            (_, i) => LayerRole::Middle(n - 1 - i),
        };
        let bars = layer_xs(spec, layer.count, r, ds)?
            .into_iter()
            .map(|x| CircleSpec::new(Point2::new(x, ys[i]), r))
            .collect();
        layers.push(PlacedLayer { role, bars });
    }
    Ok(RebarLayout { layers })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geometry::{BarSize, LayerSpec};
    use crate::ir::Unit;

    fn bar(n: i64) -> BarSize {
        BarSize::new(n).unwrap()
    }

    pub(crate) fn reference_spec() -> RcSectionSpec {
        RcSectionSpec {
            width: 14.0,
            height: 24.0,
            origin: Point2::ORIGIN,
            cover: 2.0,
            stirrup_bar: bar(4),
            layers: vec![
                LayerSpec { count: 4, bar: bar(8) },
                LayerSpec { count: 2, bar: bar(4) },
                LayerSpec { count: 2, bar: bar(4) },
            ],
            unit: Unit::Inch,
            stirrup_spacing: Some(5.0),
        }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-4
    }

    #[test]
    fn reference_section_layout() {
        let layout = layout_rebars(&reference_spec()).unwrap();
        let bars = layout.drawing_order();
        let expected = [
            (3.0, 21.0, 0.5),
            (5.6667, 21.0, 0.5),
            (8.3333, 21.0, 0.5),
            (11.0, 21.0, 0.5),
            (2.75, 11.875, 0.25),
            (11.25, 11.875, 0.25),
            (2.75, 2.75, 0.25),
            (11.25, 2.75, 0.25),
        ];
        assert_eq!(bars.len(), expected.len());
        for (b, (x, y, r)) in bars.iter().zip(expected) {
            assert!(close(b.center.x, x) && close(b.center.y, y) && b.radius == r, "{b:?}");
        }
    }

    #[test]
    fn analysis_order_is_top_bottom_then_middles_upward() {
        let mut spec = reference_spec();
        spec.layers.insert(1, LayerSpec { count: 2, bar: bar(4) });
        let layout = layout_rebars(&spec).unwrap();
        let ys: Vec<f64> = layout.analysis_order().iter().map(|c| c.center.y).collect();
        let top = ys[0];
        assert!(ys[..4].iter().all(|y| *y == top));
        assert_eq!(ys[4], 2.75);
        assert!(ys[6] < ys[8], "middles must go bottom-up: {ys:?}");
        // four layers: dy = (21 - 2.75) / 3
        assert!(close(ys[6], 2.75 + 18.25 / 3.0));
        assert!(close(ys[8], 2.75 + 2.0 * 18.25 / 3.0));
    }

    #[test]
    fn two_layers_of_no4() {
        let mut spec = reference_spec();
        spec.layers = vec![LayerSpec { count: 2, bar: bar(4) }; 2];
        let layout = layout_rebars(&spec).unwrap();
        let bars = layout.drawing_order();
        assert_eq!(bars[0].center, Point2::new(2.75, 21.25));
        assert_eq!(bars[1].center, Point2::new(11.25, 21.25));
        assert_eq!(bars[2].center, Point2::new(2.75, 2.75));
        assert_eq!(bars[3].center, Point2::new(11.25, 2.75));
    }

    #[test]
    fn single_bar_and_single_layer() {
        let mut spec = reference_spec();
        spec.layers = vec![LayerSpec { count: 1, bar: bar(8) }];
        let layout = layout_rebars(&spec).unwrap();
        let only = layout.drawing_order()[0];
        assert_eq!(only.center, Point2::new(7.0, 3.0));
        assert_eq!(layout.layers[0].role, LayerRole::Only);
    }

    #[test]
    fn too_narrow_section() {
        let mut spec = reference_spec();
        spec.width = 4.0;
        spec.layers = vec![LayerSpec { count: 2, bar: bar(8) }; 2];
        assert!(matches!(layout_rebars(&spec), Err(GeometryError::SectionTooSmall(_))));
        let mut spec = reference_spec();
        spec.height = 5.0;
        assert!(matches!(layout_rebars(&spec), Err(GeometryError::SectionTooSmall(_))));
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = reference_spec();
        spec.layers.clear();
        assert!(matches!(layout_rebars(&spec), Err(GeometryError::InvalidSpec(_))));
        let mut spec = reference_spec();
        spec.cover = 0.0;
        assert!(matches!(layout_rebars(&spec), Err(GeometryError::InvalidSpec(_))));
    }
}
