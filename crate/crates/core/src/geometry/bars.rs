use crate::ir::Unit;

use super::GeometryError;

/// US bar designation: bar No. n has a nominal diameter of n/8 inch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BarSize {
    pub designation: u32,
}

impl BarSize {
    pub fn new(designation: i64) -> Result<Self, GeometryError> {
        if designation < 1 || designation > u32::MAX as i64 {
            return Err(GeometryError::NonPositiveDesignation(designation));
        }
        Ok(BarSize {
            designation: designation as u32,
        })
    }

    pub fn diameter_in(self) -> f64 {
        self.designation as f64 / 8.0
    }

    pub fn diameter(self, unit: Unit) -> f64 {
        self.diameter_in() * unit.per_inch()
    }

    pub fn radius(self, unit: Unit) -> f64 {
        self.diameter(unit) / 2.0
    }
}

/// `(diameter, radius)` in inches.
pub fn bar_dims(designation: i64) -> Result<(f64, f64), GeometryError> {
    let bar = BarSize::new(designation)?;
    Ok((bar.diameter_in(), bar.diameter_in() / 2.0))
}
