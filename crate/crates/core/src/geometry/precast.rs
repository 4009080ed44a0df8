use std::path::Path;

use serde::Deserialize;

use crate::ir::{normalize_section_type, Point2};

use super::GeometryError;

const BUNDLED: &str = include_str!("../../data/precast_catalog.json");
pub const DEFAULT_STRAND_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct PrecastEntry {
    pub name: String,
    /// Potential strand positions, bottom row first, left to right.
    pub positions: Vec<Point2>,
    pub strand_radius: f64,
    /// Template file stem, e.g. `I-Beam_I`.
    pub template: String,
    pub aliases: Vec<String>,
}

impl PrecastEntry {
    fn matches(&self, wanted: &str) -> bool {
        normalize_section_type(&self.name) == wanted
            || self.aliases.iter().any(|a| normalize_section_type(a) == wanted)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Positions(Vec<[f64; 2]>),
    Full {
        positions: Vec<[f64; 2]>,
        #[serde(default)]
        strand_radius: Option<f64>,
        #[serde(default)]
        template: Option<String>,
        #[serde(default)]
        aliases: Vec<String>,
    },
}

/// Precast section types and their potential strand positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecastCatalog {
    pub entries: Vec<PrecastEntry>,
}

fn default_template(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join("_")
}

impl PrecastCatalog {
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled precast catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Self, GeometryError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeometryError::Catalog(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let raw: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| GeometryError::Catalog(e.to_string()))?;
        let mut entries = Vec::with_capacity(raw.len());
        for (name, value) in raw {
            let entry: RawEntry = serde_json::from_value(value)
                .map_err(|e| GeometryError::Catalog(format!("{name}: {e}")))?;
            let (positions, radius, template, aliases) = match entry {
                RawEntry::Positions(p) => (p, None, None, Vec::new()),
                RawEntry::Full {
                    positions,
                    strand_radius,
                    template,
                    aliases,
                } => (positions, strand_radius, template, aliases),
            };
            let strand_radius = radius.unwrap_or(DEFAULT_STRAND_RADIUS);
            if !(strand_radius > 0.0 && strand_radius.is_finite()) {
                return Err(GeometryError::Catalog(format!(
                    "{name}: strand radius must be positive"
                )));
            }
            entries.push(PrecastEntry {
                template: template.unwrap_or_else(|| default_template(&name)),
                positions: positions.iter().map(|p| Point2::new(p[0], p[1])).collect(),
                strand_radius,
                aliases,
                name,
            });
        }
        Ok(PrecastCatalog { entries })
    }

    pub fn get(&self, section_type: &str) -> Option<&PrecastEntry> {
        let wanted = normalize_section_type(section_type);
        self.entries.iter().find(|e| e.matches(&wanted))
    }

    pub fn lookup(&self, section_type: &str) -> Result<&PrecastEntry, GeometryError> {
        self.get(section_type)
            .ok_or_else(|| GeometryError::UnknownPrecastType(section_type.to_string()))
    }
}

impl Default for PrecastCatalog {
    fn default() -> Self {
        Self::bundled()
    }
}

/// The first `n` potential positions of `section_type`.
pub fn strand_layout(
    catalog: &PrecastCatalog,
    section_type: &str,
    n: usize,
) -> Result<Vec<Point2>, GeometryError> {
    let entry = catalog.lookup(section_type)?;
    if n > entry.positions.len() {
        return Err(GeometryError::TooManyStrands {
            max: entry.positions.len(),
        });
    }
    Ok(entry.positions[..n].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|(x, y)| Point2::new(*x, *y)).collect()
    }

    #[test]
    fn i_beam_strands() {
        let cat = PrecastCatalog::bundled();
        let got = strand_layout(&cat, "I-Beam Type I", 4).unwrap();
        assert_eq!(got, pts(&[(3.0, 2.0), (5.0, 2.0), (7.0, 2.0), (9.0, 2.0)]));
        assert_eq!(strand_layout(&cat, "I-beam type I", 4).unwrap(), got);
        let all = &cat.get("i-beam type i").unwrap().positions;
        assert_eq!(all.len(), 18);
        assert_eq!(all[11], Point2::new(13.0, 4.0));
        assert_eq!(all[17], Point2::new(9.0, 8.0));
        assert_eq!(cat.get("I-Beam Type I").unwrap().template, "I-Beam_I");
    }

    #[test]
    fn box_beam_strands() {
        let cat = PrecastCatalog::bundled();
        let got = strand_layout(&cat, "Box Beam CB12x36", 3).unwrap();
        assert_eq!(got, pts(&[(4.0, 2.0), (6.0, 2.0), (8.0, 2.0)]));
        let all = &cat.get("Box Beam CB12x36").unwrap().positions;
        assert_eq!(all.len(), 30);
        assert_eq!(all[14], Point2::new(32.0, 2.0));
        assert_eq!(all[15], Point2::new(4.0, 4.0));
    }

    #[test]
    fn errors_and_empty_prefix() {
        let cat = PrecastCatalog::bundled();
        assert!(strand_layout(&cat, "I-Beam Type I", 0).unwrap().is_empty());
        assert_eq!(
            strand_layout(&cat, "I-Beam Type I", 19),
            Err(GeometryError::TooManyStrands { max: 18 })
        );
        assert!(matches!(
            strand_layout(&cat, "T-Beam", 1),
            Err(GeometryError::UnknownPrecastType(_))
        ));
    }

    #[test]
    fn plain_list_entries() {
        let cat = PrecastCatalog::from_json(r#"{"Slab S1": [[1, 1], [2, 1]]}"#).unwrap();
        let e = cat.get("slab s1").unwrap();
        assert_eq!(e.template, "Slab_S1");
        assert_eq!(e.strand_radius, 0.5);
        assert!(PrecastCatalog::from_json("[1]").is_err());
    }
}
