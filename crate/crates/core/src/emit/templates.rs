//! Section outlines stored as DXF, looked up by section type.

use std::path::{Path, PathBuf};

use crate::geometry::{PrecastCatalog, DEFAULT_STRAND_RADIUS};

use super::dxf::parse_dxf;
use super::entities::EntityList;
use super::EmitError;

const BUNDLED: [(&str, &str); 4] = [
    ("W1100X390", include_str!("../../data/templates/W1100X390.dxf")),
    ("HP360X174", include_str!("../../data/templates/HP360X174.dxf")),
    ("I-Beam_I", include_str!("../../data/templates/I-Beam_I.dxf")),
    ("Box-Beam_CB12x36", include_str!("../../data/templates/Box-Beam_CB12x36.dxf")),
];

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Dir(PathBuf),
    Bundled,
}

/// Template drawings: `<dir>/<SectionType>.dxf` files and/or the bundled
/// set. Precast section names resolve to file names through the catalog.
#[derive(Debug, Clone)]
pub struct TemplateLibrary {
    sources: Vec<Source>,
    pub catalog: PrecastCatalog,
}

impl Default for TemplateLibrary {
    fn default() -> Self {
        Self::bundled()
    }
}

impl TemplateLibrary {
    pub fn bundled() -> Self {
        TemplateLibrary {
            sources: vec![Source::Bundled],
            catalog: PrecastCatalog::bundled(),
        }
    }

    pub fn empty() -> Self {
        TemplateLibrary {
            sources: vec![],
            catalog: PrecastCatalog::bundled(),
        }
    }

    /// Templates from `dir` only.
    pub fn from_dir(dir: impl Into<PathBuf>) -> Self {
        TemplateLibrary {
            sources: vec![Source::Dir(dir.into())],
            catalog: PrecastCatalog::bundled(),
        }
    }

    /// Templates from `dir`, falling back to the bundled set.
    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        TemplateLibrary {
            sources: vec![Source::Dir(dir.into()), Source::Bundled],
            catalog: PrecastCatalog::bundled(),
        }
    }

    pub fn with_catalog(mut self, catalog: PrecastCatalog) -> Self {
        self.catalog = catalog;
        self
    }

    /// File stem for a section type, e.g. `I-Beam_I` for `I-beam type I`.
    pub fn file_stem(&self, section_type: &str) -> String {
        match self.catalog.get(section_type) {
            Some(e) => e.template.clone(),
            None => section_type.trim().to_string(),
        }
    }

    pub fn strand_radius(&self, section_type: &str) -> f64 {
        self.catalog
            .get(section_type)
            .map_or(DEFAULT_STRAND_RADIUS, |e| e.strand_radius)
    }

    fn find_in_dir(dir: &Path, stem: &str) -> Option<PathBuf> {
        let exact = dir.join(format!("{stem}.dxf"));
        if exact.is_file() {
            return Some(exact);
        }
        let want = format!("{stem}.dxf").to_ascii_lowercase();
        let mut names: Vec<PathBuf> = std::fs::read_dir(dir)
            .ok()?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .collect();
        names.sort();
        names.into_iter().find(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.to_ascii_lowercase() == want)
        })
    }

    fn text(&self, stem: &str) -> Result<Option<String>, EmitError> {
        for s in &self.sources {
            match s {
                Source::Dir(dir) => {
                    if let Some(p) = Self::find_in_dir(dir, stem) {
                        let text = std::fs::read_to_string(&p).map_err(|e| EmitError::TemplateParseError {
                            name: stem.to_string(),
                            message: e.to_string(),
                        })?;
                        return Ok(Some(text));
                    }
                }
                Source::Bundled => {
                    if let Some((_, t)) = BUNDLED.iter().find(|(n, _)| n.eq_ignore_ascii_case(stem)) {
                        return Ok(Some(t.to_string()));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Template entities with their bounding box moved to the origin.
    pub fn load(&self, section_type: &str) -> Result<EntityList, EmitError> {
        let stem = self.file_stem(section_type);
        let text = self
            .text(&stem)?
            .ok_or_else(|| EmitError::TemplateNotFound(section_type.to_string()))?;
        let doc = parse_dxf(&text).map_err(|e| match e {
            EmitError::TemplateParseError { message, .. } => EmitError::TemplateParseError {
                name: stem.clone(),
                message,
            },
            other => other,
        })?;
        if doc.entities.is_empty() {
            return Err(EmitError::TemplateParseError {
                name: stem,
                message: "no entities".into(),
            });
        }
        Ok(doc.entities.place_at(crate::ir::Point2::ORIGIN))
    }
}

pub fn load_template(templates: &TemplateLibrary, section_type: &str) -> Result<EntityList, EmitError> {
    templates.load(section_type)
}
