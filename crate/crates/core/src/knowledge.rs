//! Per-drawing-kind knowledge records spliced into prompts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::{Deserialize, Serialize};

use crate::ir::DrawingKind;

const BUNDLED: &str = include_str!("../data/knowledge.json");

#[derive(Debug, thiserror::Error)]
pub enum KnowledgeError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
}

/// Mandatory information and acquisition methods for one step-3 sub-step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubStep {
    pub tag: String,
    pub mandatory_info: String,
    pub acquisition_methods: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnowledgeRecord {
    pub useful_info: String,
    pub mandatory_info: String,
    pub acquisition_methods: String,
    pub json_requirement: String,
    pub codegen_steps: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub step3_substeps: Vec<SubStep>,
}

impl KnowledgeRecord {
    fn check(&self, kind: DrawingKind) -> Result<(), KnowledgeError> {
        let fields = [
            ("useful_info", &self.useful_info),
            ("mandatory_info", &self.mandatory_info),
            ("acquisition_methods", &self.acquisition_methods),
            ("json_requirement", &self.json_requirement),
            ("codegen_steps", &self.codegen_steps),
        ];
        for (name, value) in fields {
            if value.trim().is_empty() {
                return Err(KnowledgeError::Schema(format!("{kind}: empty {name}")));
            }
        }
        for s in &self.step3_substeps {
            if s.tag.trim().is_empty()
                || s.mandatory_info.trim().is_empty()
                || s.acquisition_methods.trim().is_empty()
            {
                return Err(KnowledgeError::Schema(format!(
                    "{kind}: incomplete step-3 sub-step {:?}",
                    s.tag
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    records: BTreeMap<DrawingKind, KnowledgeRecord>,
    pub source: Option<PathBuf>,
    pub loaded_at: SystemTime,
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.records == other.records
    }
}

impl KnowledgeBase {
    /// The knowledge shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED, None).expect("bundled knowledge base is valid")
    }

    pub fn load(path: &Path) -> Result<Self, KnowledgeError> {
        let text = std::fs::read_to_string(path).map_err(|source| KnowledgeError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, Some(path.to_path_buf()))
    }

    pub fn from_json(text: &str, source: Option<PathBuf>) -> Result<Self, KnowledgeError> {
        let raw: BTreeMap<String, KnowledgeRecord> =
            serde_json::from_str(text).map_err(|e| KnowledgeError::Schema(e.to_string()))?;
        let mut records = BTreeMap::new();
        for (name, record) in raw {
            let kind: DrawingKind = name
                .parse()
                .map_err(|_| KnowledgeError::Schema(format!("unknown drawing kind {name:?}")))?;
            record.check(kind)?;
            records.insert(kind, record);
        }
        for kind in DrawingKind::ALL {
            if !records.contains_key(&kind) {
                return Err(KnowledgeError::Schema(format!("missing entry for {kind}")));
            }
        }
        Ok(KnowledgeBase {
            records,
            source,
            loaded_at: SystemTime::now(),
        })
    }

    pub fn retrieve(&self, kind: DrawingKind) -> &KnowledgeRecord {
        &self.records[&kind]
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<&str, &KnowledgeRecord> =
            self.records.iter().map(|(k, v)| (k.as_str(), v)).collect();
        serde_json::to_string_pretty(&map).expect("records serialize")
    }
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        Self::bundled()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_records() {
        let kb = KnowledgeBase::bundled();
        let rc = kb.retrieve(DrawingKind::RectangularConcreteBeam);
        assert!(rc.useful_info.contains("Thinkness of clear cover"));
        let units = rc.codegen_steps.find("Set units").unwrap();
        let vertices = rc.codegen_steps.find("Create all vertices").unwrap();
        let sides = rc.codegen_steps.find("Draw four sides").unwrap();
        assert!(units < vertices && vertices < sides);
        assert!(rc.json_requirement.contains("Radius and Diameter of Stirrup"));
        assert_eq!(rc.step3_substeps.len(), 3);
        assert!(rc.step3_substeps[2].acquisition_methods.contains("Lext"));

        let steel = kb.retrieve(DrawingKind::SteelBeam);
        assert!(steel.codegen_steps.contains("PASTECLIP x_coordinate,y_coordinate "));
        assert!(steel.step3_substeps.is_empty());

        let precast = kb.retrieve(DrawingKind::PrecastBeam);
        assert!(precast.acquisition_methods.contains("[3,2], [5,2], [7,2]"));
    }

    #[test]
    fn missing_kind_and_empty_field() {
        let kb = KnowledgeBase::bundled();
        let mut v: serde_json::Value = serde_json::from_str(&kb.to_json()).unwrap();
        v.as_object_mut().unwrap().remove("precast beam cross-section");
        let err = KnowledgeBase::from_json(&v.to_string(), None).unwrap_err();
        assert!(err.to_string().contains("missing entry"), "{err}");

        let mut v: serde_json::Value = serde_json::from_str(&kb.to_json()).unwrap();
        v["steel beam cross-section"]["codegen_steps"] = "".into();
        assert!(matches!(
            KnowledgeBase::from_json(&v.to_string(), None),
            Err(KnowledgeError::Schema(_))
        ));
    }

    #[test]
    fn load_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("kb.json");
        std::fs::write(&path, KnowledgeBase::bundled().to_json()).unwrap();
        let a = KnowledgeBase::load(&path).unwrap();
        let b = KnowledgeBase::load(&path).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, KnowledgeBase::bundled());
        assert!(matches!(
            KnowledgeBase::load(&dir.path().join("absent.json")),
            Err(KnowledgeError::Io { .. })
        ));
    }
}
