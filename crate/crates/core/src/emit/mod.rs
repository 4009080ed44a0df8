//! Drawing back-ends: DXF entities and automation-script text.

mod dxf;
mod entities;
mod script;
mod templates;

pub use dxf::{emit_dxf, parse_dxf, DxfDocument};
pub use entities::{ir_to_entities, Entity, EntityList};
pub use script::{emit_script, emit_script_with};
pub use templates::{load_template, TemplateLibrary};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmitError {
    #[error("no drawing template for section {0:?}")]
    TemplateNotFound(String),
    #[error("template {name}: {message}")]
    TemplateParseError { name: String, message: String },
    #[error("unsupported drawing kind: {0}")]
    UnsupportedKind(String),
    #[error("nothing to draw")]
    Empty,
}
