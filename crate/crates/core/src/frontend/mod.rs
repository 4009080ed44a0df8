//! Structured front-end: bullet-form descriptions to section specs.

mod fields;
mod spec;
mod values;

pub use fields::{parse_fields, parse_fields_loose, render, Field, FieldBlock};
pub use spec::{fields_to_spec, infer_kind, parse_other_info, render_spec, OtherInfo};
pub use values::{
    fmt_exact, parse_bar_schedule, parse_count, parse_length, parse_point, parse_points, Length,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrontendError {
    #[error("duplicate field {0:?}")]
    DuplicateField(String),
    #[error("field {0:?} has no value")]
    EmptyValue(String),
    #[error("missing mandatory information: {}", .0.join(", "))]
    MissingMandatory(Vec<String>),
    #[error("cannot parse {name:?} value {raw:?}")]
    UnparsableQuantity { name: String, raw: String },
    #[error("mixed units: {0}")]
    MixedUnits(String),
    #[error("{declared} rebar layers declared but {found} described")]
    InconsistentLayers { declared: usize, found: usize },
    #[error("unsupported reference point {0:?}: only the bottom-left corner can be given")]
    UnsupportedReference(String),
}
