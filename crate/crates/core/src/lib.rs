//! Structural drawing generation for beam cross-sections.

pub mod emit;
pub mod frontend;
pub mod geometry;
pub mod ir;
pub mod knowledge;
pub mod pipeline;
