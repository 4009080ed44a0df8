//! Prompt templates with `{name}` placeholders; `{{` and `}}` are literal
//! braces.

use std::collections::BTreeMap;
use std::path::Path;

const BUNDLED: [&str; 6] = [
    include_str!("../../data/prompts/step1.txt"),
    include_str!("../../data/prompts/step2.txt"),
    include_str!("../../data/prompts/step3.txt"),
    include_str!("../../data/prompts/step4.txt"),
    include_str!("../../data/prompts/step5.txt"),
    include_str!("../../data/prompts/step6.txt"),
];

/// Placeholders each step's template must contain.
pub const PLACEHOLDERS: [&[&str]; 6] = [
    &["description"],
    &["useful_info", "description"],
    &["Mandatory_Info", "background_sd", "Input"],
    &["description"],
    &["JSON_Requirement", "Input_Info"],
    &["steps", "JSON_file"],
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("no binding for placeholder {{{0}}}")]
    MissingBinding(String),
    #[error("unknown placeholder {{{0}}}")]
    UnknownPlaceholder(String),
    #[error("template for step {step} lacks placeholder {{{name}}}")]
    MissingPlaceholder { step: u8, name: String },
    #[error("no template for step {0}")]
    UnknownStep(u8),
    #[error("cannot read template {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Text(String),
    Slot(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub step: u8,
    pub body: String,
    pieces: Vec<Piece>,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn tokenize(body: &str) -> Vec<Piece> {
    let mut pieces = Vec::new();
    let mut text = String::new();
    let mut rest = body;
    while let Some(i) = rest.find(['{', '}']) {
        text.push_str(&rest[..i]);
        let tail = &rest[i..];
        if tail.starts_with("{{") || tail.starts_with("}}") {
            text.push_str(&tail[..1]);
            rest = &tail[2..];
            continue;
        }
        if tail.starts_with('{') {
            if let Some(end) = tail.find('}') {
                let name = &tail[1..end];
                if is_ident(name) {
                    if !text.is_empty() {
                        pieces.push(Piece::Text(std::mem::take(&mut text)));
                    }
                    pieces.push(Piece::Slot(name.to_string()));
                    rest = &tail[end + 1..];
                    continue;
                }
            }
        }
        text.push_str(&tail[..1]);
        rest = &tail[1..];
    }
    text.push_str(rest);
    if !text.is_empty() {
        pieces.push(Piece::Text(text));
    }
    pieces
}

impl PromptTemplate {
    /// Parse and check the placeholder set against the step's contract.
    pub fn new(step: u8, body: impl Into<String>) -> Result<Self, TemplateError> {
        let body = body.into();
        let expected = *PLACEHOLDERS
            .get((step as usize).wrapping_sub(1))
            .ok_or(TemplateError::UnknownStep(step))?;
        let pieces = tokenize(&body);
        let t = PromptTemplate { step, body, pieces };
        let names = t.placeholders();
        if let Some(n) = names.iter().find(|n| !expected.contains(&n.as_str())) {
            return Err(TemplateError::UnknownPlaceholder(n.clone()));
        }
        if let Some(n) = expected.iter().find(|n| !names.iter().any(|m| m == *n)) {
            return Err(TemplateError::MissingPlaceholder {
                step,
                name: n.to_string(),
            });
        }
        Ok(t)
    }

    /// Distinct placeholder names in order of first appearance.
    pub fn placeholders(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for p in &self.pieces {
            if let Piece::Slot(n) = p {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
        }
        out
    }

    pub fn render(&self, bindings: &BTreeMap<&str, String>) -> Result<String, TemplateError> {
        let names = self.placeholders();
        if let Some(extra) = bindings.keys().find(|k| !names.iter().any(|n| n == *k)) {
            return Err(TemplateError::UnknownPlaceholder(extra.to_string()));
        }
        let mut out = String::with_capacity(self.body.len());
        for p in &self.pieces {
            match p {
                Piece::Text(t) => out.push_str(t),
                Piece::Slot(n) => out.push_str(
                    bindings
                        .get(n.as_str())
                        .ok_or_else(|| TemplateError::MissingBinding(n.clone()))?,
                ),
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper over [`PromptTemplate::render`].
pub fn render_prompt(
    template: &PromptTemplate,
    bindings: &[(&str, &str)],
) -> Result<String, TemplateError> {
    let map = bindings.iter().map(|(k, v)| (*k, v.to_string())).collect();
    template.render(&map)
}

/// The six step templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    templates: Vec<PromptTemplate>,
}

impl PromptSet {
    pub fn bundled() -> Self {
        PromptSet {
            templates: BUNDLED
                .iter()
                .enumerate()
                .map(|(i, b)| PromptTemplate::new(i as u8 + 1, *b).expect("bundled template"))
                .collect(),
        }
    }

    /// Bundled templates, replaced by any `stepN.txt` found in `dir`.
    pub fn with_overrides(dir: &Path) -> Result<Self, TemplateError> {
        let mut set = Self::bundled();
        for step in 1..=6u8 {
            let path = dir.join(format!("step{step}.txt"));
            if path.exists() {
                let body = std::fs::read_to_string(&path).map_err(|e| TemplateError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                set.templates[step as usize - 1] = PromptTemplate::new(step, body)?;
            }
        }
        Ok(set)
    }

    pub fn get(&self, step: u8) -> Result<&PromptTemplate, TemplateError> {
        self.templates
            .get((step as usize).wrapping_sub(1))
            .ok_or(TemplateError::UnknownStep(step))
    }
}

impl Default for PromptSet {
    fn default() -> Self {
        Self::bundled()
    }
}
