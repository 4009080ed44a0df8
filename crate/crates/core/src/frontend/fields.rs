//! The bullet-list field format: `- Name: Value`, with one level of nested
//! sub-bullets.

use std::fmt::Write;

use super::FrontendError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    pub value: String,
    pub children: Vec<Field>,
}

impl Field {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        Field {
            name: name.into(),
            value: value.into(),
            children: Vec::new(),
        }
    }

    pub fn with_children(name: impl Into<String>, children: Vec<Field>) -> Self {
        Field {
            name: name.into(),
            value: String::new(),
            children,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldBlock {
    pub fields: Vec<Field>,
}

impl FieldBlock {
    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// Case-insensitive exact lookup at the top level.
    pub fn get(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.name.eq_ignore_ascii_case(name))
    }

    /// First top-level field whose name satisfies `pred` (lowercased name).
    pub fn find(&self, pred: impl Fn(&str) -> bool) -> Option<&Field> {
        self.fields.iter().find(|f| pred(&f.name.to_ascii_lowercase()))
    }
}

fn indent_of(line: &str) -> usize {
    line.chars()
        .take_while(|c| c.is_whitespace())
        .map(|c| if c == '\t' { 4 } else { 1 })
        .sum()
}

fn bullet_body(trimmed: &str) -> Option<&str> {
    ["- ", "* ", "• "]
        .iter()
        .find_map(|b| trimmed.strip_prefix(b))
        .or_else(|| (trimmed == "-").then_some(""))
}

fn split_pair(body: &str) -> Option<(String, String)> {
    let (name, value) = body.split_once(':')?;
    let name = name.trim();
    if name.is_empty() {
        return None;
    }
    Some((name.to_string(), value.trim().to_string()))
}

fn check_level(fields: &[Field]) -> Result<(), FrontendError> {
    for (i, f) in fields.iter().enumerate() {
        if fields[..i].iter().any(|g| g.name.eq_ignore_ascii_case(&f.name)) {
            return Err(FrontendError::DuplicateField(f.name.clone()));
        }
        if f.value.is_empty() && f.children.is_empty() {
            return Err(FrontendError::EmptyValue(f.name.clone()));
        }
    }
    Ok(())
}

fn parse(text: &str, loose: bool) -> Result<FieldBlock, FrontendError> {
    let mut fields: Vec<Field> = Vec::new();
    let mut parent_indent: Option<usize> = None;
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = indent_of(line);
        let (body, is_bullet) = match bullet_body(trimmed) {
            Some(b) => (b, true),
            None if loose && indent == 0 => (trimmed, false),
            None => continue,
        };
        let Some((name, value)) = split_pair(body) else {
            continue;
        };
        let nested = is_bullet
            && matches!(parent_indent, Some(p) if indent > p)
            && !fields.is_empty();
        if nested {
            fields
                .last_mut()
                .expect("checked non-empty")
                .children
                .push(Field::new(name, value));
        } else {
            parent_indent = Some(indent);
            fields.push(Field::new(name, value));
        }
    }
    check_level(&fields)?;
    for f in &fields {
        for c in &f.children {
            if c.value.is_empty() {
                return Err(FrontendError::EmptyValue(c.name.clone()));
            }
        }
        check_level(&f.children)?;
    }
    Ok(FieldBlock { fields })
}

/// Parse `- Name: Value` lines; everything else is ignored.
pub fn parse_fields(text: &str) -> Result<FieldBlock, FrontendError> {
    parse(text, false)
}

/// Like [`parse_fields`] but also accepts unbulleted `Name: Value` lines.
pub fn parse_fields_loose(text: &str) -> Result<FieldBlock, FrontendError> {
    parse(text, true)
}

/// Canonical bullet text.
pub fn render(block: &FieldBlock) -> String {
    let mut out = String::new();
    for f in &block.fields {
        if f.value.is_empty() {
            let _ = writeln!(out, "- {}:", f.name);
        } else {
            let _ = writeln!(out, "- {}: {}", f.name, f.value);
        }
        for c in &f.children {
            let _ = writeln!(out, "    - {}: {}", c.name, c.value);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE2_STEP2: &str = "- Type of Structure: rectangular concrete beam cross-section
- Height of cross-section: 24in
- Width of cross-section: 14in
- Number of rebars: 3 layers
- Rebar information:
    - Top layer: 4 No 8
    - Middle layer: 2 No 4
    - Bottom layer: 2 No 4
- Stirrup information: No 4
- Thickness of clear cover: 2in
";

    #[test]
    fn nested_block() {
        let b = parse_fields(TABLE2_STEP2).unwrap();
        assert_eq!(b.fields.len(), 7);
        assert_eq!(b.get("height of cross-section").unwrap().value, "24in");
        let rebar = b.get("Rebar information").unwrap();
        assert_eq!(rebar.children[0], Field::new("Top layer", "4 No 8"));
        assert_eq!(rebar.children.len(), 3);
        assert_eq!(render(&b), TABLE2_STEP2);
    }

    #[test]
    fn duplicates_and_empties() {
        assert_eq!(
            parse_fields("- A: 1\n- A: 2"),
            Err(FrontendError::DuplicateField("A".into()))
        );
        assert_eq!(
            parse_fields("- A:\n- B: 2"),
            Err(FrontendError::EmptyValue("A".into()))
        );
        assert!(parse_fields("Just some prose.\nNo bullets: here").unwrap().is_empty());
    }

    #[test]
    fn value_keeps_later_colons() {
        let b = parse_fields("- Position: Bottom Left Vertex: (0, 0)").unwrap();
        assert_eq!(b.fields[0].value, "Bottom Left Vertex: (0, 0)");
    }

    #[test]
    fn loose_lines() {
        let b = parse_fields_loose(
            "Type of Steel Beam Cross-section: W1100X390\nCoordinate of Bottom Left of the Cross-section: (0, 0)",
        )
        .unwrap();
        assert_eq!(b.fields.len(), 2);
        assert_eq!(b.fields[0].value, "W1100X390");
    }

    #[test]
    fn render_is_a_fixed_point() {
        let b = parse_fields(TABLE2_STEP2).unwrap();
        let again = parse_fields(&render(&b)).unwrap();
        assert_eq!(again, b);
        assert_eq!(render(&again), render(&b));
    }
}
