//! Value grammar: lengths (`24in`, `600 mm`), bar schedules (`4 No 8`),
//! points (`(0, 0)`), counts (`3 layers`).

use std::sync::OnceLock;

use regex::Regex;

use crate::ir::{Point2, Unit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Length {
    pub value: f64,
    pub unit: Unit,
}

const NUM: &str = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)";

fn re(cell: &'static OnceLock<Regex>, pattern: impl FnOnce() -> String) -> &'static Regex {
    cell.get_or_init(|| Regex::new(&pattern()).expect("valid pattern"))
}

fn unit_of(s: &str) -> Option<Unit> {
    match s.to_ascii_lowercase().as_str() {
        "in" | "in." | "inch" | "inches" | "\"" => Some(Unit::Inch),
        "mm" | "millimeter" | "millimeters" | "millimetre" | "millimetres" => Some(Unit::Millimeter),
        _ => None,
    }
}

/// `<number><unit>` with units `in`/`mm` (long forms accepted).
pub fn parse_length(raw: &str) -> Option<Length> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = re(&CELL, || {
        format!(r#"(?i)^\s*({NUM})\s*(in\.?|inch(?:es)?|mm|millimet(?:er|re)s?|")\s*$"#)
    });
    let c = r.captures(raw)?;
    let value: f64 = c[1].parse().ok()?;
    Some(Length {
        value,
        unit: unit_of(&c[2])?,
    })
}

/// Length followed by free text, e.g. `No 4 at 5 in` -> the `5 in`.
pub fn find_length_after(raw: &str, word: &str) -> Option<Length> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = re(&CELL, || {
        format!(r#"(?i)\b(\w+)\s+({NUM})\s*(in\.?|inch(?:es)?|mm|millimet(?:er|re)s?|")"#)
    });
    r.captures_iter(raw)
        .find(|c| c[1].eq_ignore_ascii_case(word))
        .and_then(|c| {
            Some(Length {
                value: c[2].parse().ok()?,
                unit: unit_of(&c[3])?,
            })
        })
}

/// `<count> No <n>`; the count defaults to 1 when absent (`No 4`).
pub fn parse_bar_schedule(raw: &str) -> Option<(u32, i64)> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = re(&CELL, || {
        r"(?i)^\s*(?:(\d+)\s*(?:x|×)?\s*)?(?:No\.?|#)\s*(\d+)\b".to_string()
    });
    let c = r.captures(raw)?;
    let count = match c.get(1) {
        Some(m) => m.as_str().parse().ok()?,
        None => 1,
    };
    Some((count, c[2].parse().ok()?))
}

/// `(x, y)` or `[x, y]`, possibly preceded by a label.
pub fn parse_point(raw: &str) -> Option<Point2> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = re(&CELL, || {
        format!(r"[\(\[]\s*({NUM})\s*(?:in|mm)?\s*,\s*({NUM})\s*(?:in|mm)?\s*[\)\]]")
    });
    let c = r.captures(raw)?;
    Some(Point2::new(c[1].parse().ok()?, c[2].parse().ok()?))
}

/// Every `[x, y]` / `(x, y)` pair in `raw`, in order.
pub fn parse_points(raw: &str) -> Vec<Point2> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = re(&CELL, || format!(r"[\(\[]\s*({NUM})\s*,\s*({NUM})\s*[\)\]]"));
    r.captures_iter(raw)
        .filter_map(|c| Some(Point2::new(c[1].parse().ok()?, c[2].parse().ok()?)))
        .collect()
}

/// Leading integer of `3 layers`, `4`, `four`.
pub fn parse_count(raw: &str) -> Option<usize> {
    let first = raw.split_whitespace().next()?;
    if let Ok(n) = first.trim_end_matches(|c: char| !c.is_ascii_digit()).parse() {
        return Some(n);
    }
    const WORDS: [&str; 13] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
        "eleven", "twelve",
    ];
    WORDS
        .iter()
        .position(|w| first.eq_ignore_ascii_case(w))
}

/// `24x14in` -> (24, 14, Inch).
pub fn parse_dimensions(raw: &str) -> Option<(f64, f64, Unit)> {
    static CELL: OnceLock<Regex> = OnceLock::new();
    let r = re(&CELL, || {
        format!(r#"(?i)^\s*({NUM})\s*(?:in|mm)?\s*(?:x|×|by)\s*({NUM})\s*(in\.?|inch(?:es)?|mm|millimet(?:er|re)s?|")\s*$"#)
    });
    let c = r.captures(raw)?;
    Some((c[1].parse().ok()?, c[2].parse().ok()?, unit_of(&c[3])?))
}

/// Shortest text that parses back to the same number.
pub fn fmt_exact(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    format!("{v}")
}
