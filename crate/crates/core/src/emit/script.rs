//! pyautocad script text.

use std::fmt::Write;
use std::sync::OnceLock;

use regex::Regex;

use crate::geometry::{PrecastCatalog, DEFAULT_STRAND_RADIUS};
use crate::ir::{fmt_num, DrawingIr, Payload, Point2, Segment};

use super::EmitError;

const STEEL_FOLDER: &str = "steelBeamDrawingSet";
const PRECAST_FOLDER: &str = "Preset_Prestressed_Concrete";

fn apoint(p: Point2) -> String {
    format!("APoint({}, {})", fmt_num(p.x), fmt_num(p.y))
}

fn add_line(s: &Segment) -> String {
    format!("acad.model.AddLine({}, {})", apoint(s.end1), apoint(s.end2))
}

fn py_str(s: &str) -> String {
    format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
}

/// Source folder named in the codegen steps' first path command.
fn source_folder(codegen_steps: &str, fallback: &str) -> String {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"os\.path\.join\(os\.getcwd\(\),\s*'([^']+)',\s*'[^']+'\)").expect("static regex")
    });
    re.captures(codegen_steps)
        .map(|c| c[1].to_string())
        .unwrap_or_else(|| fallback.to_string())
}

/// Block of `"name": value` entries.
fn dict(out: &mut String, var: &str, items: &[(&str, String)]) {
    let _ = writeln!(out, "{var} = {{");
    for (i, (k, v)) in items.iter().enumerate() {
        let comma = if i + 1 < items.len() { "," } else { "" };
        let _ = writeln!(out, "    \"{k}\": {v}{comma}");
    }
    out.push_str("}\n\n");
}

fn paste_sequence(out: &mut String, folder: &str, file: &str, at: Point2, comments: bool) {
    let c = |out: &mut String, text: &str| {
        if comments {
            let _ = writeln!(out, "# {text}");
        }
    };
    c(out, "Source drawing");
    let _ = writeln!(
        out,
        "source_file_path = os.path.join(os.getcwd(), {}, {})",
        py_str(folder),
        py_str(&format!("{file}.dwg"))
    );
    out.push_str("source_document = acad.app.Documents.Open(source_file_path)\n");
    out.push_str("time.sleep(1)\n");
    out.push_str("acad.app.ActiveDocument = source_document\n");
    out.push_str("acad.app.ActiveDocument.SendCommand('SELECT ALL  ')\n");
    out.push_str("acad.app.ActiveDocument.SendCommand('COPYCLIP ')\n\n");
    c(out, "Target drawing");
    out.push_str("target_file = os.path.join(os.getcwd(), 'targetfile.dwg')\n");
    out.push_str("target_document = acad.app.Documents.Open(target_file)\n");
    out.push_str("acad.app.ActiveDocument = target_document\n");
    let _ = writeln!(
        out,
        "acad.app.ActiveDocument.SendCommand('PASTECLIP {},{} ')\n",
        fmt_num(at.x),
        fmt_num(at.y)
    );
    out.push_str("source_document.Close()\n");
}

/// Script text for a drawing, following the per-kind command order of the
/// codegen steps. Uses the bundled precast catalog for template names.
pub fn emit_script(ir: &DrawingIr, codegen_steps: &str) -> Result<String, EmitError> {
    emit_script_with(ir, codegen_steps, &PrecastCatalog::bundled())
}

pub fn emit_script_with(
    ir: &DrawingIr,
    codegen_steps: &str,
    catalog: &PrecastCatalog,
) -> Result<String, EmitError> {
    let mut out = String::new();
    match &ir.payload {
        Payload::Rc(rc) => {
            out.push_str("from pyautocad import Autocad, APoint\nfrom math import radians\n\n");
            out.push_str("acad = Autocad()\n");
            let _ = writeln!(out, "acad.doc.SetVariable('INSUNITS', {})\n", ir.unit.insunits_code());
            let v = &rc.vertices;
            dict(
                &mut out,
                "vertices",
                &[
                    ("bottom_left", apoint(v.bottom_left)),
                    ("top_left", apoint(v.top_left)),
                    ("top_right", apoint(v.top_right)),
                    ("bottom_right", apoint(v.bottom_right)),
                ],
            );
            let s = &rc.sides;
            dict(
                &mut out,
                "sides",
                &[
                    ("left", add_line(&s.left)),
                    ("top", add_line(&s.top)),
                    ("right", add_line(&s.right)),
                    ("bottom", add_line(&s.bottom)),
                ],
            );
            out.push_str("rebars = [\n");
            let n = rc.rebar_centers.len();
            for (i, (c, r)) in rc.rebar_centers.iter().zip(&rc.rebar_radii).enumerate() {
                let comma = if i + 1 < n { "," } else { "" };
                let _ = writeln!(out, "    acad.model.AddCircle({}, {}){comma}", apoint(*c), fmt_num(*r));
            }
            out.push_str("]\n\n");
            let names = ["L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8"];
            let lines: Vec<(&str, String)> = names
                .iter()
                .zip(&rc.stirrup_lines)
                .map(|(n, s)| (*n, add_line(s)))
                .collect();
            dict(&mut out, "stirrup_lines", &lines);
            let arcs: Vec<(&str, String)> = ["A1", "A2", "A3", "A4"]
                .iter()
                .zip(&rc.stirrup_arcs)
                .map(|(n, a)| {
                    (
                        *n,
                        format!(
                            "acad.model.AddArc({}, {}, radians({}), radians({}))",
                            apoint(a.center),
                            fmt_num(a.radius),
                            fmt_num(a.start_angle),
                            fmt_num(a.end_angle)
                        ),
                    )
                })
                .collect();
            dict(&mut out, "stirrup_arcs", &arcs);
            let hooks: Vec<(&str, String)> = ["Lh1", "Lh2", "Lh3", "Lh4", "Lh5", "Lh6"]
                .iter()
                .zip(&rc.hook_lines)
                .map(|(n, s)| (*n, add_line(s)))
                .collect();
            dict(&mut out, "stirrup_hooks", &hooks);
        }
        Payload::Steel(st) => {
            out.push_str("import pyautocad\nimport os\nimport time\n\nacad = pyautocad.Autocad()\n\n");
            let folder = source_folder(codegen_steps, STEEL_FOLDER);
            paste_sequence(&mut out, &folder, st.section_type.trim(), st.bottom_left, false);
        }
        Payload::Precast(p) => {
            out.push_str("from pyautocad import Autocad, APoint\nimport os\nimport time\n\nacad = Autocad()\n\n");
            let folder = source_folder(codegen_steps, PRECAST_FOLDER);
            let entry = catalog.get(&p.section_type);
            let file = entry.map_or_else(|| p.section_type.trim().to_string(), |e| e.template.clone());
            let radius = entry.map_or(DEFAULT_STRAND_RADIUS, |e| e.strand_radius);
            paste_sequence(&mut out, &folder, &file, p.bottom_left, true);
            let coords: Vec<String> = p
                .strand_centers
                .iter()
                .map(|c| format!("[{}, {}]", fmt_num(c.x), fmt_num(c.y)))
                .collect();
            out.push_str("\n# Strands\n");
            let _ = writeln!(out, "strand_coordinates = [{}]", coords.join(", "));
            out.push_str("for coord in strand_coordinates:\n");
            out.push_str("    center = APoint(coord[0], coord[1])\n");
            let _ = writeln!(out, "    acad.model.AddCircle(center, {})", fmt_num(radius));
        }
    }
    if let Some(path) = ir.save.path() {
        let trimmed = out.trim_end().to_string();
        out = trimmed;
        let _ = write!(out, "\n\nacad.doc.SaveAs({})\n", py_str(path));
    } else {
        let trimmed = out.trim_end().to_string();
        out = trimmed;
        out.push('\n');
    }
    Ok(out)
}
