//! Per-step accuracy harness over a corpus of described sections.
//!
//! A corpus directory holds one sub-directory per case with
//! `description.txt`, `fields.txt` (the expected step-2 fields plus `Save`
//! and `Unit` lines), `case.json` (`kind`, `unit`, `save`) and optionally
//! `replay.json`, the reference transcript.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Deserialize;

use crate::frontend::{fields_to_spec, parse_fields, parse_fields_loose, parse_other_info};
use crate::geometry::{resolve, verify_ir, SectionSpec};
use crate::ir::{parse_ir, DrawingIr, DrawingKind, SaveTarget, Unit};

use super::checks::{check_script, check_step3};
use super::provider::{Provider, ReplayProvider, StepKey};
use super::run::{parse_kind, spec_unit, Pipeline, PipelineRun, StepTranscript, Upstream};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("case {case}: {message}")]
    Case { case: String, message: String },
    #[error("corpus {0} has no cases")]
    Empty(PathBuf),
}

#[derive(Debug, Deserialize)]
struct CaseFile {
    kind: String,
    #[serde(default)]
    unit: Option<String>,
    #[serde(default)]
    save: Option<serde_json::Value>,
}

#[derive(Debug, Clone)]
pub struct EvalCase {
    pub name: String,
    pub description: String,
    pub kind: DrawingKind,
    pub spec: SectionSpec,
    pub unit: Unit,
    pub save: SaveTarget,
    pub expected: DrawingIr,
    /// Clean run used as upstream input in isolated mode.
    pub reference: Option<PipelineRun>,
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|e| EvalError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

impl EvalCase {
    pub fn load(dir: &Path, pipeline: &Pipeline) -> Result<Self, EvalError> {
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let err = |m: String| EvalError::Case {
            case: name.clone(),
            message: m,
        };
        let case: CaseFile =
            serde_json::from_str(&read(&dir.join("case.json"))?).map_err(|e| err(e.to_string()))?;
        let kind: DrawingKind = case.kind.parse().map_err(|_| err(format!("unknown kind {:?}", case.kind)))?;
        let block = parse_fields(&read(&dir.join("fields.txt"))?).map_err(|e| err(e.to_string()))?;
        let spec = fields_to_spec(&block, kind).map_err(|e| err(e.to_string()))?;
        let other = parse_other_info(&block).map_err(|e| err(e.to_string()))?;
        let unit = match case.unit {
            Some(u) => u.parse().map_err(|e: String| err(e))?,
            None => spec_unit(&spec, other.unit),
        };
        let save = match case.save {
            None | Some(serde_json::Value::Bool(false)) | Some(serde_json::Value::Null) => SaveTarget::NoSave,
            Some(serde_json::Value::String(p)) => SaveTarget::Path(p),
            Some(v) => return Err(err(format!("bad save value {v}"))),
        };
        let expected =
            resolve(&spec, &pipeline.catalog, unit, save.clone()).map_err(|e| err(e.to_string()))?;
        let description = read(&dir.join("description.txt"))?.trim().to_string();
        let replay = dir.join("replay.json");
        let reference = if replay.exists() {
            let provider = ReplayProvider::load(&replay).map_err(|e| err(e.to_string()))?;
            Some(pipeline.run(&description, &provider))
        } else {
            None
        };
        Ok(EvalCase {
            name,
            description,
            kind,
            spec,
            unit,
            save,
            expected,
            reference,
        })
    }

    /// Whether a step transcript fulfils its task for this case.
    pub fn judge(&self, t: &StepTranscript, pipeline: &Pipeline) -> bool {
        let Some(result) = t.result.as_deref().filter(|_| t.is_ok()) else {
            return false;
        };
        let tol = pipeline.tolerance;
        match t.step {
            1 => parse_kind(result) == Ok(self.kind),
            2 => parse_fields_loose(result)
                .ok()
                .and_then(|b| fields_to_spec(&b, self.kind).ok())
                .is_some_and(|s| s == self.spec),
            3 => check_step3(&t.tag(), result, &self.expected, &pipeline.catalog, tol).is_empty(),
            4 => parse_fields_loose(result)
                .ok()
                .and_then(|b| parse_other_info(&b).ok())
                .is_some_and(|o| o.save == self.save && o.unit == Some(self.unit)),
            5 => parse_ir(result).is_ok_and(|ir| {
                ir.unit == self.unit
                    && ir.save == self.save
                    && verify_ir(&ir, &self.spec, &pipeline.catalog, tol).is_ok_and(|r| r.is_empty())
            }),
            6 => check_script(result, &self.expected, &pipeline.catalog, tol).is_empty(),
            _ => false,
        }
    }
}

/// Loads every case directory under `dir`, sorted by name.
pub fn load_corpus(dir: &Path, pipeline: &Pipeline) -> Result<Vec<EvalCase>, EvalError> {
    let rd = fs::read_dir(dir).map_err(|e| EvalError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    })?;
    let mut dirs: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join("case.json").is_file())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        return Err(EvalError::Empty(dir.to_path_buf()));
    }
    dirs.iter().map(|d| EvalCase::load(d, pipeline)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Each step gets the reference run's upstream results, so steps are
    /// scored independently.
    #[default]
    Isolated,
    /// Full chained runs; steps after a failure count as failed.
    Chained,
}

impl std::str::FromStr for EvalMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "isolated" => Ok(EvalMode::Isolated),
            "chained" => Ok(EvalMode::Chained),
            _ => Err(format!("unknown eval mode {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Cell {
    pub successes: usize,
    pub trials: usize,
}

impl Cell {
    pub fn accuracy(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

/// Success counts per drawing kind and step tag.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AccuracyTable {
    pub rows: BTreeMap<DrawingKind, Vec<(String, Cell)>>,
}

impl AccuracyTable {
    pub fn cell(&self, kind: DrawingKind, tag: &str) -> Option<Cell> {
        self.rows
            .get(&kind)?
            .iter()
            .find(|(t, _)| t == tag)
            .map(|(_, c)| *c)
    }

    fn record(&mut self, kind: DrawingKind, tag: &str, ok: bool) {
        let row = self.rows.entry(kind).or_default();
        let i = match row.iter().position(|(t, _)| t == tag) {
            Some(i) => i,
            None => {
                row.push((tag.to_string(), Cell::default()));
                row.len() - 1
            }
        };
        row[i].1.trials += 1;
        row[i].1.successes += usize::from(ok);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,step,successes,trials,accuracy\n");
        for (kind, row) in &self.rows {
            for (tag, c) in row {
                out.push_str(&format!(
                    "{},{},{},{},{:.4}\n",
                    kind.as_str(),
                    tag,
                    c.successes,
                    c.trials,
                    c.accuracy()
                ));
            }
        }
        out
    }

    /// All cells at 100%.
    pub fn is_perfect(&self) -> bool {
        self.rows
            .values()
            .flatten()
            .all(|(_, c)| c.trials > 0 && c.successes == c.trials)
    }
}

impl fmt::Display for AccuracyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<42} {:>6} {:>6} {:>20} {:>6} {:>6} {:>6}", "drawing", "1", "2", "3", "4", "5", "6")?;
        let pct = |c: &Cell| format!("{:.0}%", c.accuracy() * 100.0);
        for (kind, row) in &self.rows {
            let get = |tag: &str| row.iter().find(|(t, _)| t == tag).map(|(_, c)| pct(c)).unwrap_or_else(|| "-".into());
            let threes: Vec<String> = row
                .iter()
                .filter(|(t, _)| t == "3" || t.starts_with("3-"))
                .map(|(_, c)| pct(c))
                .collect();
            writeln!(
                f,
                "{:<42} {:>6} {:>6} {:>20} {:>6} {:>6} {:>6}",
                kind.as_str(),
                get("1"),
                get("2"),
                threes.join(", "),
                get("4"),
                get("5"),
                get("6")
            )?;
        }
        Ok(())
    }
}

fn trial_outcomes(
    case: &EvalCase,
    trial: usize,
    provider: &dyn Provider,
    pipeline: &Pipeline,
    mode: EvalMode,
) -> Vec<(String, bool)> {
    let plan = pipeline.plan(case.kind);
    let reference = case.reference.as_ref().filter(|r| r.completed());
    match (mode, reference) {
        (EvalMode::Isolated, Some(reference)) => {
            let up = Upstream::from_run(reference);
            plan.iter()
                .map(|key| {
                    let kind = (key.step > 1).then_some(case.kind);
                    let ok = pipeline
                        .run_step(key, kind, &up, provider, trial)
                        .is_ok_and(|t| case.judge(&t, pipeline));
                    (key.tag(), ok)
                })
                .collect()
        }
        _ => {
            let run = pipeline.run_trial(&case.description, provider, trial);
            plan.iter()
                .map(|key: &StepKey| {
                    let ok = run
                        .transcript(&key.tag())
                        .is_some_and(|t| case.judge(t, pipeline));
                    (key.tag(), ok)
                })
                .collect()
        }
    }
}

/// Pass/fail per step tag for one trial.
type StepOutcomes = Vec<(String, bool)>;

/// Scores every step of every case over `trials` trials, using up to `jobs`
/// threads. Results are reduced in (case, trial) order.
pub fn evaluate(
    cases: &[EvalCase],
    trials: usize,
    provider: &dyn Provider,
    pipeline: &Pipeline,
    mode: EvalMode,
    jobs: usize,
) -> AccuracyTable {
    let work: Vec<(usize, usize)> = (0..cases.len())
        .flat_map(|c| (0..trials).map(move |t| (c, t)))
        .collect();
    let slots: Mutex<Vec<Option<StepOutcomes>>> = Mutex::new(vec![None; work.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, work.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(c, t)) = work.get(i) else { break };
                let r = trial_outcomes(&cases[c], t, provider, pipeline, mode);
                slots.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    let mut table = AccuracyTable::default();
    let slots = slots.into_inner().expect("no poisoned workers");
    for (&(c, _), r) in work.iter().zip(slots) {
        for (tag, ok) in r.unwrap_or_default() {
            table.record(cases[c].kind, &tag, ok);
        }
    }
    table
}
