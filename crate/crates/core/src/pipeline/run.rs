//! Step execution and the full chain.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::frontend::{fields_to_spec, parse_fields_loose, parse_other_info, OtherInfo};
use crate::geometry::{resolve, verify_ir, GeometryError, Mismatch, PrecastCatalog, SectionSpec, VerifyReport};
use crate::ir::{parse_ir, to_value, DrawingIr, DrawingKind, SaveTarget, Unit};
use crate::knowledge::KnowledgeBase;

use super::calc::{calc_text, CalcOp};
use super::checks::check_step3;
use super::extract::extract_result;
use super::provider::{
    prompt_hash, CompletionRequest, Provider, ProviderConfig, ProviderError, ReplayEntry, Reply,
    Role, StepKey, ToolExchange, ToolRecord, ToolSpec,
};
use super::template::{PromptSet, TemplateError};

pub const DEFAULT_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    ExtractionFailed,
    ProviderError,
    /// A result was extracted but cannot be used (unknown kind, invalid IR).
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolCall {
    pub name: String,
    pub args: Vec<f64>,
    pub result: String,
    pub error: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepTranscript {
    pub step: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub_step: Option<String>,
    pub role: Role,
    pub model: String,
    pub prompt: String,
    /// Final completion text of each attempt.
    pub completions: Vec<String>,
    pub tool_calls: Vec<ToolCall>,
    /// Present iff the outcome is ok.
    pub result: Option<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl StepTranscript {
    pub fn key(&self) -> StepKey {
        StepKey {
            step: self.step,
            sub_step: self.sub_step.clone(),
        }
    }

    pub fn tag(&self) -> String {
        self.key().tag()
    }

    pub fn is_ok(&self) -> bool {
        self.outcome == Outcome::Ok
    }

    fn reject(&mut self, why: String) {
        self.outcome = Outcome::Rejected;
        self.error = Some(match self.result.take() {
            Some(r) => format!("{why}; result was: {r}"),
            None => why,
        });
    }
}

fn ser_ir<S: Serializer>(ir: &Option<DrawingIr>, s: S) -> Result<S::Ok, S::Error> {
    ir.as_ref().map(to_value).serialize(s)
}

fn ser_kind<S: Serializer>(kind: &Option<DrawingKind>, s: S) -> Result<S::Ok, S::Error> {
    kind.map(|k| k.as_str()).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PipelineRun {
    pub description: String,
    #[serde(serialize_with = "ser_kind")]
    pub kind: Option<DrawingKind>,
    pub transcripts: Vec<StepTranscript>,
    #[serde(serialize_with = "ser_ir")]
    pub ir: Option<DrawingIr>,
    pub script: Option<String>,
    pub verify: Option<VerifyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_error: Option<String>,
    /// Step-3 values that disagree with the resolver, by sub-step tag.
    pub step3_issues: BTreeMap<String, Vec<String>>,
    /// Configuration error that prevented the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PipelineRun {
    pub fn completed(&self) -> bool {
        self.error.is_none()
            && self.script.is_some()
            && self.transcripts.iter().all(StepTranscript::is_ok)
    }

    /// All steps ok and the final drawing matches the resolver.
    pub fn succeeded(&self) -> bool {
        self.completed() && self.verify.as_ref().is_some_and(VerifyReport::is_empty)
    }

    pub fn failed_step(&self) -> Option<&StepTranscript> {
        self.transcripts.iter().find(|t| !t.is_ok())
    }

    pub fn transcript(&self, tag: &str) -> Option<&StepTranscript> {
        self.transcripts.iter().find(|t| t.tag() == tag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run serializes")
    }

    /// Transcript in replay form, for recording live runs.
    pub fn to_replay(&self) -> Vec<ReplayEntry> {
        self.transcripts
            .iter()
            .filter_map(|t| {
                Some(ReplayEntry {
                    step: t.step,
                    sub_step: t.sub_step.clone(),
                    prompt_hash: prompt_hash(&t.prompt),
                    completion: t.completions.last()?.clone(),
                    tool_calls: t
                        .tool_calls
                        .iter()
                        .map(|c| ToolRecord {
                            name: c.name.clone(),
                            args: c.args.clone(),
                            result: c.result.clone(),
                        })
                        .collect(),
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("empty description")]
    EmptyDescription,
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Provider(#[from] ProviderError),
}

/// Identify the drawing kind in a step-1 result.
pub fn parse_kind(result: &str) -> Result<DrawingKind, String> {
    let lower = result.to_ascii_lowercase();
    let anchor = "the type of structural drawing is:";
    let text = match lower.rfind(anchor) {
        Some(i) => &lower[i + anchor.len()..],
        None => &lower[..],
    };
    let found: Vec<DrawingKind> = DrawingKind::ALL
        .into_iter()
        .filter(|k| text.contains(k.as_str()))
        .collect();
    match found.as_slice() {
        [k] => Ok(*k),
        [] => Err(format!("no known drawing kind in {:?}", result.trim())),
        _ => Err(format!("several drawing kinds in {:?}", result.trim())),
    }
}

/// Results of earlier steps by tag, plus the user description.
#[derive(Debug, Clone, Default)]
pub struct Upstream {
    pub description: String,
    pub results: BTreeMap<String, String>,
}

impl Upstream {
    fn get(&self, tag: &str) -> String {
        self.results.get(tag).cloned().unwrap_or_default()
    }

    /// Upstream values taken from a finished run.
    pub fn from_run(run: &PipelineRun) -> Self {
        Upstream {
            description: run.description.clone(),
            results: run
                .transcripts
                .iter()
                .filter_map(|t| Some((t.tag(), t.result.clone()?)))
                .collect(),
        }
    }
}

/// Prompts, knowledge, catalog and provider settings for running the chain.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub kb: KnowledgeBase,
    pub prompts: PromptSet,
    pub catalog: PrecastCatalog,
    pub config: ProviderConfig,
    pub tolerance: f64,
}

impl Pipeline {
    pub fn new(kb: KnowledgeBase, config: ProviderConfig) -> Self {
        Pipeline {
            kb,
            prompts: PromptSet::bundled(),
            catalog: PrecastCatalog::bundled(),
            config,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn bundled() -> Self {
        Self::new(KnowledgeBase::bundled(), ProviderConfig::default())
    }

    /// Step keys after step 2 for a kind, in execution order.
    pub fn plan(&self, kind: DrawingKind) -> Vec<StepKey> {
        let mut keys = vec![StepKey::new(1), StepKey::new(2)];
        let subs = &self.kb.retrieve(kind).step3_substeps;
        if subs.is_empty() {
            keys.push(StepKey::new(3));
        } else {
            keys.extend(subs.iter().map(|s| StepKey::sub(3, &s.tag)));
        }
        keys.extend([StepKey::new(4), StepKey::new(5), StepKey::new(6)]);
        keys
    }

    /// Template bindings for a step.
    pub fn bindings(
        &self,
        key: &StepKey,
        kind: Option<DrawingKind>,
        up: &Upstream,
    ) -> BTreeMap<&'static str, String> {
        let mut b = BTreeMap::new();
        let record = kind.map(|k| self.kb.retrieve(k));
        match key.step {
            1 | 4 => {
                b.insert("description", up.description.clone());
            }
            2 => {
                b.insert("description", up.description.clone());
                b.insert("useful_info", record.map(|r| r.useful_info.clone()).unwrap_or_default());
            }
            3 => {
                let sub = record.and_then(|r| {
                    r.step3_substeps
                        .iter()
                        .find(|s| Some(&s.tag) == key.sub_step.as_ref())
                });
                let (mandatory, background) = match (sub, record) {
                    (Some(s), _) => (s.mandatory_info.clone(), s.acquisition_methods.clone()),
                    (None, Some(r)) => (r.mandatory_info.clone(), r.acquisition_methods.clone()),
                    (None, None) => Default::default(),
                };
                let mut input = vec![up.get("2")];
                if let (Some(tag), Some(r)) = (&key.sub_step, record) {
                    for s in r.step3_substeps.iter().take_while(|s| &s.tag != tag) {
                        input.push(up.get(&s.tag));
                    }
                }
                b.insert("Mandatory_Info", mandatory);
                b.insert("background_sd", background);
                b.insert("Input", input.join("\n\n"));
            }
            5 => {
                let mut info: Vec<String> = up
                    .results
                    .iter()
                    .filter(|(t, _)| t.as_str() == "3" || t.starts_with("3-"))
                    .map(|(_, v)| v.clone())
                    .collect();
                info.push(up.get("4"));
                b.insert(
                    "JSON_Requirement",
                    record.map(|r| r.json_requirement.clone()).unwrap_or_default(),
                );
                b.insert("Input_Info", info.join("\n\n"));
            }
            _ => {
                b.insert("steps", record.map(|r| r.codegen_steps.clone()).unwrap_or_default());
                b.insert("JSON_file", up.get("5"));
            }
        }
        b
    }

    /// Renders and runs one step. Only configuration problems are errors;
    /// step failures are recorded in the transcript.
    pub fn run_step(
        &self,
        key: &StepKey,
        kind: Option<DrawingKind>,
        up: &Upstream,
        provider: &dyn Provider,
        trial: usize,
    ) -> Result<StepTranscript, PipelineError> {
        let bindings = self.bindings(key, kind, up);
        let prompt = self.prompts.get(key.step)?.render(&bindings)?;
        let role = self.config.role(key.step);
        let model = self.config.model(role).to_string();
        let tools = if key.step == 3 { ToolSpec::calculator() } else { Vec::new() };
        let mut t = StepTranscript {
            step: key.step,
            sub_step: key.sub_step.clone(),
            role,
            model,
            prompt,
            completions: Vec::new(),
            tool_calls: Vec::new(),
            result: None,
            outcome: Outcome::ProviderError,
            error: None,
        };
        let mut last_err = None;
        for _attempt in 0..=self.config.retries {
            t.tool_calls.clear();
            match self.converse(key, &t, &tools, provider, trial) {
                Ok((text, calls)) => {
                    t.tool_calls = calls;
                    match extract_result(&text) {
                        Ok(r) => {
                            t.result = Some(r.to_string());
                            t.outcome = Outcome::Ok;
                        }
                        Err(e) => {
                            t.outcome = Outcome::ExtractionFailed;
                            t.error = Some(e.to_string());
                        }
                    }
                    t.completions.push(text);
                    last_err = None;
                    break;
                }
                Err((e, calls)) => {
                    if e.is_config() {
                        return Err(e.into());
                    }
                    t.tool_calls = calls;
                    last_err = Some(e);
                }
            }
        }
        if let Some(e) = last_err {
            t.outcome = Outcome::ProviderError;
            t.error = Some(e.to_string());
        }
        Ok(t)
    }

    /// Completion loop answering tool calls until a final reply.
    #[allow(clippy::type_complexity)]
    fn converse(
        &self,
        key: &StepKey,
        t: &StepTranscript,
        tools: &[ToolSpec],
        provider: &dyn Provider,
        trial: usize,
    ) -> Result<(String, Vec<ToolCall>), (ProviderError, Vec<ToolCall>)> {
        let mut history: Vec<ToolExchange> = Vec::new();
        let mut calls = Vec::new();
        loop {
            let req = CompletionRequest {
                key,
                role: t.role,
                model: &t.model,
                prompt: &t.prompt,
                tools,
                history: &history,
                trial,
            };
            match provider.complete(&req) {
                Ok(Reply::Final(text)) => return Ok((text, calls)),
                Ok(Reply::Tool(request)) => {
                    if history.len() >= self.config.max_tool_calls {
                        return Err((
                            ProviderError::BadResponse(format!(
                                "more than {} tool calls",
                                self.config.max_tool_calls
                            )),
                            calls,
                        ));
                    }
                    let outcome = if tools.is_empty() {
                        Err(format!("no tools are available in step {key}"))
                    } else {
                        request
                            .name
                            .parse::<CalcOp>()
                            .and_then(|op| calc_text(op, &request.args))
                            .map_err(|e| e.to_string())
                    };
                    let (result, error) = match outcome {
                        Ok(v) => (v, false),
                        Err(e) => (format!("Error: {e}"), true),
                    };
                    calls.push(ToolCall {
                        name: request.name.clone(),
                        args: request.args.clone(),
                        result: result.clone(),
                        error,
                    });
                    history.push(ToolExchange { request, result });
                }
                Err(e) => return Err((e, calls)),
            }
        }
    }

    pub fn run(&self, description: &str, provider: &dyn Provider) -> PipelineRun {
        self.run_trial(description, provider, 0)
    }

    /// Runs the chain, stopping at the first failed step.
    pub fn run_trial(&self, description: &str, provider: &dyn Provider, trial: usize) -> PipelineRun {
        let mut run = PipelineRun {
            description: description.to_string(),
            ..PipelineRun::default()
        };
        if description.trim().is_empty() {
            run.error = Some(PipelineError::EmptyDescription.to_string());
            return run;
        }
        if let Err(e) = self.chain(&mut run, provider, trial) {
            run.error = Some(e.to_string());
            return run;
        }
        if run.completed() {
            self.attach_verification(&mut run);
        }
        run
    }

    fn chain(&self, run: &mut PipelineRun, provider: &dyn Provider, trial: usize) -> Result<(), PipelineError> {
        let mut up = Upstream {
            description: run.description.clone(),
            results: BTreeMap::new(),
        };
        let mut t = self.run_step(&StepKey::new(1), None, &up, provider, trial)?;
        if let Some(r) = &t.result {
            match parse_kind(r) {
                Ok(k) => run.kind = Some(k),
                Err(e) => t.reject(e),
            }
        }
        let ok = t.is_ok();
        if let Some(r) = &t.result {
            up.results.insert(t.tag(), r.clone());
        }
        run.transcripts.push(t);
        let Some(kind) = run.kind.filter(|_| ok) else {
            return Ok(());
        };
        for key in self.plan(kind).into_iter().skip(1) {
            let mut t = self.run_step(&key, Some(kind), &up, provider, trial)?;
            if key.step == 5 {
                if let Some(r) = &t.result {
                    match parse_ir(r) {
                        Ok(ir) => run.ir = Some(ir),
                        Err(e) => t.reject(format!("invalid IR: {e}")),
                    }
                }
            }
            if key.step == 6 {
                run.script = t.result.clone();
            }
            if let Some(r) = &t.result {
                up.results.insert(t.tag(), r.clone());
            }
            let ok = t.is_ok();
            run.transcripts.push(t);
            if !ok {
                break;
            }
        }
        Ok(())
    }

    /// Spec, unit and save target recovered from the step-2 and step-4
    /// results of a run.
    pub fn recovered_spec(&self, run: &PipelineRun) -> Result<(SectionSpec, OtherInfo), String> {
        let kind = run.kind.ok_or("no drawing kind")?;
        let step2 = run.transcript("2").and_then(|t| t.result.as_deref()).ok_or("no step-2 result")?;
        let block = parse_fields_loose(step2).map_err(|e| e.to_string())?;
        let spec = fields_to_spec(&block, kind).map_err(|e| e.to_string())?;
        let other = match run.transcript("4").and_then(|t| t.result.as_deref()) {
            Some(r) => parse_fields_loose(r)
                .map_err(|e| e.to_string())
                .and_then(|b| parse_other_info(&b).map_err(|e| e.to_string()))?,
            None => OtherInfo::default(),
        };
        Ok((spec, other))
    }

    fn attach_verification(&self, run: &mut PipelineRun) {
        let Some(ir) = run.ir.clone() else { return };
        let (spec, other) = match self.recovered_spec(run) {
            Ok(v) => v,
            Err(e) => {
                run.verify_error = Some(e);
                return;
            }
        };
        match verify_against(&ir, &spec, &other, &self.catalog, self.tolerance) {
            Ok(report) => run.verify = Some(report),
            Err(e) => run.verify_error = Some(e.to_string()),
        }
        let unit = other.unit.unwrap_or(ir.unit);
        if let Ok(expected) = resolve(&spec, &self.catalog, unit, other.save.clone()) {
            for t in run.transcripts.iter().filter(|t| t.step == 3) {
                if let Some(r) = &t.result {
                    let issues = check_step3(&t.tag(), r, &expected, &self.catalog, self.tolerance);
                    if !issues.is_empty() {
                        run.step3_issues.insert(t.tag(), issues);
                    }
                }
            }
        }
    }
}

/// Field-by-field check of `ir` against a spec, plus the unit and save
/// target recorded alongside it.
pub fn verify_against(
    ir: &DrawingIr,
    spec: &SectionSpec,
    other: &OtherInfo,
    catalog: &PrecastCatalog,
    tolerance: f64,
) -> Result<VerifyReport, GeometryError> {
    let mut report = verify_ir(ir, spec, catalog, tolerance)?;
    if let Some(unit) = other.unit {
        if unit != ir.unit {
            report.mismatches.push(Mismatch {
                field: "Unit".into(),
                expected: unit.as_str().into(),
                actual: ir.unit.as_str().into(),
                delta: None,
            });
        }
    }
    if other.save != ir.save {
        report.mismatches.push(Mismatch {
            field: "Save".into(),
            expected: save_text(&other.save),
            actual: save_text(&ir.save),
            delta: None,
        });
    }
    Ok(report)
}

fn save_text(s: &SaveTarget) -> String {
    match s {
        SaveTarget::NoSave => "False".into(),
        SaveTarget::Path(p) => p.clone(),
    }
}

/// Runs the chain with bundled prompts and catalog.
pub fn run_pipeline(
    description: &str,
    config: &ProviderConfig,
    provider: &dyn Provider,
    kb: &KnowledgeBase,
) -> PipelineRun {
    Pipeline::new(kb.clone(), config.clone()).run(description, provider)
}

/// Unit for a spec: RC sections carry their own, others default to
/// millimeters.
pub fn spec_unit(spec: &SectionSpec, other: Option<Unit>) -> Unit {
    match spec {
        SectionSpec::Rc(rc) => rc.unit,
        _ => other.unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::provider::ReplayProvider;

    #[test]
    fn kind_parsing() {
        assert_eq!(
            parse_kind("The type of structural drawing is: Steel Beam Cross-Section"),
            Ok(DrawingKind::SteelBeam)
        );
        assert_eq!(parse_kind("precast beam cross-section"), Ok(DrawingKind::PrecastBeam));
        assert!(parse_kind("a bridge").is_err());
        assert!(parse_kind("steel beam cross-section or precast beam cross-section").is_err());
    }

    #[test]
    fn empty_description_is_a_config_error() {
        let p = ReplayProvider::new(vec![]);
        let run = Pipeline::bundled().run("  ", &p);
        assert!(run.transcripts.is_empty());
        assert!(run.error.is_some());
    }

    #[test]
    fn unknown_kind_halts_after_step_one() {
        let p = ReplayProvider::from_json(
            r#"[{"step":1,"completion":"<result>The type of structural drawing is: truss</result>"}]"#,
        )
        .unwrap();
        let run = Pipeline::bundled().run("draw a truss", &p);
        assert_eq!(run.transcripts.len(), 1);
        assert_eq!(run.transcripts[0].outcome, Outcome::Rejected);
        assert!(run.transcripts[0].result.is_none());
    }

    #[test]
    fn missing_recording_is_recorded_not_thrown() {
        let p = ReplayProvider::from_json(
            r#"[{"step":1,"completion":"<result>steel beam cross-section</result>"}]"#,
        )
        .unwrap();
        let run = Pipeline::bundled().run("I would like to draw W1100X390", &p);
        assert_eq!(run.transcripts.len(), 2);
        assert_eq!(run.transcripts[1].outcome, Outcome::ProviderError);
        assert!(!run.succeeded());
    }

    #[test]
    fn tool_calls_are_executed_and_recorded() {
        let p = ReplayProvider::from_json(
            r#"[{"step":3,"completion":"<result>x</result>","tool_calls":[
                {"name":"Divide","args":[8,3]},{"name":"Sqrt","args":[-1]},{"name":"Power","args":[2,2]}]}]"#,
        )
        .unwrap();
        let pl = Pipeline::bundled();
        let t = pl
            .run_step(&StepKey::new(3), Some(DrawingKind::SteelBeam), &Upstream::default(), &p, 0)
            .unwrap();
        assert!(t.is_ok());
        let results: Vec<&str> = t.tool_calls.iter().map(|c| c.result.as_str()).collect();
        assert_eq!(results[0], "2.6667");
        assert!(results[1].starts_with("Error"));
        assert!(t.tool_calls[2].error);
    }
}
