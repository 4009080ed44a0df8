use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use beamdraft_core::emit::{emit_dxf, emit_script_with, ir_to_entities, TemplateLibrary};
use beamdraft_core::frontend::{fields_to_spec, infer_kind, parse_fields, parse_other_info, FieldBlock, OtherInfo};
use beamdraft_core::geometry::{resolve, PrecastCatalog, SectionSpec};
use beamdraft_core::ir::{parse_ir, serialize_ir, DrawingIr, DrawingKind};
use beamdraft_core::knowledge::KnowledgeBase;
use beamdraft_core::pipeline::provider::{Provider, ProviderSpec};
use beamdraft_core::pipeline::{
    evaluate, load_corpus, spec_unit, verify_against, EvalMode, Pipeline, PromptSet, ProviderConfig,
};

pub const EXIT_OK: i32 = 0;
/// Verification mismatches, or any command error.
pub const EXIT_MISMATCH: i32 = 1;
/// A pipeline step failed.
pub const EXIT_STEP_FAILED: i32 = 2;

pub const RUN_FILE: &str = "run.json";
pub const IR_FILE: &str = "ir.json";
pub const DXF_FILE: &str = "drawing.dxf";
pub const SCRIPT_FILE: &str = "script.py.txt";
pub const ACCURACY_FILE: &str = "accuracy.csv";
/// Looked up inside `--templates` to override the bundled precast catalog.
pub const CATALOG_FILE: &str = "precast_catalog.json";

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Config {
    pub kb: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub prompts: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub tolerance: f64,
    pub trials: usize,
    pub jobs: usize,
    pub provider: Option<String>,
    pub model_light: Option<String>,
    pub model_strong: Option<String>,
    pub api_key_env: Option<String>,
    pub base_url: Option<String>,
}

impl Config {
    pub fn check(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            bail!("--tolerance must be a positive number, got {}", self.tolerance);
        }
        if self.trials == 0 {
            bail!("--trials must be at least 1");
        }
        if self.jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        Ok(())
    }

    fn catalog(&self) -> Result<PrecastCatalog> {
        if let Some(dir) = &self.templates {
            let path = dir.join(CATALOG_FILE);
            if path.is_file() {
                return PrecastCatalog::load(&path)
                    .with_context(|| format!("loading {}", path.display()));
            }
        }
        Ok(PrecastCatalog::bundled())
    }

    fn templates(&self) -> Result<TemplateLibrary> {
        let lib = match &self.templates {
            Some(dir) => TemplateLibrary::with_dir(dir),
            None => TemplateLibrary::bundled(),
        };
        Ok(lib.with_catalog(self.catalog()?))
    }

    fn provider_config(&self) -> ProviderConfig {
        let mut c = ProviderConfig::default();
        if let Some(m) = &self.model_light {
            c.light_model = m.clone();
        }
        if let Some(m) = &self.model_strong {
            c.strong_model = m.clone();
        }
        if let Some(v) = &self.api_key_env {
            c.api_key_env = v.clone();
        }
        if let Some(u) = &self.base_url {
            c.base_url = u.clone();
        }
        c
    }

    fn pipeline(&self) -> Result<Pipeline> {
        let kb = match &self.kb {
            Some(p) => KnowledgeBase::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => KnowledgeBase::bundled(),
        };
        let mut pl = Pipeline::new(kb, self.provider_config());
        if let Some(dir) = &self.prompts {
            pl.prompts = PromptSet::with_overrides(dir)
                .with_context(|| format!("loading prompts from {}", dir.display()))?;
        }
        pl.catalog = self.catalog()?;
        pl.tolerance = self.tolerance;
        Ok(pl)
    }

    /// Provider named by `--provider`, or replay of `default_replay`.
    /// A fault schedule without its own trial count uses `--trials`.
    fn provider(&self, default_replay: &Path) -> Result<Box<dyn Provider>> {
        let mut spec = match &self.provider {
            Some(s) => s.parse::<ProviderSpec>()?,
            None => ProviderSpec::Replay(default_replay.to_path_buf()),
        };
        if let ProviderSpec::Fault { schedule, .. } = &mut spec {
            if schedule.trials.is_none() {
                *schedule = schedule.clone().with_trials(self.trials);
            }
        }
        Ok(spec.build(&self.provider_config(), Some(default_replay))?)
    }

    fn write(&self, name: &str, bytes: &[u8], out: &mut dyn Write) -> Result<()> {
        fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("creating {}", self.out_dir.display()))?;
        let path = self.out_dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "wrote {}", path.display())?;
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse_kind_arg(s: &str) -> Result<DrawingKind> {
    Ok(s.parse::<DrawingKind>()?)
}

/// Kind from `--kind`, else inferred from the fields.
fn block_kind(block: &FieldBlock, kind: Option<&str>, catalog: &PrecastCatalog) -> Result<Option<DrawingKind>> {
    match kind {
        Some(k) => parse_kind_arg(k).map(Some),
        None => Ok(infer_kind(block, catalog)),
    }
}

fn parse_description(
    config: &Config,
    path: &Path,
    kind: Option<&str>,
    fallback: Option<DrawingKind>,
) -> Result<(SectionSpec, OtherInfo)> {
    let text = read(path)?;
    let block = parse_fields(&text).with_context(|| format!("parsing {}", path.display()))?;
    let kind = block_kind(&block, kind, &config.catalog()?)?
        .or(fallback)
        .context("drawing kind unknown: pass --kind or add a \"Type of Structure\" field")?;
    let spec = fields_to_spec(&block, kind)?;
    let other = parse_other_info(&block)?;
    Ok((spec, other))
}

fn entity_summary(ir: &DrawingIr, templates: &TemplateLibrary) -> Result<(Vec<u8>, String)> {
    let entities = ir_to_entities(ir, templates)?;
    let (l, c, a) = entities.counts();
    Ok((emit_dxf(&entities, ir.unit), format!("{l} lines, {c} circles, {a} arcs")))
}

pub fn compile(
    config: &Config,
    fields: &Path,
    kind: Option<&str>,
    emit: &str,
    out: &mut dyn Write,
) -> Result<i32> {
    let mut want = (false, false, false);
    for part in emit.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part {
            "ir" => want.0 = true,
            "dxf" => want.1 = true,
            "script" => want.2 = true,
            other => bail!("unknown --emit target {other:?} (expected ir, dxf or script)"),
        }
    }
    let (spec, other) = parse_description(config, fields, kind, None)?;
    let catalog = config.catalog()?;
    let unit = spec_unit(&spec, other.unit);
    let ir = resolve(&spec, &catalog, unit, other.save)?;
    let templates = config.templates()?;
    writeln!(out, "kind: {}", ir.kind())?;
    if want.0 {
        config.write(IR_FILE, format!("{}\n", serialize_ir(&ir)).as_bytes(), out)?;
    }
    if want.1 {
        let (dxf, summary) = entity_summary(&ir, &templates)?;
        config.write(DXF_FILE, &dxf, out)?;
        writeln!(out, "entities: {summary}")?;
    }
    if want.2 {
        let pl = config.pipeline()?;
        let steps = &pl.kb.retrieve(ir.kind()).codegen_steps;
        let script = emit_script_with(&ir, steps, &catalog)?;
        config.write(SCRIPT_FILE, script.as_bytes(), out)?;
    }
    Ok(EXIT_OK)
}

pub fn agent(config: &Config, description: &Path, record: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let text = read(description)?;
    let pl = config.pipeline()?;
    let dir = description
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let provider = config.provider(dir)?;
    let run = pl.run(text.trim(), provider.as_ref());

    config.write(RUN_FILE, format!("{}\n", run.to_json()).as_bytes(), out)?;
    if let Some(path) = record {
        let json = serde_json::to_string_pretty(&run.to_replay())?;
        fs::write(path, format!("{json}\n")).with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "recorded {}", path.display())?;
    }
    for t in &run.transcripts {
        write!(out, "step {:<4} {:?}", t.tag(), t.outcome)?;
        match &t.error {
            Some(e) => writeln!(out, ": {e}")?,
            None => writeln!(out)?,
        }
    }
    if let Some(ir) = &run.ir {
        config.write(IR_FILE, format!("{}\n", serialize_ir(ir)).as_bytes(), out)?;
        match entity_summary(ir, &config.templates()?) {
            Ok((dxf, summary)) => {
                config.write(DXF_FILE, &dxf, out)?;
                writeln!(out, "entities: {summary}")?;
            }
            Err(e) => writeln!(out, "no drawing: {e}")?,
        }
    }
    if let Some(script) = &run.script {
        let mut script = script.clone();
        if !script.ends_with('\n') {
            script.push('\n');
        }
        config.write(SCRIPT_FILE, script.as_bytes(), out)?;
    }
    for (tag, issues) in &run.step3_issues {
        for i in issues {
            writeln!(out, "step {tag} check: {i}")?;
        }
    }
    if let Some(e) = &run.error {
        bail!("{e}");
    }
    if !run.completed() {
        let step = run.failed_step().map(|t| t.tag()).unwrap_or_else(|| "?".into());
        writeln!(out, "failed at step {step}")?;
        return Ok(EXIT_STEP_FAILED);
    }
    if let Some(e) = &run.verify_error {
        writeln!(out, "verification error: {e}")?;
        return Ok(EXIT_MISMATCH);
    }
    match &run.verify {
        Some(report) => {
            write!(out, "{report}")?;
            Ok(if report.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
        }
        None => Ok(EXIT_MISMATCH),
    }
}

pub fn verify(config: &Config, ir_path: &Path, fields: &Path, kind: Option<&str>, out: &mut dyn Write) -> Result<i32> {
    let ir = parse_ir(&read(ir_path)?).with_context(|| format!("parsing {}", ir_path.display()))?;
    let (spec, other) = parse_description(config, fields, kind, Some(ir.kind()))?;
    let report = verify_against(&ir, &spec, &other, &config.catalog()?, config.tolerance)?;
    write!(out, "{report}")?;
    Ok(if report.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

pub fn eval(config: &Config, corpus: &Path, mode: &str, out: &mut dyn Write) -> Result<i32> {
    let mode: EvalMode = mode.parse().map_err(anyhow::Error::msg)?;
    let pl = config.pipeline()?;
    let cases = load_corpus(corpus, &pl)?;
    if cases.is_empty() {
        bail!("no cases found under {}", corpus.display());
    }
    let provider = config.provider(corpus)?;
    let table = evaluate(&cases, config.trials, provider.as_ref(), &pl, mode, config.jobs);
    write!(out, "{table}")?;
    config.write(ACCURACY_FILE, table.to_csv().as_bytes(), out)?;
    Ok(EXIT_OK)
}
