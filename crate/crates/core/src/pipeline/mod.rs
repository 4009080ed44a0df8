//! The six-step agent chain.

pub mod calc;
pub mod checks;
pub mod eval;
pub mod extract;
pub mod provider;
pub mod run;
pub mod template;

pub use calc::{calc_decimal, calc_text, calc_tool, CalcError, CalcOp};
pub use eval::{evaluate, load_corpus, AccuracyTable, Cell, EvalCase, EvalError, EvalMode};
pub use extract::{extract_result, ExtractError};
pub use provider::{Provider, ProviderConfig, ProviderError, ProviderSpec, ReplayProvider, Role, StepKey};
pub use run::{
    parse_kind, run_pipeline, spec_unit, verify_against, Outcome, Pipeline, PipelineError, PipelineRun,
    StepTranscript, Upstream, DEFAULT_TOLERANCE,
};
pub use template::{render_prompt, PromptSet, PromptTemplate, TemplateError, PLACEHOLDERS};
