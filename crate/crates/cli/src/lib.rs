//! `beamdraft` command line: compile, agent, verify and eval.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{Config, EXIT_MISMATCH, EXIT_OK, EXIT_STEP_FAILED};

#[derive(Debug, Parser)]
#[command(name = "beamdraft", version, about = "Beam cross-section drawings from text descriptions")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Knowledge base JSON (defaults to the bundled one).
    #[arg(long, global = true)]
    kb: Option<PathBuf>,
    /// Extra template directory, searched before the bundled templates.
    #[arg(long, global = true)]
    templates: Option<PathBuf>,
    /// Directory of step<N>.txt prompt overrides.
    #[arg(long, global = true)]
    prompts: Option<PathBuf>,
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, global = true, default_value_t = 1e-3)]
    tolerance: f64,
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Worker threads for eval.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// live, replay:<path> or fault:<schedule>[@<provider>].
    #[arg(long, global = true)]
    provider: Option<String>,
    #[arg(long, global = true)]
    model_light: Option<String>,
    #[arg(long, global = true)]
    model_strong: Option<String>,
    /// Environment variable holding the API key for the live provider.
    #[arg(long, global = true)]
    api_key_env: Option<String>,
    /// Base URL of the chat-completions endpoint.
    #[arg(long, global = true)]
    base_url: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deterministic path: bullet-form fields to IR, DXF and script.
    Compile {
        fields: PathBuf,
        /// rc, steel or precast; read from "Type of Structure" when omitted.
        #[arg(long)]
        kind: Option<String>,
        /// Comma-separated subset of ir,dxf,script.
        #[arg(long, default_value = "ir,dxf,script")]
        emit: String,
    },
    /// Runs the prompt chain on a free-text description.
    Agent {
        description: PathBuf,
        /// Also write the run in replay form to this file.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Checks an IR file against a bullet-form description.
    Verify {
        ir: PathBuf,
        fields: PathBuf,
        #[arg(long)]
        kind: Option<String>,
    },
    /// Per-step accuracy over a corpus of cases.
    Eval {
        corpus: PathBuf,
        /// isolated or chained.
        #[arg(long, default_value = "isolated")]
        mode: String,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let g = cli.global;
    let config = Config {
        kb: g.kb,
        templates: g.templates,
        prompts: g.prompts,
        out_dir: g.out_dir,
        tolerance: g.tolerance,
        trials: g.trials,
        jobs: g.jobs,
        provider: g.provider,
        model_light: g.model_light,
        model_strong: g.model_strong,
        api_key_env: g.api_key_env,
        base_url: g.base_url,
    };
    let result = config.check().and_then(|()| match cli.command {
        Command::Compile { fields, kind, emit } => {
            commands::compile(&config, &fields, kind.as_deref(), &emit, out)
        }
        Command::Agent { description, record } => {
            commands::agent(&config, &description, record.as_deref(), out)
        }
        Command::Verify { ir, fields, kind } => {
            commands::verify(&config, &ir, &fields, kind.as_deref(), out)
        }
        Command::Eval { corpus, mode } => commands::eval(&config, &corpus, &mode, out),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
