//! Command-line front end: JSON input, command dispatch and report rendering.

pub mod commands;
pub mod input;
pub mod render;
pub mod report;

use std::io::Read;
use std::path::PathBuf;

use clap::Parser;
use tateforge::invariants::ClassifyMode;

use crate::commands::{run_command, Command, RunError};
use crate::input::Problem;
use crate::render::{render_report, Format};

#[derive(Clone, Debug, Parser)]
#[command(name = "tateforge", version, about = "Acyclic closures, deviations and Poincaré series of graded algebras")]
pub struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    pub command: Command,
    /// Input JSON document, or `-` for stdin.
    pub input: String,
    /// Window override as `H,D`: homological and internal degree bounds.
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(u32, u32)>,
    /// Series truncation override.
    #[arg(long)]
    pub series_max: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads for the homology stages; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Restrict `classify` to one property.
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<ClassifyMode>,
}

fn parse_window(s: &str) -> Result<(u32, u32), String> {
    let (h, d) = s.split_once(',').ok_or("expected H,D")?;
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (h, d) = (num(h)?, num(d)?);
    if h == 0 || d == 0 {
        return Err("window bounds must be positive".into());
    }
    Ok((h, d))
}

fn parse_mode(s: &str) -> Result<ClassifyMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Result of one invocation: the rendered report (if any), diagnostics and the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: Option<String>,
    pub diagnostics: Vec<String>,
    pub code: i32,
}

fn read_source(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

/// Runs `cli` on an input text already read into memory.
pub fn execute_source(cli: &Cli, src: &str) -> Outcome {
    let fail = |msg: String, code| Outcome { output: None, diagnostics: vec![msg], code };
    let mut problem = match Problem::from_source(src) {
        Ok(p) => p,
        Err(e) => return fail(format!("input error: {e}"), 2),
    };
    if let Some((h, d)) = cli.window {
        problem.window = tateforge::Window::new(h, d);
    }
    if let Some(t) = cli.series_max {
        if t == 0 {
            return fail("input error: --series-max must be positive".into(), 2);
        }
        problem.series_max = t;
    }
    let diagnostics: Vec<String> = problem.warnings().into_iter().map(|w| format!("warning: {w}")).collect();
    let run = || run_command(cli.command, &problem, cli.mode);
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => return fail(format!("cannot start {n} threads: {e}"), 2),
        },
        None => run(),
    };
    match result {
        Ok(rep) => {
            let code = if rep.failed() { 1 } else { 0 };
            Outcome { output: Some(render_report(&rep, cli.format)), diagnostics, code }
        }
        Err(e) => {
            let kind = match &e {
                RunError::Input(_) => "input error",
                RunError::Engine(tateforge::Error::Internal(_)) => "internal error",
                RunError::Engine(_) => "error",
            };
            let mut d = diagnostics;
            d.push(format!("{kind}: {e}"));
            Outcome { output: None, diagnostics: d, code: e.exit_code() }
        }
    }
}

/// Runs `cli` end to end: reads the input, writes the report and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let src = match read_source(&cli.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("input error: cannot read {}: {e}", cli.input);
            return 2;
        }
    };
    let outcome = execute_source(cli, &src);
    for d in &outcome.diagnostics {
        eprintln!("{d}");
    }
    if let Some(text) = &outcome.output {
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            None => print!("{text}"),
        }
    }
    outcome.code
}
