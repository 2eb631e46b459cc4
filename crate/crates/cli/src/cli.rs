//! Argument parsing and the subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use mwstems_core::stems::assemble;
use mwstems_core::{PageIndex, SsKind, Window};

use crate::config::{resolve, FileConfig, Resolved};
use crate::json::{page_json, parse_page, stems_json, stems_table};
use crate::svg::{emit_chart, ChartStyle};
use crate::verify::{run_suite, Runs};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "mwstems", version, about = "Eta-inverted Milnor-Witt stems over small fields")]
pub struct Cli {
    /// Config file with `key = value` lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SsArg {
    Bockstein,
    Adams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PageFormat {
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StemsFormat {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute one page of a spectral sequence.
    Compute {
        /// Fq:<q>, Qp:<p>, Q[:<bound>], R or C.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        t_max: Option<i32>,
        #[arg(long)]
        c_max: Option<i32>,
        #[arg(long, value_enum)]
        ss: Option<SsArg>,
        /// A page number or `inf`.
        #[arg(long)]
        page: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: PageFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a page JSON file as SVG.
    Chart {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble the stems from Adams E-infinity.
    Stems {
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        t_max: Option<i32>,
        #[arg(long, value_enum, default_value = "table")]
        format: StemsFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an acceptance suite.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
    },
}

fn parse_page_index(s: &str) -> Result<PageIndex, CliError> {
    match s.trim() {
        "inf" => Ok(PageIndex::Infinity),
        n => n
            .parse()
            .map(PageIndex::Finite)
            .map_err(|_| CliError::Config(format!("page must be a number or `inf`, got `{n}`"))),
    }
}

fn parse_ss(s: &str) -> Result<SsKind, CliError> {
    match s.trim() {
        "bockstein" => Ok(SsKind::Bockstein),
        "adams" => Ok(SsKind::Adams),
        other => Err(CliError::Config(format!("unknown spectral sequence `{other}`"))),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(CliError::io(p)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(CliError::io("<stdout>")),
    }
}

fn compute_runs(r: Resolved) -> Result<Runs, CliError> {
    info!("computing {} on t <= {}, c <= {}", r.field, r.t_max, r.c_max);
    Runs::compute(r.field, Window::new(r.t_max, r.c_max)).map_err(|e| match e {
        e @ (mwstems_core::Error::InvalidField(..) | mwstems_core::Error::NotPrime(_)) => CliError::Field(e),
        e => CliError::Compute(e),
    })
}

/// Runs a parsed command. Text for stdout is written directly.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Compute { field, t_max, c_max, ss, page, format, out } => {
            let r = resolve(field.as_deref(), t_max, c_max, &cfg)?;
            let ss = match ss {
                Some(SsArg::Bockstein) => SsKind::Bockstein,
                Some(SsArg::Adams) => SsKind::Adams,
                None => cfg.ss.as_deref().map(parse_ss).transpose()?.unwrap_or(SsKind::Adams),
            };
            let index = parse_page_index(page.as_deref().or(cfg.page.as_deref()).unwrap_or("inf"))?;
            if let PageIndex::Finite(k) = index {
                if k < ss.first_page() {
                    return Err(CliError::Config(format!("the {} spectral sequence starts at E_{}", ss.name(), ss.first_page())));
                }
            }
            let runs = compute_runs(r)?;
            let run = if ss == SsKind::Bockstein { &runs.bockstein } else { &runs.adams };
            let page = match index {
                PageIndex::Finite(k) => run.page(k).expect("pages past the last one are E-infinity"),
                PageIndex::Infinity => run.einf().clone(),
            };
            let json = page_json(&page);
            let text = match format {
                PageFormat::Json => serde_json::to_string_pretty(&json).expect("serializable") + "\n",
                PageFormat::Svg => emit_chart(&json, &ChartStyle::default())?,
            };
            write_output(out.as_deref(), &text)
        }
        Command::Chart { input, out } => {
            let text = std::fs::read_to_string(&input).map_err(CliError::io(&input))?;
            let page = parse_page(&text)?;
            let svg = emit_chart(&page, &ChartStyle::default())?;
            write_output(out.as_deref(), &svg)
        }
        Command::Stems { field, t_max, format, out } => {
            let r = resolve(field.as_deref(), t_max, None, &cfg)?;
            let runs = compute_runs(r)?;
            let stems = assemble(runs.adams.einf()).map_err(CliError::Compute)?;
            let text = match format {
                StemsFormat::Table => format!("{}\n{}", r.field, stems_table(&stems)),
                StemsFormat::Json => serde_json::to_string_pretty(&stems_json(r.field, &stems)).expect("serializable") + "\n",
            };
            write_output(out.as_deref(), &text)
        }
        Command::Verify { suite } => {
            let results = run_suite(&suite).ok_or_else(|| CliError::Config(format!("unknown suite `{suite}`")))?;
            let mut failures = 0;
            for c in &results {
                println!("{c}");
                failures += usize::from(!c.passed);
            }
            if failures > 0 {
                Err(CliError::Mismatch(failures))
            } else {
                Ok(())
            }
        }
    }
}
