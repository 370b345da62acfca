mod args;
mod commands;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use args::{parse_time, Format, Source, Tuning, VertexSel};

/// Continuous-time quantum walks and sedentary-vertex certificates.
#[derive(Debug, Parser)]
#[command(name = "qwsed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Output {
    /// Write here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a vertex (or `--vertex all`) and print the report
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        tuning: Tuning,
        /// Vertex id, label, role (apex, leaf, center, ...) or `all`
        #[arg(long, default_value = "0")]
        vertex: VertexSel,
        /// Try every proper subset of the support, not only singletons
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Sample `U(t)_{u,v}` over the window as `t,re,im,abs`
    Sweep {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value = "0")]
        vertex: VertexSel,
        /// Second index of the entry; defaults to the diagonal
        #[arg(long)]
        target: Option<VertexSel>,
        #[command(flatten)]
        output: Output,
    },
    /// Analyze every member of a family with one `a..b` range, e.g. `complete:3..20`
    FamilyScan {
        /// Ranged family spec
        spec: String,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value = "0")]
        vertex: VertexSel,
        #[arg(long)]
        exhaustive: bool,
        /// Also write the trend table (JSON) here
        #[arg(long, value_name = "PATH")]
        trend: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Global minimum of `|U(t)_{u,u}|` over the window
    Oracle {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value = "0")]
        vertex: VertexSel,
        #[command(flatten)]
        output: Output,
    },
    /// Check uniform mixing and fractional revival at one time
    MixingCheck {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "adjacency", value_parser = args::parse_matrix)]
        matrix: qwsed_core::MatrixKind,
        #[arg(long, default_value_t = qwsed_core::spectral::DEFAULT_CLUSTER_TOL)]
        cluster_tol: f64,
        /// Time, e.g. `2*pi/9`
        #[arg(long, value_parser = parse_time)]
        time: f64,
        /// Vertex whose column is checked, or `all` for the whole matrix
        #[arg(long, default_value = "all")]
        vertex: VertexSel,
        /// Check fractional revival between `--vertex` and this vertex
        #[arg(long)]
        revival: Option<VertexSel>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::init_threads() {
        eprintln!("qwsed: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwsed: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Analyze {
            source,
            tuning,
            vertex,
            exhaustive,
            output,
        } => {
            let text = commands::analyze(&source.load()?, &tuning, &vertex, exhaustive, output.format)?;
            commands::emit(output.out.as_deref(), &text)
        }
        Command::Sweep {
            source,
            tuning,
            vertex,
            target,
            output,
        } => {
            let text = commands::sweep(&source.load()?, &tuning, &vertex, target.as_ref(), output.format)?;
            commands::emit(output.out.as_deref(), &text)
        }
        Command::FamilyScan {
            spec,
            tuning,
            vertex,
            exhaustive,
            trend,
            output,
        } => {
            let (text, table) = commands::family_scan(&spec, &tuning, &vertex, exhaustive, output.format)?;
            eprint!("{}", commands::trend_table(&table));
            if let Some(path) = trend {
                commands::emit(Some(&path), &commands::to_json(&table)?)?;
            }
            commands::emit(output.out.as_deref(), &text)
        }
        Command::Oracle {
            source,
            tuning,
            vertex,
            output,
        } => {
            let text = commands::oracle(&source.load()?, &tuning, &vertex, output.format)?;
            commands::emit(output.out.as_deref(), &text)
        }
        Command::MixingCheck {
            source,
            matrix,
            cluster_tol,
            time,
            vertex,
            revival,
            tol,
            out,
        } => {
            let check = commands::MixingArgs {
                matrix,
                cluster_tol,
                time,
                vertex,
                revival,
                tol,
            };
            let text = commands::mixing_check(&source.load()?, &check)?;
            commands::emit(out.as_deref(), &text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn graph_sources_are_exclusive() {
        assert!(Cli::try_parse_from(["qwsed", "analyze"]).is_err());
        assert!(Cli::try_parse_from(["qwsed", "analyze", "--family", "complete:3", "--graph", "x"]).is_err());
        assert!(Cli::try_parse_from(["qwsed", "analyze", "--family", "complete:3"]).is_ok());
    }
}
