use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdialogue::harness::output::{render_results, render_sweep, write_output};
use qdialogue::harness::sweep::parse_values;
use qdialogue::harness::tables::render_text;
use qdialogue::harness::{
    formula_tables, run_experiment_with, selftest, sweep, ConfigBuilder, Execution, ExperimentConfig, HarnessError,
    SweepParameter, EXIT_COMPARISON_FAILED, EXIT_PASS,
};

#[derive(Parser)]
#[command(name = "qdialogue", version, about = "Two-way entangled-qubit dialogue simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded experiment and compare it with the analytics.
    Run {
        #[command(flatten)]
        settings: Settings,
        /// Include one summary per trial in the document.
        #[arg(long)]
        verbose: bool,
    },
    /// Run one experiment per value of a parameter.
    Sweep {
        #[command(flatten)]
        settings: Settings,
        /// Parameter to vary: c, n-pairs or beta2.
        #[arg(long)]
        vary: String,
        /// Comma-separated values, e.g. 0.1,0.25,0.5.
        #[arg(long)]
        values: String,
    },
    /// Print the closed-form tables only.
    Formulas {
        /// Per-control-run detection used for the curves.
        #[arg(long, default_value_t = 0.75)]
        d: f64,
        #[arg(long, value_enum, default_value_t = TablesFormat::Text)]
        format: TablesFormat,
    },
    /// Check the simulator against its exact oracles.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum TablesFormat {
    Text,
    Json,
}

#[derive(Args)]
struct Settings {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    attack: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long = "n-pairs")]
    n_pairs: Option<String>,
    #[arg(long)]
    beta2: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long = "detection-policy")]
    detection_policy: Option<String>,
    #[arg(long = "max-restarts")]
    max_restarts: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    format: Option<String>,
    /// Run trials on one thread.
    #[arg(long)]
    serial: bool,
}

impl Settings {
    fn config(&self) -> Result<ExperimentConfig, HarnessError> {
        let base = match &self.config {
            Some(path) => ConfigBuilder::from_file(path)?,
            None => ConfigBuilder::default(),
        };
        let mut flags = ConfigBuilder::default();
        let pairs = [
            ("attack", &self.attack),
            ("c", &self.c),
            ("n-pairs", &self.n_pairs),
            ("beta2", &self.beta2),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("detection-policy", &self.detection_policy),
            ("max-restarts", &self.max_restarts),
            ("out", &self.out),
            ("format", &self.format),
        ];
        for (key, value) in pairs {
            if let Some(value) = value {
                flags.set(key, value)?;
            }
        }
        base.merge(flags).build()
    }

    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }
}

fn verdict(all_pass: bool) -> u8 {
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_COMPARISON_FAILED
    }
}

fn run(settings: &Settings, verbose: bool) -> Result<u8, HarnessError> {
    let config = settings.config()?;
    let path = config.resolve_output("results");
    let doc = run_experiment_with(&config, settings.execution(), verbose)?;
    write_output(&path, &render_results(&doc, config.output_format)?)?;
    for c in &doc.comparisons {
        println!(
            "{:<4} {:<30} empirical {:.6} reference {:.6} tolerance {:.6} ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.empirical,
            c.reference,
            c.tolerance,
            c.reference_source
        );
    }
    println!("wrote {}", path.display());
    Ok(verdict(doc.all_pass))
}

fn run_sweep(settings: &Settings, vary: &str, values: &str) -> Result<u8, HarnessError> {
    let config = settings.config()?;
    let parameter: SweepParameter = vary.parse()?;
    let values = parse_values(values)?;
    let path = config.resolve_output(&format!("sweep-{parameter}"));
    let result = sweep(&config, parameter, &values, settings.execution())?;
    write_output(&path, &render_sweep(&result, config.output_format)?)?;
    for row in &result.table {
        println!(
            "{parameter} = {:<8} detected {:.4} ± {:.4}  {}",
            row.value,
            row.per_dialogue_detection,
            row.per_dialogue_stderr,
            if row.all_pass { "PASS" } else { "FAIL" }
        );
    }
    println!("wrote {}", path.display());
    Ok(verdict(result.all_pass))
}

fn formulas(d: f64, format: TablesFormat) -> Result<u8, HarnessError> {
    if !(0.0..=1.0).contains(&d) {
        return Err(HarnessError::InvalidValue {
            key: "d".into(),
            value: d.to_string(),
        });
    }
    let tables = formula_tables(d);
    match format {
        TablesFormat::Text => print!("{}", render_text(&tables)),
        TablesFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&tables).map_err(|e| HarnessError::Serialize(e.to_string()))?
        ),
    }
    Ok(EXIT_PASS)
}

fn run_selftest() -> u8 {
    let report = selftest();
    for check in &report.checks {
        println!("{:<4} {:<22} {}", if check.pass { "PASS" } else { "FAIL" }, check.name, check.detail);
    }
    verdict(report.all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { settings, verbose } => run(settings, *verbose),
        Command::Sweep { settings, vary, values } => run_sweep(settings, vary, values),
        Command::Formulas { d, format } => formulas(*d, *format),
        Command::Selftest => Ok(run_selftest()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
