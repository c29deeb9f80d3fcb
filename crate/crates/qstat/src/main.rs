use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qstat::demos::{demo_names, run_demo, DEMOS};
use qstat::runner::RunReport;
use qstat::{parse_scenario, run_scenario, RunOptions, ScenarioError};

#[derive(Parser)]
#[command(name = "qstat", version, about = "Run quantum-statistics scenarios and demos")]
struct Cli {
    /// Override the reduced Planck constant.
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Use SI values of hbar, k_B and c.
    #[arg(long, global = true)]
    si: bool,
    /// Seed for scenarios that do not set their own.
    #[arg(long, global = true, env = "QSTAT_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file.
    Run {
        file: PathBuf,
        /// Directory for declared outputs.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a built-in demo, or `all` of them.
    Demo {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Parse and check a scenario file without running it.
    Validate { file: PathBuf },
    /// List built-in demos.
    ListDemos,
}

fn read(file: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(file).map_err(|source| ScenarioError::Io {
        path: file.to_owned(),
        source,
    })
}

fn print_report(report: &RunReport) {
    let mut stdout = std::io::stdout().lock();
    for o in report.outputs.iter().filter(|o| o.path == "-") {
        let _ = stdout.write_all(o.content.as_bytes());
    }
    let _ = stdout.write_all(report.render().as_bytes());
}

fn execute(cli: Cli) -> Result<i32, ScenarioError> {
    let options = |out: PathBuf, base: Option<PathBuf>| RunOptions {
        hbar: cli.hbar,
        si: cli.si,
        seed: cli.seed,
        out_dir: Some(out),
        base_dir: base,
    };
    match &cli.command {
        Command::Run { file, out } => {
            let scenario = parse_scenario(&read(file)?)?;
            let base = file.parent().map(Path::to_path_buf);
            let report = run_scenario(&scenario, &options(out.clone(), base))?;
            print_report(&report);
            Ok(report.exit_code())
        }
        Command::Demo { name, out } => {
            let names: Vec<&str> = if name == "all" {
                demo_names().collect()
            } else {
                vec![name.as_str()]
            };
            if names.len() == 1 {
                let report = run_demo(names[0], &options(out.clone(), None))?;
                print_report(&report);
                return Ok(report.exit_code());
            }
            let mut code = 0;
            for name in names {
                match run_demo(name, &options(out.clone(), None)) {
                    Ok(report) => {
                        print_report(&report);
                        code = code.max(report.exit_code());
                    }
                    Err(e) => {
                        eprintln!("error: {name}: {e}");
                        code = code.max(e.exit_code());
                    }
                }
            }
            Ok(code)
        }
        Command::Validate { file } => {
            let scenario = parse_scenario(&read(file)?)?;
            println!("{}: valid, {} tasks", scenario.name, scenario.tasks.len());
            Ok(0)
        }
        Command::ListDemos => {
            for (name, summary, _) in DEMOS {
                println!("{name:<24} {summary}");
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
