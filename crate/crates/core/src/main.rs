//! Command-line front end: run studies from TOML configs, print limit
//! determinants and factor coefficients, and run the built-in checks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toeplimit::harness::{prepare_inputs, run_study, selftest, HarnessError, ReportFormat, StudyConfig};
use toeplimit::limit::limit_determinant;

#[derive(Parser)]
#[command(
    name = "toeplimit",
    version,
    about = "Convergence studies for determinant ratios of Toeplitz-like matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study described by a TOML config.
    Run {
        /// Study config file.
        config: PathBuf,
        /// Write the report here instead of the config's output path or stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Report encoding: csv or json.
        #[arg(long, value_parser = parse_format)]
        format: Option<ReportFormat>,
        /// Replace the section schedule, comma separated (e.g. 8,16,32).
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        /// Suppress the summary on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Print the limit matrix and its determinant for a config.
    Limit {
        /// Study config file.
        config: PathBuf,
    },
    /// Print the one-sided factor coefficients for a config.
    Factorize {
        /// Study config file.
        config: PathBuf,
        /// Suppress the diagnostics on stderr.
        #[arg(long)]
        quiet: bool,
    },
    /// Run the built-in verification suite.
    Selftest {
        /// Print only failing criteria.
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE, so `toeplimit ... | head` would panic inside
    // println; restore the default die-on-closed-pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Run {
            config,
            output,
            format,
            n,
            quiet,
        } => cmd_run(&config, output, format, n, quiet),
        Command::Limit { config } => cmd_limit(&config),
        Command::Factorize { config, quiet } => cmd_factorize(&config, quiet),
        Command::Selftest { quiet } => Ok(cmd_selftest(quiet)),
    }
}

fn cmd_run(
    config_path: &PathBuf,
    output: Option<PathBuf>,
    format: Option<ReportFormat>,
    n: Option<Vec<usize>>,
    quiet: bool,
) -> Result<ExitCode, HarnessError> {
    let mut config = StudyConfig::from_path(config_path)?;
    if let Some(schedule) = n {
        config.study.n_schedule = schedule;
    }
    let report = run_study(&config)?;

    let format = format
        .or(config.output.format)
        .unwrap_or(ReportFormat::Csv);
    let path = output.or_else(|| config.output.path.as_ref().map(PathBuf::from));
    let text = report.render(format);
    match &path {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }

    if !quiet {
        let final_error = report
            .records
            .last()
            .map(|r| format!("{:.3e}", r.abs_error))
            .unwrap_or_else(|| "n/a".into());
        eprintln!(
            "study: {} | limit = {:.12e} {:+.12e}i | final abs_error = {}{}",
            report.symbol,
            report.limit_re,
            report.limit_im,
            final_error,
            path.as_deref()
                .map(|p| format!(" | wrote {}", p.display()))
                .unwrap_or_default()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_limit(config_path: &PathBuf) -> Result<ExitCode, HarnessError> {
    let config = StudyConfig::from_path(config_path)?;
    let inputs = prepare_inputs(&config)?;
    let limit = limit_determinant(&inputs.fact, &inputs.pert, config.tolerances.singularity_tol)?;
    let m = inputs.pert.rank();
    println!("m = {m}");
    for i in 0..m {
        for j in 0..m {
            let v = limit.matrix.get(i, j);
            println!("entry[{i}][{j}] = {:.16e} {:+.16e}i", v.re, v.im);
        }
    }
    let det = limit.value();
    println!("determinant = {:.16e} {:+.16e}i", det.re, det.im);
    println!("singular = {}", limit.logdet.is_singular);
    Ok(ExitCode::SUCCESS)
}

fn cmd_factorize(config_path: &PathBuf, quiet: bool) -> Result<ExitCode, HarnessError> {
    let config = StudyConfig::from_path(config_path)?;
    let inputs = prepare_inputs(&config)?;
    println!("k,plus_re,plus_im,minus_re,minus_im");
    for k in 0..=inputs.truncation as i64 {
        let plus = inputs.fact.plus_coefficient(k);
        let minus = inputs.fact.minus_coefficient(-k);
        println!(
            "{k},{:.16e},{:.16e},{:.16e},{:.16e}",
            plus.re, plus.im, minus.re, minus.im
        );
    }
    if !quiet {
        eprintln!(
            "reconstruction residual = {:.3e} | min |plus factor| on the circle = {:.6e}",
            inputs.fact.reconstruction_residual(),
            inputs.fact.min_plus_modulus(512)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(quiet: bool) -> ExitCode {
    let outcomes = selftest::run_all();
    let mut failures = 0usize;
    for outcome in &outcomes {
        if !outcome.passed {
            failures += 1;
        }
        if !outcome.passed || !quiet {
            println!("{}", outcome.summary_line());
        }
    }
    if failures > 0 {
        eprintln!("error: selftest failed ({failures} of {} criteria)", outcomes.len());
        ExitCode::FAILURE
    } else {
        if !quiet {
            println!("all {} criteria passed", outcomes.len());
        }
        ExitCode::SUCCESS
    }
}
