use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ads_orbits::report::{self, Format, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "ads-orbits", version, about = "Numerical verification of group actions on anti de Sitter spacetimes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and print its report.
    Verify {
        #[arg(long)]
        suite: String,
        /// A single value, a range `3..6` (inclusive) or a list `3,5,7`.
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Print the suite names with a one-line description.
    ListSuites,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

fn parse_n(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("cannot read n from {s:?}");
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = (num(a)?, num(b.trim_start_matches('='))?);
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(num).collect()
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::ListSuites => {
            for s in Suite::ALL {
                let r = s.supported();
                println!("{:22} n {}..={}  {}", s.name(), r.start(), r.end(), s.description());
            }
            ExitCode::SUCCESS
        }
        Command::Verify { suite, n, samples, seed, tol, format } => {
            let Some(suite) = Suite::from_name(&suite) else {
                return usage(&format!("unknown suite {suite:?}; see list-suites"));
            };
            let mut config = SuiteConfig::new(suite);
            if let Some(n) = n {
                match parse_n(&n) {
                    Ok(v) => config.n = v,
                    Err(e) => return usage(&e),
                }
            }
            config.samples = samples;
            config.seed = seed;
            config.tol = tol;
            let rep = match report::run_suite(&config) {
                Ok(r) => r,
                Err(e) => return usage(&e.to_string()),
            };
            let format = match format {
                OutputFormat::Json => Format::Json,
                OutputFormat::Text => Format::Text,
            };
            let out = report::emit(&rep, format);
            let mut stdout = std::io::stdout().lock();
            let nl = if out.ends_with('\n') { "" } else { "\n" };
            // a closed pipe is not our failure
            let _ = write!(stdout, "{out}{nl}").and_then(|()| stdout.flush());
            ExitCode::from(rep.exit_code())
        }
    }
}
