use clap::Parser;
use krcli::{run, Command, OutFormat, RunConfig};
use krcore::cartan::AffineType;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Kirillov-Reshetikhin modules W^{2,l} of types G2(1) and D4(3): build,
/// verify, branch, crystal and R-matrix stages.
#[derive(Parser, Debug)]
#[command(name = "kr", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// g2-1 or d4-3
    #[arg(long = "type", default_value = "g2-1")]
    ty: AffineType,
    #[arg(long, default_value_t = 1)]
    level: i64,
    #[arg(long, value_enum, default_value = "text")]
    out: OutFormat,
    #[arg(long, default_value = "kr-cache")]
    cache: PathBuf,
    /// worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// refuse levels above this bound
    #[arg(long, default_value_t = 3)]
    max_level: i64,
    /// write the result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// suppress progress messages
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    env_logger::Builder::new()
        .filter_level(if args.quiet { log::LevelFilter::Warn } else { log::LevelFilter::Info })
        .format_timestamp(None)
        .format_target(false)
        .target(env_logger::Target::Stderr)
        .init();
    if args.jobs == 0 || rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build_global().is_err() {
        eprintln!("usage error: --jobs must be a positive integer");
        return ExitCode::from(2);
    }
    let cfg = RunConfig {
        ty: args.ty,
        level: args.level,
        command: args.command,
        out: args.out,
        cache_dir: args.cache,
        max_level: args.max_level,
    };
    match run(&cfg) {
        Ok(o) => {
            let written = match &args.output {
                Some(p) => std::fs::write(p, &o.output).map_err(|e| format!("{}: {e}", p.display())),
                None => std::io::stdout().write_all(o.output.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error writing output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(o.status() as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
