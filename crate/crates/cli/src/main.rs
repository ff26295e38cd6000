use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eostrata::rootdata::GroupSpec;
use eostrata::Error;
use eostrata_cli::cache::{self, Cache};
use eostrata_cli::{cmd_eo, cmd_map, cmd_newton, cmd_verify, exit_code, Convention, Format, Options, EXIT_PARSE};

#[derive(Parser)]
#[command(name = "eostrata", version, about = "Ekedahl-Oort and Newton strata combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List ᴶW with lengths, Galois orbits and (Siegel case) ε-vectors.
    Eo(Common),
    /// List B(G,μ) with its partial order.
    Newton(Common),
    /// Print b ↦ w(b) together with Min(w) and generic Newton points.
    Map(Common),
    /// Run the invariant suite; exits 1 if any check fails.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Group spec JSON file.
    spec: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Append the Hasse diagram (eo).
    #[arg(long)]
    hasse: bool,
    /// Which parabolic type is attached to μ.
    #[arg(long = "j-convention", value_enum, default_value = "twisted")]
    convention: Convention,
    /// Neither read nor write the report cache.
    #[arg(long)]
    no_cache: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common, run): (&str, &Common, fn(&GroupSpec, &Options) -> eostrata::Result<_>) = match &cli.command {
        Command::Eo(c) => ("eo", c, cmd_eo),
        Command::Newton(c) => ("newton", c, cmd_newton),
        Command::Map(c) => ("map", c, cmd_map),
        Command::Verify(c) => ("verify", c, cmd_verify),
    };
    let text = match std::fs::read_to_string(&common.spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.spec.display());
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let spec = match GroupSpec::from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", common.spec.display());
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let opts = Options { format: common.format, hasse: common.hasse, convention: common.convention };
    let cache = if common.no_cache { None } else { cache::default_dir().map(Cache::new) };
    let key = cache::key(&spec.canonical_json(), name, &opts.fingerprint());

    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        print!("{hit}");
        return ExitCode::SUCCESS;
    }
    match run(&spec, &opts) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.output.as_bytes());
            if outcome.code == 0 {
                if let Some(c) = &cache {
                    if let Err(e) = c.put(&key, &outcome.output) {
                        eprintln!("warning: cache write to {} failed: {e}", c.dir().display());
                    }
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            match &e {
                Error::Unsupported(_) | Error::NotGaloisStable(_) => eprintln!("unsupported: {e}"),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
