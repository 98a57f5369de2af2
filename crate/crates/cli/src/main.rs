use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand as ClapSubcommand};
use cremona_cli::report::{run, RunConfig, Subcommand, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "cremona", about = "Decide linearizability of finite groups acting on rational surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Print the verdict, the rule used and a witness.
    Decide { input: PathBuf },
    /// Group order, family and surface-specific invariants.
    Classify { input: PathBuf },
    /// Goursat data of a group acting on the quadric.
    Goursat { input: PathBuf },
    /// Orbit lengths of the given points.
    Orbits {
        input: PathBuf,
        /// JSON list of points in the surface's coordinates.
        #[arg(long)]
        points: String,
    },
    /// Human-readable chain of links.
    Witness { input: PathBuf },
    /// Check a conjugation of plane Cremona maps at random points.
    VerifyMap { input: PathBuf },
}

fn read_input(path: &PathBuf) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, path, points) = match &cli.command {
        Command::Decide { input } => (Subcommand::Decide, input, None),
        Command::Classify { input } => (Subcommand::Classify, input, None),
        Command::Goursat { input } => (Subcommand::Goursat, input, None),
        Command::Orbits { input, points } => (Subcommand::Orbits, input, Some(points.as_str())),
        Command::Witness { input } => (Subcommand::Witness, input, None),
        Command::VerifyMap { input } => (Subcommand::VerifyMap, input, None),
    };
    let text = match read_input(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_INVALID as u8);
        }
    };
    let cap_override = match std::env::var("CREMONA_CAP") {
        Ok(v) => match v.parse() {
            Ok(c) => Some(c),
            Err(_) => {
                eprintln!("CREMONA_CAP must be a positive integer");
                return ExitCode::from(EXIT_INVALID as u8);
            }
        },
        Err(_) => None,
    };
    let out = run(cmd, &text, &RunConfig { cap_override, points });
    print!("{}", out.stdout);
    ExitCode::from(out.code as u8)
}
