use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use d0moduli_cli::commands::{self, CliError};

#[derive(Parser)]
#[command(name = "d0", version, about = "Exact analysis of D0-brane points on affine and projective targets")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: admissibility, components, Chan-Paton lengths, gauge, classification, Chow cycle.
    Analyze {
        scene: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Gluing diagnostics only.
    GlueCheck {
        scene: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Hilbert and Chow flags.
    Classify {
        scene: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// The associated quiver of the image.
    Quiver {
        scene: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        dot: bool,
    },
    /// Merge and split events along a path, as JSON lines.
    Deform {
        scene: PathBuf,
        #[arg(long)]
        path: String,
        /// Width below which irrational event times are left as intervals.
        #[arg(long)]
        resolution: Option<String>,
        /// Traverse the path backwards.
        #[arg(long)]
        reverse: bool,
    },
    /// Compare two Jordan types such as "0:[2,1];1:[1]".
    OrbitCompare {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// The point of the Hilbert scheme for an ideal of finite colength.
    Hilb {
        #[arg(long, allow_hyphen_values = true)]
        ideal: String,
        /// Use lex instead of degrevlex.
        #[arg(long)]
        lex: bool,
    },
    /// The diagonal point for a multiset such as "(1, 2); (3, 4)".
    Chow {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Read the tuples as homogeneous coordinates on P^r.
        #[arg(long)]
        projective: bool,
    },
    /// Print a scene in canonical form.
    Print { scene: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Analyze { scene, point, json } => commands::analyze_cmd(&read(&scene)?, point.as_deref(), json),
        Command::GlueCheck { scene, point, json } => commands::glue_check_cmd(&read(&scene)?, point.as_deref(), json),
        Command::Classify { scene, point, json } => commands::classify_cmd(&read(&scene)?, point.as_deref(), json),
        Command::Quiver { scene, point, dot } => commands::quiver_cmd(&read(&scene)?, point.as_deref(), dot),
        Command::Deform { scene, path, resolution, reverse } => {
            commands::deform_cmd(&read(&scene)?, &path, resolution.as_deref(), reverse)
        }
        Command::OrbitCompare { left, right } => commands::orbit_compare_cmd(&left, &right),
        Command::Hilb { ideal, lex } => commands::hilb_cmd(&ideal, lex),
        Command::Chow { points, projective } => commands::chow_cmd(&points, projective),
        Command::Print { scene } => commands::print_cmd(&read(&scene)?),
    }
}

fn main() -> ExitCode {
    match run(Args::parse().command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
