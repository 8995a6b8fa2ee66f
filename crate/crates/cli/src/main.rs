//! Command line front end. Every subcommand maps to one library
//! operation; outputs are compact JSON on stdout (DOT for trees when
//! requested), identical across runs for identical inputs.
//!
//! Exit codes: 0 on success, 1 on a domain error or a failed check,
//! 2 on a usage error.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ultrapath_core::embed::{
    check_extension_properties, check_scheme_criteria, find_isometric_embedding,
};
use ultrapath_core::generators::{max_space, omega_space, prop2_space, ultv_approx, LevelSpec};
use ultrapath_core::json::{self, PathOut};
use ultrapath_core::monoid::{embed_into_omega, path_sum, run_check, WordHost};
use ultrapath_core::path::{
    enumerate_paths, path_ball, path_distance, path_infimum, path_leq, PathBar,
};
use ultrapath_core::ramsey::{
    check_divisible, check_necessary_scheme, check_necessary_space, subdominant_dstar, SearchMode,
};
use ultrapath_core::rat::{ExtRat, Rat};
use ultrapath_core::space::{Ball, Space, SpectrumSet};
use ultrapath_core::tree::{space_to_tree, Degree, TreeScheme};

#[derive(Parser)]
#[command(name = "ultrapath", version, about = "Finite ultrametric space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a space: validation, spectra, nerve, ball tree.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Generate named spaces.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Embedding search.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Structural criteria checks on spaces and schemes.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Path calculus over a host space.
    #[command(subcommand)]
    Path(PathCmd),
    /// Word hosts and the path monoid.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Subdominant ultrametric and divisibility search.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct InputArg {
    /// Input file; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Check the matrix is a valid ultrametric and report its shape.
    Validate(InputArg),
    /// Print the spectrum and the per-point spectra.
    Spectrum(InputArg),
    /// Print the closed-ball nerve.
    Nerve(InputArg),
    /// Print the nerve as a valued tree.
    Tree {
        #[command(flatten)]
        input: InputArg,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Space on the spectrum values themselves, d(u,v) = max(u,v).
    Max {
        /// Spectrum values, comma separated; must contain 0.
        #[arg(long, value_delimiter = ',', required = true)]
        spec: Vec<Rat>,
    },
    /// Word space over explicit levels and degrees.
    Omega {
        /// Level values, comma separated, strictly decreasing.
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<Rat>,
        /// Per-level degrees ("unbounded" or an integer >= 2); all
        /// unbounded when omitted.
        #[arg(long, value_delimiter = ',', value_parser = degree_arg)]
        degrees: Option<Vec<Degree>>,
        #[arg(long)]
        width: u32,
    },
    /// Width truncation of the homogeneous space with a given spectrum.
    Ultv {
        /// Spectrum values, comma separated; must contain 0.
        #[arg(long, value_delimiter = ',', required = true)]
        spec: Vec<Rat>,
        #[arg(long)]
        width: u32,
    },
    /// Disjoint union of sub-spectrum blocks at the maximal distance.
    Prop2 {
        /// Spectrum values, comma separated; must contain 0.
        #[arg(long, value_delimiter = ',', required = true)]
        spec: Vec<Rat>,
        #[arg(long)]
        width: u32,
        /// Largest number of sub-spectrum families to include.
        #[arg(long, default_value_t = 8)]
        family_cap: u32,
    },
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Search for an isometric copy of a pattern inside the input space.
    Find {
        #[command(flatten)]
        input: InputArg,
        /// Pattern space file.
        #[arg(long)]
        pattern: PathBuf,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Extension properties and up-directed spectra of a space.
    Space(InputArg),
    /// Structural criteria of a tree scheme.
    Scheme(InputArg),
    /// Necessary conditions: well-founded balls, attained diameter.
    Theorem4 {
        #[command(flatten)]
        input: InputArg,
        /// Read a tree scheme instead of a space.
        #[arg(long)]
        scheme: bool,
    },
    /// Structural criteria of a tree scheme (alias of `check scheme`).
    Theorem6(InputArg),
}

#[derive(Subcommand)]
enum PathCmd {
    /// List all (alpha, beta)-paths of the input space.
    Enum {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        alpha: ExtRat,
        #[arg(long)]
        beta: Rat,
    },
    /// Distance between two paths.
    Dist {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Infimum of two paths.
    Inf {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Order test: is p below q?
    Leq {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Members of the closed ball of a given radius around a path.
    Ball {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        radius: Rat,
    },
}

#[derive(Subcommand)]
enum MonoidCmd {
    /// Embed the input space into a word host over its spectrum.
    Embed(InputArg),
    /// Add two words of a host; fails when the sum leaves the window.
    Add {
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<Rat>,
        #[arg(long)]
        width: u32,
        /// Left word, coordinates comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<u32>,
        /// Right word.
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<u32>,
    },
    /// Sum of two paths over a word host.
    Pathsum {
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<Rat>,
        #[arg(long)]
        width: u32,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Run the monoid invariant suite on a word host.
    Check {
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<Rat>,
        #[arg(long)]
        width: u32,
        /// Seed for sampled laws; exhaustive laws ignore it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Subdominant ultrametric of an arbitrary metric.
    Dstar(InputArg),
    /// Search colorings of the input space for one avoiding a pattern.
    Divisible {
        #[command(flatten)]
        input: InputArg,
        /// Pattern space file.
        #[arg(long)]
        pattern: PathBuf,
        /// Number of colors.
        #[arg(long)]
        k: usize,
        /// Sample colorings instead of exhausting them.
        #[arg(long)]
        samples: Option<u64>,
        /// Seed for sampled mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Necessary conditions (alias of `check theorem4`).
    Check {
        #[command(flatten)]
        input: InputArg,
        /// Read a tree scheme instead of a space.
        #[arg(long)]
        scheme: bool,
    },
}

fn degree_arg(s: &str) -> Result<Degree, String> {
    if s == "unbounded" {
        Ok(Degree::Unbounded)
    } else {
        s.parse::<u32>()
            .map(Degree::Finite)
            .map_err(|_| format!("expected an integer or \"unbounded\", got \"{s}\""))
    }
}

fn read_input(input: &InputArg) -> Result<String, String> {
    match &input.input {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| format!("standard input: {e}"))?;
            Ok(text)
        }
    }
}

fn read_space(input: &InputArg) -> Result<Space, String> {
    json::parse_space(&read_input(input)?).map_err(|e| e.to_string())
}

fn read_scheme(input: &InputArg) -> Result<TreeScheme, String> {
    json::parse_scheme(&read_input(input)?).map_err(|e| e.to_string())
}

fn read_path_file(path: &PathBuf, space: &Space) -> Result<ultrapath_core::path::AlphaPath, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    json::parse_path(&text, space).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("reports serialize"));
}

#[derive(Serialize)]
struct ValidateOut {
    valid: bool,
    points: usize,
    diameter: Rat,
    spectrum: SpectrumSet,
}

#[derive(Serialize)]
struct InvalidOut {
    valid: bool,
    error: String,
}

#[derive(Serialize)]
struct SpectrumOut {
    spectrum: SpectrumSet,
    multispectrum: Vec<SpectrumSet>,
}

#[derive(Serialize)]
struct NerveOut {
    nerve: Vec<Ball>,
}

#[derive(Serialize)]
struct EmbedOut {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<Vec<(usize, usize)>>,
}

#[derive(Serialize)]
struct EnumOut<'a> {
    alpha: ExtRat,
    beta: Rat,
    count: usize,
    paths: Vec<PathOut<'a>>,
}

#[derive(Serialize)]
struct DistOut {
    distance: ExtRat,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum InfOut<'a> {
    Path { path: PathOut<'a> },
    Bottom { delta: ExtRat },
}

#[derive(Serialize)]
struct LeqOut {
    leq: bool,
}

#[derive(Serialize)]
struct BallOut<'a> {
    radius: Rat,
    count: usize,
    paths: Vec<PathOut<'a>>,
}

#[derive(Serialize)]
struct WordsOut {
    levels: Vec<Rat>,
    words: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct SumOut {
    sum: Vec<u32>,
}

/// Runs one command. `Ok(true)` is a clean exit, `Ok(false)` a failed
/// check, `Err` a domain error reported on stderr.
fn run(command: Command) -> Result<bool, String> {
    match command {
        Command::Space(cmd) => run_space(cmd),
        Command::Gen(cmd) => run_gen(cmd),
        Command::Embed(cmd) => run_embed(cmd),
        Command::Check(cmd) => run_check_cmd(cmd),
        Command::Path(cmd) => run_path(cmd),
        Command::Monoid(cmd) => run_monoid(cmd),
        Command::Ramsey(cmd) => run_ramsey(cmd),
    }
}

fn run_space(cmd: SpaceCmd) -> Result<bool, String> {
    match cmd {
        SpaceCmd::Validate(input) => match json::parse_space(&read_input(&input)?) {
            Ok(space) => {
                emit(&ValidateOut {
                    valid: true,
                    points: space.len(),
                    diameter: space.diameter(),
                    spectrum: space.spectrum(),
                });
                Ok(true)
            }
            Err(e) => {
                emit(&InvalidOut { valid: false, error: e.to_string() });
                Ok(false)
            }
        },
        SpaceCmd::Spectrum(input) => {
            let space = read_space(&input)?;
            emit(&SpectrumOut {
                spectrum: space.spectrum(),
                multispectrum: space.multispectrum(),
            });
            Ok(true)
        }
        SpaceCmd::Nerve(input) => {
            let space = read_space(&input)?;
            emit(&NerveOut { nerve: space.nerve() });
            Ok(true)
        }
        SpaceCmd::Tree { input, format } => {
            let space = read_space(&input)?;
            let tree = space_to_tree(&space);
            match format {
                Format::Json => println!("{}", json::print_tree(&tree)),
                Format::Dot => print!("{}", tree.to_dot()),
            }
            Ok(true)
        }
    }
}

fn run_gen(cmd: GenCmd) -> Result<bool, String> {
    let space = match cmd {
        GenCmd::Max { spec } => {
            max_space(&SpectrumSet::from_values(spec)).map_err(|e| e.to_string())?
        }
        GenCmd::Omega { levels, degrees, width } => {
            let spec = match degrees {
                None => LevelSpec::unbounded(levels),
                Some(degrees) => LevelSpec::new(levels, degrees),
            }
            .map_err(|e| e.to_string())?;
            omega_space(&spec, width).map_err(|e| e.to_string())?
        }
        GenCmd::Ultv { spec, width } => {
            ultv_approx(&SpectrumSet::from_values(spec), width).map_err(|e| e.to_string())?
        }
        GenCmd::Prop2 { spec, width, family_cap } => {
            prop2_space(&SpectrumSet::from_values(spec), width, family_cap)
                .map_err(|e| e.to_string())?
        }
    };
    println!("{}", json::print_space(&space));
    Ok(true)
}

fn run_embed(cmd: EmbedCmd) -> Result<bool, String> {
    match cmd {
        EmbedCmd::Find { input, pattern } => {
            let target = read_space(&input)?;
            let text = fs::read_to_string(&pattern)
                .map_err(|e| format!("{}: {e}", pattern.display()))?;
            let source = json::parse_space(&text).map_err(|e| e.to_string())?;
            let found = find_isometric_embedding(&source, &target);
            emit(&EmbedOut {
                found: found.is_some(),
                map: found.map(|f| f.pairs().to_vec()),
            });
            Ok(true)
        }
    }
}

fn run_check_cmd(cmd: CheckCmd) -> Result<bool, String> {
    match cmd {
        CheckCmd::Space(input) => {
            let space = read_space(&input)?;
            let report = check_extension_properties(&space);
            emit(&report);
            Ok(report.spec_extension && report.up_directed)
        }
        CheckCmd::Scheme(input) | CheckCmd::Theorem6(input) => {
            let scheme = read_scheme(&input)?;
            let report = check_scheme_criteria(&scheme);
            emit(&report);
            Ok(report.satisfies_all)
        }
        CheckCmd::Theorem4 { input, scheme } => {
            let report = if scheme {
                check_necessary_scheme(&read_scheme(&input)?)
            } else {
                check_necessary_space(&read_space(&input)?)
            };
            emit(&report);
            Ok(report.satisfied)
        }
    }
}

fn run_path(cmd: PathCmd) -> Result<bool, String> {
    match cmd {
        PathCmd::Enum { input, alpha, beta } => {
            let space = read_space(&input)?;
            let paths = enumerate_paths(&space, alpha, beta).map_err(|e| e.to_string())?;
            emit(&EnumOut {
                alpha,
                beta,
                count: paths.len(),
                paths: paths.iter().map(PathOut::from).collect(),
            });
            Ok(true)
        }
        PathCmd::Dist { input, p, q } => {
            let space = read_space(&input)?;
            let p = read_path_file(&p, &space)?;
            let q = read_path_file(&q, &space)?;
            let distance = path_distance(&space, &p, &q).map_err(|e| e.to_string())?;
            emit(&DistOut { distance });
            Ok(true)
        }
        PathCmd::Inf { input, p, q } => {
            let space = read_space(&input)?;
            let p = read_path_file(&p, &space)?;
            let q = read_path_file(&q, &space)?;
            let inf = path_infimum(&space, &p, &q).map_err(|e| e.to_string())?;
            match &inf {
                PathBar::Path(path) => emit(&InfOut::Path { path: PathOut::from(path) }),
                PathBar::Bottom(_) => emit(&InfOut::Bottom { delta: inf.delta() }),
            }
            Ok(true)
        }
        PathCmd::Leq { input, p, q } => {
            let space = read_space(&input)?;
            let p = read_path_file(&p, &space)?;
            let q = read_path_file(&q, &space)?;
            let leq = path_leq(&p, &q).map_err(|e| e.to_string())?;
            emit(&LeqOut { leq });
            Ok(true)
        }
        PathCmd::Ball { input, p, radius } => {
            let space = read_space(&input)?;
            let p = read_path_file(&p, &space)?;
            let members = path_ball(&space, &p, radius).map_err(|e| e.to_string())?;
            emit(&BallOut {
                radius,
                count: members.len(),
                paths: members.iter().map(PathOut::from).collect(),
            });
            Ok(true)
        }
    }
}

fn run_monoid(cmd: MonoidCmd) -> Result<bool, String> {
    match cmd {
        MonoidCmd::Embed(input) => {
            let space = read_space(&input)?;
            let (levels, words) = embed_into_omega(&space);
            emit(&WordsOut { levels, words });
            Ok(true)
        }
        MonoidCmd::Add { levels, width, x, y } => {
            let host = WordHost::new(&levels, width).map_err(|e| e.to_string())?;
            let i = host
                .word_index(&x)
                .ok_or_else(|| format!("word {x:?} is not in the host window"))?;
            let j = host
                .word_index(&y)
                .ok_or_else(|| format!("word {y:?} is not in the host window"))?;
            let sum = host
                .add(i, j)
                .ok_or_else(|| "sum leaves the host window".to_string())?;
            emit(&SumOut { sum: host.words()[sum].clone() });
            Ok(true)
        }
        MonoidCmd::Pathsum { levels, width, p, q } => {
            let host = WordHost::new(&levels, width).map_err(|e| e.to_string())?;
            let op = host.point_op();
            let p = read_path_file(&p, host.space())?;
            let q = read_path_file(&q, host.space())?;
            let sum = path_sum(host.space(), &op, &p, &q).map_err(|e| e.to_string())?;
            println!("{}", json::print_path(&sum));
            Ok(true)
        }
        MonoidCmd::Check { levels, width, seed } => {
            let report = run_check(&levels, width, seed).map_err(|e| e.to_string())?;
            emit(&report);
            Ok(report.all_ok)
        }
    }
}

fn run_ramsey(cmd: RamseyCmd) -> Result<bool, String> {
    match cmd {
        RamseyCmd::Dstar(input) => {
            let (dist, labels) =
                json::parse_matrix(&read_input(&input)?).map_err(|e| e.to_string())?;
            let space = subdominant_dstar(&dist, labels).map_err(|e| e.to_string())?;
            println!("{}", json::print_space(&space));
            Ok(true)
        }
        RamseyCmd::Divisible { input, pattern, k, samples, seed } => {
            let space = read_space(&input)?;
            let text = fs::read_to_string(&pattern)
                .map_err(|e| format!("{}: {e}", pattern.display()))?;
            let pattern = json::parse_space(&text).map_err(|e| e.to_string())?;
            let mode = match samples {
                None => SearchMode::Exhaustive,
                Some(samples) => SearchMode::Sampled { samples, seed },
            };
            let verdict =
                check_divisible(&space, &pattern, k, mode).map_err(|e| e.to_string())?;
            emit(&verdict);
            Ok(true)
        }
        RamseyCmd::Check { input, scheme } => {
            let report = if scheme {
                check_necessary_scheme(&read_scheme(&input)?)
            } else {
                check_necessary_space(&read_space(&input)?)
            };
            emit(&report);
            Ok(report.satisfied)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
