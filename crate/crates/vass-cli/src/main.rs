//! Command line front end. Exit codes are the machine contract: 0 for
//! success / reachable / accepted, 1 for unreachable / rejected, 2 for
//! unknown, 3 for usage, file, or analysis errors.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use vass_core::certify::{
    check_thick, check_thin, degenerate_thinness, CertifyError, DegenerateCase,
};
use vass_core::geodim::{cycle_space_basis, gdim};
use vass_core::linalg::Rational;
use vass_core::projection::{find_srp, support_projection, Orthant};
use vass_core::reach::{
    bounded_reach, decide_geo0, decide_reach, oracle_reach, reduce_3vass_to_2vass,
    reduce_to_zero_reach, ReachQuery, ReducedStateLabel, ReductionOutput, Verdict,
};
use vass_core::Configuration;

use vass_cli::format::{
    parse_run, parse_thick_certificate, parse_thin_certificate, parse_vass, serialize_vass,
    CertFileError, VassDocument,
};
use vass_cli::gen;

#[derive(Parser)]
#[command(
    name = "vass",
    version,
    about = "Exact analysis of vector addition systems with states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the geometric dimension (rank of the cycle space)
    Gdim { file: PathBuf },
    /// Print the canonical rational basis of the cycle space, one row per line
    Basis { file: PathBuf },
    /// Report whether the cycle space is a proper plane or degenerate (i/ii/iii)
    Classify { file: PathBuf },
    /// Fold the coordinates outside the cycle-space support into states
    ProjectSupport {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Abort if the projection would need more states than this
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        /// Keep the full folded box instead of pruning to reachable states
        #[arg(long)]
        unpruned: bool,
    },
    /// Wrap a query between named configurations into a 0-reachability instance
    ReduceZero {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Reduce a 3-counter 0-reachability query with planar cycle space to 2 counters
    #[command(name = "reduce-3to2")]
    Reduce3to2 {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(short, long)]
        out: PathBuf,
        /// Abort if the reduction would need more states than this
        #[arg(long, default_value_t = 1_000_000)]
        state_cap: u64,
    },
    /// Decide reachability; exit 0 reachable (witness on stdout), 1 unreachable, 2 unknown
    Reach {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
        /// Run-length budget for the auto and bounded strategies
        #[arg(long, default_value_t = 100_000)]
        max_len: usize,
        /// Counter norm cap for the oracle strategy
        #[arg(long, default_value_t = 1_000)]
        norm_cap: u64,
        /// Exponent constant for the auto strategy's length bound; the
        /// default of 1 truncates the theoretical bound unless raised
        #[arg(long, default_value_t = 1)]
        exp_const: u32,
    },
    /// Check a run certificate; exit 0 accepted, 1 rejected with the violated clause
    CheckCert {
        file: PathBuf,
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, value_enum)]
        kind: CertKind,
    },
    /// Generate a seeded random instance; identical flags give identical bytes
    Gen {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        states: usize,
        #[arg(long)]
        trans: usize,
        #[arg(long)]
        norm: u64,
        #[arg(long)]
        seed: u64,
        /// Rejection-sample until the instance has this geometric dimension
        #[arg(long)]
        gdim: Option<usize>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Auto,
    Geo0,
    Bounded,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    Thin,
    Thick,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(3)
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn load_doc(path: &Path) -> Result<VassDocument, String> {
    parse_vass(&read_file(path)?).map_err(|e| format!("{}: {}", path.display(), e))
}

fn named_config(doc: &VassDocument, name: &str) -> Result<Configuration, String> {
    doc.config(name)
        .cloned()
        .ok_or_else(|| format!("no configuration named `{}` in the document", name))
}

fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn unique_name(base: String, used: &mut BTreeSet<String>) -> String {
    let mut name = base;
    while !used.insert(name.clone()) {
        name.push('_');
    }
    name
}

fn level_tag(level: &BigInt) -> String {
    if level.is_negative() {
        format!("n{}", -level)
    } else {
        level.to_string()
    }
}

/// Turns a reduction into a document, deriving state names from the labels.
fn reduction_doc(out: &ReductionOutput, input: &VassDocument) -> VassDocument {
    let mut used = BTreeSet::new();
    let state_names: Vec<String> = out
        .labels
        .iter()
        .map(|label| {
            let base = match label {
                ReducedStateLabel::Original { state } => input.state_names[*state].clone(),
                ReducedStateLabel::FreshSource => "zr_source".to_string(),
                ReducedStateLabel::FreshTarget => "zr_target".to_string(),
                ReducedStateLabel::Folded { state, fixed } => {
                    let mut name = input.state_names[*state].clone();
                    name.push_str("__");
                    for (i, (_, value)) in fixed.iter().enumerate() {
                        if i > 0 {
                            name.push('_');
                        }
                        write!(name, "{}", value).unwrap();
                    }
                    name
                }
                ReducedStateLabel::Level { state, level, checked } => format!(
                    "{}__{}{}",
                    input.state_names[*state],
                    if *checked { 'c' } else { 'u' },
                    level_tag(level)
                ),
                ReducedStateLabel::Gadget { state, level, threshold } => format!(
                    "{}__g{}_{}_{}",
                    input.state_names[*state],
                    level_tag(level),
                    threshold.0,
                    threshold.1
                ),
            };
            unique_name(base, &mut used)
        })
        .collect();
    let mut configs = BTreeMap::new();
    configs.insert("source".to_string(), out.source.clone());
    configs.insert("target".to_string(), out.target.clone());
    VassDocument { vass: out.vass.clone(), state_names, configs }
}

fn reduction_header(out: &ReductionOutput) -> String {
    let coords: Vec<String> = out.coordinate_map.iter().map(|c| c.to_string()).collect();
    format!("# length map: {}\n# kept input coordinates: {}\n", out.length_map, coords.join(" "))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Gdim { file } => {
            let doc = load_doc(&file)?;
            println!("{}", gdim(&doc.vass));
            Ok(0)
        }
        Command::Basis { file } => {
            let doc = load_doc(&file)?;
            for row in cycle_space_basis(&doc.vass).basis() {
                let cells: Vec<String> = row.iter().map(format_rational).collect();
                println!("{}", cells.join(" "));
            }
            Ok(0)
        }
        Command::Classify { file } => {
            let doc = load_doc(&file)?;
            match degenerate_thinness(&doc.vass) {
                Ok(result) => {
                    let case = match result.case {
                        DegenerateCase::LowDimension => "i",
                        DegenerateCase::TrivialIntersection => "ii",
                        DegenerateCase::RayIntersection => "iii",
                    };
                    println!("degenerate case={}", case);
                    Ok(0)
                }
                Err(CertifyError::NotDegenerate) => {
                    let space = cycle_space_basis(&doc.vass);
                    let witness = find_srp(&space, &Orthant::nonnegative(doc.vass.dim()))
                        .map_err(|e| e.to_string())?;
                    println!("proper i1={} i2={}", witness.i1, witness.i2);
                    let format_vec = |v: &vass_core::IntVector| {
                        let cells: Vec<String> =
                            v.entries().iter().map(|e| e.to_string()).collect();
                        cells.join(" ")
                    };
                    println!("u1 {}", format_vec(&witness.u1));
                    println!("u2 {}", format_vec(&witness.u2));
                    Ok(0)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::ProjectSupport { file, out, cap, unpruned } => {
            let doc = load_doc(&file)?;
            let projection =
                support_projection(&doc.vass, cap, unpruned).map_err(|e| e.to_string())?;
            let mut used = BTreeSet::new();
            let state_names: Vec<String> = projection
                .decode
                .iter()
                .map(|(state, fixed)| {
                    let mut name = doc.state_names[*state].clone();
                    if fixed.dim() > 0 {
                        name.push_str("__");
                        for (i, value) in fixed.entries().iter().enumerate() {
                            if i > 0 {
                                name.push('_');
                            }
                            write!(name, "{}", value).unwrap();
                        }
                    }
                    unique_name(name, &mut used)
                })
                .collect();
            let support: Vec<String> =
                projection.support.iter().map(|c| c.to_string()).collect();
            let header = format!("# support projection\n# kept coordinates: {}\n", support.join(" "));
            let out_doc = VassDocument {
                vass: projection.vass,
                state_names,
                configs: BTreeMap::new(),
            };
            write_file(&out, &format!("{}{}", header, serialize_vass(&out_doc)))?;
            Ok(0)
        }
        Command::ReduceZero { file, from, to, out } => {
            let doc = load_doc(&file)?;
            let query = ReachQuery::new(
                doc.vass.clone(),
                named_config(&doc, &from)?,
                named_config(&doc, &to)?,
            )
            .map_err(|e| e.to_string())?;
            let reduced = reduce_to_zero_reach(&query);
            let text = format!("{}{}", reduction_header(&reduced), serialize_vass(&reduction_doc(&reduced, &doc)));
            write_file(&out, &text)?;
            Ok(0)
        }
        Command::Reduce3to2 { file, from, to, out, state_cap } => {
            let doc = load_doc(&file)?;
            let query = ReachQuery::new(
                doc.vass.clone(),
                named_config(&doc, &from)?,
                named_config(&doc, &to)?,
            )
            .map_err(|e| e.to_string())?;
            let reduced = reduce_3vass_to_2vass(&query, state_cap).map_err(|e| e.to_string())?;
            let text = format!("{}{}", reduction_header(&reduced), serialize_vass(&reduction_doc(&reduced, &doc)));
            write_file(&out, &text)?;
            Ok(0)
        }
        Command::Reach { file, from, to, strategy, max_len, norm_cap, exp_const } => {
            let doc = load_doc(&file)?;
            let query = ReachQuery::new(
                doc.vass.clone(),
                named_config(&doc, &from)?,
                named_config(&doc, &to)?,
            )
            .map_err(|e| e.to_string())?;
            let answer = match strategy {
                Strategy::Auto => decide_reach(&query, max_len, exp_const),
                Strategy::Geo0 => decide_geo0(&query).map_err(|e| e.to_string())?,
                Strategy::Bounded => bounded_reach(&query, max_len, false),
                Strategy::Oracle => oracle_reach(&query, norm_cap),
            };
            Ok(match answer.verdict {
                Verdict::Reachable { witness } => {
                    let indices: Vec<String> =
                        witness.word.iter().map(|i| i.to_string()).collect();
                    println!("{}", indices.join(" "));
                    eprintln!("reachable ({})", answer.bound_used);
                    0
                }
                Verdict::Unreachable => {
                    eprintln!("unreachable ({})", answer.bound_used);
                    1
                }
                Verdict::Unknown => {
                    eprintln!("unknown ({})", answer.bound_used);
                    2
                }
            })
        }
        Command::CheckCert { file, run, cert, kind } => {
            let doc = load_doc(&file)?;
            let run = parse_run(&read_file(&run)?, &doc)
                .map_err(|e| format!("run file: {}", e))?;
            let cert_text = read_file(&cert)?;
            let outcome = match kind {
                CertKind::Thin => {
                    match parse_thin_certificate(&cert_text, doc.vass.dim()) {
                        Ok(cert) => check_thin(&doc.vass, &run, &cert),
                        Err(CertFileError::Invalid { line, reason }) => {
                            println!("rejected: line {}: {}", line, reason);
                            return Ok(1);
                        }
                        Err(CertFileError::Parse(e)) => {
                            return Err(format!("certificate file: {}", e))
                        }
                    }
                }
                CertKind::Thick => {
                    let cert = parse_thick_certificate(&cert_text)
                        .map_err(|e| format!("certificate file: {}", e))?;
                    let space = cycle_space_basis(&doc.vass);
                    let witness = find_srp(&space, &Orthant::nonnegative(doc.vass.dim()))
                        .map_err(|e| {
                            format!("cannot derive a sign-reflecting witness: {}", e)
                        })?;
                    check_thick(&doc.vass, &run, &cert, &witness)
                }
            };
            Ok(match outcome {
                Ok(()) => {
                    println!("accepted");
                    0
                }
                Err(CertifyError::Rejected(v)) => {
                    println!("rejected: {}", v);
                    1
                }
                Err(other) => {
                    println!("rejected: {}", other);
                    1
                }
            })
        }
        Command::Gen { dim, states, trans, norm, seed, gdim, out } => {
            let params = gen::GeneratorParams {
                dim,
                num_states: states,
                num_transitions: trans,
                max_norm: norm,
                seed,
                target_gdim: gdim,
            };
            let doc = gen::generate(&params).map_err(|e| e.to_string())?;
            write_file(&out, &serialize_vass(&doc))?;
            Ok(0)
        }
    }
}
