//! Command-line front end: satisfaction checks, decomposition,
//! membership, partition-operation audits, prolongation, sum
//! construction, searches and the fixture suite.
//!
//! Exit codes: 0 when the property holds or the construction succeeds,
//! 1 when a property fails or a witness is found, 2 on usage or format
//! errors, 3 when an evaluation budget is exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semisum::algebra::{
    format_assignment, parse_ualg_file, write_ualg, AlgebraError, FiniteAlgebra, Verdict,
};
use semisum::congruence::CongruenceError;
use semisum::equation::QuasiIdentity;
use semisum::fixtures::run_paper_suite;
use semisum::maltsev::{
    decompose, in_product_with_s_budget, in_relative_product_budget, partition_operation_report,
};
use semisum::search::{band_census, enumerate_lz_sums, find_separating_model, SearchError};
use semisum::semilattice_replica;
use semisum::sums::{lallement_sum, parse_sum_file, plonka_sum, SumError};
use semisum::term::numbered_vars;
use semisum::{prolong_set, AxiomSet, Identity, Signature, Term};

#[derive(Parser)]
#[command(name = "semisum", about = "finite semilattice-sum workbench", version)]
struct Cli {
    /// Evaluation budget: maximum assignments per formula.
    #[arg(long, global = true, default_value_t = semisum::algebra::DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlgebraArg {
    /// .ualg file; the first algebra in the file is used unless --name
    /// is given.
    #[arg(short = 'a', long = "algebra")]
    algebra: PathBuf,
    /// Name of the algebra inside the file.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check an identity or quasi-identity against an algebra.
    Check {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// A formula (`lhs = rhs`, premises with `&` and `->`), or a
        /// path to an .eq file whose every formula is checked.
        #[arg(short = 'e', long = "formula")]
        formula: String,
    },
    /// Print the semilattice replica congruence.
    Replica {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Print the replica, the quotient semilattice and the blocks.
    Decompose {
        #[command(flatten)]
        algebra: AlgebraArg,
    },
    /// Decide membership among semilattice sums of models of -v,
    /// optionally relative to an ambient axiom set -w.
    Member {
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(short = 'v', long = "variety")]
        variety: PathBuf,
        #[arg(short = 'w', long = "ambient")]
        ambient: Option<PathBuf>,
    },
    /// Audit a binary term as a (pseudo)partition operation.
    Paudit {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Two-variable term, e.g. "(join x (meet x y))".
        #[arg(short = 't', long = "term")]
        term: String,
    },
    /// Print a bounded prolongation of an axiom set.
    Prolong {
        #[arg(short = 'v', long = "variety")]
        variety: PathBuf,
        #[arg(short = 'm', long, default_value_t = 2)]
        max_m: usize,
        #[arg(short = 'd', long, default_value_t = 2)]
        depth: usize,
    },
    /// Build the Płonka sum described by a .sum file.
    Plonka {
        #[arg(short = 's', long = "system")]
        system: PathBuf,
    },
    /// Build the Lallement sum described by a .sum file.
    Lallement {
        #[arg(short = 's', long = "system")]
        system: PathBuf,
    },
    /// Build the free semilattice on n generators.
    Freesl {
        #[arg(short = 'x', long = "generators")]
        generators: usize,
        /// Optional .ualg or .eq file supplying the signature; defaults
        /// to a single binary symbol.
        #[arg(long)]
        sig: Option<PathBuf>,
    },
    /// Census of all bands up to a size bound.
    CensusBands {
        #[arg(short = 'n', long, default_value_t = 4)]
        max_n: usize,
    },
    /// Search the left-zero sums over a semilattice for a model
    /// separating an identity.
    Separate {
        /// .ualg file with the base semilattice.
        #[arg(long = "lz-sum")]
        lz_sum: PathBuf,
        /// Name of the semilattice inside the file.
        #[arg(long)]
        name: Option<String>,
        /// Comma-separated block sizes, one per semilattice element.
        #[arg(long)]
        blocks: String,
        #[arg(short = 'e', long = "formula")]
        formula: String,
    },
    /// Run the shipped fixture suite.
    PaperSuite,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Format(String),
    Budget(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Format(msg) | CliError::Budget(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => 3,
            _ => 2,
        }
    }
}

fn classify_algebra(err: AlgebraError) -> CliError {
    match err {
        AlgebraError::BudgetExceeded { .. } => CliError::Budget(err.to_string()),
        other => CliError::Format(other.to_string()),
    }
}

fn classify_congruence(err: CongruenceError) -> CliError {
    match err {
        CongruenceError::Algebra(inner) => classify_algebra(inner),
        other => CliError::Format(other.to_string()),
    }
}

fn classify_sum(err: SumError) -> CliError {
    match err {
        SumError::Algebra(inner) => classify_algebra(inner),
        SumError::Congruence(inner) => classify_congruence(inner),
        other => CliError::Format(other.to_string()),
    }
}

fn classify_search(err: SearchError) -> CliError {
    match err {
        SearchError::Algebra(inner) => classify_algebra(inner),
        SearchError::Congruence(inner) => classify_congruence(inner),
        other => CliError::Format(other.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load_algebra(arg: &AlgebraArg) -> Result<FiniteAlgebra, CliError> {
    let text = read_file(&arg.algebra)?;
    let (_, algebras) = parse_ualg_file(&text).map_err(classify_algebra)?;
    match &arg.name {
        None => Ok(algebras.into_iter().next().expect("parser requires an algebra")),
        Some(name) => algebras
            .into_iter()
            .find(|a| a.name() == name.as_str())
            .ok_or_else(|| CliError::Format(format!("no algebra named `{name}` in the file"))),
    }
}

fn load_axioms(path: &Path, ambient: Option<&Signature>) -> Result<AxiomSet, CliError> {
    let text = read_file(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "axioms".to_string());
    AxiomSet::parse(&text, name, ambient).map_err(|e| CliError::Format(e.to_string()))
}

const HOLDS: ExitCode = ExitCode::SUCCESS;
const FAILS: ExitCode = ExitCode::FAILURE;

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let budget = cli.budget;
    match cli.command {
        Command::Check { algebra, formula } => {
            let alg = load_algebra(&algebra)?;
            let formulas: Vec<QuasiIdentity> = if Path::new(&formula).is_file() {
                let ax = load_axioms(Path::new(&formula), Some(alg.signature()))?;
                ax.identities
                    .into_iter()
                    .map(|id| QuasiIdentity { premises: Vec::new(), conclusion: id })
                    .chain(ax.quasi_identities)
                    .collect()
            } else {
                vec![QuasiIdentity::parse(&formula, alg.signature())
                    .map_err(|e| CliError::Format(e.to_string()))?]
            };
            let mut failed = false;
            for q in &formulas {
                match alg
                    .satisfies_quasi_budget(q, budget)
                    .map_err(classify_algebra)?
                {
                    Verdict::Holds => println!("HOLDS {q}"),
                    Verdict::Fails { witness, .. } => {
                        failed = true;
                        println!("FAILS {q} at {}", format_assignment(&witness));
                    }
                }
            }
            Ok(if failed { FAILS } else { HOLDS })
        }
        Command::Replica { algebra } => {
            let alg = load_algebra(&algebra)?;
            let replica = semilattice_replica(&alg).map_err(classify_congruence)?;
            println!("replica: {replica}");
            Ok(HOLDS)
        }
        Command::Decompose { algebra } => {
            let alg = load_algebra(&algebra)?;
            let dec = decompose(&alg).map_err(classify_congruence)?;
            println!("replica: {}", dec.replica);
            print!("{}", write_ualg(dec.quotient.signature(), std::slice::from_ref(&dec.quotient)));
            for block in &dec.blocks {
                println!(
                    "block {{{}}}:",
                    block
                        .elements
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                print!("{}", write_ualg(block.algebra.signature(), std::slice::from_ref(&block.algebra)));
            }
            Ok(HOLDS)
        }
        Command::Member { algebra, variety, ambient } => {
            let alg = load_algebra(&algebra)?;
            let v = load_axioms(&variety, Some(alg.signature()))?;
            match ambient {
                None => {
                    let report = in_product_with_s_budget(&alg, &v, budget)
                        .map_err(classify_congruence)?;
                    println!("{report}");
                    Ok(if report.member { HOLDS } else { FAILS })
                }
                Some(w) => {
                    let w = load_axioms(&w, Some(alg.signature()))?;
                    let report = in_relative_product_budget(&alg, &v, &w, budget)
                        .map_err(classify_congruence)?;
                    println!("{report}");
                    Ok(if report.member { HOLDS } else { FAILS })
                }
            }
        }
        Command::Paudit { algebra, term } => {
            let alg = load_algebra(&algebra)?;
            let t = Term::parse(&term, alg.signature())
                .map_err(|e| CliError::Format(e.to_string()))?;
            let report = partition_operation_report(&alg, &t).map_err(classify_congruence)?;
            println!("{report}");
            Ok(if report.partition_holds { HOLDS } else { FAILS })
        }
        Command::Prolong { variety, max_m, depth } => {
            let ax = load_axioms(&variety, None)?;
            let out = prolong_set(&ax, max_m, depth);
            println!("# {} identities", out.identities.len());
            for id in &out.identities {
                println!("{id}");
            }
            Ok(HOLDS)
        }
        Command::Plonka { system } => {
            let text = read_file(&system)?;
            let file = parse_sum_file(&text).map_err(classify_sum)?;
            let sys = file.into_plonka().map_err(classify_sum)?;
            let (sum, dec) = plonka_sum(&sys).map_err(classify_sum)?;
            println!("# blocks: {}", dec.replica);
            print!("{}", write_ualg(sum.signature(), std::slice::from_ref(&sum)));
            Ok(HOLDS)
        }
        Command::Lallement { system } => {
            let text = read_file(&system)?;
            let file = parse_sum_file(&text).map_err(classify_sum)?;
            let data = file.into_lallement().map_err(classify_sum)?;
            let (sum, dec, strict) = lallement_sum(&data).map_err(classify_sum)?;
            println!("# blocks: {}", dec.replica);
            println!("# strict: {}", if strict { "yes" } else { "no" });
            print!("{}", write_ualg(sum.signature(), std::slice::from_ref(&sum)));
            Ok(HOLDS)
        }
        Command::Freesl { generators, sig } => {
            let signature = match sig {
                None => Signature::parse("mul 2").expect("valid signature"),
                Some(path) => {
                    let text = read_file(&path)?;
                    if text.trim_start().starts_with("signature") {
                        let ax = AxiomSet::parse(&text, "sig", None)
                            .map_err(|e| CliError::Format(e.to_string()))?;
                        ax.signature
                    } else {
                        Signature::parse(&text).map_err(|e| CliError::Format(e.to_string()))?
                    }
                }
            };
            let names = numbered_vars(generators);
            let (alg, labels) = semisum::free_semilattice(&signature, &names)
                .map_err(classify_sum)?;
            for (i, label) in labels.iter().enumerate() {
                println!("# {} = {{{}}}", i, label.join(","));
            }
            print!("{}", write_ualg(alg.signature(), std::slice::from_ref(&alg)));
            Ok(HOLDS)
        }
        Command::CensusBands { max_n } => {
            let report = band_census(max_n).map_err(classify_search)?;
            println!("{report}");
            let clean = report.equivalence_violations == 0 && report.rectangular_violations == 0;
            Ok(if clean { HOLDS } else { FAILS })
        }
        Command::Separate { lz_sum, name, blocks, formula } => {
            let semilattice = load_algebra(&AlgebraArg { algebra: lz_sum, name })?;
            let block_sizes: Vec<usize> = blocks
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse()
                        .map_err(|_| CliError::Format(format!("bad block size `{tok}`")))
                })
                .collect::<Result<_, _>>()?;
            let id = Identity::parse(&formula, semilattice.signature())
                .map_err(|e| CliError::Format(e.to_string()))?;
            let gen = enumerate_lz_sums(&semilattice, &block_sizes).map_err(classify_search)?;
            match find_separating_model(gen, &id).map_err(classify_algebra)? {
                Some((alg, witness)) => {
                    println!("# witness at {}", format_assignment(&witness));
                    print!("{}", write_ualg(alg.signature(), std::slice::from_ref(&alg)));
                    Ok(FAILS)
                }
                None => {
                    println!("no separating model");
                    Ok(HOLDS)
                }
            }
        }
        Command::PaperSuite => {
            let report = run_paper_suite();
            println!("{report}");
            Ok(if report.passed() { HOLDS } else { FAILS })
        }
    }
}
