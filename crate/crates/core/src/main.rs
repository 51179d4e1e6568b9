use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mildcut::arithmetic::{
    find_prime, linking_matrix, linking_matrix_with_roots, parse_prime_list, Constraint,
};
use mildcut::combinatorics::{CutPair, FreenessOptions, Policy};
use mildcut::document::{PresentationDocument, RelationStyle};
use mildcut::magnus::{Expansion, GroupWord, DEFAULT_TRUNCATION};
use mildcut::pipeline::{
    CheckOptions, CutReport, CutRequest, LinkingReport, MildnessReport, SeriesReport,
};
use mildcut::poincare::DegreeSpec;
use mildcut::{Error, Result};

#[derive(Parser)]
#[command(
    name = "mildcut",
    version,
    about = "Magnus expansions, combinatorial freeness and Poincare series for pro-p presentations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a group word through x_i -> 1 + X_i.
    Expand {
        word: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        trunc: usize,
        /// Also print the highest term and the Zassenhaus degree.
        #[arg(long)]
        hat: bool,
    },
    /// Linking matrix, relation initial forms and hats of a tame prime set.
    Linking {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        primes: String,
        /// One primitive root per prime, replacing the smallest ones.
        #[arg(long)]
        roots: Option<String>,
        /// Print a presentation document instead of the report.
        #[arg(long, value_enum)]
        document: Option<DocumentStyle>,
    },
    /// Certify mildness of a presentation through its highest terms.
    Mildcheck {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Add a parametric cut member to a mild presentation and certify the union.
    Cut {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long, requires = "j0")]
        i0: Option<u16>,
        #[arg(long, requires = "i0")]
        j0: Option<u16>,
        /// The split c; inferred from the hats when omitted.
        #[arg(long)]
        split: Option<usize>,
    },
    /// Coefficients of (1 - d t + sum t^n_i + sum_{k >= m} t^k)^-1.
    Poincare {
        #[arg(long)]
        d: usize,
        /// Comma-separated relation degrees.
        #[arg(long, default_value = "")]
        rel_degrees: String,
        /// One relation in every degree from this one on.
        #[arg(long)]
        tail_from: Option<usize>,
        #[arg(long, visible_alias = "series-to", default_value_t = 12)]
        upto: usize,
    },
    /// Smallest tame prime satisfying residue constraints.
    Primesearch {
        #[arg(long)]
        p: u64,
        /// residue:<prime>:<yes|no>:<new-mod-old|old-mod-new>, comma-separated or repeated.
        #[arg(long, value_delimiter = ',')]
        constraints: Vec<String>,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DocumentStyle {
    Words,
    Forms,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Standard,
    Literal,
}

#[derive(Args)]
struct Source {
    /// Presentation document; `-` reads standard input.
    file: Option<String>,
    #[arg(long, conflicts_with = "file", requires = "primes")]
    p: Option<u64>,
    #[arg(long, conflicts_with = "file", requires = "p")]
    primes: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    trunc: usize,
    #[arg(long, visible_alias = "upto", default_value_t = 12)]
    series_to: usize,
    #[arg(long, value_enum, default_value = "standard")]
    policy: PolicyArg,
    /// Skip overlap tests of a member with itself.
    #[arg(long)]
    no_self_overlap: bool,
}

impl CheckArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            trunc: self.trunc,
            series_to: self.series_to,
            freeness: FreenessOptions {
                policy: match self.policy {
                    PolicyArg::Standard => Policy::Standard,
                    PolicyArg::Literal => Policy::Literal,
                },
                self_overlap: !self.no_self_overlap,
            },
        }
    }
}

impl Source {
    fn load(&self) -> Result<PresentationDocument> {
        match (&self.file, self.p, &self.primes) {
            (Some(path), _, _) => {
                let text = if path == "-" {
                    let mut s = String::new();
                    io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|e| Error::Usage(format!("reading standard input: {e}")))?;
                    s
                } else {
                    fs::read_to_string(path)
                        .map_err(|e| Error::Usage(format!("reading {path}: {e}")))?
                };
                text.parse()
            }
            (None, Some(p), Some(primes)) => {
                let m = linking_matrix(p, &parse_prime_list(primes)?)?;
                PresentationDocument::from_linking(&m, RelationStyle::Forms)
            }
            _ => Err(Error::Usage(
                "give a presentation file or --p with --primes".into(),
            )),
        }
    }
}

/// Standard output text and whether the checked property held.
type Outcome = (String, bool);

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Expand {
            word,
            p,
            d,
            trunc,
            hat,
        } => {
            let w: GroupWord = word.parse()?;
            let e = Expansion::new(p, d, trunc)?;
            let mut out = format!("{}\n", e.expand(&w)?);
            if hat {
                let h = e.word_hat(&w)?;
                out += &format!("hat: {h}\ndegree: {}\n", e.zassenhaus_degree(&w)?);
            }
            Ok((out, true))
        }
        Command::Linking {
            p,
            primes,
            roots,
            document,
        } => {
            let primes = parse_prime_list(&primes)?;
            let m = match roots {
                Some(r) => linking_matrix_with_roots(p, &primes, &parse_prime_list(&r)?)?,
                None => linking_matrix(p, &primes)?,
            };
            let out = match document {
                Some(style) => {
                    let style = match style {
                        DocumentStyle::Words => RelationStyle::Words,
                        DocumentStyle::Forms => RelationStyle::Forms,
                    };
                    PresentationDocument::from_linking(&m, style)?.to_string()
                }
                None => LinkingReport::new(m)?.to_string(),
            };
            Ok((out, true))
        }
        Command::Mildcheck { source, check } => {
            let doc = source.load()?;
            let report = MildnessReport::build(&doc, check.options())?;
            Ok((report.to_string(), report.is_free()))
        }
        Command::Cut {
            source,
            check,
            i0,
            j0,
            split,
        } => {
            let doc = source.load()?;
            let hats = mildcut::pipeline::document_hats(&doc, check.trunc)?;
            let req = CutRequest {
                split,
                manual: i0.zip(j0).map(|(i0, j0)| CutPair { i0, j0 }),
                options: check.options(),
                ..Default::default()
            };
            let report = CutReport::build(doc.p, doc.d, hats, &req)?;
            Ok((report.to_string(), report.is_free()))
        }
        Command::Poincare {
            d,
            rel_degrees,
            tail_from,
            upto,
        } => {
            let base: DegreeSpec = rel_degrees.parse()?;
            let spec = DegreeSpec::new(base.finite().to_vec(), tail_from.or(base.tail_from()))?;
            Ok((SeriesReport::new(d, &spec, upto).to_string(), true))
        }
        Command::Primesearch {
            p,
            constraints,
            bound,
        } => {
            let cs = constraints
                .iter()
                .filter(|c| !c.trim().is_empty())
                .map(|c| c.parse::<Constraint>())
                .collect::<Result<Vec<_>>>()?;
            let out = match find_prime(p, &cs, bound)? {
                Some(q) => format!("{q}\n"),
                None => "none\n".to_string(),
            };
            Ok((out, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, holds)) => {
            print!("{out}");
            ExitCode::from(if holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
