use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use super::service;
use super::spec::{named_sequence, BuildKind, BuildSpec};
use crate::constructions::build_qm;
use crate::quiver::{VertexId, WeightedQuiver};
use crate::roots::{parse_word, CartanData, CartanType};
use crate::seed::{MutationSequence, Seed, Tracking};
use crate::verifier::{self, BraidWeylConvention, Certificate, FormMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "clusterweyl", version, about = "Cluster mutation engine for Weyl group actions on quivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TypeArgs {
    /// Cartan type: A, B, C, D, G, A1A1 or At (affine A)
    #[arg(long = "type")]
    pub cartan: String,
    #[arg(long)]
    pub n: usize,
    /// Coxeter quiver arrows as `s:t` pairs, comma separated
    #[arg(long)]
    pub orientation: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum BuildCmd {
    Coxeter {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Qm {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Word {
        #[command(flatten)]
        t: TypeArgs,
        /// Letters, e.g. `123121` or `1,2,3`
        #[arg(long, conflicts_with = "flavor", required_unless_present = "flavor")]
        word: Option<String>,
        /// Decorated tabulated word: iQ, iQ*, iD or iDbar
        #[arg(long)]
        flavor: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Tilde {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    D {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, conflicts_with = "cycle")]
        power: Option<usize>,
        /// Cycle form (type A)
        #[arg(long)]
        cycle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    #[value(name = "quiver", alias = "R_preserves_quiver")]
    Quiver,
    ClosedForms,
    Braid,
    Peripheral,
    GreenDt,
    Equivalences,
    BraidWeylD,
    FPolynomial,
    Laurent,
    Separation,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named quiver and write its JSON
    Build {
        #[command(subcommand)]
        what: BuildCmd,
    },
    /// Mutate a quiver file at one or more vertices in order
    Mutate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, required = true)]
        at: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sequence on a quiver file and dump the resulting seed
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        /// Sequence JSON, inline or a file path
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        seq: Option<String>,
        /// Named sequence, e.g. R, Rword, T, sigma_Q, DT
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value = "{}")]
        params: String,
        /// Families to track: a, x, principal
        #[arg(long, value_delimiter = ',', default_value = "a")]
        track: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a check and write its certificate
    Verify {
        check: CheckName,
        #[arg(long = "type")]
        cartan: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// closed-forms: A, X, tropical or decorated
        #[arg(long, default_value = "tropical")]
        mode: String,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        orientation: Option<String>,
        /// Symbolic instead of tropical certification of braid relations
        #[arg(long)]
        symbolic: bool,
        /// Random sequences for laurent and separation
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Certificate path; defaults to `<check>.cert.json`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a quiver file to DOT or normalized JSON
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, conflicts_with = "json", required_unless_present = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the JSON service
    Serve {
        #[arg(long, env = service::PORT_ENV, default_value_t = 8080)]
        port: u16,
    },
}

/// Error with a machine-readable kind, printed as `error[kind]: message`.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error[{}]: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn usage(kind: &'static str, e: impl std::fmt::Display) -> Self {
        CliError { kind, message: e.to_string(), code: EXIT_USAGE }
    }
}

fn parse_orientation(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.trim().split_once(':').ok_or_else(|| CliError::usage("usage", format!("bad arrow {p}, expected s:t")))?;
            Ok((a.parse().map_err(|_| CliError::usage("usage", format!("bad arrow {p}")))?, b.parse().map_err(|_| CliError::usage("usage", format!("bad arrow {p}")))?))
        })
        .collect()
}

fn spec_of(kind: BuildKind, t: &TypeArgs) -> Result<BuildSpec, CliError> {
    let mut s = BuildSpec::new(kind, &t.cartan, t.n);
    s.orientation = t.orientation.as_deref().map(parse_orientation).transpose()?;
    Ok(s)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage("io", format!("{}: {e}", p.display()))),
        None => emit(text),
    }
}

/// Prints to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::usage("io", e)),
        _ => Ok(()),
    }
}

fn read_quiver(p: &Path) -> Result<WeightedQuiver, CliError> {
    let text = std::fs::read_to_string(p).map_err(|e| CliError::usage("io", format!("{}: {e}", p.display())))?;
    WeightedQuiver::from_json_str(&text).map_err(|e| CliError::usage("invalid", e))
}

fn build(cmd: &BuildCmd) -> Result<(), CliError> {
    let (spec, out) = match cmd {
        BuildCmd::Coxeter { t, out } => (spec_of(BuildKind::Coxeter, t)?, out),
        BuildCmd::Qm { t, m, out } => (BuildSpec { m: Some(*m), ..spec_of(BuildKind::Qm, t)? }, out),
        BuildCmd::Word { t, word, flavor, out } => (BuildSpec { word: word.clone(), flavor: flavor.clone(), ..spec_of(BuildKind::Word, t)? }, out),
        BuildCmd::Tilde { t, k, out } => (BuildSpec { k: Some(*k), ..spec_of(BuildKind::Tilde, t)? }, out),
        BuildCmd::D { t, power, cycle, out } => (BuildSpec { power: *power, cycle: *cycle, ..spec_of(BuildKind::D, t)? }, out),
    };
    let q = spec.build().map_err(|e| CliError::usage("invalid", e))?;
    write_out(out.as_deref(), &q.to_json_string())
}

fn cartan(cartan: &Option<String>, n: Option<usize>) -> Result<CartanData, CliError> {
    let t: CartanType = cartan.as_deref().ok_or_else(|| CliError::usage("usage", "--type is required for this check"))?.parse().map_err(|e| CliError::usage("invalid", e))?;
    let n = n.ok_or_else(|| CliError::usage("usage", "--n is required for this check"))?;
    CartanData::of(t, n).map_err(|e| CliError::usage("invalid", e))
}

/// Parameters of `verify`; unused fields are ignored by checks that do not
/// need them.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cartan: Option<String>,
    pub n: Option<usize>,
    pub m: usize,
    pub mode: String,
    pub word: Option<String>,
    pub orientation: Option<String>,
    pub symbolic: bool,
    pub count: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cartan: None, n: None, m: 2, mode: "tropical".into(), word: None, orientation: None, symbolic: false, count: 50, seed: 1 }
    }
}

/// Runs one named check; bundles such as `equivalences` give several
/// certificates.
pub fn certify(check: CheckName, o: &VerifyOptions) -> Result<Vec<Certificate>, CliError> {
    let cd = || cartan(&o.cartan, o.n);
    let m = o.m;
    let m_checked = || if m < 2 { Err(CliError::usage("invalid", format!("m must be at least 2, got {m}"))) } else { Ok(m) };
    Ok(match check {
        CheckName::Quiver => vec![verifier::check_r_preserves_quiver(&cd()?, m_checked()?)],
        CheckName::ClosedForms => {
            let mode: FormMode = o.mode.parse().map_err(|e: String| CliError::usage("usage", e))?;
            vec![verifier::check_closed_forms(&cd()?, m_checked()?, mode)]
        }
        CheckName::Braid => vec![verifier::check_braid(&cd()?, m_checked()?, o.symbolic)],
        CheckName::Peripheral => vec![verifier::check_peripheral_and_casimir(&cd()?, m_checked()?)],
        CheckName::GreenDt => {
            let c = cd()?;
            let arrows = match &o.orientation {
                Some(s) => parse_orientation(s)?,
                None => c.default_orientation(),
            };
            let w = o.word.as_deref().map(parse_word).transpose().map_err(|e| CliError::usage("invalid", e))?;
            vec![verifier::check_green_and_dt(&c, &arrows, m_checked()?, w.as_deref())]
        }
        CheckName::Equivalences => verifier::check_equivalences(),
        CheckName::BraidWeylD => vec![verifier::check_braid_weyl_d(BraidWeylConvention::Composition)],
        CheckName::FPolynomial => vec![verifier::check_f_polynomial(&cd()?, m_checked()?)],
        CheckName::Laurent | CheckName::Separation => {
            let c = cd()?;
            let q = build_qm(&c, None, m_checked()?).map_err(|e| CliError::usage("invalid", e))?;
            let name = format!("Q{m}({}{})", c.kind, c.rank());
            if check == CheckName::Laurent {
                vec![verifier::check_laurent(&q, &name, o.count, 15, o.seed)]
            } else {
                vec![verifier::check_separation(&q, &name, o.count, 15, o.seed)]
            }
        }
    })
}

fn check_file_name(check: CheckName) -> String {
    format!("{}.cert.json", check.to_possible_value().expect("named").get_name())
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Build { what } => build(&what).map(|_| EXIT_OK),
        Command::Mutate { input, at, out } => {
            let mut q = read_quiver(&input)?;
            for a in &at {
                let v: VertexId = a.parse().map_err(|e| CliError::usage("invalid", e))?;
                q = q.mutate_at(&v).map_err(|e| CliError::usage("invalid", e))?;
            }
            write_out(out.as_deref(), &q.to_json_string()).map(|_| EXIT_OK)
        }
        Command::Run { input, seq, name, params, track, out } => {
            let q = read_quiver(&input)?;
            let sequence = match (seq, name) {
                (Some(s), _) => {
                    let text = if s.trim_start().starts_with('[') { s } else { std::fs::read_to_string(&s).map_err(|e| CliError::usage("io", format!("{s}: {e}")))? };
                    MutationSequence::from_json_str(&text).map_err(|e| CliError::usage("invalid", e))?
                }
                (None, Some(n)) => {
                    let p: Value = serde_json::from_str(&params).map_err(|e| CliError::usage("invalid", format!("params: {e}")))?;
                    named_sequence(&n, &p, None).map_err(|e| CliError::usage("invalid", e))?.sequence
                }
                (None, None) => return Err(CliError::usage("usage", "give --seq or --name")),
            };
            let mut t = Tracking::tropical();
            for f in &track {
                match f.as_str() {
                    "a" | "A" => t.a = true,
                    "x" | "X" => t.x = true,
                    "principal" => t.principal = true,
                    "none" => {}
                    other => return Err(CliError::usage("usage", format!("unknown family {other}"))),
                }
            }
            let s = Seed::new(&q, t).apply(&sequence).map_err(|e| CliError::usage("invalid", e))?;
            let text = serde_json::to_string_pretty(&s.dump()).expect("dump serializes");
            write_out(out.as_deref(), &text).map(|_| EXIT_OK)
        }
        Command::Verify { check, cartan, n, m, mode, word, orientation, symbolic, count, seed, out } => {
            let certs = certify(check, &VerifyOptions { cartan, n, m, mode, word, orientation, symbolic, count, seed })?;
            let text = if certs.len() == 1 { certs[0].to_json_string() } else { serde_json::to_string_pretty(&certs).expect("serializes") };
            let path = out.unwrap_or_else(|| PathBuf::from(check_file_name(check)));
            std::fs::write(&path, &text).map_err(|e| CliError::usage("io", format!("{}: {e}", path.display())))?;
            emit(&text)?;
            let failed: Vec<&str> = certs.iter().filter(|c| !c.passed()).map(|c| c.check.as_str()).collect();
            if failed.is_empty() {
                Ok(EXIT_OK)
            } else {
                Err(CliError { kind: "verify", message: format!("failed: {}", failed.join(", ")), code: EXIT_FAIL })
            }
        }
        Command::Export { input, dot, json: _, out } => {
            let q = read_quiver(&input)?;
            let text = if dot { q.to_dot() } else { q.to_json_string() };
            write_out(out.as_deref(), &text).map(|_| EXIT_OK)
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::usage("io", e))?;
            rt.block_on(service::serve(port)).map_err(|e| CliError::usage("io", e))?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.kind, e.message);
            e.code
        }
    }
}
