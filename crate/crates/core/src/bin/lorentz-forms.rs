use clap::{Args, Parser, Subcommand};
use lorentz_forms::cli::json::{canonical_string, rational_from_json};
use lorentz_forms::cli::{human_report, run, verify_certificate, CommandKind, Options, EXIT_INVALID};
use num_rational::BigRational;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "lorentz-forms",
    version,
    about = "Exact quadratic forms, Lorentzian reflections and congruence levels"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Common {
    /// Print the JSON certificate instead of the text report.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Args)]
struct OneFile {
    file: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Searching {
    file: PathBuf,
    /// Witness search bound (max-norm).
    #[arg(long, default_value_t = 1000)]
    height: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Signature, determinant and local invariants of a form.
    FormAnalyze(OneFile),
    /// Decide isotropy over Q and search a primitive zero.
    FormIsotropic(Searching),
    /// Represent a number (`--number`) or split off a second form.
    FormRepresents {
        file: PathBuf,
        g: Option<PathBuf>,
        #[arg(long, value_parser = parse_rational)]
        number: Option<BigRational>,
        #[arg(long, default_value_t = 1000)]
        height: u64,
        /// Run the splitting outside the rank-gap hypothesis.
        #[arg(long)]
        unchecked: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build the reflection configuration on a form of signature (n, 1), n >= 4.
    ConstructTheoremA(Searching),
    /// Members of a family and pairwise non-commensurability certificates.
    Family(OneFile),
    /// The form f + <a> and its arithmetic flag.
    Gps(OneFile),
    /// Congruence level separating H_0 from a disjoint family.
    SeparabilityLevel(Searching),
    /// Level plus the dichotomy on enumerated integral elements.
    SeparabilityVerify {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        height: u64,
        #[arg(long, default_value_t = 2)]
        word_length: usize,
        #[arg(long, default_value_t = 2)]
        vector_height: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Gram matrix, reflection generators and exact Coxeter relations.
    CoxeterVerify {
        file: PathBuf,
        /// Bound for infinite labels.
        #[arg(long, default_value_t = 12)]
        cap: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Rerun a certificate and recheck its witnesses.
    Verify(OneFile),
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    rational_from_json(&Value::String(s.to_string()), "").map_err(|e| e.message)
}

fn load(path: &Path) -> Result<Value, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

fn configure_threads() {
    if let Some(n) = std::env::var("LORENTZ_FORMS_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn invalid(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_INVALID as u8)
}

fn emit(cert: &Value, json: bool) {
    if json {
        print!("{}", canonical_string(cert));
    } else {
        print!("{}", human_report(cert));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let mut opts = Options::default();
    let (kind, files, json) = match cli.command {
        Cmd::FormAnalyze(a) => (CommandKind::FormAnalyze, vec![a.file], a.common.json),
        Cmd::FormIsotropic(a) => {
            opts.height = a.height;
            (CommandKind::FormIsotropic, vec![a.file], a.common.json)
        }
        Cmd::FormRepresents { file, g, number, height, unchecked, common } => {
            opts.height = height;
            opts.unchecked = unchecked;
            opts.number = number;
            (CommandKind::FormRepresents, std::iter::once(file).chain(g).collect(), common.json)
        }
        Cmd::ConstructTheoremA(a) => {
            opts.height = a.height;
            (CommandKind::ConstructTheoremA, vec![a.file], a.common.json)
        }
        Cmd::Family(a) => (CommandKind::Family, vec![a.file], a.common.json),
        Cmd::Gps(a) => (CommandKind::Gps, vec![a.file], a.common.json),
        Cmd::SeparabilityLevel(a) => {
            opts.height = a.height;
            (CommandKind::SeparabilityLevel, vec![a.file], a.common.json)
        }
        Cmd::SeparabilityVerify { file, height, word_length, vector_height, common } => {
            opts.height = height;
            opts.word_length = word_length;
            opts.vector_height = vector_height;
            (CommandKind::SeparabilityVerify, vec![file], common.json)
        }
        Cmd::CoxeterVerify { file, cap, common } => {
            opts.cap = cap;
            (CommandKind::CoxeterVerify, vec![file], common.json)
        }
        Cmd::Verify(a) => {
            let cert = match load(&a.file) {
                Ok(v) => v,
                Err(e) => return invalid(&e),
            };
            return match verify_certificate(&cert) {
                Ok(v) => {
                    emit(&v.to_json(), a.common.json);
                    ExitCode::from(v.exit_code() as u8)
                }
                Err(e) => invalid(&format!("{}: {}", a.file.display(), e.message)),
            };
        }
    };
    let mut inputs = Vec::new();
    for f in &files {
        match load(f) {
            Ok(v) => inputs.push(v),
            Err(e) => return invalid(&e),
        }
    }
    match run(kind, &inputs, &opts) {
        Ok(o) => {
            emit(&o.certificate, json);
            ExitCode::from(o.exit_code as u8)
        }
        Err(e) => match e.input {
            Some(i) => invalid(&format!("{}: {}", files[i].display(), e.message)),
            None => invalid(&e.message),
        },
    }
}
