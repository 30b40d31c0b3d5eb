//! `gmss`: deal, combine and audit Gaussian-integer Mignotte shares.
//!
//! Exit codes: 0 success (and authorized reconstruction), 2 unauthorized
//! reconstruction, 3 validation failure, 4 I/O or parse problem.

mod files;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Parser, Subcommand};

use gmss::access::{
    enumerate_structure, gen_threshold_params, realize, AccessError, AccessStructure,
};
use gmss::counting::{build_audit, secret_space_size, AuditOptions};
use gmss::gint::GaussianInt;
use gmss::scheme::{
    deal, naive_reconstruct, reconstruct, sample_secret, validate_params, Reconstruction,
    SchemeError, DEFAULT_COALITION_CAP,
};

use files::{ParamsFile, ShareFile};

const EXIT_OK: i32 = 0;
const EXIT_UNAUTHORIZED: i32 = 2;
const EXIT_VALIDATION: i32 = 3;
const EXIT_IO_PARSE: i32 = 4;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Parse(String),
    Io(String),
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => EXIT_IO_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg)
            | CliError::Parse(msg)
            | CliError::Io(msg)
            | CliError::Validation(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gmss",
    version,
    about = "Mignotte secret sharing over the Gaussian integers",
    after_help = "Exit codes: 0 ok/authorized, 2 unauthorized reconstruction, \
                  3 validation failure, 4 I/O or parse error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate parameters for a (t, n) threshold scheme
    Gen {
        /// Minimum coalition size that recovers the secret
        #[arg(long)]
        t: usize,
        /// Number of participants
        #[arg(long)]
        n: usize,
        /// Norm band `lo..hi` the moduli are sampled from
        #[arg(long, default_value = "120..190", value_parser = parse_band)]
        band: (u64, u64),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output params file
        #[arg(long, short, default_value = "params.txt")]
        out: PathBuf,
        /// Write the params file as JSON
        #[arg(long)]
        json: bool,
    },
    /// Split a secret into one share file per participant
    #[command(group(ArgGroup::new("secret_source").required(true).args(["secret", "random"])))]
    Deal {
        /// Params file from `gen` or `realize`
        #[arg(long)]
        params: PathBuf,
        /// The secret, e.g. "50+10i"
        #[arg(long)]
        secret: Option<String>,
        /// Sample a secret from the secret space instead
        #[arg(long)]
        random: bool,
        /// Seed for --random
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory the share files are written to
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Write share files as JSON
        #[arg(long)]
        json: bool,
    },
    /// Pool share files and reconstruct the secret
    Combine {
        /// Params file the shares were dealt under
        #[arg(long)]
        params: PathBuf,
        /// Share files of the pooling coalition
        #[arg(required = true)]
        shares: Vec<PathBuf>,
        /// Use the broken minimal-norm reconstruction
        #[arg(long)]
        naive: bool,
        /// Print the result as JSON
        #[arg(long)]
        json: bool,
    },
    /// Build parameters realizing an arbitrary access structure
    Realize {
        /// Structure file: one minimal coalition per line, e.g. "1,3"
        #[arg(long)]
        structure: PathBuf,
        /// Participant count (defaults to the largest index in the file)
        #[arg(long)]
        participants: Option<usize>,
        /// Lower bound for the norms of the coprime bases
        #[arg(long, default_value_t = 9)]
        min_norm: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output params file
        #[arg(long, short, default_value = "params.txt")]
        out: PathBuf,
        /// Write the params file as JSON
        #[arg(long)]
        json: bool,
    },
    /// Validity, counting and leakage report for a params file
    Audit {
        #[arg(long)]
        params: PathBuf,
        /// Candidate cap for the exact per-coalition leakage enumeration
        #[arg(long, default_value_t = 4_000_000)]
        full_leakage: u64,
        /// Seed for the representative secret the leakage refers to
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
}

fn parse_band(text: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got `{text}`"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad band lower bound `{lo}`"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad band upper bound `{hi}`"))?;
    Ok((lo, hi))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_IO_PARSE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Gen {
            t,
            n,
            band,
            seed,
            out,
            json,
        } => cmd_gen(t, n, band, seed, &out, json),
        Command::Deal {
            params,
            secret,
            random,
            seed,
            out_dir,
            json,
        } => cmd_deal(&params, secret.as_deref(), random, seed, &out_dir, json),
        Command::Combine {
            params,
            shares,
            naive,
            json,
        } => cmd_combine(&params, &shares, naive, json),
        Command::Realize {
            structure,
            participants,
            min_norm,
            seed,
            out,
            json,
        } => cmd_realize(&structure, participants, min_norm, seed, &out, json),
        Command::Audit {
            params,
            full_leakage,
            seed,
            json,
        } => cmd_audit(&params, full_leakage, seed, json),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_params(path: &Path) -> Result<ParamsFile, CliError> {
    ParamsFile::parse(&read_file(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn cmd_gen(
    t: usize,
    n: usize,
    band: (u64, u64),
    seed: u64,
    out: &Path,
    json: bool,
) -> Result<i32, CliError> {
    if t < 1 || t > n {
        return Err(CliError::Usage(format!(
            "t must satisfy 1 <= t <= n, got t={t}, n={n}"
        )));
    }
    if band.0 > band.1 || band.0 < 2 {
        return Err(CliError::Usage(format!(
            "band must be `lo..hi` with 2 <= lo <= hi, got {}..{}",
            band.0, band.1
        )));
    }
    let params = gen_threshold_params(t, n, band, seed).map_err(|e| match e {
        AccessError::SearchExhausted { .. } => {
            CliError::Validation(format!("{e}; widen --band or change --seed"))
        }
        other => CliError::Validation(other.to_string()),
    })?;
    let file = ParamsFile {
        params,
        generator: Some(format!("threshold t={t} n={n} band={}..{}", band.0, band.1)),
        seed: Some(seed),
    };
    write_file(out, &file.render(json))?;
    println!("wrote {}", out.display());
    println!("digest: {}", file.digest());
    println!(
        "m-minus: {}  m-plus: {}",
        file.params.m_minus, file.params.m_plus
    );
    println!("validation: VALID");
    Ok(EXIT_OK)
}

fn scheme_error(e: SchemeError) -> CliError {
    CliError::Validation(e.to_string())
}

fn cmd_deal(
    params_path: &Path,
    secret_text: Option<&str>,
    random: bool,
    seed: u64,
    out_dir: &Path,
    json: bool,
) -> Result<i32, CliError> {
    let file = load_params(params_path)?;
    let p = &file.params;

    let report = validate_params(p, DEFAULT_COALITION_CAP).map_err(scheme_error)?;
    if !report.is_valid() {
        return Err(CliError::Validation(format!(
            "params in {} fail validation; run `gmss audit` for details",
            params_path.display()
        )));
    }

    let secret = match secret_text {
        Some(text) => GaussianInt::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?,
        None => {
            debug_assert!(random);
            let s = sample_secret(p, seed);
            println!("secret: {s}");
            s
        }
    };

    let shares = deal(p, &secret).map_err(|e| match e {
        SchemeError::InvalidSecret {
            norm,
            m_minus,
            m_plus,
        } => CliError::Validation(format!(
            "secret rejected: N(s) = {norm}, but the secret space requires \
             {m_minus} <= N(s) < {m_plus}/4"
        )),
        other => scheme_error(other),
    })?;

    let digest = file.digest();
    let extension = if json { "json" } else { "txt" };
    for share in shares {
        let share_file = ShareFile {
            params_digest: digest.clone(),
            share,
        };
        let path = out_dir.join(format!("share-{}.{extension}", share_file.share.index));
        write_file(&path, &share_file.render(json))?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_combine(
    params_path: &Path,
    share_paths: &[PathBuf],
    naive: bool,
    json: bool,
) -> Result<i32, CliError> {
    let file = load_params(params_path)?;
    let digest = file.digest();

    let mut shares = Vec::with_capacity(share_paths.len());
    for path in share_paths {
        let share_file = ShareFile::parse(&read_file(path)?)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        if share_file.params_digest != digest {
            return Err(CliError::Validation(format!(
                "{}: params digest {} does not match {} ({})",
                path.display(),
                share_file.params_digest,
                params_path.display(),
                digest
            )));
        }
        shares.push(share_file.share);
    }

    let result = if naive {
        naive_reconstruct(&file.params, &shares)
    } else {
        reconstruct(&file.params, &shares)
    };
    let Reconstruction {
        candidate,
        modulus,
        authorized,
    } = result.map_err(scheme_error)?;

    if json {
        println!(
            "{}",
            serde_json::json!({
                "secret": candidate.to_string(),
                "modulus": modulus.to_string(),
                "authorized": authorized,
                "naive": naive,
            })
        );
    } else {
        println!("{candidate}");
        println!("authorized: {authorized}");
    }
    Ok(if authorized {
        EXIT_OK
    } else {
        EXIT_UNAUTHORIZED
    })
}

fn cmd_realize(
    structure_path: &Path,
    participants: Option<usize>,
    min_norm: u64,
    seed: u64,
    out: &Path,
    json: bool,
) -> Result<i32, CliError> {
    let text = read_file(structure_path)?;
    let coalitions = files::parse_structure(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", structure_path.display())))?;
    let max_index = coalitions.iter().flatten().copied().max().unwrap_or(0);
    let n = participants.unwrap_or(max_index);
    if n < max_index {
        return Err(CliError::Usage(format!(
            "--participants {n} is below the largest index {max_index} in the file"
        )));
    }

    let structure = AccessStructure::new(n, coalitions)
        .map_err(|e| CliError::Parse(format!("{}: {e}", structure_path.display())))?;
    let params =
        realize(&structure, min_norm, seed).map_err(|e| CliError::Validation(e.to_string()))?;

    let file = ParamsFile {
        params,
        generator: Some(format!("realize n={n} min-norm={min_norm}")),
        seed: Some(seed),
    };
    write_file(out, &file.render(json))?;

    let realized = enumerate_structure(&file.params, DEFAULT_COALITION_CAP)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let minimal: Vec<String> = realized
        .minimal_coalitions()
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();

    let verdict = validate_params(&file.params, DEFAULT_COALITION_CAP)
        .map(|r| if r.is_valid() { "VALID" } else { "INVALID" })
        .unwrap_or("INVALID");
    println!("wrote {}", out.display());
    println!("digest: {}", file.digest());
    println!(
        "m-minus: {}  m-plus: {}",
        file.params.m_minus, file.params.m_plus
    );
    println!("validation: {verdict}");
    match secret_space_size(&file.params.m_minus, &file.params.m_plus) {
        Ok(size) => println!("secret space size: {size}"),
        Err(e) => println!("secret space size: n/a ({e})"),
    }
    println!("minimal authorized coalitions: {}", minimal.join(" "));
    Ok(EXIT_OK)
}

fn cmd_audit(
    params_path: &Path,
    full_leakage: u64,
    seed: u64,
    json: bool,
) -> Result<i32, CliError> {
    let file = load_params(params_path)?;
    let opts = AuditOptions {
        leakage_cap: full_leakage,
        seed,
        ..AuditOptions::default()
    };
    let report =
        build_audit(&file.params, &opts).map_err(|e| CliError::Validation(e.to_string()))?;
    if json {
        print!("{}", render::audit_json(&file, &report));
    } else {
        print!("{}", render::audit_text(&file, &report));
    }
    Ok(EXIT_OK)
}
