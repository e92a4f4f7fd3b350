//! `swlab`: exact experiments around Schur algebras S(n,d), the canonical
//! map from the group algebra of GL(n), and polynomial representations.
//!
//! Every subcommand prints a deterministic report (TSV by default, JSON with
//! `--format json`) and exits 0 whenever the computation succeeded, also for
//! negative mathematical findings. Exit code 2 flags usage errors, 3 flags
//! guard violations (see `SWLAB_GUARD_SCALE`), and 1 internal inconsistency.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use swlab_core::duality::{
    epi_test, image_rank_mod_m, image_rank_streaming, threshold_sweep, z_image_saturate,
    z_mod_p_obstruction, GlGroup, PhiContext, SweepRow,
};
use swlab_core::error::Error;
use swlab_core::fdalg::{AlgebraProfile, FdAlgebra};
use swlab_core::polyrep::{builtin_smodule, roundtrip_check, BuiltinModule};
use swlab_core::ring::{Ring, RingRepr};
use swlab_core::schur::SchurAlgebra;
use swlab_core::symtensor::multiset_count;
use swlab_core::{guards, Result};

#[derive(Parser)]
#[command(name = "swlab", version, about = "Exact Schur-algebra experiments")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of S(n,d): C(n^2 + d - 1, d).
    Dim {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
    },
    /// Rank of the canonical image and surjectivity (Schur-Weyl duality).
    Surj {
        /// Coefficient ring: F2, F9, GF(3^2; 1,0), Z/6.
        #[arg(long)]
        ring: String,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
    },
    /// Ring-epimorphism test via the balanced tensor square.
    Epi {
        #[arg(long)]
        ring: String,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
    },
    /// Surjectivity/epimorphism sweep over field sizes.
    Sweep {
        /// Comma-separated field sizes (prime powers).
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        q_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        d_list: Vec<usize>,
    },
    /// Block decomposition of a group algebra, compared against the
    /// k[eps]^3 reference profile.
    Blocks {
        /// `gl` (needs --ring and -n) or a path to a multiplication-table
        /// file: one line per element listing the 0-based products.
        #[arg(long)]
        group: String,
        #[arg(long)]
        ring: Option<String>,
        #[arg(short)]
        n: Option<usize>,
    },
    /// Mod-p obstruction certificate for the integral canonical map.
    Zcert {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
    },
    /// Lower bound on the integral image lattice from generator words.
    Zsat {
        #[arg(short, default_value_t = 2)]
        n: usize,
        #[arg(short)]
        d: usize,
        #[arg(long)]
        word_len: usize,
    },
    /// Restrict a module to the group and lift it back.
    Roundtrip {
        #[arg(long, value_enum)]
        module: ModuleKind,
        #[arg(long)]
        ring: String,
        #[arg(short)]
        n: usize,
        #[arg(short)]
        d: usize,
    },
    /// Coarse invariants of a finite-dimensional algebra.
    Profile {
        #[arg(long, value_enum)]
        algebra: AlgebraKind,
        #[arg(long)]
        ring: String,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        d: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModuleKind {
    Regular,
    Tensor,
    Det,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgebraKind {
    Schur,
    Group,
    Dual3,
}

fn main() -> ExitCode {
    if let Ok(text) = std::env::var("SWLAB_GUARD_SCALE") {
        match text.parse::<f64>() {
            Ok(v) if v >= 1.0 => guards::set_scale(v),
            _ => {
                eprintln!("error: SWLAB_GUARD_SCALE must be a float >= 1");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GuardExceeded { .. } => 3,
        Error::Parse(_)
        | Error::BadParameters(_)
        | Error::NonPrime(_)
        | Error::ModulusTooSmall(_)
        | Error::ReducibleModulus { .. }
        | Error::NotAField(_)
        | Error::NotIntegers(_)
        | Error::InfiniteRing
        | Error::NotAGroup(_)
        | Error::DimensionMismatch(_) => 2,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Dim { n, d } => dim_report(*n, *d, cli.format),
        Command::Surj { ring, n, d } => surj_report(ring, *n, *d, cli.format),
        Command::Epi { ring, n, d } => epi_report(ring, *n, *d, cli.format),
        Command::Sweep {
            q_list,
            n_list,
            d_list,
        } => sweep_report(q_list, n_list, d_list, cli.format),
        Command::Blocks { group, ring, n } => blocks_report(group, ring.as_deref(), *n, cli.format),
        Command::Zcert { p, n, d } => zcert_report(*p, *n, *d, cli.format),
        Command::Zsat { n, d, word_len } => zsat_report(*n, *d, *word_len, cli.format),
        Command::Roundtrip { module, ring, n, d } => {
            roundtrip_report(*module, ring, *n, *d, cli.format)
        }
        Command::Profile { algebra, ring, n, d } => {
            profile_report(*algebra, ring, *n, *d, cli.format)
        }
    }
}

fn dim_report(n: usize, d: usize, format: Format) -> Result<String> {
    if n == 0 {
        return Err(Error::BadParameters("n must be >= 1".into()));
    }
    let dim = multiset_count(n * n, d);
    Ok(match format {
        Format::Tsv => format!("n\td\tdim\n{n}\t{d}\t{dim}\n"),
        Format::Json => pretty(&json!({ "n": n, "d": d, "dim": dim.to_string() })),
    })
}

fn surj_report(ring_text: &str, n: usize, d: usize, format: Format) -> Result<String> {
    let ring = Ring::parse(ring_text)?;
    let dim = multiset_count(n * n, d);
    let (rank, surjective) = match ring.repr() {
        RingRepr::Integers => {
            return Err(Error::BadParameters(
                "use zcert/zsat for the integral map".into(),
            ))
        }
        RingRepr::IntMod { m } => image_rank_mod_m(n, d, *m)?,
        _ => {
            let (rank, dim) = image_rank_streaming(&ring, n, d)?;
            (rank, rank == dim)
        }
    };
    Ok(match format {
        Format::Tsv => format!(
            "ring\tn\td\tdimS\trank\tsurjective\n{ring}\t{n}\t{d}\t{dim}\t{rank}\t{surjective}\n"
        ),
        Format::Json => pretty(&json!({
            "ring": ring.to_string(),
            "n": n,
            "d": d,
            "dimS": dim,
            "rank": rank,
            "surjective": surjective,
        })),
    })
}

fn epi_report(ring_text: &str, n: usize, d: usize, format: Format) -> Result<String> {
    let ring = Ring::parse(ring_text)?;
    let group = GlGroup::enumerate(&ring, n)?;
    let schur = SchurAlgebra::build(&ring, n, d)?;
    let ctx = PhiContext::new(group, schur)?;
    let report = epi_test(&ctx)?;
    Ok(match format {
        Format::Tsv => format!(
            "ring\tn\td\tdimS\tdimBalanced\tepi\n{ring}\t{n}\t{d}\t{}\t{}\t{}\n",
            report.dim_s, report.dim_balanced, report.is_epi
        ),
        Format::Json => pretty(&json!({
            "ring": ring.to_string(),
            "n": n,
            "d": d,
            "dimS": report.dim_s,
            "dimBalanced": report.dim_balanced,
            "epi": report.is_epi,
        })),
    })
}

fn sweep_report(qs: &[u64], ns: &[usize], ds: &[usize], format: Format) -> Result<String> {
    let rows = threshold_sweep(qs, ns, ds)?;
    for row in &rows {
        if let Some(note) = &row.note {
            eprintln!("note: cell (q={}, n={}, d={}): {note}", row.q, row.n, row.d);
        }
    }
    Ok(match format {
        Format::Tsv => {
            let mut out = String::from("q\tn\td\tdimS\trank\tsurjective\tepi\n");
            for row in &rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    row.q,
                    row.n,
                    row.d,
                    row.dim_s,
                    opt(row.rank),
                    opt(row.surjective),
                    opt(row.epi),
                );
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = rows.iter().map(sweep_row_json).collect();
            pretty(&Value::Array(rows))
        }
    })
}

fn sweep_row_json(row: &SweepRow) -> Value {
    serde_json::to_value(row).expect("serializable row")
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn blocks_report(
    group: &str,
    ring_text: Option<&str>,
    n: Option<usize>,
    format: Format,
) -> Result<String> {
    let (ring, algebra, subject) = if group == "gl" {
        let ring = Ring::parse(ring_text.ok_or_else(|| {
            Error::BadParameters("--group gl requires --ring".into())
        })?)?;
        let n = n.ok_or_else(|| Error::BadParameters("--group gl requires -n".into()))?;
        let gl = GlGroup::enumerate(&ring, n)?;
        let algebra = FdAlgebra::group_algebra(&ring, &gl)?;
        let subject = format!("{ring}[GL_{n}({ring})]");
        (ring, algebra, subject)
    } else {
        let ring = Ring::parse(ring_text.unwrap_or("F2"))?;
        let text = std::fs::read_to_string(group)
            .map_err(|e| Error::Parse(format!("cannot read table file {group}: {e}")))?;
        let table = parse_table(&text)?;
        let algebra = FdAlgebra::from_table(&ring, &table)?;
        let subject = format!("{ring}[table:{group}]");
        (ring, algebra, subject)
    };

    let profile = algebra.profile()?;
    let decomposition = algebra.central_idempotent_blocks()?;
    let dual = FdAlgebra::dual_numbers(&ring)?;
    let reference = dual.direct_sum(&dual)?.direct_sum(&dual)?.profile()?;
    let profiles_match = profile == reference;

    Ok(match format {
        Format::Tsv => {
            let mut out = String::new();
            let _ = writeln!(out, "subject\t{subject}");
            let _ = writeln!(out, "dim\t{}", profile.dim);
            let _ = writeln!(out, "commutative\t{}", profile.commutative);
            let _ = writeln!(out, "center_dim\t{}", profile.center_dim);
            let _ = writeln!(out, "radical_dim\t{}", profile.radical_dim);
            let _ = writeln!(out, "ss_dim\t{}", profile.ss_dim);
            let _ = writeln!(out, "block_dims\t{}", join(&profile.block_dims));
            for b in &decomposition.blocks {
                let _ = writeln!(
                    out,
                    "block\tdim={}\tradical_dim={}\tcommutative={}",
                    b.dim, b.radical_dim, b.commutative
                );
            }
            let _ = writeln!(out, "reference\t{ring}[eps]^3");
            let _ = writeln!(out, "reference_block_dims\t{}", join(&reference.block_dims));
            let _ = writeln!(out, "reference_radical_dim\t{}", reference.radical_dim);
            let _ = writeln!(out, "reference_commutative\t{}", reference.commutative);
            let _ = writeln!(out, "profiles_match\t{profiles_match}");
            out
        }
        Format::Json => pretty(&json!({
            "subject": subject,
            "profile": profile_json(&profile),
            "blocks": decomposition.blocks.iter().map(|b| json!({
                "dim": b.dim,
                "radical_dim": b.radical_dim,
                "commutative": b.commutative,
            })).collect::<Vec<_>>(),
            "reference": {
                "name": format!("{ring}[eps]^3"),
                "profile": profile_json(&reference),
            },
            "profiles_match": profiles_match,
        })),
    })
}

fn parse_table(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad table entry {t:?}")))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn zcert_report(p: u64, n: usize, d: usize, format: Format) -> Result<String> {
    let cert = z_mod_p_obstruction(n, d, p)?;
    Ok(match format {
        Format::Tsv => format!(
            "n\td\tp\tfp_rank\tdimS\tobstruction\n{}\t{}\t{}\t{}\t{}\t{}\n",
            cert.n, cert.d, cert.p, cert.fp_rank, cert.dim_s, cert.obstruction
        ),
        Format::Json => pretty(&serde_json::to_value(&cert).expect("serializable certificate")),
    })
}

fn zsat_report(n: usize, d: usize, word_len: usize, format: Format) -> Result<String> {
    let sat = z_image_saturate(n, d, word_len)?;
    let divisors: Vec<String> = sat.divisors.iter().map(|d| d.to_string()).collect();
    Ok(match format {
        Format::Tsv => {
            let mut out = String::new();
            let _ = writeln!(out, "n\t{n}");
            let _ = writeln!(out, "d\t{d}");
            let _ = writeln!(out, "word_len\t{word_len}");
            let _ = writeln!(out, "rank\t{}", sat.rank);
            let _ = writeln!(out, "divisors\t{}", divisors.join(","));
            let _ = writeln!(out, "stabilized\t{}", sat.stabilized);
            let _ = writeln!(out, "words_consumed\t{}", sat.words_consumed);
            let _ = writeln!(out, "note\t{}", sat.note);
            out
        }
        Format::Json => pretty(&json!({
            "n": n,
            "d": d,
            "word_len": word_len,
            "rank": sat.rank,
            "divisors": divisors,
            "stabilized": sat.stabilized,
            "words_consumed": sat.words_consumed,
            "note": sat.note,
        })),
    })
}

fn roundtrip_report(
    module: ModuleKind,
    ring_text: &str,
    n: usize,
    d: usize,
    format: Format,
) -> Result<String> {
    let ring = Ring::parse(ring_text)?;
    let schur = SchurAlgebra::build(&ring, n, d)?;
    let which = match module {
        ModuleKind::Regular => BuiltinModule::Regular,
        ModuleKind::Tensor => BuiltinModule::Tensor,
        ModuleKind::Det => BuiltinModule::Determinant,
    };
    let smodule = builtin_smodule(&schur, which)?;
    let report = roundtrip_check(&smodule)?;
    let name = format!("{module:?}").to_lowercase();
    Ok(match format {
        Format::Tsv => {
            let mut out = String::new();
            let _ = writeln!(out, "module\t{name}");
            let _ = writeln!(out, "ring\t{ring}");
            let _ = writeln!(out, "n\t{n}");
            let _ = writeln!(out, "d\t{d}");
            let _ = writeln!(out, "module_dim\t{}", report.module_dim);
            let _ = writeln!(out, "hom_law_holds\t{}", report.hom_law_holds);
            let _ = writeln!(out, "lift_succeeded\t{}", report.lift_succeeded);
            let _ = writeln!(out, "recovered_equal\t{}", report.recovered_equal);
            let _ = writeln!(out, "lift_unique\t{}", report.lift_unique);
            let _ = writeln!(out, "phi_surjective\t{}", report.phi_surjective);
            out
        }
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("serializable report");
            let obj = v.as_object_mut().expect("object");
            obj.insert("module".into(), json!(name));
            obj.insert("ring".into(), json!(ring.to_string()));
            obj.insert("n".into(), json!(n));
            obj.insert("d".into(), json!(d));
            pretty(&v)
        }
    })
}

fn profile_report(
    algebra: AlgebraKind,
    ring_text: &str,
    n: Option<usize>,
    d: Option<usize>,
    format: Format,
) -> Result<String> {
    let ring = Ring::parse(ring_text)?;
    let (subject, alg) = match algebra {
        AlgebraKind::Schur => {
            let n = n.ok_or_else(|| Error::BadParameters("--algebra schur requires -n".into()))?;
            let d = d.ok_or_else(|| Error::BadParameters("--algebra schur requires -d".into()))?;
            let s = SchurAlgebra::build(&ring, n, d)?;
            (format!("S_{ring}({n},{d})"), FdAlgebra::from_schur(&s)?)
        }
        AlgebraKind::Group => {
            let n = n.ok_or_else(|| Error::BadParameters("--algebra group requires -n".into()))?;
            let gl = GlGroup::enumerate(&ring, n)?;
            (
                format!("{ring}[GL_{n}({ring})]"),
                FdAlgebra::group_algebra(&ring, &gl)?,
            )
        }
        AlgebraKind::Dual3 => {
            let dual = FdAlgebra::dual_numbers(&ring)?;
            (
                format!("{ring}[eps]^3"),
                dual.direct_sum(&dual)?.direct_sum(&dual)?,
            )
        }
    };
    let profile = alg.profile()?;
    Ok(match format {
        Format::Tsv => {
            let mut out = String::new();
            let _ = writeln!(out, "subject\t{subject}");
            let _ = writeln!(out, "dim\t{}", profile.dim);
            let _ = writeln!(out, "commutative\t{}", profile.commutative);
            let _ = writeln!(out, "center_dim\t{}", profile.center_dim);
            let _ = writeln!(out, "radical_dim\t{}", profile.radical_dim);
            let _ = writeln!(out, "ss_dim\t{}", profile.ss_dim);
            let _ = writeln!(out, "block_dims\t{}", join(&profile.block_dims));
            out
        }
        Format::Json => {
            let mut v = profile_json(&profile);
            let obj = v.as_object_mut().expect("object");
            obj.insert("subject".into(), json!(subject));
            pretty(&v)
        }
    })
}

fn profile_json(p: &AlgebraProfile) -> Value {
    serde_json::to_value(p).expect("serializable profile")
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("valid json");
    s.push('\n');
    s
}
