//! adeh: exact computations for the simply-laced bilinear hierarchies.
//!
//! Subcommands build root systems, print vertex-operator coefficient
//! tables, generate the bilinear equations up to a weight bound, evaluate
//! them on truncated tau series, and run the self-verification suite.
//!
//! Exit codes are a stable contract: 0 success, 1 a mathematical check
//! failed, 2 usage or input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use adeh_core::{
    all_passed, apply, generate, run_checks, AdeType, CoeffTable, CoxeterData, CycloNum,
    GoldenSource, HirotaSystem, Monomial, Residual, RootSystem, TauSeries,
};

#[derive(Parser)]
#[command(name = "adeh", version, about = "Exact ADE bilinear hierarchy toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a root system summary: counts, Coxeter number, exponents, orbits
    Roots(RootsArgs),
    /// Print the vertex-operator coefficient table g_1..g_N
    Coeffs(CoeffsArgs),
    /// Generate the bilinear equations up to a weight bound as JSON
    Hirota(HirotaArgs),
    /// Evaluate the equations on a truncated tau series from a file
    Check(CheckArgs),
    /// Run the self-verification suite against golden data
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn parse_type(s: &str) -> Result<AdeType, String> {
    s.parse::<AdeType>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct RootsArgs {
    /// Type label such as A3, D5, E8
    #[arg(long = "type", value_parser = parse_type)]
    ade: AdeType,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long = "type", value_parser = parse_type)]
    ade: AdeType,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Decimal digits for the floating renditions
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=50))]
    digits: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HirotaArgs {
    #[arg(long = "type", value_parser = parse_type)]
    ade: AdeType,
    /// Highest y-monomial weight to generate
    #[arg(long)]
    max_weight: u32,
    /// Write the system JSON to a file; the per-weight counts then go to
    /// stdout instead of stderr
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long = "type", value_parser = parse_type)]
    ade: AdeType,
    /// Weight bound of the equation system to evaluate
    #[arg(long)]
    max_weight: u32,
    /// Tau series JSON file
    tau: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..=50))]
    digits: u32,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to these types; repeatable
    #[arg(long = "type", value_parser = parse_type)]
    ade: Vec<AdeType>,
    /// Run every supported type (the default when no --type is given)
    #[arg(long)]
    all: bool,
    /// Load golden tables from a directory instead of the embedded data
    #[arg(long)]
    golden_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    reset_sigpipe();
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Roots(args) => cmd_roots(args),
        Cmd::Coeffs(args) => cmd_coeffs(args),
        Cmd::Hirota(args) => cmd_hirota(args),
        Cmd::Check(args) => cmd_check(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Rust ignores SIGPIPE by default, turning `adeh ... | head` into a
/// write-error panic; restore the usual quiet termination.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

/// ADEH_THREADS caps the worker pool; unset or invalid means the default.
fn init_threads() {
    if let Ok(v) = std::env::var("ADEH_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{content}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{content}"),
    }
    Ok(())
}

/// Renders an exact cyclotomic number as a power-basis polynomial in
/// z = the primitive h-th root of unity.
fn render_cyclo(x: &CycloNum) -> String {
    if let Some(r) = x.as_rational() {
        return r.to_string();
    }
    let mut parts = Vec::new();
    for (k, c) in x.coeffs().iter().enumerate() {
        if c == &adeh_core::rational::rat(0, 1) {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => " z".to_string(),
            _ => format!(" z^{k}"),
        };
        parts.push(format!("{c}{var}"));
    }
    parts.join(" + ")
}

fn render_monomial(m: &Monomial, letter: char) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.entries()
        .iter()
        .map(|&(v, k)| {
            let tag = if v.tag == 0 {
                String::new()
            } else {
                format!("[{}]", v.tag)
            };
            let pow = if k == 1 { String::new() } else { format!("^{k}") };
            format!("{letter}_{}{tag}{pow}", v.m)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_roots(args: RootsArgs) -> anyhow::Result<ExitCode> {
    let rs = RootSystem::build(args.ade).map_err(|e| anyhow!(e.to_string()))?;
    let cd = CoxeterData::build(&rs).map_err(|e| anyhow!(e.to_string()))?;
    let orbits = rs.coxeter_orbits().map_err(|e| anyhow!(e.to_string()))?;
    let reps = adeh_core::representatives(&rs).map_err(|e| anyhow!(e.to_string()))?;
    let content = match args.format {
        Format::Json => {
            let orbit_views: Vec<_> = reps
                .iter()
                .map(|&rep| {
                    json!({
                        "representative": rs.simple_coords(rep),
                        "size": rs.h(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "type": args.ade,
                "rank": rs.rank(),
                "h": rs.h(),
                "root_count": rs.num_roots(),
                "positive_count": rs.positive_roots().len(),
                "exponents": cd.exponents(),
                "orbit_count": orbits.len(),
                "orbits": orbit_views,
            }))?
        }
        Format::Table => {
            let mut lines = vec![
                format!("type          {}", args.ade),
                format!("rank          {}", rs.rank()),
                format!("h             {}", rs.h()),
                format!("root count    {}", rs.num_roots()),
                format!(
                    "exponents     {}",
                    cd.exponents()
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
                format!("orbits        {} of size {}", orbits.len(), rs.h()),
            ];
            for (i, &rep) in reps.iter().enumerate() {
                lines.push(format!(
                    "orbit {}       rep (simple basis) {:?}",
                    i + 1,
                    rs.simple_coords(rep)
                ));
            }
            lines.join("\n")
        }
    };
    emit(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn build_table(t: AdeType) -> anyhow::Result<(RootSystem, CoxeterData, CoeffTable)> {
    let rs = RootSystem::build(t).map_err(|e| anyhow!(e.to_string()))?;
    let cd = CoxeterData::build(&rs).map_err(|e| anyhow!(e.to_string()))?;
    let ct = CoeffTable::build(&rs, &cd).map_err(|e| anyhow!(e.to_string()))?;
    Ok((rs, cd, ct))
}

fn cmd_coeffs(args: CoeffsArgs) -> anyhow::Result<ExitCode> {
    let (rs, _, ct) = build_table(args.ade)?;
    let sum = ct.sum_g().map_err(|e| anyhow!(e.to_string()))?;
    let digits = args.digits;
    let content = match args.format {
        Format::Json => {
            let g: Vec<_> = (0..ct.len())
                .map(|i| {
                    let approx: f64 = ct
                        .g(i)
                        .embed_decimal(digits)
                        .0
                        .parse()
                        .expect("decimal rendering parses as f64");
                    json!({"i": i + 1, "exact": ct.g(i), "approx": approx})
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "type": args.ade,
                "h": rs.h(),
                "g": g,
                "sum_g": sum.to_string(),
            }))?
        }
        Format::Table => {
            let mut lines = vec![format!("type {}   h {}", args.ade, rs.h())];
            for i in 0..ct.len() {
                lines.push(format!(
                    "g_{} = {}  ({})",
                    i + 1,
                    render_cyclo(ct.g(i)),
                    ct.g(i).embed_decimal(digits).0,
                ));
            }
            lines.push(format!("sum_g = {sum}"));
            lines.join("\n")
        }
    };
    emit(&args.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn counts_report(sys: &HirotaSystem) -> String {
    let mut totals = std::collections::BTreeMap::new();
    for (mu, _) in sys.equations() {
        *totals.entry(mu.weight()).or_insert(0usize) += 1;
    }
    let nonzero = sys.nonzero_counts_by_weight();
    (0..=sys.max_weight() as u64)
        .map(|w| {
            format!(
                "weight {w}: {} equations, {} nonzero",
                totals.get(&w).copied().unwrap_or(0),
                nonzero.get(&w).copied().unwrap_or(0),
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_hirota(args: HirotaArgs) -> anyhow::Result<ExitCode> {
    let (rs, cd, ct) = build_table(args.ade)?;
    let sys = generate(&rs, &cd, &ct, args.max_weight).map_err(|e| anyhow!(e.to_string()))?;
    let json = serde_json::to_string_pretty(&sys)?;
    let counts = counts_report(&sys);
    match &args.out {
        Some(_) => {
            emit(&args.out, &json)?;
            println!("{counts}");
        }
        None => {
            println!("{json}");
            eprintln!("{counts}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render_residual(r: &Residual, digits: u32) -> String {
    let (re, im) = r.value.embed_decimal(digits);
    let approx = if r.value.is_real() {
        re
    } else {
        format!("{re} + {im} i")
    };
    format!(
        "residual: equation {}, at {} hbar^({}/2): {} ({})",
        render_monomial(&r.equation, 'y'),
        render_monomial(&r.x_monomial, 't'),
        r.hbar_half,
        render_cyclo(&r.value),
        approx,
    )
}

fn cmd_check(args: CheckArgs) -> anyhow::Result<ExitCode> {
    let raw = fs::read_to_string(&args.tau)
        .with_context(|| format!("cannot read {}", args.tau.display()))?;
    let tau: TauSeries = serde_json::from_str(&raw)
        .with_context(|| format!("malformed tau series in {}", args.tau.display()))?;
    let (rs, cd, ct) = build_table(args.ade)?;
    let sys = generate(&rs, &cd, &ct, args.max_weight).map_err(|e| anyhow!(e.to_string()))?;
    let residuals = apply(&sys, &tau).map_err(|e| anyhow!(e.to_string()))?;
    match args.format {
        Format::Json => {
            let body = json!({
                "type": args.ade,
                "max_weight": args.max_weight,
                "residuals": residuals,
            });
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
        Format::Table => {
            if residuals.is_empty() {
                println!(
                    "all residuals zero: {} satisfies the {} system up to weight {}",
                    args.tau.display(),
                    args.ade,
                    args.max_weight
                );
            } else {
                for r in &residuals {
                    println!("{}", render_residual(r, args.digits));
                }
                println!("{} nonzero residual(s)", residuals.len());
            }
        }
    }
    if residuals.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let types = if args.ade.is_empty() || args.all {
        AdeType::verification_set()
    } else {
        args.ade.clone()
    };
    let source = match &args.golden_dir {
        Some(dir) => GoldenSource::Dir(dir.clone()),
        None => GoldenSource::Embedded,
    };
    let outcomes = run_checks(&types, &source);
    for o in &outcomes {
        if o.passed {
            println!("PASS {}", o.name);
        } else {
            println!("FAIL {}: {}", o.name, o.detail);
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} checks, {} failed", outcomes.len(), failed);
    if all_passed(&outcomes) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
