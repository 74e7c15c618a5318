//! `moonring`: exact computations with integral representation rings and
//! McKay-Thompson series.
//!
//! Exit codes: 0 success, 1 verification or data failure, 2 usage error.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigInt;
use serde::Serialize;

use moonring::decomp::{decompose_4a, feasibility_6a};
use moonring::greenring::GreenRing;
use moonring::homfinder::enumerate_characters;
use moonring::modfun::{ClassLabel, HauptmodulCatalog};
use moonring::quasirep::{
    check_quasirep, knz_check, recursion_probe_4b, standard_family, FamilyKind,
};
use moonring::series::{format_rational, LaurentSeries};
use moonring::verify::{run_all, Level};

#[derive(Parser)]
#[command(
    name = "moonring",
    version,
    about = "Green rings, Hauptmodul q-expansions, Moonshine-module decompositions, \
             and quasi-replicability checks, all in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a Hauptmodul from the catalog
    Series {
        /// Class label: 1A, 2A, 2B, 3A, 4A, 4B, or 6A
        #[arg(long, value_parser = parse_class)]
        class: ClassLabel,
        /// Highest exponent to print
        #[arg(long, default_value_t = 20)]
        upto: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Operations on the built-in Green rings
    Ring {
        #[command(subcommand)]
        command: RingCommand,
    },
    /// Moonshine-module decompositions
    Decomp {
        /// `4A` for the exact decomposition, `6A-feasible` for the
        /// feasibility intervals
        target: String,
        /// Highest grade
        #[arg(long, default_value_t = 50)]
        upto: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Bracket series, bivariate exponentials, and vanishing checks
    Quasirep {
        #[command(subcommand)]
        command: QuasirepCommand,
    },
    /// Run the whole reproduction suite
    VerifyAll {
        /// `desk` finishes in seconds, `deep` pushes larger truncations
        #[arg(long, default_value = "desk", value_parser = parse_level)]
        level: Level,
    },
}

#[derive(Subcommand)]
enum RingCommand {
    /// Print the basis, ranks, and multiplication table
    Show {
        ring: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate all integer-valued ring homomorphisms
    Homs {
        ring: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply the Adams operation psi^k to an element
    Adams {
        ring: String,
        /// Element expression, e.g. `D` or `2E-2A`
        element: String,
        /// Adams index k >= 1
        k: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Tensor two elements
    Tensor {
        ring: String,
        left: String,
        right: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Restrict an element to a smaller ring
    Restrict {
        ring: String,
        element: String,
        /// Target ring name
        #[arg(long)]
        to: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum QuasirepCommand {
    /// Scan the bivariate exponential of a replicate family for forbidden
    /// nonzero coefficients
    Check {
        /// Group label (cyclic subgroup generated by this class)
        #[arg(long, value_parser = parse_class)]
        group: ClassLabel,
        /// Character: rank, trace-g, trace-g2, trace-g3, or tate
        #[arg(long, value_parser = parse_phi)]
        phi: FamilyKind,
        /// Exponent N; defaults to the group order
        #[arg(long)]
        exponent: Option<u64>,
        #[arg(long, default_value_t = 6)]
        pmax: usize,
        #[arg(long, default_value_t = 12)]
        qmax: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the two-variable denominator identity for the J family
    Knz {
        #[arg(long, default_value_t = 8)]
        pmax: usize,
        #[arg(long, default_value_t = 8)]
        qmax: i64,
    },
    /// Residuals of the 4B multiplicity recursion for a candidate series
    #[command(name = "probe-4B")]
    Probe4B {
        /// Catalog class providing the candidate series
        #[arg(long, value_parser = parse_class)]
        class: ClassLabel,
        #[arg(long, default_value_t = 10)]
        kmax: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_class(s: &str) -> Result<ClassLabel, String> {
    ClassLabel::from_str(s).map_err(|e| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    match s {
        "desk" => Ok(Level::Desk),
        "deep" => Ok(Level::Deep),
        _ => Err("expected `desk` or `deep`".to_string()),
    }
}

fn parse_phi(s: &str) -> Result<FamilyKind, String> {
    match s {
        "rank" => Ok(FamilyKind::Rank),
        "trace-g" => Ok(FamilyKind::TraceOfPower(1)),
        "trace-g2" => Ok(FamilyKind::TraceOfPower(2)),
        "trace-g3" => Ok(FamilyKind::TraceOfPower(3)),
        "tate" => Ok(FamilyKind::Tate),
        _ => Err("expected rank, trace-g, trace-g2, trace-g3, or tate".to_string()),
    }
}

fn emit(out: &OutputArgs, text: String) -> Result<(), String> {
    match &out.output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string_pretty(value).map_err(|e| e.to_string())
}

/// Exact decimal rendering when the denominator is 2^a 5^b; otherwise the
/// `num/den` form (the CSV view never rounds).
fn csv_rational(x: &moonring::series::Rational) -> String {
    let mut den = x.denom().clone();
    let mut shift2 = 0u32;
    let mut shift5 = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two) == BigInt::from(0) {
        den /= &two;
        shift2 += 1;
    }
    while (&den % &five) == BigInt::from(0) {
        den /= &five;
        shift5 += 1;
    }
    if den != BigInt::from(1) {
        return format_rational(x);
    }
    let digits = shift2.max(shift5);
    let scale = BigInt::from(10).pow(digits) / x.denom();
    let scaled = (x.numer() * scale).to_string();
    if digits == 0 {
        return scaled;
    }
    let (sign, mag) = scaled.strip_prefix('-').map_or(("", scaled.as_str()), |m| ("-", m));
    let mag = format!("{:0>width$}", mag, width = digits as usize + 1);
    let split = mag.len() - digits as usize;
    format!("{sign}{}.{}", &mag[..split], &mag[split..])
}

fn series_csv(s: &LaurentSeries) -> String {
    let mut out = String::from("n,coefficient");
    for e in s.valuation()..s.trunc() {
        out.push_str(&format!("\n{e},{}", csv_rational(&s.coeff(e).unwrap())));
    }
    out
}

#[derive(Serialize)]
struct HomRow {
    values: Vec<i64>,
    tag: String,
}

#[derive(Serialize)]
struct DecompRow {
    n: i64,
    multiplicities: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct FeasibleRow {
    n: i64,
    lower: String,
    upper: String,
    stride: String,
}

#[derive(Serialize)]
struct RingShow {
    name: String,
    order: u64,
    labels: Vec<String>,
    unit: usize,
    ranks: Vec<i64>,
    products: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct ProbeOut {
    class: String,
    kmax: u64,
    residuals: Vec<ProbeRow>,
}

#[derive(Serialize)]
struct ProbeRow {
    k: u64,
    residual: String,
}

/// Ok(true) = success, Ok(false) = verification failure (exit 1).
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Series { class, upto, out } => {
            let catalog = HauptmodulCatalog::load().map_err(|e| e.to_string())?;
            let s = catalog.hauptmodul(class, upto + 1).map_err(|e| e.to_string())?;
            let text = match out.format {
                Format::Json => to_json(&s.to_json())?,
                Format::Csv => series_csv(&s),
                Format::Human => format!("T_{class} = {s}"),
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Ring { command } => run_ring(command),
        Command::Decomp { target, upto, out } => run_decomp(&target, upto, &out),
        Command::Quasirep { command } => run_quasirep(command),
        Command::VerifyAll { level } => {
            let (results, ok) = run_all(level);
            for r in &results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {}", r.name);
                eprintln!("  [{} ms] {}", r.millis, r.detail);
            }
            Ok(ok)
        }
    }
}

fn run_ring(command: RingCommand) -> Result<bool, String> {
    match command {
        RingCommand::Show { ring, out } => {
            let r = GreenRing::builtin(&ring).map_err(|e| e.to_string())?;
            let mut products = BTreeMap::new();
            for i in 0..r.dimension() {
                for j in i..r.dimension() {
                    let prod = r.basis_element(i).tensor(&r.basis_element(j)).unwrap();
                    products
                        .insert(format!("{}*{}", r.labels()[i], r.labels()[j]), prod.to_string());
                }
            }
            let show = RingShow {
                name: r.name().to_string(),
                order: r.order(),
                labels: r.labels().to_vec(),
                unit: r.unit_index(),
                ranks: r.ranks().to_vec(),
                products,
            };
            let text = match out.format {
                Format::Json => to_json(&show)?,
                _ => {
                    let mut t = format!(
                        "ring {} (order {}), unit {}\n",
                        show.name,
                        show.order,
                        r.labels()[show.unit]
                    );
                    for (i, label) in show.labels.iter().enumerate() {
                        t.push_str(&format!("  {label}: rank {}\n", show.ranks[i]));
                    }
                    for (k, v) in &show.products {
                        t.push_str(&format!("  {k} = {v}\n"));
                    }
                    t.trim_end().to_string()
                }
            };
            emit(&out, text)?;
            Ok(true)
        }
        RingCommand::Homs { ring, out } => {
            let r = GreenRing::builtin(&ring).map_err(|e| e.to_string())?;
            let rows: Vec<HomRow> = enumerate_characters(&r)
                .iter()
                .map(|c| HomRow { values: c.values().to_vec(), tag: c.tag().name() })
                .collect();
            let text = match out.format {
                Format::Json => to_json(&rows)?,
                _ => rows
                    .iter()
                    .map(|row| format!("{:?} {}", row.values, row.tag))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(&out, text)?;
            Ok(true)
        }
        RingCommand::Adams { ring, element, k, out } => {
            let r = GreenRing::builtin(&ring).map_err(|e| e.to_string())?;
            let x = r.parse_element(&element).map_err(|e| e.to_string())?;
            let psi = x.adams(k).map_err(|e| e.to_string())?;
            emit_element(&out, &format!("psi^{k}({element})"), &psi)?;
            Ok(true)
        }
        RingCommand::Tensor { ring, left, right, out } => {
            let r = GreenRing::builtin(&ring).map_err(|e| e.to_string())?;
            let x = r.parse_element(&left).map_err(|e| e.to_string())?;
            let y = r.parse_element(&right).map_err(|e| e.to_string())?;
            let prod = x.tensor(&y).map_err(|e| e.to_string())?;
            emit_element(&out, &format!("({left})*({right})"), &prod)?;
            Ok(true)
        }
        RingCommand::Restrict { ring, element, to, out } => {
            let r = GreenRing::builtin(&ring).map_err(|e| e.to_string())?;
            let target = GreenRing::builtin(&to).map_err(|e| e.to_string())?;
            let x = r.parse_element(&element).map_err(|e| e.to_string())?;
            let res = x.restrict(&target).map_err(|e| e.to_string())?;
            emit_element(&out, &format!("{element}|{to}"), &res)?;
            Ok(true)
        }
    }
}

fn emit_element(
    out: &OutputArgs,
    label: &str,
    x: &moonring::greenring::RingElement,
) -> Result<(), String> {
    #[derive(Serialize)]
    struct ElementOut {
        input: String,
        coefficients: BTreeMap<String, String>,
        display: String,
    }
    let text = match out.format {
        Format::Json => {
            let coefficients = x
                .ring()
                .labels()
                .iter()
                .zip(x.coeffs())
                .map(|(l, c)| (l.clone(), c.to_string()))
                .collect();
            to_json(&ElementOut {
                input: label.to_string(),
                coefficients,
                display: x.to_string(),
            })?
        }
        _ => format!("{label} = {x}"),
    };
    emit(out, text)
}

fn run_decomp(target: &str, upto: i64, out: &OutputArgs) -> Result<bool, String> {
    let catalog = HauptmodulCatalog::load().map_err(|e| e.to_string())?;
    match target {
        "4A" | "4a" => {
            let dec = decompose_4a(&catalog, upto).map_err(|e| e.to_string())?;
            let rows: Vec<DecompRow> = (0..=upto)
                .map(|n| {
                    let g = dec.grade(n);
                    let multiplicities = g
                        .ring()
                        .labels()
                        .iter()
                        .zip(g.coeffs())
                        .filter(|(l, _)| ["A", "D", "C^A"].contains(&l.as_str()))
                        .map(|(l, c)| (l.clone(), c.to_string()))
                        .collect();
                    DecompRow { n, multiplicities }
                })
                .collect();
            let text = match out.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => {
                    let mut t = String::from("n,A,D,C^A");
                    for row in &rows {
                        t.push_str(&format!(
                            "\n{},{},{},{}",
                            row.n,
                            row.multiplicities["A"],
                            row.multiplicities["D"],
                            row.multiplicities["C^A"]
                        ));
                    }
                    t
                }
                Format::Human => rows
                    .iter()
                    .map(|row| format!("grade {}: {}", row.n, dec.grade(row.n)))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(out, text)?;
            Ok(true)
        }
        "6A-feasible" | "6a-feasible" => {
            let mut rows = Vec::new();
            for n in 2..=upto.max(2) {
                let iv = feasibility_6a(&catalog, n).map_err(|e| e.to_string())?;
                rows.push(FeasibleRow {
                    n,
                    lower: iv.lower.to_string(),
                    upper: iv.upper.to_string(),
                    stride: iv.stride.to_string(),
                });
            }
            let text = match out.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => {
                    let mut t = String::from("n,lower,upper,stride");
                    for r in &rows {
                        t.push_str(&format!("\n{},{},{},{}", r.n, r.lower, r.upper, r.stride));
                    }
                    t
                }
                Format::Human => rows
                    .iter()
                    .map(|r| {
                        format!("n = {}: X in {{{}, {}+{}, ..., {}}}", r.n, r.lower, r.lower, r.stride, r.upper)
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(out, text)?;
            Ok(true)
        }
        other => Err(format!("unknown decomposition target `{other}` (use 4A or 6A-feasible)")),
    }
}

fn run_quasirep(command: QuasirepCommand) -> Result<bool, String> {
    let catalog = HauptmodulCatalog::load().map_err(|e| e.to_string())?;
    match command {
        QuasirepCommand::Check { group, phi, exponent, pmax, qmax, out } => {
            let exponent = exponent.unwrap_or(group.order());
            let family_trunc = (qmax + pmax as i64) * pmax as i64;
            let fam =
                standard_family(&catalog, group, phi, family_trunc).map_err(|e| e.to_string())?;
            let report =
                check_quasirep(&fam, exponent, pmax, qmax).map_err(|e| e.to_string())?;
            let passed = report.passed;
            let text = match out.format {
                Format::Json => to_json(&report)?,
                _ => format!(
                    "group {group}, phi {}, exponent {}: {} ({} violations)",
                    phi.name(),
                    exponent,
                    if passed { "passed" } else { "FAILED" },
                    report.violations.len()
                ),
            };
            emit(&out, text)?;
            Ok(passed)
        }
        QuasirepCommand::Knz { pmax, qmax } => {
            let ok = knz_check(&catalog, pmax, qmax).map_err(|e| e.to_string())?;
            println!(
                "knz pmax {pmax} qmax {qmax}: {}",
                if ok { "passed" } else { "FAILED" }
            );
            Ok(ok)
        }
        QuasirepCommand::Probe4B { class, kmax, out } => {
            let x = catalog
                .hauptmodul(class, 4 * kmax as i64 + 3)
                .map_err(|e| e.to_string())?;
            let residuals = recursion_probe_4b(&x, kmax).map_err(|e| e.to_string())?;
            let rows = ProbeOut {
                class: class.to_string(),
                kmax,
                residuals: residuals
                    .iter()
                    .map(|(k, r)| ProbeRow { k: *k, residual: format_rational(r) })
                    .collect(),
            };
            let text = match out.format {
                Format::Json => to_json(&rows)?,
                _ => rows
                    .residuals
                    .iter()
                    .map(|r| format!("k = {}: residual {}", r.k, r.residual))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            emit(&out, text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            let mut stderr = std::io::stderr();
            let _ = writeln!(stderr, "error: {message}");
            ExitCode::from(1)
        }
    }
}
