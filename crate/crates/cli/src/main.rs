use std::fmt::Write as _;
use std::process::ExitCode;

use cayley_core::classify::{is_ramanujan, pair_report, spectral_predicates, triple_report, ClassificationReport, PairKind};
use cayley_core::oracle::{role_spectrum, sweep::random_pair_sweep, verify_spec, DEFAULT_BOUND};
use cayley_core::search::{
    build_bundle, enumerate_specs, find_pairs, reproduce_lists, table1_rows, table_csv, GraphBundle, Recipe,
    Relation, SearchConfig, Table1Row,
};
use cayley_core::{closed_form_energies, parse_ring_spec, Error, Execution, FamilyKind, RingSpec, Role};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_DOMAIN: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "cayley-spectra", version, about = "Exact spectra, energies and Ramanujan classification of unitary Cayley graphs")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Spectrum of one role graph for each ring.
    Spec {
        #[arg(required = true)]
        rings: Vec<String>,
        #[arg(long, default_value = "gr")]
        role: String,
    },
    /// Energies of the difference, sum and complement graphs.
    Energy {
        #[arg(required = true)]
        rings: Vec<String>,
    },
    /// The difference graph against the sum graph (--role grplus) or the complement (--role grbar).
    Pair {
        #[arg(required = true)]
        rings: Vec<String>,
        #[arg(long, default_value = "grplus")]
        role: String,
    },
    /// The difference graph, the sum graph and the complement together.
    Triple {
        #[arg(required = true)]
        rings: Vec<String>,
    },
    /// Smallest rings whose three graphs are equienergetic and Ramanujan.
    Table1 {
        #[arg(long, default_value_t = 169)]
        max: u128,
    },
    /// Finite classification lists re-derived by enumeration.
    Lists,
    /// Oracle against closed forms for every ring up to --max, plus a seeded character-sum sweep.
    Verify {
        #[arg(long, default_value_t = 100)]
        max: u128,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Kronecker-product bundle: four-tuple:R, tensor:role(R), sixteen, mixed, or role(R)*role(S);...
    Bundle { recipe: String },
    /// Rings up to --max, optionally filtered by a relation.
    Enumerate {
        #[arg(long, default_value_t = 100)]
        max: u128,
        /// Comma-separated: field, zmodpk, galois, x2, x3, shape.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        #[arg(long, default_value_t = 64)]
        max_factors: usize,
        #[arg(long)]
        odd_type: bool,
        #[arg(long)]
        dedup: bool,
        /// pair-plus, pair-bar, ram-pair-plus, ram-pair-bar, ram-complement, ram-difference-only, triple, ram-triple.
        #[arg(long)]
        relation: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run = Result<String, Failure>;

fn canonical_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let value: Value = serde_json::to_value(v).map_err(|e| Error::Domain(format!("serialization: {e}")))?;
    Ok(value.to_string())
}

fn specs(rings: &[String]) -> Result<Vec<RingSpec>, Error> {
    rings.iter().map(|r| parse_ring_spec(r)).collect()
}

fn no_csv(format: Format, verb: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("--format csv is not available for {verb}")));
    }
    Ok(())
}

fn cmd_spec(rings: &[String], role: &str, format: Format) -> Run {
    no_csv(format, "spec")?;
    let role: Role = role.parse()?;
    let mut out = String::new();
    let mut items = Vec::new();
    for s in specs(rings)? {
        let sp = role_spectrum(&s, role, DEFAULT_BOUND)?;
        let p = spectral_predicates(&sp);
        let ram = is_ramanujan(&sp);
        match format {
            Format::Json => items.push(json!({
                "ring": s.to_string(),
                "role": role.name(),
                "spectrum": sp,
                "energy": sp.energy()?,
                "connected": p.connected,
                "bipartite": p.bipartite,
                "ramanujan": ram.ramanujan,
            })),
            _ => {
                if rings.len() > 1 {
                    write!(out, "{role}({s}) ").unwrap();
                }
                writeln!(out, "{sp}").unwrap();
            }
        }
    }
    if format == Format::Json {
        return canonical_json(&items);
    }
    Ok(out)
}

fn cmd_energy(rings: &[String], format: Format) -> Run {
    let mut rows = Vec::new();
    for s in specs(rings)? {
        let e = |r: Role| -> Result<u128, Error> { role_spectrum(&s, r, DEFAULT_BOUND)?.energy() };
        let (eg, ebar) = closed_form_energies(&s)?;
        rows.push((s.to_string(), s.order(), e(Role::Gr)?, e(Role::GrPlus)?, e(Role::GrBar)?, eg, ebar));
    }
    match format {
        Format::Json => canonical_json(
            &rows
                .iter()
                .map(|r| json!({"ring": r.0, "v": r.1, "gr": r.2, "grplus": r.3, "grbar": r.4, "closed_gr": r.5, "closed_grbar": r.6}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            let mut out = String::from("ring,v,gr,grplus,grbar\n");
            for r in &rows {
                writeln!(out, "{},{},{},{},{}", r.0, r.1, r.2, r.3, r.4).unwrap();
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                writeln!(out, "{}: v={} E(gr)={} E(grplus)={} E(grbar)={}", r.0, r.1, r.2, r.3, r.4).unwrap();
            }
            Ok(out)
        }
    }
}

fn report_text(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let roles: Vec<&str> = r.roles.iter().map(|x| x.name()).collect();
    writeln!(out, "{} [{}]: verdict {}", r.subject, roles.join(", "), r.verdict).unwrap();
    writeln!(out, "  v={} kappa={} kappabar={} energy={}", r.order, r.kappa, r.kappabar, r.energy).unwrap();
    for (role, s) in &r.spectra {
        writeln!(out, "  {role}: {s}").unwrap();
    }
    for (name, p) in &r.predicates {
        writeln!(out, "  {name} = {} ({})", p.value, p.witness).unwrap();
    }
    if !r.theorem_tags.is_empty() {
        writeln!(out, "  consistent with: {}", r.theorem_tags.join(", ")).unwrap();
    }
    if !r.flags.is_empty() {
        writeln!(out, "  flags: {}", r.flags.join(", ")).unwrap();
    }
    out
}

fn reports(rs: Vec<ClassificationReport>, format: Format, verb: &str) -> Run {
    no_csv(format, verb)?;
    match format {
        Format::Json => canonical_json(&rs),
        _ => Ok(rs.iter().map(report_text).collect()),
    }
}

fn cmd_pair(rings: &[String], role: &str, format: Format) -> Run {
    let kind = match role.parse::<Role>()? {
        Role::GrPlus => PairKind::GrVsGrPlus,
        Role::GrBar => PairKind::GrVsGrBar,
        other => return Err(Failure::Usage(format!("pair partner must be grplus or grbar, got {other}"))),
    };
    let rs = specs(rings)?.iter().map(|s| pair_report(s, kind)).collect::<Result<Vec<_>, _>>()?;
    reports(rs, format, "pair")
}

fn cmd_triple(rings: &[String], format: Format) -> Run {
    let rs = specs(rings)?.iter().map(triple_report).collect::<Result<Vec<_>, _>>()?;
    reports(rs, format, "triple")
}

fn table_text(rows: &[Table1Row]) -> String {
    let w = rows.iter().map(|r| r.label.len()).max().unwrap_or(5).max(5);
    let mut out = format!("{:<w$} {:>5} {:>6} {:>6} {:>7} iso\n", "graph", "v", "kappa", "kbar", "energy");
    for r in rows {
        writeln!(
            out,
            "{:<w$} {:>5} {:>6} {:>6} {:>7} {}",
            r.label,
            r.v,
            r.kappa,
            r.kappabar,
            r.energy,
            if r.iso { "*" } else { "" }
        )
        .unwrap();
    }
    out
}

fn cmd_table1(max: u128, format: Format) -> Run {
    let rows = table1_rows(max, Execution::default())?;
    match format {
        Format::Csv => Ok(table_csv(&rows)),
        Format::Json => canonical_json(&rows),
        Format::Text => Ok(table_text(&rows)),
    }
}

fn cmd_lists(format: Format) -> Run {
    no_csv(format, "lists")?;
    let checks = reproduce_lists(Execution::default())?;
    if format == Format::Json {
        return canonical_json(&checks);
    }
    let mut out = String::new();
    for c in &checks {
        let mark = if c.passed() { "ok  " } else { "DIFF" };
        writeln!(out, "{mark} {} [{}]: {} expected, {} found", c.name, c.domain, c.expected.len(), c.found.len()).unwrap();
        if !c.passed() {
            writeln!(out, "     missing {:?} extra {:?}", c.missing, c.extra).unwrap();
        }
    }
    Ok(out)
}

fn cmd_verify(max: u128, seed: u64, samples: usize, format: Format) -> Run {
    no_csv(format, "verify")?;
    let all = enumerate_specs(&SearchConfig::new(max))?;
    let exec = Execution::default();
    let runs = exec.try_map(&all, |s| verify_spec(s, DEFAULT_BOUND))?;
    let sweep = random_pair_sweep(seed, samples, 3..=40, exec)?;
    for c in &sweep {
        if (c.difference_energy - c.sum_energy).abs() > 1e-6 * c.n as f64 {
            return Err(Error::Mismatch {
                context: format!("energies of difference and sum graphs on Z{} with S={:?}", c.n, c.s_set),
                expected: c.difference_energy.to_string(),
                found: c.sum_energy.to_string(),
            }
            .into());
        }
    }
    if format == Format::Json {
        return canonical_json(&json!({"rings": runs.len(), "max": max, "seed": seed, "samples": sweep.len()}));
    }
    Ok(format!(
        "verified {} rings with |R| <= {max} against the oracle; {} seeded connection sets (seed {seed}) agree\n",
        runs.len(),
        sweep.len()
    ))
}

fn bundle_text(b: &GraphBundle) -> String {
    let mut out = format!(
        "{}: {} members on {} vertices, {} duplicates removed, {} distinct spectra\n",
        b.name,
        b.members.len(),
        b.n,
        b.duplicates_removed,
        b.distinct_spectra()
    );
    for (i, m) in b.members.iter().enumerate() {
        writeln!(out, "  {i:>2} {} E={} loops={} {}", m.label, m.energy, m.trace, m.spectrum).unwrap();
    }
    writeln!(out, "  all equienergetic: {}", b.all_equienergetic).unwrap();
    writeln!(out, "  isospectral pairs: {:?}", b.isospectral_pairs).unwrap();
    if !b.theorem_tags.is_empty() {
        writeln!(out, "  consistent with: {}", b.theorem_tags.join(", ")).unwrap();
    }
    out
}

fn cmd_bundle(recipe: &str, format: Format) -> Run {
    no_csv(format, "bundle")?;
    let b = build_bundle(&recipe.parse::<Recipe>()?)?;
    match format {
        Format::Json => canonical_json(&b),
        _ => Ok(bundle_text(&b)),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_enumerate(
    max: u128,
    families: &[String],
    max_factors: usize,
    odd_type: bool,
    dedup: bool,
    relation: Option<&str>,
    format: Format,
) -> Run {
    let mut cfg = SearchConfig::new(max).max_factors(max_factors).odd_type(odd_type).dedup(dedup);
    if !families.is_empty() {
        let f = families.iter().map(|f| f.parse()).collect::<Result<Vec<FamilyKind>, _>>()?;
        cfg = cfg.families(&f);
    }
    let labels: Vec<(String, u128)> = match relation {
        None => enumerate_specs(&cfg)?.iter().map(|s| (s.to_string(), s.order())).collect(),
        Some(r) => {
            let found = find_pairs(&cfg, r.parse::<Relation>()?, Execution::default())?;
            if format == Format::Json {
                return canonical_json(&found);
            }
            found.iter().map(|r| (r.subject.to_string(), r.order)).collect()
        }
    };
    match format {
        Format::Json => canonical_json(&labels.iter().map(|(l, v)| json!({"ring": l, "v": v})).collect::<Vec<_>>()),
        Format::Csv => {
            let mut out = String::from("ring,v\n");
            for (l, v) in &labels {
                writeln!(out, "{l},{v}").unwrap();
            }
            Ok(out)
        }
        Format::Text => Ok(labels.iter().map(|(l, _)| format!("{l}\n")).collect()),
    }
}

fn run(cli: Cli) -> Run {
    let f = cli.format;
    match &cli.verb {
        Verb::Spec { rings, role } => cmd_spec(rings, role, f),
        Verb::Energy { rings } => cmd_energy(rings, f),
        Verb::Pair { rings, role } => cmd_pair(rings, role, f),
        Verb::Triple { rings } => cmd_triple(rings, f),
        Verb::Table1 { max } => cmd_table1(*max, f),
        Verb::Lists => cmd_lists(f),
        Verb::Verify { max, seed, samples } => cmd_verify(*max, *seed, *samples, f),
        Verb::Bundle { recipe } => cmd_bundle(recipe, f),
        Verb::Enumerate { max, families, max_factors, odd_type, dedup, relation } => {
            cmd_enumerate(*max, families, *max_factors, *odd_type, *dedup, relation.as_deref(), f)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let json = cli.format == Format::Json;
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            if json {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_verification_failure() { EXIT_MISMATCH } else { EXIT_DOMAIN })
        }
    }
}
