//! Command-line front end for the loop-algebra engine.
//!
//! Six subcommands cover the library's surface: `classify` prints the
//! class-count breakdown of one group algebra, `decompose` its
//! Wedderburn component counts, `loop` the component counts of an RA
//! loop algebra, `codes` the primitive idempotents of an abelian group
//! algebra, `verify` cross-checks enumeration against the subquotient
//! pipeline and the closed forms over a parameter grid, and `table`
//! prints an embedded reference table and diffs it against fresh
//! derivation. Output is deterministic for a fixed request and seed.
//! Exit codes: 0 success, 1 verification failure or table divergence,
//! 2 usage error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use loopalg::abelian::{self, AbelianType};
use loopalg::classify::{
    discrepancy_report_with_ceiling, embedded_case_fixtures, pipeline_breakdown,
    pipeline_breakdown_with_ceiling, ClassCountBreakdown, FieldSpec, DEFAULT_ORACLE_CEILING_LOG2,
};
use loopalg::codes;
use loopalg::groups::{Family, GroupSpec};
use loopalg::raloops::{
    component_count_oracle, embedded_loop_table, ideal_projection_check, loop_decompose,
    loop_decompose_with_ceiling, norm_check, LoopClass, LoopSpec,
};
use loopalg::wedderburn;

#[derive(Parser)]
#[command(
    name = "loopalg",
    version,
    about = "Wedderburn decompositions of 2-group algebras and RA loop algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class-count breakdown of one group algebra.
    Classify(GroupArgs),
    /// Wedderburn component counts of one group algebra.
    Decompose(GroupArgs),
    /// Component counts of one RA loop algebra.
    Loop(LoopArgs),
    /// Primitive idempotents of one abelian group algebra.
    ///
    /// Coefficients over an extension field of prime characteristic p are
    /// printed as packed integers: an element with coordinates a_0..a_{k-1}
    /// over the prime field appears as the sum of a_i * p^i.
    Codes(CodesArgs),
    /// Cross-checks enumeration, subquotient counting, and closed forms.
    Verify(VerifyArgs),
    /// Prints an embedded reference table and diffs it against derivation.
    Table(TableArgs),
}

/// Output encoding shared by every subcommand.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct GroupArgs {
    /// Group family: D1, D2, D3, D4, D5, or D5xC.
    #[arg(long)]
    family: String,
    /// Central generator orders, as exponents of two.
    #[arg(long, num_args = 1.., required = true)]
    m: Vec<u32>,
    /// Coefficient field: Q or Fq:<odd prime power>.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Enumeration ceiling, as the log2 of the largest tolerated order.
    #[arg(long)]
    ceiling: Option<u32>,
}

#[derive(Args)]
struct LoopArgs {
    /// Loop class: L1 through L7.
    #[arg(long)]
    cls: String,
    /// Central generator orders of the underlying group.
    #[arg(long, num_args = 1.., required = true)]
    m: Vec<u32>,
    /// Coefficient field: Q or Fq:<odd prime power>.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Enumeration ceiling, as the log2 of the largest tolerated order.
    #[arg(long)]
    ceiling: Option<u32>,
}

#[derive(Args)]
struct CodesArgs {
    /// Cyclic factor orders of the ambient group, as exponents of two.
    #[arg(long, num_args = 1.., required = true)]
    exps: Vec<u32>,
    /// Field size, an odd prime power.
    #[arg(long)]
    q: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest tolerated group order, as a log2.
    #[arg(long)]
    ceiling: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict the grid to one family.
    #[arg(long)]
    family: Option<String>,
    /// Coefficient fields to check; defaults to Q Fq:3 Fq:5 Fq:9 Fq:11.
    #[arg(long = "field", num_args = 1..)]
    fields: Vec<String>,
    /// Largest group order on the grid, as a log2.
    #[arg(long, default_value_t = 10)]
    max_log2: u64,
    /// Oracle enumeration ceiling, as a log2.
    #[arg(long)]
    ceiling: Option<u32>,
    /// Seed for the sampled loop-algebra checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TableArgs {
    /// Which embedded table to print and audit.
    #[arg(value_enum)]
    which: TableKind,
    /// Modulus for the abelian table's modular column, congruent to 3
    /// modulo 8.
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// Largest sampled value of the row parameters.
    #[arg(long, default_value_t = 8)]
    a_max: u64,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    /// Class counts of products of cyclic 2-groups.
    Abelian,
    /// Decompositions of the order-64 RA loops over Q.
    Loops,
}

/// A terminating failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(err: impl std::fmt::Display) -> Failure {
        Failure {
            code: 2,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: &Command) -> Result<u8, Failure> {
    match command {
        Command::Classify(args) => run_classify(args),
        Command::Decompose(args) => run_decompose(args),
        Command::Loop(args) => run_loop(args),
        Command::Codes(args) => run_codes(args),
        Command::Verify(args) => run_verify(args),
        Command::Table(args) => run_table(args),
    }
}

fn resolve_group(args: &GroupArgs) -> Result<(GroupSpec, FieldSpec), Failure> {
    let family: Family = args.family.parse().map_err(Failure::usage)?;
    let spec = GroupSpec::new(family, &args.m).map_err(Failure::usage)?;
    let field = FieldSpec::parse(&args.field).map_err(Failure::usage)?;
    Ok((spec, field))
}

fn group_label(spec: &GroupSpec) -> String {
    let ms = spec
        .ms()
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{}({})", spec.family(), ms)
}

fn breakdown_json(spec: &GroupSpec, b: &ClassCountBreakdown) -> String {
    let ms = spec
        .ms()
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let mut out = format!(
        "{{\"family\":\"{}\",\"ms\":[{}],\"field\":\"{}\"",
        spec.family(),
        ms,
        b.field
    );
    for (label, value) in b.quantities() {
        out.push_str(&format!(",\"{label}\":{value}"));
    }
    out.push('}');
    out
}

fn run_classify(args: &GroupArgs) -> Result<u8, Failure> {
    let (spec, field) = resolve_group(args)?;
    let ceiling = args.ceiling.unwrap_or(abelian::DEFAULT_CEILING_LOG2);
    let breakdown =
        pipeline_breakdown_with_ceiling(&spec, &field, ceiling).map_err(Failure::usage)?;
    match args.format {
        Format::Json => println!("{}", breakdown_json(&spec, &breakdown)),
        Format::Tsv => {
            println!("quantity\tvalue");
            for (label, value) in breakdown.quantities() {
                println!("{label}\t{value}");
            }
        }
    }
    Ok(0)
}

fn run_decompose(args: &GroupArgs) -> Result<u8, Failure> {
    let (spec, field) = resolve_group(args)?;
    let ceiling = args.ceiling.unwrap_or(abelian::DEFAULT_CEILING_LOG2);
    let summary =
        wedderburn::decompose_with_ceiling(&spec, &field, ceiling).map_err(Failure::usage)?;
    match args.format {
        Format::Json => println!("{}", summary.json_record(&spec)),
        Format::Tsv => {
            println!("quantity\tvalue");
            println!("num_fields\t{}", summary.num_fields);
            println!("num_quaternion\t{}", summary.num_quaternion);
            println!("commutative_dim\t{}", summary.commutative_dim);
            println!("total_dim\t{}", summary.total_dim);
            if let Some(degrees) = &summary.field_degrees {
                let ds = degrees
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                println!("field_degrees\t{ds}");
            }
        }
    }
    Ok(0)
}

fn run_loop(args: &LoopArgs) -> Result<u8, Failure> {
    let cls: LoopClass = args.cls.parse().map_err(Failure::usage)?;
    let spec = LoopSpec::new(cls, &args.m).map_err(Failure::usage)?;
    let field = FieldSpec::parse(&args.field).map_err(Failure::usage)?;
    let ceiling = args.ceiling.unwrap_or(abelian::DEFAULT_CEILING_LOG2);
    let summary =
        loop_decompose_with_ceiling(&spec, &field, ceiling).map_err(Failure::usage)?;
    match args.format {
        Format::Json => println!("{}", summary.json_record(&spec)),
        Format::Tsv => {
            println!("quantity\tvalue");
            println!("num_fields\t{}", summary.num_fields);
            println!("num_cayley\t{}", summary.num_cayley);
        }
    }
    Ok(0)
}

fn run_codes(args: &CodesArgs) -> Result<u8, Failure> {
    let ambient = AbelianType::new(args.exps.iter().copied());
    let ceiling = args.ceiling.unwrap_or(codes::DEFAULT_CODES_CEILING_LOG2);
    let list = codes::primitive_idempotents_with_ceiling(&ambient, args.q, ceiling)
        .map_err(Failure::usage)?;
    let check =
        codes::verify_idempotent_identities_with_ceiling(&ambient, args.q, &list, ceiling)
            .map_err(Failure::usage)?;
    if !check.all_hold() {
        return Err(Failure {
            code: 1,
            message: format!("idempotent identities failed: {check:?}"),
        });
    }
    match args.format {
        Format::Json => {
            let entries: Vec<String> = list
                .iter()
                .map(|code| {
                    let coeffs = code
                        .idempotent
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    format!(
                        "{{\"dimension\":{},\"idempotent\":[{}]}}",
                        code.dimension, coeffs
                    )
                })
                .collect();
            let logs = ambient
                .factor_logs()
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",");
            println!(
                "{{\"ambient\":[{}],\"q\":{},\"codes\":[{}]}}",
                logs,
                args.q,
                entries.join(",")
            );
        }
        Format::Tsv => {
            println!("code\tdimension\texponents\tcoefficient");
            for (idx, code) in list.iter().enumerate() {
                for (el, coeff) in ambient.elements().zip(&code.idempotent) {
                    let coords = el
                        .coords()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    println!("{idx}\t{}\t{coords}\t{coeff}", code.dimension);
                }
            }
        }
    }
    Ok(0)
}

/// All parameter tuples for a family with `2^{2 + Σ mᵢ} ≤ 2^{max_log2}`,
/// in lexicographic order.
fn parameter_grid(family: Family, max_log2: u64) -> Vec<Vec<u32>> {
    fn extend(grid: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>, arity: usize, budget: u64) {
        if prefix.len() == arity {
            grid.push(prefix.clone());
            return;
        }
        let used: u64 = prefix.iter().map(|&m| u64::from(m)).sum();
        let reserved = (arity - prefix.len() - 1) as u64;
        let mut m = 1u64;
        while used + m + reserved <= budget {
            prefix.push(m as u32);
            extend(grid, prefix, arity, budget);
            prefix.pop();
            m += 1;
        }
    }
    let arity = family.num_central_generators();
    let budget = max_log2.saturating_sub(2);
    let mut grid = Vec::new();
    extend(&mut grid, &mut Vec::new(), arity, budget);
    grid
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let fields: Vec<FieldSpec> = if args.fields.is_empty() {
        ["Q", "Fq:3", "Fq:5", "Fq:9", "Fq:11"]
            .iter()
            .map(|tag| FieldSpec::parse(tag).expect("built-in tags parse"))
            .collect()
    } else {
        args.fields
            .iter()
            .map(|tag| FieldSpec::parse(tag).map_err(Failure::usage))
            .collect::<Result<_, _>>()?
    };
    let families: Vec<Family> = match &args.family {
        Some(tag) => vec![tag.parse().map_err(Failure::usage)?],
        None => vec![
            Family::D1,
            Family::D2,
            Family::D3,
            Family::D4,
            Family::D5,
            Family::D5xC,
        ],
    };
    let ceiling = args.ceiling.unwrap_or(DEFAULT_ORACLE_CEILING_LOG2);
    let mut failures = 0u64;

    for family in &families {
        for ms in parameter_grid(*family, args.max_log2) {
            let spec = GroupSpec::new(*family, &ms).map_err(Failure::usage)?;
            for field in &fields {
                let rows = discrepancy_report_with_ceiling(&spec, field, ceiling)
                    .map_err(Failure::usage)?;
                let disagreements: Vec<String> = rows
                    .iter()
                    .filter(|row| !row.agree)
                    .map(|row| row.to_string())
                    .collect();
                if disagreements.is_empty() {
                    println!("group {} {} ok", group_label(&spec), field);
                } else {
                    failures += disagreements.len() as u64;
                    for line in disagreements {
                        println!("group {} {} {line}", group_label(&spec), field);
                    }
                }
            }
        }
    }

    for fixture in embedded_case_fixtures().map_err(Failure::usage)? {
        let spec = fixture.spec().map_err(Failure::usage)?;
        let derived = pipeline_breakdown(&spec, &fixture.field).map_err(Failure::usage)?;
        let label = group_label(&spec);
        let matches = derived == fixture.expected;
        match (matches, fixture.erratum_candidate) {
            (true, false) => println!("fixture {label} {} ok", fixture.field),
            (false, true) => println!(
                "fixture {label} {} known divergence: recorded [{}] derived [{}]",
                fixture.field, fixture.expected, derived
            ),
            (false, false) => println!(
                "fixture {label} {} mismatch (not fatal): recorded [{}] derived [{}]",
                fixture.field, fixture.expected, derived
            ),
            (true, true) => {
                failures += 1;
                println!(
                    "fixture {label} {} flagged as divergent but matches derivation",
                    fixture.field
                );
            }
        }
    }

    let loop_specs: [(LoopClass, &[u32]); 7] = [
        (LoopClass::L1, &[2]),
        (LoopClass::L2, &[2]),
        (LoopClass::L3, &[1, 1]),
        (LoopClass::L4, &[1, 1]),
        (LoopClass::L5, &[1, 1, 1]),
        (LoopClass::L6, &[1, 1, 1]),
        (LoopClass::L7, &[1, 1, 1, 1]),
    ];
    for (cls, ms) in loop_specs {
        let spec = LoopSpec::new(cls, ms).map_err(Failure::usage)?;
        for q in [3u64, 5] {
            let field = FieldSpec::finite(q).map_err(Failure::usage)?;
            let summary = loop_decompose(&spec, &field).map_err(Failure::usage)?;
            let oracle = component_count_oracle(&spec, q).map_err(Failure::usage)?;
            let pipeline_total = &summary.num_fields + &summary.num_cayley;
            if BigInt::from(oracle.component_count) == pipeline_total {
                println!("loop {spec} {field} components {} ok", oracle.component_count);
            } else {
                failures += 1;
                println!(
                    "loop {spec} {field} oracle={} pipeline={} DISAGREE",
                    oracle.component_count, pipeline_total
                );
            }
        }
        let norms = norm_check(&spec, 3, 32, args.seed).map_err(Failure::usage)?;
        if norms.centrality_failures == 0 && norms.multiplicativity_failures == 0 {
            println!("loop {spec} norms ok ({} samples)", norms.samples);
        } else {
            failures += 1;
            println!(
                "loop {spec} norms FAILED: {} central, {} multiplicative",
                norms.centrality_failures, norms.multiplicativity_failures
            );
        }
        let ideals = ideal_projection_check(&spec, 3, 8, args.seed).map_err(Failure::usage)?;
        if ideals.projections_agree && ideals.projection_star_invariant {
            println!("loop {spec} ideal projections ok ({} samples)", ideals.samples);
        } else {
            failures += 1;
            println!(
                "loop {spec} ideal projections FAILED: agree={} star={}",
                ideals.projections_agree, ideals.projection_star_invariant
            );
        }
    }

    if failures > 0 {
        println!("verification failed: {failures} disagreements");
        Ok(1)
    } else {
        println!("verification passed");
        Ok(0)
    }
}

fn run_table(args: &TableArgs) -> Result<u8, Failure> {
    match args.which {
        TableKind::Abelian => {
            let rows = abelian::embedded_class_table();
            match args.format {
                Format::Tsv => {
                    println!("group\tQ-classes\tF-classes");
                    for row in &rows {
                        println!("{}\t{}\t{}", row.shape, row.rational, row.modular);
                    }
                }
                Format::Json => {
                    let entries: Vec<String> = rows
                        .iter()
                        .map(|row| {
                            format!(
                                "{{\"group\":\"{}\",\"rational\":\"{}\",\"modular\":\"{}\"}}",
                                row.shape, row.rational, row.modular
                            )
                        })
                        .collect();
                    println!("{{\"rows\":[{}]}}", entries.join(","));
                }
            }
            let divergences =
                abelian::audit_class_table(args.q, args.a_max).map_err(Failure::usage)?;
            for d in &divergences {
                eprintln!(
                    "row {} ({}) at a={} b={}: rational recorded {} derived {}, modular recorded {} derived {}",
                    d.row_index,
                    rows[d.row_index].shape,
                    d.a,
                    d.b,
                    d.rational.0,
                    d.rational.1,
                    d.modular.0,
                    d.modular.1
                );
            }
            Ok(if divergences.is_empty() { 0 } else { 1 })
        }
        TableKind::Loops => {
            let rows = embedded_loop_table();
            let labels: Vec<String> = rows
                .iter()
                .map(|row| {
                    let ms = row
                        .ms
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    format!("{}({})", row.cls, ms)
                })
                .collect();
            match args.format {
                Format::Tsv => {
                    println!("loop\tfields\tcayley");
                    for (row, label) in rows.iter().zip(&labels) {
                        println!("{label}\t{}\t{}", row.printed_fields, row.printed_cayley);
                    }
                }
                Format::Json => {
                    let entries: Vec<String> = rows
                        .iter()
                        .map(|row| {
                            let ms = row
                                .ms
                                .iter()
                                .map(|m| m.to_string())
                                .collect::<Vec<_>>()
                                .join(",");
                            format!(
                                "{{\"cls\":\"{}\",\"ms\":[{}],\"fields\":{},\"cayley\":{},\"flagged\":{}}}",
                                row.cls, ms, row.printed_fields, row.printed_cayley,
                                row.erratum_candidate
                            )
                        })
                        .collect();
                    println!("{{\"rows\":[{}]}}", entries.join(","));
                }
            }
            let mut hard_divergences = 0u64;
            for (row, label) in rows.iter().zip(&labels) {
                let spec = LoopSpec::new(row.cls, &row.ms).map_err(Failure::usage)?;
                let summary = loop_decompose(&spec, &FieldSpec::Q).map_err(Failure::usage)?;
                let matches = summary.num_fields == BigInt::from(row.printed_fields)
                    && summary.num_cayley == BigInt::from(row.printed_cayley);
                match (matches, row.erratum_candidate) {
                    (true, false) => {}
                    (false, true) => eprintln!(
                        "row {label} known divergence: recorded {}+{} derived {}+{}",
                        row.printed_fields,
                        row.printed_cayley,
                        summary.num_fields,
                        summary.num_cayley
                    ),
                    (false, false) => {
                        hard_divergences += 1;
                        eprintln!(
                            "row {label} DIVERGES: recorded {}+{} derived {}+{}",
                            row.printed_fields,
                            row.printed_cayley,
                            summary.num_fields,
                            summary.num_cayley
                        );
                    }
                    (true, true) => {
                        hard_divergences += 1;
                        eprintln!("row {label} flagged as divergent but matches derivation");
                    }
                }
            }
            Ok(if hard_divergences == 0 { 0 } else { 1 })
        }
    }
}
