use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tmcalc::dsl::{evaluate, parse_with_dimension, render, DslDocument, Expr, Format, Func, Pos};
use tmcalc::random::{self, Shape};
use tmcalc::suite::{run_suite, SuiteConfig, SuiteReport};
use tmcalc::transitions::{
    check_consistency_identity, check_naturality, random_affine, random_quadratic, BaseObject,
};

/// Exterior calculus on the tangent chart of a domain in R^m.
#[derive(Parser)]
#[command(name = "tmcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Chart dimension for documents without an `m = ...` line.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Latex,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Latex => Format::Latex,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKind {
    Complete,
    Vertical,
    Pullback,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, normalize and print a document. `-` reads standard input.
    Eval {
        document: String,
        #[command(flatten)]
        out: Output,
    },
    /// Lift the value of a document from the base to the tangent chart.
    Lift {
        #[arg(value_enum)]
        kind: LiftKind,
        document: String,
        #[command(flatten)]
        out: Output,
    },
    /// Exterior derivative of the value of a document.
    D {
        document: String,
        #[command(flatten)]
        out: Output,
    },
    /// Vertical derivative `d_B` of the value of a document.
    Db {
        document: String,
        #[command(flatten)]
        out: Output,
    },
    /// Lie derivative of a form along a vector field or vector-valued form.
    Lie {
        /// Expression for the field, evaluated in the document's chart.
        along: String,
        document: String,
        #[command(flatten)]
        out: Output,
    },
    /// Run the identity suite.
    Verify {
        /// Comma-separated chart dimensions.
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
        m: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        cases: usize,
        /// Only identities whose id contains this text.
        #[arg(long)]
        filter: Option<String>,
        /// Also compare both sides numerically at random points.
        #[arg(long)]
        numeric: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Check naturality of every lift under random changes of chart.
    TransitionCheck {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        cases: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn read_document(arg: &str) -> Result<String, UsageError> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s)?;
    Ok(s)
}

fn load(arg: &str, m: Option<usize>) -> Result<DslDocument, UsageError> {
    Ok(parse_with_dimension(&read_document(arg)?, m)?)
}

fn final_expression(doc: &mut DslDocument) -> Result<Expr, UsageError> {
    doc.result
        .take()
        .ok_or_else(|| UsageError("the document has no final expression".into()))
}

const START: Pos = Pos { line: 1, column: 1 };

fn wrap(mut doc: DslDocument, func: Func) -> Result<DslDocument, UsageError> {
    let e = final_expression(&mut doc)?;
    doc.result = Some(Expr::Call(func, vec![e], START));
    Ok(doc)
}

fn show(doc: &DslDocument, out: &Output) -> Result<(), UsageError> {
    let value =
        evaluate(doc)?.ok_or_else(|| UsageError("the document has no final expression".into()))?;
    println!("{}", render(&value, out.format.into()));
    Ok(())
}

fn print_report(report: &SuiteReport, format: ReportFormat) {
    if let ReportFormat::Json = format {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).expect("serializable")
        );
        return;
    }
    for r in &report.suite {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:<28} {:>3} cases  {:>9.1} ms  {}",
            r.id, r.cases, r.wall_time_ms, r.anchor
        );
        let failures = r
            .counterexample
            .iter()
            .chain(r.numeric.as_ref().and_then(|n| n.disagreement.as_ref()));
        for c in failures {
            println!(
                "     case {} (m = {}, seed {}): {}",
                c.case, c.m, c.seed, c.check
            );
            for input in &c.inputs {
                println!("       input  {input}");
            }
            println!("       lhs    {}", c.lhs);
            if !c.rhs.is_empty() {
                println!("       rhs    {}", c.rhs);
            }
        }
        if let Some(n) = &r.numeric {
            if !n.agrees {
                println!(
                    "     numeric verdict agreed on {} of {} cases",
                    n.agreeing, r.cases
                );
            }
        }
    }
    let s = &report.summary;
    println!(
        "{} identities, {} failed, {} cases, {:.1} s",
        s.total,
        s.failed,
        s.cases,
        report.wall_time_ms / 1e3
    );
}

#[derive(Serialize)]
struct TransitionCase {
    case: usize,
    kind: &'static str,
    forward: Vec<String>,
    consistency: bool,
    naturality: Vec<(String, bool)>,
    volume_factor: bool,
}

impl TransitionCase {
    fn passed(&self) -> bool {
        self.consistency && self.volume_factor && self.naturality.iter().all(|(_, ok)| *ok)
    }
}

fn transition_case(
    rng: &mut ChaCha8Rng,
    m: usize,
    case: usize,
) -> Result<TransitionCase, UsageError> {
    let shape = Shape::polynomial();
    let quadratic = m >= 2 && case % 3 == 2;
    let t = if quadratic {
        random_quadratic(rng, m)
    } else {
        random_affine(rng, m)
    };
    let p = rng.gen_range(0..=m);
    let objects = [
        (
            "pullback",
            BaseObject::Form(random::base_form(rng, m, p, &shape)),
        ),
        (
            "vertical",
            BaseObject::Field(random::base_field(rng, m, &shape)),
        ),
        (
            "complete",
            BaseObject::Function(random::base_scalar(rng, m, &shape)),
        ),
        (
            "complete",
            BaseObject::Field(random::base_field(rng, m, &shape)),
        ),
        (
            "complete",
            BaseObject::Form(random::base_form(rng, m, p, &shape)),
        ),
        ("xi", BaseObject::None),
        ("B", BaseObject::None),
    ];
    let mut naturality = Vec::new();
    for (lift, object) in &objects {
        let what = match object {
            BaseObject::None => "",
            BaseObject::Function(_) => " of a function",
            BaseObject::Field(_) => " of a field",
            BaseObject::Form(_) => " of a form",
        };
        naturality.push((format!("{lift}{what}"), check_naturality(lift, object, &t)?));
    }
    let det = t.jacobian_determinant();
    Ok(TransitionCase {
        case,
        kind: if quadratic { "quadratic" } else { "affine" },
        forward: t.forward().iter().map(|e| e.to_string()).collect(),
        consistency: check_consistency_identity(&t)?,
        naturality,
        volume_factor: t.tangent().volume_factor() == &det * &det,
    })
}

fn transition_check(
    m: usize,
    seed: u64,
    cases: usize,
    format: ReportFormat,
) -> Result<bool, UsageError> {
    if !(1..=tmcalc::dsl::MAX_DIMENSION).contains(&m) {
        return Err(UsageError(format!(
            "m must lie in 1..={}",
            tmcalc::dsl::MAX_DIMENSION
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results = (0..cases)
        .map(|c| transition_case(&mut rng, m, c))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().all(TransitionCase::passed);
    match format {
        ReportFormat::Json => {
            let doc =
                serde_json::json!({ "m": m, "seed": seed, "cases": results, "passed": passed });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("serializable")
            );
        }
        ReportFormat::Text => {
            for r in &results {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{verdict} case {} ({}): x' = ({})",
                    r.case,
                    r.kind,
                    r.forward.join(", ")
                );
                let failed: Vec<&str> = r
                    .naturality
                    .iter()
                    .filter(|(_, ok)| !ok)
                    .map(|(l, _)| l.as_str())
                    .collect();
                if !failed.is_empty() {
                    println!("     not natural: {}", failed.join(", "));
                }
                if !r.consistency {
                    println!("     second-derivative identity fails");
                }
                if !r.volume_factor {
                    println!("     volume factor differs from det^2");
                }
            }
        }
    }
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::Eval { document, out } => show(&load(&document, out.m)?, &out)?,
        Command::Lift {
            kind,
            document,
            out,
        } => {
            let func = match kind {
                LiftKind::Complete => Func::Clift,
                LiftKind::Vertical => Func::Vlift,
                LiftKind::Pullback => Func::Pull,
            };
            show(&wrap(load(&document, out.m)?, func)?, &out)?
        }
        Command::D { document, out } => show(&wrap(load(&document, out.m)?, Func::D)?, &out)?,
        Command::Db { document, out } => show(&wrap(load(&document, out.m)?, Func::Db)?, &out)?,
        Command::Lie {
            along,
            document,
            out,
        } => {
            let mut doc = load(&document, out.m)?;
            let mut field = parse_with_dimension(&along, Some(doc.m))?;
            if field.m != doc.m {
                return Err(UsageError(format!(
                    "the field lives on m = {}, the document on m = {}",
                    field.m, doc.m
                )));
            }
            let w = final_expression(&mut doc)?;
            let x = final_expression(&mut field)?;
            doc.bindings.extend(field.bindings);
            for s in field.symbols {
                if !doc.symbols.contains(&s) {
                    doc.symbols.push(s);
                }
            }
            doc.result = Some(Expr::Call(Func::Lie, vec![x, w], START));
            show(&doc, &out)?
        }
        Command::Verify {
            m,
            seed,
            cases,
            filter,
            numeric,
            format,
        } => {
            if m.is_empty()
                || m.iter()
                    .any(|d| !(1..=tmcalc::dsl::MAX_DIMENSION).contains(d))
            {
                return Err(UsageError(format!(
                    "every m must lie in 1..={}",
                    tmcalc::dsl::MAX_DIMENSION
                )));
            }
            let report = run_suite(&SuiteConfig {
                dimensions: m,
                cases,
                seed,
                filter,
                numeric,
            });
            if report.suite.is_empty() {
                return Err(UsageError("no identity matches the filter".into()));
            }
            print_report(&report, format);
            return Ok(report.all_passed());
        }
        Command::TransitionCheck {
            m,
            seed,
            cases,
            format,
        } => return transition_check(m, seed, cases, format),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
