use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hochschild_core::hochschild::{build_reduced_resolution, DEFAULT_SIZE_LIMIT, SIZE_LIMIT_ENV};
use hochschild_core::products::{generator_span_check, ring_structure_constants, SpanReport, StructureTable};
use hochschild_core::ring::{Coefficients, Ring};
use hochschild_core::table::{compute_table, Kind, Method, TableRow};
use hochschild_core::verify::{morse_reproduction, run_suites, VerifyConfig, VerifyReport};
use hochschild_core::Error;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE_LIMIT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Hochschild homology and cohomology of exterior algebras Λ[x1..xn].
#[derive(Parser, Debug)]
#[command(name = "hochschild", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest basis allowed in one degree of a bar complex.
    #[arg(long, global = true, env = SIZE_LIMIT_ENV, default_value_t = DEFAULT_SIZE_LIMIT)]
    size_limit: usize,

    /// Report progress and timings on stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Homology,
    Cohomology,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Reduced,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Closed => Method::Closed,
            MethodArg::Reduced => Method::Reduced,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(Args, Debug)]
struct Shape {
    /// Number of exterior generators.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=31))]
    n: u64,

    /// Highest degree to report.
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
}

fn parse_ring(s: &str) -> Result<Coefficients, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-degree HH_k and HH^k.
    Table {
        #[command(flatten)]
        shape: Shape,
        /// Coefficients: Z, Q, F<p> (comma-separated for several).
        #[arg(long, value_parser = parse_ring, value_delimiter = ',', default_value = "Z")]
        ring: Vec<Coefficients>,
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Fill the elapsed_ms CSV column (otherwise left empty so output is reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Cross-check bar complexes, multiset complexes, closed forms, matchings and products.
    Verify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_parser = parse_ring, value_delimiter = ',', default_value = "Z,Q,F2,F3")]
        ring: Vec<Coefficients>,
    },
    /// The minimal resolution: bases, differentials and minimality.
    Resolution {
        #[command(flatten)]
        shape: Shape,
        /// Also rebuild it by Morse reduction of the bar resolution and compare.
        #[arg(long)]
        check: bool,
    },
    /// Multiplication table of HH^* and the generator span check.
    Cup {
        #[command(flatten)]
        shape: Shape,
        /// A field: Q or F<p>.
        #[arg(long, value_parser = parse_ring, default_value = "Q")]
        ring: Coefficients,
        /// Leave x_[n]⊗1 out of the generators.
        #[arg(long)]
        without_top: bool,
    },
}

struct Ctx {
    format: Format,
    limit: usize,
    verbose: u8,
    out: BufWriter<io::Stdout>,
}

impl Ctx {
    fn line(&mut self, s: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.out, "{}", s.as_ref())
    }

    fn json(&mut self, v: Value) -> io::Result<()> {
        writeln!(self.out, "{v}")
    }

    fn log(&self, s: impl FnOnce() -> String) {
        if self.verbose > 0 {
            eprintln!("{}", s());
        }
    }
}

/// Failure modes, each with its own exit status.
enum Failure {
    Mismatch,
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx { format: cli.format, limit: cli.size_limit, verbose: cli.verbose, out: BufWriter::new(io::stdout()) };
    let result = match cli.command {
        Command::Table { shape, ring, kind, method, timings } => table(&mut ctx, &shape, &ring, kind, method.into(), timings),
        Command::Verify { shape, ring } => verify(&mut ctx, &shape, ring),
        Command::Resolution { shape, check } => resolution(&mut ctx, &shape, check),
        Command::Cup { shape, ring, without_top } => cup(&mut ctx, &shape, ring, without_top),
    };
    let flushed = ctx.out.flush();
    match result.and(flushed.map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(EXIT_MISMATCH),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::SizeLimit { .. } => {
                    eprintln!("hint: raise --size-limit or {SIZE_LIMIT_ENV}, or lower --max-degree");
                    EXIT_SIZE_LIMIT
                }
                Error::UnsupportedRing(_) | Error::InvalidInput(_) => EXIT_USAGE,
                _ => EXIT_INTERNAL,
            })
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn kinds(k: KindArg) -> Vec<Kind> {
    match k {
        KindArg::Homology => vec![Kind::Homology],
        KindArg::Cohomology => vec![Kind::Cohomology],
        KindArg::Both => vec![Kind::Homology, Kind::Cohomology],
    }
}

fn torsion_list(row: &TableRow) -> Vec<String> {
    row.group.torsion.iter().map(ToString::to_string).collect()
}

fn row_json(row: &TableRow) -> Value {
    // torsion divisors can exceed u64 in principle; emit them as JSON numbers when they fit
    let torsion: Vec<Value> = row
        .group
        .torsion
        .iter()
        .map(|d| d.to_string().parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::from(d.to_string())))
        .collect();
    let mut v = json!({
        "n": row.n,
        "k": row.k,
        "ring": row.ring.to_string(),
        "kind": row.kind,
        "free": row.group.free_rank,
        "torsion": torsion,
        "method": row.method,
    });
    if let Some(flag) = &row.flag {
        v["flag"] = Value::from(flag.clone());
    }
    v
}

fn symbol(kind: Kind) -> &'static str {
    match kind {
        Kind::Homology => "HH_k",
        Kind::Cohomology => "HH^k",
    }
}

fn table(ctx: &mut Ctx, shape: &Shape, rings: &[Coefficients], kind: KindArg, method: Method, timings: bool) -> Result<(), Failure> {
    let n = shape.n as usize;
    let mut blocks: Vec<(Coefficients, Vec<(Kind, Vec<TableRow>, u128)>)> = Vec::new();
    for &ring in rings {
        let mut per_kind = Vec::new();
        for kind in kinds(kind) {
            let start = Instant::now();
            let rows = compute_table(n, shape.max_degree, ring, kind, method, ctx.limit)?;
            let elapsed = start.elapsed().as_millis();
            ctx.log(|| format!("{kind} over {ring} by {method}: {elapsed} ms"));
            per_kind.push((kind, rows, elapsed));
        }
        blocks.push((ring, per_kind));
    }

    match ctx.format {
        Format::Json => {
            for (_, per_kind) in &blocks {
                for (_, rows, _) in per_kind {
                    for row in rows {
                        ctx.json(row_json(row))?;
                    }
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut ctx.out);
            w.write_record(["n", "k", "ring", "kind", "free_rank", "torsion_divisors", "method", "elapsed_ms"])?;
            for (_, per_kind) in &blocks {
                for (_, rows, elapsed) in per_kind {
                    for row in rows {
                        w.write_record([
                            row.n.to_string(),
                            row.k.to_string(),
                            row.ring.to_string(),
                            row.kind.to_string(),
                            row.group.free_rank.to_string(),
                            format!("[{}]", torsion_list(row).join(",")),
                            row.method.to_string(),
                            if timings { elapsed.to_string() } else { String::new() },
                        ])?;
                    }
                }
            }
            w.flush()?;
        }
        Format::Text => {
            for (i, (ring, per_kind)) in blocks.iter().enumerate() {
                if i > 0 {
                    ctx.line("")?;
                }
                ctx.line(format!("A = Λ[x1..x{n}] over {ring}, method {method}"))?;
                let header: Vec<&str> = per_kind.iter().map(|(k, _, _)| symbol(*k)).collect();
                let cells: Vec<Vec<String>> = per_kind.iter().map(|(_, rows, _)| rows.iter().map(|r| r.group.to_string()).collect()).collect();
                let widths: Vec<usize> = header
                    .iter()
                    .zip(&cells)
                    .map(|(h, c)| c.iter().map(|s| s.chars().count()).chain([h.len()]).max().unwrap_or(0))
                    .collect();
                let mut head = format!("{:>3}", "k");
                for (h, w) in header.iter().zip(&widths) {
                    head.push_str(&format!("  {h:<w$}"));
                }
                ctx.line(head.trim_end())?;
                for k in 0..=shape.max_degree {
                    let mut line = format!("{k:>3}");
                    for (c, w) in cells.iter().zip(&widths) {
                        let s = &c[k];
                        let pad = w - s.chars().count();
                        line.push_str(&format!("  {s}{}", " ".repeat(pad)));
                    }
                    ctx.line(line.trim_end())?;
                }
                for (kind, rows, _) in per_kind {
                    for row in rows.iter().filter(|r| r.flag.is_some()) {
                        let name = symbol(*kind).replace('k', &row.k.to_string());
                        ctx.line(format!("note: {name}: {}", row.flag.as_deref().unwrap_or_default()))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify(ctx: &mut Ctx, shape: &Shape, rings: Vec<Coefficients>) -> Result<(), Failure> {
    let config = VerifyConfig { n: shape.n as usize, max_degree: shape.max_degree, rings, limit: ctx.limit };
    let start = Instant::now();
    let report = run_suites(&config)?;
    ctx.log(|| format!("verification took {} ms", start.elapsed().as_millis()));
    emit_verify(ctx, &report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn emit_verify(ctx: &mut Ctx, report: &VerifyReport) -> Result<(), Failure> {
    match ctx.format {
        Format::Text => ctx.line(report.to_string())?,
        Format::Json => {
            for c in &report.cells {
                ctx.json(json!({
                    "record": "cell",
                    "n": c.n,
                    "k": c.k,
                    "ring": c.ring.to_string(),
                    "kind": c.kind,
                    "oracle": c.oracle.to_string(),
                    "reduced": c.reduced.to_string(),
                    "closed": c.closed.to_string(),
                    "agree": c.agrees(),
                }))?;
            }
            for s in &report.suites {
                ctx.json(json!({
                    "record": "suite",
                    "name": s.name,
                    "checks": s.checks,
                    "passed": s.passed(),
                    "failures": s.failures,
                    "notes": s.notes,
                }))?;
            }
            ctx.json(json!({ "record": "summary", "passed": report.passed(), "cells": report.cells.len() }))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut ctx.out);
            w.write_record(["n", "k", "ring", "kind", "oracle", "reduced", "closed", "agree"])?;
            for c in &report.cells {
                w.write_record([
                    c.n.to_string(),
                    c.k.to_string(),
                    c.ring.to_string(),
                    c.kind.to_string(),
                    c.oracle.to_string(),
                    c.reduced.to_string(),
                    c.closed.to_string(),
                    c.agrees().to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn resolution(ctx: &mut Ctx, shape: &Shape, check: bool) -> Result<(), Failure> {
    let n = shape.n as usize;
    let res = build_reduced_resolution(n, shape.max_degree)?;
    let env = res.ring().clone();
    let mut outside = 0usize;
    let mut entries = 0usize;
    for d in res.differentials() {
        for (_, _, w) in d.entries() {
            entries += 1;
            if !env.base().is_zero(&env.augmentation(w)) {
                outside += 1;
            }
        }
    }
    let morse = if check { Some(morse_reproduction(n, shape.max_degree, ctx.limit)?) } else { None };

    match ctx.format {
        Format::Text => {
            ctx.line(format!("minimal resolution of A = Λ[x1..x{n}] as an A-bimodule, degrees 0..{}", shape.max_degree))?;
            for k in 0..=shape.max_degree {
                let basis = res.basis(k);
                ctx.line(format!("degree {k}: rank {}", basis.len()))?;
                for g in basis {
                    if k == 0 {
                        ctx.line(format!("  {g}"))?;
                        continue;
                    }
                    let terms: Vec<String> =
                        res.boundary_of(k, g)?.iter().map(|(t, w)| format!("({})·{t}", env.render(w))).collect();
                    ctx.line(format!("  d {g} = {}", terms.join(" + ")))?;
                }
            }
            ctx.line(format!("minimality: {entries} differential entries, {outside} outside the augmentation ideal"))?;
            if let Some(m) = &morse {
                ctx.line(m.to_string())?;
            }
        }
        Format::Json => {
            for k in 0..=shape.max_degree {
                for g in res.basis(k) {
                    let boundary: Vec<Value> = if k == 0 {
                        Vec::new()
                    } else {
                        res.boundary_of(k, g)?
                            .iter()
                            .map(|(t, w)| json!({ "target": t.to_string(), "weight": env.render(w) }))
                            .collect()
                    };
                    ctx.json(json!({ "record": "generator", "degree": k, "label": g.to_string(), "boundary": boundary }))?;
                }
            }
            let mut summary = json!({ "record": "minimality", "entries": entries, "outside_augmentation_ideal": outside, "minimal": outside == 0 });
            if let Some(m) = &morse {
                summary["morse_reduction_matches"] = Value::from(m.passed());
            }
            ctx.json(summary)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut ctx.out);
            w.write_record(["degree", "source", "target", "weight"])?;
            for k in 1..=shape.max_degree {
                for g in res.basis(k) {
                    for (t, wt) in res.boundary_of(k, g)? {
                        w.write_record([k.to_string(), g.to_string(), t.to_string(), env.render(&wt)])?;
                    }
                }
            }
            w.flush()?;
        }
    }
    let failed = outside > 0 || morse.as_ref().is_some_and(|m| !m.passed());
    if failed {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

fn cup(ctx: &mut Ctx, shape: &Shape, ring: Coefficients, without_top: bool) -> Result<(), Failure> {
    let n = shape.n as usize;
    let start = Instant::now();
    let table = ring_structure_constants(n, ring, shape.max_degree, ctx.limit)?;
    ctx.log(|| format!("structure table: {} ms", start.elapsed().as_millis()));
    let span = if ring.characteristic() == 2 {
        None
    } else {
        Some(generator_span_check(n, ring, shape.max_degree, !without_top)?)
    };
    emit_cup(ctx, &table, span.as_ref())?;
    let span_ok = span.as_ref().is_none_or(|s| s.spans);
    if table.agrees && span_ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

fn emit_cup(ctx: &mut Ctx, table: &StructureTable, span: Option<&SpanReport>) -> Result<(), Failure> {
    match ctx.format {
        Format::Text => {
            ctx.line(table.to_string())?;
            match span {
                Some(s) => ctx.line(s.to_string())?,
                None => ctx.line("span: in characteristic 2 every monomial is a class; no generator check")?,
            }
        }
        Format::Json => {
            for c in &table.classes {
                ctx.json(json!({ "record": "class", "degree": c.degree, "monomial": c.monomial, "cochain": c.cochain }))?;
            }
            for p in &table.products {
                let mut v = serde_json::to_value(p).map_err(|e| Failure::Io(io::Error::other(e)))?;
                v["record"] = Value::from("product");
                ctx.json(v)?;
            }
            if let Some(s) = span {
                let mut v = serde_json::to_value(s).map_err(|e| Failure::Io(io::Error::other(e)))?;
                v["record"] = Value::from("span");
                ctx.json(v)?;
            }
            ctx.json(json!({ "record": "summary", "n": table.n, "ring": table.ring, "agrees": table.agrees }))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut ctx.out);
            w.write_record(["left", "right", "degree", "product", "agree"])?;
            for p in &table.products {
                let product: Vec<String> = p.reduced.iter().map(|t| format!("{}*{}", t.coefficient, t.class)).collect();
                w.write_record([p.left.clone(), p.right.clone(), p.degree.to_string(), product.join(" + "), p.agree.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

