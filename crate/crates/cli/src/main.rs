//! `quadcut`: decision procedures, cell decompositions and pair reductions
//! from the command line.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 semantic error,
//! 3 resource limit, 4 a check reported failures.

use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quadcut::cells::{self, cell_decompose, closed_normal_form, closure_set, fiber, topo, TopoOp};
use quadcut::cuts1d::{check_axioms, cut_sup, decompose1, nonval_witness};
use quadcut::formula::{eval_qf, Var};
use quadcut::pair::{
    axioms_pair_check, decide_pair, epf_normal_form, extract_open_core, interpret, lift_trace,
    trace,
};
use quadcut::qe::{self, decide};
use quadcut::report::Report;
use quadcut::{parse, Context, Error, Formula, Lang, Limits, Quad, Rat, Structure, StructureKind};

#[derive(Parser, Debug)]
#[command(
    name = "quadcut",
    version,
    about = "Exact reasoning about Q with a sqrt(d)-slope predicate"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Opts {
    /// Square-free integer d >= 2; the field is Q(sqrt d).
    #[arg(long, global = true, default_value_t = 2)]
    d: u64,
    /// Structure the formula is read in.
    #[arg(long, global = true, value_enum)]
    lang: Option<LangArg>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, env = "QUADCUT_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 100_000)]
    branch_limit: usize,
    #[arg(long, global = true, default_value_t = 3)]
    dim_limit: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LangArg {
    /// L over Q.
    M,
    /// L* over Q(sqrt d).
    Vstar,
    /// L with P over the dense pair.
    Pair,
}

impl LangArg {
    fn lang(self) -> Lang {
        match self {
            LangArg::M => Lang::L,
            LangArg::Vstar => Lang::Lstar,
            LangArg::Pair => Lang::LP,
        }
    }

    fn kind(self) -> StructureKind {
        match self {
            LangArg::M => StructureKind::M,
            LangArg::Vstar => StructureKind::Vstar,
            LangArg::Pair => StructureKind::Pair,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Input {
    /// Formula text, or `-` to read it from stdin.
    formula: String,
}

#[derive(Args, Debug)]
struct CellArg {
    #[command(flatten)]
    input: Input,
    /// Index of the cell in the decomposition of the formula.
    #[arg(long)]
    cell: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse and print a formula.
    Parse(Input),
    /// Evaluate a formula at an assignment.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Comma-separated `var=value`, values like `1/2 - 3*rt`.
        #[arg(long, default_value = "")]
        at: String,
    },
    /// Eliminate quantifiers.
    Qe(Input),
    /// Decide a sentence.
    Decide(Input),
    /// Convex pieces of a set of the line.
    Decompose1(Input),
    /// Supremum of a definable cut in y.
    CutSup(Input),
    /// Rationals straddling the supremum of a cut.
    Nonval {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
    /// Strong cell decomposition.
    Cells(Input),
    /// Hull of one cell of the decomposition.
    Hull(CellArg),
    /// Closure of one cell, or of the whole set without `--cell`.
    Closure {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cell: Option<usize>,
    },
    /// Fiber of one cell over a rational point of its base.
    Fiber {
        #[command(flatten)]
        cell: CellArg,
        /// Comma-separated rationals.
        #[arg(long)]
        at: String,
    },
    /// Closed normal form of a set of F^n.
    NfClosed(Input),
    /// Closure, interior or boundary in F^n.
    Topo {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "cl")]
        op: TopoOp,
    },
    /// Rewrite a pair formula over rational coordinates.
    Interpret(Input),
    /// Decide a sentence in the dense pair.
    PairDecide(Input),
    /// Normal form with one block of existential P-quantifiers.
    Epf(Input),
    /// Trace on Q of a pair-definable set.
    Trace(Input),
    /// Lift the trace back to a pair formula.
    Lift(Input),
    /// Quantifier-free formula over F for an open pair-definable set.
    OpenCore(Input),
    /// Check the axioms of T on random instances.
    CheckAxioms,
    /// Check the axioms of the pair on random instances.
    PairCheck,
    /// Run every acceptance check.
    Selftest,
}

/// A failed command: its message and exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::ResourceLimit { .. } => 3,
            Error::InvalidConfig(_) => 1,
            e if e.is_semantic() => 2,
            _ => 1,
        };
        let name = format!("{e:?}");
        let name = name
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or("Error")
            .to_string();
        Fail(code, format!("{name}: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(1, format!("usage: {}", msg.into()))
}

/// Printable result: text and JSON renderings.
struct Output {
    text: String,
    json: Value,
    /// A check that ran but reported failures.
    failed: bool,
}

impl Output {
    fn new(schema: &str, text: impl Into<String>, mut json: Value) -> Self {
        if let Value::Object(m) = &mut json {
            m.insert("schema".into(), format!("quadcut.{schema}.v1").into());
        }
        Output {
            text: text.into(),
            json,
            failed: false,
        }
    }

    fn formula(schema: &str, f: &Formula) -> Self {
        Output::new(schema, f.to_string(), json!({ "formula": f.to_string() }))
    }

    fn report(r: &Report) -> Self {
        Output {
            text: r.to_text().trim_end().to_string(),
            json: serde_json::to_value(r).expect("report serializes"),
            failed: !r.all_pass,
        }
    }
}

struct Env {
    ctx: Context,
    opts: Opts,
}

impl Env {
    fn lang(&self, default: LangArg, allowed: &[LangArg], cmd: &str) -> Result<LangArg, Fail> {
        let l = self.opts.lang.unwrap_or(default);
        if allowed.contains(&l) {
            Ok(l)
        } else {
            Err(usage(format!(
                "{cmd} does not accept --lang {}",
                lang_name(l)
            )))
        }
    }

    fn read(&self, input: &Input, lang: LangArg) -> Result<Formula, Fail> {
        let text = if input.formula == "-" {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            s
        } else {
            input.formula.clone()
        };
        Ok(parse(text.trim(), lang.lang())?)
    }
}

fn lang_name(l: LangArg) -> &'static str {
    match l {
        LangArg::M => "m",
        LangArg::Vstar => "vstar",
        LangArg::Pair => "pair",
    }
}

const ANY: &[LangArg] = &[LangArg::M, LangArg::Vstar, LangArg::Pair];
const M: &[LangArg] = &[LangArg::M];
const LINE: &[LangArg] = &[LangArg::M, LangArg::Vstar];
const VSTAR: &[LangArg] = &[LangArg::Vstar];
const PAIR: &[LangArg] = &[LangArg::Pair];

fn assignment(text: &str) -> Result<BTreeMap<Var, Quad>, Fail> {
    let mut env = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (v, x) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("expected var=value, found `{part}`")))?;
        env.insert(v.trim().to_string(), x.parse::<Quad>()?);
    }
    Ok(env)
}

fn rationals(text: &str) -> Result<Vec<Rat>, Fail> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<Rat>().map_err(Fail::from))
        .collect()
}

fn quad_json(x: &Quad) -> Value {
    json!({ "a": x.a.to_string(), "b": x.b.to_string() })
}

fn cell_of(env: &Env, arg: &CellArg) -> Result<(cells::StrongCell, Vec<Var>), Fail> {
    let f = env.read(&arg.input, LangArg::M)?;
    let dec = cell_decompose(&f, None, &env.ctx)?;
    let n = dec.cells.len();
    let c = dec.cells.into_iter().nth(arg.cell).ok_or_else(|| {
        usage(format!(
            "cell {} out of range; the decomposition has {n} cells",
            arg.cell
        ))
    })?;
    Ok((c, dec.vars))
}

/// Evaluation of a formula with quantifiers: eliminate, then evaluate.
fn evaluate(
    f: &Formula,
    lang: LangArg,
    env: &BTreeMap<Var, Quad>,
    ctx: &Context,
) -> Result<bool, Fail> {
    let s = Structure::new(lang.kind(), ctx.config.clone());
    if f.is_quantifier_free() {
        return Ok(eval_qf(f, &s, env)?);
    }
    match lang {
        LangArg::Pair => {
            let cf = interpret(f, &ctx.config)?;
            let r = qe::qe_m(&cf.formula, ctx)?;
            let coords = cf.encode(env)?;
            Ok(eval_qf(&r.formula, &Structure::m(&ctx.config), &coords)?)
        }
        _ => {
            let r = qe::qe(f, lang.kind(), ctx)?;
            Ok(eval_qf(&r.formula, &s, env)?)
        }
    }
}

fn dispatch(cmd: &Cmd, env: &Env) -> Result<Output, Fail> {
    let ctx = &env.ctx;
    Ok(match cmd {
        Cmd::Parse(input) => {
            let lang = env.lang(LangArg::M, ANY, "parse")?;
            let f = env.read(input, lang)?;
            let free: Vec<Var> = f.free_vars().into_iter().collect();
            Output::new(
                "parse",
                f.to_string(),
                json!({ "formula": f.to_string(), "free": free, "quantifier_free": f.is_quantifier_free() }),
            )
        }
        Cmd::Eval { input, at } => {
            let lang = env.lang(LangArg::M, ANY, "eval")?;
            let f = env.read(input, lang)?;
            let v = evaluate(&f, lang, &assignment(at)?, ctx)?;
            Output::new("eval", v.to_string(), json!({ "value": v }))
        }
        Cmd::Qe(input) => {
            let lang = env.lang(LangArg::M, ANY, "qe")?;
            let f = env.read(input, lang)?;
            let (r, coords) = match lang {
                LangArg::Pair => {
                    let cf = interpret(&f, &ctx.config)?;
                    (qe::qe_m(&cf.formula, ctx)?, Some(cf.coords))
                }
                _ => (qe::qe(&f, lang.kind(), ctx)?, None),
            };
            let mut j = json!({
                "formula": r.formula.to_string(),
                "branches": r.stats.branches,
                "atoms": r.stats.atoms,
            });
            if let Some(c) = coords {
                j["coords"] = serde_json::to_value(c).expect("coordinates serialize");
            }
            Output::new("qe", r.formula.to_string(), j)
        }
        Cmd::Decide(input) => {
            let lang = env.lang(LangArg::M, ANY, "decide")?;
            let f = env.read(input, lang)?;
            let v = match lang {
                LangArg::Pair => decide_pair(&f, ctx)?,
                _ => decide(&f, lang.kind(), ctx)?,
            };
            Output::new("decide", v.to_string(), json!({ "value": v }))
        }
        Cmd::Decompose1(input) => {
            let lang = env.lang(LangArg::M, LINE, "decompose1")?;
            let f = env.read(input, lang)?;
            let dec = decompose1(&f, lang.kind(), ctx)?;
            let text = if dec.pieces.is_empty() {
                "empty".to_string()
            } else {
                dec.pieces
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Output::new(
                "decompose1",
                text,
                serde_json::to_value(&dec).expect("pieces serialize"),
            )
        }
        Cmd::CutSup(input) => {
            let lang = env.lang(LangArg::M, M, "cut-sup")?;
            let f = env.read(input, lang)?;
            let s = cut_sup(&f, ctx)?;
            Output::new(
                "cut-sup",
                format!(
                    "sup = {} (x1 = {}, x2 = {}, rational: {})",
                    s.sup, s.x1, s.x2, s.rational
                ),
                json!({
                    "sup": quad_json(&s.sup),
                    "x1": s.x1.to_string(),
                    "x2": s.x2.to_string(),
                    "rational": s.rational,
                }),
            )
        }
        Cmd::Nonval { input, eps } => {
            let lang = env.lang(LangArg::M, M, "nonval")?;
            let f = env.read(input, lang)?;
            let eps: Rat = eps.parse()?;
            let (y1, y2) = nonval_witness(&f, &eps, ctx)?;
            Output::new(
                "nonval",
                format!("{y1} {y2}"),
                json!({ "y1": y1.to_string(), "y2": y2.to_string(), "eps": eps.to_string() }),
            )
        }
        Cmd::Cells(input) => {
            let lang = env.lang(LangArg::M, M, "cells")?;
            let f = env.read(input, lang)?;
            let dec = cell_decompose(&f, None, ctx)?;
            let text = dec
                .cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{i}: {}", c.hull(&dec.vars)))
                .collect::<Vec<_>>()
                .join("\n");
            let mut out = Output::new("cells", text, Value::Null);
            out.json = dec.to_json();
            out
        }
        Cmd::Hull(arg) => {
            env.lang(LangArg::M, M, "hull")?;
            let (c, vars) = cell_of(env, arg)?;
            Output::formula("hull", &c.hull(&vars))
        }
        Cmd::Closure { input, cell } => {
            env.lang(LangArg::M, M, "closure")?;
            match cell {
                Some(i) => {
                    let arg = CellArg {
                        input: Input {
                            formula: input.formula.clone(),
                        },
                        cell: *i,
                    };
                    let (c, vars) = cell_of(env, &arg)?;
                    Output::formula("closure", &c.closure(&vars))
                }
                None => {
                    let f = env.read(input, LangArg::M)?;
                    Output::formula("closure", &closure_set(&f, None, ctx)?)
                }
            }
        }
        Cmd::Fiber { cell, at } => {
            env.lang(LangArg::M, M, "fiber")?;
            let (c, _) = cell_of(env, cell)?;
            let a = rationals(at)?;
            let fib = fiber(&c, &a, ctx)?;
            let vars = cells::default_vars(fib.dim());
            let mut out = Output::formula("fiber", &fib.hull(&vars));
            out.json["cell"] = serde_json::to_value(&fib).expect("cells serialize");
            out
        }
        Cmd::NfClosed(input) => {
            let lang = env.lang(LangArg::Vstar, VSTAR, "nf-closed")?;
            let f = env.read(input, lang)?;
            let nf = closed_normal_form(&f, ctx)?;
            let mut text = format!("{}\nshape: {}", nf.formula, nf.shape);
            for (i, t) in nf.terms.iter().enumerate() {
                text.push_str(&format!("\nC{i} = cl({}) = {}", t.open, t.closure));
            }
            let mut out = Output::new("nf-closed", text, Value::Null);
            out.json = serde_json::to_value(&nf).expect("normal form serializes");
            out.json["schema"] = "quadcut.nf-closed.v1".into();
            out
        }
        Cmd::Topo { input, op } => {
            let lang = env.lang(LangArg::Vstar, VSTAR, "topo")?;
            let f = env.read(input, lang)?;
            Output::formula("topo", &topo(&f, *op, ctx)?)
        }
        Cmd::Interpret(input) => {
            let lang = env.lang(LangArg::Pair, PAIR, "interpret")?;
            let f = env.read(input, lang)?;
            let cf = interpret(&f, &ctx.config)?;
            let mut out = Output::formula("interpret", &cf.formula);
            out.json["coords"] = serde_json::to_value(&cf.coords).expect("coordinates serialize");
            out
        }
        Cmd::PairDecide(input) => {
            let lang = env.lang(LangArg::Pair, PAIR, "pair-decide")?;
            let f = env.read(input, lang)?;
            let v = decide_pair(&f, ctx)?;
            Output::new("pair-decide", v.to_string(), json!({ "value": v }))
        }
        Cmd::Epf(input) => {
            let lang = env.lang(LangArg::Pair, PAIR, "epf")?;
            let f = env.read(input, lang)?;
            let e = epf_normal_form(&f, ctx)?;
            let mut out = Output::formula("epf", &e.formula);
            out.json = serde_json::to_value(&e).expect("normal form serializes");
            out.json["schema"] = "quadcut.epf.v1".into();
            out
        }
        Cmd::Trace(input) => {
            let lang = env.lang(LangArg::Pair, PAIR, "trace")?;
            let f = env.read(input, lang)?;
            Output::formula("trace", &trace(&f, ctx)?)
        }
        Cmd::Lift(input) => {
            let lang = env.lang(LangArg::Pair, PAIR, "lift")?;
            let f = env.read(input, lang)?;
            Output::formula("lift", &lift_trace(&f, ctx)?)
        }
        Cmd::OpenCore(input) => {
            let lang = env.lang(LangArg::Pair, PAIR, "open-core")?;
            let f = env.read(input, lang)?;
            let core = extract_open_core(&f, ctx)?;
            let mut out = Output::formula("open-core", &core.formula);
            out.json = serde_json::to_value(&core).expect("open core serializes");
            out.json["schema"] = "quadcut.open-core.v1".into();
            out
        }
        Cmd::CheckAxioms => Output::report(&check_axioms(env.opts.seed, env.opts.samples, ctx)),
        Cmd::PairCheck => Output::report(&axioms_pair_check(env.opts.seed, env.opts.samples, ctx)),
        Cmd::Selftest => {
            let text_mode = env.opts.format != Some(Format::Json);
            let outcomes = quadcut_harness::run_all(ctx, env.opts.seed, |o| {
                if text_mode {
                    println!("{}", o.stable_line());
                    for f in &o.failures {
                        println!("      {f}");
                    }
                }
                eprintln!("criterion {} took {:.1} s", o.id, o.seconds);
            });
            let passed = outcomes.iter().all(|o| o.passed);
            let results: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id,
                        "name": o.name,
                        "passed": o.passed,
                        "instances": o.instances,
                        "failures": o.failures,
                        "note": o.note,
                    })
                })
                .collect();
            let mut out = Output::new(
                "selftest",
                if passed {
                    "all criteria pass"
                } else {
                    "some criteria FAIL"
                },
                json!({ "seed": env.opts.seed, "d": ctx.config.d(), "all_pass": passed, "criteria": results }),
            );
            out.failed = !passed;
            out
        }
    })
}

fn run(cli: Cli) -> Result<Output, Fail> {
    let o = &cli.opts;
    let ctx = Context::with_d(o.d)?.with_limits(Limits {
        branch_limit: o.branch_limit,
        dim_limit: o.dim_limit,
    })?;
    let env = Env {
        ctx,
        opts: cli.opts,
    };
    dispatch(&cli.cmd, &env)
}

fn default_format(cmd: &Cmd) -> Format {
    match cmd {
        Cmd::CutSup(_) | Cmd::Nonval { .. } => Format::Json,
        _ => Format::Text,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.opts.format.unwrap_or(default_format(&cli.cmd));
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let body = match format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json renders"),
            };
            if writeln!(stdout, "{body}").is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(if out.failed { 4 } else { 0 })
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
