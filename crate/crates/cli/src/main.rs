use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hasse_order::expr;
use hasse_order::local_ring::{LocalRingCtx, Mode};
use hasse_order::modcat::{self, GradedPhiModule, Selection};
use hasse_order::tensor;
use hasse_order::verify::{self, Config, Env, Fault, Params, Suite};
use hasse_order::witt::{self, CoeffRing, WittCtx};
use hasse_order::Error;

#[derive(Parser)]
#[command(name = "hasse-order", version, about = "Maximal orders in cyclic division algebras over local fields")]
struct Cli {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 3, global = true)]
    p: u64,
    #[arg(long, default_value_t = 1, global = true)]
    f: usize,
    #[arg(long, default_value_t = 2, global = true)]
    d: usize,
    #[arg(long, default_value_t = 1, global = true, allow_negative_numbers = true)]
    r: i64,
    #[arg(long = "N", default_value_t = 8, global = true)]
    n: usize,
    #[arg(long, default_value = "mixed", global = true)]
    mode: Mode,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params { p: self.p, f: self.f, d: self.d, r: self.r, n: self.n, mode: self.mode }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an element of D and print its invariants.
    Eval { expr: String },
    /// Run the seeded verification suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated suite names; all suites when omitted.
        #[arg(long, value_delimiter = ',')]
        suites: Vec<Suite>,
        #[arg(long = "inject-fault")]
        inject_fault: Option<Fault>,
        /// Ignore the algebra parameters and run every acceptance configuration.
        #[arg(long)]
        all_configs: bool,
        /// Run cases on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Print structure constants.
    Dump { what: DumpWhat },
    /// Witt vector arithmetic over a coefficient ring.
    Witt {
        /// Comma-separated coordinates of `a`, each in the element grammar.
        a: String,
        /// Comma-separated coordinates of `b`; defaults to `a`.
        b: Option<String>,
        #[arg(long, value_enum, default_value_t = Coeff::S)]
        coeff: Coeff,
    },
    /// Decompose a projective graded module read from a JSON file.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Rule::Min)]
        rule: Rule,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpWhat {
    Idempotents,
    Peirce,
    MilnorBasis,
    WittLaws,
}

#[derive(Clone, Copy, ValueEnum)]
enum Coeff {
    /// `S` at precision `N`.
    S,
    /// `Z/p^N`.
    Int,
    /// `F_{p^f}`.
    Field,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Min,
    Max,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(output: Output, value: &Value, text: impl FnOnce() -> String) {
    let out = match output {
        Output::Json => format!("{}\n", serde_json::to_string_pretty(value).expect("json")),
        Output::Text => text(),
    };
    let _ = io::stdout().lock().write_all(out.as_bytes());
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let params = cli.params.params();
    match &cli.command {
        Command::Eval { expr } => eval(params, expr, cli.output),
        Command::Verify { seed, suites, inject_fault, all_configs, sequential } => {
            let configs = if *all_configs { verify::acceptance_configs() } else { vec![params] };
            let mut base = Config { seed: *seed, fault: *inject_fault, ..Config::default() };
            if !suites.is_empty() {
                base.suites = suites.clone();
            }
            if *sequential {
                base.execution = hasse_order::par::Execution::Sequential;
            }
            for &p in &configs {
                Env::new(p)?;
            }
            let reports = configs
                .into_iter()
                .map(|params| verify::run(&Config { params, ..base.clone() }))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(|r| r.passed());
            let value = if *all_configs {
                Value::Array(reports.iter().map(|r| r.to_json()).collect())
            } else {
                reports[0].to_json()
            };
            emit(cli.output, &value, || reports.iter().map(|r| r.to_text()).collect());
            Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Dump { what } => dump(params, *what, cli.output),
        Command::Witt { a, b, coeff } => witt_cmd(params, a, b.as_deref().unwrap_or(a), *coeff, cli.output),
        Command::Decompose { file, rule } => decompose(params, file, *rule, cli.output),
    }
}

fn eval(params: Params, text: &str, output: Output) -> Result<ExitCode, Error> {
    let env = Env::new(params)?;
    let e = expr::parse(text)?.eval_algebra(&env.alg)?;
    let (trd, nrd) = e.trd_nrd()?;
    let (shift, m) = e.embed(None);
    let value = json!({
        "element": e.to_expr(),
        "coeffs": e.to_json(),
        "ord": e.ord().to_string(),
        "trd": trd.to_string(),
        "nrd": nrd.to_string(),
        "matrix": { "shift": shift, "entries": m.to_json() },
    });
    emit(output, &value, || {
        let rows: Vec<String> = (0..m.rows())
            .map(|i| {
                let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_expr_at(e.precision())).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        let m = format!("[{}]", rows.join(", "));
        let mat = if shift == 0 { m } else { format!("pK^{shift} * {m}") };
        format!("element: {e}\nord_D:   {}\nTrd:     {trd}\nNrd:     {nrd}\nmatrix:  {mat}\n", e.ord())
    });
    Ok(ExitCode::SUCCESS)
}

fn dump(params: Params, what: DumpWhat, output: Output) -> Result<ExitCode, Error> {
    let value = match what {
        DumpWhat::WittLaws => {
            let add = witt::addition_law_n2(params.p);
            let mul = witt::multiplication_law_n2(params.p);
            json!({
                "p": params.p,
                "n": 2,
                "sum": { "c0": "a0 + b0", "c1": witt::law_to_string(&add) },
                "product": { "c0": "a0*b0", "c1": witt::law_to_string(&mul) },
            })
        }
        _ => {
            let env = Env::new(params)?;
            let ctx = &env.tensor;
            match what {
                DumpWhat::Idempotents => {
                    Value::Array(ctx.idempotents().iter().map(|e| e.to_json()).collect())
                }
                DumpWhat::Peirce => {
                    let d = ctx.d();
                    let mut pieces = Vec::new();
                    for h in 0..d {
                        for g in 0..d {
                            let pc = tensor::peirce(ctx, g, h)?;
                            pieces.push(json!({
                                "g": pc.g,
                                "h": pc.h,
                                "x_power": pc.i,
                                "rank": pc.rank,
                                "x_is_iso": pc.x_is_iso,
                                "cokernel_length": pc.cokernel_length,
                                "generator": pc.generator.to_json(),
                            }));
                        }
                    }
                    Value::Array(pieces)
                }
                DumpWhat::MilnorBasis => {
                    let basis = tensor::milnor_basis(ctx);
                    let mats: Vec<Value> = basis
                        .iter()
                        .map(|m| json!(m.iter().map(|row| row.iter().map(|x| x.coeffs().to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>()))
                        .collect();
                    json!({ "dimension_over_fp": basis.len(), "basis": mats })
                }
                DumpWhat::WittLaws => unreachable!(),
            }
        }
    };
    emit(output, &value, || format!("{}\n", serde_json::to_string_pretty(&value).expect("json")));
    Ok(ExitCode::SUCCESS)
}

fn witt_cmd(params: Params, a: &str, b: &str, coeff: Coeff, output: Output) -> Result<ExitCode, Error> {
    let ring = match coeff {
        Coeff::S => CoeffRing::Local(LocalRingCtx::base(params.p, params.f, params.n, params.mode)?),
        Coeff::Int => CoeffRing::IntMod { p: params.p, m: params.n },
        Coeff::Field => CoeffRing::Field { p: params.p, f: params.f },
    };
    let parse = |s: &str, w: &Arc<WittCtx>| {
        let coords = s
            .split(',')
            .map(|c| expr::parse(c.trim())?.eval_ring(w.coeff_ring()))
            .collect::<Result<Vec<_>, _>>()?;
        w.from_coords(coords)
    };
    let len = a.split(',').count().max(b.split(',').count());
    let w = WittCtx::new(&ring, len + 1)?;
    let (x, y) = (parse(a, &w)?, parse(b, &w)?);
    if x.len() != y.len() {
        return Err(Error::Parameter("a and b must have the same length".into()));
    }
    let show = |v: &witt::WittVec| Value::Array(v.coords().iter().map(|c| c.to_expr().into()).collect());
    let mut value = json!({
        "ghost_a": Value::Array(x.ghost().iter().map(|c| c.to_expr().into()).collect()),
        "sum": show(&x.add(&y)?),
        "product": show(&x.mul(&y)?),
        "V(a)": show(&x.ver()?),
    });
    if x.len() > 1 {
        value["F(a)"] = show(&x.frob()?);
        value["R(a)"] = show(&x.restrict()?);
    }
    emit(output, &value, || {
        let Value::Object(m) = &value else { unreachable!() };
        m.iter().map(|(k, v)| format!("{k:<8} {v}\n")).collect()
    });
    Ok(ExitCode::SUCCESS)
}

fn decompose(params: Params, file: &PathBuf, rule: Rule, output: Output) -> Result<ExitCode, Error> {
    let env = Env::new(params)?;
    let text = fs::read_to_string(file).map_err(|e| Error::Parameter(format!("{}: {e}", file.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
    let module = GradedPhiModule::from_json(&env.tensor, &v)?;
    module.validate()?;
    let rule = match rule {
        Rule::Min => Selection::MinOrbit,
        Rule::Max => Selection::MaxOrbit,
    };
    let dec = modcat::decompose(&module, rule)?;
    let value = json!({
        "labels": dec.labels(),
        "sorted_labels": dec.sorted_labels(),
        "steps": dec.steps.iter().map(|s| json!({
            "label": s.label,
            "bases": s.bases.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    emit(output, &value, || {
        let labels: Vec<String> = dec.labels().iter().map(|l| format!("P{l}")).collect();
        format!("{}\n", labels.join(" ⊕ "))
    });
    Ok(ExitCode::SUCCESS)
}
