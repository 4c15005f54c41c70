//! Seeded verification suites and their JSON reports.

mod suites;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::division_algebra::AlgebraCtx;
use crate::error::{Error, Result};
use crate::local_ring::{LocalRingCtx, Mode};
use crate::par::{self, Execution};
use crate::tensor::TensorRingCtx;

pub const SCHEMA: &str = "hasse-order-report/1";

/// Algebra parameters: `T/S` unramified of degree `d` over `S` with residue
/// field `F_{p^f}`, Hasse invariant `r/d`, precision `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    pub p: u64,
    pub f: usize,
    pub d: usize,
    pub r: i64,
    #[serde(rename = "N")]
    pub n: usize,
    pub mode: Mode,
}

impl Default for Params {
    fn default() -> Self {
        Params { p: 3, f: 1, d: 2, r: 1, n: 8, mode: Mode::Mixed }
    }
}

/// The configurations run by `--all-configs`.
pub fn acceptance_configs() -> Vec<Params> {
    [(3, 2, 1, Mode::Mixed), (5, 3, 1, Mode::Mixed), (5, 3, 2, Mode::Mixed), (3, 4, 1, Mode::Mixed), (3, 2, 1, Mode::Equal)]
        .into_iter()
        .map(|(p, d, r, mode)| Params { p, f: 1, d, r, n: 8, mode })
        .collect()
}

/// Contexts built from [`Params`].
#[derive(Debug, Clone)]
pub struct Env {
    pub params: Params,
    pub s: Arc<LocalRingCtx>,
    pub t: Arc<LocalRingCtx>,
    pub alg: Arc<AlgebraCtx>,
    pub tensor: Arc<TensorRingCtx>,
}

impl Env {
    pub fn new(params: Params) -> Result<Env> {
        let s = LocalRingCtx::base(params.p, params.f, params.n, params.mode)?;
        let t = LocalRingCtx::unramified(&s, params.d)?;
        let alg = AlgebraCtx::new(&t, params.r)?;
        let tensor = TensorRingCtx::new(&alg)?;
        Ok(Env { params, s, t, alg, tensor })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Field,
    Ring,
    Norm,
    Valuation,
    Conjugation,
    Milnor,
    Idempotents,
    Modules,
    Morita,
    Witt,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Field,
        Suite::Ring,
        Suite::Norm,
        Suite::Valuation,
        Suite::Conjugation,
        Suite::Milnor,
        Suite::Idempotents,
        Suite::Modules,
        Suite::Morita,
        Suite::Witt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Field => "field",
            Suite::Ring => "ring",
            Suite::Norm => "norm",
            Suite::Valuation => "valuation",
            Suite::Conjugation => "conjugation",
            Suite::Milnor => "milnor",
            Suite::Idempotents => "idempotents",
            Suite::Modules => "modules",
            Suite::Morita => "morita",
            Suite::Witt => "witt",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::param(format!("unknown suite '{s}'")))
    }
}

/// Deliberate corruptions, one per suite, used to show the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    FieldFrobenius,
    RingInverse,
    NormNrd,
    ValuationOrd,
    ConjugationTwist,
    MilnorPreimage,
    IdempotentsSum,
    ModcatCycle,
    MoritaInd,
    WittGhost,
}

impl Fault {
    pub const ALL: [Fault; 10] = [
        Fault::FieldFrobenius,
        Fault::RingInverse,
        Fault::NormNrd,
        Fault::ValuationOrd,
        Fault::ConjugationTwist,
        Fault::MilnorPreimage,
        Fault::IdempotentsSum,
        Fault::ModcatCycle,
        Fault::MoritaInd,
        Fault::WittGhost,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::FieldFrobenius => "field.frobenius",
            Fault::RingInverse => "ring.inverse",
            Fault::NormNrd => "norm.nrd",
            Fault::ValuationOrd => "valuation.ord",
            Fault::ConjugationTwist => "conjugation.twist",
            Fault::MilnorPreimage => "milnor.preimage",
            Fault::IdempotentsSum => "idempotents.sum",
            Fault::ModcatCycle => "modcat.cycle",
            Fault::MoritaInd => "morita.ind",
            Fault::WittGhost => "witt.ghost",
        }
    }

    /// The suite this fault is meant to trip.
    pub fn suite(self) -> Suite {
        match self {
            Fault::FieldFrobenius => Suite::Field,
            Fault::RingInverse => Suite::Ring,
            Fault::NormNrd => Suite::Norm,
            Fault::ValuationOrd => Suite::Valuation,
            Fault::ConjugationTwist => Suite::Conjugation,
            Fault::MilnorPreimage => Suite::Milnor,
            Fault::IdempotentsSum => Suite::Idempotents,
            Fault::ModcatCycle => Suite::Modules,
            Fault::MoritaInd => Suite::Morita,
            Fault::WittGhost => Suite::Witt,
        }
    }
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fault::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::param(format!("unknown fault '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub params: Params,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub fault: Option<Fault>,
    pub execution: Execution,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            params: Params::default(),
            seed: 0,
            suites: Suite::ALL.to_vec(),
            fault: None,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub inputs: Value,
    pub expected: Value,
    pub got: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportParams {
    #[serde(flatten)]
    pub params: Params,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub params: ReportParams,
    pub suites: Vec<SuiteReport>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures.is_empty())
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// The report without its timing field.
    pub fn to_json_untimed(&self) -> Value {
        let mut v = self.to_json();
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_ms");
        }
        v
    }

    pub fn to_text(&self) -> String {
        let p = &self.params.params;
        let mut out = format!(
            "p={} f={} d={} r={} N={} mode={:?} seed={}\n",
            p.p, p.f, p.d, p.r, p.n, p.mode, self.params.seed
        );
        for s in &self.suites {
            let status = if s.failures.is_empty() { "ok" } else { "FAILED" };
            out.push_str(&format!("  {:<12} {:>5} cases  {status}", s.name, s.cases));
            if !s.failures.is_empty() {
                out.push_str(&format!(" ({} failures)", s.failures.len()));
            }
            out.push('\n');
            for f in s.failures.iter().take(3) {
                out.push_str(&format!("    inputs {}  expected {}  got {}\n", f.inputs, f.expected, f.got));
            }
        }
        out.push_str(&format!("  {} ms\n", self.wall_time_ms));
        out
    }
}

/// FNV-1a, used to give every suite its own RNG stream.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub(crate) struct Runner {
    pub exec: Execution,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Runner {
    pub fn faulty(&self, f: Fault) -> bool {
        self.fault == Some(f)
    }

    /// Runs `n` independent cases; case `i` draws from stream `i` of the suite seed.
    pub fn cases<F>(&self, n: usize, f: F) -> (usize, Vec<Failure>)
    where
        F: Fn(&mut ChaCha8Rng, usize) -> Result<Vec<Failure>> + Sync + Send,
    {
        let out = par::map(self.exec, n, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            rng.set_stream(i as u64);
            f(&mut rng, i).unwrap_or_else(|e| {
                vec![Failure { inputs: serde_json::json!({ "case": i }), expected: "no error".into(), got: e.to_string().into() }]
            })
        });
        (n, out.into_iter().flatten().collect())
    }
}

pub fn run(config: &Config) -> Result<Report> {
    let start = Instant::now();
    let env = Env::new(config.params)?;
    let mut suites = Vec::with_capacity(config.suites.len());
    for &suite in &config.suites {
        let runner = Runner { exec: config.execution, seed: config.seed ^ fnv1a(suite.name()), fault: config.fault };
        let (cases, failures) = suites::run_suite(suite, &env, &runner)?;
        suites.push(SuiteReport { name: suite.name().into(), cases, failures });
    }
    Ok(Report {
        schema: SCHEMA,
        params: ReportParams { params: config.params, seed: config.seed },
        suites,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        for f in Fault::ALL {
            assert_eq!(f.name().parse::<Fault>().unwrap(), f);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn default_config_passes_and_faults_trip() {
        let report = run(&Config::default()).unwrap();
        for s in &report.suites {
            assert!(s.failures.is_empty(), "{}: {:?}", s.name, s.failures.first());
        }
        for fault in Fault::ALL {
            let config = Config { suites: vec![fault.suite()], fault: Some(fault), ..Config::default() };
            assert!(!run(&config).unwrap().passed(), "{} not caught", fault.name());
        }
    }

    #[test]
    fn bad_parameters_fail_before_running() {
        let config = Config { params: Params { d: 4, r: 2, ..Params::default() }, ..Config::default() };
        assert!(matches!(run(&config), Err(Error::Parameter(_))));
    }
}
