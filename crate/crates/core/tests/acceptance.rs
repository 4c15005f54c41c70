//! Acceptance run: one pass/fail line per criterion.
//!
//! Exits nonzero if any criterion fails, except those listed in `KNOWN_RED`,
//! which are printed as FAIL with the reason and do not stop the run.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hasse_order::local_ring::{LocalRingCtx, Mode};
use hasse_order::par::Execution;
use hasse_order::verify::{self, acceptance_configs, Config, Fault, Params, Report, Suite};
use hasse_order::witt::{CoeffRing, WittCtx, WittVec};

/// Criteria whose literal statement is false; see the ledger entry on the
/// Frobenius congruence.
const KNOWN_RED: &[usize] = &[8];

struct Line {
    id: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn run_suite(params: Params, suite: Suite) -> (Report, Duration) {
    let start = Instant::now();
    let report = verify::run(&Config { params, suites: vec![suite], ..Config::default() }).expect("valid config");
    (report, start.elapsed())
}

fn label(p: &Params) -> String {
    format!("({},{},{},{:?})", p.p, p.d, p.r, p.mode)
}

/// Runs `suite` on every configuration; passes iff no failures and every
/// per-config time is within `per_config` and the total within `total`.
fn suite_criterion(
    id: usize,
    name: &'static str,
    suite: Suite,
    configs: &[Params],
    per_config: Option<Duration>,
    total: Option<Duration>,
) -> Line {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut sum = Duration::ZERO;
    for p in configs {
        let (r, t) = run_suite(*p, suite);
        sum += t;
        let s = &r.suites[0];
        if !s.failures.is_empty() {
            ok = false;
            notes.push(format!("{} {} failures, first {:?}", label(p), s.failures.len(), s.failures[0]));
        }
        if per_config.is_some_and(|lim| t > lim) {
            ok = false;
            notes.push(format!("{} took {t:?}", label(p)));
        }
    }
    if total.is_some_and(|lim| sum > lim) {
        ok = false;
        notes.push(format!("total {sum:?}"));
    }
    notes.push(format!("{} configs, {sum:.2?}", configs.len()));
    Line { id, name, ok, detail: notes.join("; ") }
}

/// Looks for `a` whose `F(a) − R(a)^p` has a coordinate outside the maximal
/// ideal (or nonzero, over a field).
fn literal_congruence_counterexample() -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [2u64, 3, 5] {
        let s = LocalRingCtx::base(p, 1, 6, Mode::Mixed).expect("ring");
        for coeff in [CoeffRing::IntMod { p, m: 6 }, CoeffRing::Field { p, f: 2 }, CoeffRing::Local(s)] {
            let w = WittCtx::new(&coeff, 4).expect("witt ctx");
            for len in 2..=4 {
                for _ in 0..20 {
                    let a: WittVec = w.random(&mut rng, len).expect("random");
                    let diff = a.frob().unwrap().sub(&a.restrict().unwrap().pow(p)).unwrap();
                    if diff.coords().iter().any(|c| !c.is_zero() && c.ord().lower_bound() < 1) {
                        return Some(format!("p={p} a={} F(a)-R(a)^p={}", a.to_json(), diff.to_json()));
                    }
                }
            }
        }
    }
    None
}

fn main() -> ExitCode {
    let configs = acceptance_configs();
    let small: Vec<Params> = configs.iter().copied().filter(|p| p.d <= 3).collect();
    let mut lines = vec![
        suite_criterion(1, "reduced norm and trace identities", Suite::Norm, &configs, Some(Duration::from_secs(10)), None),
        suite_criterion(2, "valuation formula", Suite::Valuation, &configs, None, None),
        suite_criterion(3, "twist relation and conjugation order", Suite::Conjugation, &configs, None, None),
        suite_criterion(4, "Milnor square", Suite::Milnor, &configs, None, None),
        suite_criterion(5, "idempotents and Peirce pieces", Suite::Idempotents, &configs, None, None),
        suite_criterion(6, "graded module equivalence and decomposition", Suite::Modules, &small, None, Some(Duration::from_secs(30))),
        suite_criterion(7, "induction and reduced trace of modules", Suite::Morita, &configs, None, None),
    ];

    let mut witt = suite_criterion(8, "Witt vector identities", Suite::Witt, &configs, None, Some(Duration::from_secs(60)));
    match literal_congruence_counterexample() {
        Some(ex) => {
            witt.detail = format!(
                "coordinatewise form of F(a) ≡ R(a)^p is false: {ex}; congruence mod p·W and all other clauses: {} ({})",
                if witt.ok { "pass" } else { "FAIL" },
                witt.detail
            );
            witt.ok = false;
        }
        None => witt.detail = format!("coordinatewise congruence held on all samples; {}", witt.detail),
    }
    lines.push(witt);

    let mut det_ok = true;
    let mut det_notes = Vec::new();
    for p in &configs {
        let base = Config { params: *p, seed: 12345, ..Config::default() };
        let a = verify::run(&base).unwrap().to_json_untimed();
        let b = verify::run(&base).unwrap().to_json_untimed();
        let c = verify::run(&Config { execution: Execution::Sequential, ..base.clone() }).unwrap().to_json_untimed();
        if a != b || a != c {
            det_ok = false;
            det_notes.push(format!("{} reports differ", label(p)));
        }
        for fault in Fault::ALL {
            let r = verify::run(&Config { suites: vec![fault.suite()], fault: Some(fault), ..base.clone() }).unwrap();
            if r.passed() {
                det_ok = false;
                det_notes.push(format!("{} not caught at {}", fault.name(), label(p)));
            }
        }
    }
    det_notes.push(format!("{} faults x {} configs", Fault::ALL.len(), configs.len()));
    lines.push(Line { id: 9, name: "determinism and fault sensitivity", ok: det_ok, detail: det_notes.join("; ") });

    let start = Instant::now();
    let all_pass = configs.iter().all(|p| verify::run(&Config { params: *p, ..Config::default() }).unwrap().passed());
    let t = start.elapsed();
    lines.push(Line {
        id: 10,
        name: "full run, all configs and suites",
        ok: all_pass && t < Duration::from_secs(120),
        detail: format!("{t:.2?}, all suites passed: {all_pass}"),
    });

    let mut unexpected = false;
    for l in &lines {
        let status = if l.ok { "PASS" } else { "FAIL" };
        let note = if !l.ok && KNOWN_RED.contains(&l.id) { " [known, documented]" } else { "" };
        println!("criterion {:>2} {status}{note}  {}: {}", l.id, l.name, l.detail);
        unexpected |= !l.ok && !KNOWN_RED.contains(&l.id);
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
