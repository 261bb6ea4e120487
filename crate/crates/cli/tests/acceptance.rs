//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Tolerances and runtime budgets are pinned here, not read
//! from the config, so a config change cannot loosen them.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use momap_cli::config::StartFamily;
use momap_cli::report::CheckRecord;
use momap_cli::{run, run_suites, Command, ExampleId, ExperimentConfig, ExperimentReport, Suite};

const EXAMPLES: [ExampleId; 5] = [ExampleId::Galilean, ExampleId::Heisenberg, ExampleId::Unitary, ExampleId::Siegel, ExampleId::Virasoro];

/// Worst (defect / tolerance) over the measured quantities, plus every violation.
#[derive(Default)]
struct Tally {
    worst: f64,
    worst_name: String,
    failures: Vec<String>,
    measured: usize,
}

impl Tally {
    fn defect(&mut self, name: &str, defect: f64, tol: f64) {
        self.measured += 1;
        let ratio = if defect == 0.0 { 0.0 } else { defect / tol };
        if !(defect <= tol) {
            self.failures.push(format!("{name} = {defect:.3e} > {tol:.1e}"));
        }
        if !(ratio <= self.worst) {
            self.worst = ratio;
            self.worst_name = format!("{name} = {defect:.3e} (tol {tol:.1e})");
        }
    }

    fn require(&mut self, what: &str, ok: bool) {
        self.measured += 1;
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    /// Every check in `report` whose name is `prefix` or `prefix.<tag>`; at least one must exist.
    fn checks(&mut self, report: &ExperimentReport, prefix: &str, tol: f64) {
        let found: Vec<&CheckRecord> = report.checks.iter().filter(|c| c.name == prefix || c.name.starts_with(&format!("{prefix}."))).collect();
        if found.is_empty() {
            self.failures.push(format!("{}: no check {prefix}", report.example));
        }
        for c in found {
            self.defect(&format!("{}:{}", report.example, c.name), c.defect, tol);
        }
    }

    fn budget(&mut self, what: &str, took: Duration, secs: f64) {
        if took.as_secs_f64() >= secs {
            self.failures.push(format!("{what} took {:.2} s, budget {secs} s", took.as_secs_f64()));
        }
    }
}

fn cfg(example: ExampleId) -> ExperimentConfig {
    ExperimentConfig { example, ..ExperimentConfig::default() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn suites(t: &mut Tally, c: &ExperimentConfig, s: &[Suite]) -> Option<(ExperimentReport, Duration)> {
    match timed(|| run_suites(c, s)) {
        (Ok(r), d) => Some((r, d)),
        (Err(e), _) => {
            t.failures.push(format!("{}: {e}", c.example));
            None
        }
    }
}

fn command(t: &mut Tally, cmd: Command, c: &ExperimentConfig) -> Option<(ExperimentReport, Duration)> {
    match timed(|| run(cmd, c)) {
        (Ok(r), d) => Some((r, d)),
        (Err(e), _) => {
            t.failures.push(format!("{} {}: {e}", cmd.as_str(), c.example));
            None
        }
    }
}

fn momentum_identity(t: &mut Tally) {
    for ex in EXAMPLES {
        let c = cfg(ex);
        t.require("20 points × 20 directions", c.sampling.points == 20 && c.sampling.directions == 20);
        if let Some((r, d)) = suites(t, &c, &[Suite::Structure]) {
            t.checks(&r, "momentum.fd", 1e-5);
            if r.checks.iter().any(|c| c.name.starts_with("momentum.analytic")) {
                t.checks(&r, "momentum.analytic", 1e-9);
            }
            t.budget(&format!("{ex} momentum identity"), d, 5.0);
        }
    }
}

fn bargmann(t: &mut Tally) {
    let c = cfg(ExampleId::Galilean);
    t.require("100 pairs, 500 triples", c.sampling.pairs == 100 && c.sampling.triples == 500);
    if let Some((r, d)) = suites(t, &c, &[Suite::Cocycle]) {
        for name in ["cocycle.triangle_vs_closed_form", "cocycle.closed_form_vs_bargmann", "cocycle.triangle_vs_bargmann"] {
            t.checks(&r, name, 1e-6);
        }
        t.checks(&r, "cocycle.identity", 1e-9);
        t.budget("Galilean cocycles", d, 30.0);
    }
}

fn virasoro(t: &mut Tally) {
    let c = cfg(ExampleId::Virasoro);
    t.require("Bott–Thurston grid 2048", c.virasoro.bott_thurston_grid == 2048);
    t.require("10 diffeomorphisms", c.virasoro.diffeos == 10);
    if let Some((r, d)) = suites(t, &c, &[Suite::Cocycle]) {
        t.checks(&r, "cocycle.gelfand_fuchs", 1e-8);
        t.checks(&r, "cocycle.bott_thurston", 1e-6);
        t.checks(&r, "cocycle.schwarzian", 1e-6);
        t.budget("Virasoro cocycles", d, 60.0);
    }
}

fn siegel(t: &mut Tally) {
    let c = cfg(ExampleId::Siegel);
    t.require("n ∈ {1, 2}, 10 structures", c.siegel.dims == [1, 2] && c.siegel.structures == 10);
    if let Some((r, d)) = suites(t, &c, &[Suite::Structure]) {
        for n in c.siegel.dims.iter() {
            t.checks(&r, &format!("contraction.momentum.n{n}"), 1e-6);
            t.checks(&r, &format!("contraction.cayley.n{n}"), 1e-7);
        }
        t.budget("Siegel contraction", d, 60.0);
    }
}

fn galilean_critical(t: &mut Tally) {
    let mut c = cfg(ExampleId::Galilean);
    t.require("second family m = 1, s = 10", c.galilean.second_mass == 1.0 && c.galilean.second_spin == 10.0);
    let started = Instant::now();
    if let Some((r, _)) = suites(t, &c, &[Suite::Structure]) {
        t.checks(&r, "critical.first_family", 1e-12);
        t.checks(&r, "critical.second_family", 1e-8);
    }
    c.critical.start = StartFamily::Second;
    if let Some((r, _)) = command(t, Command::Critical, &c) {
        t.checks(&r, "critical.second_family_p", 1e-5);
        t.require("descent converged", r.notes.iter().any(|n| n.starts_with("converged")));
    }
    t.budget("Galilean critical points", started.elapsed(), 30.0);
}

fn galilean_stabilizer(t: &mut Tally) {
    let c = cfg(ExampleId::Galilean);
    if let Some((r, d)) = command(t, Command::Decompose, &c) {
        t.require("stabilizer complex dimension 6", r.dimensions.get("stabilizer.complex") == Some(&6));
        t.require("Υ kernel real dimension 12", r.dimensions.get("stabilizer.upsilon_real") == Some(&12));
        let s = c.galilean.spin;
        let eig = r.spectra.get("stabilizer.eigenvalues").cloned().unwrap_or_default();
        let count = |v: f64| eig.iter().filter(|&&e| (e - v).abs() <= 1e-8).count();
        let (zero, plus, minus) = (count(0.0), count(0.5 * s), count(-0.5 * s));
        t.require(&format!("multiplicities 0:{zero} +s/2:{plus} −s/2:{minus}"), zero == 3 && minus == 2 && plus == 1 && eig.len() == 6);
        t.checks(&r, "decompose.eigenvalues", 1e-8);
        t.checks(&r, "decompose.embedding", 1e-8);
        t.checks(&r, "decompose.not_subalgebra", 1e-12);
        t.budget("Galilean decomposition", d, 10.0);
    }
}

fn operators(t: &mut Tally) {
    let started = Instant::now();
    for ex in EXAMPLES {
        if let Some((r, _)) = suites(t, &cfg(ex), &[Suite::Operators]) {
            t.checks(&r, "operators.l_symmetric", 1e-9);
            t.checks(&r, "operators.z_skew", 1e-9);
            t.checks(&r, "operators.cplus_hermitian", 1e-9);
            t.checks(&r, "operators.cminus_hermitian", 1e-9);
            t.checks(&r, "operators.kernel_angle", 1e-6);
            t.checks(&r, "operators.factorization", 1e-8);
            t.checks(&r, "operators.imaginary_part", 1e-8);
            // Negativity presumes a positive κ; Siegel's ½tr is indefinite.
            if ex != ExampleId::Siegel {
                t.checks(&r, "operators.cplus_negative", 1e-9);
            }
            if ex == ExampleId::Unitary {
                t.checks(&r, "operators.commutator", 1e-8);
            }
        }
    }
    t.budget("operator suite", started.elapsed(), 60.0);
}

fn hessians(t: &mut Tally) {
    let started = Instant::now();
    for ex in EXAMPLES {
        let c = cfg(ex);
        t.require("10 Hessian directions", c.sampling.hessian_directions == 10);
        if let Some((r, _)) = command(t, Command::Hessian, &c) {
            if matches!(ex, ExampleId::Galilean | ExampleId::Unitary) {
                t.checks(&r, "hessian.formula", 1e-4);
            }
            t.checks(&r, "hessian.orbit", 1e-4);
            if ex == ExampleId::Unitary {
                t.checks(&r, "hessian.orbit_positive", 1e-8);
            }
        }
    }
    t.budget("Hessian suite", started.elapsed(), 120.0);
}

fn determinism(t: &mut Tally) {
    for ex in EXAMPLES {
        let c = ExperimentConfig { seed: 17, ..cfg(ex) };
        let a = command(t, Command::Verify, &c).map(|(r, _)| r.to_json());
        let b = command(t, Command::Verify, &c).map(|(r, _)| r.to_json());
        t.require(&format!("{ex}: identical JSON"), a.is_some() && a == b);
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn(&mut Tally));
    let criteria: [Criterion; 9] = [
        ("momentum-map identity", momentum_identity),
        ("Bargmann cocycle reproduction", bargmann),
        ("Virasoro cocycle reproduction", virasoro),
        ("Siegel contraction momentum", siegel),
        ("Galilean critical points", galilean_critical),
        ("Galilean stabilizer decomposition", galilean_stabilizer),
        ("operator suite", operators),
        ("Hessian suite", hessians),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let mut t = Tally::default();
        let (_, took) = timed(|| f(&mut t));
        let status = if t.failures.is_empty() && t.measured > 0 { "PASS" } else { "FAIL" };
        let detail = if t.worst_name.is_empty() { format!("{} requirements", t.measured) } else { format!("worst {}", t.worst_name) };
        println!("{status} criterion {}: {title}; {detail}; {:.2} s", i + 1, took.as_secs_f64());
        for f in &t.failures {
            println!("     {f}");
        }
        if status == "FAIL" {
            failed += 1;
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
