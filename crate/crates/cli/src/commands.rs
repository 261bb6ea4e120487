//! The five subcommands.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use momap_core::examples::galilean::{second_family_p_squared, galilean_second_critical_family, GalileanParams, GalileanSpec};
use momap_core::examples::virasoro::{euler_lagrange_residual, FourierClass};
use momap_core::linalg::cross;
use momap_core::normsq::{critical_tolerance, criticality_residual};
use momap_core::{descend, DescentOptions, DescentResult, HamiltonianAction, Vector};

use crate::config::{ExampleId, ExperimentConfig, StartFamily};
use crate::registry::Anchor;
use crate::report::{check_seed, run_tasks, CheckRecord, ExperimentReport, Task};
use crate::suites::{galilean, heisenberg, siegel, unitary, user, virasoro, Suite};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Critical,
    Hessian,
    Decompose,
    Cocycle,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Critical => "critical",
            Command::Hessian => "hessian",
            Command::Decompose => "decompose",
            Command::Cocycle => "cocycle",
        }
    }
}

/// The example selected by a config, with everything its suites borrow.
enum Example {
    Galilean(galilean::Ctx),
    Heisenberg(heisenberg::Ctx),
    Unitary(unitary::Ctx),
    Siegel(siegel::Ctx),
    Virasoro(virasoro::Ctx),
    User(user::Ctx),
}

impl Example {
    fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        Ok(match cfg.example {
            ExampleId::Galilean => Example::Galilean(galilean::Ctx::new(cfg)?),
            ExampleId::Heisenberg => Example::Heisenberg(heisenberg::Ctx::new(cfg)?),
            ExampleId::Unitary => Example::Unitary(unitary::Ctx::new(cfg)?),
            ExampleId::Siegel => Example::Siegel(siegel::Ctx::new(cfg)?),
            ExampleId::Virasoro => Example::Virasoro(virasoro::Ctx::new(cfg)?),
            ExampleId::UserAlgebraFile => Example::User(user::Ctx::new(cfg)?),
        })
    }

    /// The action on which point-wise commands run; for Siegel, the block matching `dim` if given.
    fn spec(&self, dim: Option<usize>) -> Result<&dyn HamiltonianAction, CliError> {
        Ok(match self {
            Example::Galilean(c) => &c.spec,
            Example::Heisenberg(c) => &c.spec,
            Example::Unitary(c) => &c.spec,
            Example::Virasoro(c) => &c.model.spec,
            Example::Siegel(c) => match dim {
                Some(d) => c
                    .blocks
                    .iter()
                    .find(|b| b.spec.point_dim() == d)
                    .map(|b| &b.spec as &dyn HamiltonianAction)
                    .ok_or_else(|| CliError::Config(format!("no configured Siegel dimension has points of length {d}")))?,
                None => c.primary(),
            },
            Example::User(_) => return Err(CliError::Usage("a user algebra file only supports `verify`".into())),
        })
    }

    fn default_point(&self) -> Vector {
        match self {
            Example::Galilean(c) => c.default_point(),
            Example::Heisenberg(c) => c.default_point(),
            Example::Unitary(c) => c.default_point(),
            Example::Siegel(c) => c.default_point(),
            Example::Virasoro(c) => c.default_point(),
            Example::User(_) => Vector::zeros(0),
        }
    }

    fn tasks<'a>(&'a self, cfg: &ExperimentConfig, suites: &[Suite], point: &Vector) -> Vec<Task<'a>> {
        match self {
            Example::Galilean(c) => c.tasks(cfg, suites, point),
            Example::Heisenberg(c) => c.tasks(cfg, suites, point),
            Example::Unitary(c) => c.tasks(cfg, suites, point),
            Example::Siegel(c) => c.tasks(cfg, suites, point),
            Example::Virasoro(c) => c.tasks(cfg, suites, point),
            Example::User(c) => {
                if suites.contains(&Suite::Structure) {
                    c.tasks(cfg)
                } else {
                    Vec::new()
                }
            }
        }
    }
}

/// Runs one command. Check failures and refusals are reported, not returned as errors.
pub fn run(cmd: Command, cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    cfg.validate()?;
    let ex = Example::new(cfg)?;
    if matches!(ex, Example::User(_)) && cmd != Command::Verify {
        return Err(CliError::Usage(format!("`{}` needs a built-in example; a user algebra file only supports `verify`", cmd.as_str())));
    }
    let mut report = match cmd {
        Command::Verify => suites_at(&ex, cfg, cmd, &Suite::ALL, ex.default_point()),
        Command::Cocycle => suites_at(&ex, cfg, cmd, &[Suite::Cocycle], ex.default_point()),
        Command::Hessian => at_critical_point(&ex, cfg, cmd, &cfg.hessian.point, &[Suite::Hessian])?,
        Command::Decompose => at_critical_point(&ex, cfg, cmd, &cfg.decompose.point, &[Suite::Decompose])?,
        Command::Critical => critical(&ex, cfg)?,
    };
    report.finish();
    Ok(report)
}

/// Runs the given suites at the example's default point, as `verify` does for all of them.
pub fn run_suites(cfg: &ExperimentConfig, suites: &[Suite]) -> Result<ExperimentReport, CliError> {
    cfg.validate()?;
    let ex = Example::new(cfg)?;
    let mut report = suites_at(&ex, cfg, Command::Verify, suites, ex.default_point());
    report.finish();
    Ok(report)
}

fn suites_at(ex: &Example, cfg: &ExperimentConfig, cmd: Command, suites: &[Suite], point: Vector) -> ExperimentReport {
    let mut report = ExperimentReport::new(cmd.as_str(), cfg);
    run_tasks(&mut report, cfg.seed, ex.tasks(cfg, suites, &point));
    report
}

/// Hessian and decomposition statements hold only at critical points; anything else is refused.
fn at_critical_point(ex: &Example, cfg: &ExperimentConfig, cmd: Command, point: &Option<Vec<f64>>, suites: &[Suite]) -> Result<ExperimentReport, CliError> {
    let m = match point {
        Some(p) => Vector::from_column_slice(p),
        None => ex.default_point(),
    };
    let spec = ex.spec(Some(m.len()))?;
    if m.len() != spec.point_dim() {
        return Err(CliError::Config(format!("point has {} coordinates, the {} example needs {}", m.len(), cfg.example, spec.point_dim())));
    }
    let residual = criticality_residual(spec, &m);
    let tol = critical_tolerance(spec, &m);
    if !(residual <= tol) {
        return Ok(ExperimentReport::refused(
            cmd.as_str(),
            cfg,
            format!("point is not critical for ‖J‖²: ‖J(m)·m‖ = {residual:.3e} exceeds {tol:.3e}"),
        ));
    }
    let mut report = suites_at(ex, cfg, cmd, suites, m);
    report.notes.push(format!("criticality residual at the point {residual:.3e}"));
    Ok(report)
}

fn record(cfg: &ExperimentConfig, name: &str, anchor: Anchor, defect: f64, default_tol: f64, note: String) -> CheckRecord {
    let tolerance = cfg.tolerance(name, default_tol);
    CheckRecord { name: name.into(), anchor, defect, tolerance, pass: defect <= tolerance, note: Some(note) }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Moves m by `size` along a random unit tangent direction.
fn perturb(spec: &dyn HamiltonianAction, m: &Vector, size: f64, rng: &mut ChaCha8Rng) -> Vector {
    if size == 0.0 {
        return m.clone();
    }
    spec.retract(m, &(spec.sample_tangent(m, rng) * size))
}

fn galilean_params(mass: f64, spin: f64) -> Result<GalileanParams, CliError> {
    GalileanParams::new(mass, spin).map_err(|e| CliError::Config(e.to_string()))
}

/// Discrete Kirwan flow from a configured start, then classification of the endpoint.
fn critical(ex: &Example, cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let c = &cfg.critical;
    let mut rng = ChaCha8Rng::seed_from_u64(check_seed(cfg.seed, "critical.start"));
    let opts = DescentOptions { tolerance: c.tolerance, max_iterations: c.max_iterations, initial_step: c.step, ..DescentOptions::default() };
    let mut report = ExperimentReport::new("critical", cfg);

    // The second Galilean family lives at its own (m, s).
    let second_spec;
    let mut spec = ex.spec(c.point.as_ref().map(Vec::len))?;
    if let (Example::Galilean(_), StartFamily::Second) = (ex, &c.start) {
        second_spec = GalileanSpec::new(galilean_params(cfg.galilean.second_mass, cfg.galilean.second_spin)?);
        spec = &second_spec;
    }

    let start = match (&c.point, ex, &c.start) {
        (Some(p), _, _) => {
            if p.len() != spec.point_dim() {
                return Err(CliError::Config(format!("critical.point has {} coordinates, expected {}", p.len(), spec.point_dim())));
            }
            Vector::from_column_slice(p)
        }
        (None, _, StartFamily::Random) => spec.sample_point(&mut rng),
        (None, Example::Galilean(_), StartFamily::Second) => {
            let params = galilean_params(cfg.galilean.second_mass, cfg.galilean.second_spin)?;
            let m = galilean_second_critical_family(params, [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).map_err(|e| CliError::Refusal(e.to_string()))?;
            perturb(spec, &m, c.perturbation, &mut rng)
        }
        (None, Example::Unitary(u), StartFamily::Origin) => Vector::zeros(u.spec.point_dim()),
        (None, Example::Virasoro(v), StartFamily::First) => v.model.sample_band_limited(&mut rng, v.params.max_mode, c.perturbation.max(1e-3) * 10.0).to_vector(),
        (None, _, StartFamily::Origin) => ex.default_point(),
        (None, _, _) => perturb(spec, &ex.default_point(), c.perturbation, &mut rng),
    };

    let result = descend(spec, &start, &opts).map_err(|e| if e.is_refusal() { CliError::Refusal(e.to_string()) } else { CliError::Config(e.to_string()) })?;
    report.trajectory = result.trajectory.iter().map(|s| [s.iteration as f64, s.value, s.residual, s.step]).collect();
    report.notes.push(if result.converged {
        format!("converged in {} iterations, ‖J‖² = {:.12}", result.iterations, result.value)
    } else {
        format!("non-converged after {} iterations, final residual {:.3e}", result.iterations, result.residual)
    });
    report.spectra.insert("critical.point".into(), result.point.iter().copied().collect());

    report.checks.push(record(
        cfg,
        "critical.residual",
        Anchor::KirwanFlow,
        result.residual,
        c.tolerance,
        format!("‖J(m)·m‖ after {} iterations", result.iterations),
    ));
    // The line search is non-monotone: every value must stay below the largest of the previous `memory` values.
    let rise = result
        .trajectory
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, s)| {
            let reference = result.trajectory[k.saturating_sub(opts.memory)..k].iter().map(|p| p.value).fold(f64::MIN, f64::max);
            (s.value - reference).max(0.0) / (1.0 + reference.abs())
        })
        .fold(0.0, f64::max);
    report.checks.push(record(
        cfg,
        "critical.descent",
        Anchor::KirwanFlow,
        rise,
        1e-12,
        format!("largest relative rise of ‖J‖² above the previous {} values", opts.memory),
    ));
    report.checks.extend(classify(ex, cfg, spec, &start, &result)?);
    Ok(report)
}

/// Compares the endpoint against the critical sets known in closed form.
fn classify(ex: &Example, cfg: &ExperimentConfig, spec: &dyn HamiltonianAction, start: &Vector, r: &DescentResult) -> Result<Vec<CheckRecord>, CliError> {
    let m = &r.point;
    let mut out = Vec::new();
    match ex {
        Example::Galilean(g) => {
            let (q, p, x) = (m.rows(0, 3).norm(), m.rows(3, 3).norm(), [m[6], m[7], m[8]]);
            if cfg.critical.start == StartFamily::Second {
                let params = galilean_params(cfg.galilean.second_mass, cfg.galilean.second_spin)?;
                let expected = second_family_p_squared(params);
                out.push(record(cfg, "critical.second_family_p", Anchor::CriticalFamily, relative(p * p, expected), 1e-5, format!("‖p‖² = {:.12}, closed form {expected:.12}", p * p)));
                let mass = params.mass;
                let cc = (4.0 * mass * mass * params.spin).cbrt();
                let pv = [m[3], m[4], m[5]];
                let qx = cross(&pv, &x);
                let qe = Vector::from_iterator(3, qx.iter().map(|v| v * cc / (2.0 * mass * mass)));
                let dq = (m.rows(0, 3) - &qe).norm() / qe.norm().max(f64::MIN_POSITIVE);
                out.push(record(cfg, "critical.second_family_q", Anchor::CriticalFamily, dq, 1e-5, "q against c/(2m²)·p×x, relative".into()));
            } else if q < 1e-6 && p < 1e-6 {
                let s = g.params.spin;
                let expected = s * s / 2.0;
                out.push(record(cfg, "critical.first_family", Anchor::Critical, relative(r.value, expected), 1e-5, format!("‖J‖² = {:.12}, s²/2 = {expected:.12}", r.value)));
            } else {
                out.push(record(cfg, "critical.family", Anchor::CriticalFamily, f64::INFINITY, 0.0, format!("endpoint with ‖q‖ = {q:.3e}, ‖p‖ = {p:.3e} matches no known family")));
            }
        }
        Example::Unitary(u) => {
            let t = u.spec.level();
            let n2 = m.norm_squared();
            if start.norm() == 0.0 {
                out.push(record(cfg, "critical.origin_fixed", Anchor::Critical, m.norm(), 0.0, "gradient vanishes at the origin".into()));
            } else if t > 0.0 {
                out.push(record(cfg, "critical.level_sphere", Anchor::CriticalFamily, relative(n2, t), 1e-5, format!("‖v‖² = {n2:.12}, t = {t}")));
            } else {
                out.push(record(cfg, "critical.origin", Anchor::Critical, n2.sqrt(), 1e-5, "for t ≤ 0 the flow ends at the origin".into()));
            }
        }
        Example::Heisenberg(_) => {
            out.push(record(cfg, "critical.origin", Anchor::Critical, m.norm(), 1e-5, "the origin is the only critical point".into()));
        }
        Example::Siegel(_) => {
            let j = spec.momentum(m);
            out.push(record(cfg, "critical.base", Anchor::Critical, j.amax(), 1e-5, "the flow ends where J(j) = j − j₀ vanishes".into()));
        }
        Example::Virasoro(v) => {
            let f = FourierClass::from_vector(m);
            let res = euler_lagrange_residual(&f, v.params.grid);
            out.push(record(cfg, "critical.euler_lagrange", Anchor::CriticalFamily, res, 1e-6, "max |f‴ − ½(f′)³ − c| on the grid".into()));
        }
        Example::User(_) => {}
    }
    Ok(out)
}
