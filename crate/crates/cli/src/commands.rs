//! The four subcommands: `simulate`, `verify`, `identities`, `sweep`.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use superint_core::{
    bracket_residual, drift_report, eval_invariant, identity_suite, independence_rank, integrate,
    phase_rotation_check, sampling, BracketStats, Chart, DriftStats, Identity, IdentityOutcome,
    IntegratorOptions, InvariantKind, InvariantSpec, RotationStats, RotationTarget, SystemSpec,
    Termination, Trajectory,
};

use crate::config::{CheckKind, Grid, RunConfig};
use crate::output::{fmt_f64, write_json, CsvWriter};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SINGULARITY: i32 = 3;
pub const EXIT_UNDERFLOW: i32 = 4;
pub const EXIT_CHECK_FAILED: i32 = 5;

#[derive(Debug, Serialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub termination: Termination,
    pub samples: usize,
    pub drift: Vec<DriftStats>,
    pub config: RunConfig,
}

fn termination_exit(t: Termination, context: &str) -> i32 {
    match t {
        Termination::Completed => EXIT_OK,
        Termination::SingularityAbort => {
            eprintln!("{context}: trajectory entered the singular-set guard band");
            EXIT_SINGULARITY
        }
        Termination::StepUnderflow => {
            eprintln!("{context}: step size underflowed the 1e-14 * t_end floor");
            EXIT_UNDERFLOW
        }
    }
}

/// Integrate the configured trajectory, evaluating the configured invariants
/// under `eval_system` (different from the dynamics system only in
/// negative-control runs).
fn run_trajectory(cfg: &RunConfig, eval_system: &SystemSpec) -> Result<Trajectory, CliError> {
    let s0 = cfg.resolve_initial_state()?;
    let mismatched = eval_system != &cfg.system;
    let track: Vec<InvariantKind> = if mismatched { Vec::new() } else { cfg.invariants.clone() };
    let mut traj = integrate(&cfg.system, &s0, &cfg.integrator, &track)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if mismatched {
        // rebuild the tracks against the perturbed system; evaluation may
        // fail at points regular for the true system, so fall back to the
        // last good value (the drift is what we are after)
        for kind in &cfg.invariants {
            let mut values = Vec::with_capacity(traj.samples.len());
            for (_, s) in &traj.samples {
                match eval_invariant(*kind, eval_system, s) {
                    Ok(v) => values.push(v),
                    Err(_) => values.push(f64::MAX),
                }
            }
            traj.tracks.push((*kind, values));
        }
    }
    Ok(traj)
}

pub fn cmd_simulate(
    cfg: &RunConfig,
    preset_name: Option<String>,
    out: &Path,
) -> Result<i32, CliError> {
    cfg.validate()?;
    let traj = run_trajectory(cfg, &cfg.system)?;

    let mut header: Vec<&str> = vec!["t", "q1", "q2", "p1", "p2"];
    for kind in &cfg.invariants {
        header.push(kind.name());
    }
    let mut csv = CsvWriter::create(out, "trajectory.csv", &header)?;
    for (i, (t, s)) in traj.samples.iter().enumerate() {
        let mut row = vec![*t, s.q1, s.q2, s.p1, s.p2];
        for (_, values) in &traj.tracks {
            row.push(values[i]);
        }
        csv.row_f64(&row)?;
    }

    let drift = if traj.samples.len() >= 2 {
        drift_report(&traj).map_err(|e| CliError::Config(e.to_string()))?
    } else {
        Vec::new()
    };
    let summary = Summary {
        preset: preset_name,
        termination: traj.termination,
        samples: traj.samples.len(),
        drift,
        config: cfg.clone(),
    };
    write_json(out, "summary.json", &summary)?;
    Ok(termination_exit(traj.termination, "simulate"))
}

#[derive(Debug, Serialize)]
struct RankSetReport {
    invariants: Vec<InvariantKind>,
    expected_rank: usize,
    agreement: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
enum CheckReport {
    Drift {
        pass: bool,
        tolerance: f64,
        termination: Termination,
        stats: Vec<DriftStats>,
    },
    Bracket {
        pass: bool,
        tolerance_analytic: f64,
        tolerance_fd: f64,
        points: usize,
        stats: Vec<BracketStats>,
    },
    PhaseRotation {
        pass: bool,
        tolerance: f64,
        sample_interval: f64,
        t_end: f64,
        stats: Vec<RotationStats>,
    },
    Rank {
        pass: bool,
        agreement_required: f64,
        points: usize,
        sets: Vec<RankSetReport>,
    },
}

impl CheckReport {
    fn passed(&self) -> bool {
        match self {
            CheckReport::Drift { pass, .. }
            | CheckReport::Bracket { pass, .. }
            | CheckReport::PhaseRotation { pass, .. }
            | CheckReport::Rank { pass, .. } => *pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pass: bool,
    checks: Vec<CheckReport>,
    config: RunConfig,
}

/// The family's superintegrability witness set and its quadratic control set.
fn rank_sets(system: &SystemSpec) -> (Vec<InvariantKind>, Vec<InvariantKind>) {
    use InvariantKind::*;
    match system {
        SystemSpec::VaN { .. } => (vec![Ex, Ey, ImBxy], vec![Ex, Ey]),
        SystemSpec::VbN { .. } => (vec![H, Ex, ImCxy], vec![H, Ex]),
        _ => (vec![H, J2, ImKk], vec![H, J2]),
    }
}

fn rank_check(cfg: &RunConfig) -> Result<CheckReport, CliError> {
    let (witness, control) = rank_sets(&cfg.system);
    let points = sampling::sample_regular_points(&cfg.system, cfg.rank_points, cfg.seed ^ 0x5eed);
    let build = |kinds: &[InvariantKind]| -> Result<Vec<InvariantSpec>, CliError> {
        kinds
            .iter()
            .map(|k| {
                InvariantSpec::new(*k, cfg.system.clone())
                    .map_err(|e| CliError::Config(e.to_string()))
            })
            .collect()
    };
    let witness_specs = build(&witness)?;
    let control_specs = build(&control)?;
    let mut sets = Vec::new();
    for (kinds, specs, expected) in [
        (witness, witness_specs, 3usize),
        (control, control_specs, 2usize),
    ] {
        let mut agree = 0usize;
        for p in &points {
            if let Ok((rank, _)) = independence_rank(&specs, p) {
                if rank == expected {
                    agree += 1;
                }
            }
        }
        let agreement = agree as f64 / points.len() as f64;
        sets.push(RankSetReport {
            invariants: kinds,
            expected_rank: expected,
            agreement,
            pass: agreement >= cfg.tolerances.rank_agreement,
        });
    }
    Ok(CheckReport::Rank {
        pass: sets.iter().all(|s| s.pass),
        agreement_required: cfg.tolerances.rank_agreement,
        points: points.len(),
        sets,
    })
}

pub fn cmd_verify(cfg: &RunConfig, out: &Path) -> Result<i32, CliError> {
    cfg.validate()?;
    let polar = cfg.system.chart() == Chart::Polar;
    let checks: Vec<CheckKind> = match &cfg.checks {
        Some(list) if list.is_empty() => {
            return Err(CliError::Config("empty check list: nothing to verify".into()))
        }
        Some(list) => list.clone(),
        None => {
            let mut all = vec![CheckKind::Drift, CheckKind::Bracket, CheckKind::Rank];
            if polar {
                all.insert(2, CheckKind::PhaseRotation);
            }
            all
        }
    };

    let mut reports = Vec::new();
    for check in checks {
        let report = match check {
            CheckKind::Drift => {
                let eval_system = cfg.invariant_system()?;
                let traj = run_trajectory(cfg, &eval_system)?;
                if traj.termination != Termination::Completed {
                    return Ok(termination_exit(traj.termination, "verify/drift"));
                }
                let stats = drift_report(&traj).map_err(|e| CliError::Config(e.to_string()))?;
                let pass = stats.iter().all(|d| d.max_rel < cfg.tolerances.drift);
                CheckReport::Drift {
                    pass,
                    tolerance: cfg.tolerances.drift,
                    termination: traj.termination,
                    stats,
                }
            }
            CheckKind::Bracket => {
                let points =
                    sampling::sample_regular_points(&cfg.system, cfg.bracket_points, cfg.seed);
                let mut stats = Vec::new();
                let mut pass = true;
                for kind in &cfg.invariants {
                    let inv = InvariantSpec::new(*kind, cfg.system.clone())
                        .map_err(|e| CliError::Config(e.to_string()))?;
                    let s = bracket_residual(&inv, &points)
                        .map_err(|e| CliError::Config(e.to_string()))?;
                    let tol = if kind.uses_fd_gradient() {
                        cfg.tolerances.bracket_fd
                    } else {
                        cfg.tolerances.bracket_analytic
                    };
                    pass &= s.max_residual < tol;
                    stats.push(s);
                }
                CheckReport::Bracket {
                    pass,
                    tolerance_analytic: cfg.tolerances.bracket_analytic,
                    tolerance_fd: cfg.tolerances.bracket_fd,
                    points: cfg.bracket_points,
                    stats,
                }
            }
            CheckKind::PhaseRotation => {
                if !polar {
                    return Err(CliError::Config(
                        "phase_rotation applies only to the polar families".into(),
                    ));
                }
                let opts = IntegratorOptions {
                    t_end: cfg.integrator.t_end.min(10.0),
                    sample_interval: 1e-3,
                    ..cfg.integrator
                };
                let s0 = cfg.resolve_initial_state()?;
                let traj = integrate(&cfg.system, &s0, &opts, &[])
                    .map_err(|e| CliError::Config(e.to_string()))?;
                if traj.termination != Termination::Completed {
                    return Ok(termination_exit(traj.termination, "verify/phase_rotation"));
                }
                let mut stats = Vec::new();
                for target in [RotationTarget::M, RotationTarget::N] {
                    stats.push(
                        phase_rotation_check(&cfg.system, &traj, target)
                            .map_err(|e| CliError::Config(e.to_string()))?,
                    );
                }
                let pass = stats.iter().all(|s| s.max_residual < cfg.tolerances.rotation);
                CheckReport::PhaseRotation {
                    pass,
                    tolerance: cfg.tolerances.rotation,
                    sample_interval: opts.sample_interval,
                    t_end: opts.t_end,
                    stats,
                }
            }
            CheckKind::Rank => rank_check(cfg)?,
        };
        reports.push(report);
    }

    let pass = reports.iter().all(CheckReport::passed);
    let report = VerifyReport { pass, checks: reports, config: cfg.clone() };
    write_json(out, "report.json", &report)?;
    if pass {
        Ok(EXIT_OK)
    } else {
        eprintln!("verify: one or more checks failed (see report.json)");
        Ok(EXIT_CHECK_FAILED)
    }
}

#[derive(Debug, Serialize)]
pub struct IdentitiesReport {
    pub samples: usize,
    pub seed: u64,
    pub identities: Vec<IdentityOutcome>,
    pub pass: bool,
}

pub fn cmd_identities(samples: usize, seed: u64, out: &Path) -> Result<i32, CliError> {
    if samples < 1 {
        return Err(CliError::Config("samples must be >= 1".into()));
    }
    let identities = identity_suite(&Identity::ALL, samples, seed);
    let pass = identities.iter().all(|o| o.pass);
    let report = IdentitiesReport { samples, seed, identities, pass };
    write_json(out, "report.json", &report)?;
    if pass {
        Ok(EXIT_OK)
    } else {
        eprintln!("identities: discrepancy above tolerance (see report.json)");
        Ok(EXIT_CHECK_FAILED)
    }
}

/// One concrete assignment of grid values, in canonical axis order.
#[derive(Debug, Clone)]
struct GridPoint {
    index: usize,
    system: SystemSpec,
    label: Vec<(&'static str, String)>,
}

fn grid_points(base: &SystemSpec, grid: &Grid) -> Result<Vec<GridPoint>, CliError> {
    // canonical axis order: k, ka, kb, g, omega0, n_x, n_y
    let mut axes: Vec<(&'static str, Vec<String>)> = Vec::new();
    if !grid.k.is_empty() {
        axes.push(("k", grid.k.clone()));
    }
    for (name, vals) in [("ka", &grid.ka), ("kb", &grid.kb), ("g", &grid.g), ("omega0", &grid.omega0)]
    {
        if !vals.is_empty() {
            axes.push((name, vals.iter().map(|v| fmt_f64(*v)).collect()));
        }
    }
    for (name, vals) in [("n_x", &grid.n_x), ("n_y", &grid.n_y)] {
        if !vals.is_empty() {
            axes.push((name, vals.iter().map(|v| v.to_string()).collect()));
        }
    }
    if axes.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }

    let mut points = vec![GridPoint { index: 0, system: base.clone(), label: Vec::new() }];
    for (name, values) in &axes {
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for v in values {
                let mut sys = p.system.clone();
                apply_grid_value(&mut sys, name, v)?;
                let mut label = p.label.clone();
                label.push((name, v.clone()));
                next.push(GridPoint { index: 0, system: sys, label });
            }
        }
        points = next;
    }
    for (i, p) in points.iter_mut().enumerate() {
        p.index = i;
    }
    for p in &points {
        p.system
            .validate()
            .map_err(|e| CliError::Config(format!("grid point {}: {e}", p.index)))?;
    }
    Ok(points)
}

fn apply_grid_value(sys: &mut SystemSpec, name: &str, value: &str) -> Result<(), CliError> {
    let bad = |what: &str| CliError::Config(format!("grid axis {name}: {what}"));
    let as_f64 = |v: &str| v.parse::<f64>().map_err(|_| bad("not a number"));
    let as_u32 = |v: &str| v.parse::<u32>().map_err(|_| bad("not an integer"));
    match (name, &mut *sys) {
        ("k", SystemSpec::Vak { k, .. })
        | ("k", SystemSpec::Vck { k, .. })
        | ("k", SystemSpec::VckRot { k, .. }) => {
            *k = value.parse().map_err(|_| bad("not a rational p/q"))?;
        }
        ("ka", SystemSpec::Vak { ka, .. })
        | ("ka", SystemSpec::Vck { ka, .. })
        | ("ka", SystemSpec::VckRot { ka, .. }) => *ka = as_f64(value)?,
        ("kb", SystemSpec::Vak { kb, .. })
        | ("kb", SystemSpec::Vck { kb, .. })
        | ("kb", SystemSpec::VckRot { kb, .. }) => *kb = as_f64(value)?,
        ("g", SystemSpec::Vck { g, .. }) | ("g", SystemSpec::VckRot { g, .. }) => {
            *g = as_f64(value)?
        }
        ("omega0", SystemSpec::VaN { omega0, .. })
        | ("omega0", SystemSpec::VbN { omega0, .. })
        | ("omega0", SystemSpec::Vak { omega0, .. }) => *omega0 = as_f64(value)?,
        ("n_x", SystemSpec::VaN { n_x, .. }) | ("n_x", SystemSpec::VbN { n_x, .. }) => {
            *n_x = as_u32(value)?
        }
        ("n_y", SystemSpec::VaN { n_y, .. }) | ("n_y", SystemSpec::VbN { n_y, .. }) => {
            *n_y = as_u32(value)?
        }
        _ => {
            return Err(CliError::Config(format!(
                "grid axis {name} does not apply to family {}",
                sys.family_name()
            )))
        }
    }
    Ok(())
}

struct SweepRow {
    grid_index: usize,
    ic_index: usize,
    label: Vec<(&'static str, String)>,
    family: &'static str,
    termination: Termination,
    drifts: Vec<f64>,
    brackets: Vec<f64>,
    rank: usize,
}

pub fn cmd_sweep(cfg: &RunConfig, out: &Path) -> Result<i32, CliError> {
    cfg.system
        .validate()
        .map_err(|e| CliError::Config(format!("system: {e}")))?;
    cfg.integrator
        .validate()
        .map_err(|e| CliError::Config(format!("integrator: {e}")))?;
    let grid = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep needs a grid".into()))?;
    let points = grid_points(&cfg.system, grid)?;
    if cfg.ics_per_point == 0 {
        return Err(CliError::Config("ics_per_point must be >= 1".into()));
    }
    for kind in &cfg.invariants {
        for p in &points {
            if !kind.applies_to(&p.system) {
                return Err(CliError::Config(format!(
                    "invariant {kind} does not apply at grid point {} ({})",
                    p.index,
                    p.system.family_name()
                )));
            }
        }
    }

    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|g| (0..cfg.ics_per_point).map(move |i| (g, i)))
        .collect();

    // each row gets its own seed, so results do not depend on scheduling
    let rows: Vec<Result<SweepRow, CliError>> = jobs
        .par_iter()
        .map(|(gi, ici)| {
            let point = &points[*gi];
            let row_seed = cfg
                .seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add((*gi as u64) << 20)
                .wrapping_add(*ici as u64);
            let mut rng = sampling::rng_from_seed(row_seed);
            let s0 = sampling::sample_bounded_initial_state(&point.system, &mut rng);
            let traj = integrate(&point.system, &s0, &cfg.integrator, &cfg.invariants)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let drifts: Vec<f64> = if traj.termination == Termination::Completed {
                drift_report(&traj)
                    .map_err(|e| CliError::Config(e.to_string()))?
                    .iter()
                    .map(|d| d.max_rel)
                    .collect()
            } else {
                vec![f64::NAN; cfg.invariants.len()]
            };
            let bracket_pts =
                sampling::sample_regular_points(&point.system, cfg.bracket_points, row_seed ^ 0xb0);
            let mut brackets = Vec::with_capacity(cfg.invariants.len());
            for kind in &cfg.invariants {
                let inv = InvariantSpec::new(*kind, point.system.clone())
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let stats = bracket_residual(&inv, &bracket_pts)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                brackets.push(stats.max_residual);
            }
            let (witness, _) = rank_sets(&point.system);
            let specs: Vec<InvariantSpec> = witness
                .iter()
                .map(|k| InvariantSpec::new(*k, point.system.clone()).expect("witness applies"))
                .collect();
            let rank = independence_rank(&specs, &s0)
                .map(|(r, _)| r)
                .unwrap_or(0);
            Ok(SweepRow {
                grid_index: *gi,
                ic_index: *ici,
                label: point.label.clone(),
                family: point.system.family_name(),
                termination: traj.termination,
                drifts,
                brackets,
                rank,
            })
        })
        .collect();

    let axis_names: Vec<&'static str> = points[0].label.iter().map(|(n, _)| *n).collect();
    let mut header: Vec<String> = vec!["grid_index".into(), "ic_index".into(), "family".into()];
    header.extend(axis_names.iter().map(|n| n.to_string()));
    header.push("termination".into());
    for kind in &cfg.invariants {
        header.push(format!("drift_{kind}"));
    }
    for kind in &cfg.invariants {
        header.push(format!("bracket_{kind}"));
    }
    header.push("rank".into());
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = CsvWriter::create(out, "sweep.csv", &header_refs)?;

    for row in rows {
        let row = row?;
        let mut cells: Vec<String> = vec![
            row.grid_index.to_string(),
            row.ic_index.to_string(),
            row.family.to_string(),
        ];
        cells.extend(row.label.iter().map(|(_, v)| v.clone()));
        cells.push(
            serde_json::to_value(row.termination)
                .expect("termination serializes")
                .as_str()
                .expect("termination is a string")
                .to_string(),
        );
        cells.extend(row.drifts.iter().map(|v| fmt_f64(*v)));
        cells.extend(row.brackets.iter().map(|v| fmt_f64(*v)));
        cells.push(row.rank.to_string());
        csv.row(&cells)?;
    }
    Ok(EXIT_OK)
}
