use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};
use std::fs;
use std::io::Write;
use std::path::Path;

use conelab::eigencheck::{convergence_orders, radial_residual, slit_continuity, RadialGrid, SlitReport};
use conelab::lemmas::{
    lemma1_caseb_exclusion, lemma3_sweep, step1_asymmetric_exclusion, CaseBReport, DefectSweep,
    ExtremumKind, Lemma3Sweep, Regime,
};
use conelab::metric::{self, cone_angles, ConeAngles, ValidityReport};
use conelab::solver::{
    defect_scan, max_feasible_radius, residual, rigidity_scan, write_scan_csv, ClosureRule,
    ScanGrid, SolverError,
};
use conelab::{
    chi, glued_football, mp_distance, total_area, ConeAngleSpec, GluedFootballParams, OddLattice,
    Report, RunConfig,
};
use serde::Serialize;

use crate::{Cli, Closure, Cmd, FamilyArgs, Failure, RegimeArg, Suite};

/// Location tolerance for lemma 3 extrema.
const LOCATION_TOL: f64 = 1e-6;
const EIGEN_BOUND: f64 = 1e-4;
const ORDER_RANGE: (f64, f64) = (1.9, 2.1);
const CLOSURE_TOL: f64 = 1e-9;

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Assertion)
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            RunConfig::from_json(&text).map_err(|e| Failure::Io(e.to_string()))?
        }
        None => RunConfig::default(),
    };
    if let Some(p) = &cli.out {
        cfg.out = Some(p.display().to_string());
    }
    Ok(cfg)
}

fn family(args: &FamilyArgs) -> Result<GluedFootballParams, Failure> {
    let spec = ConeAngleSpec::new(args.alpha, args.beta).map_err(usage)?;
    GluedFootballParams::new(spec, args.t).map_err(usage)
}

pub fn run(cli: &Cli) -> Outcome {
    let mut cfg = load_config(cli)?;
    let out = cli.out.as_deref();
    match &cli.cmd {
        Cmd::Construct(args) => construct(args, out),
        Cmd::Check { path } => check(path, &cfg, out),
        Cmd::Rigidity {
            family: args,
            radius,
            samples,
            seed,
        } => {
            if let Some(r) = radius {
                cfg.radius = *r;
            }
            if let Some(n) = samples {
                cfg.samples = *n;
            }
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            cfg.validate().map_err(usage)?;
            rigidity(args, &cfg, out)
        }
        Cmd::Scan {
            family: args,
            grid,
            closure,
            eps,
            regime,
        } => {
            if let Some(g) = grid {
                cfg.scan_points = *g;
            }
            if let Some(e) = eps {
                cfg.scan_eps = *e;
            }
            scan(args, *closure, *regime, &cfg, out)
        }
        Cmd::Lemmas {
            suite,
            ell,
            beta_angle,
            alpha,
            beta,
            grid,
        } => {
            if let Some(g) = grid {
                match suite {
                    Suite::Lemma1 => cfg.lemma1_points = *g,
                    Suite::Lemma3 => cfg.lemma3_points = *g,
                    Suite::Lemma2 | Suite::Step1 => cfg.ell_points = *g,
                    Suite::All => {
                        return Err(usage("--grid needs a single --suite"));
                    }
                }
            }
            let args = LemmaArgs {
                ell: *ell,
                beta_angle: *beta_angle,
                alpha: *alpha,
                beta: *beta,
            };
            lemmas(*suite, &args, &cfg, out)
        }
        Cmd::Eigen {
            family: args,
            n,
            delta,
        } => {
            if let Some(n) = n {
                cfg.eigen_n = *n;
            }
            if let Some(d) = delta {
                cfg.eigen_delta = *d;
            }
            eigen(args, &cfg, out)
        }
        Cmd::Admissible(args) => admissible(args, &cfg, out),
    }
}

fn construct(args: &FamilyArgs, out: Option<&Path>) -> Outcome {
    let p = family(args)?;
    let m = glued_football(&p).map_err(usage)?;
    let r = residual(&m, &p.spec).map_err(usage)?;
    let doc = metric::serialize(&m, &p.spec).map_err(usage)?;
    emit(out, &doc)?;
    let line = format!("residual_norm {:e}", r.norm());
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckResult {
    path: String,
    lengths: [f64; 6],
    validity: ValidityReport,
    cone_angles: Option<ConeAngles>,
    target: [f64; 4],
    residual: Option<[f64; 4]>,
    residual_norm: Option<f64>,
}

fn check(path: &Path, cfg: &RunConfig, out: Option<&Path>) -> Outcome {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let (m, spec) = metric::deserialize(&text).map_err(|e| Failure::Io(e.to_string()))?;
    let validity = m.validate();
    let pass = validity.is_valid();
    let angles = cone_angles(&m).ok();
    let r = residual(&m, &spec).ok();
    let result = CheckResult {
        path: path.display().to_string(),
        lengths: m.lengths,
        validity,
        cone_angles: angles,
        target: spec.cone_vector(),
        residual: r.map(|r| r.0),
        residual_norm: r.map(|r| r.norm()),
    };
    emit(out, &Report::new("check", cfg, pass, result).render())?;
    verdict(pass)
}

fn rigidity(args: &FamilyArgs, cfg: &RunConfig, out: Option<&Path>) -> Outcome {
    let p = family(args)?;
    let report = match rigidity_scan(&p, &cfg.rigidity_options()) {
        Ok(r) => r,
        Err(e @ SolverError::RadiusTooLarge { .. }) => return Err(usage(e)),
        Err(SolverError::Option { name, value }) => {
            return Err(usage(format!("invalid {name} = {value}")))
        }
        Err(e) => {
            let max = glued_football(&p).map(|m| max_feasible_radius(&m));
            return Err(usage(format!("{e} (max feasible radius {max:?})")));
        }
    };
    let pass = report.rigid;
    emit(out, &Report::new("rigidity", cfg, pass, report).render())?;
    verdict(pass)
}

fn scan(
    args: &FamilyArgs,
    closure: Closure,
    regime: RegimeArg,
    cfg: &RunConfig,
    out: Option<&Path>,
) -> Outcome {
    let p = family(args)?;
    let m = glued_football(&p).map_err(usage)?;
    if cfg.scan_points == 0 {
        return Err(usage("scan grid needs at least one node per axis"));
    }
    let grid = ScanGrid::around(&m, cfg.scan_half_width, cfg.scan_points);
    let (rule, fixed) = match closure {
        Closure::Apex => (ClosureRule::Apex, 2),
        Closure::Dsplit => {
            let branch = match regime {
                RegimeArg::Below => Regime::Below.branch(),
                RegimeArg::Above => Regime::Above.branch(),
            };
            (
                ClosureRule::DSplit {
                    eps: cfg.scan_eps,
                    branch,
                },
                3,
            )
        }
    };
    let rows = defect_scan(&p.spec, &grid, rule);
    let mut buf = Vec::new();
    write_scan_csv(&rows, &mut buf).map_err(|e| Failure::Io(e.to_string()))?;
    emit(out, &String::from_utf8(buf).expect("csv is ascii"))?;
    let feasible = rows.iter().filter(|r| r.feasible).count();
    let closed = rows
        .iter()
        .filter(|r| r.feasible)
        .all(|r| r.residual[..fixed].iter().all(|x| x.abs() < CLOSURE_TOL));
    eprintln!("rows {} feasible {} closure_ok {}", rows.len(), feasible, closed);
    verdict(feasible > 0 && closed)
}

struct LemmaArgs {
    ell: Option<f64>,
    beta_angle: Option<f64>,
    alpha: f64,
    beta: f64,
}

#[derive(Serialize)]
struct Lemma1Result {
    pass: bool,
    reports: Vec<CaseBReport>,
}

#[derive(Serialize)]
struct SweepsResult {
    pass: bool,
    sweeps: Vec<DefectSweep>,
}

#[derive(Serialize)]
struct Lemma3Result {
    pass: bool,
    locations_ok: bool,
    classification_ok: bool,
    sweep: Lemma3Sweep,
}

#[derive(Serialize, Default)]
struct LemmasResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma1: Option<Lemma1Result>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma2: Option<SweepsResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma3: Option<Lemma3Result>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step1: Option<SweepsResult>,
}

fn defect_sweeps(
    apex1: f64,
    apex2: f64,
    ell: Option<f64>,
    cfg: &RunConfig,
) -> Result<SweepsResult, Failure> {
    for (name, v) in [("apex", apex1), ("apex", apex2)] {
        if !(v > 0.0 && v < PI) {
            return Err(usage(format!("{name} angle {v} outside (0, pi)")));
        }
    }
    let mut sweeps = Vec::new();
    for &eps in &cfg.eps_values {
        for regime in [Regime::Below, Regime::Above] {
            let grid = match ell {
                Some(l) if (l > FRAC_PI_2) == (regime == Regime::Below) => vec![l],
                Some(_) => continue,
                None => regime.ell_grid(cfg.ell_points),
            };
            sweeps.push(step1_asymmetric_exclusion(apex1, apex2, eps, &grid, regime));
        }
    }
    let pass = !sweeps.is_empty() && sweeps.iter().all(|s| s.claim_holds);
    Ok(SweepsResult { pass, sweeps })
}

fn lemmas(suite: Suite, args: &LemmaArgs, cfg: &RunConfig, out: Option<&Path>) -> Outcome {
    let want = |s: Suite| suite == s || suite == Suite::All;
    let mut result = LemmasResult::default();

    if want(Suite::Lemma1) {
        let betas = match args.beta_angle {
            Some(b) => vec![b],
            None => vec![0.5, 1.0, 2.0, 3.0],
        };
        let n = cfg.lemma1_points;
        let grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * PI / n as f64).collect();
        let reports = betas
            .iter()
            .map(|&b| lemma1_caseb_exclusion(b, &grid).map_err(usage))
            .collect::<Result<Vec<_>, _>>()?;
        let pass = reports.iter().all(|r| r.excluded);
        result.lemma1 = Some(Lemma1Result { pass, reports });
    }
    if want(Suite::Lemma2) {
        let beta = args.beta_angle.unwrap_or(FRAC_PI_2);
        result.lemma2 = Some(defect_sweeps(beta, beta, args.ell, cfg)?);
    }
    if want(Suite::Step1) {
        result.step1 = Some(defect_sweeps(args.alpha, args.beta, args.ell, cfg)?);
    }
    if want(Suite::Lemma3) {
        let ell = args.ell.unwrap_or(FRAC_PI_3);
        let beta = args.beta_angle.unwrap_or(FRAC_PI_2);
        let sweep = lemma3_sweep(ell, beta, cfg.lemma3_points).map_err(usage)?;
        let degenerate = sweep
            .extrema
            .iter()
            .any(|e| e.kind == ExtremumKind::Degenerate);
        let locations_ok = !sweep.extrema.is_empty()
            && sweep
                .extrema
                .iter()
                .all(|e| (e.alpha_crit - e.s_crit / 2.0).abs() < LOCATION_TOL);
        let classification_ok = degenerate || sweep.extrema.iter().all(|e| e.rule_holds);
        result.lemma3 = Some(Lemma3Result {
            pass: locations_ok && classification_ok,
            locations_ok,
            classification_ok,
            sweep,
        });
    }

    let pass = result.lemma1.as_ref().map_or(true, |r| r.pass)
        && result.lemma2.as_ref().map_or(true, |r| r.pass)
        && result.lemma3.as_ref().map_or(true, |r| r.pass)
        && result.step1.as_ref().map_or(true, |r| r.pass);
    emit(out, &Report::new("lemmas", cfg, pass, result).render())?;
    verdict(pass)
}

#[derive(Serialize)]
struct EigenResult {
    n: usize,
    delta: f64,
    radial_residual: f64,
    bound: f64,
    order_grids: Vec<usize>,
    orders: Vec<f64>,
    slit: SlitReport,
}

fn eigen(args: &FamilyArgs, cfg: &RunConfig, out: Option<&Path>) -> Outcome {
    let g = RadialGrid::new(cfg.eigen_n, cfg.eigen_delta).map_err(usage)?;
    let res = radial_residual(&g);
    // Orders are measured on the grids that refine up to n.
    let k = cfg.eigen_refinements;
    let n0 = ((cfg.eigen_n - 1) >> k) + 1;
    let order_grids: Vec<usize> = (0..=k).map(|j| ((n0 - 1) << j) + 1).collect();
    let orders = if n0 >= 3 {
        convergence_orders(n0, cfg.eigen_delta, k).map_err(usage)?
    } else {
        Vec::new()
    };
    let slit = slit_continuity(args.alpha, args.beta, args.t, cfg.slit_points).map_err(usage)?;
    let pass = res < EIGEN_BOUND
        && !orders.is_empty()
        && orders
            .iter()
            .all(|p| (ORDER_RANGE.0..=ORDER_RANGE.1).contains(p))
        && slit.max_mismatch == 0.0;
    let result = EigenResult {
        n: cfg.eigen_n,
        delta: cfg.eigen_delta,
        radial_residual: res,
        bound: EIGEN_BOUND,
        order_grids,
        orders,
        slit,
    };
    emit(out, &Report::new("eigen", cfg, pass, result).render())?;
    verdict(pass)
}

#[derive(Serialize)]
struct AdmissibleResult {
    betas: Vec<f64>,
    mp_distance: f64,
    chi: f64,
    chi_expected: f64,
    total_area: f64,
    area_expected: f64,
    on_boundary: bool,
}

fn admissible(args: &FamilyArgs, cfg: &RunConfig, out: Option<&Path>) -> Outcome {
    let p = family(args)?;
    let v = p.spec.normalized();
    let d = mp_distance(&v, OddLattice::OddSum);
    let x = chi(&v, 2);
    let expected = (args.alpha + args.beta) / PI;
    let area = total_area(&glued_football(&p).map_err(usage)?).map_err(usage)?;
    let pass = d >= 1.0 - 1e-12
        && (x - expected).abs() < 1e-10
        && (area - TAU * x).abs() < 1e-10;
    let result = AdmissibleResult {
        betas: v.as_slice().to_vec(),
        mp_distance: d,
        chi: x,
        chi_expected: expected,
        total_area: area,
        area_expected: TAU * x,
        on_boundary: (d - 1.0).abs() < 1e-12,
    };
    emit(out, &Report::new("admissible", cfg, pass, result).render())?;
    verdict(pass)
}
