use std::f64::consts::SQRT_2;
use std::fmt;
use std::process::ExitCode;
use std::time::Instant;

use crt_core::laplace::{
    closed_form_llambda, excursion_measure_identities, numeric_l, LaplaceArgs as LArgs,
};
use crt_core::montecarlo::study::{analyse, sample_observations, Family, Statistic, StudyConfig};
use crt_core::series::*;
use crt_core::{DistLaw, Error, QuantileQuery};
use serde_json::json;

use crate::args::*;
use crate::output::{emit, fmt_f64, json_document, Cell, Table};

/// How a successful invocation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A validation check exceeded its tolerance.
    CheckFailed,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::CheckFailed => ExitCode::from(2),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Res<Status> {
    match cli.command {
        Command::Eval(a) => eval(a),
        Command::Table(a) => table(a),
        Command::Quantile(a) => quantile(a),
        Command::Sample(a) => sample(a),
        Command::Mc(a) => mc(a),
        Command::CheckJacobi(a) => check_jacobi(a),
        Command::CheckLaplace(a) => check_laplace(a),
        Command::CheckJoint(a) => check_joint(a),
    }
}

fn evaluate(law: Law, what: What, x: f64, z: Option<f64>, spec: &SeriesSpec) -> Res<SeriesEval> {
    if law != Law::Joint && z.is_some() {
        return Err(CliError::Usage("--z applies only to --law joint".into()));
    }
    let v = match (law, what) {
        (Law::Joint, _) => {
            let z = z.ok_or_else(|| CliError::Usage("--law joint needs --z".into()))?;
            let args = JointArgs::new(x, z)?;
            match what {
                What::Sf => joint_survival(&args, spec)?,
                What::Cdf => joint_cdf(&args, spec)?,
                What::Union => joint_union_cdf(&args, spec)?,
                What::Pdf => return Err(CliError::Usage("the joint law has no pdf here".into())),
            }
        }
        (_, What::Union) => {
            return Err(CliError::Usage(
                "--what union applies only to --law joint".into(),
            ))
        }
        (Law::Height, What::Sf) => marginal_height_sf(x, spec)?,
        (Law::Height, What::Cdf) => marginal_height_cdf(x, spec)?,
        (Law::Height, What::Pdf) => density_height(x, spec)?,
        (Law::Diameter, What::Sf) => marginal_diam_sf(x, spec)?,
        (Law::Diameter, What::Cdf) => marginal_diam_cdf(x, spec)?,
        (Law::Diameter, What::Pdf) => density_diam(x, spec)?,
        (Law::Szekeres, What::Sf) => marginal_diam_sf(x / SQRT_2, spec)?,
        (Law::Szekeres, What::Cdf) => marginal_diam_cdf(x / SQRT_2, spec)?,
        (Law::Szekeres, What::Pdf) => density_szekeres(x, spec)?,
    };
    Ok(v)
}

fn value_table(what: What, joint: bool) -> Table {
    if joint {
        Table::new(&["x", "z", what.name(), "terms", "bound"])
    } else {
        Table::new(&["x", what.name(), "terms", "bound"])
    }
}

fn value_row(x: f64, z: Option<f64>, e: &SeriesEval) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![x.into()];
    if let Some(z) = z {
        row.push(z.into());
    }
    row.extend([e.value.into(), e.terms_used.into(), e.trunc_bound.into()]);
    row
}

fn eval(a: EvalArgs) -> Res<Status> {
    let spec = a.series.spec();
    spec.validate()?;
    let e = evaluate(a.law, a.what, a.x, a.z, &spec)?;
    let mut t = value_table(a.what, a.law == Law::Joint);
    t.push(value_row(a.x, a.z, &e));
    emit(&t.render("eval", a.out.format), a.out.output.as_deref())?;
    Ok(Status::Ok)
}

fn table(a: TableArgs) -> Res<Status> {
    let spec = a.series.spec();
    spec.validate()?;
    if !(a.from.is_finite() && a.to.is_finite() && a.from <= a.to) {
        return Err(CliError::Usage(
            "--from and --to must be finite with from ≤ to".into(),
        ));
    }
    let mut t = value_table(a.what, a.law == Law::Joint);
    for i in 0..a.points {
        let x = if a.points == 1 {
            a.from
        } else {
            a.from + (a.to - a.from) * i as f64 / (a.points - 1) as f64
        };
        let e = evaluate(a.law, a.what, x, a.z, &spec)?;
        t.push(value_row(x, a.z, &e));
    }
    emit(&t.render("table", a.out.format), a.out.output.as_deref())?;
    Ok(Status::Ok)
}

fn marginal_law(law: Law, series: &SeriesOpts) -> Res<DistLaw> {
    let kind = law
        .marginal()
        .ok_or_else(|| CliError::Usage("this command needs a marginal law".into()))?;
    Ok(DistLaw::new(kind, series.spec())?)
}

fn quantile(a: QuantileArgs) -> Res<Status> {
    let law = marginal_law(a.law, &a.series)?;
    let mut t = Table::new(&["p", "x"]);
    for &p in &a.p {
        let x = law.quantile(&QuantileQuery::with_tol(p, a.tol_x)?)?;
        t.push(vec![p.into(), x.into()]);
    }
    emit(&t.render("quantile", a.out.format), a.out.output.as_deref())?;
    Ok(Status::Ok)
}

fn sample(a: SampleArgs) -> Res<Status> {
    let law = marginal_law(a.law, &a.series)?;
    let xs = law.sample(a.count, a.seed)?;
    let mut t = Table::new(&[law.kind().name()]);
    for x in xs {
        t.push(vec![x.into()]);
    }
    emit(&t.render("sample", a.out.format), a.out.output.as_deref())?;
    Ok(Status::Ok)
}

fn mc(a: McArgs) -> Res<Status> {
    let config = StudyConfig {
        family: a.family.into(),
        size: a.n,
        replicates: a.m,
        seed: a.seed,
        threads: a.threads,
        normalization: a.normalization.into(),
    };
    let start = Instant::now();
    let observations = sample_observations(&config)?;
    let report = analyse(&config, &observations, start.elapsed().as_secs_f64())?;
    let pass = report.passes(a.ks_tol, a.joint_tol);

    if let Some(path) = &a.samples {
        let scale = match config.family {
            Family::Excursion => config.normalization.name(),
            _ => "over_sqrt_n",
        };
        let stats: &[Statistic] = match config.family {
            Family::Excursion => &[Statistic::Height, Statistic::Diameter],
            _ => &[Statistic::Diameter],
        };
        for stat in stats {
            let mut text = format!("{}_{scale}\n", stat.name());
            for o in &observations {
                let v = if *stat == Statistic::Height {
                    o.height
                } else {
                    o.diameter
                };
                text.push_str(&fmt_f64(v));
                text.push('\n');
            }
            let target = if stats.len() == 1 {
                path.clone()
            } else {
                suffixed(path, stat.name())
            };
            emit(&text, Some(&target))?;
        }
    }

    let text = match a.format {
        Format::Json => {
            let mut body = serde_json::to_value(&report).expect("reports serialise");
            body["pass"] = json!(pass);
            body["ks_tol"] = json!(a.ks_tol);
            body["joint_tol"] = json!(a.joint_tol);
            json_document("mc", "report", body)
        }
        Format::Csv => {
            let mut t = Table::new(&[
                "statistic",
                "reference_law",
                "sample_count",
                "ks_statistic",
                "empirical",
                "exact",
                "seed",
                "wall_time",
            ]);
            for g in &report.reports {
                t.push(vec![
                    g.statistic.name().into(),
                    g.reference_law.name().into(),
                    g.sample_count.into(),
                    g.ks_statistic.into(),
                    Cell::Empty,
                    Cell::Empty,
                    g.seed.into(),
                    g.wall_time.into(),
                ]);
            }
            if let Some(j) = report.joint {
                t.push(vec![
                    format!("joint_survival(y={},z={})", j.y, j.z).into(),
                    "joint".into(),
                    observations.len().into(),
                    Cell::Empty,
                    j.empirical.into(),
                    j.exact.into(),
                    config.seed.into(),
                    report.wall_time.into(),
                ]);
            }
            t.to_csv()
        }
    };
    emit(&text, a.output.as_deref())?;
    if !pass {
        eprintln!(
            "check failed: max KS {} (tol {}){}",
            fmt_f64(report.max_ks()),
            a.ks_tol,
            report.joint.map_or(String::new(), |j| format!(
                "; joint survival empirical {} vs exact {} (tol {})",
                fmt_f64(j.empirical),
                fmt_f64(j.exact),
                a.joint_tol
            ))
        );
    }
    Ok(if pass {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

fn suffixed(path: &std::path::Path, tag: &str) -> std::path::PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

/// One line of a validation suite.
struct Check {
    identity: String,
    params: String,
    lhs: f64,
    rhs: f64,
    tol: f64,
}

impl Check {
    fn diff(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    fn pass(&self) -> bool {
        self.diff() <= self.tol
    }
}

fn report_checks(command: &str, checks: &[Check], out: &OutputOpts) -> Res<Status> {
    let mut t = Table::new(&[
        "identity", "params", "lhs", "rhs", "abs_diff", "tol", "pass",
    ]);
    for c in checks {
        t.push(vec![
            c.identity.clone().into(),
            c.params.clone().into(),
            c.lhs.into(),
            c.rhs.into(),
            c.diff().into(),
            c.tol.into(),
            c.pass().into(),
        ]);
    }
    emit(&t.render(command, out.format), out.output.as_deref())?;
    let mut status = Status::Ok;
    for c in checks.iter().filter(|c| !c.pass()) {
        eprintln!(
            "identity {} violated at {}: lhs = {}, rhs = {}, |lhs - rhs| = {} > {:e}",
            c.identity,
            c.params,
            fmt_f64(c.lhs),
            fmt_f64(c.rhs),
            fmt_f64(c.diff()),
            c.tol
        );
        status = Status::CheckFailed;
    }
    Ok(status)
}

fn check_jacobi(a: JacobiArgs) -> Res<Status> {
    let c = jacobi_check(a.t, a.x, a.y, a.terms as u64)?;
    let tol = a.tol;
    let params = format!(
        "t={};x={};y={};terms={};truncation_bound={:e}",
        a.t, a.x, a.y, a.terms, c.bound
    );
    let checks = [
        Check {
            identity: "jacobi_theta_re".into(),
            params: params.clone(),
            lhs: c.lhs.re,
            rhs: c.rhs.re,
            tol,
        },
        Check {
            identity: "jacobi_theta_im".into(),
            params,
            lhs: c.lhs.im,
            rhs: c.rhs.im,
            tol,
        },
    ];
    report_checks("check-jacobi", &checks, &a.out)
}

fn check_laplace(a: LaplaceArgs) -> Res<Status> {
    let mut checks = Vec::new();
    let points: Vec<(f64, f64, f64)> = match (a.lambda, a.y, a.z) {
        (None, None, None) => {
            let mut v = Vec::new();
            for l in [0.5, 1.0, 2.0] {
                for y in [0.5, 1.0, 2.0] {
                    for z in [0.25, 1.0, 3.0] {
                        v.push((l, y, z));
                    }
                }
            }
            v
        }
        (Some(l), Some(y), Some(z)) => vec![(l, y, z)],
        _ => {
            return Err(CliError::Usage(
                "give all of --lambda, --y and --z, or none".into(),
            ))
        }
    };
    for &(l, y, z) in &points {
        let args = LArgs::new(l, y, z)?;
        let n = numeric_l(&args, a.tol / 1e3)?;
        checks.push(Check {
            identity: "laplace_numeric_vs_closed_form".into(),
            params: format!("lambda={l};y={y};z={z}"),
            lhs: n.value,
            rhs: closed_form_llambda(&args)?,
            tol: a.tol,
        });
    }
    let lambdas: Vec<f64> = match a.lambda {
        Some(l) => vec![l],
        None => vec![0.5, 1.0, 2.0],
    };
    for &l in &lambdas {
        for level in [0.5, 1.0, 2.0] {
            for c in excursion_measure_identities(l, level)? {
                checks.push(Check {
                    identity: c.name.into(),
                    params: format!("lambda={l};a={level}"),
                    lhs: c.lhs,
                    rhs: c.rhs,
                    tol: a.identity_tol,
                });
            }
        }
    }
    report_checks("check-laplace", &checks, &a.out)
}

fn check_joint(a: CheckJointArgs) -> Res<Status> {
    let direct = SeriesSpec {
        mode: SeriesMode::Direct,
        ..SeriesSpec::default()
    };
    let dual = SeriesSpec {
        mode: SeriesMode::ThetaDual,
        ..SeriesSpec::default()
    };
    let auto = SeriesSpec::default();
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        if a.points == 1 {
            vec![lo]
        } else {
            (0..a.points)
                .map(|i| lo + (hi - lo) * i as f64 / (a.points - 1) as f64)
                .collect()
        }
    };
    let mut checks = Vec::new();
    for &y in &axis(0.5, 6.0) {
        for &z in &axis(0.1, 6.0) {
            let args = JointArgs::new(y, z)?;
            let s = joint_survival(&args, &direct)?.value;
            let f = joint_cdf(&args, &dual)?.value;
            let fd = marginal_diam_cdf(y, &auto)?.value;
            let fg = marginal_height_cdf(z, &auto)?.value;
            checks.push(Check {
                identity: "inclusion_exclusion".into(),
                params: format!("y={y};z={z}"),
                lhs: s - f,
                rhs: 1.0 - fd - fg,
                tol: a.tol,
            });
        }
    }
    for y in [0.5, 1.0, 2.0, 4.0] {
        checks.push(Check {
            identity: "joint_tail_at_z_eq_y".into(),
            params: format!("y={y}"),
            lhs: joint_survival(&JointArgs::new(y, y)?, &direct)?.value,
            rhs: marginal_height_sf(y, &auto)?.value,
            tol: 1e-12,
        });
        checks.push(Check {
            identity: "joint_tail_at_z_eq_half_y".into(),
            params: format!("y={y}"),
            lhs: joint_survival(&JointArgs::new(y, y / 2.0)?, &direct)?.value,
            rhs: marginal_diam_sf(y, &auto)?.value,
            tol: 1e-12,
        });
    }
    report_checks("check-joint", &checks, &a.out)
}
