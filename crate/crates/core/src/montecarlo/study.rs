//! Convergence studies: rescaled heights and diameters of finite models
//! compared with the limit laws.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::excursion::{excursion_height_diameter, sample_excursion_with, Normalization};
use super::ks::ks_statistic;
use super::labelled::labelled_tree_with;
use super::planar::{contour_stats, dyck_path_with};
use super::rng::replicate_rng;
use crate::error::{Error, Result};
use crate::laws::{DistLaw, LawKind};
use crate::series::{joint_survival, JointArgs, SeriesSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    LabelledTree,
    PlanarTree,
    Excursion,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::LabelledTree => "labelled_tree",
            Self::PlanarTree => "planar_tree",
            Self::Excursion => "excursion",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "labelled" | "labeled" | "labelled_tree" | "labeled_tree" => Ok(Self::LabelledTree),
            "planar" | "planar_tree" => Ok(Self::PlanarTree),
            "excursion" => Ok(Self::Excursion),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub family: Family,
    /// Number of vertices for trees, grid size for excursions.
    pub size: usize,
    pub replicates: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Only used by the excursion family.
    pub normalization: Normalization,
}

impl StudyConfig {
    pub fn new(family: Family, size: usize, replicates: usize, seed: u64) -> Self {
        Self {
            family,
            size,
            replicates,
            seed,
            threads: None,
            normalization: Normalization::PaperSqrt2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument(
                "replicates must be at least 1".into(),
            ));
        }
        let min = if self.family == Family::Excursion {
            2
        } else {
            1
        };
        if self.size < min {
            return Err(Error::InvalidArgument(format!(
                "size must be at least {min}, got {}",
                self.size
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        Ok(())
    }
}

/// Rescaled height and diameter of one replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub height: f64,
    pub diameter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Height,
    Diameter,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Self::Height => "height",
            Self::Diameter => "diameter",
        }
    }

    fn pick(self, o: &Observation) -> f64 {
        match self {
            Self::Height => o.height,
            Self::Diameter => o.diameter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub sample_count: usize,
    pub ks_statistic: f64,
    pub reference_law: LawKind,
    pub statistic: Statistic,
    pub seed: u64,
    pub wall_time: f64,
}

/// Empirical against exact `P(D > y, Γ > z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointSurvivalCheck {
    pub y: f64,
    pub z: f64,
    pub empirical: f64,
    pub exact: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub reports: Vec<GofReport>,
    pub joint: Option<JointSurvivalCheck>,
    pub wall_time: f64,
}

impl StudyReport {
    pub fn max_ks(&self) -> f64 {
        self.reports
            .iter()
            .map(|r| r.ks_statistic)
            .fold(0.0, f64::max)
    }

    /// Whether every KS statistic and the joint check meet the tolerances.
    pub fn passes(&self, ks_tol: f64, joint_tol: f64) -> bool {
        self.max_ks() <= ks_tol && self.joint.is_none_or(|j| j.abs_diff <= joint_tol)
    }
}

/// The point at which the excursion study checks the joint survival.
pub const JOINT_CHECK_POINT: (f64, f64) = (2.0, 1.5);

/// Limit laws compared for each family, with the statistic they describe.
pub fn references(family: Family) -> &'static [(Statistic, LawKind)] {
    match family {
        Family::LabelledTree => &[(Statistic::Diameter, LawKind::SzekeresDelta)],
        Family::PlanarTree => &[(Statistic::Diameter, LawKind::DiameterD)],
        Family::Excursion => &[
            (Statistic::Height, LawKind::HeightGamma),
            (Statistic::Diameter, LawKind::DiameterD),
        ],
    }
}

fn observe(config: &StudyConfig, index: u64) -> Result<Observation> {
    let mut rng = replicate_rng(config.seed, index);
    match config.family {
        Family::LabelledTree | Family::PlanarTree => {
            let stats = if config.family == Family::LabelledTree {
                labelled_tree_with(&mut rng, config.size)?.stats()
            } else {
                contour_stats(&dyck_path_with(&mut rng, config.size)?)
            };
            let scale = (config.size as f64).sqrt();
            Ok(Observation {
                height: stats.height as f64 / scale,
                diameter: stats.diameter as f64 / scale,
            })
        }
        Family::Excursion => {
            let path = sample_excursion_with(&mut rng, config.size, config.normalization)?;
            let hd = excursion_height_diameter(&path);
            Ok(Observation {
                height: hd.gamma,
                diameter: hd.diameter,
            })
        }
    }
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// One rescaled observation per replicate, in replicate order.
pub fn sample_observations(config: &StudyConfig) -> Result<Vec<Observation>> {
    config.validate()?;
    in_pool(config.threads, || {
        (0..config.replicates as u64)
            .into_par_iter()
            .map(|i| observe(config, i))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Goodness of fit of already drawn observations.
pub fn analyse(
    config: &StudyConfig,
    observations: &[Observation],
    elapsed: f64,
) -> Result<StudyReport> {
    let start = Instant::now();
    let spec = SeriesSpec::default();
    let mut reports = Vec::new();
    for &(stat, kind) in references(config.family) {
        let t = Instant::now();
        let law = DistLaw::plain(kind, spec)?;
        let mut sample: Vec<f64> = observations.iter().map(|o| stat.pick(o)).collect();
        let ks = ks_statistic(&mut sample, |x| law.cdf(x))?;
        reports.push(GofReport {
            sample_count: sample.len(),
            ks_statistic: ks,
            reference_law: kind,
            statistic: stat,
            seed: config.seed,
            wall_time: elapsed + t.elapsed().as_secs_f64(),
        });
    }
    let joint = if config.family == Family::Excursion
        && config.normalization == Normalization::PaperSqrt2
    {
        let (y, z) = JOINT_CHECK_POINT;
        let hits = observations
            .iter()
            .filter(|o| o.diameter > y && o.height > z)
            .count();
        let empirical = hits as f64 / observations.len() as f64;
        let exact = joint_survival(&JointArgs::new(y, z)?, &spec)?.value;
        Some(JointSurvivalCheck {
            y,
            z,
            empirical,
            exact,
            abs_diff: (empirical - exact).abs(),
        })
    } else {
        None
    };
    Ok(StudyReport {
        config: *config,
        reports,
        joint,
        wall_time: elapsed + start.elapsed().as_secs_f64(),
    })
}

pub fn convergence_study(config: &StudyConfig) -> Result<StudyReport> {
    let start = Instant::now();
    let observations = sample_observations(config)?;
    analyse(config, &observations, start.elapsed().as_secs_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_family() {
        assert_eq!("labelled".parse::<Family>().unwrap(), Family::LabelledTree);
        assert_eq!("planar-tree".parse::<Family>().unwrap(), Family::PlanarTree);
        assert!("forest".parse::<Family>().is_err());
    }

    #[test]
    fn small_study_is_deterministic_across_threads() {
        let mut cfg = StudyConfig::new(Family::PlanarTree, 64, 300, 17);
        let a = sample_observations(&cfg).unwrap();
        cfg.threads = Some(1);
        let b = sample_observations(&cfg).unwrap();
        cfg.threads = Some(3);
        let c = sample_observations(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn excursion_study_reports_both_laws() {
        let cfg = StudyConfig::new(Family::Excursion, 256, 200, 3);
        let r = convergence_study(&cfg).unwrap();
        assert_eq!(r.reports.len(), 2);
        assert!(r.joint.is_some());
        assert!(r
            .reports
            .iter()
            .all(|g| (0.0..=1.0).contains(&g.ks_statistic)));
    }

    #[test]
    fn invalid_configs() {
        assert!(sample_observations(&StudyConfig::new(Family::LabelledTree, 10, 0, 1)).is_err());
        assert!(sample_observations(&StudyConfig::new(Family::Excursion, 1, 10, 1)).is_err());
    }
}
