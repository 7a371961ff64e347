//! Finite random trees, discretised excursions and Monte Carlo checks of
//! the limit laws.

pub mod bessel;
pub mod excursion;
pub mod ks;
pub mod labelled;
pub mod planar;
pub mod rng;
pub mod study;
pub mod tree;

pub use bessel::{bessel_hitting_check, BesselCheck};
pub use excursion::{
    excursion_height_diameter, sample_excursion, ExcursionPath, HeightDiameter, Normalization,
    SpinalRecord,
};
pub use ks::ks_statistic;
pub use labelled::sample_labelled_tree;
pub use planar::sample_planar_tree;
pub use study::{convergence_study, Family, GofReport, StudyConfig, StudyReport};
pub use tree::{tree_diameter_double_bfs, Tree, TreeStats};
