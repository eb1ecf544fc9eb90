//! Biobjective bin packing.
//!
//! Packings are scored by the number of bins (`z1`) and the average number of
//! distinct item attributes per bin (`z2`). [`construct::run_sweep`] builds an
//! approximation of the Pareto front with a heterogeneousness-capped Best-Fit
//! (or Random-Fit) heuristic; [`oracle::exact_pareto`] gives the exact front
//! for tiny instances.

pub mod archive;
pub mod cli;
pub mod construct;
pub mod instances;
pub mod model;
pub mod oracle;

pub use archive::ParetoArchive;
pub use construct::{run_sweep, Heuristic, ItemOrder, Step, SweepParams};
pub use model::{dominates, Instance, ObjectiveVector, Solution};
