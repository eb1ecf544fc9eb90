//! Heterogeneousness-controlled Best-Fit / Random-Fit construction and the
//! sweep that turns them into a Pareto-front approximation.
//!
//! The sweep walks a level `u` from 1 up to the instance's maximum possible
//! heterogeneousness in steps of `s`. At each level it builds a fixed number
//! of packings. While packing, every item gets its own cap `u_max`, drawn as
//! `floor(u)` or `ceil(u)` with the fractional part of `u` as the probability
//! of rounding up, and may only enter a bin whose distinct-attribute count
//! stays within that cap.
//!
//! # Random streams
//!
//! All randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`.
//! Packing `rep` at level index `k` draws from stream `(k << 32) | rep`; the
//! random item order of a sweep comes from stream `u64::MAX`. Every task thus
//! owns its stream, and serial and parallel runs return the same archive.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::archive::ParetoArchive;
use crate::model::{Instance, Item, ObjectiveVector, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    BestFit,
    RandomFit,
}

impl Heuristic {
    pub const ALL: [Heuristic; 2] = [Heuristic::BestFit, Heuristic::RandomFit];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::BestFit => "best-fit",
            Heuristic::RandomFit => "random-fit",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sequence in which items are offered to the heuristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ItemOrder {
    DecreasingWeight,
    IncreasingWeight,
    RandomOrder,
}

impl ItemOrder {
    pub const ALL: [ItemOrder; 3] =
        [ItemOrder::DecreasingWeight, ItemOrder::IncreasingWeight, ItemOrder::RandomOrder];

    pub fn name(self) -> &'static str {
        match self {
            ItemOrder::DecreasingWeight => "decreasing",
            ItemOrder::IncreasingWeight => "increasing",
            ItemOrder::RandomOrder => "random",
        }
    }
}

impl fmt::Display for ItemOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParamError {
    #[error("step must be a positive decimal or fraction, got {0:?}")]
    BadStep(String),
    #[error("step must be positive")]
    ZeroStep,
    #[error("solutions per level must be at least 1")]
    ZeroRepetitions,
}

/// Exact level increment, e.g. `0.1` is held as `1/10`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step(Ratio<u64>);

impl Step {
    pub fn new(step: Ratio<u64>) -> Result<Self, ParamError> {
        if step == Ratio::from_integer(0) {
            return Err(ParamError::ZeroStep);
        }
        Ok(Self(step))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }
}

impl Default for Step {
    fn default() -> Self {
        Self(Ratio::new(1, 10))
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Accepts decimals (`0.1`, `1`, `.25`) and fractions (`1/3`).
impl FromStr for Step {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParamError::BadStep(s.to_owned());
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let ratio = if let Some((num, den)) = s.split_once('/') {
            if !digits(num) || !digits(den) {
                return Err(bad());
            }
            let den: u64 = den.parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ratio::new(num.parse().map_err(|_| bad())?, den)
        } else {
            let (int, frac) = s.split_once('.').unwrap_or((s, ""));
            if (int.is_empty() && frac.is_empty())
                || !(int.is_empty() || digits(int))
                || !(frac.is_empty() || digits(frac))
                || frac.len() > 12
            {
                return Err(bad());
            }
            let scale = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            let num = int.checked_mul(scale).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
            Ratio::new(num, scale)
        };
        Step::new(ratio)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepParams {
    pub step: Step,
    pub solutions_per_level: u32,
    pub seed: u64,
    pub heuristic: Heuristic,
    pub order: ItemOrder,
}

impl SweepParams {
    /// `s = 0.1`, 100 packings per level.
    pub fn new(heuristic: Heuristic, order: ItemOrder, seed: u64) -> Self {
        Self { step: Step::default(), solutions_per_level: 100, seed, heuristic, order }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.solutions_per_level == 0 {
            return Err(ParamError::ZeroRepetitions);
        }
        Ok(())
    }

    /// Steps above 1 are legal but skip whole heterogeneousness levels.
    pub fn step_is_coarse(&self) -> bool {
        self.step.ratio() > Ratio::from_integer(1)
    }
}

/// The levels `1, 1 + s, 1 + 2s, ...` that do not exceed `max_heterogeneity`.
pub fn levels(max_heterogeneity: u32, step: Step) -> Vec<Ratio<u64>> {
    let top = Ratio::from_integer(u64::from(max_heterogeneity.max(1)));
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let u = Ratio::from_integer(1) + step.ratio() * Ratio::from_integer(k);
        if u > top {
            break;
        }
        out.push(u);
        k += 1;
    }
    out
}

/// Rng for packing `rep` at level index `level`.
pub fn substream(seed: u64, level: usize, rep: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((level as u64) << 32) | u64::from(rep));
    rng
}

/// Rng for the sweep-wide random item order.
pub fn order_stream(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    rng
}

/// Item ids in the requested order. Weight ties go to the lower id.
pub fn order_items<R: Rng + ?Sized>(instance: &Instance, order: ItemOrder, rng: &mut R) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..instance.len()).collect();
    match order {
        ItemOrder::DecreasingWeight => {
            ids.sort_by_key(|&id| (std::cmp::Reverse(instance.item(id).weight), id))
        }
        ItemOrder::IncreasingWeight => ids.sort_by_key(|&id| (instance.item(id).weight, id)),
        ItemOrder::RandomOrder => ids.shuffle(rng),
    }
    ids
}

/// Randomized rounding of the level: `ceil(u)` with probability
/// `u - floor(u)`, otherwise `floor(u)`. The draw is exact: the fractional
/// part `p/q` becomes a uniform integer in `[0, q)` compared against `p`.
pub fn draw_u_max<R: Rng + ?Sized>(u: Ratio<u64>, rng: &mut R) -> u32 {
    assert!(u >= Ratio::from_integer(1), "level below 1");
    let floor = u.to_integer() as u32;
    let frac = u.fract();
    if *frac.numer() == 0 {
        return floor;
    }
    if rng.gen_range(0..*frac.denom()) < *frac.numer() {
        floor + 1
    } else {
        floor
    }
}

/// Where an item goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Existing(usize),
    NewBin,
}

/// The open bin that admits `item` under the capacity and `u_max` with the
/// least residual capacity afterwards; the lowest index wins ties.
pub fn best_fit_bin(partial: &Solution, item: &Item, capacity: u64, u_max: u32) -> Placement {
    let mut best: Option<(u64, usize)> = None;
    for (index, bin) in partial.bins().iter().enumerate() {
        if !bin.admits(item, capacity, u_max) {
            continue;
        }
        let residual = capacity - bin.load() - item.weight;
        if best.is_none_or(|(r, _)| residual < r) {
            best = Some((residual, index));
            if residual == 0 {
                break;
            }
        }
    }
    best.map_or(Placement::NewBin, |(_, index)| Placement::Existing(index))
}

/// A uniformly chosen open bin among those that admit `item`. A new bin is
/// opened only if none does.
pub fn random_fit_bin<R: Rng + ?Sized>(
    partial: &Solution,
    item: &Item,
    capacity: u64,
    u_max: u32,
    rng: &mut R,
) -> Placement {
    let eligible: Vec<usize> = partial
        .bins()
        .iter()
        .enumerate()
        .filter(|(_, bin)| bin.admits(item, capacity, u_max))
        .map(|(index, _)| index)
        .collect();
    match eligible.len() {
        0 => Placement::NewBin,
        1 => Placement::Existing(eligible[0]),
        len => Placement::Existing(eligible[rng.gen_range(0..len)]),
    }
}

/// Packs the items in `sequence` at level `u`, drawing a fresh `u_max` for
/// every item.
pub fn construct_solution<R: Rng + ?Sized>(
    instance: &Instance,
    heuristic: Heuristic,
    sequence: &[usize],
    u: Ratio<u64>,
    rng: &mut R,
) -> Solution {
    let capacity = instance.capacity();
    let mut solution = Solution::new();
    for &id in sequence {
        let item = instance.item(id);
        let u_max = draw_u_max(u, rng);
        let placement = match heuristic {
            Heuristic::BestFit => best_fit_bin(&solution, item, capacity, u_max),
            Heuristic::RandomFit => random_fit_bin(&solution, item, capacity, u_max, rng),
        };
        match placement {
            Placement::Existing(bin) => solution.assign(bin, item),
            Placement::NewBin => {
                solution.open_bin(item);
            }
        }
    }
    solution
}

/// Runs the full sweep and returns the archive of non-dominated packings.
pub fn run_sweep(instance: &Instance, params: &SweepParams) -> Result<ParetoArchive, ParamError> {
    run_sweep_inspect(instance, params, |_, _| {})
}

/// [`run_sweep`] that also hands every constructed packing to `inspect`
/// (from whichever worker built it).
pub fn run_sweep_inspect<F>(
    instance: &Instance,
    params: &SweepParams,
    inspect: F,
) -> Result<ParetoArchive, ParamError>
where
    F: Fn(&Solution, &ObjectiveVector) + Sync,
{
    params.validate()?;
    let plan = Plan::new(instance, params);
    let tasks = plan.levels.len() * plan.reps as usize;
    let archive = (0..tasks)
        .into_par_iter()
        .fold(ParetoArchive::new, |mut archive, task| {
            let (solution, vector) = plan.build(task);
            inspect(&solution, &vector);
            archive.update(vector, solution);
            archive
        })
        .reduce(ParetoArchive::new, ParetoArchive::merge);
    Ok(archive)
}

/// Single-threaded sweep in task order. Returns the same archive as
/// [`run_sweep`].
pub fn run_sweep_serial(instance: &Instance, params: &SweepParams) -> Result<ParetoArchive, ParamError> {
    params.validate()?;
    let plan = Plan::new(instance, params);
    let mut archive = ParetoArchive::new();
    for task in 0..plan.levels.len() * plan.reps as usize {
        let (solution, vector) = plan.build(task);
        archive.update(vector, solution);
    }
    Ok(archive)
}

struct Plan<'a> {
    instance: &'a Instance,
    heuristic: Heuristic,
    seed: u64,
    reps: u32,
    levels: Vec<Ratio<u64>>,
    sequence: Vec<usize>,
}

impl<'a> Plan<'a> {
    fn new(instance: &'a Instance, params: &SweepParams) -> Self {
        let sequence = order_items(instance, params.order, &mut order_stream(params.seed));
        Self {
            instance,
            heuristic: params.heuristic,
            seed: params.seed,
            reps: params.solutions_per_level,
            levels: levels(instance.max_heterogeneity(), params.step),
            sequence,
        }
    }

    fn build(&self, task: usize) -> (Solution, ObjectiveVector) {
        let level = task / self.reps as usize;
        let rep = (task % self.reps as usize) as u32;
        let mut rng = substream(self.seed, level, rep);
        let solution =
            construct_solution(self.instance, self.heuristic, &self.sequence, self.levels[level], &mut rng);
        let vector = solution.evaluate();
        (solution, vector)
    }
}
