//! Instances, packings and the two objectives.
//!
//! A packing is scored by the number of bins it uses (`z1`) and by the
//! average heterogeneousness of those bins (`z2`), where the heterogeneousness
//! of a bin is the number of distinct attributes among its items. Both
//! objectives are minimized.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

/// Index of an attribute label inside an [`Instance`]'s label table.
///
/// Labels are nominal: two ids are either equal or not, nothing else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AttributeId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub id: usize,
    pub weight: u64,
    pub attribute: AttributeId,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("instance has no items")]
    Empty,
    #[error("bin capacity must be positive")]
    ZeroCapacity,
    #[error("item {item} has weight 0; weights must be positive")]
    ZeroWeight { item: usize },
    #[error("item {item} has weight {weight}, exceeding the bin capacity {capacity}")]
    Oversized { item: usize, weight: u64, capacity: u64 },
    #[error("attribute label of item {item} is empty or contains whitespace")]
    BadLabel { item: usize },
}

/// A bin-packing instance: a capacity and the items to pack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    capacity: u64,
    items: Vec<Item>,
    labels: Vec<String>,
}

impl Instance {
    /// Builds an instance from `(weight, attribute label)` pairs. Item ids are
    /// the positions in `items`.
    pub fn new<S: AsRef<str>>(capacity: u64, items: &[(u64, S)]) -> Result<Self, ModelError> {
        if capacity == 0 {
            return Err(ModelError::ZeroCapacity);
        }
        if items.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<&str, AttributeId> = HashMap::new();
        let mut out = Vec::with_capacity(items.len());
        for (id, (weight, label)) in items.iter().enumerate() {
            let label = label.as_ref();
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(ModelError::BadLabel { item: id });
            }
            if *weight == 0 {
                return Err(ModelError::ZeroWeight { item: id });
            }
            if *weight > capacity {
                return Err(ModelError::Oversized { item: id, weight: *weight, capacity });
            }
            let attribute = *index.entry(label).or_insert_with(|| {
                labels.push(label.to_owned());
                AttributeId(labels.len() as u32 - 1)
            });
            out.push(Item { id, weight: *weight, attribute });
        }
        Ok(Self { capacity, items: out, labels })
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, id: usize) -> &Item {
        &self.items[id]
    }

    /// Distinct labels present in the instance, in order of first appearance.
    pub fn attribute_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, attribute: AttributeId) -> &str {
        &self.labels[attribute.0 as usize]
    }

    /// Maximum possible heterogeneousness of a bin: the number of distinct
    /// attributes in the instance.
    pub fn max_heterogeneity(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn total_weight(&self) -> u64 {
        self.items.iter().map(|item| item.weight).sum()
    }

    /// `ceil(total weight / capacity)`, the fewest bins any packing can use.
    pub fn lower_bound(&self) -> u64 {
        self.total_weight().div_ceil(self.capacity)
    }
}

/// A used bin. Load and attribute set always agree with the members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bin {
    members: Vec<usize>,
    load: u64,
    attributes: Vec<AttributeId>,
}

impl Bin {
    fn with_item(item: &Item) -> Self {
        Self { members: vec![item.id], load: item.weight, attributes: vec![item.attribute] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn load(&self) -> u64 {
        self.load
    }

    pub fn residual(&self, capacity: u64) -> u64 {
        capacity - self.load
    }

    /// Number of distinct attributes in the bin.
    pub fn heterogeneity(&self) -> u32 {
        self.attributes.len() as u32
    }

    pub fn attributes(&self) -> &[AttributeId] {
        &self.attributes
    }

    pub fn contains_attribute(&self, attribute: AttributeId) -> bool {
        self.attributes.contains(&attribute)
    }

    /// Heterogeneousness the bin would have after adding an item with
    /// `attribute`.
    pub fn heterogeneity_with(&self, attribute: AttributeId) -> u32 {
        self.heterogeneity() + u32::from(!self.contains_attribute(attribute))
    }

    /// Whether `item` fits under `capacity` and keeps the bin's
    /// heterogeneousness at or below `u_max`.
    pub fn admits(&self, item: &Item, capacity: u64, u_max: u32) -> bool {
        self.load + item.weight <= capacity && self.heterogeneity_with(item.attribute) <= u_max
    }

    fn push(&mut self, item: &Item) {
        self.members.push(item.id);
        self.load += item.weight;
        if !self.contains_attribute(item.attribute) {
            self.attributes.push(item.attribute);
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("item {0} is not assigned to any bin")]
    Unassigned(usize),
    #[error("item {0} is assigned more than once")]
    Duplicate(usize),
    #[error("item id {0} does not exist in the instance")]
    UnknownItem(usize),
    #[error("bin {0} is empty")]
    EmptyBin(usize),
    #[error("bin {bin} holds {load}, over the capacity {capacity}")]
    OverCapacity { bin: usize, load: u64, capacity: u64 },
    #[error("bin {0} has inconsistent load or attribute bookkeeping")]
    Inconsistent(usize),
}

/// A (possibly partial) packing. Only used bins are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    bins: Vec<Bin>,
}

impl Solution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Packs the given groups of item ids, one bin per group, without any
    /// feasibility checks. Use [`Solution::validate`] afterwards.
    pub fn from_groups<G: AsRef<[usize]>>(instance: &Instance, groups: &[G]) -> Self {
        let mut solution = Self::new();
        for group in groups {
            let mut ids = group.as_ref().iter();
            let Some(&first) = ids.next() else { continue };
            let bin = solution.open_bin(instance.item(first));
            for &id in ids {
                solution.assign(bin, instance.item(id));
            }
        }
        solution
    }

    pub fn bins(&self) -> &[Bin] {
        &self.bins
    }

    /// Puts `item` into a new bin and returns that bin's index.
    pub fn open_bin(&mut self, item: &Item) -> usize {
        self.bins.push(Bin::with_item(item));
        self.bins.len() - 1
    }

    pub fn assign(&mut self, bin: usize, item: &Item) {
        self.bins[bin].push(item);
    }

    /// `z1`: number of used bins.
    pub fn bin_count(&self) -> u32 {
        self.bins.len() as u32
    }

    /// Sum of the bins' heterogeneousness values.
    pub fn total_heterogeneity(&self) -> u64 {
        self.bins.iter().map(|bin| u64::from(bin.heterogeneity())).sum()
    }

    /// `z2`: mean heterogeneousness over used bins.
    ///
    /// # Panics
    /// If the solution has no bins.
    pub fn average_heterogeneity(&self) -> Ratio<u64> {
        assert!(!self.bins.is_empty(), "average heterogeneousness of an empty packing");
        Ratio::new(self.total_heterogeneity(), u64::from(self.bin_count()))
    }

    pub fn evaluate(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.bin_count(), self.total_heterogeneity())
    }

    /// Checks that every item is packed exactly once, no bin overflows, no
    /// bin is empty and the per-bin bookkeeping matches the members.
    pub fn validate(&self, instance: &Instance) -> Result<(), SolutionError> {
        let mut seen = vec![false; instance.len()];
        for (index, bin) in self.bins.iter().enumerate() {
            if bin.members.is_empty() {
                return Err(SolutionError::EmptyBin(index));
            }
            let mut load = 0;
            let mut attributes: Vec<AttributeId> = Vec::new();
            for &id in &bin.members {
                let slot = seen.get_mut(id).ok_or(SolutionError::UnknownItem(id))?;
                if std::mem::replace(slot, true) {
                    return Err(SolutionError::Duplicate(id));
                }
                let item = instance.item(id);
                load += item.weight;
                if !attributes.contains(&item.attribute) {
                    attributes.push(item.attribute);
                }
            }
            let same_attributes = attributes.len() == bin.attributes.len()
                && attributes.iter().all(|a| bin.attributes.contains(a));
            if load != bin.load || !same_attributes {
                return Err(SolutionError::Inconsistent(index));
            }
            if load > instance.capacity() {
                return Err(SolutionError::OverCapacity {
                    bin: index,
                    load,
                    capacity: instance.capacity(),
                });
            }
        }
        match seen.iter().position(|&s| !s) {
            Some(id) => Err(SolutionError::Unassigned(id)),
            None => Ok(()),
        }
    }
}

/// The pair `(z1, z2)`. `z2` is kept as an exact fraction so that
/// comparisons never suffer from rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ObjectiveVector {
    bins: u32,
    heterogeneity: Ratio<u64>,
}

impl ObjectiveVector {
    /// `bins` used bins whose heterogeneousness values sum to
    /// `total_heterogeneity`.
    ///
    /// # Panics
    /// If `bins` is zero.
    pub fn new(bins: u32, total_heterogeneity: u64) -> Self {
        assert!(bins > 0, "objective vector needs at least one bin");
        Self { bins, heterogeneity: Ratio::new(total_heterogeneity, u64::from(bins)) }
    }

    pub fn z1(&self) -> u32 {
        self.bins
    }

    pub fn z2(&self) -> Ratio<u64> {
        self.heterogeneity
    }

    pub fn z2_f64(&self) -> f64 {
        *self.heterogeneity.numer() as f64 / *self.heterogeneity.denom() as f64
    }

    /// `z2` with three decimals, rounded half up.
    pub fn z2_fixed3(&self) -> String {
        let (num, den) = (*self.heterogeneity.numer() as u128, *self.heterogeneity.denom() as u128);
        let millis = (2 * 1000 * num + den) / (2 * den);
        format!("{}.{:03}", millis / 1000, millis % 1000)
    }

    pub fn dominates(&self, other: &Self) -> bool {
        dominates(self, other)
    }

    /// Reporting order: `z1` descending, then `z2` ascending.
    pub fn report_cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.bins.cmp(&self.bins).then(self.heterogeneity.cmp(&other.heterogeneity))
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.bins, self.z2_fixed3())
    }
}

/// Pareto dominance for minimization: `a` is nowhere worse than `b` and
/// strictly better somewhere.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.bins <= b.bins
        && a.heterogeneity <= b.heterogeneity
        && (a.bins < b.bins || a.heterogeneity < b.heterogeneity)
}
