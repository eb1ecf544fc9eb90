//! Exact Pareto front of tiny instances by enumerating set partitions.

use thiserror::Error;

use crate::archive::ParetoArchive;
use crate::model::{AttributeId, Instance, Solution};

pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {items} items; exhaustive enumeration is capped at {cap}")]
    TooLarge { items: usize, cap: usize },
}

/// [`exact_pareto_capped`] with the default cap of 10 items.
pub fn exact_pareto(instance: &Instance) -> Result<ParetoArchive, OracleError> {
    exact_pareto_capped(instance, DEFAULT_CAP)
}

/// Every capacity-feasible partition of the items into bins is visited once
/// (as a restricted growth string, so relabelled bins are not revisited) and
/// the non-dominated vectors are returned, each with one witness packing.
pub fn exact_pareto_capped(instance: &Instance, cap: usize) -> Result<ParetoArchive, OracleError> {
    if instance.len() > cap {
        return Err(OracleError::TooLarge { items: instance.len(), cap });
    }
    let mut search = Search {
        instance,
        blocks: Vec::new(),
        archive: ParetoArchive::new(),
    };
    search.descend(0);
    Ok(search.archive)
}

struct Block {
    members: Vec<usize>,
    load: u64,
    attributes: Vec<AttributeId>,
}

struct Search<'a> {
    instance: &'a Instance,
    blocks: Vec<Block>,
    archive: ParetoArchive,
}

impl Search<'_> {
    fn descend(&mut self, next: usize) {
        if next == self.instance.len() {
            let groups: Vec<&[usize]> = self.blocks.iter().map(|b| b.members.as_slice()).collect();
            let solution = Solution::from_groups(self.instance, &groups);
            self.archive.update(solution.evaluate(), solution);
            return;
        }
        let item = self.instance.item(next);
        for index in 0..self.blocks.len() {
            if self.blocks[index].load + item.weight > self.instance.capacity() {
                continue;
            }
            let block = &mut self.blocks[index];
            let added_attribute = !block.attributes.contains(&item.attribute);
            block.members.push(next);
            block.load += item.weight;
            if added_attribute {
                block.attributes.push(item.attribute);
            }
            self.descend(next + 1);
            let block = &mut self.blocks[index];
            block.members.pop();
            block.load -= item.weight;
            if added_attribute {
                block.attributes.pop();
            }
        }
        self.blocks.push(Block { members: vec![next], load: item.weight, attributes: vec![item.attribute] });
        self.descend(next + 1);
        self.blocks.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ObjectiveVector;

    fn front(capacity: u64, items: &[(u64, &str)]) -> Vec<ObjectiveVector> {
        exact_pareto(&Instance::new(capacity, items).unwrap()).unwrap().sorted_vectors()
    }

    #[test]
    fn items_that_cannot_share() {
        assert_eq!(front(1000, &[(600, "A"), (500, "A")]), [ObjectiveVector::new(2, 2)]);
    }

    #[test]
    fn two_item_tradeoff() {
        assert_eq!(
            front(1000, &[(400, "A"), (500, "B")]),
            [ObjectiveVector::new(2, 2), ObjectiveVector::new(1, 2)]
        );
    }

    #[test]
    fn uniform_attributes_give_one_vector() {
        let f = front(10, &[(4, "A"), (3, "A"), (6, "A"), (5, "A"), (2, "A")]);
        assert_eq!(f, [ObjectiveVector::new(2, 2)]);
    }

    #[test]
    fn witnesses_are_valid() {
        let instance = Instance::new(10, &[(4, "A"), (3, "B"), (6, "C"), (5, "A"), (2, "B"), (7, "C")]).unwrap();
        let archive = exact_pareto(&instance).unwrap();
        for (vector, solution) in archive.entries() {
            solution.validate(&instance).unwrap();
            assert_eq!(&solution.evaluate(), vector);
        }
    }

    #[test]
    fn refuses_large_instances() {
        let items: Vec<(u64, &str)> = vec![(1, "A"); 11];
        let instance = Instance::new(10, &items).unwrap();
        assert_eq!(exact_pareto(&instance).unwrap_err(), OracleError::TooLarge { items: 11, cap: 10 });
        assert!(exact_pareto_capped(&instance, 11).is_ok());
    }
}
