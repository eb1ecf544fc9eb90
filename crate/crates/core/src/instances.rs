//! Benchmark generation and the plain-text instance format.
//!
//! File layout, UTF-8, one record per line, every line newline-terminated:
//!
//! ```text
//! <n> <capacity>
//! <weight> <attribute>     (n lines)
//! ```

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Instance, ModelError};

/// Bin capacity of generated benchmarks.
pub const CAPACITY: u64 = 1000;
/// Items per generating group.
pub const GROUP: usize = 5;
/// Attribute labels of generated benchmarks, drawn with equal probability.
pub const LABELS: [&str; 5] = ["A", "B", "C", "D", "E"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("item count must be a positive multiple of {GROUP}, got {0}")]
    BadSize(usize),
}

/// A benchmark with `n / 5` full bins: each group of five items splits the
/// capacity 1000 at four distinct uniform cut points in `1..=999`. Every item
/// independently gets one of five labels.
pub fn generate(n: usize, seed: u64) -> Result<Instance, GenerateError> {
    if n == 0 || !n.is_multiple_of(GROUP) {
        return Err(GenerateError::BadSize(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(n);
    for _ in 0..n / GROUP {
        let mut cuts: Vec<u64> =
            index::sample(&mut rng, CAPACITY as usize - 1, GROUP - 1).into_iter().map(|c| c as u64 + 1).collect();
        cuts.sort_unstable();
        let mut previous = 0;
        for cut in cuts.into_iter().chain([CAPACITY]) {
            items.push((cut - previous, ""));
            previous = cut;
        }
    }
    for item in &mut items {
        item.1 = LABELS[rng.gen_range(0..LABELS.len())];
    }
    Ok(Instance::new(CAPACITY, &items).expect("generated items are valid"))
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: ModelError },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ReadError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ReadError::Parse { line, message: message.into() }
    }
}

pub fn write_instance<W: Write>(instance: &Instance, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", instance.len(), instance.capacity())?;
    for item in instance.items() {
        writeln!(out, "{} {}", item.weight, instance.label(item.attribute))?;
    }
    out.flush()
}

pub fn read_instance<R: BufRead>(input: R) -> Result<Instance, ReadError> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| ReadError::at(1, "empty file, expected \"n c\" header"))??;
    let (n, capacity) = match header.split(' ').collect::<Vec<_>>()[..] {
        [n, c] => (
            n.parse::<usize>().map_err(|_| ReadError::at(1, format!("item count {n:?} is not an integer")))?,
            c.parse::<u64>().map_err(|_| ReadError::at(1, format!("capacity {c:?} is not an integer")))?,
        ),
        _ => return Err(ReadError::at(1, format!("expected \"n c\", found {header:?}"))),
    };
    if n == 0 {
        return Err(ReadError::Invalid { line: 1, source: ModelError::Empty });
    }
    if capacity == 0 {
        return Err(ReadError::Invalid { line: 1, source: ModelError::ZeroCapacity });
    }

    let mut items: Vec<(u64, String)> = Vec::with_capacity(n);
    for (offset, line) in lines.enumerate() {
        let line_no = offset + 2;
        let line = line?;
        if items.len() == n {
            return Err(ReadError::at(line_no, format!("header declares {n} items but more lines follow")));
        }
        let (weight, label) = match line.split(' ').collect::<Vec<_>>()[..] {
            [w, a] if !a.is_empty() => (w, a),
            _ => return Err(ReadError::at(line_no, format!("expected \"weight attribute\", found {line:?}"))),
        };
        let weight: u64 =
            weight.parse().map_err(|_| ReadError::at(line_no, format!("weight {weight:?} is not an integer")))?;
        if weight > capacity {
            return Err(ReadError::Invalid {
                line: line_no,
                source: ModelError::Oversized { item: items.len(), weight, capacity },
            });
        }
        items.push((weight, label.to_owned()));
    }
    if items.len() < n {
        return Err(ReadError::at(
            items.len() + 2,
            format!("header declares {n} items but only {} found ({} missing)", items.len(), n - items.len()),
        ));
    }
    Instance::new(capacity, &items).map_err(|source| {
        let line = match source {
            ModelError::ZeroWeight { item } | ModelError::Oversized { item, .. } | ModelError::BadLabel { item } => {
                item + 2
            }
            _ => 1,
        };
        ReadError::Invalid { line, source }
    })
}

pub fn load(path: &Path) -> Result<Instance, ReadError> {
    read_instance(BufReader::new(File::open(path)?))
}

pub fn save(instance: &Instance, path: &Path) -> io::Result<()> {
    write_instance(instance, BufWriter::new(File::create(path)?))
}
