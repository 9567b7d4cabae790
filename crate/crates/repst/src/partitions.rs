//! Set partitions of finite index sets: the refinement lattice join, index
//! restriction, enumeration, and the partition-lattice Möbius function.
//! Everything downstream (diagrams, idempotents, hom bases) is built on the
//! canonical form fixed here: indices ascending within each block, blocks
//! ordered by least element.

use crate::config;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Union-find over 0..n with path compression. Shared with the diagram
/// composition hot path.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // attach the larger root under the smaller so roots stay canonical
            if ra < rb {
                self.parent[rb] = ra;
            } else {
                self.parent[ra] = rb;
            }
        }
    }
}

/// A partition of {0,…,n−1} into disjoint nonempty blocks, kept in canonical
/// form: within each block indices ascend, blocks are ordered by least element.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Builds a partition from blocks, validating the invariants and putting
    /// the blocks into canonical form.
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n {
                    return Err(Error::Invalid(format!("index {i} out of ground 0..{n}")));
                }
                if seen[i] {
                    return Err(Error::Invalid(format!("index {i} repeated")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::Invalid("blocks do not cover the ground set".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// The all-singletons partition, the bottom of the refinement lattice.
    pub fn singletons(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// The one-block partition (top of the lattice). For n = 0 this is the
    /// empty partition.
    pub fn one_block(n: usize) -> Self {
        SetPartition {
            n,
            blocks: if n == 0 {
                vec![]
            } else {
                vec![(0..n).collect()]
            },
        }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of a ground element.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&i).is_ok())
            .expect("index within ground")
    }

    /// Labels each ground element with its block index; O(n) lookups after.
    pub fn block_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (bi, block) in self.blocks.iter().enumerate() {
            for &i in block {
                labels[i] = bi;
            }
        }
        labels
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.blocks
            .iter()
            .any(|b| b.binary_search(&i).is_ok() && b.binary_search(&j).is_ok())
    }

    /// Reads a partition off a union-find structure on the same ground set.
    pub(crate) fn from_union_find(n: usize, uf: &mut UnionFind) -> Self {
        let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            by_root.entry(uf.find(i)).or_default().push(i);
        }
        // roots are minimal elements of their classes, so order is canonical
        SetPartition {
            n,
            blocks: by_root.into_values().collect(),
        }
    }

    /// Finest common coarsening: connected components of the union of the two
    /// block graphs.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.n != other.n {
            return Err(Error::SizeMismatch(self.n, other.n));
        }
        let mut uf = UnionFind::new(self.n);
        for block in self.blocks.iter().chain(other.blocks.iter()) {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        Ok(SetPartition::from_union_find(self.n, &mut uf))
    }

    /// Restriction to an ascending subset of the ground indices, relabeled to
    /// 0..|keep|. Two kept indices share a block iff they did before; blocks
    /// that lose all their elements vanish.
    pub fn restrict(&self, keep: &[usize]) -> SetPartition {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(keep.iter().all(|&i| i < self.n));
        let mut new_index = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            new_index[old] = new;
        }
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .filter_map(|b| {
                let nb: Vec<usize> = b
                    .iter()
                    .filter_map(|&i| (new_index[i] != usize::MAX).then(|| new_index[i]))
                    .collect();
                (!nb.is_empty()).then_some(nb)
            })
            .collect();
        let mut blocks = blocks;
        blocks.sort_unstable_by_key(|b| b[0]);
        SetPartition {
            n: keep.len(),
            blocks,
        }
    }

    /// Möbius function of the lattice interval from all-singletons up to this
    /// partition: the product over blocks of (−1)^(|B|−1)·(|B|−1)!.
    pub fn moebius(&self) -> i64 {
        self.blocks
            .iter()
            .map(|b| {
                let m = b.len() as i64 - 1;
                let sign = if m % 2 == 0 { 1 } else { -1 };
                sign * factorial_i64(m as u64)
            })
            .product()
    }
}

fn factorial_i64(n: u64) -> i64 {
    assert!(n <= 20, "factorial overflow at {n}");
    (1..=n as i64).product::<i64>().max(1)
}

/// Bell number B(n), via the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last.checked_add(v).expect("Bell overflow"));
        }
        row = next;
    }
    row[0]
}

/// Streams every set partition of {0,…,n−1} exactly once, as restricted
/// growth strings in lexicographic order (all-singletons last for n ≥ 2,
/// one-block first). Count is Bell(n).
pub fn enumerate_partitions(n: usize) -> Result<impl Iterator<Item = SetPartition>> {
    if n > config::limits().partition_enumeration {
        return Err(Error::LimitExceeded(format!(
            "partition enumeration of ground {n} exceeds limit {}",
            config::limits().partition_enumeration
        )));
    }
    Ok(RgsIter::new(n))
}

struct RgsIter {
    n: usize,
    rgs: Vec<usize>,
    maxes: Vec<usize>, // maxes[i] = max(rgs[0..i])
    done: bool,
}

impl RgsIter {
    fn new(n: usize) -> Self {
        RgsIter {
            n,
            rgs: vec![0; n],
            maxes: vec![0; n + 1],
            done: false,
        }
    }
}

impl Iterator for RgsIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let mut blocks: Vec<Vec<usize>> = vec![];
        for (i, &label) in self.rgs.iter().enumerate() {
            if label == blocks.len() {
                blocks.push(vec![]);
            }
            blocks[label].push(i);
        }
        let out = SetPartition {
            n: self.n,
            blocks,
        };
        // advance: rightmost position that can still grow
        let mut i = self.n;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if i == 0 {
                // rgs[0] is pinned to 0
                continue;
            }
            if self.rgs[i] <= self.maxes[i] {
                self.rgs[i] += 1;
                self.maxes[i + 1] = self.maxes[i].max(self.rgs[i]);
                for j in i + 1..self.n {
                    self.rgs[j] = 0;
                    self.maxes[j + 1] = self.maxes[j];
                }
                break;
            }
        }
        Some(out)
    }
}

// JSON shape {"n": …, "blocks": [[…],…]}; deserialization revalidates.
#[derive(Deserialize)]
struct SetPartitionJson {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SetPartitionJson::deserialize(d)?;
        SetPartition::new(raw.n, raw.blocks).map_err(serde::de::Error::custom)
    }
}
