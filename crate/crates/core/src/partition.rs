//! Equivalence relations on `{0,…,n−1}` in canonical block-label form.

use std::fmt;

use crate::error::{Error, Result};

/// Largest carrier size supported by the inline storage of
/// [`Transformation`](crate::Transformation) and [`Partition`].
pub const MAX_POINTS: usize = 16;

/// An equivalence relation stored as first-occurrence block labels:
/// `block_of[0] = 0` and each new label is the smallest unused integer.
/// Two partitions are equal iff their label sequences are equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: u8,
    block_of: [u8; MAX_POINTS],
    block_count: u8,
}

impl Partition {
    /// Canonicalize an arbitrary labelling: `x` and `y` share a block iff
    /// `labels[x] == labels[y]`.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Result<Self> {
        let n = labels.len();
        check_size(n)?;
        let mut block_of = [0u8; MAX_POINTS];
        let mut seen: Vec<&T> = Vec::with_capacity(n);
        for (x, label) in labels.iter().enumerate() {
            let b = match seen.iter().position(|s| *s == label) {
                Some(b) => b,
                None => {
                    seen.push(label);
                    seen.len() - 1
                }
            };
            block_of[x] = b as u8;
        }
        Ok(Partition {
            n: n as u8,
            block_of,
            block_count: seen.len() as u8,
        })
    }

    /// Build from explicit blocks, which must cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        check_size(n)?;
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::Parse(format!("point {x} outside 0..{n}")));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::Parse(format!("point {x} in two blocks")));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Parse(format!("point {x} in no block")));
        }
        Self::from_labels(&labels)
    }

    /// The equality relation.
    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    /// The single-block relation.
    pub fn coarsest(n: usize) -> Result<Self> {
        Self::from_labels(&vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn block_count(&self) -> usize {
        self.block_count as usize
    }

    /// Block index of point `x`.
    pub fn block(&self, x: usize) -> usize {
        debug_assert!(x < self.n());
        self.block_of[x] as usize
    }

    /// The canonical label sequence.
    pub fn labels(&self) -> &[u8] {
        &self.block_of[..self.n()]
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count == self.n
    }

    /// Blocks in label order, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for x in 0..self.n() {
            blocks[self.block(x)].push(x);
        }
        blocks
    }

    /// Smallest point of each block; block `b`'s representative is `reps[b]`.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.block_count()];
        for x in (0..self.n()).rev() {
            reps[self.block(x)] = x;
        }
        reps
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && (0..self.n())
                .all(|x| (0..x).all(|y| self.block(x) != self.block(y) || coarser.block(x) == coarser.block(y)))
    }

    /// Image of the relation under the point relabelling `x ↦ perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::DomainMismatch {
                left: self.n(),
                right: perm.len(),
            });
        }
        let mut labels = vec![0usize; self.n()];
        for x in 0..self.n() {
            labels[perm[x]] = self.block(x);
        }
        Self::from_labels(&labels)
    }

    /// Every partition of `{0,…,n−1}`, in lexicographic order of
    /// restricted growth strings.
    pub fn enumerate(n: usize) -> Result<RestrictedGrowth> {
        check_size(n)?;
        Ok(RestrictedGrowth {
            n,
            labels: vec![0; n],
            done: n == 0,
        })
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidTransformation("carrier must be non-empty".into()));
    }
    if n > MAX_POINTS {
        return Err(Error::cap("carrier size", MAX_POINTS));
    }
    Ok(())
}

/// Iterator over restricted growth strings `a` with `a[0] = 0` and
/// `a[i] ≤ 1 + max(a[..i])`.
pub struct RestrictedGrowth {
    n: usize,
    labels: Vec<usize>,
    done: bool,
}

impl Iterator for RestrictedGrowth {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let current = Partition::from_labels(&self.labels).expect("size checked at construction");
        // advance: bump the rightmost position that can still grow
        let mut advanced = false;
        for i in (1..self.n).rev() {
            let prefix_max = self.labels[..i].iter().copied().max().unwrap_or(0);
            if self.labels[i] <= prefix_max {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
                advanced = true;
                break;
            }
        }
        self.done = !advanced;
        Some(current)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}
