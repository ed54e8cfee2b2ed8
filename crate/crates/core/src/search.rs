//! Exhaustive checks over the full transformation monoid `T_n`: idempotents,
//! the maximal group at each idempotent, the largest NG-group, and subset
//! scans that rely only on the shared-kernel property of transformation groups.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::transformation::Transformation;
use crate::transgroup::{check_group, GroupReport, TransGroup, DEFAULT_CLOSURE_CAP};

/// `n^n` brute force stays below a million maps up to here.
pub const IDEMPOTENT_SCAN_CAP: usize = 7;
pub const FULL_SCAN_CAP: usize = 3;
pub const BOUNDED_SCAN_CAP: usize = 4;

/// All `f ∈ T_n` with `f² = f`, in lexicographic order of image sequences.
pub fn enumerate_idempotents(n: usize) -> Result<Vec<Transformation>> {
    if n > IDEMPOTENT_SCAN_CAP {
        return Err(Error::cap("idempotent scan carrier size", IDEMPOTENT_SCAN_CAP));
    }
    Ok(Transformation::all(n)?.filter(Transformation::is_idempotent).collect())
}

/// `Σ_{k=1..n} C(n,k)·k^{n−k}`: choose the image, then send every other point
/// into it.
pub fn idempotent_count_formula(n: usize) -> u64 {
    let n = n as u64;
    (1..=n).map(|k| binomial(n, k) * k.pow((n - k) as u32)).sum()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The maximal group with identity `e`: every map sharing `e`'s kernel and
/// image. Verified as a group with identity `e`, order `rank(e)!`, and `ρ`
/// onto the full symmetric group on the blocks.
pub fn h_class_group(e: &Transformation) -> Result<TransGroup> {
    if !e.is_idempotent() {
        return Err(Error::Precondition(format!("{e} is not idempotent")));
    }
    let kernel = e.kernel_partition();
    let image = e.image();
    let rank = image.len();
    let expected = crate::factorial(rank);
    if expected > DEFAULT_CLOSURE_CAP {
        return Err(Error::cap("H-class order", DEFAULT_CLOSURE_CAP));
    }
    // maps with kernel `kernel` and image `image` are the bijections blocks → image
    let members = image
        .iter()
        .copied()
        .permutations(rank)
        .map(|targets| {
            let images: Vec<usize> = (0..e.n()).map(|x| targets[kernel.block(x)]).collect();
            Transformation::new(&images)
        })
        .collect::<Result<Vec<_>>>()?;
    let group = check_group(members)?;
    if group.identity() != e {
        return Err(Error::Alarm(format!(
            "H-class of {e} has identity {}",
            group.identity()
        )));
    }
    if group.order() != expected {
        return Err(Error::Alarm(format!(
            "H-class of {e} has order {} not {expected}",
            group.order()
        )));
    }
    let rho = group.rho()?;
    if !rho.is_full_symmetric() {
        return Err(Error::Alarm(format!("rho of the H-class of {e} is not Sym({rank})")));
    }
    Ok(group)
}

#[derive(Debug, Clone)]
pub struct MaxNg {
    pub n: usize,
    pub max_order: usize,
    /// H-class of the lexicographically first idempotent reaching the maximum.
    pub witness: TransGroup,
    pub idempotents_examined: usize,
    /// `(n−1)!`.
    pub bound: usize,
}

impl MaxNg {
    pub fn bound_attained(&self) -> bool {
        self.max_order == self.bound && self.witness.is_ng_group()
    }
}

/// Largest H-class group over all non-bijective idempotents of `T_n`.
pub fn max_ng_order(n: usize) -> Result<MaxNg> {
    if n < 2 {
        return Err(Error::Precondition(format!("NG-groups need n >= 2, got {n}")));
    }
    let idempotents: Vec<Transformation> = enumerate_idempotents(n)?
        .into_iter()
        .filter(|e| !e.is_bijective())
        .collect();
    let orders = idempotents
        .par_iter()
        .map(|e| h_class_group(e).map(|g| g.order()))
        .collect::<Result<Vec<_>>>()?;
    let max_order = *orders.iter().max().expect("n >= 2 has a non-bijective idempotent");
    let first = orders.iter().position(|&o| o == max_order).expect("max is attained");
    let witness = h_class_group(&idempotents[first])?;
    Ok(MaxNg {
        n,
        max_order,
        witness,
        idempotents_examined: idempotents.len(),
        bound: crate::factorial(n - 1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Every subset of every pool.
    Full,
    /// Subsets of size at most `(n−1)! + 1`, plus the H-class containment route.
    Bounded,
}

#[derive(Debug, Clone)]
pub struct PoolCensus {
    pub partition: Partition,
    pub pool_size: usize,
    pub subsets_checked: u64,
    pub groups: Vec<TransGroup>,
    /// Largest group formed by the pool's member-capable maps sharing one
    /// image (bounded mode only).
    pub hclass_max_order: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub n: usize,
    pub mode: ScanMode,
    pub pools: Vec<PoolCensus>,
    pub max_ng_order: usize,
    pub bound: usize,
    pub notes: Vec<String>,
}

impl Census {
    pub fn groups(&self) -> impl Iterator<Item = &TransGroup> {
        self.pools.iter().flat_map(|p| p.groups.iter())
    }

    pub fn group_count(&self) -> usize {
        self.pools.iter().map(|p| p.groups.len()).sum()
    }

    /// Largest order reached by the H-class route, when it ran.
    pub fn hclass_route_max(&self) -> Option<usize> {
        self.pools.iter().filter_map(|p| p.hclass_max_order).max()
    }

    pub fn bound_respected(&self) -> bool {
        self.max_ng_order <= self.bound && self.hclass_route_max().is_none_or(|m| m <= self.bound)
    }

    pub fn report(&self, offset: usize) -> CensusReport {
        CensusReport {
            n: self.n,
            mode: self.mode,
            pools: self
                .pools
                .iter()
                .map(|p| PoolReport {
                    partition: shift_blocks(&p.partition, offset),
                    pool_size: p.pool_size,
                    subsets_checked: p.subsets_checked,
                    group_count: p.groups.len(),
                    groups: p.groups.iter().map(|g| GroupReport::new(g, offset)).collect(),
                    hclass_max_order: p.hclass_max_order,
                })
                .collect(),
            max_ng_order: self.max_ng_order,
            bound: self.bound,
            notes: self.notes.clone(),
        }
    }
}

fn shift_blocks(p: &Partition, offset: usize) -> Vec<Vec<usize>> {
    p.blocks()
        .into_iter()
        .map(|b| b.into_iter().map(|x| x + offset).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PoolReport {
    pub partition: Vec<Vec<usize>>,
    pub pool_size: usize,
    pub subsets_checked: u64,
    pub group_count: usize,
    pub groups: Vec<GroupReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hclass_max_order: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub mode: ScanMode,
    pub pools: Vec<PoolReport>,
    pub max_ng_order: usize,
    pub bound: usize,
    pub notes: Vec<String>,
}

/// Test subsets of each kernel pool for the group axioms.
///
/// Pools hold every map whose kernel is exactly one non-discrete partition;
/// a transformation group cannot straddle pools because all of its members
/// share one kernel.
pub fn exhaustive_ng_scan(n: usize, mode: ScanMode) -> Result<Census> {
    let cap = match mode {
        ScanMode::Full => FULL_SCAN_CAP,
        ScanMode::Bounded => BOUNDED_SCAN_CAP,
    };
    if n > cap {
        return Err(Error::cap(format!("{mode:?} scan carrier size"), cap));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("scan needs n >= 2, got {n}")));
    }
    let bound = crate::factorial(n - 1);
    let all: Vec<Transformation> = Transformation::all(n)?.collect();
    let partitions: Vec<Partition> = Partition::enumerate(n)?.filter(|p| !p.is_discrete()).collect();

    let pools = partitions
        .par_iter()
        .map(|partition| {
            let pool: Vec<Transformation> = all
                .iter()
                .copied()
                .filter(|f| f.kernel_partition() == *partition)
                .collect();
            match mode {
                ScanMode::Full => scan_pool_full(*partition, pool),
                ScanMode::Bounded => scan_pool_bounded(*partition, pool, bound + 1),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let max_ng_order = pools
        .iter()
        .flat_map(|p| p.groups.iter())
        .filter(|g| g.is_ng_group())
        .map(TransGroup::order)
        .max()
        .unwrap_or(0);
    if let Some(g) = pools
        .iter()
        .flat_map(|p| p.groups.iter())
        .find(|g| g.kernel().block_count() > n - 1)
    {
        return Err(Error::Alarm(format!(
            "NG-group with identity {} has a discrete kernel",
            g.identity()
        )));
    }

    let mut notes = vec![format!(
        "every NG-group's kernel has at most n-1 = {} blocks; the bound (n-1)! = {bound} is attained, so the block count is not strictly below n-1",
        n - 1
    )];
    if mode == ScanMode::Bounded {
        notes.push(format!(
            "bounded mode tests subsets of size <= {}; the H-class route bounds every group inside each pool",
            bound + 1
        ));
    }
    Ok(Census {
        n,
        mode,
        pools,
        max_ng_order,
        bound,
        notes,
    })
}

fn scan_pool_full(partition: Partition, pool: Vec<Transformation>) -> Result<PoolCensus> {
    if pool.len() > 20 {
        return Err(Error::cap("full scan pool size", 20));
    }
    let mut groups = Vec::new();
    for mask in 0u32..(1 << pool.len()) {
        let subset = (0..pool.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pool[i]);
        if let Ok(g) = check_group(subset) {
            groups.push(g);
        }
    }
    Ok(PoolCensus {
        partition,
        pool_size: pool.len(),
        subsets_checked: 1u64 << pool.len(),
        groups,
        hclass_max_order: None,
    })
}

fn scan_pool_bounded(partition: Partition, pool: Vec<Transformation>, max_size: usize) -> Result<PoolCensus> {
    if pool.len() > 64 {
        return Err(Error::cap("bounded scan pool size", 64));
    }
    // product table inside the pool; None when the product leaves it
    let table: Vec<Vec<Option<usize>>> = pool
        .iter()
        .map(|f| {
            pool.iter()
                .map(|g| pool.iter().position(|h| *h == f.after(g)))
                .collect()
        })
        .collect();

    let mut subsets_checked = 0u64;
    let mut groups = Vec::new();
    for size in 0..=max_size.min(pool.len()) {
        for combo in (0..pool.len()).combinations(size) {
            subsets_checked += 1;
            let mask: u64 = combo.iter().fold(0, |m, &i| m | 1 << i);
            // the first group axiom, evaluated on the precomputed table
            let closed = combo
                .iter()
                .all(|&a| combo.iter().all(|&b| table[a][b].is_some_and(|k| mask >> k & 1 == 1)));
            if !closed {
                continue;
            }
            if let Ok(g) = check_group(combo.iter().map(|&i| pool[i])) {
                groups.push(g);
            }
        }
    }

    // H-class route: member-capable maps of the pool, grouped by image, must
    // be exactly the H-class of the pool's idempotent with that image.
    let mut hclass_max = 0;
    let by_image = pool
        .iter()
        .copied()
        .filter(Transformation::can_be_member)
        .into_group_map_by(Transformation::image);
    for (image, class) in by_image.into_iter().sorted() {
        let merged: Vec<Transformation> = class.into_iter().sorted().collect();
        let e = merged.iter().find(|f| f.is_idempotent()).ok_or_else(|| {
            Error::Alarm(format!(
                "pool {partition} has member-capable maps with image {image:?} but no idempotent"
            ))
        })?;
        let h = h_class_group(e)?;
        if h.elements() != merged.as_slice() {
            return Err(Error::Alarm(format!(
                "member-capable maps with image {image:?} in pool {partition} differ from the H-class of {e}"
            )));
        }
        hclass_max = hclass_max.max(h.order());
    }

    Ok(PoolCensus {
        partition,
        pool_size: pool.len(),
        subsets_checked,
        groups,
        hclass_max_order: Some(hclass_max),
    })
}
