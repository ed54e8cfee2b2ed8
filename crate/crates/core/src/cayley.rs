//! Abstract finite groups as multiplication tables.
//!
//! Orders are capped at [`MAX_ORDER`] = 128 so that element subsets fit in a
//! single `u128` ([`ElementSet`]). A [`Subgroup`] is a validated element set
//! and is only meaningful together with the group it was taken from.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transgroup::TransGroup;

pub const MAX_ORDER: usize = 128;
pub const DEFAULT_SUBGROUP_CAP: usize = 48;
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 24;
pub const ISOMORPHISM_CAP: usize = 48;

/// A set of element indices of one group, as a bitset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(u128);

impl ElementSet {
    pub const fn empty() -> Self {
        ElementSet(0)
    }

    pub fn singleton(x: usize) -> Self {
        ElementSet(1u128 << x)
    }

    /// `{0, …, order−1}`.
    pub fn full(order: usize) -> Self {
        if order == MAX_ORDER {
            ElementSet(u128::MAX)
        } else {
            ElementSet((1u128 << order) - 1)
        }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < MAX_ORDER && self.0 >> x & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        let fresh = !self.contains(x);
        self.0 |= 1u128 << x;
        fresh
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(x)
            }
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = ElementSet::empty();
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subgroup of some [`CayleyGroup`], as its sorted member set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: ElementSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn elements(&self) -> ElementSet {
        self.members
    }

    pub fn members(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

/// `{a·b : a ∈ U, b ∈ V}` and whether it is a subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductSet {
    pub elements: ElementSet,
    pub is_subgroup: bool,
}

/// `G/N` with the projection `G → G/N`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: CayleyGroup,
    /// `projection[g]` is the coset index of `g`.
    pub projection: Vec<usize>,
}

impl Quotient {
    /// Image of a subgroup of `G` in `G/N`.
    pub fn project(&self, h: &Subgroup) -> Subgroup {
        let members: ElementSet = h.elements().iter().map(|x| self.projection[x]).collect();
        Subgroup { members }
    }
}

/// JSON dump of a group: `{ "order", "labels", "table" }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDump {
    pub order: usize,
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

/// A finite group given by its multiplication table:
/// `table[i][j]` is the index of `g_i · g_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGroup {
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    identity: usize,
    inverses: Vec<usize>,
}

impl CayleyGroup {
    /// Validate a table (Latin square, identity, inverses, associativity).
    pub fn new(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::cap("group order", MAX_ORDER));
        }
        if labels.len() != order {
            return Err(Error::InvalidTable(format!(
                "{} labels for order {order}",
                labels.len()
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::InvalidTable(format!("entry {bad} in row {i} out of range")));
            }
            if row.iter().copied().collect::<ElementSet>().len() != order {
                return Err(Error::InvalidTable(format!("row {i} is not a permutation")));
            }
        }
        for j in 0..order {
            if (0..order).map(|i| table[i][j]).collect::<ElementSet>().len() != order {
                return Err(Error::InvalidTable(format!("column {j} is not a permutation")));
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        for a in 0..order {
            for b in 0..order {
                let ab = table[a][b];
                for c in 0..order {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!("associativity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        // Latin rows guarantee exactly one right inverse, which is two-sided
        // once associativity holds.
        let inverses = (0..order)
            .map(|a| (0..order).find(|&b| table[a][b] == identity).expect("Latin row"))
            .collect();
        Ok(CayleyGroup {
            table,
            labels,
            identity,
            inverses,
        })
    }

    /// Build from a multiplication closure on `0..order`.
    pub fn from_fn(labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let order = labels.len();
        let table = (0..order).map(|a| (0..order).map(|b| mul(a, b)).collect()).collect();
        Self::new(table, labels)
    }

    /// The abstract table of a transformation group; labels are the maps.
    pub fn from_transgroup(g: &TransGroup) -> Result<Self> {
        let order = g.order();
        if order > MAX_ORDER {
            return Err(Error::cap("group order", MAX_ORDER));
        }
        let labels = g.elements().iter().map(|f| f.to_string()).collect();
        Self::from_fn(labels, |i, j| g.product(i, j))
    }

    pub fn from_dump(dump: GroupDump) -> Result<Self> {
        if dump.order != dump.table.len() {
            return Err(Error::InvalidTable(format!(
                "declared order {} but table has {} rows",
                dump.order,
                dump.table.len()
            )));
        }
        Self::new(dump.table, dump.labels)
    }

    pub fn dump(&self) -> GroupDump {
        GroupDump {
            order: self.order(),
            labels: self.labels.clone(),
            table: self.table.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn power(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `x·a·x⁻¹`.
    pub fn conjugate(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: ElementSet::full(self.order()),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup {
            members: ElementSet::singleton(self.identity),
        }
    }

    /// Validate an explicit member list as a subgroup.
    pub fn subgroup(&self, members: &[usize]) -> Result<Subgroup> {
        if let Some(&bad) = members.iter().find(|&&x| x >= self.order()) {
            return Err(Error::Precondition(format!(
                "element {bad} outside group of order {}",
                self.order()
            )));
        }
        let set: ElementSet = members.iter().copied().collect();
        if !self.is_subgroup_set(set) {
            return Err(Error::Precondition(format!("{set:?} is not a subgroup")));
        }
        Ok(Subgroup { members: set })
    }

    /// Non-empty and closed under the product (finite, so inverses follow).
    pub fn is_subgroup_set(&self, set: ElementSet) -> bool {
        !set.is_empty() && set.iter().all(|a| set.iter().all(|b| set.contains(self.mul(a, b))))
    }

    fn closure(&self, seeds: ElementSet) -> ElementSet {
        let gens = seeds.to_vec();
        let mut members = ElementSet::singleton(self.identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        members
    }

    /// Smallest subgroup containing `seeds`.
    pub fn subgroup_generated(&self, seeds: &[usize]) -> Subgroup {
        Subgroup {
            members: self.closure(seeds.iter().copied().collect()),
        }
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup {
            members: self.closure(a.members.union(b.members)),
        }
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup {
            members: a.members.intersection(b.members),
        }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.normalizes(self.whole().members, h.members)
    }

    fn normalizes(&self, by: ElementSet, h: ElementSet) -> bool {
        by.iter().all(|x| h.iter().all(|a| h.contains(self.conjugate(x, a))))
    }

    /// Smallest normal subgroup of `G` containing `h`.
    pub fn normal_closure(&self, h: &Subgroup) -> Subgroup {
        self.normal_closure_within(&self.whole(), h)
    }

    /// Smallest subgroup of `k` that is normal in `k` and contains `h`
    /// (`h` must lie in `k`).
    pub fn normal_closure_within(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let conjugates: ElementSet = k
            .members
            .iter()
            .flat_map(|x| h.members.iter().map(move |a| (x, a)))
            .map(|(x, a)| self.conjugate(x, a))
            .collect();
        Subgroup {
            members: self.closure(conjugates),
        }
    }

    /// Length of the descending normal-closure series from `G` down to `h`,
    /// or `None` if the series stalls above `h`. Depth 0 means `h = G`.
    pub fn subnormal_depth(&self, h: &Subgroup) -> Option<usize> {
        let mut current = self.whole();
        let mut depth = 0;
        loop {
            if current == *h {
                return Some(depth);
            }
            let next = self.normal_closure_within(&current, h);
            if next == current {
                return None;
            }
            current = next;
            depth += 1;
        }
    }

    pub fn is_subnormal(&self, h: &Subgroup) -> bool {
        self.subnormal_depth(h).is_some()
    }

    /// `G/N`, with the table induced by coset representatives and checked for
    /// independence of the representative choice.
    pub fn quotient_group(&self, n: &Subgroup) -> Result<Quotient> {
        if !self.is_normal(n) {
            return Err(Error::Precondition(format!("{n:?} is not normal")));
        }
        let order = self.order();
        let mut projection = vec![usize::MAX; order];
        let mut reps = Vec::new();
        for g in 0..order {
            if projection[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(g);
            for m in n.members.iter() {
                projection[self.mul(g, m)] = c;
            }
        }
        let q = reps.len();
        let mut table = vec![vec![0; q]; q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i][j] = projection[self.mul(a, b)];
            }
        }
        for a in 0..order {
            for b in 0..order {
                if projection[self.mul(a, b)] != table[projection[a]][projection[b]] {
                    return Err(Error::Alarm(format!(
                        "coset product depends on representatives at ({a},{b})"
                    )));
                }
            }
        }
        let labels = reps.iter().map(|&r| format!("{}N", self.labels[r])).collect();
        Ok(Quotient {
            group: CayleyGroup::new(table, labels)?,
            projection,
        })
    }

    pub fn product_set(&self, u: &Subgroup, v: &Subgroup) -> ProductSet {
        let elements: ElementSet = u
            .members
            .iter()
            .flat_map(|a| v.members.iter().map(move |b| (a, b)))
            .map(|(a, b)| self.mul(a, b))
            .collect();
        ProductSet {
            elements,
            is_subgroup: self.is_subgroup_set(elements),
        }
    }

    /// Subgroup generated by all commutators `a⁻¹b⁻¹ab`.
    pub fn derived_subgroup(&self) -> Subgroup {
        let order = self.order();
        let commutators: ElementSet = (0..order)
            .flat_map(|a| (0..order).map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b)))
            .collect();
        Subgroup {
            members: self.closure(commutators),
        }
    }

    pub fn cyclic_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: Vec<Subgroup> = (0..self.order()).map(|a| self.subgroup_generated(&[a])).collect();
        seen.sort();
        seen.dedup();
        seen
    }

    /// Every subgroup, as joins of cyclic subgroups. Sorted by order, then by
    /// member set.
    pub fn all_subgroups(&self, cap: usize) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::cap("group order for subgroup enumeration", cap));
        }
        let cyclic = self.cyclic_subgroups();
        let mut found: HashSet<Subgroup> = cyclic.iter().copied().collect();
        let mut frontier: Vec<Subgroup> = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for c in &cyclic {
                    if c.is_subgroup_of(s) {
                        continue;
                    }
                    let j = self.join(s, c);
                    if found.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by_key(|s| (s.order(), s.members));
        Ok(all)
    }

    /// Every normal subgroup, as joins of normal closures of single elements.
    /// No subgroup enumeration is needed, so this works up to [`MAX_ORDER`].
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let mut atoms: Vec<Subgroup> = (0..self.order())
            .map(|a| self.normal_closure(&self.subgroup_generated(&[a])))
            .collect();
        atoms.sort();
        atoms.dedup();
        let mut found: HashSet<Subgroup> = atoms.iter().copied().collect();
        let mut frontier = atoms.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for a in &atoms {
                    if a.is_subgroup_of(s) {
                        continue;
                    }
                    let j = self.join(s, a);
                    if found.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by_key(|s| (s.order(), s.members));
        all
    }

    /// The subgroup's own multiplication table, plus the embedding
    /// `embedding[i]` = index in `self` of the subgroup's `i`-th element.
    pub fn induced(&self, h: &Subgroup) -> (CayleyGroup, Vec<usize>) {
        let embedding = h.members();
        let mut local = vec![usize::MAX; self.order()];
        for (i, &x) in embedding.iter().enumerate() {
            local[x] = i;
        }
        let labels = embedding.iter().map(|&x| self.labels[x].clone()).collect();
        let table = embedding
            .iter()
            .map(|&a| embedding.iter().map(|&b| local[self.mul(a, b)]).collect())
            .collect();
        let sub = CayleyGroup::new(table, labels).expect("a subgroup's induced table is a group table");
        (sub, embedding)
    }

    /// Greedy generating set, larger element orders first.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (0..self.order()).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = ElementSet::singleton(self.identity);
        for a in candidates {
            if span.len() == self.order() {
                break;
            }
            if !span.contains(a) {
                gens.push(a);
                span = self.closure(gens.iter().copied().collect());
            }
        }
        gens
    }

    /// Every automorphism as an index permutation `φ` with `φ[a·b] = φ[a]·φ[b]`.
    pub fn automorphism_group(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if self.order() > cap {
            return Err(Error::cap("group order for automorphism search", cap));
        }
        let mut out = Vec::new();
        self.homomorphic_bijections(self, |phi| {
            out.push(phi.to_vec());
            true
        });
        out.sort();
        Ok(out)
    }

    /// Every automorphism maps `h` onto itself.
    pub fn is_characteristic(&self, h: &Subgroup, cap: usize) -> Result<bool> {
        Ok(self
            .automorphism_group(cap)?
            .iter()
            .all(|phi| h.members.iter().all(|x| h.contains(phi[x]))))
    }

    /// An isomorphism `self → other` as an index map, if one exists.
    pub fn find_isomorphism(&self, other: &CayleyGroup) -> Result<Option<Vec<usize>>> {
        if self.order() > ISOMORPHISM_CAP || other.order() > ISOMORPHISM_CAP {
            return Err(Error::cap("group order for isomorphism search", ISOMORPHISM_CAP));
        }
        if self.order() != other.order() || self.order_census() != other.order_census() {
            return Ok(None);
        }
        let mut found = None;
        self.homomorphic_bijections(other, |phi| {
            found = Some(phi.to_vec());
            false
        });
        Ok(found)
    }

    pub fn is_isomorphic(&self, other: &CayleyGroup) -> Result<bool> {
        Ok(self.find_isomorphism(other)?.is_some())
    }

    /// Sorted element orders.
    pub fn order_census(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        orders.sort_unstable();
        orders
    }

    /// Enumerate bijective homomorphisms `self → target` by backtracking over
    /// images of a generating set, pruned by element order. `visit` returns
    /// whether to keep searching.
    fn homomorphic_bijections(&self, target: &CayleyGroup, mut visit: impl FnMut(&[usize]) -> bool) {
        if self.order() != target.order() {
            return;
        }
        let gens = self.generating_set();
        // Spanning tree: every element reached as parent·gen.
        let mut parent = vec![None; self.order()];
        let mut bfs = vec![self.identity];
        let mut reached = ElementSet::singleton(self.identity);
        let mut i = 0;
        while i < bfs.len() {
            let x = bfs[i];
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if reached.insert(y) {
                    parent[y] = Some((x, k));
                    bfs.push(y);
                }
            }
            i += 1;
        }
        let target_orders: Vec<usize> = (0..target.order()).map(|a| target.element_order(a)).collect();
        let candidates: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let o = self.element_order(g);
                (0..target.order()).filter(|&t| target_orders[t] == o).collect()
            })
            .collect();

        let mut images = vec![0; gens.len()];
        let mut phi = vec![0; self.order()];
        let mut stack = vec![0usize; gens.len()];
        let mut depth = 0;
        if gens.is_empty() {
            phi[self.identity] = target.identity;
            visit(&phi);
            return;
        }
        loop {
            if stack[depth] < candidates[depth].len() {
                images[depth] = candidates[depth][stack[depth]];
                stack[depth] += 1;
                if depth + 1 < gens.len() {
                    depth += 1;
                    stack[depth] = 0;
                    continue;
                }
                if self.extend(target, &gens, &images, &bfs, &parent, &mut phi) && !visit(&phi) {
                    return;
                }
            } else {
                if depth == 0 {
                    return;
                }
                depth -= 1;
            }
        }
    }

    /// Extend generator images along the spanning tree and test that the
    /// result is a bijective homomorphism. Checking `φ(x·g) = φ(x)·φ(g)` for
    /// generators `g` suffices, since every element is a word in them.
    fn extend(
        &self,
        target: &CayleyGroup,
        gens: &[usize],
        images: &[usize],
        bfs: &[usize],
        parent: &[Option<(usize, usize)>],
        phi: &mut [usize],
    ) -> bool {
        phi[self.identity] = target.identity;
        let mut hit = ElementSet::singleton(target.identity);
        for &y in &bfs[1..] {
            let (x, k) = parent[y].expect("non-identity elements have a parent");
            phi[y] = target.mul(phi[x], images[k]);
            if !hit.insert(phi[y]) {
                return false;
            }
        }
        (0..self.order()).all(|x| {
            gens.iter()
                .zip(images)
                .all(|(&g, &img)| phi[self.mul(x, g)] == target.mul(phi[x], img))
        })
    }
}
