//! Sets of transformations closed under composition: group detection, the
//! shared kernel and image of a group, and the isomorphism `ρ: f ↦ f̂` onto a
//! permutation group on the quotient set.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::transformation::{BlockMap, Transformation};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Groups up to this order get a full table comparison in [`TransGroup::rho`];
/// larger ones are checked against a fixed stride of right factors.
pub const RHO_FULL_CHECK_LIMIT: usize = 720;

/// Why a set of transformations is not a group. The first failed axiom wins,
/// and each variant names a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupRejection {
    #[error("empty set")]
    Empty,
    #[error("mixed carrier sizes {left} and {right}")]
    MixedCarrier { left: usize, right: usize },
    #[error("not closed: {left} ∘ {right} = {product} is missing")]
    NotClosed {
        left: Transformation,
        right: Transformation,
        product: Transformation,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("{element} has no two-sided inverse")]
    NoInverse { element: Transformation },
    /// Impossible for a genuine group; an internal consistency alarm.
    #[error("{element} does not share the identity's kernel partition")]
    MixedKernel { element: Transformation },
    /// Impossible for a genuine group; an internal consistency alarm.
    #[error("{element} does not share the identity's image")]
    MixedImage { element: Transformation },
}

/// Smallest composition-closed superset of `gens`, by worklist saturation.
///
/// Every element of the generated semigroup is a word in the generators, so
/// closing under right multiplication by generators is enough.
pub fn generate_closure(gens: &[Transformation], cap: usize) -> Result<BTreeSet<Transformation>> {
    if cap == 0 {
        return Err(Error::Precondition("closure cap must be at least 1".into()));
    }
    if let Some(first) = gens.first() {
        if let Some(bad) = gens.iter().find(|g| g.n() != first.n()) {
            return Err(Error::DomainMismatch {
                left: first.n(),
                right: bad.n(),
            });
        }
    }
    let mut seen: BTreeSet<Transformation> = gens.iter().copied().collect();
    if seen.len() > cap {
        return Err(Error::cap("closure size", cap));
    }
    let mut work: Vec<Transformation> = seen.iter().copied().collect();
    while let Some(s) = work.pop() {
        for g in gens {
            let p = s.after(g);
            if seen.insert(p) {
                if seen.len() > cap {
                    return Err(Error::cap("closure size", cap));
                }
                work.push(p);
            }
        }
    }
    Ok(seen)
}

/// A finite set of transformations verified to be a group under composition.
///
/// Elements are sorted by image sequence; `table[i * order + j]` is the index
/// of `elements[i] ∘ elements[j]`.
#[derive(Debug, Clone)]
pub struct TransGroup {
    n: usize,
    elements: Vec<Transformation>,
    identity_index: usize,
    inverses: Vec<usize>,
    table: Vec<usize>,
    kernel: Partition,
    image: Vec<usize>,
}

impl TransGroup {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn identity(&self) -> &Transformation {
        &self.elements[self.identity_index]
    }

    pub fn index_of(&self, f: &Transformation) -> Option<usize> {
        self.elements.binary_search(f).ok()
    }

    pub fn contains(&self, f: &Transformation) -> bool {
        self.index_of(f).is_some()
    }

    /// Index of `elements[i] ∘ elements[j]`.
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.order() + j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    /// The kernel partition shared by all members.
    pub fn kernel(&self) -> &Partition {
        &self.kernel
    }

    /// The image shared by all members.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// No member is bijective. All members share the identity's image, so it
    /// suffices that the identity has rank below `n`.
    pub fn is_ng_group(&self) -> bool {
        self.image.len() < self.n
    }

    /// Recompute kernel and image member by member and confirm they agree.
    pub fn common_kernel_image(&self) -> Result<(Partition, Vec<usize>)> {
        let e = self.identity();
        let kernel = e.kernel_partition();
        let image = e.image();
        for f in &self.elements {
            if f.kernel_partition() != kernel {
                return Err(Error::Alarm(format!(
                    "{f} has kernel {} but the identity {e} has kernel {kernel}",
                    f.kernel_partition()
                )));
            }
            if f.image() != image {
                return Err(Error::Alarm(format!(
                    "{f} has image {:?} but the identity {e} has image {image:?}",
                    f.image()
                )));
            }
        }
        Ok((kernel, image))
    }

    /// The induced permutation group `Ĝ` on the quotient set, with the
    /// homomorphism and bijectivity of `ρ` verified.
    pub fn rho(&self) -> Result<PermGroup> {
        let (kernel, _) = self.common_kernel_image()?;
        let m = kernel.block_count();
        let induced = self
            .elements
            .iter()
            .map(|f| {
                let map = f
                    .induced_map(&kernel)
                    .map_err(|e| Error::Alarm(format!("induced map of {f} on the common kernel: {e}")))?;
                if !map.is_bijective() {
                    return Err(Error::Alarm(format!("induced map of {f} is not bijective: {map:?}")));
                }
                Ok(map)
            })
            .collect::<Result<Vec<_>>>()?;

        let perms: Vec<BlockMap> = induced.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        if perms.len() != self.order() {
            return Err(Error::Alarm(format!(
                "rho is not injective: |G| = {}, |image| = {}",
                self.order(),
                perms.len()
            )));
        }
        if !induced[self.identity_index].is_identity() {
            return Err(Error::Alarm("rho(e) is not the identity block map".into()));
        }

        let order = self.order();
        let stride = if order <= RHO_FULL_CHECK_LIMIT {
            1
        } else {
            order / 64 + 1
        };
        for i in 0..order {
            for j in (0..order).step_by(stride) {
                if induced[self.product(i, j)] != induced[i].after(&induced[j]) {
                    return Err(Error::Alarm(format!(
                        "rho({} ∘ {}) differs from rho({}) ∘ rho({})",
                        self.elements[i], self.elements[j], self.elements[i], self.elements[j]
                    )));
                }
            }
        }

        let label_map = induced
            .iter()
            .map(|p| perms.binary_search(p).expect("perms built from induced"))
            .collect();
        Ok(PermGroup { m, perms, label_map })
    }

    pub fn report(&self, offset: usize) -> GroupReport {
        GroupReport::new(self, offset)
    }
}

/// Verify the group axioms one at a time, reporting the first failure with a
/// witness. On success the shared kernel and image are also confirmed.
pub fn check_group<I>(set: I) -> std::result::Result<TransGroup, GroupRejection>
where
    I: IntoIterator<Item = Transformation>,
{
    let elements: Vec<Transformation> = set.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let first = *elements.first().ok_or(GroupRejection::Empty)?;
    let n = first.n();
    if let Some(bad) = elements.iter().find(|f| f.n() != n) {
        return Err(GroupRejection::MixedCarrier {
            left: n,
            right: bad.n(),
        });
    }

    let order = elements.len();
    let index: HashMap<Transformation, usize> = elements.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut table = Vec::with_capacity(order * order);
    for f in &elements {
        for g in &elements {
            let p = f.after(g);
            match index.get(&p) {
                Some(&k) => table.push(k),
                None => {
                    return Err(GroupRejection::NotClosed {
                        left: *f,
                        right: *g,
                        product: p,
                    })
                }
            }
        }
    }
    let at = |i: usize, j: usize| table[i * order + j];

    let identity_index = (0..order)
        .find(|&e| (0..order).all(|j| at(e, j) == j && at(j, e) == j))
        .ok_or(GroupRejection::NoIdentity)?;

    let mut inverses = Vec::with_capacity(order);
    for i in 0..order {
        let inv = (0..order)
            .find(|&j| at(i, j) == identity_index && at(j, i) == identity_index)
            .ok_or(GroupRejection::NoInverse { element: elements[i] })?;
        inverses.push(inv);
    }

    let e = elements[identity_index];
    let kernel = e.kernel_partition();
    let image = e.image();
    for f in &elements {
        if f.kernel_partition() != kernel {
            return Err(GroupRejection::MixedKernel { element: *f });
        }
        if f.image() != image {
            return Err(GroupRejection::MixedImage { element: *f });
        }
    }

    Ok(TransGroup {
        n,
        elements,
        identity_index,
        inverses,
        table,
        kernel,
        image,
    })
}

/// The permutation group `Ĝ` on `{0,…,m−1}` induced on the quotient set.
#[derive(Debug, Clone)]
pub struct PermGroup {
    m: usize,
    perms: Vec<BlockMap>,
    label_map: Vec<usize>,
}

impl PermGroup {
    /// Number of points (blocks) acted on.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Sorted block permutations.
    pub fn perms(&self) -> &[BlockMap] {
        &self.perms
    }

    /// `ρ` of the source group's `i`-th element.
    pub fn image_of(&self, source_index: usize) -> &BlockMap {
        &self.perms[self.label_map[source_index]]
    }

    /// Index into [`perms`](Self::perms) for each source element.
    pub fn label_map(&self) -> &[usize] {
        &self.label_map
    }

    pub fn contains_identity(&self) -> bool {
        self.perms.iter().any(BlockMap::is_identity)
    }

    pub fn is_closed(&self) -> bool {
        self.perms
            .iter()
            .all(|a| self.perms.iter().all(|b| self.perms.binary_search(&a.after(b)).is_ok()))
    }

    /// Whether this is all of `Sym(m)`.
    pub fn is_full_symmetric(&self) -> bool {
        self.order() == crate::factorial(self.m) && self.perms.iter().all(BlockMap::is_bijective)
    }
}

/// JSON shape for a transformation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub n: usize,
    pub order: usize,
    pub identity: String,
    pub elements: Vec<String>,
    pub kernel_blocks: Vec<Vec<usize>>,
    pub image: Vec<usize>,
    pub is_ng: bool,
    pub quotient_order: usize,
}

impl GroupReport {
    /// `offset` shifts rendered points (1 renders `{1,…,n}`).
    pub fn new(g: &TransGroup, offset: usize) -> Self {
        GroupReport {
            n: g.n(),
            order: g.order(),
            identity: g.identity().render(offset),
            elements: g.elements().iter().map(|f| f.render(offset)).collect(),
            kernel_blocks: g
                .kernel()
                .blocks()
                .into_iter()
                .map(|b| b.into_iter().map(|x| x + offset).collect())
                .collect(),
            image: g.image().iter().map(|x| x + offset).collect(),
            is_ng: g.is_ng_group(),
            quotient_order: g.kernel().block_count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Transformation> {
        items.iter().map(|s| t(s)).collect()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            generate_closure(&[t("[2,2,0]")], 100).unwrap(),
            set(&["[2,2,0]", "[0,0,2]"])
        );
        assert_eq!(generate_closure(&[t("[0,1,2]")], 100).unwrap(), set(&["[0,1,2]"]));
        assert_eq!(
            generate_closure(&[t("[0,0,1]")], 100).unwrap(),
            set(&["[0,0,1]", "[0,0,0]"])
        );
    }

    #[test]
    fn closure_errors() {
        let s3 = [t("[1,0,2]"), t("[1,2,0]")];
        assert_eq!(generate_closure(&s3, 100).unwrap().len(), 6);
        assert!(matches!(generate_closure(&s3, 5), Err(Error::CapExceeded { .. })));
        assert!(matches!(
            generate_closure(&[t("[0,0]"), t("[0,0,0]")], 10),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn check_group_witness() {
        let g = check_group(set(&["[0,0,2]", "[2,2,0]"])).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(*g.identity(), t("[0,0,2]"));
        assert_eq!(g.kernel().blocks(), vec![vec![0, 1], vec![2]]);
        assert_eq!(g.image(), &[0, 2]);
        assert!(g.is_ng_group());
        let (k, im) = g.common_kernel_image().unwrap();
        assert_eq!((k, im), (*g.kernel(), vec![0, 2]));
    }

    #[test]
    fn check_group_rejections() {
        assert_eq!(
            check_group(set(&["[0,0,1]"])).unwrap_err(),
            GroupRejection::NotClosed {
                left: t("[0,0,1]"),
                right: t("[0,0,1]"),
                product: t("[0,0,0]")
            }
        );
        assert_eq!(check_group(Vec::new()).unwrap_err(), GroupRejection::Empty);
        // closed semigroup with two idempotents and no identity: two constants
        assert_eq!(
            check_group(set(&["[0,0]", "[1,1]"])).unwrap_err(),
            GroupRejection::NoIdentity
        );
        // closed monoid with identity but a non-invertible member
        assert_eq!(
            check_group(set(&["[0,1]", "[0,0]"])).unwrap_err(),
            GroupRejection::NoInverse { element: t("[0,0]") }
        );
        assert!(matches!(
            check_group(vec![t("[0]"), t("[0,1]")]).unwrap_err(),
            GroupRejection::MixedCarrier { .. }
        ));
    }

    #[test]
    fn permutation_groups_are_accepted() {
        let g = check_group(set(&["[0,1,2]", "[1,0,2]"])).unwrap();
        assert_eq!(g.order(), 2);
        assert!(!g.is_ng_group());
        assert!(!check_group(set(&["[0,1,2]"])).unwrap().is_ng_group());
    }

    #[test]
    fn constant_map_is_trivial_ng_group() {
        let g = check_group(set(&["[0,0,0]"])).unwrap();
        assert!(g.is_ng_group());
        let rho = g.rho().unwrap();
        assert_eq!((rho.m(), rho.order()), (1, 1));
        assert!(rho.contains_identity());
    }

    #[test]
    fn rho_of_witness_is_swap() {
        let g = check_group(set(&["[0,0,2]", "[2,2,0]"])).unwrap();
        let rho = g.rho().unwrap();
        assert_eq!(rho.m(), 2);
        assert_eq!(rho.perms(), &[BlockMap(vec![0, 1]), BlockMap(vec![1, 0])]);
        assert_eq!(rho.image_of(g.index_of(&t("[2,2,0]")).unwrap()), &BlockMap(vec![1, 0]));
        assert!(rho.is_full_symmetric());
        assert!(rho.is_closed());
    }

    #[test]
    fn group_report_json_shape() {
        let g = check_group(set(&["[0,0,2]", "[2,2,0]"])).unwrap();
        let v = serde_json::to_value(g.report(0)).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "n": 3, "order": 2, "identity": "[0,0,2]",
                "elements": ["[0,0,2]", "[2,2,0]"],
                "kernel_blocks": [[0, 1], [2]], "image": [0, 2],
                "is_ng": true, "quotient_order": 2
            })
        );
        let one = g.report(1);
        assert_eq!(one.identity, "[1,1,3]");
        assert_eq!(one.kernel_blocks, vec![vec![1, 2], vec![3]]);
        assert_eq!(one.image, vec![1, 3]);
    }

    #[test]
    fn cyclic_closure_is_group_iff_member() {
        for f in Transformation::all(3).unwrap() {
            let closure = generate_closure(&[f], DEFAULT_CLOSURE_CAP).unwrap();
            assert_eq!(check_group(closure).is_ok(), f.can_be_member(), "{f}");
        }
    }
}
