//! Total maps on `{0,…,n−1}` and the single-map criteria for membership in
//! a transformation group.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::{Partition, MAX_POINTS};

/// A total map `f` on `{0,…,n−1}`, stored as its image list: `images[x] = f(x)`.
///
/// Storage is inline (no heap), so the type is `Copy`; carriers are limited to
/// [`MAX_POINTS`] points. Unused trailing slots are always zero, which keeps the
/// derived `Eq`/`Hash`/`Ord` structural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    n: u8,
    images: [u8; MAX_POINTS],
}

/// Image set, rank, and bijectivity of one map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRank {
    pub image: Vec<usize>,
    pub rank: usize,
    pub bijective: bool,
}

impl Transformation {
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidTransformation("carrier must be non-empty".into()));
        }
        if n > MAX_POINTS {
            return Err(Error::cap("carrier size", MAX_POINTS));
        }
        let mut buf = [0u8; MAX_POINTS];
        for (x, &y) in images.iter().enumerate() {
            if y >= n {
                return Err(Error::InvalidTransformation(format!(
                    "image {y} of point {x} outside 0..{n}"
                )));
            }
            buf[x] = y as u8;
        }
        Ok(Transformation {
            n: n as u8,
            images: buf,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(&(0..n).collect::<Vec<_>>())
    }

    pub fn constant(n: usize, value: usize) -> Result<Self> {
        Self::new(&vec![value; n])
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.raw().iter().map(|&y| y as usize).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.images[..self.n()]
    }

    /// `compose(f, g)(x) = f(g(x))`: f after g.
    pub fn compose(f: &Transformation, g: &Transformation) -> Result<Transformation> {
        if f.n != g.n {
            return Err(Error::DomainMismatch {
                left: f.n(),
                right: g.n(),
            });
        }
        Ok(f.after(g))
    }

    /// Unchecked `f ∘ g` for callers that already know the carriers agree.
    #[inline]
    pub(crate) fn after(&self, g: &Transformation) -> Transformation {
        debug_assert_eq!(self.n, g.n);
        let mut images = [0u8; MAX_POINTS];
        for x in 0..self.n() {
            images[x] = self.images[g.images[x] as usize];
        }
        Transformation { n: self.n, images }
    }

    /// The k-fold composite `f^k`, `k ≥ 1`.
    pub fn power(&self, k: usize) -> Result<Transformation> {
        if k == 0 {
            return Err(Error::ZeroPower);
        }
        if k <= 8 {
            let mut acc = *self;
            for _ in 1..k {
                acc = self.after(&acc);
            }
            return Ok(acc);
        }
        let mut result: Option<Transformation> = None;
        let mut base = *self;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.after(&base),
                    None => base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.after(&base);
            }
        }
        Ok(result.expect("k >= 1"))
    }

    /// Sorted distinct image points.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = [false; MAX_POINTS];
        for &y in self.raw() {
            hit[y as usize] = true;
        }
        (0..self.n()).filter(|&y| hit[y]).collect()
    }

    pub fn rank(&self) -> usize {
        self.image().len()
    }

    pub fn is_bijective(&self) -> bool {
        self.rank() == self.n()
    }

    pub fn image_rank(&self) -> ImageRank {
        let image = self.image();
        let rank = image.len();
        ImageRank {
            bijective: rank == self.n(),
            image,
            rank,
        }
    }

    /// `x ∼ y ⟺ f(x) = f(y)`, canonically labelled.
    pub fn kernel_partition(&self) -> Partition {
        Partition::from_labels(self.raw()).expect("transformation size already validated")
    }

    pub fn is_idempotent(&self) -> bool {
        self.after(self) == *self
    }

    /// Whether some group under composition contains `f`: `Im f = Im f²`
    /// (finite carrier).
    pub fn can_be_member(&self) -> bool {
        self.image() == self.after(self).image()
    }

    /// Whether some group under composition has `f` as its identity: `f² = f`.
    pub fn can_be_identity(&self) -> bool {
        self.is_idempotent()
    }

    /// The block-level map `[x] ↦ [f(x)]` on the quotient by `p`, checked for
    /// independence of the representative.
    pub fn induced_map(&self, p: &Partition) -> Result<BlockMap> {
        if p.n() != self.n() {
            return Err(Error::DomainMismatch {
                left: self.n(),
                right: p.n(),
            });
        }
        let reps = p.representatives();
        let map: Vec<usize> = reps.iter().map(|&r| p.block(self.apply(r))).collect();
        for x in 0..self.n() {
            let b = p.block(x);
            if p.block(self.apply(x)) != map[b] {
                return Err(Error::IllDefined {
                    block: b,
                    first: reps[b],
                    second: x,
                });
            }
        }
        Ok(BlockMap(map))
    }

    /// Conjugate by a point relabelling: `x ↦ perm[x]` sends `f` to
    /// `perm ∘ f ∘ perm⁻¹`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Transformation> {
        if perm.len() != self.n() {
            return Err(Error::DomainMismatch {
                left: self.n(),
                right: perm.len(),
            });
        }
        let mut images = vec![0; self.n()];
        for x in 0..self.n() {
            images[perm[x]] = perm[self.apply(x)];
        }
        Transformation::new(&images)
    }

    /// Render with points shifted by `offset` (1 for the `{1,…,n}` convention).
    pub fn render(&self, offset: usize) -> String {
        let parts: Vec<String> = self.raw().iter().map(|&y| (y as usize + offset).to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Every map on `{0,…,n−1}` in lexicographic order of image sequences.
    pub fn all(n: usize) -> Result<AllTransformations> {
        Transformation::identity(n)?;
        Ok(AllTransformations {
            n,
            next: Some(vec![0; n]),
        })
    }
}

/// Odometer over `T_n`.
pub struct AllTransformations {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for AllTransformations {
    type Item = Transformation;

    fn next(&mut self) -> Option<Transformation> {
        let current = self.next.take()?;
        let t = Transformation::new(&current).expect("odometer stays in range");
        let mut digits = current;
        let mut i = self.n;
        while i > 0 {
            i -= 1;
            if digits[i] + 1 < self.n {
                digits[i] += 1;
                self.next = Some(digits);
                break;
            }
            digits[i] = 0;
        }
        Some(t)
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

impl FromStr for Transformation {
    type Err = Error;

    /// Parses `"[0,0,2]"`; whitespace anywhere is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..] around image list, got {s:?}")))?;
        if inner.is_empty() {
            return Err(Error::Parse("empty image list".into()));
        }
        let images = inner
            .split(',')
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad image entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Transformation::new(&images)
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A map on block indices `{0,…,m−1}`; the induced map `f̂` on a quotient set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockMap(pub Vec<usize>);

impl BlockMap {
    pub fn identity(m: usize) -> Self {
        BlockMap((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, b: usize) -> usize {
        self.0[b]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(b, &c)| b == c)
    }

    pub fn is_bijective(&self) -> bool {
        let mut hit = vec![false; self.len()];
        for &c in &self.0 {
            if c >= hit.len() || std::mem::replace(&mut hit[c], true) {
                return false;
            }
        }
        true
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &BlockMap) -> BlockMap {
        BlockMap(other.0.iter().map(|&b| self.0[b]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Transformation {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            Transformation::compose(&t("[1,2,0]"), &t("[0,0,1]")).unwrap(),
            t("[1,1,2]")
        );
        assert_eq!(
            Transformation::compose(&t("[0,0,2]"), &t("[0,0,2]")).unwrap(),
            t("[0,0,2]")
        );
    }

    #[test]
    fn witness_identity_acts_as_identity() {
        // brute-force table over the n = 3 witness group
        let group = [t("[0,0,2]"), t("[2,2,0]")];
        let e = group[0];
        for g in &group {
            assert_eq!(Transformation::compose(&e, g).unwrap(), *g);
            assert_eq!(Transformation::compose(g, &e).unwrap(), *g);
        }
    }

    #[test]
    fn compose_rejects_size_mismatch() {
        let err = Transformation::compose(&t("[0,0]"), &t("[0,0,1]")).unwrap_err();
        assert_eq!(err, Error::DomainMismatch { left: 2, right: 3 });
    }

    #[test]
    fn power_examples() {
        assert_eq!(t("[0,0,1]").power(2).unwrap(), t("[0,0,0]"));
        assert_eq!(t("[1,2,0]").power(3).unwrap(), t("[0,1,2]"));
        assert_eq!(t("[2,2,0]").power(2).unwrap(), t("[0,0,2]"));
        assert_eq!(t("[1,2,0]").power(1).unwrap(), t("[1,2,0]"));
        assert_eq!(t("[1,2,0]").power(0).unwrap_err(), Error::ZeroPower);
    }

    #[test]
    fn power_squaring_path_matches_naive() {
        let f = t("[1,2,3,4,0,2]");
        let mut naive = f;
        for k in 2..40 {
            naive = f.after(&naive);
            assert_eq!(f.power(k).unwrap(), naive, "k = {k}");
        }
    }

    #[test]
    fn image_rank_examples() {
        let r = t("[0,0,1]").image_rank();
        assert_eq!((r.image, r.rank, r.bijective), (vec![0, 1], 2, false));
        let r = t("[0,1,2]").image_rank();
        assert_eq!((r.image, r.rank, r.bijective), (vec![0, 1, 2], 3, true));
        let r = t("[0,0,0]").image_rank();
        assert_eq!((r.image, r.rank, r.bijective), (vec![0], 1, false));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(t("[0,0,1]").kernel_partition().blocks(), vec![vec![0, 1], vec![2]]);
        assert!(t("[0,1,2]").kernel_partition().is_discrete());
        assert_eq!(t("[0,0,0]").kernel_partition().block_count(), 1);
        assert_eq!(t("[0,0,1]").kernel_partition(), t("[2,2,0]").kernel_partition());
    }

    #[test]
    fn idempotent_and_membership_examples() {
        assert!(t("[0,0,2]").is_idempotent());
        assert!(!t("[0,0,1]").is_idempotent());
        let e = t("[0,0,2]");
        assert!(e.induced_map(&e.kernel_partition()).unwrap().is_identity());

        assert!(!t("[0,0,1]").can_be_member());
        assert!(t("[0,0,2]").can_be_member());
        assert!(!t("[1,2,2]").can_be_member());

        assert!(t("[0,0,2]").can_be_identity());
        assert!(!t("[2,2,0]").can_be_identity());
        assert!(t("[0,1,2]").can_be_identity());
    }

    #[test]
    fn induced_map_examples() {
        let p = Partition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(t("[2,2,0]").induced_map(&p).unwrap(), BlockMap(vec![1, 0]));
        assert!(t("[0,0,2]").induced_map(&p).unwrap().is_identity());
        assert_eq!(
            t("[2,0,1]").induced_map(&p).unwrap_err(),
            Error::IllDefined {
                block: 0,
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(t(" [ 0, 0 ,2 ] "), t("[0,0,2]"));
        assert_eq!(t("[0,0,2]").render(1), "[1,1,3]");
        assert!("[0,3,1]".parse::<Transformation>().is_err());
        assert!("0,1".parse::<Transformation>().is_err());
        assert!("[]".parse::<Transformation>().is_err());
        assert!("[0,x]".parse::<Transformation>().is_err());
        let json = serde_json::to_string(&t("[1,0]")).unwrap();
        assert_eq!(json, "\"[1,0]\"");
        assert_eq!(serde_json::from_str::<Transformation>(&json).unwrap(), t("[1,0]"));
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = Transformation::all(3).unwrap().collect();
        assert_eq!(all.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], t("[0,0,0]"));
        assert_eq!(all[26], t("[2,2,2]"));
    }
}
