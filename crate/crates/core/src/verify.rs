//! End-to-end verification suite behind `ngverify verify-all`. Each
//! criterion reports pass/fail with a one-line detail and its runtime.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use crate::cayley::{CayleyGroup, Subgroup, DEFAULT_SUBGROUP_CAP};
use crate::classes::{self, GroupClass};
use crate::constructions::{counterexample_report, ng_witness, standard_group, SemidirectSpec, StandardKind};
use crate::error::Result;
use crate::report::Report;
use crate::search::{self, ScanMode};
use crate::transformation::Transformation;
use crate::transgroup::{check_group, TransGroup};

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

/// The group library for the residual and lemma sweeps: every constructed
/// group of order at most 24.
pub fn group_library() -> Result<Vec<(String, CayleyGroup)>> {
    use StandardKind::*;
    let mut lib = Vec::new();
    for kind in [
        Cyclic(1),
        Cyclic(2),
        Cyclic(3),
        Cyclic(4),
        Cyclic(5),
        Cyclic(6),
        Cyclic(8),
        Cyclic(9),
        Cyclic(10),
        Cyclic(12),
        ElementaryAbelian(2, 2),
        ElementaryAbelian(2, 3),
        ElementaryAbelian(3, 2),
        Dihedral(3),
        Dihedral(4),
        Dihedral(5),
        Dihedral(6),
        Symmetric(3),
        Symmetric(4),
    ] {
        lib.push((kind.to_string(), standard_group(kind)?));
    }
    for (p, q) in [(2, 3), (2, 5)] {
        let spec = SemidirectSpec::new(p, q, None)?;
        lib.push((
            format!("C_{q} x| (C_{p} x C_{p})"),
            crate::constructions::semidirect_q_p2(spec)?.group,
        ));
    }
    Ok(lib)
}

pub fn sweep_classes() -> Vec<GroupClass> {
    vec![
        GroupClass::PGroup(2),
        GroupClass::PGroup(3),
        GroupClass::PGroup(5),
        GroupClass::Nilpotent,
    ]
}

/// Whether `f^{k+1} = f` for some `1 ≤ k ≤ n!`: `f` generates a cyclic group.
pub fn member_by_power_cycle(f: &Transformation) -> bool {
    let limit = crate::factorial(f.n());
    let mut power = *f;
    for _ in 1..=limit {
        power = Transformation::compose(&power, f).expect("same carrier");
        if power == *f {
            return true;
        }
    }
    false
}

pub fn subnormal_subgroups(g: &CayleyGroup) -> Result<Vec<Subgroup>> {
    Ok(g.all_subgroups(DEFAULT_SUBGROUP_CAP)?
        .into_iter()
        .filter(|h| g.is_subnormal(h))
        .collect())
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, Duration)> {
    let start = Instant::now();
    let value = f()?;
    Ok((value, start.elapsed()))
}

fn criterion(id: u8, title: &str, passed: bool, detail: String, elapsed: Duration) -> Criterion {
    Criterion {
        id,
        title: title.to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
    }
}

/// The table of `g` re-verified against `ρ` pair by pair.
pub fn rho_is_isomorphism(g: &TransGroup) -> Result<bool> {
    let rho = g.rho()?;
    if rho.order() != g.order() {
        return Ok(false);
    }
    for i in 0..g.order() {
        for j in 0..g.order() {
            if *rho.image_of(g.product(i, j)) != rho.image_of(i).after(rho.image_of(j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn max_order_theorem(max_n: usize) -> Result<Criterion> {
    let ns: Vec<usize> = (2..=max_n.min(7)).collect();
    let (results, elapsed) = timed(|| {
        ns.iter()
            .map(|&n| {
                let m = search::max_ng_order(n)?;
                let rechecked = check_group(m.witness.elements().iter().copied()).is_ok();
                Ok((m.max_order, m.bound, rechecked && m.witness.is_ng_group()))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let passed = results.iter().all(|&(o, b, ok)| o == b && ok) && elapsed < Duration::from_secs(10);
    let orders: Vec<usize> = results.iter().map(|r| r.0).collect();
    Ok(criterion(
        1,
        "max-ng n = (n-1)! with NG witness",
        passed,
        format!("n = {ns:?}: orders {orders:?}"),
        elapsed,
    ))
}

pub fn exhaustive_scans(max_n: usize) -> Result<Criterion> {
    let (out, elapsed) = timed(|| {
        let s2 = search::exhaustive_ng_scan(2, ScanMode::Full)?;
        let s3 = search::exhaustive_ng_scan(3, ScanMode::Full)?;
        let s4 = if max_n >= 4 {
            Some(search::exhaustive_ng_scan(4, ScanMode::Bounded)?)
        } else {
            None
        };
        Ok((s2, s3, s4))
    })?;
    let (s2, s3, s4) = out;
    let bounded_ok = s4
        .as_ref()
        .is_none_or(|c| c.max_ng_order <= 6 && c.hclass_route_max().is_some_and(|m| m <= 6));
    let passed = s2.max_ng_order == 1 && s3.max_ng_order == 2 && bounded_ok && elapsed < Duration::from_secs(60);
    Ok(criterion(
        2,
        "exhaustive scans: max NG order 1, 2; n = 4 bounded <= 6",
        passed,
        format!(
            "scan 2: {}, scan 3: {}, scan 4 bounded: {:?} (H-class route {:?})",
            s2.max_ng_order,
            s3.max_ng_order,
            s4.as_ref().map(|c| c.max_ng_order),
            s4.as_ref().and_then(|c| c.hclass_route_max())
        ),
        elapsed,
    ))
}

pub fn membership_criterion(max_n: usize) -> Result<Criterion> {
    let (counts, elapsed) = timed(|| {
        (3..=max_n.clamp(3, 4))
            .map(|n| {
                let maps: Vec<Transformation> = Transformation::all(n)?.collect();
                let disagreements = maps
                    .iter()
                    .filter(|f| f.can_be_member() != member_by_power_cycle(f))
                    .count();
                Ok((maps.len(), disagreements))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let passed = counts.iter().all(|&(_, d)| d == 0);
    Ok(criterion(
        3,
        "Im f = Im f^2 agrees with the power-cycle oracle",
        passed,
        format!("(maps, disagreements): {counts:?}"),
        elapsed,
    ))
}

pub fn idempotent_census(max_n: usize) -> Result<Criterion> {
    const EXPECTED: [u64; 5] = [1, 3, 10, 41, 196];
    let (counts, elapsed) = timed(|| {
        (1..=max_n.min(5))
            .map(|n| Ok(search::enumerate_idempotents(n)?.len() as u64))
            .collect::<Result<Vec<_>>>()
    })?;
    let passed = counts
        .iter()
        .enumerate()
        .all(|(i, &c)| c == EXPECTED[i] && c == search::idempotent_count_formula(i + 1));
    Ok(criterion(
        4,
        "idempotent counts match the closed form",
        passed,
        format!("counts {counts:?}"),
        elapsed,
    ))
}

pub fn rho_isomorphism(max_n: usize) -> Result<Criterion> {
    let (tally, elapsed) = timed(|| {
        let mut groups: Vec<TransGroup> = Vec::new();
        for n in 2..=max_n.min(6) {
            groups.push(ng_witness(n)?);
        }
        for n in 1..=max_n.min(5) {
            for e in search::enumerate_idempotents(n)? {
                groups.push(search::h_class_group(&e)?);
            }
        }
        for n in 2..=3 {
            groups.extend(search::exhaustive_ng_scan(n, ScanMode::Full)?.groups().cloned());
        }
        let mut failures = 0;
        for g in &groups {
            if !rho_is_isomorphism(g)? {
                failures += 1;
            }
        }
        Ok((groups.len(), failures))
    })?;
    Ok(criterion(
        5,
        "rho is a bijective homomorphism",
        tally.1 == 0,
        format!("{} groups, {} failures", tally.0, tally.1),
        elapsed,
    ))
}

pub fn counterexample() -> Result<Criterion> {
    let mut details = Vec::new();
    let mut passed = true;
    let mut total = Duration::ZERO;
    for (p, q) in [(2, 3), (2, 5), (3, 7)] {
        let (r, elapsed) = timed(|| counterexample_report(SemidirectSpec::new(p, q, None)?))?;
        total += elapsed;
        let ok = r.all_hold()
            && r.radical_g_order == p
            && r.radical_u_order == 1
            && r.radical_v_order == 1
            && r.radical_product_order == 1
            && elapsed < Duration::from_secs(5);
        passed &= ok;
        details.push(format!(
            "({p},{q}): |O_p(G)| = {}, {}",
            r.radical_g_order,
            if ok { "ok" } else { "FAIL" }
        ));
    }
    Ok(criterion(
        6,
        "O_p(G) != O_p(U) O_p(V) on C_q x| (C_p x C_p)",
        passed,
        details.join("; "),
        total,
    ))
}

/// `(checked, violations)` for the residual factorization over the library.
pub fn residual_factorization_sweep(library: &[(String, CayleyGroup)]) -> Result<(usize, Vec<Report>)> {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (_, g) in library {
        let subnormal = subnormal_subgroups(g)?;
        let whole = g.whole().elements();
        for (i, u) in subnormal.iter().enumerate() {
            for v in &subnormal[i..] {
                if g.product_set(u, v).elements != whole {
                    continue;
                }
                for c in sweep_classes() {
                    checked += 1;
                    let r = classes::check_residual_product(g, u, v, c)?;
                    if !r.is_holds() {
                        violations.push(r);
                    }
                }
            }
        }
    }
    Ok((checked, violations))
}

pub fn residual_factorization() -> Result<Criterion> {
    let library = group_library()?;
    let ((checked, violations), elapsed) = timed(|| residual_factorization_sweep(&library))?;
    Ok(criterion(
        7,
        "G^chi = U^chi V^chi over the library",
        violations.is_empty() && checked > 0,
        format!(
            "{} groups, {checked} (U, V, class) cases, {} violations",
            library.len(),
            violations.len()
        ),
        elapsed,
    ))
}

/// `(checked, violations)` for the lemma suite over the library.
pub fn lemma_sweep(library: &[(String, CayleyGroup)]) -> Result<(usize, Vec<Report>)> {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (_, g) in library {
        let subnormal = subnormal_subgroups(g)?;
        for c in sweep_classes() {
            for r in classes::residual_monotone_check(g, c)? {
                checked += 1;
                if !r.is_holds() {
                    violations.push(r);
                }
            }
            let in_class: Vec<&Subgroup> = subnormal
                .iter()
                .filter(|h| classes::subgroup_belongs(c, g, h).unwrap_or(false))
                .collect();
            for (i, a) in in_class.iter().enumerate() {
                for b in &in_class[i..] {
                    checked += 1;
                    let r = classes::subnormal_join_in_class(g, a, b, c)?;
                    if !r.is_holds() {
                        violations.push(r);
                    }
                }
            }
        }
    }
    Ok((checked, violations))
}

pub fn lemma_suite() -> Result<Criterion> {
    let library = group_library()?;
    let (out, elapsed) = timed(|| {
        let sweep = lemma_sweep(&library)?;
        let d4 = vec![("D_4".to_string(), standard_group(StandardKind::Dihedral(4))?)];
        let control = classes::verify_shp_axioms(GroupClass::Abelian, &d4)?;
        Ok((sweep, control))
    })?;
    let ((checked, violations), control) = out;
    let control_caught = control.iter().any(Report::is_violated);
    Ok(criterion(
        8,
        "subgroup/quotient/characteristic lemmas and subnormal joins; abelian control caught",
        violations.is_empty() && control_caught,
        format!(
            "{checked} checks, {} violations; abelian control on D_4 {}",
            violations.len(),
            if control_caught { "caught" } else { "MISSED" }
        ),
        elapsed,
    ))
}

pub fn shared_kernel_property() -> Result<Criterion> {
    let (tally, elapsed) = timed(|| {
        let mut groups = 0;
        let mut exceptions = 0;
        for n in 2..=3 {
            let census = search::exhaustive_ng_scan(n, ScanMode::Full)?;
            for g in census.groups() {
                groups += 1;
                let e = g.identity();
                let (kernel, image) = (e.kernel_partition(), e.image());
                exceptions += g
                    .elements()
                    .iter()
                    .filter(|f| f.kernel_partition() != kernel || f.image() != image)
                    .count();
            }
        }
        Ok((groups, exceptions))
    })?;
    Ok(criterion(
        9,
        "all members share the identity's kernel and image",
        tally.1 == 0,
        format!("{} groups, {} exceptions", tally.0, tally.1),
        elapsed,
    ))
}

/// Relabel the carrier by a seeded random permutation: the n = 3 census must
/// map onto itself and the n = 5 witness must stay a group of the same order.
pub fn relabel_invariance(seed: u64) -> Result<Criterion> {
    let mut rng = StdRng::seed_from_u64(seed);
    let (ok, elapsed) = timed(|| {
        let census = search::exhaustive_ng_scan(3, ScanMode::Full)?;
        let mut perm: Vec<usize> = (0..3).collect();
        perm.shuffle(&mut rng);
        let mut original: Vec<Vec<Transformation>> = census.groups().map(|g| g.elements().to_vec()).collect();
        let mut moved = Vec::new();
        for g in census.groups() {
            let relabelled = g
                .elements()
                .iter()
                .map(|f| f.relabel(&perm))
                .collect::<Result<Vec<_>>>()?;
            match check_group(relabelled) {
                Ok(h) => moved.push(h.elements().to_vec()),
                Err(_) => return Ok(false),
            }
        }
        original.sort();
        moved.sort();

        let witness = ng_witness(5)?;
        let mut perm5: Vec<usize> = (0..5).collect();
        perm5.shuffle(&mut rng);
        let relabelled = witness
            .elements()
            .iter()
            .map(|f| f.relabel(&perm5))
            .collect::<Result<Vec<_>>>()?;
        let witness_ok = check_group(relabelled).is_ok_and(|h| h.order() == 24 && h.is_ng_group());
        Ok(original == moved && witness_ok)
    })?;
    Ok(criterion(
        10,
        "census and witness are invariant under relabelling points",
        ok,
        format!("seed {seed}"),
        elapsed,
    ))
}

/// Run every criterion. `max_n` caps the carrier sizes used by the
/// transformation-side criteria (1 through 5); 7 runs them in full. `seed`
/// drives the supplementary relabelling sweep.
pub fn run_all(max_n: usize, seed: u64) -> Result<Vec<Criterion>> {
    Ok(vec![
        max_order_theorem(max_n)?,
        exhaustive_scans(max_n)?,
        membership_criterion(max_n)?,
        idempotent_census(max_n)?,
        rho_isomorphism(max_n)?,
        counterexample()?,
        residual_factorization()?,
        lemma_suite()?,
        shared_kernel_property()?,
        relabel_invariance(seed)?,
    ])
}
