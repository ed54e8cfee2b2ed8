//! Group classes, residuals `G^χ` and radicals `O_χ(G)`, and the checkers
//! for how they behave under subgroups, quotients and subnormal products.
//!
//! Residuals and radicals are computed from the normal-subgroup lattice
//! ([`CayleyGroup::normal_subgroups`]), which needs no subgroup enumeration.
//! Only the nilpotency predicate enumerates subgroups (to find Sylow
//! subgroups) and is bound by [`DEFAULT_SUBGROUP_CAP`].

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cayley::{CayleyGroup, Subgroup, DEFAULT_AUTOMORPHISM_CAP, DEFAULT_SUBGROUP_CAP};
use crate::constructions::is_prime;
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupClass {
    /// Groups of order `p^k`, `k ≥ 0`.
    PGroup(usize),
    /// Groups whose Sylow subgroups are all normal.
    Nilpotent,
    /// Abelian groups. Not closed under products of normal members, so not an
    /// SHP-class; kept only as a negative control for [`verify_shp_axioms`].
    Abelian,
}

impl GroupClass {
    pub fn p_group(p: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        Ok(GroupClass::PGroup(p))
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn is_shp(&self) -> bool {
        !matches!(self, GroupClass::Abelian)
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupClass::PGroup(p) => write!(f, "{p}-groups"),
            GroupClass::Nilpotent => f.write_str("nilpotent"),
            GroupClass::Abelian => f.write_str("abelian"),
        }
    }
}

impl FromStr for GroupClass {
    type Err = Error;

    /// `"p:<prime>"` or `"nilpotent"`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nilpotent" => Ok(GroupClass::Nilpotent),
            other => {
                let p = other
                    .strip_prefix("p:")
                    .ok_or_else(|| Error::Parse(format!("expected p:<prime> or nilpotent, got {s:?}")))?
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad prime in {s:?}: {e}")))?;
                GroupClass::p_group(p)
            }
        }
    }
}

fn is_power_of(mut order: usize, p: usize) -> bool {
    while order.is_multiple_of(p) {
        order /= p;
    }
    order == 1
}

fn prime_divisors(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn belongs(c: GroupClass, g: &CayleyGroup) -> Result<bool> {
    match c {
        GroupClass::PGroup(p) => Ok(is_power_of(g.order(), p)),
        GroupClass::Abelian => Ok(g.is_abelian()),
        GroupClass::Nilpotent => {
            if prime_divisors(g.order()).len() <= 1 {
                return Ok(true);
            }
            let subgroups = g.all_subgroups(DEFAULT_SUBGROUP_CAP)?;
            Ok(prime_divisors(g.order()).into_iter().all(|p| {
                let mut sylow_order = 1;
                while g.order().is_multiple_of(sylow_order * p) {
                    sylow_order *= p;
                }
                subgroups
                    .iter()
                    .filter(|s| s.order() == sylow_order)
                    .all(|s| g.is_normal(s))
            }))
        }
    }
}

/// Membership of a subgroup, judged on its own table.
pub fn subgroup_belongs(c: GroupClass, g: &CayleyGroup, h: &Subgroup) -> Result<bool> {
    match c {
        GroupClass::PGroup(p) => Ok(is_power_of(h.order(), p)),
        _ => belongs(c, &g.induced(h).0),
    }
}

fn quotient_belongs(c: GroupClass, g: &CayleyGroup, n: &Subgroup) -> Result<bool> {
    match c {
        GroupClass::PGroup(p) => Ok(is_power_of(g.order() / n.order(), p)),
        _ => belongs(c, &g.quotient_group(n)?.group),
    }
}

fn intersect_all(g: &CayleyGroup, family: &[Subgroup]) -> Subgroup {
    family.iter().fold(g.whole(), |acc, s| g.intersection(&acc, s))
}

fn join_all(g: &CayleyGroup, family: &[Subgroup]) -> Subgroup {
    family.iter().fold(g.trivial(), |acc, s| g.join(&acc, s))
}

/// Smallest normal `N` with `G/N` in the class. Computed both as the
/// intersection of all such `N` and as the unique inclusion-minimal one; the
/// two must agree.
pub fn residual(g: &CayleyGroup, c: GroupClass) -> Result<Subgroup> {
    let mut family = Vec::new();
    for n in g.normal_subgroups() {
        if quotient_belongs(c, g, &n)? {
            family.push(n);
        }
    }
    let by_intersection = intersect_all(g, &family);
    let minimal: Vec<&Subgroup> = family
        .iter()
        .filter(|n| !family.iter().any(|m| m != *n && m.is_subgroup_of(n)))
        .collect();
    if minimal.len() != 1 || *minimal[0] != by_intersection {
        return Err(Error::Alarm(format!(
            "residual for {c}: intersection {by_intersection:?} but minimal members {minimal:?}"
        )));
    }
    if !quotient_belongs(c, g, &by_intersection)? {
        return Err(Error::Alarm(format!("G modulo its {c} residual is not in the class")));
    }
    Ok(by_intersection)
}

/// Largest normal subgroup in the class: the join of all normal members,
/// which must itself be a member and the unique inclusion-maximal one.
pub fn radical(g: &CayleyGroup, c: GroupClass) -> Result<Subgroup> {
    let mut family = Vec::new();
    for n in g.normal_subgroups() {
        if subgroup_belongs(c, g, &n)? {
            family.push(n);
        }
    }
    let join = join_all(g, &family);
    if !family.contains(&join) {
        return Err(Error::Alarm(format!(
            "join of the normal {c} subgroups, {join:?}, is not a normal {c} subgroup"
        )));
    }
    let maximal: Vec<&Subgroup> = family
        .iter()
        .filter(|n| !family.iter().any(|m| m != *n && n.is_subgroup_of(m)))
        .collect();
    if maximal != [&join] {
        return Err(Error::Alarm(format!(
            "radical for {c}: join {join:?} but maximal members {maximal:?}"
        )));
    }
    Ok(join)
}

/// Carry a subgroup of `g.induced(h)` back to `g`'s indices.
fn transport(g: &CayleyGroup, embedding: &[usize], local: &Subgroup) -> Result<Subgroup> {
    let members: Vec<usize> = local.members().iter().map(|&i| embedding[i]).collect();
    g.subgroup(&members)
}

/// Residual of `h` computed in `h`'s own table, in `g`'s indices.
pub fn residual_in(g: &CayleyGroup, h: &Subgroup, c: GroupClass) -> Result<Subgroup> {
    let (sub, embedding) = g.induced(h);
    transport(g, &embedding, &residual(&sub, c)?)
}

/// Radical of `h` computed in `h`'s own table, in `g`'s indices.
pub fn radical_in(g: &CayleyGroup, h: &Subgroup, c: GroupClass) -> Result<Subgroup> {
    let (sub, embedding) = g.induced(h);
    transport(g, &embedding, &radical(&sub, c)?)
}

/// Check the SHP axioms for `c` over a library: members' subgroups and
/// quotients stay in `c`, and the product of two normal `c`-subgroups is a
/// `c`-subgroup. One report per library group.
pub fn verify_shp_axioms(c: GroupClass, library: &[(String, CayleyGroup)]) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    for (name, g) in library {
        let mut violations: Vec<Value> = Vec::new();
        let normals = g.normal_subgroups();
        if belongs(c, g)? {
            for h in g.all_subgroups(DEFAULT_SUBGROUP_CAP)? {
                if !subgroup_belongs(c, g, &h)? {
                    violations.push(json!({ "axiom": "subgroups", "subgroup": h.members() }));
                }
            }
            for n in &normals {
                if !quotient_belongs(c, g, n)? {
                    violations.push(json!({ "axiom": "quotients", "normal": n.members() }));
                }
            }
        }
        let mut members = Vec::new();
        for n in &normals {
            if subgroup_belongs(c, g, n)? {
                members.push(*n);
            }
        }
        for (i, u) in members.iter().enumerate() {
            for v in &members[i..] {
                let uv = g.product_set(u, v);
                let ok = uv.is_subgroup && subgroup_belongs(c, g, &g.subgroup(&uv.elements.to_vec())?)?;
                if !ok {
                    violations.push(json!({
                        "axiom": "normal products",
                        "u": u.members(),
                        "v": v.members(),
                        "product": uv.elements.to_vec(),
                    }));
                }
            }
        }
        let claim = format!("{c} is closed under subgroups, quotients and normal products in {name}");
        reports.push(Report::check(claim, violations.is_empty(), || json!(violations)));
    }
    Ok(reports)
}

fn product_preconditions(g: &CayleyGroup, u: &Subgroup, v: &Subgroup) -> Option<Value> {
    let uv = g.product_set(u, v);
    if uv.elements != g.whole().elements() {
        return Some(json!({ "reason": "UV != G", "product_size": uv.elements.len() }));
    }
    for (name, s) in [("U", u), ("V", v)] {
        if !g.is_subnormal(s) {
            return Some(json!({ "reason": format!("{name} is not subnormal"), "members": s.members() }));
        }
    }
    None
}

fn product_report(claim: String, g: &CayleyGroup, whole_side: Subgroup, u_side: Subgroup, v_side: Subgroup) -> Report {
    let product = g.product_set(&u_side, &v_side).elements;
    let witness = json!({
        "g_side": whole_side.members(),
        "u_side": u_side.members(),
        "v_side": v_side.members(),
        "product": product.to_vec(),
    });
    Report::check(claim, product == whole_side.elements(), || witness.clone()).with_witness(witness)
}

/// `G^χ = U^χ V^χ` for `G = UV` with `U`, `V` subnormal.
pub fn check_residual_product(g: &CayleyGroup, u: &Subgroup, v: &Subgroup, c: GroupClass) -> Result<Report> {
    let claim = format!("residual factorizes: G^chi = U^chi V^chi for chi = {c}");
    if let Some(w) = product_preconditions(g, u, v) {
        return Ok(Report::precondition_failed(claim, w));
    }
    Ok(product_report(
        claim,
        g,
        residual(g, c)?,
        residual_in(g, u, c)?,
        residual_in(g, v, c)?,
    ))
}

/// `O_χ(G) = O_χ(U) O_χ(V)` for `G = UV` with `U`, `V` subnormal. Not a
/// theorem: a `violated` status is the expected outcome on the counterexample.
pub fn check_radical_product(g: &CayleyGroup, u: &Subgroup, v: &Subgroup, c: GroupClass) -> Result<Report> {
    let claim = format!("radical factorizes: O_chi(G) = O_chi(U) O_chi(V) for chi = {c}");
    if let Some(w) = product_preconditions(g, u, v) {
        return Ok(Report::precondition_failed(claim, w));
    }
    Ok(product_report(
        claim,
        g,
        radical(g, c)?,
        radical_in(g, u, c)?,
        radical_in(g, v, c)?,
    ))
}

/// For subnormal `c`-subgroups `a` and `b`: both lie in `O_χ(G)` and
/// `⟨a, b⟩` is a `c`-subgroup.
pub fn subnormal_join_in_class(g: &CayleyGroup, a: &Subgroup, b: &Subgroup, c: GroupClass) -> Result<Report> {
    let claim = format!("join of subnormal {c} subgroups lies in O_chi(G) and is in {c}");
    for (name, s) in [("A", a), ("B", b)] {
        if !g.is_subnormal(s) {
            return Ok(Report::precondition_failed(
                claim,
                json!({ "reason": format!("{name} is not subnormal"), "members": s.members() }),
            ));
        }
        if !subgroup_belongs(c, g, s)? {
            return Ok(Report::precondition_failed(
                claim,
                json!({ "reason": format!("{name} is not in {c}"), "members": s.members() }),
            ));
        }
    }
    let r = radical(g, c)?;
    let join = g.join(a, b);
    let ok = a.is_subgroup_of(&r) && b.is_subgroup_of(&r) && subgroup_belongs(c, g, &join)?;
    Ok(Report::check(
        claim,
        ok,
        || json!({ "radical": r.members(), "join": join.members() }),
    ))
}

/// Monotonicity under subgroups, compatibility with quotients, and
/// characteristic-ness of the residual and radical. Four reports, in that
/// order: subgroups, quotients, residual characteristic, radical characteristic.
pub fn residual_monotone_check(g: &CayleyGroup, c: GroupClass) -> Result<Vec<Report>> {
    let res = residual(g, c)?;
    let rad = radical(g, c)?;

    let mut bad_subgroups = Vec::new();
    for h in g.all_subgroups(DEFAULT_SUBGROUP_CAP)? {
        let rh = residual_in(g, &h, c)?;
        if !rh.is_subgroup_of(&res) {
            bad_subgroups.push(json!({ "subgroup": h.members(), "residual": rh.members() }));
        }
    }

    let mut bad_quotients = Vec::new();
    for n in g.normal_subgroups() {
        let q = g.quotient_group(&n)?;
        let direct = residual(&q.group, c)?;
        let image = q.project(&res);
        if direct != image {
            bad_quotients.push(json!({
                "normal": n.members(),
                "residual_of_quotient": direct.members(),
                "image_of_residual": image.members(),
            }));
        }
    }

    let res_char = g.is_characteristic(&res, DEFAULT_AUTOMORPHISM_CAP)?;
    let rad_char = g.is_characteristic(&rad, DEFAULT_AUTOMORPHISM_CAP)?;

    Ok(vec![
        Report::check(
            format!("H^chi <= G^chi for every subgroup H, chi = {c}"),
            bad_subgroups.is_empty(),
            || json!(bad_subgroups),
        ),
        Report::check(
            format!("(G/N)^chi = G^chi N/N for every normal N, chi = {c}"),
            bad_quotients.is_empty(),
            || json!(bad_quotients),
        ),
        Report::check(
            format!("G^chi is characteristic, chi = {c}"),
            res_char,
            || json!({ "residual": res.members() }),
        ),
        Report::check(
            format!("O_chi(G) is characteristic, chi = {c}"),
            rad_char,
            || json!({ "radical": rad.members() }),
        ),
    ])
}
