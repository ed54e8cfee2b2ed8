//! Builders for the concrete groups: standard families, the semidirect
//! product `C_q ⋊ (C_p × C_p)` whose p-radical fails to factorize, and the
//! order-`(n−1)!` group of non-bijective transformations.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use crate::cayley::{CayleyGroup, Subgroup, MAX_ORDER};
use crate::classes::{self, GroupClass};
use crate::error::{Error, Result};
use crate::report::{Report, Status};
use crate::transformation::Transformation;
use crate::transgroup::{check_group, TransGroup, DEFAULT_CLOSURE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    Cyclic(usize),
    /// `(C_p)^k`.
    ElementaryAbelian(usize, usize),
    /// `Sym(m)` on `{0,…,m−1}`.
    Symmetric(usize),
    /// Symmetries of the `m`-gon, order `2m`.
    Dihedral(usize),
}

impl StandardKind {
    pub fn order(&self) -> Option<usize> {
        match *self {
            StandardKind::Cyclic(m) => Some(m),
            StandardKind::ElementaryAbelian(p, k) => p.checked_pow(k as u32),
            StandardKind::Symmetric(m) => (1..=m).try_fold(1usize, |acc, i| acc.checked_mul(i)),
            StandardKind::Dihedral(m) => m.checked_mul(2),
        }
    }
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StandardKind::Cyclic(m) => write!(f, "C_{m}"),
            StandardKind::ElementaryAbelian(p, k) => write!(f, "(C_{p})^{k}"),
            StandardKind::Symmetric(m) => write!(f, "S_{m}"),
            StandardKind::Dihedral(m) => write!(f, "D_{m}"),
        }
    }
}

pub fn standard_group(kind: StandardKind) -> Result<CayleyGroup> {
    let order = kind
        .order()
        .filter(|&o| o <= MAX_ORDER)
        .ok_or_else(|| Error::cap(format!("order of {kind}"), MAX_ORDER))?;
    if order == 0 {
        return Err(Error::Precondition(format!("{kind} has no elements")));
    }
    match kind {
        StandardKind::Cyclic(m) => {
            let labels = (0..m).map(|i| power_label("r", i)).collect();
            CayleyGroup::from_fn(labels, |a, b| (a + b) % m)
        }
        StandardKind::ElementaryAbelian(p, k) => {
            if !is_prime(p) {
                return Err(Error::Precondition(format!("{p} is not prime")));
            }
            let digits = |mut x: usize| {
                let mut d = vec![0; k];
                for slot in d.iter_mut().rev() {
                    *slot = x % p;
                    x /= p;
                }
                d
            };
            let labels = (0..order)
                .map(|x| format!("({})", digits(x).iter().join(",")))
                .collect();
            CayleyGroup::from_fn(labels, |a, b| {
                digits(a)
                    .iter()
                    .zip(digits(b))
                    .fold(0, |acc, (&x, y)| acc * p + (x + y) % p)
            })
        }
        StandardKind::Symmetric(m) => {
            let perms: Vec<Vec<usize>> = (0..m).permutations(m).collect();
            let labels = perms.iter().map(|p| cycle_notation(p)).collect();
            CayleyGroup::from_fn(labels, |a, b| {
                // a after b
                let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
                perms.binary_search(&composed).expect("Sym(m) is closed")
            })
        }
        StandardKind::Dihedral(m) => {
            // index j*m + i encodes r^i s^j; s r s = r^{-1}
            let labels = (0..2 * m)
                .map(|x| {
                    let (i, j) = (x % m, x / m);
                    match (i, j) {
                        (0, 0) => "e".to_string(),
                        (_, 0) => power_label("r", i),
                        (0, _) => "s".to_string(),
                        _ => format!("{} s", power_label("r", i)),
                    }
                })
                .collect();
            CayleyGroup::from_fn(labels, |a, b| {
                let (i1, j1, i2, j2) = (a % m, a / m, b % m, b / m);
                let i = if j1 == 0 { (i1 + i2) % m } else { (i1 + m - i2) % m };
                ((j1 + j2) % 2) * m + i
            })
        }
    }
}

fn power_label(base: &str, i: usize) -> String {
    match i {
        0 => "e".to_string(),
        1 => base.to_string(),
        _ => format!("{base}^{i}"),
    }
}

fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = perm[x];
        }
        out.push_str(&format!("({})", cycle.iter().join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow_mod(base: usize, exp: usize, modulus: usize) -> usize {
    (0..exp).fold(1 % modulus, |acc, _| acc * base % modulus)
}

/// Parameters of `C_q ⋊ (⟨x⟩ × ⟨y⟩)` where `x` acts on `C_q` as
/// multiplication by `a` (of multiplicative order `p` mod `q`) and `y` acts
/// trivially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SemidirectSpec {
    pub p: usize,
    pub q: usize,
    pub a: usize,
}

impl SemidirectSpec {
    /// Validate `p`, `q` prime with `q ≡ 1 (mod p)`. Without an explicit `a`
    /// the smallest valid multiplier is used.
    pub fn new(p: usize, q: usize, a: Option<usize>) -> Result<Self> {
        if !is_prime(p) || !is_prime(q) {
            return Err(Error::InvalidSpec(format!("p = {p} and q = {q} must both be prime")));
        }
        if q % p != 1 {
            return Err(Error::InvalidSpec(format!("q = {q} is not 1 mod p = {p}")));
        }
        let valid = |a: usize| a > 1 && a < q && pow_mod(a, p, q) == 1;
        let a = match a {
            Some(a) if valid(a) => a,
            Some(a) => {
                return Err(Error::InvalidSpec(format!(
                    "a = {a} must lie in (1, {q}) with a^{p} ≡ 1 mod {q}"
                )))
            }
            None => (2..q)
                .find(|&a| valid(a))
                .ok_or_else(|| Error::InvalidSpec(format!("no multiplier of order {p} mod {q}")))?,
        };
        Ok(SemidirectSpec { p, q, a })
    }

    pub fn order(&self) -> usize {
        self.q * self.p * self.p
    }
}

impl FromStr for SemidirectSpec {
    type Err = Error;

    /// `"p,q"` or `"p,q,a"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad spec entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match parts[..] {
            [p, q] => SemidirectSpec::new(p, q, None),
            [p, q, a] => SemidirectSpec::new(p, q, Some(a)),
            _ => Err(Error::Parse(format!("expected p,q[,a], got {s:?}"))),
        }
    }
}

impl fmt::Display for SemidirectSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.q, self.a)
    }
}

/// The semidirect product with its designated pieces.
#[derive(Debug, Clone)]
pub struct Semidirect {
    pub spec: SemidirectSpec,
    pub group: CayleyGroup,
    /// `N ≅ C_q`.
    pub n: Subgroup,
    /// `H = ⟨x⟩ × ⟨y⟩`.
    pub h: Subgroup,
    /// `U = N⟨x⟩`.
    pub u: Subgroup,
    /// `V = N⟨xy⟩`.
    pub v: Subgroup,
    /// `⟨xy⟩` alone, the other reading of `V`.
    pub xy: Subgroup,
    pub x: usize,
    pub y: usize,
}

impl Semidirect {
    /// Element index of `(k, x^i y^j)`.
    pub fn index(&self, k: usize, i: usize, j: usize) -> usize {
        encode(self.spec, k, i, j)
    }
}

fn encode(spec: SemidirectSpec, k: usize, i: usize, j: usize) -> usize {
    (k * spec.p + i) * spec.p + j
}

fn decode(spec: SemidirectSpec, idx: usize) -> (usize, usize, usize) {
    (idx / (spec.p * spec.p), idx / spec.p % spec.p, idx % spec.p)
}

/// Elements are pairs `(k mod q, x^i y^j)` with
/// `(k₁, x^{i₁}y^{j₁})(k₂, x^{i₂}y^{j₂}) = (k₁ + a^{i₁}k₂, x^{i₁+i₂}y^{j₁+j₂})`.
pub fn semidirect_q_p2(spec: SemidirectSpec) -> Result<Semidirect> {
    let spec = SemidirectSpec::new(spec.p, spec.q, Some(spec.a))?;
    if spec.order() > MAX_ORDER {
        return Err(Error::cap("semidirect product order", MAX_ORDER));
    }
    let SemidirectSpec { p, q, a } = spec;
    let labels = (0..spec.order())
        .map(|idx| {
            let (k, i, j) = decode(spec, idx);
            let parts: Vec<String> = [("n", k), ("x", i), ("y", j)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|&(b, e)| power_label(b, e))
                .collect();
            if parts.is_empty() {
                "e".to_string()
            } else {
                parts.join(" ")
            }
        })
        .collect();
    let group = CayleyGroup::from_fn(labels, |l, r| {
        let (k1, i1, j1) = decode(spec, l);
        let (k2, i2, j2) = decode(spec, r);
        encode(spec, (k1 + pow_mod(a, i1, q) * k2) % q, (i1 + i2) % p, (j1 + j2) % p)
    })?;
    let gen_n = encode(spec, 1, 0, 0);
    let x = encode(spec, 0, 1, 0);
    let y = encode(spec, 0, 0, 1);
    let xy = group.mul(x, y);
    Ok(Semidirect {
        n: group.subgroup_generated(&[gen_n]),
        h: group.subgroup_generated(&[x, y]),
        u: group.subgroup_generated(&[gen_n, x]),
        v: group.subgroup_generated(&[gen_n, xy]),
        xy: group.subgroup_generated(&[xy]),
        group,
        spec,
        x,
        y,
    })
}

/// How the statement-only reading `V = ⟨xy⟩` behaves on the same instance.
#[derive(Debug, Clone, Serialize)]
pub struct StatementReading {
    pub g_equals_u_times_xy: bool,
    pub xy_subnormal: bool,
    pub radical_of_xy_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub spec: SemidirectSpec,
    pub order: usize,
    pub radical_g_order: usize,
    pub radical_u_order: usize,
    pub radical_v_order: usize,
    pub radical_product_order: usize,
    pub residual_g_order: usize,
    pub checks: Vec<Report>,
    pub statement_reading: StatementReading,
    pub notes: Vec<String>,
}

impl CounterexampleReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(Report::is_holds)
    }
}

/// Verify the counterexample on one instance: `U`, `V` normal, `G = UV`,
/// `G' ≤ N`, `O_p(G) = ⟨y⟩`, `O_p(U) = O_p(V) = 1`, the radical inequality,
/// and the residual equality `G^χ = U^χ V^χ` for `χ` = p-groups.
pub fn counterexample_report(spec: SemidirectSpec) -> Result<CounterexampleReport> {
    let sd = semidirect_q_p2(spec)?;
    let g = &sd.group;
    let p = sd.spec.p;
    let class = GroupClass::PGroup(p);
    let members = |s: &Subgroup| serde_json::json!(s.members());
    let mut checks = Vec::new();

    for (name, s) in [("U", &sd.u), ("V", &sd.v)] {
        let depth = g.subnormal_depth(s);
        checks.push(Report::check(
            format!("{name} is normal in G (subnormal depth 1)"),
            g.is_normal(s) && depth == Some(1),
            || serde_json::json!({ "depth": depth, "members": members(s) }),
        ));
    }

    let uv = g.product_set(&sd.u, &sd.v);
    checks.push(Report::check(
        "G = UV",
        uv.elements == g.whole().elements(),
        || serde_json::json!({ "product_size": uv.elements.len(), "order": g.order() }),
    ));

    let derived = g.derived_subgroup();
    checks.push(Report::check(
        "derived subgroup G' is contained in N",
        derived.is_subgroup_of(&sd.n),
        || serde_json::json!({ "derived": members(&derived) }),
    ));

    let radical_g = classes::radical(g, class)?;
    let y_group = g.subgroup_generated(&[sd.y]);
    checks.push(Report::check(
        format!("O_{p}(G) = <y> of order {p}"),
        radical_g == y_group && radical_g.order() == p,
        || serde_json::json!({ "radical": members(&radical_g), "y": sd.y }),
    ));

    let radical_in = |s: &Subgroup| -> Result<usize> {
        let (sub, _) = g.induced(s);
        Ok(classes::radical(&sub, class)?.order())
    };
    let radical_u_order = radical_in(&sd.u)?;
    let radical_v_order = radical_in(&sd.v)?;
    checks.push(Report::check(
        format!("O_{p}(U) = O_{p}(V) = 1"),
        radical_u_order == 1 && radical_v_order == 1,
        || serde_json::json!({ "radical_u_order": radical_u_order, "radical_v_order": radical_v_order }),
    ));

    let radical_product = classes::check_radical_product(g, &sd.u, &sd.v, class)?;
    let radical_product_order = radical_product
        .witness
        .as_ref()
        .and_then(|w| w["product"].as_array().map(Vec::len))
        .unwrap_or(radical_g.order());
    checks.push(Report::check(
        format!("O_{p}(G) != O_{p}(U) O_{p}(V)"),
        radical_product.status == Status::Violated,
        || serde_json::json!({ "radical_product_report": radical_product }),
    ));

    let residual = classes::check_residual_product(g, &sd.u, &sd.v, class)?;
    let residual_g_order = classes::residual(g, class)?.order();
    checks.push(Report::check(
        format!("residual G^chi = U^chi V^chi for chi = {p}-groups"),
        residual.is_holds(),
        || serde_json::json!({ "residual_product_report": residual }),
    ));

    let u_xy = g.product_set(&sd.u, &sd.xy);
    let (xy_sub, _) = g.induced(&sd.xy);
    let statement_reading = StatementReading {
        g_equals_u_times_xy: u_xy.elements == g.whole().elements(),
        xy_subnormal: g.is_subnormal(&sd.xy),
        radical_of_xy_order: classes::radical(&xy_sub, class)?.order(),
    };
    let notes = vec![
        "V is taken as N<xy>; G = UV needs N inside V for V to be normal".to_string(),
        format!(
            "with V = <xy> instead: G = U<xy> is {}, <xy> subnormal is {}, |O_{p}(<xy>)| = {}",
            statement_reading.g_equals_u_times_xy,
            statement_reading.xy_subnormal,
            statement_reading.radical_of_xy_order
        ),
    ];

    Ok(CounterexampleReport {
        spec: sd.spec,
        order: g.order(),
        radical_g_order: radical_g.order(),
        radical_u_order,
        radical_v_order,
        radical_product_order,
        residual_g_order,
        checks,
        statement_reading,
        notes,
    })
}

/// The group `{σ∘e : σ ∈ Sym(T)}` where `e` collapses point 1 onto point 0
/// and `T = {0, 2, 3, …, n−1}` is the image of `e`. Order `(n−1)!`.
pub fn ng_witness(n: usize) -> Result<TransGroup> {
    if n < 2 {
        return Err(Error::Precondition(format!("witness needs n >= 2, got {n}")));
    }
    let order = crate::factorial(n - 1);
    if order > DEFAULT_CLOSURE_CAP {
        return Err(Error::cap("witness order", DEFAULT_CLOSURE_CAP));
    }
    let collapse = |x: usize| if x == 1 { 0 } else { x };
    let image: Vec<usize> = (0..n).filter(|&x| x != 1).collect();
    let members = image
        .iter()
        .copied()
        .permutations(image.len())
        .map(|targets| {
            let sigma = |y: usize| targets[image.iter().position(|&t| t == y).expect("y in image")];
            let images: Vec<usize> = (0..n).map(|x| sigma(collapse(x))).collect();
            Transformation::new(&images)
        })
        .collect::<Result<Vec<_>>>()?;
    let group = check_group(members)?;
    if group.order() != order {
        return Err(Error::Alarm(format!("witness has order {} not {order}", group.order())));
    }
    Ok(group)
}
