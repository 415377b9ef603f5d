//! The crystallographic quotient `Q = Z² ⋊ Z/m` of `G = Hei ⋊ Z/m` by its
//! center, conjugacy classes of finite subgroups, and their lifts to `G`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{group_from_presentation, snf, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::group::{order, Automorphism, HeiElement, Order, TwistedElement};
use crate::report::CheckReport;

/// Integer 2×2 matrix acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ActionMatrix(pub [[i64; 2]; 2]);

impl ActionMatrix {
    pub const IDENTITY: ActionMatrix = ActionMatrix([[1, 0], [0, 1]]);

    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        let a = &self.0;
        [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
    }

    pub fn mul(&self, other: &ActionMatrix) -> ActionMatrix {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        ActionMatrix(out)
    }

    pub fn add(&self, other: &ActionMatrix) -> ActionMatrix {
        let mut out = self.0;
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e += other.0[i][j];
            }
        }
        ActionMatrix(out)
    }

    pub fn pow(&self, k: u32) -> ActionMatrix {
        (0..k).fold(ActionMatrix::IDENTITY, |acc, _| acc.mul(self))
    }

    pub fn det(&self) -> i64 {
        let a = &self.0;
        a[0][0] * a[1][1] - a[0][1] * a[1][0]
    }

    /// `I - self`.
    pub fn one_minus(&self) -> ActionMatrix {
        let a = &self.0;
        ActionMatrix([[1 - a[0][0], -a[0][1]], [-a[1][0], 1 - a[1][1]]])
    }

    /// `Σ_{i<r} self^i`.
    pub fn norm(&self, r: u32) -> ActionMatrix {
        (0..r).fold(ActionMatrix([[0, 0], [0, 0]]), |acc, i| acc.add(&self.pow(i)))
    }

    /// Least `n >= 1` with `self^n = I`, searched up to 12.
    pub fn order(&self) -> Option<u32> {
        (1..=12).find(|&n| self.pow(n) == ActionMatrix::IDENTITY)
    }

    /// Exact solution `y` of `self · y = x`, if integral.
    pub fn solve(&self, x: [i64; 2]) -> Option<[i64; 2]> {
        let d = self.det();
        if d == 0 {
            return None;
        }
        let a = &self.0;
        let adj = [a[1][1] * x[0] - a[0][1] * x[1], -a[1][0] * x[0] + a[0][0] * x[1]];
        (adj[0] % d == 0 && adj[1] % d == 0).then(|| [adj[0] / d, adj[1] / d])
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(&self.0)
    }
}

impl fmt::Display for ActionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.0;
        write!(f, "[[{}, {}], [{}, {}]]", a[0][0], a[0][1], a[1][0], a[1][1])
    }
}

/// The rotation σ on `Z²` induced by the standard order-`m` automorphism.
pub fn action_matrix(m: u32) -> Result<ActionMatrix> {
    Ok(ActionMatrix(match m {
        4 => [[0, -1], [1, 0]],
        2 => [[-1, 0], [0, -1]],
        6 => [[0, -1], [1, 1]],
        3 => [[-1, -1], [1, 0]],
        other => return Err(Error::UnsupportedOrder(other)),
    }))
}

fn sigma_or_identity(m: u32) -> Result<ActionMatrix> {
    if m == 1 {
        Ok(ActionMatrix::IDENTITY)
    } else {
        action_matrix(m)
    }
}

/// `v · t^k` in `Z² ⋊_σ Z/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QElement {
    pub v: [i64; 2],
    k: u32,
    m: u32,
    sigma: ActionMatrix,
}

impl QElement {
    pub fn new(v: [i64; 2], k: i64, sigma: ActionMatrix) -> Self {
        let m = sigma.order().expect("action matrix of finite order");
        QElement { v, k: k.rem_euclid(m as i64) as u32, m, sigma }
    }

    /// Element of `Q` for the standard rotation of order `m`.
    pub fn standard(m: u32, v: [i64; 2], k: i64) -> Result<Self> {
        Ok(QElement::new(v, k, sigma_or_identity(m)?))
    }

    pub fn identity(sigma: ActionMatrix) -> Self {
        QElement::new([0, 0], 0, sigma)
    }

    pub fn t(sigma: ActionMatrix) -> Self {
        QElement::new([0, 0], 1, sigma)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn sigma(&self) -> ActionMatrix {
        self.sigma
    }

    pub fn is_identity(&self) -> bool {
        self.v == [0, 0] && self.k == 0
    }

    pub fn mul(&self, other: &QElement) -> Result<QElement> {
        if self.sigma != other.sigma {
            return Err(Error::ContextMismatch { left: self.m, right: other.m });
        }
        let w = self.sigma.pow(self.k).apply(other.v);
        Ok(QElement { v: [self.v[0] + w[0], self.v[1] + w[1]], k: (self.k + other.k) % self.m, ..*self })
    }

    pub fn inv(&self) -> QElement {
        let k = (self.m - self.k) % self.m;
        let back = self.sigma.pow(k).apply(self.v);
        QElement { v: [-back[0], -back[1]], k, ..*self }
    }

    pub fn pow(&self, n: i64) -> QElement {
        let base = if n < 0 { self.inv() } else { *self };
        let e = QElement { v: [0, 0], k: 0, ..*self };
        (0..n.unsigned_abs()).fold(e, |acc, _| acc.mul(&base).expect("same context"))
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &QElement) -> Result<QElement> {
        self.mul(other)?.mul(&self.inv())
    }
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})·t^{}", self.v[0], self.v[1], self.k)
    }
}

/// Image of `g` under `G → Q`, killing the center `<z_c>`.
///
/// Panics if a coordinate of `g` does not fit in an `i64`.
pub fn project(g: &TwistedElement) -> QElement {
    let c = |n: &BigInt| n.to_i64().expect("coordinate exceeds i64");
    QElement::new([c(&g.h.x), c(&g.h.z)], g.k() as i64, ActionMatrix(g.context().abelianized()))
}

pub fn q_order(q: &QElement) -> Order {
    if q.k == 0 {
        return if q.v == [0, 0] { Order::Finite(1) } else { Order::Infinite };
    }
    let j = q.m / q.m.gcd(&q.k);
    let n = q.sigma.pow(q.k).norm(j);
    if n.apply(q.v) == [0, 0] {
        Order::Finite(j as u64)
    } else {
        Order::Infinite
    }
}

/// All elements of the finite subgroup generated by `gens`, or `None` if
/// more than `limit` elements turn up.
pub fn q_closure(gens: &[QElement], limit: usize) -> Option<HashSet<QElement>> {
    let Some(first) = gens.first() else {
        return Some(HashSet::new());
    };
    let mut seen = HashSet::from([QElement::identity(first.sigma)]);
    let mut frontier: Vec<QElement> = seen.iter().copied().collect();
    while let Some(a) = frontier.pop() {
        for g in gens {
            let b = a.mul(g).ok()?;
            if seen.insert(b) {
                if seen.len() > limit {
                    return None;
                }
                frontier.push(b);
            }
        }
    }
    Some(seen)
}

fn g_key(g: &TwistedElement) -> (HeiElement, u32) {
    (g.h.clone(), g.k())
}

/// Elements of the finite subgroup of `G` generated by `gens`, or `None`
/// past `limit` elements.
pub fn g_closure(gens: &[TwistedElement], limit: usize) -> Option<Vec<TwistedElement>> {
    let Some(first) = gens.first() else {
        return Some(Vec::new());
    };
    let e = TwistedElement::identity(first.context());
    let mut seen = HashSet::from([g_key(&e)]);
    let mut elems = vec![e.clone()];
    let mut frontier = vec![e];
    while let Some(a) = frontier.pop() {
        for g in gens {
            let b = a.mul(g).ok()?;
            if seen.insert(g_key(&b)) {
                if seen.len() > limit {
                    return None;
                }
                elems.push(b.clone());
                frontier.push(b);
            }
        }
    }
    Some(elems)
}

/// A conjugacy class of subgroups, given by generators of one representative.
#[derive(Clone, Debug, Serialize)]
pub struct SubgroupClass {
    pub name: String,
    pub generators: Vec<String>,
    pub order: Order,
    pub maximal: bool,
    pub certificate: String,
    #[serde(skip)]
    pub q_generators: Vec<QElement>,
    #[serde(skip)]
    pub g_generators: Vec<TwistedElement>,
}

impl SubgroupClass {
    /// Closure enumeration reproduces the stated order (finite classes only).
    pub fn verify_order(&self) -> bool {
        let Order::Finite(n) = self.order else {
            return false;
        };
        let limit = n as usize + 1;
        let size = if !self.g_generators.is_empty() {
            g_closure(&self.g_generators, limit).map(|s| s.len())
        } else {
            q_closure(&self.q_generators, limit).map(|s| s.len())
        };
        size == Some(n as usize)
    }
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m % d == 0).collect()
}

fn vector_name(x: [i64; 2]) -> Option<String> {
    match x {
        [0, 0] => None,
        [1, 0] => Some("e1".into()),
        [0, 1] => Some("e2".into()),
        [1, 1] => Some("(e1+e2)".into()),
        [a, b] => Some(format!("({a},{b})")),
    }
}

fn t_name(k: u32) -> String {
    if k == 1 {
        "t".into()
    } else {
        format!("t^{k}")
    }
}

fn power_word(sym: &str, e: &BigInt) -> Option<String> {
    if e.is_zero() {
        None
    } else if *e == BigInt::from(1) {
        Some(sym.into())
    } else {
        Some(format!("{sym}^{e}"))
    }
}

/// Word `u^a v^c z^w` for a Heisenberg element, or empty for the identity.
pub fn hei_word(h: &HeiElement) -> String {
    let w = &h.y - &h.x * &h.z;
    [power_word("u", &h.x), power_word("v", &h.z), power_word("z", &w)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("")
}

fn q_name(x: [i64; 2], k: u32) -> String {
    match vector_name(x) {
        Some(v) => format!("<{v} {}>", t_name(k)),
        None => format!("<{}>", t_name(k)),
    }
}

fn g_name(g: &TwistedElement) -> String {
    let w = hei_word(&g.h);
    if w.is_empty() {
        format!("<{}>", t_name(g.k()))
    } else {
        format!("<{w} {}>", t_name(g.k()))
    }
}

// Representative preference inside an orbit: small sup norm, nonnegative
// entries, then e1 before e2.
fn rep_key(x: &[i64; 2]) -> (i64, bool, i64, i64) {
    (x[0].abs().max(x[1].abs()), x[0] < 0 || x[1] < 0, x[1], x[0])
}

struct Cokernel {
    u: IntMatrix,
    s: [i64; 2],
}

impl Cokernel {
    fn of(a: &ActionMatrix) -> Cokernel {
        let res = snf(&a.to_int_matrix());
        assert_eq!(res.rank(), 2, "I - σ^k must be nonsingular");
        let s = [res.invariants[0].to_i64().unwrap(), res.invariants[1].to_i64().unwrap()];
        Cokernel { u: res.u, s }
    }

    fn key(&self, x: [i64; 2]) -> [i64; 2] {
        let c = self.u.apply(&[BigInt::from(x[0]), BigInt::from(x[1])]);
        [
            c[0].mod_floor(&BigInt::from(self.s[0])).to_i64().unwrap(),
            c[1].mod_floor(&BigInt::from(self.s[1])).to_i64().unwrap(),
        ]
    }

    fn group(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(0, &self.s)
    }
}

/// A finite cyclic subgroup `<x·t^k>` of `Q` with `k | m`, `k < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionClass {
    pub x: [i64; 2],
    pub k: u32,
    pub order: u32,
    pub maximal: bool,
}

/// Conjugacy classes of nontrivial finite subgroups of `Q`.
///
/// Every finite subgroup is cyclic, generated by a unique element `x·t^k`
/// with `k | m`. Conjugating by `y` moves `x` by `(I - σ^k) y` and by `t`
/// rotates it, so classes are σ-orbits on `Z²/(I - σ^k)Z²`.
pub fn torsion_classes(m: u32) -> Result<Vec<TorsionClass>> {
    let sigma = sigma_or_identity(m)?;
    let mut out = Vec::new();
    for k in divisors(m).into_iter().filter(|&k| k < m) {
        let sk = sigma.pow(k);
        let coker = Cokernel::of(&sk.one_minus());
        let bound = coker.s[1];
        let mut seen: HashSet<[i64; 2]> = HashSet::new();
        let mut reps: Vec<[i64; 2]> = Vec::new();
        let mut candidates: Vec<[i64; 2]> = Vec::new();
        for a in -bound..=bound {
            for b in -bound..=bound {
                candidates.push([a, b]);
            }
        }
        candidates.sort_by_key(rep_key);
        for x in candidates {
            let key = coker.key(x);
            if seen.contains(&key) {
                continue;
            }
            // whole σ-orbit of this coset
            let mut y = x;
            for _ in 0..m {
                seen.insert(coker.key(y));
                y = sigma.apply(y);
            }
            reps.push(x);
        }
        for x in reps {
            let maximal = !divisors(k).into_iter().filter(|&kp| kp < k).any(|kp| {
                let n = sigma.pow(kp).norm(k / kp);
                n.solve(x).is_some()
            });
            out.push(TorsionClass { x, k, order: m / k, maximal });
        }
    }
    Ok(out)
}

fn q_class(c: &TorsionClass, sigma: ActionMatrix) -> SubgroupClass {
    let g = QElement::new(c.x, c.k as i64, sigma);
    let coker = Cokernel::of(&sigma.pow(c.k).one_minus());
    SubgroupClass {
        name: q_name(c.x, c.k),
        generators: vec![g.to_string()],
        order: Order::Finite(c.order as u64),
        maximal: c.maximal,
        certificate: format!(
            "k={}, Z^2/(I-s^{})Z^2 = {}, coset key {:?}",
            c.k,
            c.k,
            coker.group(),
            coker.key(c.x)
        ),
        q_generators: vec![g],
        g_generators: Vec::new(),
    }
}

pub fn classify_finite_subgroups_q(m: u32) -> Result<Vec<SubgroupClass>> {
    let sigma = sigma_or_identity(m)?;
    Ok(torsion_classes(m)?.iter().map(|c| q_class(c, sigma)).collect())
}

/// The finite-order lift of a torsion element `x·t^k` of `Q`, if one exists.
///
/// With `h = (x1, y, x2)`, `(h·t^k)^d = (x1, 0, x2)·t^k)^d · z_c^{d y}` since
/// `z_c` is central and fixed, and the left factor is a power `z_c^c`; so a
/// lift exists iff `d | c`, and then it is unique with `y = -c/d`.
pub fn lift_torsion(ctx: &Arc<Automorphism>, x: [i64; 2], k: u32) -> Option<TwistedElement> {
    let (g, d, c) = lift_data(ctx, x, k)?;
    if !c.is_multiple_of(&BigInt::from(d)) {
        return None;
    }
    let y = -(c / BigInt::from(d));
    Some(TwistedElement::new(HeiElement::new(g.h.x, y, g.h.z), k as i64, ctx))
}

// (h0 t^k, d, c) with (h0 t^k)^d = z_c^c, h0 = (x1, 0, x2); None if x t^k has
// infinite order in Q.
fn lift_data(ctx: &Arc<Automorphism>, x: [i64; 2], k: u32) -> Option<(TwistedElement, u64, BigInt)> {
    let g = TwistedElement::new(HeiElement::from_i64(x[0], 0, x[1]), k as i64, ctx);
    let Order::Finite(d) = q_order(&project(&g)) else {
        return None;
    };
    let p = g.pow(d as i64);
    debug_assert!(p.k() == 0 && p.h.x.is_zero() && p.h.z.is_zero());
    Some((g, d, p.h.y))
}

/// Conjugacy classes of nontrivial finite subgroups of `G`: exactly the
/// `Q`-classes admitting a finite lift (the lift is unique, so `G`-classes
/// correspond bijectively).
pub fn lift_finite_subgroups_g(m: u32) -> Result<Vec<SubgroupClass>> {
    let ctx = Arc::new(Automorphism::standard(m)?);
    let sigma = action_matrix(m)?;
    let classes = torsion_classes(m)?;
    let mut out = Vec::new();
    for c in &classes {
        let Some(g) = lift_torsion(&ctx, c.x, c.k) else { continue };
        // contained in a larger finite subgroup iff x = N y for a liftable y·t^k'
        let maximal = !divisors(c.k).into_iter().filter(|&kp| kp < c.k).any(|kp| {
            let n = sigma.pow(kp).norm(c.k / kp);
            n.solve(c.x).is_some_and(|y| lift_torsion(&ctx, y, kp).is_some())
        });
        let (_, d, cc) = lift_data(&ctx, c.x, c.k).expect("torsion");
        out.push(SubgroupClass {
            name: g_name(&g),
            generators: vec![g.to_string()],
            order: Order::Finite(c.order as u64),
            maximal,
            certificate: format!(
                "lifts {}: ((x1,0,x2) t^{})^{} = z^{}, y = {}",
                q_name(c.x, c.k),
                c.k,
                d,
                cc,
                g.h.y
            ),
            q_generators: vec![project(&g)],
            g_generators: vec![g],
        });
    }
    Ok(out)
}

/// `Q`-classes whose torsion elements do not lift, with the obstruction.
pub fn non_lifting_classes(m: u32) -> Result<Vec<(SubgroupClass, BigInt)>> {
    let ctx = Arc::new(Automorphism::standard(m)?);
    let sigma = action_matrix(m)?;
    let mut out = Vec::new();
    for c in torsion_classes(m)? {
        if lift_torsion(&ctx, c.x, c.k).is_none() {
            let (_, _, cc) = lift_data(&ctx, c.x, c.k).expect("torsion");
            out.push((q_class(&c, sigma), cc));
        }
    }
    Ok(out)
}

/// `p⁻¹(M)` for a finite cyclic `M = <x·t^k>` of `Q`.
#[derive(Clone, Debug, Serialize)]
pub struct Preimage {
    pub subgroup: String,
    pub generators: Vec<String>,
    pub iso_type: FgAbelianGroup,
    pub transcript: CheckReport,
    #[serde(skip)]
    pub g_generators: Vec<TwistedElement>,
}

/// Generators and isomorphism type of the preimage of `<x·t^k>` in `G`.
///
/// The preimage is generated by any lift `g` and the central `z_c`, subject
/// to `g^d = z_c^r` and `[g, z_c] = 1`, hence abelian of type
/// `coker [[d], [-r]]`. The relations are re-checked on the returned
/// generators.
pub fn preimage_subgroup(ctx: &Arc<Automorphism>, x: [i64; 2], k: u32) -> Result<Preimage> {
    let (g0, d, c) = lift_data(ctx, x, k)
        .ok_or_else(|| Error::InvalidAutomorphism(format!("{} has infinite order", q_name(x, k))))?;
    let dd = BigInt::from(d);
    let r = c.mod_floor(&dd);
    let shift = -((&c - &r) / &dd);
    let g = TwistedElement::new(HeiElement::new(g0.h.x.clone(), shift, g0.h.z.clone()), k as i64, ctx);
    let z = TwistedElement::from_hei(HeiElement::zc(), ctx);
    let iso_type = group_from_presentation(&IntMatrix::from_rows(
        &[vec![d as i64], vec![-r.to_i64().expect("r < d")]],
        1,
    ));
    let mut rep = CheckReport::new();
    let target = QElement::new(x, k as i64, ActionMatrix(ctx.abelianized()));
    rep.require(project(&g) == target, || format!("p({g}) != {target}"));
    rep.require(g.pow(d as i64) == z.pow(r.to_i64().unwrap()), || format!("{g}^{d} != z^{r}"));
    rep.require(g.commutator(&z)?.is_identity(), || format!("[{g}, z] != 1"));
    rep.require(order(&z) == Order::Infinite, || "z has finite order".into());
    rep.note(format!("{g}^{d} = z^{r}; [g, z] = 1; p(g) = {target}"));
    let gens = if r.is_zero() {
        rep.require(order(&g) == Order::Finite(d), || format!("{g} does not have order {d}"));
        vec![g, z]
    } else if r.gcd(&dd) == BigInt::from(1) {
        // (i, j) ↦ i r + j d identifies <g, z> with Z; w maps to 1.
        let ext = r.extended_gcd(&dd);
        let w = g.pow(ext.x.to_i64().unwrap()).mul(&z.pow(ext.y.to_i64().unwrap()))?;
        rep.require(w.pow(d as i64) == z, || format!("{w}^{d} != z"));
        rep.require(w.pow(r.to_i64().unwrap()) == g, || format!("{w}^{r} != {g}"));
        rep.require(order(&w) == Order::Infinite, || format!("{w} has finite order"));
        rep.note(format!("w = {w}: w^{d} = z, w^{r} = g"));
        vec![w]
    } else {
        vec![g, z]
    };
    Ok(Preimage {
        subgroup: q_name(x, k),
        generators: gens.iter().map(|g| g.to_string()).collect(),
        iso_type,
        transcript: rep,
        g_generators: gens,
    })
}

/// Bounded oracle for completeness and disjointness of the classification:
/// every torsion element `x·t^k` with `|x|∞ <= radius` generates a subgroup
/// conjugate (by some `y·t^i`, `|y|∞ <= conj_radius`) to exactly one listed
/// representative.
pub fn sweep_check(m: u32, radius: i64, conj_radius: i64) -> Result<CheckReport> {
    let sigma = action_matrix(m)?;
    let classes = torsion_classes(m)?;
    let mut rep = CheckReport::new();
    let mut swept = 0usize;
    for k in 1..m {
        let k0 = m.gcd(&k);
        // the element of <x t^k> over t^{k0}: power j with j k = k0 mod m
        let j = (1..=m).find(|j| (j * k) % m == k0).expect("k0 = gcd(k, m)");
        for a in -radius..=radius {
            for b in -radius..=radius {
                let q = QElement::new([a, b], k as i64, sigma);
                let target = q.pow(j as i64);
                swept += 1;
                let hits = classes
                    .iter()
                    .filter(|c| c.k == k0)
                    .filter(|c| conjugate_within(sigma, c.x, target, conj_radius))
                    .count();
                if hits != 1 {
                    rep.fail(format!("{q} lands in {hits} classes"));
                }
            }
        }
    }
    rep.note(format!("m={m}: {swept} torsion elements swept, conjugators |y| <= {conj_radius}"));
    Ok(rep)
}

fn conjugate_within(sigma: ActionMatrix, x: [i64; 2], target: QElement, radius: i64) -> bool {
    let m = target.m();
    let rep = QElement::new(x, target.k() as i64, sigma);
    for i in 0..m {
        for a in -radius..=radius {
            for b in -radius..=radius {
                let c = QElement::new([a, b], i as i64, sigma);
                if c.conjugate(&rep).expect("same context") == target {
                    return true;
                }
            }
        }
    }
    false
}

/// Bounded evidence that maximal finite subgroups are self-normalizing:
/// no `y·t^i` with `|y|∞ <= radius` outside `M` normalizes `M`.
pub fn normalizer_evidence(m: u32, radius: i64) -> Result<CheckReport> {
    let sigma = action_matrix(m)?;
    let mut rep = CheckReport::evidence();
    for c in torsion_classes(m)?.into_iter().filter(|c| c.maximal) {
        let gen = QElement::new(c.x, c.k as i64, sigma);
        let members = q_closure(&[gen], 16).expect("finite");
        let mut normalizers = 0;
        for i in 0..m {
            for a in -radius..=radius {
                for b in -radius..=radius {
                    let q = QElement::new([a, b], i as i64, sigma);
                    let conj = q.conjugate(&gen).expect("same context");
                    if members.contains(&conj) {
                        normalizers += 1;
                        if !members.contains(&q) {
                            rep.fail(format!("{q} normalizes {} without lying in it", q_name(c.x, c.k)));
                        }
                    }
                }
            }
        }
        rep.note(format!("{}: {normalizers} normalizing elements in the box, all inside", q_name(c.x, c.k)));
    }
    Ok(rep)
}

/// Randomized check of the conjugation identities in `Z² ⋊ Z/4`:
/// `y(xt²)y⁻¹ = (x+2y)t²`, `t(xt²)t⁻¹ = (ix)t²`, `y(xt)y⁻¹ = (x+y-iy)t`,
/// `t(xt)t⁻¹ = (ix)t`, and `(e1 t)² = (e1+e2) t²`.
pub fn conjugation_identities_check(seed: u64, trials: usize) -> CheckReport {
    let sigma = action_matrix(4).expect("m = 4");
    let i = |v: [i64; 2]| sigma.apply(v);
    let q = |v: [i64; 2], k: i64| QElement::new(v, k, sigma);
    let t = QElement::t(sigma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CheckReport::new();
    let mut samples: Vec<([i64; 2], [i64; 2])> = vec![([0, 0], [0, 0])];
    for _ in 0..trials {
        let mut r = || rng.gen_range(-1000..=1000);
        samples.push(([r(), r()], [r(), r()]));
    }
    for (x, y) in samples {
        let yy = q(y, 0);
        let checks = [
            (yy.conjugate(&q(x, 2)).unwrap(), q([x[0] + 2 * y[0], x[1] + 2 * y[1]], 2), "y(xt^2)y^-1"),
            (t.conjugate(&q(x, 2)).unwrap(), q(i(x), 2), "t(xt^2)t^-1"),
            (yy.conjugate(&q(x, 1)).unwrap(), q([x[0] + y[0] - i(y)[0], x[1] + y[1] - i(y)[1]], 1), "y(xt)y^-1"),
            (t.conjugate(&q(x, 1)).unwrap(), q(i(x), 1), "t(xt)t^-1"),
        ];
        for (lhs, rhs, what) in checks {
            rep.require(lhs == rhs, || format!("{what} at x={x:?}, y={y:?}: {lhs} != {rhs}"));
        }
    }
    let sq = q([1, 0], 1).pow(2);
    rep.require(sq == q([1, 1], 2), || format!("(e1 t)^2 = {sq}"));
    rep.note(format!("{} random (x, y) pairs, seed {seed}", trials + 1));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::hei;

    fn ctx(m: u32) -> Arc<Automorphism> {
        Arc::new(Automorphism::standard(m).unwrap())
    }

    fn names(v: &[SubgroupClass]) -> Vec<String> {
        v.iter().map(|c| c.name.clone()).collect()
    }

    #[test]
    fn action_matrices() {
        let s4 = action_matrix(4).unwrap();
        assert_eq!(s4.apply([1, 0]), [0, 1]);
        assert_eq!(action_matrix(2).unwrap(), ActionMatrix([[-1, 0], [0, -1]]));
        assert!(action_matrix(5).is_err());
        for (m, det) in [(4, 2), (2, 4), (6, 1), (3, 3)] {
            let s = action_matrix(m).unwrap();
            assert_eq!(s.pow(m), ActionMatrix::IDENTITY);
            assert_eq!(s.order(), Some(m));
            assert_eq!(s.one_minus().det(), det);
            assert_eq!(ActionMatrix(ctx(m).abelianized()), s);
            for j in 1..m {
                assert_ne!(s.pow(j).one_minus().det(), 0);
            }
        }
    }

    #[test]
    fn projection() {
        let c = ctx(4);
        let z = TwistedElement::from_hei(hei(0, 1, 0), &c);
        assert!(project(&z).is_identity());
        let u = TwistedElement::from_hei(hei(1, 0, 0), &c);
        assert_eq!(project(&u), QElement::standard(4, [1, 0], 0).unwrap());
        let a = TwistedElement::new(hei(2, -3, 5), 3, &c);
        let b = TwistedElement::new(hei(-1, 7, 4), 2, &c);
        assert_eq!(project(&a.mul(&b).unwrap()), project(&a).mul(&project(&b)).unwrap());
    }

    #[test]
    fn q_orders() {
        let q = |v, k| QElement::standard(4, v, k).unwrap();
        assert_eq!(q_order(&q([3, -7], 1)), Order::Finite(4));
        assert_eq!(q_order(&q([3, -7], 2)), Order::Finite(2));
        assert_eq!(q_order(&q([1, 0], 0)), Order::Infinite);
        assert_eq!(q_order(&q([0, 0], 0)), Order::Finite(1));
    }

    #[test]
    fn classify_m4() {
        let classes = classify_finite_subgroups_q(4).unwrap();
        assert_eq!(names(&classes), ["<t>", "<e1 t>", "<t^2>", "<e1 t^2>", "<(e1+e2) t^2>"]);
        let maximal: Vec<_> = classes.iter().filter(|c| c.maximal).map(|c| c.name.as_str()).collect();
        assert_eq!(maximal, ["<t>", "<e1 t>", "<e1 t^2>"]);
        assert!(classes.iter().all(SubgroupClass::verify_order));
    }

    #[test]
    fn classify_m2_m1() {
        let classes = classify_finite_subgroups_q(2).unwrap();
        assert_eq!(names(&classes), ["<t>", "<e1 t>", "<e2 t>", "<(e1+e2) t>"]);
        assert!(classes.iter().all(|c| c.maximal));
        assert!(classify_finite_subgroups_q(1).unwrap().is_empty());
    }

    #[test]
    fn classify_m3_m6() {
        let c3 = classify_finite_subgroups_q(3).unwrap();
        assert_eq!(c3.len(), 3);
        assert!(c3.iter().all(|c| c.maximal && c.order == Order::Finite(3)));
        let c6 = classify_finite_subgroups_q(6).unwrap();
        let summary: Vec<_> = c6.iter().map(|c| (c.order, c.maximal)).collect();
        use Order::Finite;
        assert_eq!(
            summary,
            [(Finite(6), true), (Finite(3), false), (Finite(3), true), (Finite(2), false), (Finite(2), true)]
        );
    }

    #[test]
    fn lifts() {
        let g4 = lift_finite_subgroups_g(4).unwrap();
        assert_eq!(names(&g4), ["<t>", "<t^2>", "<u t^2>"]);
        assert!(g4.iter().all(SubgroupClass::verify_order));
        let g2 = lift_finite_subgroups_g(2).unwrap();
        assert_eq!(names(&g2), ["<t>", "<u t>", "<v t>"]);
        let bad = non_lifting_classes(2).unwrap();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].0.name, "<(e1+e2) t>");
        // (uvt)^2 = z_c
        let c = ctx(2);
        let uvt = TwistedElement::new(hei(1, 1, 1), 1, &c);
        assert_eq!(uvt.pow(2), TwistedElement::from_hei(hei(0, 1, 0), &c));
        let e = QElement::identity(action_matrix(4).unwrap());
        assert!(lift_torsion(&ctx(4), e.v, 0).unwrap().is_identity());
    }

    #[test]
    fn preimages_m4() {
        let c = ctx(4);
        let p0 = preimage_subgroup(&c, [0, 0], 1).unwrap();
        assert_eq!(p0.iso_type, FgAbelianGroup::new(1, &[4]));
        assert_eq!(p0.generators, ["(0,0,0)·t^1", "(0,1,0)·t^0"]);
        let p1 = preimage_subgroup(&c, [1, 0], 1).unwrap();
        assert_eq!(p1.iso_type, FgAbelianGroup::free(1));
        assert_eq!(p1.generators, ["(1,0,0)·t^1"]);
        let p2 = preimage_subgroup(&c, [1, 0], 2).unwrap();
        assert_eq!(p2.iso_type, FgAbelianGroup::new(1, &[2]));
        for p in [p0, p1, p2] {
            assert!(p.transcript.passed(), "{:?}", p.transcript);
        }
    }

    #[test]
    fn conjugation_identities() {
        let r = conjugation_identities_check(0, 200);
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn sweep_and_normalizers() {
        for m in [2, 3, 4, 6] {
            let r = sweep_check(m, 3, 6).unwrap();
            assert!(r.passed(), "m={m}: {:?}", r);
            assert!(normalizer_evidence(m, 4).unwrap().passed());
        }
    }
}
