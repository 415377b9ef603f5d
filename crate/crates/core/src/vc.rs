//! Infinite dihedral subgroups of `Q = Z² ⋊ Z/4`, their preimages in
//! `G = Hei ⋊ Z/4`, and the product/twisted dichotomy for those preimages.
//!
//! Notation: `t²a` is the product `t² · a` for a translation `a`, so in
//! `(v, k)` coordinates `t²a = (-a, 2)` in `Q` and `t²h = (φ²(h), 2)` in `G`.
//! `V(a, n)` is the subgroup `<t²a, n>`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{group_from_presentation, FgAbelianGroup, IntMatrix};
use crate::group::{hei, order, Automorphism, HeiElement, Order, TwistedElement};
use crate::quotient::{action_matrix, project, q_order, ActionMatrix, QElement};
use crate::report::CheckReport;

fn ctx4() -> &'static Arc<Automorphism> {
    static CTX: OnceLock<Arc<Automorphism>> = OnceLock::new();
    CTX.get_or_init(|| Arc::new(Automorphism::standard(4).expect("m = 4")))
}

fn sigma4() -> ActionMatrix {
    action_matrix(4).expect("m = 4")
}

fn add(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn sub(a: [i64; 2], b: [i64; 2]) -> [i64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

/// `t²a` in `Q`.
pub fn q_t2(a: [i64; 2]) -> QElement {
    QElement::new([-a[0], -a[1]], 2, sigma4())
}

/// The translation `a` in `Q`.
pub fn q_trans(a: [i64; 2]) -> QElement {
    QElement::new(a, 0, sigma4())
}

/// `t²h` in `G`.
pub fn g_t2(h: HeiElement) -> TwistedElement {
    let ctx = ctx4();
    TwistedElement::new(ctx.apply_pow(2, &h), 2, ctx)
}

pub fn g_hei(h: HeiElement) -> TwistedElement {
    TwistedElement::from_hei(h, ctx4())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimitivePair {
    pub n1: i64,
    pub n2: i64,
}

impl PrimitivePair {
    /// `None` unless `n1 > 0`, `n2 >= 0` and `gcd(n1, n2) = 1`.
    pub fn new(n1: i64, n2: i64) -> Option<Self> {
        (n1 > 0 && n2 >= 0 && n1.gcd(&n2) == 1).then_some(PrimitivePair { n1, n2 })
    }

    pub fn vector(&self) -> [i64; 2] {
        [self.n1, self.n2]
    }

    pub fn parity(&self) -> ParityCase {
        if self.n1 % 2 == 0 {
            ParityCase::N1Even
        } else if self.n2 % 2 == 0 {
            ParityCase::N2Even
        } else {
            ParityCase::BothOdd
        }
    }
}

impl fmt::Display for PrimitivePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n1, self.n2)
    }
}

/// Primitive pairs `(n1, n2)` with `n1 > 0`, `n2 >= 0`, `max(n1, n2) <= height`,
/// in lexicographic order.
pub fn ic_plus(height: i64) -> Vec<PrimitivePair> {
    (1..=height)
        .flat_map(|n1| (0..=height).filter_map(move |n2| PrimitivePair::new(n1, n2)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCase {
    N1Even,
    N2Even,
    BothOdd,
}

impl fmt::Display for ParityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityCase::N1Even => "n1 even",
            ParityCase::N2Even => "n2 even",
            ParityCase::BothOdd => "n1 and n2 odd",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IsoType {
    #[serde(rename = "Dinf x Z")]
    Product,
    #[serde(rename = "Dinf x_a Z")]
    Twisted,
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoType::Product => "Dinf x Z",
            IsoType::Twisted => "Dinf x_a Z",
        })
    }
}

/// `V(a, n) = <t²a, n>` inside `Q`. Its translation part is `Z n` and its
/// involutions are exactly the `t²(a + jn)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QDihedral {
    pub offset: [i64; 2],
    pub lattice: [i64; 2],
}

/// Word in the generators `a = t²·offset`, `b = t²(offset + lattice)` of `V`:
/// `Translation(j)` is `(ab)^j`, `Reflection(j)` is `a (ab)^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DihedralWord {
    Translation(i64),
    Reflection(i64),
}

impl QDihedral {
    pub fn new(offset: [i64; 2], lattice: [i64; 2]) -> Self {
        QDihedral { offset, lattice }
    }

    pub fn generators(&self) -> [QElement; 2] {
        [q_t2(self.offset), q_trans(self.lattice)]
    }

    /// The involutions `s1 = t²a`, `s2 = t²(a + n)`; `s1 s2 = n`.
    pub fn involutions(&self) -> [QElement; 2] {
        [q_t2(self.offset), q_t2(add(self.offset, self.lattice))]
    }

    /// `j` with `v = j · lattice`, if any.
    fn multiple(&self, v: [i64; 2]) -> Option<i64> {
        let n = self.lattice;
        if n == [0, 0] {
            return (v == [0, 0]).then_some(0);
        }
        let (i, other) = if n[0] != 0 { (0, 1) } else { (1, 0) };
        if v[i] % n[i] != 0 {
            return None;
        }
        let j = v[i] / n[i];
        (v[other] == j * n[other]).then_some(j)
    }

    /// Normal form of `q` as a word in `a, b`, or `None` if `q ∉ V`.
    pub fn word(&self, q: &QElement) -> Option<DihedralWord> {
        match q.k() {
            0 => self.multiple(q.v).map(DihedralWord::Translation),
            2 => self.multiple(sub([-q.v[0], -q.v[1]], self.offset)).map(DihedralWord::Reflection),
            _ => None,
        }
    }

    pub fn contains(&self, q: &QElement) -> bool {
        self.word(q).is_some()
    }

    /// Whether `<gens> = V`: all lie in `V`, some is a reflection, and the
    /// translation subgroup they generate is all of `Z n`.
    pub fn generated_by(&self, gens: &[QElement]) -> std::result::Result<(), String> {
        let mut words = Vec::new();
        for g in gens {
            match self.word(g) {
                Some(w) => words.push(w),
                None => return Err(format!("{g} is not in {self}")),
            }
        }
        let refl: Vec<i64> = words
            .iter()
            .filter_map(|w| match w {
                DihedralWord::Reflection(j) => Some(*j),
                _ => None,
            })
            .collect();
        let Some(&r0) = refl.first() else {
            return Err("no reflection among the generators".into());
        };
        let d = words
            .iter()
            .map(|w| match w {
                DihedralWord::Translation(j) => *j,
                DihedralWord::Reflection(j) => j - r0,
            })
            .fold(0i64, |acc, j| acc.gcd(&j));
        if d == 1 {
            Ok(())
        } else {
            Err(format!("generators only reach translations by {d}·{:?}", self.lattice))
        }
    }

    /// `g V g⁻¹ = other`, tested on generators.
    pub fn conjugate_equals(&self, g: &QElement, other: &QDihedral) -> bool {
        let ginv = g.inv();
        self.generators().iter().all(|x| other.contains(&g.conjugate(x).expect("m = 4")))
            && other.generators().iter().all(|x| self.contains(&ginv.conjugate(x).expect("m = 4")))
    }
}

impl fmt::Display for QDihedral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2] = self.offset;
        let [n1, n2] = self.lattice;
        if self.offset == [0, 0] {
            write!(f, "<t^2, ({n1},{n2})>")
        } else {
            write!(f, "<t^2({a1},{a2}), ({n1},{n2})>")
        }
    }
}

/// `V∩Z²` is generated by a primitive vector.
pub fn vmax_check(v: &QDihedral) -> bool {
    v.lattice != [0, 0] && v.lattice[0].gcd(&v.lattice[1]) == 1
}

/// One row of the table of `D∞` subgroups of `Q`, together with the
/// listed generators of its preimage in `G`.
#[derive(Clone, Debug)]
pub struct DihedralFamily {
    pub pair: PrimitivePair,
    pub parity: ParityCase,
    /// Row of the six-row table (1..=6); 0 for families built by
    /// [`corrected_representatives`].
    pub row: u8,
    pub q: QDihedral,
    /// `(s1, s2, z)` in the order of the claimed presentation.
    pub preimage: [TwistedElement; 3],
    pub claimed: IsoType,
}

impl DihedralFamily {
    pub fn name(&self) -> String {
        if self.row == 0 {
            format!("{} [{}]", self.q, self.parity)
        } else {
            format!("{} [{}, row {}]", self.q, self.parity, self.row)
        }
    }

    pub fn q_generators(&self) -> [QElement; 2] {
        self.q.generators()
    }

    pub fn preimage_strings(&self) -> Vec<String> {
        self.preimage.iter().map(|g| g.to_string()).collect()
    }
}

fn half(n: i64) -> i64 {
    debug_assert!(n % 2 == 0);
    n / 2
}

/// The literal table. Rows 1, 3, 5 use offset 0; rows 2, 4, 6 use the
/// printed offsets `(0,1)`, `(1,0)`, `(1,0)`.
pub fn table_rows(pair: PrimitivePair) -> Vec<DihedralFamily> {
    let [n1, n2] = pair.vector();
    let n = pair.vector();
    let z = g_hei(HeiElement::zc());
    let parity = pair.parity();
    let fam = |row: u8, offset: [i64; 2], preimage: [TwistedElement; 3], claimed| DihedralFamily {
        pair,
        parity,
        row,
        q: QDihedral::new(offset, n),
        preimage,
        claimed,
    };
    match parity {
        ParityCase::N1Even | ParityCase::N2Even => {
            let base = if parity == ParityCase::N1Even { 1 } else { 3 };
            let second = if parity == ParityCase::N1Even { ([0, 1], hei(0, 0, 1)) } else { ([1, 0], hei(1, 0, 0)) };
            let s2 = g_t2(hei(n1, half(n1 * n2), n2));
            vec![
                fam(base, [0, 0], [g_t2(hei(0, 0, 0)), s2.clone(), z.clone()], IsoType::Product),
                fam(base + 1, second.0, [g_t2(second.1), s2, z], IsoType::Product),
            ]
        }
        ParityCase::BothOdd => {
            let w = g_hei(hei(n1, (n1 * n2 + 1) / 2, n2));
            vec![
                fam(5, [0, 0], [g_t2(hei(0, 0, 0)), g_t2(hei(2 * n1, 2 * n1 * n2, 2 * n2)), w.clone()], IsoType::Twisted),
                fam(
                    6,
                    [1, 0],
                    [g_t2(hei(1, 0, 0)), g_t2(hei(2 * n1 + 1, 2 * n1 * n2 + n2, 2 * n2)), w],
                    IsoType::Twisted,
                ),
            ]
        }
    }
}

/// The two listed families for every pair of `ic_plus(height)`.
pub fn dinfty_representatives(height: i64) -> Vec<DihedralFamily> {
    ic_plus(height).into_iter().flat_map(table_rows).collect()
}

/// `t²c` lifts to an involution of `G` iff `c1 c2` is even; the lift is
/// `t²(c1, c1c2/2, c2)`.
pub fn involution_lift(c: [i64; 2]) -> Option<TwistedElement> {
    ((c[0] * c[1]) % 2 == 0).then(|| g_t2(hei(c[0], half(c[0] * c[1]), c[1])))
}

/// Isomorphism type of `p⁻¹(V)` read off from its abelianization.
///
/// `p⁻¹(V)` is the central extension `<S1, S2, z | S1² = z^e1, S2² = z^e2,
/// z central>` where `S_i` lift the involutions `t²a`, `t²(a+n)` and `e_i`
/// is the parity of the coordinate product. Its abelianization is
/// `Z + Z/2 + Z/2` for `Dinf x Z` and `Z + Z/2` for `Dinf x_a Z`.
pub fn preimage_abelianization(v: &QDihedral) -> FgAbelianGroup {
    let e = |c: [i64; 2]| (c[0] * c[1]).rem_euclid(2);
    let e1 = e(v.offset);
    let e2 = e(add(v.offset, v.lattice));
    group_from_presentation(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 2], vec![-e1, -e2]], 2))
}

pub fn actual_iso_type(v: &QDihedral) -> Option<IsoType> {
    let ab = preimage_abelianization(v);
    if ab == FgAbelianGroup::new(1, &[2, 2]) {
        Some(IsoType::Product)
    } else if ab == FgAbelianGroup::new(1, &[2]) {
        Some(IsoType::Twisted)
    } else {
        None
    }
}

/// Free-group word: `(generator index, ±1)` letters.
type Word = Vec<(usize, i64)>;

fn eval_q(word: &Word, gens: &[QElement]) -> QElement {
    word.iter().fold(QElement::identity(sigma4()), |acc, &(i, e)| acc.mul(&gens[i].pow(e)).expect("m = 4"))
}

fn eval_g(word: &Word, gens: &[TwistedElement]) -> TwistedElement {
    word.iter().fold(TwistedElement::identity(ctx4()), |acc, &(i, e)| acc.mul(&gens[i].pow(e)).expect("m = 4"))
}

fn inverse_word(w: &Word) -> Word {
    w.iter().rev().map(|&(i, e)| (i, -e)).collect()
}

/// Shortest words (length <= `max_len`) in `gens` evaluating to each target.
fn find_words(gens: &[QElement], targets: &[QElement], max_len: usize) -> Option<Vec<Word>> {
    let mut found: HashMap<QElement, Word> = HashMap::new();
    let mut layer: Vec<(QElement, Word)> = vec![(QElement::identity(sigma4()), Vec::new())];
    found.insert(layer[0].0, Vec::new());
    for _ in 0..max_len {
        if targets.iter().all(|t| found.contains_key(t)) {
            break;
        }
        let mut next = Vec::new();
        for (q, w) in &layer {
            for (i, g) in gens.iter().enumerate() {
                for e in [1, -1] {
                    let r = q.mul(&g.pow(e)).expect("m = 4");
                    if !found.contains_key(&r) {
                        let mut w2 = w.clone();
                        w2.push((i, e));
                        found.insert(r, w2.clone());
                        next.push((r, w2));
                    }
                }
            }
        }
        layer = next;
    }
    targets.iter().map(|t| found.get(t).cloned()).collect()
}

/// The `n` with `g = z_c^n`, if `g` is central of that form.
fn central_exponent(g: &TwistedElement) -> Option<BigInt> {
    (g.k() == 0 && g.h.x.is_zero() && g.h.z.is_zero()).then(|| g.h.y.clone())
}

/// Index `c` with `H ∩ <z_c> = <z_c^c>`, where `H = <gens>` maps onto `v`.
///
/// With `a = A(x)`, `b = B(x)` words for the standard involutions and
/// `x_i = W_i(a, b)`, Tietze moves turn `<a, b | a², b²>` into a
/// presentation of `v` on the `x_i` with relators `A(x)²`, `B(x)²`,
/// `x_i⁻¹ W_i(A(x), B(x))`. Their lifts are central and generate the kernel
/// of `H → v`, so `c` is the gcd of their exponents (0 if all vanish).
pub fn kernel_index(v: &QDihedral, gens: &[TwistedElement], rep: &mut CheckReport) -> Option<BigInt> {
    let qs: Vec<QElement> = gens.iter().map(project).collect();
    let [a, b] = v.involutions();
    let Some(ab) = find_words(&qs, &[a, b], 6) else {
        rep.fail(format!("no word of length <= 6 reaches the involutions of {v}"));
        return None;
    };
    let (wa, wb) = (&ab[0], &ab[1]);
    let mut relators: Vec<Word> = vec![[wa.clone(), wa.clone()].concat(), [wb.clone(), wb.clone()].concat()];
    let abw: Word = [wa.clone(), wb.clone()].concat();
    for (i, q) in qs.iter().enumerate() {
        let body: Word = match v.word(q)? {
            DihedralWord::Translation(j) => (0..j.abs()).flat_map(|_| if j > 0 { abw.clone() } else { inverse_word(&abw) }).collect(),
            DihedralWord::Reflection(j) => {
                let mut w = wa.clone();
                for _ in 0..j.abs() {
                    w.extend(if j > 0 { abw.clone() } else { inverse_word(&abw) });
                }
                w
            }
        };
        relators.push([vec![(i, -1)], body].concat());
    }
    let mut c = BigInt::zero();
    for r in &relators {
        let g = eval_g(r, gens);
        debug_assert!(eval_q(r, &qs).is_identity());
        match central_exponent(&g) {
            Some(e) => c = c.gcd(&e),
            None => {
                rep.fail(format!("lifted relator {g} is not central"));
                return None;
            }
        }
    }
    Some(c)
}

/// Result of instantiating and checking the preimage generators of a family.
#[derive(Clone, Debug, Serialize)]
pub struct PreimageCheck {
    pub family: String,
    pub generators: Vec<String>,
    pub kernel_index: Option<String>,
    pub report: CheckReport,
}

/// Checks the listed preimage generators of `f`: the torsion generators
/// have order 2, the displayed identities hold, the generators project onto
/// `V`, and they generate all of `p⁻¹(V)` (kernel index 1).
pub fn preimage_generators(f: &DihedralFamily) -> PreimageCheck {
    let mut rep = CheckReport::new();
    let [s1, s2, _] = &f.preimage;
    for (name, s) in [("s1", s1), ("s2", s2)] {
        let o = order(s);
        rep.require(o == Order::Finite(2), || format!("{name} = {s} has order {o}, expected 2"));
    }
    let [n1, n2] = f.pair.vector();
    if f.parity == ParityCase::BothOdd {
        let w = hei(n1, (n1 * n2 + 1) / 2, n2);
        let lhs = w.pow(&BigInt::from(2));
        let rhs = hei(2 * n1, 2 * n1 * n2, 2 * n2).mul(&HeiElement::zc());
        rep.require(lhs == rhs, || format!("square identity at {}: {lhs} != {rhs}", f.pair));
        if f.row == 6 {
            let lhs = hei(2 * n1 + 1, 2 * n1 * n2 + n2, 2 * n2);
            let rhs = HeiElement::u().mul(&hei(2 * n1, 2 * n1 * n2, 2 * n2));
            rep.require(lhs == rhs, || format!("product identity at {}: {lhs} != (1,0,0)·(2n1,2n1n2,2n2) = {rhs}", f.pair));
        }
    } else {
        rep.require((n1 * n2) % 2 == 0, || format!("n1 n2 / 2 not integral at {}", f.pair));
    }
    let qs: Vec<QElement> = f.preimage.iter().map(project).collect();
    let onto = f.q.generated_by(&qs);
    let mut index = None;
    if rep.require(onto.is_ok(), || format!("projection of the generators is not {}: {}", f.q, onto.clone().unwrap_err())) {
        index = kernel_index(&f.q, &f.preimage, &mut rep);
        if let Some(c) = &index {
            rep.require(c.is_one(), || {
                format!("generators meet the center in <z_c^{c}>, so they generate a subgroup of index {c} in the preimage")
            });
        }
    }
    if rep.passed() {
        rep.note(format!("{}: generators verified", f.name()));
    }
    PreimageCheck {
        family: f.name(),
        generators: f.preimage_strings(),
        kernel_index: index.map(|c| c.to_string()),
        report: rep,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoTypeCheck {
    pub family: String,
    pub claimed: IsoType,
    /// Which relation set the three generators satisfy.
    pub relations: Option<IsoType>,
    /// Type of the full preimage, from its abelianization.
    pub actual: Option<IsoType>,
    pub abelianization: String,
    pub report: CheckReport,
}

/// Tests the product relations `[s_i, z] = 1` and the twisted relation
/// `z⁻¹ s1 z = s2` on the listed generators, and compares the claimed type
/// with the type of the full preimage.
pub fn iso_type_check(f: &DihedralFamily) -> IsoTypeCheck {
    let mut rep = CheckReport::new();
    let [s1, s2, z] = &f.preimage;
    let [q1, q2] = f.q.involutions();
    rep.require(q1 != q2 && q_order(&q1.mul(&q2).expect("m = 4")) == Order::Infinite, || {
        format!("{} is not infinite dihedral", f.q)
    });
    let invol = s1.pow(2).is_identity() && s2.pow(2).is_identity();
    let product = invol && s1.commutator(z).expect("m = 4").is_identity() && s2.commutator(z).expect("m = 4").is_identity();
    let twisted = invol && z.inv().mul(s1).and_then(|x| x.mul(z)).expect("m = 4") == *s2;
    let relations = match (product, twisted) {
        (true, _) if f.claimed == IsoType::Product => Some(IsoType::Product),
        (_, true) if f.claimed == IsoType::Twisted => Some(IsoType::Twisted),
        (true, _) => Some(IsoType::Product),
        (_, true) => Some(IsoType::Twisted),
        _ => None,
    };
    rep.require(relations.is_some(), || format!("{}: neither relation set holds", f.name()));
    rep.require(relations.is_none() || relations == Some(f.claimed), || {
        format!("{}: generators satisfy the {} relations, not the claimed {}", f.name(), relations.unwrap(), f.claimed)
    });
    let ab = preimage_abelianization(&f.q);
    let actual = actual_iso_type(&f.q);
    rep.require(actual == Some(f.claimed), || {
        format!("{}: preimage has abelianization {ab}, so it is {}, not {}", f.name(), actual.map_or("?".into(), |t| t.to_string()), f.claimed)
    });
    IsoTypeCheck { family: f.name(), claimed: f.claimed, relations, actual, abelianization: ab.to_string(), report: rep }
}

/// Representatives `V(a, n)` for the two conjugacy classes over each pair,
/// with preimage generators built from involution lifts.
///
/// Conjugation by translations moves `a` by `2Z²` and `a` is only defined
/// modulo `Z n`, so the classes over `n` are indexed by `Z²/(2Z² + Zn)`,
/// which has two elements: offset 0 and the unit vector not congruent to
/// `n` mod 2.
pub fn corrected_representatives(height: i64) -> Vec<DihedralFamily> {
    ic_plus(height).into_iter().flat_map(corrected_rows).collect()
}

pub fn corrected_rows(pair: PrimitivePair) -> Vec<DihedralFamily> {
    let n = pair.vector();
    let other = if n[0] % 2 == 0 { [1, 0] } else { [0, 1] };
    [[0, 0], other]
        .into_iter()
        .map(|a| {
            let q = QDihedral::new(a, n);
            let (preimage, claimed) = corrected_generators(&q);
            DihedralFamily { pair, parity: pair.parity(), row: 0, q, preimage, claimed }
        })
        .collect()
}

fn corrected_generators(q: &QDihedral) -> ([TwistedElement; 3], IsoType) {
    let [c1, c2] = [q.offset, add(q.offset, q.lattice)];
    let z = g_hei(HeiElement::zc());
    match (involution_lift(c1), involution_lift(c2)) {
        (Some(s1), Some(s2)) => ([s1, s2, z], IsoType::Product),
        (l1, l2) => {
            // exactly one of the two involution classes lifts
            let (s1, shift) = match (l1, l2) {
                (Some(s), None) => (s, q.lattice),
                (None, Some(s)) => (s, [-q.lattice[0], -q.lattice[1]]),
                _ => unreachable!("t²a and t²(a+n) differ mod 2, so one lifts"),
            };
            let v = QDihedral::new(if shift == q.lattice { c1 } else { c2 }, shift);
            // (s1 s2)⁻¹ w² is central with exponent e0 + 2y, where e0 is odd
            // because t²(b + n) does not lift; pick y to make it z_c itself.
            let conj = |w: &TwistedElement| w.inv().mul(&s1).and_then(|x| x.mul(w)).expect("m = 4");
            let w0 = g_hei(hei(shift[0], 0, shift[1]));
            let probe = s1.mul(&conj(&w0)).expect("m = 4").inv().mul(&w0.pow(2)).expect("m = 4");
            let e0 = central_exponent(&probe).expect("central");
            let y: BigInt = (BigInt::one() - e0) / 2;
            let w = g_hei(HeiElement::new(BigInt::from(shift[0]), y, BigInt::from(shift[1])));
            let gens = [s1.clone(), conj(&w), w];
            let mut scratch = CheckReport::new();
            debug_assert!(kernel_index(&v, &gens, &mut scratch).is_some_and(|c| c.is_one()));
            (gens, IsoType::Twisted)
        }
    }
}

/// The three conjugation formulas on random inputs, then a bounded search
/// for conjugators between listed representatives.
pub fn conjugacy_disjointness_check(families: &[DihedralFamily], height: i64, seed: u64, trials: usize) -> CheckReport {
    let mut rep = CheckReport::evidence();
    let sigma = sigma4();
    let t = QElement::t(sigma);
    let t2 = t.pow(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut r = || rng.gen_range(-1000i64..=1000);
        let (n, m) = ([r(), r()], [r(), r()]);
        let mm = q_trans(m);
        let x = q_t2(n);
        let lhs = mm.inv().mul(&x).and_then(|y| y.mul(&mm)).expect("m = 4");
        rep.require(lhs == q_t2([n[0] + 2 * m[0], n[1] + 2 * m[1]]), || format!("m⁻¹(t²n)m at n={n:?}, m={m:?}: {lhs}"));
        let lhs = t.conjugate(&x).expect("m = 4");
        rep.require(lhs == q_t2([-n[1], n[0]]), || format!("t(t²n)t⁻¹ at n={n:?}: {lhs}"));
        let lhs = t2.conjugate(&x).expect("m = 4");
        rep.require(lhs == q_t2([-n[0], -n[1]]), || format!("t²(t²n)t⁻² at n={n:?}: {lhs}"));
    }
    rep.note(format!("conjugation formulas on {trials} random inputs, seed {seed}"));

    let radius = 2 * height;
    let mut conjugators: Vec<QElement> = (0..4)
        .flat_map(|k| (-radius..=radius).flat_map(move |x| (-radius..=radius).map(move |y| QElement::new([x, y], k, sigma))))
        .collect();
    // smallest witnesses first
    conjugators.sort_by_key(|g| (g.v[0].abs().max(g.v[1].abs()), g.k(), g.v));
    // Conjugation by y t^k carries V∩Z² = Zn to Z σ^k n, so only pairs with
    // rotated lattices can be conjugate.
    let rotations: Vec<ActionMatrix> = (0..4).map(|k| sigma.pow(k)).collect();
    let related = |a: [i64; 2], b: [i64; 2]| rotations.iter().any(|r| r.apply(a) == b || r.apply(a) == [-b[0], -b[1]]);
    let mut searched = 0usize;
    let mut hits = 0usize;
    for (i, f) in families.iter().enumerate() {
        // own elements fix V
        for g in f.q.generators() {
            rep.require(f.q.conjugate_equals(&g, &f.q), || format!("{} is not normalized by its generator {g}", f.name()));
        }
        for f2 in &families[i + 1..] {
            if !related(f.q.lattice, f2.q.lattice) {
                continue;
            }
            searched += 1;
            if let Some(g) = conjugators.iter().find(|g| f.q.conjugate_equals(g, &f2.q)) {
                hits += 1;
                if hits <= 10 {
                    rep.fail(format!("{} and {} are conjugate by {g}", f.name(), f2.name()));
                }
            }
        }
    }
    if hits > 10 {
        rep.fail(format!("{} conjugate pairs in total", hits));
    }
    rep.note(format!(
        "{} representatives, {searched} pairs with related lattices searched over {} conjugators (radius {radius})",
        families.len(),
        conjugators.len()
    ));
    rep
}

/// Aggregate of the per-family checks over a list of families.
#[derive(Clone, Debug, Serialize)]
pub struct VcSuite {
    pub pairs: usize,
    pub families: usize,
    pub vmax: CheckReport,
    pub preimage: CheckReport,
    pub iso_type: CheckReport,
    pub square_identity: CheckReport,
}

impl VcSuite {
    pub fn passed(&self) -> bool {
        [&self.vmax, &self.preimage, &self.iso_type, &self.square_identity].iter().all(|r| r.passed())
    }
}

/// Per-family checks; failures are summarized by row so reports stay short.
pub fn vc_suite(families: &[DihedralFamily], height: i64) -> VcSuite {
    let mut vmax = CheckReport::new();
    let mut preimage = CheckReport::new();
    let mut iso = CheckReport::new();
    let mut fails: HashMap<(&'static str, u8), (usize, String)> = HashMap::new();
    let mut record = |kind: &'static str, row: u8, first: &CheckReport| {
        let e = fails.entry((kind, row)).or_insert((0, first.lines.iter().find(|l| l.starts_with("FAIL")).cloned().unwrap_or_default()));
        e.0 += 1;
    };
    for f in families {
        if !vmax_check(&f.q) {
            vmax.fail(format!("{}: lattice not primitive", f.name()));
        }
        let [q1, q2] = f.q.involutions();
        let diff = q1.inv().mul(&q2).expect("m = 4");
        if !(diff.k() == 0 && f.q.contains(&diff)) {
            vmax.fail(format!("{}: involutions do not differ by a translation of V", f.name()));
        }
        let p = preimage_generators(f);
        if !p.report.passed() {
            record("preimage", f.row, &p.report);
        }
        let t = iso_type_check(f);
        if !t.report.passed() {
            record("iso-type", f.row, &t.report);
        }
    }
    let mut keys: Vec<_> = fails.keys().copied().collect();
    keys.sort();
    for key in keys {
        let (count, first) = &fails[&key];
        let target = if key.0 == "preimage" { &mut preimage } else { &mut iso };
        let label = if key.1 == 0 { "corrected families".to_string() } else { format!("row {}", key.1) };
        target.fail(format!("{label}: {count} families fail, first: {}", first.trim_start_matches("FAIL: ")));
    }
    let mut square = CheckReport::new();
    let pairs = ic_plus(height);
    let mut odd = 0;
    for p in &pairs {
        if p.parity() != ParityCase::BothOdd {
            continue;
        }
        odd += 1;
        let [n1, n2] = p.vector();
        let lhs = hei(n1, (n1 * n2 + 1) / 2, n2).pow(&BigInt::from(2));
        let rhs = hei(2 * n1, 2 * n1 * n2, 2 * n2).mul(&HeiElement::zc());
        square.require(lhs == rhs, || format!("{p}: {lhs} != {rhs}"));
    }
    square.note(format!("square identity checked at {odd} both-odd pairs"));
    for (r, what) in [(&mut vmax, "vmax"), (&mut preimage, "preimage"), (&mut iso, "iso-type")] {
        if r.passed() {
            r.note(format!("{what}: {} families pass", families.len()));
        }
    }
    VcSuite { pairs: pairs.len(), families: families.len(), vmax, preimage, iso_type: iso, square_identity: square }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n1: i64, n2: i64) -> PrimitivePair {
        PrimitivePair::new(n1, n2).unwrap()
    }

    #[test]
    fn ic_plus_enumeration() {
        assert_eq!(ic_plus(0), vec![]);
        assert_eq!(ic_plus(1), vec![pair(1, 0), pair(1, 1)]);
        assert_eq!(ic_plus(2), vec![pair(1, 0), pair(1, 1), pair(1, 2), pair(2, 1)]);
        assert!(PrimitivePair::new(0, 1).is_none());
        assert!(PrimitivePair::new(2, 4).is_none());
        // brute-force count oracle
        let brute = (1..=20i64).flat_map(|a| (0..=20i64).map(move |b| (a, b))).filter(|&(a, b)| a.gcd(&b) == 1).count();
        assert_eq!(ic_plus(20).len(), brute);
        assert_eq!(brute, 256);
    }

    #[test]
    fn literal_rows() {
        let r = table_rows(pair(1, 0));
        assert_eq!(r.iter().map(|f| f.q.to_string()).collect::<Vec<_>>(), ["<t^2, (1,0)>", "<t^2(1,0), (1,0)>"]);
        let r = table_rows(pair(1, 1));
        assert_eq!(r.iter().map(|f| f.q.to_string()).collect::<Vec<_>>(), ["<t^2, (1,1)>", "<t^2(1,0), (1,1)>"]);
        for f in dinfty_representatives(5) {
            let [a, b] = f.q.involutions();
            assert_eq!(q_order(&a), Order::Finite(2));
            assert_eq!(q_order(&b), Order::Finite(2));
            assert_ne!(a, b);
        }
    }

    #[test]
    fn vmax() {
        assert!(vmax_check(&QDihedral::new([0, 0], [1, 0])));
        assert!(!vmax_check(&QDihedral::new([0, 0], [2, 0])));
        assert!(vmax_check(&QDihedral::new([0, 0], [3, 2])));
    }

    #[test]
    fn conjugation_formulas_and_membership() {
        let v = QDihedral::new([1, 0], [3, 1]);
        for g in v.generators() {
            assert!(v.conjugate_equals(&g, &v));
        }
        // <t²a, n> = <t²a', n> iff a - a' ∈ Zn
        assert!(v.conjugate_equals(&QElement::identity(sigma4()), &QDihedral::new([4, 1], [3, 1])));
        assert!(!v.conjugate_equals(&QElement::identity(sigma4()), &QDihedral::new([0, 0], [3, 1])));
        // translation by m shifts the offset by 2m
        let m = q_trans([1, 2]);
        assert!(v.conjugate_equals(&m.inv(), &QDihedral::new([3, 4], [3, 1])));
    }

    #[test]
    fn square_identity_instance() {
        let w = hei(1, 1, 1);
        assert_eq!(w.pow(&BigInt::from(2)), hei(2, 2, 2).mul(&HeiElement::zc()));
    }

    #[test]
    fn product_rows_verify() {
        // rows 1 and 3 are correct as printed
        for p in ic_plus(8) {
            for f in table_rows(p).into_iter().filter(|f| f.row == 1 || f.row == 3 || f.row == 5) {
                let pc = preimage_generators(&f);
                assert!(pc.report.passed(), "{:?}", pc.report);
                assert_eq!(pc.kernel_index.as_deref(), Some("1"));
                assert!(iso_type_check(&f).report.passed(), "{}", f.name());
            }
        }
        let f = &table_rows(pair(1, 0))[0];
        assert_eq!(f.preimage_strings(), ["(0,0,0)·t^2", "(-1,0,0)·t^2", "(0,1,0)·t^0"]);
    }

    #[test]
    fn printed_second_rows_are_conjugate_to_first() {
        // offsets (0,1) for n1 even and (1,0) for n2 even are ≡ n mod 2
        let fams = dinfty_representatives(4);
        let rep = conjugacy_disjointness_check(&fams, 4, 0, 20);
        assert!(!rep.passed());
        let f = &table_rows(pair(1, 0));
        assert!(f[0].q.conjugate_equals(&QElement::identity(sigma4()), &f[1].q));
    }

    #[test]
    fn printed_rows_2_4_do_not_project() {
        for p in [pair(2, 1), pair(1, 2), pair(3, 2)] {
            let f = table_rows(p).into_iter().find(|f| f.row == 2 || f.row == 4).unwrap();
            let pc = preimage_generators(&f);
            assert!(!pc.report.passed());
            assert!(pc.report.details().contains("projection"), "{}", pc.report.details());
        }
    }

    #[test]
    fn printed_row_6() {
        for p in [pair(1, 1), pair(3, 1), pair(1, 3), pair(5, 7)] {
            let f = table_rows(p).into_iter().find(|f| f.row == 6).unwrap();
            // the generators do satisfy the twisted relations
            let t = iso_type_check(&f);
            assert_eq!(t.relations, Some(IsoType::Twisted));
            // but the full preimage is a product
            assert_eq!(t.actual, Some(IsoType::Product));
            let pc = preimage_generators(&f);
            assert_eq!(pc.kernel_index, Some((p.n2 + 1).to_string()));
            assert!(pc.report.details().contains("product identity"));
        }
    }

    #[test]
    fn corrected_classification() {
        let fams = corrected_representatives(10);
        assert_eq!(fams.len(), 2 * ic_plus(10).len());
        let suite = vc_suite(&fams, 10);
        assert!(suite.passed(), "{suite:?}");
        for p in ic_plus(10) {
            let types: Vec<_> = fams.iter().filter(|f| f.pair == p).map(|f| f.claimed).collect();
            assert!(types.contains(&IsoType::Product) && types.contains(&IsoType::Twisted), "{p}");
        }
        let rep = conjugacy_disjointness_check(&fams, 10, 1, 50);
        assert!(rep.passed(), "{}", rep.details());
    }

    #[test]
    fn abelianization_distinguishes_types() {
        assert_eq!(preimage_abelianization(&QDihedral::new([0, 0], [1, 0])), FgAbelianGroup::new(1, &[2, 2]));
        assert_eq!(preimage_abelianization(&QDihedral::new([0, 0], [1, 1])), FgAbelianGroup::new(1, &[2]));
        assert_eq!(actual_iso_type(&QDihedral::new([1, 0], [1, 1])), Some(IsoType::Product));
    }

    #[test]
    fn literal_suite_is_red() {
        let suite = vc_suite(&dinfty_representatives(6), 6);
        assert!(suite.vmax.passed());
        assert!(suite.square_identity.passed());
        assert!(!suite.preimage.passed());
        assert!(!suite.iso_type.passed());
    }
}
