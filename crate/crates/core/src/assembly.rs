//! Assembled answers for `Hei ⋊ Z/m`: topological K-theory of the reduced
//! group C*-algebra, Whitehead groups, and L-theory, as concrete groups or
//! formal sums of unevaluated symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::abelian::{subquotient, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::report::CheckReport;

/// The complex representation ring of `Z/m` on the character basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepRing {
    pub m: u32,
    /// `ε(χ_j)`: 1 for the trivial character, 0 otherwise.
    pub augmentation: Vec<i64>,
}

impl RepRing {
    pub fn rank(&self) -> usize {
        self.m as usize
    }

    /// Rank of `R̃ = ker ε`.
    pub fn reduced_rank(&self) -> usize {
        self.m as usize - 1
    }

    pub fn group(&self) -> FgAbelianGroup {
        FgAbelianGroup::free(self.rank())
    }

    pub fn reduced_group(&self) -> FgAbelianGroup {
        FgAbelianGroup::free(self.reduced_rank())
    }
}

pub fn rep_ring(m: u32) -> Result<RepRing> {
    if m == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let augmentation = (0..m).map(|j| i64::from(j == 0)).collect();
    Ok(RepRing { m, augmentation })
}

fn supported(m: u32) -> Result<()> {
    match m {
        2 | 3 | 4 | 6 => Ok(()),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub label: String,
    pub group: FgAbelianGroup,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologicalK {
    pub m: u32,
    pub n: i64,
    pub group: FgAbelianGroup,
    pub summands: Vec<Summand>,
    pub notes: Vec<String>,
}

impl fmt::Display for TopologicalK {
    /// `Z^5 = Z + R~(Z/4) + R~(Z/2)`, repeated labels collapsed to powers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(String, usize)> = Vec::new();
        for s in &self.summands {
            match parts.iter_mut().find(|(l, _)| *l == s.label) {
                Some((_, c)) => *c += 1,
                None => parts.push((s.label.clone(), 1)),
            }
        }
        let rhs: Vec<String> =
            parts.into_iter().map(|(l, c)| if c == 1 { l } else { format!("{l}^{c}") }).collect();
        write!(f, "{} = {}", self.group, rhs.join(" + "))
    }
}

fn reduced_summand(order: u32, source: &str) -> Result<Summand> {
    Ok(Summand {
        label: format!("R~(Z/{order})"),
        group: rep_ring(order)?.reduced_group(),
        source: source.into(),
    })
}

/// `K_n(C*_r(Hei ⋊ Z/m))`, 2-periodic in `n`, with the summand breakdown.
pub fn topological_k(m: u32, n: i64) -> Result<TopologicalK> {
    supported(m)?;
    let even = n.rem_euclid(2) == 0;
    let point = Summand { label: "Z".into(), group: FgAbelianGroup::free(1), source: "K_0(pt)".into() };
    let sphere = Summand { label: "K~_1(S^3)".into(), group: FgAbelianGroup::free(1), source: "K~_1(S^3)".into() };
    let mut notes = Vec::new();
    let mut summands = match m {
        4 => vec![reduced_summand(4, "M0 = <t>")?, reduced_summand(2, "M2 = <ut^2>")?],
        2 => vec![
            reduced_summand(2, "M0 = <t>")?,
            reduced_summand(2, "M1 = <ut>")?,
            reduced_summand(2, "M2 = <vt>")?,
        ],
        _ => vec![reduced_summand(m, "<t>")?],
    };
    if even {
        summands.insert(0, point);
        if m == 6 || m == 3 {
            notes.push(format!("Z + R~(Z/{m}) = R(Z/{m}) = R(<t>)"));
        }
    } else {
        summands.push(sphere);
        notes.push("extension by K~_1(S^3) = Z splits since the quotient is free".into());
    }
    let group = summands.iter().fold(FgAbelianGroup::zero(), |acc, s| acc.direct_sum(&s.group));
    Ok(TopologicalK { m, n, group, summands, notes })
}

/// Rank of `K_n` predicted from the maximal finite subgroups: the reduced
/// representation rings plus one (`K_0(pt)` or `K~_1(S³)`).
pub fn topological_k_predicted_rank(m: u32) -> Result<usize> {
    supported(m)?;
    let orders: &[u32] = match m {
        4 => &[4, 2],
        2 => &[2, 2, 2],
        other => &[other][..],
    };
    let reps: usize = orders.iter().map(|&d| rep_ring(d).map(|r| r.reduced_rank())).sum::<Result<usize>>()?;
    Ok(reps + 1)
}

/// Unevaluated building blocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SymbolKind {
    /// `NK_n(Z[Z/q])`.
    Nil(u32),
    /// `UNil_n(Z/2 * Z/2; Z)`.
    UNil,
    /// `L_n(Z)`.
    L,
    /// `L~_n(Z[Z/q])`.
    LReduced(u32),
    /// `K~_1(S³)`.
    KSphere,
    /// Relative term for `D∞ ⋊_a Z` and the family of virtually cyclic subgroups.
    DihedralRelative,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub degree: i64,
    pub invert_two: bool,
}

impl Symbol {
    /// L-type symbols are 4-periodic and stored with degree in `0..4`.
    pub fn new(kind: SymbolKind, degree: i64) -> Self {
        let degree = match kind {
            SymbolKind::UNil | SymbolKind::L | SymbolKind::LReduced(_) | SymbolKind::DihedralRelative => {
                degree.rem_euclid(4)
            }
            SymbolKind::KSphere => 1,
            SymbolKind::Nil(_) => degree,
        };
        Symbol { kind, degree, invert_two: false }
    }

    pub fn inverted(mut self) -> Self {
        self.invert_two = true;
        self
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree;
        match self.kind {
            SymbolKind::Nil(q) => write!(f, "NK_{n}(Z[Z/{q}])")?,
            SymbolKind::UNil => write!(f, "UNil_{n}(Z/2*Z/2;Z)")?,
            SymbolKind::L => write!(f, "L_{n}(Z)")?,
            SymbolKind::LReduced(q) => write!(f, "L~_{n}(Z[Z/{q}])")?,
            SymbolKind::KSphere => write!(f, "K~_1(S^3)")?,
            SymbolKind::DihedralRelative => write!(f, "H_{n}(Dinf x_a Z; rel)")?,
        }
        if self.invert_two {
            write!(f, "[1/2]")?;
        }
        Ok(())
    }
}

/// Which primitive pairs an indexed family runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PairParity {
    /// `n1` or `n2` even.
    SomeEven,
    /// `n1` and `n2` odd.
    BothOdd,
}

impl PairParity {
    pub fn matches(&self, n1: i64, n2: i64) -> bool {
        let both_odd = n1 % 2 != 0 && n2 % 2 != 0;
        match self {
            PairParity::SomeEven => !both_odd,
            PairParity::BothOdd => both_odd,
        }
    }
}

/// `⊕_{(n1,n2) ∈ IC⁺, parity} term` over the infinite index set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Family {
    pub parity: PairParity,
    pub term: Box<FormalGroupExpr>,
}

/// A concrete group plus a multiset of symbols plus indexed families;
/// equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FormalGroupExpr {
    pub concrete: FgAbelianGroupOrd,
    #[serde(serialize_with = "symbols_as_list")]
    pub symbols: BTreeMap<Symbol, u32>,
    pub families: Vec<Family>,
}

fn symbols_as_list<S: serde::Serializer>(
    symbols: &BTreeMap<Symbol, u32>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = ser.serialize_seq(Some(symbols.len()))?;
    for (s, c) in symbols {
        seq.serialize_element(&(s.to_string(), c))?;
    }
    seq.end()
}

/// Ordering wrapper so expressions can live in sorted containers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FgAbelianGroupOrd(pub FgAbelianGroup);

impl Default for FgAbelianGroupOrd {
    fn default() -> Self {
        FgAbelianGroupOrd(FgAbelianGroup::zero())
    }
}

impl PartialOrd for FgAbelianGroupOrd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FgAbelianGroupOrd {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.rank(), self.0.torsion()).cmp(&(other.0.rank(), other.0.torsion()))
    }
}

impl FormalGroupExpr {
    pub fn zero() -> Self {
        FormalGroupExpr::default()
    }

    pub fn concrete(g: FgAbelianGroup) -> Self {
        FormalGroupExpr { concrete: FgAbelianGroupOrd(g), ..Default::default() }
    }

    pub fn symbol(s: Symbol, multiplicity: u32) -> Self {
        let mut e = FormalGroupExpr::zero();
        if multiplicity > 0 {
            e.symbols.insert(s, multiplicity);
        }
        e
    }

    pub fn family(parity: PairParity, term: FormalGroupExpr) -> Self {
        FormalGroupExpr { families: vec![Family { parity, term: Box::new(term) }], ..Default::default() }
    }

    pub fn concrete_part(&self) -> &FgAbelianGroup {
        &self.concrete.0
    }

    pub fn is_zero(&self) -> bool {
        self.concrete.0.is_zero() && self.symbols.is_empty() && self.families.is_empty()
    }

    /// No symbols and no families.
    pub fn is_concrete(&self) -> bool {
        self.symbols.is_empty() && self.families.is_empty()
    }

    /// Total multiplicity of top-level symbols.
    pub fn symbol_count(&self) -> u32 {
        self.symbols.values().sum()
    }

    /// `self ⊕ other`.
    pub fn sum(&self, other: &FormalGroupExpr) -> FormalGroupExpr {
        let mut out = self.clone();
        out.concrete = FgAbelianGroupOrd(self.concrete.0.direct_sum(&other.concrete.0));
        for (s, c) in &other.symbols {
            *out.symbols.entry(s.clone()).or_insert(0) += c;
        }
        out.families.extend(other.families.iter().cloned());
        out.families.sort();
        out
    }

    /// `self^k`.
    pub fn power(&self, k: u32) -> FormalGroupExpr {
        (0..k).fold(FormalGroupExpr::zero(), |acc, _| acc.sum(self))
    }

    /// Replaces symbols named in `constants` by their values. A family is
    /// dropped only if its term becomes zero; otherwise its term is kept in
    /// substituted form.
    pub fn substitute(&self, constants: &Constants) -> FormalGroupExpr {
        let mut out = FormalGroupExpr::concrete(self.concrete.0.clone());
        for (s, &c) in &self.symbols {
            match constants.get(s) {
                Some(g) => out.concrete = FgAbelianGroupOrd(out.concrete.0.direct_sum(&g.power(c as usize))),
                None => {
                    out.symbols.insert(s.clone(), c);
                }
            }
        }
        for fam in &self.families {
            let term = fam.term.substitute(constants);
            if !term.is_zero() {
                out.families.push(Family { parity: fam.parity, term: Box::new(term) });
            }
        }
        out.families.sort();
        out
    }
}

impl fmt::Display for FormalGroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.concrete.0.is_zero() {
            parts.push(self.concrete.0.to_string());
        }
        for (s, &c) in &self.symbols {
            parts.push(if c == 1 { s.to_string() } else { format!("{s}^{c}") });
        }
        for fam in &self.families {
            let cond = match fam.parity {
                PairParity::SomeEven => "n1 or n2 even",
                PairParity::BothOdd => "n1 and n2 odd",
            };
            parts.push(format!("(+)_{{(n1,n2) in IC+, {cond}}} ({})", fam.term));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// User-supplied values for symbols, keyed by their printed names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constants {
    values: BTreeMap<String, FgAbelianGroup>,
}

impl Constants {
    pub fn get(&self, s: &Symbol) -> Option<&FgAbelianGroup> {
        self.values.get(&s.to_string())
    }

    pub fn insert(&mut self, name: impl Into<String>, g: FgAbelianGroup) {
        self.values.insert(name.into(), g);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromStr for Constants {
    type Err = Error;

    /// One `symbol = group` per line, e.g. `NK_1(Z[Z/4]) = 0` or
    /// `L_0(Z) = Z`; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        let mut c = Constants::default();
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `symbol = group`", lineno + 1)))?;
            let g: FgAbelianGroup =
                value.parse().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            c.insert(name.trim(), g);
        }
        Ok(c)
    }
}

fn nil(q: u32, n: i64) -> Symbol {
    Symbol::new(SymbolKind::Nil(q), n)
}

/// `Wh_n(Hei ⋊ Z/m)` in the range of degrees where it is known.
pub fn whitehead(m: u32, n: i64) -> Result<FormalGroupExpr> {
    supported(m)?;
    let not_covered = Err(Error::NotCovered { m, n });
    match m {
        4 => match n {
            0 | 1 => Ok(FormalGroupExpr::symbol(nil(4, n), 2)),
            n if n <= -1 => Ok(FormalGroupExpr::zero()),
            _ => not_covered,
        },
        6 => match n {
            1 => Ok(FormalGroupExpr::symbol(nil(6, 1), 2)),
            -1 | 0 => Ok(FormalGroupExpr::concrete(FgAbelianGroup::free(1))),
            n if n <= -2 => Ok(FormalGroupExpr::zero()),
            _ => not_covered,
        },
        _ => {
            if n <= 2 {
                Ok(FormalGroupExpr::zero())
            } else {
                not_covered
            }
        }
    }
}

/// Known values `Wh_n(H)` of a group `H` by degree.
pub type WhTable = BTreeMap<i64, FormalGroupExpr>;

/// `Wh_n(Z/q × Z) = Wh_{n-1}(Z/q) ⊕ Wh_n(Z/q) ⊕ NK_n(Z[Z/q])²`.
///
/// `NK_n(Z[Z/q])` is dropped where it is known to vanish: for `n <= -1`,
/// and for `q ∈ {1, 2}` when `n <= 1` (Whitehead groups of `Z^k` and
/// `Z/2 × Z^k` vanish there).
pub fn bass_heller_swan(q: u32, wh: &WhTable, n: i64) -> Result<FormalGroupExpr> {
    let lower = wh.get(&(n - 1)).ok_or(Error::MissingDegree(n - 1))?;
    let here = wh.get(&n).ok_or(Error::MissingDegree(n))?;
    let nil_vanishes = n <= -1 || (q <= 2 && n <= 1);
    let nk = if nil_vanishes { FormalGroupExpr::zero() } else { FormalGroupExpr::symbol(nil(q, n), 2) };
    Ok(lower.sum(here).sum(&nk))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LTheory {
    pub n: i64,
    pub invert_two: bool,
    /// Terms of the short exact sequence for the proper part: the first five
    /// form the subgroup, the last is the quotient `L_{n-3}(Z)`.
    pub proper_part: Vec<Symbol>,
    /// Whether the proper-part sequence is known to split.
    pub split: bool,
    /// Relative term over infinite virtually cyclic subgroups (absent once 2 is inverted).
    pub relative: FormalGroupExpr,
    /// `(decoration, L^{-∞} → L^ε bijective)`.
    pub decorations: Vec<(String, bool)>,
    pub expr: FormalGroupExpr,
}

impl fmt::Display for LTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.split {
            let all: Vec<String> = self.proper_part.iter().map(ToString::to_string).collect();
            return write!(f, "{}", all.join(" + "));
        }
        let (sub, quot) = self.proper_part.split_at(5);
        let sub: Vec<String> = sub.iter().map(ToString::to_string).collect();
        write!(f, "ext({} by {})", quot[0], sub.join(" + "))?;
        if !self.relative.is_zero() {
            write!(f, " + {}", self.relative)?;
        }
        Ok(())
    }
}

/// `L_n(Z[Hei ⋊ Z/4])`.
pub fn l_theory(n: i64, invert_two: bool) -> LTheory {
    let mut proper = vec![
        Symbol::new(SymbolKind::L, n),
        Symbol::new(SymbolKind::LReduced(2), n),
        Symbol::new(SymbolKind::LReduced(2), n - 1),
        Symbol::new(SymbolKind::LReduced(4), n),
        Symbol::new(SymbolKind::LReduced(4), n - 1),
        Symbol::new(SymbolKind::L, n - 3),
    ];
    if invert_two {
        proper = proper.into_iter().map(Symbol::inverted).collect();
    }
    let relative = if invert_two {
        FormalGroupExpr::zero()
    } else {
        let unil = FormalGroupExpr::symbol(Symbol::new(SymbolKind::UNil, n), 1)
            .sum(&FormalGroupExpr::symbol(Symbol::new(SymbolKind::UNil, n - 1), 1));
        let dihedral = FormalGroupExpr::symbol(Symbol::new(SymbolKind::DihedralRelative, n), 2);
        FormalGroupExpr::family(PairParity::SomeEven, unil.power(4))
            .sum(&FormalGroupExpr::family(PairParity::BothOdd, dihedral))
    };
    let expr = proper
        .iter()
        .fold(FormalGroupExpr::zero(), |acc, s| acc.sum(&FormalGroupExpr::symbol(s.clone(), 1)))
        .sum(&relative);
    let decorations = ["p", "h", "s"].iter().map(|d| (d.to_string(), true)).collect();
    LTheory { n, invert_two, proper_part: proper, split: invert_two, relative, decorations, expr }
}

/// Tate cohomology `(Ĥ^even, Ĥ^odd)` of `Z/2` acting on `Z^r` by `T`.
pub fn tate_cohomology_z2(t: &IntMatrix) -> Result<(FgAbelianGroup, FgAbelianGroup)> {
    let n = t.rows();
    let id = IntMatrix::identity(n);
    let one_minus = id.add(&t.neg())?;
    let one_plus = id.add(t)?;
    Ok((subquotient(&one_minus, &one_plus)?, subquotient(&one_plus, &one_minus)?))
}

fn block_swap(tau_top: &IntMatrix, tau_bottom: &IntMatrix) -> IntMatrix {
    // (x1, x2) ↦ (tau_top x2, tau_bottom x1)
    let r = tau_top.rows();
    let mut t = IntMatrix::zeros(2 * r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            t.set(i, r + j, tau_top.get(i, j).clone());
            t.set(r + i, j, tau_bottom.get(i, j).clone());
        }
    }
    t
}

/// The involution on `S ⊕ S` exchanging the two Nil summands, tested on
/// free modules `A = Z^r`, `r ≤ 2`, with sample involutions `τ` on `A`.
///
/// For `(x1, x2) ↦ (x2, τ x1)` the square is `τ ⊕ τ`, so it is an
/// involution only for `τ = id`; the symmetric form `(x1, x2) ↦ (τ x2, τ x1)`
/// is an involution for every `τ` and is induced from the trivial subgroup.
/// Both are checked wherever they are involutions: `Ĥ^*` must vanish.
pub fn whitehead_involution_check(n: i64) -> Result<CheckReport> {
    if !(0..=1).contains(&n) {
        return Err(Error::NotCovered { m: 4, n });
    }
    let mut rep = CheckReport::new();
    let mut taus: Vec<(String, IntMatrix)> = vec![("A = 0".into(), IntMatrix::zeros(0, 0))];
    for r in 1..=2 {
        taus.push((format!("A = Z^{r}, tau = id"), IntMatrix::identity(r)));
        taus.push((format!("A = Z^{r}, tau = -id"), IntMatrix::identity(r).neg()));
    }
    taus.push(("A = Z^2, tau = swap".into(), IntMatrix::from_i64(&[[0, 1], [1, 0]])));
    for (label, tau) in &taus {
        let id = IntMatrix::identity(tau.rows());
        for (form, t) in [("(x2, tau x1)", block_swap(&id, tau)), ("(tau x2, tau x1)", block_swap(tau, tau))] {
            let square_is_id = t.mul(&t)? == IntMatrix::identity(t.rows());
            if !square_is_id {
                rep.note(format!("NK_{n}: {label}: {form} is not an involution, skipped"));
                continue;
            }
            let (even, odd) = tate_cohomology_z2(&t)?;
            rep.require(even.is_zero() && odd.is_zero(), || {
                format!("NK_{n}: {label}: {form} has H^even = {even}, H^odd = {odd}")
            });
        }
    }
    rep.note(format!("NK_{n}: Tate cohomology vanishes on all induced test modules"));
    Ok(rep)
}
