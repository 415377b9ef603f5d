//! Integral group homology of the building blocks: cyclic groups with
//! lattice coefficients, the Heisenberg group, products with `Z`, the `E²`
//! page for `Hei ⋊ Z/m`, and Mayer–Vietoris bookkeeping for `H_*(G)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::abelian::{group_from_presentation, rank_bookkeeping_check, snf, subquotient, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::group::Automorphism;

/// `Z^rank` with a `Z/m`-action given by a matrix `A`, `A^m = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeModule {
    action: IntMatrix,
    m: u32,
}

impl LatticeModule {
    pub fn new(action: IntMatrix, m: u32) -> Result<Self> {
        if action.rows() != action.cols() {
            return Err(Error::Shape(format!("action is {}x{}", action.rows(), action.cols())));
        }
        if m == 0 || action.pow(m) != IntMatrix::identity(action.rows()) {
            return Err(Error::InvalidAutomorphism(format!("action {action} does not satisfy A^{m} = I")));
        }
        Ok(LatticeModule { action, m })
    }

    pub fn trivial(rank: usize, m: u32) -> Self {
        LatticeModule { action: IntMatrix::identity(rank), m }
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `I - A`.
    pub fn one_minus(&self) -> IntMatrix {
        IntMatrix::identity(self.rank()).add(&self.action.neg()).expect("square")
    }

    /// `N = Σ_{i<m} A^i`.
    pub fn norm(&self) -> IntMatrix {
        let n = self.rank();
        (0..self.m).fold(IntMatrix::zeros(n, n), |acc, i| acc.add(&self.action.pow(i)).expect("square"))
    }
}

/// `H_p(Z/m; M)` from the 2-periodic resolution: `H_0 = coker(I - A)`,
/// `H_odd = ker(I - A)/im N`, `H_even = ker N / im(I - A)`.
pub fn cyclic_homology(module: &LatticeModule, p: i64) -> Result<FgAbelianGroup> {
    if p < 0 {
        return Err(Error::NegativeDegree(p));
    }
    let d = module.one_minus();
    let n = module.norm();
    Ok(if p == 0 {
        group_from_presentation(&d)
    } else if p % 2 == 1 {
        subquotient(&d, &n)?
    } else {
        subquotient(&n, &d)?
    })
}

/// `H_p(Z/m; Z)` with trivial coefficients.
pub fn cyclic_group_homology(m: u32, p: i64) -> Result<FgAbelianGroup> {
    cyclic_homology(&LatticeModule::trivial(1, m), p)
}

/// Reduced `H̃_p(Z/m)`.
pub fn reduced_cyclic_group_homology(m: u32, p: i64) -> Result<FgAbelianGroup> {
    if p == 0 {
        Ok(FgAbelianGroup::zero())
    } else {
        cyclic_group_homology(m, p)
    }
}

/// Homology of a circle bundle over a base with the given homology ranks
/// (all free), via the Gysin sequence whose only nonzero differential is
/// `H_2(base) = Z → H_0(base) = Z`, multiplication by `euler`:
/// `H_n = coker(D_{n+1}) ⊕ ker(D_n)` (the kernel is free, so this splits).
pub fn circle_bundle_homology(base_ranks: &[usize], euler: i64, n: i64) -> Result<FgAbelianGroup> {
    if n < 0 {
        return Err(Error::NegativeDegree(n));
    }
    let rank = |j: i64| if j < 0 { 0 } else { base_ranks.get(j as usize).copied().unwrap_or(0) };
    // D_j: H_j(base) → H_{j-2}(base)
    let diff = |j: i64| {
        let mut d = IntMatrix::zeros(rank(j - 2), rank(j));
        if j == 2 && rank(2) == 1 && rank(0) == 1 {
            d.set(0, 0, BigInt::from(euler));
        }
        d
    };
    let coker = group_from_presentation(&diff(n + 1));
    let dn = diff(n);
    let ker_rank = dn.cols() - snf(&dn).rank();
    Ok(coker.direct_sum(&FgAbelianGroup::free(ker_rank)))
}

/// Euler number of `1 → <z> → Hei → Z² → 0`; `[u, v] = z` makes the
/// extension class the fundamental class of the torus.
pub const HEI_EULER_NUMBER: i64 = 1;

/// `H_n(Hei)`.
pub fn hei_homology(n: i64) -> Result<FgAbelianGroup> {
    circle_bundle_homology(&[1, 2, 1], HEI_EULER_NUMBER, n)
}

/// The `Z/m`-module `H_q(Hei)` under the standard order-`m` automorphism.
///
/// `q = 1, 2` carry the abelianized action (for `q = 2` transported through
/// `H_1(Z²) ≅ H_2(Hei)`); `q = 0, 3` are trivial since the action preserves
/// orientation; `q >= 4` is zero.
pub fn hei_action_on_homology(m: u32, q: u32) -> Result<LatticeModule> {
    let phi = Automorphism::standard(m)?;
    Ok(match q {
        0 | 3 => LatticeModule::trivial(1, m),
        1 | 2 => LatticeModule::new(IntMatrix::from_i64(&phi.abelianized()), m)?,
        _ => LatticeModule::trivial(0, m),
    })
}

/// Grid `(p, q) ↦ E²_{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub p_max: u32,
    /// `rows[q][p]`.
    pub rows: Vec<Vec<FgAbelianGroup>>,
}

impl HomologyTable {
    pub fn get(&self, p: usize, q: usize) -> &FgAbelianGroup {
        &self.rows[q][p]
    }
}

impl fmt::Display for HomologyTable {
    /// Highest `q` first, columns `p = 0..=p_max`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (q, row) in cells.iter().enumerate().rev() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:<width$}")).collect();
            writeln!(f, "q={q} | {}", line.join("  ").trim_end())?;
        }
        Ok(())
    }
}

/// `H_p(Z/m; H_q(Hei))` for `0 <= p <= p_max`, `0 <= q <= 3`.
pub fn e2_table(m: u32, p_max: u32) -> Result<HomologyTable> {
    let mut rows = Vec::new();
    for q in 0..=3 {
        let module = hei_action_on_homology(m, q)?;
        let row = (0..=p_max as i64).map(|p| cyclic_homology(&module, p)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(HomologyTable { p_max, rows })
}

/// `H_n(Z/m × Z) = H_n(Z/m) ⊕ H_{n-1}(Z/m)`. With `reduced`, both summands
/// are reduced, giving the `H̃_n ⊕ H̃_{n-1}` term of the Mayer–Vietoris
/// sequence.
pub fn cyclic_times_z_homology(m: u32, n: i64, reduced: bool) -> Result<FgAbelianGroup> {
    if n < 0 {
        return Err(Error::NegativeDegree(n));
    }
    let h = |p: i64| -> Result<FgAbelianGroup> {
        if p < 0 {
            Ok(FgAbelianGroup::zero())
        } else if reduced {
            reduced_cyclic_group_homology(m, p)
        } else {
            cyclic_group_homology(m, p)
        }
    };
    Ok(h(n)?.direct_sum(&h(n - 1)?))
}

/// Integral homology of `S³`.
pub fn sphere3_homology(n: i64) -> FgAbelianGroup {
    match n {
        0 | 3 => FgAbelianGroup::free(1),
        _ => FgAbelianGroup::zero(),
    }
}

/// Homology of `G = Hei ⋊ Z/4` as stated in the literature, for `n >= 0`.
pub fn hei4_theorem_values(n: i64) -> FgAbelianGroup {
    match n {
        0 => FgAbelianGroup::free(1),
        2 => FgAbelianGroup::cyclic(2),
        3 => FgAbelianGroup::new(1, &[2, 4]),
        _ => FgAbelianGroup::new(0, &[2, 4]),
    }
}

/// Orders of the cyclic groups whose reduced homology (and that of their
/// product with `Z`) enters the sequence: the maximal finite subgroups `<t>`
/// and `<ut²>` of `Hei ⋊ Z/4` whose preimages are products with `<z>`.
pub const MV_FINITE_ORDERS: [u32; 2] = [4, 2];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvReport {
    pub constraints: Vec<Constraint>,
}

impl MvReport {
    pub fn passed(&self) -> bool {
        self.constraints.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.constraints.push(Constraint { name: name.into(), passed, detail: detail.into() });
    }
}

/// The `A_n = ⊕_{d} (H̃_n(Z/d) ⊕ H̃_{n-1}(Z/d))` term of the sequence
/// `… → H_{n+1}(G) → H_{n+1}(S³) → A_n → H_n(G) → H_n(S³) → A_{n-1} → …`.
pub fn mv_finite_term(n: i64) -> Result<FgAbelianGroup> {
    MV_FINITE_ORDERS
        .iter()
        .try_fold(FgAbelianGroup::zero(), |acc, &d| Ok(acc.direct_sum(&cyclic_times_z_homology(d, n, true)?)))
}

/// Necessary conditions on claimed values `claimed[n] = H_n(G)`,
/// `0 <= n <= N`, from the Mayer–Vietoris sequence above with
/// `H_*(S³) = (Z, 0, 0, Z)` and the facts that `H_3(Hei) → H_3(G)` is
/// injective and `coker(H_3(G) → H_3(S³))` has order dividing 4.
///
/// * `n = 0`: `H_0(G) = Z`.
/// * `n = 1` and `n >= 4`: both `S³` neighbours vanish, so `H_n(G) ≅ A_n`.
/// * `0 → A_3 → H_3(G) → Z → A_2 → H_2(G) → 0`: `H_3(G) ≅ Z ⊕ A_3`; the
///   image of `Z` in `A_2` is cyclic of order `c = |A_2| / |H_2(G)|`, `c | 4`,
///   and `A_2` has a cyclic subgroup of order `c` with quotient `H_2(G)`.
pub fn mv_consistency_check(claimed: &[FgAbelianGroup]) -> Result<MvReport> {
    let mut rep = MvReport { constraints: Vec::new() };
    let top = claimed.len() as i64 - 1;
    let a = |n: i64| mv_finite_term(n);
    if let Some(h0) = claimed.first() {
        let z = FgAbelianGroup::free(1);
        rep.push("H0", *h0 == z, format!("claimed {h0}, sequence forces {z}"));
    }
    for n in (1..=top).filter(|&n| n == 1 || n >= 4) {
        let an = a(n)?;
        let h = &claimed[n as usize];
        let window = [an.clone(), h.clone()];
        let book = rank_bookkeeping_check(&window, 0..2);
        rep.push(
            format!("H{n} = A{n}"),
            *h == an && book.passed(),
            format!("0 -> A{n} = {an} -> H{n}(G) = {h} -> 0; {}", book.messages.join(", ")),
        );
    }
    if top >= 3 {
        let (a2, a3) = (a(2)?, a(3)?);
        let (h2, h3) = (&claimed[2], &claimed[3]);
        let seq = [a3.clone(), h3.clone(), sphere3_homology(3), a2.clone(), h2.clone()];
        let book = rank_bookkeeping_check(&seq, 0..5);
        rep.push("rank balance deg 2-3", book.passed(), format!("0 -> {a3} -> {h3} -> Z -> {a2} -> {h2} -> 0"));
        rep.push(
            "H3(Hei) -> H3(G) injective",
            h3.rank() >= 1,
            format!("rank H3(G) = {}", h3.rank()),
        );
        let h3_expected = a3.direct_sum(&FgAbelianGroup::free(1));
        rep.push("H3 = Z + A3", *h3 == h3_expected, format!("claimed {h3}, sequence forces {h3_expected}"));
        // torsion balance: |A_2| = c · |H_2(G)|
        let order_a2 = a2.order().expect("finite");
        match h2.order() {
            Some(o2) if (&order_a2 % &o2) == BigInt::from(0) => {
                let c = (&order_a2 / &o2).to_u64().expect("small");
                rep.push(
                    "torsion balance |A2| = c |H2|",
                    true,
                    format!("|A2| = {order_a2}, |H2(G)| = {o2}, c = {c}"),
                );
                rep.push("cokernel order divides 4", 4 % c == 0, format!("c = {c}"));
                let quotients = a2.cyclic_quotients(c);
                rep.push(
                    "H2 = A2 / cyclic(c)",
                    quotients.contains(h2),
                    format!(
                        "quotients of {a2} by cyclic subgroups of order {c}: [{}]",
                        quotients.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                    ),
                );
            }
            other => rep.push(
                "torsion balance |A2| = c |H2|",
                false,
                format!("|H2(G)| = {} does not divide |A2| = {order_a2}", other.map_or("infinite".into(), |o| o.to_string())),
            ),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbelianGroup {
        s.parse().unwrap()
    }

    #[test]
    fn cyclic_trivial_coefficients() {
        let z = LatticeModule::trivial(1, 4);
        assert_eq!(cyclic_homology(&z, 0).unwrap(), g("Z"));
        for p in [1, 3, 5] {
            assert_eq!(cyclic_homology(&z, p).unwrap(), g("Z/4"));
        }
        for p in [2, 4, 6] {
            assert_eq!(cyclic_homology(&z, p).unwrap(), g("0"));
        }
        assert!(cyclic_homology(&z, -1).is_err());
    }

    #[test]
    fn cyclic_lattice_coefficients() {
        let m = hei_action_on_homology(4, 1).unwrap();
        assert!(m.norm().is_zero());
        for p in 0..8 {
            let expected = if p % 2 == 0 { g("Z/2") } else { g("0") };
            assert_eq!(cyclic_homology(&m, p).unwrap(), expected);
        }
        let m1 = LatticeModule::trivial(3, 1);
        assert_eq!(cyclic_homology(&m1, 0).unwrap(), g("Z^3"));
        assert_eq!(cyclic_homology(&m1, 1).unwrap(), g("0"));
        assert_eq!(cyclic_homology(&m1, 2).unwrap(), g("0"));
    }

    #[test]
    fn heisenberg_homology() {
        let values: Vec<_> = (0..6).map(|n| hei_homology(n).unwrap()).collect();
        assert_eq!(values, [g("Z"), g("Z^2"), g("Z^2"), g("Z"), g("0"), g("0")]);
        assert!(hei_homology(-1).is_err());
        // a nontrivial Euler number leaves torsion in H_1
        assert_eq!(circle_bundle_homology(&[1, 2, 1], 3, 1).unwrap(), g("Z^2 + Z/3"));
        assert_eq!(circle_bundle_homology(&[1, 2, 1], 0, 1).unwrap(), g("Z^3"));
    }

    #[test]
    fn e2_page_m4() {
        let t = e2_table(4, 6).unwrap();
        let row0 = ["Z", "Z/4", "0", "Z/4", "0", "Z/4", "0"].map(g).to_vec();
        let row1 = ["Z/2", "0", "Z/2", "0", "Z/2", "0", "Z/2"].map(g).to_vec();
        assert_eq!(t.rows, vec![row0.clone(), row1.clone(), row1, row0]);
    }

    #[test]
    fn products_with_z() {
        assert_eq!(cyclic_times_z_homology(4, 1, false).unwrap(), g("Z + Z/4"));
        assert_eq!(cyclic_times_z_homology(4, 2, true).unwrap(), g("Z/4"));
        assert_eq!(cyclic_times_z_homology(3, 0, false).unwrap(), g("Z"));
    }

    #[test]
    fn mv_terms() {
        assert_eq!(mv_finite_term(0).unwrap(), g("0"));
        for n in 1..10 {
            assert_eq!(mv_finite_term(n).unwrap(), g("Z/2 + Z/4"));
        }
    }

    #[test]
    fn mv_theorem_values_pass() {
        let claimed: Vec<_> = (0..=12).map(hei4_theorem_values).collect();
        let r = mv_consistency_check(&claimed).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn mv_negative_controls() {
        let mut claimed: Vec<_> = (0..=12).map(hei4_theorem_values).collect();
        claimed[2] = g("0");
        let r = mv_consistency_check(&claimed).unwrap();
        assert!(!r.passed());
        assert!(r.constraints.iter().any(|c| c.name == "cokernel order divides 4" && !c.passed));
        let zeros = vec![FgAbelianGroup::zero(); 13];
        let r = mv_consistency_check(&zeros).unwrap();
        assert!(!r.constraints[0].passed);
        // the alternative H3 = Z + Z/4 is ruled out
        let mut claimed: Vec<_> = (0..=12).map(hei4_theorem_values).collect();
        claimed[3] = g("Z + Z/4");
        assert!(!mv_consistency_check(&claimed).unwrap().passed());
    }
}
