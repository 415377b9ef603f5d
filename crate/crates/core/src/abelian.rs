//! Exact linear algebra over `Z`: Smith normal form with unimodular
//! certificates, finitely generated abelian groups in canonical form, and
//! order/rank bookkeeping for exact sequences.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {i}");
            for (j, v) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(*v);
            }
        }
        m
    }

    /// Square or rectangular matrix from a non-empty list of equal rows.
    pub fn from_i64<const C: usize>(rows: &[[i64; C]]) -> Self {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&v, C)
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("addition of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = IntMatrix::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self).expect("square");
        }
        acc
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: Range<usize>) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rows `range` as a new matrix.
    pub fn row_slice(&self, range: Range<usize>) -> IntMatrix {
        let mut out = IntMatrix::zeros(range.len(), self.cols);
        for (ii, i) in range.enumerate() {
            for j in 0..self.cols {
                out.set(ii, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    // col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith form `S = U·A·V` with unimodular `U`, `V` and their inverses.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries of `S`, positive, each dividing the next.
    pub invariants: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Re-multiplies the certificate: `U·A·V = S`, `U·U⁻¹ = I`, `V·V⁻¹ = I`,
    /// and `S` is diagonal with the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(uav) = self.u.mul(a).and_then(|ua| ua.mul(&self.v)) else {
            return false;
        };
        let eye_u = IntMatrix::identity(self.u.rows());
        let eye_v = IntMatrix::identity(self.v.rows());
        if uav != self.s
            || self.u.mul(&self.u_inv).ok() != Some(eye_u)
            || self.v.mul(&self.v_inv).ok() != Some(eye_v)
        {
            return false;
        }
        for i in 0..self.s.rows() {
            for j in 0..self.s.cols() {
                let e = self.s.get(i, j);
                let expected_nonzero = i == j && i < self.invariants.len();
                if expected_nonzero != !e.is_zero() {
                    return false;
                }
            }
        }
        self.invariants.iter().all(|d| d.is_positive())
            && self.invariants.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

struct SnfCalc {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfCalc {
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
        // inverse of (row dst += q row src) acts on columns of U⁻¹: col src -= q col dst
        self.u_inv.add_col_multiple(src, dst, &-q);
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
        self.v_inv.add_row_multiple(src, dst, &-q);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    // entry of least absolute value in the trailing block
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let e = self.a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let abs = e.abs();
                if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                    best = Some((i, j, abs));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) -> usize {
        let n = self.a.rows().min(self.a.cols());
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut dirty = false;
                let p = self.a.get(t, t).clone();
                for i in t + 1..self.a.rows() {
                    let e = self.a.get(i, t).clone();
                    if e.is_zero() {
                        continue;
                    }
                    let q = e.div_floor(&p);
                    self.row_add(i, t, &-q);
                    if !self.a.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.a.cols() {
                    let e = self.a.get(t, j).clone();
                    if e.is_zero() {
                        continue;
                    }
                    let q = e.div_floor(&p);
                    self.col_add(j, t, &-q);
                    if !self.a.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // a smaller remainder exists in row/column t: move it to the pivot
                    let (pi, pj) = self.min_pivot_cross(t);
                    self.row_swap(t, pi);
                    self.col_swap(t, pj);
                    continue;
                }
                // row and column are clear; enforce divisibility of the trailing block
                let p = self.a.get(t, t).clone();
                let bad = (t + 1..self.a.rows())
                    .find(|&i| (t + 1..self.a.cols()).any(|j| !self.a.get(i, j).is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
        t
    }

    // least nonzero entry among pivot row and column
    fn min_pivot_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t, self.a.get(t, t).abs());
        for i in t + 1..self.a.rows() {
            let e = self.a.get(i, t);
            if !e.is_zero() && e.abs() < best.2 {
                best = (i, t, e.abs());
            }
        }
        for j in t + 1..self.a.cols() {
            let e = self.a.get(t, j);
            if !e.is_zero() && e.abs() < best.2 {
                best = (t, j, e.abs());
            }
        }
        (best.0, best.1)
    }
}

/// Smith normal form over `Z`, pivoting on the entry of least absolute value.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let mut calc = SnfCalc {
        a: a.clone(),
        u: IntMatrix::identity(a.rows()),
        u_inv: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
        v_inv: IntMatrix::identity(a.cols()),
    };
    let rank = calc.run();
    let invariants = (0..rank).map(|i| calc.a.get(i, i).clone()).collect();
    SnfResult { s: calc.a, u: calc.u, u_inv: calc.u_inv, v: calc.v, v_inv: calc.v_inv, invariants }
}

/// Isomorphism type of a finitely generated abelian group:
/// `Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dt` with `d1 | d2 | ... | dt`, every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        FgAbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { rank, torsion: Vec::new() }
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = ±1` the trivial group.
    pub fn cyclic(n: i64) -> Self {
        FgAbelianGroup::from_cyclic_orders(0, &[BigInt::from(n)])
    }

    /// Canonicalizes `Z^rank ⊕ ⊕ Z/n_i` for arbitrary `n_i` (zeros count as `Z`).
    pub fn from_cyclic_orders(rank: usize, orders: &[BigInt]) -> Self {
        let diag = IntMatrix::diagonal(orders);
        let mut g = group_from_presentation(&diag);
        g.rank += rank;
        g
    }

    /// Convenience form of [`FgAbelianGroup::from_cyclic_orders`].
    pub fn new(rank: usize, orders: &[i64]) -> Self {
        let orders: Vec<BigInt> = orders.iter().map(|&n| BigInt::from(n)).collect();
        FgAbelianGroup::from_cyclic_orders(rank, &orders)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn torsion_subgroup(&self) -> FgAbelianGroup {
        FgAbelianGroup { rank: 0, torsion: self.torsion.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend(other.torsion.iter().cloned());
        FgAbelianGroup::from_cyclic_orders(self.rank + other.rank, &orders)
    }

    pub fn power(&self, n: usize) -> FgAbelianGroup {
        (0..n).fold(FgAbelianGroup::zero(), |acc, _| acc.direct_sum(self))
    }

    /// Quotients of a finite group by its cyclic subgroups of order `c`, up to
    /// isomorphism (exhaustive over elements; intended for small groups).
    pub fn cyclic_quotients(&self, c: u64) -> Vec<FgAbelianGroup> {
        assert!(self.is_finite(), "cyclic_quotients needs a finite group");
        let mods: Vec<u64> = self.torsion.iter().map(|d| d.to_u64().expect("small group")).collect();
        let total: u64 = mods.iter().product();
        let mut out: Vec<FgAbelianGroup> = Vec::new();
        for idx in 0..total {
            let mut rem = idx;
            let mut elem = Vec::with_capacity(mods.len());
            for &d in &mods {
                elem.push(rem % d);
                rem /= d;
            }
            // order of elem = lcm of d / gcd(d, e)
            let ord = mods.iter().zip(&elem).fold(1u64, |acc, (&d, &e)| acc.lcm(&(d / d.gcd(&e))));
            if ord != c {
                continue;
            }
            let n = mods.len();
            let mut rel = IntMatrix::zeros(n, n + 1);
            for (i, &d) in mods.iter().enumerate() {
                rel.set(i, i, BigInt::from(d));
                rel.set(i, n, BigInt::from(elem[i]));
            }
            let q = group_from_presentation(&rel);
            if !out.contains(&q) {
                out.push(q);
            }
        }
        out
    }
}

impl fmt::Display for FgAbelianGroup {
    /// `Z^r + Z/d1 + Z/d2 ...`, invariant factors ascending; `0` for the trivial group.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FromStr for FgAbelianGroup {
    type Err = Error;

    /// Parses sums such as `Z^2 + Z/2 + Z/4`, `Z`, `0`; summands may repeat
    /// and need not be canonical (`Z/2 + Z/3` parses as `Z/6`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(FgAbelianGroup::zero());
        }
        let mut rank = 0usize;
        let mut orders = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            if part == "0" {
                continue;
            }
            if part == "Z" {
                rank += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                rank += r.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{part}: {e}")))?;
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: BigInt = d.trim().parse().map_err(|e| Error::Parse(format!("{part}: {e}")))?;
                if !d.is_positive() {
                    return Err(Error::Parse(format!("{part}: cyclic order must be positive")));
                }
                orders.push(d);
            } else {
                return Err(Error::Parse(format!("unrecognized summand `{part}`")));
            }
        }
        Ok(FgAbelianGroup::from_cyclic_orders(rank, &orders))
    }
}

impl From<FgAbelianGroup> for String {
    fn from(g: FgAbelianGroup) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for FgAbelianGroup {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Cokernel of `A: Z^cols → Z^rows` (columns are relations among `rows` generators).
pub fn group_from_presentation(a: &IntMatrix) -> FgAbelianGroup {
    let res = snf(a);
    let rank = a.rows() - res.rank();
    let torsion = res.invariants.into_iter().filter(|d| !d.is_one()).collect();
    FgAbelianGroup { rank, torsion }
}

/// Homology `ker A / im B` at the middle of `Z^p --B--> Z^n --A--> Z^q`.
pub fn subquotient(a: &IntMatrix, b: &IntMatrix) -> Result<FgAbelianGroup> {
    let n = a.cols();
    if b.rows() != n {
        return Err(Error::Shape(format!("B has {} rows but A has {} columns", b.rows(), n)));
    }
    if !a.mul(b)?.is_zero() {
        return Err(Error::NotAComplex);
    }
    let res = snf(a);
    let r = res.rank();
    // ker A is spanned by the last n - r columns of V; coordinates of im B in
    // that basis are the last n - r rows of V⁻¹·B.
    let coords = res.v_inv.mul(b)?.row_slice(r..n);
    Ok(group_from_presentation(&coords))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BookkeepingReport {
    pub rank_alternating_sum: i64,
    pub rank_ok: bool,
    /// `None` if some term in the window is infinite.
    pub order_ok: Option<bool>,
    pub messages: Vec<String>,
}

impl BookkeepingReport {
    pub fn passed(&self) -> bool {
        self.rank_ok && self.order_ok != Some(false)
    }
}

/// Necessary conditions for `0 → seq[w.start] → ... → seq[w.end - 1] → 0` to
/// be exact: the alternating rank sum vanishes and, when all terms are
/// finite, the alternating product of orders is 1.
pub fn rank_bookkeeping_check(seq: &[FgAbelianGroup], window: Range<usize>) -> BookkeepingReport {
    let terms = &seq[window.clone()];
    let mut messages = Vec::new();
    let rank_sum: i64 = terms
        .iter()
        .enumerate()
        .map(|(i, g)| if i % 2 == 0 { g.rank() as i64 } else { -(g.rank() as i64) })
        .sum();
    let rank_ok = rank_sum == 0;
    if !rank_ok {
        messages.push(format!("alternating rank sum over {window:?} is {rank_sum}, expected 0"));
    }
    let order_ok = if terms.iter().all(FgAbelianGroup::is_finite) {
        let (mut even, mut odd) = (BigInt::one(), BigInt::one());
        for (i, g) in terms.iter().enumerate() {
            let o = g.order().expect("finite");
            if i % 2 == 0 {
                even *= o;
            } else {
                odd *= o;
            }
        }
        if even != odd {
            messages.push(format!("alternating order product over {window:?} is {even}/{odd}, expected 1"));
        }
        Some(even == odd)
    } else {
        None
    };
    BookkeepingReport { rank_alternating_sum: rank_sum, rank_ok, order_ok, messages }
}
