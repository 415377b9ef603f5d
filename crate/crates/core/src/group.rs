//! Exact arithmetic in the discrete Heisenberg group, its real form with
//! rational coordinates, and the semidirect products `Hei ⋊ Z/m`.
//!
//! Coordinates follow the upper unitriangular matrix picture
//!
//! ```text
//! | 1 x y |
//! | 0 1 z |
//! | 0 0 1 |
//! ```
//!
//! so `y` is the central coordinate and `(a,b,c)(x,y,z) = (a+x, b+y+az, c+z)`.
//! The standard generators are `u = (1,0,0)`, `v = (0,0,1)` and the central
//! `z_c = (0,1,0)`, with `[u,v] = z_c`.

use std::fmt;
use std::ops::Neg;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalars usable as Heisenberg coordinates.
pub trait Coord: Num + Neg<Output = Self> + Clone + fmt::Debug + fmt::Display {
    fn from_int(n: &BigInt) -> Self;
}

impl Coord for BigInt {
    fn from_int(n: &BigInt) -> Self {
        n.clone()
    }
}

impl Coord for BigRational {
    fn from_int(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hei<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

pub type HeiElement = Hei<BigInt>;
pub type RationalHeiElement = Hei<BigRational>;

impl<T: Coord> Hei<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Hei { x, y, z }
    }

    pub fn identity() -> Self {
        Hei::new(T::zero(), T::zero(), T::zero())
    }

    pub fn u() -> Self {
        Hei::new(T::one(), T::zero(), T::zero())
    }

    pub fn v() -> Self {
        Hei::new(T::zero(), T::zero(), T::one())
    }

    /// The central generator `(0,1,0)`.
    pub fn zc() -> Self {
        Hei::new(T::zero(), T::one(), T::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Hei {
            x: self.x.clone() + other.x.clone(),
            y: self.y.clone() + other.y.clone() + self.x.clone() * other.z.clone(),
            z: self.z.clone() + other.z.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        Hei {
            x: -self.x.clone(),
            y: self.x.clone() * self.z.clone() - self.y.clone(),
            z: -self.z.clone(),
        }
    }

    /// `self^n` for any exponent in the coordinate ring (integer powers for
    /// `Hei`, one-parameter subgroups for the real form):
    /// `(a,b,c)^n = (na, nb + n(n-1)/2 ac, nc)`.
    pub fn pow(&self, n: &T) -> Self {
        let two = T::one() + T::one();
        let tri = n.clone() * (n.clone() - T::one()) / two;
        Hei {
            x: n.clone() * self.x.clone(),
            y: n.clone() * self.y.clone() + tri * self.x.clone() * self.z.clone(),
            z: n.clone() * self.z.clone(),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).mul(&self.inv()).mul(&other.inv())
    }
}

impl HeiElement {
    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        Hei::new(BigInt::from(x), BigInt::from(y), BigInt::from(z))
    }

    pub fn to_rational(&self) -> RationalHeiElement {
        Hei::new(
            BigRational::from_integer(self.x.clone()),
            BigRational::from_integer(self.y.clone()),
            BigRational::from_integer(self.z.clone()),
        )
    }
}

impl<T: fmt::Display> fmt::Display for Hei<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

pub fn hei_mul<T: Coord>(a: &Hei<T>, b: &Hei<T>) -> Hei<T> {
    a.mul(b)
}

pub fn hei_inv<T: Coord>(a: &Hei<T>) -> Hei<T> {
    a.inv()
}

/// An automorphism of `Hei` of finite order `m`, stored by the images of
/// `u`, `v`, `z_c`. All powers `φ^k`, `0 <= k < m`, are cached.
#[derive(Clone, Debug)]
pub struct Automorphism {
    m: u32,
    // powers[k] = [φ^k(u), φ^k(v), φ^k(z_c)]
    powers: Vec<[HeiElement; 3]>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.powers[1 % self.m as usize] == other.powers[1 % other.m as usize]
    }
}

impl Eq for Automorphism {}

fn normal_form_apply<T: Coord>(images: &[HeiElement; 3], a: &Hei<T>) -> Hei<T> {
    let lift = |h: &HeiElement| Hei::new(T::from_int(&h.x), T::from_int(&h.y), T::from_int(&h.z));
    let central = a.y.clone() - a.x.clone() * a.z.clone();
    lift(&images[0])
        .pow(&a.x)
        .mul(&lift(&images[1]).pow(&a.z))
        .mul(&lift(&images[2]).pow(&central))
}

impl Automorphism {
    /// Builds the automorphism from generator images and checks the relator
    /// images plus `φ^m = id` on the generators.
    pub fn new(m: u32, u_img: HeiElement, v_img: HeiElement, zc_img: HeiElement) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidAutomorphism("order must be positive".into()));
        }
        let zc = HeiElement::zc();
        if zc_img != zc && zc_img != zc.inv() {
            return Err(Error::InvalidAutomorphism(format!(
                "z_c must map to z_c or its inverse, got {zc_img}"
            )));
        }
        if u_img.commutator(&v_img) != zc_img {
            return Err(Error::InvalidAutomorphism(format!(
                "[φ(u), φ(v)] = {} differs from φ(z_c) = {zc_img}",
                u_img.commutator(&v_img)
            )));
        }
        // φ(z_c) is central in Hei, so the commutation relators hold automatically;
        // they are checked anyway because the images are user supplied.
        if !u_img.commutator(&zc_img).is_identity() || !v_img.commutator(&zc_img).is_identity() {
            return Err(Error::InvalidAutomorphism("φ(z_c) is not central".into()));
        }
        let first = [u_img, v_img, zc_img];
        let mut powers = vec![[HeiElement::u(), HeiElement::v(), HeiElement::zc()]];
        for _ in 1..m {
            let prev = powers.last().unwrap();
            let next = [
                normal_form_apply(&first, &prev[0]),
                normal_form_apply(&first, &prev[1]),
                normal_form_apply(&first, &prev[2]),
            ];
            powers.push(next);
        }
        let last = powers.last().unwrap();
        let wrap = [
            normal_form_apply(&first, &last[0]),
            normal_form_apply(&first, &last[1]),
            normal_form_apply(&first, &last[2]),
        ];
        if wrap != powers[0] {
            return Err(Error::InvalidAutomorphism(format!("φ^{m} is not the identity")));
        }
        Ok(Automorphism { m, powers })
    }

    pub fn identity() -> Self {
        Automorphism { m: 1, powers: vec![[HeiElement::u(), HeiElement::v(), HeiElement::zc()]] }
    }

    /// The automorphisms of order 2, 3, 4, 6 used for `Hei ⋊ Z/m`:
    ///
    /// * m = 4: `u ↦ v`, `v ↦ u⁻¹`
    /// * m = 6: `u ↦ v`, `v ↦ u⁻¹v`
    /// * m = 3: `u ↦ u⁻¹v`, `v ↦ u⁻¹z⁻¹` (the square of the m = 6 map)
    /// * m = 2: `u ↦ u⁻¹`, `v ↦ v⁻¹`
    ///
    /// In every case `z_c ↦ z_c`.
    pub fn standard(m: u32) -> Result<Self> {
        let u = HeiElement::u();
        let v = HeiElement::v();
        let zc = HeiElement::zc();
        let (ui, vi) = match m {
            4 => (v.clone(), u.inv()),
            6 => (v.clone(), u.inv().mul(&v)),
            3 => (u.inv().mul(&v), u.inv().mul(&zc.inv())),
            2 => (u.inv(), v.inv()),
            other => return Err(Error::UnsupportedOrder(other)),
        };
        Automorphism::new(m, ui, vi, zc)
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    /// Images `[φ^k(u), φ^k(v), φ^k(z_c)]`; `k` is reduced mod m.
    pub fn images(&self, k: i64) -> &[HeiElement; 3] {
        &self.powers[k.rem_euclid(self.m as i64) as usize]
    }

    /// `φ^k(a)` via the normal form `a = u^x v^z z_c^(y - xz)`.
    pub fn apply_pow<T: Coord>(&self, k: i64, a: &Hei<T>) -> Hei<T> {
        normal_form_apply(self.images(k), a)
    }

    pub fn apply<T: Coord>(&self, a: &Hei<T>) -> Hei<T> {
        self.apply_pow(1, a)
    }

    /// The induced action on `Hei / <z_c> = Z²`, as an integer matrix whose
    /// columns are the images of `e1` (from `u`) and `e2` (from `v`).
    pub fn abelianized(&self) -> [[i64; 2]; 2] {
        let [u, v, _] = self.images(1);
        let c = |n: &BigInt| n.to_i64().expect("abelianized entries are small");
        [[c(&u.x), c(&v.x)], [c(&u.z), c(&v.z)]]
    }
}

pub fn apply_aut<T: Coord>(phi: &Automorphism, a: &Hei<T>) -> Hei<T> {
    phi.apply(a)
}

/// Element `h · t^k` of `Hei ⋊_φ Z/m`.
#[derive(Clone, Debug)]
pub struct Twisted<T> {
    pub h: Hei<T>,
    k: u32,
    ctx: Arc<Automorphism>,
}

pub type TwistedElement = Twisted<BigInt>;

impl<T: PartialEq> PartialEq for Twisted<T> {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.k == other.k && (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
    }
}

impl<T: Eq> Eq for Twisted<T> {}

impl<T: Coord> Twisted<T> {
    pub fn new(h: Hei<T>, k: i64, ctx: &Arc<Automorphism>) -> Self {
        let m = ctx.order() as i64;
        Twisted { h, k: k.rem_euclid(m) as u32, ctx: Arc::clone(ctx) }
    }

    pub fn identity(ctx: &Arc<Automorphism>) -> Self {
        Twisted::new(Hei::identity(), 0, ctx)
    }

    /// The generator `t`.
    pub fn t(ctx: &Arc<Automorphism>) -> Self {
        Twisted::new(Hei::identity(), 1, ctx)
    }

    pub fn from_hei(h: Hei<T>, ctx: &Arc<Automorphism>) -> Self {
        Twisted::new(h, 0, ctx)
    }

    /// Exponent of `t`, canonical in `[0, m)`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn context(&self) -> &Arc<Automorphism> {
        &self.ctx
    }

    pub fn m(&self) -> u32 {
        self.ctx.order()
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0 && self.h.is_identity()
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.m(), right: other.m() })
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let moved = self.ctx.apply_pow(self.k as i64, &other.h);
        Ok(Twisted::new(self.h.mul(&moved), self.k as i64 + other.k as i64, &self.ctx))
    }

    pub fn inv(&self) -> Self {
        let k = -(self.k as i64);
        Twisted::new(self.ctx.apply_pow(k, &self.h.inv()), k, &self.ctx)
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Twisted::identity(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same context");
            }
            base = base.mul(&base).expect("same context");
            e >>= 1;
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.mul(&self.inv())?.mul(&other.inv())
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.mul(&self.inv())
    }
}

impl<T: fmt::Display> fmt::Display for Twisted<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·t^{}", self.h, self.k)
    }
}

pub fn g_mul(a: &TwistedElement, b: &TwistedElement) -> Result<TwistedElement> {
    a.mul(b)
}

pub fn commutator(a: &TwistedElement, b: &TwistedElement) -> Result<TwistedElement> {
    a.commutator(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Order of `g`: `j` is the order of its image `x·t^k` in `Z² ⋊ Z/m`
/// (finite iff `k != 0` or `x = 0`, since the rotation part acts freely);
/// the kernel `<z_c>` is torsion free, so `g` has finite order iff `g^j = 1`.
pub fn order(g: &TwistedElement) -> Order {
    let m = g.m() as u64;
    let k = g.k() as u64;
    let j = if k == 0 {
        if g.h.x.is_zero() && g.h.z.is_zero() {
            1
        } else {
            return Order::Infinite;
        }
    } else {
        let j = m / m.gcd(&k);
        // Σ_{i<j} σ^{ik} x must vanish for the image to have order j.
        let sigma = g.context().abelianized();
        let mut acc = [BigInt::zero(), BigInt::zero()];
        let mut cur = [g.h.x.clone(), g.h.z.clone()];
        for _ in 0..j {
            acc[0] += &cur[0];
            acc[1] += &cur[1];
            for _ in 0..k {
                cur = [
                    BigInt::from(sigma[0][0]) * &cur[0] + BigInt::from(sigma[0][1]) * &cur[1],
                    BigInt::from(sigma[1][0]) * &cur[0] + BigInt::from(sigma[1][1]) * &cur[1],
                ];
            }
        }
        if !(acc[0].is_zero() && acc[1].is_zero()) {
            return Order::Infinite;
        }
        j
    };
    if g.pow(j as i64).is_identity() {
        Order::Finite(j)
    } else {
        Order::Infinite
    }
}

/// `(a,b,c)·(0,u,0)·t^j·(x,y,z)` in `Hei(R) ⋊ Z/4`, projected to the `Hei(R)`
/// part. `ctx` must be the order-4 automorphism.
pub fn isotropy_product(
    ctx: &Arc<Automorphism>,
    j: u32,
    abc: &RationalHeiElement,
    u: &BigRational,
    xyz: &RationalHeiElement,
) -> RationalHeiElement {
    let left = Twisted::new(abc.mul(&Hei::new(BigRational::zero(), u.clone(), BigRational::zero())), j as i64, ctx);
    let right = Twisted::from_hei(xyz.clone(), ctx);
    left.mul(&right).expect("same context").h
}

/// Convenience constructor for small integer triples.
pub fn hei(x: i64, y: i64, z: i64) -> HeiElement {
    HeiElement::from_i64(x, y, z)
}
