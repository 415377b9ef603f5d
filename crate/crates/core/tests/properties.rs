use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use hei_core::abelian::{group_from_presentation, snf, FgAbelianGroup, IntMatrix};
use hei_core::group::{order, Automorphism, HeiElement, Order, TwistedElement};
use hei_core::homology::{cyclic_group_homology, hei_homology};
use hei_core::quotient::{project, QElement};
use hei_core::vc;

fn ctx(m: u32) -> Arc<Automorphism> {
    Arc::new(Automorphism::standard(m).unwrap())
}

fn coord() -> impl Strategy<Value = i64> {
    -1_000_000i64..=1_000_000
}

fn hei_el() -> impl Strategy<Value = HeiElement> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| HeiElement::from_i64(x, y, z))
}

fn order_m() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 4, 6])
}

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-1000i64..=1000, c), r).prop_map(move |rows| IntMatrix::from_rows(&rows, c))
    })
}

/// Product of random elementary row operations on `n × n`.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, BigInt::from(k));
        u = e.mul(&u).unwrap();
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn snf_certificate(a in matrix(30)) {
        let res = snf(&a);
        prop_assert!(res.verify(&a));
        let zero = BigInt::from(0);
        for w in res.invariants.windows(2) {
            prop_assert!(w[0] == zero || &w[1] % &w[0] == zero);
        }
    }

    #[test]
    fn unimodular_invariance(a in matrix(8), ops_l in prop::collection::vec((0usize..8, 0usize..8, -5i64..=5), 0..12),
                             ops_r in prop::collection::vec((0usize..8, 0usize..8, -5i64..=5), 0..12)) {
        let p = unimodular(a.rows(), &ops_l);
        let q = unimodular(a.cols(), &ops_r).transpose();
        let b = p.mul(&a).unwrap().mul(&q).unwrap();
        prop_assert_eq!(group_from_presentation(&a), group_from_presentation(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn hei_associative(a in hei_el(), b in hei_el(), c in hei_el()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_identity());
    }

    #[test]
    fn twisted_associative(m in order_m(), a in hei_el(), b in hei_el(), c in hei_el(), ks in (0i64..6, 0i64..6, 0i64..6)) {
        let cx = ctx(m);
        let (a, b, c) = (TwistedElement::new(a, ks.0, &cx), TwistedElement::new(b, ks.1, &cx), TwistedElement::new(c, ks.2, &cx));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
        // the projection to Q is a homomorphism
        prop_assert_eq!(project(&a.mul(&b).unwrap()), project(&a).mul(&project(&b)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn automorphism_is_homomorphism_of_order_m(m in order_m(), a in hei_el(), b in hei_el()) {
        let phi = Automorphism::standard(m).unwrap();
        prop_assert_eq!(phi.apply(&a.mul(&b)), phi.apply(&a).mul(&phi.apply(&b)));
        let mut x = a.clone();
        for _ in 0..m {
            x = phi.apply(&x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn order_is_exact(m in order_m(), x in -20i64..=20, y in -20i64..=20, z in -20i64..=20, k in 0i64..6) {
        let g = TwistedElement::new(HeiElement::from_i64(x, y, z), k, &ctx(m));
        if let Order::Finite(n) = order(&g) {
            prop_assert!(g.pow(n as i64).is_identity());
            for d in 1..n {
                if n % d == 0 {
                    prop_assert!(!g.pow(d as i64).is_identity());
                }
            }
        } else {
            // some power lands in Hei with nonzero x or z, or in the center
            prop_assert!(!g.pow(12).is_identity());
        }
    }

    #[test]
    fn q_inverse(m in order_m(), a in -50i64..=50, b in -50i64..=50, k in 0i64..6) {
        let q = QElement::standard(m, [a, b], k).unwrap();
        prop_assert!(q.mul(&q.inv()).unwrap().is_identity());
    }

    #[test]
    fn corrected_vc_families_verify(n1 in 1i64..60, n2 in 0i64..60) {
        prop_assume!(vc::PrimitivePair::new(n1, n2).is_some());
        let p = vc::PrimitivePair::new(n1, n2).unwrap();
        let fams = vc::corrected_rows(p);
        let types: Vec<_> = fams.iter().map(|f| f.claimed).collect();
        prop_assert!(types.contains(&vc::IsoType::Product) && types.contains(&vc::IsoType::Twisted));
        for f in &fams {
            prop_assert!(vc::vmax_check(&f.q));
            prop_assert!(vc::preimage_generators(f).report.passed());
            prop_assert!(vc::iso_type_check(f).report.passed());
        }
    }

    #[test]
    fn both_odd_square_identity(a in 0i64..500, b in 0i64..500) {
        let (n1, n2) = (2 * a + 1, 2 * b + 1);
        let w = HeiElement::from_i64(n1, (n1 * n2 + 1) / 2, n2);
        let rhs = HeiElement::from_i64(2 * n1, 2 * n1 * n2, 2 * n2).mul(&HeiElement::zc());
        prop_assert_eq!(w.pow(&BigInt::from(2)), rhs);
    }
}

#[test]
fn cyclic_group_homology_pattern() {
    for m in [2u32, 3, 4, 6] {
        for p in 0..8 {
            let want = match p {
                0 => FgAbelianGroup::free(1),
                p if p % 2 == 1 => FgAbelianGroup::cyclic(m as i64),
                _ => FgAbelianGroup::zero(),
            };
            assert_eq!(cyclic_group_homology(m, p).unwrap(), want, "m={m} p={p}");
        }
    }
}

#[test]
fn hei_homology_is_poincare_dual() {
    // closed orientable 3-manifold: ranks symmetric, H_3 = Z
    for n in 0..=3 {
        assert_eq!(hei_homology(n).unwrap().rank(), hei_homology(3 - n).unwrap().rank());
    }
    assert_eq!(hei_homology(1).unwrap().rank(), 2);
}
