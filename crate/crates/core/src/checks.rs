//! Registry of named verification checks run by `verify-all`.
//!
//! Each check compares a computation against a printed value held in
//! [`PrintedValues`]; overriding a value there (test fixture) must turn the
//! matching check red.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{snf, FgAbelianGroup, IntMatrix};
use crate::assembly::{l_theory, topological_k, whitehead, whitehead_involution_check};
use crate::error::{Error, Result};
use crate::group::{isotropy_product, Automorphism, Hei, HeiElement, RationalHeiElement, TwistedElement};
use crate::homology::{e2_table, hei_homology, mv_consistency_check};
use crate::quotient::{
    classify_finite_subgroups_q, conjugation_identities_check, lift_finite_subgroups_g, normalizer_evidence,
    preimage_subgroup, sweep_check, torsion_classes,
};
use crate::report::{CheckReport, Status};
use crate::vc;

/// Values printed in the literature that the checks compare against,
/// keyed by a short name. Lists are `;`-separated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedValues(BTreeMap<String, String>);

impl Default for PrintedValues {
    fn default() -> Self {
        let entries = [
            ("q.m4.classes", "<t>; <e1 t>; <t^2>; <e1 t^2>; <(e1+e2) t^2>"),
            ("q.m4.maximal", "<t>; <e1 t>; <e1 t^2>"),
            ("g.m4.classes", "<t>; <t^2>; <u t^2>"),
            ("g.m4.preimages", "Z + Z/4; Z; Z + Z/2"),
            ("g.m2.classes", "<t>; <u t>; <v t>"),
            ("hei.homology", "Z; Z^2; Z^2; Z; 0; 0"),
            ("e2.q0", "Z; Z/4; 0; Z/4; 0; Z/4; 0"),
            ("e2.q1", "Z/2; 0; Z/2; 0; Z/2; 0; Z/2"),
            ("e2.q2", "Z/2; 0; Z/2; 0; Z/2; 0; Z/2"),
            ("e2.q3", "Z; Z/4; 0; Z/4; 0; Z/4; 0"),
            ("g.homology", "Z; Z/2 + Z/4; Z/2; Z + Z/2 + Z/4"),
            ("g.homology.high", "Z/2 + Z/4"),
            ("k.ranks", "4:5; 6:6; 3:3; 2:4"),
            ("k.m4.even", "Z^5 = Z + R~(Z/4) + R~(Z/2)"),
            ("k.m4.odd", "Z^5 = R~(Z/4) + R~(Z/2) + K~_1(S^3)"),
            ("wh.m4", "1:NK_1(Z[Z/4])^2; 0:NK_0(Z[Z/4])^2; -1:0; -2:0; -3:0"),
            ("wh.m6", "1:NK_1(Z[Z/6])^2; 0:Z; -1:Z; -2:0; -3:0"),
            ("wh.m3", "2:0; 1:0; 0:0; -1:0"),
            ("wh.m2", "2:0; 1:0; 0:0; -1:0"),
        ];
        PrintedValues(entries.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }
}

impl PrintedValues {
    pub fn get(&self, key: &str) -> &str {
        self.0.get(key).map(String::as_str).unwrap_or("")
    }

    /// Replaces a known value; unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.0.get_mut(key) {
            Some(v) => {
                *v = value.to_string();
                Ok(())
            }
            None => Err(Error::Parse(format!("unknown printed value `{key}`"))),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    fn list(&self, key: &str) -> Vec<String> {
        self.get(key).split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    }

    fn groups(&self, key: &str) -> std::result::Result<Vec<FgAbelianGroup>, String> {
        self.list(key).iter().map(|s| s.parse().map_err(|e| format!("{key}: {e}"))).collect()
    }

    /// `n:value` entries; malformed or empty tables are an error.
    fn by_degree(&self, key: &str) -> std::result::Result<Vec<(i64, String)>, String> {
        let entries = self.list(key);
        if entries.is_empty() {
            return Err(format!("{key}: no entries"));
        }
        entries
            .iter()
            .map(|e| {
                e.split_once(':')
                    .and_then(|(n, v)| Some((n.trim().parse().ok()?, v.trim().to_string())))
                    .ok_or_else(|| format!("{key}: malformed entry `{e}`"))
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub height: i64,
    pub seed: u64,
    pub printed: PrintedValues,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { height: 20, seed: 0, printed: PrintedValues::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub status: Status,
    pub details: String,
    pub runtime_ms: u64,
}

type CheckFn = fn(&VerifyOptions) -> CheckReport;

/// Every registered check, by id.
pub fn registry() -> Vec<(&'static str, CheckFn)> {
    let mut r: Vec<(&'static str, CheckFn)> = vec![
        ("abelian.snf-certificates", snf_certificates),
        ("assembly.ktheory-ranks", ktheory_ranks),
        ("assembly.ltheory-shape", ltheory_shape),
        ("assembly.whitehead-involution", whitehead_involution),
        ("assembly.whitehead-table", whitehead_table),
        ("g.finite-subgroups.m2", g_finite_m2),
        ("g.finite-subgroups.m4", g_finite_m4),
        ("group.isotropy-products", isotropy_check_opts),
        ("group.presentation", presentation_check_all),
        ("homology.e2-grid", e2_grid),
        ("homology.g-mayer-vietoris", g_mayer_vietoris),
        ("homology.g-negative-control", g_negative_control),
        ("homology.hei", hei_check),
        ("q.classification.m2-m3-m6", q_other_orders),
        ("q.conjugation-identities", q_conjugation),
        ("q.maximal-finite.m4", q_maximal_m4),
        ("q.self-normalizing", q_normalizers),
        ("vc.corrected-classification", vc_corrected),
        ("vc.disjointness", vc_disjointness),
        ("vc.iso-type", vc_iso_type),
        ("vc.preimage-relations", vc_preimage),
        ("vc.square-identity", vc_square),
        ("vc.vmax", vc_vmax),
    ];
    r.sort_by_key(|(id, _)| *id);
    r
}

/// Runs one check, turning a panic into a failing record.
pub fn run_check(id: &str, f: CheckFn, opts: &VerifyOptions) -> CheckRecord {
    let start = Instant::now();
    let rep = std::panic::catch_unwind(|| f(opts)).unwrap_or_else(|_| {
        let mut r = CheckReport::new();
        r.fail("check panicked");
        r
    });
    CheckRecord {
        check_id: id.to_string(),
        status: rep.status,
        details: rep.details(),
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

/// All registered checks, sorted by id.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckRecord> {
    registry().into_iter().map(|(id, f)| run_check(id, f, opts)).collect()
}

fn ctx(m: u32) -> Arc<Automorphism> {
    Arc::new(Automorphism::standard(m).expect("supported order"))
}

fn compare_list(rep: &mut CheckReport, what: &str, got: &[String], want: &[String]) {
    rep.require(got == want, || format!("{what}: computed [{}], printed [{}]", got.join(", "), want.join(", ")));
}

/// Generator words for `t u t⁻¹` and `t v t⁻¹`, as `(generator, exponent)`
/// letters over `u, v, z`.
fn conjugation_words(m: u32) -> Option<[&'static [(char, i64)]; 2]> {
    Some(match m {
        2 => [&[('u', -1)], &[('v', -1)]],
        3 => [&[('u', -1), ('v', 1)], &[('u', -1), ('z', -1)]],
        4 => [&[('v', 1)], &[('u', -1)]],
        6 => [&[('v', 1)], &[('u', -1), ('v', 1)]],
        _ => return None,
    })
}

/// The relators of `Hei ⋊ Z/m`: `[u,z] = [v,z] = [t,z] = 1`, `[u,v] = z`,
/// `t^m = 1` and the conjugation relations for `u`, `v`.
pub fn presentation_check(m: u32) -> Result<CheckReport> {
    let words = conjugation_words(m).ok_or(Error::UnsupportedOrder(m))?;
    let c = Arc::new(Automorphism::standard(m)?);
    let gen = |ch: char| match ch {
        'u' => TwistedElement::from_hei(HeiElement::u(), &c),
        'v' => TwistedElement::from_hei(HeiElement::v(), &c),
        'z' => TwistedElement::from_hei(HeiElement::zc(), &c),
        _ => TwistedElement::t(&c),
    };
    let eval = |w: &[(char, i64)]| {
        w.iter().fold(TwistedElement::identity(&c), |acc, &(ch, e)| acc.mul(&gen(ch).pow(e)).expect("same context"))
    };
    let (u, v, z, t) = (gen('u'), gen('v'), gen('z'), gen('t'));
    let mut rep = CheckReport::new();
    for (name, a) in [("u", &u), ("v", &v), ("t", &t)] {
        rep.require(a.commutator(&z)?.is_identity(), || format!("m={m}: [{name}, z] != 1"));
    }
    rep.require(u.commutator(&v)? == z, || format!("m={m}: [u, v] = {} != z", u.commutator(&v).unwrap()));
    rep.require(t.pow(m as i64).is_identity(), || format!("m={m}: t^{m} != 1"));
    for (name, a, w) in [("u", &u, words[0]), ("v", &v, words[1])] {
        let lhs = t.conjugate(a)?;
        let rhs = eval(w);
        rep.require(lhs == rhs, || format!("m={m}: t {name} t^-1 = {lhs}, expected {rhs}"));
    }
    for j in 1..m {
        rep.require(!t.pow(j as i64).is_identity(), || format!("m={m}: t^{j} = 1"));
    }
    rep.note(format!("m={m}: all relators hold"));
    Ok(rep)
}

/// `t⁴ = 1`, `(ut²)² = 1`, `(ut)⁴ = z` in `Hei ⋊ Z/4`.
pub fn m4_identities() -> Vec<(&'static str, bool)> {
    let c = ctx(4);
    let u = TwistedElement::from_hei(HeiElement::u(), &c);
    let t = TwistedElement::t(&c);
    let z = TwistedElement::from_hei(HeiElement::zc(), &c);
    vec![
        ("t^4 = 1", t.pow(4).is_identity()),
        ("(u t^2)^2 = 1", u.mul(&t.pow(2)).unwrap().pow(2).is_identity()),
        ("(u t)^4 = z", u.mul(&t).unwrap().pow(4) == z),
    ]
}

fn presentation_check_all(_: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    for m in [2, 3, 4, 6] {
        rep.merge(presentation_check(m).unwrap_or_else(|e| {
            let mut r = CheckReport::new();
            r.fail(e.to_string());
            r
        }));
    }
    for (name, ok) in m4_identities() {
        rep.require(ok, || format!("m=4: {name} fails"));
    }
    rep
}

/// The printed closed forms for `(a,b,c)·(0,u,0)·t^j·(x,y,z)`, `j = 1, 2, 0`.
pub fn printed_isotropy_form(j: u32, abc: &RationalHeiElement, u: &BigRational, xyz: &RationalHeiElement) -> RationalHeiElement {
    let (a, b, c) = (&abc.x, &abc.y, &abc.z);
    let (x, y, z) = (&xyz.x, &xyz.y, &xyz.z);
    match j {
        1 => Hei::new(a - z, u + b + y - x * z - a * x, c + x),
        2 => Hei::new(a - x, u + b + y - a * z, c - z),
        _ => Hei::new(a + x, u + b + y + a * z, c + z),
    }
}

/// Compares exact products with the printed closed forms on random
/// rational tuples. For `j = 1` the middle coordinate also gets compared
/// against `u+b+y-xz+ax`.
pub fn isotropy_check(seed: u64, trials: usize) -> CheckReport {
    let c = ctx(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CheckReport::new();
    let mut bad = [0usize; 3];
    let mut first: [Option<String>; 3] = [None, None, None];
    let mut corrected_ok = true;
    for _ in 0..trials {
        let mut q = || BigRational::new(BigInt::from(rng.gen_range(-1000i64..=1000)), BigInt::from(rng.gen_range(1i64..=100)));
        let abc = Hei::new(q(), q(), q());
        let xyz = Hei::new(q(), q(), q());
        let u = q();
        for j in [0u32, 1, 2] {
            let got = isotropy_product(&c, j, &abc, &u, &xyz);
            let want = printed_isotropy_form(j, &abc, &u, &xyz);
            if got != want {
                bad[j as usize] += 1;
                first[j as usize].get_or_insert_with(|| {
                    format!("j={j}: (a,b,c)={abc}, u={u}, (x,y,z)={xyz}: product {got}, closed form {want}")
                });
            }
            if j == 1 {
                let fixed = Hei::new(&abc.x - &xyz.z, &u + &abc.y + &xyz.y - &xyz.x * &xyz.z + &abc.x * &xyz.x, &abc.z + &xyz.x);
                corrected_ok &= got == fixed;
            }
        }
    }
    for j in [1usize, 2, 0] {
        if bad[j] == 0 {
            rep.note(format!("j={j}: closed form holds on {trials} tuples"));
        } else {
            rep.fail(format!("j={j}: closed form fails on {}/{trials} tuples, first {}", bad[j], first[j].as_ref().unwrap()));
        }
    }
    if corrected_ok {
        rep.note("j=1: the product equals (a-z, u+b+y-xz+ax, c+x) on every tuple");
    }
    rep
}

fn isotropy_check_opts(o: &VerifyOptions) -> CheckReport {
    isotropy_check(o.seed, 1000)
}

/// Random integer matrices: `U A V = S` with `U`, `V` unimodular and `S`
/// in Smith form.
fn snf_certificates(o: &VerifyOptions) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let mut rep = CheckReport::new();
    let trials = 40;
    for _ in 0..trials {
        let (r, c) = (rng.gen_range(1..=10), rng.gen_range(1..=10));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-1000..=1000)).collect()).collect();
        let a = IntMatrix::from_rows(&rows, c);
        let res = snf(&a);
        rep.require(res.verify(&a), || format!("certificate fails for {a}"));
    }
    rep.note(format!("{trials} random matrices up to 10x10"));
    rep
}

fn q_maximal_m4(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    let classes = classify_finite_subgroups_q(4).expect("m = 4");
    let names: Vec<String> = classes.iter().map(|c| c.name.clone()).collect();
    let maximal: Vec<String> = classes.iter().filter(|c| c.maximal).map(|c| c.name.clone()).collect();
    compare_list(&mut rep, "classes", &names, &o.printed.list("q.m4.classes"));
    compare_list(&mut rep, "maximal", &maximal, &o.printed.list("q.m4.maximal"));
    for c in &classes {
        rep.require(c.verify_order(), || format!("{}: order {} not reproduced", c.name, c.order));
    }
    match sweep_check(4, 6, 12) {
        Ok(r) => rep.merge(r),
        Err(e) => rep.fail(e.to_string()),
    }
    rep
}

fn q_other_orders(_: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    for (m, count, maximal) in [(2u32, 4usize, 4usize), (3, 3, 3), (6, 5, 3)] {
        let classes = classify_finite_subgroups_q(m).expect("supported");
        let nmax = classes.iter().filter(|c| c.maximal).count();
        rep.require(classes.len() == count && nmax == maximal, || {
            format!("m={m}: {} classes, {nmax} maximal (expected {count}, {maximal})", classes.len())
        });
        for c in &classes {
            rep.require(c.verify_order(), || format!("m={m}: {} order not reproduced", c.name));
        }
        match sweep_check(m, 4, 8) {
            Ok(r) => rep.merge(r),
            Err(e) => rep.fail(e.to_string()),
        }
    }
    rep
}

fn q_conjugation(o: &VerifyOptions) -> CheckReport {
    conjugation_identities_check(o.seed, 1000)
}

fn q_normalizers(_: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::evidence();
    for m in [2, 3, 4, 6] {
        match normalizer_evidence(m, 12) {
            Ok(r) => rep.merge(r),
            Err(e) => rep.fail(e.to_string()),
        }
    }
    rep
}

fn g_finite_m4(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    let lifts = lift_finite_subgroups_g(4).expect("m = 4");
    let names: Vec<String> = lifts.iter().map(|c| c.name.clone()).collect();
    compare_list(&mut rep, "G-classes", &names, &o.printed.list("g.m4.classes"));
    for c in &lifts {
        rep.require(c.verify_order(), || format!("{}: order {} not reproduced", c.name, c.order));
    }
    let c4 = ctx(4);
    let mut types = Vec::new();
    for t in torsion_classes(4).expect("m = 4").into_iter().filter(|t| t.maximal) {
        match preimage_subgroup(&c4, t.x, t.k) {
            Ok(p) => {
                types.push(p.iso_type.to_string());
                rep.merge(p.transcript);
            }
            Err(e) => rep.fail(e.to_string()),
        }
    }
    compare_list(&mut rep, "preimage types", &types, &o.printed.list("g.m4.preimages"));
    rep
}

fn g_finite_m2(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    let lifts = lift_finite_subgroups_g(2).expect("m = 2");
    let names: Vec<String> = lifts.iter().map(|c| c.name.clone()).collect();
    compare_list(&mut rep, "G-classes", &names, &o.printed.list("g.m2.classes"));
    rep
}

fn hei_check(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    match o.printed.groups("hei.homology") {
        Ok(want) => {
            for (n, w) in want.iter().enumerate() {
                let got = hei_homology(n as i64).expect("n >= 0");
                rep.require(&got == w, || format!("H_{n}(Hei) = {got}, printed {w}"));
            }
        }
        Err(e) => rep.fail(e),
    }
    rep
}

fn e2_grid(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    let table = e2_table(4, 6).expect("m = 4");
    for q in 0..=3usize {
        match o.printed.groups(&format!("e2.q{q}")) {
            Ok(want) => {
                rep.require(table.rows[q] == want, || {
                    let got: Vec<String> = table.rows[q].iter().map(ToString::to_string).collect();
                    format!("row q={q}: computed {}", got.join("; "))
                });
            }
            Err(e) => rep.fail(e),
        }
    }
    rep
}

fn g_values(o: &VerifyOptions, top: usize) -> std::result::Result<Vec<FgAbelianGroup>, String> {
    let mut v = o.printed.groups("g.homology")?;
    let high = o.printed.groups("g.homology.high")?;
    let high = high.first().cloned().unwrap_or_else(FgAbelianGroup::zero);
    while v.len() <= top {
        v.push(high.clone());
    }
    Ok(v)
}

fn g_mayer_vietoris(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    match g_values(o, 12).map_err(Error::Parse).and_then(|v| mv_consistency_check(&v)) {
        Ok(mv) => {
            for c in mv.constraints {
                rep.require(c.passed, || format!("{}: {}", c.name, c.detail));
            }
            if rep.passed() {
                rep.note("all constraints hold for n <= 12");
            }
        }
        Err(e) => rep.fail(e.to_string()),
    }
    rep
}

fn g_negative_control(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    match g_values(o, 12) {
        Ok(mut v) => {
            v[2] = FgAbelianGroup::zero();
            let mv = mv_consistency_check(&v).expect("nonempty");
            let failed: Vec<&str> = mv.constraints.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            rep.require(!mv.passed(), || "H2 = 0 variant is not rejected".into());
            rep.note(format!("H2 = 0 rejected by: {}", failed.join(", ")));
        }
        Err(e) => rep.fail(e),
    }
    rep
}

fn ktheory_ranks(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    let ranks = match o.printed.by_degree("k.ranks") {
        Ok(r) => r,
        Err(e) => {
            rep.fail(e);
            return rep;
        }
    };
    for (m, r) in ranks {
        for n in [0, 1] {
            match topological_k(m as u32, n) {
                Ok(k) => {
                    let want = r.parse::<usize>().map(FgAbelianGroup::free);
                    rep.require(want.as_ref().is_ok_and(|w| *w == k.group), || format!("m={m}, n={n}: K = {}, printed rank {r}", k.group));
                }
                Err(e) => rep.fail(e.to_string()),
            }
        }
    }
    for (n, key) in [(0, "k.m4.even"), (1, "k.m4.odd")] {
        let got = topological_k(4, n).map(|k| k.to_string()).unwrap_or_else(|e| e.to_string());
        rep.require(got == o.printed.get(key), || format!("m=4, n={n}: {got}"));
    }
    rep
}

fn whitehead_table(o: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    for m in [4u32, 6, 3, 2] {
        let table = match o.printed.by_degree(&format!("wh.m{m}")) {
            Ok(t) => t,
            Err(e) => {
                rep.fail(e);
                continue;
            }
        };
        for (n, want) in table {
            let got = whitehead(m, n).map(|e| e.to_string()).unwrap_or_else(|e| e.to_string());
            rep.require(got == want, || format!("Wh_{n}, m={m}: {got}, printed {want}"));
        }
    }
    for n in -8..=-4 {
        rep.require(whitehead(4, n).is_ok_and(|e| e.is_zero()), || format!("Wh_{n}, m=4 is not 0"));
    }
    rep.require(matches!(whitehead(4, 2), Err(Error::NotCovered { .. })), || "Wh_2, m=4 should be out of range".into());
    rep
}

fn whitehead_involution(_: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    for n in [0, 1] {
        match whitehead_involution_check(n) {
            Ok(r) => rep.merge(r),
            Err(e) => rep.fail(e.to_string()),
        }
    }
    rep
}

fn ltheory_shape(_: &VerifyOptions) -> CheckReport {
    let mut rep = CheckReport::new();
    for n in 0..4 {
        let l = l_theory(n, true);
        rep.require(l.split && l.expr.symbol_count() == 6 && l.expr.families.is_empty(), || {
            format!("n={n}: inverted-two expression is {l}")
        });
        let full = l_theory(n, false);
        rep.require(full.relative.families.len() == 2, || format!("n={n}: expected two indexed families"));
        rep.require(full.decorations.iter().all(|(_, ok)| *ok), || format!("n={n}: decoration check fails"));
    }
    rep
}

fn literal_suite(o: &VerifyOptions) -> vc::VcSuite {
    vc::vc_suite(&vc::dinfty_representatives(o.height), o.height)
}

fn with_count(mut r: CheckReport, o: &VerifyOptions) -> CheckReport {
    r.note(format!("{} pairs at height {}", vc::ic_plus(o.height).len(), o.height));
    r
}

fn vc_vmax(o: &VerifyOptions) -> CheckReport {
    with_count(literal_suite(o).vmax, o)
}

fn vc_preimage(o: &VerifyOptions) -> CheckReport {
    with_count(literal_suite(o).preimage, o)
}

fn vc_iso_type(o: &VerifyOptions) -> CheckReport {
    with_count(literal_suite(o).iso_type, o)
}

fn vc_square(o: &VerifyOptions) -> CheckReport {
    with_count(literal_suite(o).square_identity, o)
}

fn vc_disjointness(o: &VerifyOptions) -> CheckReport {
    vc::conjugacy_disjointness_check(&vc::dinfty_representatives(o.height), o.height, o.seed, 1000)
}

fn vc_corrected(o: &VerifyOptions) -> CheckReport {
    let fams = vc::corrected_representatives(o.height);
    let suite = vc::vc_suite(&fams, o.height);
    let mut rep = CheckReport::new();
    for r in [suite.vmax, suite.preimage, suite.iso_type] {
        rep.merge(r);
    }
    let dis = vc::conjugacy_disjointness_check(&fams, o.height, o.seed, 100);
    if dis.status == Status::Fail {
        rep.merge(dis);
    } else {
        rep.note(dis.details());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations_hold() {
        for m in [2, 3, 4, 6] {
            let r = presentation_check(m).unwrap();
            assert!(r.passed(), "{}", r.details());
        }
        assert!(presentation_check(5).is_err());
        assert!(m4_identities().iter().all(|(_, ok)| *ok));
    }

    #[test]
    fn isotropy_first_form_is_misprinted() {
        let r = isotropy_check(0, 50);
        assert!(!r.passed());
        let d = r.details();
        assert!(d.contains("j=2: closed form holds") && d.contains("j=0: closed form holds"), "{d}");
        assert!(d.contains("FAIL: j=1"), "{d}");
        assert!(d.contains("u+b+y-xz+ax"), "{d}");
    }

    #[test]
    fn hand_check_of_j1() {
        // (1,0,0)·t·(1,0,0) = (1,1,1)
        let c = ctx(4);
        let r = |n: i64| BigRational::from_integer(n.into());
        let one = Hei::new(r(1), r(0), r(0));
        assert_eq!(isotropy_product(&c, 1, &one, &r(0), &one), Hei::new(r(1), r(1), r(1)));
        assert_eq!(printed_isotropy_form(1, &one, &r(0), &one), Hei::new(r(1), r(-1), r(1)));
    }

    #[test]
    fn printed_values_override() {
        let mut p = PrintedValues::default();
        assert!(p.set("no.such.key", "x").is_err());
        p.set("hei.homology", "Z; Z^3").unwrap();
        let o = VerifyOptions { printed: p, ..Default::default() };
        assert!(!hei_check(&o).passed());
        assert!(hei_check(&VerifyOptions::default()).passed());
    }

    #[test]
    fn registry_ids_unique_and_sorted() {
        let ids: Vec<&str> = registry().iter().map(|(id, _)| *id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn cheap_checks_pass() {
        let o = VerifyOptions { height: 4, ..Default::default() };
        for f in [
            presentation_check_all as CheckFn,
            hei_check,
            e2_grid,
            g_mayer_vietoris,
            g_negative_control,
            ktheory_ranks,
            whitehead_table,
            whitehead_involution,
            ltheory_shape,
            g_finite_m4,
            g_finite_m2,
            snf_certificates,
            vc_corrected,
            vc_vmax,
            vc_square,
        ] {
            let r = f(&o);
            assert!(r.passed(), "{}", r.details());
        }
    }
}
