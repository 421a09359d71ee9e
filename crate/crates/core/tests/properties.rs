//! Property tests for the algebraic invariants of each layer.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qgw_core::coorddouble::{double_product, word_counit, CoordWord, DoubleElement, RForm};
use qgw_core::lfun::{LKind, Lfun};
use qgw_core::rootdata::{kostant_partitions, make_root_datum, LieType, RootDatum, RootVec, Weight};
use qgw_core::scalar::{LaurentPoly, RatFunc};
use qgw_core::verify::{CheckReport, Status};
use qgw_core::{One, QField, ScalarQ, Tensor, UElem, Uqg, Zero};

type S = ScalarQ;

fn datum(t: LieType, n: usize) -> RootDatum {
    make_root_datum(t, n).unwrap()
}

// ---------------------------------------------------------------------------
// scalars

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..4, -4i64..5), 0..4)
        .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c))))))
}

fn ratfunc(m: u32) -> impl Strategy<Value = RatFunc> {
    (laurent(), laurent()).prop_filter_map("zero denominator", move |(a, b)| RatFunc::new(a, b, m).ok())
}

fn two() -> BigRational {
    BigRational::from_integer(BigInt::from(2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in ratfunc(2), b in ratfunc(2), c in ratfunc(2)) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert!((a.clone() - a.clone()).is_zero());
        if !b.is_zero() {
            prop_assert!((b.mul_ref(&b.inv().unwrap()) - RatFunc::one()).is_zero());
            prop_assert_eq!(a.mul_ref(&b).div(&b).unwrap(), a.clone());
        }
    }

    #[test]
    fn evaluation_at_two_is_a_homomorphism(a in ratfunc(1), b in ratfunc(1)) {
        let s = two();
        if let (Some(x), Some(y)) = (a.eval(&s), b.eval(&s)) {
            prop_assert_eq!((a.clone() + b.clone()).eval(&s), Some(&x + &y));
            prop_assert_eq!((a.clone() * b.clone()).eval(&s), Some(x * y));
        }
    }

    #[test]
    fn canonical_form_is_unique(a in laurent(), b in laurent(), k in laurent()) {
        // (a·k)/(b·k) and a/b are the same element and must be stored identically
        if let (Ok(x), Ok(y)) = (RatFunc::new(a.mul(&k), b.mul(&k), 1), RatFunc::new(a, b, 1)) {
            prop_assert_eq!(x.num(), y.num());
            prop_assert_eq!(x.den(), y.den());
        }
    }
}

// ---------------------------------------------------------------------------
// root data

fn classical() -> impl Strategy<Value = RootDatum> {
    prop_oneof![
        (1usize..5).prop_map(|n| datum(LieType::A, n)),
        (2usize..5).prop_map(|n| datum(LieType::B, n)),
        (2usize..5).prop_map(|n| datum(LieType::C, n)),
        (3usize..5).prop_map(|n| datum(LieType::D, n)),
    ]
}

fn with_weight() -> impl Strategy<Value = (RootDatum, Weight)> {
    with_weights().prop_map(|(d, w, _)| (d, w))
}

fn with_weights() -> impl Strategy<Value = (RootDatum, Weight, Weight)> {
    classical().prop_flat_map(|d| {
        let n = d.rank;
        let w = || prop::collection::vec(-4i64..5, n).prop_map(|c| Weight::from_slice(&c));
        (Just(d), w(), w())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn weyl_group_relations((d, w) in with_weight()) {
        let n = d.rank;
        for i in 0..n {
            prop_assert_eq!(d.reflect(i, &d.reflect(i, &w)), w.clone());
            for j in 0..n {
                let aj = RootVec::simple(n, j);
                let expect = aj.sub(&RootVec::simple(n, i).scale(d.cartan[i][j]));
                prop_assert_eq!(d.reflect_root(i, &aj), expect);
                if i < j {
                    let m = match d.cartan[i][j] * d.cartan[j][i] { 0 => 2, 1 => 3, 2 => 4, _ => 6 };
                    let mut x = w.clone();
                    for _ in 0..m {
                        x = d.reflect(i, &d.reflect(j, &x));
                    }
                    prop_assert_eq!(x, w.clone(), "(r{} r{})^{} on {}", i + 1, j + 1, m, w);
                }
            }
        }
    }

    #[test]
    fn pairing_is_symmetric_and_reflection_invariant((d, w, v) in with_weights()) {
        let n = d.rank;
        prop_assert_eq!(d.pair(&w, &v), d.pair(&v, &w));
        for i in 0..n {
            prop_assert_eq!(d.pair(&d.reflect(i, &w), &d.reflect(i, &v)), d.pair(&w, &v));
        }
    }
}

#[test]
fn root_tables_match_the_sweep() {
    for (t, n) in [(LieType::A, 1), (LieType::A, 2), (LieType::A, 3), (LieType::A, 4), (LieType::B, 2), (LieType::B, 3), (LieType::B, 4),
        (LieType::C, 2), (LieType::C, 3), (LieType::C, 4), (LieType::D, 3), (LieType::D, 4)]
    {
        let d = datum(t, n);
        let u = Uqg::<S>::new(&d);
        let table = u.table();
        let positive = d.positive_roots();
        assert_eq!(table.reduced_word.len(), positive.len(), "{}", d.name());
        let swept: Vec<RootVec> =
            (0..table.reduced_word.len()).map(|k| qgw_core::rootdata::sweep_root(&d, &table.reduced_word, k)).collect();
        let ordered: Vec<RootVec> = table.ordered().map(|r| r.root.clone()).collect();
        assert_eq!(swept, ordered, "{}", d.name());
        for b in &positive {
            let p = d.pair_rr(b, b);
            assert!(p == 2 || p == 4, "{}: <{},{}> = {}", d.name(), b, b, p);
        }
    }
}

// ---------------------------------------------------------------------------
// U_q(g)

fn algebra(name: &str) -> Arc<Uqg<S>> {
    static CELL: OnceLock<std::sync::Mutex<std::collections::HashMap<String, Arc<Uqg<S>>>>> = OnceLock::new();
    let m = CELL.get_or_init(Default::default);
    let mut m = m.lock().unwrap();
    m.entry(name.to_string())
        .or_insert_with(|| Arc::new(Uqg::new(&qgw_core::verify::criteria::parse_datum(name).unwrap())))
        .clone()
}

fn generator(u: &Uqg<S>, k: usize) -> UElem<S> {
    let n = u.rank();
    let i = (k / 4) % n;
    match k % 4 {
        0 => u.e(i),
        1 => u.f(i),
        2 => u.k(&Weight::fundamental(n, i)),
        _ => u.k(&Weight::fundamental(n, i).neg()),
    }
}

fn product(u: &Uqg<S>, ks: &[usize]) -> UElem<S> {
    ks.iter().fold(u.one(), |acc, &k| u.mul(&acc, &generator(u, k)).unwrap())
}

fn word(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..16, 0..=max)
}

fn counit_leg(u: &Uqg<S>, t: &Tensor<S>, leg: usize) -> UElem<S> {
    let mut x = UElem::zero();
    for (k, c) in &t.terms {
        let e = u.counit(&UElem::mono(k[leg].clone(), S::one()));
        x.add_term(k[1 - leg].clone(), c.mul_ref(&e));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multiplication_is_associative(name in prop_oneof![Just("A2"), Just("B2"), Just("C2")], a in word(2), b in word(2), c in word(2)) {
        let u = algebra(name);
        let (x, y, z) = (product(&u, &a), product(&u, &b), product(&u, &c));
        let left = u.mul(&u.mul(&x, &y).unwrap(), &z).unwrap();
        let right = u.mul(&x, &u.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn hopf_axioms_on_products(name in prop_oneof![Just("A1"), Just("A2"), Just("B2")], w in word(4)) {
        let u = algebra(name);
        let x = product(&u, &w);
        let d = u.coproduct(&x).unwrap();
        let mut dx = Tensor::pure(&u.one(), &u.one());
        for &k in &w {
            dx = u.tensor_mul(&dx, &u.coproduct(&generator(&u, k)).unwrap()).unwrap();
        }
        prop_assert_eq!(&d, &dx, "Δ is not multiplicative");
        prop_assert_eq!(u.coproduct_leg(&d, 0).unwrap(), u.coproduct_leg(&d, 1).unwrap(), "coassociativity");
        prop_assert_eq!(counit_leg(&u, &d, 0), x.clone(), "counit");
        prop_assert_eq!(counit_leg(&u, &d, 1), x.clone(), "counit");
        let eps = u.scalar(u.counit(&x));
        let left = u.multiply_legs(&u.map_leg(&d, 0, |m| u.antipode_mono(m)).unwrap()).unwrap();
        let right = u.multiply_legs(&u.map_leg(&d, 1, |m| u.antipode_mono(m)).unwrap()).unwrap();
        prop_assert_eq!(left, eps.clone(), "antipode");
        prop_assert_eq!(right, eps, "antipode");
    }

    #[test]
    fn products_respect_the_grading(name in prop_oneof![Just("A2"), Just("C2")], a in word(3), b in word(3), k in 0usize..2) {
        let u = algebra(name);
        let n = u.rank();
        let (x, y) = (product(&u, &a), product(&u, &b));
        let xy = u.mul(&x, &y).unwrap();
        prop_assert!(xy.is_homogeneous(n));
        if let (Some(dx), Some(dy)) = (x.degrees(n).first().cloned(), y.degrees(n).first().cloned()) {
            for deg in xy.degrees(n) {
                prop_assert_eq!(deg, dx.add(&dy));
            }
            // K_μ x K_{−μ} = q^{⟨μ, deg x⟩} x
            let mu = Weight::fundamental(n, k % n);
            let conj = u.mul(&u.mul(&u.k(&mu), &x).unwrap(), &u.k(&mu.neg())).unwrap();
            let scalar = u.q(u.datum().pair_wr(&mu, &dx));
            prop_assert_eq!(conj, x.scale(&scalar));
        }
    }

    #[test]
    fn straightening_stays_between(name in prop_oneof![Just("A3"), Just("B2"), Just("C2"), Just("C3"), Just("D3")], i in 0usize..12, j in 0usize..12, minus in any::<bool>()) {
        let u = algebra(name);
        let n = u.table().len();
        let (i, j) = (i % n, j % n);
        prop_assume!(i < j);
        let roots = u.root_vectors().unwrap().roots.clone();
        let target = roots[i].add(&roots[j]);
        for (ex, c) in u.ls_constants(i, j, minus).unwrap() {
            prop_assert!(!c.is_zero());
            let mut w = RootVec::zero(u.rank());
            for (k, &e) in ex.iter().enumerate() {
                if e > 0 {
                    prop_assert!(i < k && k < j, "β{} outside ({}, {})", k + 1, i + 1, j + 1);
                    w = w.add(&roots[k].scale(e as i64));
                }
            }
            prop_assert_eq!(&w, &target);
        }
    }
}

#[test]
fn graded_dimensions_are_kostant_counts() {
    for name in ["A2", "A3", "B2", "C3"] {
        let u = algebra(name);
        let roots = u.root_vectors().unwrap().roots.clone();
        for h in 1..=4 {
            for mu in qgw_core::rootdata::nonneg_of_height(u.rank(), h) {
                assert_eq!(u.graded().dim(&mu).unwrap() as u64, kostant_partitions(&roots, &mu), "{} at {}", name, mu);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// l-functionals and the r-form

fn lfun(name: &str) -> Arc<Lfun<S>> {
    static CELL: OnceLock<std::sync::Mutex<std::collections::HashMap<String, Arc<Lfun<S>>>>> = OnceLock::new();
    let m = CELL.get_or_init(Default::default);
    let mut m = m.lock().unwrap();
    m.entry(name.to_string()).or_insert_with(|| Arc::new(Lfun::new(algebra(name)).unwrap())).clone()
}

#[test]
fn r_matrix_is_invertible_and_solves_ybe() {
    for name in ["A1", "A2", "B2", "C2"] {
        let lf = lfun(name);
        assert!(lf.r.matrix.mul(&lf.r.inverse).is_identity(), "{}", name);
        assert!(lf.r.check_qybe(), "{}", name);
    }
}

#[test]
fn l_matrices_are_triangular_with_cartan_diagonal() {
    for name in ["A1", "A2", "B2", "C2"] {
        let lf = lfun(name);
        for kind in [LKind::Plus, LKind::Minus] {
            for i in 0..lf.dim() {
                let d = lf.entry(kind, i, i);
                assert_eq!(d.len(), 1, "{} diagonal {}", name, i + 1);
                assert!(d.terms.keys().all(|m| m.is_cartan()));
                for j in 0..lf.dim() {
                    for m in lf.entry(kind, i, j).terms.keys() {
                        let ok = if kind == LKind::Plus { m.f.is_empty() } else { m.e.is_empty() };
                        assert!(ok, "{} ({},{}) leaves its Borel part", name, i + 1, j + 1);
                    }
                }
            }
        }
    }
}

fn coord_word(n: usize, max: usize) -> impl Strategy<Value = CoordWord> {
    prop::collection::vec((0..n as u8, 0..n as u8), 0..=max)
}

fn gen_word(n: usize) -> impl Strategy<Value = CoordWord> {
    (0..n as u8, 0..n as u8).prop_map(|g| vec![g])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn r_bar_is_the_convolution_inverse(
        (name, a, b) in prop_oneof![Just(("A1", 2usize)), Just(("A2", 3)), Just(("B2", 5)), Just(("C2", 4))]
            .prop_flat_map(|(name, n)| (Just(name), coord_word(n, 2), coord_word(n, 2)))
    ) {
        let rf = RForm::new(&lfun(name).r);
        let unit = if word_counit(&a) && word_counit(&b) { S::one() } else { S::zero() };
        let (x, y) = rf.convolutions(&a, &b);
        prop_assert_eq!(x, unit.clone());
        prop_assert_eq!(y, unit);
    }

    #[test]
    fn hat_r_forms_agree(a in gen_word(2), b in gen_word(2), c in gen_word(2), d in gen_word(2)) {
        let rf = RForm::new(&lfun("A1").r);
        prop_assert_eq!(rf.hat_r(&a, &b, &c, &d), rf.hat_r_four(&a, &b, &c, &d));
    }

    #[test]
    fn double_product_is_associative(
        x in (gen_word(2), gen_word(2)), y in (gen_word(2), gen_word(2)), z in (gen_word(2), gen_word(2))
    ) {
        let rf = RForm::new(&lfun("A1").r);
        let (x, y, z) = (DoubleElement::pure(x.0, x.1), DoubleElement::pure(y.0, y.1), DoubleElement::pure(z.0, z.1));
        let left = double_product(&rf, &double_product(&rf, &x, &y), &z);
        let right = double_product(&rf, &x, &double_product(&rf, &y, &z));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(double_product(&rf, &DoubleElement::one(), &x), x.clone());
        prop_assert_eq!(double_product(&rf, &x, &DoubleElement::one()), x);
    }
}

// ---------------------------------------------------------------------------
// reports

fn report() -> impl Strategy<Value = CheckReport> {
    (
        "[a-z_]{1,12}",
        "[ABCD][1-4]",
        any::<bool>(),
        ".{0,40}",
        0u64..100_000,
        prop::option::of(".{1,20}"),
        prop::collection::vec(".{0,20}", 0..3),
    )
        .prop_map(|(check_name, datum, pass, w, timing_ms, instance, details)| CheckReport {
            check_name,
            datum,
            status: if pass { Status::Pass } else { Status::Fail },
            witness: if pass { String::new() } else { format!("x{}", w) },
            timing_ms,
            instance,
            details,
        })
}

proptest! {
    #[test]
    fn reports_round_trip_through_json(r in report()) {
        let text = serde_json::to_string(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, r);
    }
}

#[test]
fn failing_checks_carry_a_witness() {
    let u = algebra("C3");
    let b = qgw_core::verify::Bench::from_uqg(u);
    let r = qgw_core::verify::check_rootvect(&b).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(!r.witness.is_empty());
}
