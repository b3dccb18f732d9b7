use findom::cech::{face_poset, flag_poset, Face};
use findom::linalg::betti;
use findom::novikov::{min_filtration, truncate};
use findom::torus::random_complex;
use findom::{
    make_khat, make_laurent, Coeff, ComplexFile, Degree, GradedElement, Mat, Monomial, NovikovElement, Poly, Region,
    Ring,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const C: Coeff = Coeff::Prime(101);

fn laurent() -> Ring {
    make_laurent(C).unwrap()
}

fn laurent_elem(terms: &[(i32, i32, i64)]) -> GradedElement {
    let r = laurent();
    let mut p = Poly::zero(C, r.npoly(), r.nlaurent());
    for &(a, b, c) in terms {
        p.add_term(Monomial::new(vec![a, b], 0), C.from_i64(c));
    }
    GradedElement::from_poly(&r, p)
}

fn terms() -> impl Strategy<Value = Vec<(i32, i32, i64)>> {
    prop::collection::vec((-3i32..=3, -3i32..=3, -5i64..=5), 0..6)
}

fn region() -> impl Strategy<Value = Region> {
    prop::sample::select(Region::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(a in terms(), b in terms(), c in terms()) {
        let (a, b, c) = (laurent_elem(&a), laurent_elem(&b), laurent_elem(&c));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn degrees_add_under_multiplication(a in terms(), b in terms()) {
        let (a, b) = (laurent_elem(&a), laurent_elem(&b));
        for (da, ea) in a.components() {
            for (db, eb) in b.components() {
                let p = ea.mul(&eb);
                prop_assert!(p.is_zero() || p.is_homogeneous_of(da + db));
            }
        }
    }

    #[test]
    fn retruncation_is_truncation(a in terms(), r in region(), n in 0i64..6, m in 0i64..6) {
        let a = laurent_elem(&a);
        let (lo, hi) = (n.min(m), n.max(m));
        let coarse = NovikovElement::new(&a, r, hi).retruncate(lo);
        let direct = NovikovElement::new(&a, r, lo);
        prop_assert_eq!(coarse.value, direct.value);
    }

    #[test]
    fn truncation_keeps_low_filtration(a in terms(), r in region(), n in -3i64..6) {
        let a = laurent_elem(&a);
        let (t, _) = truncate(&a, r, n);
        if let Some(f) = min_filtration(&t, r) {
            prop_assert!(f <= n);
        }
        let rest = a.sub(&t);
        if let Some(f) = min_filtration(&rest, r) {
            prop_assert!(f > n);
        }
    }

    #[test]
    fn truncated_products_are_coherent(a in terms(), b in terms(), r in region(), n in 0i64..6) {
        // Restricted to non-negative filtration, where low terms cannot be
        // produced by high ones.
        let keep = |t: &Vec<(i32, i32, i64)>| -> Vec<(i32, i32, i64)> {
            t.iter().copied().filter(|&(x, y, _)| r.filtration(Degree::new(x as i64, y as i64)) >= 0).collect()
        };
        let (a, b) = (laurent_elem(&keep(&a)), laurent_elem(&keep(&b)));
        let full = NovikovElement::new(&a.mul(&b), r, n);
        let piecewise = NovikovElement::new(&a, r, n).mul(&NovikovElement::new(&b, r, n));
        prop_assert_eq!(full.value, piecewise.value);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let ring = laurent();
        let c = random_complex(&ring, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = ComplexFile::parse(&ComplexFile::from_complex(&c).to_json()).unwrap().load(Coeff::Rational).unwrap();
        prop_assert_eq!(back.complex, c);
    }

    #[test]
    fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..5)) {
        let m = Mat::from_rows(C, rows.iter().map(|r| r.iter().map(|&v| C.from_i64(v)).collect()).collect());
        let t = Mat::from_rows(C, (0..m.cols()).map(|c| m.column(c)).collect());
        prop_assert_eq!(m.rank(), t.rank());
        prop_assert_eq!(m.rank() + m.kernel().len(), m.cols());
    }

    #[test]
    fn euler_characteristic(a in prop::collection::vec(-2i64..=2, 3)) {
        // Koszul-type complex k³ → k³ → k over the scalars.
        let d1 = Mat::from_rows(C, vec![a.iter().map(|&v| C.from_i64(v)).collect()]);
        let cross = vec![
            vec![C.from_i64(0), C.from_i64(a[2]), C.from_i64(-a[1])],
            vec![C.from_i64(-a[2]), C.from_i64(0), C.from_i64(a[0])],
            vec![C.from_i64(a[1]), C.from_i64(-a[0]), C.from_i64(0)],
        ];
        let d2 = Mat::from_rows(C, cross);
        prop_assert!(d1.mul(&d2).is_zero());
        let dims = [1, 3, 3];
        let bs = betti(&dims, &[d1, d2]);
        let chi: i64 = bs.iter().enumerate().map(|(k, &v)| if k % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
        prop_assert_eq!(chi, 1 - 3 + 3);
    }
}

#[test]
fn incidence_posets_validate() {
    face_poset().validate().unwrap();
    for f in Face::ALL {
        flag_poset(f).0.validate().unwrap();
    }
}

#[test]
fn flipped_incidence_is_caught() {
    let good = face_poset();
    for (&key, &v) in &good.incidence {
        let mut p = good.clone();
        p.incidence.insert(key, -v);
        assert!(p.validate().is_err(), "flipping {key:?} went unnoticed");
    }
}

#[test]
fn khat_homogeneous_products() {
    let k = make_khat(C).unwrap();
    let names = ["a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2"];
    for x in names {
        for y in names {
            let (ex, ey) = (GradedElement::parse(&k, x).unwrap(), GradedElement::parse(&k, y).unwrap());
            let p = ex.mul(&ey);
            let d = ex.degree().unwrap() + ey.degree().unwrap();
            assert!(p.is_zero() || p.is_homogeneous_of(d), "{x}*{y}");
        }
    }
    let unit = GradedElement::parse(&k, "a1*b1 + c1*d1").unwrap();
    assert!(unit.is_one(), "{unit}");
}
