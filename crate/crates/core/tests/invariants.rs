use std::collections::BTreeSet;
use std::sync::Arc;

use monocount::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u64, u32); 10] = [
    (2, 1),
    (3, 1),
    (2, 2),
    (5, 1),
    (7, 1),
    (2, 3),
    (3, 2),
    (11, 1),
    (13, 1),
    (2, 4),
];

fn fields() -> impl Iterator<Item = FieldCtx> {
    FIELDS.iter().map(|&(p, e)| build_field(p, e).unwrap())
}

#[test]
fn generator_powers_are_a_bijection() {
    for f in fields() {
        let seen: BTreeSet<u32> = (0..f.n() as u64).map(|k| f.gen_pow(k).index()).collect();
        assert_eq!(seen.len(), f.n() as usize);
        assert!(!seen.contains(&0));
        for k in 0..f.n() {
            assert_eq!(f.discrete_log(f.gen_pow(k as u64)).unwrap(), k);
        }
    }
}

#[test]
fn frobenius_fixes_prime_field() {
    for f in fields() {
        for c in 0..f.p() as i64 {
            let x = f.from_int(c);
            assert_eq!(f.pow(x, f.p() as u64), x);
        }
        let fixed = f.elements().filter(|&x| f.pow(x, f.p() as u64) == x).count();
        assert_eq!(fixed, f.p() as usize);
    }
}

#[test]
fn trace_is_surjective_and_balanced() {
    for f in fields() {
        let mut hits = vec![0u32; f.p() as usize];
        for x in f.elements() {
            let t = f.trace(x);
            assert_eq!(f.trace_by_frobenius(x), f.from_int(t as i64));
            hits[t as usize] += 1;
        }
        assert!(hits.iter().all(|&h| h == f.q() / f.p()), "{hits:?}");
    }
}

#[test]
fn exhaustive_ring_axioms_small_fields() {
    for f in fields().filter(|f| f.q() <= 9) {
        let all: Vec<_> = f.elements().collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
                assert_eq!(f.add(a, b), f.add(b, a));
                for &c in &all {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                }
            }
        }
    }
}

fn big_field() -> impl Strategy<Value = (u64, u32)> {
    prop_oneof![
        Just((11, 1)),
        Just((13, 1)),
        Just((2, 4)),
        Just((5, 3)),
        Just((3, 5)),
        Just((2, 16)),
        Just((251, 2)),
        Just((65521, 1)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_ring_axioms((p, e) in big_field(), raw in proptest::collection::vec(any::<u32>(), 3)) {
        let f = build_field(p, e).unwrap();
        let [a, b, c] = [0, 1, 2].map(|i| f.from_index(raw[i] % f.q()).unwrap());
        prop_assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

#[test]
fn additive_orthogonality() {
    for f in fields() {
        let ch = Characters::new(&f);
        for u in f.elements().skip(1) {
            let u = AdditiveCharParam::new(u).unwrap();
            let sum: Complex64 = f.elements().map(|x| ch.additive_char_eval(u, x)).sum();
            assert!(sum.norm() < 1e-9, "q = {}", f.q());
        }
    }
}

#[test]
fn multiplicative_orthogonality() {
    for f in fields() {
        let ch = Characters::new(&f);
        for t in 0..f.n() as i64 {
            let chi = MultCharExp::new(t, f.n());
            let sum: Complex64 = f.elements().skip(1).map(|x| ch.mult_char_eval(chi, x)).sum();
            let want = if t == 0 { f.n() as f64 } else { 0.0 };
            assert!(close(sum, Complex64::new(want, 0.0), 1e-9), "q = {}, t = {t}", f.q());
        }
    }
}

#[test]
fn gauss_sum_modulus_conjugation_and_rescaling() {
    for f in fields() {
        let ch = Characters::new(&f);
        let q = f.q() as f64;
        let minus_one = f.neg(f.one());
        let base = AdditiveCharParam::base();
        for t in 1..f.n() as i64 {
            let chi = MultCharExp::new(t, f.n());
            let g = ch.gauss_sum(chi, base);
            assert!((g.norm_sqr() - q).abs() < 1e-9 * q, "q = {}, t = {t}", f.q());

            let conj = ch.gauss_sum(chi.conj(f.n()), base);
            let want = ch.mult_char_eval(chi, minus_one) * g.conj();
            assert!(close(conj, want, 1e-9));
        }
        for t in 0..f.n() as i64 {
            let chi = MultCharExp::new(t, f.n());
            for u in f.elements().skip(1) {
                let direct = ch.gauss_sum(chi, AdditiveCharParam::new(u).unwrap());
                let rescaled = ch.mult_char_eval(chi, u).conj() * ch.gauss_sum(chi, base);
                assert!(close(direct, rescaled, 1e-9));
                assert!(close(direct, ch.gauss_sum_rescaled(chi, u).unwrap(), 1e-9));
            }
        }
    }
}

#[test]
fn dual_characters_are_trivial_on_the_image() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in fields() {
        let f = Arc::new(f);
        let ch = Characters::new(&f);
        for _ in 0..5 {
            let (s, r) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let form = monocount::counting::sample::random_form(f.clone(), s, r, f.q() as u64 + 1, &mut rng).unwrap();
            let basis = dual_group(form.matrix(), f.n() as u64).unwrap();
            for _ in 0..4 {
                let x: Vec<_> = (0..s).map(|_| f.gen_pow(rng.gen_range(0..f.n() as u64))).collect();
                let y: Vec<_> = (0..r)
                    .map(|i| {
                        (0..s).fold(f.one(), |acc, j| f.mul(acc, f.pow(x[j], form.matrix().get(j, i))))
                    })
                    .collect();
                for chi in enumerate_dual(&basis).take(500) {
                    assert!(close(ch.char_tuple_eval(&chi, &y), Complex64::new(1.0, 0.0), 1e-9));
                }
            }
        }
    }
}
