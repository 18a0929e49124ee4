mod support;

use hilbq::exact::{series_expand, QRat, Rational, Ring, TPoly, TRat};
use hilbq::fock::FockVector;
use hilbq::invariants::QuantumRing;
use hilbq::jack::jack_vector;
use hilbq::operators::md_cached;
use hilbq::partitions::{Basis, CharacterTable, Partition};
use proptest::prelude::*;

use support::{frobenius_character, partitions, r, z};

fn tpoly() -> impl Strategy<Value = TPoly> {
    prop::collection::vec(((0usize..3, 0usize..3), -4i64..5), 0..4)
        .prop_map(|terms| TPoly::from_terms(terms.into_iter().map(|(e, c)| (e, r(c, 1)))))
}

fn trat() -> impl Strategy<Value = TRat> {
    (tpoly(), tpoly()).prop_map(|(a, b)| {
        let den = if b.is_zero() { TPoly::one() } else { b };
        TRat::new(a, den)
    })
}

/// Rational functions of `q` regular at `q = 0`.
fn qrat() -> impl Strategy<Value = QRat> {
    (tpoly(), tpoly(), -3i64..4).prop_map(|(a, b, c)| {
        let num = QRat::from_tpoly(a) + QRat::q() * QRat::from_tpoly(b);
        num / (QRat::one() + QRat::q() * QRat::from_rational(r(c, 1)))
    })
}

fn partition_of(n: u32) -> impl Strategy<Value = Partition> {
    let all = partitions(n);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn sized_partition() -> impl Strategy<Value = Partition> {
    (1u32..6).prop_flat_map(partition_of)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in trat(), b in trat(), c in trat()) {
        prop_assert_eq!((a.clone() + &b) + &c, a.clone() + &(b.clone() + &c));
        prop_assert_eq!(a.clone() * &b, b.clone() * &a);
        prop_assert_eq!(a.clone() * &(b.clone() + &c), a.clone() * &b + a.clone() * &c);
        prop_assert!((a.clone() - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(a.clone() / &b * &b, a);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in trat(), b in trat(), x in -7i64..8, y in 1i64..9) {
        let (t1, t2) = (r(x, 3), r(y, 5));
        if let (Some(u), Some(v), Some(w)) = ((a.clone() * &b).eval(&t1, &t2), a.eval(&t1, &t2), b.eval(&t1, &t2)) {
            prop_assert_eq!(u, v * w);
        }
    }

    #[test]
    fn series_expansion_is_multiplicative(a in qrat(), b in qrat()) {
        let order = 6;
        let (sa, sb) = (series_expand(&a, order).unwrap(), series_expand(&b, order).unwrap());
        prop_assert_eq!(series_expand(&(a.clone() * &b), order).unwrap(), sa.clone() * sb.clone());
        prop_assert_eq!(series_expand(&(a + &b), order).unwrap(), sa + sb);
    }

    #[test]
    fn conjugation_is_an_involution(mu in sized_partition()) {
        prop_assert_eq!(mu.conjugate().conjugate(), mu.clone());
        prop_assert_eq!(mu.conjugate().size(), mu.size());
        prop_assert_eq!(Rational::from_integer(mu.zmu()), z(&mu));
    }

    #[test]
    fn characters_match_frobenius(lambda in sized_partition()) {
        let n = lambda.size();
        let table = CharacterTable::new(n);
        for mu in partitions(n) {
            prop_assert_eq!(table.value(&lambda, &mu).unwrap(), frobenius_character(&lambda, &mu));
        }
        prop_assert_eq!(Rational::from_integer(lambda.dimension()), r(frobenius_character(&lambda, &Partition::ones(n)), 1));
    }

    #[test]
    fn heisenberg_commutator(mu in sized_partition(), k in 1i32..4, l in 1i32..4) {
        let v = FockVector::<TRat>::basis(mu.clone());
        let lhs = v.alpha_word(&[k, -l]).sub(&v.alpha_word(&[-l, k])).unwrap();
        if k == l {
            prop_assert_eq!(lhs, v.scale(&TRat::from_int(k as i64)));
        } else {
            prop_assert!(lhs.is_zero());
        }
    }

    #[test]
    fn jack_vectors_are_eigenvectors(lambda in sized_partition()) {
        let j = jack_vector(&lambda).unwrap();
        let m0 = md_cached(lambda.size()).at_q0();
        let image = m0.apply(&j.vector);
        prop_assert_eq!(image, j.vector.scale(&TRat::from_poly(j.eigenvalue.clone())));
    }

    #[test]
    fn quantum_product_is_commutative_and_associative(
        a in partition_of(3), b in partition_of(3), c in partition_of(3), x in 1i64..9, y in -9i64..-1
    ) {
        let ring = QuantumRing::specialized(3, &r(x, 7), &r(y, 5)).unwrap();
        let (a, b, c) = (FockVector::basis(a), FockVector::basis(b), FockVector::basis(c));
        let ab = ring.multiply(&a, &b).unwrap();
        prop_assert_eq!(ab.clone(), ring.multiply(&b, &a).unwrap());
        prop_assert_eq!(ring.multiply(&ab, &c).unwrap(), ring.multiply(&a, &ring.multiply(&b, &c).unwrap()).unwrap());
    }
}

#[test]
fn class_sums_and_column_orthogonality() {
    for n in 1..=6 {
        let basis = Basis::new(n);
        let fact: Rational = (1..=n).map(|k| r(k as i64, 1)).product();
        let total: Rational = basis.iter().map(|mu| fact.clone() / z(mu)).sum();
        assert_eq!(total, fact);
        for l in basis.iter() {
            for m in basis.iter() {
                let s: Rational = basis
                    .iter()
                    .map(|mu| r(frobenius_character(l, mu) * frobenius_character(m, mu), 1) / z(mu))
                    .sum();
                assert_eq!(s, r((l == m) as i64, 1), "{l} {m}");
            }
        }
    }
}
