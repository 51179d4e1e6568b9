use num_bigint::BigInt;
use proptest::prelude::*;

use mildcut::combinatorics::{
    choose_cut_pair, count_normal_words, has_overlap, is_combinatorially_free, is_submonomial,
    FreenessOptions, MonomialFamily,
};
use mildcut::document::{PresentationDocument, Relation};
use mildcut::magnus::{expand, GroupWord};
use mildcut::poincare::{invert_unit_series, mild_poincare, DegreeSpec, IntSeries};
use mildcut::series::{Letter, Monomial, TruncatedSeries};

const PRIMES: [u64; 3] = [3, 5, 7];

fn monomial(d: Letter, max_len: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(1..=d, 0..=max_len).prop_map(|v| Monomial::new(v).unwrap())
}

fn nonempty_monomial(d: Letter, max_len: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(1..=d, 1..=max_len).prop_map(|v| Monomial::new(v).unwrap())
}

fn series(d: usize, p: u64, trunc: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((monomial(d as Letter, trunc - 1), -10i64..10), 0..8)
        .prop_map(move |terms| TruncatedSeries::from_terms(d, p, trunc, terms).unwrap())
}

fn unit_series(d: usize, p: u64, trunc: usize) -> impl Strategy<Value = TruncatedSeries> {
    (series(d, p, trunc), 1..p as i64).prop_map(move |(s, c)| {
        let c0 = s.constant_term() as i64;
        s.checked_add(&TruncatedSeries::monomial(d, p, trunc, c - c0, Monomial::one()).unwrap())
            .unwrap()
    })
}

fn word(d: Letter) -> impl Strategy<Value = GroupWord> {
    let leaf = (1..=d).prop_map(GroupWord::generator);
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(GroupWord::product),
            (inner.clone(), -12i64..12).prop_map(|(w, e)| GroupWord::power(w, e.into())),
            (inner.clone(), inner).prop_map(|(a, b)| GroupWord::commutator(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multiplication_is_associative(
        pi in 0..3usize,
        (a, b, c) in (0..3usize).prop_flat_map(|pi| {
            let p = PRIMES[pi];
            (series(3, p, 5), series(3, p, 5), series(3, p, 5))
        }),
    ) {
        let _ = pi;
        let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes(
        (a, b, c) in (series(2, 5, 6), series(2, 5, 6), series(2, 5, 6)),
    ) {
        let left = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let right = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let left = b.checked_add(&c).unwrap().checked_mul(&a).unwrap();
        let right = b.checked_mul(&a).unwrap().checked_add(&c.checked_mul(&a).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_is_two_sided(s in unit_series(3, 7, 5)) {
        let inv = s.inverse().unwrap();
        let one = TruncatedSeries::one(3, 7, 5).unwrap();
        prop_assert_eq!(s.checked_mul(&inv).unwrap(), one.clone());
        prop_assert_eq!(inv.checked_mul(&s).unwrap(), one);
    }

    #[test]
    fn series_text_roundtrips(s in series(3, 5, 6)) {
        let back = TruncatedSeries::parse(&s.to_string(), 3, 5, None).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn expand_is_a_homomorphism(u in word(3), v in word(3)) {
        let (p, d, n) = (3, 3, 5);
        let uv = GroupWord::product(vec![u.clone(), v.clone()]);
        let lhs = expand(&uv, p, d, n).unwrap();
        let rhs = expand(&u, p, d, n).unwrap().checked_mul(&expand(&v, p, d, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let inv = expand(&GroupWord::inverse(u.clone()), p, d, n).unwrap();
        prop_assert_eq!(inv, expand(&u, p, d, n).unwrap().inverse().unwrap());
    }

    #[test]
    fn commutator_matches_its_definition(u in word(3), v in word(3)) {
        let (p, d, n) = (5, 3, 5);
        let direct = expand(&GroupWord::commutator(u.clone(), v.clone()), p, d, n).unwrap();
        let spelled = GroupWord::product(vec![
            GroupWord::inverse(u.clone()),
            GroupWord::inverse(v.clone()),
            u,
            v,
        ]);
        prop_assert_eq!(direct, expand(&spelled, p, d, n).unwrap());
    }

    #[test]
    fn word_text_roundtrips(w in word(4)) {
        let back: GroupWord = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn monomial_order_is_degree_first(a in monomial(4, 6), b in monomial(4, 6)) {
        if a.degree() < b.degree() {
            prop_assert!(a > b);
        }
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        let text: Monomial = a.to_string().parse().unwrap();
        prop_assert_eq!(&text, &a);
        let compact: Monomial = a.to_compact_string().parse().unwrap();
        prop_assert_eq!(compact, a);
    }

    #[test]
    fn submonomial_laws(a in monomial(3, 4), b in monomial(3, 4), c in monomial(3, 4)) {
        prop_assert!(is_submonomial(&a, &a));
        let ab = a.concat(&b);
        let cab = c.concat(&ab);
        prop_assert!(is_submonomial(&a, &ab));
        prop_assert!(is_submonomial(&ab, &cab));
        prop_assert!(is_submonomial(&a, &cab));
        if is_submonomial(&a, &b) {
            prop_assert!(a.degree() <= b.degree());
        }
    }

    #[test]
    fn overlap_matches_factorizations(a in nonempty_monomial(2, 5), b in nonempty_monomial(2, 5)) {
        let (x, y) = (a.letters(), b.letters());
        let expected = (1..x.len()).any(|k| k < y.len() && x[..k] == y[y.len() - k..]);
        prop_assert_eq!(has_overlap(&a, &b), expected);
    }

    #[test]
    fn verdict_ignores_member_order(
        members in prop::collection::vec(nonempty_monomial(3, 4), 1..6),
        seed in any::<u64>(),
    ) {
        let mut shuffled = members.clone();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        if seed % 2 == 0 {
            shuffled.reverse();
        }
        let a = is_combinatorially_free(&MonomialFamily::fixed_only(3, members).unwrap(), FreenessOptions::default()).unwrap();
        let b = is_combinatorially_free(&MonomialFamily::fixed_only(3, shuffled).unwrap(), FreenessOptions::default()).unwrap();
        prop_assert_eq!(a.is_free(), b.is_free());
    }

    #[test]
    fn free_families_obey_the_anick_formula(
        members in prop::collection::vec(nonempty_monomial(3, 4), 0..5),
    ) {
        let members: Vec<Monomial> = members.into_iter().filter(|m| m.degree() >= 2).collect();
        let family = MonomialFamily::fixed_only(3, members.clone()).unwrap();
        if is_combinatorially_free(&family, FreenessOptions::default()).unwrap().is_free() {
            let spec = DegreeSpec::new(members.iter().map(Monomial::degree).collect(), None).unwrap();
            let expected = mild_poincare(3, &spec, 8);
            prop_assert_eq!(count_normal_words(&family, 8), expected.coefficients().to_vec());
        }
    }

    #[test]
    fn unit_series_inversion_is_exact(tail in prop::collection::vec(-50i64..50, 0..12)) {
        let mut coeffs = vec![1i64];
        coeffs.extend(tail);
        let s = IntSeries::from_i64(&coeffs).unwrap();
        let u = invert_unit_series(&s).unwrap();
        prop_assert_eq!(s.mul(&u), IntSeries::one(s.precision()));
    }

    #[test]
    fn poincare_times_denominator_is_one(
        d in 1usize..6,
        finite in prop::collection::vec(2usize..8, 0..6),
        tail in prop::option::of(2usize..6),
    ) {
        let spec = DegreeSpec::new(finite, tail).unwrap();
        let p = mild_poincare(d, &spec, 15);
        prop_assert_eq!(spec.denominator(d, 15).mul(&p), IntSeries::one(15));
        prop_assert_eq!(p.coefficient(0), BigInt::from(1));
    }

    #[test]
    fn cut_pair_is_never_a_hat(
        mask in any::<u16>(),
        d in 4usize..7,
        c_offset in 0usize..3,
    ) {
        let c = 2 + c_offset % (d - 2);
        let grid: Vec<(Letter, Letter)> = ((c + 1)..=d)
            .flat_map(|t| (1..=c).map(move |s| (t as Letter, s as Letter)))
            .collect();
        let pairs: Vec<_> = grid.iter().enumerate().filter(|(k, _)| mask >> (k % 16) & 1 == 1).map(|(_, &x)| x).collect();
        if let Ok(cut) = choose_cut_pair(&pairs, c, d) {
            prop_assert!(!pairs.contains(&(cut.j0, cut.i0)));
        } else {
            prop_assert!(pairs.len() >= (d - c) * (c - 1));
        }
    }

    #[test]
    fn documents_roundtrip(ws in prop::collection::vec(word(3), 0..4)) {
        let mut doc = PresentationDocument::new(5, 3).unwrap();
        doc.relations = ws.into_iter().map(Relation::Word).collect();
        let back: PresentationDocument = doc.to_string().parse().unwrap();
        prop_assert_eq!(back, doc);
    }
}
