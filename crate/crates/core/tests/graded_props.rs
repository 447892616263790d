use looptop::operator::{Composite, TensorPair};
use looptop::{
    apply_tensor, koszul_sign, twist, Degree, GradedMap, GradedVector, Ring, SignRule, Symbol, TensorOperator, Word,
};
use looptop::graded::twist_offset;
use proptest::prelude::*;

const DEGREES: std::ops::RangeInclusive<Degree> = -3..=3;

fn symbols() -> Vec<Symbol> {
    DEGREES
        .flat_map(|d| (0..2).map(move |i| Symbol::new(format!("e{}_{i}", d + 3), d)))
        .collect()
}

fn of_degree(d: Degree) -> Vec<Symbol> {
    symbols().into_iter().filter(|s| s.degree() == d).collect()
}

/// A degree-`k` endomorphism given by integer coefficients, cycled over
/// the target basis.
fn endo(name: &str, k: Degree, coeffs: &[i64]) -> TensorOperator {
    let mut it = coeffs.iter().cycle();
    let entries = symbols().into_iter().map(|x| {
        let mut v = GradedVector::zero(Ring::Integers);
        for y in of_degree(x.degree() + k) {
            v.add_term(Word::single(y), Ring::Integers.from_i64(*it.next().unwrap()));
        }
        (Word::single(x), v)
    });
    TensorOperator::from_table(name, 1, 1, k, Ring::Integers, entries).unwrap()
}

fn pair_vector(coeffs: &[i64]) -> GradedVector {
    let syms = symbols();
    let mut v = GradedVector::zero(Ring::Integers);
    let mut it = coeffs.iter();
    for a in &syms {
        for b in &syms {
            match it.next() {
                Some(&c) => v.add_term(Word::pair(a.clone(), b.clone()), Ring::Integers.from_i64(c)),
                None => return v,
            }
        }
    }
    v
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..40)
}

fn rule() -> impl Strategy<Value = SignRule> {
    prop::sample::select(SignRule::ALL.to_vec())
}

proptest! {
    #[test]
    fn twist_is_an_involution(c in coeffs(), k in -2i64..=2) {
        let v = pair_vector(&c);
        prop_assert_eq!(twist(&twist(&v)), v.clone());
        prop_assert_eq!(twist_offset(&twist_offset(&v, k), k), v);
    }

    #[test]
    fn koszul_sign_is_symmetric_and_multiplicative(p in -9i64..9, q in -9i64..9, r in -9i64..9) {
        prop_assert_eq!(koszul_sign(p, q), koszul_sign(q, p));
        prop_assert_eq!(koszul_sign(p, q + r), koszul_sign(p, q) * koszul_sign(p, r));
    }

    #[test]
    fn tensor_of_maps_is_bilinear(
        fc in coeffs(), gc in coeffs(), vc in coeffs(), wc in coeffs(),
        a in -3i64..=3, b in -3i64..=3, kf in -2i64..=2, kg in -2i64..=2, rule in rule(),
    ) {
        let f = endo("f", kf, &fc);
        let g = endo("g", kg, &gc);
        let (v, w) = (pair_vector(&vc), pair_vector(&wc));
        let combo = &v.scale_i64(a) + &w.scale_i64(b);
        let lhs = apply_tensor(&f, &g, &combo, rule).unwrap();
        let rhs = &apply_tensor(&f, &g, &v, rule).unwrap().scale_i64(a)
            + &apply_tensor(&f, &g, &w, rule).unwrap().scale_i64(b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composing_tensor_pairs_costs_one_koszul_sign(
        c1 in coeffs(), c2 in coeffs(), c3 in coeffs(), c4 in coeffs(), vc in coeffs(),
        k1 in -2i64..=2, k2 in -2i64..=2, k3 in -2i64..=2, k4 in -2i64..=2, rule in rule(),
    ) {
        let (f, g, f2, g2) = (endo("f", k1, &c1), endo("g", k2, &c2), endo("f'", k3, &c3), endo("g'", k4, &c4));
        let v = pair_vector(&vc);
        let outer = TensorPair::new(&f, &g, rule);
        let inner = TensorPair::new(&f2, &g2, rule);
        let lhs = Composite::new(&outer, &inner).apply(&v).unwrap();
        let ff = Composite::new(&f, &f2);
        let gg = Composite::new(&g, &g2);
        let sign = match rule {
            SignRule::KoszulRight => koszul_sign(k2, k3),
            SignRule::KoszulLeft => koszul_sign(k1, k4),
            SignRule::Unsigned => 1,
        };
        let rhs = apply_tensor(&ff, &gg, &v, rule).unwrap().scale_i64(sign);
        prop_assert_eq!(lhs, rhs);
    }
}
