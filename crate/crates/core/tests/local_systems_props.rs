use looptop::local_systems::{
    classify, dual, is_compatible, make_eta, make_mu, make_o, make_sigma, monodromy, tensor, transgression,
    underline, ComponentModel, LocalSystemDoc, LocalSystemSpec, ManifoldDescriptor, MonodromyInput,
};
use proptest::prelude::*;

fn bits(len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, len)
}

fn manifold() -> impl Strategy<Value = ManifoldDescriptor> {
    (0usize..=4, 0usize..=4)
        .prop_flat_map(|(g1, g2)| (bits(g1), bits(g2)))
        .prop_map(|(w1, w2)| ManifoldDescriptor::new(3, w1, w2).unwrap())
}

fn spec(m: ManifoldDescriptor, degree: i64) -> impl Strategy<Value = LocalSystemSpec> {
    let (g1, g2) = (m.g1, m.g2);
    (prop::collection::vec(bits(g1), 2), prop::collection::vec(bits(g2), 2))
        .prop_map(move |(a, b)| LocalSystemSpec::new(m.clone(), degree, a, b).unwrap())
}

fn two_specs() -> impl Strategy<Value = (LocalSystemSpec, LocalSystemSpec)> {
    manifold().prop_flat_map(|m| (spec(m.clone(), 0), spec(m, -1)))
}

proptest! {
    #[test]
    fn tensor_with_the_dual_is_trivial((x, _) in two_specs()) {
        let t = tensor(&x, &dual(&x)).unwrap();
        prop_assert_eq!(t.degree(), 0);
        prop_assert!(t.has_trivial_monodromy());
        prop_assert_eq!(dual(&dual(&x)), x);
    }

    #[test]
    fn tensor_is_commutative_and_degrees_add((x, y) in two_specs()) {
        let xy = tensor(&x, &y).unwrap();
        prop_assert_eq!(&xy, &tensor(&y, &x).unwrap());
        prop_assert_eq!(xy.degree(), x.degree() + y.degree());
        prop_assert_eq!(underline(&xy).degree(), 0);
    }

    #[test]
    fn json_round_trip((x, _) in two_specs()) {
        let cm = ComponentModel::default();
        let doc = LocalSystemDoc::from_spec(&x, &cm);
        let back: LocalSystemDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        let (y, cm2) = back.to_spec().unwrap();
        prop_assert_eq!(classify(&y), classify(&x));
        prop_assert_eq!(cm2, cm);
    }

    #[test]
    fn eta_has_degree_minus_n_and_mu_is_dual_to_o(m in manifold()) {
        let cm = ComponentModel::default();
        prop_assert_eq!(make_eta(&m, &cm).degree(), -m.n);
        prop_assert_eq!(dual(&make_o(&m, &cm)), make_mu(&m, &cm));
        let sigma = make_sigma(&m, &cm);
        prop_assert_eq!(&sigma, &transgression(&m, &cm, m.w2.clone()).unwrap());
        prop_assert!(is_compatible(&sigma, &cm).compatible);
        let verdict = is_compatible(&make_eta(&m, &cm), &cm);
        prop_assert!(!verdict.compatible);
        prop_assert!(verdict.reason.unwrap().starts_with("degree ≠ 0"));
    }

    #[test]
    fn monodromy_is_linear_in_the_loop((x, _) in two_specs(), c in 0usize..2, seed in any::<u64>()) {
        let m = x.descriptor().clone();
        let pick = |s: u64, n: usize| (0..n).map(|i| ((s >> (i % 64)) & 1) as u8).collect::<Vec<u8>>();
        let (l1, l2) = (pick(seed, m.g1), pick(seed.rotate_left(17), m.g1));
        let (t1, t2) = (pick(seed.rotate_left(33), m.g2), pick(seed.rotate_left(49), m.g2));
        let sum = |p: &[u8], q: &[u8]| p.iter().zip(q).map(|(a, b)| a ^ b).collect::<Vec<u8>>();
        let at = |base: Vec<u8>, torus: Vec<u8>| {
            monodromy(&x, &MonodromyInput { component: c, base_loop: base, torus_class: torus }).unwrap()
        };
        prop_assert_eq!(
            at(sum(&l1, &l2), sum(&t1, &t2)),
            at(l1.clone(), t1.clone()) ^ at(l2.clone(), t2.clone())
        );
    }
}

#[test]
fn mismatched_descriptors_do_not_tensor() {
    let cm = ComponentModel::default();
    let a = LocalSystemSpec::trivial(&ManifoldDescriptor::spin(3, 1, 1), &cm);
    let b = LocalSystemSpec::trivial(&ManifoldDescriptor::spin(3, 2, 1), &cm);
    assert!(tensor(&a, &b).is_err());
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"descriptor":{"n":3,"g1":0,"g2":0,"w1":[],"w2":[]},"degree":0,"coefficients":[],"extra":1}"#;
    assert!(serde_json::from_str::<LocalSystemDoc>(text).is_err());
}
