use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use singlet_core::fock::{apply_su2_op, Oracle};
use singlet_core::opexpr::catalog;
use singlet_core::su2::{act_su2, su2_adjoint, su2_catalog};
use singlet_core::symmetry::{Generator, SymElement, GENERATORS};
use singlet_core::{canonicalize, enumerate_su3, parse, Group, SqrtRational, Su2Label, Su3Label};

fn element() -> impl Strategy<Value = SymElement> {
    prop::collection::vec(prop::sample::select(GENERATORS.to_vec()), 0..6)
        .prop_map(|w| SymElement::from_word(&w))
}

fn su3_label() -> impl Strategy<Value = Su3Label> {
    (prop::array::uniform6(0u32..4), -3i32..=3).prop_map(|(l, p)| Su3Label::from_parts(l, p))
}

fn rational() -> impl Strategy<Value = BigRational> {
    (0i64..400, 1i64..60).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn sqrt_rational() -> impl Strategy<Value = SqrtRational> {
    (prop::sample::select(vec![-1i8, 1]), rational())
        .prop_map(|(s, q)| SqrtRational::new(s, q).unwrap())
}

proptest! {
    #[test]
    fn catalog_images_round_trip_through_text(i in 0usize..1000, g in element()) {
        let ops = catalog();
        let op = ops[i % ops.len()].image(&g);
        let back = parse(&op.to_string(), Group::Su3).unwrap();
        prop_assert_eq!(back, op);
    }

    #[test]
    fn canonical_form_rebuilds_the_operator(i in 0usize..1000, g in element()) {
        let ops = catalog();
        let op = ops[i % ops.len()].image(&g);
        let c = canonicalize(&op).unwrap();
        let (s_op, nf) = op.normal_form();
        let (s_img, img) = c.base.op().image(&c.element()).normal_form();
        prop_assert_eq!(img, nf);
        prop_assert_eq!(c.sign, s_op * s_img);
    }

    #[test]
    fn group_laws(g in element(), h in element(), x in su3_label()) {
        prop_assert_eq!(g.after(&g.inverse()), SymElement::IDENTITY);
        let (y, s1) = h.act_label(&x);
        let (z, s2) = g.act_label(&y);
        let (z2, s12) = g.after(&h).act_label(&x);
        prop_assert_eq!(z, z2);
        prop_assert_eq!(s1 * s2, s12);
        prop_assert_eq!(z.weight(), x.weight());
    }

    #[test]
    fn generator_orders(x in su3_label()) {
        let id = |w: &[Generator]| SymElement::from_word(w) == SymElement::IDENTITY;
        prop_assert!(id(&[Generator::Flip; 2]));
        prop_assert!(id(&[Generator::Swap; 2]));
        prop_assert!(id(&[Generator::Cycle; 3]));
        let flip = SymElement::generator(Generator::Flip);
        let (y, s) = flip.act_label(&x);
        prop_assert_eq!(s, 1);
        prop_assert_eq!(y.p, -x.p);
    }

    #[test]
    fn sqrt_rational_products(a in sqrt_rational(), b in sqrt_rational()) {
        let ab = &a * &b;
        prop_assert_eq!(ab.signed_square(), a.signed_square() * b.signed_square());
        prop_assert!((ab.to_f64() - a.to_f64() * b.to_f64()).abs() < 1e-9 * (1.0 + ab.to_f64().abs()));
        let json = serde_json::to_string(&ab).unwrap();
        prop_assert_eq!(serde_json::from_str::<SqrtRational>(&json).unwrap(), ab);
    }

    #[test]
    fn su2_beyond_the_acceptance_cutoff(l12 in 0u32..6, l23 in 0u32..6, l31 in 0u32..6, i in 0usize..21) {
        // random labels up to n1+n2+n3 = 30 against the oracle
        let oracle = Oracle::new();
        let x = Su2Label { l12, l23, l31 };
        let op = su2_catalog()[i];
        let v = apply_su2_op(&op, &oracle.state_su2(&x));
        let s_x = oracle.state_su2(&x).norm_sq();
        let mut want: Vec<_> = oracle
            .expand_su2(&v)
            .unwrap()
            .into_iter()
            .map(|(t, c)| (t, SqrtRational::scaled_root(&c, &(oracle.state_su2(&t).norm_sq() / &s_x))))
            .collect();
        let mut got: Vec<_> = act_su2(&op, &x).unwrap().into_iter().map(|t| (t.target, t.coeff)).collect();
        want.sort_by_key(|(t, _)| *t);
        got.sort_by_key(|(t, _)| *t);
        prop_assert_eq!(got, want);
    }
}

#[test]
fn su2_adjoint_signs() {
    let op = parse("a+(1).a+(2)", Group::Su2).unwrap();
    let (s, adj) = su2_adjoint(&op);
    assert_eq!((s, adj.to_string().as_str()), (-1, "a(2).a(1)"));
    let hop = parse("a+(1).a(2)", Group::Su2).unwrap();
    let (s, adj) = su2_adjoint(&hop);
    assert_eq!((s, adj.to_string().as_str()), (1, "a+(2).a(1)"));
}

#[test]
fn enumeration_is_sorted_and_complete() {
    let labels = enumerate_su3(6);
    assert!(labels.windows(2).all(|w| w[0] < w[1]));
    // independent count: six links with 2 sum(l) + 3|p| <= 6
    let mut n = 0;
    for p in -2i32..=2 {
        let left = 6 - 3 * p.unsigned_abs();
        let links = left / 2;
        // compositions of at most `links` into six parts
        n += (0..=links).map(|k| binom(k + 5, 5)).sum::<u32>();
    }
    assert_eq!(labels.len() as u32, n);
}

fn binom(n: u32, k: u32) -> u32 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
