//! Closed-form SU(3) actions against direct Fock-space computation.

use num_rational::BigRational;
use rayon::prelude::*;
use singlet_core::basis::enumerate_su3;
use singlet_core::fock::{apply_su3_op, FockVector, Oracle};
use singlet_core::opexpr::catalog;
use singlet_core::su3::{gram_su3, norm_sq_su3, unnormalized_act};
use singlet_core::InvariantOp;

fn synthesize(oracle: &Oracle, act: &std::collections::BTreeMap<singlet_core::Su3Label, BigRational>) -> FockVector {
    let mut v = FockVector::zero();
    for (t, c) in act {
        v.add_scaled(&oracle.state(t), c);
    }
    v
}

fn cutoff(op: &InvariantOp, w: u32) -> u32 {
    match op {
        InvariantOp::Bilinear(_) => w,
        InvariantOp::TrilinearEps(_) => w - 1,
    }
}

#[test]
fn every_catalog_operator_matches_the_oracle() {
    let oracle = Oracle::new();
    let w = 6;
    oracle.warm(w + 3);
    let ops = catalog();
    let jobs: Vec<_> = ops
        .iter()
        .flat_map(|op| enumerate_su3(cutoff(op, w)).into_iter().map(move |x| (*op, x)))
        .collect();
    let bad: Vec<_> = jobs
        .par_iter()
        .filter(|(op, x)| {
            let act = unnormalized_act(op, x).unwrap();
            let lhs = apply_su3_op(op, &oracle.state(x));
            lhs != synthesize(&oracle, &act)
        })
        .map(|(op, x)| format!("{op} on {x}"))
        .collect();
    assert!(bad.is_empty(), "{} mismatches, first: {:?}", bad.len(), &bad[..bad.len().min(10)]);
}

#[test]
fn gram_recursion_matches_the_oracle() {
    let oracle = Oracle::new();
    let labels = enumerate_su3(8);
    for x in &labels {
        assert_eq!(norm_sq_su3(x), oracle.norm_sq(x), "norm of {x}");
        for y in &labels {
            if x < y && x.content() == y.content() {
                assert_eq!(gram_su3(x, y), oracle.gram(x, y), "overlap {x} {y}");
            }
        }
    }
}
