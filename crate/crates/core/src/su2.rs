//! SU(2) singlet space: norms and closed-form actions of every bilinear invariant.
//!
//! `A_ij = (a+_i . ~a+_j)` is antisymmetric, so each unordered link carries an orientation
//! sign: `+1` for the cyclic pairs (1,2), (2,3), (3,1) and `-1` otherwise.

use crate::basis::Su2Label;
use crate::opexpr::{InvariantOp, OpError, Species};
use crate::sqrt_rational::SqrtRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Su2Transition {
    pub target: Su2Label,
    pub coeff: SqrtRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::from(1), |a, k| a * k)
}

/// `l12! l23! l31! (l12 + l23 + l31 + 1)!`
pub fn norm_sq_su2(x: &Su2Label) -> BigRational {
    let n = factorial(x.l12) * factorial(x.l23) * factorial(x.l31) * factorial(x.total_links() + 1);
    BigRational::from_integer(n)
}

/// Orientation sign of the ordered leg pair.
pub fn orientation(i: u8, j: u8) -> i64 {
    if matches!((i, j), (1, 2) | (2, 3) | (3, 1)) {
        1
    } else {
        -1
    }
}

fn third(i: u8, j: u8) -> u8 {
    6 - i - j
}

fn transition(target: Su2Label, sign: i64, radicand: i64) -> Option<Su2Transition> {
    let coeff = SqrtRational::new(sign.signum() as i8, rat(radicand)).ok()?;
    (!coeff.is_zero()).then_some(Su2Transition { target, coeff })
}

/// `(a+_i . ~a+_j)` raises `l_ij`.
fn create_pair(i: u8, j: u8, x: &Su2Label) -> Option<Su2Transition> {
    let l = i64::from(x.link(i, j));
    let big_l = i64::from(x.total_links());
    let t = x.shifted(i, j, 1)?;
    transition(t, orientation(i, j), (l + 1) * (big_l + 2))
}

/// `(a_i . ~a_j)`, the adjoint of `(a+_i . ~a+_j)`: read the creation matrix backwards.
fn annihilate_pair(i: u8, j: u8, x: &Su2Label) -> Option<Su2Transition> {
    let src = x.shifted(i, j, -1)?;
    let fwd = create_pair(i, j, &src)?;
    debug_assert_eq!(fwd.target, *x);
    Some(Su2Transition { target: src, coeff: fwd.coeff })
}

/// `(a+_i . a_j)` moves one quantum from leg `j` to leg `i`.
fn hop(i: u8, j: u8, x: &Su2Label) -> Option<Su2Transition> {
    let k = third(i, j);
    let ljk = i64::from(x.link(j, k));
    let lik = i64::from(x.link(i, k));
    let t = x.shifted(j, k, -1)?.shifted(i, k, 1)?;
    transition(t, orientation(j, k) * orientation(i, k), ljk * (lik + 1))
}

/// Closed-form action on the normalized basis. Empty when the operator annihilates the state.
pub fn act_su2(op: &InvariantOp, x: &Su2Label) -> Result<Vec<Su2Transition>, OpError> {
    let InvariantOp::Bilinear([f, g]) = op else {
        return Err(OpError::Shape(op.to_string(), "SU(2) invariants are bilinear".into()));
    };
    if f.species != Species::A || g.species != Species::A {
        return Err(OpError::Shape(op.to_string(), "SU(2) has a single species 'a'".into()));
    }
    let out = if f.leg == g.leg {
        if !(f.dagger && !g.dagger) {
            return Err(OpError::CatalogMiss(op.to_string()));
        }
        let n = i64::from(x.n()[usize::from(f.leg - 1)]);
        transition(*x, 1, n * n)
    } else {
        match (f.dagger, g.dagger) {
            (true, true) => create_pair(f.leg, g.leg, x),
            (false, false) => annihilate_pair(f.leg, g.leg, x),
            (true, false) => hop(f.leg, g.leg, x),
            (false, true) => hop(g.leg, f.leg, x),
        }
    };
    Ok(out.into_iter().collect())
}

/// The tabulated closed forms, evaluated literally (all signs positive, `m` read as `n3`).
/// Only the printed rows are available: `N_i`, `(a+_3 . ~a+_i)` for i = 1, 2, `(a+_3 . a_1)`
/// and `(a_3 . ~a_1)`.
pub fn printed_table(op: &InvariantOp, x: &Su2Label) -> Option<Vec<Su2Transition>> {
    let InvariantOp::Bilinear([f, g]) = op else {
        return None;
    };
    let [n1, n2, n3] = x.n().map(i64::from);
    let quarter = |a: i64, b: i64| -> Option<SqrtRational> {
        if a * b < 0 {
            return None;
        }
        SqrtRational::new(1, BigRational::new(BigInt::from(a * b), BigInt::from(4))).ok()
    };
    let emit = |n: [i64; 3], c: Option<SqrtRational>| -> Vec<Su2Transition> {
        let Some(c) = c else { return Vec::new() };
        if c.is_zero() || n.iter().any(|&v| v < 0) {
            return Vec::new();
        }
        match Su2Label::from_n(n.map(|v| v as u32)) {
            Some(t) => vec![Su2Transition { target: t, coeff: c }],
            None => Vec::new(),
        }
    };
    match (f.dagger, f.leg, g.dagger, g.leg) {
        (true, i, false, j) if i == j => {
            let n = i64::from(x.n()[usize::from(i - 1)]);
            Some(emit([n1, n2, n3], SqrtRational::new(1, rat(n * n)).ok()))
        }
        (true, 3, true, i @ (1 | 2)) => {
            let (ni, nbar) = if i == 1 { (n1, n2) } else { (n2, n1) };
            let c = quarter(n3 + ni + nbar + 4, n3 + ni - nbar + 2);
            let mut n = [n1, n2, n3 + 1];
            n[usize::from(i - 1)] += 1;
            Some(emit(n, c))
        }
        (true, 3, false, 1) => {
            let c = quarter(n3 - n1 + n2 + 2, n1 - n3 + n2);
            Some(emit([n1 - 1, n2, n3 + 1], c))
        }
        (false, 3, false, 1) => {
            let c = quarter(n3 + n1 + n2 + 2, n3 + n1 - n2);
            Some(emit([n1 - 1, n2, n3 - 1], c))
        }
        _ => None,
    }
}

/// All SU(2) operators with closed forms: three number operators and the 18 two-leg bilinears.
/// Adjoint with its sign. Pairs of two creation or two annihilation operators are
/// antisymmetric contractions, so reversing the factors flips the sign.
pub fn su2_adjoint(op: &InvariantOp) -> (i8, InvariantOp) {
    let (sign, adj) = op.adjoint();
    match op {
        InvariantOp::Bilinear([f, g]) if f.dagger == g.dagger => (-sign, adj),
        _ => (sign, adj),
    }
}

pub fn su2_catalog() -> Vec<InvariantOp> {
    use crate::opexpr::Factor;
    let a = |d: bool, l: u8| Factor::new(Species::A, d, l);
    let mut out = Vec::new();
    for i in 1..=3 {
        out.push(InvariantOp::Bilinear([a(true, i), a(false, i)]));
    }
    for i in 1..=3u8 {
        for j in 1..=3u8 {
            if i == j {
                continue;
            }
            out.push(InvariantOp::Bilinear([a(true, i), a(true, j)]));
            out.push(InvariantOp::Bilinear([a(true, i), a(false, j)]));
            out.push(InvariantOp::Bilinear([a(false, i), a(false, j)]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Group;
    use crate::opexpr::parse;

    #[test]
    fn norms() {
        assert_eq!(norm_sq_su2(&Su2Label::new(0, 0, 0)), rat(1));
        assert_eq!(norm_sq_su2(&Su2Label::new(1, 0, 0)), rat(2));
        assert_eq!(norm_sq_su2(&Su2Label::new(1, 1, 1)), rat(24));
    }

    #[test]
    fn number_operator() {
        let op = parse("N(2)", Group::Su2).unwrap();
        let t = act_su2(&op, &Su2Label::new(1, 0, 0)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].target, Su2Label::new(1, 0, 0));
        assert_eq!(t[0].coeff, SqrtRational::one());
    }

    #[test]
    fn creation_on_vacuum() {
        let op = parse("a+(3).a+(1)", Group::Su2).unwrap();
        let t = act_su2(&op, &Su2Label::default()).unwrap();
        assert_eq!(t[0].target, Su2Label::new(0, 0, 1));
        assert_eq!(t[0].coeff, SqrtRational::new(1, rat(2)).unwrap());
    }

    #[test]
    fn annihilation_needs_quanta() {
        let op = parse("a(3).a(1)", Group::Su2).unwrap();
        for x in crate::basis::enumerate_su2(8) {
            if x.n()[2] == 0 {
                assert!(act_su2(&op, &x).unwrap().is_empty());
            }
        }
    }
}
