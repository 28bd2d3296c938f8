//! SU(3) singlet space: unnormalized closed forms, norms and normalized actions.
//!
//! Closed forms are written for a handful of base operators; every other catalog operator is
//! a symmetry image of one of them (see [`crate::symmetry`]). `eps(a(3),a(2),a(1))` has no
//! compact closed form and is composed from `a(1).b(2)` and `eps(a(3),a(2),b+(2))`.

use crate::basis::{Su3Label, PAIRS};
use crate::opexpr::{canonicalize, BaseOp, InvariantOp, OpError};
use crate::sqrt_rational::{SqrtError, SqrtRational};
use crate::symmetry::{add_into, image_action, Action, SymElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Su3Transition {
    pub target: Su3Label,
    pub coeff: SqrtRational,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Op(#[from] OpError),
    #[error(transparent)]
    Sqrt(#[from] SqrtError),
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Link values and leg counts as signed integers, named as in the formulas.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Q {
    pub l12: i64,
    pub l21: i64,
    pub l13: i64,
    pub l31: i64,
    pub l23: i64,
    pub l32: i64,
    pub ap: i64,
    pub n: [i64; 3],
    pub m: [i64; 3],
    pub big_n: [i64; 3],
}

impl Q {
    pub fn of(x: &Su3Label) -> Q {
        let [l12, l21, l13, l31, l23, l32] = x.links().map(i64::from);
        let c = x.counts();
        Q { l12, l21, l13, l31, l23, l32, ap: c.abs_p, n: c.n, m: c.m, big_n: c.big_n }
    }
}

/// Shift helper: link deltas in slot order `[12, 21, 13, 31, 23, 32]` plus `dp`.
fn sh(x: &Su3Label, dl: [i64; 6], dp: i32) -> Option<Su3Label> {
    x.shifted(dl, dp)
}

fn push(out: &mut Action, t: Option<Su3Label>, c: BigRational) {
    if let Some(t) = t {
        add_into(out, t, c);
    }
}

/// Leading coefficient of `a(1).b(2)`: the overlap factor that lowers `l12`.
pub fn fbar_12(x: &Su3Label) -> BigRational {
    let q = Q::of(x);
    let [n1, ..] = q.n;
    let [_, m2, _] = q.m;
    let [bn1, bn2, _] = q.big_n;
    let t1 = frac(bn1 + 2, bn1 + 1) * rat((n1 + m2 - q.l12 + q.ap + 1) * q.l12);
    let t2 = frac(q.l32 * (q.l31 + 1) * q.l12, bn1 + 1) * frac(bn2 + 1 - q.l21, bn2 + 1);
    let t3 = frac(q.l23 * (q.l13 + 1) * q.l12, bn1 + 1) * frac(bn1 + 1 - q.l21, bn2 + 1);
    t1 - t2 - t3
}

/// Variant with `p` in place of `|p|` in the first term; differs only for `p < 0`.
pub fn fbar_12_signed_p(x: &Su3Label) -> BigRational {
    let q = Q::of(x);
    let p = i64::from(x.p);
    let [n1, ..] = q.n;
    let [_, m2, _] = q.m;
    let [bn1, bn2, _] = q.big_n;
    let t1 = frac(bn1 + 2, bn1 + 1) * rat((n1 + m2 - q.l12 + p + 1) * q.l12);
    let t2 = frac(q.l32 * (q.l31 + 1) * q.l12, bn1 + 1) * frac(bn2 + 1 - q.l21, bn2 + 1);
    let t3 = frac(q.l23 * (q.l13 + 1) * q.l12, bn1 + 1) * frac(bn1 + 1 - q.l21, bn2 + 1);
    t1 - t2 - t3
}

/// The five restricted overlap factors used by the norm chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Restricted {
    /// `f_1^{21}` with `l12 = 0`
    F21,
    /// `f_1^{13}` with `l12 = l21 = 0`
    F13,
    /// `f_1^{31}` with `l12 = l21 = l13 = 0`
    F31,
    /// `f_1^{23}` with `l12 = l21 = l13 = l31 = 0`
    F23,
    /// `f_1^{32}` with only `l32` and `p` nonzero
    F32,
}

impl Restricted {
    pub const ALL: [Restricted; 5] =
        [Restricted::F21, Restricted::F13, Restricted::F31, Restricted::F23, Restricted::F32];

    /// Chain slot (in [`PAIRS`] order) that this factor peels.
    pub fn slot(self) -> usize {
        match self {
            Restricted::F21 => 1,
            Restricted::F13 => 2,
            Restricted::F31 => 3,
            Restricted::F23 => 4,
            Restricted::F32 => 5,
        }
    }
}

/// The restricted factors exactly as tabulated (two denominators of the `21` form omit `|p|`).
pub fn fbar_restricted(which: Restricted, x: &Su3Label) -> BigRational {
    let q = Q::of(x);
    let p = q.ap;
    match which {
        Restricted::F21 => {
            let a = q.l21 + q.l13 + q.l31 + p;
            frac(a + 2, a + 1) * rat((q.l21 + q.l31 + q.l23 + p + 1) * q.l21)
                - frac(q.l21 * q.l23 * (q.l13 + 1), q.l21 + q.l13 + q.l31 + 1)
                - frac(q.l21 * q.l32 * (q.l31 + 1), q.l21 + q.l23 + q.l32 + 1)
        }
        Restricted::F13 => {
            let a = q.l13 + q.l31 + q.l23 + q.l32 + p;
            frac(a + 2, a + 1) * rat((q.l13 + q.l23 + p + 1) * q.l13)
        }
        Restricted::F31 => {
            let a = q.l31 + q.l23 + q.l32 + p;
            frac(a + 2, a + 1) * rat((q.l31 + q.l32 + p + 1) * q.l31)
        }
        Restricted::F23 => {
            let a = q.l23 + q.l32 + p;
            frac(a + 2, a + 1) * rat((q.l23 + p + 1) * q.l23)
        }
        Restricted::F32 => {
            let a = q.l32 + p;
            frac(a + 2, a + 1) * rat((q.l32 + p + 1) * q.l32)
        }
    }
}

/// `(N2 + 3) / (N2 + 2)`: contraction factor picked up when `b(2)` passes `a+(2)` inside an
/// epsilon on a physical state.
fn kappa(q: &Q) -> BigRational {
    frac(q.big_n[1] + 3, q.big_n[1] + 2)
}

// ---------------------------------------------------------------------------
// Unnormalized base actions

fn base_c(x: &Su3Label) -> Action {
    let mut out = Action::new();
    push(&mut out, x.bump(1, 2, 1), BigRational::one());
    out
}

fn base_d(x: &Su3Label) -> Action {
    let q = Q::of(x);
    let bn2 = q.big_n[1];
    let mut out = Action::new();
    push(&mut out, sh(x, [0, 0, 1, 0, -1, 0], 0), frac(q.l23 * (q.n[1] + q.m[1] - q.l12 + q.ap + 1), bn2 + 1));
    push(&mut out, sh(x, [1, -1, 0, 1, 0, -1], 0), frac(-q.l32 * q.l21, bn2 + 1));
    out
}

fn base_e(x: &Su3Label) -> Action {
    let q = Q::of(x);
    let bn2 = q.big_n[1];
    let mut out = Action::new();
    push(&mut out, sh(x, [0, 0, 0, 1, 0, -1], 0), frac(q.l32 * (q.n[1] + q.m[1] - q.l21 + q.ap + 1), bn2 + 1));
    push(&mut out, sh(x, [-1, 1, 1, 0, -1, 0], 0), frac(-q.l23 * q.l12, bn2 + 1));
    out
}

fn base_f(x: &Su3Label) -> Action {
    let q = Q::of(x);
    let [bn1, bn2, _] = q.big_n;
    let mut out = Action::new();
    push(&mut out, x.bump(1, 2, -1), fbar_12(x));
    push(
        &mut out,
        sh(x, [0, -1, -1, 1, 1, -1], 0),
        frac(-q.l32 * q.l13 * q.l21 * (bn1 + bn2 + 3 - q.l21), (bn1 + 1) * (bn2 + 1)),
    );
    push(
        &mut out,
        sh(x, [-2, 1, 1, -1, -1, 1], 0),
        frac(q.l23 * q.l31 * q.l12 * (q.l12 - 1), (bn1 + 1) * (bn2 + 1)),
    );
    out
}

fn base_gh(x: &Su3Label) -> Action {
    let q = Q::of(x);
    let k = kappa(&q);
    let mut out = Action::new();
    if x.p >= 0 {
        push(&mut out, sh(x, [-1, 0, 0, 0, 0, 0], 1), &k * rat(q.l12));
    } else {
        push(&mut out, sh(x, [0, 0, 0, 1, 1, 0], 1), &k * rat(q.ap + q.l12));
        push(&mut out, sh(x, [-1, 1, 1, 0, 0, 1], 1), &k * rat(q.l12));
    }
    out
}

fn base_ij(x: &Su3Label) -> Action {
    let q = Q::of(x);
    let k = kappa(&q);
    let bn3 = q.big_n[2];
    let mut out = Action::new();
    if x.p >= 0 {
        push(&mut out, sh(x, [-1, 1, 0, -1, -1, 0], 1), -&k * frac(q.l12 * q.l23 * q.l31, bn3 + 1));
        push(&mut out, sh(x, [0, 0, -1, 0, 0, -1], 1), -&k * frac((bn3 + 2 + q.l12) * q.l13 * q.l32, bn3 + 1));
    } else {
        let j1 = rat(q.l12 * (q.l13 + 1) * (q.l32 + 1))
            - frac((bn3 + 2) * q.l13 * q.l32 * (q.l12 + 1), bn3 + 1)
            - frac((q.ap + q.l12) * (bn3 - q.l23 + 1) * (bn3 - q.l31 + 1), bn3 + 1);
        push(&mut out, sh(x, [0, 1, 0, 0, 0, 0], 1), &k * j1);
        push(
            &mut out,
            sh(x, [1, 0, -1, 1, 1, -1], 1),
            -&k * frac((q.n[2] + q.m[2] + 2 * q.ap + q.l12 + 2) * q.l13 * q.l32, bn3 + 1),
        );
        push(&mut out, sh(x, [-1, 2, 1, -1, -1, 1], 1), -&k * frac(q.l12 * q.l23 * q.l31, bn3 + 1));
    }
    out
}

fn base_kl(x: &Su3Label) -> Action {
    image_action(base_ij, &SymElement::generator(crate::symmetry::Generator::Flip), x)
}

fn base_mn(x: &Su3Label) -> Action {
    let mut out = Action::new();
    if x.p >= 0 {
        push(&mut out, sh(x, [0; 6], 1), BigRational::one());
    } else {
        push(&mut out, sh(x, [1, 0, 0, 1, 1, 0], 1), BigRational::one());
        push(&mut out, sh(x, [0, 1, 1, 0, 0, 1], 1), BigRational::one());
    }
    out
}

fn compose(outer: impl Fn(&Su3Label) -> Action, inner: &Action) -> Action {
    let mut out = Action::new();
    for (t, c) in inner {
        for (u, d) in outer(t) {
            add_into(&mut out, u, c * d);
        }
    }
    out
}

/// `eps(a(3),a(2),a(1)) = (N2+2)/(N2+3) [F K - (1 - (N2+2)^-2) K F]` with `F = a(1).b(2)`,
/// `K = eps(a(3),a(2),b+(2))` and `N2` read off the source state.
fn base_aaa(x: &Su3Label) -> Action {
    let q = Q::of(x);
    let n2 = q.big_n[1];
    let fk = compose(base_f, &base_kl(x));
    let kf = compose(base_kl, &base_f(x));
    let w = BigRational::one() - frac(1, (n2 + 2) * (n2 + 2));
    let mut out = fk;
    for (t, c) in kf {
        add_into(&mut out, t, -(&w * c));
    }
    let s = frac(n2 + 2, n2 + 3);
    out.into_iter().map(|(t, c)| (t, c * &s)).collect()
}

fn base_number(x: &Su3Label, a_type: bool) -> Action {
    let (p1, q1) = x.leg_irrep(1);
    let v = if a_type { p1 } else { q1 };
    let mut out = Action::new();
    add_into(&mut out, *x, rat(i64::from(v)));
    out
}

/// Unnormalized action of a base operator.
pub fn base_action(base: BaseOp, x: &Su3Label) -> Action {
    match base {
        BaseOp::C => base_c(x),
        BaseOp::D => base_d(x),
        BaseOp::E => base_e(x),
        BaseOp::F => base_f(x),
        BaseOp::GH => base_gh(x),
        BaseOp::IJ => base_ij(x),
        BaseOp::KL => base_kl(x),
        BaseOp::MN => base_mn(x),
        BaseOp::AAA => base_aaa(x),
        BaseOp::NumA => base_number(x, true),
        BaseOp::NumB => base_number(x, false),
        BaseOp::NullCre | BaseOp::NullAnn => Action::new(),
    }
}

/// Unnormalized action `O |l,p>_u = sum_t c_t |t>_u` of any catalog operator.
pub fn unnormalized_act(op: &InvariantOp, x: &Su3Label) -> Result<Action, OpError> {
    let cf = canonicalize(op)?;
    let g = cf.element();
    let act = image_action(|m| base_action(cf.base, m), &g, x);
    Ok(if cf.sign < 0 { act.into_iter().map(|(t, c)| (t, -c)).collect() } else { act })
}

/// `(a_i . b_j)` for `i != j`, as the symmetry image of `a(1).b(2)`.
fn lower_link(i: u8, j: u8, x: &Su3Label) -> Action {
    let k = 6 - i - j;
    let g = SymElement { perm: [i, j, k], flip: false };
    image_action(base_f, &g, x)
}

// ---------------------------------------------------------------------------
// Norms

/// `<0,p|0,p>_u = prod_{k=1}^{|p|} k (k+1) (k+2)`.
pub fn pure_p_norm(abs_p: u32) -> BigRational {
    (1..=i64::from(abs_p)).fold(BigRational::one(), |a, k| a * rat(k * (k + 1) * (k + 2)))
}

/// The closed form `[(|p|+2)!]^3 / 2^3` for the pure-`p` norm, as tabulated.
pub fn pure_p_norm_tabulated(abs_p: u32) -> BigRational {
    let f: BigInt = (1..=abs_p + 2).fold(BigInt::one(), |a, k| a * k);
    BigRational::new(&f * &f * &f, BigInt::from(8))
}

thread_local! {
    static GRAM: RefCell<HashMap<(Su3Label, Su3Label), BigRational>> = RefCell::new(HashMap::new());
}

/// Exact overlap `<x|y>_u` of two unnormalized basis states.
///
/// Peels the first nonzero link of `x` and moves its creation operator across as
/// `(a_i . b_j)`, whose action on `y` is known in closed form. Labels with equal content are
/// not orthogonal in general.
pub fn gram_su3(x: &Su3Label, y: &Su3Label) -> BigRational {
    if x.content() != y.content() {
        return BigRational::zero();
    }
    let (x, y) = if x.is_pure_p() { (*y, *x) } else { (*x, *y) };
    if x.is_pure_p() {
        debug_assert_eq!(x, y);
        return pure_p_norm(x.abs_p());
    }
    let key = if x <= y { (x, y) } else { (y, x) };
    if let Some(v) = GRAM.with(|g| g.borrow().get(&key).cloned()) {
        return v;
    }
    let k = x.links().iter().position(|&v| v > 0).expect("not pure p");
    let (i, j) = PAIRS[k];
    let xs = x.bump(i, j, -1).expect("positive link");
    let mut s = BigRational::zero();
    for (t, c) in lower_link(i, j, &y) {
        s += c * gram_su3(&xs, &t);
    }
    GRAM.with(|g| g.borrow_mut().insert(key, s.clone()));
    s
}

/// `S(l,p) = <l,p|l,p>_u`.
pub fn norm_sq_su3(x: &Su3Label) -> BigRational {
    gram_su3(x, x)
}

/// Chain product of the tabulated leading factors times the given pure-`p` base. Agrees with
/// [`norm_sq_su3`] only while the cross terms of the peeling identity vanish.
pub fn norm_chain_with(x: &Su3Label, base: impl Fn(u32) -> BigRational) -> BigRational {
    let mut cur = *x;
    let mut s = BigRational::one();
    while cur.l12 > 0 {
        s *= fbar_12(&cur);
        cur = cur.bump(1, 2, -1).unwrap();
    }
    for r in Restricted::ALL {
        let (i, j) = PAIRS[r.slot()];
        while cur.link(i, j) > 0 {
            s *= fbar_restricted(r, &cur);
            cur = cur.bump(i, j, -1).unwrap();
        }
    }
    s * base(x.abs_p())
}

pub fn norm_chain(x: &Su3Label) -> BigRational {
    norm_chain_with(x, pure_p_norm)
}

// ---------------------------------------------------------------------------
// Normalized actions

/// `|l,p> = |l,p>_u / sqrt(S)`, so each unnormalized coefficient picks up `sqrt(S(t)/S(l))`.
pub fn normalize(x: &Su3Label, act: &Action) -> Vec<Su3Transition> {
    let s_src = norm_sq_su3(x);
    act.iter()
        .map(|(t, c)| Su3Transition {
            target: *t,
            coeff: SqrtRational::scaled_root(c, &(norm_sq_su3(t) / &s_src)),
        })
        .collect()
}

/// Closed-form action on the normalized basis, sorted by target.
pub fn act_su3(op: &InvariantOp, x: &Su3Label) -> Result<Vec<Su3Transition>, EngineError> {
    let act = unnormalized_act(op, x)?;
    Ok(normalize(x, &act))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Group;
    use crate::opexpr::parse;

    fn l(v: [u32; 6], p: i32) -> Su3Label {
        Su3Label::from_parts(v, p)
    }

    #[test]
    fn fbar_values() {
        assert_eq!(fbar_12(&l([1, 0, 0, 0, 0, 0], 0)), rat(3));
        assert!(fbar_12(&l([0, 1, 1, 1, 1, 1], -2)).is_zero());
        assert_eq!(fbar_restricted(Restricted::F32, &l([0, 0, 0, 0, 0, 1], 0)), rat(3));
        assert!(fbar_restricted(Restricted::F23, &l([0, 0, 0, 0, 0, 4], 2)).is_zero());
    }

    #[test]
    fn norms() {
        assert_eq!(norm_sq_su3(&Su3Label::vacuum()), rat(1));
        assert_eq!(norm_sq_su3(&l([1, 0, 0, 0, 0, 0], 0)), rat(3));
        assert_eq!(norm_sq_su3(&l([0; 6], 1)), rat(6));
        assert_eq!(norm_sq_su3(&l([0; 6], -2)), rat(144));
        assert_eq!(pure_p_norm_tabulated(1), rat(27));
    }

    #[test]
    fn creation_on_vacuum() {
        let op = parse("a+(1).b+(2)", Group::Su3).unwrap();
        let t = act_su3(&op, &Su3Label::vacuum()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].target, l([1, 0, 0, 0, 0, 0], 0));
        assert_eq!(t[0].coeff, SqrtRational::new(1, rat(3)).unwrap());
        let hop = parse("a+(1).a(2)", Group::Su3).unwrap();
        assert!(act_su3(&hop, &Su3Label::vacuum()).unwrap().is_empty());
    }

    #[test]
    fn unnormalized_examples() {
        let f = parse("a(1).b(2)", Group::Su3).unwrap();
        let a = unnormalized_act(&f, &l([1, 0, 0, 0, 0, 0], 0)).unwrap();
        assert_eq!(a.get(&Su3Label::vacuum()), Some(&rat(3)));
        let e = parse("b+(1).b(2)", Group::Su3).unwrap();
        assert!(unnormalized_act(&e, &l([0, 3, 1, 2, 1, 0], 1)).unwrap().is_empty());
    }

    #[test]
    fn weight_six_pair_overlaps() {
        let x = l([1, 0, 0, 1, 1, 0], 0);
        let y = l([0, 1, 1, 0, 0, 1], 0);
        assert_eq!(gram_su3(&x, &y), frac(-16, 3));
        assert_eq!(norm_sq_su3(&x), frac(56, 3));
    }
}
