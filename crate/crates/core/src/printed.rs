//! The tabulated SU(3) closed forms evaluated literally, and the ledger that compares them with
//! reference values.
//!
//! A tabulated normalized coefficient has the shape `prefactor * sqrt(num / den)` where the
//! radicand is a product of leading overlap factors. Each factor written `X(l_ij + k)` is
//! evaluated at the label with that one link shifted. A zero denominator under a nonzero
//! prefactor, or a negative radicand, leaves the value undefined.

use crate::basis::{Su2Label, Su3Label};
use crate::opexpr::BaseOp;
use crate::sqrt_rational::SqrtRational;
use crate::su3::{fbar_12, fbar_12_signed_p, fbar_restricted, frac, rat, Restricted, Q};
use crate::symmetry::{Action, Generator, SymElement};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    L,
    M,
    N,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
        Family::H,
        Family::I,
        Family::J,
        Family::K,
        Family::L,
        Family::M,
        Family::N,
    ];

    pub fn max_index(self) -> u8 {
        match self {
            Family::C | Family::G | Family::N => 1,
            Family::D | Family::E | Family::H | Family::I | Family::L | Family::M => 2,
            Family::F | Family::J | Family::K => 3,
        }
    }

    pub fn letter(self) -> char {
        b"cdefghijklmn"[self as usize] as char
    }

    /// Base operator whose action the family describes.
    pub fn base(self) -> BaseOp {
        match self {
            Family::C => BaseOp::C,
            Family::D => BaseOp::D,
            Family::E => BaseOp::E,
            Family::F => BaseOp::F,
            Family::G | Family::H => BaseOp::GH,
            Family::I | Family::J => BaseOp::IJ,
            Family::K | Family::L => BaseOp::KL,
            Family::M | Family::N => BaseOp::MN,
        }
    }
}

/// One tabulated coefficient, optionally carried to another operator by a symmetry element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoeffFormulaId {
    pub family: Family,
    pub index: u8,
    pub perm: [u8; 3],
    pub flip: bool,
    /// The barred (unnormalized-basis) coefficient rather than the normalized one.
    pub bar: bool,
}

impl CoeffFormulaId {
    pub fn new(family: Family, index: u8) -> Option<Self> {
        (1..=family.max_index())
            .contains(&index)
            .then_some(CoeffFormulaId { family, index, perm: [1, 2, 3], flip: false, bar: false })
    }

    pub fn barred(self) -> Self {
        CoeffFormulaId { bar: true, ..self }
    }

    pub fn element(&self) -> SymElement {
        SymElement { perm: self.perm, flip: self.flip }
    }

    /// The same coefficient seen through `g` (applied after any existing element).
    pub fn image(&self, g: &SymElement) -> Self {
        let e = g.after(&self.element());
        CoeffFormulaId { perm: e.perm, flip: e.flip, ..*self }
    }
}

impl fmt::Display for CoeffFormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.bar { "bar" } else { "" };
        write!(f, "{}{}{}", self.family.letter(), bar, self.index)?;
        let moved = self.perm != [1, 2, 3];
        match (moved, self.flip) {
            (false, false) => Ok(()),
            (true, false) => write!(f, "[{}{}{}]", self.perm[0], self.perm[1], self.perm[2]),
            (false, true) => write!(f, "[flip]"),
            (true, true) => write!(f, "[{}{}{},flip]", self.perm[0], self.perm[1], self.perm[2]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RecordLabel {
    Su3(Su3Label),
    Su2(Su2Label),
}

/// One disagreement between a tabulated value and the reference. `printed` is `None` when the
/// tabulated expression is undefined at that label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub formula: String,
    pub label: RecordLabel,
    pub printed: Option<SqrtRational>,
    pub oracle: SqrtRational,
    pub printed_ref: String,
    pub note: String,
}

// ---------------------------------------------------------------------------
// Literal evaluation

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    Any,
    NonNeg,
    Neg,
}

impl Branch {
    fn admits(self, p: i32) -> bool {
        match self {
            Branch::Any => true,
            Branch::NonNeg => p >= 0,
            Branch::Neg => p < 0,
        }
    }
}

type Radicand = (Vec<BigRational>, Vec<BigRational>);

struct Term {
    family: Family,
    index: u8,
    branch: Branch,
    dl: [i64; 6],
    dp: i32,
    bar: fn(&Q) -> BigRational,
    /// `(prefactor, numerator factors, denominator factors)`.
    normalized: fn(&Su3Label, &Q) -> (BigRational, Radicand),
    printed_ref: &'static str,
}

fn shifted_at(x: &Su3Label, slot: usize, d: i64) -> Option<Su3Label> {
    let mut dl = [0; 6];
    dl[slot] = d;
    x.shifted(dl, 0)
}

/// `fbar_12(l12 + d)`; zero when the shifted link is negative.
fn f12(x: &Su3Label, d: i64) -> BigRational {
    shifted_at(x, 0, d).map(|y| fbar_12(&y)).unwrap_or_else(BigRational::zero)
}

/// Restricted factor evaluated with its own link shifted by `d`.
fn fr(r: Restricted, x: &Su3Label, d: i64) -> BigRational {
    shifted_at(x, r.slot(), d).map(|y| fbar_restricted(r, &y)).unwrap_or_else(BigRational::zero)
}

fn cube(k: i64) -> BigRational {
    rat(k * k * k)
}

use Restricted::{F13, F21, F23, F31, F32};

fn n2_bar(q: &Q) -> i64 {
    q.big_n[1]
}

fn bar_d1(q: &Q) -> BigRational {
    frac(q.l23 * (q.n[1] + q.m[1] + q.ap - q.l12 + 1), n2_bar(q) + 1)
}
fn bar_d2(q: &Q) -> BigRational {
    frac(-q.l32 * q.l21, n2_bar(q) + 1)
}
fn bar_e1(q: &Q) -> BigRational {
    frac(q.l32 * (q.n[1] + q.m[1] + q.ap - q.l21 + 1), n2_bar(q) + 1)
}
fn bar_e2(q: &Q) -> BigRational {
    frac(-q.l23 * q.l12, n2_bar(q) + 1)
}
fn bar_f2(q: &Q) -> BigRational {
    let [bn1, bn2, _] = q.big_n;
    frac(-q.l32 * q.l13 * q.l21 * (bn1 + bn2 + 3 - q.l21), (bn1 + 1) * (bn2 + 1))
}
fn bar_f3(q: &Q) -> BigRational {
    let [bn1, bn2, _] = q.big_n;
    frac((bn1 + 2) * q.l23 * q.l31, bn1 + 1) * frac(q.l12 * (q.l12 - 1), (bn2 + 1) * (bn1 + 2))
}
fn bar_i1(q: &Q) -> BigRational {
    frac(-q.l12 * q.l23 * q.l31, q.big_n[2] + 1)
}
fn bar_i2(q: &Q) -> BigRational {
    let bn3 = q.big_n[2];
    -frac(bn3 + 2, bn3 + 1) * rat(q.l13 * q.l32)
}
fn bar_j1(q: &Q) -> BigRational {
    let bn3 = q.big_n[2];
    rat(q.l12 * (q.l13 + 1) * (q.l32 + 1))
        - frac(bn3 + 2, bn3 + 1) * rat(q.l13 * q.l32 * (q.l12 + 1))
        - frac((q.ap + q.l12) * (bn3 - q.l23 + 1) * (bn3 - q.l31 + 1), bn3 + 1)
}
fn bar_j2(q: &Q) -> BigRational {
    -frac(q.n[2] + q.m[2] + 2 * q.ap + q.l12 + 2, q.big_n[2] + 1) * rat(q.l13 * q.l32)
}
fn one(_: &Q) -> BigRational {
    BigRational::one()
}

fn terms() -> Vec<Term> {
    vec![
        Term {
            family: Family::C,
            index: 1,
            branch: Branch::Any,
            dl: [1, 0, 0, 0, 0, 0],
            dp: 0,
            bar: one,
            normalized: |x, _| (BigRational::one(), (vec![f12(x, 1)], vec![])),
            printed_ref: "c1: sqrt(fbar_12(l12+1))",
        },
        Term {
            family: Family::D,
            index: 1,
            branch: Branch::Any,
            dl: [0, 0, 1, 0, -1, 0],
            dp: 0,
            bar: bar_d1,
            normalized: |x, q| (bar_d1(q), (vec![fr(F13, x, 1)], vec![fr(F23, x, 0)])),
            printed_ref: "d1 = sqrt(F13(l13+1)/F23(l23)) l23 (n2+m2+|p|-l12+1)/(n2+m2+|p|+1)",
        },
        Term {
            family: Family::D,
            index: 2,
            branch: Branch::Any,
            dl: [1, -1, 0, 1, 0, -1],
            dp: 0,
            bar: bar_d2,
            normalized: |x, q| {
                (bar_d2(q), (vec![f12(x, 1), fr(F31, x, 1)], vec![fr(F21, x, 0), fr(F32, x, 0)]))
            },
            printed_ref: "d2 = sqrt(f12(l12+1) F31(l31+1)/(F21(l21) F32(l32))) (-l32 l21)/(n2+m2+|p|+1)",
        },
        Term {
            family: Family::E,
            index: 1,
            branch: Branch::Any,
            dl: [0, 0, 0, 1, 0, -1],
            dp: 0,
            bar: bar_e1,
            normalized: |x, q| (bar_e1(q), (vec![fr(F31, x, 1)], vec![fr(F32, x, 0)])),
            printed_ref: "e1 = sqrt(F31(l31+1)/F32(l32)) l32 (n2+m2+|p|-l21+1)/(n2+m2+|p|+1)",
        },
        Term {
            family: Family::E,
            index: 2,
            branch: Branch::Any,
            dl: [-1, 1, 1, 0, -1, 0],
            dp: 0,
            bar: bar_e2,
            normalized: |x, q| {
                (bar_e2(q), (vec![fr(F21, x, 1), fr(F13, x, 1)], vec![f12(x, 0), fr(F23, x, 0)]))
            },
            printed_ref: "e2 = sqrt(F21(l21+1) F13(l13+1)/(f12(l12) F23(l23))) (-l23 l12)/(n2+m2+|p|+1)",
        },
        Term {
            family: Family::F,
            index: 1,
            branch: Branch::Any,
            dl: [-1, 0, 0, 0, 0, 0],
            dp: 0,
            bar: |_| BigRational::zero(),
            normalized: |x, _| (BigRational::one(), (vec![f12(x, 0)], vec![])),
            printed_ref: "f1 = sqrt(fbar_12(l12))",
        },
        Term {
            family: Family::F,
            index: 2,
            branch: Branch::Any,
            dl: [0, -1, -1, 1, 1, -1],
            dp: 0,
            bar: bar_f2,
            normalized: |x, q| {
                (
                    bar_f2(q),
                    (
                        vec![fr(F23, x, 1), fr(F31, x, 1)],
                        vec![fr(F21, x, 0), fr(F32, x, 0), fr(F13, x, 0)],
                    ),
                )
            },
            printed_ref: "f2 = -sqrt(F23(l23+1) F31(l31+1)/(F21 F32 F13)) l32 l13 l21 (N1+N2+3-l21)/((N1+1)(N2+1))",
        },
        Term {
            family: Family::F,
            index: 3,
            branch: Branch::Any,
            dl: [-2, 1, 1, -1, -1, 1],
            dp: 0,
            bar: bar_f3,
            normalized: |x, q| {
                (
                    bar_f3(q),
                    (
                        vec![fr(F32, x, 1), fr(F13, x, 1), fr(F21, x, 0)],
                        vec![f12(x, 0), f12(x, -1), fr(F31, x, 0), fr(F23, x, 0)],
                    ),
                )
            },
            printed_ref: "f3 = sqrt(F32(l32+1) F13(l13+1) F21(l21)/(f12(l12) f12(l12-1) F31 F23)) (N1+2) l23 l31/(N1+1) l12 (l12-1)/((N2+1)(N1+2))",
        },
        Term {
            family: Family::G,
            index: 1,
            branch: Branch::NonNeg,
            dl: [-1, 0, 0, 0, 0, 0],
            dp: 1,
            bar: |q| rat(q.l12),
            normalized: |x, q| (rat(q.l12), (vec![cube(q.ap + 3)], vec![f12(x, 0)])),
            printed_ref: "g1 = sqrt((|p|+3)^3/fbar_12(l12)) l12",
        },
        Term {
            family: Family::H,
            index: 1,
            branch: Branch::Neg,
            dl: [0, 0, 0, 1, 1, 0],
            dp: 1,
            bar: |q| rat(q.ap + q.l12),
            normalized: |x, q| {
                (rat(q.ap + q.l12), (vec![fr(F31, x, 1), fr(F23, x, 1)], vec![cube(q.ap + 2)]))
            },
            printed_ref: "h1 = sqrt(F31(l31+1) F23(l23+1)/(|p|+2)^3) (|p|+l12)",
        },
        Term {
            family: Family::H,
            index: 2,
            branch: Branch::Neg,
            dl: [-1, 1, 1, 0, 0, 1],
            dp: 1,
            bar: |q| rat(q.l12),
            normalized: |x, q| {
                let mut y = *x;
                y.l21 = 0;
                y.l13 = 0;
                y.l31 = 0;
                (
                    rat(q.l12),
                    (
                        vec![fr(F21, x, 1), fr(F13, x, 1), fr(F32, x, 1)],
                        vec![cube(q.ap + 2), fbar_12(&y)],
                    ),
                )
            },
            printed_ref: "h2 = sqrt(F21(l21+1) F13(l13+1) F32(l32+1)/((|p|+2)^3 fbar_12(l12)|l21=l13=l31=0)) l12",
        },
        Term {
            family: Family::I,
            index: 1,
            branch: Branch::NonNeg,
            dl: [-1, 1, 0, -1, -1, 0],
            dp: 1,
            bar: bar_i1,
            normalized: |x, q| {
                (
                    bar_i1(q),
                    (
                        vec![fr(F21, x, 1), cube(q.ap + 3)],
                        vec![f12(x, 0), fr(F23, x, 0), fr(F31, x, 0)],
                    ),
                )
            },
            printed_ref: "i1 = sqrt(F21(l21+1)(|p|+3)^3/(f12 F23 F31)) ibar1, ibar1 = -l12 l23 l31/(N3+1)",
        },
        Term {
            family: Family::I,
            index: 2,
            branch: Branch::NonNeg,
            dl: [0, 0, -1, 0, 0, -1],
            dp: 1,
            bar: bar_i2,
            normalized: |x, q| {
                (bar_i2(q), (vec![cube(q.ap + 3)], vec![fr(F13, x, 0), fr(F32, x, 0)]))
            },
            printed_ref: "i2 = sqrt((|p|+3)^3/(F13 F32)) ibar2, ibar2 = -(N3+2)/(N3+1) l13 l32",
        },
        Term {
            family: Family::J,
            index: 1,
            branch: Branch::Neg,
            dl: [0, 1, 0, 0, 0, 0],
            dp: 1,
            bar: bar_j1,
            normalized: |x, q| (bar_j1(q), (vec![fr(F21, x, 1)], vec![cube(q.ap + 2)])),
            printed_ref: "j1 = sqrt(F21(l21+1)/(|p|+2)^3) jbar1",
        },
        Term {
            family: Family::J,
            index: 2,
            branch: Branch::Neg,
            dl: [1, 0, -1, 1, 1, -1],
            dp: 1,
            bar: bar_j2,
            normalized: |x, q| {
                (
                    bar_j2(q),
                    (
                        vec![fr(F31, x, 1), fr(F23, x, 1), f12(x, 1)],
                        vec![fr(F13, x, 0), fr(F32, x, 0), cube(q.ap + 2)],
                    ),
                )
            },
            printed_ref: "j2 = sqrt(F31(l31+1) F23(l23+1) f12(l12+1)/(F13 F32 (|p|+2)^3)) jbar2, jbar2 = -(n3+m3+2|p|+l12+2)/(N3+1) l13 l32",
        },
        Term {
            family: Family::J,
            index: 3,
            branch: Branch::Neg,
            dl: [-1, 2, 1, -1, -1, 1],
            dp: 1,
            bar: bar_i1,
            normalized: |x, q| {
                (
                    bar_i1(q),
                    (
                        vec![fr(F21, x, 2), fr(F21, x, 1), fr(F13, x, 1), fr(F32, x, 1)],
                        vec![f12(x, 0), fr(F23, x, 0), fr(F31, x, 0), cube(q.ap + 3)],
                    ),
                )
            },
            printed_ref: "j3 = sqrt(F21(l21+2) F21(l21+1) F13(l13+1) F32(l32+1)/(f12 F23 F31 (|p|+3)^3)) jbar3, jbar3 = -l12 l23 l31/(N3+1)",
        },
        Term {
            family: Family::N,
            index: 1,
            branch: Branch::NonNeg,
            dl: [0; 6],
            dp: 1,
            bar: one,
            normalized: |_, q| (BigRational::one(), (vec![cube(q.ap + 3)], vec![])),
            printed_ref: "n1 = sqrt((|p|+3)^3)",
        },
        Term {
            family: Family::M,
            index: 1,
            branch: Branch::Neg,
            dl: [1, 0, 0, 1, 1, 0],
            dp: 1,
            bar: one,
            normalized: |x, q| {
                (
                    BigRational::one(),
                    (vec![f12(x, 1), fr(F23, x, 1), fr(F31, x, 1)], vec![cube(q.ap + 2)]),
                )
            },
            printed_ref: "m1 = sqrt(f12(l12+1) F23(l23+1) F31(l31+1)/(|p|+2)^3)",
        },
        Term {
            family: Family::M,
            index: 2,
            branch: Branch::Neg,
            dl: [0, 1, 1, 0, 0, 1],
            dp: 1,
            bar: one,
            normalized: |x, q| {
                (
                    BigRational::one(),
                    (vec![fr(F21, x, 1), fr(F32, x, 1), fr(F13, x, 1)], vec![cube(q.ap + 2)]),
                )
            },
            printed_ref: "m2 = sqrt(F21(l21+1) F32(l32+1) F13(l13+1)/(|p|+2)^3)",
        },
    ]
}

/// `prefactor * sqrt(prod num / prod den)`, or `None` when undefined.
fn assemble(pre: BigRational, (num, den): Radicand) -> Option<SqrtRational> {
    if pre.is_zero() {
        return Some(SqrtRational::zero());
    }
    let d = den.iter().fold(BigRational::one(), |a, b| a * b);
    if d.is_zero() {
        return None;
    }
    let r = num.iter().fold(BigRational::one(), |a, b| a * b) / d;
    if r.is_negative() {
        return None;
    }
    Some(SqrtRational::scaled_root(&pre, &r))
}

/// One tabulated value at one source label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedValue {
    pub id: CoeffFormulaId,
    /// Ledger key; the id's display form unless the value is a variant.
    pub name: String,
    pub target: Option<Su3Label>,
    /// The normalized coefficient, or the barred one when `id.bar` is set.
    pub value: Option<SqrtRational>,
    pub printed_ref: String,
}

fn eval_term(t: &Term, x: &Su3Label, bar: bool) -> Option<(Option<Su3Label>, Option<SqrtRational>)> {
    if !t.branch.admits(x.p) {
        return None;
    }
    let q = Q::of(x);
    let value = if bar {
        Some(SqrtRational::from_rational(&(t.bar)(&q)))
    } else {
        let (pre, r) = (t.normalized)(x, &q);
        assemble(pre, r)
    };
    Some((x.shifted(t.dl, t.dp), value))
}

fn flip() -> SymElement {
    SymElement::generator(Generator::Flip)
}

/// Every tabulated normalized coefficient (and barred coefficient when `bar`) applicable at
/// `x`. The `k`, `l` families are the flip images of `j`, `i`.
pub fn printed_values(x: &Su3Label, bar: bool) -> Vec<PrintedValue> {
    let mut out = Vec::new();
    for t in terms() {
        if bar && t.family == Family::F && t.index == 1 {
            continue;
        }
        let id = CoeffFormulaId::new(t.family, t.index).unwrap();
        let id = if bar { id.barred() } else { id };
        if let Some((target, value)) = eval_term(&t, x, bar) {
            out.push(PrintedValue { id, name: id.to_string(), target, value, printed_ref: t.printed_ref.to_string() });
        }
        let mirrored = match t.family {
            Family::I => Family::L,
            Family::J => Family::K,
            _ => continue,
        };
        let (fx, _) = flip().act_label(x);
        if let Some((target, value)) = eval_term(&t, &fx, bar) {
            let mut id = CoeffFormulaId::new(mirrored, t.index).unwrap();
            id.bar = bar;
            out.push(PrintedValue {
                id,
                name: id.to_string(),
                target: target.map(|y| flip().act_label(&y).0),
                value,
                printed_ref: format!("{}{} = flip image of {}", mirrored.letter(), t.index, t.printed_ref),
            });
        }
    }
    out
}

/// The `fbar_12` variant with signed `p` in its first term, as a barred `f1` value.
pub fn printed_fbar_signed(x: &Su3Label) -> PrintedValue {
    PrintedValue {
        id: CoeffFormulaId::new(Family::F, 1).unwrap().barred(),
        name: "fbar1 (signed p)".into(),
        target: x.bump(1, 2, -1),
        value: Some(SqrtRational::from_rational(&fbar_12_signed_p(x))),
        printed_ref: "fbar_12 with p in place of |p| in the first term".into(),
    }
}

// ---------------------------------------------------------------------------
// Ledger

/// Reference coefficients on the unnormalized basis and the reference norm.
pub trait Reference {
    fn action(&self, base: BaseOp, x: &Su3Label) -> Action;
    fn norm_sq(&self, x: &Su3Label) -> BigRational;
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: usize,
    undefined: usize,
    first: Option<(Su3Label, Option<SqrtRational>, SqrtRational)>,
    printed_ref: String,
}

fn note_for(id: &CoeffFormulaId) -> &'static str {
    use Family::*;
    match (id.family, id.bar) {
        (G | H | I | J | K | L, true) => {
            "missing factor (N2+3)/(N2+2) picked up when b(2) passes a+(2) inside the epsilon"
        }
        (F, true) => "signed p in the first term disagrees for p < 0; |p| is correct",
        (G | H | I | J | K | L, false) => {
            "inherits the barred mismatch and uses (|p|+3)^3 or (|p|+2)^3 where the true pure-p \
             norm ratio is (|p|+1)(|p|+2)(|p|+3)"
        }
        (M | N, false) => {
            "uses (|p|+3)^3 or (|p|+2)^3 where the true pure-p norm ratio is (|p|+1)(|p|+2)(|p|+3)"
        }
        _ => {
            "radicand read at the source label as written; the norm ratio S(target)/S(source) \
             needs each factor at its partially shifted label, and past weight 6 the factor \
             chain itself is not the norm"
        }
    }
}

fn tally(
    acc: &mut BTreeMap<String, (CoeffFormulaId, Tally)>,
    x: &Su3Label,
    pv: PrintedValue,
    reference: SqrtRational,
) {
    let (_, t) = acc.entry(pv.name.clone()).or_insert_with(|| (pv.id, Tally::default()));
    t.printed_ref = pv.printed_ref;
    let printed_zero = pv.value.as_ref().is_some_and(|v| v.is_zero());
    if printed_zero && reference.is_zero() {
        return;
    }
    t.checked += 1;
    if pv.value.as_ref() != Some(&reference) {
        t.failed += 1;
        if pv.value.is_none() {
            t.undefined += 1;
        }
        if t.first.is_none() {
            t.first = Some((*x, pv.value, reference));
        }
    }
}

fn records(acc: BTreeMap<String, (CoeffFormulaId, Tally)>, w_max: u32) -> Vec<DiscrepancyRecord> {
    let mut out: Vec<_> = acc
        .into_iter()
        .filter_map(|(name, (id, t))| {
            let (x, printed, oracle) = t.first?;
            let undefined = if t.undefined > 0 { format!(", {} undefined", t.undefined) } else { String::new() };
            Some(DiscrepancyRecord {
                formula: name,
                label: RecordLabel::Su3(x),
                printed,
                oracle,
                printed_ref: t.printed_ref,
                note: format!(
                    "{} of {} nonzero cases up to weight {w_max} disagree{undefined}; {}",
                    t.failed,
                    t.checked,
                    note_for(&id)
                ),
            })
        })
        .collect();
    out.sort_by(|a, b| a.formula.cmp(&b.formula));
    out
}

/// Compare every tabulated SU(3) coefficient with the reference on `labels`.
pub fn su3_formula_ledger(
    reference: &(impl Reference + Sync),
    labels: &[Su3Label],
    w_max: u32,
) -> Vec<DiscrepancyRecord> {
    use rayon::prelude::*;
    let rows: Vec<_> = labels
        .par_iter()
        .map(|x| {
            let mut rows = Vec::new();
            let mut cache: BTreeMap<BaseOp, Action> = BTreeMap::new();
            let s_x = reference.norm_sq(x);
            let mut values = printed_values(x, false);
            values.extend(printed_values(x, true));
            values.push(printed_fbar_signed(x));
            for pv in values {
                let base = pv.id.family.base();
                let act = cache.entry(base).or_insert_with(|| reference.action(base, x));
                let c = pv.target.and_then(|t| act.get(&t).cloned()).unwrap_or_else(BigRational::zero);
                let r = if pv.id.bar || c.is_zero() {
                    SqrtRational::from_rational(&c)
                } else {
                    let t = pv.target.unwrap();
                    SqrtRational::scaled_root(&c, &(reference.norm_sq(&t) / &s_x))
                };
                rows.push((pv, r));
            }
            (*x, rows)
        })
        .collect();
    let mut acc = BTreeMap::new();
    for (x, rs) in rows {
        for (pv, r) in rs {
            tally(&mut acc, &x, pv, r);
        }
    }
    records(acc, w_max)
}

/// Compare the five restricted leading factors with the reference leading coefficient of
/// `(a_i . b_j)` on labels where the restriction holds.
pub fn restricted_ledger(
    leading: impl Fn(Restricted, &Su3Label) -> BigRational,
    labels: &[Su3Label],
) -> Vec<DiscrepancyRecord> {
    let mut out = Vec::new();
    for r in Restricted::ALL {
        let (mut checked, mut failed) = (0, 0);
        let mut first = None;
        for x in labels {
            let l = x.links();
            if l[..r.slot()].iter().any(|&v| v > 0) || l[r.slot()] == 0 {
                continue;
            }
            checked += 1;
            let printed = fbar_restricted(r, x);
            let truth = leading(r, x);
            if printed != truth {
                failed += 1;
                first.get_or_insert((*x, printed, truth));
            }
        }
        if let Some((x, p, t)) = first {
            out.push(DiscrepancyRecord {
                formula: format!("{r:?} restricted factor"),
                label: RecordLabel::Su3(x),
                printed: Some(SqrtRational::from_rational(&p)),
                oracle: SqrtRational::from_rational(&t),
                printed_ref: format!("{r:?} as tabulated"),
                note: format!(
                    "{failed} of {checked} restricted labels disagree; the 21 form omits |p| from \
                     two denominators"
                ),
            });
        }
    }
    out
}

/// Tabulated `S(0,p) = [(|p|+2)!]^3 / 8` against the reference base norm.
pub fn base_norm_ledger(reference: impl Fn(i32) -> BigRational, max_abs_p: u32) -> Vec<DiscrepancyRecord> {
    let mut bad = Vec::new();
    for p in 1..=max_abs_p as i32 {
        let printed = crate::su3::pure_p_norm_tabulated(p.unsigned_abs());
        let truth = reference(p);
        if printed != truth {
            bad.push((p, printed, truth));
        }
    }
    let Some((p, printed, truth)) = bad.first().cloned() else {
        return Vec::new();
    };
    vec![DiscrepancyRecord {
        formula: "S(0,p)".into(),
        label: RecordLabel::Su3(Su3Label::from_parts([0; 6], p)),
        printed: Some(SqrtRational::from_rational(&printed)),
        oracle: SqrtRational::from_rational(&truth),
        printed_ref: "pure-p norm [(|p|+2)!]^3/2^3 from replacing eps.eps by its diagonal part".into(),
        note: format!(
            "{} of {max_abs_p} values of |p| disagree; the cross contractions give \
             prod_k k(k+1)(k+2) = |p|! (|p|+1)! (|p|+2)!/2",
            bad.len()
        ),
    }]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_su3;
    use crate::su3::{base_action, norm_sq_su3};

    struct Engine;
    impl Reference for Engine {
        fn action(&self, base: BaseOp, x: &Su3Label) -> Action {
            base_action(base, x)
        }
        fn norm_sq(&self, x: &Su3Label) -> BigRational {
            norm_sq_su3(x)
        }
    }

    fn l(v: [u32; 6], p: i32) -> Su3Label {
        Su3Label::from_parts(v, p)
    }

    fn value(x: &Su3Label, name: &str, bar: bool) -> Option<SqrtRational> {
        printed_values(x, bar).into_iter().find(|v| v.name == name).unwrap().value
    }

    #[test]
    fn formula_ids() {
        assert!(CoeffFormulaId::new(Family::F, 3).is_some());
        assert!(CoeffFormulaId::new(Family::C, 2).is_none());
        assert!(CoeffFormulaId::new(Family::L, 3).is_none());
        let id = CoeffFormulaId::new(Family::D, 2).unwrap();
        let c = SymElement::generator(Generator::Cycle);
        assert_eq!(id.image(&c).to_string(), "d2[231]");
        assert_eq!(id.image(&c).image(&c).image(&c), id);
        assert_eq!(id.image(&flip()).image(&flip()), id);
        assert_eq!(id.barred().to_string(), "dbar2");
    }

    #[test]
    fn tabulated_examples() {
        // g1 on l12 = 1: sqrt(27/3) * 1 = 3
        let g = value(&l([1, 0, 0, 0, 0, 0], 0), "g1", false).unwrap();
        assert_eq!(g, SqrtRational::new(1, rat(9)).unwrap());
        // n1 on the vacuum: sqrt(27)
        let n = value(&Su3Label::vacuum(), "n1", false).unwrap();
        assert_eq!(n, SqrtRational::new(1, rat(27)).unwrap());
        let c = value(&Su3Label::vacuum(), "c1", false).unwrap();
        assert_eq!(c, SqrtRational::new(1, rat(3)).unwrap());
    }

    #[test]
    fn barred_bilinears_agree_at_low_weight() {
        let labels = enumerate_su3(4);
        let ledger = su3_formula_ledger(&Engine, &labels, 4);
        for name in ["c1", "f1", "dbar1", "dbar2", "ebar1", "ebar2", "fbar2", "fbar3"] {
            assert!(ledger.iter().all(|r| r.formula != name), "{name} should agree");
        }
        assert!(ledger.iter().any(|r| r.formula == "d1"));
        assert!(ledger.iter().any(|r| r.formula == "gbar1"));
        assert!(ledger.iter().any(|r| r.formula == "n1"));
    }

    #[test]
    fn base_norm_is_ledgered() {
        let recs = base_norm_ledger(|p| crate::su3::pure_p_norm(p.unsigned_abs()), 2);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].printed, Some(SqrtRational::from_rational(&rat(27))));
        assert_eq!(recs[0].oracle, SqrtRational::from_rational(&rat(6)));
    }

    #[test]
    fn record_json_shape() {
        let recs = base_norm_ledger(|p| crate::su3::pure_p_norm(p.unsigned_abs()), 1);
        let v = serde_json::to_value(&recs[0]).unwrap();
        assert_eq!(v["printed"]["radicand"], "729/1");
        assert_eq!(v["oracle"]["radicand"], "36/1");
        assert_eq!(v["label"]["p"], 1);
        let back: DiscrepancyRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, recs[0]);
    }
}
