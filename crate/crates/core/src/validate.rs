//! Oracle validation suite behind `singlet verify`.
//!
//! Checks come in three kinds. `Engine` checks compare the shipped closed forms with the Fock
//! oracle and decide the verdict. `Oracle` checks are sanity conditions on the brute-force
//! states themselves and also gate. `Printed` checks test claims of the tabulated derivation;
//! a failure there is a finding, recorded in the ledger, and does not fail the run.

use crate::basis::{enumerate_su2, enumerate_su3, Group, Su2Label, Su3Label, PAIRS};
use crate::fock::{
    apply_su2_op, apply_su3_op, build_su3_ordered, casimir_leg, gauss_total, irr_annihilate,
    irr_create, k_minus, leg_count, real_to_complex, su2_casimir_leg, su2_gauss_total,
    FockVector, Oracle,
};
use crate::opexpr::{canonicalize, catalog, parse, BaseOp, Factor, InvariantOp, Species};
use crate::printed::{
    base_norm_ledger, restricted_ledger, su3_formula_ledger, DiscrepancyRecord, RecordLabel,
    Reference,
};
use crate::sqrt_rational::SqrtRational;
use crate::su2::{act_su2, norm_sq_su2, printed_table, su2_adjoint, su2_catalog};
use crate::su3::{
    act_su3, frac, gram_su3, norm_chain, norm_sq_su3, pure_p_norm, unnormalized_act, Restricted,
};
use crate::symmetry::{Action, SymElement};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Engine,
    Oracle,
    Printed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, kind: CheckKind, passed: bool, detail: String) -> Check {
        Check { name: name.into(), kind, passed, detail }
    }

    /// Pass when `failures` is empty; the detail names the first few.
    fn from_failures(name: &str, kind: CheckKind, total: usize, failures: &[String]) -> Check {
        let detail = if failures.is_empty() {
            format!("{total} cases")
        } else {
            let shown: Vec<_> = failures.iter().take(3).cloned().collect();
            format!("{} of {total} cases fail, e.g. {}", failures.len(), shown.join("; "))
        };
        Check::new(name, kind, failures.is_empty(), detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub group: Group,
    pub w_max: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Engine-vs-oracle disagreements; empty whenever the run passes.
    pub mismatches: Vec<DiscrepancyRecord>,
    /// Tabulated-vs-oracle disagreements.
    pub ledger: Vec<DiscrepancyRecord>,
}

impl Report {
    fn new(group: Group, w_max: u32, checks: Vec<Check>, mismatches: Vec<DiscrepancyRecord>, ledger: Vec<DiscrepancyRecord>) -> Report {
        let passed = mismatches.is_empty()
            && checks.iter().all(|c| c.passed || c.kind == CheckKind::Printed);
        Report { group, w_max, passed, checks, mismatches, ledger }
    }

    /// Human-readable summary: one line per check, then the verdict.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let mark = match (c.passed, c.kind) {
                (true, _) => "PASS",
                (false, CheckKind::Printed) => "NOTE",
                (false, _) => "FAIL",
            };
            let kind = match c.kind {
                CheckKind::Engine => "engine",
                CheckKind::Oracle => "oracle",
                CheckKind::Printed => "printed",
            };
            let _ = writeln!(s, "{mark} [{kind}] {}: {}", c.name, c.detail);
        }
        let _ = writeln!(
            s,
            "{} engine mismatches, {} ledger records",
            self.mismatches.len(),
            self.ledger.len()
        );
        let _ = writeln!(s, "verdict: {}", if self.passed { "PASS" } else { "FAIL" });
        s
    }
}

fn su3(text: &str) -> InvariantOp {
    parse(text, Group::Su3).expect("built-in operator text")
}

/// Bilinears up to `w`; epsilon operators up to `w - 1` so every target stays small.
pub fn op_cutoff(op: &InvariantOp, w: u32) -> Option<u32> {
    match op {
        InvariantOp::Bilinear(_) => Some(w),
        InvariantOp::TrilinearEps(_) => w.checked_sub(1),
    }
}

fn synthesize(oracle: &Oracle, act: &Action) -> FockVector {
    let mut v = FockVector::zero();
    for (t, c) in act {
        v.add_scaled(&oracle.state(t), c);
    }
    v
}

fn oracle_action(oracle: &Oracle, op: &InvariantOp, x: &Su3Label) -> Action {
    let v = apply_su3_op(op, &oracle.state(x));
    oracle
        .expand_su3(&v)
        .expect("invariant image of a singlet lies in the singlet span")
        .into_iter()
        .collect()
}

fn normalized(c: &BigRational, s_target: &BigRational, s_source: &BigRational) -> SqrtRational {
    SqrtRational::scaled_root(c, &(s_target / s_source))
}

fn label_list(v: &[Su3Label]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

// ---------------------------------------------------------------------------
// SU(3)

/// Every catalog operator on every label up to the cutoff, compared with the oracle both as a
/// vector identity on the unnormalized states and coefficient by coefficient on the
/// normalized basis (oracle norms). Returns one record per disagreeing coefficient.
pub fn validate_against_oracle(oracle: &Oracle, w_max: u32) -> Vec<DiscrepancyRecord> {
    oracle.warm(w_max + 3);
    let jobs: Vec<(InvariantOp, Su3Label)> = catalog()
        .into_iter()
        .flat_map(|op| {
            let w = op_cutoff(&op, w_max);
            w.map(enumerate_su3).unwrap_or_default().into_iter().map(move |x| (op, x))
        })
        .collect();
    let mut out: Vec<_> = jobs
        .par_iter()
        .flat_map_iter(|(op, x)| compare_su3(oracle, op, x))
        .collect();
    out.sort_by(|a, b| (&a.formula, label_key(&a.label)).cmp(&(&b.formula, label_key(&b.label))));
    out
}

fn label_key(l: &RecordLabel) -> (Option<Su3Label>, Option<Su2Label>) {
    match l {
        RecordLabel::Su3(x) => (Some(*x), None),
        RecordLabel::Su2(x) => (None, Some(*x)),
    }
}

fn compare_su3(oracle: &Oracle, op: &InvariantOp, x: &Su3Label) -> Vec<DiscrepancyRecord> {
    let record = |t: &Su3Label, shipped: Option<SqrtRational>, truth: SqrtRational, note: &str| {
        DiscrepancyRecord {
            formula: op.to_string(),
            label: RecordLabel::Su3(*x),
            printed: shipped,
            oracle: truth,
            printed_ref: "shipped closed form".into(),
            note: format!("target {t}: {note}"),
        }
    };
    let analytic = match unnormalized_act(op, x) {
        Ok(a) => a,
        Err(e) => {
            return vec![record(x, None, SqrtRational::zero(), &format!("engine error: {e}"))];
        }
    };
    let lhs = apply_su3_op(op, &oracle.state(x));
    let s_x = oracle.norm_sq(x);
    if lhs != synthesize(oracle, &analytic) {
        let truth = oracle_action(oracle, op, x);
        let mut targets: Vec<_> = truth.keys().chain(analytic.keys()).copied().collect();
        targets.sort();
        targets.dedup();
        return targets
            .into_iter()
            .filter_map(|t| {
                let a = analytic.get(&t).cloned().unwrap_or_else(BigRational::zero);
                let o = truth.get(&t).cloned().unwrap_or_else(BigRational::zero);
                (a != o).then(|| {
                    let s_t = oracle.norm_sq(&t);
                    record(&t, Some(normalized(&a, &s_t, &s_x)), normalized(&o, &s_t, &s_x), "unnormalized coefficient")
                })
            })
            .collect();
    }
    let shipped = act_su3(op, x).expect("canonicalized above");
    shipped
        .into_iter()
        .filter_map(|tr| {
            let c = &analytic[&tr.target];
            let truth = normalized(c, &oracle.norm_sq(&tr.target), &s_x);
            (tr.coeff != truth).then(|| record(&tr.target, Some(tr.coeff), truth, "normalized coefficient"))
        })
        .collect()
}

fn engine_check(records: &[DiscrepancyRecord], w_max: u32) -> Check {
    let ops = catalog();
    let pairs: usize = ops
        .iter()
        .map(|op| op_cutoff(op, w_max).map_or(0, |w| enumerate_su3(w).len()))
        .sum();
    let detail = match records.first() {
        None => format!(
            "{} operators, {pairs} (operator, label) pairs, epsilon operators to weight {}",
            ops.len(),
            w_max.saturating_sub(1)
        ),
        Some(r) => format!("{} mismatches, first {} on {:?}: {}", records.len(), r.formula, r.label, r.note),
    };
    Check::new("closed-form coefficients vs oracle", CheckKind::Engine, records.is_empty(), detail)
}

/// Analytic norms and same-content overlaps against oracle inner products.
pub fn check_norms(oracle: &Oracle, w_max: u32) -> Check {
    let labels = enumerate_su3(w_max);
    let mut fails = Vec::new();
    let mut n = 0;
    for x in &labels {
        n += 1;
        if norm_sq_su3(x) != oracle.norm_sq(x) {
            fails.push(format!("S{x}"));
        }
        for y in &labels {
            if x < y && x.content() == y.content() {
                n += 1;
                if gram_su3(x, y) != oracle.gram(x, y) {
                    fails.push(format!("<{x}|{y}>"));
                }
            }
        }
    }
    Check::from_failures("norms and overlaps vs oracle", CheckKind::Engine, n, &fails)
}

/// Gram matrix of the unnormalized basis is diagonal.
pub fn check_orthogonality(oracle: &Oracle, w_max: u32) -> (Check, Vec<DiscrepancyRecord>) {
    let labels = enumerate_su3(w_max);
    let mut pairs = 0;
    let mut bad = Vec::new();
    for x in &labels {
        for y in &labels {
            if x < y && x.content() == y.content() {
                pairs += 1;
                let g = oracle.gram(x, y);
                if !g.is_zero() {
                    bad.push((*x, *y, g));
                }
            }
        }
    }
    let fails: Vec<_> = bad.iter().map(|(x, y, g)| format!("<{x}|{y}> = {g}")).collect();
    let mut check = Check::from_failures("basis orthogonality", CheckKind::Printed, pairs, &fails);
    check.detail = format!("{} same-content pairs; {}", pairs, check.detail);
    let records = bad
        .first()
        .map(|(x, y, g)| DiscrepancyRecord {
            formula: "<l,p|l',p'>".into(),
            label: RecordLabel::Su3(*x),
            printed: Some(SqrtRational::zero()),
            oracle: SqrtRational::from_rational(g),
            printed_ref: "orthogonality of the |l,p> basis".into(),
            note: format!(
                "overlap with {y}; {} of {pairs} same-content pairs up to weight {w_max} overlap. \
                 Normalized actions are still exact as expansions in this non-orthogonal basis",
                bad.len()
            ),
        })
        .into_iter()
        .collect();
    (check, records)
}

/// The factor-chain norm against the oracle norm, and the pure-p base norm.
pub fn check_norm_chain(oracle: &Oracle, w_max: u32) -> (Check, Vec<DiscrepancyRecord>) {
    let labels = enumerate_su3(w_max);
    let bad: Vec<_> = labels
        .iter()
        .filter_map(|x| {
            let truth = oracle.norm_sq(x);
            let chain = norm_chain(x);
            (chain != truth).then_some((*x, chain, truth))
        })
        .collect();
    let fails: Vec<_> = bad.iter().map(|(x, c, t)| format!("{x}: chain {c}, oracle {t}")).collect();
    let check = Check::from_failures("norm factor chain vs oracle", CheckKind::Printed, labels.len(), &fails);
    let mut records: Vec<_> = bad
        .first()
        .map(|(x, c, t)| DiscrepancyRecord {
            formula: "S(l,p) chain".into(),
            label: RecordLabel::Su3(*x),
            printed: Some(SqrtRational::from_rational(c)),
            oracle: SqrtRational::from_rational(t),
            printed_ref: "S(l,p) as the product of leading factors fbar_12 and the restricted forms".into(),
            note: format!(
                "{} of {} labels up to weight {w_max} disagree; cross terms of the peeling step \
                 stop cancelling once same-content labels overlap. Shipped norms use the exact \
                 overlap recursion",
                bad.len(),
                labels.len()
            ),
        })
        .into_iter()
        .collect();
    records.extend(base_norm_ledger(|p| oracle.norm_sq(&Su3Label::from_parts([0; 6], p)), w_max / 3));
    (check, records)
}

/// Pure-p base norm `prod k(k+1)(k+2)` against the oracle.
pub fn check_base_norm(oracle: &Oracle, max_abs_p: u32) -> Check {
    let mut fails = Vec::new();
    for p in -(max_abs_p as i32)..=max_abs_p as i32 {
        let x = Su3Label::from_parts([0; 6], p);
        if pure_p_norm(x.abs_p()) != oracle.norm_sq(&x) {
            fails.push(x.to_string());
        }
    }
    Check::from_failures("pure-p base norm vs oracle", CheckKind::Engine, 2 * max_abs_p as usize + 1, &fails)
}

fn casimir3(p: u32, q: u32) -> BigRational {
    let (p, q) = (i64::from(p), i64::from(q));
    frac(p * p + q * q + p * q + 3 * p + 3 * q, 3)
}

/// Every basis state is annihilated by the eight total generators, by `k-` and by the
/// same-leg pairs on each leg, and carries the expected leg Casimirs.
pub fn check_constraints(oracle: &Oracle, w_max: u32) -> Check {
    let null_ops: Vec<_> = (1..=3u8)
        .flat_map(|i| {
            [
                InvariantOp::Bilinear([Factor::new(Species::A, true, i), Factor::new(Species::B, true, i)]),
                InvariantOp::Bilinear([Factor::new(Species::A, false, i), Factor::new(Species::B, false, i)]),
            ]
        })
        .collect();
    let labels = enumerate_su3(w_max);
    let fails: Vec<_> = labels
        .par_iter()
        .flat_map_iter(|x| {
            let v = oracle.state(x);
            let vc = real_to_complex(&v);
            let mut f = Vec::new();
            for a in 1..=8 {
                if !gauss_total(a, &vc).is_zero() {
                    f.push(format!("{x}: E{a}"));
                }
            }
            for leg in 1..=3u8 {
                if !k_minus(&v, leg).is_zero() {
                    f.push(format!("{x}: k- on leg {leg}"));
                }
                let (p, q) = x.leg_irrep(leg);
                let c = Complex::new(casimir3(p, q), BigRational::zero());
                if casimir_leg(leg, &vc) != vc.scaled(&c) {
                    f.push(format!("{x}: Casimir on leg {leg}"));
                }
            }
            for op in &null_ops {
                if !apply_su3_op(op, &v).is_zero() {
                    f.push(format!("{x}: {op}"));
                }
            }
            f
        })
        .collect();
    let n = labels.len() * (8 + 6 + null_ops.len());
    Check::from_failures("Gauss law, k-, same-leg pairs, Casimirs", CheckKind::Oracle, n, &fails)
}

/// States built with the six bilinear slots in other orders equal the canonical build.
pub fn check_factor_order(oracle: &Oracle, w_max: u32) -> Check {
    let orders: Vec<[usize; 6]> = vec![
        [0, 1, 2, 3, 4, 5],
        [1, 3, 5, 0, 2, 4],
        [2, 0, 4, 5, 1, 3],
        [4, 2, 0, 1, 5, 3],
    ];
    let labels: Vec<_> = enumerate_su3(w_max)
        .into_iter()
        .filter(|x| x.links().iter().filter(|&&v| v > 0).count() > 1)
        .collect();
    let fails: Vec<_> = labels
        .par_iter()
        .flat_map_iter(|x| {
            let v = oracle.state(x);
            orders
                .iter()
                .filter(|o| build_su3_ordered(x, o) != *v)
                .map(|o| format!("{x} order {o:?}"))
                .collect::<Vec<_>>()
        })
        .collect();
    Check::from_failures(
        "bilinear factor order independence",
        CheckKind::Printed,
        labels.len() * orders.len(),
        &fails,
    )
}

fn n_tilde(v: &FockVector, leg: u8) -> FockVector {
    v.map_diag(|k| frac(1, leg_count(k, leg) + 2))
}

/// `[A_a, A+_b] = delta_ab - N~ B+_a B_b` for both species on every leg, with `N~` read off
/// the resulting state.
pub fn check_bracket(oracle: &Oracle, w_max: u32) -> Check {
    let labels = enumerate_su3(w_max);
    let fails: Vec<_> = labels
        .par_iter()
        .flat_map_iter(|x| {
            let v = oracle.state(x);
            let mut f = Vec::new();
            for leg in 1..=3u8 {
                for sp in [Species::A, Species::B] {
                    for a in 1..=3u8 {
                        for b in 1..=3u8 {
                            let ab = irr_annihilate(&irr_create(&v, leg, sp, b), leg, sp, a);
                            let ba = irr_create(&irr_annihilate(&v, leg, sp, a), leg, sp, b);
                            let mut r = ab.minus(&ba);
                            if a == b {
                                r = r.minus(&v);
                            }
                            let o = sp.other();
                            let t = irr_create(&irr_annihilate(&v, leg, o, b), leg, o, a);
                            r.add_assign(&n_tilde(&t, leg));
                            if !r.is_zero() {
                                f.push(format!("{x}: leg {leg} {sp:?} ({a},{b})"));
                            }
                        }
                    }
                }
            }
            f
        })
        .collect();
    Check::from_failures("deformed bracket of irreducible oscillators", CheckKind::Printed, labels.len() * 54, &fails)
}

type VecOp<'a> = Box<dyn Fn(&FockVector) -> FockVector + Sync + 'a>;

fn op_fn(op: InvariantOp) -> VecOp<'static> {
    Box::new(move |v| apply_su3_op(&op, v))
}

fn commutator(a: &VecOp, b: &VecOp, v: &FockVector) -> FockVector {
    a(&b(v)).minus(&b(&a(v)))
}

struct Identity {
    name: &'static str,
    kind: CheckKind,
    lhs: Box<dyn Fn(&FockVector) -> FockVector + Sync>,
    rhs: Box<dyn Fn(&FockVector) -> FockVector + Sync>,
}

fn identities() -> Vec<Identity> {
    let bb23 = op_fn(su3("b(2).b+(3)"));
    let aa12 = op_fn(su3("a(1).a+(2)"));
    let c23 = op_fn(su3("a+(2).b+(3)"));
    let f12 = op_fn(su3("a(1).b(2)"));
    let bb31 = op_fn(su3("b(3).b+(1)"));
    let gh = op_fn(BaseOp::GH.op());
    let c31 = op_fn(su3("a+(3).b+(1)"));
    let ij = op_fn(BaseOp::IJ.op());
    let kl = op_fn(BaseOp::KL.op());
    let aaa = op_fn(BaseOp::AAA.op());
    let f12b = op_fn(su3("a(1).b(2)"));
    let klb = op_fn(BaseOp::KL.op());
    let aaab = op_fn(BaseOp::AAA.op());
    vec![
        Identity {
            name: "[b(2).b+(3), a(1).a+(2)] = -N2~ (a+(2).b+(3))(a(1).b(2))",
            kind: CheckKind::Printed,
            lhs: Box::new(move |v| commutator(&bb23, &aa12, v)),
            rhs: Box::new(move |v| n_tilde(&c23(&f12(v)), 2).scaled(&-BigRational::one())),
        },
        Identity {
            name: "[b(3).b+(1), eps(a+(3),b(2),a+(2))] = -N3~ (a+(3).b+(1)) eps(b(3),b(2),a+(2))",
            kind: CheckKind::Printed,
            lhs: Box::new(move |v| commutator(&bb31, &gh, v)),
            rhs: Box::new(move |v| n_tilde(&c31(&ij(v)), 3).scaled(&-BigRational::one())),
        },
        Identity {
            name: "[a(1).b(2), eps(a(3),a(2),b+(2))] = eps(a(3),a(2),a(1))",
            kind: CheckKind::Printed,
            lhs: Box::new({
                let f = op_fn(su3("a(1).b(2)"));
                move |v| commutator(&f, &kl, v)
            }),
            rhs: Box::new(move |v| aaa(v)),
        },
        Identity {
            name: "eps(a(3),a(2),a(1)) = (N2+2)/(N2+3) [F K - (1 - (N2+2)^-2) K F], F = a(1).b(2), K = eps(a(3),a(2),b+(2))",
            kind: CheckKind::Oracle,
            lhs: Box::new(move |v| aaab(v)),
            rhs: Box::new(move |v| {
                let fk = f12b(&klb(v));
                let kf = klb(&f12b(v));
                // N2 is read off the source state, which has definite content
                let n2 = v.iter().next().map_or(0, |(k, _)| leg_count(k, 2));
                let w = BigRational::one() - frac(1, (n2 + 2) * (n2 + 2));
                fk.minus(&kf.scaled(&w)).scaled(&frac(n2 + 2, n2 + 3))
            }),
        },
    ]
}

/// The commutator identities used to derive the composite actions, as exact identities on
/// the oracle states. The last one is the corrected form shipped for `eps(a,a,a)`.
pub fn check_identities(oracle: &Oracle, w_max: u32) -> (Vec<Check>, Vec<DiscrepancyRecord>) {
    let labels = enumerate_su3(w_max);
    let mut checks = Vec::new();
    let mut records = Vec::new();
    for id in identities() {
        let bad: Vec<_> = labels
            .par_iter()
            .filter(|x| {
                let v = oracle.state(x);
                (id.lhs)(&v) != (id.rhs)(&v)
            })
            .copied()
            .collect();
        let fails: Vec<_> = bad.iter().map(|x| x.to_string()).collect();
        checks.push(Check::from_failures(id.name, id.kind, labels.len(), &fails));
        if let (Some(x), CheckKind::Printed) = (bad.first(), id.kind) {
            let v = oracle.state(x);
            let lhs = oracle.expand_su3(&(id.lhs)(&v)).unwrap_or_default();
            let rhs = oracle.expand_su3(&(id.rhs)(&v)).unwrap_or_default();
            let (t, l, r) = first_difference(&lhs, &rhs);
            let s_x = oracle.norm_sq(x);
            let s_t = oracle.norm_sq(&t);
            records.push(DiscrepancyRecord {
                formula: id.name.into(),
                label: RecordLabel::Su3(*x),
                printed: Some(normalized(&r, &s_t, &s_x)),
                oracle: normalized(&l, &s_t, &s_x),
                printed_ref: "commutator identity used to compose eps(a(3),a(2),a(1))".into(),
                note: format!(
                    "fails on {} of {} labels up to weight {w_max} (first: {}); values are the \
                     normalized coefficients of {t}. The shipped composition is \
                     eps(a(3),a(2),a(1)) = (N2+2)/(N2+3) [F K - (1 - (N2+2)^-2) K F] with N2 of \
                     the source state",
                    bad.len(),
                    labels.len(),
                    label_list(&bad[..bad.len().min(3)])
                ),
            });
        }
    }
    (checks, records)
}

fn first_difference(
    a: &[(Su3Label, BigRational)],
    b: &[(Su3Label, BigRational)],
) -> (Su3Label, BigRational, BigRational) {
    let ma: BTreeMap<_, _> = a.iter().cloned().collect();
    let mb: BTreeMap<_, _> = b.iter().cloned().collect();
    let mut keys: Vec<_> = ma.keys().chain(mb.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    for k in keys {
        let x = ma.get(&k).cloned().unwrap_or_else(BigRational::zero);
        let y = mb.get(&k).cloned().unwrap_or_else(BigRational::zero);
        if x != y {
            return (k, x, y);
        }
    }
    (Su3Label::vacuum(), BigRational::zero(), BigRational::zero())
}

/// Operators reached only through a nontrivial symmetry image.
pub fn image_operators() -> Vec<InvariantOp> {
    catalog()
        .into_iter()
        .filter(|op| canonicalize(op).is_ok_and(|c| c.element() != SymElement::IDENTITY))
        .collect()
}

/// Random (operator, label) pairs where the operator is a symmetry image: the shipped
/// normalized coefficients against a direct oracle expansion.
pub fn check_symmetry_closure(oracle: &Oracle, w_max: u32, samples: usize, seed: u64) -> Check {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ops = image_operators();
    let mut picks = Vec::new();
    while picks.len() < samples {
        let op = *ops.choose(&mut rng).expect("catalog is not empty");
        let Some(w) = op_cutoff(&op, w_max) else { break };
        let labels = enumerate_su3(w);
        let x = *labels.choose(&mut rng).unwrap();
        picks.push((op, x));
    }
    let fails: Vec<_> = picks
        .par_iter()
        .filter_map(|(op, x)| {
            let truth = oracle_action(oracle, op, x);
            let s_x = oracle.norm_sq(x);
            let direct: Vec<_> = truth
                .iter()
                .map(|(t, c)| (*t, normalized(c, &oracle.norm_sq(t), &s_x)))
                .collect();
            let shipped: Vec<_> = act_su3(op, x).ok()?.into_iter().map(|t| (t.target, t.coeff)).collect();
            (direct != shipped).then(|| format!("{op} on {x}"))
        })
        .collect();
    let mut c = Check::from_failures("symmetry images vs direct oracle", CheckKind::Engine, picks.len(), &fails);
    let names: Vec<_> = picks.iter().take(4).map(|(op, x)| format!("{op} on {x}")).collect();
    c.detail = format!("{} (seed {seed}; e.g. {})", c.detail, names.join(", "));
    c
}

/// Adjoint pairs: on the normalized basis up to `literal_w` the annihilation-type matrix is
/// the transpose of its partner; up to `w_max` the Gram-weighted form
/// `<y|O x> = <O+ y|x>` holds on the unnormalized basis.
pub fn check_adjointness(w_max: u32, literal_w: u32) -> Check {
    let ops = catalog();
    let fails: Vec<_> = ops
        .par_iter()
        .flat_map_iter(|op| {
            let (sign, adj) = op.adjoint();
            let s = BigRational::from_integer(sign.into());
            let mut f = Vec::new();
            // literal transpose, normalized basis
            if let Some(w) = op_cutoff(op, literal_w) {
                let labels = enumerate_su3(w);
                let inside = |t: &Su3Label| t.weight() <= w;
                for x in &labels {
                    for tr in act_su3(op, x).unwrap() {
                        if !inside(&tr.target) {
                            continue;
                        }
                        let back = act_su3(&adj, &tr.target).unwrap();
                        let c = back.iter().find(|b| b.target == *x).map(|b| b.coeff.clone());
                        let want = if sign < 0 { -tr.coeff.clone() } else { tr.coeff.clone() };
                        if c.as_ref() != Some(&want) {
                            f.push(format!("{op} at ({x}, {})", tr.target));
                        }
                    }
                }
            }
            // Gram-weighted form
            if let Some(w) = op_cutoff(op, w_max) {
                let labels = enumerate_su3(w);
                for x in &labels {
                    let ox = unnormalized_act(op, x).unwrap();
                    let Some((t0, _)) = ox.iter().next() else { continue };
                    for y in labels.iter().filter(|y| y.content() == t0.content()) {
                        let lhs: BigRational = ox.iter().map(|(t, c)| c * gram_su3(y, t)).sum();
                        let ay = unnormalized_act(&adj, y).unwrap();
                        let rhs: BigRational = ay.iter().map(|(t, c)| c * gram_su3(x, t)).sum();
                        if lhs != &s * rhs {
                            f.push(format!("{op} Gram-weighted at ({x}, {y})"));
                        }
                    }
                }
            }
            f
        })
        .collect();
    let mut c = Check::from_failures("adjoint pairs", CheckKind::Engine, ops.len(), &fails);
    c.detail = format!("{}; transpose to weight {literal_w}, Gram-weighted to weight {w_max}", c.detail);
    c
}

struct OracleReference<'a>(&'a Oracle);

impl Reference for OracleReference<'_> {
    fn action(&self, base: BaseOp, x: &Su3Label) -> Action {
        oracle_action(self.0, &base.op(), x)
    }
    fn norm_sq(&self, x: &Su3Label) -> BigRational {
        self.0.norm_sq(x)
    }
}

/// Tabulated coefficients, restricted factors and base norm against the oracle.
pub fn su3_printed_ledger(oracle: &Oracle, w_max: u32) -> Vec<DiscrepancyRecord> {
    let labels = enumerate_su3(w_max);
    let eps_labels = w_max.checked_sub(1).map(enumerate_su3).unwrap_or_default();
    let is_eps = |r: &DiscrepancyRecord| r.formula.starts_with(|c: char| "ghijklmn".contains(c));
    let reference = OracleReference(oracle);
    let mut out: Vec<_> = su3_formula_ledger(&reference, &labels, w_max)
        .into_iter()
        .filter(|r| !is_eps(r))
        .collect();
    let eps = su3_formula_ledger(&reference, &eps_labels, w_max.saturating_sub(1));
    out.extend(eps.into_iter().filter(is_eps));
    out.sort_by(|a, b| a.formula.cmp(&b.formula));
    let leading = |r: Restricted, x: &Su3Label| {
        let (i, j) = PAIRS[r.slot()];
        let op = InvariantOp::Bilinear([Factor::new(Species::A, false, i), Factor::new(Species::B, false, j)]);
        let t = x.bump(i, j, -1).expect("restricted link is positive");
        oracle_action(oracle, &op, x).get(&t).cloned().unwrap_or_else(BigRational::zero)
    };
    out.extend(restricted_ledger(leading, &labels));
    out
}

/// Full SU(3) validation at weight `w_max`. Derivation identities and random symmetry
/// samples run at `min(w_max, 5)`.
pub fn verify_su3(w_max: u32) -> Report {
    let oracle = Oracle::new();
    let small = w_max.min(5);
    let mismatches = validate_against_oracle(&oracle, w_max);
    let mut checks = vec![engine_check(&mismatches, w_max)];
    checks.push(check_norms(&oracle, w_max));
    checks.push(check_base_norm(&oracle, (w_max / 3).max(1)));
    checks.push(check_symmetry_closure(&oracle, small, 20, 7));
    checks.push(check_adjointness(w_max, small));
    checks.push(check_constraints(&oracle, w_max));
    let (orth, mut ledger) = check_orthogonality(&oracle, w_max);
    checks.push(orth);
    let (chain, recs) = check_norm_chain(&oracle, w_max);
    checks.push(chain);
    ledger.extend(recs);
    checks.push(check_factor_order(&oracle, w_max));
    checks.push(check_bracket(&oracle, small));
    let (ids, recs) = check_identities(&oracle, small);
    checks.extend(ids);
    ledger.extend(recs);
    ledger.extend(su3_printed_ledger(&oracle, w_max));
    Report::new(Group::Su3, w_max, checks, mismatches, ledger)
}

// ---------------------------------------------------------------------------
// SU(2)

fn su2_oracle_action(oracle: &Oracle, op: &InvariantOp, x: &Su2Label) -> Vec<(Su2Label, SqrtRational)> {
    let v = apply_su2_op(op, &oracle.state_su2(x));
    let s_x = oracle.state_su2(x).norm_sq();
    oracle
        .expand_su2(&v)
        .expect("SU(2) invariants preserve the singlet span")
        .into_iter()
        .map(|(t, c)| {
            let s_t = oracle.state_su2(&t).norm_sq();
            (t, normalized(&c, &s_t, &s_x))
        })
        .collect()
}

/// Every SU(2) closed form against the oracle on labels with `n1 + n2 + n3 <= n_max`.
pub fn validate_su2(oracle: &Oracle, n_max: u32) -> Vec<DiscrepancyRecord> {
    let labels = enumerate_su2(n_max);
    let mut out = Vec::new();
    for op in su2_catalog() {
        for x in &labels {
            let truth = su2_oracle_action(oracle, &op, x);
            let shipped: Vec<_> = act_su2(&op, x).unwrap().into_iter().map(|t| (t.target, t.coeff)).collect();
            if truth != shipped {
                out.push(DiscrepancyRecord {
                    formula: op.to_string(),
                    label: RecordLabel::Su2(*x),
                    printed: shipped.first().map(|t| t.1.clone()),
                    oracle: truth.first().map(|t| t.1.clone()).unwrap_or_else(SqrtRational::zero),
                    printed_ref: "shipped closed form".into(),
                    note: format!("shipped {shipped:?}, oracle {truth:?}"),
                });
            }
        }
    }
    out
}

pub fn check_su2_norms(oracle: &Oracle, n_max: u32) -> Check {
    let labels = enumerate_su2(n_max);
    let fails: Vec<_> = labels
        .iter()
        .filter(|x| norm_sq_su2(x) != oracle.state_su2(x).norm_sq())
        .map(|x| x.to_string())
        .collect();
    Check::from_failures("norms vs oracle", CheckKind::Engine, labels.len(), &fails)
}

/// Distinct labels are orthogonal, the total generators vanish and each leg carries
/// `j(j+1)` with `j = n/2`.
pub fn check_su2_states(oracle: &Oracle, n_max: u32) -> Check {
    let labels = enumerate_su2(n_max);
    let mut fails = Vec::new();
    for x in &labels {
        let v = oracle.state_su2(x);
        let vc = real_to_complex(&v);
        for a in 1..=3 {
            if !su2_gauss_total(a, &vc).is_zero() {
                fails.push(format!("{x}: E{a}"));
            }
        }
        for leg in 1..=3u8 {
            let n = i64::from(x.n()[usize::from(leg - 1)]);
            let c = Complex::new(frac(n * (n + 2), 4), BigRational::zero());
            if su2_casimir_leg(leg, &vc) != vc.scaled(&c) {
                fails.push(format!("{x}: Casimir on leg {leg}"));
            }
        }
        for y in &labels {
            if x < y && !v.inner(&oracle.state_su2(y)).is_zero() {
                fails.push(format!("<{x}|{y}>"));
            }
        }
    }
    Check::from_failures("orthogonality, Gauss law, Casimirs", CheckKind::Oracle, labels.len(), &fails)
}

/// The annihilation and hopping matrices are transposes of their partners.
pub fn check_su2_adjointness(n_max: u32) -> Check {
    let labels = enumerate_su2(n_max);
    let mut fails = Vec::new();
    let mut n = 0;
    for op in su2_catalog() {
        let (sign, adj) = su2_adjoint(&op);
        for x in &labels {
            for tr in act_su2(&op, x).unwrap() {
                if tr.target.weight() > n_max {
                    continue;
                }
                n += 1;
                let back = act_su2(&adj, &tr.target).unwrap();
                let expect = if sign < 0 { -tr.coeff.clone() } else { tr.coeff.clone() };
                if !back.iter().any(|b| b.target == *x && b.coeff == expect) {
                    fails.push(format!("{op} at ({x}, {})", tr.target));
                }
            }
        }
    }
    Check::from_failures("adjoint pairs", CheckKind::Engine, n, &fails)
}

/// Rows of the tabulated SU(2) closed forms against the oracle.
pub fn su2_printed_ledger(oracle: &Oracle, n_max: u32) -> Vec<DiscrepancyRecord> {
    let labels = enumerate_su2(n_max);
    let mut out = Vec::new();
    for op in su2_catalog() {
        let mut first = None;
        let (mut checked, mut failed) = (0, 0);
        for x in &labels {
            let Some(printed) = printed_table(&op, x) else { continue };
            let truth = su2_oracle_action(oracle, &op, x);
            let printed: Vec<_> = printed.into_iter().map(|t| (t.target, t.coeff)).collect();
            if printed.is_empty() && truth.is_empty() {
                continue;
            }
            checked += 1;
            if printed != truth {
                failed += 1;
                first.get_or_insert((*x, printed, truth));
            }
        }
        if let Some((x, printed, truth)) = first {
            out.push(DiscrepancyRecord {
                formula: op.to_string(),
                label: RecordLabel::Su2(x),
                printed: printed.first().map(|t| t.1.clone()),
                oracle: truth.first().map(|t| t.1.clone()).unwrap_or_else(SqrtRational::zero),
                printed_ref: format!("SU(2) table row for {op}, all signs positive, m read as n3"),
                note: format!(
                    "{failed} of {checked} nonzero rows up to n = {n_max} disagree; magnitudes \
                     agree, the sign is the product of the link orientations"
                ),
            });
        }
    }
    out
}

/// Full SU(2) validation on labels with `n1 + n2 + n3 <= n_max`.
pub fn verify_su2(n_max: u32) -> Report {
    let oracle = Oracle::new();
    let mismatches = validate_su2(&oracle, n_max);
    let pairs = su2_catalog().len() * enumerate_su2(n_max).len();
    let detail = match mismatches.first() {
        None => format!("{} operators, {pairs} (operator, label) pairs", su2_catalog().len()),
        Some(r) => format!("{} mismatches, first {} on {:?}", mismatches.len(), r.formula, r.label),
    };
    let checks = vec![
        Check::new("closed-form coefficients vs oracle", CheckKind::Engine, mismatches.is_empty(), detail),
        check_su2_norms(&oracle, n_max),
        check_su2_adjointness(n_max),
        check_su2_states(&oracle, n_max),
    ];
    let ledger = su2_printed_ledger(&oracle, n_max);
    Report::new(Group::Su2, n_max, checks, mismatches, ledger)
}

pub fn verify(group: Group, w_max: u32) -> Report {
    match group {
        Group::Su2 => verify_su2(w_max),
        Group::Su3 => verify_su3(w_max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cutoffs_pass() {
        let r = verify_su3(0);
        assert!(r.passed, "{}", r.render());
        let r = verify_su2(2);
        assert!(r.passed, "{}", r.render());
    }

    #[test]
    fn small_su3_run_has_expected_findings() {
        let r = verify_su3(3);
        assert!(r.passed, "{}", r.render());
        assert!(r.ledger.iter().any(|x| x.formula == "S(0,p)"));
        assert!(r.ledger.iter().any(|x| x.formula == "n1"));
    }

    #[test]
    fn su3_validation_examples() {
        let oracle = Oracle::new();
        assert!(validate_against_oracle(&oracle, 2).is_empty());
    }
}
