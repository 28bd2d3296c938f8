//! Brute-force oscillator Fock space: the ground truth for every closed form in this crate.
//!
//! States use the unnormalized number basis `prod (a+)^n |0>`, so amplitudes stay rational and
//! the inner product carries a factor `n!` per mode.

use crate::basis::{enumerate_su3, labels_with_content, Su2Label, Su3Label};
use crate::opexpr::{Factor, InvariantOp, Species};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

pub const MODES: usize = 18;
pub type Occupation = [u8; MODES];

/// Complex amplitudes, needed only for the Gauss generators.
pub type Gaussian = Complex<BigRational>;

pub trait Amplitude:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + From<BigRational>
    + Send
    + Sync
    + std::fmt::Debug
{
}

impl<T> Amplitude for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + From<BigRational>
        + Send
        + Sync
        + std::fmt::Debug
{
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Oscillator mode. SU(3) uses both species and three colors; SU(2) uses species `A` and colors 1, 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mode {
    pub leg: u8,
    pub species: Species,
    pub color: u8,
}

impl Mode {
    pub fn su3(leg: u8, species: Species, color: u8) -> Mode {
        Mode { leg, species, color }
    }

    pub fn index(&self) -> usize {
        usize::from(self.leg - 1) * 6 + self.species.index() * 3 + usize::from(self.color - 1)
    }

    /// Index in the six-mode SU(2) layout.
    pub fn su2_index(leg: u8, color: u8) -> usize {
        usize::from(leg - 1) * 2 + usize::from(color - 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<A = BigRational> {
    terms: HashMap<Occupation, A>,
}

impl<A: Amplitude> Default for FockVector<A> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<A: Amplitude> FockVector<A> {
    pub fn zero() -> Self {
        FockVector { terms: HashMap::new() }
    }

    pub fn vacuum() -> Self {
        let mut v = Self::zero();
        v.terms.insert([0; MODES], A::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &A)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &Occupation) -> A {
        self.terms.get(occ).cloned().unwrap_or_else(A::zero)
    }

    pub fn add_term(&mut self, occ: Occupation, c: A) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&occ) {
            Some(x) => {
                let y = x.clone() + c;
                if y.is_zero() {
                    self.terms.remove(&occ);
                } else {
                    *x = y;
                }
            }
            None => {
                self.terms.insert(occ, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &A) {
        if s.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone() * s.clone());
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_assign(other);
        v
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.add_scaled(other, &-A::one());
        v
    }

    pub fn scaled(&self, s: &A) -> Self {
        let mut v = Self::zero();
        v.add_scaled(self, s);
        v
    }

    /// Raw creation on mode index `m`.
    pub fn create(&self, m: usize) -> Self {
        let mut out = Self::zero();
        out.terms.reserve(self.terms.len());
        for (k, c) in &self.terms {
            let mut k2 = *k;
            k2[m] += 1;
            out.add_term(k2, c.clone());
        }
        out
    }

    /// Raw annihilation on mode index `m`; in the `(a+)^n` basis it brings down a factor `n`.
    pub fn annihilate(&self, m: usize) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let n = k[m];
            if n == 0 {
                continue;
            }
            let mut k2 = *k;
            k2[m] -= 1;
            out.add_term(k2, c.clone() * A::from(rat(i64::from(n))));
        }
        out
    }

    /// Multiply each component by a rational function of its occupation.
    pub fn map_diag(&self, f: impl Fn(&Occupation) -> BigRational) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, c.clone() * A::from(f(k)));
        }
        out
    }

    pub fn to_complex(&self) -> FockVector<Gaussian>
    where
        A: Into<Gaussian>,
    {
        let mut out = FockVector::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, c.clone().into());
        }
        out
    }

    /// Total quanta, if all components agree.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|k| k.iter().map(|&x| u32::from(x)).sum::<u32>());
        let w = it.next()?;
        it.all(|x| x == w).then_some(w)
    }
}

fn factorial_weight(k: &Occupation) -> BigInt {
    let mut f = BigInt::one();
    for &n in k {
        for i in 2..=u32::from(n) {
            f *= i;
        }
    }
    f
}

impl FockVector<BigRational> {
    /// Fock inner product (real amplitudes).
    pub fn inner(&self, other: &Self) -> BigRational {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut s = BigRational::zero();
        for (k, c) in &small.terms {
            if let Some(d) = large.terms.get(k) {
                s += c * d * BigRational::from_integer(factorial_weight(k));
            }
        }
        s
    }

    pub fn norm_sq(&self) -> BigRational {
        self.inner(self)
    }

    /// Per-leg `(n, m)` counts, if all components agree.
    pub fn su3_content(&self) -> Option<[(u32, u32); 3]> {
        let f = |k: &Occupation| {
            let mut c = [(0u32, 0u32); 3];
            for (leg, x) in c.iter_mut().enumerate() {
                x.0 = k[leg * 6..leg * 6 + 3].iter().map(|&v| u32::from(v)).sum();
                x.1 = k[leg * 6 + 3..leg * 6 + 6].iter().map(|&v| u32::from(v)).sum();
            }
            c
        };
        let mut it = self.terms.keys().map(f);
        let c = it.next()?;
        it.all(|x| x == c).then_some(c)
    }
}

/// Total quanta on one SU(3) leg.
pub fn leg_count(k: &Occupation, leg: u8) -> i64 {
    let base = usize::from(leg - 1) * 6;
    k[base..base + 6].iter().map(|&v| i64::from(v)).sum()
}

// ---------------------------------------------------------------------------
// SU(3): Sp(2,R) and irreducible Schwinger bosons

fn idx(leg: u8, sp: Species, color: u8) -> usize {
    Mode::su3(leg, sp, color).index()
}

/// `k+ = a+ . b+` on one leg (raw oscillators).
pub fn k_plus<A: Amplitude>(v: &FockVector<A>, leg: u8) -> FockVector<A> {
    let mut out = FockVector::zero();
    for c in 1..=3 {
        out.add_assign(&v.create(idx(leg, Species::B, c)).create(idx(leg, Species::A, c)));
    }
    out
}

/// `k- = a . b` on one leg (raw oscillators).
pub fn k_minus<A: Amplitude>(v: &FockVector<A>, leg: u8) -> FockVector<A> {
    let mut out = FockVector::zero();
    for c in 1..=3 {
        out.add_assign(&v.annihilate(idx(leg, Species::B, c)).annihilate(idx(leg, Species::A, c)));
    }
    out
}

/// `k0 = (n + m + 3) / 2` on one leg.
pub fn k_zero<A: Amplitude>(v: &FockVector<A>, leg: u8) -> FockVector<A> {
    v.map_diag(|k| frac(leg_count(k, leg) + 3, 2))
}

/// Irreducible creation `a+_c = abar+_c - (N+1)^{-1} k+ bbar_c`, the prefactor read off the
/// resulting component. The `b+` partner swaps species.
pub fn irr_create<A: Amplitude>(v: &FockVector<A>, leg: u8, sp: Species, color: u8) -> FockVector<A> {
    let direct = v.create(idx(leg, sp, color));
    let corr = k_plus(&v.annihilate(idx(leg, sp.other(), color)), leg)
        .map_diag(|k| frac(1, leg_count(k, leg) + 1));
    direct.minus(&corr)
}

/// Adjoint of [`irr_create`]: `abar_c - bbar+_c k- (N+1)^{-1}`.
pub fn irr_annihilate<A: Amplitude>(
    v: &FockVector<A>,
    leg: u8,
    sp: Species,
    color: u8,
) -> FockVector<A> {
    let direct = v.annihilate(idx(leg, sp, color));
    let w = v.map_diag(|k| frac(1, leg_count(k, leg) + 1));
    let corr = k_minus(&w, leg).create(idx(leg, sp.other(), color));
    direct.minus(&corr)
}

pub fn apply_irreducible<A: Amplitude>(v: &FockVector<A>, f: &Factor, color: u8) -> FockVector<A> {
    if f.dagger {
        irr_create(v, f.leg, f.species, color)
    } else {
        irr_annihilate(v, f.leg, f.species, color)
    }
}

/// Even and odd permutations of the three colors with their signs.
pub const EPS: [([u8; 3], i64); 6] = [
    ([1, 2, 3], 1),
    ([2, 3, 1], 1),
    ([3, 1, 2], 1),
    ([1, 3, 2], -1),
    ([3, 2, 1], -1),
    ([2, 1, 3], -1),
];

/// Apply a contracted SU(3) monomial, rightmost factor first.
pub fn apply_su3_op<A: Amplitude>(op: &InvariantOp, v: &FockVector<A>) -> FockVector<A> {
    let mut out = FockVector::zero();
    match op {
        InvariantOp::Bilinear(fs) => {
            for c in 1..=3 {
                let mut w = v.clone();
                for f in fs.iter().rev() {
                    w = apply_irreducible(&w, f, c);
                }
                out.add_assign(&w);
            }
        }
        InvariantOp::TrilinearEps(fs) => {
            for (cols, s) in EPS {
                let mut w = v.clone();
                for (f, c) in fs.iter().zip(cols).rev() {
                    w = apply_irreducible(&w, f, c);
                }
                out.add_scaled(&w, &A::from(rat(s)));
            }
        }
    }
    out
}

fn bilinear_cc(v: &FockVector, i: u8, j: u8) -> FockVector {
    let op = InvariantOp::Bilinear([Factor::new(Species::A, true, i), Factor::new(Species::B, true, j)]);
    apply_su3_op(&op, v)
}

fn eps_create(v: &FockVector, sp: Species) -> FockVector {
    let op = InvariantOp::TrilinearEps([
        Factor::new(sp, true, 1),
        Factor::new(sp, true, 2),
        Factor::new(sp, true, 3),
    ]);
    apply_su3_op(&op, v)
}

/// Unnormalized `|l,p>_u`: the epsilon power acts first, then the bilinears as written
/// (rightmost `l32` first, `l12` last).
pub fn build_su3(x: &Su3Label) -> FockVector {
    build_su3_ordered(x, &[5, 4, 3, 2, 1, 0])
}

/// As [`build_su3`] but applying the bilinear slots in the given order.
pub fn build_su3_ordered(x: &Su3Label, slots: &[usize; 6]) -> FockVector {
    let mut v = FockVector::vacuum();
    let sp = if x.p >= 0 { Species::A } else { Species::B };
    for _ in 0..x.abs_p() {
        v = eps_create(&v, sp);
    }
    let l = x.links();
    for &k in slots {
        let (i, j) = crate::basis::PAIRS[k];
        for _ in 0..l[k] {
            v = bilinear_cc(&v, i, j);
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Gauss generators

/// Nonzero Gell-Mann entries `(row, col, re, im)`, colors 0-based. The eighth matrix is
/// scaled by sqrt(3) to stay rational: diag(1, 1, -2).
fn gell_mann(a: u8) -> Vec<(u8, u8, i64, i64)> {
    match a {
        1 => vec![(0, 1, 1, 0), (1, 0, 1, 0)],
        2 => vec![(0, 1, 0, -1), (1, 0, 0, 1)],
        3 => vec![(0, 0, 1, 0), (1, 1, -1, 0)],
        4 => vec![(0, 2, 1, 0), (2, 0, 1, 0)],
        5 => vec![(0, 2, 0, -1), (2, 0, 0, 1)],
        6 => vec![(1, 2, 1, 0), (2, 1, 1, 0)],
        7 => vec![(1, 2, 0, -1), (2, 1, 0, 1)],
        8 => vec![(0, 0, 1, 0), (1, 1, 1, 0), (2, 2, -2, 0)],
        _ => panic!("generator index {a} out of range 1..=8"),
    }
}

fn gauss_entry(re: i64, im: i64) -> Gaussian {
    Complex::new(frac(re, 2), frac(im, 2))
}

/// `E^a` on one leg built from raw oscillators: `a+ (lambda/2) a - b+ (lambda*/2) b`.
/// For `a = 8` this is `sqrt(3) E^8`.
pub fn gauss_leg(a: u8, leg: u8, v: &FockVector<Gaussian>) -> FockVector<Gaussian> {
    let mut out = FockVector::zero();
    for (r, c, re, im) in gell_mann(a) {
        let ta = v.annihilate(idx(leg, Species::A, c + 1)).create(idx(leg, Species::A, r + 1));
        out.add_scaled(&ta, &gauss_entry(re, im));
        let tb = v.annihilate(idx(leg, Species::B, c + 1)).create(idx(leg, Species::B, r + 1));
        out.add_scaled(&tb, &-gauss_entry(re, -im));
    }
    out
}

/// Total generator summed over the three legs.
pub fn gauss_total(a: u8, v: &FockVector<Gaussian>) -> FockVector<Gaussian> {
    let mut out = FockVector::zero();
    for leg in 1..=3 {
        out.add_assign(&gauss_leg(a, leg, v));
    }
    out
}

/// Quadratic Casimir `sum_a E^a E^a` on one leg.
pub fn casimir_leg(leg: u8, v: &FockVector<Gaussian>) -> FockVector<Gaussian> {
    let mut out = FockVector::zero();
    for a in 1..=7 {
        out.add_assign(&gauss_leg(a, leg, &gauss_leg(a, leg, v)));
    }
    let e8 = gauss_leg(8, leg, &gauss_leg(8, leg, v));
    out.add_scaled(&e8, &Complex::new(frac(1, 3), BigRational::zero()));
    out
}

// ---------------------------------------------------------------------------
// SU(2): six raw modes, a+_{i,c}

fn su2_op_factor(v: &FockVector, leg: u8, dagger: bool, tilde: bool, color: u8) -> FockVector {
    // tilde x_{c} = eps_{c d} x_d: tilde x_1 = x_2, tilde x_2 = -x_1
    let (c, s) = match (tilde, color) {
        (false, c) => (c, 1),
        (true, 1) => (2, 1),
        (true, _) => (1, -1),
    };
    let m = Mode::su2_index(leg, c);
    let w = if dagger { v.create(m) } else { v.annihilate(m) };
    if s < 0 {
        w.scaled(&rat(-1))
    } else {
        w
    }
}

/// Apply an SU(2) bilinear. Two daggers or two annihilators contract through the tilde on the
/// second factor; mixed pairs contract directly.
pub fn apply_su2_op(op: &InvariantOp, v: &FockVector) -> FockVector {
    let InvariantOp::Bilinear([x, y]) = op else {
        panic!("SU(2) operators are bilinear");
    };
    let tilde = x.dagger == y.dagger;
    let mut out = FockVector::zero();
    for c in 1..=2 {
        let w = su2_op_factor(v, y.leg, y.dagger, tilde, c);
        let w = su2_op_factor(&w, x.leg, x.dagger, false, c);
        out.add_assign(&w);
    }
    out
}

fn su2_pair(v: &FockVector, i: u8, j: u8) -> FockVector {
    let op = InvariantOp::Bilinear([Factor::new(Species::A, true, i), Factor::new(Species::A, true, j)]);
    apply_su2_op(&op, v)
}

/// Unnormalized SU(2) singlet `(1.2)^l12 (2.3)^l23 (3.1)^l31 |0>`.
pub fn build_su2(x: &Su2Label) -> FockVector {
    let mut v = FockVector::vacuum();
    for _ in 0..x.l31 {
        v = su2_pair(&v, 3, 1);
    }
    for _ in 0..x.l23 {
        v = su2_pair(&v, 2, 3);
    }
    for _ in 0..x.l12 {
        v = su2_pair(&v, 1, 2);
    }
    v
}

/// SU(2) generator `a+ (sigma^a / 2) a` on one leg; `a = 1, 2, 3`.
pub fn su2_gauss_leg(a: u8, leg: u8, v: &FockVector<Gaussian>) -> FockVector<Gaussian> {
    let entries: &[(u8, u8, i64, i64)] = match a {
        1 => &[(1, 2, 1, 0), (2, 1, 1, 0)],
        2 => &[(1, 2, 0, -1), (2, 1, 0, 1)],
        3 => &[(1, 1, 1, 0), (2, 2, -1, 0)],
        _ => panic!("SU(2) generator index {a} out of range 1..=3"),
    };
    let mut out = FockVector::zero();
    for &(r, c, re, im) in entries {
        let t = v.annihilate(Mode::su2_index(leg, c)).create(Mode::su2_index(leg, r));
        out.add_scaled(&t, &gauss_entry(re, im));
    }
    out
}

pub fn su2_gauss_total(a: u8, v: &FockVector<Gaussian>) -> FockVector<Gaussian> {
    let mut out = FockVector::zero();
    for leg in 1..=3 {
        out.add_assign(&su2_gauss_leg(a, leg, v));
    }
    out
}

pub fn su2_casimir_leg(leg: u8, v: &FockVector<Gaussian>) -> FockVector<Gaussian> {
    let mut out = FockVector::zero();
    for a in 1..=3 {
        out.add_assign(&su2_gauss_leg(a, leg, &su2_gauss_leg(a, leg, v)));
    }
    out
}

pub fn real_to_complex(v: &FockVector) -> FockVector<Gaussian> {
    let mut out = FockVector::zero();
    for (k, c) in v.iter() {
        out.add_term(*k, Complex::new(c.clone(), BigRational::zero()));
    }
    out
}

// ---------------------------------------------------------------------------
// Caching oracle with basis expansion

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("vector mixes components of different leg content")]
    MixedContent,
    #[error("vector is not in the span of the singlet basis (residual has {0} components)")]
    NotInSpan(usize),
    #[error("singular Gram matrix for content {0}")]
    Singular(String),
}

/// Memoizing front end over [`build_su3`] and [`build_su2`].
#[derive(Default)]
pub struct Oracle {
    su3: RwLock<HashMap<Su3Label, Arc<FockVector>>>,
    su2: RwLock<HashMap<Su2Label, Arc<FockVector>>>,
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(&self, x: &Su3Label) -> Arc<FockVector> {
        if let Some(v) = self.su3.read().unwrap().get(x) {
            return v.clone();
        }
        let v = Arc::new(build_su3(x));
        self.su3.write().unwrap().insert(*x, v.clone());
        v
    }

    pub fn state_su2(&self, x: &Su2Label) -> Arc<FockVector> {
        if let Some(v) = self.su2.read().unwrap().get(x) {
            return v.clone();
        }
        let v = Arc::new(build_su2(x));
        self.su2.write().unwrap().insert(*x, v.clone());
        v
    }

    pub fn norm_sq(&self, x: &Su3Label) -> BigRational {
        self.state(x).norm_sq()
    }

    pub fn gram(&self, x: &Su3Label, y: &Su3Label) -> BigRational {
        if x.content() != y.content() {
            return BigRational::zero();
        }
        self.state(x).inner(&self.state(y))
    }

    /// Unique coefficients `c_t` with `v = sum_t c_t |t>_u`, checked by an exact residual.
    pub fn expand_su3(&self, v: &FockVector) -> Result<Vec<(Su3Label, BigRational)>, OracleError> {
        if v.is_zero() {
            return Ok(Vec::new());
        }
        let content = v.su3_content().ok_or(OracleError::MixedContent)?;
        let w = v.weight().ok_or(OracleError::MixedContent)?;
        let cands = labels_with_content(w, content);
        let states: Vec<_> = cands.iter().map(|x| self.state(x)).collect();
        let n = cands.len();
        let mut g = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let x = states[i].inner(&states[j]);
                g[j][i] = x.clone();
                g[i][j] = x;
            }
        }
        let b: Vec<_> = states.iter().map(|s| s.inner(v)).collect();
        let c = solve(g, b).ok_or_else(|| OracleError::Singular(format!("{content:?}")))?;
        let mut r = v.clone();
        for (s, ci) in states.iter().zip(&c) {
            r.add_scaled(s, &-ci.clone());
        }
        if !r.is_zero() {
            return Err(OracleError::NotInSpan(r.len()));
        }
        Ok(cands.into_iter().zip(c).filter(|(_, ci)| !ci.is_zero()).collect())
    }

    /// SU(2) expansion; the basis is orthogonal so each coefficient is a single projection.
    pub fn expand_su2(&self, v: &FockVector) -> Result<Vec<(Su2Label, BigRational)>, OracleError> {
        if v.is_zero() {
            return Ok(Vec::new());
        }
        let mut n = [0u32; 3];
        let k = v.iter().next().unwrap().0;
        for (leg, x) in n.iter_mut().enumerate() {
            *x = u32::from(k[leg * 2]) + u32::from(k[leg * 2 + 1]);
        }
        let Some(t) = Su2Label::from_n(n) else {
            return Err(OracleError::NotInSpan(v.len()));
        };
        let s = self.state_su2(&t);
        let c = s.inner(v) / s.norm_sq();
        let r = v.minus(&s.scaled(&c));
        if !r.is_zero() {
            return Err(OracleError::NotInSpan(r.len()));
        }
        Ok(if c.is_zero() { Vec::new() } else { vec![(t, c)] })
    }

    /// Every SU(3) label up to `w_max`, built eagerly (useful before a parallel sweep).
    pub fn warm(&self, w_max: u32) {
        use rayon::prelude::*;
        let missing: Vec<_> = enumerate_su3(w_max)
            .into_iter()
            .filter(|x| !self.su3.read().unwrap().contains_key(x))
            .collect();
        let built: Vec<_> = missing.par_iter().map(|x| (*x, Arc::new(build_su3(x)))).collect();
        self.su3.write().unwrap().extend(built);
    }
}

/// Exact Gauss-Jordan solve of `g c = b`.
pub fn solve(mut g: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !g[r][col].is_zero())?;
        g.swap(col, piv);
        b.swap(col, piv);
        let inv = BigRational::one() / g[col][col].clone();
        let pivot = g[col].clone();
        for r in 0..n {
            if r != col && !g[r][col].is_zero() {
                let f = &g[r][col] * &inv;
                for (x, y) in g[r][col..].iter_mut().zip(&pivot[col..]) {
                    *x -= &f * y;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &g[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        frac(n, d)
    }

    #[test]
    fn raw_oscillator_conventions() {
        let v: FockVector = FockVector::vacuum();
        let m = Mode::su3(1, Species::A, 1).index();
        let one = v.create(m);
        assert_eq!(one.len(), 1);
        assert!(v.annihilate(m).is_zero());
        assert_eq!(one.create(m).norm_sq(), q(2, 1));
        assert_eq!(v.norm_sq(), q(1, 1));
    }

    #[test]
    fn k_zero_on_vacuum() {
        let v: FockVector = FockVector::vacuum();
        assert_eq!(k_zero(&v, 1), v.scaled(&q(3, 2)));
        assert!(k_minus(&v, 2).is_zero());
    }

    #[test]
    fn irreducible_creation_on_vacuum_is_raw() {
        let v: FockVector = FockVector::vacuum();
        let m = Mode::su3(1, Species::A, 2).index();
        assert_eq!(irr_create(&v, 1, Species::A, 2), v.create(m));
    }

    #[test]
    fn single_link_state() {
        let x = Su3Label::from_parts([1, 0, 0, 0, 0, 0], 0);
        let v = build_su3(&x);
        let mut raw = FockVector::zero();
        for c in 1..=3 {
            let vac: FockVector = FockVector::vacuum();
            raw.add_assign(&vac.create(idx(2, Species::B, c)).create(idx(1, Species::A, c)));
        }
        assert_eq!(v, raw);
        assert_eq!(v.norm_sq(), q(3, 1));
    }

    #[test]
    fn pure_baryon_state() {
        let v = build_su3(&Su3Label::from_parts([0; 6], 1));
        assert_eq!(v.len(), 6);
        assert_eq!(v.norm_sq(), q(6, 1));
    }

    #[test]
    fn casimir_of_fundamental() {
        let v = real_to_complex(&build_su3(&Su3Label::from_parts([1, 0, 0, 0, 0, 0], 0)));
        let c = casimir_leg(1, &v);
        assert_eq!(c, v.scaled(&Complex::new(q(4, 3), BigRational::zero())));
    }

    #[test]
    fn su2_norms() {
        assert_eq!(build_su2(&Su2Label::new(1, 0, 0)).norm_sq(), q(2, 1));
        assert_eq!(build_su2(&Su2Label::new(1, 1, 1)).norm_sq(), q(24, 1));
    }

    #[test]
    fn gauss_solve() {
        let g = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let c = solve(g, vec![q(3, 1), q(4, 1)]).unwrap();
        assert_eq!(c, vec![q(1, 1), q(1, 1)]);
    }
}
