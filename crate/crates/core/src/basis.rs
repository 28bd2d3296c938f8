//! Singlet basis labels for SU(2) and SU(3) and their derived quantum numbers.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Gauge group of the three coupled irreps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Su2,
    Su3,
}

impl std::str::FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "su2" => Ok(Group::Su2),
            "su3" => Ok(Group::Su3),
            _ => Err(format!("unknown group '{s}', expected su2 or su3")),
        }
    }
}

/// SU(2) singlet label: linking numbers between the three legs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Su2Label {
    pub l12: u32,
    pub l23: u32,
    pub l31: u32,
}

impl Su2Label {
    pub const fn new(l12: u32, l23: u32, l31: u32) -> Self {
        Su2Label { l12, l23, l31 }
    }

    /// Oscillator counts per leg, `n_i = 2 j_i`.
    pub fn n(&self) -> [u32; 3] {
        [self.l12 + self.l31, self.l12 + self.l23, self.l23 + self.l31]
    }

    pub fn total_links(&self) -> u32 {
        self.l12 + self.l23 + self.l31
    }

    pub fn weight(&self) -> u32 {
        2 * self.total_links()
    }

    /// Inverse of [`Su2Label::n`]; `None` unless the triple satisfies parity and the triangle rule.
    pub fn from_n(n: [u32; 3]) -> Option<Self> {
        let [n1, n2, n3] = n.map(i64::from);
        let s = n1 + n2 + n3;
        if s % 2 != 0 {
            return None;
        }
        let l12 = (n1 + n2 - n3) / 2;
        let l23 = (n2 + n3 - n1) / 2;
        let l31 = (n3 + n1 - n2) / 2;
        if l12 < 0 || l23 < 0 || l31 < 0 {
            return None;
        }
        Some(Su2Label::new(l12 as u32, l23 as u32, l31 as u32))
    }

    /// Linking number between two distinct legs (unordered).
    pub fn link(&self, i: u8, j: u8) -> u32 {
        match su2_slot(i, j) {
            0 => self.l12,
            1 => self.l23,
            _ => self.l31,
        }
    }

    /// Shift the link between legs `i` and `j`; `None` if it would go negative.
    pub fn shifted(&self, i: u8, j: u8, delta: i64) -> Option<Self> {
        let mut v = [self.l12, self.l23, self.l31];
        let k = su2_slot(i, j);
        let x = i64::from(v[k]) + delta;
        if x < 0 {
            return None;
        }
        v[k] = x as u32;
        Some(Su2Label::new(v[0], v[1], v[2]))
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.weight(), self.l12, self.l23, self.l31)
    }
}

fn su2_slot(i: u8, j: u8) -> usize {
    match (i.min(j), i.max(j)) {
        (1, 2) => 0,
        (2, 3) => 1,
        (1, 3) => 2,
        _ => panic!("legs {i},{j} do not form a link"),
    }
}

impl Ord for Su2Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Su2Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Su2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.l12, self.l23, self.l31)
    }
}

/// Ordered leg pairs in the canonical slot order of an SU(3) label.
pub const PAIRS: [(u8, u8); 6] = [(1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

/// Slot of the ordered pair `(i, j)` in [`PAIRS`].
pub fn pair_slot(i: u8, j: u8) -> usize {
    match (i, j) {
        (1, 2) => 0,
        (2, 1) => 1,
        (1, 3) => 2,
        (3, 1) => 3,
        (2, 3) => 4,
        (3, 2) => 5,
        _ => panic!("({i},{j}) is not an ordered pair of distinct legs"),
    }
}

/// SU(3) singlet label: six directed linking numbers and the signed baryon count `p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Su3Label {
    pub l12: u32,
    pub l21: u32,
    pub l13: u32,
    pub l31: u32,
    pub l23: u32,
    pub l32: u32,
    pub p: i32,
}

/// Per-leg counts derived from an SU(3) label. Signed so formulas can subtract freely.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub n: [i64; 3],
    pub m: [i64; 3],
    /// `N_i = n_i + m_i + |p|`.
    pub big_n: [i64; 3],
    pub abs_p: i64,
}

impl Su3Label {
    pub const fn vacuum() -> Self {
        Su3Label { l12: 0, l21: 0, l13: 0, l31: 0, l23: 0, l32: 0, p: 0 }
    }

    /// Build from links in [`PAIRS`] order.
    pub const fn from_parts(l: [u32; 6], p: i32) -> Self {
        Su3Label { l12: l[0], l21: l[1], l13: l[2], l31: l[3], l23: l[4], l32: l[5], p }
    }

    pub fn links(&self) -> [u32; 6] {
        [self.l12, self.l21, self.l13, self.l31, self.l23, self.l32]
    }

    pub fn link(&self, i: u8, j: u8) -> u32 {
        self.links()[pair_slot(i, j)]
    }

    pub fn abs_p(&self) -> u32 {
        self.p.unsigned_abs()
    }

    pub fn total_links(&self) -> u32 {
        self.links().iter().sum()
    }

    pub fn weight(&self) -> u32 {
        2 * self.total_links() + 3 * self.abs_p()
    }

    pub fn is_pure_p(&self) -> bool {
        self.total_links() == 0
    }

    pub fn counts(&self) -> Counts {
        let l = self.links().map(i64::from);
        let [l12, l21, l13, l31, l23, l32] = l;
        let n = [l12 + l13, l21 + l23, l31 + l32];
        let m = [l21 + l31, l12 + l32, l13 + l23];
        let abs_p = i64::from(self.abs_p());
        let big_n = [n[0] + m[0] + abs_p, n[1] + m[1] + abs_p, n[2] + m[2] + abs_p];
        Counts { n, m, big_n, abs_p }
    }

    /// Irrep `(p_i, q_i)` carried by leg `leg` (1-based).
    pub fn leg_irrep(&self, leg: u8) -> (u32, u32) {
        assert!((1..=3).contains(&leg), "leg {leg} out of range");
        let mut p_i = 0;
        let mut q_i = 0;
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let v = self.links()[k];
            if i == leg {
                p_i += v;
            }
            if j == leg {
                q_i += v;
            }
        }
        if self.p >= 0 {
            p_i += self.abs_p();
        } else {
            q_i += self.abs_p();
        }
        (p_i, q_i)
    }

    /// The three leg irreps; two labels with equal content span the same weight space.
    pub fn content(&self) -> [(u32, u32); 3] {
        [self.leg_irrep(1), self.leg_irrep(2), self.leg_irrep(3)]
    }

    /// Apply integer shifts to the links (in [`PAIRS`] order) and to `p`.
    pub fn shifted(&self, dl: [i64; 6], dp: i32) -> Option<Self> {
        let mut out = [0u32; 6];
        for (k, v) in self.links().iter().enumerate() {
            let x = i64::from(*v) + dl[k];
            if x < 0 {
                return None;
            }
            out[k] = x as u32;
        }
        Some(Su3Label::from_parts(out, self.p + dp))
    }

    /// Shift a single directed link.
    pub fn bump(&self, i: u8, j: u8, delta: i64) -> Option<Self> {
        let mut dl = [0; 6];
        dl[pair_slot(i, j)] = delta;
        self.shifted(dl, 0)
    }

    fn key(&self) -> (u32, i32, [u32; 6]) {
        (self.weight(), self.p, self.links())
    }
}

impl Ord for Su3Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Su3Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Su3Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.links();
        write!(f, "|{},{},{},{},{},{};{}>", l[0], l[1], l[2], l[3], l[4], l[5], self.p)
    }
}

/// All SU(3) labels with weight `<= w_max`, in canonical order.
pub fn enumerate_su3(w_max: u32) -> Vec<Su3Label> {
    let mut out = Vec::new();
    let p_max = (w_max / 3) as i32;
    for p in -p_max..=p_max {
        let rest = w_max - 3 * p.unsigned_abs();
        let budget = rest / 2;
        push_compositions(budget, &mut |l| out.push(Su3Label::from_parts(l, p)));
    }
    out.sort();
    out
}

/// Labels of weight exactly `w` whose leg content equals `content`.
pub fn labels_with_content(w: u32, content: [(u32, u32); 3]) -> Vec<Su3Label> {
    enumerate_su3(w)
        .into_iter()
        .filter(|x| x.weight() == w && x.content() == content)
        .collect()
}

fn push_compositions(budget: u32, f: &mut impl FnMut([u32; 6])) {
    fn rec(k: usize, left: u32, cur: &mut [u32; 6], f: &mut impl FnMut([u32; 6])) {
        if k == 6 {
            f(*cur);
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            rec(k + 1, left - v, cur, f);
        }
        cur[k] = 0;
    }
    let mut cur = [0; 6];
    rec(0, budget, &mut cur, f);
}

/// All SU(2) labels with `n1 + n2 + n3 <= n_max`, in canonical order.
pub fn enumerate_su2(n_max: u32) -> Vec<Su2Label> {
    let budget = n_max / 2;
    let mut out = Vec::new();
    for a in 0..=budget {
        for b in 0..=budget - a {
            for c in 0..=budget - a - b {
                out.push(Su2Label::new(a, b, c));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su3_enumeration_small_cutoffs() {
        assert_eq!(enumerate_su3(0), vec![Su3Label::vacuum()]);
        let w2 = enumerate_su3(2);
        assert_eq!(w2.len(), 7);
        assert!(w2[1..].iter().all(|x| x.total_links() == 1 && x.p == 0));
        let w3 = enumerate_su3(3);
        assert_eq!(w3.len(), 9);
        assert_eq!(&w3[..7], &w2[..]);
        assert_eq!(w3[7], Su3Label::from_parts([0; 6], -1));
        assert_eq!(w3[8], Su3Label::from_parts([0; 6], 1));
    }

    #[test]
    fn leg_irreps() {
        assert_eq!(Su3Label::vacuum().leg_irrep(1), (0, 0));
        let x = Su3Label::from_parts([1, 0, 0, 0, 0, 0], 0);
        assert_eq!(x.leg_irrep(1), (1, 0));
        assert_eq!(x.leg_irrep(2), (0, 1));
        let y = Su3Label::from_parts([0; 6], 2);
        assert_eq!(y.leg_irrep(3), (2, 0));
        assert_eq!(Su3Label::from_parts([0; 6], -2).leg_irrep(3), (0, 2));
    }

    #[test]
    fn su2_enumeration() {
        assert_eq!(enumerate_su2(0), vec![Su2Label::default()]);
        assert_eq!(enumerate_su2(2).len(), 4);
        assert_eq!(enumerate_su2(3), enumerate_su2(2));
    }

    #[test]
    fn su2_n_roundtrip() {
        for x in enumerate_su2(10) {
            assert_eq!(Su2Label::from_n(x.n()), Some(x));
        }
        assert_eq!(Su2Label::from_n([1, 0, 0]), None);
        assert_eq!(Su2Label::from_n([3, 1, 0]), None);
    }

    #[test]
    fn serde_field_names() {
        let x = Su3Label::from_parts([1, 2, 3, 4, 5, 6], -1);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"l12":1,"l21":2,"l13":3,"l31":4,"l23":5,"l32":6,"p":-1}"#);
        let y: Su3Label = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
