//! The twelve-element symmetry group: leg permutations combined with the a <-> b flip.
//!
//! A leg permutation relabels the oscillators, so it maps `eps(a+1,a+2,a+3)` to
//! `sign(perm)` times itself; labels pick up `sign(perm)^|p|`. The flip exchanges the two
//! species, transposes every link and negates `p`, with no sign.

use crate::basis::{pair_slot, Su3Label, PAIRS};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// legs 1 -> 2 -> 3 -> 1
    Cycle,
    /// a <-> b, l_ij <-> l_ji, p -> -p
    Flip,
    /// legs 1 <-> 2
    Swap,
}

pub const GENERATORS: [Generator; 3] = [Generator::Cycle, Generator::Flip, Generator::Swap];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymElement {
    /// `perm[i-1]` is the image of leg `i`.
    pub perm: [u8; 3],
    pub flip: bool,
}

impl SymElement {
    pub const IDENTITY: SymElement = SymElement { perm: [1, 2, 3], flip: false };

    pub fn generator(g: Generator) -> SymElement {
        match g {
            Generator::Cycle => SymElement { perm: [2, 3, 1], flip: false },
            Generator::Flip => SymElement { perm: [1, 2, 3], flip: true },
            Generator::Swap => SymElement { perm: [2, 1, 3], flip: false },
        }
    }

    /// Word letters act left to right: the first letter is applied first.
    pub fn from_word(word: &[Generator]) -> SymElement {
        word.iter()
            .fold(SymElement::IDENTITY, |acc, &g| SymElement::generator(g).after(&acc))
    }

    pub fn perm_leg(&self, leg: u8) -> u8 {
        self.perm[usize::from(leg - 1)]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &SymElement) -> SymElement {
        let perm = other.perm.map(|x| self.perm_leg(x));
        SymElement { perm, flip: self.flip ^ other.flip }
    }

    pub fn inverse(&self) -> SymElement {
        let mut perm = [0u8; 3];
        for i in 0..3u8 {
            perm[usize::from(self.perm[usize::from(i)] - 1)] = i + 1;
        }
        SymElement { perm, flip: self.flip }
    }

    pub fn perm_sign(&self) -> i8 {
        let p = self.perm;
        let mut s = 1;
        for i in 0..3 {
            for j in i + 1..3 {
                if p[i] > p[j] {
                    s = -s;
                }
            }
        }
        s
    }

    /// `U_g |l> = sign |g l>` on unnormalized states.
    pub fn act_label(&self, x: &Su3Label) -> (Su3Label, i8) {
        let mut out = [0u32; 6];
        for (k, &(i, j)) in PAIRS.iter().enumerate() {
            let (mut a, mut b) = (self.perm_leg(i), self.perm_leg(j));
            if self.flip {
                std::mem::swap(&mut a, &mut b);
            }
            out[pair_slot(a, b)] = x.links()[k];
        }
        let p = if self.flip { -x.p } else { x.p };
        let sign = if self.perm_sign() < 0 && x.abs_p() % 2 == 1 { -1 } else { 1 };
        (Su3Label::from_parts(out, p), sign)
    }

    /// All group elements with a shortest generator word, in breadth-first order.
    pub fn words() -> Vec<(SymElement, Vec<Generator>)> {
        let mut out = vec![(SymElement::IDENTITY, Vec::new())];
        let mut at = 0;
        while at < out.len() {
            let (g, w) = out[at].clone();
            for gen in GENERATORS {
                let h = SymElement::generator(gen).after(&g);
                if !out.iter().any(|(x, _)| *x == h) {
                    let mut w2 = w.clone();
                    w2.push(gen);
                    out.push((h, w2));
                }
            }
            at += 1;
        }
        out
    }
}

/// Sparse action on unnormalized labels: target label with rational coefficient.
pub type Action = BTreeMap<Su3Label, BigRational>;

pub fn add_into(acc: &mut Action, label: Su3Label, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(label).or_insert_with(BigRational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&label);
    }
}

/// Action of `g(B) = U_g B U_g^dagger` given the action of `B`.
pub fn image_action(base: impl Fn(&Su3Label) -> Action, g: &SymElement, x: &Su3Label) -> Action {
    let (m, _) = g.inverse().act_label(x);
    let (_, s_m) = g.act_label(&m);
    let mut out = Action::new();
    for (t, c) in base(&m) {
        let (gt, s_t) = g.act_label(&t);
        let c = if s_m * s_t < 0 { -c } else { c };
        add_into(&mut out, gt, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::enumerate_su3;

    #[test]
    fn group_has_twelve_elements() {
        assert_eq!(SymElement::words().len(), 12);
    }

    #[test]
    fn orders_of_generators() {
        let c = SymElement::generator(Generator::Cycle);
        let f = SymElement::generator(Generator::Flip);
        assert_eq!(c.after(&c).after(&c), SymElement::IDENTITY);
        assert_eq!(f.after(&f), SymElement::IDENTITY);
        for x in enumerate_su3(5) {
            let (y, _) = c.act_label(&x);
            let (y, _) = c.act_label(&y);
            let (y, _) = c.act_label(&y);
            assert_eq!(y, x);
            let (z, s) = f.act_label(&f.act_label(&x).0);
            assert_eq!((z, s), (x, 1));
        }
    }

    #[test]
    fn cycle_relabels_links() {
        let c = SymElement::generator(Generator::Cycle);
        let x = Su3Label::from_parts([1, 0, 0, 0, 0, 0], 0);
        assert_eq!(c.act_label(&x).0, Su3Label::from_parts([0, 0, 0, 0, 1, 0], 0));
        let s = SymElement::generator(Generator::Swap);
        assert_eq!(s.act_label(&Su3Label::from_parts([0; 6], 1)).1, -1);
    }
}
