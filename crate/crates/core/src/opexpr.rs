//! Operator syntax: parsing, printing and reduction to a catalog base plus a symmetry word.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr      := bilinear | trilinear | "N(" leg ")"
//! bilinear  := factor "." factor
//! trilinear := "eps(" factor "," factor "," factor ")"
//! factor    := ("a" | "b") ["+"] "(" leg ")"
//! ```
//!
//! `N(i)` is shorthand for `a+(i).a(i)`.

use crate::basis::Group;
use crate::symmetry::{Generator, SymElement};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Species {
    A,
    B,
}

impl Species {
    pub fn other(self) -> Species {
        match self {
            Species::A => Species::B,
            Species::B => Species::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Species::A => 0,
            Species::B => 1,
        }
    }
}

/// One Schwinger-boson factor with a free color index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub species: Species,
    pub dagger: bool,
    pub leg: u8,
}

impl Factor {
    pub const fn new(species: Species, dagger: bool, leg: u8) -> Self {
        Factor { species, dagger, leg }
    }

    /// Transforms as a triplet (`a+`, `b`) rather than an antitriplet (`a`, `b+`).
    pub fn is_triplet(&self) -> bool {
        matches!((self.species, self.dagger), (Species::A, true) | (Species::B, false))
    }

    pub fn adjoint(&self) -> Factor {
        Factor { dagger: !self.dagger, ..*self }
    }

    fn sort_key(&self) -> (u8, Species, bool) {
        (self.leg, self.species, self.dagger)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.species {
            Species::A => "a",
            Species::B => "b",
        };
        let d = if self.dagger { "+" } else { "" };
        write!(f, "{s}{d}({})", self.leg)
    }
}

/// A single color-contracted monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantOp {
    Bilinear([Factor; 2]),
    TrilinearEps([Factor; 3]),
}

impl InvariantOp {
    pub fn factors(&self) -> &[Factor] {
        match self {
            InvariantOp::Bilinear(f) => f,
            InvariantOp::TrilinearEps(f) => f,
        }
    }

    /// Hermitian conjugate, returned as `(sign, op)` with `op^dagger = sign * op'`.
    pub fn adjoint(&self) -> (i8, InvariantOp) {
        match self {
            InvariantOp::Bilinear([x, y]) => (1, InvariantOp::Bilinear([y.adjoint(), x.adjoint()])),
            // eps_{abc} X_a Y_b Z_c  ->  eps_{abc} Z+_c Y+_b X+_a = -eps(Z+, Y+, X+)
            InvariantOp::TrilinearEps([x, y, z]) => {
                (-1, InvariantOp::TrilinearEps([z.adjoint(), y.adjoint(), x.adjoint()]))
            }
        }
    }

    /// Relabel legs and (optionally) swap species factor by factor.
    pub fn image(&self, g: &SymElement) -> InvariantOp {
        let map = |f: &Factor| Factor {
            species: if g.flip { f.species.other() } else { f.species },
            dagger: f.dagger,
            leg: g.perm_leg(f.leg),
        };
        match self {
            InvariantOp::Bilinear(fs) => InvariantOp::Bilinear([map(&fs[0]), map(&fs[1])]),
            InvariantOp::TrilinearEps(fs) => {
                InvariantOp::TrilinearEps([map(&fs[0]), map(&fs[1]), map(&fs[2])])
            }
        }
    }

    /// Reorder commuting factors into a normal form; returns `(sign, normal form)`.
    /// Factors on the same leg never swap.
    pub fn normal_form(&self) -> (i8, InvariantOp) {
        match self {
            InvariantOp::Bilinear([x, y]) => {
                if x.leg != y.leg && y.sort_key() < x.sort_key() {
                    (1, InvariantOp::Bilinear([*y, *x]))
                } else {
                    (1, *self)
                }
            }
            InvariantOp::TrilinearEps(fs) => {
                let mut v = *fs;
                let mut sign = 1i8;
                // insertion sort by leg only; stable, so same-leg order is kept
                for i in 1..3 {
                    let mut j = i;
                    while j > 0 && v[j - 1].leg > v[j].leg {
                        v.swap(j - 1, j);
                        sign = -sign;
                        j -= 1;
                    }
                }
                (sign, InvariantOp::TrilinearEps(v))
            }
        }
    }

    /// True for `a+(i).a(i)`-type number operators and the same-leg null pairs.
    pub fn is_same_leg_bilinear(&self) -> bool {
        matches!(self, InvariantOp::Bilinear([x, y]) if x.leg == y.leg)
    }
}

impl fmt::Display for InvariantOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantOp::Bilinear([x, y]) => write!(f, "{x}.{y}"),
            InvariantOp::TrilinearEps([x, y, z]) => write!(f, "eps({x},{y},{z})"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OpError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("leg '{leg}' at position {pos} is out of range (expected 1, 2 or 3)")]
    InvalidLeg { pos: usize, leg: String },
    #[error("'{0}' is not an invariant operator of the recognized shapes: {1}")]
    Shape(String, String),
    #[error("'{0}' is outside the closed-form catalog; use the oracle path (--via-oracle)")]
    CatalogMiss(String),
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, at: 0, src }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map(|x| x.0).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|x| x.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, OpError> {
        Err(OpError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), OpError> {
        match self.peek() {
            Some(x) if x == c => {
                self.at += 1;
                Ok(())
            }
            Some(x) => self.err(format!("expected '{c}', found '{x}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn leg(&mut self) -> Result<u8, OpError> {
        let pos = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c == ')' || c == ',' {
                break;
            }
            s.push(c);
            self.at += 1;
        }
        match s.as_str() {
            "1" => Ok(1),
            "2" => Ok(2),
            "3" => Ok(3),
            "" => Err(OpError::Syntax { pos, msg: "expected a leg".into() }),
            _ => Err(OpError::InvalidLeg { pos, leg: s }),
        }
    }

    fn factor(&mut self) -> Result<Factor, OpError> {
        let species = match self.peek() {
            Some('a') => Species::A,
            Some('b') => Species::B,
            Some(x) => return self.err(format!("expected 'a' or 'b', found '{x}'")),
            None => return self.err("expected 'a' or 'b', found end of input"),
        };
        self.at += 1;
        let dagger = self.peek() == Some('+');
        if dagger {
            self.at += 1;
        }
        self.expect('(')?;
        let leg = self.leg()?;
        self.expect(')')?;
        Ok(Factor { species, dagger, leg })
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let n = kw.chars().count();
        let matches = self.chars.len() >= self.at + n
            && self.chars[self.at..self.at + n].iter().map(|x| x.1).eq(kw.chars());
        if matches {
            self.at += n;
        }
        matches
    }

    fn expr(&mut self) -> Result<InvariantOp, OpError> {
        let op = if self.keyword("eps(") {
            let x = self.factor()?;
            self.expect(',')?;
            let y = self.factor()?;
            self.expect(',')?;
            let z = self.factor()?;
            self.expect(')')?;
            InvariantOp::TrilinearEps([x, y, z])
        } else if self.keyword("N(") {
            let leg = self.leg()?;
            self.expect(')')?;
            InvariantOp::Bilinear([Factor::new(Species::A, true, leg), Factor::new(Species::A, false, leg)])
        } else {
            let x = self.factor()?;
            self.expect('.')?;
            let y = self.factor()?;
            InvariantOp::Bilinear([x, y])
        };
        if let Some(c) = self.peek() {
            return self.err(format!("unexpected trailing '{c}'"));
        }
        Ok(op)
    }
}

/// Parse and validate an operator for the given group.
pub fn parse(text: &str, group: Group) -> Result<InvariantOp, OpError> {
    let op = Parser::new(text).expr()?;
    validate_shape(&op, group).map_err(|why| OpError::Shape(text.trim().to_string(), why))?;
    Ok(op)
}

fn validate_shape(op: &InvariantOp, group: Group) -> Result<(), String> {
    match group {
        Group::Su2 => {
            if op.factors().iter().any(|f| f.species == Species::B) {
                return Err("SU(2) has a single species 'a'".into());
            }
            match op {
                InvariantOp::TrilinearEps(_) => Err("SU(2) invariants are bilinear".into()),
                InvariantOp::Bilinear([x, y]) => {
                    if x.leg == y.leg && !(x.dagger && !y.dagger) {
                        Err("same-leg SU(2) bilinears must be number operators a+(i).a(i)".into())
                    } else {
                        Ok(())
                    }
                }
            }
        }
        Group::Su3 => match op {
            InvariantOp::Bilinear([x, y]) => {
                if x.is_triplet() == y.is_triplet() {
                    Err("a bilinear needs one of {a+, b} and one of {a, b+}".into())
                } else {
                    Ok(())
                }
            }
            InvariantOp::TrilinearEps(fs) => {
                let t = fs[0].is_triplet();
                if fs.iter().any(|f| f.is_triplet() != t) {
                    Err("eps needs three factors from {a+, b} or three from {a, b+}".into())
                } else {
                    Ok(())
                }
            }
        },
    }
}

/// Operators whose action has a closed form; every catalog operator is a symmetry image of one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseOp {
    /// `a+(1).b+(2)`
    C,
    /// `a+(1).a(2)`
    D,
    /// `b+(1).b(2)`
    E,
    /// `a(1).b(2)`
    F,
    /// `eps(a+(3),b(2),a+(2))`
    GH,
    /// `eps(b(3),b(2),a+(2))`
    IJ,
    /// `eps(a(3),a(2),b+(2))`
    KL,
    /// `eps(a+(1),a+(2),a+(3))`
    MN,
    /// `eps(a(3),a(2),a(1))`, composed from `F` and `KL`
    AAA,
    /// `a+(1).a(1)`
    NumA,
    /// `b+(1).b(1)`
    NumB,
    /// `a+(1).b+(1)`, zero on physical states
    NullCre,
    /// `a(1).b(1)`, zero on physical states
    NullAnn,
}

pub const BASES: [BaseOp; 13] = [
    BaseOp::C,
    BaseOp::D,
    BaseOp::E,
    BaseOp::F,
    BaseOp::GH,
    BaseOp::IJ,
    BaseOp::KL,
    BaseOp::MN,
    BaseOp::AAA,
    BaseOp::NumA,
    BaseOp::NumB,
    BaseOp::NullCre,
    BaseOp::NullAnn,
];

impl BaseOp {
    pub fn op(self) -> InvariantOp {
        use Species::{A, B};
        let f = Factor::new;
        match self {
            BaseOp::C => InvariantOp::Bilinear([f(A, true, 1), f(B, true, 2)]),
            BaseOp::D => InvariantOp::Bilinear([f(A, true, 1), f(A, false, 2)]),
            BaseOp::E => InvariantOp::Bilinear([f(B, true, 1), f(B, false, 2)]),
            BaseOp::F => InvariantOp::Bilinear([f(A, false, 1), f(B, false, 2)]),
            BaseOp::GH => InvariantOp::TrilinearEps([f(A, true, 3), f(B, false, 2), f(A, true, 2)]),
            BaseOp::IJ => InvariantOp::TrilinearEps([f(B, false, 3), f(B, false, 2), f(A, true, 2)]),
            BaseOp::KL => InvariantOp::TrilinearEps([f(A, false, 3), f(A, false, 2), f(B, true, 2)]),
            BaseOp::MN => InvariantOp::TrilinearEps([f(A, true, 1), f(A, true, 2), f(A, true, 3)]),
            BaseOp::AAA => InvariantOp::TrilinearEps([f(A, false, 3), f(A, false, 2), f(A, false, 1)]),
            BaseOp::NumA => InvariantOp::Bilinear([f(A, true, 1), f(A, false, 1)]),
            BaseOp::NumB => InvariantOp::Bilinear([f(B, true, 1), f(B, false, 1)]),
            BaseOp::NullCre => InvariantOp::Bilinear([f(A, true, 1), f(B, true, 1)]),
            BaseOp::NullAnn => InvariantOp::Bilinear([f(A, false, 1), f(B, false, 1)]),
        }
    }

    /// Coefficient family letters whose closed forms describe this base.
    pub fn family(self) -> &'static str {
        match self {
            BaseOp::C => "c",
            BaseOp::D => "d",
            BaseOp::E => "e",
            BaseOp::F => "f",
            BaseOp::GH => "g/h",
            BaseOp::IJ => "i/j",
            BaseOp::KL => "k/l",
            BaseOp::MN => "m/n",
            BaseOp::AAA => "aaa",
            BaseOp::NumA => "number",
            BaseOp::NumB => "number",
            BaseOp::NullCre | BaseOp::NullAnn => "null",
        }
    }
}

/// `op = sign * g(base)` where `g` is the group element spelled by `word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub base: BaseOp,
    pub word: Vec<Generator>,
    pub sign: i8,
}

impl CanonicalForm {
    pub fn element(&self) -> SymElement {
        SymElement::from_word(&self.word)
    }
}

/// Reduce an SU(3) operator to a catalog base and the shortest symmetry word reaching it.
///
/// Words are tried shortest first in a fixed order; for each word the bases are tried in
/// [`BASES`] order and the first match wins.
pub fn canonicalize(op: &InvariantOp) -> Result<CanonicalForm, OpError> {
    let (s_in, target) = op.normal_form();
    let mut best: Option<CanonicalForm> = None;
    for (g, word) in SymElement::words() {
        if best.as_ref().is_some_and(|b| b.word.len() <= word.len()) {
            break;
        }
        for base in BASES {
            let (s_img, img) = base.op().image(&g).normal_form();
            if img == target {
                best = Some(CanonicalForm { base, word: word.clone(), sign: s_in * s_img });
                break;
            }
        }
    }
    best.ok_or_else(|| OpError::CatalogMiss(op.to_string()))
}

/// Every operator reachable from the bases, in printed form of the symmetry images.
pub fn catalog() -> Vec<InvariantOp> {
    let mut out: Vec<InvariantOp> = Vec::new();
    for base in BASES {
        for (g, _) in SymElement::words() {
            let img = base.op().image(&g);
            if !out.iter().any(|x| x.normal_form().1 == img.normal_form().1) {
                out.push(img);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let op = parse("a+(1).b+(2)", Group::Su3).unwrap();
        assert_eq!(op, BaseOp::C.op());
        let op = parse(" eps( a+(3), b(2) ,a+(2))", Group::Su3).unwrap();
        assert_eq!(op, BaseOp::GH.op());
        assert!(matches!(parse("a+(4).b(2)", Group::Su3), Err(OpError::InvalidLeg { .. })));
        assert!(matches!(parse("a+(1).b(2)", Group::Su3), Err(OpError::Shape(..))));
        assert!(matches!(parse("a+(1).b+", Group::Su3), Err(OpError::Syntax { .. })));
        assert!(matches!(parse("a+(1).b+(2) x", Group::Su3), Err(OpError::Syntax { .. })));
        assert!(matches!(parse("b+(1).a(2)", Group::Su2), Err(OpError::Shape(..))));
        assert_eq!(parse("N(2)", Group::Su2).unwrap().to_string(), "a+(2).a(2)");
    }

    #[test]
    fn canonical_examples() {
        let c = canonicalize(&parse("b+(2).b(3)", Group::Su3).unwrap()).unwrap();
        assert_eq!((c.base, c.word.as_slice(), c.sign), (BaseOp::E, &[Generator::Cycle][..], 1));
        let c = canonicalize(&parse("a(1).b(2)", Group::Su3).unwrap()).unwrap();
        assert_eq!((c.base, c.word.len()), (BaseOp::F, 0));
        let c = canonicalize(&parse("eps(b(1),b(3),a+(3))", Group::Su3).unwrap()).unwrap();
        assert_eq!((c.base, c.word.as_slice(), c.sign), (BaseOp::IJ, &[Generator::Cycle][..], 1));
    }

    #[test]
    fn out_of_catalog() {
        let op = parse("eps(a+(1),b(2),a+(3))", Group::Su3).unwrap();
        assert!(matches!(canonicalize(&op), Err(OpError::CatalogMiss(_))));
        let op = parse("a(1).a+(1)", Group::Su3).unwrap();
        assert!(matches!(canonicalize(&op), Err(OpError::CatalogMiss(_))));
    }

    #[test]
    fn adjoint_of_epsilon_creation() {
        let (s, adj) = BaseOp::MN.op().adjoint();
        let c = canonicalize(&adj).unwrap();
        // (eps a+1 a+2 a+3)^dagger = -eps(a3,a2,a1)
        assert_eq!((s, c.base, c.word.len(), c.sign), (-1, BaseOp::AAA, 0, 1));
    }
}
