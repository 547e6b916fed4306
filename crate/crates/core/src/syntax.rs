//! Objects and structural morphism terms.
//!
//! Objects are binary trees over letters and the unit `I`. Morphism terms are
//! built from the structural primitives with composition and tensor. Both are
//! compared structurally: `p*(q*r)` and `(p*q)*r` are different objects.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error(
    "invalid letter name `{0}`: letters are identifiers starting with a lowercase ASCII letter"
)]
pub struct InvalidLetter(pub String);

/// A generator object. Letters are ordered lexicographically by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: &str) -> Result<Letter, InvalidLetter> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(Letter(Arc::from(name)))
        } else {
            Err(InvalidLetter(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Obj {
    Atom(Letter),
    Unit,
    Prod(Arc<Obj>, Arc<Obj>),
}

impl Obj {
    /// Builds an atom from a letter name.
    ///
    /// Panics if `name` is not a valid letter; use [`Letter::new`] for
    /// fallible construction.
    pub fn letter(name: &str) -> Obj {
        Obj::Atom(Letter::new(name).expect("valid letter name"))
    }

    pub fn prod(left: Obj, right: Obj) -> Obj {
        Obj::Prod(Arc::new(left), Arc::new(right))
    }

    /// Left-associated product of `n` copies of `a`; `None` when `n == 0`.
    pub fn power(a: &Obj, n: usize) -> Option<Obj> {
        let mut acc = if n == 0 { return None } else { a.clone() };
        for _ in 1..n {
            acc = Obj::prod(acc, a.clone());
        }
        Some(acc)
    }

    pub fn is_atom(&self) -> bool {
        !matches!(self, Obj::Prod(..))
    }

    pub fn as_letter(&self) -> Option<&Letter> {
        match self {
            Obj::Atom(l) => Some(l),
            _ => None,
        }
    }

    /// Letters of the object in left-to-right order; units are skipped.
    pub fn letter_occurrences(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Vec<Letter>) {
        match self {
            Obj::Atom(l) => out.push(l.clone()),
            Obj::Unit => {}
            Obj::Prod(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
        }
    }

    /// Number of letter occurrences, `G(A)`.
    pub fn occurrence_count(&self) -> usize {
        match self {
            Obj::Atom(_) => 1,
            Obj::Unit => 0,
            Obj::Prod(a, b) => a.occurrence_count() + b.occurrence_count(),
        }
    }

    pub fn is_diversified(&self) -> bool {
        let mut letters = self.letter_occurrences();
        let n = letters.len();
        letters.sort();
        letters.dedup();
        letters.len() == n
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Obj::Prod(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Replaces the letter occurrence at zero-based `index` with `with`.
    /// Returns `None` when the index is out of range.
    pub fn replace_occurrence(&self, index: usize, with: &Obj) -> Option<Obj> {
        if index >= self.occurrence_count() {
            return None;
        }
        Some(self.replace_occurrence_unchecked(index, with))
    }

    fn replace_occurrence_unchecked(&self, index: usize, with: &Obj) -> Obj {
        match self {
            Obj::Atom(_) => with.clone(),
            Obj::Unit => unreachable!("units carry no occurrences"),
            Obj::Prod(a, b) => {
                let na = a.occurrence_count();
                if index < na {
                    Obj::prod(a.replace_occurrence_unchecked(index, with), (**b).clone())
                } else {
                    Obj::prod(
                        (**a).clone(),
                        b.replace_occurrence_unchecked(index - na, with),
                    )
                }
            }
        }
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Atom(l) => write!(f, "{l}"),
            Obj::Unit => f.write_str("I"),
            Obj::Prod(a, b) => write!(f, "({a}*{b})"),
        }
    }
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A structural morphism term.
///
/// `Comp(g, f)` is `g` after `f`; `BAssoc(A,B,C)` is `A*(B*C) -> (A*B)*C` and
/// `BAssocInv` its converse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum MorTerm {
    Id(Obj),
    Sigma(Obj),
    SigmaInv(Obj),
    Delta(Obj),
    DeltaInv(Obj),
    BAssoc(Obj, Obj, Obj),
    BAssocInv(Obj, Obj, Obj),
    C(Obj, Obj),
    W(Obj),
    K(Obj),
    Comp(Box<MorTerm>, Box<MorTerm>),
    Tensor(Box<MorTerm>, Box<MorTerm>),
}

impl MorTerm {
    pub fn comp(after: MorTerm, before: MorTerm) -> MorTerm {
        MorTerm::Comp(Box::new(after), Box::new(before))
    }

    pub fn tensor(left: MorTerm, right: MorTerm) -> MorTerm {
        MorTerm::Tensor(Box::new(left), Box::new(right))
    }

    /// Right-nested composite of `terms` given in written order (the last
    /// element is applied first). `None` on an empty sequence.
    pub fn compose_all<I>(terms: I) -> Option<MorTerm>
    where
        I: IntoIterator<Item = MorTerm>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = terms.into_iter().rev();
        let mut acc = it.next()?;
        for t in it {
            acc = MorTerm::comp(t, acc);
        }
        Some(acc)
    }

    /// The middle-interchange `(A*B)*(C*D) -> (A*C)*(B*D)`, expanded into its
    /// defining composite of associators and one symmetry.
    pub fn c_m(a: &Obj, b: &Obj, c: &Obj, d: &Obj) -> MorTerm {
        let bd = Obj::prod(b.clone(), d.clone());
        let cd = Obj::prod(c.clone(), d.clone());
        let inner = MorTerm::compose_all([
            MorTerm::BAssocInv(c.clone(), b.clone(), d.clone()),
            MorTerm::tensor(MorTerm::C(b.clone(), c.clone()), MorTerm::Id(d.clone())),
            MorTerm::BAssoc(b.clone(), c.clone(), d.clone()),
        ])
        .expect("nonempty");
        MorTerm::compose_all([
            MorTerm::BAssoc(a.clone(), c.clone(), bd),
            MorTerm::tensor(MorTerm::Id(a.clone()), inner),
            MorTerm::BAssocInv(a.clone(), b.clone(), cd),
        ])
        .expect("nonempty")
    }

    pub fn is_primitive(&self) -> bool {
        !matches!(self, MorTerm::Comp(..) | MorTerm::Tensor(..))
    }

    /// Number of primitive leaves, identities included.
    pub fn primitive_count(&self) -> usize {
        match self {
            MorTerm::Comp(a, b) | MorTerm::Tensor(a, b) => {
                a.primitive_count() + b.primitive_count()
            }
            _ => 1,
        }
    }

    /// Short name of a primitive, as used in the concrete syntax.
    pub fn primitive_name(&self) -> Option<&'static str> {
        Some(match self {
            MorTerm::Id(_) => "id",
            MorTerm::Sigma(_) => "sigma",
            MorTerm::SigmaInv(_) => "sigma_i",
            MorTerm::Delta(_) => "delta",
            MorTerm::DeltaInv(_) => "delta_i",
            MorTerm::BAssoc(..) => "b",
            MorTerm::BAssocInv(..) => "b_i",
            MorTerm::C(..) => "c",
            MorTerm::W(_) => "w",
            MorTerm::K(_) => "k",
            MorTerm::Comp(..) | MorTerm::Tensor(..) => return None,
        })
    }

    /// Object parameters of a primitive, in domain occurrence order.
    pub fn primitive_params(&self) -> Vec<&Obj> {
        match self {
            MorTerm::Id(a)
            | MorTerm::Sigma(a)
            | MorTerm::SigmaInv(a)
            | MorTerm::Delta(a)
            | MorTerm::DeltaInv(a)
            | MorTerm::W(a)
            | MorTerm::K(a) => vec![a],
            MorTerm::BAssoc(a, b, c) | MorTerm::BAssocInv(a, b, c) => vec![a, b, c],
            MorTerm::C(a, b) => vec![a, b],
            MorTerm::Comp(..) | MorTerm::Tensor(..) => vec![],
        }
    }

    /// Rebuilds a primitive with new parameters (same arity as
    /// [`MorTerm::primitive_params`]).
    pub fn with_params(&self, params: &[Obj]) -> MorTerm {
        let p = |i: usize| params[i].clone();
        match self {
            MorTerm::Id(_) => MorTerm::Id(p(0)),
            MorTerm::Sigma(_) => MorTerm::Sigma(p(0)),
            MorTerm::SigmaInv(_) => MorTerm::SigmaInv(p(0)),
            MorTerm::Delta(_) => MorTerm::Delta(p(0)),
            MorTerm::DeltaInv(_) => MorTerm::DeltaInv(p(0)),
            MorTerm::W(_) => MorTerm::W(p(0)),
            MorTerm::K(_) => MorTerm::K(p(0)),
            MorTerm::BAssoc(..) => MorTerm::BAssoc(p(0), p(1), p(2)),
            MorTerm::BAssocInv(..) => MorTerm::BAssocInv(p(0), p(1), p(2)),
            MorTerm::C(..) => MorTerm::C(p(0), p(1)),
            MorTerm::Comp(..) | MorTerm::Tensor(..) => panic!("with_params on a non-primitive"),
        }
    }

    /// Visits every primitive leaf, left to right.
    pub fn for_each_primitive<'a>(&'a self, visit: &mut impl FnMut(&'a MorTerm)) {
        match self {
            MorTerm::Comp(a, b) | MorTerm::Tensor(a, b) => {
                a.for_each_primitive(visit);
                b.for_each_primitive(visit);
            }
            prim => visit(prim),
        }
    }
}

impl fmt::Display for MorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorTerm::Comp(g, h) => write!(f, "({g} . {h})"),
            MorTerm::Tensor(a, b) => write!(f, "({a} * {b})"),
            prim => {
                let name = prim.primitive_name().expect("primitive");
                write!(f, "{name}(")?;
                for (i, p) in prim.primitive_params().into_iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for MorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
