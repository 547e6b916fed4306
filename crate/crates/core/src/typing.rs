//! Kinds of free category and type inference for structural terms.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{MorTerm, Obj};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Mon,
    SyMon,
    Rel,
    Aff,
    Cart,
}

impl Kind {
    pub const ALL: [Kind; 5] = [Kind::Mon, Kind::SyMon, Kind::Rel, Kind::Aff, Kind::Cart];

    /// The inclusion order: `Mon < SyMon < Rel < Cart` and `SyMon < Aff < Cart`.
    pub fn le(self, other: Kind) -> bool {
        use Kind::*;
        match (self, other) {
            (a, b) if a == b => true,
            (Mon, _) => true,
            (SyMon, _) => other != Mon,
            (Rel | Aff, Cart) => true,
            _ => false,
        }
    }

    pub fn has_symmetry(self) -> bool {
        self != Kind::Mon
    }

    pub fn has_diagonal(self) -> bool {
        matches!(self, Kind::Rel | Kind::Cart)
    }

    pub fn has_terminal(self) -> bool {
        matches!(self, Kind::Aff | Kind::Cart)
    }

    /// Whether a primitive is admitted. Compositions and tensors always are.
    pub fn admits_primitive(self, prim: &MorTerm) -> bool {
        match prim {
            MorTerm::C(..) => self.has_symmetry(),
            MorTerm::W(_) => self.has_diagonal(),
            MorTerm::K(_) => self.has_terminal(),
            _ => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Mon => "mon",
            Kind::SyMon => "symon",
            Kind::Rel => "rel",
            Kind::Aff => "aff",
            Kind::Cart => "cart",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown kind `{0}` (expected mon, symon, rel, aff or cart)")]
pub struct UnknownKind(pub String);

impl FromStr for Kind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Kind, UnknownKind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorType {
    pub dom: Obj,
    pub cod: Obj,
}

impl fmt::Display for MorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.dom, self.cod)
    }
}

/// Path to a subterm: child indices from the root. In `Comp(g, f)` the
/// later factor `g` is child 0; in `Tensor(f, g)` the left factor is child 0.
pub type TermPath = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("primitive `{primitive}` is not admitted in {kind} (at subterm {path:?})")]
    KindViolation {
        primitive: String,
        kind: Kind,
        path: TermPath,
    },
    #[error("cannot compose at subterm {path:?}: codomain {before_cod} of the first factor differs from domain {after_dom} of the second")]
    TypeMismatch {
        path: TermPath,
        before_cod: Obj,
        after_dom: Obj,
    },
}

/// Domain and codomain of a primitive; `None` for composites.
pub fn primitive_type(prim: &MorTerm) -> Option<MorType> {
    let t = |dom: Obj, cod: Obj| Some(MorType { dom, cod });
    let pr = |a: &Obj, b: &Obj| Obj::prod(a.clone(), b.clone());
    match prim {
        MorTerm::Id(a) => t(a.clone(), a.clone()),
        MorTerm::Sigma(a) => t(pr(&Obj::Unit, a), a.clone()),
        MorTerm::SigmaInv(a) => t(a.clone(), pr(&Obj::Unit, a)),
        MorTerm::Delta(a) => t(pr(a, &Obj::Unit), a.clone()),
        MorTerm::DeltaInv(a) => t(a.clone(), pr(a, &Obj::Unit)),
        MorTerm::BAssoc(a, b, c) => t(pr(a, &pr(b, c)), pr(&pr(a, b), c)),
        MorTerm::BAssocInv(a, b, c) => t(pr(&pr(a, b), c), pr(a, &pr(b, c))),
        MorTerm::C(a, b) => t(pr(a, b), pr(b, a)),
        MorTerm::W(a) => t(a.clone(), pr(a, a)),
        MorTerm::K(a) => t(a.clone(), Obj::Unit),
        MorTerm::Comp(..) | MorTerm::Tensor(..) => None,
    }
}

pub fn infer_type(f: &MorTerm, kind: Kind) -> Result<MorType, TypeError> {
    let mut path = Vec::new();
    infer_at(f, Some(kind), &mut path)
}

/// Type inference ignoring kind admissibility.
pub fn infer_type_any(f: &MorTerm) -> Result<MorType, TypeError> {
    let mut path = Vec::new();
    infer_at(f, None, &mut path)
}

fn infer_at(f: &MorTerm, kind: Option<Kind>, path: &mut TermPath) -> Result<MorType, TypeError> {
    match f {
        MorTerm::Comp(g, h) => {
            path.push(1);
            let th = infer_at(h, kind, path)?;
            path.pop();
            path.push(0);
            let tg = infer_at(g, kind, path)?;
            path.pop();
            if th.cod != tg.dom {
                return Err(TypeError::TypeMismatch {
                    path: path.clone(),
                    before_cod: th.cod,
                    after_dom: tg.dom,
                });
            }
            Ok(MorType {
                dom: th.dom,
                cod: tg.cod,
            })
        }
        MorTerm::Tensor(a, b) => {
            path.push(0);
            let ta = infer_at(a, kind, path)?;
            path.pop();
            path.push(1);
            let tb = infer_at(b, kind, path)?;
            path.pop();
            Ok(MorType {
                dom: Obj::prod(ta.dom, tb.dom),
                cod: Obj::prod(ta.cod, tb.cod),
            })
        }
        prim => {
            if let Some(kind) = kind {
                if !kind.admits_primitive(prim) {
                    return Err(TypeError::KindViolation {
                        primitive: prim.to_string(),
                        kind,
                        path: path.clone(),
                    });
                }
            }
            Ok(primitive_type(prim).expect("primitive"))
        }
    }
}

pub fn admits(kind: Kind, f: &MorTerm) -> bool {
    let mut ok = true;
    f.for_each_primitive(&mut |p| ok &= kind.admits_primitive(p));
    ok
}

/// The least kind admitting every primitive of `f`. Terms using both `w`
/// and `k` need `Cart`.
pub fn least_kind(f: &MorTerm) -> Kind {
    let (mut c, mut w, mut k) = (false, false, false);
    f.for_each_primitive(&mut |p| match p {
        MorTerm::C(..) => c = true,
        MorTerm::W(_) => w = true,
        MorTerm::K(_) => k = true,
        _ => {}
    });
    match (c, w, k) {
        (_, true, true) => Kind::Cart,
        (_, true, false) => Kind::Rel,
        (_, false, true) => Kind::Aff,
        (true, false, false) => Kind::SyMon,
        _ => Kind::Mon,
    }
}
