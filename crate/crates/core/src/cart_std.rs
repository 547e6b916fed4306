//! The standard cartesian language (projections, pairing, terminal arrows),
//! its translations to and from structural terms, distributed normal forms,
//! and an equality test by comparing projection paths.

use std::fmt;

use thiserror::Error;

use crate::graphs::{graph_of, Graph};
use crate::parse::{ParseError, Parser};
use crate::syntax::{MorTerm, Obj};
use crate::typing::{infer_type, Kind, MorType, TypeError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum StdTerm {
    Id(Obj),
    /// `A*B -> A`
    Proj1(Obj, Obj),
    /// `A*B -> B`
    Proj2(Obj, Obj),
    /// `A -> I`
    Terminal(Obj),
    Pair(Box<StdTerm>, Box<StdTerm>),
    Comp(Box<StdTerm>, Box<StdTerm>),
}

impl StdTerm {
    pub fn pair(f: StdTerm, g: StdTerm) -> StdTerm {
        StdTerm::Pair(Box::new(f), Box::new(g))
    }

    pub fn comp(after: StdTerm, before: StdTerm) -> StdTerm {
        StdTerm::Comp(Box::new(after), Box::new(before))
    }

    pub fn size(&self) -> usize {
        match self {
            StdTerm::Pair(a, b) | StdTerm::Comp(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for StdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StdTerm::Id(a) => write!(f, "id({a})"),
            StdTerm::Proj1(a, b) => write!(f, "p1({a},{b})"),
            StdTerm::Proj2(a, b) => write!(f, "p2({a},{b})"),
            StdTerm::Terminal(a) => write!(f, "bang({a})"),
            StdTerm::Pair(x, y) => write!(f, "pair({x},{y})"),
            StdTerm::Comp(x, y) => write!(f, "({x} . {y})"),
        }
    }
}

impl fmt::Debug for StdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StdError {
    #[error("cannot compose `{after}` after `{before}`: {before_cod} differs from {after_dom}")]
    CompositionMismatch {
        after: String,
        before: String,
        before_cod: Obj,
        after_dom: Obj,
    },
    #[error("cannot pair arrows with domains {left} and {right}")]
    PairMismatch { left: Obj, right: Obj },
    #[error("terms have different types: {left} versus {right}")]
    TypeMismatch { left: MorType, right: MorType },
    #[error(transparent)]
    Structural(#[from] TypeError),
}

pub fn std_type(t: &StdTerm) -> Result<MorType, StdError> {
    let ty = |dom: Obj, cod: Obj| Ok(MorType { dom, cod });
    match t {
        StdTerm::Id(a) => ty(a.clone(), a.clone()),
        StdTerm::Proj1(a, b) => ty(Obj::prod(a.clone(), b.clone()), a.clone()),
        StdTerm::Proj2(a, b) => ty(Obj::prod(a.clone(), b.clone()), b.clone()),
        StdTerm::Terminal(a) => ty(a.clone(), Obj::Unit),
        StdTerm::Pair(f, g) => {
            let (tf, tg) = (std_type(f)?, std_type(g)?);
            if tf.dom != tg.dom {
                return Err(StdError::PairMismatch {
                    left: tf.dom,
                    right: tg.dom,
                });
            }
            ty(tf.dom, Obj::prod(tf.cod, tg.cod))
        }
        StdTerm::Comp(g, f) => {
            let (tf, tg) = (std_type(f)?, std_type(g)?);
            if tf.cod != tg.dom {
                return Err(StdError::CompositionMismatch {
                    after: g.to_string(),
                    before: f.to_string(),
                    before_cod: tf.cod,
                    after_dom: tg.dom,
                });
            }
            ty(tf.dom, tg.cod)
        }
    }
}

pub fn parse_std(text: &str) -> Result<StdTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = std_term(&mut p)?;
    p.finish()?;
    Ok(t)
}

fn std_term(p: &mut Parser) -> Result<StdTerm, ParseError> {
    p.composite(&mut std_atom, None, &StdTerm::comp)
}

fn std_atom(p: &mut Parser) -> Result<StdTerm, ParseError> {
    if let Some(group) = p.paren_group(&mut std_term) {
        return group;
    }
    let (at, name) = p.ident("`id`, `p1`, `p2`, `bang`, `pair` or `(`")?;
    match name.as_str() {
        "pair" => {
            p.lparen("pair")?;
            let f = std_term(p)?;
            p.comma()?;
            let g = std_term(p)?;
            p.rparen()?;
            Ok(StdTerm::pair(f, g))
        }
        "id" | "bang" => {
            let a = p.obj_args(&name, 1)?.remove(0);
            Ok(if name == "id" {
                StdTerm::Id(a)
            } else {
                StdTerm::Terminal(a)
            })
        }
        "p1" | "p2" => {
            let mut args = p.obj_args(&name, 2)?.into_iter();
            let (a, b) = (args.next().expect("arity"), args.next().expect("arity"));
            Ok(if name == "p1" {
                StdTerm::Proj1(a, b)
            } else {
                StdTerm::Proj2(a, b)
            })
        }
        _ => Err(ParseError {
            position: at,
            message: format!("unknown standard primitive `{name}`"),
        }),
    }
}

fn p1(a: &Obj, b: &Obj) -> StdTerm {
    StdTerm::Proj1(a.clone(), b.clone())
}

fn p2(a: &Obj, b: &Obj) -> StdTerm {
    StdTerm::Proj2(a.clone(), b.clone())
}

/// Translation of a structural term into the standard language.
pub fn to_std(f: &MorTerm) -> Result<StdTerm, TypeError> {
    infer_type(f, Kind::Cart)?;
    Ok(to_std_unchecked(f))
}

fn to_std_unchecked(f: &MorTerm) -> StdTerm {
    let i = Obj::Unit;
    let pr = |a: &Obj, b: &Obj| Obj::prod(a.clone(), b.clone());
    let comp = StdTerm::comp;
    let pair = StdTerm::pair;
    match f {
        MorTerm::Id(a) => StdTerm::Id(a.clone()),
        MorTerm::Sigma(a) => p2(&i, a),
        MorTerm::SigmaInv(a) => pair(StdTerm::Terminal(a.clone()), StdTerm::Id(a.clone())),
        MorTerm::Delta(a) => p1(a, &i),
        MorTerm::DeltaInv(a) => pair(StdTerm::Id(a.clone()), StdTerm::Terminal(a.clone())),
        MorTerm::BAssoc(a, b, c) => {
            let bc = pr(b, c);
            pair(
                pair(p1(a, &bc), comp(p1(b, c), p2(a, &bc))),
                comp(p2(b, c), p2(a, &bc)),
            )
        }
        MorTerm::BAssocInv(a, b, c) => {
            let ab = pr(a, b);
            pair(
                comp(p1(a, b), p1(&ab, c)),
                pair(comp(p2(a, b), p1(&ab, c)), p2(&ab, c)),
            )
        }
        MorTerm::C(a, b) => pair(p2(a, b), p1(a, b)),
        MorTerm::W(a) => pair(StdTerm::Id(a.clone()), StdTerm::Id(a.clone())),
        MorTerm::K(a) => StdTerm::Terminal(a.clone()),
        MorTerm::Comp(g, h) => comp(to_std_unchecked(g), to_std_unchecked(h)),
        MorTerm::Tensor(x, y) => {
            let tx = crate::typing::infer_type_any(x).expect("well-typed");
            let ty = crate::typing::infer_type_any(y).expect("well-typed");
            pair(
                comp(to_std_unchecked(x), p1(&tx.dom, &ty.dom)),
                comp(to_std_unchecked(y), p2(&tx.dom, &ty.dom)),
            )
        }
    }
}

/// Translation of a standard term into the structural language.
pub fn from_std(t: &StdTerm) -> Result<MorTerm, StdError> {
    std_type(t)?;
    Ok(from_std_unchecked(t))
}

fn from_std_unchecked(t: &StdTerm) -> MorTerm {
    match t {
        StdTerm::Id(a) => MorTerm::Id(a.clone()),
        StdTerm::Proj1(a, b) => MorTerm::comp(
            MorTerm::Delta(a.clone()),
            MorTerm::tensor(MorTerm::Id(a.clone()), MorTerm::K(b.clone())),
        ),
        StdTerm::Proj2(a, b) => MorTerm::comp(
            MorTerm::Sigma(b.clone()),
            MorTerm::tensor(MorTerm::K(a.clone()), MorTerm::Id(b.clone())),
        ),
        StdTerm::Terminal(a) => MorTerm::K(a.clone()),
        StdTerm::Pair(f, g) => {
            let dom = std_type(f).expect("well-typed").dom;
            MorTerm::comp(
                MorTerm::tensor(from_std_unchecked(f), from_std_unchecked(g)),
                MorTerm::W(dom),
            )
        }
        StdTerm::Comp(g, f) => MorTerm::comp(from_std_unchecked(g), from_std_unchecked(f)),
    }
}

/// Graph of a standard term, through its structural translation.
pub fn std_graph(t: &StdTerm) -> Result<Graph, StdError> {
    Ok(graph_of(&from_std(t)?, Kind::Cart)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

/// A composite of identities, projections and terminal arrows. Any
/// composite through a terminal arrow is the terminal arrow on its domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Compat {
    /// Projections in written order (the last one is applied first);
    /// empty for the identity.
    Path {
        dom: Obj,
        steps: Vec<Side>,
    },
    Terminal(Obj),
}

impl Compat {
    pub fn dom(&self) -> &Obj {
        match self {
            Compat::Path { dom, .. } | Compat::Terminal(dom) => dom,
        }
    }

    pub fn cod(&self) -> Obj {
        match self {
            Compat::Terminal(_) => Obj::Unit,
            Compat::Path { dom, steps } => {
                let mut cur = dom.clone();
                for s in steps.iter().rev() {
                    cur = match (&cur, s) {
                        (Obj::Prod(a, _), Side::First) => (**a).clone(),
                        (Obj::Prod(_, b), Side::Second) => (**b).clone(),
                        _ => panic!("projection out of a non-product"),
                    };
                }
                cur
            }
        }
    }

    fn to_std(&self) -> StdTerm {
        match self {
            Compat::Terminal(a) => StdTerm::Terminal(a.clone()),
            Compat::Path { dom, steps } => {
                let mut cur = dom.clone();
                let mut acc = StdTerm::Id(dom.clone());
                for (n, s) in steps.iter().rev().enumerate() {
                    let Obj::Prod(a, b) = &cur else {
                        panic!("projection out of a non-product")
                    };
                    let (proj, next) = match s {
                        Side::First => (p1(a, b), (**a).clone()),
                        Side::Second => (p2(a, b), (**b).clone()),
                    };
                    acc = if n == 0 {
                        proj
                    } else {
                        StdTerm::comp(proj, acc)
                    };
                    cur = next;
                }
                acc
            }
        }
    }

    /// `self` after `before`, both compats.
    fn after(&self, before: &Compat) -> Compat {
        match (self, before) {
            (_, Compat::Terminal(d)) | (Compat::Terminal(_), Compat::Path { dom: d, .. }) => {
                Compat::Terminal(d.clone())
            }
            (Compat::Path { steps: s1, .. }, Compat::Path { dom, steps: s2 }) => Compat::Path {
                dom: dom.clone(),
                steps: s1.iter().chain(s2).copied().collect(),
            },
        }
    }
}

/// A term built from compats by pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Distributed {
    Compat(Compat),
    Pair(Box<Distributed>, Box<Distributed>),
}

impl Distributed {
    pub fn dom(&self) -> &Obj {
        match self {
            Distributed::Compat(c) => c.dom(),
            Distributed::Pair(f, _) => f.dom(),
        }
    }

    pub fn cod(&self) -> Obj {
        match self {
            Distributed::Compat(c) => c.cod(),
            Distributed::Pair(f, g) => Obj::prod(f.cod(), g.cod()),
        }
    }

    pub fn to_std(&self) -> StdTerm {
        match self {
            Distributed::Compat(c) => c.to_std(),
            Distributed::Pair(f, g) => StdTerm::pair(f.to_std(), g.to_std()),
        }
    }

    /// Every compat has a letter or `I` as codomain.
    pub fn is_atomic(&self) -> bool {
        match self {
            Distributed::Compat(c) => c.cod().is_atom(),
            Distributed::Pair(f, g) => f.is_atomic() && g.is_atomic(),
        }
    }
}

/// Pushes pairings outward so that only compats sit under them.
pub fn distribute(t: &StdTerm) -> Result<Distributed, StdError> {
    std_type(t)?;
    Ok(distribute_unchecked(t))
}

fn distribute_unchecked(t: &StdTerm) -> Distributed {
    let path = |dom: Obj, steps: Vec<Side>| Distributed::Compat(Compat::Path { dom, steps });
    match t {
        StdTerm::Id(a) => path(a.clone(), vec![]),
        StdTerm::Proj1(a, b) => path(Obj::prod(a.clone(), b.clone()), vec![Side::First]),
        StdTerm::Proj2(a, b) => path(Obj::prod(a.clone(), b.clone()), vec![Side::Second]),
        StdTerm::Terminal(a) => Distributed::Compat(Compat::Terminal(a.clone())),
        StdTerm::Pair(f, g) => Distributed::Pair(
            Box::new(distribute_unchecked(f)),
            Box::new(distribute_unchecked(g)),
        ),
        StdTerm::Comp(h, g) => compose(&distribute_unchecked(h), &distribute_unchecked(g)),
    }
}

/// `h` after `g` for distributed terms.
fn compose(h: &Distributed, g: &Distributed) -> Distributed {
    match (h, g) {
        (Distributed::Pair(j, l), _) => {
            Distributed::Pair(Box::new(compose(j, g)), Box::new(compose(l, g)))
        }
        (Distributed::Compat(h), Distributed::Compat(g)) => Distributed::Compat(h.after(g)),
        (Distributed::Compat(h), Distributed::Pair(j, l)) => match h {
            Compat::Terminal(_) => Distributed::Compat(Compat::Terminal(g.dom().clone())),
            Compat::Path { steps, .. } if steps.is_empty() => g.clone(),
            Compat::Path { dom, steps } => {
                let (last, rest) = steps.split_last().expect("nonempty");
                let Obj::Prod(a, b) = dom else {
                    panic!("projection out of a non-product")
                };
                let (inner, picked) = match last {
                    Side::First => ((**a).clone(), j),
                    Side::Second => ((**b).clone(), l),
                };
                compose(
                    &Distributed::Compat(Compat::Path {
                        dom: inner,
                        steps: rest.to_vec(),
                    }),
                    picked,
                )
            }
        },
    }
}

/// Splits every compat with a product codomain into a pair of projections
/// of it.
pub fn atomize(d: &Distributed) -> Distributed {
    match d {
        Distributed::Pair(f, g) => Distributed::Pair(Box::new(atomize(f)), Box::new(atomize(g))),
        Distributed::Compat(c) => match (c, c.cod()) {
            (Compat::Path { dom, steps }, Obj::Prod(..)) => {
                let side = |s: Side| {
                    let mut st = vec![s];
                    st.extend(steps.iter().copied());
                    atomize(&Distributed::Compat(Compat::Path {
                        dom: dom.clone(),
                        steps: st,
                    }))
                };
                Distributed::Pair(Box::new(side(Side::First)), Box::new(side(Side::Second)))
            }
            _ => d.clone(),
        },
    }
}

/// Equality of two standard terms of the same type. On a diversified domain
/// both sides are brought to atomic distributed form and compared
/// componentwise; otherwise their graphs are compared.
pub fn std_equal(f: &StdTerm, g: &StdTerm) -> Result<bool, StdError> {
    let (tf, tg) = (std_type(f)?, std_type(g)?);
    if tf != tg {
        return Err(StdError::TypeMismatch {
            left: tf,
            right: tg,
        });
    }
    if !tf.dom.is_diversified() {
        return Ok(std_graph(f)? == std_graph(g)?);
    }
    let (df, dg) = (
        atomize(&distribute_unchecked(f)),
        atomize(&distribute_unchecked(g)),
    );
    Ok(atomic_equal(&df, &dg, &tf.cod))
}

fn atomic_equal(f: &Distributed, g: &Distributed, cod: &Obj) -> bool {
    match (cod, f, g) {
        (Obj::Unit, _, _) => true,
        (Obj::Atom(_), Distributed::Compat(a), Distributed::Compat(b)) => a == b,
        (Obj::Prod(c1, c2), Distributed::Pair(f1, f2), Distributed::Pair(g1, g2)) => {
            atomic_equal(f1, g1, c1) && atomic_equal(f2, g2, c2)
        }
        _ => false,
    }
}
