//! Equality of structural terms and commutativity of diagrams, decided by
//! comparing types and graphs.

use std::fmt;

use thiserror::Error;

use crate::graphs::{graph_unchecked, Graph};
use crate::syntax::{Letter, MorTerm, Obj};
use crate::typing::{infer_type, Kind, MorType, TypeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    SameGraph,
    DifferentType,
    DifferentGraph,
    MonPreorder,
}

impl Reason {
    pub fn name(self) -> &'static str {
        match self {
            Reason::SameGraph => "same-graph",
            Reason::DifferentType => "different-type",
            Reason::DifferentGraph => "different-graph",
            Reason::MonPreorder => "mon-preorder",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub equal: bool,
    pub reason: Reason,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.equal { "EQUAL" } else { "NOT-EQUAL" };
        write!(f, "{head} ({})", self.reason.name())
    }
}

pub fn decide_equal(f: &MorTerm, g: &MorTerm, kind: Kind) -> Result<Verdict, TypeError> {
    let tf = infer_type(f, kind)?;
    let tg = infer_type(g, kind)?;
    Ok(decide_typed(f, &tf, g, &tg, kind))
}

fn decide_typed(f: &MorTerm, tf: &MorType, g: &MorTerm, tg: &MorType, kind: Kind) -> Verdict {
    if tf != tg {
        return Verdict {
            equal: false,
            reason: Reason::DifferentType,
        };
    }
    if kind == Kind::Mon {
        return Verdict {
            equal: true,
            reason: Reason::MonPreorder,
        };
    }
    if graph_unchecked(f) == graph_unchecked(g) {
        Verdict {
            equal: true,
            reason: Reason::SameGraph,
        }
    } else {
        Verdict {
            equal: false,
            reason: Reason::DifferentGraph,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("path {path} is empty")]
    EmptyPath { path: usize },
    #[error(
        "path {path}: arrow {index} starts at {dom} but the previous arrow ends at {prev_cod}"
    )]
    CompositionGap {
        path: usize,
        index: usize,
        prev_cod: Obj,
        dom: Obj,
    },
    #[error("the paths have different types: {left} versus {right}")]
    EndpointMismatch { left: MorType, right: MorType },
}

/// Folds a path, given in the order the arrows are traversed, into a
/// composite. The first arrow is applied first.
pub fn fold_path(
    path: &[MorTerm],
    kind: Kind,
    which: usize,
) -> Result<(MorTerm, MorType), DiagramError> {
    let (first, rest) = path
        .split_first()
        .ok_or(DiagramError::EmptyPath { path: which })?;
    let mut ty = infer_type(first, kind)?;
    let mut acc = first.clone();
    for (i, arrow) in rest.iter().enumerate() {
        let t = infer_type(arrow, kind)?;
        if t.dom != ty.cod {
            return Err(DiagramError::CompositionGap {
                path: which,
                index: i + 1,
                prev_cod: ty.cod,
                dom: t.dom,
            });
        }
        acc = MorTerm::comp(arrow.clone(), acc);
        ty.cod = t.cod;
    }
    Ok((acc, ty))
}

pub fn diagram_commutes(
    left: &[MorTerm],
    right: &[MorTerm],
    kind: Kind,
) -> Result<Verdict, DiagramError> {
    let (f, tf) = fold_path(left, kind, 0)?;
    let (g, tg) = fold_path(right, kind, 1)?;
    if tf != tg {
        return Err(DiagramError::EndpointMismatch {
            left: tf,
            right: tg,
        });
    }
    Ok(decide_typed(&f, &tf, &g, &tg, kind))
}

/// A functor shape: a tree over slots and the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Slot,
    Unit,
    Prod(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn prod(a: Shape, b: Shape) -> Shape {
        Shape::Prod(Box::new(a), Box::new(b))
    }

    pub fn slot_count(&self) -> usize {
        match self {
            Shape::Slot => 1,
            Shape::Unit => 0,
            Shape::Prod(a, b) => a.slot_count() + b.slot_count(),
        }
    }

    /// The shape of an object, forgetting which letters fill its slots.
    pub fn of(a: &Obj) -> Shape {
        match a {
            Obj::Atom(_) => Shape::Slot,
            Obj::Unit => Shape::Unit,
            Obj::Prod(x, y) => Shape::prod(Shape::of(x), Shape::of(y)),
        }
    }

    /// Fills the slots left to right with `fill`.
    pub fn instantiate(&self, fill: &mut impl Iterator<Item = Obj>) -> Obj {
        match self {
            Shape::Slot => fill.next().expect("enough fillers"),
            Shape::Unit => Obj::Unit,
            Shape::Prod(a, b) => {
                let l = a.instantiate(fill);
                Obj::prod(l, b.instantiate(fill))
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepresentativeError {
    #[error("domain shape has {slots} slots but the graph domain has size {size}")]
    DomArity { slots: usize, size: usize },
    #[error("codomain shape has {slots} slots but the graph codomain has size {size}")]
    CodArity { slots: usize, size: usize },
}

/// The fresh letter `p{i}` used for the `i`-th (one-based) domain slot.
pub fn fresh_letter(i: usize) -> Obj {
    Obj::Atom(Letter::new(&format!("p{i}")).expect("valid"))
}

/// The type of the representative: distinct fresh letters in the domain
/// slots, and in each codomain slot the letter its graph points back to.
pub fn representative(
    dom: &Shape,
    cod: &Shape,
    graph: &Graph,
) -> Result<MorType, RepresentativeError> {
    if dom.slot_count() != graph.dom_size {
        return Err(RepresentativeError::DomArity {
            slots: dom.slot_count(),
            size: graph.dom_size,
        });
    }
    if cod.slot_count() != graph.cod_size {
        return Err(RepresentativeError::CodArity {
            slots: cod.slot_count(),
            size: graph.cod_size,
        });
    }
    let d = dom.instantiate(&mut (1..=graph.dom_size).map(fresh_letter));
    let c = cod.instantiate(&mut graph.map.iter().map(|&j| fresh_letter(j + 1)));
    Ok(MorType { dom: d, cod: c })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConservativityError {
    #[error("{lower} is not below {upper}")]
    KindOrder { lower: Kind, upper: Kind },
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Whether the verdicts at `lower` and `upper` agree.
pub fn conservativity_check(
    f: &MorTerm,
    g: &MorTerm,
    lower: Kind,
    upper: Kind,
) -> Result<bool, ConservativityError> {
    if !lower.le(upper) {
        return Err(ConservativityError::KindOrder { lower, upper });
    }
    let lo = decide_equal(f, g, lower)?;
    let hi = decide_equal(f, g, upper)?;
    Ok(lo.equal == hi.equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> MorTerm {
        parse_term(s).unwrap()
    }

    #[test]
    fn basic_verdicts() {
        let v = decide_equal(&t("c(p,p)"), &t("id(p*p)"), Kind::SyMon).unwrap();
        assert_eq!(
            v,
            Verdict {
                equal: false,
                reason: Reason::DifferentGraph
            }
        );
        let v = decide_equal(&t("c(p,p) . w(p)"), &t("w(p)"), Kind::Rel).unwrap();
        assert_eq!(v.to_string(), "EQUAL (same-graph)");
        let v = decide_equal(&t("w(p)"), &t("w(q)"), Kind::Rel).unwrap();
        assert_eq!(v.reason, Reason::DifferentType);
        let v = decide_equal(&t("id(I*p)"), &t("sigma_i(p) . sigma(p)"), Kind::Mon).unwrap();
        assert_eq!(v.reason, Reason::MonPreorder);
        assert!(decide_equal(&t("w(p)"), &t("w(p)"), Kind::Aff).is_err());
    }

    #[test]
    fn diagrams() {
        let d = [t("delta(p)")];
        assert!(diagram_commutes(&d, &d, Kind::Mon).unwrap().equal);
        let left = [t("sigma(p)")];
        let right = [t("k(I) * id(p)"), t("sigma(p)")];
        assert!(diagram_commutes(&left, &right, Kind::Cart).unwrap().equal);
        let e = diagram_commutes(&[t("w(p)")], &[t("id(p)")], Kind::Rel).unwrap_err();
        assert!(matches!(e, DiagramError::EndpointMismatch { .. }));
        let e = diagram_commutes(&[t("w(p)"), t("c(p,q)")], &[t("id(p)")], Kind::Rel).unwrap_err();
        assert!(matches!(e, DiagramError::CompositionGap { index: 1, .. }));
        assert!(matches!(
            diagram_commutes(&[], &d, Kind::Mon),
            Err(DiagramError::EmptyPath { path: 0 })
        ));
    }

    #[test]
    fn representatives() {
        let w = Graph::from_one_based(1, &[1, 1]).unwrap();
        let r = representative(&Shape::Slot, &Shape::prod(Shape::Slot, Shape::Slot), &w).unwrap();
        assert_eq!(r.to_string(), "p1 -> (p1*p1)");
        let swap = Graph::from_one_based(2, &[2, 1]).unwrap();
        let two = Shape::prod(Shape::Slot, Shape::Slot);
        assert_eq!(
            representative(&two, &two, &swap).unwrap().to_string(),
            "(p1*p2) -> (p2*p1)"
        );
        assert_eq!(
            representative(&Shape::Slot, &Shape::Unit, &Graph::empty(1))
                .unwrap()
                .to_string(),
            "p1 -> I"
        );
        assert!(representative(&two, &Shape::Unit, &Graph::empty(1)).is_err());
    }

    #[test]
    fn conservativity() {
        assert!(
            conservativity_check(&t("c(p,p)"), &t("id(p*p)"), Kind::SyMon, Kind::Cart).unwrap()
        );
        assert!(conservativity_check(
            &t("id(I*p)"),
            &t("sigma_i(p) . sigma(p)"),
            Kind::Mon,
            Kind::SyMon
        )
        .unwrap());
        assert!(conservativity_check(&t("id(p)"), &t("id(p)"), Kind::Rel, Kind::Aff).is_err());
    }
}
