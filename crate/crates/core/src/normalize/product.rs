//! Product terms: one primitive wrapped in identity tensors.

use std::fmt;

use crate::graphs::{graph_unchecked, Graph};
use crate::syntax::{MorTerm, Obj};
use crate::typing::{infer_type_any, primitive_type, TypeError};

/// A one-hole context built from identities and tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Frame {
    Hole,
    /// `frame * id(obj)`
    Left(Box<Frame>, Obj),
    /// `id(obj) * frame`
    Right(Obj, Box<Frame>),
}

impl Frame {
    pub fn left(inner: Frame, right: Obj) -> Frame {
        Frame::Left(Box::new(inner), right)
    }

    pub fn right(left: Obj, inner: Frame) -> Frame {
        Frame::Right(left, Box::new(inner))
    }

    pub fn plug(&self, o: &Obj) -> Obj {
        match self {
            Frame::Hole => o.clone(),
            Frame::Left(inner, r) => Obj::prod(inner.plug(o), r.clone()),
            Frame::Right(l, inner) => Obj::prod(l.clone(), inner.plug(o)),
        }
    }

    pub fn wrap(&self, t: MorTerm) -> MorTerm {
        match self {
            Frame::Hole => t,
            Frame::Left(inner, r) => MorTerm::tensor(inner.wrap(t), MorTerm::Id(r.clone())),
            Frame::Right(l, inner) => MorTerm::tensor(MorTerm::Id(l.clone()), inner.wrap(t)),
        }
    }

    /// `self` with `inner` plugged into its hole.
    pub fn compose(&self, inner: &Frame) -> Frame {
        match self {
            Frame::Hole => inner.clone(),
            Frame::Left(f, r) => Frame::left(f.compose(inner), r.clone()),
            Frame::Right(l, f) => Frame::right(l.clone(), f.compose(inner)),
        }
    }

    /// Number of letter occurrences to the left of the hole.
    pub fn offset(&self) -> usize {
        match self {
            Frame::Hole => 0,
            Frame::Left(f, _) => f.offset(),
            Frame::Right(l, f) => l.occurrence_count() + f.offset(),
        }
    }

    /// The context of the letter occurrence `index` in `obj`.
    pub fn at_occurrence(obj: &Obj, index: usize) -> Option<Frame> {
        match obj {
            Obj::Atom(_) if index == 0 => Some(Frame::Hole),
            Obj::Prod(a, b) => {
                let na = a.occurrence_count();
                if index < na {
                    Some(Frame::left(Frame::at_occurrence(a, index)?, (**b).clone()))
                } else {
                    Some(Frame::right(
                        (**a).clone(),
                        Frame::at_occurrence(b, index - na)?,
                    ))
                }
            }
            _ => None,
        }
    }
}

/// A product term, either a bare identity or a primitive factor in a frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProductTerm {
    Identity(Obj),
    Factor { frame: Frame, factor: MorTerm },
}

impl ProductTerm {
    pub fn new(frame: Frame, factor: MorTerm) -> ProductTerm {
        debug_assert!(factor.is_primitive() && !matches!(factor, MorTerm::Id(_)));
        ProductTerm::Factor { frame, factor }
    }

    /// The atomic product applying `factor` at letter occurrence `index` of `obj`.
    pub fn at_occurrence(obj: &Obj, index: usize, factor: MorTerm) -> ProductTerm {
        ProductTerm::new(
            Frame::at_occurrence(obj, index).expect("occurrence in range"),
            factor,
        )
    }

    pub fn factor(&self) -> Option<&MorTerm> {
        match self {
            ProductTerm::Identity(_) => None,
            ProductTerm::Factor { factor, .. } => Some(factor),
        }
    }

    pub fn frame(&self) -> Option<&Frame> {
        match self {
            ProductTerm::Identity(_) => None,
            ProductTerm::Factor { frame, .. } => Some(frame),
        }
    }

    /// Short name of the determining factor (`"w"`, `"c"`, ...), or `"id"`.
    pub fn factor_name(&self) -> &'static str {
        self.factor()
            .and_then(|f| f.primitive_name())
            .unwrap_or("id")
    }

    pub fn dom(&self) -> Obj {
        match self {
            ProductTerm::Identity(a) => a.clone(),
            ProductTerm::Factor { frame, factor } => {
                frame.plug(&primitive_type(factor).expect("primitive").dom)
            }
        }
    }

    pub fn cod(&self) -> Obj {
        match self {
            ProductTerm::Identity(a) => a.clone(),
            ProductTerm::Factor { frame, factor } => {
                frame.plug(&primitive_type(factor).expect("primitive").cod)
            }
        }
    }

    pub fn to_term(&self) -> MorTerm {
        match self {
            ProductTerm::Identity(a) => MorTerm::Id(a.clone()),
            ProductTerm::Factor { frame, factor } => frame.wrap(factor.clone()),
        }
    }

    pub fn graph(&self) -> Graph {
        graph_unchecked(&self.to_term())
    }

    /// Whether the factor is indexed by a letter (`w_p`, `k_p`) or by two
    /// atoms (`c`).
    pub fn is_atomic(&self) -> bool {
        match self.factor() {
            Some(MorTerm::W(a) | MorTerm::K(a)) => a.as_letter().is_some(),
            Some(MorTerm::C(a, b)) => a.is_atom() && b.is_atom(),
            _ => false,
        }
    }

    /// Naturality: the same product with domain occurrence `index` replaced
    /// by `with`, in the frame or inside the factor's parameters.
    pub fn substitute(&self, index: usize, with: &Obj) -> ProductTerm {
        match self {
            ProductTerm::Identity(a) => {
                ProductTerm::Identity(a.replace_occurrence(index, with).expect("in range"))
            }
            ProductTerm::Factor { frame, factor } => {
                let (frame, factor) = substitute_in(frame, factor, index, with);
                ProductTerm::Factor { frame, factor }
            }
        }
    }

    /// Inverse of an invertible product (identity, unitors, associators,
    /// symmetries).
    pub fn inverse(&self) -> Option<ProductTerm> {
        let ProductTerm::Factor { frame, factor } = self else {
            return Some(self.clone());
        };
        let inv = match factor {
            MorTerm::Sigma(a) => MorTerm::SigmaInv(a.clone()),
            MorTerm::SigmaInv(a) => MorTerm::Sigma(a.clone()),
            MorTerm::Delta(a) => MorTerm::DeltaInv(a.clone()),
            MorTerm::DeltaInv(a) => MorTerm::Delta(a.clone()),
            MorTerm::BAssoc(a, b, c) => MorTerm::BAssocInv(a.clone(), b.clone(), c.clone()),
            MorTerm::BAssocInv(a, b, c) => MorTerm::BAssoc(a.clone(), b.clone(), c.clone()),
            MorTerm::C(a, b) => MorTerm::C(b.clone(), a.clone()),
            _ => return None,
        };
        Some(ProductTerm::Factor {
            frame: frame.clone(),
            factor: inv,
        })
    }

    /// The same product inside an outer frame.
    pub fn in_frame(&self, outer: &Frame) -> ProductTerm {
        match self {
            ProductTerm::Identity(a) => ProductTerm::Identity(outer.plug(a)),
            ProductTerm::Factor { frame, factor } => ProductTerm::Factor {
                frame: outer.compose(frame),
                factor: factor.clone(),
            },
        }
    }
}

fn substitute_in(frame: &Frame, factor: &MorTerm, index: usize, with: &Obj) -> (Frame, MorTerm) {
    match frame {
        Frame::Hole => (Frame::Hole, substitute_param(factor, index, with)),
        Frame::Left(inner, r) => {
            let n = inner.offset() + factor_dom_count(factor) + trailing_count(inner);
            if index < n {
                let (f, t) = substitute_in(inner, factor, index, with);
                (Frame::left(f, r.clone()), t)
            } else {
                let r = r.replace_occurrence(index - n, with).expect("in range");
                (Frame::left((**inner).clone(), r), factor.clone())
            }
        }
        Frame::Right(l, inner) => {
            let n = l.occurrence_count();
            if index < n {
                let l = l.replace_occurrence(index, with).expect("in range");
                (Frame::right(l, (**inner).clone()), factor.clone())
            } else {
                let (f, t) = substitute_in(inner, factor, index - n, with);
                (Frame::right(l.clone(), f), t)
            }
        }
    }
}

/// Occurrences to the right of the hole.
fn trailing_count(frame: &Frame) -> usize {
    match frame {
        Frame::Hole => 0,
        Frame::Left(f, r) => trailing_count(f) + r.occurrence_count(),
        Frame::Right(_, f) => trailing_count(f),
    }
}

fn factor_dom_count(factor: &MorTerm) -> usize {
    factor
        .primitive_params()
        .iter()
        .map(|p| p.occurrence_count())
        .sum()
}

/// Domain occurrences of every primitive are the occurrences of its
/// parameters in order, so a domain index falls in exactly one parameter.
fn substitute_param(factor: &MorTerm, mut index: usize, with: &Obj) -> MorTerm {
    let mut params: Vec<Obj> = factor.primitive_params().into_iter().cloned().collect();
    for p in params.iter_mut() {
        let n = p.occurrence_count();
        if index < n {
            *p = p.replace_occurrence(index, with).expect("in range");
            return factor.with_params(&params);
        }
        index -= n;
    }
    panic!("occurrence index out of range for {factor}")
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// Splits `f` into a composite of product terms, using only functoriality of
/// tensor. The result is in written order (last element applied first);
/// `f * g` becomes `(f * id) . (id * g)`. Identity factors are dropped and an
/// identity composite yields a single bare identity.
pub fn product_decompose(f: &MorTerm) -> Result<Vec<ProductTerm>, TypeError> {
    let ty = infer_type_any(f)?;
    let mut out = Vec::new();
    decompose_into(f, &Frame::Hole, &mut out);
    if out.is_empty() {
        out.push(ProductTerm::Identity(ty.dom));
    }
    Ok(out)
}

fn decompose_into(f: &MorTerm, frame: &Frame, out: &mut Vec<ProductTerm>) {
    match f {
        MorTerm::Id(_) => {}
        MorTerm::Comp(g, h) => {
            decompose_into(g, frame, out);
            decompose_into(h, frame, out);
        }
        MorTerm::Tensor(a, b) => {
            let ta = infer_type_any(a).expect("well-typed");
            let tb = infer_type_any(b).expect("well-typed");
            decompose_into(a, &frame.compose(&Frame::left(Frame::Hole, tb.cod)), out);
            decompose_into(b, &frame.compose(&Frame::right(ta.dom, Frame::Hole)), out);
        }
        prim => out.push(ProductTerm::new(frame.clone(), prim.clone())),
    }
}

/// Written-order composite of a product sequence.
pub fn compose_products(seq: &[ProductTerm]) -> Option<MorTerm> {
    MorTerm::compose_all(seq.iter().map(ProductTerm::to_term).collect::<Vec<_>>())
}

/// Graph of a written-order product sequence with domain size `dom_size`.
pub fn sequence_graph(seq: &[ProductTerm], dom_size: usize) -> Graph {
    seq.iter().rev().fold(Graph::identity(dom_size), |acc, p| {
        p.graph().compose(&acc).expect("composable")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::decide_equal;
    use crate::parse::{parse_obj, parse_term};
    use crate::typing::Kind;

    #[test]
    fn decomposes_under_identity() {
        let f = parse_term("id(q) * (w(p*p) . w(p))").unwrap();
        let seq = product_decompose(&f).unwrap();
        let printed: Vec<_> = seq.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, ["(id(q) * w((p*p)))", "(id(q) * w(p))"]);
    }

    #[test]
    fn tensor_splits_right_factor_first() {
        let f = parse_term("w(p) * k(q)").unwrap();
        let seq = product_decompose(&f).unwrap();
        let printed: Vec<_> = seq.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, ["(w(p) * id(I))", "(id(p) * k(q))"]);
        let back = compose_products(&seq).unwrap();
        assert!(decide_equal(&back, &f, Kind::Cart).unwrap().equal);
    }

    #[test]
    fn identity_is_kept_once() {
        let seq = product_decompose(&parse_term("id(p*q) . id(p*q)").unwrap()).unwrap();
        assert_eq!(seq, vec![ProductTerm::Identity(parse_obj("p*q").unwrap())]);
    }

    #[test]
    fn frames_locate_occurrences() {
        let a = parse_obj("(p*I)*(q*r)").unwrap();
        let fr = Frame::at_occurrence(&a, 1).unwrap();
        assert_eq!(fr.offset(), 1);
        assert_eq!(
            fr.plug(&parse_obj("s").unwrap()).to_string(),
            "((p*I)*(s*r))"
        );
        assert!(Frame::at_occurrence(&a, 3).is_none());
    }

    #[test]
    fn substitution_is_natural() {
        let pp = parse_obj("p*p").unwrap();
        let c = ProductTerm::new(
            Frame::right(parse_obj("q").unwrap(), Frame::Hole),
            parse_term("c(p,r)").unwrap(),
        );
        let s = c.substitute(1, &pp);
        assert_eq!(s.to_string(), "(id(q) * c((p*p),r))");
        let s = c.substitute(0, &Obj::Unit);
        assert_eq!(s.to_string(), "(id(I) * c(p,r))");
        let b = ProductTerm::new(
            Frame::left(Frame::Hole, parse_obj("s").unwrap()),
            parse_term("b(p,q,r)").unwrap(),
        );
        assert_eq!(b.substitute(3, &pp).to_string(), "(b(p,q,r) * id((p*p)))");
        assert_eq!(b.substitute(2, &pp).to_string(), "(b(p,q,(p*p)) * id(s))");
    }

    #[test]
    fn inverses() {
        let b = ProductTerm::new(Frame::Hole, parse_term("c(p,q)").unwrap());
        let inv = b.inverse().unwrap();
        let both = MorTerm::comp(inv.to_term(), b.to_term());
        assert!(
            decide_equal(&both, &parse_term("id(p*q)").unwrap(), Kind::SyMon)
                .unwrap()
                .equal
        );
        assert!(ProductTerm::new(Frame::Hole, parse_term("w(p)").unwrap())
            .inverse()
            .is_none());
    }
}
