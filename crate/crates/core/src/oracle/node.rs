//! Terms modulo associativity of composition and the identity laws:
//! composites are flat element lists with identities removed.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::syntax::{MorTerm, Obj};
use crate::typing::{primitive_type, MorType};

/// A primitive other than an identity, with its type.
#[derive(Clone)]
pub(crate) struct Prim {
    pub(crate) term: MorTerm,
    ty: MorType,
}

impl PartialEq for Prim {
    fn eq(&self, other: &Prim) -> bool {
        self.term == other.term
    }
}

impl Eq for Prim {}

impl Hash for Prim {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.term.hash(state)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Prim(Arc<Prim>),
    Id(Obj),
    Tensor(Arc<Node>, Arc<Node>),
    /// Written order, at least two elements, none of them `Id` or `Seq`.
    Seq(Arc<[Node]>),
}

impl Node {
    pub(crate) fn from_term(f: &MorTerm) -> Node {
        match f {
            MorTerm::Id(a) => Node::Id(a.clone()),
            MorTerm::Tensor(a, b) => Node::tensor(Node::from_term(a), Node::from_term(b)),
            MorTerm::Comp(..) => {
                let mut elems = Vec::new();
                push_flat(f, &mut elems);
                let dom = crate::typing::infer_type_any(f).expect("well-typed").dom;
                Node::from_elements(elems, &dom)
            }
            prim => Node::prim(prim.clone()),
        }
    }

    pub(crate) fn to_term(&self) -> MorTerm {
        match self {
            Node::Prim(p) => p.term.clone(),
            Node::Id(a) => MorTerm::Id(a.clone()),
            Node::Tensor(a, b) => MorTerm::tensor(a.to_term(), b.to_term()),
            Node::Seq(items) => {
                MorTerm::compose_all(items.iter().map(Node::to_term).collect::<Vec<_>>())
                    .expect("nonempty")
            }
        }
    }

    /// Wraps a primitive other than an identity.
    pub(crate) fn prim(term: MorTerm) -> Node {
        let ty = primitive_type(&term).expect("a primitive");
        Node::Prim(Arc::new(Prim { term, ty }))
    }

    pub(crate) fn tensor(a: Node, b: Node) -> Node {
        Node::Tensor(Arc::new(a), Arc::new(b))
    }

    /// Canonical node for a written-order list: nested lists are spliced
    /// and identities dropped; `dom` names the identity left when nothing
    /// remains.
    pub(crate) fn from_elements(elems: Vec<Node>, dom: &Obj) -> Node {
        let mut out: Vec<Node> = Vec::with_capacity(elems.len());
        for e in elems {
            match e {
                Node::Id(_) => {}
                Node::Seq(items) => out.extend(items.iter().cloned()),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Node::Id(dom.clone()),
            1 => out.pop().expect("one element"),
            _ => Node::Seq(out.into()),
        }
    }

    /// The node as a written-order list: its elements for a composite,
    /// otherwise the node alone.
    pub(crate) fn elements(&self) -> &[Node] {
        match self {
            Node::Seq(items) => items,
            other => std::slice::from_ref(other),
        }
    }

    pub(crate) fn dom(&self) -> Obj {
        match self {
            Node::Prim(p) => p.ty.dom.clone(),
            Node::Id(a) => a.clone(),
            Node::Tensor(a, b) => Obj::prod(a.dom(), b.dom()),
            Node::Seq(items) => items.last().expect("nonempty").dom(),
        }
    }

    pub(crate) fn cod(&self) -> Obj {
        match self {
            Node::Prim(p) => p.ty.cod.clone(),
            Node::Id(a) => a.clone(),
            Node::Tensor(a, b) => Obj::prod(a.cod(), b.cod()),
            Node::Seq(items) => items[0].cod(),
        }
    }

    /// Number of primitive leaves, identities included.
    pub(crate) fn size(&self) -> usize {
        match self {
            Node::Prim(_) | Node::Id(_) => 1,
            Node::Tensor(a, b) => a.size() + b.size(),
            Node::Seq(items) => items.iter().map(Node::size).sum(),
        }
    }
}

fn push_flat(f: &MorTerm, out: &mut Vec<Node>) {
    match f {
        MorTerm::Comp(g, h) => {
            push_flat(g, out);
            push_flat(h, out);
        }
        MorTerm::Id(_) => {}
        other => out.push(Node::from_term(other)),
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
