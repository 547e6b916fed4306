//! Graphs of morphism terms: functions from codomain letter occurrences to
//! domain letter occurrences.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{MorTerm, Obj};
use crate::typing::{infer_type, Kind, TypeError};

/// A total map `{0..cod_size} -> {0..dom_size}`, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    pub dom_size: usize,
    pub cod_size: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("cannot compose: inner graph has codomain size {inner_cod}, outer graph has domain size {outer_dom}")]
    SizeMismatch { inner_cod: usize, outer_dom: usize },
    #[error("map entry {value} out of range 1..={dom_size}")]
    OutOfRange { value: usize, dom_size: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    Identity,
    Bijective,
    Surjective,
    Injective,
    Arbitrary,
}

impl GraphClass {
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Identity => "identity",
            GraphClass::Bijective => "bijective",
            GraphClass::Surjective => "surjective",
            GraphClass::Injective => "injective",
            GraphClass::Arbitrary => "arbitrary",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    dom: usize,
    cod: usize,
    map: Vec<usize>,
}

impl Graph {
    pub fn identity(n: usize) -> Graph {
        Graph {
            dom_size: n,
            cod_size: n,
            map: (0..n).collect(),
        }
    }

    pub fn empty(dom_size: usize) -> Graph {
        Graph {
            dom_size,
            cod_size: 0,
            map: Vec::new(),
        }
    }

    pub fn from_one_based(dom_size: usize, map: &[usize]) -> Result<Graph, GraphError> {
        let map = map
            .iter()
            .map(|&v| {
                if v >= 1 && v <= dom_size {
                    Ok(v - 1)
                } else {
                    Err(GraphError::OutOfRange { value: v, dom_size })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Graph {
            dom_size,
            cod_size: map.len(),
            map,
        })
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }

    /// `self` after `before`: `i ↦ before.map[self.map[i]]`.
    pub fn compose(&self, before: &Graph) -> Result<Graph, GraphError> {
        if before.cod_size != self.dom_size {
            return Err(GraphError::SizeMismatch {
                inner_cod: before.cod_size,
                outer_dom: self.dom_size,
            });
        }
        Ok(Graph {
            dom_size: before.dom_size,
            cod_size: self.cod_size,
            map: self.map.iter().map(|&j| before.map[j]).collect(),
        })
    }

    pub fn tensor(&self, other: &Graph) -> Graph {
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|&j| self.dom_size + j));
        Graph {
            dom_size: self.dom_size + other.dom_size,
            cod_size: self.cod_size + other.cod_size,
            map,
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.dom_size];
        self.map
            .iter()
            .all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.dom_size];
        for &j in &self.map {
            seen[j] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_identity(&self) -> bool {
        self.dom_size == self.cod_size && self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The most specific label for the underlying function.
    pub fn classify(&self) -> GraphClass {
        match (
            self.is_identity(),
            self.is_injective(),
            self.is_surjective(),
        ) {
            (true, _, _) => GraphClass::Identity,
            (_, true, true) => GraphClass::Bijective,
            (_, false, true) => GraphClass::Surjective,
            (_, true, false) => GraphClass::Injective,
            _ => GraphClass::Arbitrary,
        }
    }

    /// Whether each codomain occurrence carries the same letter as the domain
    /// occurrence it is mapped to.
    pub fn letter_consistent(&self, dom: &Obj, cod: &Obj) -> bool {
        let d = dom.letter_occurrences();
        let c = cod.letter_occurrences();
        d.len() == self.dom_size
            && c.len() == self.cod_size
            && self.map.iter().zip(&c).all(|(&j, l)| d[j] == *l)
    }

    pub fn to_json(&self) -> String {
        let j = GraphJson {
            dom: self.dom_size,
            cod: self.cod_size,
            map: self.one_based(),
        };
        serde_json::to_string(&j).expect("plain struct serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph, String> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if j.map.len() != j.cod {
            return Err(format!(
                "map has {} entries but cod is {}",
                j.map.len(),
                j.cod
            ));
        }
        Graph::from_one_based(j.dom, &j.map).map_err(|e| e.to_string())
    }

    /// Bipartite linkage diagram: domain occurrences on top, codomain
    /// occurrences below, one edge per map entry.
    pub fn to_dot(&self, dom: Option<&Obj>, cod: Option<&Obj>) -> String {
        let labels = |o: Option<&Obj>, n: usize| -> Vec<String> {
            match o {
                Some(o) => o
                    .letter_occurrences()
                    .iter()
                    .map(|l| l.to_string())
                    .collect(),
                None => (1..=n).map(|i| i.to_string()).collect(),
            }
        };
        let dl = labels(dom, self.dom_size);
        let cl = labels(cod, self.cod_size);
        let mut s = String::from("digraph graph_of {\n  rankdir=TB;\n  node [shape=plaintext];\n");
        let rank = |s: &mut String, prefix: &str, names: &[String]| {
            s.push_str("  { rank=same;");
            for (i, name) in names.iter().enumerate() {
                let _ = write!(s, " {prefix}{} [label=\"{name}\"];", i + 1);
            }
            s.push_str(" }\n");
        };
        rank(&mut s, "d", &dl);
        rank(&mut s, "c", &cl);
        for (i, &j) in self.map.iter().enumerate() {
            let _ = writeln!(s, "  d{} -> c{} [dir=none];", j + 1, i + 1);
        }
        s.push_str("}\n");
        s
    }
}

/// Graph of a primitive term.
pub fn primitive_graph(prim: &MorTerm) -> Graph {
    match prim {
        MorTerm::Id(a)
        | MorTerm::Sigma(a)
        | MorTerm::SigmaInv(a)
        | MorTerm::Delta(a)
        | MorTerm::DeltaInv(a) => Graph::identity(a.occurrence_count()),
        MorTerm::BAssoc(a, b, c) | MorTerm::BAssocInv(a, b, c) => {
            Graph::identity(a.occurrence_count() + b.occurrence_count() + c.occurrence_count())
        }
        MorTerm::C(a, b) => {
            let (ma, mb) = (a.occurrence_count(), b.occurrence_count());
            let map = (0..mb).map(|i| ma + i).chain(0..ma).collect();
            Graph {
                dom_size: ma + mb,
                cod_size: ma + mb,
                map,
            }
        }
        MorTerm::W(a) => {
            let m = a.occurrence_count();
            Graph {
                dom_size: m,
                cod_size: 2 * m,
                map: (0..m).chain(0..m).collect(),
            }
        }
        MorTerm::K(a) => Graph::empty(a.occurrence_count()),
        MorTerm::Comp(..) | MorTerm::Tensor(..) => panic!("primitive_graph on a composite"),
    }
}

/// Graph of a term assumed well-typed.
pub fn graph_unchecked(f: &MorTerm) -> Graph {
    match f {
        MorTerm::Comp(g, h) => graph_unchecked(g)
            .compose(&graph_unchecked(h))
            .expect("well-typed composite"),
        MorTerm::Tensor(a, b) => graph_unchecked(a).tensor(&graph_unchecked(b)),
        prim => primitive_graph(prim),
    }
}

pub fn graph_of(f: &MorTerm, kind: Kind) -> Result<Graph, TypeError> {
    infer_type(f, kind)?;
    Ok(graph_unchecked(f))
}

/// The image of `f` in finite ordinals: `(G(dom), G(cod), graph)`.
pub fn to_finord(f: &MorTerm, kind: Kind) -> Result<(usize, usize, Graph), TypeError> {
    let g = graph_of(f, kind)?;
    Ok((g.dom_size, g.cod_size, g))
}
