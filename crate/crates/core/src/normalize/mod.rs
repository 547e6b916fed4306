//! Constructive normal forms for relevant and affine terms.

use thiserror::Error;

use crate::syntax::Obj;
use crate::typing::TypeError;

mod aff;
mod product;
mod rel;
mod wtree;

pub use aff::{aff_normal_form, aff_normal_form_traced, NormalFormAff};
pub use product::{compose_products, product_decompose, sequence_graph, Frame, ProductTerm};
pub use rel::{rel_normal_form, rel_normal_form_traced, NormalFormRel};
pub use wtree::{
    diagonal_factor, diagonal_factor_forks, diagonal_split, diagonal_split_forks, forks_of_term,
    products_for_forks, DiagonalFactorization, DiagonalRound, DiagonalSplit, WTree,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalizeError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("domain {0} is not diversified")]
    NotDiversified(Obj),
    #[error("unexpected shape: {0}")]
    Shape(String),
    #[error("leaf index {index} out of range for {leaves} leaves")]
    IndexOutOfRange { index: usize, leaves: usize },
    #[error("normalizer invariant violated: {0}")]
    Invariant(String),
}

/// One intermediate stage of a normalizer: the whole term as a written-order
/// sequence of products.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub label: String,
    pub products: Vec<ProductTerm>,
}

#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
    /// Per letter, the fork tree and measure at each round of the diagonal
    /// factorization.
    pub diagonals: Vec<(String, Vec<DiagonalRound>)>,
}

impl Trace {
    fn record(&mut self, label: &str, products: &[ProductTerm]) {
        self.steps.push(TraceStep {
            label: label.to_string(),
            products: products.to_vec(),
        });
    }
}

/// Concatenation `tail ++ prefix`, or a bare identity on `dom` when both are empty.
fn joined(tail: &[ProductTerm], prefix: &[ProductTerm], dom: &Obj) -> Vec<ProductTerm> {
    let mut all: Vec<ProductTerm> = tail
        .iter()
        .chain(prefix)
        .filter(|p| p.factor().is_some())
        .cloned()
        .collect();
    if all.is_empty() {
        all.push(ProductTerm::Identity(dom.clone()));
    }
    all
}

/// Moves every product satisfying `mobile` to the right end (applied first)
/// by naturality. Each crossed product has the crossed occurrence replaced
/// by `image(letter)`.
fn bubble_right(
    seq: &mut [ProductTerm],
    mobile: impl Fn(&ProductTerm) -> bool,
    image: impl Fn(&crate::syntax::MorTerm) -> Obj,
) {
    let mut moved = true;
    while moved {
        moved = false;
        for t in (0..seq.len().saturating_sub(1)).rev() {
            if mobile(&seq[t]) && !mobile(&seq[t + 1]) {
                let (m, p) = (seq[t].clone(), seq[t + 1].clone());
                let frame = m.frame().expect("mobile products have a factor");
                let factor = m.factor().expect("mobile products have a factor").clone();
                let o = p.graph().map[frame.offset()];
                let crossed = p.substitute(o, &image(&factor));
                let m2 = ProductTerm::at_occurrence(&p.dom(), o, factor);
                seq[t] = crossed;
                seq[t + 1] = m2;
                moved = true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    #[test]
    fn bubbling_diagonal_past_symmetry() {
        let f = parse_term("(w(p) * id(q)) . c(q,p)").unwrap();
        let mut seq = product_decompose(&f).unwrap();
        bubble_right(
            &mut seq,
            |p| p.factor_name() == "w",
            |w| {
                Obj::prod(
                    w.primitive_params()[0].clone(),
                    w.primitive_params()[0].clone(),
                )
            },
        );
        let printed: Vec<_> = seq.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, ["c(q,(p*p))", "(id(q) * w(p))"]);
    }
}
