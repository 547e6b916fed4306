//! Normal form of affine terms: an ordered prefix of atomic deletions
//! followed by a deletion-free tail.

use super::product::{product_decompose, Frame, ProductTerm};
use super::{bubble_right, joined, NormalizeError, Trace};
use crate::syntax::{Letter, MorTerm, Obj};
use crate::typing::{infer_type, Kind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormAff {
    /// Atomic deletion products, written order.
    pub prefix: Vec<ProductTerm>,
    /// Deletion-free products applied after the prefix, written order.
    pub tail: Vec<ProductTerm>,
}

impl NormalFormAff {
    pub fn products(&self) -> Vec<ProductTerm> {
        let mut all = self.tail.clone();
        all.extend(self.prefix.iter().cloned());
        all
    }

    pub fn to_term(&self) -> MorTerm {
        MorTerm::compose_all(
            self.products()
                .iter()
                .map(ProductTerm::to_term)
                .collect::<Vec<_>>(),
        )
        .expect("tail is never empty")
    }

    pub fn check_shape(&self) -> Result<(), String> {
        let mut last: Option<&Letter> = None;
        for p in self.prefix.iter().rev() {
            let Some(MorTerm::K(Obj::Atom(l))) = p.factor() else {
                return Err(format!("prefix product `{p}` is not an atomic deletion"));
            };
            if last.is_some_and(|q| q > l) {
                return Err(format!("prefix product `{p}` is out of letter order"));
            }
            last = Some(l);
        }
        if self.tail.is_empty() {
            return Err("empty tail".into());
        }
        for p in &self.tail {
            match p.factor() {
                None if self.tail.len() > 1 => return Err("identity inside a longer tail".into()),
                Some(MorTerm::K(_) | MorTerm::W(_)) => {
                    return Err(format!("tail product `{p}` is not structural"))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

pub fn aff_normal_form(f: &MorTerm) -> Result<NormalFormAff, NormalizeError> {
    aff_normal_form_traced(f).map(|(nf, _)| nf)
}

pub fn aff_normal_form_traced(f: &MorTerm) -> Result<(NormalFormAff, Trace), NormalizeError> {
    let dom = infer_type(f, Kind::Aff)?.dom;
    let mut trace = Trace::default();

    let seq: Vec<ProductTerm> = product_decompose(f)?
        .into_iter()
        .filter(|p| p.factor().is_some())
        .collect();
    trace.record("products", &joined(&seq, &[], &dom));

    let mut seq: Vec<ProductTerm> = seq.iter().flat_map(atomize_k).collect();
    trace.record("atomic deletions", &joined(&seq, &[], &dom));

    bubble_right(&mut seq, is_k, |_| Obj::Unit);
    let split = seq.iter().position(is_k).unwrap_or(seq.len());
    let prefix = seq.split_off(split);
    let tail = seq;
    trace.record("deletions moved right", &joined(&tail, &prefix, &dom));

    let prefix = ordered_prefix(&dom, &prefix)?;
    let cod = prefix.first().map_or(dom.clone(), ProductTerm::cod);
    let tail = if tail.is_empty() {
        vec![ProductTerm::Identity(cod)]
    } else {
        tail
    };
    let nf = NormalFormAff { prefix, tail };
    trace.record("ordered deletions", &nf.products());
    Ok((nf, trace))
}

fn is_k(p: &ProductTerm) -> bool {
    matches!(p.factor(), Some(MorTerm::K(_)))
}

/// `k(I)` is the identity; `k(A*B)` is `sigma(I) . (id(I) * k(B)) . (k(A) * id(B))`.
fn atomize_k(p: &ProductTerm) -> Vec<ProductTerm> {
    let (Some(frame), Some(MorTerm::K(a))) = (p.frame(), p.factor()) else {
        return vec![p.clone()];
    };
    match a {
        Obj::Atom(_) => vec![p.clone()],
        Obj::Unit => vec![],
        Obj::Prod(x, y) => {
            let (x, y) = ((**x).clone(), (**y).clone());
            let mut out = vec![ProductTerm::new(frame.clone(), MorTerm::Sigma(Obj::Unit))];
            out.extend(atomize_k(&ProductTerm::new(
                frame.compose(&Frame::right(Obj::Unit, Frame::Hole)),
                MorTerm::K(y.clone()),
            )));
            out.extend(atomize_k(&ProductTerm::new(
                frame.compose(&Frame::left(Frame::Hole, y)),
                MorTerm::K(x),
            )));
            out
        }
    }
}

/// Rebuilds a prefix of atomic deletions acting on `dom` so that deletions
/// are applied in order of (letter, domain position).
fn ordered_prefix(dom: &Obj, prefix: &[ProductTerm]) -> Result<Vec<ProductTerm>, NormalizeError> {
    let letters = dom.letter_occurrences();
    let mut alive: Vec<usize> = (0..letters.len()).collect();
    let mut killed = Vec::new();
    for p in prefix.iter().rev() {
        let Some(frame) = p.frame() else {
            return Err(NormalizeError::Invariant(format!(
                "`{p}` in the deletion prefix"
            )));
        };
        killed.push(alive.remove(frame.offset()));
    }
    killed.sort_by(|&i, &j| (&letters[i], i).cmp(&(&letters[j], j)));
    let mut cur = dom.clone();
    let mut out = Vec::with_capacity(killed.len());
    for orig in killed {
        let at = alive_position(&cur, dom, orig);
        let prod =
            ProductTerm::at_occurrence(&cur, at, MorTerm::K(Obj::Atom(letters[orig].clone())));
        cur = prod.cod();
        out.push(prod);
    }
    out.reverse();
    Ok(out)
}

/// Current occurrence index of original domain occurrence `orig`, given that
/// deleted occurrences of `dom` have become units in `cur`.
fn alive_position(cur: &Obj, dom: &Obj, orig: usize) -> usize {
    let mut map = Vec::new();
    track(dom, cur, &mut 0, &mut map);
    map.iter()
        .position(|&o| o == orig)
        .expect("occurrence still present")
}

/// Original index of each surviving occurrence, walking `dom` and `cur` in
/// parallel (`cur` is `dom` with some atoms replaced by `I`).
fn track(dom: &Obj, cur: &Obj, next: &mut usize, out: &mut Vec<usize>) {
    match (dom, cur) {
        (Obj::Prod(a, b), Obj::Prod(c, d)) => {
            track(a, c, next, out);
            track(b, d, next, out);
        }
        (Obj::Atom(_), Obj::Atom(_)) => {
            out.push(*next);
            *next += 1;
        }
        (Obj::Atom(_), Obj::Unit) => *next += 1,
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::decide_equal;
    use crate::parse::parse_term;

    fn strings(seq: &[ProductTerm]) -> Vec<String> {
        seq.iter().map(|p| p.to_string()).collect()
    }

    fn check(term: &str) -> NormalFormAff {
        let f = parse_term(term).unwrap();
        let nf = aff_normal_form(&f).unwrap();
        nf.check_shape().unwrap();
        assert!(
            decide_equal(&nf.to_term(), &f, Kind::Aff).unwrap().equal,
            "{term}"
        );
        nf
    }

    #[test]
    fn deletion_of_a_product() {
        let nf = check("k(p*q)");
        assert_eq!(strings(&nf.prefix), ["(id(I) * k(q))", "(k(p) * id(q))"]);
        assert_eq!(strings(&nf.tail), ["sigma(I)"]);
    }

    #[test]
    fn trivial_inputs() {
        let nf = check("id(I)");
        assert!(nf.prefix.is_empty());
        assert_eq!(strings(&nf.tail), ["id(I)"]);
        let nf = check("k(I)");
        assert!(nf.prefix.is_empty());
        assert_eq!(strings(&nf.tail), ["id(I)"]);
    }

    #[test]
    fn deletions_are_sorted_by_letter() {
        let nf = check("(k(q) * id(p)) . c(p,q)");
        assert_eq!(strings(&nf.prefix), ["(id(p) * k(q))"]);
        let nf = check("(id(I) * k(p)) . (k(r) * id(p)) . c(p,r)");
        assert_eq!(strings(&nf.prefix), ["(id(I) * k(r))", "(k(p) * id(r))"]);
        check("sigma(I) . (k(p) * k(p))");
        check("k((p*I)*q) . b(p,I,q)");
    }

    #[test]
    fn same_type_same_prefix() {
        let f = aff_normal_form(&parse_term("(k(q) * id(p)) . c(p,q)").unwrap()).unwrap();
        let g = aff_normal_form(&parse_term("c(p,I) . (id(p) * k(q))").unwrap()).unwrap();
        assert_eq!(f.prefix, g.prefix);
        assert!(aff_normal_form(&parse_term("w(p)").unwrap()).is_err());
    }
}
