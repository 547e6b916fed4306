//! Normal form of relevant terms on a diversified domain: an ordered prefix
//! of left atomic diagonals followed by a diagonal-free tail whose symmetries
//! are atomic and diversified.

use std::collections::BTreeMap;

use super::product::{product_decompose, sequence_graph, Frame, ProductTerm};
use super::wtree::{diagonal_factor_forks, diagonal_split_forks, products_for_forks, WTree};
use super::{bubble_right, joined, NormalizeError, Trace};
use crate::syntax::{Letter, MorTerm, Obj};
use crate::typing::{infer_type, Kind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormRel {
    /// Left atomic diagonal products, written order.
    pub prefix: Vec<ProductTerm>,
    /// Diagonal-free products applied after the prefix, written order.
    pub tail: Vec<ProductTerm>,
}

impl NormalFormRel {
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

    /// Checks the shape invariants, returning a description of the first
    /// violation.
    pub fn check_shape(&self) -> Result<(), String> {
        let mut last: Option<&Letter> = None;
        for p in self.prefix.iter().rev() {
            let Some(MorTerm::W(Obj::Atom(l))) = p.factor() else {
                return Err(format!("prefix product `{p}` is not an atomic diagonal"));
            };
            let frame = p.frame().expect("factor");
            let dom = p.dom();
            let before = &dom.letter_occurrences()[..frame.offset()];
            if before.contains(l) {
                return Err(format!("prefix product `{p}` is not left"));
            }
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
                Some(MorTerm::W(_) | MorTerm::K(_)) => {
                    return Err(format!("tail product `{p}` is not structural"))
                }
                Some(MorTerm::C(a, b)) => {
                    if !(a.is_atom() && b.is_atom()) {
                        return Err(format!("tail symmetry `{p}` is not atomic"));
                    }
                    if a.as_letter().is_some() && a == b {
                        return Err(format!("tail symmetry `{p}` is not diversified"));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

pub fn rel_normal_form(f: &MorTerm) -> Result<NormalFormRel, NormalizeError> {
    rel_normal_form_traced(f).map(|(nf, _)| nf)
}

pub fn rel_normal_form_traced(f: &MorTerm) -> Result<(NormalFormRel, Trace), NormalizeError> {
    let ty = infer_type(f, Kind::Rel)?;
    let dom = ty.dom;
    if !dom.is_diversified() {
        return Err(NormalizeError::NotDiversified(dom));
    }
    let mut trace = Trace::default();

    let seq: Vec<ProductTerm> = product_decompose(f)?
        .into_iter()
        .filter(|p| p.factor().is_some())
        .collect();
    trace.record("products", &joined(&seq, &[], &dom));

    let mut seq: Vec<ProductTerm> = seq.iter().flat_map(atomize_w).collect();
    trace.record("atomic diagonals", &joined(&seq, &[], &dom));

    bubble_right(&mut seq, is_w, |w| {
        let a = w.primitive_params()[0].clone();
        Obj::prod(a.clone(), a)
    });
    let split = seq.iter().position(is_w).unwrap_or(seq.len());
    let prefix = seq.split_off(split);
    let tail = seq;
    trace.record("diagonals moved right", &joined(&tail, &prefix, &dom));

    let mut tail: Vec<ProductTerm> = tail.iter().flat_map(atomize_c).collect();
    trace.record("atomic symmetries", &joined(&tail, &prefix, &dom));

    let mut forest = Forest::from_prefix(&dom, &prefix)?;
    eliminate_repeated_symmetries(&mut tail, &mut forest)?;
    let prefix = forest.materialize();
    trace.record("repeated symmetries removed", &joined(&tail, &prefix, &dom));

    let mut combs = BTreeMap::new();
    let mut b_stages = Vec::new();
    for (letter, forks) in &forest.forks {
        let fac = diagonal_factor_forks(letter, forks)?;
        trace
            .diagonals
            .push((letter.to_string(), fac.rounds.clone()));
        combs.insert(letter.clone(), vec![0; forks.len()]);
        b_stages.push((letter.clone(), fac.b_part));
    }
    // Associators for earlier letters are applied first; at that point later
    // letters still carry their comb trees.
    let final_forest = Forest {
        dom: dom.clone(),
        forks: combs.clone(),
    };
    for (letter, b_part) in b_stages.into_iter().rev() {
        let mut mixed = forest.clone();
        for (l, forks) in &combs {
            if l > &letter {
                mixed.forks.insert(l.clone(), forks.clone());
            }
        }
        let ctx = mixed.context(&letter);
        tail.extend(b_part.iter().map(|b| b.in_frame(&ctx)));
    }
    let prefix = final_forest.materialize();
    let tail = if tail.is_empty() {
        vec![ProductTerm::Identity(final_forest.cod())]
    } else {
        tail
    };
    let nf = NormalFormRel { prefix, tail };
    trace.record("ordered left diagonals", &nf.products());
    Ok((nf, trace))
}

fn is_w(p: &ProductTerm) -> bool {
    matches!(p.factor(), Some(MorTerm::W(_)))
}

/// Expands diagonals on products through the middle interchange and on the
/// unit through the unitor, until every diagonal is on a letter.
fn atomize_w(p: &ProductTerm) -> Vec<ProductTerm> {
    let (Some(frame), Some(MorTerm::W(a))) = (p.frame(), p.factor()) else {
        return vec![p.clone()];
    };
    match a {
        Obj::Atom(_) => vec![p.clone()],
        Obj::Unit => vec![ProductTerm::new(
            frame.clone(),
            MorTerm::SigmaInv(Obj::Unit),
        )],
        Obj::Prod(x, y) => {
            let (x, y) = ((**x).clone(), (**y).clone());
            let cm = MorTerm::c_m(&x, &x, &y, &y);
            let mut out: Vec<ProductTerm> = product_decompose(&cm)
                .expect("well-typed")
                .iter()
                .map(|q| q.in_frame(frame))
                .collect();
            let wx = ProductTerm::new(
                frame.compose(&Frame::left(Frame::Hole, Obj::prod(y.clone(), y.clone()))),
                MorTerm::W(x.clone()),
            );
            let wy = ProductTerm::new(frame.compose(&Frame::right(x, Frame::Hole)), MorTerm::W(y));
            out.extend(atomize_w(&wx));
            out.extend(atomize_w(&wy));
            out
        }
    }
}

/// Expands symmetries on products through associators until both sides of
/// every symmetry are atoms.
fn atomize_c(p: &ProductTerm) -> Vec<ProductTerm> {
    let (Some(frame), Some(MorTerm::C(a, b))) = (p.frame(), p.factor()) else {
        return vec![p.clone()];
    };
    let at = |inner: Frame, t: MorTerm| ProductTerm::new(frame.compose(&inner), t);
    let hole = || Frame::Hole;
    let parts = if let Obj::Prod(a1, a2) = a {
        let (a1, a2) = ((**a1).clone(), (**a2).clone());
        vec![
            at(
                hole(),
                MorTerm::BAssocInv(b.clone(), a1.clone(), a2.clone()),
            ),
            at(
                Frame::left(hole(), a2.clone()),
                MorTerm::C(a1.clone(), b.clone()),
            ),
            at(hole(), MorTerm::BAssoc(a1.clone(), b.clone(), a2.clone())),
            at(
                Frame::right(a1.clone(), hole()),
                MorTerm::C(a2.clone(), b.clone()),
            ),
            at(hole(), MorTerm::BAssocInv(a1, a2, b.clone())),
        ]
    } else if let Obj::Prod(b1, b2) = b {
        let (b1, b2) = ((**b1).clone(), (**b2).clone());
        vec![
            at(hole(), MorTerm::BAssoc(b1.clone(), b2.clone(), a.clone())),
            at(
                Frame::right(b1.clone(), hole()),
                MorTerm::C(a.clone(), b2.clone()),
            ),
            at(
                hole(),
                MorTerm::BAssocInv(b1.clone(), a.clone(), b2.clone()),
            ),
            at(
                Frame::left(hole(), b2.clone()),
                MorTerm::C(a.clone(), b1.clone()),
            ),
            at(hole(), MorTerm::BAssoc(a.clone(), b1, b2)),
        ]
    } else {
        return vec![p.clone()];
    };
    parts.iter().flat_map(atomize_c).collect()
}

/// The diagonal prefix on a diversified domain, recorded per letter as the
/// sequence of forked leaves of that letter's tree.
#[derive(Debug, Clone)]
struct Forest {
    dom: Obj,
    forks: BTreeMap<Letter, Vec<usize>>,
}

impl Forest {
    fn from_prefix(dom: &Obj, prefix: &[ProductTerm]) -> Result<Forest, NormalizeError> {
        let mut forks: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
        let mut cur = dom.letter_occurrences();
        for p in prefix.iter().rev() {
            let (Some(frame), Some(MorTerm::W(Obj::Atom(l)))) = (p.frame(), p.factor()) else {
                return Err(NormalizeError::Invariant(format!(
                    "`{p}` in the diagonal prefix"
                )));
            };
            let o = frame.offset();
            let start = cur.iter().position(|x| x == l).expect("letter present");
            if cur[o] != *l || cur[start..=o].iter().any(|x| x != l) {
                return Err(NormalizeError::Invariant(format!(
                    "occurrences of {l} are not contiguous"
                )));
            }
            forks.entry(l.clone()).or_default().push(o - start);
            cur.insert(o, l.clone());
        }
        Ok(Forest {
            dom: dom.clone(),
            forks,
        })
    }

    fn tree_obj(&self, l: &Letter) -> Obj {
        match self.forks.get(l) {
            Some(f) => WTree::from_forks(l.clone(), f)
                .expect("valid forks")
                .object(),
            None => Obj::Atom(l.clone()),
        }
    }

    fn expand(&self, keep: impl Fn(&Letter) -> bool) -> Obj {
        fn go(a: &Obj, f: &Forest, keep: &dyn Fn(&Letter) -> bool) -> Obj {
            match a {
                Obj::Atom(l) if !keep(l) => f.tree_obj(l),
                Obj::Prod(x, y) => Obj::prod(go(x, f, keep), go(y, f, keep)),
                other => other.clone(),
            }
        }
        go(&self.dom, self, &keep)
    }

    fn cod(&self) -> Obj {
        self.expand(|_| false)
    }

    /// Context of letter `l`'s tree inside the codomain, other letters expanded.
    fn context(&self, l: &Letter) -> Frame {
        let obj = self.expand(|x| x == l);
        let idx = obj
            .letter_occurrences()
            .iter()
            .position(|x| x == l)
            .expect("letter in domain");
        Frame::at_occurrence(&obj, idx).expect("in range")
    }

    /// First occurrence index of `l` in the codomain and the size of its block.
    fn block(&self, l: &Letter) -> (usize, usize) {
        let occ = self.cod().letter_occurrences();
        let start = occ.iter().position(|x| x == l).expect("letter present");
        (start, self.forks.get(l).map_or(1, |f| f.len() + 1))
    }

    /// Prefix products, earlier letters applied first; written order.
    fn materialize(&self) -> Vec<ProductTerm> {
        let mut out = Vec::new();
        for (l, forks) in &self.forks {
            let partial = Forest {
                dom: self.dom.clone(),
                forks: self
                    .forks
                    .range(..l.clone())
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            };
            let ctx = partial.context(l);
            let chain: Vec<ProductTerm> = products_for_forks(l, forks)
                .iter()
                .map(|p| p.in_frame(&ctx))
                .collect();
            out.splice(0..0, chain);
        }
        out
    }
}

fn repeated_symmetry_letter(p: &ProductTerm) -> Option<Letter> {
    match p.factor() {
        Some(MorTerm::C(Obj::Atom(a), Obj::Atom(b))) if a == b => Some(a.clone()),
        _ => None,
    }
}

/// Removes every `c(p,p)` from the tail, innermost (rightmost) first, by
/// rewriting the prefix so that the two swapped occurrences come from one
/// diagonal and absorbing the symmetry into it.
fn eliminate_repeated_symmetries(
    tail: &mut Vec<ProductTerm>,
    forest: &mut Forest,
) -> Result<(), NormalizeError> {
    while let Some(t) = tail
        .iter()
        .rposition(|p| repeated_symmetry_letter(p).is_some())
    {
        let letter = repeated_symmetry_letter(&tail[t]).expect("found");
        let c = tail[t].clone();
        let t1 = tail[t + 1..].to_vec();
        let a = c.frame().expect("factor").offset();
        let g1 = sequence_graph(&t1, forest.cod().occurrence_count());
        let (x, y) = (g1.map[a], g1.map[a + 1]);
        let (start, size) = forest.block(&letter);
        if y != x + 1 || x < start || y >= start + size {
            return Err(NormalizeError::Invariant(format!(
                "swapped occurrences {x},{y} of {letter} are not adjacent in its block"
            )));
        }
        let forks = forest.forks.get(&letter).cloned().unwrap_or_default();
        let split = diagonal_split_forks(&letter, &forks, x - start + 1)?;
        let ctx = forest.context(&letter);
        let v: Vec<ProductTerm> = split.v.iter().map(|b| b.in_frame(&ctx)).collect();
        let mid = split.mid.in_frame(&ctx);
        let swap = ProductTerm::new(
            mid.frame().expect("factor").clone(),
            MorTerm::C(Obj::Atom(letter.clone()), Obj::Atom(letter.clone())),
        );

        let dom_size = mid.cod().occurrence_count();
        let mut before: Vec<ProductTerm> = vec![c];
        before.extend(t1.iter().cloned());
        before.extend(v.iter().cloned());
        let mut after: Vec<ProductTerm> = t1.clone();
        after.extend(v.iter().cloned());
        after.push(swap);
        if sequence_graph(&before, dom_size) != sequence_graph(&after, dom_size) {
            return Err(NormalizeError::Invariant(format!(
                "symmetry on {letter} does not commute past the tail"
            )));
        }

        forest.forks.insert(letter, split.forks);
        tail.remove(t);
        tail.extend(v);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::decide_equal;
    use crate::graphs::graph_unchecked;
    use crate::parse::parse_term;

    fn strings(seq: &[ProductTerm]) -> Vec<String> {
        seq.iter().map(|p| p.to_string()).collect()
    }

    fn check(term: &str) -> NormalFormRel {
        let f = parse_term(term).unwrap();
        let nf = rel_normal_form(&f).unwrap();
        nf.check_shape().unwrap();
        assert!(
            decide_equal(&nf.to_term(), &f, Kind::Rel).unwrap().equal,
            "{term}"
        );
        nf
    }

    #[test]
    fn worked_example() {
        let nf = check("(id(q) * (w(p*p) . w(p))) . c(p,q)");
        assert_eq!(
            strings(&nf.prefix),
            [
                "(((w(p) * id(p)) * id(p)) * id(q))",
                "((w(p) * id(p)) * id(q))",
                "(w(p) * id(q))"
            ]
        );
        assert!(nf.tail.iter().all(|p| p.factor_name() != "w"));
    }

    #[test]
    fn trivial_inputs() {
        let nf = check("id(p)");
        assert!(nf.prefix.is_empty());
        assert_eq!(strings(&nf.tail), ["id(p)"]);
        let nf = check("c(p,q)");
        assert!(nf.prefix.is_empty());
        assert_eq!(strings(&nf.tail), ["c(p,q)"]);
    }

    #[test]
    fn repeated_symmetry_is_absorbed() {
        let nf = check("c(p,p) . w(p)");
        assert_eq!(strings(&nf.prefix), ["w(p)"]);
        assert_eq!(strings(&nf.tail), ["id((p*p))"]);
        check("(c(p,p) * id(q*q)) . (w(p) * w(q))");
        check("(id(p) * c(p,p)) . b_i(p,p,p) . (w(p) * id(p)) . w(p)");
        check("w(I*p) . sigma_i(p)");
        check("c(q*p, q*p) . w(q*p) . c(p,q)");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            rel_normal_form(&parse_term("id(p*p)").unwrap()),
            Err(NormalizeError::NotDiversified(_))
        ));
        assert!(matches!(
            rel_normal_form(&parse_term("k(p)").unwrap()),
            Err(NormalizeError::Type(_))
        ));
    }

    #[test]
    fn trace_ends_at_result() {
        let f = parse_term("(id(q) * (w(p*p) . w(p))) . c(p,q)").unwrap();
        let (nf, trace) = rel_normal_form_traced(&f).unwrap();
        assert_eq!(trace.steps.last().unwrap().products, nf.products());
        for step in &trace.steps {
            let t = MorTerm::compose_all(
                step.products
                    .iter()
                    .map(ProductTerm::to_term)
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!(graph_unchecked(&t), graph_unchecked(&f), "{}", step.label);
        }
        assert_eq!(trace.diagonals.len(), 1);
    }
}
