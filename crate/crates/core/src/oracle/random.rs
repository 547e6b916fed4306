//! Seeded generators for objects, terms, rule instances and random walks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cart_std::StdTerm;
use crate::syntax::{MorTerm, Obj};
use crate::typing::{infer_type_any, Kind};

use super::node::Node;
use super::rules::{rule_table, ObjPat, Pat, INTERCHANGE};
use super::search::{neighbors, rules_for};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

fn letter_name(i: usize) -> Obj {
    match NAMES.get(i) {
        Some(n) => Obj::letter(n),
        None => Obj::letter(&format!("p{i}")),
    }
}

fn random_tree(rng: &mut ChaCha8Rng, mut leaves: Vec<Obj>) -> Obj {
    if leaves.len() == 1 {
        return leaves.pop().expect("one leaf");
    }
    let cut = rng.gen_range(1..leaves.len());
    let right = leaves.split_off(cut);
    Obj::prod(random_tree(rng, leaves), random_tree(rng, right))
}

/// A diversified object with exactly `num_letters` distinct letters and a
/// random sprinkling of units and bracketing.
pub fn random_diversified_object(num_letters: usize, seed: u64) -> Obj {
    let mut rng = rng(seed);
    let mut leaves: Vec<Obj> = (0..num_letters).map(letter_name).collect();
    let units = if num_letters == 0 {
        rng.gen_range(1..=3)
    } else {
        rng.gen_range(0..=1)
    };
    leaves.extend(std::iter::repeat_n(Obj::Unit, units));
    leaves.shuffle(&mut rng);
    random_tree(&mut rng, leaves)
}

/// An object with one to `max_occurrences` letter occurrences drawn from
/// `letters` names, repeats allowed, and occasionally a unit.
pub(crate) fn random_object(rng: &mut ChaCha8Rng, letters: usize, max_occurrences: usize) -> Obj {
    let n = rng.gen_range(1..=max_occurrences.max(1));
    let mut leaves: Vec<Obj> = (0..n)
        .map(|_| letter_name(rng.gen_range(0..letters.max(1))))
        .collect();
    if rng.gen_bool(0.25) {
        leaves.push(Obj::Unit);
        leaves.shuffle(rng);
    }
    random_tree(rng, leaves)
}

/// Primitives whose domain is `dom`, identity excluded.
fn primitives_from(dom: &Obj, kind: Kind, grow: bool) -> Vec<MorTerm> {
    let mut out = Vec::new();
    if grow {
        out.push(MorTerm::SigmaInv(dom.clone()));
        out.push(MorTerm::DeltaInv(dom.clone()));
        if kind.has_diagonal() {
            out.push(MorTerm::W(dom.clone()));
        }
    }
    if kind.has_terminal() {
        out.push(MorTerm::K(dom.clone()));
    }
    if let Obj::Prod(a, b) = dom {
        let (a, b) = ((**a).clone(), (**b).clone());
        if a == Obj::Unit {
            out.push(MorTerm::Sigma(b.clone()));
        }
        if b == Obj::Unit {
            out.push(MorTerm::Delta(a.clone()));
        }
        if let Obj::Prod(y, z) = &b {
            out.push(MorTerm::BAssoc(a.clone(), (**y).clone(), (**z).clone()));
        }
        if let Obj::Prod(x, y) = &a {
            out.push(MorTerm::BAssocInv((**x).clone(), (**y).clone(), b.clone()));
        }
        if kind.has_symmetry() {
            out.push(MorTerm::C(a, b));
        }
    }
    out
}

/// A random well-typed term of `kind` with domain `dom` and at most `size`
/// primitive leaves.
pub(crate) fn term_from(rng: &mut ChaCha8Rng, kind: Kind, dom: &Obj, size: usize) -> MorTerm {
    let grow = dom.size() <= 6;
    let prims = primitives_from(dom, kind, grow);
    if size <= 1 {
        return match prims.choose(rng) {
            Some(p) if rng.gen_bool(0.9) => p.clone(),
            _ => MorTerm::Id(dom.clone()),
        };
    }
    let choice = rng.gen_range(0..10);
    match (choice, dom) {
        (0..=4, _) => {
            let s1 = rng.gen_range(1..size);
            let f = term_from(rng, kind, dom, s1);
            let mid = infer_type_any(&f).expect("well-typed").cod;
            let g = term_from(rng, kind, &mid, size - s1);
            MorTerm::comp(g, f)
        }
        (5..=7, Obj::Prod(a, b)) => {
            let s1 = rng.gen_range(1..size);
            MorTerm::tensor(
                term_from(rng, kind, a, s1),
                term_from(rng, kind, b, size - s1),
            )
        }
        _ => term_from(rng, kind, dom, 1),
    }
}

/// A random term admitted by `kind` with at most `size` primitive leaves;
/// deterministic in `seed`. Without a hint the domain has at most three
/// letter occurrences over three letters.
pub fn random_term(kind: Kind, size: usize, seed: u64, dom_hint: Option<&Obj>) -> MorTerm {
    let mut rng = rng(seed);
    let dom = match dom_hint {
        Some(d) => d.clone(),
        None => random_object(&mut rng, 3, 3),
    };
    term_from(&mut rng, kind, &dom, size.max(1))
}

/// A random term of the standard cartesian language with domain `dom`.
pub fn random_std_term(size: usize, seed: u64, dom: &Obj) -> StdTerm {
    let mut rng = rng(seed);
    std_from(&mut rng, dom, size.max(1))
}

fn std_from(rng: &mut ChaCha8Rng, dom: &Obj, size: usize) -> StdTerm {
    let mut atoms = vec![StdTerm::Id(dom.clone()), StdTerm::Terminal(dom.clone())];
    if let Obj::Prod(a, b) = dom {
        atoms.push(StdTerm::Proj1((**a).clone(), (**b).clone()));
        atoms.push(StdTerm::Proj2((**a).clone(), (**b).clone()));
    }
    if size <= 1 {
        return atoms.choose(rng).expect("nonempty").clone();
    }
    let s1 = rng.gen_range(1..size);
    if rng.gen_bool(0.5) && dom.size() <= 6 {
        StdTerm::pair(std_from(rng, dom, s1), std_from(rng, dom, size - s1))
    } else {
        let f = std_from(rng, dom, s1);
        let mid = crate::cart_std::std_type(&f).expect("well-typed").cod;
        StdTerm::comp(std_from(rng, &mid, size - s1), f)
    }
}

/// Applies up to `steps` random single rewrites of `kind` to `f`, never
/// exceeding `max_size` primitive leaves.
pub fn random_walk(f: &MorTerm, kind: Kind, steps: usize, max_size: usize, seed: u64) -> MorTerm {
    let mut rng = rng(seed);
    let rules = rules_for(kind);
    let mut cur = Node::from_term(f);
    for _ in 0..steps {
        let options: Vec<Node> = neighbors(&cur, &rules)
            .into_iter()
            .map(|(n, _)| n)
            .filter(|n| n.size() <= max_size)
            .collect();
        match options.choose(&mut rng) {
            Some(n) => cur = n.clone(),
            None => break,
        }
    }
    cur.to_term()
}

/// Both sides of a random instance of the named equation, with metavariables
/// replaced by random terms of the rule's kind, or cartesian terms for the
/// interchange law. `None` for an unknown name.
pub fn random_rule_instance(name: &str, seed: u64) -> Option<(MorTerm, MorTerm)> {
    let mut rng = rng(seed);
    let small = |rng: &mut ChaCha8Rng| random_object(rng, 3, 2);
    if name == INTERCHANGE {
        let (a, b) = (small(&mut rng), small(&mut rng));
        let f1 = term_from(&mut rng, Kind::Cart, &a, 2);
        let f2 = term_from(&mut rng, Kind::Cart, &b, 2);
        let c1 = infer_type_any(&f1).expect("well-typed").cod;
        let c2 = infer_type_any(&f2).expect("well-typed").cod;
        let g1 = term_from(&mut rng, Kind::Cart, &c1, 2);
        let g2 = term_from(&mut rng, Kind::Cart, &c2, 2);
        let lhs = MorTerm::tensor(
            MorTerm::comp(g1.clone(), f1.clone()),
            MorTerm::comp(g2.clone(), f2.clone()),
        );
        let rhs = MorTerm::comp(MorTerm::tensor(g1, g2), MorTerm::tensor(f1, f2));
        return Some((lhs, rhs));
    }
    let rule = rule_table().iter().find(|r| r.name == name)?;
    let mut b = rule.fresh_binding();
    for (i, (dom, cod)) in rule.metas.iter().enumerate() {
        let ObjPat::Var(v) = dom else {
            unreachable!("metavariable domains are variables")
        };
        if b.objs[*v].is_none() {
            b.objs[*v] = Some(small(&mut rng));
        }
        let d = b.objs[*v].clone().expect("bound");
        let size = rng.gen_range(1..=3);
        let f = Node::from_term(&term_from(&mut rng, rule.kind, &d, size));
        assert!(
            b.match_obj(cod, &f.cod()),
            "metavariable codomains are fresh variables"
        );
        b.metas[i] = Some(f);
    }
    for v in 0..rule.obj_vars.len() {
        if b.objs[v].is_none() {
            b.objs[v] = Some(small(&mut rng));
        }
    }
    let side = |p: &Pat| b.build(p).to_term();
    Some((side(&rule.lhs), side(&rule.rhs)))
}
