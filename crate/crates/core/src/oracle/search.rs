//! One-step rewriting and the bidirectional breadth-first closure search.

use rustc_hash::FxHashMap;

use crate::syntax::{MorTerm, Obj};
use crate::typing::Kind;

use super::node::Node;
use super::rules::{rule_table, Direction, Pat, Rule, INTERCHANGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Label {
    pub(crate) rule: &'static str,
    pub(crate) dir: Direction,
}

pub(crate) fn rules_for(kind: Kind) -> Vec<&'static Rule> {
    rule_table().iter().filter(|r| r.kind.le(kind)).collect()
}

/// Every term reachable from `node` by one rule application at one
/// position.
///
/// A metavariable standing directly in a composite pattern matches any
/// nonempty run of consecutive factors. A rule side that is a bare identity
/// matches only explicit identities (a whole term or a tensor operand), the
/// two ends of the whole term, and every point of a composite whose object
/// has no letters. Identities elsewhere are not expanded, which keeps the
/// branching finite.
pub(crate) fn neighbors(node: &Node, rules: &[&'static Rule]) -> Vec<(Node, Label)> {
    let mut out = Vec::new();
    expand(node, rules, true, &mut out);
    out
}

fn items(n: &Node) -> &[Node] {
    match n {
        Node::Id(_) => &[],
        other => other.elements(),
    }
}

fn seq_of(part: &[Node], empty: impl FnOnce() -> Obj) -> Node {
    match part.last() {
        None => Node::Id(empty()),
        Some(last) => Node::from_elements(part.to_vec(), &last.dom()),
    }
}

fn expand(node: &Node, rules: &[&'static Rule], top: bool, out: &mut Vec<(Node, Label)>) {
    let site = node.elements();
    let dom = node.dom();
    let splice = |start: usize, len: usize, repl: Vec<Node>| -> Node {
        let mut v = Vec::with_capacity(site.len() + repl.len());
        v.extend_from_slice(&site[..start]);
        v.extend(repl);
        v.extend_from_slice(&site[start + len..]);
        Node::from_elements(v, &dom)
    };
    let mut unit_points: Option<Vec<(usize, Obj)>> = None;
    let mut matches = Vec::new();

    for &rule in rules {
        for &dir in rule.directions() {
            let (src, tgt) = rule.sides(dir);
            let label = Label {
                rule: rule.name,
                dir,
            };
            if let Pat::Id(op) = src {
                if let Node::Id(o) = node {
                    let mut b = rule.fresh_binding();
                    if b.match_obj(op, o) {
                        out.push((b.build(tgt), label));
                    }
                    continue;
                }
                let points = unit_points.get_or_insert_with(|| {
                    (0..=site.len())
                        .map(|k| {
                            (
                                k,
                                if k == 0 {
                                    site[0].cod()
                                } else {
                                    site[k - 1].dom()
                                },
                            )
                        })
                        .filter(|(k, o)| {
                            (top && (*k == 0 || *k == site.len())) || o.occurrence_count() == 0
                        })
                        .collect()
                });
                for (k, o) in points.iter() {
                    let mut b = rule.fresh_binding();
                    if b.match_obj(op, o) {
                        out.push((splice(*k, 0, vec![b.build(tgt)]), label));
                    }
                }
                continue;
            }
            let ps = src.elements();
            for start in 0..site.len() {
                if !ps[0].could_match(&site[start]) {
                    continue;
                }
                rule.fresh_binding()
                    .match_prefix(rule, ps, &site[start..], 0, &mut matches);
                for (len, b) in matches.drain(..) {
                    out.push((splice(start, len, vec![b.build(tgt)]), label));
                }
            }
        }
    }

    let split = Label {
        rule: INTERCHANGE,
        dir: Direction::LeftToRight,
    };
    let merge = Label {
        rule: INTERCHANGE,
        dir: Direction::RightToLeft,
    };
    for (i, e) in site.iter().enumerate() {
        let Node::Tensor(x, y) = e else { continue };
        let (xs, ys) = (items(x), items(y));
        for ix in 0..=xs.len() {
            for iy in 0..=ys.len() {
                let ((g1, f1), (g2, f2)) = (xs.split_at(ix), ys.split_at(iy));
                if (g1.is_empty() && g2.is_empty()) || (f1.is_empty() && f2.is_empty()) {
                    continue;
                }
                let upper = Node::tensor(seq_of(g1, || x.cod()), seq_of(g2, || y.cod()));
                let lower = Node::tensor(seq_of(f1, || x.dom()), seq_of(f2, || y.dom()));
                out.push((splice(i, 1, vec![upper, lower]), split));
            }
        }
    }
    for i in 0..site.len().saturating_sub(1) {
        if let (Node::Tensor(g1, g2), Node::Tensor(f1, f2)) = (&site[i], &site[i + 1]) {
            let join = |g: &Node, f: &Node| {
                let mut v = items(g).to_vec();
                v.extend_from_slice(items(f));
                Node::from_elements(v, &f.dom())
            };
            out.push((
                splice(i, 2, vec![Node::tensor(join(g1, f1), join(g2, f2))]),
                merge,
            ));
        }
    }

    for (i, e) in site.iter().enumerate() {
        let Node::Tensor(a, b) = e else { continue };
        let mut inner = Vec::new();
        expand(a, rules, false, &mut inner);
        for (a2, label) in inner.drain(..) {
            out.push((splice(i, 1, vec![Node::tensor(a2, (**b).clone())]), label));
        }
        expand(b, rules, false, &mut inner);
        for (b2, label) in inner {
            out.push((splice(i, 1, vec![Node::tensor((**a).clone(), b2)]), label));
        }
    }
}

/// The rule cancelling the written-order pair `x . y` when `x` undoes `y`.
fn cancelling_rule(x: &Node, y: &Node) -> Option<&'static str> {
    let (Node::Prim(x), Node::Prim(y)) = (x, y) else {
        return None;
    };
    use MorTerm::*;
    match (&x.term, &y.term) {
        (Sigma(a), SigmaInv(b)) if a == b => Some("sigma-iso"),
        (SigmaInv(a), Sigma(b)) if a == b => Some("sigma-iso'"),
        (Delta(a), DeltaInv(b)) if a == b => Some("delta-iso"),
        (DeltaInv(a), Delta(b)) if a == b => Some("delta-iso'"),
        (BAssoc(a, b, c), BAssocInv(d, e, f)) if (a, b, c) == (d, e, f) => Some("b-iso"),
        (BAssocInv(a, b, c), BAssoc(d, e, f)) if (a, b, c) == (d, e, f) => Some("b-iso'"),
        (C(a, b), C(c, d)) if a == d && b == c => Some("c-iso"),
        _ => None,
    }
}

/// `node` with every adjacent inverse pair cancelled, innermost first.
/// Cancellation is confluent, so this is the common end of every chain of
/// cancelling rewrites from `node`.
fn cancelled(node: &Node, admitted: &dyn Fn(&str) -> bool) -> Node {
    if !has_inverse_pair(node, admitted) {
        return node.clone();
    }
    match node {
        Node::Prim(_) | Node::Id(_) => node.clone(),
        Node::Tensor(a, b) => Node::tensor(cancelled(a, admitted), cancelled(b, admitted)),
        Node::Seq(items) => {
            let mut stack: Vec<Node> = Vec::with_capacity(items.len());
            for e in items.iter() {
                let e = cancelled(e, admitted);
                for e in e.elements().iter().filter(|e| !matches!(e, Node::Id(_))) {
                    match stack.last().and_then(|top| cancelling_rule(top, e)) {
                        Some(rule) if admitted(rule) => {
                            stack.pop();
                        }
                        _ => stack.push(e.clone()),
                    }
                }
            }
            Node::from_elements(stack, &node.dom())
        }
    }
}

fn has_inverse_pair(node: &Node, admitted: &dyn Fn(&str) -> bool) -> bool {
    match node {
        Node::Prim(_) | Node::Id(_) => false,
        Node::Tensor(a, b) => has_inverse_pair(a, admitted) || has_inverse_pair(b, admitted),
        Node::Seq(items) => {
            items
                .windows(2)
                .any(|w| cancelling_rule(&w[0], &w[1]).is_some_and(admitted))
                || items.iter().any(|e| has_inverse_pair(e, admitted))
        }
    }
}

/// Single cancelling rewrites leading from `node` to its cancelled form.
fn cancellation_steps(node: &Node, rules: &[&'static Rule]) -> Vec<(Node, Label)> {
    let admitted = admitted_by(rules);
    let target = cancelled(node, &admitted);
    let mut cur = node.clone();
    let mut steps = Vec::new();
    while cur != target {
        let (next, label) = neighbors(&cur, rules)
            .into_iter()
            .find(|(n, l)| {
                l.dir == Direction::LeftToRight
                    && CANCELLING.contains(&l.rule)
                    && n.size() < cur.size()
                    && cancelled(n, &admitted) == target
            })
            .expect("an uncancelled pair has a cancelling rewrite");
        steps.push((next.clone(), label));
        cur = next;
    }
    steps
}

const CANCELLING: [&str; 7] = [
    "sigma-iso",
    "sigma-iso'",
    "delta-iso",
    "delta-iso'",
    "b-iso",
    "b-iso'",
    "c-iso",
];

fn admitted_by<'a>(rules: &'a [&'static Rule]) -> impl Fn(&str) -> bool + 'a {
    move |name| rules.iter().any(|r| r.name == name)
}

/// Bounds on one closure search. Depth counts rewrite steps on both sides
/// together; states counts distinct terms seen on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: usize,
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 12,
            max_states: 200_000,
        }
    }
}

/// One rewrite of a witness: the rule, the direction it was used in, and
/// the term after the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub rule: &'static str,
    pub direction: Direction,
    pub term: MorTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    ProvedEqual {
        witness: Vec<WitnessStep>,
    },
    /// No meeting point within the budget. `closure_complete` is set when
    /// everything reachable from both sides was enumerated. The implemented
    /// rewrites insert identities only at restricted points, so this refutes
    /// a rewrite chain of that restricted shape, not equality itself.
    BudgetExhausted {
        explored: usize,
        closure_complete: bool,
    },
}

impl OracleVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, OracleVerdict::ProvedEqual { .. })
    }
}

struct Side {
    nodes: Vec<Node>,
    parent: Vec<Option<(usize, Label)>>,
    index: FxHashMap<Node, usize>,
    /// Cancelled form of each node, to the first node having it.
    keys: FxHashMap<Node, usize>,
    frontier: Vec<usize>,
    depth: usize,
}

impl Side {
    fn new(root: Node, key: Node) -> Side {
        let mut index = FxHashMap::default();
        index.insert(root.clone(), 0);
        let mut keys = FxHashMap::default();
        keys.insert(key, 0);
        Side {
            nodes: vec![root],
            parent: vec![None],
            index,
            keys,
            frontier: vec![0],
            depth: 0,
        }
    }

    /// Nodes from the root to `i`, each with the label of the edge that
    /// reached it.
    fn chain(&self, mut i: usize) -> Vec<(usize, Option<Label>)> {
        let mut out = Vec::new();
        while let Some((p, label)) = self.parent[i] {
            out.push((i, Some(label)));
            i = p;
        }
        out.push((i, None));
        out.reverse();
        out
    }
}

/// The two sides meet when a node of one has the same cancelled form as a
/// node of the other; the witness then passes through that form by
/// explicit cancelling rewrites.
pub(crate) fn search(f: Node, g: Node, rules: &[&'static Rule], budget: Budget) -> OracleVerdict {
    let admitted = admitted_by(rules);
    let key = |n: &Node| cancelled(n, &admitted);
    let (kf, kg) = (key(&f), key(&g));
    if kf == kg {
        let sides = [Side::new(f, kf), Side::new(g, kg)];
        return OracleVerdict::ProvedEqual {
            witness: witness(&sides, 0, 0, rules),
        };
    }
    let mut sides = [Side::new(f, kf), Side::new(g, kg)];
    loop {
        let explored = sides[0].nodes.len() + sides[1].nodes.len();
        if sides[0].depth + sides[1].depth >= budget.max_depth {
            return OracleVerdict::BudgetExhausted {
                explored,
                closure_complete: false,
            };
        }
        let s = match (sides[0].frontier.len(), sides[1].frontier.len()) {
            (0, 0) => {
                return OracleVerdict::BudgetExhausted {
                    explored,
                    closure_complete: true,
                }
            }
            (0, _) => 1,
            (a, b) if b > 0 && b < a => 1,
            _ => 0,
        };
        let (mine, other) = {
            let (a, b) = sides.split_at_mut(1);
            if s == 0 {
                (&mut a[0], &b[0])
            } else {
                (&mut b[0], &a[0])
            }
        };
        let frontier = std::mem::take(&mut mine.frontier);
        let mut next = Vec::new();
        for idx in frontier {
            let current = mine.nodes[idx].clone();
            for (n, label) in neighbors(&current, rules) {
                if mine.index.contains_key(&n) {
                    continue;
                }
                let new_idx = mine.nodes.len();
                let k = key(&n);
                mine.nodes.push(n.clone());
                mine.parent.push(Some((idx, label)));
                mine.index.insert(n, new_idx);
                if let Some(&meet) = other.keys.get(&k) {
                    let (fi, gi) = if s == 0 {
                        (new_idx, meet)
                    } else {
                        (meet, new_idx)
                    };
                    return OracleVerdict::ProvedEqual {
                        witness: witness(&sides, fi, gi, rules),
                    };
                }
                mine.keys.entry(k).or_insert(new_idx);
                next.push(new_idx);
                if mine.nodes.len() + other.nodes.len() >= budget.max_states {
                    let explored = mine.nodes.len() + other.nodes.len();
                    return OracleVerdict::BudgetExhausted {
                        explored,
                        closure_complete: false,
                    };
                }
            }
        }
        mine.frontier = next;
        mine.depth += 1;
    }
}

fn witness(sides: &[Side; 2], fi: usize, gi: usize, rules: &[&'static Rule]) -> Vec<WitnessStep> {
    let step = |n: &Node, label: Label, flip: bool| WitnessStep {
        rule: label.rule,
        direction: if flip { label.dir.flip() } else { label.dir },
        term: n.to_term(),
    };
    let mut steps = Vec::new();
    for (i, label) in sides[0].chain(fi).into_iter().skip(1) {
        steps.push(step(&sides[0].nodes[i], label.expect("non-root"), false));
    }
    for (n, label) in cancellation_steps(&sides[0].nodes[fi], rules) {
        steps.push(step(&n, label, false));
    }
    // Everything on the g side runs from g outward; walk it back.
    let down = cancellation_steps(&sides[1].nodes[gi], rules);
    for i in (0..down.len()).rev() {
        let to = if i == 0 {
            &sides[1].nodes[gi]
        } else {
            &down[i - 1].0
        };
        steps.push(step(to, down[i].1, true));
    }
    let chain = sides[1].chain(gi);
    for w in chain.windows(2).rev() {
        let (to, _) = w[0];
        steps.push(step(&sides[1].nodes[to], w[1].1.expect("non-root"), true));
    }
    steps
}

/// Whether `to` is one rewrite away from `from` by `rule`, in either
/// direction of the edge.
pub(crate) fn is_step(from: &Node, to: &Node, rule: &str, rules: &[&'static Rule]) -> bool {
    let hit = |a: &Node, b: &Node| {
        neighbors(a, rules)
            .iter()
            .any(|(n, l)| l.rule == rule && n == b)
    };
    hit(from, to) || hit(to, from)
}
