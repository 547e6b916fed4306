//! The equations of each kind as rewrite schemas over [`Node`]s, with
//! first-order matching of object and morphism metavariables.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::parse::{primitive, primitive_arity, ParseError, Parser};
use crate::syntax::{MorTerm, Obj};
use crate::typing::Kind;

use super::node::Node;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "->",
            Direction::RightToLeft => "<-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ObjPat {
    Var(usize),
    Unit,
    Prod(Box<ObjPat>, Box<ObjPat>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Pat {
    /// A non-identity primitive, given by a template whose parameters are
    /// replaced.
    Prim(MorTerm, Vec<ObjPat>),
    Id(ObjPat),
    Meta(usize),
    Tensor(Box<Pat>, Box<Pat>),
    /// Written order, at least two elements.
    Seq(Vec<Pat>),
}

impl Pat {
    /// The pattern as a written-order list of element patterns.
    pub(crate) fn elements(&self) -> &[Pat] {
        match self {
            Pat::Seq(items) => items,
            other => std::slice::from_ref(other),
        }
    }
}

/// An equation `lhs = rhs` between patterns.
#[derive(Debug, Clone)]
pub struct Rule {
    pub name: &'static str,
    /// Least kind whose axioms include the equation.
    pub kind: Kind,
    pub(crate) lhs: Pat,
    pub(crate) rhs: Pat,
    /// Domain and codomain pattern of each morphism metavariable.
    pub(crate) metas: Vec<(ObjPat, ObjPat)>,
    pub(crate) obj_vars: Vec<String>,
    /// Whether the rule may be used right to left only.
    pub(crate) one_way: bool,
}

impl Rule {
    pub fn directions(&self) -> &'static [Direction] {
        if self.one_way {
            &[Direction::RightToLeft]
        } else {
            &[Direction::LeftToRight, Direction::RightToLeft]
        }
    }

    pub(crate) fn sides(&self, dir: Direction) -> (&Pat, &Pat) {
        match dir {
            Direction::LeftToRight => (&self.lhs, &self.rhs),
            Direction::RightToLeft => (&self.rhs, &self.lhs),
        }
    }

    pub(crate) fn fresh_binding(&self) -> Binding {
        Binding {
            objs: vec![None; self.obj_vars.len()],
            metas: vec![None; self.metas.len()],
        }
    }
}

impl Pat {
    /// Cheap shape test: false only when `n` cannot match.
    pub(crate) fn could_match(&self, n: &Node) -> bool {
        match (self, n) {
            (Pat::Prim(tpl, _), Node::Prim(m)) => {
                std::mem::discriminant(tpl) == std::mem::discriminant(&m.term)
            }
            (Pat::Meta(_), _)
            | (Pat::Id(_), Node::Id(_))
            | (Pat::Tensor(..), Node::Tensor(..))
            | (Pat::Seq(_), Node::Seq(_)) => true,
            _ => false,
        }
    }
}

/// The name of the interchange law `(g1 . f1) * (g2 . f2) = (g1 * g2) . (f1 * f2)`,
/// which the search applies directly instead of through a schema.
pub const INTERCHANGE: &str = "interchange";

#[derive(Debug, Clone)]
pub(crate) struct Binding {
    pub(crate) objs: Vec<Option<Obj>>,
    pub(crate) metas: Vec<Option<Node>>,
}

impl Binding {
    pub(crate) fn match_obj(&mut self, p: &ObjPat, o: &Obj) -> bool {
        match (p, o) {
            (ObjPat::Unit, Obj::Unit) => true,
            (ObjPat::Prod(a, b), Obj::Prod(x, y)) => self.match_obj(a, x) && self.match_obj(b, y),
            (ObjPat::Var(v), _) => match &self.objs[*v] {
                Some(bound) => bound == o,
                None => {
                    self.objs[*v] = Some(o.clone());
                    true
                }
            },
            _ => false,
        }
    }

    pub(crate) fn match_node(&mut self, rule: &Rule, p: &Pat, n: &Node) -> bool {
        match (p, n) {
            (Pat::Prim(tpl, params), Node::Prim(m)) => {
                std::mem::discriminant(tpl) == std::mem::discriminant(&m.term)
                    && params
                        .iter()
                        .zip(m.term.primitive_params())
                        .all(|(pp, o)| self.match_obj(pp, o))
            }
            (Pat::Id(op), Node::Id(o)) => self.match_obj(op, o),
            (Pat::Meta(i), _) => {
                if let Some(bound) = &self.metas[*i] {
                    return bound == n;
                }
                let (dom, cod) = &rule.metas[*i];
                if !(self.match_obj(dom, &n.dom()) && self.match_obj(cod, &n.cod())) {
                    return false;
                }
                self.metas[*i] = Some(n.clone());
                true
            }
            (Pat::Tensor(pa, pb), Node::Tensor(a, b)) => {
                self.match_node(rule, pa, a) && self.match_node(rule, pb, b)
            }
            (Pat::Seq(ps), Node::Seq(items)) => self.match_run(rule, ps, items),
            _ => false,
        }
    }

    pub(crate) fn match_run(&mut self, rule: &Rule, ps: &[Pat], items: &[Node]) -> bool {
        ps.len() == items.len()
            && ps
                .iter()
                .zip(items)
                .all(|(p, n)| self.match_node(rule, p, n))
    }

    /// Every way of matching `ps` against a prefix of `items`, as the prefix
    /// length and the extended binding. An unbound metavariable standing
    /// directly in `ps` may absorb a run of one or more elements.
    pub(crate) fn match_prefix(
        &self,
        rule: &Rule,
        ps: &[Pat],
        items: &[Node],
        consumed: usize,
        out: &mut Vec<(usize, Binding)>,
    ) {
        let Some((first, rest)) = ps.split_first() else {
            out.push((consumed, self.clone()));
            return;
        };
        if items.len() < ps.len() {
            return;
        }
        match first {
            Pat::Meta(i) if self.metas[*i].is_none() => {
                let (dom, cod) = &rule.metas[*i];
                for len in 1..=items.len() - rest.len() {
                    let run = &items[..len];
                    let mut b = self.clone();
                    if !(b.match_obj(dom, &run[len - 1].dom()) && b.match_obj(cod, &run[0].cod())) {
                        continue;
                    }
                    // Elements of a canonical list already form a canonical run.
                    b.metas[*i] = Some(if len == 1 {
                        run[0].clone()
                    } else {
                        Node::Seq(run.into())
                    });
                    b.match_prefix(rule, rest, &items[len..], consumed + len, out);
                }
            }
            p => {
                if !p.could_match(&items[0]) {
                    return;
                }
                let mut b = self.clone();
                if b.match_node(rule, p, &items[0]) {
                    b.match_prefix(rule, rest, &items[1..], consumed + 1, out);
                }
            }
        }
    }

    pub(crate) fn obj(&self, p: &ObjPat) -> Obj {
        match p {
            ObjPat::Unit => Obj::Unit,
            ObjPat::Var(v) => self.objs[*v]
                .clone()
                .expect("object variable bound by the source side"),
            ObjPat::Prod(a, b) => Obj::prod(self.obj(a), self.obj(b)),
        }
    }

    pub(crate) fn build(&self, p: &Pat) -> Node {
        match p {
            Pat::Prim(tpl, params) => {
                let objs: Vec<Obj> = params.iter().map(|q| self.obj(q)).collect();
                Node::prim(tpl.with_params(&objs))
            }
            Pat::Id(op) => Node::Id(self.obj(op)),
            Pat::Meta(i) => self.metas[*i]
                .clone()
                .expect("metavariable bound by the source side"),
            Pat::Tensor(a, b) => Node::tensor(self.build(a), self.build(b)),
            Pat::Seq(ps) => {
                let elems: Vec<Node> = ps.iter().map(|q| self.build(q)).collect();
                let dom = elems.last().expect("nonempty").dom();
                Node::from_elements(elems, &dom)
            }
        }
    }
}

struct PatParser {
    obj_vars: Vec<String>,
    meta_names: Vec<String>,
}

impl PatParser {
    fn obj_var(&mut self, name: &str) -> usize {
        match self.obj_vars.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.obj_vars.push(name.to_string());
                self.obj_vars.len() - 1
            }
        }
    }

    fn obj_pat(&mut self, o: &Obj) -> ObjPat {
        match o {
            Obj::Unit => ObjPat::Unit,
            Obj::Atom(l) => ObjPat::Var(self.obj_var(l.name())),
            Obj::Prod(a, b) => ObjPat::Prod(Box::new(self.obj_pat(a)), Box::new(self.obj_pat(b))),
        }
    }

    fn pattern(&mut self, text: &str) -> Result<Pat, ParseError> {
        let mut p = Parser::new(text)?;
        let pat = self.term(&mut p)?;
        p.finish()?;
        Ok(pat)
    }

    fn term(&mut self, p: &mut Parser) -> Result<Pat, ParseError> {
        let comp = |after: Pat, before: Pat| {
            let mut items = after.elements().to_vec();
            items.extend(before.elements().iter().cloned());
            Pat::Seq(items)
        };
        let tensor = |a: Pat, b: Pat| Pat::Tensor(Box::new(a), Box::new(b));
        p.composite(&mut |p| self.atom(p), Some(&tensor), &comp)
    }

    fn atom(&mut self, p: &mut Parser) -> Result<Pat, ParseError> {
        if let Some(group) = p.paren_group(&mut |p| self.term(p)) {
            return group;
        }
        let (at, name) = p.ident("a primitive, a metavariable or `(`")?;
        if let Some(i) = self.meta_names.iter().position(|m| *m == name) {
            return Ok(Pat::Meta(i));
        }
        let Some(arity) = primitive_arity(&name) else {
            return Err(ParseError {
                position: at,
                message: format!("unknown pattern atom `{name}`"),
            });
        };
        let args = p.obj_args(&name, arity)?;
        let params: Vec<ObjPat> = args.iter().map(|o| self.obj_pat(o)).collect();
        if name == "id" {
            return Ok(Pat::Id(params.into_iter().next().expect("arity 1")));
        }
        let tpl = primitive(&name, vec![Obj::Unit; arity]).expect("known primitive");
        Ok(Pat::Prim(tpl, params))
    }
}

/// Compiles an equation written in the term syntax. Object letters are
/// object variables; `metas` declares morphism metavariables as
/// `"f: a -> b"`.
fn compile(
    name: &'static str,
    kind: Kind,
    lhs: &str,
    rhs: &str,
    metas: &[&str],
    one_way: bool,
) -> Rule {
    let mut pp = PatParser {
        obj_vars: Vec::new(),
        meta_names: Vec::new(),
    };
    let mut meta_types = Vec::new();
    for decl in metas {
        let (m, ty) = decl.split_once(':').expect("metavariable declaration");
        let (dom, cod) = ty.split_once("->").expect("metavariable type");
        pp.meta_names.push(m.trim().to_string());
        let dom = crate::parse::parse_obj(dom.trim()).expect("object pattern");
        let cod = crate::parse::parse_obj(cod.trim()).expect("object pattern");
        meta_types.push((pp.obj_pat(&dom), pp.obj_pat(&cod)));
    }
    let lhs = pp
        .pattern(lhs)
        .unwrap_or_else(|e| panic!("rule {name}: {e}"));
    let rhs = pp
        .pattern(rhs)
        .unwrap_or_else(|e| panic!("rule {name}: {e}"));
    Rule {
        name,
        kind,
        lhs,
        rhs,
        metas: meta_types,
        obj_vars: pp.obj_vars,
        one_way,
    }
}

fn all_rules() -> Vec<Rule> {
    use Kind::*;
    let r = |name, kind, lhs, rhs, metas: &[&str]| compile(name, kind, lhs, rhs, metas, false);
    vec![
        r("tensor-id", Mon, "id(a) * id(b)", "id(a*b)", &[]),
        r("sigma-nat", Mon, "f . sigma(a)", "sigma(b) . (id(I) * f)", &["f: a -> b"]),
        r("delta-nat", Mon, "f . delta(a)", "delta(b) . (f * id(I))", &["f: a -> b"]),
        r("sigma-iso", Mon, "sigma(a) . sigma_i(a)", "id(a)", &[]),
        r("sigma-iso'", Mon, "sigma_i(a) . sigma(a)", "id(I*a)", &[]),
        r("delta-iso", Mon, "delta(a) . delta_i(a)", "id(a)", &[]),
        r("delta-iso'", Mon, "delta_i(a) . delta(a)", "id(a*I)", &[]),
        r("sigma-delta", Mon, "sigma(I)", "delta(I)", &[]),
        r(
            "b-nat",
            Mon,
            "((f * g) * h) . b(a,b,c)",
            "b(d,e,x) . (f * (g * h))",
            &["f: a -> d", "g: b -> e", "h: c -> x"],
        ),
        r("b-iso", Mon, "b(a,b,c) . b_i(a,b,c)", "id((a*b)*c)", &[]),
        r("b-iso'", Mon, "b_i(a,b,c) . b(a,b,c)", "id(a*(b*c))", &[]),
        r("triangle", Mon, "(delta(a) * id(b)) . b(a,I,b)", "id(a) * sigma(b)", &[]),
        r("pentagon", Mon, "b(a*b,c,d) . b(a,b,c*d)", "(b(a,b,c) * id(d)) . b(a,b*c,d) . (id(a) * b(b,c,d))", &[]),
        r("c-nat", SyMon, "(g * f) . c(a,b)", "c(c,d) . (f * g)", &["f: a -> c", "g: b -> d"]),
        r("c-iso", SyMon, "c(b,a) . c(a,b)", "id(a*b)", &[]),
        r("sigma-delta-c", SyMon, "sigma(a) . c(a,I)", "delta(a)", &[]),
        r("hexagon", SyMon, "b(c,a,b) . c(a*b,c) . b(a,b,c)", "(c(a,c) * id(b)) . b(a,c,b) . (id(a) * c(b,c))", &[]),
        r("w-nat", Rel, "(f * f) . w(a)", "w(b) . f", &["f: a -> b"]),
        r("sigma-w", Rel, "sigma(I) . w(I)", "id(I)", &[]),
        r("b-w", Rel, "b(a,a,a) . (id(a) * w(a)) . w(a)", "(w(a) * id(a)) . w(a)", &[]),
        r("c-w", Rel, "c(a,a) . w(a)", "w(a)", &[]),
        r(
            "middle-w",
            Rel,
            "b(a,a,b*b) . (id(a) * (b_i(a,b,b) . (c(b,a) * id(b)) . b(b,a,b))) . b_i(a,b,a*b) . w(a*b)",
            "w(a) * w(b)",
            &[],
        ),
        compile("k-nat", Aff, "k(a)", "k(b) . f", &["f: a -> b"], true),
        r("k-unit", Aff, "k(I)", "id(I)", &[]),
        r("sigma-k-w", Cart, "sigma(a) . (k(a) * id(a)) . w(a)", "id(a)", &[]),
        r("delta-k-w", Cart, "delta(a) . (id(a) * k(a)) . w(a)", "id(a)", &[]),
    ]
}

/// Every schema, in a fixed order. The interchange law is not among them.
pub fn rule_table() -> &'static [Rule] {
    static TABLE: OnceLock<Vec<Rule>> = OnceLock::new();
    TABLE.get_or_init(all_rules)
}

/// Names of all equations available at `kind`, the interchange law first.
pub fn rule_names(kind: Kind) -> Vec<&'static str> {
    let mut names = vec![INTERCHANGE];
    names.extend(
        rule_table()
            .iter()
            .filter(|r| r.kind.le(kind))
            .map(|r| r.name),
    );
    names
}

/// Least kind of each rule name, the interchange law included.
pub fn rule_kinds() -> HashMap<&'static str, Kind> {
    let mut m: HashMap<_, _> = rule_table().iter().map(|r| (r.name, r.kind)).collect();
    m.insert(INTERCHANGE, Kind::Mon);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    #[test]
    fn table_compiles_with_bound_targets() {
        for rule in rule_table() {
            for &dir in rule.directions() {
                let (src, tgt) = rule.sides(dir);
                let mut bound = vec![false; rule.obj_vars.len()];
                let mut metas = vec![false; rule.metas.len()];
                mark(src, &mut bound, &mut metas);
                for (i, (d, c)) in rule.metas.iter().enumerate() {
                    if metas[i] {
                        mark_obj(d, &mut bound);
                        mark_obj(c, &mut bound);
                    }
                }
                let mut tb = vec![false; rule.obj_vars.len()];
                let mut tm = vec![false; rule.metas.len()];
                mark(tgt, &mut tb, &mut tm);
                assert!(
                    tb.iter().zip(&bound).all(|(t, b)| !t || *b),
                    "{} {dir}",
                    rule.name
                );
                assert!(
                    tm.iter().zip(&metas).all(|(t, b)| !t || *b),
                    "{} {dir}",
                    rule.name
                );
            }
        }
    }

    fn mark_obj(p: &ObjPat, bound: &mut [bool]) {
        match p {
            ObjPat::Var(v) => bound[*v] = true,
            ObjPat::Unit => {}
            ObjPat::Prod(a, b) => {
                mark_obj(a, bound);
                mark_obj(b, bound);
            }
        }
    }

    fn mark(p: &Pat, bound: &mut [bool], metas: &mut [bool]) {
        match p {
            Pat::Prim(_, ps) => ps.iter().for_each(|q| mark_obj(q, bound)),
            Pat::Id(q) => mark_obj(q, bound),
            Pat::Meta(i) => metas[*i] = true,
            Pat::Tensor(a, b) => {
                mark(a, bound, metas);
                mark(b, bound, metas);
            }
            Pat::Seq(ps) => ps.iter().for_each(|q| mark(q, bound, metas)),
        }
    }

    #[test]
    fn matching_binds_metavariables() {
        let rule = rule_table().iter().find(|r| r.name == "w-nat").unwrap();
        let n = Node::from_term(&parse_term("(c(p,q) * c(p,q)) . w(p*q)").unwrap());
        let mut b = rule.fresh_binding();
        assert!(b.match_run(rule, rule.lhs.elements(), n.elements()));
        assert_eq!(
            b.build(&rule.rhs).to_term().to_string(),
            "(w((q*p)) . c(p,q))"
        );
        let n = Node::from_term(
            &parse_term("(c(p,q) * id(q*p)) . (id(p*q) * c(p,q)) . w(p*q)").unwrap(),
        );
        let mut b = rule.fresh_binding();
        assert!(!b.match_run(rule, rule.lhs.elements(), &n.elements()[1..]));
    }

    #[test]
    fn kinds_are_nested() {
        assert!(rule_names(Kind::Mon).len() < rule_names(Kind::SyMon).len());
        assert!(!rule_names(Kind::Rel).contains(&"k-nat"));
        assert!(!rule_names(Kind::Aff).contains(&"w-nat"));
        assert_eq!(rule_names(Kind::Cart).len(), rule_table().len() + 1);
    }
}
