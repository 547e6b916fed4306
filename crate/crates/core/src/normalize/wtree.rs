//! Factorization of diagonal composites `p -> F(p,...,p)` into associators
//! after left-forking diagonals, driven by the fork tree of the composite.

use std::fmt;

use super::product::{product_decompose, Frame, ProductTerm};
use super::NormalizeError;
use crate::syntax::{Letter, MorTerm, Obj};

#[derive(Debug, Clone, Copy)]
enum Node {
    Leaf,
    Fork { left: usize, right: usize },
}

/// Binary tree whose leaves are the codomain occurrences of a composite of
/// atomic diagonals; every fork records when it was introduced.
#[derive(Debug, Clone)]
pub struct WTree {
    letter: Letter,
    nodes: Vec<Node>,
    root: usize,
    /// Forking nodes in the order their diagonals are applied.
    order: Vec<usize>,
}

impl WTree {
    /// Builds the tree of the composite that forks leaf `forks[0]`, then
    /// `forks[1]`, ... (zero-based leaf positions at the time of each fork).
    pub fn from_forks(letter: Letter, forks: &[usize]) -> Result<WTree, NormalizeError> {
        let mut t = WTree {
            letter,
            nodes: vec![Node::Leaf],
            root: 0,
            order: Vec::new(),
        };
        let mut frontier = vec![0usize];
        for (step, &i) in forks.iter().enumerate() {
            let Some(&leaf) = frontier.get(i) else {
                return Err(NormalizeError::Shape(format!(
                    "fork {step} targets leaf {i} of {}",
                    frontier.len()
                )));
            };
            let (l, r) = (t.nodes.len(), t.nodes.len() + 1);
            t.nodes.push(Node::Leaf);
            t.nodes.push(Node::Leaf);
            t.nodes[leaf] = Node::Fork { left: l, right: r };
            t.order.push(leaf);
            frontier.splice(i..=i, [l, r]);
        }
        Ok(t)
    }

    pub fn letter(&self) -> &Letter {
        &self.letter
    }

    /// Leaf positions forked, in application order.
    pub fn forks(&self) -> Vec<usize> {
        let mut frontier = vec![self.root];
        let mut out = Vec::with_capacity(self.order.len());
        for &n in &self.order {
            let i = frontier
                .iter()
                .position(|&x| x == n)
                .expect("fork node reached before its fork time");
            let Node::Fork { left, right } = self.nodes[n] else {
                unreachable!()
            };
            frontier.splice(i..=i, [left, right]);
            out.push(i);
        }
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.order.len() + 1
    }

    /// Sum over forks of the number of right edges between the fork and the root.
    pub fn n_f(&self) -> usize {
        fn go(t: &WTree, n: usize, k: usize) -> usize {
            match t.nodes[n] {
                Node::Leaf => 0,
                Node::Fork { left, right } => k + go(t, left, k) + go(t, right, k + 1),
            }
        }
        go(self, self.root, 0)
    }

    pub fn object(&self) -> Obj {
        self.subtree_obj(self.root)
    }

    fn subtree_obj(&self, n: usize) -> Obj {
        match self.nodes[n] {
            Node::Leaf => Obj::Atom(self.letter.clone()),
            Node::Fork { left, right } => {
                Obj::prod(self.subtree_obj(left), self.subtree_obj(right))
            }
        }
    }

    /// The diagonal composite as atomic products, written order.
    pub fn products(&self) -> Vec<ProductTerm> {
        products_for_forks(&self.letter, &self.forks())
    }

    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            out.push(n);
            if let Node::Fork { left, right } = self.nodes[n] {
                stack.push(right);
                stack.push(left);
            }
        }
        out
    }

    fn frame_of(&self, target: usize) -> Frame {
        fn go(t: &WTree, n: usize, target: usize) -> Option<Frame> {
            if n == target {
                return Some(Frame::Hole);
            }
            let Node::Fork { left, right } = t.nodes[n] else {
                return None;
            };
            if let Some(f) = go(t, left, target) {
                return Some(Frame::left(f, t.subtree_obj(right)));
            }
            go(t, right, target).map(|f| Frame::right(t.subtree_obj(left), f))
        }
        go(self, self.root, target).expect("node in tree")
    }

    /// One reduction round: picks the first fork in preorder whose right
    /// child forks, schedules that child right after it, and rotates
    /// `X*(Y1*Y2)` into `(X*Y1)*Y2`. Returns the associator mapping the new
    /// codomain back to the old one, or `None` when `n_f` is already zero.
    fn reduce_once(&mut self) -> Option<ProductTerm> {
        let lambda = self.preorder().into_iter().find(|&n| match self.nodes[n] {
            Node::Fork { right, .. } => matches!(self.nodes[right], Node::Fork { .. }),
            Node::Leaf => false,
        })?;
        let Node::Fork { left: x, right: mu } = self.nodes[lambda] else {
            unreachable!()
        };
        let Node::Fork {
            left: y1,
            right: y2,
        } = self.nodes[mu]
        else {
            unreachable!()
        };
        let b = MorTerm::BAssocInv(
            self.subtree_obj(x),
            self.subtree_obj(y1),
            self.subtree_obj(y2),
        );

        let from = self.order.iter().position(|&n| n == mu).expect("scheduled");
        self.order.remove(from);
        let at = self
            .order
            .iter()
            .position(|&n| n == lambda)
            .expect("scheduled");
        self.order.insert(at + 1, mu);

        self.nodes[mu] = Node::Fork { left: x, right: y1 };
        self.nodes[lambda] = Node::Fork {
            left: mu,
            right: y2,
        };
        Some(ProductTerm::new(self.frame_of(lambda), b))
    }
}

impl fmt::Display for WTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &WTree, n: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t.nodes[n] {
                Node::Leaf => f.write_str("."),
                Node::Fork { left, right } => {
                    let time = t.order.iter().position(|&x| x == n).expect("scheduled") + 1;
                    write!(f, "{time}[")?;
                    go(t, left, f)?;
                    f.write_str(" ")?;
                    go(t, right, f)?;
                    f.write_str("]")
                }
            }
        }
        go(self, self.root, f)
    }
}

/// The atomic diagonal products forking the given leaf positions, starting
/// from a single `letter`; written order.
pub fn products_for_forks(letter: &Letter, forks: &[usize]) -> Vec<ProductTerm> {
    let p = Obj::Atom(letter.clone());
    let mut cur = p.clone();
    let mut out = Vec::with_capacity(forks.len());
    for &i in forks {
        let prod = ProductTerm::at_occurrence(&cur, i, MorTerm::W(p.clone()));
        cur = prod.cod();
        out.push(prod);
    }
    out.reverse();
    out
}

/// Reads a composite of atomic diagonals on one letter as its fork sequence.
pub fn forks_of_term(f: &MorTerm) -> Result<(Letter, Vec<usize>), NormalizeError> {
    let seq = product_decompose(f)?;
    let mut letter: Option<Letter> = None;
    let mut forks = Vec::new();
    for prod in seq.iter().rev() {
        match prod {
            ProductTerm::Identity(a) => {
                if a.as_letter().is_none() {
                    return Err(NormalizeError::Shape(format!(
                        "expected a composite from a letter, found id({a})"
                    )));
                }
            }
            ProductTerm::Factor {
                frame,
                factor: MorTerm::W(Obj::Atom(l)),
            } => {
                if letter.get_or_insert_with(|| l.clone()) != l {
                    return Err(NormalizeError::Shape(
                        "diagonals on more than one letter".into(),
                    ));
                }
                forks.push(frame.offset());
            }
            other => {
                return Err(NormalizeError::Shape(format!(
                    "`{other}` is not an atomic diagonal product"
                )))
            }
        }
    }
    let ty = crate::typing::infer_type_any(f)?;
    let Some(l) = ty.dom.as_letter().cloned() else {
        return Err(NormalizeError::Shape(format!(
            "domain {} is not a letter",
            ty.dom
        )));
    };
    if ty.cod.letter_occurrences().iter().any(|x| *x != l)
        || ty.cod.occurrence_count() != forks.len() + 1
    {
        return Err(NormalizeError::Shape(format!(
            "codomain {} is not built from {l} alone",
            ty.cod
        )));
    }
    Ok((l, forks))
}

#[derive(Debug, Clone)]
pub struct DiagonalRound {
    pub n_f: usize,
    pub tree: String,
}

#[derive(Debug, Clone)]
pub struct DiagonalFactorization {
    /// Associator products, written order.
    pub b_part: Vec<ProductTerm>,
    /// Left atomic diagonal products, written order.
    pub w_part: Vec<ProductTerm>,
    /// Tree and measure before each round and after the last.
    pub rounds: Vec<DiagonalRound>,
}

/// Factors the composite with the given forks into associators after a
/// left comb of diagonals.
pub fn diagonal_factor_forks(
    letter: &Letter,
    forks: &[usize],
) -> Result<DiagonalFactorization, NormalizeError> {
    let mut tree = WTree::from_forks(letter.clone(), forks)?;
    let mut rounds = vec![DiagonalRound {
        n_f: tree.n_f(),
        tree: tree.to_string(),
    }];
    let mut b_part = Vec::new();
    while let Some(b) = tree.reduce_once() {
        b_part.push(b);
        rounds.push(DiagonalRound {
            n_f: tree.n_f(),
            tree: tree.to_string(),
        });
    }
    debug_assert!(tree.forks().iter().all(|&i| i == 0));
    Ok(DiagonalFactorization {
        b_part,
        w_part: tree.products(),
        rounds,
    })
}

pub fn diagonal_factor(f: &MorTerm) -> Result<DiagonalFactorization, NormalizeError> {
    let (letter, forks) = forks_of_term(f)?;
    diagonal_factor_forks(&letter, &forks)
}

/// Fork sequence of a composite `p -> p^i * p^j` (left-associated powers;
/// just `p^i` when `j == 0`).
pub fn split_forks(i: usize, j: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if j > 0 {
        out.push(0);
        out.extend(std::iter::repeat_n(1, j - 1));
    }
    out.extend(std::iter::repeat_n(0, i.saturating_sub(1)));
    out
}

#[derive(Debug, Clone)]
pub struct DiagonalSplit {
    /// Associator products, written order.
    pub v: Vec<ProductTerm>,
    /// The diagonal forking the `i`-th leaf of `p^i * p^(k-i-1)`.
    pub mid: ProductTerm,
    /// Atomic diagonal products `p -> p^i * p^(k-i-1)`, written order.
    pub u: Vec<ProductTerm>,
    /// Fork sequence of `mid . u`.
    pub forks: Vec<usize>,
}

/// Rewrites the composite with `forks` (k leaves) as `v . mid . u` where
/// `mid` forks the `i`-th leaf (one-based, `1 <= i <= k-1`).
pub fn diagonal_split_forks(
    letter: &Letter,
    forks: &[usize],
    i: usize,
) -> Result<DiagonalSplit, NormalizeError> {
    let k = forks.len() + 1;
    if i == 0 || i >= k {
        return Err(NormalizeError::IndexOutOfRange {
            index: i,
            leaves: k,
        });
    }
    let mut mid_forks = split_forks(i, k - i - 1);
    let u = products_for_forks(letter, &mid_forks);
    mid_forks.push(i - 1);
    let mid = products_for_forks(letter, &mid_forks).remove(0);
    let h1 = diagonal_factor_forks(letter, forks)?.b_part;
    let h2 = diagonal_factor_forks(letter, &mid_forks)?.b_part;
    let mut v = h1;
    v.extend(
        h2.iter()
            .rev()
            .map(|b| b.inverse().expect("associators invert")),
    );
    Ok(DiagonalSplit {
        v,
        mid,
        u,
        forks: mid_forks,
    })
}

pub fn diagonal_split(f: &MorTerm, i: usize) -> Result<DiagonalSplit, NormalizeError> {
    let (letter, forks) = forks_of_term(f)?;
    diagonal_split_forks(&letter, &forks, i)
}
