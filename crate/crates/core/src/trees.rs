//! Planted planar trees with leaves.
//!
//! A tree is either the unit tree `U` (a single leaf edge) or an inner vertex
//! with an ordered list of subtrees. The implicit root sits below the top
//! vertex, so the top vertex has level 1. Text encoding: a leaf is `*` and an
//! inner vertex is `(` children `)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("parse error at byte {0}: {1}")]
    Parse(usize, String),
    #[error("graft arity mismatch: tree has {leaves} leaves, got {subs} subtrees")]
    ArityMismatch { leaves: usize, subs: usize },
    #[error("leaf index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("edge {0} is not an inner edge")]
    NotInnerEdge(String),
    #[error("address {0} does not name an inner vertex")]
    NoSuchVertex(String),
    #[error("the star of {0} touches the root edge")]
    RootInStar(String),
    #[error("the star of {0} touches a leaf edge")]
    LeafInStar(String),
    #[error("enumeration needs an inner-vertex bound when arity 0 or 1 is allowed")]
    TruncationRequired,
    #[error("even-level enumeration needs t >= 1")]
    InvalidStage,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(Vec<Tree>),
}

/// 1-based child path from the top vertex; the empty path is the top vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexAddr(pub Vec<usize>);

/// An edge, named by its endpoint farther from the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub upper: VertexAddr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerVertex {
    pub addr: VertexAddr,
    pub arity: usize,
    pub level: usize,
}

/// Any vertex of the underlying simplicial tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    Root,
    Inner(VertexAddr),
    Leaf(VertexAddr),
}

/// A contraction `T -> T/K`, determined by the contracted inner edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeMorphism {
    pub domain: Tree,
    pub contracted: BTreeSet<EdgeRef>,
}

/// Where grafting sends inner vertices: `base[k]` is the new path-order
/// index of inner vertex `k` of the base tree, `subs[i][k]` likewise for the
/// `i`-th grafted tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraftMap {
    pub base: Vec<usize>,
    pub subs: Vec<Vec<usize>>,
}

/// A grafting expression of corollas and the unit tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorollaExpr {
    Unit,
    /// `C_n(e_1, ..., e_n)`.
    Graft(usize, Vec<CorollaExpr>),
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

impl VertexAddr {
    pub fn top() -> Self {
        VertexAddr(vec![])
    }

    pub fn child(&self, j: usize) -> Self {
        let mut p = self.0.clone();
        p.push(j);
        VertexAddr(p)
    }

    pub fn parent(&self) -> Option<Self> {
        let mut p = self.0.clone();
        p.pop().map(|_| VertexAddr(p))
    }

    /// Level of the addressed vertex; the top vertex has level 1.
    pub fn level(&self) -> usize {
        self.0.len() + 1
    }
}

impl EdgeRef {
    pub fn new(upper: Vec<usize>) -> Self {
        EdgeRef {
            upper: VertexAddr(upper),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "*"),
            Tree::Node(cs) => {
                write!(f, "(")?;
                for c in cs {
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Tree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, TreeError> {
        let bytes: Vec<(usize, u8)> = s
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        let mut pos = 0;
        let t = parse_at(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(TreeError::Parse(bytes[pos].0, "trailing input".into()));
        }
        Ok(t)
    }
}

fn parse_at(b: &[(usize, u8)], pos: &mut usize) -> Result<Tree, TreeError> {
    let end = b.last().map(|x| x.0 + 1).unwrap_or(0);
    match b.get(*pos) {
        Some((_, b'*')) => {
            *pos += 1;
            Ok(Tree::Leaf)
        }
        Some((_, b'(')) => {
            *pos += 1;
            let mut cs = Vec::new();
            loop {
                match b.get(*pos) {
                    Some((_, b')')) => {
                        *pos += 1;
                        return Ok(Tree::Node(cs));
                    }
                    Some(_) => cs.push(parse_at(b, pos)?),
                    None => return Err(TreeError::Parse(end, "unclosed '('".into())),
                }
            }
        }
        Some((i, c)) => Err(TreeError::Parse(*i, format!("unexpected {:?}", *c as char))),
        None => Err(TreeError::Parse(end, "empty tree".into())),
    }
}

impl Tree {
    /// The unit tree `U`.
    pub fn unit() -> Tree {
        Tree::Leaf
    }

    /// The corolla `C_n`.
    pub fn corolla(n: usize) -> Tree {
        Tree::Node(vec![Tree::Leaf; n])
    }

    pub fn parse(s: &str) -> Result<Tree, TreeError> {
        s.parse()
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(cs) => cs.iter().map(Tree::n_leaves).sum(),
        }
    }

    pub fn n_inner(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(cs) => 1 + cs.iter().map(Tree::n_inner).sum::<usize>(),
        }
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            Tree::Leaf => None,
            Tree::Node(cs) => Some(cs.len()),
        }
    }

    /// Inner vertices in path order (preorder).
    pub fn inner_vertices(&self) -> Vec<InnerVertex> {
        fn go(t: &Tree, path: &mut Vec<usize>, out: &mut Vec<InnerVertex>) {
            if let Tree::Node(cs) = t {
                out.push(InnerVertex {
                    addr: VertexAddr(path.clone()),
                    arity: cs.len(),
                    level: path.len() + 1,
                });
                for (j, c) in cs.iter().enumerate() {
                    path.push(j + 1);
                    go(c, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Arities of inner vertices in path order.
    pub fn inner_arities(&self) -> Vec<usize> {
        self.inner_vertices().iter().map(|v| v.arity).collect()
    }

    /// Leaf addresses in path order; for `U` the single leaf has the empty path.
    pub fn leaf_addrs(&self) -> Vec<VertexAddr> {
        fn go(t: &Tree, path: &mut Vec<usize>, out: &mut Vec<VertexAddr>) {
            match t {
                Tree::Leaf => out.push(VertexAddr(path.clone())),
                Tree::Node(cs) => {
                    for (j, c) in cs.iter().enumerate() {
                        path.push(j + 1);
                        go(c, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// All vertices in path order, starting with the root.
    pub fn path_order(&self) -> Vec<Vertex> {
        fn go(t: &Tree, path: &mut Vec<usize>, out: &mut Vec<Vertex>) {
            match t {
                Tree::Leaf => out.push(Vertex::Leaf(VertexAddr(path.clone()))),
                Tree::Node(cs) => {
                    out.push(Vertex::Inner(VertexAddr(path.clone())));
                    for (j, c) in cs.iter().enumerate() {
                        path.push(j + 1);
                        go(c, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = vec![Vertex::Root];
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Inner edges, named by their upper endpoints, in path order.
    pub fn inner_edges(&self) -> Vec<EdgeRef> {
        self.inner_vertices()
            .into_iter()
            .filter(|v| !v.addr.0.is_empty())
            .map(|v| EdgeRef { upper: v.addr })
            .collect()
    }

    pub fn subtree(&self, addr: &VertexAddr) -> Option<&Tree> {
        let mut t = self;
        for &j in &addr.0 {
            match t {
                Tree::Node(cs) if j >= 1 && j <= cs.len() => t = &cs[j - 1],
                _ => return None,
            }
        }
        Some(t)
    }

    /// Path-order index of the inner vertex at `addr`.
    pub fn inner_index(&self, addr: &VertexAddr) -> Option<usize> {
        self.inner_vertices().iter().position(|v| &v.addr == addr)
    }

    /// `T(T_1, ..., T_n)`: grafts `subs[i]` onto the `i`-th leaf in path order.
    pub fn graft(&self, subs: &[Tree]) -> Result<Tree, TreeError> {
        self.graft_tracked(subs).map(|(t, _)| t)
    }

    pub fn graft_tracked(&self, subs: &[Tree]) -> Result<(Tree, GraftMap), TreeError> {
        let n = self.n_leaves();
        if subs.len() != n {
            return Err(TreeError::ArityMismatch {
                leaves: n,
                subs: subs.len(),
            });
        }
        struct St<'a> {
            subs: &'a [Tree],
            leaf: usize,
            counter: usize,
            base: Vec<usize>,
            sub_maps: Vec<Vec<usize>>,
        }
        fn go(t: &Tree, st: &mut St) -> Tree {
            match t {
                Tree::Leaf => {
                    let k = st.leaf;
                    st.leaf += 1;
                    let s = &st.subs[k];
                    let m = s.n_inner();
                    st.sub_maps[k] = (st.counter..st.counter + m).collect();
                    st.counter += m;
                    s.clone()
                }
                Tree::Node(cs) => {
                    st.base.push(st.counter);
                    st.counter += 1;
                    Tree::Node(cs.iter().map(|c| go(c, st)).collect())
                }
            }
        }
        let mut st = St {
            subs,
            leaf: 0,
            counter: 0,
            base: vec![],
            sub_maps: vec![vec![]; n],
        };
        let t = go(self, &mut st);
        Ok((
            t,
            GraftMap {
                base: st.base,
                subs: st.sub_maps,
            },
        ))
    }

    /// `T ∘_i S`: grafts `s` onto leaf `i` (1-based) and `U` elsewhere.
    pub fn circ_i(&self, i: usize, s: &Tree) -> Result<Tree, TreeError> {
        self.circ_i_tracked(i, s).map(|(t, _)| t)
    }

    pub fn circ_i_tracked(&self, i: usize, s: &Tree) -> Result<(Tree, GraftMap), TreeError> {
        let n = self.n_leaves();
        if i == 0 || i > n {
            return Err(TreeError::IndexOutOfRange(i, n));
        }
        let mut subs = vec![Tree::Leaf; n];
        subs[i - 1] = s.clone();
        self.graft_tracked(&subs)
    }

    fn check_inner_edge(&self, e: &EdgeRef) -> Result<(), TreeError> {
        match self.subtree(&e.upper) {
            Some(Tree::Node(_)) if !e.upper.0.is_empty() => Ok(()),
            _ => Err(TreeError::NotInnerEdge(e.upper.to_string())),
        }
    }

    pub fn contract(&self, e: &EdgeRef) -> Result<Tree, TreeError> {
        self.contract_set(std::slice::from_ref(e))
    }

    pub fn contract_set(&self, k: &[EdgeRef]) -> Result<Tree, TreeError> {
        self.contract_set_tracked(k).map(|(t, _)| t)
    }

    /// Contracts the connected components of `k`; the map sends each old
    /// inner vertex index to the index of the vertex it collapses into.
    pub fn contract_set_tracked(&self, k: &[EdgeRef]) -> Result<(Tree, Vec<usize>), TreeError> {
        for e in k {
            self.check_inner_edge(e)?;
        }
        let set: BTreeSet<&VertexAddr> = k.iter().map(|e| &e.upper).collect();
        struct St<'a> {
            set: BTreeSet<&'a VertexAddr>,
            counter: usize,
            owner: Vec<usize>,
        }
        fn go(t: &[Tree], path: &mut Vec<usize>, root: usize, st: &mut St, out: &mut Vec<Tree>) {
            for (j, c) in t.iter().enumerate() {
                path.push(j + 1);
                match c {
                    Tree::Leaf => out.push(Tree::Leaf),
                    Tree::Node(cs) => {
                        let id = st.counter;
                        st.counter += 1;
                        if st.set.contains(&VertexAddr(path.clone())) {
                            st.owner.push(root);
                            go(cs, path, root, st, out);
                        } else {
                            st.owner.push(id);
                            let mut inner = Vec::new();
                            go(cs, path, id, st, &mut inner);
                            out.push(Tree::Node(inner));
                        }
                    }
                }
                path.pop();
            }
        }
        let mut st = St {
            set,
            counter: 0,
            owner: vec![],
        };
        let t = match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(cs) => {
                st.counter = 1;
                st.owner.push(0);
                let mut out = Vec::new();
                go(cs, &mut Vec::new(), 0, &mut st, &mut out);
                Tree::Node(out)
            }
        };
        let roots: BTreeSet<usize> = st.owner.iter().copied().collect();
        let rank: HashMap<usize, usize> = roots.iter().enumerate().map(|(r, &o)| (o, r)).collect();
        let map = st.owner.iter().map(|o| rank[o]).collect();
        Ok((t, map))
    }

    /// Contracts every inner edge.
    pub fn collapse(&self) -> Tree {
        match self {
            Tree::Leaf => Tree::Leaf,
            t => Tree::corolla(t.n_leaves()),
        }
    }

    fn inner_at(&self, v: &VertexAddr) -> Result<&Vec<Tree>, TreeError> {
        match self.subtree(v) {
            Some(Tree::Node(cs)) => Ok(cs),
            _ => Err(TreeError::NoSuchVertex(v.to_string())),
        }
    }

    /// The edges containing `v`: its outgoing edge, then its incoming edges.
    pub fn star(&self, v: &VertexAddr) -> Result<Vec<EdgeRef>, TreeError> {
        let cs = self.inner_at(v)?;
        let mut out = vec![EdgeRef { upper: v.clone() }];
        out.extend((1..=cs.len()).map(|j| EdgeRef { upper: v.child(j) }));
        Ok(out)
    }

    /// The vertices adjacent to `v` in path order; `None` stands for the root.
    pub fn link(&self, v: &VertexAddr) -> Result<Vec<Option<VertexAddr>>, TreeError> {
        let cs = self.inner_at(v)?;
        let mut out = vec![v.parent()];
        out.extend((1..=cs.len()).map(|j| Some(v.child(j))));
        Ok(out)
    }

    fn check_star_inner(&self, v: &VertexAddr) -> Result<(&Vec<Tree>, VertexAddr), TreeError> {
        let cs = self.inner_at(v)?;
        let parent = v
            .parent()
            .ok_or_else(|| TreeError::RootInStar(v.to_string()))?;
        if cs.iter().any(|c| c.is_unit()) {
            return Err(TreeError::LeafInStar(v.to_string()));
        }
        Ok((cs, parent))
    }

    /// The extended star of `v`: rooted at the outgoing edge of the parent
    /// `u` of `v`, with the incoming edges of the link (other than `{u, v}`)
    /// as leaves.
    pub fn extended_star(&self, v: &VertexAddr) -> Result<Tree, TreeError> {
        let (cs, parent) = self.check_star_inner(v)?;
        let pcs = self.inner_at(&parent)?;
        let slot = *v.0.last().expect("non-top vertex");
        let middle = Tree::Node(
            cs.iter()
                .map(|c| Tree::corolla(c.arity().expect("inner child")))
                .collect(),
        );
        let mut top = vec![Tree::Leaf; pcs.len()];
        top[slot - 1] = middle;
        Ok(Tree::Node(top))
    }

    /// `r_v = (Σ_{w ∈ Lk(v)} val w) - 1`.
    pub fn r_of(&self, v: &VertexAddr) -> Result<usize, TreeError> {
        let (cs, parent) = self.check_star_inner(v)?;
        let pval = self.inner_at(&parent)?.len();
        let s: usize = pval + cs.iter().map(|c| c.arity().unwrap_or(0)).sum::<usize>();
        Ok(s - 1)
    }

    /// Writes the tree as a grafting of corollas and `U`.
    pub fn decompose_into_corollas(&self) -> CorollaExpr {
        match self {
            Tree::Leaf => CorollaExpr::Unit,
            Tree::Node(cs) => CorollaExpr::Graft(
                cs.len(),
                cs.iter().map(Tree::decompose_into_corollas).collect(),
            ),
        }
    }

    /// Multi-line picture: one vertex per line, indented by level.
    pub fn render_ascii(&self) -> String {
        fn go(t: &Tree, prefix: &str, last: bool, out: &mut String) {
            let branch = if last { "`-- " } else { "|-- " };
            match t {
                Tree::Leaf => out.push_str(&format!("{prefix}{branch}leaf\n")),
                Tree::Node(cs) => {
                    out.push_str(&format!("{prefix}{branch}o ({})\n", cs.len()));
                    let next = format!("{prefix}{}", if last { "    " } else { "|   " });
                    for (k, c) in cs.iter().enumerate() {
                        go(c, &next, k + 1 == cs.len(), out);
                    }
                }
            }
        }
        let mut out = String::from("root\n");
        go(self, "", true, &mut out);
        out
    }
}

impl CorollaExpr {
    pub fn eval(&self) -> Tree {
        match self {
            CorollaExpr::Unit => Tree::Leaf,
            CorollaExpr::Graft(n, es) => {
                let subs: Vec<Tree> = es.iter().map(CorollaExpr::eval).collect();
                Tree::corolla(*n)
                    .graft(&subs)
                    .expect("corolla arity matches")
            }
        }
    }
}

impl fmt::Display for CorollaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorollaExpr::Unit => write!(f, "U"),
            CorollaExpr::Graft(n, es) => {
                write!(f, "C{n}")?;
                if !es.is_empty() && es.iter().any(|e| *e != CorollaExpr::Unit) {
                    write!(f, "(")?;
                    for (k, e) in es.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{e}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl TreeMorphism {
    pub fn new(
        domain: Tree,
        contracted: impl IntoIterator<Item = EdgeRef>,
    ) -> Result<Self, TreeError> {
        let contracted: BTreeSet<EdgeRef> = contracted.into_iter().collect();
        for e in &contracted {
            domain.check_inner_edge(e)?;
        }
        Ok(TreeMorphism { domain, contracted })
    }

    pub fn codomain(&self) -> Tree {
        let k: Vec<EdgeRef> = self.contracted.iter().cloned().collect();
        self.domain
            .contract_set(&k)
            .expect("validated at construction")
    }
}

fn sort_canonical(mut v: Vec<Tree>) -> Vec<Tree> {
    let mut keyed: Vec<(usize, String, Tree)> = v
        .drain(..)
        .map(|t| (t.n_inner(), t.to_string(), t))
        .collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.dedup_by(|a, b| a.1 == b.1);
    keyed.into_iter().map(|(_, _, t)| t).collect()
}

/// Ordered lists of subtrees splitting `(leaves, budget)` among `arity` slots,
/// each slot drawn from `pieces(l, b)`.
fn forests<F>(arity: usize, leaves: usize, budget: usize, pieces: &mut F) -> Vec<Vec<Tree>>
where
    F: FnMut(usize, usize) -> Vec<Tree>,
{
    if arity == 0 {
        return if leaves == 0 && budget == 0 {
            vec![vec![]]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for l in 0..=leaves {
        for b in 0..=budget {
            let firsts = pieces(l, b);
            if firsts.is_empty() {
                continue;
            }
            let rests = forests(arity - 1, leaves - l, budget - b, pieces);
            for f in &firsts {
                for r in &rests {
                    let mut v = Vec::with_capacity(arity);
                    v.push(f.clone());
                    v.extend(r.iter().cloned());
                    out.push(v);
                }
            }
        }
    }
    out
}

/// All trees with `n` leaves, inner arities in `support` and at most
/// `max_inner` inner vertices, ordered by inner-vertex count then encoding.
pub fn enumerate_trees(
    n: usize,
    support: &BTreeSet<usize>,
    max_inner: Option<usize>,
) -> Result<Vec<Tree>, TreeError> {
    let reduced = !support.contains(&0) && !support.contains(&1);
    let bound = match (max_inner, reduced) {
        (Some(m), true) => m.min(n.saturating_sub(1)),
        (Some(m), false) => m,
        (None, true) => n.saturating_sub(1),
        (None, false) => return Err(TreeError::TruncationRequired),
    };
    let mut memo: HashMap<(usize, usize), Vec<Tree>> = HashMap::new();
    let mut out = Vec::new();
    for k in 0..=bound {
        out.extend(exact_trees(n, k, support, &mut memo));
    }
    Ok(sort_canonical(out))
}

/// Trees with exactly `leaves` leaves and `inner` inner vertices.
fn exact_trees(
    leaves: usize,
    inner: usize,
    support: &BTreeSet<usize>,
    memo: &mut HashMap<(usize, usize), Vec<Tree>>,
) -> Vec<Tree> {
    if let Some(v) = memo.get(&(leaves, inner)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if inner == 0 {
        if leaves == 1 {
            out.push(Tree::Leaf);
        }
    } else {
        for &a in support {
            // Each child uses at least one leaf or one inner vertex, except arity-0 chains.
            if a > leaves + inner - 1 && !support.contains(&0) {
                continue;
            }
            let mut pieces = |l: usize, b: usize| exact_trees(l, b, support, memo);
            for cs in forests(a, leaves, inner - 1, &mut pieces) {
                out.push(Tree::Node(cs));
            }
        }
    }
    memo.insert((leaves, inner), out.clone());
    out
}

/// All trees with `n` leaves, every leaf at even level, exactly `t` even inner
/// vertices, even-level arities in `even_support` and odd-level arities in
/// `odd_support`. Requires `t >= 1`.
pub fn enumerate_even_level_trees(
    n: usize,
    t: usize,
    even_support: &BTreeSet<usize>,
    odd_support: &BTreeSet<usize>,
) -> Result<Vec<Tree>, TreeError> {
    if t == 0 {
        return Err(TreeError::InvalidStage);
    }
    Ok(even_level_trees(n, t, even_support, odd_support))
}

/// As [`enumerate_even_level_trees`] but also allowing `t = 0`, whose only
/// candidate is the corolla `C_n`.
pub fn even_level_trees(
    n: usize,
    t: usize,
    even_support: &BTreeSet<usize>,
    odd_support: &BTreeSet<usize>,
) -> Vec<Tree> {
    let mut g = EvenOddGen {
        even: even_support,
        odd: odd_support,
        odd_memo: HashMap::new(),
        even_memo: HashMap::new(),
    };
    sort_canonical(g.odd(n, t))
}

struct EvenOddGen<'a> {
    even: &'a BTreeSet<usize>,
    odd: &'a BTreeSet<usize>,
    odd_memo: HashMap<(usize, usize), Vec<Tree>>,
    even_memo: HashMap<(usize, usize), Vec<Tree>>,
}

impl EvenOddGen<'_> {
    /// Subtrees rooted at an odd-level inner vertex.
    fn odd(&mut self, leaves: usize, evens: usize) -> Vec<Tree> {
        if let Some(v) = self.odd_memo.get(&(leaves, evens)) {
            return v.clone();
        }
        let mut out = Vec::new();
        let arities: Vec<usize> = self
            .odd
            .iter()
            .copied()
            .filter(|&a| a <= leaves + evens)
            .collect();
        for a in arities {
            let mut pieces = |l: usize, b: usize| -> Vec<Tree> {
                match (l, b) {
                    (1, 0) => vec![Tree::Leaf],
                    (_, 0) => vec![],
                    _ => self.even(l, b),
                }
            };
            for cs in forests(a, leaves, evens, &mut pieces) {
                out.push(Tree::Node(cs));
            }
        }
        self.odd_memo.insert((leaves, evens), out.clone());
        out
    }

    /// Subtrees rooted at an even-level inner vertex; `evens` counts it.
    fn even(&mut self, leaves: usize, evens: usize) -> Vec<Tree> {
        if evens == 0 {
            return vec![];
        }
        if let Some(v) = self.even_memo.get(&(leaves, evens)) {
            return v.clone();
        }
        let mut out = Vec::new();
        let arities: Vec<usize> = self.even.iter().copied().collect();
        for a in arities {
            let mut pieces = |l: usize, b: usize| self.odd(l, b);
            for cs in forests(a, leaves, evens - 1, &mut pieces) {
                out.push(Tree::Node(cs));
            }
        }
        self.even_memo.insert((leaves, evens), out.clone());
        out
    }
}

/// Vertex parity classes of a tree: `(even inner, odd inner)` path-order indices.
pub fn parity_classes(t: &Tree) -> (Vec<usize>, Vec<usize>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (k, v) in t.inner_vertices().iter().enumerate() {
        if v.level % 2 == 0 {
            even.push(k);
        } else {
            odd.push(k);
        }
    }
    (even, odd)
}

/// Whether every leaf sits at an even level.
pub fn leaves_even(t: &Tree) -> bool {
    match t {
        Tree::Leaf => false,
        _ => t.leaf_addrs().iter().all(|a| a.level() % 2 == 0),
    }
}

/// Number of trees per leaf count, for summaries.
pub fn count_by_leaves(ts: &[Tree]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for t in ts {
        *m.entry(t.n_leaves()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn sup(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    const FIG2: &str = "(*((***)()*))";

    #[test]
    fn encoding_roundtrip() {
        for s in ["*", "()", "(**)", FIG2] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!(Tree::parse("(*").is_err());
        assert!(Tree::parse("**").is_err());
    }

    #[test]
    fn path_order_of_a_mixed_tree() {
        // Vertices named by their subscripts in the picture.
        let names: Vec<(Vertex, &str)> = vec![
            (Vertex::Root, "v0"),
            (Vertex::Inner(VertexAddr(vec![])), "v1"),
            (Vertex::Leaf(VertexAddr(vec![1])), "v2"),
            (Vertex::Inner(VertexAddr(vec![2])), "v3"),
            (Vertex::Inner(VertexAddr(vec![2, 1])), "v4"),
            (Vertex::Inner(VertexAddr(vec![2, 2])), "v5"),
            (Vertex::Leaf(VertexAddr(vec![2, 3])), "v6"),
            (Vertex::Leaf(VertexAddr(vec![2, 1, 1])), "v7"),
            (Vertex::Leaf(VertexAddr(vec![2, 1, 2])), "v8"),
            (Vertex::Leaf(VertexAddr(vec![2, 1, 3])), "v9"),
        ];
        let order: Vec<&str> = t(FIG2)
            .path_order()
            .into_iter()
            .map(|v| names.iter().find(|(w, _)| *w == v).unwrap().1)
            .collect();
        assert_eq!(
            order,
            ["v0", "v1", "v2", "v3", "v4", "v7", "v8", "v9", "v5", "v6"]
        );
    }

    #[test]
    fn levels_and_arities_of_a_mixed_tree() {
        let tr = t(FIG2);
        assert_eq!(tr.n_leaves(), 5);
        assert_eq!(tr.inner_arities(), vec![2, 3, 3, 0]);
        let c = Tree::corolla;
        let built = c(2)
            .circ_i(2, &c(3).circ_i(2, &c(0)).unwrap().circ_i(1, &c(3)).unwrap())
            .unwrap();
        assert_eq!(built, tr);
        assert_eq!(
            tr.decompose_into_corollas().to_string(),
            "C2(U,C3(C3,C0,U))"
        );
    }

    #[test]
    fn grafting_into_two_leaves() {
        let tr = t(FIG2);
        let subs = [Tree::Leaf, t("()"), t("(*)"), t("(())"), t("(**)")];
        let g = tr.graft(&subs).unwrap();
        assert_eq!(g.to_string(), "(*((()(*)(()))()(**)))");
        assert_eq!(g.n_leaves(), 4);
    }

    #[test]
    fn contracting_an_inner_edge() {
        let tr = t(FIG2);
        let c = tr.contract(&EdgeRef::new(vec![2, 1])).unwrap();
        assert_eq!(c.to_string(), "(*(***()*))");
        assert_eq!(c.inner_arities(), vec![2, 5, 0]);
        assert!(tr.contract(&EdgeRef::new(vec![1])).is_err());
        assert!(tr.contract(&EdgeRef::new(vec![])).is_err());
    }

    #[test]
    fn extended_star_leaf_count() {
        // The even/odd example tree: v at address [2].
        let tr = t("(*((()*(()))()(**)))");
        let v = VertexAddr(vec![2]);
        assert_eq!(tr.r_of(&v).unwrap(), 6);
        let st = tr.extended_star(&v).unwrap();
        assert_eq!(st.to_string(), "(*((***)()(**)))");
        assert_eq!(st.n_leaves(), 6);
        assert!(matches!(
            tr.r_of(&VertexAddr(vec![])),
            Err(TreeError::RootInStar(_))
        ));
    }

    #[test]
    fn link_of_nullary_vertex_is_parent() {
        let tr = t("(*())");
        assert_eq!(
            tr.link(&VertexAddr(vec![2])).unwrap(),
            vec![Some(VertexAddr(vec![]))]
        );
    }

    #[test]
    fn catalan_counts() {
        for (n, c) in [(1, 1), (2, 1), (3, 2), (4, 5), (5, 14)] {
            assert_eq!(enumerate_trees(n, &sup(&[2]), None).unwrap().len(), c);
        }
        assert_eq!(
            enumerate_trees(1, &sup(&[2]), None).unwrap(),
            vec![Tree::Leaf]
        );
        assert!(enumerate_trees(2, &sup(&[1, 2]), None).is_err());
    }

    #[test]
    fn even_level_smallest_case() {
        let ts = enumerate_even_level_trees(1, 1, &sup(&[1]), &sup(&[1])).unwrap();
        assert_eq!(ts, vec![t("(((*)))")]);
        assert!(enumerate_even_level_trees(1, 0, &sup(&[1]), &sup(&[1])).is_err());
    }

    #[test]
    fn even_odd_example_is_enumerated() {
        let tr = t("(*((()*(()))()(**)))");
        assert_eq!(tr.n_leaves(), 4);
        assert!(leaves_even(&tr));
        let (even, odd) = parity_classes(&tr);
        assert_eq!(even.len(), 3);
        assert_eq!(odd.len(), 5);
        let ts = enumerate_even_level_trees(4, 3, &sup(&[0, 1, 3]), &sup(&[0, 2, 3])).unwrap();
        assert!(ts.contains(&tr));
        assert!(ts.iter().all(leaves_even));
    }
}
