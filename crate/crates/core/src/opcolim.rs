//! The push-out of `F(U) -> F(V)` along `F(U) -> O` in operads, built as a
//! filtered sequence `O = P_0 -> P_1 -> ...` of cell attachments indexed by
//! trees with leaves at even levels.
//!
//! Every `P_t(n)` is kept as a quotient of generator coordinates
//! `G_t(n) = O(n) ⊕ (cells of stages 1..=t)`, each cell being
//! `(⊗_{even v} V(val v)) ⊗ (⊗_{odd w} O(val w))` with even vertices first,
//! both groups in path order. `ψ̄_s^T` is the projection restricted to the
//! block of `T`, and `ψ̄_0^{C_n}` is the identity of the `O(n)` block.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactcat::{
    act_on_factors, induced_from_cube_with, permute_factors, pp_source, pushout, tensor_dim,
    CatError, LinMap, Rref, Space, SparseVec,
};
use crate::operad::{
    admissible, check_operad_map, contraction_map, Operad, OperadError, OperadMap, SeqMap, Sequence,
};
use crate::report::{DimTable, Report};
use crate::trees::{even_level_trees, EdgeRef, Tree, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PushoutError {
    #[error("exact mode needs U and V supported in arities >= 2 and O(0) = 0; pass a stage bound")]
    TruncationRequired,
    #[error("compatibility square failed for tree {tree} at even vertices #{u} and #{u2}")]
    NonCompatibleCube { tree: String, u: usize, u2: usize },
    #[error("composition ({m},{i},{n}) does not descend to the push-out")]
    NotWellDefined { m: usize, i: usize, n: usize },
    #[error("the cocone does not commute: f'' ∘ ḡ != ḡ'' ∘ f in arity {0}")]
    IncompatibleCocone(usize),
    #[error("malformed push-out problem: {0}")]
    Shape(String),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `f : U -> V` and `ḡ : U -> O` as sequence maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutProblem {
    pub f: SeqMap,
    pub gbar: SeqMap,
    pub o: Operad,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    u: Sequence,
    v: Sequence,
    #[serde(default)]
    f: BTreeMap<String, LinMap>,
    #[serde(default)]
    gbar: BTreeMap<String, LinMap>,
    o: Operad,
}

fn keyed(m: BTreeMap<String, LinMap>) -> Result<BTreeMap<usize, LinMap>, String> {
    m.into_iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<usize>()
                .map(|n| (n, v))
                .map_err(|_| format!("arity key {k:?}"))
        })
        .collect()
}

impl Serialize for PushoutProblem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let str_keys = |m: &BTreeMap<usize, LinMap>| {
            m.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
        };
        ProblemRepr {
            u: self.f.source.clone(),
            v: self.f.target.clone(),
            f: str_keys(&self.f.components),
            gbar: str_keys(&self.gbar.components),
            o: self.o.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PushoutProblem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ProblemRepr::deserialize(d)?;
        let f = SeqMap::new(r.u.clone(), r.v, keyed(r.f).map_err(D::Error::custom)?)
            .map_err(D::Error::custom)?;
        let gbar = SeqMap::new(
            r.u,
            r.o.underlying(),
            keyed(r.gbar).map_err(D::Error::custom)?,
        )
        .map_err(D::Error::custom)?;
        PushoutProblem::new(f, gbar, r.o).map_err(D::Error::custom)
    }
}

impl PushoutProblem {
    pub fn new(f: SeqMap, gbar: SeqMap, o: Operad) -> Result<Self, PushoutError> {
        if f.source != gbar.source {
            return Err(PushoutError::Shape(
                "f and ḡ must share the source U".into(),
            ));
        }
        for &n in gbar.source.support().iter() {
            if n > o.max_arity {
                return Err(PushoutError::Shape(format!(
                    "U is nonzero in arity {n} beyond O's bound"
                )));
            }
        }
        Ok(PushoutProblem { f, gbar, o })
    }

    pub fn u(&self) -> &Sequence {
        &self.f.source
    }

    pub fn v(&self) -> &Sequence {
        &self.f.target
    }

    /// Whether the filtration provably stabilizes at `t = n - 1`.
    pub fn is_reduced(&self) -> bool {
        let low = |s: &Sequence| s.support().iter().any(|&a| a < 2);
        !low(self.u()) && !low(self.v()) && self.o.dim(0) == 0
    }
}

/// One generator block of `G(n)`: the `O(n)` block (stage 0, tree `C_n`) or a cell.
#[derive(Clone, Debug)]
pub struct CellBlock {
    pub tree: Tree,
    pub stage: usize,
    pub offset: usize,
    /// Dimension of the cell target `(⊗ V) ⊗ (⊗ O)`.
    pub dim: usize,
    /// Path-order indices of even and odd inner vertices.
    pub evens: Vec<usize>,
    pub odds: Vec<usize>,
    /// Factor dimensions in cell order.
    pub factor_dims: Vec<usize>,
    /// `ψ_t^T : s(⊙ f) ⊗ E -> P_{t-1}(n)`; absent for the stage-0 block.
    pub psi: Option<LinMap>,
    /// Dimension of `s(⊙ f) ⊗ E`.
    pub source_dim: usize,
}

#[derive(Clone, Debug)]
pub struct StageData {
    pub dim: usize,
    /// `φ_t : P_{t-1}(n) -> P_t(n)`.
    pub phi: LinMap,
    /// Number of generator coordinates `dim G_t(n)`.
    pub gen_dim: usize,
    /// `π_t : G_t(n) -> P_t(n)`.
    pub pi: LinMap,
    pub cells: usize,
}

#[derive(Clone, Debug)]
pub struct ArityState {
    pub n: usize,
    pub blocks: Vec<CellBlock>,
    /// `stages[t]` describes `P_t(n)`; `stages[0]` is `O(n)`.
    pub stages: Vec<StageData>,
    index: HashMap<Tree, usize>,
}

impl ArityState {
    pub fn gen_dim(&self) -> usize {
        self.stages.last().map(|s| s.gen_dim).unwrap_or(0)
    }

    pub fn pi(&self) -> &LinMap {
        &self.stages.last().expect("stage 0 exists").pi
    }

    pub fn block(&self, t: &Tree) -> Option<&CellBlock> {
        self.index.get(t).map(|&k| &self.blocks[k])
    }
}

/// Evidence that `P_t(n)` no longer changes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationCertificate {
    pub arity: usize,
    /// `φ_t(n)` is the identity for every `t > last_stage`.
    pub last_stage: usize,
    /// Even-level trees counted at `t = last_stage + 1` (zero in exact mode).
    pub trees_beyond: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct PushoutResult {
    pub p: Operad,
    pub f_prime: OperadMap,
    pub gbar_prime: SeqMap,
    pub arities: Vec<ArityState>,
    pub problem: PushoutProblem,
    /// `None` in exact mode.
    pub t_max: Option<usize>,
    pub certificates: Vec<StabilizationCertificate>,
    /// Sections `P(n) -> G(n)` with `π ∘ σ = id`.
    pub sections: Vec<LinMap>,
}

impl PushoutResult {
    pub fn n_max(&self) -> usize {
        self.p.max_arity
    }

    /// Dimensions of `P_t(n)`, one row per stage.
    pub fn dim_table(&self) -> DimTable {
        let stages = self
            .arities
            .iter()
            .map(|a| a.stages.len())
            .max()
            .unwrap_or(1);
        let rows = (0..stages)
            .map(|t| {
                self.arities
                    .iter()
                    .map(|a| {
                        a.stages
                            .get(t)
                            .or(a.stages.last())
                            .map(|s| s.dim)
                            .unwrap_or(0)
                    })
                    .collect()
            })
            .collect();
        DimTable {
            title: "dim P_t(n)".into(),
            row_labels: (0..stages).map(|t| format!("t={t}")).collect(),
            col_labels: (0..self.arities.len()).map(|n| format!("n={n}")).collect(),
            rows,
        }
    }

    /// `ψ̄^T : cell(T) -> P(n)`.
    pub fn psi_bar(&self, n: usize, t: &Tree) -> Option<LinMap> {
        let a = &self.arities[n];
        let b = a.block(t)?;
        Some(a.pi().restrict_cols(b.offset, b.dim))
    }
}

fn parity_split(t: &Tree) -> (Vec<usize>, Vec<usize>) {
    crate::trees::parity_classes(t)
}

/// Permutation from path order to cell order: `order[k]` is the path index of
/// the `k`-th cell factor.
fn cell_order(evens: &[usize], odds: &[usize]) -> Vec<usize> {
    evens.iter().chain(odds).copied().collect()
}

/// `order` such that target factor `p` (path order) is source factor `order[p]` (cell order).
fn cell_to_path(evens: &[usize], odds: &[usize]) -> Vec<usize> {
    let co = cell_order(evens, odds);
    let mut inv = vec![0; co.len()];
    for (k, &p) in co.iter().enumerate() {
        inv[p] = k;
    }
    inv
}

struct Builder<'a> {
    prob: &'a PushoutProblem,
    even_support: BTreeSet<usize>,
    odd_support: BTreeSet<usize>,
}

impl Builder<'_> {
    fn u(&self, a: usize) -> usize {
        self.prob.u().dim(a)
    }

    fn v(&self, a: usize) -> usize {
        self.prob.v().dim(a)
    }

    fn o(&self, a: usize) -> usize {
        self.prob.o.dim(a)
    }

    /// `ψ_{t,u}^T` for the even vertex at cell position `k`.
    fn leg(
        &self,
        state: &ArityState,
        t: &Tree,
        evens: &[usize],
        odds: &[usize],
        k: usize,
    ) -> Result<LinMap, PushoutError> {
        let arities = t.inner_arities();
        let mut dims: Vec<usize> = evens.iter().map(|&p| self.v(arities[p])).collect();
        dims[k] = self.u(arities[evens[k]]);
        dims.extend(odds.iter().map(|&p| self.o(arities[p])));
        let src_dim = tensor_dim(&dims);
        // ḡ at the attaching vertex.
        let au = arities[evens[k]];
        let mut map = act_on_factors(&dims, k, 1, &self.prob.gbar.at(au));
        dims[k] = self.o(au);
        // Cell order to path order of T.
        let to_path = cell_to_path(evens, odds);
        map = permute_factors(&dims, &to_path).after(&map);
        let path_dims: Vec<usize> = to_path.iter().map(|&c| dims[c]).collect();
        // Contract St(u).
        let verts = t.inner_vertices();
        let u_addr = verts[evens[k]].addr.clone();
        let mut star = vec![EdgeRef {
            upper: u_addr.clone(),
        }];
        star.extend((1..=arities[evens[k]]).map(|j| EdgeRef {
            upper: u_addr.child(j),
        }));
        let (contract, quotient) = contraction_map(&self.prob.o, t, &path_dims, &star)?;
        map = contract.after(&map);
        // Path order of T/St(u) to its cell order, then ψ̄_{t-1}.
        let (qe, qo) = parity_split(&quotient);
        let qarities = quotient.inner_arities();
        let qdims: Vec<usize> = (0..qarities.len())
            .map(|p| {
                if qe.contains(&p) {
                    self.v(qarities[p])
                } else {
                    self.o(qarities[p])
                }
            })
            .collect();
        let to_cell = cell_order(&qe, &qo);
        map = permute_factors(&qdims, &to_cell).after(&map);
        let prev = state.stages.last().expect("stage 0 exists");
        match state.block(&quotient) {
            Some(b) => Ok(prev.pi.restrict_cols(b.offset, b.dim).after(&map)),
            None => Ok(LinMap::zero(Space::new(src_dim), Space::new(prev.dim))),
        }
    }

    fn arity(&self, n: usize, t_cap: usize) -> Result<ArityState, PushoutError> {
        let on = self.o(n);
        let c_n = Tree::corolla(n);
        let blocks = vec![CellBlock {
            tree: c_n.clone(),
            stage: 0,
            offset: 0,
            dim: on,
            evens: vec![],
            odds: vec![0],
            factor_dims: vec![on],
            psi: None,
            source_dim: 0,
        }];
        let mut index = HashMap::new();
        index.insert(c_n, 0);
        let mut state = ArityState {
            n,
            blocks,
            stages: vec![StageData {
                dim: on,
                phi: LinMap::identity(Space::new(on)),
                gen_dim: on,
                pi: LinMap::identity(Space::new(on)),
                cells: 0,
            }],
            index,
        };
        for t in 1..=t_cap {
            let trees = even_level_trees(n, t, &self.even_support, &self.odd_support);
            let mut new_blocks = Vec::new();
            let mut psis = Vec::new();
            let mut odots = Vec::new();
            let prev = state.stages.last().expect("stage exists").clone();
            let mut off = prev.gen_dim;
            for tr in trees {
                let (evens, odds) = parity_split(&tr);
                let arities = tr.inner_arities();
                let fs: Vec<LinMap> = evens.iter().map(|&p| self.prob.f.at(arities[p])).collect();
                let s = pp_source(&fs);
                let e_dims: Vec<usize> = odds.iter().map(|&p| self.o(arities[p])).collect();
                let e = tensor_dim(&e_dims);
                let legs = (0..evens.len())
                    .map(|k| self.leg(&state, &tr, &evens, &odds, k))
                    .collect::<Result<Vec<_>, _>>()?;
                let psi = induced_from_cube_with(&s, &legs, e).map_err(|err| match err {
                    CatError::IncompatibleLegs(a, b) => PushoutError::NonCompatibleCube {
                        tree: tr.to_string(),
                        u: evens.get(a.max(1) - 1).copied().unwrap_or(0),
                        u2: evens.get(b.max(1) - 1).copied().unwrap_or(0),
                    },
                    other => PushoutError::Cat(other),
                })?;
                let odot = s.odot.tensor(&LinMap::identity(Space::new(e)));
                let mut factor_dims: Vec<usize> =
                    evens.iter().map(|&p| self.v(arities[p])).collect();
                factor_dims.extend(&e_dims);
                let dim = odot.rows();
                let source_dim = odot.ncols();
                new_blocks.push(CellBlock {
                    tree: tr,
                    stage: t,
                    offset: off,
                    dim,
                    evens,
                    odds,
                    factor_dims,
                    psi: Some(psi.clone()),
                    source_dim,
                });
                off += dim;
                psis.push(psi);
                odots.push(odot);
            }
            let x_dim: usize = odots.iter().map(|m| m.ncols()).sum();
            let psi_all = LinMap::hstack(Space::new(prev.dim), &psis)
                .with_spaces(Space::new(x_dim), Space::new(prev.dim));
            let odot_all = if odots.is_empty() {
                LinMap::zero(Space::zero(), Space::zero())
            } else {
                LinMap::direct_sum(&odots)
            };
            let po = pushout(&psi_all, &odot_all)?;
            let pi = LinMap::hstack(
                po.apex.clone(),
                &[po.inj_left.after(&prev.pi), po.inj_right.clone()],
            );
            for b in new_blocks {
                state.index.insert(b.tree.clone(), state.blocks.len());
                state.blocks.push(b);
            }
            state.stages.push(StageData {
                dim: po.apex.dim,
                phi: po.inj_left.clone(),
                gen_dim: off,
                pi,
                cells: psis.len(),
            });
        }
        Ok(state)
    }
}

/// Builds the push-out in arities `0..=n_max`. With `t_max = None` the
/// problem must be reduced and every arity is carried to its stable stage.
pub fn build_pushout(
    prob: &PushoutProblem,
    n_max: usize,
    t_max: Option<usize>,
) -> Result<PushoutResult, PushoutError> {
    if t_max.is_none() && !prob.is_reduced() {
        return Err(PushoutError::TruncationRequired);
    }
    let n_max = n_max.max(1).min(prob.o.max_arity);
    let even_support: BTreeSet<usize> = prob
        .u()
        .support()
        .union(&prob.v().support())
        .copied()
        .collect();
    let odd_support: BTreeSet<usize> = (0..=prob.o.max_arity)
        .filter(|&a| prob.o.dim(a) > 0)
        .collect();
    let b = Builder {
        prob,
        even_support: even_support.clone(),
        odd_support: odd_support.clone(),
    };
    let mut arities = Vec::with_capacity(n_max + 1);
    let mut certificates = Vec::new();
    for n in 0..=n_max {
        let cap = match t_max {
            None => n.saturating_sub(1),
            Some(t) => t,
        };
        let st = b.arity(n, cap)?;
        let beyond = even_level_trees(n, cap + 1, &even_support, &odd_support).len();
        let reason = if t_max.is_none() {
            "each even vertex raises Σ(val-1) = n-1 by at least 1 and no vertex lowers it"
                .to_string()
        } else if beyond == 0 {
            format!("no even-level trees with {} even vertices", cap + 1)
        } else {
            format!("truncated at t = {cap}; {beyond} cells remain at the next stage")
        };
        if t_max.is_none() || beyond == 0 {
            certificates.push(StabilizationCertificate {
                arity: n,
                last_stage: cap,
                trees_beyond: beyond,
                reason,
            });
        }
        arities.push(st);
    }
    let mut sections = Vec::with_capacity(n_max + 1);
    let mut kernels = Vec::with_capacity(n_max + 1);
    for a in &arities {
        sections.push(right_inverse(a.pi()));
        kernels.push(a.pi().kernel());
    }
    let seq: Vec<Space> = arities.iter().map(|a| Space::new(a.pi().rows())).collect();
    let o = &prob.o;
    let unit = if n_max >= 1 {
        arities[1].pi().restrict_cols(0, o.dim(1)).after(&o.unit)
    } else {
        LinMap::zero(Space::unit(), Space::zero())
    };
    let mut circ = BTreeMap::new();
    for m in 1..=n_max {
        for n in 0..=n_max {
            for i in 1..=m {
                if !admissible(n_max, m, i, n) {
                    continue;
                }
                let d = composition_on_generators(prob, &arities, m, i, n, t_max)?;
                let pi = arities[m + n - 1].pi();
                let pd = pi.after(&d);
                let gm = LinMap::identity(Space::new(arities[m].gen_dim()));
                let gn = LinMap::identity(Space::new(arities[n].gen_dim()));
                if !pd.after(&kernels[m].tensor(&gn)).is_zero()
                    || !pd.after(&gm.tensor(&kernels[n])).is_zero()
                {
                    return Err(PushoutError::NotWellDefined { m, i, n });
                }
                circ.insert((m, i, n), pd.after(&sections[m].tensor(&sections[n])));
            }
        }
    }
    let p = Operad::new(seq, unit, circ, n_max)?;
    let f_prime = OperadMap::new(
        o.truncate(n_max),
        p.clone(),
        (0..=n_max)
            .map(|n| arities[n].pi().restrict_cols(0, o.dim(n)))
            .collect(),
    )?;
    let gbar_prime = gbar_prime_map(prob, &arities, &p)?;
    Ok(PushoutResult {
        p,
        f_prime,
        gbar_prime,
        arities,
        problem: prob.clone(),
        t_max,
        certificates,
        sections,
    })
}

/// A right inverse of a surjection, supported on pivot columns.
fn right_inverse(pi: &LinMap) -> LinMap {
    crate::exactcat::solve_right(pi, &LinMap::identity(pi.target().clone()))
        .expect("π is surjective")
}

/// `ḡ'(n) = ψ̄^{C_1(C_n(C_1,..,C_1))} ∘ (u ⊗ id ⊗ u^{⊗n})` in cell order.
fn gbar_prime_map(
    prob: &PushoutProblem,
    arities: &[ArityState],
    p: &Operad,
) -> Result<SeqMap, PushoutError> {
    let mut comps = BTreeMap::new();
    let o = &prob.o;
    for (n, a) in arities.iter().enumerate() {
        let vn = prob.v().space(n);
        let target = Space::new(p.dim(n));
        let tr = Tree::Node(vec![Tree::Node(vec![Tree::corolla(1); n])]);
        let m = match a.block(&tr) {
            Some(b) => {
                // Cell order: V(n), then O(1) at the top and above each leaf.
                let mut ins = LinMap::identity(vn.clone()).tensor(&o.unit);
                for _ in 0..n {
                    ins = ins.tensor(&o.unit);
                }
                a.pi().restrict_cols(b.offset, b.dim).after(&ins)
            }
            None => LinMap::zero(vn.clone(), target.clone()),
        };
        comps.insert(n, m.with_spaces(vn, target));
    }
    let mut v = prob.v().clone();
    v.spaces.retain(|&n, _| n < arities.len());
    Ok(SeqMap {
        source: v,
        target: p.underlying(),
        components: comps,
    })
}

/// `D : G(m) ⊗ G(n) -> G(m+n-1)` assembled from the maps `d_i^{s,t}(T, T')`.
fn composition_on_generators(
    prob: &PushoutProblem,
    arities: &[ArityState],
    m: usize,
    i: usize,
    n: usize,
    t_max: Option<usize>,
) -> Result<LinMap, PushoutError> {
    let (am, an, at) = (&arities[m], &arities[n], &arities[m + n - 1]);
    let gn = an.gen_dim();
    let mut cols: Vec<SparseVec> = vec![Vec::new(); am.gen_dim() * gn];
    for bm in &am.blocks {
        for bn in &an.blocks {
            if bm.dim == 0 || bn.dim == 0 || t_max.is_some_and(|t| bm.stage + bn.stage > t) {
                continue;
            }
            let Some(local) = d_block(prob, at, bm, bn, i)? else {
                continue;
            };
            let (offset, map) = local;
            for a in 0..bm.dim {
                for b in 0..bn.dim {
                    cols[(bm.offset + a) * gn + bn.offset + b] = map
                        .column(a * bn.dim + b)
                        .iter()
                        .map(|(r, x)| (offset + r, x.clone()))
                        .collect();
                }
            }
        }
    }
    Ok(LinMap::from_columns(
        Space::new(am.gen_dim() * gn),
        Space::new(at.gen_dim()),
        cols,
    ))
}

/// `d_i^{s,t}(T, T')` into the generator block of `(T ∘_i T')/e`; `None` when that block is zero.
fn d_block(
    prob: &PushoutProblem,
    target: &ArityState,
    bm: &CellBlock,
    bn: &CellBlock,
    i: usize,
) -> Result<Option<(usize, LinMap)>, PushoutError> {
    let (s, gm) = bm.tree.circ_i_tracked(i, &bn.tree)?;
    let top = gm.subs[i - 1][0];
    let verts = s.inner_vertices();
    let e = EdgeRef {
        upper: verts[top].addr.clone(),
    };
    // Source: cell order of T, then cell order of T'; target: path order of S.
    let km = bm.factor_dims.len();
    let mut order = vec![0; verts.len()];
    for (k, &p) in cell_order(&bm.evens, &bm.odds).iter().enumerate() {
        order[gm.base[p]] = k;
    }
    for (k, &p) in cell_order(&bn.evens, &bn.odds).iter().enumerate() {
        order[gm.subs[i - 1][p]] = km + k;
    }
    let dims: Vec<usize> = bm
        .factor_dims
        .iter()
        .chain(&bn.factor_dims)
        .copied()
        .collect();
    let mut map = permute_factors(&dims, &order);
    let path_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let (contract, quotient) = contraction_map(&prob.o, &s, &path_dims, std::slice::from_ref(&e))?;
    map = contract.after(&map);
    let Some(b) = target.block(&quotient) else {
        return Ok(None);
    };
    let (qe, qo) = parity_split(&quotient);
    let qarities = quotient.inner_arities();
    let qdims: Vec<usize> = (0..qarities.len())
        .map(|p| {
            if qe.contains(&p) {
                prob.v().dim(qarities[p])
            } else {
                prob.o.dim(qarities[p])
            }
        })
        .collect();
    map = permute_factors(&qdims, &cell_order(&qe, &qo)).after(&map);
    Ok(Some((b.offset, map)))
}

/// The unique operad map `h : P -> P'` with `h ∘ f' = f''` and `h ∘ ḡ' = ḡ''`.
/// On the cell of `T` it is `P'(p_T)` applied to `ḡ''` at even vertices and
/// `f''` at odd ones.
pub fn induced_morphism(
    res: &PushoutResult,
    f_pp: &OperadMap,
    gbar_pp: &SeqMap,
) -> Result<OperadMap, PushoutError> {
    let prob = &res.problem;
    let target = &f_pp.target;
    let n_max = res.n_max().min(target.max_arity).min(f_pp.max_arity());
    // Cocone condition.
    for n in prob.u().support() {
        if n > n_max {
            continue;
        }
        let lhs = f_pp.components[n].after(&prob.gbar.at(n));
        let rhs = gbar_pp.at(n).after(&prob.f.at(n));
        if lhs != rhs {
            return Err(PushoutError::IncompatibleCocone(n));
        }
    }
    let mut components = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let a = &res.arities[n];
        let mut cols: Vec<SparseVec> = vec![Vec::new(); a.gen_dim()];
        for b in &a.blocks {
            if b.dim == 0 {
                continue;
            }
            let local = if b.stage == 0 {
                f_pp.components[n].clone()
            } else {
                let arities = b.tree.inner_arities();
                let maps: Vec<LinMap> = b
                    .evens
                    .iter()
                    .map(|&p| gbar_pp.at(arities[p]))
                    .chain(b.odds.iter().map(|&p| f_pp.components[arities[p]].clone()))
                    .collect();
                let decorate = LinMap::tensor_all(&maps);
                let cdims: Vec<usize> = b
                    .evens
                    .iter()
                    .chain(&b.odds)
                    .map(|&p| target.dim(arities[p]))
                    .collect();
                let to_path = cell_to_path(&b.evens, &b.odds);
                let pdims: Vec<usize> = to_path.iter().map(|&c| cdims[c]).collect();
                let (collapse, _) =
                    contraction_map(target, &b.tree, &pdims, &b.tree.inner_edges())?;
                collapse
                    .after(&permute_factors(&cdims, &to_path))
                    .after(&decorate)
            };
            for c in 0..b.dim {
                cols[b.offset + c] = local.column(c).clone();
            }
        }
        let hg = LinMap::from_columns(Space::new(a.gen_dim()), target.seq[n].clone(), cols);
        if !hg.after(&a.pi().kernel()).is_zero() {
            return Err(PushoutError::IncompatibleCocone(n));
        }
        components.push(hg.after(&res.sections[n]));
    }
    Ok(OperadMap::new(
        res.p.truncate(n_max),
        target.truncate(n_max),
        components,
    )?)
}

/// Checks `h ∘ f' = f''` and `h ∘ ḡ' = ḡ''` and that `h` is an operad map.
pub fn check_cocone_identities(
    res: &PushoutResult,
    h: &OperadMap,
    f_pp: &OperadMap,
    gbar_pp: &SeqMap,
) -> Report {
    let mut rep = check_operad_map(h, h.max_arity());
    for n in 0..=h.max_arity() {
        let a = h.components[n].after(&res.f_prime.components[n]);
        rep.record(
            a == f_pp.components[n],
            "h∘f' = f''",
            || format!("n={n}"),
            || crate::report::first_difference(&a, &f_pp.components[n]),
        );
        let b = h.components[n].after(&res.gbar_prime.at(n));
        let want = gbar_pp.at(n);
        rep.record(
            b == want,
            "h∘ḡ' = ḡ''",
            || format!("n={n}"),
            || crate::report::first_difference(&b, &want),
        );
    }
    rep
}

/// For each sample cocone: builds `h`, checks both identities, and checks
/// uniqueness by verifying that the `O`-image and the cell images span every
/// `P(n)`.
pub fn verify_universal(res: &PushoutResult, samples: &[(OperadMap, SeqMap)]) -> Report {
    let mut rep = spanning_report(res);
    for (k, (f_pp, g_pp)) in samples.iter().enumerate() {
        match induced_morphism(res, f_pp, g_pp) {
            Ok(h) => rep.merge(check_cocone_identities(res, &h, f_pp, g_pp)),
            Err(e) => rep.fail("induced morphism", format!("sample {k}"), e.to_string()),
        }
    }
    if res.t_max.is_some() {
        rep.mark_truncated(format!(
            "filtration truncated at t = {}",
            res.t_max.unwrap_or(0)
        ));
    }
    rep
}

/// The `O`-block and cell images jointly span `P(n)`, so maps out of `P`
/// agreeing on them coincide.
pub fn spanning_report(res: &PushoutResult) -> Report {
    let mut rep = Report::new();
    for a in &res.arities {
        let images: Vec<SparseVec> = a
            .blocks
            .iter()
            .flat_map(|b| (b.offset..b.offset + b.dim).map(|c| a.pi().column(c).clone()))
            .collect();
        let span = Rref::from_vectors(a.pi().rows(), images).rank();
        rep.record(
            span == a.pi().rows(),
            "spanning",
            || format!("n={}", a.n),
            || format!("rank {span} of {}", a.pi().rows()),
        );
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcat::Scalar;
    use crate::operad::{ass_operad, check_operad, free_operad, free_unit, unit_operad};

    fn seq_map(u: &Sequence, v: &Sequence, comps: &[(usize, LinMap)]) -> SeqMap {
        SeqMap::new(u.clone(), v.clone(), comps.iter().cloned().collect()).unwrap()
    }

    #[test]
    fn zero_attachment_gives_free_operad() {
        let v = Sequence::from_dims(&[(2, 1)]);
        let u = Sequence::new();
        let o = unit_operad(5);
        let prob = PushoutProblem::new(
            SeqMap::zero(u.clone(), v.clone()),
            SeqMap::zero(u, o.underlying()),
            o,
        )
        .unwrap();
        let res = build_pushout(&prob, 5, None).unwrap();
        let free = free_operad(&v, 5, None).unwrap();
        for n in 0..=5 {
            assert_eq!(res.p.dim(n), free.operad.dim(n), "arity {n}");
        }
        assert!(check_operad(&res.p, 5).passed());
        assert!(spanning_report(&res).passed());
    }

    #[test]
    fn killing_the_multiplication_of_ass() {
        let o = ass_operad(4).positive_part();
        let u = Sequence::from_dims(&[(2, 1)]);
        let v = Sequence::new();
        let g = seq_map(&u, &o.underlying(), &[(2, LinMap::identity(Space::new(1)))]);
        let prob = PushoutProblem::new(SeqMap::zero(u, v), g, o).unwrap();
        let res = build_pushout(&prob, 4, None).unwrap();
        let dims: Vec<usize> = (0..=4).map(|n| res.p.dim(n)).collect();
        assert_eq!(dims, vec![0, 1, 0, 0, 0]);
        assert_eq!(res.arities[3].stages.len(), 3);
        assert!(check_operad(&res.p, 4).passed());
    }

    #[test]
    fn push_out_along_an_isomorphism() {
        let o = ass_operad(4).positive_part();
        let u = Sequence::from_dims(&[(2, 1)]);
        let f = seq_map(&u, &u, &[(2, LinMap::from_int_rows(1, 1, &[&[3]]))]);
        let g = seq_map(
            &u,
            &o.underlying(),
            &[(2, LinMap::from_int_rows(1, 1, &[&[2]]))],
        );
        let prob = PushoutProblem::new(f, g, o.clone()).unwrap();
        let res = build_pushout(&prob, 4, None).unwrap();
        for n in 0..=4 {
            assert!(res.f_prime.components[n].is_iso(), "arity {n}");
        }
        assert!(check_operad(&res.p, 4).passed());
        // f'∘ḡ = ḡ'∘f.
        for n in 0..=4 {
            assert_eq!(
                res.f_prime.components[n].after(&prob.gbar.at(n)),
                res.gbar_prime.at(n).after(&prob.f.at(n))
            );
        }
    }

    /// Reduced trees with binary `x`-vertices and `Ass`-vertices of arity
    /// `>= 2`, no two `Ass`-vertices adjacent.
    fn coproduct_oracle(n_max: usize) -> Vec<usize> {
        let mut t = vec![0usize; n_max + 1];
        let mut s = vec![0usize; n_max + 1];
        let mut x = vec![0usize; n_max + 1];
        t[1] = 1;
        s[1] = 1;
        for n in 2..=n_max {
            x[n] = (1..n).map(|a| t[a] * t[n - a]).sum();
            // Compositions of n into >= 2 parts weighted by s.
            let mut comp = vec![vec![0usize; n + 1]; n + 1];
            comp[0][0] = 1;
            for k in 1..=n {
                for m in 1..=n {
                    comp[k][m] = (1..=m).map(|p| s[p] * comp[k - 1][m - p]).sum();
                }
            }
            let a: usize = (2..=n).map(|k| comp[k][n]).sum();
            t[n] = a + x[n];
            s[n] = x[n];
        }
        t
    }

    #[test]
    fn split_injection_gives_coproduct_with_free() {
        let o = ass_operad(4).positive_part();
        let u = Sequence::from_dims(&[(2, 1)]);
        let v = Sequence::from_dims(&[(2, 2)]);
        let f = seq_map(&u, &v, &[(2, LinMap::from_int_rows(1, 2, &[&[1], &[1]]))]);
        let g = seq_map(&u, &o.underlying(), &[(2, LinMap::identity(Space::new(1)))]);
        let prob = PushoutProblem::new(f, g, o).unwrap();
        let res = build_pushout(&prob, 4, None).unwrap();
        let want = coproduct_oracle(4);
        for n in 1..=4 {
            assert_eq!(res.p.dim(n), want[n], "arity {n}");
        }
        assert!(check_operad(&res.p, 4).passed());
    }

    #[test]
    fn split_cell_in_free_operad() {
        let u = Sequence::from_dims(&[(2, 1)]);
        let w = Sequence::from_dims(&[(2, 1), (3, 1)]);
        let fw = free_operad(&w, 5, None).unwrap();
        let o = fw.operad.clone();
        let g = seq_map(&u, &o.underlying(), &[(2, free_unit(&fw).at(2))]);
        let v = Sequence::from_dims(&[(2, 2)]);
        for f2 in [
            LinMap::zero(Space::new(1), Space::new(2)),
            LinMap::from_int_rows(1, 2, &[&[1], &[-1]]),
        ] {
            let f = seq_map(&u, &v, &[(2, f2)]);
            let prob = PushoutProblem::new(f, g.clone(), o.clone()).unwrap();
            let res = build_pushout(&prob, 5, None).unwrap();
            let oracle = free_operad(&Sequence::from_dims(&[(2, 2), (3, 1)]), 5, None).unwrap();
            for n in 0..=5 {
                assert_eq!(res.p.dim(n), oracle.operad.dim(n), "arity {n}");
            }
            assert!(check_operad(&res.p, 4).passed());
        }
    }

    #[test]
    fn stabilization_certificates_in_exact_mode() {
        let o = ass_operad(5).positive_part();
        let u = Sequence::from_dims(&[(2, 1)]);
        let v = Sequence::from_dims(&[(2, 2)]);
        let f = seq_map(&u, &v, &[(2, LinMap::from_int_rows(1, 2, &[&[1], &[0]]))]);
        let g = seq_map(
            &u,
            &o.underlying(),
            &[(
                2,
                LinMap::from_columns(
                    Space::new(1),
                    Space::new(1),
                    vec![vec![(0, Scalar::ratio(1, 2))]],
                ),
            )],
        );
        let prob = PushoutProblem::new(f, g, o).unwrap();
        let res = build_pushout(&prob, 5, None).unwrap();
        for c in &res.certificates {
            assert_eq!(c.last_stage, c.arity.saturating_sub(1));
            assert_eq!(c.trees_beyond, 0);
        }
        assert_eq!(res.certificates.len(), 6);
    }

    #[test]
    fn truncation_is_required_for_unary_generators() {
        let o = ass_operad(3).positive_part();
        let u = Sequence::new();
        let v = Sequence::from_dims(&[(1, 1)]);
        let prob = PushoutProblem::new(
            SeqMap::zero(u.clone(), v),
            SeqMap::zero(u, o.underlying()),
            o,
        )
        .unwrap();
        assert!(matches!(
            build_pushout(&prob, 3, None),
            Err(PushoutError::TruncationRequired)
        ));
        let res = build_pushout(&prob, 3, Some(2)).unwrap();
        assert!(res.certificates.iter().all(|c| c.arity == 0));
    }

    #[test]
    fn problem_json_roundtrip() {
        let o = ass_operad(3);
        let u = Sequence::from_dims(&[(2, 1)]);
        let g = seq_map(&u, &o.underlying(), &[(2, LinMap::identity(Space::new(1)))]);
        let prob = PushoutProblem::new(SeqMap::zero(u.clone(), u), g, o).unwrap();
        let js = serde_json::to_string(&prob).unwrap();
        let back: PushoutProblem = serde_json::from_str(&js).unwrap();
        assert_eq!(back, prob);
    }

    #[test]
    fn reflexive_cocone_gives_identity() {
        let o = ass_operad(4).positive_part();
        let u = Sequence::from_dims(&[(2, 1)]);
        let v = Sequence::from_dims(&[(2, 2)]);
        let f = seq_map(&u, &v, &[(2, LinMap::from_int_rows(1, 2, &[&[1], &[2]]))]);
        let g = seq_map(&u, &o.underlying(), &[(2, LinMap::identity(Space::new(1)))]);
        let res = build_pushout(&PushoutProblem::new(f, g, o).unwrap(), 4, None).unwrap();
        let h = induced_morphism(&res, &res.f_prime, &res.gbar_prime).unwrap();
        assert_eq!(h, OperadMap::identity(&res.p));
        assert!(verify_universal(&res, &[(res.f_prime.clone(), res.gbar_prime.clone())]).passed());
    }

    #[test]
    fn free_binary_operad_maps_to_ass() {
        let o = unit_operad(4);
        let u = Sequence::new();
        let v = Sequence::from_dims(&[(2, 1)]);
        let prob = PushoutProblem::new(
            SeqMap::zero(u.clone(), v.clone()),
            SeqMap::zero(u, o.underlying()),
            o.clone(),
        )
        .unwrap();
        let res = build_pushout(&prob, 4, None).unwrap();
        let ass = ass_operad(4).positive_part();
        let f_pp = OperadMap::new(
            o,
            ass.clone(),
            (0..=4)
                .map(|n| {
                    if n == 1 {
                        ass.unit.clone()
                    } else {
                        LinMap::zero(Space::zero(), ass.seq[n].clone())
                    }
                })
                .collect(),
        )
        .unwrap();
        let g_pp = seq_map(
            &v,
            &ass.underlying(),
            &[(2, LinMap::from_int_rows(1, 1, &[&[5]]))],
        );
        let h = induced_morphism(&res, &f_pp, &g_pp).unwrap();
        assert!(check_cocone_identities(&res, &h, &f_pp, &g_pp).passed());
        // Every binary tree with n leaves goes to 5^(n-1) times the single operation.
        for n in 2..=4 {
            for c in 0..res.p.dim(n) {
                let img = h.components[n].column(c);
                assert_eq!(img, &vec![(0, Scalar::from_int(5i64.pow(n as u32 - 1)))]);
            }
        }
        let mut bad = h.clone();
        bad.components[3] = bad.components[3].scale(&Scalar::from_int(2));
        assert!(!check_cocone_identities(&res, &bad, &f_pp, &g_pp).passed());
    }

    #[test]
    fn incompatible_cocone_is_rejected() {
        let o = ass_operad(3).positive_part();
        let u = Sequence::from_dims(&[(2, 1)]);
        let f = seq_map(&u, &u, &[(2, LinMap::identity(Space::new(1)))]);
        let g = seq_map(&u, &o.underlying(), &[(2, LinMap::identity(Space::new(1)))]);
        let res = build_pushout(&PushoutProblem::new(f, g, o.clone()).unwrap(), 3, None).unwrap();
        let g_pp = seq_map(
            &u,
            &o.underlying(),
            &[(2, LinMap::from_int_rows(1, 1, &[&[2]]))],
        );
        let err = induced_morphism(&res, &OperadMap::identity(&o), &g_pp).unwrap_err();
        assert_eq!(err, PushoutError::IncompatibleCocone(2));
    }
}
