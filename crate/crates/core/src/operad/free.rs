//! The free operad `F(V)(n) = ⊕_T ⊗_{v ∈ I(T)} V(val v)`, graded by the
//! number of inner vertices (weight).

use std::collections::{BTreeMap, HashMap};

use super::{admissible, contraction_map, Operad, OperadError, OperadMap, SeqMap, Sequence};
use crate::exactcat::{permute_factors, tensor_dim, LinMap, Scalar, Space, SparseVec};
use crate::trees::{enumerate_trees, Tree};

/// One tree summand of `F(V)(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeBlock {
    pub tree: Tree,
    pub offset: usize,
    pub dim: usize,
    /// `V(val v)` dimensions of the inner vertices in path order.
    pub factor_dims: Vec<usize>,
}

impl TreeBlock {
    pub fn weight(&self) -> usize {
        self.factor_dims.len()
    }
}

#[derive(Clone, Debug)]
pub struct FreeOperad {
    pub operad: Operad,
    pub generators: Sequence,
    /// `blocks[n]` lists the summands of `F(V)(n)` in enumeration order.
    pub blocks: Vec<Vec<TreeBlock>>,
    /// `None` in exact mode; otherwise weights above the bound are dropped.
    pub w_max: Option<usize>,
    index: Vec<HashMap<Tree, usize>>,
}

impl FreeOperad {
    pub fn block(&self, n: usize, t: &Tree) -> Option<&TreeBlock> {
        self.index.get(n)?.get(t).map(|&k| &self.blocks[n][k])
    }

    /// Weight of every basis vector of `F(V)(n)`.
    pub fn weights(&self, n: usize) -> Vec<usize> {
        self.blocks[n]
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.weight(), b.dim))
            .collect()
    }

    pub fn max_arity(&self) -> usize {
        self.operad.max_arity
    }
}

/// Builds `F(V)` in arities `0..=n_max`. Exact mode (`w_max = None`) needs
/// `V` supported in arities `>= 2`.
pub fn free_operad(
    v: &Sequence,
    n_max: usize,
    w_max: Option<usize>,
) -> Result<FreeOperad, OperadError> {
    let n_max = n_max.max(1);
    let support = v.support();
    let mut blocks = Vec::with_capacity(n_max + 1);
    let mut index = Vec::with_capacity(n_max + 1);
    let mut seq = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let trees =
            enumerate_trees(n, &support, w_max).map_err(|_| OperadError::TruncationRequired)?;
        let mut bs = Vec::new();
        let mut idx = HashMap::new();
        let mut off = 0;
        for t in trees {
            let factor_dims: Vec<usize> = t.inner_arities().iter().map(|&a| v.dim(a)).collect();
            let dim = tensor_dim(&factor_dims);
            if dim == 0 {
                continue;
            }
            idx.insert(t.clone(), bs.len());
            bs.push(TreeBlock {
                tree: t,
                offset: off,
                dim,
                factor_dims,
            });
            off += dim;
        }
        seq.push(Space::new(off));
        blocks.push(bs);
        index.push(idx);
    }
    let unit_block = index[1].get(&Tree::Leaf).map(|&k| blocks[1][k].offset);
    let unit = match unit_block {
        Some(off) => LinMap::from_columns(
            Space::unit(),
            seq[1].clone(),
            vec![vec![(off, Scalar::one())]],
        ),
        None => LinMap::zero(Space::unit(), seq[1].clone()),
    };
    let mut circ = BTreeMap::new();
    for m in 1..=n_max {
        for n in 0..=n_max {
            for i in 1..=m {
                if !admissible(n_max, m, i, n) {
                    continue;
                }
                let tgt = m + n - 1;
                let dn = seq[n].dim;
                let mut cols: Vec<SparseVec> = vec![Vec::new(); seq[m].dim * dn];
                for bm in &blocks[m] {
                    for bn in &blocks[n] {
                        let (s, gm) = bm.tree.circ_i_tracked(i, &bn.tree)?;
                        if w_max.is_some_and(|w| s.n_inner() > w) {
                            continue;
                        }
                        let bs = &blocks[tgt][index[tgt][&s]];
                        // Source factors: bm's vertices, then bn's; order[k] names the source of target factor k.
                        let mut order = vec![0; bs.factor_dims.len()];
                        for (k, &p) in gm.base.iter().enumerate() {
                            order[p] = k;
                        }
                        for (k, &p) in gm.subs[i - 1].iter().enumerate() {
                            order[p] = bm.factor_dims.len() + k;
                        }
                        let dims: Vec<usize> = bm
                            .factor_dims
                            .iter()
                            .chain(&bn.factor_dims)
                            .copied()
                            .collect();
                        let perm = permute_factors(&dims, &order);
                        for a in 0..bm.dim {
                            for b in 0..bn.dim {
                                let local = perm.column(a * bn.dim + b);
                                cols[(bm.offset + a) * dn + bn.offset + b] = local
                                    .iter()
                                    .map(|(r, x)| (bs.offset + r, x.clone()))
                                    .collect();
                            }
                        }
                    }
                }
                circ.insert(
                    (m, i, n),
                    LinMap::from_columns(Space::new(seq[m].dim * dn), seq[tgt].clone(), cols),
                );
            }
        }
    }
    let operad = Operad::new(seq, unit, circ, n_max)?;
    Ok(FreeOperad {
        operad,
        generators: v.clone(),
        blocks,
        w_max,
        index,
    })
}

/// The unit `V -> F(V)`: `V(n)` onto the corolla summand.
pub fn free_unit(fv: &FreeOperad) -> SeqMap {
    let mut comps = BTreeMap::new();
    for n in 0..=fv.max_arity() {
        let src = fv.generators.space(n);
        let mut m = LinMap::zero(src.clone(), fv.operad.seq[n].clone());
        if let Some(b) = fv.block(n, &Tree::corolla(n)) {
            m = LinMap::inclusion(fv.operad.seq[n].dim, b.offset, b.dim)
                .with_spaces(src, fv.operad.seq[n].clone());
        }
        comps.insert(n, m);
    }
    let target = fv.operad.underlying();
    let mut source = fv.generators.clone();
    source.spaces.retain(|&n, _| n <= fv.max_arity());
    SeqMap {
        source,
        target,
        components: comps,
    }
}

/// `F(g) : F(V) -> F(W)`, acting by `⊗ g` on each tree summand.
pub fn free_map(fv: &FreeOperad, fw: &FreeOperad, g: &SeqMap) -> OperadMap {
    let max = fv.max_arity().min(fw.max_arity());
    let components = (0..=max)
        .map(|n| {
            let mut cols: Vec<SparseVec> = vec![Vec::new(); fv.operad.dim(n)];
            for b in &fv.blocks[n] {
                let Some(bw) = fw.block(n, &b.tree) else {
                    continue;
                };
                let maps: Vec<LinMap> = b.tree.inner_arities().iter().map(|&a| g.at(a)).collect();
                let local = LinMap::tensor_all(&maps);
                for c in 0..b.dim {
                    cols[b.offset + c] = local
                        .column(c)
                        .iter()
                        .map(|(r, x)| (bw.offset + r, x.clone()))
                        .collect();
                }
            }
            LinMap::from_columns(fv.operad.seq[n].clone(), fw.operad.seq[n].clone(), cols)
        })
        .collect();
    OperadMap {
        source: fv.operad.truncate(max),
        target: fw.operad.truncate(max),
        components,
    }
}

/// The operad map `F(V) -> O` extending `g : V -> O`: on the `T` summand,
/// `L(O)(p_T) ∘ (⊗ g)` with `p_T` collapsing every inner edge.
pub fn induced_from_free(
    fv: &FreeOperad,
    o: &Operad,
    g: &SeqMap,
) -> Result<OperadMap, OperadError> {
    let max = fv.max_arity().min(o.max_arity);
    let mut components = Vec::with_capacity(max + 1);
    for n in 0..=max {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); fv.operad.dim(n)];
        for b in &fv.blocks[n] {
            let local = if b.tree.is_unit() {
                o.unit.clone()
            } else {
                let arities = b.tree.inner_arities();
                let maps: Vec<LinMap> = arities.iter().map(|&a| g.at(a)).collect();
                let dims: Vec<usize> = arities.iter().map(|&a| o.dim(a)).collect();
                let (collapse, _) = contraction_map(o, &b.tree, &dims, &b.tree.inner_edges())?;
                collapse.after(&LinMap::tensor_all(&maps))
            };
            for c in 0..b.dim {
                cols[b.offset + c] = local.column(c).clone();
            }
        }
        components.push(LinMap::from_columns(
            fv.operad.seq[n].clone(),
            o.seq[n].clone(),
            cols,
        ));
    }
    Ok(OperadMap {
        source: fv.operad.truncate(max),
        target: o.truncate(max),
        components,
    })
}

/// `F(O)` together with the counit `F(O) -> O`.
pub fn free_counit(
    o: &Operad,
    n_max: usize,
    w_max: Option<usize>,
) -> Result<(FreeOperad, OperadMap), OperadError> {
    let n_max = n_max.min(o.max_arity);
    let gens = o.underlying();
    let fo = free_operad(&gens, n_max, w_max)?;
    let id = SeqMap::identity(&gens);
    let counit = induced_from_free(&fo, o, &id)?;
    Ok((fo, counit))
}
