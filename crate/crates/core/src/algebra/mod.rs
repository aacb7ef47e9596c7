//! Graphs over a fixed object set `S`, their non-symmetric tensor product,
//! and algebras over operads in them.
//!
//! Tensor powers are indexed by chains `x = z_0 -> z_1 -> .. -> z_n = y`;
//! the summand of a chain is `M(z_{n-1}, z_n) ⊗ .. ⊗ M(z_0, z_1)`, so the
//! first tensor factor is the last edge and operation inputs read left to
//! right. Summands are ordered lexicographically by `(z_1, .., z_{n-1})`.

mod endo;
mod free;
mod pushout;

pub use endo::{
    algebra_from_opmap, check_algebra, check_algebra_map, check_algebra_via_end, end_operad,
    opmap_from_algebra, restrict, Algebra,
};
pub use free::{
    check_free_map_truncated, free_algebra, free_counit, free_extension, free_unit_map,
    initial_algebra, FreeAlgebra, GradeBlock,
};
pub use pushout::{
    adjunction_unit, algebra_induced_morphism, algebra_pushout, extend_cells, replay, AlgebraCell,
    AlgebraCellPresentation, AlgebraPushout, CellKey, Extension, PresentationReplay,
};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactcat::{symmetry, tensor_dim, CatError, LinMap, Scalar, Space, SparseVec};
use crate::operad::OperadError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("object sets differ: {0:?} vs {1:?}")]
    ObjectSetMismatch(Vec<String>, Vec<String>),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("malformed algebra data: {0}")]
    Shape(String),
    #[error("operad arity bound required: the operad is nonzero in its top arity")]
    TruncationRequired,
    #[error("the algebra carries no cell presentation")]
    MissingPresentation,
    #[error("the cocone does not commute at ({0},{1})")]
    IncompatibleCocone(String, String),
    #[error(transparent)]
    Operad(#[from] OperadError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// A collection of spaces `M(x, y)` indexed by `S × S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGraph {
    pub objects: Vec<String>,
    /// `hom[x * |S| + y]`.
    hom: Vec<Space>,
}

#[derive(Serialize, Deserialize)]
struct SGraphRepr {
    objects: Vec<String>,
    #[serde(default)]
    hom: BTreeMap<String, Space>,
}

impl Serialize for SGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let hom = self
            .pairs()
            .filter(|&(x, y)| self.dim(x, y) > 0)
            .map(|(x, y)| (self.pair_key(x, y), self.hom(x, y).clone()))
            .collect();
        SGraphRepr {
            objects: self.objects.clone(),
            hom,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = SGraphRepr::deserialize(d)?;
        let mut g = SGraph::zero(r.objects).map_err(D::Error::custom)?;
        for (k, sp) in r.hom {
            let (x, y) = g.parse_pair(&k).map_err(D::Error::custom)?;
            sp.validate().map_err(D::Error::custom)?;
            let i = x * g.k() + y;
            g.hom[i] = sp;
        }
        Ok(g)
    }
}

impl SGraph {
    /// The zero graph on `objects`.
    pub fn zero(objects: Vec<String>) -> Result<Self, AlgebraError> {
        let mut seen = std::collections::HashSet::new();
        for o in &objects {
            if !seen.insert(o) || o.contains(',') {
                return Err(AlgebraError::Shape(format!(
                    "object name {o:?} is repeated or contains ','"
                )));
            }
        }
        let k = objects.len();
        Ok(SGraph {
            objects,
            hom: vec![Space::zero(); k * k],
        })
    }

    /// A graph from `(x, y, dim)` triples over named objects.
    pub fn from_dims(objects: &[&str], homs: &[(&str, &str, usize)]) -> Result<Self, AlgebraError> {
        let mut g = SGraph::zero(objects.iter().map(|s| s.to_string()).collect())?;
        for &(x, y, d) in homs {
            let (x, y) = (g.index_of(x)?, g.index_of(y)?);
            g.set(x, y, Space::new(d));
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.objects.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, AlgebraError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| AlgebraError::UnknownObject(name.into()))
    }

    fn parse_pair(&self, key: &str) -> Result<(usize, usize), AlgebraError> {
        let (a, b) = key
            .split_once(',')
            .ok_or_else(|| AlgebraError::Shape(format!("hom key {key:?} is not \"x,y\"")))?;
        Ok((self.index_of(a.trim())?, self.index_of(b.trim())?))
    }

    pub fn pair_key(&self, x: usize, y: usize) -> String {
        format!("{},{}", self.objects[x], self.objects[y])
    }

    pub fn hom(&self, x: usize, y: usize) -> &Space {
        &self.hom[x * self.k() + y]
    }

    pub fn dim(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).dim
    }

    pub fn set(&mut self, x: usize, y: usize, s: Space) {
        let k = self.k();
        self.hom[x * k + y] = s;
    }

    /// All `(x, y)` in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let k = self.k();
        (0..k * k).map(move |p| (p / k, p % k))
    }

    pub fn total_dim(&self) -> usize {
        self.hom.iter().map(|s| s.dim).sum()
    }

    pub fn same_objects(&self, other: &SGraph) -> Result<(), AlgebraError> {
        if self.objects != other.objects {
            return Err(AlgebraError::ObjectSetMismatch(
                self.objects.clone(),
                other.objects.clone(),
            ));
        }
        Ok(())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.hom.iter().map(|s| s.dim).collect()
    }
}

/// A morphism of graphs, one matrix per pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGraphMap {
    pub source: SGraph,
    pub target: SGraph,
    components: Vec<LinMap>,
}

impl SGraphMap {
    pub fn new(
        source: SGraph,
        target: SGraph,
        components: Vec<LinMap>,
    ) -> Result<Self, AlgebraError> {
        source.same_objects(&target)?;
        if components.len() != source.k() * source.k() {
            return Err(AlgebraError::Shape("one component per pair".into()));
        }
        for ((x, y), c) in source.pairs().zip(&components) {
            if c.ncols() != source.dim(x, y) || c.rows() != target.dim(x, y) {
                return Err(AlgebraError::Shape(format!(
                    "component at {} has the wrong shape",
                    source.pair_key(x, y)
                )));
            }
        }
        Ok(SGraphMap {
            source,
            target,
            components,
        })
    }

    /// Builds from a closure; shapes are forced onto the components.
    pub fn from_fn(
        source: &SGraph,
        target: &SGraph,
        mut f: impl FnMut(usize, usize) -> LinMap,
    ) -> Self {
        let components = source
            .pairs()
            .map(|(x, y)| f(x, y).with_spaces(source.hom(x, y).clone(), target.hom(x, y).clone()))
            .collect();
        SGraphMap {
            source: source.clone(),
            target: target.clone(),
            components,
        }
    }

    pub fn zero(source: &SGraph, target: &SGraph) -> Self {
        Self::from_fn(source, target, |x, y| {
            LinMap::zero(source.hom(x, y).clone(), target.hom(x, y).clone())
        })
    }

    pub fn identity(g: &SGraph) -> Self {
        Self::from_fn(g, g, |x, y| LinMap::identity(g.hom(x, y).clone()))
    }

    pub fn at(&self, x: usize, y: usize) -> &LinMap {
        &self.components[x * self.source.k() + y]
    }

    pub fn components(&self) -> &[LinMap] {
        &self.components
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &SGraphMap) -> SGraphMap {
        SGraphMap::from_fn(&f.source, &self.target, |x, y| {
            self.at(x, y).after(f.at(x, y))
        })
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(LinMap::is_iso)
    }
}

#[derive(Serialize, Deserialize)]
struct SGraphMapRepr {
    source: SGraph,
    target: SGraph,
    #[serde(default)]
    components: BTreeMap<String, LinMap>,
}

impl Serialize for SGraphMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let components = self
            .source
            .pairs()
            .filter(|&(x, y)| !self.at(x, y).is_zero())
            .map(|(x, y)| (self.source.pair_key(x, y), self.at(x, y).clone()))
            .collect();
        SGraphMapRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SGraphMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = SGraphMapRepr::deserialize(d)?;
        let mut comps: HashMap<(usize, usize), LinMap> = HashMap::new();
        for (k, m) in r.components {
            comps.insert(r.source.parse_pair(&k).map_err(D::Error::custom)?, m);
        }
        let components = r
            .source
            .pairs()
            .map(|(x, y)| {
                comps.remove(&(x, y)).unwrap_or_else(|| {
                    LinMap::zero(r.source.hom(x, y).clone(), r.target.hom(x, y).clone())
                })
            })
            .collect();
        SGraphMap::new(r.source, r.target, components).map_err(D::Error::custom)
    }
}

/// One chain summand of a tensor power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBlock {
    /// `z_0, .., z_n`.
    pub chain: Vec<usize>,
    pub offset: usize,
    /// Factor dimensions, first factor = last edge.
    pub factor_dims: Vec<usize>,
    pub dim: usize,
}

/// The chain decomposition of `(M_1 ⊗_S .. ⊗_S M_n)(x, y)`; zero summands are omitted.
#[derive(Clone, Debug)]
pub struct ChainSpace {
    pub blocks: Vec<ChainBlock>,
    pub dim: usize,
    index: HashMap<Vec<usize>, usize>,
}

/// Edge of factor `j` in a chain of length `n`.
pub fn factor_edge(chain: &[usize], j: usize) -> (usize, usize) {
    let n = chain.len() - 1;
    (chain[n - 1 - j], chain[n - j])
}

impl ChainSpace {
    /// `dim_of(j, (u, v))` is the dimension of factor `j` on the edge `u -> v`.
    pub fn new(
        k: usize,
        n: usize,
        x: usize,
        y: usize,
        dim_of: impl Fn(usize, (usize, usize)) -> usize,
    ) -> Self {
        let mut blocks = Vec::new();
        let mut index = HashMap::new();
        let mut off = 0;
        if n == 0 {
            if x == y {
                blocks.push(ChainBlock {
                    chain: vec![x],
                    offset: 0,
                    factor_dims: vec![],
                    dim: 1,
                });
                index.insert(vec![x], 0);
                off = 1;
            }
            return ChainSpace {
                blocks,
                dim: off,
                index,
            };
        }
        let mut interior = vec![0usize; n - 1];
        loop {
            let mut chain = Vec::with_capacity(n + 1);
            chain.push(x);
            chain.extend(&interior);
            chain.push(y);
            let factor_dims: Vec<usize> =
                (0..n).map(|j| dim_of(j, factor_edge(&chain, j))).collect();
            let dim = tensor_dim(&factor_dims);
            if dim > 0 {
                index.insert(chain.clone(), blocks.len());
                blocks.push(ChainBlock {
                    chain,
                    offset: off,
                    factor_dims,
                    dim,
                });
                off += dim;
            }
            // Odometer over interior vertices, last one fastest.
            let mut p = n - 1;
            loop {
                if p == 0 {
                    return ChainSpace {
                        blocks,
                        dim: off,
                        index,
                    };
                }
                interior[p - 1] += 1;
                if interior[p - 1] < k {
                    break;
                }
                interior[p - 1] = 0;
                p -= 1;
            }
        }
    }

    /// `M^{⊗n}(x, y)`.
    pub fn power(m: &SGraph, n: usize, x: usize, y: usize) -> Self {
        ChainSpace::new(m.k(), n, x, y, |_, (u, v)| m.dim(u, v))
    }

    pub fn block(&self, chain: &[usize]) -> Option<&ChainBlock> {
        self.index.get(chain).map(|&b| &self.blocks[b])
    }
}

/// Mixed-radix digits of `idx` for `dims`, first digit most significant.
pub fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for j in (0..dims.len()).rev() {
        out[j] = idx % dims[j];
        idx /= dims[j];
    }
    out
}

pub fn undigits(ds: &[usize], dims: &[usize]) -> usize {
    ds.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// `(M ⊗_S N)(x, y) = ⊕_z M(z, y) ⊗ N(x, z)`.
pub fn tensor_s(m: &SGraph, n: &SGraph) -> Result<SGraph, AlgebraError> {
    m.same_objects(n)?;
    let mut out = SGraph::zero(m.objects.clone())?;
    for (x, y) in m.pairs() {
        let cs = ChainSpace::new(m.k(), 2, x, y, |j, (u, v)| {
            if j == 0 {
                m.dim(u, v)
            } else {
                n.dim(u, v)
            }
        });
        out.set(x, y, Space::new(cs.dim));
    }
    Ok(out)
}

/// `f ⊗_S g`, chain summand by chain summand.
pub fn tensor_s_map(f: &SGraphMap, g: &SGraphMap) -> Result<SGraphMap, AlgebraError> {
    let src = tensor_s(&f.source, &g.source)?;
    let tgt = tensor_s(&f.target, &g.target)?;
    let k = src.k();
    Ok(SGraphMap::from_fn(&src, &tgt, |x, y| {
        let cs = ChainSpace::new(k, 2, x, y, |j, (u, v)| {
            if j == 0 {
                f.source.dim(u, v)
            } else {
                g.source.dim(u, v)
            }
        });
        let ct = ChainSpace::new(k, 2, x, y, |j, (u, v)| {
            if j == 0 {
                f.target.dim(u, v)
            } else {
                g.target.dim(u, v)
            }
        });
        chain_map(&cs, &ct, |j, (u, v)| {
            if j == 0 {
                f.at(u, v).clone()
            } else {
                g.at(u, v).clone()
            }
        })
    }))
}

/// The block-diagonal map between chain spaces applying `map_of(j, edge)` on factor `j`.
pub fn chain_map(
    src: &ChainSpace,
    tgt: &ChainSpace,
    map_of: impl Fn(usize, (usize, usize)) -> LinMap,
) -> LinMap {
    let mut cols: Vec<SparseVec> = vec![Vec::new(); src.dim];
    for b in &src.blocks {
        let Some(tb) = tgt.block(&b.chain) else {
            continue;
        };
        let n = b.chain.len() - 1;
        let maps: Vec<LinMap> = (0..n)
            .map(|j| map_of(j, factor_edge(&b.chain, j)))
            .collect();
        let local = LinMap::tensor_all(&maps);
        for c in 0..b.dim {
            cols[b.offset + c] = local
                .column(c)
                .iter()
                .map(|(r, v)| (tb.offset + r, v.clone()))
                .collect();
        }
    }
    LinMap::from_columns(Space::new(src.dim), Space::new(tgt.dim), cols)
}

/// `h^{⊗n}` on the chain decomposition of the `n`-th tensor power at `(x, y)`.
pub fn power_map(h: &SGraphMap, n: usize, x: usize, y: usize) -> LinMap {
    let src = ChainSpace::power(&h.source, n, x, y);
    let tgt = ChainSpace::power(&h.target, n, x, y);
    chain_map(&src, &tgt, |_, (u, v)| h.at(u, v).clone())
}

/// The unit for `⊗_S`: the unit object on the diagonal.
pub fn unit_graph(objects: Vec<String>) -> Result<SGraph, AlgebraError> {
    z_of(&Space::unit(), objects)
}

/// `z(A)`: `A` on the diagonal, zero elsewhere.
pub fn z_of(a: &Space, objects: Vec<String>) -> Result<SGraph, AlgebraError> {
    let mut g = SGraph::zero(objects)?;
    for x in 0..g.k() {
        g.set(x, x, a.clone());
    }
    Ok(g)
}

/// `ζ : z(A) ⊗_S M -> M ⊗_S z(A)`, the symmetry `A ⊗ M(x,y) -> M(x,y) ⊗ A` in each pair.
pub fn zeta(a: &Space, m: &SGraph) -> Result<SGraphMap, AlgebraError> {
    let za = z_of(a, m.objects.clone())?;
    let src = tensor_s(&za, m)?;
    let tgt = tensor_s(m, &za)?;
    Ok(SGraphMap::from_fn(&src, &tgt, |x, y| {
        symmetry(a, m.hom(x, y))
    }))
}

/// `hom_C(Y, Z) = Π_{x,y} Hom(Y(x,y), Z(x,y))`, matrices vectorized row-major and pairs in order.
pub fn hom_c(y: &SGraph, z: &SGraph) -> Result<Space, AlgebraError> {
    y.same_objects(z)?;
    Ok(Space::new(
        y.pairs().map(|(a, b)| y.dim(a, b) * z.dim(a, b)).sum(),
    ))
}

fn hom_c_offsets(y: &SGraph, z: &SGraph) -> Vec<usize> {
    let mut out = Vec::with_capacity(y.k() * y.k());
    let mut off = 0;
    for (a, b) in y.pairs() {
        out.push(off);
        off += y.dim(a, b) * z.dim(a, b);
    }
    out
}

/// The counit `z(hom_C(Y, Z)) ⊗_S Y -> Z`.
pub fn evaluation(y: &SGraph, z: &SGraph) -> Result<SGraphMap, AlgebraError> {
    let h = hom_c(y, z)?;
    let zh = z_of(&h, y.objects.clone())?;
    let src = tensor_s(&zh, y)?;
    let offs = hom_c_offsets(y, z);
    let k = y.k();
    Ok(SGraphMap::from_fn(&src, z, |a, b| {
        let (dy, dz) = (y.dim(a, b), z.dim(a, b));
        let off = offs[a * k + b];
        let mut cols = vec![Vec::new(); h.dim * dy];
        for r in 0..dz {
            for c in 0..dy {
                cols[(off + r * dy + c) * dy + c] = vec![(r, Scalar::one())];
            }
        }
        LinMap::from_columns(Space::new(h.dim * dy), Space::new(dz), cols)
    }))
}

/// Transposes a map `z(A) ⊗_S Y -> Z` into `A -> hom_C(Y, Z)`.
pub fn curry(a: &Space, y: &SGraph, m: &SGraphMap) -> Result<LinMap, AlgebraError> {
    let offs = hom_c_offsets(y, &m.target);
    let h = hom_c(y, &m.target)?;
    let k = y.k();
    let mut cols = vec![Vec::new(); a.dim];
    for (p, q) in y.pairs() {
        let dy = y.dim(p, q);
        let comp = m.at(p, q);
        for (s, col) in cols.iter_mut().enumerate() {
            for c in 0..dy {
                for (r, v) in comp.column(s * dy + c) {
                    col.push((offs[p * k + q] + r * dy + c, v.clone()));
                }
            }
        }
    }
    Ok(LinMap::from_columns(a.clone(), h, cols))
}

/// Inverse of [`curry`]: `g` becomes `ev ∘ (z(g) ⊗ id)`.
pub fn uncurry(g: &LinMap, y: &SGraph, z: &SGraph) -> Result<SGraphMap, AlgebraError> {
    let a = g.source().clone();
    let za = z_of(&a, y.objects.clone())?;
    let src = tensor_s(&za, y)?;
    let ev = evaluation(y, z)?;
    Ok(SGraphMap::from_fn(&src, z, |p, q| {
        ev.at(p, q)
            .after(&g.tensor(&LinMap::identity(y.hom(p, q).clone())))
    }))
}

/// Right adjoint of `M ⊗_S -`: `hom_l(M, P)(x, z) = Π_y Hom(M(z, y), P(x, y))`.
pub fn hom_l(m: &SGraph, p: &SGraph) -> Result<SGraph, AlgebraError> {
    m.same_objects(p)?;
    let mut out = SGraph::zero(m.objects.clone())?;
    for (x, z) in m.pairs() {
        out.set(
            x,
            z,
            Space::new((0..m.k()).map(|y| m.dim(z, y) * p.dim(x, y)).sum()),
        );
    }
    Ok(out)
}

/// Right adjoint of `- ⊗_S N`: `hom_r(N, P)(z, y) = Π_x Hom(N(x, z), P(x, y))`.
pub fn hom_r(n: &SGraph, p: &SGraph) -> Result<SGraph, AlgebraError> {
    n.same_objects(p)?;
    let mut out = SGraph::zero(n.objects.clone())?;
    for (z, y) in n.pairs() {
        out.set(
            z,
            y,
            Space::new((0..n.k()).map(|x| n.dim(x, z) * p.dim(x, y)).sum()),
        );
    }
    Ok(out)
}

/// The poset `x <= y` as an `Ass`-algebra: every composable chain composes
/// to the unique arrow.
#[cfg(test)]
pub(crate) fn poset_algebra() -> Algebra {
    let y = SGraph::from_dims(&["x", "y"], &[("x", "x", 1), ("y", "y", 1), ("x", "y", 1)]).unwrap();
    let o = crate::operad::ass_operad(3);
    let yc = y.clone();
    Algebra::from_fn(o, y, move |n, x, yy| {
        let src = ChainSpace::power(&yc, n, x, yy).dim;
        let d = yc.dim(x, yy);
        LinMap::from_columns(
            Space::new(src),
            Space::new(d),
            (0..src).map(|_| vec![(0, Scalar::one())]).collect(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quiver() -> SGraph {
        SGraph::from_dims(&["x", "y", "z"], &[("x", "y", 1), ("y", "z", 1)]).unwrap()
    }

    #[test]
    fn unit_graph_is_a_unit() {
        let m = SGraph::from_dims(&["x", "y"], &[("x", "y", 2), ("y", "y", 3)]).unwrap();
        let e = unit_graph(m.objects.clone()).unwrap();
        assert_eq!(tensor_s(&e, &m).unwrap(), m);
        assert_eq!(tensor_s(&m, &e).unwrap(), m);
    }

    #[test]
    fn no_composable_pairs() {
        let m = SGraph::from_dims(&["x", "y"], &[("x", "y", 1)]).unwrap();
        assert_eq!(tensor_s(&m, &m).unwrap().total_dim(), 0);
    }

    #[test]
    fn paths_of_length_two() {
        let q = quiver();
        let q2 = tensor_s(&q, &q).unwrap();
        assert_eq!(q2.dim(0, 2), 1);
        assert_eq!(q2.total_dim(), 1);
    }

    #[test]
    fn hom_and_zeta_basics() {
        let y = SGraph::from_dims(&["x"], &[("x", "x", 2)]).unwrap();
        assert_eq!(hom_c(&y, &y).unwrap().dim, 4);
        let z = zeta(&Space::unit(), &y).unwrap();
        assert!(z
            .components()
            .iter()
            .all(|c| *c == LinMap::identity(Space::new(2))));
    }

    #[test]
    fn adjoint_dimensions() {
        let m = SGraph::from_dims(&["x", "y"], &[("x", "y", 2), ("y", "y", 1)]).unwrap();
        let p = SGraph::from_dims(&["x", "y"], &[("x", "y", 3), ("x", "x", 1)]).unwrap();
        let n = SGraph::from_dims(&["x", "y"], &[("x", "x", 1), ("x", "y", 1)]).unwrap();
        // Hom(M ⊗ N, P) = Hom(N, hom_l(M, P)) = Hom(M, hom_r(N, P)).
        let hom_dim = |a: &SGraph, b: &SGraph| hom_c(a, b).unwrap().dim;
        let lhs = hom_dim(&tensor_s(&m, &n).unwrap(), &p);
        assert_eq!(lhs, hom_dim(&n, &hom_l(&m, &p).unwrap()));
        assert_eq!(lhs, hom_dim(&m, &hom_r(&n, &p).unwrap()));
    }

    #[test]
    fn currying_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let y =
            SGraph::from_dims(&["x", "y"], &[("x", "y", 2), ("y", "y", 1), ("x", "x", 1)]).unwrap();
        let z = SGraph::from_dims(&["x", "y"], &[("x", "y", 1), ("y", "y", 2)]).unwrap();
        let a = Space::new(2);
        for _ in 0..10 {
            let src = tensor_s(&z_of(&a, y.objects.clone()).unwrap(), &y).unwrap();
            let m = SGraphMap::from_fn(&src, &z, |p, q| {
                let rows: Vec<Vec<Scalar>> = (0..z.dim(p, q))
                    .map(|_| {
                        (0..src.dim(p, q))
                            .map(|_| Scalar::from_int(rng.gen_range(-3..=3)))
                            .collect()
                    })
                    .collect();
                LinMap::from_rows(src.hom(p, q).clone(), z.hom(p, q).clone(), &rows).unwrap()
            });
            let g = curry(&a, &y, &m).unwrap();
            assert_eq!(uncurry(&g, &y, &z).unwrap(), m);
            assert_eq!(curry(&a, &y, &uncurry(&g, &y, &z).unwrap()).unwrap(), g);
        }
    }

    #[test]
    fn graph_json() {
        let q = quiver();
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(serde_json::from_str::<SGraph>(&js).unwrap(), q);
        let empty: SGraph = serde_json::from_str(r#"{"objects":["a","b"],"hom":{}}"#).unwrap();
        assert_eq!(empty.total_dim(), 0);
    }
}
