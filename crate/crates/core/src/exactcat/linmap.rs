//! Finite-dimensional rational spaces and sparse exact matrices.

use serde::{Deserialize, Serialize};

use super::{CatError, Scalar};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// A finite-dimensional rational vector space with an optional basis naming.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Space {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(dim: usize) -> Self {
        Space { dim, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self, CatError> {
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(CatError::Invalid("space labels must be distinct".into()));
        }
        Ok(Space {
            dim: labels.len(),
            labels: Some(labels),
        })
    }

    /// The 1-dimensional tensor unit.
    pub fn unit() -> Self {
        Space::new(1)
    }

    pub fn zero() -> Self {
        Space::new(0)
    }

    pub fn validate(&self) -> Result<(), CatError> {
        if let Some(l) = &self.labels {
            if l.len() != self.dim {
                return Err(CatError::Invalid(format!(
                    "space has dim {} but {} labels",
                    self.dim,
                    l.len()
                )));
            }
            Space::labelled(l.clone())?;
        }
        Ok(())
    }
}

/// An exact matrix `target.dim x source.dim`, stored column-sparse.
#[derive(Clone, PartialEq, Eq)]
pub struct LinMap {
    source: Space,
    target: Space,
    cols: Vec<SparseVec>,
}

impl std::fmt::Debug for LinMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LinMap {}x{} [", self.rows(), self.ncols())?;
        for r in 0..self.rows().min(12) {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.ncols().min(12) {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(r, c))?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct LinMapRepr {
    source: Space,
    target: Space,
    entries: Vec<Vec<Scalar>>,
}

impl Serialize for LinMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LinMapRepr {
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.to_dense(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LinMapRepr::deserialize(d)?;
        r.source.validate().map_err(serde::de::Error::custom)?;
        r.target.validate().map_err(serde::de::Error::custom)?;
        // A zero-dimensional target admits `[]` regardless of source.
        LinMap::from_rows(r.source, r.target, &r.entries).map_err(serde::de::Error::custom)
    }
}

/// Accumulates sparse linear combinations into a reusable dense buffer.
struct Accumulator {
    vals: Vec<Scalar>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            vals: vec![Scalar::zero(); n],
            mark: vec![false; n],
            touched: Vec::new(),
        }
    }

    fn add(&mut self, i: usize, x: &Scalar) {
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.vals[i] += x;
    }

    fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::take(&mut self.vals[i]);
            self.mark[i] = false;
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

pub(crate) fn sparse_axpy(y: &SparseVec, a: &Scalar, x: &SparseVec) -> SparseVec {
    // y + a*x
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, a * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + &(a * &x[j].1);
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn sparse_get(v: &SparseVec, i: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&i, |e| e.0).ok().map(|k| &v[k].1)
}

impl LinMap {
    pub fn zero(source: Space, target: Space) -> Self {
        let cols = vec![Vec::new(); source.dim];
        LinMap {
            source,
            target,
            cols,
        }
    }

    pub fn identity(space: Space) -> Self {
        let cols = (0..space.dim).map(|i| vec![(i, Scalar::one())]).collect();
        LinMap {
            source: space.clone(),
            target: space,
            cols,
        }
    }

    /// Builds from sparse columns; indices are sorted and zeros dropped.
    pub fn from_columns(source: Space, target: Space, cols: Vec<SparseVec>) -> Self {
        assert_eq!(cols.len(), source.dim, "column count must equal source dim");
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|e| e.0);
                let mut out: SparseVec = Vec::with_capacity(c.len());
                for (i, v) in c {
                    assert!(i < target.dim, "row index out of range");
                    match out.last_mut() {
                        Some(last) if last.0 == i => last.1 += &v,
                        _ => out.push((i, v)),
                    }
                }
                out.retain(|e| !e.1.is_zero());
                out
            })
            .collect();
        LinMap {
            source,
            target,
            cols,
        }
    }

    /// Row-major dense constructor: `rows.len() == target.dim`.
    pub fn from_rows(source: Space, target: Space, rows: &[Vec<Scalar>]) -> Result<Self, CatError> {
        if rows.len() != target.dim || rows.iter().any(|r| r.len() != source.dim) {
            return Err(CatError::Invalid(format!(
                "matrix shape does not match {}x{}",
                target.dim, source.dim
            )));
        }
        let mut cols = vec![Vec::new(); source.dim];
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cols[c].push((r, v.clone()));
                }
            }
        }
        Ok(LinMap {
            source,
            target,
            cols,
        })
    }

    pub fn from_int_rows(source_dim: usize, target_dim: usize, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        LinMap::from_rows(Space::new(source_dim), Space::new(target_dim), &rows)
            .expect("shape mismatch in from_int_rows")
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn rows(&self) -> usize {
        self.target.dim
    }

    pub fn ncols(&self) -> usize {
        self.source.dim
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.cols[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> Scalar {
        sparse_get(&self.cols[c], r).cloned().unwrap_or_default()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.ncols()]; self.rows()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r][c] = v.clone();
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn with_spaces(mut self, source: Space, target: Space) -> Self {
        assert_eq!(source.dim, self.source.dim);
        assert_eq!(target.dim, self.target.dim);
        self.source = source;
        self.target = target;
        self
    }

    /// `self ∘ f`, checked.
    pub fn compose(&self, f: &LinMap) -> Result<LinMap, CatError> {
        if f.target.dim != self.source.dim {
            return Err(CatError::DomainMismatch {
                expected: self.source.dim,
                found: f.target.dim,
            });
        }
        Ok(self.after(f))
    }

    /// `self ∘ f`; panics on a dimension mismatch, which is an internal bug.
    pub fn after(&self, f: &LinMap) -> LinMap {
        assert_eq!(
            f.target.dim, self.source.dim,
            "composition dimension mismatch: {} -> {} then {} -> {}",
            f.source.dim, f.target.dim, self.source.dim, self.target.dim
        );
        let mut acc = Accumulator::new(self.rows());
        let cols = f
            .cols
            .iter()
            .map(|col| {
                for (k, a) in col {
                    for (r, b) in &self.cols[*k] {
                        acc.add(*r, &(a * b));
                    }
                }
                acc.drain()
            })
            .collect();
        LinMap {
            source: f.source.clone(),
            target: self.target.clone(),
            cols,
        }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new(self.rows());
        for (k, a) in v {
            for (r, b) in &self.cols[*k] {
                acc.add(*r, &(a * b));
            }
        }
        acc.drain()
    }

    /// Kronecker product, left-factor-major: basis `(i, j)` sits at `i * dim_right + j`.
    pub fn tensor(&self, g: &LinMap) -> LinMap {
        let gr = g.rows();
        let mut cols = Vec::with_capacity(self.ncols() * g.ncols());
        for fc in &self.cols {
            for gc in &g.cols {
                let mut col = Vec::with_capacity(fc.len() * gc.len());
                for (fr, fv) in fc {
                    for (grr, gv) in gc {
                        col.push((fr * gr + grr, fv * gv));
                    }
                }
                cols.push(col);
            }
        }
        LinMap {
            source: Space::new(self.ncols() * g.ncols()),
            target: Space::new(self.rows() * g.rows()),
            cols,
        }
    }

    /// Tensor product of a list of maps; the empty list gives the identity of the unit.
    pub fn tensor_all(maps: &[LinMap]) -> LinMap {
        let mut out = LinMap::identity(Space::unit());
        for m in maps {
            out = out.tensor(m);
        }
        out
    }

    pub fn add(&self, g: &LinMap) -> LinMap {
        assert_eq!(self.ncols(), g.ncols());
        assert_eq!(self.rows(), g.rows());
        let cols = self
            .cols
            .iter()
            .zip(&g.cols)
            .map(|(a, b)| sparse_axpy(a, &Scalar::one(), b))
            .collect();
        LinMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cols,
        }
    }

    pub fn sub(&self, g: &LinMap) -> LinMap {
        self.add(&g.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, a: &Scalar) -> LinMap {
        if a.is_zero() {
            return LinMap::zero(self.source.clone(), self.target.clone());
        }
        let cols = self
            .cols
            .iter()
            .map(|c| c.iter().map(|(i, v)| (*i, a * v)).collect())
            .collect();
        LinMap {
            source: self.source.clone(),
            target: self.target.clone(),
            cols,
        }
    }

    pub fn transpose(&self) -> LinMap {
        let mut cols = vec![Vec::new(); self.rows()];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        LinMap {
            source: self.target.clone(),
            target: self.source.clone(),
            cols,
        }
    }

    /// `[f_1 | f_2 | ...]`: the map out of a direct sum, all with one target.
    pub fn hstack(target: Space, maps: &[LinMap]) -> LinMap {
        let mut cols = Vec::new();
        for m in maps {
            assert_eq!(m.rows(), target.dim, "hstack target mismatch");
            cols.extend(m.cols.iter().cloned());
        }
        LinMap {
            source: Space::new(cols.len()),
            target,
            cols,
        }
    }

    /// The map into a direct sum with components `maps`, all with one source.
    pub fn vstack(source: Space, maps: &[LinMap]) -> LinMap {
        let total: usize = maps.iter().map(|m| m.rows()).sum();
        let mut cols = vec![Vec::new(); source.dim];
        let mut off = 0;
        for m in maps {
            assert_eq!(m.ncols(), source.dim, "vstack source mismatch");
            for (c, col) in m.cols.iter().enumerate() {
                cols[c].extend(col.iter().map(|(r, v)| (r + off, v.clone())));
            }
            off += m.rows();
        }
        LinMap {
            source,
            target: Space::new(total),
            cols,
        }
    }

    /// Block-diagonal direct sum of maps.
    pub fn direct_sum(maps: &[LinMap]) -> LinMap {
        let total_rows: usize = maps.iter().map(|m| m.rows()).sum();
        let mut cols = Vec::new();
        let mut off = 0;
        for m in maps {
            for col in &m.cols {
                cols.push(col.iter().map(|(r, v)| (r + off, v.clone())).collect());
            }
            off += m.rows();
        }
        LinMap {
            source: Space::new(cols.len()),
            target: Space::new(total_rows),
            cols,
        }
    }

    /// Restriction to the columns `range` of the source.
    pub fn restrict_cols(&self, start: usize, len: usize) -> LinMap {
        LinMap {
            source: Space::new(len),
            target: self.target.clone(),
            cols: self.cols[start..start + len].to_vec(),
        }
    }

    /// Rows `start..start+len` of the target.
    /// The columns listed in `keep`, in that order.
    pub fn select_cols(&self, keep: &[usize]) -> LinMap {
        LinMap {
            source: Space::new(keep.len()),
            target: self.target.clone(),
            cols: keep.iter().map(|&c| self.cols[c].clone()).collect(),
        }
    }

    pub fn restrict_rows(&self, start: usize, len: usize) -> LinMap {
        let cols = self
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .filter(|(r, _)| *r >= start && *r < start + len)
                    .map(|(r, v)| (r - start, v.clone()))
                    .collect()
            })
            .collect();
        LinMap {
            source: self.source.clone(),
            target: Space::new(len),
            cols,
        }
    }

    /// Inclusion of the summand `start..start+len` into a space of dimension `total`.
    pub fn inclusion(total: usize, start: usize, len: usize) -> LinMap {
        let cols = (0..len).map(|i| vec![(start + i, Scalar::one())]).collect();
        LinMap {
            source: Space::new(len),
            target: Space::new(total),
            cols,
        }
    }

    /// Projection onto the summand `start..start+len`.
    pub fn projection(total: usize, start: usize, len: usize) -> LinMap {
        LinMap::inclusion(total, start, len).transpose()
    }

    /// The permutation matrix sending basis vector `i` to basis vector `perm[i]`.
    pub fn permutation(perm: &[usize]) -> LinMap {
        let n = perm.len();
        let cols = perm.iter().map(|&p| vec![(p, Scalar::one())]).collect();
        LinMap {
            source: Space::new(n),
            target: Space::new(n),
            cols,
        }
    }

    pub fn rank(&self) -> usize {
        Rref::from_vectors(self.rows(), self.cols.iter().cloned()).rank()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.ncols()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows()
    }

    pub fn is_iso(&self) -> bool {
        self.rows() == self.ncols() && self.rank() == self.rows()
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<LinMap, CatError> {
        if !self.is_iso() {
            return Err(CatError::NotInvertible);
        }
        let id = LinMap::identity(self.target.clone());
        Ok(solve_left(self, &id)?.with_spaces(self.target.clone(), self.source.clone()))
    }

    /// A basis of the kernel, as columns of a map into the source.
    pub fn kernel(&self) -> LinMap {
        // Row space of the transpose-free form: rows of `self` span the annihilator.
        let rows = self.transpose();
        let r = Rref::from_vectors(self.ncols(), rows.cols.iter().cloned());
        let free: Vec<usize> = (0..self.ncols()).filter(|c| !r.is_pivot(*c)).collect();
        let mut cols = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v: SparseVec = vec![(f, Scalar::one())];
            for (p, row) in r.rows() {
                if let Some(x) = sparse_get(row, f) {
                    v.push((*p, -x));
                }
            }
            v.sort_by_key(|e| e.0);
            cols.push(v);
        }
        LinMap {
            source: Space::new(free.len()),
            target: self.source.clone(),
            cols,
        }
    }
}

/// Incremental reduced row echelon form of a subspace of `Q^ambient`.
///
/// Rows are kept fully reduced, each with leading coefficient 1 at its pivot,
/// so the stored basis is the unique RREF basis of the spanned subspace.
#[derive(Clone, Debug)]
pub struct Rref {
    ambient: usize,
    rows: std::collections::BTreeMap<usize, SparseVec>,
}

impl Rref {
    pub fn new(ambient: usize) -> Self {
        Rref {
            ambient,
            rows: Default::default(),
        }
    }

    pub fn from_vectors(ambient: usize, vs: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut r = Rref::new(ambient);
        for v in vs {
            r.insert(v);
        }
        r
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&usize, &SparseVec)> {
        self.rows.iter()
    }

    /// Reduces `v` modulo the current subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let hits: Vec<(usize, Scalar)> = v
            .iter()
            .filter(|(i, _)| self.rows.contains_key(i))
            .cloned()
            .collect();
        for (p, x) in hits {
            v = sparse_axpy(&v, &(-&x), &self.rows[&p]);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(&v);
        let Some((p, lead)) = v.first().cloned() else {
            return false;
        };
        let inv = lead.inv();
        let v: SparseVec = v.into_iter().map(|(i, x)| (i, &x * &inv)).collect();
        for row in self.rows.values_mut() {
            if let Some(x) = sparse_get(row, p).cloned() {
                *row = sparse_axpy(row, &(-&x), &v);
            }
        }
        self.rows.insert(p, v);
        true
    }
}

/// A quotient `Q^ambient / R` in canonical coordinates: the basis is the image
/// of the non-pivot standard vectors of the RREF of `R`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub rref: Rref,
    /// Ambient non-pivot coordinates, in increasing order; coordinate `k` of the
    /// quotient is the class of `e_{free[k]}`.
    pub free: Vec<usize>,
    pub pi: LinMap,
    pub section: LinMap,
}

impl Quotient {
    pub fn new(rref: Rref) -> Self {
        let n = rref.ambient();
        let free: Vec<usize> = (0..n).filter(|c| !rref.is_pivot(*c)).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &f) in free.iter().enumerate() {
            pos[f] = k;
        }
        let cols: Vec<SparseVec> = (0..n)
            .map(|c| match rref.rows.get(&c) {
                None => vec![(pos[c], Scalar::one())],
                Some(row) => row
                    .iter()
                    .filter(|(i, _)| *i != c)
                    .map(|(i, x)| (pos[*i], -x))
                    .collect(),
            })
            .collect();
        let pi = LinMap::from_columns(Space::new(n), Space::new(free.len()), cols);
        let section = LinMap {
            source: Space::new(free.len()),
            target: Space::new(n),
            cols: free.iter().map(|&f| vec![(f, Scalar::one())]).collect(),
        };
        Quotient {
            rref,
            free,
            pi,
            section,
        }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }
}

/// Solves `X ∘ a = b` for `X`, requiring `a` injective on the relevant span;
/// errors when no solution exists.
pub fn solve_left(a: &LinMap, b: &LinMap) -> Result<LinMap, CatError> {
    // X a = b  <=>  a^T X^T = b^T.
    let x_t = solve_right(&a.transpose(), &b.transpose())?;
    Ok(x_t.transpose())
}

/// Solves `a ∘ X = b` for `X` (any solution, canonical: free variables zero).
pub fn solve_right(a: &LinMap, b: &LinMap) -> Result<LinMap, CatError> {
    assert_eq!(a.rows(), b.rows());
    // Eliminate on the augmented system by working with rows of [a | b].
    let n = a.ncols();
    let m = b.ncols();
    let at = a.transpose();
    let bt = b.transpose();
    let mut r = Rref::new(n + m);
    for i in 0..a.rows() {
        let mut row: SparseVec = at.cols[i].clone();
        row.extend(bt.cols[i].iter().map(|(j, v)| (n + j, v.clone())));
        r.insert(row);
    }
    let mut cols = vec![Vec::new(); m];
    for (p, row) in r.rows() {
        if *p >= n {
            return Err(CatError::NoSolution);
        }
        for (j, v) in row.iter().filter(|(j, _)| *j >= n) {
            cols[j - n].push((*p, v.clone()));
        }
    }
    Ok(LinMap::from_columns(
        b.source.clone(),
        a.source.clone(),
        cols,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: usize, c: usize, rows: &[&[i64]]) -> LinMap {
        LinMap::from_int_rows(c, r, rows)
    }

    #[test]
    fn product_matches_naive_triple_loop() {
        let g = m(2, 3, &[&[1, 2, 3], &[-1, 0, 4]]);
        let f = m(3, 1, &[&[2], &[5], &[-7]]);
        let gd = g.to_dense();
        let fd = f.to_dense();
        let mut naive = vec![vec![Scalar::zero(); 1]; 2];
        for i in 0..2 {
            for j in 0..1 {
                for k in 0..3 {
                    naive[i][j] += &(&gd[i][k] * &fd[k][j]);
                }
            }
        }
        assert_eq!(g.after(&f).to_dense(), naive);
        assert!(g.compose(&g).is_err());
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(2, 3, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.ncols(), 2);
        assert!(a.after(&k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn quotient_projection_has_section() {
        let rel = vec![vec![(0, Scalar::one()), (2, Scalar::from_int(-1))]];
        let q = Quotient::new(Rref::from_vectors(3, rel.clone()));
        assert_eq!(q.dim(), 2);
        assert_eq!(q.pi.after(&q.section), LinMap::identity(Space::new(2)));
        assert!(q.pi.apply(&rel[0]).is_empty());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(2, 2, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.after(&inv), LinMap::identity(Space::new(2)));
        assert!(m(2, 2, &[&[1, 1], &[1, 1]]).inverse().is_err());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(2, 1, &[&[1], &[1]]);
        let b = m(2, 1, &[&[1], &[2]]);
        assert!(solve_right(&a, &b).is_err());
        let b = m(2, 1, &[&[3], &[3]]);
        let x = solve_right(&a, &b).unwrap();
        assert_eq!(a.after(&x), b);
    }

    #[test]
    fn json_roundtrip() {
        let a = LinMap::from_rows(
            Space::new(2),
            Space::new(2),
            &[
                vec![Scalar::ratio(1, 2), Scalar::zero()],
                vec![Scalar::from_int(-3), Scalar::one()],
            ],
        )
        .unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"1/2\""));
        assert_eq!(serde_json::from_str::<LinMap>(&s).unwrap(), a);
        let bad = r#"{"source":{"dim":1},"target":{"dim":1},"entries":[["1/0"]]}"#;
        assert!(serde_json::from_str::<LinMap>(bad).is_err());
    }
}
