//! Free algebras `F_O(Y) = ⊕_p z(O(p)) ⊗_S Y^{⊗p}`, graded by `p`.

use std::collections::HashMap;

use super::{
    digits, factor_edge, power_map, undigits, Algebra, AlgebraError, ChainSpace, SGraph, SGraphMap,
};
use crate::exactcat::{LinMap, Space, SparseVec};
use crate::operad::{mu_from_circ, Operad};
use crate::report::{first_difference, Report};

/// The grade-`p` summand `O(p) ⊗ Y^{⊗p}(x, y)`, laid out operation-major.
#[derive(Clone, Debug)]
pub struct GradeBlock {
    pub p: usize,
    pub offset: usize,
    pub chains: ChainSpace,
}

impl GradeBlock {
    pub fn dim(&self, o: &Operad) -> usize {
        o.dim(self.p) * self.chains.dim
    }
}

#[derive(Clone, Debug)]
pub struct FreeAlgebra {
    pub algebra: Algebra,
    pub generators: SGraph,
    pub p_max: usize,
    /// Whether nonzero grades above `p_max` were dropped.
    pub truncated: bool,
    /// `grades[pair][p]`.
    pub grades: Vec<Vec<GradeBlock>>,
}

impl FreeAlgebra {
    pub fn grade(&self, x: usize, y: usize, p: usize) -> &GradeBlock {
        &self.grades[x * self.generators.k() + y][p]
    }

    /// The grade of every basis vector at `(x, y)`.
    pub fn weights(&self, x: usize, y: usize) -> Vec<usize> {
        let o = &self.algebra.operad;
        self.grades[x * self.generators.k() + y]
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.p, g.dim(o)))
            .collect()
    }
}

/// Decoded basis vector of `F(u, v)`: grade, operation, chain and factor digits.
struct Basis {
    p: usize,
    op: usize,
    chain: Vec<usize>,
    digits: Vec<usize>,
}

/// `F_O(Y)` with grades `0..=p_max`; `ν_n` composes operations with `μ`
/// and concatenates chains, dropping grades above `p_max`.
pub fn free_algebra(o: &Operad, y: &SGraph, p_max: usize) -> Result<FreeAlgebra, AlgebraError> {
    let p_max = p_max.min(o.max_arity);
    let k = y.k();
    let mut carrier = SGraph::zero(y.objects.clone())?;
    let mut grades = Vec::with_capacity(k * k);
    let mut decode: Vec<Vec<Basis>> = Vec::with_capacity(k * k);
    for (a, b) in y.pairs() {
        let mut gs = Vec::new();
        let mut dec = Vec::new();
        let mut off = 0;
        for p in 0..=p_max {
            let chains = ChainSpace::power(y, p, a, b);
            let g = GradeBlock {
                p,
                offset: off,
                chains,
            };
            off += g.dim(o);
            for op in 0..o.dim(p) {
                for blk in &g.chains.blocks {
                    for l in 0..blk.dim {
                        dec.push(Basis {
                            p,
                            op,
                            chain: blk.chain.clone(),
                            digits: digits(l, &blk.factor_dims),
                        });
                    }
                }
            }
            gs.push(g);
        }
        carrier.set(a, b, Space::new(off));
        grades.push(gs);
        decode.push(dec);
    }
    let truncated = y
        .pairs()
        .any(|(a, b)| ChainSpace::power(y, p_max + 1, a, b).dim > 0);
    let mut mus: HashMap<Vec<usize>, LinMap> = HashMap::new();
    let mut nu = Vec::with_capacity(o.max_arity + 1);
    for n in 0..=o.max_arity {
        let mut row = Vec::with_capacity(k * k);
        for (x, yy) in y.pairs() {
            let fpow = ChainSpace::power(&carrier, n, x, yy);
            let mut cols: Vec<SparseVec> = vec![Vec::new(); o.dim(n) * fpow.dim];
            for blk in &fpow.blocks {
                for l in 0..blk.dim {
                    let ds = digits(l, &blk.factor_dims);
                    let inputs: Vec<&Basis> = (0..n)
                        .map(|j| {
                            let (u, v) = factor_edge(&blk.chain, j);
                            &decode[u * k + v][ds[j]]
                        })
                        .collect();
                    let ps: Vec<usize> = inputs.iter().map(|b| b.p).collect();
                    let total: usize = ps.iter().sum();
                    if total > p_max {
                        continue;
                    }
                    let mu = match mus.get(&ps) {
                        Some(m) => m,
                        None => {
                            let m = mu_from_circ(o, &ps)?;
                            mus.entry(ps.clone()).or_insert(m)
                        }
                    };
                    // Concatenate: input 0 carries the last edges.
                    let mut chain = vec![x];
                    for b in inputs.iter().rev() {
                        chain.extend(&b.chain[1..]);
                    }
                    let fdigits: Vec<usize> = inputs
                        .iter()
                        .flat_map(|b| b.digits.iter().copied())
                        .collect();
                    let g = &grades[x * k + yy][total];
                    let Some(tb) = g.chains.block(&chain) else {
                        continue;
                    };
                    let local = g.offset + tb.offset + undigits(&fdigits, &tb.factor_dims);
                    let mut op_dims = vec![o.dim(n)];
                    op_dims.extend(ps.iter().map(|&p| o.dim(p)));
                    for top in 0..o.dim(n) {
                        let mut od = vec![top];
                        od.extend(inputs.iter().map(|b| b.op));
                        let col = mu.column(undigits(&od, &op_dims));
                        cols[top * fpow.dim + blk.offset + l] = col
                            .iter()
                            .map(|(r, v)| (local + r * g.chains.dim, v.clone()))
                            .collect();
                    }
                }
            }
            row.push(LinMap::from_columns(
                Space::new(o.dim(n) * fpow.dim),
                carrier.hom(x, yy).clone(),
                cols,
            ));
        }
        nu.push(row);
    }
    let algebra = Algebra::new(o.clone(), carrier, nu)?;
    Ok(FreeAlgebra {
        algebra,
        generators: y.clone(),
        p_max,
        truncated,
        grades,
    })
}

/// `z(O(0))`, the initial `O`-algebra.
pub fn initial_algebra(o: &Operad, objects: Vec<String>) -> Result<Algebra, AlgebraError> {
    Ok(free_algebra(o, &SGraph::zero(objects)?, 0)?.algebra)
}

/// `Y -> F_O(Y)`, `y ↦ u ⊗ y` in grade 1.
pub fn free_unit_map(fa: &FreeAlgebra) -> SGraphMap {
    let o = &fa.algebra.operad;
    let y = &fa.generators;
    SGraphMap::from_fn(y, &fa.algebra.carrier, |a, b| {
        let d = y.dim(a, b);
        let mut cols = vec![Vec::new(); d];
        if fa.p_max >= 1 {
            let g = fa.grade(a, b, 1);
            for (c, col) in cols.iter_mut().enumerate() {
                for (k, v) in o.unit.column(0) {
                    col.push((g.offset + k * g.chains.dim + c, v.clone()));
                }
            }
        }
        LinMap::from_columns(Space::new(d), fa.algebra.carrier.hom(a, b).clone(), cols)
    })
}

/// `F_O(A) -> A`, given on grade `p` by `ν^A_p`.
pub fn free_counit(a: &Algebra, p_max: usize) -> Result<(FreeAlgebra, SGraphMap), AlgebraError> {
    let fa = free_algebra(&a.operad, &a.carrier, p_max)?;
    let eps = SGraphMap::from_fn(&fa.algebra.carrier, &a.carrier, |x, y| {
        let parts: Vec<LinMap> = (0..=fa.p_max).map(|p| a.nu(p, x, y).clone()).collect();
        LinMap::hstack(a.carrier.hom(x, y).clone(), &parts)
    });
    Ok((fa, eps))
}

/// The extension `F_O(Y) -> B` of `h : Y -> B`, given on grade `p` by `ν^B_p ∘ (id ⊗ h^{⊗p})`.
pub fn free_extension(fa: &FreeAlgebra, b: &Algebra, h: &SGraphMap) -> SGraphMap {
    let o = &fa.algebra.operad;
    SGraphMap::from_fn(&fa.algebra.carrier, &b.carrier, |x, y| {
        let parts: Vec<LinMap> = (0..=fa.p_max)
            .map(|p| {
                let id = LinMap::identity(o.seq[p].clone());
                b.nu(p, x, y).after(&id.tensor(&power_map(h, p, x, y)))
            })
            .collect();
        LinMap::hstack(b.carrier.hom(x, y).clone(), &parts)
    })
}

/// [`check_algebra_map`](super::check_algebra_map) restricted to inputs of total grade `<= p_max`.
pub fn check_free_map_truncated(
    h: &SGraphMap,
    fa: &FreeAlgebra,
    b: &Algebra,
    max_arity: usize,
) -> Report {
    let a = &fa.algebra;
    let max = max_arity.min(a.max_arity()).min(b.max_arity());
    let k = a.carrier.k();
    let weights: Vec<Vec<usize>> = a.carrier.pairs().map(|(x, y)| fa.weights(x, y)).collect();
    let mut rep = Report::new();
    for n in 0..=max {
        for (x, y) in a.carrier.pairs() {
            let fpow = ChainSpace::power(&a.carrier, n, x, y);
            let mut keep = Vec::new();
            for top in 0..a.operad.dim(n) {
                for blk in &fpow.blocks {
                    for l in 0..blk.dim {
                        let ds = digits(l, &blk.factor_dims);
                        let total: usize = (0..n)
                            .map(|j| {
                                let (u, v) = factor_edge(&blk.chain, j);
                                weights[u * k + v][ds[j]]
                            })
                            .sum();
                        if total <= fa.p_max {
                            keep.push(top * fpow.dim + blk.offset + l);
                        }
                    }
                }
            }
            let lhs = h.at(x, y).after(a.nu(n, x, y)).select_cols(&keep);
            let rhs = b
                .nu(n, x, y)
                .after(&LinMap::identity(a.operad.seq[n].clone()).tensor(&power_map(h, n, x, y)))
                .select_cols(&keep);
            rep.record(
                lhs == rhs,
                "algebra map",
                || format!("n={n} at {}", a.carrier.pair_key(x, y)),
                || first_difference(&lhs, &rhs),
            );
        }
    }
    if fa.truncated {
        rep.mark_truncated(format!("inputs of total grade <= {}", fa.p_max));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_algebra, check_algebra_map};
    use crate::exactcat::Scalar;
    use crate::operad::ass_operad;

    fn quiver() -> SGraph {
        SGraph::from_dims(&["x", "y", "z"], &[("x", "y", 1), ("y", "z", 1)]).unwrap()
    }

    #[test]
    fn free_category_path_counts() {
        let fa = free_algebra(&ass_operad(3), &quiver(), 3).unwrap();
        let c = &fa.algebra.carrier;
        assert_eq!(c.dim(0, 2), 1);
        assert_eq!(c.dim(0, 1), 1);
        assert_eq!(c.dim(0, 0), 1);
        assert_eq!(c.dim(2, 0), 0);
        assert!(!fa.truncated);
        assert!(check_algebra(&fa.algebra, 3).passed());
    }

    #[test]
    fn free_on_zero_is_initial() {
        let o = ass_operad(2);
        let a = initial_algebra(&o, vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(a.carrier.dims(), vec![1, 0, 0, 1]);
        assert!(check_algebra(&a, 2).passed());
    }

    #[test]
    fn loop_is_truncated_and_graded() {
        let y = SGraph::from_dims(&["x"], &[("x", "x", 1)]).unwrap();
        let fa = free_algebra(&ass_operad(3), &y, 2).unwrap();
        assert!(fa.truncated);
        assert_eq!(fa.algebra.carrier.dim(0, 0), 3);
        assert!(check_algebra(&fa.algebra, 3).passed());
        // ν_2 sends grades (1, 1) to grade 2.
        let w = fa.weights(0, 0);
        let nu2 = fa.algebra.nu(2, 0, 0);
        let d = w.len();
        for c in 0..nu2.ncols() {
            let (p1, p2) = (w[(c % (d * d)) / d], w[c % d]);
            for (r, _) in nu2.column(c) {
                assert_eq!(w[*r], p1 + p2);
            }
        }
    }

    #[test]
    fn counit_is_an_algebra_map() {
        let a = crate::algebra::poset_algebra();
        let (fa, eps) = free_counit(&a, 2).unwrap();
        assert!(check_free_map_truncated(&eps, &fa, &a, 2).passed());
        assert!(!check_algebra_map(&eps, &fa.algebra, &a, 2).passed());
        let unit = free_unit_map(&fa);
        let id = eps.after(&unit);
        assert_eq!(id, SGraphMap::identity(&a.carrier));
    }

    #[test]
    fn unit_column_lands_in_grade_one() {
        let fa = free_algebra(&ass_operad(2), &quiver(), 2).unwrap();
        let u = free_unit_map(&fa);
        assert_eq!(u.at(0, 1).column(0), &vec![(0, Scalar::one())]);
    }
}
