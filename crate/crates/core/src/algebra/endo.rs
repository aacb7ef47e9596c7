//! Endomorphism operads and algebras given by structure maps
//! `ν_n : z(O(n)) ⊗_S Y^{⊗n} -> Y`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    digits, factor_edge, power_map, undigits, AlgebraError, ChainSpace, SGraph, SGraphMap,
};
use crate::exactcat::{act_on_factors, permute_factors, LinMap, Scalar, Space, SparseVec};
use crate::operad::{admissible, check_operad_map, Operad, OperadMap};
use crate::report::{first_difference, Report};

/// An `O`-algebra: `nu[n]` holds `ν_n(x, y) : O(n) ⊗ Y^{⊗n}(x, y) -> Y(x, y)` per pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub operad: Operad,
    pub carrier: SGraph,
    nu: Vec<Vec<LinMap>>,
}

impl Algebra {
    pub fn new(
        operad: Operad,
        carrier: SGraph,
        nu: Vec<Vec<LinMap>>,
    ) -> Result<Self, AlgebraError> {
        if nu.len() != operad.max_arity + 1 {
            return Err(AlgebraError::Shape(format!(
                "expected ν_0..ν_{}",
                operad.max_arity
            )));
        }
        for (n, row) in nu.iter().enumerate() {
            if row.len() != carrier.k() * carrier.k() {
                return Err(AlgebraError::Shape(format!(
                    "ν_{n} needs one component per pair"
                )));
            }
            for ((x, y), m) in carrier.pairs().zip(row) {
                let src = operad.dim(n) * ChainSpace::power(&carrier, n, x, y).dim;
                if m.ncols() != src || m.rows() != carrier.dim(x, y) {
                    return Err(AlgebraError::Shape(format!(
                        "ν_{n} at {} has the wrong shape",
                        carrier.pair_key(x, y)
                    )));
                }
            }
        }
        Ok(Algebra {
            operad,
            carrier,
            nu,
        })
    }

    /// Builds `ν` from a closure; shapes are forced onto the components.
    pub fn from_fn(
        operad: Operad,
        carrier: SGraph,
        mut f: impl FnMut(usize, usize, usize) -> LinMap,
    ) -> Self {
        let nu = (0..=operad.max_arity)
            .map(|n| {
                carrier
                    .pairs()
                    .map(|(x, y)| {
                        let src =
                            Space::new(operad.dim(n) * ChainSpace::power(&carrier, n, x, y).dim);
                        f(n, x, y).with_spaces(src, carrier.hom(x, y).clone())
                    })
                    .collect()
            })
            .collect();
        Algebra {
            operad,
            carrier,
            nu,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.operad.max_arity
    }

    pub fn nu(&self, n: usize, x: usize, y: usize) -> &LinMap {
        &self.nu[n][x * self.carrier.k() + y]
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    operad: Operad,
    carrier: SGraph,
    #[serde(default)]
    nu: BTreeMap<String, BTreeMap<String, LinMap>>,
}

impl Serialize for Algebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut nu = BTreeMap::new();
        for n in 0..=self.max_arity() {
            let comps: BTreeMap<String, LinMap> = self
                .carrier
                .pairs()
                .filter(|&(x, y)| !self.nu(n, x, y).is_zero())
                .map(|(x, y)| (self.carrier.pair_key(x, y), self.nu(n, x, y).clone()))
                .collect();
            if !comps.is_empty() {
                nu.insert(n.to_string(), comps);
            }
        }
        AlgebraRepr {
            operad: self.operad.clone(),
            carrier: self.carrier.clone(),
            nu,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Algebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = AlgebraRepr::deserialize(d)?;
        let mut given: BTreeMap<(usize, usize, usize), LinMap> = BTreeMap::new();
        for (n, comps) in r.nu {
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("arity key {n:?}")))?;
            for (k, m) in comps {
                let (a, b) = k
                    .split_once(',')
                    .ok_or_else(|| D::Error::custom(format!("pair key {k:?}")))?;
                let x = r.carrier.index_of(a.trim()).map_err(D::Error::custom)?;
                let y = r.carrier.index_of(b.trim()).map_err(D::Error::custom)?;
                given.insert((n, x, y), m);
            }
        }
        let mut nu = Vec::new();
        for n in 0..=r.operad.max_arity {
            nu.push(
                r.carrier
                    .pairs()
                    .map(|(x, y)| {
                        given.remove(&(n, x, y)).unwrap_or_else(|| {
                            let src = r.operad.dim(n) * ChainSpace::power(&r.carrier, n, x, y).dim;
                            LinMap::zero(Space::new(src), r.carrier.hom(x, y).clone())
                        })
                    })
                    .collect::<Vec<_>>(),
            );
        }
        if let Some(&(n, _, _)) = given.keys().next() {
            return Err(D::Error::custom(format!(
                "ν_{n} is beyond the operad's arity bound"
            )));
        }
        Algebra::new(r.operad, r.carrier, nu).map_err(D::Error::custom)
    }
}

/// Per-pair layout of `Π_{(x,y)} Hom(Y^{⊗n}(x,y), Y(x,y))`.
struct EndLayout {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    powers: Vec<ChainSpace>,
    dim: usize,
}

impl EndLayout {
    fn new(y: &SGraph, n: usize) -> Self {
        let mut offsets = Vec::new();
        let mut cols = Vec::new();
        let mut powers = Vec::new();
        let mut off = 0;
        for (a, b) in y.pairs() {
            let p = ChainSpace::power(y, n, a, b);
            offsets.push(off);
            cols.push(p.dim);
            off += y.dim(a, b) * p.dim;
            powers.push(p);
        }
        EndLayout {
            offsets,
            cols,
            powers,
            dim: off,
        }
    }
}

/// `End(Y)(n) = Hom_C(Y^{⊗n}, Y)` with `∘_i` inserting the second operation at input `i`.
pub fn end_operad(y: &SGraph, max_arity: usize) -> Operad {
    let max = max_arity.max(1);
    let k = y.k();
    let layouts: Vec<EndLayout> = (0..=max).map(|n| EndLayout::new(y, n)).collect();
    let seq: Vec<Space> = layouts.iter().map(|l| Space::new(l.dim)).collect();
    let l1 = &layouts[1];
    let mut unit_col = Vec::new();
    for (p, (a, b)) in y.pairs().enumerate() {
        for r in 0..y.dim(a, b) {
            unit_col.push((l1.offsets[p] + r * l1.cols[p] + r, Scalar::one()));
        }
    }
    let unit = LinMap::from_columns(Space::unit(), seq[1].clone(), vec![unit_col]);
    let mut circ = BTreeMap::new();
    for m in 1..=max {
        for n in 0..=max {
            for i in 1..=m {
                if !admissible(max, m, i, n) {
                    continue;
                }
                let (lm, ln, lt) = (&layouts[m], &layouts[n], &layouts[m + n - 1]);
                let mut cols: Vec<SparseVec> = vec![Vec::new(); lm.dim * ln.dim];
                for (p, (x, yy)) in y.pairs().enumerate() {
                    for sb in &lm.powers[p].blocks {
                        let c = &sb.chain;
                        let (a, b) = factor_edge(c, i - 1);
                        let q = a * k + b;
                        for s_local in 0..sb.dim {
                            let idx = digits(s_local, &sb.factor_dims);
                            let r2 = idx[i - 1];
                            for db in &ln.powers[q].blocks {
                                let mut long: Vec<usize> = c[..=m - i].to_vec();
                                long.extend(&db.chain[1..]);
                                long.extend(&c[m - i + 2..]);
                                let lb = lt.powers[p]
                                    .block(&long)
                                    .expect("long chain has nonzero factors");
                                for t_local in 0..db.dim {
                                    let jdx = digits(t_local, &db.factor_dims);
                                    let mut lidx = idx[..i - 1].to_vec();
                                    lidx.extend(&jdx);
                                    lidx.extend(&idx[i..]);
                                    let l_flat = lb.offset + undigits(&lidx, &lb.factor_dims);
                                    let b_idx =
                                        ln.offsets[q] + r2 * ln.cols[q] + db.offset + t_local;
                                    for r in 0..y.dim(x, yy) {
                                        let a_idx =
                                            lm.offsets[p] + r * lm.cols[p] + sb.offset + s_local;
                                        cols[a_idx * ln.dim + b_idx] = vec![(
                                            lt.offsets[p] + r * lt.cols[p] + l_flat,
                                            Scalar::one(),
                                        )];
                                    }
                                }
                            }
                        }
                    }
                }
                circ.insert(
                    (m, i, n),
                    LinMap::from_columns(Space::new(lm.dim * ln.dim), seq[m + n - 1].clone(), cols),
                );
            }
        }
    }
    Operad::new(seq, unit, circ, max).expect("well-formed")
}

/// `O(n) ⊗ Y^{⊗(m+n-1)}(x, y) -> Y^{⊗m}(x, y)`: moves the operation to input
/// `i` and applies `ν_n` to the `n` factors starting there.
pub(crate) fn insert_nu(a: &Algebra, m: usize, i: usize, n: usize, x: usize, y: usize) -> LinMap {
    let yg = &a.carrier;
    let on = a.operad.dim(n);
    let big = m + n - 1;
    let long = ChainSpace::power(yg, big, x, y);
    let short = ChainSpace::power(yg, m, x, y);
    let mut cols: Vec<SparseVec> = vec![Vec::new(); on * long.dim];
    for lb in &long.blocks {
        let c = &lb.chain;
        let (s, e) = (c[m - i], c[m - i + n]);
        let mut sc: Vec<usize> = c[..=m - i].to_vec();
        sc.extend(&c[m - i + n..]);
        let Some(sb) = short.block(&sc) else { continue };
        let seg_space = ChainSpace::power(yg, n, s, e);
        let seg = seg_space
            .block(&c[m - i..=m - i + n])
            .expect("segment factors are nonzero");
        let keep: Vec<usize> = (0..on)
            .flat_map(|o| (0..seg.dim).map(move |k| o * seg_space.dim + seg.offset + k))
            .collect();
        let nu_seg = a.nu(n, s, e).select_cols(&keep);
        let mut dims = vec![on];
        dims.extend(&lb.factor_dims);
        let mut order: Vec<usize> = (1..i).collect();
        order.push(0);
        order.extend(i..=big);
        let perm = permute_factors(&dims, &order);
        let pdims: Vec<usize> = order.iter().map(|&j| dims[j]).collect();
        let local = act_on_factors(&pdims, i - 1, n + 1, &nu_seg).after(&perm);
        // Source columns: o ⊗ (long block entry).
        for o in 0..on {
            for t in 0..lb.dim {
                cols[o * long.dim + lb.offset + t] = local
                    .column(o * lb.dim + t)
                    .iter()
                    .map(|(r, v)| (sb.offset + r, v.clone()))
                    .collect();
            }
        }
    }
    LinMap::from_columns(Space::new(on * long.dim), Space::new(short.dim), cols)
}

/// Checks `ν_1 ∘ (u ⊗ id) = id` and `ν_{m+n-1} ∘ (∘_i ⊗ id) = ν_m ∘ (id ⊗ ν_n at input i)`.
pub fn check_algebra(a: &Algebra, max_arity: usize) -> Report {
    let max = max_arity.min(a.max_arity());
    let yg = &a.carrier;
    let o = &a.operad;
    let mut rep = Report::new();
    for (x, y) in yg.pairs() {
        let id = LinMap::identity(yg.hom(x, y).clone());
        let lhs = a.nu(1, x, y).after(&o.unit.tensor(&id));
        rep.record(
            lhs == id,
            "unit diagram",
            || yg.pair_key(x, y),
            || first_difference(&lhs, &id),
        );
    }
    for m in 1..=max {
        for n in 0..=max {
            for i in 1..=m {
                if !admissible(max, m, i, n) {
                    continue;
                }
                let circ = o.circ(m, i, n).expect("admissible");
                for (x, y) in yg.pairs() {
                    let pw = ChainSpace::power(yg, m + n - 1, x, y).dim;
                    let lhs = a
                        .nu(m + n - 1, x, y)
                        .after(&circ.tensor(&LinMap::identity(Space::new(pw))));
                    let ins = insert_nu(a, m, i, n, x, y);
                    let rhs = a
                        .nu(m, x, y)
                        .after(&LinMap::identity(o.seq[m].clone()).tensor(&ins));
                    rep.record(
                        lhs == rhs,
                        "composition diagram",
                        || format!("(m,i,n)=({m},{i},{n}) at {}", yg.pair_key(x, y)),
                        || first_difference(&lhs, &rhs),
                    );
                }
            }
        }
    }
    rep
}

/// `h ∘ ν^A_n = ν^B_n ∘ (id ⊗ h^{⊗n})` for `n <= max_arity`.
pub fn check_algebra_map(h: &SGraphMap, a: &Algebra, b: &Algebra, max_arity: usize) -> Report {
    let max = max_arity.min(a.max_arity()).min(b.max_arity());
    let mut rep = Report::new();
    for n in 0..=max {
        for (x, y) in a.carrier.pairs() {
            let lhs = h.at(x, y).after(a.nu(n, x, y));
            let rhs = b
                .nu(n, x, y)
                .after(&LinMap::identity(a.operad.seq[n].clone()).tensor(&power_map(h, n, x, y)));
            rep.record(
                lhs == rhs,
                "algebra map",
                || format!("n={n} at {}", a.carrier.pair_key(x, y)),
                || first_difference(&lhs, &rhs),
            );
        }
    }
    rep
}

/// The operad map `O -> End(Y)` adjoint to `ν`.
pub fn opmap_from_algebra(a: &Algebra) -> OperadMap {
    let e = end_operad(&a.carrier, a.max_arity());
    let yg = &a.carrier;
    let components = (0..=a.max_arity())
        .map(|n| {
            let lay = EndLayout::new(yg, n);
            let mut cols: Vec<SparseVec> = vec![Vec::new(); a.operad.dim(n)];
            for (p, (x, y)) in yg.pairs().enumerate() {
                let nu = a.nu(n, x, y);
                for (o, col) in cols.iter_mut().enumerate() {
                    for c in 0..lay.cols[p] {
                        for (r, v) in nu.column(o * lay.cols[p] + c) {
                            col.push((lay.offsets[p] + r * lay.cols[p] + c, v.clone()));
                        }
                    }
                }
            }
            LinMap::from_columns(a.operad.seq[n].clone(), e.seq[n].clone(), cols)
        })
        .collect();
    OperadMap::new(a.operad.clone(), e, components).expect("shapes match End(Y)")
}

/// The algebra whose structure maps are `ev ∘ (f ⊗ id)`.
pub fn algebra_from_opmap(f: &OperadMap, y: &SGraph) -> Result<Algebra, AlgebraError> {
    let max = f.max_arity();
    for n in 0..=max {
        if f.target.dim(n) != EndLayout::new(y, n).dim {
            return Err(AlgebraError::Shape(format!(
                "target is not End(Y) in arity {n}"
            )));
        }
    }
    let layouts: Vec<EndLayout> = (0..=max).map(|n| EndLayout::new(y, n)).collect();
    Ok(Algebra::from_fn(f.source.clone(), y.clone(), |n, x, yy| {
        let lay = &layouts[n];
        let p = x * y.k() + yy;
        let cw = lay.cols[p];
        let od = f.source.dim(n);
        let mut cols: Vec<SparseVec> = vec![Vec::new(); od * cw];
        for o in 0..od {
            for (row, v) in f.components[n].column(o) {
                if *row < lay.offsets[p] || *row >= lay.offsets[p] + y.dim(x, yy) * cw {
                    continue;
                }
                let local = row - lay.offsets[p];
                cols[o * cw + local % cw].push((local / cw, v.clone()));
            }
        }
        LinMap::from_columns(Space::new(od * cw), y.hom(x, yy).clone(), cols)
    }))
}

/// `φ^*(B)`: `ν^B_n ∘ (φ_n ⊗ id)`.
pub fn restrict(phi: &OperadMap, b: &Algebra) -> Result<Algebra, AlgebraError> {
    if phi.target.seq[..=phi.max_arity().min(b.max_arity())]
        != b.operad.seq[..=phi.max_arity().min(b.max_arity())]
    {
        return Err(AlgebraError::Shape(
            "φ does not land in the algebra's operad".into(),
        ));
    }
    let max = phi.max_arity().min(b.max_arity());
    let o = phi.source.truncate(max);
    Ok(Algebra::from_fn(o, b.carrier.clone(), |n, x, y| {
        let pw = ChainSpace::power(&b.carrier, n, x, y).dim;
        b.nu(n, x, y)
            .after(&phi.components[n].tensor(&LinMap::identity(Space::new(pw))))
    }))
}

/// `check_operad_map` on the adjoint `O -> End(Y)`; a second route to [`check_algebra`].
pub fn check_algebra_via_end(a: &Algebra, max_arity: usize) -> Report {
    check_operad_map(&opmap_from_algebra(a), max_arity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_operad, unit_operad};

    #[test]
    fn end_dimensions() {
        let y = SGraph::from_dims(&["x"], &[("x", "x", 2)]).unwrap();
        let e = end_operad(&y, 3);
        assert_eq!(
            (0..=3).map(|n| e.dim(n)).collect::<Vec<_>>(),
            vec![2, 4, 8, 16]
        );
        let u = SGraph::from_dims(&["x"], &[("x", "x", 1)]).unwrap();
        assert!((0..=3).all(|n| end_operad(&u, 3).dim(n) == 1));
    }

    #[test]
    fn end_operads_satisfy_the_axioms() {
        let y = SGraph::from_dims(
            &["x", "y"],
            &[("x", "x", 1), ("x", "y", 2), ("y", "x", 1), ("y", "y", 2)],
        )
        .unwrap();
        assert!(check_operad(&end_operad(&y, 3), 3).passed());
    }

    #[test]
    fn poset_is_an_ass_algebra() {
        let a = crate::algebra::poset_algebra();
        assert!(check_algebra(&a, 3).passed());
        assert!(check_algebra_via_end(&a, 3).passed());
        let back = algebra_from_opmap(&opmap_from_algebra(&a), &a.carrier).unwrap();
        assert_eq!(back, a);
        let js = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<Algebra>(&js).unwrap(), a);
    }

    #[test]
    fn broken_poset_fails_both_routes() {
        let a = crate::algebra::poset_algebra();
        let bad = Algebra::from_fn(a.operad.clone(), a.carrier.clone(), |n, x, y| {
            if n == 2 && x == 0 && y == 1 {
                a.nu(n, x, y).scale(&Scalar::from_int(2))
            } else {
                a.nu(n, x, y).clone()
            }
        });
        assert!(!check_algebra(&bad, 3).passed());
        assert!(!check_algebra_via_end(&bad, 3).passed());
    }

    #[test]
    fn tautological_end_algebra() {
        let y = SGraph::from_dims(&["x", "y"], &[("x", "y", 2), ("y", "y", 1)]).unwrap();
        let e = end_operad(&y, 3);
        let a = algebra_from_opmap(&OperadMap::identity(&e), &y).unwrap();
        assert!(check_algebra(&a, 3).passed());
    }

    #[test]
    fn unit_operad_forces_identity_action() {
        let y = SGraph::from_dims(&["x"], &[("x", "x", 2)]).unwrap();
        let o = unit_operad(2);
        let good = Algebra::from_fn(o.clone(), y.clone(), |n, _, _| {
            if n == 1 {
                LinMap::identity(Space::new(2))
            } else {
                LinMap::zero(Space::zero(), Space::new(2))
            }
        });
        assert!(check_algebra(&good, 2).passed());
        let bad = Algebra::from_fn(o, y, |n, _, _| {
            if n == 1 {
                LinMap::identity(Space::new(2)).scale(&Scalar::from_int(3))
            } else {
                LinMap::zero(Space::zero(), Space::new(2))
            }
        });
        assert!(!check_algebra(&bad, 2).passed());
    }

    #[test]
    fn restriction_stays_valid() {
        let a = crate::algebra::poset_algebra();
        let phi = OperadMap::identity(&a.operad);
        assert_eq!(restrict(&phi, &a).unwrap(), a);
    }
}
