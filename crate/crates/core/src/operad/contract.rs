//! The operadic functor on trees: `L(O)(T) = ⊗_{v ∈ I(T)} O(val v)` in path
//! order, and its action on edge contractions.

use std::collections::BTreeSet;

use super::{Operad, OperadError};
use crate::exactcat::{act_on_factors, permute_factors, tensor_dim, LinMap, Space};
use crate::trees::{EdgeRef, Tree, TreeError};

/// `L(O)(T)`; the unit tree gives the unit object.
pub fn eval_tree(o: &Operad, t: &Tree) -> Result<Space, OperadError> {
    let mut d = 1;
    for v in t.inner_vertices() {
        if v.arity > o.max_arity {
            return Err(OperadError::ArityOverflow(v.arity, o.max_arity));
        }
        d *= o.dim(v.arity);
    }
    Ok(Space::new(d))
}

/// `L(O)(p_e) : L(O)(T) -> L(O)(T/e)`.
pub fn eval_contraction(o: &Operad, t: &Tree, e: &EdgeRef) -> Result<LinMap, OperadError> {
    let dims = operad_dims(o, t)?;
    contraction_map(o, t, &dims, std::slice::from_ref(e)).map(|(m, _)| m)
}

fn operad_dims(o: &Operad, t: &Tree) -> Result<Vec<usize>, OperadError> {
    t.inner_vertices()
        .iter()
        .map(|v| {
            if v.arity > o.max_arity {
                Err(OperadError::ArityOverflow(v.arity, o.max_arity))
            } else {
                Ok(o.dim(v.arity))
            }
        })
        .collect()
}

/// Contracts the single inner edge whose upper vertex has path-order index
/// `w` in a tensor of per-vertex factors of dimensions `dims`. The two
/// endpoints must carry `O`-factors; every other factor is carried along.
///
/// The upper factor is moved next to the lower one and `∘_k` applied, `k`
/// being the slot of the edge among the lower vertex's inputs. The result is
/// in the path order of `T/e`, which is that of `T` with `w` removed.
pub fn single_contraction(
    o: &Operad,
    t: &Tree,
    dims: &[usize],
    w: usize,
) -> Result<(LinMap, Tree, Vec<usize>), OperadError> {
    let verts = t.inner_vertices();
    let upper = verts
        .get(w)
        .ok_or_else(|| TreeError::NoSuchVertex(format!("#{w}")))?;
    let e = EdgeRef {
        upper: upper.addr.clone(),
    };
    let parent = upper
        .addr
        .parent()
        .ok_or_else(|| TreeError::NotInnerEdge(upper.addr.to_string()))?;
    let v = verts
        .iter()
        .position(|x| x.addr == parent)
        .expect("parent is inner");
    let (a, b) = (verts[v].arity, upper.arity);
    let k = *upper.addr.0.last().expect("non-top vertex");
    if a + b - 1 > o.max_arity || a > o.max_arity || b > o.max_arity {
        return Err(OperadError::ArityOverflow(
            a.max(b).max(a + b - 1),
            o.max_arity,
        ));
    }
    if dims[v] != o.dim(a) || dims[w] != o.dim(b) {
        return Err(OperadError::Shape(format!(
            "contracted factors at #{v}, #{w} are not O-decorated"
        )));
    }
    let mut order: Vec<usize> = (0..=v).collect();
    order.push(w);
    order.extend((v + 1..dims.len()).filter(|&x| x != w));
    let perm_dims: Vec<usize> = order.iter().map(|&x| dims[x]).collect();
    let mut map = act_on_factors(&perm_dims, v, 2, o.circ(a, k, b)?);
    if w != v + 1 {
        map = map.after(&permute_factors(dims, &order));
    }
    let (tree, index) = t.contract_set_tracked(std::slice::from_ref(&e))?;
    Ok((map, tree, index))
}

/// `L(O)(p_K)` on a mixed-decoration tensor: contracts every edge in `k`,
/// returning the map and `T/K`. Contractions run bottom-up; siblings are
/// absorbed in increasing order of their merged arity so every intermediate
/// arity stays below the final one or the original one.
pub fn contraction_map(
    o: &Operad,
    t: &Tree,
    dims: &[usize],
    k: &[EdgeRef],
) -> Result<(LinMap, Tree), OperadError> {
    let verts = t.inner_vertices();
    if dims.len() != verts.len() {
        return Err(OperadError::Shape(format!(
            "{} factors for {} inner vertices",
            dims.len(),
            verts.len()
        )));
    }
    let mut uppers = BTreeSet::new();
    for e in k {
        let idx = verts
            .iter()
            .position(|v| v.addr == e.upper)
            .filter(|_| !e.upper.0.is_empty())
            .ok_or_else(|| TreeError::NotInnerEdge(e.upper.to_string()))?;
        uppers.insert(idx);
    }
    let parent: Vec<Option<usize>> = verts
        .iter()
        .map(|v| {
            v.addr.parent().map(|p| {
                verts
                    .iter()
                    .position(|x| x.addr == p)
                    .expect("inner parent")
            })
        })
        .collect();
    let mut children = vec![Vec::new(); verts.len()];
    for (c, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(c);
        }
    }
    // Merged arity of each vertex once its contracted children are absorbed.
    let mut merged = vec![0usize; verts.len()];
    for v in (0..verts.len()).rev() {
        merged[v] = verts[v].arity
            + children[v]
                .iter()
                .filter(|c| uppers.contains(c))
                .map(|&c| merged[c])
                .sum::<usize>()
            - children[v].iter().filter(|c| uppers.contains(c)).count();
    }
    let mut schedule = Vec::new();
    fn visit(
        v: usize,
        children: &[Vec<usize>],
        uppers: &BTreeSet<usize>,
        merged: &[usize],
        out: &mut Vec<usize>,
    ) {
        for &c in &children[v] {
            visit(c, children, uppers, merged, out);
        }
        let mut cs: Vec<usize> = children[v]
            .iter()
            .copied()
            .filter(|c| uppers.contains(c))
            .collect();
        cs.sort_by_key(|&c| (merged[c].min(2), std::cmp::Reverse(c)));
        out.extend(cs);
    }
    if !verts.is_empty() {
        visit(0, &children, &uppers, &merged, &mut schedule);
    }
    let mut cur_tree = t.clone();
    let mut cur_dims = dims.to_vec();
    let mut cur_index: Vec<usize> = (0..verts.len()).collect();
    let mut map = LinMap::identity(Space::new(tensor_dim(dims)));
    for w in schedule {
        let cw = cur_index[w];
        let (m, next, index) = single_contraction(o, &cur_tree, &cur_dims, cw)?;
        map = m.after(&map);
        let pv = index[cw];
        let mut nd = vec![0; next.n_inner()];
        for (old, &new) in index.iter().enumerate() {
            if old != cw {
                nd[new] = cur_dims[old];
            }
        }
        nd[pv] = o.dim(next.inner_vertices()[pv].arity);
        for x in cur_index.iter_mut() {
            *x = index[*x];
        }
        cur_dims = nd;
        cur_tree = next;
    }
    Ok((map, cur_tree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcat::Scalar;
    use crate::operad::{mu_from_circ, scaled_ass};

    fn lam(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn tree_space_is_the_tensor_of_vertex_spaces() {
        let o = crate::operad::matrix_operad(2, 3);
        let t: Tree = "(*((***)()*))".parse().unwrap();
        let d = eval_tree(&o, &t).unwrap();
        assert_eq!(d.dim, o.dim(2) * o.dim(3) * o.dim(3) * o.dim(0));
        assert_eq!(eval_tree(&o, &Tree::Leaf).unwrap().dim, 1);
    }

    #[test]
    fn full_collapse_matches_mu() {
        let o = scaled_ass(&lam(&[3, 2, 5, 7, 11]));
        let t: Tree = "((**)*(*))".parse().unwrap();
        let dims = vec![1; 3];
        let (m, c) = contraction_map(&o, &t, &dims, &t.inner_edges()).unwrap();
        assert_eq!(c, Tree::corolla(4));
        // The middle input is a bare leaf, filled by the unit.
        let id = |n: usize| LinMap::identity(o.seq[n].clone());
        let ins = LinMap::tensor_all(&[id(3), id(2), o.unit.clone(), id(1)]);
        assert_eq!(m, mu_from_circ(&o, &[2, 1, 1]).unwrap().after(&ins));
    }
}
