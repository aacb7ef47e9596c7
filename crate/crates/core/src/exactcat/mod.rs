//! The ambient symmetric monoidal categories: exact rational vector spaces and
//! finite sets, with finite colimits and the push-out product calculus.

mod finset;
mod linmap;
mod pp;
mod scalar;

pub use finset::{finset_pushout, FinSetMap, FinSetObj, FinSetPushout};
pub use linmap::{solve_left, solve_right, LinMap, Quotient, Rref, Space, SparseVec};
pub use pp::{
    induced_from_cube, induced_from_cube_with, odot_pushout_comparison, pp_source, pushout_product,
    PPSource, PushoutSquare,
};
pub use scalar::{signum, Scalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("domain mismatch: expected dimension {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("incompatible legs: square ({0}, {1}) does not commute")]
    IncompatibleLegs(usize, usize),
    #[error("cocone does not commute")]
    IncompatibleCocone,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid value: {0}")]
    Invalid(String),
}

pub fn tensor_obj(a: &Space, b: &Space) -> Space {
    Space::new(a.dim * b.dim)
}

pub fn tensor_map(f: &LinMap, g: &LinMap) -> LinMap {
    f.tensor(g)
}

/// Tensor product of a list of dimensions; the empty product is 1.
pub fn tensor_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// The symmetry `A ⊗ B -> B ⊗ A`, sending basis `(i, j)` to `(j, i)`.
pub fn symmetry(a: &Space, b: &Space) -> LinMap {
    permute_factors(&[a.dim, b.dim], &[1, 0])
}

/// Reorders tensor factors: the source is `⊗_k dims[k]` and target factor `k`
/// is source factor `order[k]`.
pub fn permute_factors(dims: &[usize], order: &[usize]) -> LinMap {
    let n = dims.len();
    assert_eq!(order.len(), n, "order must be a permutation of the factors");
    let total = tensor_dim(dims);
    let tdims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    // Strides of each source factor inside the target multi-index.
    let mut tstride = vec![0usize; n];
    let mut s = 1;
    for k in (0..n).rev() {
        tstride[order[k]] = s;
        s *= tdims[k];
    }
    let mut perm = vec![0usize; total];
    let mut idx = vec![0usize; n];
    for (src, slot) in perm.iter_mut().enumerate() {
        let mut rem = src;
        for k in (0..n).rev() {
            idx[k] = rem % dims[k].max(1);
            rem /= dims[k].max(1);
        }
        *slot = (0..n).map(|k| idx[k] * tstride[k]).sum();
    }
    LinMap::permutation(&perm)
}

/// `id ⊗ ... ⊗ f ⊗ ... ⊗ id` with `f` acting on the consecutive factors
/// `pos..pos+span` of `⊗ dims`.
pub fn act_on_factors(dims: &[usize], pos: usize, span: usize, f: &LinMap) -> LinMap {
    let before = tensor_dim(&dims[..pos]);
    let after = tensor_dim(&dims[pos + span..]);
    assert_eq!(
        f.ncols(),
        tensor_dim(&dims[pos..pos + span]),
        "factor dimension mismatch"
    );
    LinMap::identity(Space::new(before))
        .tensor(f)
        .tensor(&LinMap::identity(Space::new(after)))
}

/// Direct sum with its block injections; the empty sum is the initial object.
pub fn coproduct(objs: &[Space]) -> (Space, Vec<LinMap>) {
    let total: usize = objs.iter().map(|o| o.dim).sum();
    let mut off = 0;
    let mut inj = Vec::with_capacity(objs.len());
    for o in objs {
        inj.push(LinMap::inclusion(total, off, o.dim));
        off += o.dim;
    }
    (Space::new(total), inj)
}

pub fn initial() -> Space {
    Space::zero()
}

/// A push-out square `inj_left ∘ f = inj_right ∘ g` with canonical apex coordinates.
#[derive(Clone, Debug)]
pub struct PushoutData {
    pub apex: Space,
    pub inj_left: LinMap,
    pub inj_right: LinMap,
    quotient: Quotient,
}

impl PushoutData {
    /// The unique map out of the apex restricting to `h_left`, `h_right`.
    pub fn mediate(&self, h_left: &LinMap, h_right: &LinMap) -> Result<LinMap, CatError> {
        let target = h_left.target().clone();
        let h = LinMap::hstack(target, &[h_left.clone(), h_right.clone()]);
        let m = h.after(&self.quotient.section);
        if m.after(&self.quotient.pi) != h {
            return Err(CatError::IncompatibleCocone);
        }
        Ok(m)
    }

    /// The canonical surjection `A ⊕ B -> apex`.
    pub fn projection(&self) -> &LinMap {
        &self.quotient.pi
    }

    pub fn section(&self) -> &LinMap {
        &self.quotient.section
    }
}

/// Push-out of `f: X -> A` and `g: X -> B`: `(A ⊕ B) / {(f x, -g x)}`.
pub fn pushout(f: &LinMap, g: &LinMap) -> Result<PushoutData, CatError> {
    if f.ncols() != g.ncols() {
        return Err(CatError::DomainMismatch {
            expected: f.ncols(),
            found: g.ncols(),
        });
    }
    let a = f.rows();
    let rels = f.columns().iter().zip(g.columns()).map(|(fc, gc)| {
        let mut v: SparseVec = fc.clone();
        v.extend(gc.iter().map(|(i, x)| (a + i, -x)));
        v
    });
    let quotient = Quotient::new(Rref::from_vectors(a + g.rows(), rels));
    let apex = Space::new(quotient.dim());
    let inj_left = quotient.pi.after(&LinMap::inclusion(a + g.rows(), 0, a));
    let inj_right = quotient
        .pi
        .after(&LinMap::inclusion(a + g.rows(), a, g.rows()));
    Ok(PushoutData {
        apex,
        inj_left,
        inj_right,
        quotient,
    })
}

/// Checks that `(inj_left, inj_right)` is a push-out of `(f, g)`: the square
/// commutes, the injections are jointly surjective, and the apex has the
/// dimension of the cokernel of `(f, -g)`.
pub fn verify_pushout(f: &LinMap, g: &LinMap, po: &PushoutData) -> bool {
    if po.inj_left.after(f) != po.inj_right.after(g) {
        return false;
    }
    let joint = LinMap::hstack(
        po.apex.clone(),
        &[po.inj_left.clone(), po.inj_right.clone()],
    );
    if !joint.is_surjective() {
        return false;
    }
    let rel = LinMap::vstack(
        f.source().clone(),
        &[f.clone(), g.scale(&Scalar::from_int(-1))],
    );
    po.apex.dim + rel.rank() == f.rows() + g.rows()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_matches_index_formula() {
        let s = symmetry(&Space::new(2), &Space::new(3));
        for i in 0..2 {
            for j in 0..3 {
                let src = i * 3 + j;
                let dst = j * 2 + i;
                assert_eq!(s.entry(dst, src), Scalar::one());
            }
        }
        assert_eq!(
            symmetry(&Space::new(3), &Space::new(2)).after(&s),
            LinMap::identity(Space::new(6))
        );
        assert_eq!(
            symmetry(&Space::unit(), &Space::new(4)),
            LinMap::identity(Space::new(4))
        );
    }

    #[test]
    fn permute_factors_is_functorial() {
        let dims = [2, 3, 2];
        let p = permute_factors(&dims, &[2, 0, 1]);
        let back = permute_factors(&[2, 2, 3], &[1, 2, 0]);
        assert_eq!(back.after(&p), LinMap::identity(Space::new(12)));
    }

    #[test]
    fn pushout_along_identity() {
        let g = LinMap::from_int_rows(2, 3, &[&[1, 0], &[0, 1], &[1, 1]]);
        let id = LinMap::identity(Space::new(2));
        let po = pushout(&id, &g).unwrap();
        assert_eq!(po.apex.dim, 3);
        assert!(po.inj_right.is_iso());
        assert!(verify_pushout(&id, &g, &po));
    }

    #[test]
    fn pushout_of_initial_is_coproduct() {
        let f = LinMap::zero(Space::zero(), Space::new(2));
        let g = LinMap::zero(Space::zero(), Space::new(3));
        let po = pushout(&f, &g).unwrap();
        assert_eq!(po.apex.dim, 5);
        assert_eq!(coproduct(&[]).0.dim, 0);
    }
}
