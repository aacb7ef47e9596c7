//! Non-symmetric operads in the partial-composition presentation.
//!
//! `O(n)` is stored for `0 <= n <= max_arity`; `∘_i : O(m) ⊗ O(n) -> O(m+n-1)`
//! is stored for every admissible triple whose arities stay within the bound.
//! All tensor products are flattened and left-factor-major.

mod contract;
mod finset;
mod free;

pub use contract::{contraction_map, eval_contraction, eval_tree, single_contraction};
pub use finset::{ass_operad_finset, FinSetOperad};
pub use free::{
    free_counit, free_map, free_operad, free_unit, induced_from_free, FreeOperad, TreeBlock,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactcat::{act_on_factors, permute_factors, CatError, LinMap, Scalar, Space};
use crate::report::{first_difference, Report};
use crate::trees::TreeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("arity {0} exceeds the declared bound {1}")]
    ArityOverflow(usize, usize),
    #[error("an inner-vertex bound is required when generators have arity 0 or 1")]
    TruncationRequired,
    #[error("malformed operad data: {0}")]
    Shape(String),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// An arity-indexed family of spaces; absent arities are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Space>", into = "BTreeMap<String, Space>")]
pub struct Sequence {
    pub spaces: BTreeMap<usize, Space>,
}

impl TryFrom<BTreeMap<String, Space>> for Sequence {
    type Error = String;

    fn try_from(m: BTreeMap<String, Space>) -> Result<Self, String> {
        let mut spaces = BTreeMap::new();
        for (k, v) in m {
            let n: usize = k
                .trim()
                .parse()
                .map_err(|_| format!("arity key {k:?} is not a natural number"))?;
            v.validate().map_err(|e| e.to_string())?;
            spaces.insert(n, v);
        }
        Ok(Sequence { spaces })
    }
}

impl From<Sequence> for BTreeMap<String, Space> {
    fn from(s: Sequence) -> Self {
        s.spaces
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }
}

impl Sequence {
    pub fn new() -> Self {
        Sequence::default()
    }

    /// `pairs` lists `(arity, dim)`.
    pub fn from_dims(pairs: &[(usize, usize)]) -> Self {
        Sequence {
            spaces: pairs.iter().map(|&(n, d)| (n, Space::new(d))).collect(),
        }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.spaces.get(&n).map(|s| s.dim).unwrap_or(0)
    }

    pub fn space(&self, n: usize) -> Space {
        self.spaces.get(&n).cloned().unwrap_or_else(Space::zero)
    }

    /// Arities carrying a nonzero space.
    pub fn support(&self) -> BTreeSet<usize> {
        self.spaces
            .iter()
            .filter(|(_, s)| s.dim > 0)
            .map(|(&n, _)| n)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }
}

/// A morphism of sequences; absent components are zero maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqMap {
    pub source: Sequence,
    pub target: Sequence,
    pub components: BTreeMap<usize, LinMap>,
}

impl SeqMap {
    pub fn new(
        source: Sequence,
        target: Sequence,
        components: BTreeMap<usize, LinMap>,
    ) -> Result<Self, OperadError> {
        for (&n, f) in &components {
            if f.ncols() != source.dim(n) || f.rows() != target.dim(n) {
                return Err(OperadError::Shape(format!(
                    "component {n} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.ncols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
        }
        Ok(SeqMap {
            source,
            target,
            components,
        })
    }

    pub fn zero(source: Sequence, target: Sequence) -> Self {
        SeqMap {
            source,
            target,
            components: BTreeMap::new(),
        }
    }

    pub fn identity(s: &Sequence) -> Self {
        let components = s
            .spaces
            .iter()
            .map(|(&n, sp)| (n, LinMap::identity(sp.clone())))
            .collect();
        SeqMap {
            source: s.clone(),
            target: s.clone(),
            components,
        }
    }

    pub fn at(&self, n: usize) -> LinMap {
        self.components
            .get(&n)
            .cloned()
            .unwrap_or_else(|| LinMap::zero(self.source.space(n), self.target.space(n)))
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &SeqMap) -> SeqMap {
        let arities: BTreeSet<usize> = f.source.spaces.keys().copied().collect();
        let components = arities
            .into_iter()
            .map(|n| (n, self.at(n).after(&f.at(n))))
            .collect();
        SeqMap {
            source: f.source.clone(),
            target: self.target.clone(),
            components,
        }
    }

    pub fn is_iso(&self) -> bool {
        let arities: BTreeSet<usize> = self
            .source
            .support()
            .union(&self.target.support())
            .copied()
            .collect();
        arities.into_iter().all(|n| self.at(n).is_iso())
    }
}

/// `(m, i, n)` keys of `∘_i : O(m) ⊗ O(n) -> O(m+n-1)`.
pub type CircKey = (usize, usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operad {
    /// `seq[n] = O(n)` for `n <= max_arity`.
    pub seq: Vec<Space>,
    /// `u : 1 -> O(1)`.
    pub unit: LinMap,
    circ: BTreeMap<CircKey, LinMap>,
    pub max_arity: usize,
}

/// Whether `∘_i : O(m) ⊗ O(n) -> O(m+n-1)` lies within the bound.
pub fn admissible(max_arity: usize, m: usize, i: usize, n: usize) -> bool {
    i >= 1 && i <= m && m <= max_arity && n <= max_arity && m + n - 1 <= max_arity
}

impl Operad {
    /// Validates shapes; missing admissible compositions become zero maps.
    pub fn new(
        seq: Vec<Space>,
        unit: LinMap,
        mut circ: BTreeMap<CircKey, LinMap>,
        max_arity: usize,
    ) -> Result<Self, OperadError> {
        if max_arity < 1 {
            return Err(OperadError::Shape("max_arity must be at least 1".into()));
        }
        if seq.len() != max_arity + 1 {
            return Err(OperadError::Shape(format!(
                "expected {} components, found {}",
                max_arity + 1,
                seq.len()
            )));
        }
        if unit.ncols() != 1 || unit.rows() != seq[1].dim {
            return Err(OperadError::Shape(
                "unit must map the 1-dimensional unit into O(1)".into(),
            ));
        }
        for (&(m, i, n), f) in &circ {
            if !admissible(max_arity, m, i, n) {
                return Err(OperadError::Shape(format!(
                    "composition ({m},{i},{n}) is out of range"
                )));
            }
            let (src, tgt) = (seq[m].dim * seq[n].dim, seq[m + n - 1].dim);
            if f.ncols() != src || f.rows() != tgt {
                return Err(OperadError::Shape(format!(
                    "composition ({m},{i},{n}) is {}x{}, expected {tgt}x{src}",
                    f.rows(),
                    f.ncols()
                )));
            }
        }
        for m in 1..=max_arity {
            for n in 0..=max_arity {
                for i in 1..=m {
                    if admissible(max_arity, m, i, n) {
                        circ.entry((m, i, n)).or_insert_with(|| {
                            LinMap::zero(
                                Space::new(seq[m].dim * seq[n].dim),
                                seq[m + n - 1].clone(),
                            )
                        });
                    }
                }
            }
        }
        Ok(Operad {
            seq,
            unit,
            circ,
            max_arity,
        })
    }

    pub fn dim(&self, n: usize) -> usize {
        self.seq.get(n).map(|s| s.dim).unwrap_or(0)
    }

    pub fn space(&self, n: usize) -> Result<Space, OperadError> {
        self.seq
            .get(n)
            .cloned()
            .ok_or(OperadError::ArityOverflow(n, self.max_arity))
    }

    pub fn circ(&self, m: usize, i: usize, n: usize) -> Result<&LinMap, OperadError> {
        self.circ
            .get(&(m, i, n))
            .ok_or(OperadError::ArityOverflow(m + n - 1, self.max_arity))
    }

    pub fn circ_entries(&self) -> impl Iterator<Item = (&CircKey, &LinMap)> {
        self.circ.iter()
    }

    pub fn underlying(&self) -> Sequence {
        Sequence {
            spaces: self.seq.iter().cloned().enumerate().collect(),
        }
    }

    /// The same operad with a smaller arity bound.
    pub fn truncate(&self, max_arity: usize) -> Operad {
        let max_arity = max_arity.min(self.max_arity).max(1);
        let circ = self
            .circ
            .iter()
            .filter(|(&(m, i, n), _)| admissible(max_arity, m, i, n))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Operad {
            seq: self.seq[..=max_arity].to_vec(),
            unit: self.unit.clone(),
            circ,
            max_arity,
        }
    }

    /// The suboperad of arities `>= 1`.
    pub fn positive_part(&self) -> Operad {
        let mut seq = self.seq.clone();
        seq[0] = Space::zero();
        let circ = self
            .circ
            .iter()
            .filter(|(&(_, _, n), _)| n > 0)
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        Operad::new(seq, self.unit.clone(), circ, self.max_arity)
            .expect("arities >= 1 are closed under composition")
    }
}

#[derive(Serialize, Deserialize)]
struct OperadRepr {
    seq: BTreeMap<String, Space>,
    unit: LinMap,
    #[serde(default)]
    circ: BTreeMap<String, LinMap>,
    max_arity: usize,
}

impl Serialize for Operad {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = OperadRepr {
            seq: self
                .seq
                .iter()
                .enumerate()
                .map(|(n, sp)| (n.to_string(), sp.clone()))
                .collect(),
            unit: self.unit.clone(),
            circ: self
                .circ
                .iter()
                .filter(|(_, f)| !f.is_zero())
                .map(|(&(m, i, n), f)| (format!("{m},{i},{n}"), f.clone()))
                .collect(),
            max_arity: self.max_arity,
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operad {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = OperadRepr::deserialize(d)?;
        let mut seq = vec![Space::zero(); r.max_arity + 1];
        for (k, sp) in r.seq {
            let n: usize = k
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("seq key {k:?} is not an arity")))?;
            if n > r.max_arity {
                return Err(D::Error::custom(format!(
                    "seq.{n} exceeds max_arity {}",
                    r.max_arity
                )));
            }
            sp.validate()
                .map_err(|e| D::Error::custom(format!("seq.{n}: {e}")))?;
            seq[n] = sp;
        }
        let mut circ = BTreeMap::new();
        for (k, f) in r.circ {
            let parts: Vec<usize> = k
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| D::Error::custom(format!("circ key {k:?} must be \"m,i,n\"")))?;
            if parts.len() != 3 {
                return Err(D::Error::custom(format!(
                    "circ key {k:?} must be \"m,i,n\""
                )));
            }
            circ.insert((parts[0], parts[1], parts[2]), f);
        }
        Operad::new(seq, r.unit, circ, r.max_arity).map_err(D::Error::custom)
    }
}

/// A morphism of operads given by its arity components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadMap {
    pub source: Operad,
    pub target: Operad,
    /// `components[n] : source(n) -> target(n)` for `n <= max_arity`.
    pub components: Vec<LinMap>,
}

impl OperadMap {
    pub fn new(
        source: Operad,
        target: Operad,
        components: Vec<LinMap>,
    ) -> Result<Self, OperadError> {
        let max = source.max_arity.min(target.max_arity);
        if components.len() != max + 1 {
            return Err(OperadError::Shape(format!(
                "expected {} components",
                max + 1
            )));
        }
        for (n, f) in components.iter().enumerate() {
            if f.ncols() != source.dim(n) || f.rows() != target.dim(n) {
                return Err(OperadError::Shape(format!(
                    "component {n} has the wrong shape"
                )));
            }
        }
        Ok(OperadMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(o: &Operad) -> Self {
        let components = o.seq.iter().map(|s| LinMap::identity(s.clone())).collect();
        OperadMap {
            source: o.clone(),
            target: o.clone(),
            components,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.components.len() - 1
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &OperadMap) -> OperadMap {
        let max = self.max_arity().min(f.max_arity());
        let components = (0..=max)
            .map(|n| self.components[n].after(&f.components[n]))
            .collect();
        OperadMap {
            source: f.source.truncate(max),
            target: self.target.truncate(max),
            components,
        }
    }

    pub fn as_seq_map(&self) -> SeqMap {
        let max = self.max_arity();
        SeqMap {
            source: self.source.truncate(max).underlying(),
            target: self.target.truncate(max).underlying(),
            components: self.components.iter().cloned().enumerate().collect(),
        }
    }
}

/// Checks relations (1)-(4) of the partial-composition presentation for all
/// admissible arities up to `max_arity`.
pub fn check_operad(o: &Operad, max_arity: usize) -> Report {
    let max = max_arity.min(o.max_arity);
    let mut rep = Report::new();
    let c = |m: usize, i: usize, n: usize| o.circ(m, i, n).expect("admissible composition");
    let id = |n: usize| LinMap::identity(o.seq[n].clone());
    for l in 1..=max {
        for m in 0..=max {
            for n in 0..=max {
                if l + m + n < 2
                    || l + m + n - 2 > max
                    || l + m - 1 > max
                    || l + n - 1 > max
                    || m + n > max + 1
                {
                    continue;
                }
                let dims = [o.dim(l), o.dim(m), o.dim(n)];
                for i in 1..=l {
                    let lhs_inner = c(l, i, m).tensor(&id(n));
                    // (1): j < i.
                    for j in 1..i {
                        let lhs = c(l + m - 1, j, n).after(&lhs_inner);
                        let swap = permute_factors(&dims, &[0, 2, 1]);
                        let rhs = c(l + n - 1, i + n - 1, m)
                            .after(&c(l, j, n).tensor(&id(m)))
                            .after(&swap);
                        rep.record(
                            lhs == rhs,
                            "relation (1)",
                            || format!("(l,m,n)=({l},{m},{n}) i={i} j={j}"),
                            || first_difference(&lhs, &rhs),
                        );
                    }
                    // (2): i <= j < m + i.
                    for j in i..m + i {
                        let lhs = c(l + m - 1, j, n).after(&lhs_inner);
                        let rhs = c(l, i, m + n - 1).after(&id(l).tensor(c(m, j - i + 1, n)));
                        rep.record(
                            lhs == rhs,
                            "relation (2)",
                            || format!("(l,m,n)=({l},{m},{n}) i={i} j={j}"),
                            || first_difference(&lhs, &rhs),
                        );
                    }
                }
            }
        }
    }
    for n in 0..=max {
        let l3 = c(1, 1, n).after(&o.unit.tensor(&id(n)));
        rep.record(
            l3 == id(n),
            "relation (3)",
            || format!("n={n}"),
            || first_difference(&l3, &id(n)),
        );
        for i in 1..=n {
            let l4 = c(n, i, 1).after(&id(n).tensor(&o.unit));
            rep.record(
                l4 == id(n),
                "relation (4)",
                || format!("n={n} i={i}"),
                || first_difference(&l4, &id(n)),
            );
        }
    }
    rep
}

/// Checks that `f` preserves the unit and every admissible `∘_i`.
pub fn check_operad_map(f: &OperadMap, max_arity: usize) -> Report {
    check_map_impl(f, max_arity, None)
}

/// As [`check_operad_map`] for a map out of a weight-truncated free operad:
/// only basis pairs whose weights sum to at most `w_max` are compared, since
/// heavier composites vanish in the source by construction.
pub fn check_operad_map_truncated(f: &OperadMap, max_arity: usize, source: &FreeOperad) -> Report {
    match source.w_max {
        None => check_map_impl(f, max_arity, None),
        Some(w) => {
            let weights: Vec<Vec<usize>> = (0..=source.max_arity())
                .map(|n| source.weights(n))
                .collect();
            let mut rep = check_map_impl(f, max_arity, Some((&weights, w)));
            rep.mark_truncated(format!("compositions compared up to weight {w}"));
            rep
        }
    }
}

fn check_map_impl(
    f: &OperadMap,
    max_arity: usize,
    grading: Option<(&[Vec<usize>], usize)>,
) -> Report {
    let max = max_arity.min(f.max_arity());
    let mut rep = Report::new();
    let u = f.components[1].after(&f.source.unit);
    rep.record(
        u == f.target.unit,
        "unit",
        || "n=1".into(),
        || first_difference(&u, &f.target.unit),
    );
    for m in 1..=max {
        for n in 0..=max {
            for i in 1..=m {
                if !admissible(max, m, i, n) {
                    continue;
                }
                let mut lhs =
                    f.components[m + n - 1].after(f.source.circ(m, i, n).expect("admissible"));
                let mut rhs = f
                    .target
                    .circ(m, i, n)
                    .expect("admissible")
                    .after(&f.components[m].tensor(&f.components[n]));
                if let Some((ws, w)) = grading {
                    let dn = f.source.dim(n);
                    let keep: Vec<usize> = (0..lhs.ncols())
                        .filter(|c| ws[m][c / dn] + ws[n][c % dn] <= w)
                        .collect();
                    lhs = lhs.select_cols(&keep);
                    rhs = rhs.select_cols(&keep);
                }
                rep.record(
                    lhs == rhs,
                    "composition",
                    || format!("(m,i,n)=({m},{i},{n})"),
                    || first_difference(&lhs, &rhs),
                );
            }
        }
    }
    rep
}

/// `μ_{n;p_1..p_n} : O(n) ⊗ O(p_1) ⊗ .. ⊗ O(p_n) -> O(Σ p_k)`, composing
/// left to right: the `k`-th factor is inserted at `∘_{p_1+..+p_{k-1}+1}`.
pub fn mu_from_circ(o: &Operad, ps: &[usize]) -> Result<LinMap, OperadError> {
    let n = ps.len();
    if n > o.max_arity {
        return Err(OperadError::ArityOverflow(n, o.max_arity));
    }
    for &p in ps {
        if p > o.max_arity {
            return Err(OperadError::ArityOverflow(p, o.max_arity));
        }
    }
    // Inputs of arity <= 1 go first so intermediate arities never exceed the total.
    let mut proc: Vec<usize> = (0..n).filter(|&j| ps[j] <= 1).collect();
    proc.extend((0..n).filter(|&j| ps[j] > 1));
    let src_dims: Vec<usize> = std::iter::once(o.dim(n))
        .chain(ps.iter().map(|&p| o.dim(p)))
        .collect();
    let order: Vec<usize> = std::iter::once(0)
        .chain(proc.iter().map(|&j| j + 1))
        .collect();
    let mut map = permute_factors(&src_dims, &order);
    let mut dims: Vec<usize> = order.iter().map(|&k| src_dims[k]).collect();
    let mut done = vec![false; n];
    let mut arity = n;
    for &j in &proc {
        let p = ps[j];
        let next = arity + p - 1;
        if next > o.max_arity {
            return Err(OperadError::ArityOverflow(next, o.max_arity));
        }
        let pos = 1
            + (0..j)
                .map(|q| if done[q] { ps[q] } else { 1 })
                .sum::<usize>();
        let step = act_on_factors(&dims, 0, 2, o.circ(arity, pos, p)?);
        map = step.after(&map);
        dims.remove(1);
        dims[0] = o.dim(next);
        arity = next;
        done[j] = true;
    }
    Ok(map)
}

/// Recovers `∘_i` from a `μ` family: `∘_i = μ_{m;1,..,n,..,1} ∘ (id ⊗ u^{i-1} ⊗ id ⊗ u^{m-i})`.
pub fn circ_from_mu<F>(
    seq: &[Space],
    unit: &LinMap,
    max_arity: usize,
    mu: F,
) -> Result<BTreeMap<CircKey, LinMap>, OperadError>
where
    F: Fn(&[usize]) -> Result<LinMap, OperadError>,
{
    let mut out = BTreeMap::new();
    for m in 1..=max_arity {
        for n in 0..=max_arity {
            for i in 1..=m {
                if !admissible(max_arity, m, i, n) {
                    continue;
                }
                let mut ps = vec![1; m];
                ps[i - 1] = n;
                let mut ins = LinMap::identity(seq[m].clone());
                for k in 1..=m {
                    if k == i {
                        ins = ins.tensor(&LinMap::identity(seq[n].clone()));
                    } else {
                        ins = ins.tensor(unit);
                    }
                }
                out.insert((m, i, n), mu(&ps)?.after(&ins));
            }
        }
    }
    Ok(out)
}

/// The unit operad `1_∘`: the unit object in arity 1, zero elsewhere.
pub fn unit_operad(max_arity: usize) -> Operad {
    let mut seq = vec![Space::zero(); max_arity.max(1) + 1];
    seq[1] = Space::unit();
    let mut circ = BTreeMap::new();
    circ.insert((1, 1, 1), LinMap::identity(Space::unit()));
    Operad::new(seq, LinMap::identity(Space::unit()), circ, max_arity.max(1)).expect("well-formed")
}

/// `Ass`: the unit object in every arity, every `∘_i` the unit isomorphism.
pub fn ass_operad(max_arity: usize) -> Operad {
    scaled_ass(&vec![Scalar::one(); max_arity.max(1) + 1])
}

/// A 1-dimensional-per-arity operad isomorphic to `Ass` through the rescaling
/// `e_n ↦ λ_n e_n`: `∘_i = λ_{m+n-1} / (λ_m λ_n)` and `u = λ_1`.
pub fn scaled_ass(lambdas: &[Scalar]) -> Operad {
    assert!(
        lambdas.len() >= 2 && lambdas.iter().all(|x| !x.is_zero()),
        "nonzero scales for arities 0..=max"
    );
    let max = lambdas.len() - 1;
    let seq = vec![Space::unit(); max + 1];
    let mut circ = BTreeMap::new();
    for m in 1..=max {
        for n in 0..=max {
            for i in 1..=m {
                if admissible(max, m, i, n) {
                    let x = lambdas[m + n - 1].div(&(&lambdas[m] * &lambdas[n]));
                    circ.insert((m, i, n), LinMap::identity(Space::unit()).scale(&x));
                }
            }
        }
    }
    let unit = LinMap::identity(Space::unit()).scale(&lambdas[1]);
    Operad::new(seq, unit, circ, max).expect("well-formed")
}

/// The matrix algebra `M_d` as an operad concentrated in arity 1.
pub fn matrix_operad(d: usize, max_arity: usize) -> Operad {
    let max = max_arity.max(1);
    let mut seq = vec![Space::zero(); max + 1];
    seq[1] = Space::new(d * d);
    let mut cols = Vec::with_capacity(d.pow(4));
    // Basis E_{ab} at index a*d+b; E_{ab} E_{cd} = δ_{bc} E_{ad}.
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    cols.push(if b == c {
                        vec![(a * d + e, Scalar::one())]
                    } else {
                        vec![]
                    });
                }
            }
        }
    }
    let mul = LinMap::from_columns(Space::new(d.pow(4)), Space::new(d * d), cols);
    let unit = LinMap::from_columns(
        Space::unit(),
        Space::new(d * d),
        vec![(0..d).map(|a| (a * d + a, Scalar::one())).collect()],
    );
    let mut circ = BTreeMap::new();
    circ.insert((1, 1, 1), mul);
    Operad::new(seq, unit, circ, max).expect("well-formed")
}

impl Operad {
    /// Replaces one composition, keeping all other data.
    pub fn with_circ(&self, key: CircKey, f: LinMap) -> Result<Operad, OperadError> {
        let mut circ = self.circ.clone();
        circ.insert(key, f);
        Operad::new(self.seq.clone(), self.unit.clone(), circ, self.max_arity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ass_and_unit_pass() {
        assert!(check_operad(&ass_operad(4), 4).passed());
        assert!(check_operad(&unit_operad(3), 3).passed());
        let lam: Vec<Scalar> = [2, -3, 5, 7].iter().map(|&x| Scalar::from_int(x)).collect();
        assert!(check_operad(&scaled_ass(&lam), 3).passed());
    }

    #[test]
    fn swapped_product_entries_break_associativity_only() {
        let o = matrix_operad(2, 1);
        assert!(check_operad(&o, 1).passed());
        let mut dense = o.circ(1, 1, 1).unwrap().to_dense();
        // Columns for E12⊗E21 (1*4+2) and E21⊗E12 (2*4+1) trade images.
        for row in dense.iter_mut() {
            row.swap(6, 9);
        }
        let bad = LinMap::from_rows(Space::new(16), Space::new(4), &dense).unwrap();
        let broken = o.with_circ((1, 1, 1), bad).unwrap();
        let rep = check_operad(&broken, 1);
        assert!(!rep.passed());
        assert!(rep.findings.iter().all(|f| f.check == "relation (2)"));
    }

    #[test]
    fn mu_roundtrip_on_ass() {
        let o = ass_operad(4);
        let circ = circ_from_mu(&o.seq, &o.unit, 4, |ps| mu_from_circ(&o, ps)).unwrap();
        let o2 = Operad::new(o.seq.clone(), o.unit.clone(), circ, 4).unwrap();
        assert_eq!(o2, o);
    }

    #[test]
    fn json_roundtrip() {
        let lam: Vec<Scalar> = [1, 2, 3].iter().map(|&x| Scalar::from_int(x)).collect();
        let o = scaled_ass(&lam);
        let s = serde_json::to_string(&o).unwrap();
        assert_eq!(serde_json::from_str::<Operad>(&s).unwrap(), o);
    }
}
