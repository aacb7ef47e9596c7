//! Operads over finite sets with the cartesian product.

use std::collections::BTreeMap;

use super::{admissible, CircKey, Operad};
use crate::exactcat::{FinSetMap, FinSetObj, LinMap, Scalar, Space};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSetOperad {
    pub seq: Vec<FinSetObj>,
    /// Index in `seq[1]` of the unit element.
    pub unit: usize,
    pub circ: BTreeMap<CircKey, FinSetMap>,
    pub max_arity: usize,
}

/// `Ass` over finite sets: a single operation in each arity.
pub fn ass_operad_finset(max_arity: usize) -> FinSetOperad {
    let max = max_arity.max(1);
    let seq: Vec<FinSetObj> = (0..=max)
        .map(|n| FinSetObj::new(vec![format!("m{n}")]).expect("singleton"))
        .collect();
    let mut circ = BTreeMap::new();
    for m in 1..=max {
        for n in 0..=max {
            for i in 1..=m {
                if admissible(max, m, i, n) {
                    let src = seq[m].tensor(&seq[n]);
                    circ.insert(
                        (m, i, n),
                        FinSetMap {
                            source: src,
                            target: seq[m + n - 1].clone(),
                            images: vec![0],
                        },
                    );
                }
            }
        }
    }
    FinSetOperad {
        seq,
        unit: 0,
        circ,
        max_arity: max,
    }
}

impl FinSetOperad {
    fn apply(&self, m: usize, i: usize, n: usize, x: usize, y: usize) -> usize {
        self.circ[&(m, i, n)].images[x * self.seq[n].len() + y]
    }

    /// Relations (1)-(4), checked elementwise.
    pub fn check(&self, max_arity: usize) -> Report {
        let max = max_arity.min(self.max_arity);
        let mut rep = Report::new();
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
                    for i in 1..=l {
                        for x in 0..self.seq[l].len() {
                            for y in 0..self.seq[m].len() {
                                for z in 0..self.seq[n].len() {
                                    let xy = self.apply(l, i, m, x, y);
                                    for j in 1..i {
                                        let a = self.apply(l + m - 1, j, n, xy, z);
                                        let b = self.apply(
                                            l + n - 1,
                                            i + n - 1,
                                            m,
                                            self.apply(l, j, n, x, z),
                                            y,
                                        );
                                        rep.record(
                                            a == b,
                                            "relation (1)",
                                            || format!("({l},{m},{n}) i={i} j={j}"),
                                            || format!("element ({x},{y},{z})"),
                                        );
                                    }
                                    for j in i..m + i {
                                        let a = self.apply(l + m - 1, j, n, xy, z);
                                        let b = self.apply(
                                            l,
                                            i,
                                            m + n - 1,
                                            x,
                                            self.apply(m, j - i + 1, n, y, z),
                                        );
                                        rep.record(
                                            a == b,
                                            "relation (2)",
                                            || format!("({l},{m},{n}) i={i} j={j}"),
                                            || format!("element ({x},{y},{z})"),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for n in 0..=max {
            for x in 0..self.seq[n].len() {
                let a = self.apply(1, 1, n, self.unit, x);
                rep.record(
                    a == x,
                    "relation (3)",
                    || format!("n={n}"),
                    || format!("element {x}"),
                );
                for i in 1..=n {
                    let b = self.apply(n, i, 1, x, self.unit);
                    rep.record(
                        b == x,
                        "relation (4)",
                        || format!("n={n} i={i}"),
                        || format!("element {x}"),
                    );
                }
            }
        }
        rep
    }

    /// The free vector space on each component.
    pub fn linearize(&self) -> Operad {
        let seq: Vec<Space> = self.seq.iter().map(|s| Space::new(s.len())).collect();
        let unit = LinMap::from_columns(
            Space::unit(),
            seq[1].clone(),
            vec![vec![(self.unit, Scalar::one())]],
        );
        let circ = self
            .circ
            .iter()
            .map(|(&(m, i, n), f)| {
                let cols = f.images.iter().map(|&t| vec![(t, Scalar::one())]).collect();
                (
                    (m, i, n),
                    LinMap::from_columns(Space::new(f.images.len()), seq[m + n - 1].clone(), cols),
                )
            })
            .collect();
        Operad::new(seq, unit, circ, self.max_arity).expect("well-formed")
    }
}
