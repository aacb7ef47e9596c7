//! Fixtures shared by the benchmarks.

use std::collections::BTreeMap;

use opd_core::algebra::{free_algebra, Algebra, SGraph, SGraphMap};
use opd_core::exactcat::LinMap;
use opd_core::opcolim::PushoutProblem;
use opd_core::operad::{free_operad, free_unit, SeqMap, Sequence};

/// Gluing two binary generators of `F({2:1, 3:1})` along their difference.
pub fn split_cell(n_max: usize) -> PushoutProblem {
    let u = Sequence::from_dims(&[(2, 1)]);
    let w = Sequence::from_dims(&[(2, 1), (3, 1)]);
    let fw = free_operad(&w, n_max, None).expect("free operad");
    let v = Sequence::from_dims(&[(2, 2)]);
    let f = SeqMap::new(
        u.clone(),
        v,
        BTreeMap::from([(2, LinMap::from_int_rows(1, 2, &[&[1], &[-1]]))]),
    )
    .expect("f");
    let g = SeqMap::new(
        u,
        fw.operad.underlying(),
        BTreeMap::from([(2, free_unit(&fw).at(2))]),
    )
    .expect("g");
    PushoutProblem::new(f, g, fw.operad).expect("problem")
}

/// The free `O`-algebra on `x -> y` with a free edge `y -> z` to attach.
pub fn edge_attachment(
    o: &opd_core::operad::Operad,
    p_max: usize,
) -> (Algebra, SGraphMap, SGraphMap) {
    let objs = ["x", "y", "z"];
    let xy = SGraph::from_dims(&objs, &[("x", "y", 1)]).expect("graph");
    let yz = SGraph::from_dims(&objs, &[("y", "z", 1)]).expect("graph");
    let zero = SGraph::zero(objs.iter().map(|s| s.to_string()).collect()).expect("graph");
    let a = free_algebra(o, &xy, p_max).expect("free algebra").algebra;
    let f = SGraphMap::zero(&zero, &yz);
    let g = SGraphMap::zero(&zero, &a.carrier);
    (a, f, g)
}
