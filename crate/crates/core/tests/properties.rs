use opd_core::algebra::{check_algebra, free_algebra, Algebra, SGraph};
use opd_core::exactcat::{pushout, verify_pushout, LinMap, Scalar, Space};
use opd_core::operad::{ass_operad, check_operad, scaled_ass, Operad};
use opd_core::trees::Tree;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn matrix(src: usize, tgt: usize) -> impl Strategy<Value = LinMap> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, tgt), src).prop_map(move |cols| {
        let cols = cols
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .enumerate()
                    .filter(|&(_, x)| x != 0)
                    .map(|(i, x)| (i, Scalar::from_int(x)))
                    .collect()
            })
            .collect();
        LinMap::from_columns(Space::new(src), Space::new(tgt), cols)
    })
}

/// Three composable maps `a -> b -> c -> d`.
fn chain3() -> impl Strategy<Value = (LinMap, LinMap, LinMap)> {
    (0usize..=3, 0usize..=3, 0usize..=3, 0usize..=3)
        .prop_flat_map(|(a, b, c, d)| (matrix(a, b), matrix(b, c), matrix(c, d)))
}

/// A span `v <- u -> x`.
fn span() -> impl Strategy<Value = (LinMap, LinMap)> {
    (0usize..=3, 0usize..=3, 0usize..=3).prop_flat_map(|(u, v, x)| (matrix(u, v), matrix(u, x)))
}

fn tree(max_arity: usize) -> impl Strategy<Value = Tree> {
    let leaf = Just(Tree::Leaf);
    leaf.prop_recursive(4, 24, max_arity as u32, move |inner| {
        prop::collection::vec(inner, 0..=max_arity).prop_map(Tree::Node)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_text_round_trip(s in scalar()) {
        prop_assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s.clone());
        let js = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&js).unwrap(), s);
    }

    #[test]
    fn composition_is_associative((f, g, h) in chain3()) {
        prop_assert_eq!(h.after(&g).after(&f), h.after(&g.after(&f)));
    }

    #[test]
    fn tensor_is_functorial((f, g, _) in chain3(), (f2, g2, _) in chain3()) {
        prop_assert_eq!(g.tensor(&g2).after(&f.tensor(&f2)), g.after(&f).tensor(&g2.after(&f2)));
    }

    #[test]
    fn kernel_is_exact(f in (0usize..=4, 0usize..=4).prop_flat_map(|(a, b)| matrix(a, b))) {
        let k = f.kernel();
        prop_assert!(f.after(&k).is_zero());
        prop_assert!(k.is_injective());
        prop_assert_eq!(k.ncols() + f.rank(), f.ncols());
    }

    #[test]
    fn pushout_square_commutes((f, g) in span()) {
        let po = pushout(&f, &g).unwrap();
        prop_assert!(verify_pushout(&f, &g, &po));
        prop_assert_eq!(po.inj_left.after(&f), po.inj_right.after(&g));
    }

    #[test]
    fn linmap_json_round_trip(f in (0usize..=3, 0usize..=3).prop_flat_map(|(a, b)| matrix(a, b))) {
        let js = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<LinMap>(&js).unwrap(), f);
    }

    #[test]
    fn tree_text_round_trip(t in tree(3)) {
        prop_assert_eq!(t.to_string().parse::<Tree>().unwrap(), t.clone());
        prop_assert_eq!(t.decompose_into_corollas().eval(), t);
    }

    #[test]
    fn contracting_every_edge_gives_the_corolla(t in tree(3)) {
        prop_assume!(!t.is_unit());
        let c = t.contract_set(&t.inner_edges()).unwrap();
        prop_assert_eq!(c, Tree::corolla(t.n_leaves()));
    }

    #[test]
    fn rescaled_ass_is_an_operad(lambdas in prop::collection::vec(nonzero_scalar(), 5)) {
        let o = scaled_ass(&lambdas);
        let rep = check_operad(&o, 4);
        prop_assert!(rep.passed(), "{}", rep);
        let js = serde_json::to_string(&o).unwrap();
        prop_assert_eq!(serde_json::from_str::<Operad>(&js).unwrap(), o);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn free_algebra_is_an_algebra(dims in prop::collection::vec(0usize..=1, 4)) {
        let objs = ["x", "y"];
        let homs: Vec<(&str, &str, usize)> = [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]
            .iter()
            .zip(&dims)
            .map(|(&(a, b), &d)| (a, b, d))
            .collect();
        let g = SGraph::from_dims(&objs, &homs).unwrap();
        let fa = free_algebra(&ass_operad(2), &g, 2).unwrap();
        let rep = check_algebra(&fa.algebra, 2);
        prop_assert!(rep.passed(), "{}", rep);
        let js = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<SGraph>(&js).unwrap(), g);
        let js = serde_json::to_string(&fa.algebra).unwrap();
        prop_assert_eq!(serde_json::from_str::<Algebra>(&js).unwrap(), fa.algebra);
    }
}
