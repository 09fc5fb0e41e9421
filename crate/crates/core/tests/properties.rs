use proptest::prelude::*;

use unchained::builtins;
use unchained::coalgebra::{
    brute_force_solutions, coalgebra_morphisms, colim_coalgebras, hylo, is_coalgebra_morphism, is_recursive, iterate,
    morphism_cover, recursion_certificate, verify_morphism, Certificate, CoalgebraDiagram, MorphismKind,
};
use unchained::colimit::{
    colimit, factor_through, mediate, preserves_colimit_check, verify_filtered_characterization, Cocone, Diagram,
};
use unchained::finset::{compose, copair, coproduct};
use unchained::{Algebra, Coalgebra, FinFn, FinSet, Limits, Partition, Shape};

fn lim() -> Limits {
    Limits::default()
}

/// Cherry coalgebra from raw draws. With `acyclic`, children of `x` are
/// drawn below `x`, so the result is recursive.
fn cherry_coalgebra(raw: &[(bool, u8, u8)], acyclic: bool) -> Coalgebra {
    let n = raw.len();
    let shapes: Vec<Shape> = raw
        .iter()
        .enumerate()
        .map(|(x, &(leaf, a, b))| {
            let bound = if acyclic { x } else { n };
            if leaf || bound == 0 {
                Shape::Op { op: 0, args: vec![] }
            } else {
                Shape::Op { op: 1, args: vec![a as usize % bound, b as usize % bound] }
            }
        })
        .collect();
    Coalgebra::from_shapes(&builtins::cherry(), FinSet::ordinal(n), &shapes, &lim()).unwrap()
}

fn cherry_algebra(size: usize, table: &[u8]) -> Algebra {
    let image = builtins::cherry().apply_obj(&FinSet::ordinal(size), &lim()).unwrap();
    let t = (0..image.len()).map(|i| table[i % table.len()] as usize % size).collect();
    Algebra::from_structure(image.clone(), FinFn::from_indices(image.set().clone(), FinSet::ordinal(size), t).unwrap())
        .unwrap()
}

fn map(dom: usize, cod: usize, raw: &[u8]) -> FinFn {
    let t = (0..dom).map(|i| raw[i % raw.len().max(1)] as usize % cod).collect();
    FinFn::from_indices(FinSet::ordinal(dom), FinSet::ordinal(cod), t).unwrap()
}

fn raw_coalgebra() -> impl Strategy<Value = Vec<(bool, u8, u8)>> {
    prop::collection::vec((any::<bool>(), any::<u8>(), any::<u8>()), 0..6)
}

/// A chain `X0 → X1 → X2` of random maps between non-empty sets.
fn chain_diagram(sizes: &[usize; 3], raw: &[u8]) -> Diagram {
    let mut d = Diagram::new();
    for (k, &n) in sizes.iter().enumerate() {
        d.add_node(format!("X{k}"), FinSet::ordinal(n)).unwrap();
    }
    d.add_edge("f0", 0, 1, map(sizes[0], sizes[1], raw)).unwrap();
    d.add_edge("f1", 1, 2, map(sizes[1], sizes[2], &raw[1..])).unwrap();
    d
}

proptest! {
    #[test]
    fn certificates_are_valid(raw in raw_coalgebra()) {
        let c = cherry_coalgebra(&raw, false);
        let succ = c.successor_graph();
        match recursion_certificate(&c) {
            Certificate::Acyclic { order } => {
                let mut pos = vec![usize::MAX; c.len()];
                for (k, &x) in order.iter().enumerate() {
                    pos[x] = k;
                }
                prop_assert!(pos.iter().all(|&p| p != usize::MAX));
                for x in 0..c.len() {
                    prop_assert!(succ[x].iter().all(|&y| pos[y] < pos[x]));
                }
            }
            Certificate::Cycle { cycle } => {
                prop_assert!(!cycle.is_empty());
                for k in 0..cycle.len() {
                    let next = cycle[(k + 1) % cycle.len()];
                    prop_assert!(succ[cycle[k]].contains(&next));
                }
            }
        }
    }

    #[test]
    fn hylo_is_the_only_solution(raw in raw_coalgebra(), size in 1usize..4, table in prop::collection::vec(any::<u8>(), 1..20)) {
        let c = cherry_coalgebra(&raw, true);
        let a = cherry_algebra(size, &table);
        let h = hylo(&c, &a).unwrap();
        prop_assert!(verify_morphism(MorphismKind::CoalgebraToAlgebra(&c, &a), &h).unwrap());
        prop_assert_eq!(brute_force_solutions(&c, &a, &lim()).unwrap(), vec![h]);
    }

    #[test]
    fn iterate_keeps_recursion(raw in raw_coalgebra()) {
        let c = cherry_coalgebra(&raw, true);
        prop_assert!(is_recursive(&iterate(&c, &lim()).unwrap()));
    }

    #[test]
    fn quotient_ignores_union_order(n in 1usize..10, pairs in prop::collection::vec((any::<u8>(), any::<u8>()), 0..12)) {
        let base = FinSet::ordinal(n);
        let pairs: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (a as usize % n, b as usize % n)).collect();
        let mut fwd = Partition::discrete(&base);
        let mut bwd = Partition::discrete(&base);
        for &(a, b) in &pairs {
            fwd.union(a, b);
        }
        for &(a, b) in pairs.iter().rev() {
            bwd.union(b, a);
        }
        prop_assert_eq!(fwd.classes(), bwd.classes());
        for class in fwd.classes() {
            prop_assert!(class.iter().all(|&x| fwd.find(x) == class[0]));
        }
    }

    #[test]
    fn copair_laws(a in 0usize..4, b in 0usize..4, c in 1usize..4, raw in prop::collection::vec(any::<u8>(), 1..8)) {
        let f = map(a, c, &raw);
        let g = map(b, c, &raw[raw.len() / 2..]);
        let cop = coproduct(&FinSet::ordinal(a), &FinSet::ordinal(b));
        let fg = copair(&f, &g, &cop).unwrap();
        prop_assert_eq!(compose(&fg, &cop.inl).unwrap(), f);
        prop_assert_eq!(compose(&fg, &cop.inr).unwrap(), g);
        let h = FinFn::from_indices(cop.apex.clone(), FinSet::ordinal(c), map(a + b, c, &raw).indices().to_vec()).unwrap();
        let rebuilt = copair(&compose(&h, &cop.inl).unwrap(), &compose(&h, &cop.inr).unwrap(), &cop).unwrap();
        prop_assert_eq!(rebuilt, h);
    }

    #[test]
    fn mediate_recovers_maps_out_of_the_colimit(
        sizes in [1usize..4, 1usize..4, 1usize..4],
        raw in prop::collection::vec(any::<u8>(), 2..8),
        k in 1usize..4,
        out in prop::collection::vec(any::<u8>(), 1..8),
    ) {
        let d = chain_diagram(&sizes, &raw);
        let c = colimit(&d, &lim()).unwrap();
        c.cocone().check(&d).unwrap();
        prop_assert_eq!(mediate(&d, &c, &c.cocone()).unwrap(), FinFn::identity(&c.apex));
        let v = FinFn::from_indices(c.apex.clone(), FinSet::ordinal(k), map(c.apex.len(), k, &out).indices().to_vec()).unwrap();
        let legs = c.injections.iter().map(|i| compose(&v, i).unwrap()).collect();
        prop_assert_eq!(mediate(&d, &c, &Cocone { apex: FinSet::ordinal(k), legs }).unwrap(), v);
    }

    #[test]
    fn chains_are_clean_and_preserved(sizes in [1usize..4, 1usize..4, 1usize..4], raw in prop::collection::vec(any::<u8>(), 2..8), pick in any::<u8>()) {
        let d = chain_diagram(&sizes, &raw);
        let c = colimit(&d, &lim()).unwrap();
        prop_assert!(verify_filtered_characterization(&d, &c, &lim()).is_clean());
        prop_assert!(preserves_colimit_check(&builtins::cherry(), &d, &c, &lim()).unwrap());
        let point = FinFn::from_indices(FinSet::ordinal(1), c.apex.clone(), vec![pick as usize % c.apex.len()]).unwrap();
        let (node, g) = factor_through(&d, &c, &point).unwrap();
        prop_assert_eq!(compose(&c.injections[node], &g).unwrap(), point);
    }

    #[test]
    fn covers_realize_every_pair(src in raw_coalgebra(), dst in raw_coalgebra()) {
        let (c, d) = (cherry_coalgebra(&src, true), cherry_coalgebra(&dst, true));
        let all = coalgebra_morphisms(&c, &d, &lim()).unwrap();
        for h in &all {
            prop_assert!(is_coalgebra_morphism(h, &c, &d).unwrap());
        }
        let cover = morphism_cover(&c, &d, None).unwrap();
        let pairs = |hs: &[FinFn]| {
            let mut v: Vec<(usize, usize)> = hs.iter().flat_map(|h| h.indices().iter().copied().enumerate()).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        prop_assert_eq!(pairs(&cover), pairs(&all));
        prop_assert_eq!(cover.is_empty(), all.is_empty());
        for h in &cover {
            prop_assert!(all.contains(h));
        }
    }

    #[test]
    fn colimits_of_recursive_coalgebras_are_recursive(src in raw_coalgebra(), dst in raw_coalgebra()) {
        let (c, d) = (cherry_coalgebra(&src, true), cherry_coalgebra(&dst, true));
        let mut cd = CoalgebraDiagram::new();
        let a = cd.add_node("C", c.clone());
        let b = cd.add_node("D", d.clone());
        for (k, h) in morphism_cover(&c, &d, None).unwrap().into_iter().enumerate() {
            cd.add_edge(format!("h{k}"), a, b, h);
        }
        let col = colim_coalgebras(&builtins::cherry(), &cd, &lim()).unwrap();
        prop_assert!(is_recursive(&col.coalgebra));
        for (i, (_, node)) in cd.nodes.iter().enumerate() {
            prop_assert!(is_coalgebra_morphism(&col.colimit.injections[i], node, &col.coalgebra).unwrap());
        }
    }
}
