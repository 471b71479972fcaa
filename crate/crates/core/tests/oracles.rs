use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramsey_core::constructions::{
    affine_plane_coloring, grid_construction, layered_coloring, lexical_coloring, random_coloring,
    GridConstructionSpec,
};
use ramsey_core::median_order::{check_feedback_property, compute_median_order, PartialOrientation};
use ramsey_core::mono_embed::{greedy_tree_embed, peel_to_min_degree, SubgraphView};
use ramsey_core::oracle::{
    longest_rainbow_path_exact, max_distinct_colors_at_vertex, median_order_exact, mono_component_profile,
    tree_containment_exact, RainbowSearch, SearchOutcome, DEFAULT_NODE_BUDGET,
};
use ramsey_core::rainbow::{check_property_ii, check_property_iii, PairCheck};
use ramsey_core::{verify_certificate, Certificate, EdgeColoring, TreeSpec};

fn petersen() -> SubgraphView {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    SubgraphView::from_edges((0..10).collect(), &edges)
}

/// Largest vertex subset whose induced subgraph has min degree ≥ s, by enumeration.
fn brute_core(n: usize, edges: &[(usize, usize)], s: usize) -> Vec<usize> {
    let mut best = 0u32;
    for mask in 0u32..1 << n {
        let ok = (0..n).filter(|&v| mask >> v & 1 == 1).all(|v| {
            edges.iter().filter(|&&(a, b)| (a == v && mask >> b & 1 == 1) || (b == v && mask >> a & 1 == 1)).count()
                >= s
        });
        if ok && mask.count_ones() > best.count_ones() {
            best = mask;
        }
    }
    (0..n).filter(|&v| best >> v & 1 == 1).collect()
}

#[test]
fn peeling_matches_exhaustive_core() {
    // triangle with a pendant path
    let edges = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5)];
    let g = SubgraphView::from_edges((0..6).collect(), &edges);
    assert_eq!(peel_to_min_degree(&g, 2).vertices(), &[0, 1, 2]);
    assert_eq!(brute_core(6, &edges, 2), vec![0, 1, 2]);

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=11);
        let p = rng.gen_range(0.1..0.9);
        let edges: Vec<_> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
        let s = rng.gen_range(1..=4);
        let g = SubgraphView::from_edges((0..n).collect(), &edges);
        assert_eq!(peel_to_min_degree(&g, s).vertices(), brute_core(n, &edges, s).as_slice());
    }
}

#[test]
fn greedy_embedding_agrees_with_backtracking() {
    let spider = TreeSpec::spider(&[1, 1, 1]);
    let p = petersen();
    let map = greedy_tree_embed(&p, &spider).unwrap();
    assert!(spider.edges().iter().all(|&(a, b)| p.has_edge_global(map[a], map[b])));
    assert!(matches!(tree_containment_exact(&p, &spider, DEFAULT_NODE_BUDGET), SearchOutcome::Found(_)));
    assert_eq!(tree_containment_exact(&p, &TreeSpec::star(4), DEFAULT_NODE_BUDGET), SearchOutcome::NotFound);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.gen_range(4..14);
        let edges: Vec<_> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect();
        let g = SubgraphView::from_edges((0..n).collect(), &edges);
        let s = rng.gen_range(1..=4);
        let tree = TreeSpec::all_nonisomorphic(s).swap_remove(0);
        let core = peel_to_min_degree(&g, s);
        if !core.is_empty() {
            assert!(greedy_tree_embed(&core, &tree).is_ok());
            assert!(matches!(tree_containment_exact(&g, &tree, DEFAULT_NODE_BUDGET), SearchOutcome::Found(_)));
        }
    }
}

#[test]
fn local_median_order_against_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut gaps = 0;
    for seed in 0..100 {
        let g = PartialOrientation::tournament_from_fn(7, |_, _| rng.gen_bool(0.5));
        let local = compute_median_order(&g, seed);
        let exact = median_order_exact(&g).unwrap();
        assert!(local.forward_count <= exact.forward_count);
        assert!(check_feedback_property(&g, &exact));
        gaps += exact.forward_count - local.forward_count;
    }
    println!("total local-search gap over 100 tournaments: {gaps}");

    let mut cycle = PartialOrientation::new(3);
    cycle.set_directed(0, 1);
    cycle.set_directed(1, 2);
    cycle.set_directed(2, 0);
    assert_eq!(median_order_exact(&cycle).unwrap().forward_count, 2);
    let transitive = PartialOrientation::tournament_from_fn(5, |u, v| u < v);
    assert_eq!(median_order_exact(&transitive).unwrap().forward_count, 10);
    assert!(median_order_exact(&PartialOrientation::new(10)).is_err());
}

#[test]
fn rainbow_ceiling_on_affine_planes() {
    let frozen = [(2, 2), (3, 4), (5, 6)];
    for (q, expected) in frozen {
        let c = affine_plane_coloring(q).unwrap();
        let RainbowSearch::Exact { length, path } = longest_rainbow_path_exact(&c, None, DEFAULT_NODE_BUDGET) else {
            panic!("budget exhausted for q={q}");
        };
        assert_eq!(length, expected);
        assert!(length <= c.palette_size());
        let cert = Certificate::RainbowPath { path };
        assert!(verify_certificate(&c, None, Some(length), &cert).is_valid());
    }
}

/// Component sizes of one color class by depth-first search over the raw labels.
fn components_by_dfs(c: &EdgeColoring, label: u32) -> Vec<usize> {
    let n = c.n();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] || !(0..n).any(|v| v != start && c.label(start, v) == label) {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for v in 0..n {
                if v != u && !seen[v] && c.label(u, v) == label {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

#[test]
fn mono_profile_matches_direct_traversal() {
    for seed in 0..5 {
        let c = random_coloring(20, 2, seed).unwrap();
        for p in mono_component_profile(&c) {
            let sizes = components_by_dfs(&c, p.label);
            assert_eq!(p.components, sizes.len());
            assert_eq!(p.max_component_order, *sizes.iter().max().unwrap());
        }
    }
    let lex = lexical_coloring(8).unwrap();
    for p in mono_component_profile(&lex) {
        assert_eq!(p.components, 1);
        assert_eq!(p.all_cliques, p.label < 2);
    }
}

#[test]
fn max_colors_extremes() {
    assert_eq!(max_distinct_colors_at_vertex(&EdgeColoring::from_fn(6, |_, _| 1).unwrap()), 1);
    let rainbow = EdgeColoring::from_fn(7, |u, v| (u * 7 + v) as u32).unwrap();
    assert_eq!(max_distinct_colors_at_vertex(&rainbow), 6);
    for t in 2..6 {
        assert_eq!(max_distinct_colors_at_vertex(&layered_coloring(4, t).unwrap()), t);
    }
}

#[test]
fn layered_classes_have_no_long_path() {
    let c = layered_coloring(4, 3).unwrap();
    let all: Vec<usize> = (0..c.n()).collect();
    for color in c.palette() {
        let class = SubgraphView::color_class(&c, color, &all);
        assert_eq!(tree_containment_exact(&class, &TreeSpec::path(5), DEFAULT_NODE_BUDGET), SearchOutcome::NotFound);
    }
}

#[test]
fn grid_metadata_passes_structural_checks() {
    let spec = GridConstructionSpec::new(2, 4, 6);
    let (c, ss) = grid_construction(spec).unwrap();
    assert!(check_property_ii(&c, &ss).is_empty());
    let spec = GridConstructionSpec::new(3, 3, 6).with_connectors(3);
    let (c, ss) = grid_construction(spec).unwrap();
    assert!(check_property_ii(&c, &ss).is_empty());
    assert!(check_property_iii(&c, &ss, 3, PairCheck::Exhaustive).is_empty());
}
