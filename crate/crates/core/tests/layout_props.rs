use std::sync::Arc;

use guidetree_core::layout::{doi_distances, grayed_nodes, layout, LayoutParams, Viewport};
use guidetree_core::nav::NavState;
use guidetree_core::testing::{layout_violations, random_action, random_tree, TreeShape};
use guidetree_core::tree::NodeKind;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn walk(rng: &mut StdRng, state: NavState, steps: usize) -> NavState {
    let mut state = state;
    for _ in 0..steps {
        if let Ok(next) = state.apply(&random_action(rng, &state)) {
            state = next;
        }
    }
    state
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn geometry_contract(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let shape = TreeShape { max_nodes: rng.random_range(3..200), max_fanout: 4, ..TreeShape::default() };
        let tree = Arc::new(random_tree(&mut rng, &shape));
        let viewport = Viewport::new(rng.random_range(200.0..2000.0), rng.random_range(200.0..1200.0)).unwrap();
        let params = LayoutParams {
            decay: rng.random_range(0.3..=1.0),
            min_scale: rng.random_range(0.1..=1.0),
            ..LayoutParams::default()
        };
        let fresh = NavState::new(Arc::clone(&tree));
        let l = layout(&tree, &fresh, viewport, &params);
        prop_assert_eq!(layout_violations(&l, &fresh, &params), Vec::<String>::new());

        let steps = rng.random_range(1..30);
        let state = walk(&mut rng, fresh, steps);
        let l = layout(&tree, &state, viewport, &params);
        prop_assert_eq!(layout_violations(&l, &state, &params), Vec::<String>::new());
        prop_assert_eq!(&layout(&tree, &state, viewport, &params), &l);
    }

    #[test]
    fn distances_match_brute_force(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let tree = Arc::new(random_tree(&mut rng, &TreeShape { max_nodes: 40, ..TreeShape::default() }));
        let state = walk(&mut rng, NavState::new(Arc::clone(&tree)), 15);
        let d = doi_distances(&state);
        if state.selected_indices().is_empty() {
            prop_assert!(d.iter().all(|&x| x == 0));
        } else {
            // Distance between two tree nodes is the sum of depths minus
            // twice the depth of their lowest common ancestor.
            let lca_depth = |mut a: usize, mut b: usize| {
                while tree.depth(a) > tree.depth(b) { a = tree.parent(a).unwrap(); }
                while tree.depth(b) > tree.depth(a) { b = tree.parent(b).unwrap(); }
                while a != b { a = tree.parent(a).unwrap(); b = tree.parent(b).unwrap(); }
                tree.depth(a)
            };
            let active: Vec<usize> = (0..tree.node_count()).filter(|&v| state.is_active(v)).collect();
            for v in 0..tree.node_count() {
                let best = active
                    .iter()
                    .map(|&a| tree.depth(v) + tree.depth(a) - 2 * lca_depth(v, a))
                    .min()
                    .unwrap();
                prop_assert_eq!(d[v] as usize, best);
            }
        }
    }

    #[test]
    fn grayed_nodes_are_unreachable(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let tree = Arc::new(random_tree(&mut rng, &TreeShape { max_nodes: 40, ..TreeShape::default() }));
        let state = walk(&mut rng, NavState::new(Arc::clone(&tree)), 15);
        let grayed = grayed_nodes(&state);
        let reachable = state.reachable_recommendation_indices();
        for v in 0..tree.node_count() {
            if tree.node(v).kind == NodeKind::Recommendation && reachable.contains(&v) {
                prop_assert!(!grayed[v]);
            }
            if state.is_current(v) {
                prop_assert!(!grayed[v]);
            }
        }
    }
}
