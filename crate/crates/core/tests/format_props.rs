use guidetree_core::format::{
    parse_case, parse_history, parse_patient, parse_transcript, parse_tree, parse_tree_bytes,
    serialize_history, serialize_tree, FormatError,
};
use guidetree_core::nav::NavState;
use guidetree_core::testing::{mutate_bytes, random_action, random_tree, TreeShape};
use guidetree_core::tree::{example_tree, validate_tree};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

fn shape(rng: &mut StdRng) -> TreeShape {
    TreeShape {
        max_nodes: rng.random_range(3..60),
        max_fanout: rng.random_range(2..5),
        multi_ratio: rng.random_range(0.0..0.6),
        predicates: rng.random_bool(0.5),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn round_trip_and_canonical(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let shape = shape(&mut rng);
        let tree = random_tree(&mut rng, &shape);
        let text = serialize_tree(&tree);
        let back = parse_tree(&text).unwrap();
        prop_assert_eq!(&back, &tree);
        prop_assert_eq!(back.parts(), tree.parts());
        prop_assert_eq!(serialize_tree(&back), text);
    }

    #[test]
    fn corrupted_tree_documents_fail_cleanly(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let shape = shape(&mut rng);
        let doc = serialize_tree(&random_tree(&mut rng, &shape));
        let bytes = mutate_bytes(&mut rng, doc.as_bytes());
        match parse_tree_bytes(&bytes) {
            Ok(tree) => prop_assert!(validate_tree(tree.parts()).is_empty()),
            Err(FormatError::Syntax { line, column, .. }) => prop_assert!(line >= 1 && column >= 1),
            Err(FormatError::Schema { .. }) => {}
            Err(FormatError::Validation(report)) => prop_assert!(!report.is_empty()),
        }
    }

    #[test]
    fn other_documents_fail_cleanly(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let samples = [
            r#"{"format_version":1,"fields":{"SpO2":{"number":{"value":91,"unit":"%"}},"fever":{"boolean":true}}}"#,
            r#"{"format_version":1,"tree":"T1","actions":[{"kind":"answer","node":"n0","choices":["severe"]},{"kind":"goto","node":"n0"},{"kind":"reset"}]}"#,
            r#"{"format_version":1,"participant":"p1","group":"A","case":1,"answers":{"ekg":true,"level_of_care":"ward"}}"#,
        ];
        for doc in samples {
            let bytes = mutate_bytes(&mut rng, doc.as_bytes());
            let text = String::from_utf8_lossy(&bytes);
            let _ = parse_patient(&text);
            let _ = parse_history(&text);
            let _ = parse_transcript(&text);
            let _ = parse_case(&text);
        }
    }

    #[test]
    fn history_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let tree = Arc::new(random_tree(&mut rng, &TreeShape::default()));
        let mut state = NavState::new(Arc::clone(&tree));
        for _ in 0..20 {
            let action = random_action(&mut rng, &state);
            if let Ok(next) = state.apply(&action) {
                state = next;
            }
        }
        let text = serialize_history(tree.id(), state.history());
        let log = parse_history(&text).unwrap();
        prop_assert_eq!(log.tree.as_str(), tree.id());
        prop_assert_eq!(&log.actions, state.history());
        prop_assert_eq!(serialize_history(&log.tree, &log.actions), text);
    }
}

#[test]
fn example_tree_is_stable() {
    let text = serialize_tree(&example_tree());
    assert!(text.starts_with("{\n  \"format_version\": 1,\n  \"id\": "));
    assert!(text.ends_with("}\n"));
    assert_eq!(parse_tree(&text).unwrap(), example_tree());
}
