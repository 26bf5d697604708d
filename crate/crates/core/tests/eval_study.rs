use guidetree_core::eval::{
    compare_groups, load_dataset, score_transcript, tidy_rows, CompareConfig, Criterion, Group, Phase,
};
use guidetree_core::testing::{synthetic_case, synthetic_study, transcript_with_score, write_dataset};

#[test]
fn scoring_extremes_and_partition() {
    let case = synthetic_case(3);
    let gold = transcript_with_score(&case, "p", Group::C, 22, 0);
    assert_eq!(score_transcript(&case, &gold).unwrap().total(), 22);
    let wrong = transcript_with_score(&case, "p", Group::C, 0, 0);
    assert_eq!(score_transcript(&case, &wrong).unwrap().total(), 0);
    for k in 0..=22 {
        let t = transcript_with_score(&case, "p", Group::A, k, 7);
        assert_eq!(score_transcript(&case, &t).unwrap().total(), k as u32);
    }
    let sizes: Vec<usize> = [Phase::InitialEvaluation, Phase::InitialDecision, Phase::Reevaluation]
        .into_iter()
        .map(|p| Criterion::in_phase(p).count())
        .collect();
    assert_eq!(sizes, [9, 6, 7]);
}

#[test]
fn study_round_trips_through_files() {
    let (cases, transcripts) = synthetic_study([926, 925, 1021]);
    let dir = tempfile::tempdir().unwrap();
    write_dataset(dir.path(), &cases, &transcripts).unwrap();
    let data = load_dataset(dir.path()).unwrap();
    assert_eq!(data.cases.len(), 6);
    assert_eq!(data.transcripts.len(), 180);
    let scored = data.score().unwrap();

    let report = compare_groups(&scored, &CompareConfig::default()).unwrap();
    let means: Vec<String> = report.groups.iter().map(|g| format!("{:.2}", g.mean_total)).collect();
    assert_eq!(means, ["15.43", "15.42", "17.02"]);
    assert!(report.groups.iter().all(|g| g.case_solves == 60 && g.participants == 10));
    let p = |pair: &str| {
        report
            .comparisons
            .iter()
            .find(|c| c.pair.to_string() == pair)
            .unwrap()
            .total
            .as_ref()
            .unwrap()
            .p
    };
    assert!(p("A:B") > 0.9);
    assert!(p("A:C") < 0.0003);
    assert!(p("B:C") < 0.0003);
    assert!(p("AB:C") < 0.0003);

    assert_eq!(tidy_rows(&scored).len(), 180 * 22);
}
