//! Acceptance criteria for the workspace, one function each.
//!
//! Every check returns a one-line summary of what it measured, or the
//! first failure it found.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use guidetree_core::eval::{
    compare_groups, sample_size, score_transcript, Answer, CompareConfig, Criterion, Group,
    GroupPair, Phase, Score, ScoredTranscript, Transcript,
};
use guidetree_core::format::{
    parse_case, parse_history, parse_patient, parse_transcript, parse_tree, parse_tree_bytes,
    serialize_tree, FormatError,
};
use guidetree_core::layout::{layout, LayoutParams, Viewport};
use guidetree_core::nav::{replay, NavError, NavState};
use guidetree_core::stats::{bonferroni_threshold, welch_t};
use guidetree_core::testing::{
    branching_shapes, check_goto_oracle, inner_count, layout_violations, mutate_bytes,
    random_action, random_tree, shape_tree, synthetic_case, synthetic_study, write_dataset,
    TreeShape,
};
use guidetree_core::eval::load_dataset;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Deserialize;

pub type Outcome = Result<String, String>;

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

fn workers() -> usize {
    thread::available_parallelism().map_or(4, |n| n.get())
}

/// Runs `job(i)` for `i in 0..n` on all cores; stops at the first error.
fn par_for<T: Send>(n: usize, job: impl Fn(usize) -> Result<T, String> + Sync) -> Result<Vec<T>, String> {
    let next = AtomicUsize::new(0);
    let out: Mutex<Vec<(usize, T)>> = Mutex::new(Vec::with_capacity(n));
    let failed: Mutex<Option<String>> = Mutex::new(None);
    thread::scope(|s| {
        for _ in 0..workers() {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n || failed.lock().unwrap().is_some() {
                    break;
                }
                match job(i) {
                    Ok(v) => out.lock().unwrap().push((i, v)),
                    Err(e) => {
                        failed.lock().unwrap().get_or_insert(e);
                    }
                }
            });
        }
    });
    if let Some(e) = failed.into_inner().unwrap() {
        return Err(e);
    }
    let mut out = out.into_inner().unwrap();
    out.sort_by_key(|(i, _)| *i);
    Ok(out.into_iter().map(|(_, v)| v).collect())
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed > limit {
        return Err(format!("{what} took {:.1}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()));
    }
    Ok(())
}

pub fn navigation_oracle() -> Outcome {
    let start = Instant::now();
    let mut trees = Vec::new();
    for shape in branching_shapes(12) {
        for mask in 0..1u32 << inner_count(&shape) {
            trees.push((Arc::new(shape.clone()), mask));
        }
    }
    let checks = par_for(trees.len(), |i| {
        let (shape, mask) = &trees[i];
        check_goto_oracle(Arc::new(shape_tree(shape, *mask)))
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "exhaustive corpus")?;
    Ok(format!(
        "{} trees (<= 12 nodes), {} goto sequences, {:.1}s",
        trees.len(),
        checks.iter().sum::<usize>(),
        elapsed.as_secs_f64()
    ))
}

pub fn state_machine_invariants() -> Outcome {
    const SEQUENCES: usize = 10_000;
    let transitions = par_for(SEQUENCES, |i| {
        let mut rng = StdRng::seed_from_u64(i as u64);
        let shape = TreeShape {
            max_nodes: rng.random_range(3..60),
            max_fanout: rng.random_range(2..5),
            multi_ratio: rng.random_range(0.0..0.6),
            predicates: false,
        };
        let tree = Arc::new(random_tree(&mut rng, &shape));
        let mut state = NavState::new(Arc::clone(&tree));
        let mut applied = 0;
        for _ in 0..rng.random_range(1..50) {
            let action = random_action(&mut rng, &state);
            match state.apply(&action) {
                Ok(next) => {
                    let bad = next.invariant_violations();
                    if !bad.is_empty() {
                        return Err(format!("seed {i}, after {action:?}: {bad:?}"));
                    }
                    state = next;
                    applied += 1;
                }
                Err(NavError::UnknownNode { node }) if tree.get(&node).is_some() => {
                    return Err(format!("seed {i}: known node {node} reported unknown"));
                }
                Err(_) => {}
            }
        }
        let again = replay(Arc::clone(&tree), state.history()).map_err(|e| format!("seed {i}: replay: {e}"))?;
        if again != state {
            return Err(format!("seed {i}: replay differs"));
        }
        Ok(applied)
    })?;
    Ok(format!(
        "{SEQUENCES} sequences, {} transitions, all invariants held",
        transitions.iter().sum::<usize>()
    ))
}

pub fn layout_properties() -> Outcome {
    const TREES: usize = 400;
    let start = Instant::now();
    let largest = par_for(TREES, |i| {
        let mut rng = StdRng::seed_from_u64(10_000 + i as u64);
        let shape = TreeShape {
            max_nodes: rng.random_range(3..=500),
            max_fanout: rng.random_range(2..6),
            ..TreeShape::default()
        };
        let tree = Arc::new(random_tree(&mut rng, &shape));
        let viewport = Viewport::new(rng.random_range(200.0..2000.0), rng.random_range(150.0..1500.0))
            .map_err(|e| e.to_string())?;
        let params = LayoutParams::default();
        let mut state = NavState::new(Arc::clone(&tree));
        for step in 0..8 {
            let l = layout(&tree, &state, viewport, &params);
            let bad = layout_violations(&l, &state, &params);
            if !bad.is_empty() {
                return Err(format!("tree {i} ({} nodes), step {step}: {}", tree.node_count(), bad.join("; ")));
            }
            if step == 0 && l.nodes.iter().any(|n| n.scale != 1.0 || n.grayed) {
                return Err(format!("tree {i}: fresh layout is not neutral"));
            }
            for _ in 0..3 {
                if let Ok(next) = state.apply(&random_action(&mut rng, &state)) {
                    state = next;
                }
            }
        }
        Ok(tree.node_count())
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "layout corpus")?;
    Ok(format!(
        "{TREES} trees up to {} nodes, 8 states each, {:.1}s",
        largest.iter().max().unwrap_or(&0),
        elapsed.as_secs_f64()
    ))
}

pub fn format_round_trip() -> Outcome {
    const TREES: usize = 1_000;
    const FUZZ: usize = 10_000;
    let mut rng = StdRng::seed_from_u64(20_000);
    let mut docs = Vec::new();
    for i in 0..TREES {
        let shape = TreeShape {
            max_nodes: rng.random_range(3..80),
            max_fanout: rng.random_range(2..5),
            multi_ratio: rng.random_range(0.0..0.6),
            predicates: rng.random_bool(0.5),
        };
        let tree = random_tree(&mut rng, &shape);
        let text = serialize_tree(&tree);
        let back = parse_tree(&text).map_err(|e| format!("tree {i}: {e}"))?;
        if back != tree || back.parts() != tree.parts() {
            return Err(format!("tree {i}: parse(serialize(t)) != t"));
        }
        if serialize_tree(&back) != text {
            return Err(format!("tree {i}: serialization is not byte-stable"));
        }
        docs.push(text);
    }

    let others = [
        r#"{"format_version":1,"fields":{"SpO2":{"number":{"value":91,"unit":"%"}},"fever":{"boolean":true}}}"#,
        r#"{"format_version":1,"tree":"T1","actions":[{"kind":"answer","node":"n0","choices":["severe"]},{"kind":"goto","node":"n0"}]}"#,
        r#"{"format_version":1,"participant":"p1","group":"A","case":1,"answers":{"ekg":true}}"#,
    ];
    let mut outcomes = [0usize; 4];
    for k in 0..FUZZ {
        let input = if k % 4 == 3 {
            mutate_bytes(&mut rng, others[k % 3].as_bytes())
        } else {
            mutate_bytes(&mut rng, docs[k % docs.len()].as_bytes())
        };
        let result = std::panic::catch_unwind(|| {
            let tree = parse_tree_bytes(&input);
            let text = String::from_utf8_lossy(&input);
            let _ = (parse_patient(&text), parse_history(&text), parse_transcript(&text), parse_case(&text));
            tree
        })
        .map_err(|_| format!("fuzz input {k}: parser panicked"))?;
        let slot = match result {
            Ok(_) => 0,
            Err(FormatError::Syntax { line, column, .. }) if line >= 1 && column >= 1 => 1,
            Err(FormatError::Syntax { line, column, .. }) => {
                return Err(format!("fuzz input {k}: position {line}:{column}"))
            }
            Err(FormatError::Schema { .. }) => 2,
            Err(FormatError::Validation(_)) => 3,
        };
        outcomes[slot] += 1;
    }
    Ok(format!(
        "{TREES} trees round-trip byte-identically; {FUZZ} fuzz inputs: {} accepted, {} syntax, {} schema, {} validation errors",
        outcomes[0], outcomes[1], outcomes[2], outcomes[3]
    ))
}

pub fn scoring() -> Outcome {
    let case = synthetic_case(3);
    let gold = Transcript {
        participant: "gold".into(),
        group: Group::C,
        case: case.id,
        answers: case.gold.clone(),
        demographics: None,
    };
    let total = |t: &Transcript| score_transcript(&case, t).map(|s| s.total()).map_err(|e| e.to_string());
    let mut wrong = gold.clone();
    for a in wrong.answers.values_mut() {
        *a = a.wrong();
    }
    let mut one_off = gold.clone();
    if let Some(a) = one_off.answers.values_mut().find(|a| matches!(a, Answer::Bool(_))) {
        *a = a.wrong();
    }
    let sizes: Vec<usize> = [Phase::InitialEvaluation, Phase::InitialDecision, Phase::Reevaluation]
        .into_iter()
        .map(|p| Criterion::in_phase(p).count())
        .collect();
    let got = (total(&gold)?, total(&wrong)?, total(&one_off)?);
    if got != (22, 0, 21) || sizes != [9, 6, 7] {
        return Err(format!("totals {got:?}, partition {sizes:?}"));
    }
    Ok("gold 22, all wrong 0, one flipped 21; partition 9/6/7".into())
}

#[derive(Deserialize)]
struct Fixture {
    a: Vec<f64>,
    b: Vec<f64>,
    t: f64,
    df: f64,
    p: f64,
}

pub fn statistics() -> Outcome {
    let fixtures: Vec<Fixture> =
        serde_json::from_str(include_str!("../../core/tests/fixtures/welch.json")).map_err(|e| e.to_string())?;
    let (mut dt, mut dp) = (0f64, 0f64);
    for (i, f) in fixtures.iter().enumerate() {
        let r = welch_t(&f.a, &f.b).map_err(|e| format!("fixture {i}: {e}"))?;
        dt = dt.max((r.t - f.t).abs());
        dp = dp.max((r.p - f.p).abs());
        if (r.df - f.df).abs() > 1e-9 * f.df.max(1.0) {
            return Err(format!("fixture {i}: df {} vs {}", r.df, f.df));
        }
    }
    if fixtures.len() != 50 || dt > 1e-12 || dp > 1e-9 {
        return Err(format!("{} fixtures, max |dt| {dt:e}, max |dp| {dp:e}", fixtures.len()));
    }
    let threshold = bonferroni_threshold(0.05, 22).map_err(|e| e.to_string())?;
    let shown = format!("{threshold:.4}");
    if threshold != 0.05 / 22.0 || shown != "0.0023" {
        return Err(format!("threshold {threshold} shown as {shown}"));
    }
    Ok(format!(
        "50 fixtures, max |dt| {dt:.1e}, max |dp| {dp:.1e}; threshold {threshold:.7} rounds to {shown}"
    ))
}

/// Published per-criterion means (AB, C), criteria in table order, and
/// which rows carry the corrected-significance mark.
pub const TABLE3: [(f64, f64, bool); Criterion::COUNT] = [
    (0.53, 0.73, false),
    (0.98, 0.98, false),
    (1.0, 1.0, false),
    (0.96, 0.95, false),
    (0.43, 0.45, false),
    (0.31, 0.57, true),
    (0.61, 0.72, false),
    (0.25, 0.0, true),
    (0.48, 0.63, false),
    (0.99, 1.0, false),
    (0.86, 0.92, false),
    (0.98, 0.92, false),
    (0.85, 0.87, false),
    (0.70, 0.98, true),
    (0.58, 0.82, true),
    (0.73, 0.93, true),
    (0.73, 0.82, false),
    (0.18, 0.25, false),
    (0.88, 0.97, false),
    (0.98, 0.98, false),
    (0.96, 1.0, false),
    (0.80, 0.82, false),
];

/// 120 AB and 60 C case-solves whose per-criterion success counts are
/// the published means times the group size, rounded.
pub fn table3_dataset() -> Vec<ScoredTranscript> {
    let mut rows = Vec::new();
    let mut add = |group: Group, n: usize, offset: usize| {
        for k in 0..n {
            let mut points = [0u8; Criterion::COUNT];
            for (c, &(ab, cm, _)) in TABLE3.iter().enumerate() {
                let mean = if group == Group::C { cm } else { ab };
                let ones = (mean * n as f64).round() as usize;
                points[c] = u8::from(k < ones);
            }
            let who = offset + k;
            rows.push(ScoredTranscript {
                participant: format!("{group:?}{:02}", who / 6),
                group: if group == Group::C { Group::C } else if who < 60 { Group::A } else { Group::B },
                case: (who % 6) as u32 + 1,
                score: Score { points },
            });
        }
    };
    add(Group::A, 120, 0);
    add(Group::C, 60, 0);
    rows
}

pub fn table3_reconstruction() -> Outcome {
    let pair: GroupPair = "AB:C".parse().map_err(|e: guidetree_core::eval::EvalError| e.to_string())?;
    let config = CompareConfig {
        pairs: vec![pair],
        ..CompareConfig::default()
    };
    let report = compare_groups(&table3_dataset(), &config).map_err(|e| e.to_string())?;
    let rows = &report.comparisons[0].criteria;
    let row = |c: Criterion| &rows[c.index()];
    let p = |c: Criterion| row(c).test.as_ref().map(|t| t.p).ok_or(format!("{c:?}: no test"));

    let anticoag = p(Criterion::Anticoagulant)?;
    let troponin = p(Criterion::Troponin)?;
    let ldh = p(Criterion::Ldh)?;
    let mut problems = Vec::new();
    if !(3.6e-10..=3.6e-8).contains(&anticoag) {
        problems.push(format!("Anticoagulant p {anticoag:.3e} not within 10x of 3.6e-9"));
    }
    if !(0.0011 / 3.0..=0.0011 * 3.0).contains(&troponin) || !row(Criterion::Troponin).significant {
        problems.push(format!("Troponin p {troponin:.3e} not within 3x of 0.0011 or not flagged"));
    }
    if row(Criterion::Ldh).significant {
        problems.push(format!("LDH p {ldh:.3} flagged"));
    }
    let agree = rows.iter().zip(TABLE3.iter()).filter(|(r, t)| r.significant == t.2).count();
    if !problems.is_empty() {
        return Err(problems.join("; "));
    }
    Ok(format!(
        "Anticoagulant p {anticoag:.2e}, Troponin p {troponin:.2e} (flagged), LDH p {ldh:.2} (not flagged); \
         corrected flags agree on {agree}/22 rows"
    ))
}

pub fn group_comparison() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (cases, transcripts) = synthetic_study([926, 925, 1021]);
    write_dataset(dir.path(), &cases, &transcripts).map_err(|e| e.to_string())?;
    let scored = load_dataset(dir.path())
        .and_then(|d| d.score())
        .map_err(|e| e.to_string())?;
    let report = compare_groups(&scored, &CompareConfig::default()).map_err(|e| e.to_string())?;
    let means: Vec<String> = report.groups.iter().map(|g| format!("{:.2}", g.mean_total)).collect();
    if means != ["15.43", "15.42", "17.02"] {
        return Err(format!("group means {means:?}"));
    }
    let p = |pair: &str| {
        report
            .comparisons
            .iter()
            .find(|c| c.pair.to_string() == pair)
            .and_then(|c| c.total.as_ref())
            .map(|t| t.p)
            .ok_or(format!("{pair}: no total test"))
    };
    let (ab, ac, bc) = (p("A:B")?, p("A:C")?, p("B:C")?);
    if !(ab > 0.9 && ac < 0.0003 && bc < 0.0003) {
        return Err(format!("A:B p {ab:.3}, A:C p {ac:.2e}, B:C p {bc:.2e}"));
    }
    Ok(format!(
        "means {} / {} / {}; A:B p {ab:.3}, A:C p {ac:.2e}, B:C p {bc:.2e}",
        means[0], means[1], means[2]
    ))
}

pub fn sample_size_design() -> Outcome {
    let n = sample_size(0.05, 0.8, 2.0, 4.0).map_err(|e| e.to_string())?;
    match &n.note {
        Some(note) if n.per_group == 63 && note.contains("60") => {
            Ok(format!("63 per group (exact {:.3}); note: {note}", n.exact))
        }
        _ => Err(format!("{} per group, note {:?}", n.per_group, n.note)),
    }
}

pub fn service() -> Outcome {
    use guidetree_service::testing::{crash_restart_check, privacy_leaks, race_once, triage_tree, Client};
    use guidetree_service::AppState;

    let rt = tokio::runtime::Builder::new_multi_thread()
        .worker_threads(4)
        .enable_all()
        .build()
        .map_err(|e| e.to_string())?;
    rt.block_on(async {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut rng = StdRng::seed_from_u64(30_000);
        let run = crash_restart_check(&mut rng, dir.path(), 100).await?;
        let leaks = privacy_leaks(dir.path(), &run.submitted)?;
        if !leaks.is_empty() {
            return Err(format!("persisted patient tokens: {leaks:?}"));
        }

        let race_dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let trees = std::collections::BTreeMap::from([("T1".to_owned(), Arc::new(triage_tree()))]);
        let client = Client::new(AppState::with_trees(trees, race_dir.path()).map_err(|e| e.to_string())?);
        const RACES: usize = 200;
        for i in 0..RACES {
            let (a, b) = race_once(&client).await;
            let conflicts = [a, b].iter().filter(|s| s.as_u16() == 409).count();
            let ok = [a, b].iter().filter(|s| s.as_u16() == 200).count();
            if (ok, conflicts) != (1, 1) {
                return Err(format!("race {i}: statuses {a} and {b}"));
            }
        }
        Ok(format!(
            "100 sessions identical after crash and restart; {} autonav calls, {} submitted tokens, 0 found in the log; \
             {RACES}/{RACES} races gave exactly one 409",
            run.autonav_calls,
            run.submitted.len()
        ))
    })
}

pub const CRITERIA: &[Check] = &[
    Check { name: "navigation oracle (exhaustive, <= 12 nodes)", run: navigation_oracle },
    Check { name: "state-machine invariants (10,000 sequences)", run: state_machine_invariants },
    Check { name: "layout properties (up to 500 nodes)", run: layout_properties },
    Check { name: "format round-trip and fuzzing", run: format_round_trip },
    Check { name: "scoring", run: scoring },
    Check { name: "statistics fixtures and correction", run: statistics },
    Check { name: "per-criterion table reconstruction", run: table3_reconstruction },
    Check { name: "group comparison shape", run: group_comparison },
    Check { name: "sample size", run: sample_size_design },
    Check { name: "service", run: service },
];
