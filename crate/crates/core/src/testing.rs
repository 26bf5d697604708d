//! Random trees and action sequences for property tests and fuzzing.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;
use std::{fs, io};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::eval::{Answer, CaseStages, ClinicalCase, Criterion, Group, Transcript};
use crate::format::{serialize_case, serialize_transcript};
use crate::indexset::IndexSet;
use crate::layout::{Layout, LayoutParams};
use crate::nav::{replay, Action, NavError, NavState};
use crate::predicate::{Comparator, Constant, DataPredicate, FieldDef};
use crate::tree::{Edge, EdgeSymbol, Node, NodeKind, TreeDef, TreeParts};

#[derive(Debug, Clone, Copy)]
pub struct TreeShape {
    /// Upper bound on the node count (at least 3).
    pub max_nodes: usize,
    /// Largest number of answers per question.
    pub max_fanout: usize,
    /// Probability that a question is multi-choice.
    pub multi_ratio: f64,
    /// Attach random predicates and a field dictionary.
    pub predicates: bool,
}

impl Default for TreeShape {
    fn default() -> Self {
        TreeShape {
            max_nodes: 20,
            max_fanout: 3,
            multi_ratio: 0.3,
            predicates: false,
        }
    }
}

const LABELS: &[&str] = &[
    "Severity?",
    "Oxygen need",
    "Risk factors",
    "œdème",
    "D-dimères > 500 µg/L",
    "ICU admission",
    "Anticoagulation",
    "Réévaluation à 24 h",
    "Plan de soins",
];

pub fn field_dictionary() -> Vec<FieldDef> {
    vec![
        FieldDef::number("SpO2", Some("%")),
        FieldDef::number("age", Some("years")),
        FieldDef::boolean("fever"),
        FieldDef::enumeration("sex", &["female", "male"]),
    ]
}

fn random_predicate(rng: &mut impl Rng, depth: usize) -> DataPredicate {
    let roll = if depth >= 2 { 0 } else { rng.random_range(0..6) };
    match roll {
        0..=2 => match rng.random_range(0..4) {
            0 => DataPredicate::cmp("SpO2", Comparator::Lt, f64::from(rng.random_range(85..98))),
            1 => DataPredicate::atom(
                "age",
                *[Comparator::Ge, Comparator::Gt, Comparator::Le].choose(rng).unwrap(),
                Constant::Number(f64::from(rng.random_range(18..90))),
            ),
            2 => DataPredicate::flag("fever"),
            _ => DataPredicate::token("sex", *["female", "male"].choose(rng).unwrap()),
        },
        3 => DataPredicate::Not(Box::new(random_predicate(rng, depth + 1))),
        4 => DataPredicate::All(vec![random_predicate(rng, depth + 1), random_predicate(rng, depth + 1)]),
        _ => DataPredicate::Any(vec![random_predicate(rng, depth + 1), random_predicate(rng, depth + 1)]),
    }
}

/// A random valid tree with between 3 and `shape.max_nodes` nodes.
pub fn random_tree_parts(rng: &mut impl Rng, shape: &TreeShape) -> TreeParts {
    let max_nodes = shape.max_nodes.max(3);
    let target = rng.random_range(3..=max_nodes);
    // (id, children) in creation order; node 0 is the root.
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut leaves = vec![0usize];
    while let Some(pos) = (!leaves.is_empty()).then(|| rng.random_range(0..leaves.len())) {
        let room = target.saturating_sub(children.len());
        if room < 2 {
            break;
        }
        let k = rng.random_range(2..=shape.max_fanout.max(2).min(room));
        let v = leaves.swap_remove(pos);
        for _ in 0..k {
            let c = children.len();
            children.push(Vec::new());
            children[v].push(c);
            leaves.push(c);
        }
    }

    let id_of = |i: usize, kids: &[usize]| {
        if kids.is_empty() {
            format!("r{i}")
        } else {
            format!("q{i}")
        }
    };
    let ids: Vec<String> = children.iter().enumerate().map(|(i, k)| id_of(i, k)).collect();
    let mut nodes = Vec::with_capacity(children.len());
    let mut edges = Vec::new();
    for (i, kids) in children.iter().enumerate() {
        let label = LABELS.choose(rng).unwrap();
        if kids.is_empty() {
            let mut node = Node::recommendation(&ids[i], label);
            if rng.random_bool(0.3) {
                node.detail = Some(format!("Details for {}", ids[i]));
            }
            nodes.push(node);
            continue;
        }
        let multi = rng.random_bool(shape.multi_ratio);
        let mut node = if multi {
            Node::multi(&ids[i], label)
        } else {
            Node::single(&ids[i], label)
        };
        let yes_no = !multi && kids.len() == 2 && rng.random_bool(0.5);
        let answers: Vec<String> = (0..kids.len())
            .map(|k| match (yes_no, k) {
                (true, 0) => "Yes".to_owned(),
                (true, _) => "No".to_owned(),
                _ => format!("choice {k}"),
            })
            .collect();
        for (k, &c) in kids.iter().enumerate() {
            let symbol = match (multi, rng.random_range(0..3)) {
                (_, 0) => EdgeSymbol::None,
                (false, _) => EdgeSymbol::RadioUnchecked,
                (true, _) => EdgeSymbol::RadioChecked,
            };
            edges.push(Edge::new(&ids[i], &answers[k], &ids[c]).with_symbol(symbol));
        }
        if shape.predicates && !multi && rng.random_bool(0.6) {
            let yes = answers.choose(rng).unwrap().clone();
            node.predicate = Some(random_predicate(rng, 0));
            if !(yes_no && yes == "Yes") {
                node.predicate_true_answer = Some(yes.clone());
            }
            if kids.len() > 2 || (yes_no && yes == "No") {
                let no = answers.iter().find(|a| **a != yes).unwrap().clone();
                node.predicate_false_answer = Some(no);
            }
        }
        nodes.push(node);
    }
    nodes.shuffle(rng);

    TreeParts {
        id: format!("random-{}", rng.random_range(0..1_000_000u32)),
        title: LABELS.choose(rng).unwrap().to_string(),
        root: ids[0].as_str().into(),
        fields: if shape.predicates { field_dictionary() } else { Vec::new() },
        nodes,
        edges,
    }
}

pub fn random_tree(rng: &mut impl Rng, shape: &TreeShape) -> TreeDef {
    TreeDef::new(random_tree_parts(rng, shape)).expect("generated trees are valid")
}

/// A random action against `state`: mostly valid answers and gotos, with
/// occasional resets and invalid requests.
pub fn random_action(rng: &mut impl Rng, state: &NavState) -> Action {
    let tree = state.tree();
    let open: Vec<usize> = state.open_questions().collect();
    let any_node = |rng: &mut dyn rand::RngCore| {
        let i = rng.random_range(0..tree.node_count());
        tree.node(i).id.clone()
    };
    match rng.random_range(0..20) {
        0 => Action::Reset,
        1..=5 => Action::Goto { node: any_node(rng) },
        6 => {
            // Probably invalid: arbitrary node, arbitrary label.
            Action::Answer {
                node: any_node(rng),
                choices: Arc::from(["choice 1".to_owned()]),
            }
        }
        _ if open.is_empty() => Action::Goto { node: any_node(rng) },
        _ => {
            let q = *open.choose(rng).unwrap();
            let mut answers: Vec<String> = tree
                .out_edges(q)
                .iter()
                .map(|&e| tree.edge(e).answer.clone())
                .collect();
            answers.shuffle(rng);
            let take = match tree.node(q).kind {
                NodeKind::MultiChoice => rng.random_range(1..=answers.len()),
                _ => 1,
            };
            answers.truncate(take);
            Action::Answer {
                node: tree.node(q).id.clone(),
                choices: answers.into(),
            }
        }
    }
}

/// A corrupted copy of `doc` for parser fuzzing: byte flips, truncation,
/// splices of JSON punctuation, or arbitrary bytes.
pub fn mutate_bytes(rng: &mut impl Rng, doc: &[u8]) -> Vec<u8> {
    const TOKENS: &[&[u8]] = &[
        b"{", b"}", b"[", b"]", b",", b":", b"\"", b"null", b"true", b"-1", b"1e999",
        b"\"kind\"", b"\"multi\"", b"\\u0000", b"\xff", b"\xc3", b"\"format_version\": 2",
    ];
    let mut out = doc.to_vec();
    let rounds = rng.random_range(1..=4);
    for _ in 0..rounds {
        let at = if out.is_empty() { 0 } else { rng.random_range(0..out.len()) };
        match rng.random_range(0..6) {
            0 if !out.is_empty() => out[at] = rng.random(),
            1 => out.truncate(at),
            2 => {
                let tok = TOKENS.choose(rng).unwrap();
                out.splice(at..at, tok.iter().copied());
            }
            3 if !out.is_empty() => {
                let end = rng.random_range(at..=out.len());
                out.drain(at..end);
            }
            4 => {
                let len = rng.random_range(0..64);
                out = (0..len).map(|_| rng.random()).collect();
            }
            _ => {
                // Duplicate a slice, which often repeats a key.
                let end = rng.random_range(at..=out.len().min(at + 40));
                let copy = out[at..end].to_vec();
                out.splice(at..at, copy);
            }
        }
    }
    out
}

/// Checks a layout against its geometric contract: no overlapping boxes,
/// children below parents, fit to the viewport, scales non-increasing in
/// distance, current nodes at full scale, and neutrality before any
/// selection.
pub fn layout_violations(layout: &Layout, state: &NavState, params: &LayoutParams) -> Vec<String> {
    const EPS: f64 = 1e-9;
    let tree = state.tree();
    let mut out = Vec::new();
    let boxes = &layout.nodes;
    let (vw, vh) = (layout.viewport.width(), layout.viewport.height());
    for (i, a) in boxes.iter().enumerate() {
        if a.x < -EPS || a.y < -EPS || a.x + a.width > vw + EPS || a.y + a.height > vh + EPS {
            out.push(format!("{} leaves the viewport", a.id));
        }
        if !(a.scale >= params.min_scale && a.scale <= 1.0) {
            out.push(format!("{} has scale {}", a.id, a.scale));
        }
        for b in &boxes[i + 1..] {
            let overlap_x = a.x.max(b.x) < (a.x + a.width).min(b.x + b.width) - EPS;
            let overlap_y = a.y.max(b.y) < (a.y + a.height).min(b.y + b.height) - EPS;
            if overlap_x && overlap_y {
                out.push(format!("{} overlaps {}", a.id, b.id));
            }
        }
    }
    for e in 0..tree.edges().len() {
        let (p, c) = (&boxes[tree.edge_source(e)], &boxes[tree.edge_target(e)]);
        if !(c.y > p.y + p.height - EPS) {
            out.push(format!("{} is not below its parent {}", c.id, p.id));
        }
    }
    let b = &layout.bounds;
    if b.x < -EPS || b.y < -EPS || b.x + b.width > vw + EPS || b.y + b.height > vh + EPS {
        out.push("bounding box exceeds the viewport".to_owned());
    }
    let mut by_distance: Vec<(u32, f64)> = boxes.iter().map(|n| (n.distance, n.scale)).collect();
    by_distance.sort_by(|x, y| x.partial_cmp(y).unwrap());
    if by_distance.windows(2).any(|w| w[1].1 > w[0].1) {
        out.push("scale increases with distance".to_owned());
    }
    for f in state.frontier_indices().iter() {
        if boxes[f].scale != 1.0 {
            out.push(format!("current node {} has scale {}", boxes[f].id, boxes[f].scale));
        }
    }
    if state.selected_indices().is_empty() && boxes.iter().any(|n| n.scale != 1.0 || n.grayed) {
        out.push("fresh layout is not neutral".to_owned());
    }
    out
}

fn categorical_vocabulary(c: Criterion) -> &'static [&'static str] {
    match c {
        Criterion::LevelOfCare => &["ward", "icu", "home"],
        Criterion::ClinicalStatus => &["improving", "stable", "worsening"],
        Criterion::ReevaluationDecision => &["continue", "escalate", "discharge"],
        _ => &["stay", "discharge_home", "transfer"],
    }
}

/// A clinical case with a complete, deterministic gold standard.
pub fn synthetic_case(id: u32) -> ClinicalCase {
    let gold = Criterion::ALL
        .into_iter()
        .map(|c| {
            let k = c.index() + id as usize;
            let answer = if c.is_categorical() {
                let vocab = categorical_vocabulary(c);
                Answer::Token(vocab[k % vocab.len()].to_owned())
            } else {
                Answer::Bool(k % 3 != 0)
            };
            (c, answer)
        })
        .collect();
    ClinicalCase {
        id,
        title: format!("Case {id}"),
        stages: CaseStages {
            admission: "Admission findings.".into(),
            post_24h: "Findings after 24 hours.".into(),
            discharge: "Status at discharge.".into(),
        },
        gold,
    }
}

/// A transcript answering exactly `correct` criteria right, chosen as a
/// run starting at criterion `start` (wrapping around).
pub fn transcript_with_score(
    case: &ClinicalCase,
    participant: &str,
    group: Group,
    correct: usize,
    start: usize,
) -> Transcript {
    let answers = Criterion::ALL
        .into_iter()
        .map(|c| {
            let gold = &case.gold[&c];
            let offset = (c.index() + Criterion::COUNT - start % Criterion::COUNT) % Criterion::COUNT;
            let answer = if offset < correct { gold.clone() } else { gold.wrong() };
            (c, answer)
        })
        .collect();
    Transcript {
        participant: participant.to_owned(),
        group,
        case: case.id,
        answers,
        demographics: None,
    }
}

/// A study of six cases and ten participants per group, each solving
/// every case, whose total scores in group `g` sum to `sums[g]`.
///
/// Totals are the group's base value plus a fixed zero-sum spread of
/// -3..=3, so every group has a sample SD near 2.
pub fn synthetic_study(sums: [u32; 3]) -> (Vec<ClinicalCase>, Vec<Transcript>) {
    const PER_GROUP: u32 = 60;
    const SPREAD: [i64; 6] = [-3, -2, -1, 1, 2, 3];
    let cases: Vec<ClinicalCase> = (1..=6).map(synthetic_case).collect();
    let mut transcripts = Vec::new();
    for (g, group) in Group::ALL.into_iter().enumerate() {
        let (base, extra) = (sums[g] / PER_GROUP, sums[g] % PER_GROUP);
        for i in 0..PER_GROUP as usize {
            let total = i64::from(base) + i64::from((i as u32) < extra) + SPREAD[(i / 6 + i) % 6];
            let total = total.clamp(0, Criterion::COUNT as i64) as usize;
            let (p, c) = (i / 6, i % 6);
            transcripts.push(transcript_with_score(
                &cases[c],
                &format!("{group}{p:02}"),
                group,
                total,
                i * 5,
            ));
        }
    }
    (cases, transcripts)
}

/// Writes a dataset directory: `cases/case-N.case.json` and
/// `transcripts/<participant>-case-N.json`.
pub fn write_dataset(dir: &Path, cases: &[ClinicalCase], transcripts: &[Transcript]) -> io::Result<()> {
    fs::create_dir_all(dir.join("cases"))?;
    fs::create_dir_all(dir.join("transcripts"))?;
    for c in cases {
        fs::write(dir.join("cases").join(format!("case-{}.case.json", c.id)), serialize_case(c))?;
    }
    for t in transcripts {
        let name = format!("{}-case-{}.json", t.participant, t.case);
        fs::write(dir.join("transcripts").join(name), serialize_transcript(t))?;
    }
    Ok(())
}

/// Ordered tree shape as child lists in preorder; node 0 is the root.
pub type Shape = Vec<Vec<usize>>;

#[derive(Clone)]
enum RawShape {
    Leaf,
    Inner(Vec<RawShape>),
}

fn raw_trees(n: usize, memo: &mut BTreeMap<usize, Vec<RawShape>>) -> Vec<RawShape> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(RawShape::Leaf);
    } else {
        for forest in raw_forests(n - 1, 2, memo) {
            out.push(RawShape::Inner(forest));
        }
    }
    memo.insert(n, out.clone());
    out
}

/// Sequences of at least `min_trees` trees with `n` nodes in total.
fn raw_forests(n: usize, min_trees: usize, memo: &mut BTreeMap<usize, Vec<RawShape>>) -> Vec<Vec<RawShape>> {
    if n == 0 {
        return if min_trees == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n {
        let heads = raw_trees(first, memo);
        let tails = raw_forests(n - first, min_trees.saturating_sub(1), memo);
        for h in &heads {
            for t in &tails {
                let mut f = Vec::with_capacity(t.len() + 1);
                f.push(h.clone());
                f.extend(t.iter().cloned());
                out.push(f);
            }
        }
    }
    out
}

fn flatten(raw: &RawShape, shape: &mut Shape) -> usize {
    let v = shape.len();
    shape.push(Vec::new());
    if let RawShape::Inner(kids) = raw {
        for k in kids {
            let c = flatten(k, shape);
            shape[v].push(c);
        }
    }
    v
}

/// Every ordered tree shape with 3 to `max_nodes` nodes in which each inner
/// node has at least two children.
pub fn branching_shapes(max_nodes: usize) -> Vec<Shape> {
    let mut memo = BTreeMap::new();
    let mut out = Vec::new();
    for n in 3..=max_nodes {
        for raw in raw_trees(n, &mut memo) {
            let mut shape = Vec::with_capacity(n);
            flatten(&raw, &mut shape);
            out.push(shape);
        }
    }
    out
}

/// Builds the tree for `shape`, making inner node number `k` (in preorder)
/// multi-choice when bit `k` of `multi_mask` is set.
pub fn shape_tree(shape: &Shape, multi_mask: u32) -> TreeDef {
    let id = |v: usize| {
        if shape[v].is_empty() {
            format!("r{v}")
        } else {
            format!("n{v}")
        }
    };
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut inner = 0;
    for (v, kids) in shape.iter().enumerate() {
        if kids.is_empty() {
            nodes.push(Node::recommendation(&id(v), "rec"));
            continue;
        }
        let multi = multi_mask & (1 << inner) != 0;
        inner += 1;
        nodes.push(if multi {
            Node::multi(&id(v), "q")
        } else {
            Node::single(&id(v), "q")
        });
        for (k, &c) in kids.iter().enumerate() {
            edges.push(Edge::new(&id(v), &format!("a{k}"), &id(c)));
        }
    }
    TreeDef::new(TreeParts {
        id: "shape".into(),
        title: String::new(),
        root: id(0).as_str().into(),
        fields: Vec::new(),
        nodes,
        edges,
    })
    .expect("shapes are valid trees")
}

pub fn inner_count(shape: &Shape) -> usize {
    shape.iter().filter(|k| !k.is_empty()).count()
}

/// Every position reachable from a fresh session by answers alone, each
/// with the first answer history found for it.
pub fn reachable_states(tree: Arc<TreeDef>) -> Vec<NavState> {
    let mut seen = BTreeSet::new();
    let start = NavState::new(tree);
    seen.insert(start.selected_indices().clone());
    let mut queue = vec![start];
    let mut out = Vec::new();
    while let Some(state) = queue.pop() {
        let tree = Arc::clone(state.tree());
        for q in state.open_questions().collect::<Vec<_>>() {
            let answers: Vec<&str> = tree.out_edges(q).iter().map(|&e| tree.edge(e).answer.as_str()).collect();
            let choice_sets: Vec<Vec<&str>> = match tree.node(q).kind {
                NodeKind::MultiChoice => (1u32..(1 << answers.len()))
                    .map(|m| (0..answers.len()).filter(|k| m & (1 << k) != 0).map(|k| answers[k]).collect())
                    .collect(),
                _ => answers.iter().map(|a| vec![*a]).collect(),
            };
            for choices in choice_sets {
                let next = state.answer(tree.node(q).id.as_str(), &choices).expect("valid answer");
                if seen.insert(next.selected_indices().clone()) {
                    queue.push(next);
                }
            }
        }
        out.push(state);
    }
    out
}

/// Checks every goto from every answer-reachable position of `tree`
/// against an explicit construction: backward gotos against replaying the
/// history without the answers given inside the target's subtree, forward
/// gotos against answering each question on the path. Returns the number
/// of (position, target) pairs checked.
pub fn check_goto_oracle(tree: Arc<TreeDef>) -> Result<usize, String> {
    let n = tree.node_count();
    let mut checked = 0;
    for state in reachable_states(Arc::clone(&tree)) {
        // Nodes a goto can land on without answering anything new.
        let anchored: Vec<bool> = (0..n)
            .map(|v| v == tree.root_index() || tree.parent_edge(v).is_some_and(|e| state.is_selected(e)))
            .collect();
        let answered: Vec<usize> = state
            .history()
            .iter()
            .map(|a| tree.index_of(a.node().expect("answers name a node").as_str()).unwrap())
            .collect();
        // Backward expectations depend only on which answers survive.
        let mut replays: BTreeMap<IndexSet, NavState> = BTreeMap::new();
        let mut path = Vec::new();
        for t in 0..n {
            let target = tree.node(t).id.as_str();
            let got = state.apply(&Action::Goto { node: tree.node(t).id.clone() });
            let expected = if anchored[t] {
                let keep: IndexSet = (0..answered.len())
                    .filter(|&k| !tree.is_descendant(answered[k], t))
                    .collect();
                match replays.get(&keep) {
                    Some(s) => Ok(s.clone()),
                    None => {
                        let kept: Vec<Action> = state
                            .history()
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| keep.contains(k))
                            .map(|(_, a)| a.clone())
                            .collect();
                        let s = replay(Arc::clone(&tree), &kept)
                            .map_err(|e| format!("filtered replay failed: {e:?}"))?;
                        replays.insert(keep, s.clone());
                        Ok(s)
                    }
                }
            } else {
                // Climb to the nearest ancestor on the current paths.
                path.clear();
                let mut v = t;
                while let Some(p) = tree.parent(v) {
                    path.push((p, v));
                    v = p;
                    if anchored[v] {
                        break;
                    }
                }
                if state.frontier_indices().contains(v) {
                    let mut s = state.clone();
                    for &(p, c) in path.iter().rev() {
                        let e = tree.parent_edge(c).expect("path edges exist");
                        debug_assert_eq!(tree.edge_source(e), p);
                        s.apply_mut(&Action::Answer {
                            node: tree.node(p).id.clone(),
                            choices: Arc::from([tree.edge(e).answer.clone()]),
                        })
                        .map_err(|e| format!("explicit answer failed: {e:?}"))?;
                    }
                    Ok(s)
                } else {
                    Err(NavError::Unreachable { node: tree.node(t).id.clone() })
                }
            };
            let same = match (&got, &expected) {
                (Ok(a), Ok(b)) => a.same_position(b),
                (Err(a), Err(b)) => a == b,
                _ => false,
            };
            if !same {
                return Err(format!(
                    "tree {:?}: goto {target} from history {:?}: got {:?}, expected {:?}",
                    tree.edges(),
                    state.history(),
                    got.map(|s| (s.selected_indices().clone(), s.frontier_indices().clone())),
                    expected.map(|s| (s.selected_indices().clone(), s.frontier_indices().clone())),
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;
    use crate::tree::validate_tree;

    #[test]
    fn generated_trees_validate() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let shape = TreeShape {
                predicates: rng.random_bool(0.5),
                ..TreeShape::default()
            };
            let parts = random_tree_parts(&mut rng, &shape);
            let report = validate_tree(&parts);
            assert!(report.is_empty(), "{report}");
            assert!(parts.nodes.len() <= shape.max_nodes);
        }
    }

    #[test]
    fn shape_counts() {
        // Ordered trees without unary nodes, by node count: 1, 1, 3, 6, 15.
        let shapes = branching_shapes(7);
        let count = |n: usize| shapes.iter().filter(|s| s.len() == n).count();
        assert_eq!([count(3), count(4), count(5), count(6), count(7)], [1, 1, 3, 6, 15]);
    }

    #[test]
    fn goto_oracle_on_small_trees() {
        for shape in branching_shapes(7) {
            for mask in 0..1u32 << inner_count(&shape) {
                check_goto_oracle(Arc::new(shape_tree(&shape, mask))).unwrap();
            }
        }
    }
}
