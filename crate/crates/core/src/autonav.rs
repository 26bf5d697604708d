//! Semi-automatic navigation from entered patient data.

use serde::Serialize;

use crate::nav::{Action, NavState};
use crate::predicate::{eval_predicate, PatientRecord, PredicateError, Truth};
use crate::tree::{NodeId, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Only recommendations remain current.
    NoOpenQuestions,
    /// Some open question's predicate could not be decided.
    MissingData,
    /// Open questions remain, but none carries a predicate.
    NoPredicate,
    /// Only multi-choice questions remain; those are always answered by hand.
    MultiChoiceStop,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutoNavStep {
    pub node: NodeId,
    pub answer: String,
    pub verdict: Truth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutoNavTrace {
    pub steps: Vec<AutoNavStep>,
    pub stop: StopReason,
}

impl AutoNavTrace {
    /// The answers as navigation actions, in application order.
    pub fn actions(&self) -> Vec<Action> {
        self.steps
            .iter()
            .map(|s| Action::auto(s.node.as_str(), &s.answer))
            .collect()
    }
}

/// Answers every current single-choice question whose predicate the record
/// decides, repeating until nothing more can be answered.
///
/// Questions are visited in declaration order. The record is checked
/// against the tree's field dictionary first; on any error the input
/// state is left as it was and no partial trace is returned.
pub fn auto_advance(
    state: &NavState,
    record: &PatientRecord,
) -> Result<(NavState, AutoNavTrace), PredicateError> {
    let tree = state.tree().clone();
    record.check(tree.fields())?;

    let mut current = state.clone();
    let mut steps = Vec::new();
    loop {
        let mut missing = false;
        let mut no_predicate = false;
        let mut open = 0;
        let mut next = None;
        for q in current.open_questions() {
            open += 1;
            let node = tree.node(q);
            if node.kind == NodeKind::MultiChoice {
                continue;
            }
            let Some(predicate) = &node.predicate else {
                no_predicate = true;
                continue;
            };
            let verdict = eval_predicate(predicate, record)?;
            let (yes, no) = tree
                .predicate_edges(q)
                .expect("validated trees bind both predicate answers");
            match verdict {
                Truth::True => next = Some((q, yes, verdict)),
                Truth::False => next = Some((q, no, verdict)),
                Truth::Unknown => missing = true,
            }
            if next.is_some() {
                break;
            }
        }
        let Some((q, edge, verdict)) = next else {
            let stop = if open == 0 {
                StopReason::NoOpenQuestions
            } else if missing {
                StopReason::MissingData
            } else if no_predicate {
                StopReason::NoPredicate
            } else {
                StopReason::MultiChoiceStop
            };
            return Ok((current, AutoNavTrace { steps, stop }));
        };
        let node = &tree.node(q).id;
        let answer = &tree.edge(edge).answer;
        current = current
            .apply(&Action::auto(node.as_str(), answer))
            .expect("open question with a bound edge accepts the answer");
        steps.push(AutoNavStep {
            node: node.clone(),
            answer: answer.clone(),
            verdict,
        });
    }
}
