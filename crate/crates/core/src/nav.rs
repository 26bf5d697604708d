//! Multi-path navigation through a [`TreeDef`].
//!
//! A session is the set of selected edges plus the frontier of "current"
//! nodes. Answering a question selects one edge (single choice) or several
//! (multi choice), and every chosen target becomes current, so several
//! branches can be open at once. Recommendations reached this way stay
//! current. `goto` jumps to any node: backwards it prunes everything below
//! the target, forwards it answers the path from an open question.
//!
//! Transitions are pure: each returns a new state and leaves the old one
//! untouched, so a failed action never leaves a half-applied state.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::indexset::IndexSet;
use crate::tree::{Edge, NodeId, NodeKind, TreeDef, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Action {
    Answer { node: NodeId, choices: Arc<[String]> },
    Goto { node: NodeId },
    Reset,
    /// An answer chosen from patient data rather than by a click.
    AutoAdvance { node: NodeId, choices: Arc<[String]> },
}

impl Action {
    pub fn answer(node: &str, choices: &[&str]) -> Self {
        Action::Answer {
            node: node.into(),
            choices: choices.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn goto(node: &str) -> Self {
        Action::Goto { node: node.into() }
    }

    pub fn auto(node: &str, choice: &str) -> Self {
        Action::AutoAdvance {
            node: node.into(),
            choices: Arc::from([choice.to_owned()]),
        }
    }

    pub fn node(&self) -> Option<&NodeId> {
        match self {
            Action::Answer { node, .. } | Action::Goto { node } | Action::AutoAdvance { node, .. } => {
                Some(node)
            }
            Action::Reset => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error")]
pub enum NavError {
    #[error("unknown node `{node}`")]
    UnknownNode { node: String },
    #[error("`{node}` is not a current node")]
    NotCurrent { node: NodeId },
    #[error("`{node}` is a recommendation, not a question")]
    NotAQuestion { node: NodeId },
    #[error("`{node}` has no answer {choice:?}")]
    UnknownChoice { node: NodeId, choice: String },
    #[error("`{node}` accepts {expected} choice(s), got {given}")]
    CardinalityViolation {
        node: NodeId,
        given: usize,
        expected: String,
    },
    #[error("answer {choice:?} given twice for `{node}`")]
    DuplicateChoice { node: NodeId, choice: String },
    #[error("`{node}` lies in a branch that was not chosen; go back first")]
    Unreachable { node: NodeId },
}

impl From<TreeError> for NavError {
    fn from(err: TreeError) -> Self {
        match err {
            TreeError::UnknownNode { node } => NavError::UnknownNode { node },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("action #{index} failed: {error}")]
pub struct ReplayError {
    pub index: usize,
    pub error: NavError,
}

#[derive(Debug, Clone)]
pub struct NavState {
    tree: Arc<TreeDef>,
    /// Edge positions.
    selected: IndexSet,
    /// Node positions.
    frontier: IndexSet,
    history: Vec<Action>,
}

impl PartialEq for NavState {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.tree, &other.tree) || self.tree == other.tree)
            && self.selected == other.selected
            && self.frontier == other.frontier
            && self.history == other.history
    }
}

impl NavState {
    /// Fresh session: nothing selected, only the root is current.
    pub fn new(tree: Arc<TreeDef>) -> Self {
        let root = tree.root_index();
        NavState {
            tree,
            selected: IndexSet::new(),
            frontier: IndexSet::from([root]),
            history: Vec::new(),
        }
    }

    pub fn tree(&self) -> &Arc<TreeDef> {
        &self.tree
    }

    pub fn history(&self) -> &[Action] {
        &self.history
    }

    pub fn selected_indices(&self) -> &IndexSet {
        &self.selected
    }

    pub fn frontier_indices(&self) -> &IndexSet {
        &self.frontier
    }

    /// Current nodes in declaration order.
    pub fn frontier(&self) -> Vec<&NodeId> {
        self.frontier.iter().map(|i| &self.tree.node(i).id).collect()
    }

    pub fn selected_edges(&self) -> Vec<&Edge> {
        self.selected.iter().map(|e| self.tree.edge(e)).collect()
    }

    pub fn is_selected(&self, edge: usize) -> bool {
        self.selected.contains(edge)
    }

    pub fn is_current(&self, node: usize) -> bool {
        self.frontier.contains(node)
    }

    /// Root, or target of a selected edge.
    pub fn is_anchored(&self, node: usize) -> bool {
        node == self.tree.root_index()
            || self
                .tree
                .parent_edge(node)
                .is_some_and(|e| self.selected.contains(e))
    }

    /// Current node, or endpoint of a selected edge.
    pub fn is_active(&self, node: usize) -> bool {
        self.frontier.contains(node)
            || self
                .tree
                .parent_edge(node)
                .is_some_and(|e| self.selected.contains(e))
            || self
                .tree
                .out_edges(node)
                .iter()
                .any(|e| self.selected.contains(*e))
    }

    /// Same selected edges and frontier, ignoring history.
    pub fn same_position(&self, other: &NavState) -> bool {
        self.selected == other.selected && self.frontier == other.frontier
    }

    pub fn answer(&self, node: &str, choices: &[impl AsRef<str>]) -> Result<NavState, NavError> {
        let action = Action::Answer {
            node: node.into(),
            choices: choices.iter().map(|c| c.as_ref().to_owned()).collect(),
        };
        self.apply(&action)
    }

    pub fn goto(&self, target: &str) -> Result<NavState, NavError> {
        self.apply(&Action::goto(target))
    }

    pub fn reset(&self) -> NavState {
        self.apply(&Action::Reset).expect("reset cannot fail")
    }

    /// Applies one action. Actions that leave the position unchanged (a goto
    /// onto an open node, a reset of a fresh session) are not recorded.
    pub fn apply(&self, action: &Action) -> Result<NavState, NavError> {
        let mut next = NavState {
            tree: Arc::clone(&self.tree),
            selected: self.selected.clone(),
            frontier: self.frontier.clone(),
            history: Vec::new(),
        };
        next.step(action)?;
        if next.same_position(self) {
            next.history = self.history.clone();
        } else {
            next.history.reserve_exact(self.history.len() + 1);
            next.history.extend_from_slice(&self.history);
            next.history.push(action.clone());
        }
        Ok(next)
    }

    /// In-place form of [`NavState::apply`]; on error the state is left
    /// as it was.
    pub fn apply_mut(&mut self, action: &Action) -> Result<(), NavError> {
        let before = (self.selected.clone(), self.frontier.clone());
        self.step(action)?;
        if self.selected != before.0 || self.frontier != before.1 {
            self.history.push(action.clone());
        }
        Ok(())
    }

    fn step(&mut self, action: &Action) -> Result<(), NavError> {
        match action {
            Action::Answer { node, choices } | Action::AutoAdvance { node, choices } => {
                self.answer_in_place(node.as_str(), choices)
            }
            Action::Goto { node } => self.goto_in_place(node.as_str()),
            Action::Reset => {
                self.selected.clear();
                self.frontier = IndexSet::from([self.tree.root_index()]);
                Ok(())
            }
        }
    }

    fn answer_in_place(&mut self, node: &str, choices: &[String]) -> Result<(), NavError> {
        let tree = Arc::clone(&self.tree);
        let v = tree.require(node)?;
        let id = &tree.node(v).id;
        let kind = tree.node(v).kind;
        if kind == NodeKind::Recommendation {
            return Err(NavError::NotAQuestion { node: id.clone() });
        }
        if !self.frontier.contains(v) {
            return Err(NavError::NotCurrent { node: id.clone() });
        }
        let cardinality = |expected: &str| NavError::CardinalityViolation {
            node: id.clone(),
            given: choices.len(),
            expected: expected.to_owned(),
        };
        match kind {
            NodeKind::SingleChoice if choices.len() != 1 => return Err(cardinality("exactly 1")),
            NodeKind::MultiChoice if choices.is_empty() => return Err(cardinality("at least 1")),
            _ => {}
        }
        let mut edges = Vec::with_capacity(choices.len());
        for choice in choices {
            let e = tree
                .out_edges(v)
                .iter()
                .copied()
                .find(|&e| tree.edge(e).answer == *choice)
                .ok_or_else(|| NavError::UnknownChoice {
                    node: id.clone(),
                    choice: choice.clone(),
                })?;
            if edges.contains(&e) {
                return Err(NavError::DuplicateChoice {
                    node: id.clone(),
                    choice: choice.clone(),
                });
            }
            edges.push(e);
        }
        self.select(v, &edges);
        Ok(())
    }

    fn select(&mut self, node: usize, edges: &[usize]) {
        self.frontier.remove(node);
        for &e in edges {
            self.selected.insert(e);
            self.frontier.insert(self.tree.edge_target(e));
        }
    }

    fn goto_in_place(&mut self, target: &str) -> Result<(), NavError> {
        let tree = Arc::clone(&self.tree);
        let t = tree.require(target)?;

        if self.is_anchored(t) {
            // Backward: drop every selection strictly below the target.
            self.selected
                .retain(|e| !tree.is_descendant(tree.edge_source(e), t));
            self.frontier.retain(|v| !tree.is_descendant(v, t));
            self.frontier.insert(t);
            return Ok(());
        }

        // Forward: climb to the first anchored ancestor, which must be open.
        let mut path = Vec::new();
        let mut v = t;
        loop {
            let e = tree
                .parent_edge(v)
                .expect("only the root lacks a parent, and the root is anchored");
            path.push(e);
            v = tree.edge_source(e);
            if self.is_anchored(v) {
                break;
            }
        }
        if !self.frontier.contains(v) {
            return Err(NavError::Unreachable {
                node: tree.node(t).id.clone(),
            });
        }
        for &e in path.iter().rev() {
            self.select(tree.edge_source(e), &[e]);
        }
        Ok(())
    }

    /// Recommendations that are current, or reachable below an open
    /// question through unselected edges. Declaration order.
    pub fn reachable_recommendations(&self) -> Vec<&NodeId> {
        self.reachable_recommendation_indices()
            .into_iter()
            .map(|i| &self.tree.node(i).id)
            .collect()
    }

    pub fn reachable_recommendation_indices(&self) -> Vec<usize> {
        let open: Vec<usize> = self
            .frontier
            .iter()
            .filter(|&f| self.tree.node(f).kind.is_question())
            .collect();
        (0..self.tree.node_count())
            .filter(|&i| self.tree.node(i).kind == NodeKind::Recommendation)
            .filter(|&i| {
                self.frontier.contains(i) || open.iter().any(|&f| self.tree.is_descendant(i, f))
            })
            .collect()
    }

    /// Current questions still awaiting an answer.
    pub fn open_questions(&self) -> impl Iterator<Item = usize> + '_ {
        self.frontier
            .iter()
            .filter(|&f| self.tree.node(f).kind.is_question())
    }

    /// Checks the state against its definition: selections are closed under
    /// parents, single-choice nodes have at most one selection, and the
    /// frontier is exactly the selected targets without selected children
    /// (or the root before any selection).
    pub fn invariant_violations(&self) -> Vec<String> {
        let tree = &self.tree;
        let mut out = Vec::new();
        for e in self.selected.iter() {
            let from = tree.edge_source(e);
            if from != tree.root_index()
                && !tree.parent_edge(from).is_some_and(|p| self.selected.contains(p))
            {
                out.push(format!("selected edge #{e} hangs below unselected node {}", tree.node(from).id));
            }
        }
        for i in 0..tree.node_count() {
            let chosen = tree.out_edges(i).iter().filter(|&&e| self.selected.contains(e)).count();
            if tree.node(i).kind == NodeKind::SingleChoice && chosen > 1 {
                out.push(format!("single-choice {} has {chosen} selections", tree.node(i).id));
            }
        }
        let expected: IndexSet = if self.selected.is_empty() {
            IndexSet::from([tree.root_index()])
        } else {
            self.selected
                .iter()
                .map(|e| tree.edge_target(e))
                .filter(|&v| !tree.out_edges(v).iter().any(|e| self.selected.contains(*e)))
                .collect()
        };
        if expected != self.frontier {
            out.push(format!(
                "frontier {:?} differs from derived {:?}",
                self.frontier, expected
            ));
        }
        out
    }
}

/// Rebuilds a state by applying `history` to a fresh session.
pub fn replay(tree: Arc<TreeDef>, history: &[Action]) -> Result<NavState, ReplayError> {
    let mut state = NavState::new(tree);
    for (index, action) in history.iter().enumerate() {
        state
            .apply_mut(action)
            .map_err(|error| ReplayError { index, error })?;
    }
    Ok(state)
}
