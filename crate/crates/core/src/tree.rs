//! Multi-path decision trees and their structural validation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::predicate::{DataPredicate, FieldDef};

/// Node identifier, unique within a tree. Well-formed ids match
/// `[A-Za-z0-9_.-]+`; malformed ids are reported by [`validate_tree`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(Arc<str>);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(Arc::from(id.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_well_formed(&self) -> bool {
        !self.0.is_empty()
            && self
                .0
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(Arc::from(s))
    }
}

impl PartialEq<str> for NodeId {
    fn eq(&self, other: &str) -> bool {
        *self.0 == *other
    }
}

impl PartialEq<&str> for NodeId {
    fn eq(&self, other: &&str) -> bool {
        *self.0 == **other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "single")]
    SingleChoice,
    #[serde(rename = "multi")]
    MultiChoice,
    #[serde(rename = "recommendation")]
    Recommendation,
}

impl NodeKind {
    pub fn is_question(self) -> bool {
        !matches!(self, NodeKind::Recommendation)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate: Option<DataPredicate>,
    /// Answer taken when the predicate holds. Defaults to `"Yes"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate_true_answer: Option<String>,
    /// Answer taken when the predicate fails. Defaults to the other edge of a
    /// two-way question, else `"No"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicate_false_answer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Node {
    fn bare(id: &str, kind: NodeKind, label: &str) -> Self {
        Node {
            id: id.into(),
            kind,
            label: label.to_owned(),
            predicate: None,
            predicate_true_answer: None,
            predicate_false_answer: None,
            detail: None,
        }
    }

    pub fn single(id: &str, label: &str) -> Self {
        Self::bare(id, NodeKind::SingleChoice, label)
    }

    pub fn multi(id: &str, label: &str) -> Self {
        Self::bare(id, NodeKind::MultiChoice, label)
    }

    pub fn recommendation(id: &str, label: &str) -> Self {
        Self::bare(id, NodeKind::Recommendation, label)
    }

    pub fn with_predicate(mut self, predicate: DataPredicate, true_answer: Option<&str>) -> Self {
        self.predicate = Some(predicate);
        self.predicate_true_answer = true_answer.map(str::to_owned);
        self
    }

    pub fn with_detail(mut self, detail: &str) -> Self {
        self.detail = Some(detail.to_owned());
        self
    }
}

/// Rendering symbol drawn next to an edge label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSymbol {
    RadioChecked,
    RadioUnchecked,
    #[default]
    None,
}

impl EdgeSymbol {
    fn is_none(&self) -> bool {
        matches!(self, EdgeSymbol::None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from: NodeId,
    pub answer: String,
    pub to: NodeId,
    #[serde(default, skip_serializing_if = "EdgeSymbol::is_none")]
    pub symbol: EdgeSymbol,
}

impl Edge {
    pub fn new(from: &str, answer: &str, to: &str) -> Self {
        Edge {
            from: from.into(),
            answer: answer.to_owned(),
            to: to.into(),
            symbol: EdgeSymbol::None,
        }
    }

    pub fn with_symbol(mut self, symbol: EdgeSymbol) -> Self {
        self.symbol = symbol;
        self
    }
}

/// Unchecked tree contents, as parsed or assembled by hand.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeParts {
    pub id: String,
    pub title: String,
    pub root: NodeId,
    pub fields: Vec<FieldDef>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "issue")]
pub enum ValidationIssue {
    InvalidNodeId { node: String },
    DuplicateNode { node: NodeId },
    UnknownRoot { root: NodeId },
    RootIsRecommendation { root: NodeId },
    RootHasParent { root: NodeId, edge: usize },
    UnknownSource { edge: usize, from: NodeId },
    UnknownTarget { edge: usize, to: NodeId },
    EdgeFromRecommendation { edge: usize, from: NodeId },
    EmptyAnswer { edge: usize },
    DuplicateAnswer { node: NodeId, answer: String },
    MultipleParents { node: NodeId, edges: Vec<usize> },
    Unreachable { node: NodeId },
    QuestionWithoutChoices { node: NodeId, choices: usize },
    RecommendationWithPredicate { node: NodeId },
    PredicateOnMultiChoice { node: NodeId },
    PredicateBindingWithoutPredicate { node: NodeId },
    PredicateAnswerMissing { node: NodeId, answer: String },
    PredicateField { node: NodeId, field: String, problem: String },
    InvalidField { field: String, problem: String },
    DuplicateField { field: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            InvalidNodeId { node } => write!(f, "InvalidNodeId({node:?})"),
            DuplicateNode { node } => write!(f, "DuplicateNode({node})"),
            UnknownRoot { root } => write!(f, "UnknownRoot({root})"),
            RootIsRecommendation { root } => write!(f, "RootIsRecommendation({root})"),
            RootHasParent { root, edge } => write!(f, "RootHasParent({root}, edge #{edge})"),
            UnknownSource { edge, from } => write!(f, "UnknownSource({from}, edge #{edge})"),
            UnknownTarget { edge, to } => write!(f, "UnknownTarget({to}, edge #{edge})"),
            EdgeFromRecommendation { edge, from } => {
                write!(f, "EdgeFromRecommendation({from}, edge #{edge})")
            }
            EmptyAnswer { edge } => write!(f, "EmptyAnswer(edge #{edge})"),
            DuplicateAnswer { node, answer } => write!(f, "DuplicateAnswer({node}, {answer:?})"),
            MultipleParents { node, edges } => write!(f, "MultipleParents({node}, edges {edges:?})"),
            Unreachable { node } => write!(f, "Unreachable({node})"),
            QuestionWithoutChoices { node, choices } => {
                write!(f, "QuestionWithoutChoices({node}, {choices} choice(s))")
            }
            RecommendationWithPredicate { node } => write!(f, "RecommendationWithPredicate({node})"),
            PredicateOnMultiChoice { node } => write!(f, "PredicateOnMultiChoice({node})"),
            PredicateBindingWithoutPredicate { node } => {
                write!(f, "PredicateBindingWithoutPredicate({node})")
            }
            PredicateAnswerMissing { node, answer } => {
                write!(f, "PredicateAnswerMissing({node}, {answer:?})")
            }
            PredicateField { node, field, problem } => {
                write!(f, "PredicateField({node}, {field}): {problem}")
            }
            InvalidField { field, problem } => write!(f, "InvalidField({field}): {problem}"),
            DuplicateField { field } => write!(f, "DuplicateField({field})"),
        }
    }
}

/// Every structural problem found in a candidate tree. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn len(&self) -> usize {
        self.issues.len()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks every tree invariant and reports all violations.
pub fn validate_tree(parts: &TreeParts) -> ValidationReport {
    let mut issues = Vec::new();

    let mut field_names = BTreeSet::new();
    for field in &parts.fields {
        if !field_names.insert(field.name.as_str()) {
            issues.push(ValidationIssue::DuplicateField {
                field: field.name.clone(),
            });
        }
        for problem in field.problems() {
            issues.push(ValidationIssue::InvalidField {
                field: field.name.clone(),
                problem,
            });
        }
    }

    let mut index: HashMap<&NodeId, usize> = HashMap::new();
    for (i, node) in parts.nodes.iter().enumerate() {
        if !node.id.is_well_formed() {
            issues.push(ValidationIssue::InvalidNodeId {
                node: node.id.to_string(),
            });
        }
        if index.insert(&node.id, i).is_some() {
            issues.push(ValidationIssue::DuplicateNode {
                node: node.id.clone(),
            });
        }
    }
    // Later duplicates win the index; earlier ones are only reported as
    // DuplicateNode.
    let root = index.get(&parts.root).copied();
    match root {
        None => issues.push(ValidationIssue::UnknownRoot {
            root: parts.root.clone(),
        }),
        Some(r) if parts.nodes[r].kind == NodeKind::Recommendation => {
            issues.push(ValidationIssue::RootIsRecommendation {
                root: parts.root.clone(),
            })
        }
        _ => {}
    }

    let n = parts.nodes.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, edge) in parts.edges.iter().enumerate() {
        let from = index.get(&edge.from).copied();
        let to = index.get(&edge.to).copied();
        if from.is_none() {
            issues.push(ValidationIssue::UnknownSource {
                edge: e,
                from: edge.from.clone(),
            });
        }
        if to.is_none() {
            issues.push(ValidationIssue::UnknownTarget {
                edge: e,
                to: edge.to.clone(),
            });
        }
        if edge.answer.is_empty() {
            issues.push(ValidationIssue::EmptyAnswer { edge: e });
        }
        if let Some(f) = from {
            if parts.nodes[f].kind == NodeKind::Recommendation {
                issues.push(ValidationIssue::EdgeFromRecommendation {
                    edge: e,
                    from: edge.from.clone(),
                });
            }
            out[f].push(e);
        }
        if let Some(t) = to {
            incoming[t].push(e);
        }
    }

    for (i, node) in parts.nodes.iter().enumerate() {
        let mut answers = BTreeSet::new();
        for &e in &out[i] {
            let answer = &parts.edges[e].answer;
            if !answers.insert(answer.as_str()) {
                issues.push(ValidationIssue::DuplicateAnswer {
                    node: node.id.clone(),
                    answer: answer.clone(),
                });
            }
        }
        if Some(i) == root {
            if let Some(&e) = incoming[i].first() {
                issues.push(ValidationIssue::RootHasParent {
                    root: node.id.clone(),
                    edge: e,
                });
            }
        } else if incoming[i].len() > 1 {
            issues.push(ValidationIssue::MultipleParents {
                node: node.id.clone(),
                edges: incoming[i].clone(),
            });
        }
        if node.kind.is_question() && out[i].len() < 2 {
            issues.push(ValidationIssue::QuestionWithoutChoices {
                node: node.id.clone(),
                choices: out[i].len(),
            });
        }
        check_predicate_binding(parts, node, &out[i], &mut issues);
    }

    if let Some(r) = root {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([r]);
        seen[r] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &out[v] {
                if let Some(&t) = index.get(&parts.edges[e].to) {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        for (i, node) in parts.nodes.iter().enumerate() {
            if !seen[i] && index.get(&node.id) == Some(&i) {
                issues.push(ValidationIssue::Unreachable {
                    node: node.id.clone(),
                });
            }
        }
    }

    ValidationReport { issues }
}

fn check_predicate_binding(
    parts: &TreeParts,
    node: &Node,
    out: &[usize],
    issues: &mut Vec<ValidationIssue>,
) {
    let Some(predicate) = &node.predicate else {
        if node.predicate_true_answer.is_some() || node.predicate_false_answer.is_some() {
            issues.push(ValidationIssue::PredicateBindingWithoutPredicate {
                node: node.id.clone(),
            });
        }
        return;
    };
    match node.kind {
        NodeKind::Recommendation => {
            issues.push(ValidationIssue::RecommendationWithPredicate {
                node: node.id.clone(),
            });
            return;
        }
        NodeKind::MultiChoice => {
            issues.push(ValidationIssue::PredicateOnMultiChoice {
                node: node.id.clone(),
            });
            return;
        }
        NodeKind::SingleChoice => {}
    }
    for atom in predicate.atoms() {
        let problem = match parts.fields.iter().find(|f| f.name == atom.field) {
            None => Some("field is not declared in the tree's field dictionary".to_owned()),
            Some(def) => def.check_atom(atom).err(),
        };
        if let Some(problem) = problem {
            issues.push(ValidationIssue::PredicateField {
                node: node.id.clone(),
                field: atom.field.clone(),
                problem,
            });
        }
    }
    let answers: Vec<&str> = out.iter().map(|&e| parts.edges[e].answer.as_str()).collect();
    let (yes, no) = binding_answers(node, &answers);
    for answer in [yes, no] {
        if !answers.contains(&answer.as_str()) {
            issues.push(ValidationIssue::PredicateAnswerMissing {
                node: node.id.clone(),
                answer,
            });
        }
    }
}

/// Resolves which answers a predicate's true and false verdicts select.
fn binding_answers(node: &Node, answers: &[&str]) -> (String, String) {
    let yes = node
        .predicate_true_answer
        .clone()
        .unwrap_or_else(|| "Yes".to_owned());
    let no = match &node.predicate_false_answer {
        Some(no) => no.clone(),
        None if answers.len() == 2 && answers.contains(&yes.as_str()) => answers
            .iter()
            .find(|a| **a != yes)
            .map(|a| a.to_string())
            .unwrap_or_default(),
        None => "No".to_owned(),
    };
    (yes, no)
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "error")]
pub enum TreeError {
    #[error("unknown node `{node}`")]
    UnknownNode { node: String },
}

/// A validated, immutable decision tree.
///
/// Nodes and edges keep their declaration order; internally they are
/// addressed by position, which the navigation and layout code rely on.
#[derive(Debug, Clone)]
pub struct TreeDef {
    parts: TreeParts,
    index: HashMap<NodeId, usize>,
    root: usize,
    out_edges: Vec<Vec<usize>>,
    parent_edge: Vec<Option<usize>>,
    edge_from: Vec<usize>,
    edge_to: Vec<usize>,
    depth: Vec<usize>,
    /// Preorder position and subtree size, for O(1) ancestry tests.
    pre: Vec<usize>,
    size: Vec<usize>,
    bindings: Vec<Option<(usize, usize)>>,
}

impl PartialEq for TreeDef {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl TreeDef {
    pub fn new(parts: TreeParts) -> Result<TreeDef, ValidationReport> {
        let report = validate_tree(&parts);
        if !report.is_empty() {
            return Err(report);
        }
        let n = parts.nodes.len();
        let index: HashMap<NodeId, usize> = parts
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| (node.id.clone(), i))
            .collect();
        let root = index[&parts.root];
        let mut out_edges = vec![Vec::new(); n];
        let mut parent_edge = vec![None; n];
        let mut edge_from = Vec::with_capacity(parts.edges.len());
        let mut edge_to = Vec::with_capacity(parts.edges.len());
        for (e, edge) in parts.edges.iter().enumerate() {
            let (f, t) = (index[&edge.from], index[&edge.to]);
            out_edges[f].push(e);
            parent_edge[t] = Some(e);
            edge_from.push(f);
            edge_to.push(t);
        }

        let mut depth = vec![0; n];
        let mut pre = vec![0; n];
        let mut size = vec![1; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            pre[v] = order.len();
            order.push(v);
            for &e in out_edges[v].iter().rev() {
                let c = edge_to[e];
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        for &v in order.iter().rev() {
            if let Some(e) = parent_edge[v] {
                size[edge_from[e]] += size[v];
            }
        }

        let bindings = parts
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| {
                node.predicate.as_ref()?;
                let answers: Vec<&str> = out_edges[i]
                    .iter()
                    .map(|&e| parts.edges[e].answer.as_str())
                    .collect();
                let (yes, no) = binding_answers(node, &answers);
                let find = |a: &str| {
                    out_edges[i]
                        .iter()
                        .copied()
                        .find(|&e| parts.edges[e].answer == a)
                };
                Some((find(&yes)?, find(&no)?))
            })
            .collect();

        Ok(TreeDef {
            parts,
            index,
            root,
            out_edges,
            parent_edge,
            edge_from,
            edge_to,
            depth,
            pre,
            size,
            bindings,
        })
    }

    pub fn id(&self) -> &str {
        &self.parts.id
    }

    pub fn title(&self) -> &str {
        &self.parts.title
    }

    pub fn parts(&self) -> &TreeParts {
        &self.parts
    }

    pub fn into_parts(self) -> TreeParts {
        self.parts
    }

    pub fn fields(&self) -> &[FieldDef] {
        &self.parts.fields
    }

    pub fn nodes(&self) -> &[Node] {
        &self.parts.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.parts.edges
    }

    pub fn node_count(&self) -> usize {
        self.parts.nodes.len()
    }

    pub fn root_index(&self) -> usize {
        self.root
    }

    pub fn root(&self) -> &Node {
        &self.parts.nodes[self.root]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(&NodeId::from(id)).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize, TreeError> {
        self.index_of(id).ok_or_else(|| TreeError::UnknownNode {
            node: id.to_owned(),
        })
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.parts.nodes[i]
    }

    pub fn get(&self, id: &str) -> Option<&Node> {
        self.index_of(id).map(|i| self.node(i))
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.parts.edges[e]
    }

    /// Outgoing edge positions of node `i`, in declaration order.
    pub fn out_edges(&self, i: usize) -> &[usize] {
        &self.out_edges[i]
    }

    pub fn parent_edge(&self, i: usize) -> Option<usize> {
        self.parent_edge[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent_edge[i].map(|e| self.edge_from[e])
    }

    pub fn edge_source(&self, e: usize) -> usize {
        self.edge_from[e]
    }

    pub fn edge_target(&self, e: usize) -> usize {
        self.edge_to[e]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    /// True when `descendant` lies in the subtree rooted at `ancestor`
    /// (a node is its own descendant).
    pub fn is_descendant(&self, descendant: usize, ancestor: usize) -> bool {
        let (p, a) = (self.pre[descendant], self.pre[ancestor]);
        p >= a && p < a + self.size[ancestor]
    }

    pub fn subtree_size(&self, i: usize) -> usize {
        self.size[i]
    }

    /// Edge positions selected by a predicate's true and false verdicts.
    pub fn predicate_edges(&self, i: usize) -> Option<(usize, usize)> {
        self.bindings[i]
    }

    /// Outgoing `(answer, target)` pairs in declaration order.
    pub fn children(&self, id: &str) -> Result<Vec<(&str, &NodeId)>, TreeError> {
        let i = self.require(id)?;
        Ok(self.out_edges[i]
            .iter()
            .map(|&e| {
                let edge = &self.parts.edges[e];
                (edge.answer.as_str(), &edge.to)
            })
            .collect())
    }
}

impl TryFrom<TreeParts> for TreeDef {
    type Error = ValidationReport;

    fn try_from(parts: TreeParts) -> Result<Self, Self::Error> {
        TreeDef::new(parts)
    }
}

/// The five-node example tree used throughout the tests and docs:
/// a single-choice severity question leading either to an ICU
/// recommendation or to a multi-choice risk-factor question.
pub fn example_tree() -> TreeDef {
    TreeDef::new(example_parts()).expect("example tree is valid")
}

pub fn example_parts() -> TreeParts {
    TreeParts {
        id: "T1".into(),
        title: "Severity triage".into(),
        root: "n0".into(),
        fields: Vec::new(),
        nodes: vec![
            Node::single("n0", "Severity?"),
            Node::multi("n1", "Risk factors"),
            Node::recommendation("n2", "ICU admission"),
            Node::recommendation("r1", "Monitor glucose"),
            Node::recommendation("r2", "Thromboprophylaxis"),
        ],
        edges: vec![
            Edge::new("n0", "mild", "n1"),
            Edge::new("n0", "severe", "n2"),
            Edge::new("n1", "diabetes", "r1"),
            Edge::new("n1", "obesity", "r2"),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::Comparator;

    fn kinds(report: &ValidationReport) -> Vec<String> {
        report
            .issues
            .iter()
            .map(|i| i.to_string().split('(').next().unwrap().to_owned())
            .collect()
    }

    #[test]
    fn example_is_valid() {
        assert!(validate_tree(&example_parts()).is_empty());
    }

    #[test]
    fn unknown_target() {
        let mut p = example_parts();
        p.edges[3].to = "nX".into();
        let report = validate_tree(&p);
        assert_eq!(kinds(&report), ["UnknownTarget", "Unreachable"]);
        // r2 lost its only parent, so it is unreachable too; the target is
        // what the report names first.
        assert!(matches!(&report.issues[0], ValidationIssue::UnknownTarget { to, .. } if to == "nX"));
    }

    #[test]
    fn edge_to_undeclared_node_alone() {
        let mut p = example_parts();
        p.edges.push(Edge::new("n1", "other", "nX"));
        let report = validate_tree(&p);
        assert_eq!(report.len(), 1);
        assert_eq!(report.issues[0].to_string(), "UnknownTarget(nX, edge #4)");
    }

    #[test]
    fn leaf_question() {
        let mut p = example_parts();
        p.nodes[3].kind = NodeKind::SingleChoice;
        let report = validate_tree(&p);
        assert_eq!(kinds(&report), ["QuestionWithoutChoices"]);
    }

    #[test]
    fn root_recommendation() {
        let p = TreeParts {
            id: "x".into(),
            title: "x".into(),
            root: "a".into(),
            fields: vec![],
            nodes: vec![Node::recommendation("a", "only")],
            edges: vec![],
        };
        assert_eq!(kinds(&validate_tree(&p)), ["RootIsRecommendation"]);
    }

    #[test]
    fn reports_everything_at_once() {
        let mut p = example_parts();
        p.nodes.push(Node::recommendation("bad id", "x"));
        p.edges.push(Edge::new("n2", "again", "n0"));
        p.edges.push(Edge::new("n1", "diabetes", "r2"));
        let k = kinds(&validate_tree(&p));
        for expected in [
            "InvalidNodeId",
            "EdgeFromRecommendation",
            "DuplicateAnswer",
            "RootHasParent",
            "MultipleParents",
            "Unreachable",
        ] {
            assert!(k.iter().any(|x| x == expected), "{expected} missing from {k:?}");
        }
    }

    #[test]
    fn predicate_checks() {
        let mut p = example_parts();
        p.fields.push(FieldDef::number("SpO2", Some("%")));
        p.nodes[0] = Node::single("n0", "Severity?")
            .with_predicate(DataPredicate::cmp("SpO2", Comparator::Lt, 94.0), Some("severe"));
        assert!(validate_tree(&p).is_empty());
        let t = TreeDef::new(p.clone()).unwrap();
        assert_eq!(t.predicate_edges(0), Some((1, 0)));

        let mut q = p.clone();
        q.nodes[0].predicate_true_answer = None;
        assert_eq!(kinds(&validate_tree(&q)), ["PredicateAnswerMissing", "PredicateAnswerMissing"]);

        let mut q = p.clone();
        q.nodes[0].predicate = Some(DataPredicate::cmp("HR", Comparator::Gt, 100.0));
        assert_eq!(kinds(&validate_tree(&q)), ["PredicateField"]);

        let mut q = p.clone();
        q.nodes[0].predicate = Some(DataPredicate::flag("SpO2"));
        assert_eq!(kinds(&validate_tree(&q)), ["PredicateField"]);

        let mut q = p;
        q.nodes[1].predicate = Some(DataPredicate::cmp("SpO2", Comparator::Lt, 90.0));
        assert_eq!(kinds(&validate_tree(&q)), ["PredicateOnMultiChoice"]);
    }

    #[test]
    fn children_in_declaration_order() {
        let t = example_tree();
        let c = t.children("n0").unwrap();
        assert_eq!(c, vec![("mild", &NodeId::from("n1")), ("severe", &NodeId::from("n2"))]);
        assert!(t.children("n2").unwrap().is_empty());
        assert_eq!(
            t.children("zz"),
            Err(TreeError::UnknownNode { node: "zz".into() })
        );
    }

    #[test]
    fn ancestry() {
        let t = example_tree();
        let idx = |s| t.index_of(s).unwrap();
        assert!(t.is_descendant(idx("r1"), idx("n0")));
        assert!(t.is_descendant(idx("r1"), idx("n1")));
        assert!(!t.is_descendant(idx("r1"), idx("n2")));
        assert!(t.is_descendant(idx("n1"), idx("n1")));
        assert_eq!(t.depth(idx("r2")), 2);
        assert_eq!(t.subtree_size(idx("n0")), 5);
    }

    #[test]
    fn node_id_pattern() {
        assert!(NodeId::from("a.b-c_9").is_well_formed());
        assert!(!NodeId::from("").is_well_formed());
        assert!(!NodeId::from("a b").is_well_formed());
        assert!(!NodeId::from("œ").is_well_formed());
    }
}
