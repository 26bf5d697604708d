//! Strict JSON documents: trees, patient records, clinical cases,
//! transcripts and navigation histories.
//!
//! Every document carries `format_version` (currently 1) and rejects
//! unknown keys. Serialization is canonical: keys in a fixed order,
//! two-space indentation, a trailing newline.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::marker::PhantomData;

use serde::de::{DeserializeOwned, Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{ClinicalCase, Transcript};
use crate::nav::Action;
use crate::predicate::{FieldDef, PatientRecord};
use crate::tree::{Edge, Node, NodeId, TreeDef, TreeParts, ValidationReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid tree: {0}")]
    Validation(ValidationReport),
}

impl FormatError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

fn strip_position(err: &serde_json::Error) -> String {
    let mut s = err.to_string();
    if let Some(pos) = s.rfind(" at line ") {
        s.truncate(pos);
    }
    s
}

/// Deserializes one JSON document into `T`, separating syntax errors
/// (with position) from schema errors (with a path into the document).
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|err| {
        let inner = err.inner();
        match inner.classify() {
            serde_json::error::Category::Data => {
                FormatError::schema(err.path().to_string(), strip_position(inner))
            }
            _ => syntax(inner),
        }
    })?;
    de.end().map_err(|err| syntax(&err))?;
    Ok(value)
}

/// Positions are 1-based; an empty document reports column 0, which is
/// moved to 1.
fn syntax(err: &serde_json::Error) -> FormatError {
    FormatError::Syntax {
        line: err.line().max(1),
        column: err.column().max(1),
        message: strip_position(err),
    }
}

/// Decodes UTF-8, reporting the position of the first invalid byte.
pub fn decode_utf8(bytes: &[u8]) -> Result<&str, FormatError> {
    std::str::from_utf8(bytes).map_err(|err| {
        let valid = &bytes[..err.valid_up_to()];
        let line = valid.iter().filter(|b| **b == b'\n').count() + 1;
        let line_start = valid
            .iter()
            .rposition(|b| *b == b'\n')
            .map_or(0, |p| p + 1);
        let column = String::from_utf8_lossy(&valid[line_start..]).chars().count() + 1;
        FormatError::Syntax {
            line,
            column,
            message: "invalid UTF-8".to_owned(),
        }
    })
}

fn check_version(version: u32) -> Result<(), FormatError> {
    if version == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::schema(
            "format_version",
            format!("unsupported format version {version}, expected {FORMAT_VERSION}"),
        ))
    }
}

fn to_canonical<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("documents serialize to JSON");
    out.push('\n');
    out
}

/// Map deserializer that rejects repeated keys instead of keeping the last.
pub(crate) fn unique_map<'de, D, K, V>(deserializer: D) -> Result<BTreeMap<K, V>, D::Error>
where
    D: Deserializer<'de>,
    K: Deserialize<'de> + Ord + fmt::Debug,
    V: Deserialize<'de>,
{
    struct UniqueMap<K, V>(PhantomData<(K, V)>);

    impl<'de, K, V> Visitor<'de> for UniqueMap<K, V>
    where
        K: Deserialize<'de> + Ord + fmt::Debug,
        V: Deserialize<'de>,
    {
        type Value = BTreeMap<K, V>;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("an object with unique keys")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some(key) = map.next_key::<K>()? {
                if out.contains_key(&key) {
                    return Err(serde::de::Error::custom(format!("duplicate key {key:?}")));
                }
                let value = map.next_value()?;
                out.insert(key, value);
            }
            Ok(out)
        }
    }

    deserializer.deserialize_map(UniqueMap(PhantomData))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    format_version: u32,
    id: String,
    title: String,
    root: NodeId,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    fields: Vec<FieldDef>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

/// Parses and validates a `.tree.json` document.
pub fn parse_tree(text: &str) -> Result<TreeDef, FormatError> {
    let parts = parse_tree_parts(text)?;
    TreeDef::new(parts).map_err(FormatError::Validation)
}

pub fn parse_tree_bytes(bytes: &[u8]) -> Result<TreeDef, FormatError> {
    parse_tree(decode_utf8(bytes)?)
}

/// Parses a tree document without structural validation.
pub fn parse_tree_parts(text: &str) -> Result<TreeParts, FormatError> {
    let file: TreeFile = parse_document(text)?;
    check_version(file.format_version)?;
    let mut seen = HashSet::new();
    for (i, node) in file.nodes.iter().enumerate() {
        if !seen.insert(&node.id) {
            return Err(FormatError::schema(
                format!("nodes[{i}].id"),
                format!("duplicate node id `{}`", node.id),
            ));
        }
    }
    Ok(TreeParts {
        id: file.id,
        title: file.title,
        root: file.root,
        fields: file.fields,
        nodes: file.nodes,
        edges: file.edges,
    })
}

pub fn serialize_tree(tree: &TreeDef) -> String {
    serialize_tree_parts(tree.parts())
}

pub fn serialize_tree_parts(parts: &TreeParts) -> String {
    to_canonical(&TreeFile {
        format_version: FORMAT_VERSION,
        id: parts.id.clone(),
        title: parts.title.clone(),
        root: parts.root.clone(),
        fields: parts.fields.clone(),
        nodes: parts.nodes.clone(),
        edges: parts.edges.clone(),
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatientFile {
    format_version: u32,
    fields: PatientRecord,
}

/// Parses a `.patient.json` document. Types are checked against a field
/// dictionary separately, with [`PatientRecord::check`].
pub fn parse_patient(text: &str) -> Result<PatientRecord, FormatError> {
    let file: PatientFile = parse_document(text)?;
    check_version(file.format_version)?;
    Ok(file.fields)
}

pub fn serialize_patient(record: &PatientRecord) -> String {
    to_canonical(&PatientFile {
        format_version: FORMAT_VERSION,
        fields: record.clone(),
    })
}

/// Parses a `.case.json` document and checks gold coverage.
pub fn parse_case(text: &str) -> Result<ClinicalCase, FormatError> {
    let file: VersionedCase = parse_document(text)?;
    check_version(file.format_version)?;
    let case = file.into_case();
    case.check().map_err(|(path, message)| FormatError::schema(path, message))?;
    Ok(case)
}

pub fn serialize_case(case: &ClinicalCase) -> String {
    to_canonical(&VersionedCase::from_case(case))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VersionedCase {
    format_version: u32,
    id: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    title: String,
    stages: crate::eval::CaseStages,
    #[serde(deserialize_with = "unique_map")]
    gold: BTreeMap<crate::eval::Criterion, crate::eval::Answer>,
}

impl VersionedCase {
    fn into_case(self) -> ClinicalCase {
        ClinicalCase {
            id: self.id,
            title: self.title,
            stages: self.stages,
            gold: self.gold,
        }
    }

    fn from_case(case: &ClinicalCase) -> Self {
        VersionedCase {
            format_version: FORMAT_VERSION,
            id: case.id,
            title: case.title.clone(),
            stages: case.stages.clone(),
            gold: case.gold.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VersionedTranscript {
    format_version: u32,
    participant: String,
    group: crate::eval::Group,
    case: u32,
    #[serde(deserialize_with = "unique_map")]
    answers: BTreeMap<crate::eval::Criterion, crate::eval::Answer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    demographics: Option<crate::eval::Demographics>,
}

pub fn parse_transcript(text: &str) -> Result<Transcript, FormatError> {
    let file: VersionedTranscript = parse_document(text)?;
    check_version(file.format_version)?;
    if file.participant.is_empty() {
        return Err(FormatError::schema("participant", "empty participant id"));
    }
    Ok(Transcript {
        participant: file.participant,
        group: file.group,
        case: file.case,
        answers: file.answers,
        demographics: file.demographics,
    })
}

pub fn serialize_transcript(t: &Transcript) -> String {
    to_canonical(&VersionedTranscript {
        format_version: FORMAT_VERSION,
        participant: t.participant.clone(),
        group: t.group,
        case: t.case,
        answers: t.answers.clone(),
        demographics: t.demographics.clone(),
    })
}

/// A navigation history bound to a tree id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionLog {
    pub format_version: u32,
    pub tree: String,
    pub actions: Vec<Action>,
}

pub fn parse_history(text: &str) -> Result<SessionLog, FormatError> {
    let log: SessionLog = parse_document(text)?;
    check_version(log.format_version)?;
    Ok(log)
}

pub fn serialize_history(tree_id: &str, actions: &[Action]) -> String {
    to_canonical(&SessionLog {
        format_version: FORMAT_VERSION,
        tree: tree_id.to_owned(),
        actions: actions.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::{Comparator, DataPredicate, PatientValue};
    use crate::tree::{example_parts, example_tree, EdgeSymbol};

    #[test]
    fn example_round_trip() {
        let t = example_tree();
        let text = serialize_tree(&t);
        assert_eq!(parse_tree(&text).unwrap(), t);
        assert_eq!(serialize_tree(&parse_tree(&text).unwrap()), text);
        assert_eq!(serialize_tree(&t), text);
    }

    #[test]
    fn canonical_layout() {
        let text = serialize_tree(&example_tree());
        assert!(text.starts_with("{\n  \"format_version\": 1,\n  \"id\": \"T1\",\n  \"title\""));
        let order: Vec<usize> = ["\"format_version\"", "\"id\"", "\"title\"", "\"root\"", "\"nodes\"", "\"edges\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(text.ends_with("}\n"));
    }

    #[test]
    fn unicode_labels_survive() {
        let mut p = example_parts();
        p.nodes[2].label = "œdème — 肺".into();
        let t = TreeDef::new(p).unwrap();
        let back = parse_tree(&serialize_tree(&t)).unwrap();
        assert_eq!(back.get("n2").unwrap().label, "œdème — 肺");
    }

    #[test]
    fn duplicate_node_is_schema_error_at_second() {
        let mut p = example_parts();
        p.nodes.push(Node::recommendation("r1", "dup"));
        let text = serialize_tree_parts(&p);
        match parse_tree(&text) {
            Err(FormatError::Schema { path, .. }) => assert_eq!(path, "nodes[5].id"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn root_recommendation_is_validation_error() {
        let text = r#"{"format_version":1,"id":"x","title":"x","root":"a",
            "nodes":[{"id":"a","kind":"recommendation","label":"only"}],"edges":[]}"#;
        assert!(matches!(parse_tree(text), Err(FormatError::Validation(_))));
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_tree("{\n  \"format_version\": 1,\n  oops") {
            Err(FormatError::Syntax { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column >= 3);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_tree(""), Err(FormatError::Syntax { .. })));
        let text = serialize_tree(&example_tree()) + "x";
        assert!(matches!(parse_tree(&text), Err(FormatError::Syntax { .. })));
        assert!(matches!(
            parse_tree_bytes(b"{\"id\": \"\xff\"}"),
            Err(FormatError::Syntax { line: 1, column: 9, .. })
        ));
    }

    #[test]
    fn schema_errors_have_paths() {
        let text = serialize_tree(&example_tree()).replace("\"multi\"", "\"several\"");
        match parse_tree(&text) {
            Err(FormatError::Schema { path, .. }) => assert_eq!(path, "nodes[1].kind"),
            other => panic!("{other:?}"),
        }
        let text = serialize_tree(&example_tree()).replace("\"title\"", "\"colour\": 1, \"title\"");
        assert!(matches!(parse_tree(&text), Err(FormatError::Schema { .. })));
        let text = serialize_tree(&example_tree()).replace("\"format_version\": 1", "\"format_version\": 2");
        match parse_tree(&text) {
            Err(FormatError::Schema { path, .. }) => assert_eq!(path, "format_version"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn predicates_and_symbols_round_trip() {
        let mut p = example_parts();
        p.fields.push(FieldDef::number("SpO2", Some("%")));
        p.nodes[0] = Node::single("n0", "Severity?")
            .with_predicate(DataPredicate::cmp("SpO2", Comparator::Lt, 94.0), Some("severe"));
        p.edges[0].symbol = EdgeSymbol::RadioUnchecked;
        p.edges[1].symbol = EdgeSymbol::RadioChecked;
        let t = TreeDef::new(p).unwrap();
        let text = serialize_tree(&t);
        assert!(text.contains("\"op\": \"<\""));
        assert!(text.contains("\"radio_checked\""));
        assert_eq!(parse_tree(&text).unwrap(), t);
    }

    #[test]
    fn patient_documents() {
        let rec = PatientRecord::new()
            .with("SpO2", PatientValue::number(91.0, Some("%")))
            .with("fever", PatientValue::Boolean(true));
        let text = serialize_patient(&rec);
        assert_eq!(parse_patient(&text).unwrap(), rec);
        assert!(parse_patient(r#"{"format_version":1,"fields":{},"name":"x"}"#).is_err());
    }

    #[test]
    fn history_documents() {
        let actions = vec![
            Action::answer("n0", &["mild"]),
            Action::goto("n0"),
            Action::Reset,
            Action::auto("n0", "severe"),
        ];
        let text = serialize_history("T1", &actions);
        let log = parse_history(&text).unwrap();
        assert_eq!(log.actions, actions);
        assert!(parse_history(r#"{"format_version":1,"tree":"T1","actions":[{"kind":"jump","node":"n0"}]}"#).is_err());
        assert!(parse_history(r#"{"format_version":1,"tree":"T1","actions":[{"kind":"goto","node":"n0","choices":[]}]}"#).is_err());
    }
}
