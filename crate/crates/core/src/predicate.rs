//! Patient records, field dictionaries and three-valued predicates.
//!
//! Question nodes may carry a [`DataPredicate`] over patient fields. A
//! predicate evaluates to [`Truth::Unknown`] whenever the data it needs is
//! missing, and unknowns combine by Kleene logic, so partial records never
//! force a guess.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Kleene truth value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    pub fn or(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::True, _) | (_, Truth::True) => Truth::True,
            (Truth::False, Truth::False) => Truth::False,
            _ => Truth::Unknown,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Comparator {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
        }
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, Comparator::Eq | Comparator::Ne)
    }

    fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Comparator::Lt => lhs < rhs,
            Comparator::Le => lhs <= rhs,
            Comparator::Gt => lhs > rhs,
            Comparator::Ge => lhs >= rhs,
            Comparator::Eq => lhs == rhs,
            Comparator::Ne => lhs != rhs,
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Right-hand side of an atom.
#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    Number(f64),
    Boolean(bool),
    /// Enum token or free text, depending on the field.
    Token(String),
}

impl Constant {
    fn kind_name(&self) -> &'static str {
        match self {
            Constant::Number(_) => "number",
            Constant::Boolean(_) => "boolean",
            Constant::Token(_) => "token",
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Number(v) => write!(f, "{v}"),
            Constant::Boolean(v) => write!(f, "{v}"),
            Constant::Token(v) => write!(f, "{v:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub field: String,
    pub op: Comparator,
    pub value: Constant,
}

/// Boolean expression over patient fields.
///
/// Wire form: an atom is `{"field": .., "op": .., "value": ..}` (a bare
/// `{"field": ..}` tests a boolean field for `true`); combinators are
/// `{"all": [..]}`, `{"any": [..]}` and `{"not": ..}`.
#[derive(Debug, Clone, PartialEq)]
pub enum DataPredicate {
    Atom(Atom),
    All(Vec<DataPredicate>),
    Any(Vec<DataPredicate>),
    Not(Box<DataPredicate>),
}

impl DataPredicate {
    pub fn atom(field: impl Into<String>, op: Comparator, value: Constant) -> Self {
        DataPredicate::Atom(Atom {
            field: field.into(),
            op,
            value,
        })
    }

    /// `field op number`
    pub fn cmp(field: impl Into<String>, op: Comparator, value: f64) -> Self {
        Self::atom(field, op, Constant::Number(value))
    }

    /// Boolean field is true.
    pub fn flag(field: impl Into<String>) -> Self {
        Self::atom(field, Comparator::Eq, Constant::Boolean(true))
    }

    pub fn token(field: impl Into<String>, token: impl Into<String>) -> Self {
        Self::atom(field, Comparator::Eq, Constant::Token(token.into()))
    }

    /// Visits every atom, left to right.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            DataPredicate::Atom(a) => out.push(a),
            DataPredicate::All(ps) | DataPredicate::Any(ps) => {
                ps.iter().for_each(|p| p.collect_atoms(out))
            }
            DataPredicate::Not(p) => p.collect_atoms(out),
        }
    }
}

impl fmt::Display for DataPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, ps: &[DataPredicate], sep: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    write!(f, " {sep} ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")
        }
        match self {
            DataPredicate::Atom(a) => write!(f, "{} {} {}", a.field, a.op, a.value),
            DataPredicate::All(ps) => join(f, ps, "AND"),
            DataPredicate::Any(ps) => join(f, ps, "OR"),
            DataPredicate::Not(p) => write!(f, "NOT {p}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateWire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    op: Option<Comparator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    all: Option<Vec<DataPredicate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    any: Option<Vec<DataPredicate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    not: Option<Box<DataPredicate>>,
}

impl Serialize for DataPredicate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut wire = PredicateWire {
            field: None,
            op: None,
            value: None,
            all: None,
            any: None,
            not: None,
        };
        match self {
            DataPredicate::Atom(a) => {
                wire.field = Some(a.field.clone());
                wire.op = Some(a.op);
                wire.value = Some(match &a.value {
                    Constant::Number(v) => serde_json::Number::from_f64(*v)
                        .map(serde_json::Value::Number)
                        .ok_or_else(|| serde::ser::Error::custom("non-finite constant"))?,
                    Constant::Boolean(b) => serde_json::Value::Bool(*b),
                    Constant::Token(t) => serde_json::Value::String(t.clone()),
                });
            }
            DataPredicate::All(ps) => wire.all = Some(ps.clone()),
            DataPredicate::Any(ps) => wire.any = Some(ps.clone()),
            DataPredicate::Not(p) => wire.not = Some(p.clone()),
        }
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DataPredicate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = PredicateWire::deserialize(deserializer)?;
        let shapes = [
            wire.field.is_some(),
            wire.all.is_some(),
            wire.any.is_some(),
            wire.not.is_some(),
        ];
        if shapes.iter().filter(|s| **s).count() != 1 {
            return Err(de::Error::custom(
                "predicate must have exactly one of `field`, `all`, `any`, `not`",
            ));
        }
        if let Some(field) = wire.field {
            let (op, value) = match (wire.op, wire.value) {
                (None, None) => (Comparator::Eq, Constant::Boolean(true)),
                (Some(op), Some(v)) => (op, constant_from_json(v).map_err(de::Error::custom)?),
                _ => {
                    return Err(de::Error::custom(
                        "atom needs both `op` and `value`, or neither",
                    ))
                }
            };
            return Ok(DataPredicate::Atom(Atom { field, op, value }));
        }
        if wire.op.is_some() || wire.value.is_some() {
            return Err(de::Error::custom("`op`/`value` are only valid on atoms"));
        }
        if let Some(ps) = wire.all {
            if ps.is_empty() {
                return Err(de::Error::custom("`all` needs at least one operand"));
            }
            return Ok(DataPredicate::All(ps));
        }
        if let Some(ps) = wire.any {
            if ps.is_empty() {
                return Err(de::Error::custom("`any` needs at least one operand"));
            }
            return Ok(DataPredicate::Any(ps));
        }
        Ok(DataPredicate::Not(wire.not.expect("shape checked above")))
    }
}

fn constant_from_json(v: serde_json::Value) -> Result<Constant, String> {
    match v {
        serde_json::Value::Bool(b) => Ok(Constant::Boolean(b)),
        serde_json::Value::String(s) => Ok(Constant::Token(s)),
        serde_json::Value::Number(n) => n
            .as_f64()
            .filter(|v| v.is_finite())
            .map(Constant::Number)
            .ok_or_else(|| format!("numeric constant {n} is not a finite double")),
        other => Err(format!("unsupported constant {other}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldType {
    Number,
    Boolean,
    Enum,
    Text,
}

impl FieldType {
    pub fn name(self) -> &'static str {
        match self {
            FieldType::Number => "number",
            FieldType::Boolean => "boolean",
            FieldType::Enum => "enum",
            FieldType::Text => "text",
        }
    }
}

/// One entry of a tree's field dictionary: drives the data-entry form and
/// type-checks predicates and records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(rename = "type")]
    pub kind: FieldType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<String>,
}

impl FieldDef {
    pub fn number(name: impl Into<String>, unit: Option<&str>) -> Self {
        FieldDef {
            name: name.into(),
            label: None,
            kind: FieldType::Number,
            unit: unit.map(str::to_owned),
            values: Vec::new(),
        }
    }

    pub fn boolean(name: impl Into<String>) -> Self {
        FieldDef {
            name: name.into(),
            label: None,
            kind: FieldType::Boolean,
            unit: None,
            values: Vec::new(),
        }
    }

    pub fn enumeration(name: impl Into<String>, values: &[&str]) -> Self {
        FieldDef {
            name: name.into(),
            label: None,
            kind: FieldType::Enum,
            unit: None,
            values: values.iter().map(|v| v.to_string()).collect(),
        }
    }

    /// Problems with the definition itself.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.name.is_empty() {
            out.push("empty field name".to_owned());
        }
        match self.kind {
            FieldType::Enum if self.values.is_empty() => {
                out.push("enum field declares no values".to_owned())
            }
            FieldType::Enum => {
                let mut seen = std::collections::BTreeSet::new();
                for v in &self.values {
                    if !seen.insert(v) {
                        out.push(format!("duplicate enum value {v:?}"));
                    }
                }
            }
            _ if !self.values.is_empty() => {
                out.push(format!("{} field cannot declare values", self.kind.name()))
            }
            _ => {}
        }
        if self.unit.is_some() && self.kind != FieldType::Number {
            out.push(format!("{} field cannot carry a unit", self.kind.name()));
        }
        out
    }

    /// Checks that an atom on this field is well-typed.
    pub fn check_atom(&self, atom: &Atom) -> Result<(), String> {
        match (self.kind, &atom.value) {
            (FieldType::Number, Constant::Number(_)) => Ok(()),
            (FieldType::Boolean, Constant::Boolean(_))
            | (FieldType::Enum, Constant::Token(_))
            | (FieldType::Text, Constant::Token(_))
                if atom.op.is_ordering() =>
            {
                Err(format!(
                    "comparator {} needs a numeric field, `{}` is {}",
                    atom.op,
                    self.name,
                    self.kind.name()
                ))
            }
            (FieldType::Boolean, Constant::Boolean(_)) | (FieldType::Text, Constant::Token(_)) => {
                Ok(())
            }
            (FieldType::Enum, Constant::Token(t)) => {
                if self.values.contains(t) {
                    Ok(())
                } else {
                    Err(format!("`{}` has no value {t:?}", self.name))
                }
            }
            (kind, value) => Err(format!(
                "{} constant {value} compared with {} field `{}`",
                value.kind_name(),
                kind.name(),
                self.name
            )),
        }
    }
}

/// A single entered value.
///
/// Wire form: `{"number": {"value": 91, "unit": "%"}}`, `{"boolean": true}`,
/// `{"enum": "male"}` or `{"text": ".."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PatientValue {
    Number {
        value: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<String>,
    },
    Boolean(bool),
    Enum(String),
    Text(String),
}

impl PatientValue {
    pub fn number(value: f64, unit: Option<&str>) -> Self {
        PatientValue::Number {
            value,
            unit: unit.map(str::to_owned),
        }
    }

    pub fn kind(&self) -> FieldType {
        match self {
            PatientValue::Number { .. } => FieldType::Number,
            PatientValue::Boolean(_) => FieldType::Boolean,
            PatientValue::Enum(_) => FieldType::Enum,
            PatientValue::Text(_) => FieldType::Text,
        }
    }
}

/// Entered patient data; every field is optional.
///
/// Records are value objects: nothing in this crate stores them.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PatientRecord(BTreeMap<String, PatientValue>);

impl PatientRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, field: impl Into<String>, value: PatientValue) -> Self {
        self.insert(field, value);
        self
    }

    pub fn insert(&mut self, field: impl Into<String>, value: PatientValue) -> Option<PatientValue> {
        self.0.insert(field.into(), value)
    }

    pub fn get(&self, field: &str) -> Option<&PatientValue> {
        self.0.get(field)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &PatientValue)> {
        self.0.iter()
    }

    /// Checks the record against a field dictionary: known fields, matching
    /// types, exact units, allowed enum tokens, finite numbers.
    pub fn check(&self, fields: &[FieldDef]) -> Result<(), PredicateError> {
        for (name, value) in &self.0 {
            let def = fields
                .iter()
                .find(|f| &f.name == name)
                .ok_or_else(|| PredicateError::UnknownField { field: name.clone() })?;
            if def.kind != value.kind() {
                return Err(PredicateError::TypeMismatch {
                    field: name.clone(),
                    expected: def.kind.name().to_owned(),
                    found: value.kind().name().to_owned(),
                });
            }
            match value {
                PatientValue::Number { value, unit } => {
                    if !value.is_finite() {
                        return Err(PredicateError::NonFinite { field: name.clone() });
                    }
                    if unit != &def.unit {
                        return Err(PredicateError::UnitMismatch {
                            field: name.clone(),
                            expected: def.unit.clone(),
                            found: unit.clone(),
                        });
                    }
                }
                PatientValue::Enum(token) if !def.values.contains(token) => {
                    return Err(PredicateError::UnknownToken {
                        field: name.clone(),
                        token: token.clone(),
                    });
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl FromIterator<(String, PatientValue)> for PatientRecord {
    fn from_iter<I: IntoIterator<Item = (String, PatientValue)>>(iter: I) -> Self {
        PatientRecord(iter.into_iter().collect())
    }
}

impl<'de> Deserialize<'de> for PatientRecord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        crate::format::unique_map(deserializer).map(PatientRecord)
    }
}

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
#[serde(tag = "error")]
pub enum PredicateError {
    #[error("type mismatch on `{field}`: expected {expected}, found {found}")]
    TypeMismatch {
        field: String,
        expected: String,
        found: String,
    },
    #[error("unit mismatch on `{field}`: expected {expected:?}, found {found:?}")]
    UnitMismatch {
        field: String,
        expected: Option<String>,
        found: Option<String>,
    },
    #[error("unknown field `{field}`")]
    UnknownField { field: String },
    #[error("`{field}` has no value {token:?}")]
    UnknownToken { field: String, token: String },
    #[error("`{field}` is not a finite number")]
    NonFinite { field: String },
}

/// Evaluates `pred` on `record` in Kleene three-valued logic.
///
/// An atom on a missing field is `Unknown`. Every operand is evaluated, so
/// a type error anywhere in the expression is reported even when the
/// result would already be decided.
pub fn eval_predicate(pred: &DataPredicate, record: &PatientRecord) -> Result<Truth, PredicateError> {
    match pred {
        DataPredicate::Atom(atom) => eval_atom(atom, record),
        DataPredicate::All(ps) => ps.iter().try_fold(Truth::True, |acc, p| {
            Ok(acc.and(eval_predicate(p, record)?))
        }),
        DataPredicate::Any(ps) => ps.iter().try_fold(Truth::False, |acc, p| {
            Ok(acc.or(eval_predicate(p, record)?))
        }),
        DataPredicate::Not(p) => Ok(eval_predicate(p, record)?.not()),
    }
}

fn eval_atom(atom: &Atom, record: &PatientRecord) -> Result<Truth, PredicateError> {
    let Some(value) = record.get(&atom.field) else {
        return Ok(Truth::Unknown);
    };
    let mismatch = || PredicateError::TypeMismatch {
        field: atom.field.clone(),
        expected: format!("{} usable with {}", atom.value.kind_name(), atom.op),
        found: value.kind().name().to_owned(),
    };
    let holds = match (&atom.value, value) {
        (Constant::Number(rhs), PatientValue::Number { value: lhs, .. }) => atom.op.holds(lhs, rhs),
        _ if atom.op.is_ordering() => return Err(mismatch()),
        (Constant::Boolean(rhs), PatientValue::Boolean(lhs)) => atom.op.holds(lhs, rhs),
        (Constant::Token(rhs), PatientValue::Enum(lhs) | PatientValue::Text(lhs)) => {
            atom.op.holds(lhs, rhs)
        }
        _ => return Err(mismatch()),
    };
    Ok(holds.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spo2(v: f64) -> PatientRecord {
        PatientRecord::new().with("SpO2", PatientValue::number(v, Some("%")))
    }

    #[test]
    fn numeric_atom() {
        let p = DataPredicate::cmp("SpO2", Comparator::Lt, 94.0);
        assert_eq!(eval_predicate(&p, &spo2(92.0)).unwrap(), Truth::True);
        assert_eq!(eval_predicate(&p, &spo2(94.0)).unwrap(), Truth::False);
        assert_eq!(eval_predicate(&p, &PatientRecord::new()).unwrap(), Truth::Unknown);
    }

    #[test]
    fn kleene_short_circuit() {
        let p = DataPredicate::All(vec![
            DataPredicate::flag("fever"),
            DataPredicate::cmp("SpO2", Comparator::Lt, 94.0),
        ]);
        let rec = PatientRecord::new().with("fever", PatientValue::Boolean(false));
        assert_eq!(eval_predicate(&p, &rec).unwrap(), Truth::False);

        let q = DataPredicate::Any(vec![
            DataPredicate::flag("fever"),
            DataPredicate::cmp("SpO2", Comparator::Lt, 94.0),
        ]);
        let rec = PatientRecord::new().with("fever", PatientValue::Boolean(true));
        assert_eq!(eval_predicate(&q, &rec).unwrap(), Truth::True);
        let none = PatientRecord::new();
        assert_eq!(
            eval_predicate(&DataPredicate::Not(Box::new(q)), &none).unwrap(),
            Truth::Unknown
        );
    }

    #[test]
    fn truth_tables() {
        use Truth::*;
        let all = [True, False, Unknown];
        for a in all {
            assert_eq!(a.not().not(), a);
            for b in all {
                assert_eq!(a.and(b), b.and(a));
                assert_eq!(a.or(b), b.or(a));
                // De Morgan holds in Kleene logic.
                assert_eq!(a.and(b).not(), a.not().or(b.not()));
            }
        }
        assert_eq!(False.and(Unknown), False);
        assert_eq!(True.or(Unknown), True);
    }

    #[test]
    fn ordering_on_enum_is_type_mismatch() {
        let p = DataPredicate::atom("sex", Comparator::Lt, Constant::Number(3.0));
        let rec = PatientRecord::new().with("sex", PatientValue::Enum("male".into()));
        assert!(matches!(
            eval_predicate(&p, &rec),
            Err(PredicateError::TypeMismatch { .. })
        ));
        let p = DataPredicate::atom("sex", Comparator::Ge, Constant::Token("m".into()));
        assert!(eval_predicate(&p, &rec).is_err());
    }

    #[test]
    fn enum_and_text_tokens() {
        let p = DataPredicate::token("sex", "female");
        let rec = PatientRecord::new().with("sex", PatientValue::Enum("female".into()));
        assert_eq!(eval_predicate(&p, &rec).unwrap(), Truth::True);
        let p = DataPredicate::atom("sex", Comparator::Ne, Constant::Token("female".into()));
        assert_eq!(eval_predicate(&p, &rec).unwrap(), Truth::False);
    }

    #[test]
    fn record_check_units_and_tokens() {
        let dict = vec![
            FieldDef::number("SpO2", Some("%")),
            FieldDef::enumeration("sex", &["male", "female"]),
        ];
        assert!(spo2(90.0).check(&dict).is_ok());
        let bad_unit = PatientRecord::new().with("SpO2", PatientValue::number(0.9, None));
        assert!(matches!(
            bad_unit.check(&dict),
            Err(PredicateError::UnitMismatch { .. })
        ));
        let bad_tok = PatientRecord::new().with("sex", PatientValue::Enum("x".into()));
        assert!(matches!(
            bad_tok.check(&dict),
            Err(PredicateError::UnknownToken { .. })
        ));
        let unknown = PatientRecord::new().with("weight", PatientValue::number(80.0, None));
        assert!(matches!(unknown.check(&dict), Err(PredicateError::UnknownField { .. })));
        let nan = PatientRecord::new().with("SpO2", PatientValue::number(f64::NAN, Some("%")));
        assert!(matches!(nan.check(&dict), Err(PredicateError::NonFinite { .. })));
    }

    #[test]
    fn predicate_wire_forms() {
        let p: DataPredicate = serde_json::from_str(
            r#"{"all":[{"field":"fever"},{"not":{"field":"SpO2","op":">=","value":94}}]}"#,
        )
        .unwrap();
        assert_eq!(
            p,
            DataPredicate::All(vec![
                DataPredicate::flag("fever"),
                DataPredicate::Not(Box::new(DataPredicate::cmp("SpO2", Comparator::Ge, 94.0))),
            ])
        );
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<DataPredicate>(&text).unwrap(), p);

        for bad in [
            r#"{}"#,
            r#"{"field":"a","all":[]}"#,
            r#"{"all":[]}"#,
            r#"{"field":"a","op":"<"}"#,
            r#"{"field":"a","op":"~","value":1}"#,
            r#"{"field":"a","op":"=","value":[1]}"#,
            r#"{"not":{"field":"a"},"op":"<"}"#,
            r#"{"field":"a","extra":1}"#,
        ] {
            assert!(serde_json::from_str::<DataPredicate>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn patient_value_wire_forms() {
        let rec: PatientRecord = serde_json::from_str(
            r#"{"SpO2":{"number":{"value":91,"unit":"%"}},"fever":{"boolean":true},"sex":{"enum":"male"}}"#,
        )
        .unwrap();
        assert_eq!(rec.get("SpO2"), Some(&PatientValue::number(91.0, Some("%"))));
        assert!(serde_json::from_str::<PatientRecord>(r#"{"a":{"boolean":true},"a":{"boolean":false}}"#).is_err());
        assert!(serde_json::from_str::<PatientRecord>(r#"{"a":{"number":{"value":1,"x":2}}}"#).is_err());
    }
}
