//! Simulation-trial tooling.
//!
//! Participants solve clinical cases; each case-solve is scored against the
//! case's gold standard on 22 decision criteria (one point each), and the
//! groups are compared with Welch tests, per criterion under a Bonferroni
//! correction.

mod compare;
mod dataset;
mod design;
mod scoring;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::FormatError;
use crate::stats::StatsError;

pub use compare::{
    compare_groups, CompareConfig, Comparison, CriterionComparison, GroupSummary, SideSummary,
    StatsReport, TestResult,
};
pub use dataset::{load_dataset, Dataset};
pub use design::{sample_size, SampleSize};
pub use scoring::{score_transcript, tidy_rows, write_tidy_csv, Score, ScoredTranscript, TidyRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    InitialEvaluation,
    InitialDecision,
    Reevaluation,
}

/// The 22 decision criteria, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Ekg,
    ChestCt,
    GeneralBloodTest,
    Crp,
    Ldh,
    Troponin,
    DDimers,
    Ferritin,
    Il6,
    DecisionToHospitalize,
    LevelOfCare,
    Antibiotics,
    Steroids,
    Anticoagulant,
    Oxygen,
    ClinicalStatus,
    OxygenNeed,
    Fever,
    BloodTest,
    #[serde(rename = "chest_ct_2")]
    ChestCt2,
    ReevaluationDecision,
    PlanOfCare,
}

impl Criterion {
    pub const COUNT: usize = 22;

    pub const ALL: [Criterion; Criterion::COUNT] = [
        Criterion::Ekg,
        Criterion::ChestCt,
        Criterion::GeneralBloodTest,
        Criterion::Crp,
        Criterion::Ldh,
        Criterion::Troponin,
        Criterion::DDimers,
        Criterion::Ferritin,
        Criterion::Il6,
        Criterion::DecisionToHospitalize,
        Criterion::LevelOfCare,
        Criterion::Antibiotics,
        Criterion::Steroids,
        Criterion::Anticoagulant,
        Criterion::Oxygen,
        Criterion::ClinicalStatus,
        Criterion::OxygenNeed,
        Criterion::Fever,
        Criterion::BloodTest,
        Criterion::ChestCt2,
        Criterion::ReevaluationDecision,
        Criterion::PlanOfCare,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn phase(self) -> Phase {
        match self.index() {
            0..=8 => Phase::InitialEvaluation,
            9..=14 => Phase::InitialDecision,
            _ => Phase::Reevaluation,
        }
    }

    /// Criteria answered with a token from the gold file's vocabulary rather
    /// than yes/no.
    pub fn is_categorical(self) -> bool {
        matches!(
            self,
            Criterion::LevelOfCare
                | Criterion::PlanOfCare
                | Criterion::ReevaluationDecision
                | Criterion::ClinicalStatus
        )
    }

    pub fn token(self) -> &'static str {
        match self {
            Criterion::Ekg => "ekg",
            Criterion::ChestCt => "chest_ct",
            Criterion::GeneralBloodTest => "general_blood_test",
            Criterion::Crp => "crp",
            Criterion::Ldh => "ldh",
            Criterion::Troponin => "troponin",
            Criterion::DDimers => "d_dimers",
            Criterion::Ferritin => "ferritin",
            Criterion::Il6 => "il6",
            Criterion::DecisionToHospitalize => "decision_to_hospitalize",
            Criterion::LevelOfCare => "level_of_care",
            Criterion::Antibiotics => "antibiotics",
            Criterion::Steroids => "steroids",
            Criterion::Anticoagulant => "anticoagulant",
            Criterion::Oxygen => "oxygen",
            Criterion::ClinicalStatus => "clinical_status",
            Criterion::OxygenNeed => "oxygen_need",
            Criterion::Fever => "fever",
            Criterion::BloodTest => "blood_test",
            Criterion::ChestCt2 => "chest_ct_2",
            Criterion::ReevaluationDecision => "reevaluation_decision",
            Criterion::PlanOfCare => "plan_of_care",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Criterion::Ekg => "EKG",
            Criterion::ChestCt => "Chest CT",
            Criterion::GeneralBloodTest => "General blood test",
            Criterion::Crp => "CRP",
            Criterion::Ldh => "LDH",
            Criterion::Troponin => "Troponin",
            Criterion::DDimers => "D-Dimers",
            Criterion::Ferritin => "Ferritin",
            Criterion::Il6 => "Il 6",
            Criterion::DecisionToHospitalize => "Decision to hospitalize",
            Criterion::LevelOfCare => "Level of care",
            Criterion::Antibiotics => "Antibiotics",
            Criterion::Steroids => "Steroids",
            Criterion::Anticoagulant => "Anticoagulant",
            Criterion::Oxygen => "Oxygen",
            Criterion::ClinicalStatus => "Clinical status",
            Criterion::OxygenNeed => "Oxygen need",
            Criterion::Fever => "Fever",
            Criterion::BloodTest => "Blood test",
            Criterion::ChestCt2 => "Chest CT (reevaluation)",
            Criterion::ReevaluationDecision => "Reevaluation decision",
            Criterion::PlanOfCare => "Plan of care",
        }
    }

    pub fn in_phase(phase: Phase) -> impl Iterator<Item = Criterion> {
        Criterion::ALL.into_iter().filter(move |c| c.phase() == phase)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A yes/no decision or a categorical token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Answer {
    Bool(bool),
    Token(String),
}

impl Answer {
    /// A different answer of the same kind.
    pub fn wrong(&self) -> Answer {
        match self {
            Answer::Bool(b) => Answer::Bool(!b),
            Answer::Token(t) => Answer::Token(format!("not_{t}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Group {
    /// No guidance.
    A,
    /// Paper guideline.
    B,
    /// Interactive decision support.
    C,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::A, Group::B, Group::C];
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::A => "A",
            Group::B => "B",
            Group::C => "C",
        })
    }
}

/// A non-empty union of groups, written as letters: `A`, `AB`, `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSet(u8);

impl GroupSet {
    pub fn of(groups: &[Group]) -> Self {
        GroupSet(groups.iter().fold(0, |acc, g| acc | (1 << *g as u8)))
    }

    pub fn contains(self, g: Group) -> bool {
        self.0 & (1 << g as u8) != 0
    }

    pub fn is_disjoint(self, other: GroupSet) -> bool {
        self.0 & other.0 == 0
    }
}

impl fmt::Display for GroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in Group::ALL {
            if self.contains(g) {
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupSet {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = 0u8;
        for ch in s.trim().chars() {
            let g = match ch.to_ascii_uppercase() {
                'A' => Group::A,
                'B' => Group::B,
                'C' => Group::C,
                _ => return Err(EvalError::BadGroup(s.to_owned())),
            };
            if set & (1 << g as u8) != 0 {
                return Err(EvalError::BadGroup(s.to_owned()));
            }
            set |= 1 << g as u8;
        }
        if set == 0 {
            return Err(EvalError::BadGroup(s.to_owned()));
        }
        Ok(GroupSet(set))
    }
}

/// Two disjoint group unions to compare, written `A:B` or `AB:C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupPair {
    pub left: GroupSet,
    pub right: GroupSet,
}

impl GroupPair {
    pub fn new(left: GroupSet, right: GroupSet) -> Result<Self, EvalError> {
        if !left.is_disjoint(right) {
            return Err(EvalError::BadGroup(format!("{left}:{right} overlap")));
        }
        Ok(GroupPair { left, right })
    }
}

impl fmt::Display for GroupPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.left, self.right)
    }
}

impl FromStr for GroupPair {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (l, r) = s
            .split_once(':')
            .ok_or_else(|| EvalError::BadGroup(s.to_owned()))?;
        GroupPair::new(l.parse()?, r.parse()?)
    }
}

impl Serialize for GroupPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Case narrative, revealed in three stages.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseStages {
    pub admission: String,
    pub post_24h: String,
    pub discharge: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClinicalCase {
    pub id: u32,
    pub title: String,
    pub stages: CaseStages,
    pub gold: BTreeMap<Criterion, Answer>,
}

pub const MAX_CASE_ID: u32 = 6;

impl ClinicalCase {
    /// Checks the id range and that the gold standard answers every
    /// criterion with the right kind of answer. Errors carry a document path.
    pub fn check(&self) -> Result<(), (String, String)> {
        if !(1..=MAX_CASE_ID).contains(&self.id) {
            return Err((
                "id".into(),
                format!("case id must lie in 1..={MAX_CASE_ID}, got {}", self.id),
            ));
        }
        for c in Criterion::ALL {
            match (self.gold.get(&c), c.is_categorical()) {
                (None, _) => {
                    return Err(("gold".into(), format!("no gold answer for `{c}`")));
                }
                (Some(Answer::Bool(_)), true) => {
                    return Err((format!("gold.{c}"), "expected a token".into()));
                }
                (Some(Answer::Token(_)), false) => {
                    return Err((format!("gold.{c}"), "expected true or false".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Demographics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub age: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study_year: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases_treated: Option<String>,
}

/// One participant's answers to one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub participant: String,
    pub group: Group,
    pub case: u32,
    pub answers: BTreeMap<Criterion, Answer>,
    pub demographics: Option<Demographics>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("transcript is for case {transcript}, not case {case}")]
    CaseMismatch { case: u32, transcript: u32 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("bad group specification `{0}`")]
    BadGroup(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("no case {case} for transcript {path}")]
    MissingCase { case: u32, path: String },
    #[error("case {0} defined twice")]
    DuplicateCase(u32),
}
