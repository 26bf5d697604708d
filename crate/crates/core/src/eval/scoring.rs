use std::io::Write;

use serde::Serialize;

use super::{ClinicalCase, Criterion, EvalError, Group, Transcript};

/// Per-criterion points (0 or 1) in [`Criterion::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Score {
    pub points: [u8; Criterion::COUNT],
}

impl Score {
    pub fn total(&self) -> u32 {
        self.points.iter().map(|&p| u32::from(p)).sum()
    }

    pub fn get(&self, c: Criterion) -> u8 {
        self.points[c.index()]
    }
}

/// One point per criterion whose answer equals the gold answer exactly.
/// Missing answers score zero.
pub fn score_transcript(case: &ClinicalCase, t: &Transcript) -> Result<Score, EvalError> {
    if case.id != t.case {
        return Err(EvalError::CaseMismatch {
            case: case.id,
            transcript: t.case,
        });
    }
    let mut points = [0u8; Criterion::COUNT];
    for c in Criterion::ALL {
        if let (Some(gold), Some(given)) = (case.gold.get(&c), t.answers.get(&c)) {
            points[c.index()] = u8::from(gold == given);
        }
    }
    Ok(Score { points })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScoredTranscript {
    pub participant: String,
    pub group: Group,
    pub case: u32,
    pub score: Score,
}

impl ScoredTranscript {
    pub fn total(&self) -> u32 {
        self.score.total()
    }

    pub(crate) fn sort_key(&self) -> (&str, u32, Group, [u8; Criterion::COUNT]) {
        (&self.participant, self.case, self.group, self.score.points)
    }
}

/// Long-format row: one per case-solve and criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TidyRow {
    pub participant: String,
    pub case: u32,
    pub group: Group,
    pub criterion: Criterion,
    pub score: u8,
}

pub fn tidy_rows(dataset: &[ScoredTranscript]) -> Vec<TidyRow> {
    let mut sorted: Vec<&ScoredTranscript> = dataset.iter().collect();
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    sorted
        .into_iter()
        .flat_map(|s| {
            Criterion::ALL.into_iter().map(move |c| TidyRow {
                participant: s.participant.clone(),
                case: s.case,
                group: s.group,
                criterion: c,
                score: s.score.get(c),
            })
        })
        .collect()
}

/// Writes the long-format table as CSV with a header row.
pub fn write_tidy_csv<W: Write>(dataset: &[ScoredTranscript], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in tidy_rows(dataset) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
