use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::{score_transcript, ClinicalCase, EvalError, ScoredTranscript, Transcript};
use crate::format::{parse_case, parse_transcript};

/// Cases and transcripts loaded from a dataset directory laid out as
/// `cases/*.case.json` and `transcripts/*.json`.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub cases: BTreeMap<u32, ClinicalCase>,
    pub transcripts: Vec<(PathBuf, Transcript)>,
}

fn json_files(dir: &Path, suffix: &str) -> Result<Vec<PathBuf>, EvalError> {
    let io = |source| EvalError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if path.is_file() && name.ends_with(suffix) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_dataset(dir: &Path) -> Result<Dataset, EvalError> {
    let mut cases = BTreeMap::new();
    for path in json_files(&dir.join("cases"), ".case.json")? {
        let case = parse_case(&read(&path)?).map_err(|source| EvalError::Format {
            path: path.display().to_string(),
            source,
        })?;
        let id = case.id;
        if cases.insert(id, case).is_some() {
            return Err(EvalError::DuplicateCase(id));
        }
    }
    let mut transcripts = Vec::new();
    for path in json_files(&dir.join("transcripts"), ".json")? {
        let t = parse_transcript(&read(&path)?).map_err(|source| EvalError::Format {
            path: path.display().to_string(),
            source,
        })?;
        transcripts.push((path, t));
    }
    Ok(Dataset { cases, transcripts })
}

impl Dataset {
    /// Scores every transcript against its case.
    pub fn score(&self) -> Result<Vec<ScoredTranscript>, EvalError> {
        self.transcripts
            .iter()
            .map(|(path, t)| {
                let case = self.cases.get(&t.case).ok_or_else(|| EvalError::MissingCase {
                    case: t.case,
                    path: path.display().to_string(),
                })?;
                Ok(ScoredTranscript {
                    participant: t.participant.clone(),
                    group: t.group,
                    case: t.case,
                    score: score_transcript(case, t)?,
                })
            })
            .collect()
    }
}
