//! Append-only session log: one JSON object per line.
//!
//! Only session creation and navigation actions are ever written. Every
//! line passes [`contains_patient_data`] before it reaches the file.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use guidetree_core::nav::Action;
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub const LOG_FILE: &str = "sessions.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum LogEntry {
    Create {
        session: String,
        tree: String,
        at: u64,
    },
    Action {
        session: String,
        /// Revision the action was applied to.
        revision: u64,
        action: Action,
        at: u64,
    },
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}, line {line}: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("refusing to persist patient data")]
    PatientData,
}

/// Keys and value shapes that only occur in patient records.
const RECORD_KEYS: &[&str] = &["record", "fields", "patient"];
const VALUE_TAGS: &[&str] = &["number", "boolean", "enum", "text"];

/// True if `v` looks like it carries a patient record or entered values:
/// a record-like key anywhere, or a single-key object tagged like a
/// patient value.
pub fn contains_patient_data(v: &Value) -> bool {
    match v {
        Value::Object(map) => {
            if map.keys().any(|k| RECORD_KEYS.contains(&k.as_str())) {
                return true;
            }
            if map.len() == 1 && map.keys().all(|k| VALUE_TAGS.contains(&k.as_str())) {
                return true;
            }
            map.values().any(contains_patient_data)
        }
        Value::Array(items) => items.iter().any(contains_patient_data),
        _ => false,
    }
}

pub struct Store {
    path: PathBuf,
    file: Mutex<File>,
}

impl Store {
    /// Opens (or creates) the log under `dir` and returns every complete
    /// entry. A torn final line, left by a crash mid-write, is dropped and
    /// truncated away.
    pub fn open(dir: &Path) -> Result<(Store, Vec<LogEntry>), StoreError> {
        let path = dir.join(LOG_FILE);
        let io_err = |source| StoreError::Io {
            path: path.clone(),
            source,
        };
        fs::create_dir_all(dir).map_err(io_err)?;
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(io_err)?;

        let mut entries = Vec::new();
        let mut good_len = 0u64;
        let mut reader = BufReader::new(&file);
        let mut line = Vec::new();
        let mut number = 0;
        loop {
            line.clear();
            let n = reader.read_until(b'\n', &mut line).map_err(io_err)?;
            if n == 0 {
                break;
            }
            number += 1;
            if line.last() != Some(&b'\n') {
                // Torn tail.
                break;
            }
            let parsed = std::str::from_utf8(&line)
                .map_err(|e| e.to_string())
                .and_then(|s| serde_json::from_str::<LogEntry>(s.trim_end()).map_err(|e| e.to_string()));
            match parsed {
                Ok(entry) => {
                    entries.push(entry);
                    good_len += n as u64;
                }
                Err(message) => {
                    return Err(StoreError::Corrupt {
                        path,
                        line: number,
                        message,
                    })
                }
            }
        }
        drop(reader);
        if file.metadata().map_err(io_err)?.len() != good_len {
            file.set_len(good_len).map_err(io_err)?;
            file.seek(SeekFrom::End(0)).map_err(io_err)?;
        }
        Ok((
            Store {
                path,
                file: Mutex::new(file),
            },
            entries,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, entry: &LogEntry) -> Result<(), StoreError> {
        let value = serde_json::to_value(entry).expect("log entries serialize");
        if contains_patient_data(&value) {
            return Err(StoreError::PatientData);
        }
        let mut line = value.to_string();
        line.push('\n');
        let mut file = self.file.lock();
        file.write_all(line.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|source| StoreError::Io {
                path: self.path.clone(),
                source,
            })
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    fn create(s: &str) -> LogEntry {
        LogEntry::Create {
            session: s.into(),
            tree: "T1".into(),
            at: 1,
        }
    }

    #[test]
    fn reopen_returns_entries() {
        let dir = tempfile::tempdir().unwrap();
        let (store, entries) = Store::open(dir.path()).unwrap();
        assert!(entries.is_empty());
        store.append(&create("a")).unwrap();
        store
            .append(&LogEntry::Action {
                session: "a".into(),
                revision: 0,
                action: Action::answer("n0", &["severe"]),
                at: 2,
            })
            .unwrap();
        drop(store);
        let (_, entries) = Store::open(dir.path()).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0], create("a"));
    }

    #[test]
    fn torn_tail_is_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let (store, _) = Store::open(dir.path()).unwrap();
        store.append(&create("a")).unwrap();
        drop(store);
        let path = dir.path().join(LOG_FILE);
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{\"op\":\"create\",\"sess");
        fs::write(&path, text).unwrap();

        let (store, entries) = Store::open(dir.path()).unwrap();
        assert_eq!(entries.len(), 1);
        store.append(&create("b")).unwrap();
        drop(store);
        let (_, entries) = Store::open(dir.path()).unwrap();
        assert_eq!(entries, vec![create("a"), create("b")]);
    }

    #[test]
    fn corrupt_middle_line_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(LOG_FILE), "garbage\n{}\n").unwrap();
        assert!(matches!(
            Store::open(dir.path()),
            Err(StoreError::Corrupt { line: 1, .. })
        ));
    }

    #[test]
    fn patient_shapes_are_detected() {
        assert!(contains_patient_data(&json!({"record": {}})));
        assert!(contains_patient_data(&json!({"a": [{"number": {"value": 91}}]})));
        assert!(contains_patient_data(&json!({"x": {"enum": "male"}})));
        let entry = serde_json::to_value(LogEntry::Action {
            session: "s".into(),
            revision: 3,
            action: Action::auto("n0", "severe"),
            at: 9,
        })
        .unwrap();
        assert!(!contains_patient_data(&entry));
    }
}
