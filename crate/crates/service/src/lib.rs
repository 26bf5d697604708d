//! HTTP service for guided navigation sessions.
//!
//! Trees are loaded once from a directory. Sessions hold only navigation
//! actions; they are persisted to an append-only log and rebuilt by replay
//! on startup. Patient records sent for automatic navigation are used for
//! the one request and never stored.

mod api;
pub mod store;
pub mod testing;

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use guidetree_core::format::{parse_tree_bytes, FormatError};
use guidetree_core::predicate::PredicateError;
use guidetree_core::nav::{Action, NavError, NavState};
use guidetree_core::tree::TreeDef;
use parking_lot::{Mutex, RwLock};
use thiserror::Error;

pub use api::router;
use store::{LogEntry, Store, StoreError};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Tree { path: PathBuf, source: FormatError },
    #[error("tree id `{id}` is defined by both {first} and {second}")]
    DuplicateTree {
        id: String,
        first: PathBuf,
        second: PathBuf,
    },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("session log entry {index} does not replay: {message}")]
    Replay { index: usize, message: String },
}

/// Loads every `*.tree.json` file in `dir`, keyed by tree id.
pub fn load_trees(dir: &Path) -> Result<BTreeMap<String, Arc<TreeDef>>, ServiceError> {
    let io = |source| ServiceError::Io {
        path: dir.to_owned(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    paths.retain(|p| p.is_file() && p.to_string_lossy().ends_with(".tree.json"));
    paths.sort();

    let mut trees = BTreeMap::new();
    let mut origin: HashMap<String, PathBuf> = HashMap::new();
    for path in paths {
        let bytes = fs::read(&path).map_err(|source| ServiceError::Io {
            path: path.clone(),
            source,
        })?;
        let tree = parse_tree_bytes(&bytes).map_err(|source| ServiceError::Tree {
            path: path.clone(),
            source,
        })?;
        let id = tree.id().to_owned();
        if let Some(first) = origin.insert(id.clone(), path.clone()) {
            return Err(ServiceError::DuplicateTree {
                id,
                first,
                second: path,
            });
        }
        trees.insert(id, Arc::new(tree));
    }
    Ok(trees)
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

/// The last committed state of a session.
#[derive(Debug, Clone)]
pub struct Committed {
    pub state: NavState,
    pub updated: u64,
}

impl Committed {
    pub fn revision(&self) -> u64 {
        self.state.history().len() as u64
    }
}

pub struct Session {
    pub id: String,
    pub tree_id: String,
    pub created: u64,
    /// Serializes writers; readers use `committed` only.
    write: Mutex<()>,
    committed: RwLock<Arc<Committed>>,
}

impl Session {
    pub fn snapshot(&self) -> Arc<Committed> {
        Arc::clone(&self.committed.read())
    }
}

#[derive(Debug, Error)]
pub enum CommitError {
    #[error("stale revision {given}, current is {current}")]
    Conflict { given: u64, current: u64 },
    #[error(transparent)]
    Nav(#[from] NavError),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub struct AppState {
    trees: BTreeMap<String, Arc<TreeDef>>,
    sessions: RwLock<HashMap<String, Arc<Session>>>,
    store: Store,
}

impl AppState {
    /// Loads trees and replays the session log in `data_dir`.
    pub fn open(trees_dir: &Path, data_dir: &Path) -> Result<Arc<AppState>, ServiceError> {
        Self::with_trees(load_trees(trees_dir)?, data_dir)
    }

    pub fn with_trees(
        trees: BTreeMap<String, Arc<TreeDef>>,
        data_dir: &Path,
    ) -> Result<Arc<AppState>, ServiceError> {
        let (store, entries) = Store::open(data_dir)?;
        let mut sessions: HashMap<String, Arc<Session>> = HashMap::new();
        let replay_err = |index: usize, message: String| ServiceError::Replay { index, message };
        for (index, entry) in entries.into_iter().enumerate() {
            match entry {
                LogEntry::Create { session, tree, at } => {
                    let def = trees
                        .get(&tree)
                        .ok_or_else(|| replay_err(index, format!("unknown tree `{tree}`")))?;
                    let s = Session {
                        id: session.clone(),
                        tree_id: tree,
                        created: at,
                        write: Mutex::new(()),
                        committed: RwLock::new(Arc::new(Committed {
                            state: NavState::new(Arc::clone(def)),
                            updated: at,
                        })),
                    };
                    sessions.insert(session, Arc::new(s));
                }
                LogEntry::Action {
                    session,
                    revision,
                    action,
                    at,
                } => {
                    let s = sessions
                        .get(&session)
                        .ok_or_else(|| replay_err(index, format!("unknown session `{session}`")))?;
                    let current = s.snapshot();
                    if current.revision() != revision {
                        return Err(replay_err(
                            index,
                            format!("revision {revision}, expected {}", current.revision()),
                        ));
                    }
                    let state = current
                        .state
                        .apply(&action)
                        .map_err(|e| replay_err(index, e.to_string()))?;
                    *s.committed.write() = Arc::new(Committed { state, updated: at });
                }
            }
        }
        Ok(Arc::new(AppState {
            trees,
            sessions: RwLock::new(sessions),
            store,
        }))
    }

    pub fn trees(&self) -> &BTreeMap<String, Arc<TreeDef>> {
        &self.trees
    }

    pub fn tree(&self, id: &str) -> Option<&Arc<TreeDef>> {
        self.trees.get(id)
    }

    pub fn session(&self, id: &str) -> Option<Arc<Session>> {
        self.sessions.read().get(id).cloned()
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn store_path(&self) -> &Path {
        self.store.path()
    }

    /// Starts a session on `tree_id`; `None` if the tree is unknown.
    pub fn create_session(&self, tree_id: &str) -> Result<Option<Arc<Session>>, StoreError> {
        let Some(tree) = self.trees.get(tree_id) else {
            return Ok(None);
        };
        let mut sessions = self.sessions.write();
        let id = loop {
            let id = format!("{:032x}", rand::random::<u128>());
            if !sessions.contains_key(&id) {
                break id;
            }
        };
        let at = now_ms();
        self.store.append(&LogEntry::Create {
            session: id.clone(),
            tree: tree_id.to_owned(),
            at,
        })?;
        let session = Arc::new(Session {
            id: id.clone(),
            tree_id: tree_id.to_owned(),
            created: at,
            write: Mutex::new(()),
            committed: RwLock::new(Arc::new(Committed {
                state: NavState::new(Arc::clone(tree)),
                updated: at,
            })),
        });
        sessions.insert(id, Arc::clone(&session));
        Ok(Some(session))
    }

    /// Applies actions produced by `step` from the committed state, all or
    /// nothing. `expected`, when given, must equal the current revision.
    /// Each recorded action is logged before the new state is published.
    pub fn commit<F, T>(&self, session: &Session, expected: Option<u64>, step: F) -> Result<(Arc<Committed>, T), CommitError>
    where
        F: FnOnce(&NavState) -> Result<(NavState, T), CommitError>,
    {
        let _guard = session.write.lock();
        let current = session.snapshot();
        if let Some(given) = expected {
            if given != current.revision() {
                return Err(CommitError::Conflict {
                    given,
                    current: current.revision(),
                });
            }
        }
        let (next, extra) = step(&current.state)?;
        let old = current.state.history();
        let new = next.history();
        debug_assert!(new.starts_with(old));
        let at = now_ms();
        for (k, action) in new[old.len()..].iter().enumerate() {
            self.store.append(&LogEntry::Action {
                session: session.id.clone(),
                revision: (old.len() + k) as u64,
                action: action.clone(),
                at,
            })?;
        }
        let committed = if new.len() == old.len() {
            current
        } else {
            let c = Arc::new(Committed { state: next, updated: at });
            *session.committed.write() = Arc::clone(&c);
            c
        };
        Ok((committed, extra))
    }

    pub fn apply(&self, session: &Session, revision: u64, action: &Action) -> Result<Arc<Committed>, CommitError> {
        self.commit(session, Some(revision), |s| Ok((s.apply(action)?, ())))
            .map(|(c, ())| c)
    }
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub trees: PathBuf,
    pub data: PathBuf,
    pub listen: SocketAddr,
    pub static_dir: Option<PathBuf>,
}

/// Runs the HTTP server until the process is stopped.
pub async fn serve(config: ServeConfig) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let state = AppState::open(&config.trees, &config.data)?;
    let app = router(state.clone(), config.static_dir.as_deref());
    let listener = tokio::net::TcpListener::bind(config.listen).await?;
    eprintln!(
        "serving {} tree(s), {} session(s) on http://{}",
        state.trees().len(),
        state.session_count(),
        listener.local_addr()?
    );
    axum::serve(listener, app).await?;
    Ok(())
}
