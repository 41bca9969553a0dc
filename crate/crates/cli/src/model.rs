//! JSON model files.
//!
//! ```json
//! {
//!   "schema": "preopa-model/1",
//!   "comment": "optional free text",
//!   "events": [{"name": "a", "observable": true}],
//!   "states": ["0", "1"],
//!   "initial": ["0"],
//!   "secret": ["1"],
//!   "marked": ["1"],
//!   "transitions": [{"from": "0", "event": "a", "to": "1"}]
//! }
//! ```
//!
//! `marked` is only meaningful for pattern automata; `secret` defaults to
//! empty.

use std::fmt;
use std::path::{Path, PathBuf};

use preopa_core::automaton::{AutomatonBuilder, Diagnostic, Location};
use preopa_core::{Automaton, Event, ValidationReport};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "preopa-model/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub events: Vec<EventDoc>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    #[serde(default)]
    pub secret: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
    pub transitions: Vec<TransitionDoc>,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDoc {
    pub name: String,
    pub observable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub event: String,
    pub to: String,
}

/// A semantic diagnostic tied to a JSON pointer into the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositionedDiagnostic {
    pub path: String,
    pub message: String,
    pub determinism: bool,
}

impl PositionedDiagnostic {
    fn from_core(d: &Diagnostic) -> Self {
        Self {
            path: pointer(d.location),
            message: d.kind.to_string(),
            determinism: d.is_determinism(),
        }
    }
}

impl fmt::Display for PositionedDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn pointer(loc: Location) -> String {
    match loc {
        Location::Event(i) => format!("/events/{i}"),
        Location::State(i) => format!("/states/{i}"),
        Location::Transition(i) => format!("/transitions/{i}"),
        Location::Initial(i) => format!("/initial/{i}"),
        Location::Secret(i) => format!("/secret/{i}"),
        Location::Marked(i) => format!("/marked/{i}"),
        Location::Model => String::from("/"),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", .path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}: unsupported schema `{found}` (expected `{SCHEMA}`)", .path.display())]
    Schema { path: PathBuf, found: String },
    #[error("{}: invalid model\n{}", .path.display(), render(.diagnostics))]
    Invalid {
        path: PathBuf,
        diagnostics: Vec<PositionedDiagnostic>,
    },
}

fn render(ds: &[PositionedDiagnostic]) -> String {
    ds.iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl ModelDocument {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ModelFileError> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| ModelFileError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.schema != SCHEMA {
            return Err(ModelFileError::Schema {
                path: path.to_path_buf(),
                found: doc.schema,
            });
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, ModelFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn builder(&self) -> AutomatonBuilder {
        let mut b = Automaton::builder()
            .events(self.events.iter().map(|e| Event {
                name: e.name.clone(),
                observable: e.observable,
            }))
            .states(self.states.iter().cloned())
            .initial(self.initial.iter().cloned())
            .secret(self.secret.iter().cloned());
        if let Some(m) = &self.marked {
            b = b.with_marked_set().marked(m.iter().cloned());
        }
        for t in &self.transitions {
            b = b.transition(t.from.clone(), t.event.clone(), t.to.clone());
        }
        b
    }

    /// Structural report, available even when the document cannot be built.
    pub fn report(&self) -> ValidationReport {
        self.builder().report()
    }

    pub fn to_automaton(&self, path: &Path) -> Result<Automaton, ModelFileError> {
        self.builder().build().map_err(|e| ModelFileError::Invalid {
            path: path.to_path_buf(),
            diagnostics: e
                .diagnostics
                .iter()
                .map(PositionedDiagnostic::from_core)
                .collect(),
        })
    }

    pub fn from_automaton(a: &Automaton, comment: Option<String>) -> Self {
        let name = |x: usize| a.state_name(x).to_string();
        Self {
            schema: default_schema(),
            comment,
            events: a
                .alphabet()
                .events()
                .iter()
                .map(|e| EventDoc {
                    name: e.name.clone(),
                    observable: e.observable,
                })
                .collect(),
            states: a.state_names().to_vec(),
            initial: a.initial().iter().map(name).collect(),
            secret: a.secret().iter().map(name).collect(),
            marked: a.marked().map(|m| m.iter().map(name).collect()),
            transitions: a
                .transitions()
                .map(|(x, e, y)| TransitionDoc {
                    from: name(x),
                    event: a.alphabet().name(e).to_string(),
                    to: name(y),
                })
                .collect(),
        }
    }
}

/// Reads and builds a model in one step.
pub fn load(path: &Path) -> Result<Automaton, ModelFileError> {
    ModelDocument::read(path)?.to_automaton(path)
}
