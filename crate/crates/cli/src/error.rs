use serde::{Deserialize, Serialize};
use thiserror::Error;

use cvwalk::dirichlet::FormError;
use cvwalk::evolution::EvolutionError;
use cvwalk::groups::{GroupError, ParseError};
use cvwalk::markov_graph::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidConfig,
    Parse,
    Io,
    Graph,
    Group,
    Form,
    BudgetExhausted,
    SupportOverflow,
    UnknownDistance,
}

impl ErrorCode {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCode::InvalidConfig => 2,
            ErrorCode::Parse => 3,
            ErrorCode::Io => 4,
            ErrorCode::Graph => 5,
            ErrorCode::Group => 6,
            ErrorCode::Form => 7,
            ErrorCode::BudgetExhausted => 8,
            ErrorCode::SupportOverflow => 9,
            ErrorCode::UnknownDistance => 10,
        }
    }
}

/// Machine-readable failure, printed as `{"error": {...}}`.
#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
#[error("{code:?}: {message}")]
pub struct CliError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

impl CliError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), position: None }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::InvalidConfig, message)
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        Self { code: ErrorCode::Parse, message: e.msg.clone(), position: Some(e.pos) }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Format(m) => Self::new(ErrorCode::Parse, m),
            other => Self::new(ErrorCode::Graph, other.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Parse(p) => p.into(),
            GroupError::Graph(g) => g.into(),
            other => Self::new(ErrorCode::Group, other.to_string()),
        }
    }
}

impl From<FormError> for CliError {
    fn from(e: FormError) -> Self {
        match e {
            FormError::Graph(g) => g.into(),
            other => Self::new(ErrorCode::Form, other.to_string()),
        }
    }
}

impl From<EvolutionError> for CliError {
    fn from(e: EvolutionError) -> Self {
        match e {
            EvolutionError::SupportOverflow { .. } => Self::new(ErrorCode::SupportOverflow, e.to_string()),
            EvolutionError::UnknownDistance(_) => Self::new(ErrorCode::UnknownDistance, e.to_string()),
            EvolutionError::Group(g) => g.into(),
            EvolutionError::Invalid(m) => Self::config(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(ErrorCode::Io, e.to_string())
    }
}
