use centralab::LabError;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Config,
    Numeric,
    Io,
    Replay,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Config => 2,
            FailureKind::Numeric => 3,
            FailureKind::Io => 4,
            FailureKind::Replay => 5,
        }
    }
}

/// Machine-readable error report written to stderr as one JSON object.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub status: &'static str,
    pub kind: FailureKind,
    pub message: String,
    /// File holding the failing sample, ready for `replay`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_sample: Option<String>,
}

impl Failure {
    fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Failure {
            status: "error",
            kind,
            message: message.into(),
            failing_sample: None,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Failure::new(FailureKind::Config, message)
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Failure::new(FailureKind::Numeric, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure::new(FailureKind::Io, message)
    }

    pub fn replay(message: impl Into<String>) -> Self {
        Failure::new(FailureKind::Replay, message)
    }

    pub fn from_lab_config(e: LabError) -> Self {
        Failure::config(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| {
            format!(r#"{{"status":"error","kind":"io","message":{:?}}}"#, self.message)
        })
    }
}
