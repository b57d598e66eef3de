use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pnfree::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(pnfree::Error::CapExceeded { .. }) => "cap",
            CliError::Core(pnfree::Error::Incomplete { .. }) => "budget",
            CliError::Core(pnfree::Error::Parse(_)) => "parse",
            CliError::Core(_) => "domain",
            CliError::Io(_) | CliError::Csv(_) => "io",
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}
