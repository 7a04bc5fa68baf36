use thiserror::Error;

/// Operational errors; every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("no blocks")]
    NoBlocks,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("non-rational scalar `{value}` at line {line}, column {column}: use an integer or a \"p/q\" string")]
    NonRational { value: String, line: usize, column: usize },
    #[error("unsupported schema version {found} at line {line}, column {column}")]
    Schema { found: u64, line: usize, column: usize },
    #[error("dangling reference `{name}` in block `{referenced_by}`{} at line {line}, column {column}", if *.forward { " (defined later; blocks may only refer to earlier blocks)" } else { "" })]
    Dangling { name: String, referenced_by: String, forward: bool, line: usize, column: usize },
    #[error("duplicate block name `{name}` at line {line}, column {column}")]
    DuplicateName { name: String, line: usize, column: usize },
    #[error("block `{block}` at line {line}, column {column}: {message}")]
    Block { block: String, message: String, line: usize, column: usize },
    #[error("no block named `{0}`")]
    UnknownTarget(String),
    #[error("`{command}` cannot run on block `{target}` of type {kind}")]
    WrongTarget { command: String, target: String, kind: String },
    #[error("`{0}` found no suitable block in the file")]
    NoTarget(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("`{command}` on `{target}`: {message}")]
    Operation { command: String, target: String, message: String },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::NoBlocks => "no_blocks",
            CliError::Syntax { .. } => "syntax",
            CliError::Schema { .. } => "schema",
            CliError::NonRational { .. } => "non_rational",
            CliError::Dangling { .. } => "dangling_reference",
            CliError::DuplicateName { .. } => "duplicate_name",
            CliError::Block { .. } => "invalid_block",
            CliError::UnknownTarget(_) => "unknown_target",
            CliError::WrongTarget { .. } => "wrong_target",
            CliError::NoTarget(_) => "no_target",
            CliError::UnknownCommand(_) => "unknown_command",
            CliError::Operation { .. } => "operation",
        }
    }

    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            CliError::Syntax { line, column, .. }
            | CliError::Schema { line, column, .. }
            | CliError::NonRational { line, column, .. }
            | CliError::Dangling { line, column, .. }
            | CliError::DuplicateName { line, column, .. }
            | CliError::Block { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

/// 1-based line and column of the first occurrence of `needle`, or `(0, 0)`.
pub fn locate(text: &str, needle: &str) -> (usize, usize) {
    match text.find(needle) {
        Some(offset) => {
            let before = &text[..offset];
            let line = before.matches('\n').count() + 1;
            let column = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
            (line, column)
        }
        None => (0, 0),
    }
}
