//! Surgery-pipeline script language: parser, validator, executor, and
//! report emitter.
//!
//! A script drives one construction: it starts from a base model, performs
//! knot surgeries and blow-ups, declares embedded configurations over a
//! lattice dataset, rationally blows them down, and asserts the resulting
//! invariants. See `scripts/` for the shipped pipelines and `README.md`
//! for the grammar.

mod ast;
mod dataset;
mod exec;
mod lex;
mod parse;
mod report;

pub use ast::{AlexSpec, Atom, ClassExpr, ConfigDecl, NExpr, Script, Stmt, StmtKind};
pub use dataset::{eval_class_expr, parse_dataset, Dataset};
pub use exec::{execute, ExecError, ExecErrorKind};
pub use parse::{parse, validate, ParseError};
pub use report::{
    nondiffeo_certificate, AssertionRecord, FreedmanOutcome, NondiffeoPartition, Report,
    StepRecord,
};

use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("script has no `start ... dataset=...` statement")]
    MissingDataset,
}

/// Load a script file and the dataset referenced by its `start` statement
/// (path resolved relative to the script's directory).
pub fn load_script_file(path: &Path) -> Result<(Script, Dataset), LoadError> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|source| LoadError::Io {
            path: p.display().to_string(),
            source,
        })
    };
    let text = read(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "script".to_string());
    let script = parse(&name, &text).map_err(|source| LoadError::Parse {
        path: path.display().to_string(),
        source,
    })?;

    let dataset_rel = script
        .statements
        .iter()
        .find_map(|s| match &s.kind {
            StmtKind::Start { dataset: Some(d), .. } => Some(d.clone()),
            _ => None,
        })
        .ok_or(LoadError::MissingDataset)?;
    let dataset_path = path.parent().unwrap_or(Path::new(".")).join(dataset_rel);
    let dataset_text = read(&dataset_path)?;
    let dataset = parse_dataset(&dataset_text).map_err(|source| LoadError::Parse {
        path: dataset_path.display().to_string(),
        source,
    })?;
    Ok((script, dataset))
}
