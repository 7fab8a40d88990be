//! Field and plan files, and SVG rendering.

mod field_file;
mod plan_file;
mod svg;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use field_file::{load_field, parse_field, write_field, FieldFile, FIELD_SCHEMA_VERSION};
pub use plan_file::{
    read_plan, recompute_metrics, write_json, CompareReport, OptionsEcho, PlanFile,
    PLAN_SCHEMA_VERSION,
};
pub use svg::{render_svg, write_svg};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {field}: {message}")]
    Semantic { field: String, message: String },
}

impl IoError {
    pub(crate) fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn semantic(field: impl Into<String>, message: impl ToString) -> Self {
        IoError::Semantic {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
