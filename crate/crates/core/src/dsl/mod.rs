//! A small language for describing computable Peano structures.
//!
//! ```text
//! model m1_omega_plus_omega {
//!   sort A(n: nat)
//!   sort B(n: nat)
//!   zero A(0)
//!   succ A(n) -> A(n + 1)
//!   succ B(n) -> B(n + 1)
//!   less A(m) < A(n) iff m < n
//!   less B(m) < B(n) iff m < n
//!   less A(m) < B(n) iff true
//!   rank order A(n) -> n
//!   rank order B(n) -> w + n
//! }
//! ```
//!
//! Arguments are affine integer expressions. Patterns bind one variable per
//! parameter; guards combine comparisons, `even`/`odd`, `not`, `and`, `or`.
//! When no `pred` rules are given they are derived by inverting `succ`.

pub mod ast;
mod compile;
mod lexer;
mod parser;
mod validate;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use ast::ModelAst;
pub use compile::{compile, CompiledModel, Inverse, PredSource};
pub use parser::parse;
pub use validate::{Coverage, ValidationError, SAMPLE};

use crate::gallery::{self, ModelId};
use crate::principles::{verify_reachability, Evidence, EvidenceBundle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid model:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<ValidationError>),
}

/// Parses, validates and compiles a `.model` source.
pub fn load(source: &str) -> Result<CompiledModel, DslError> {
    compile(parse(source)?).map_err(DslError::Invalid)
}

/// The builtin model a compiled model stands for, if its name is a gallery id.
pub fn gallery_link(model: &CompiledModel) -> Option<ModelId> {
    use crate::model::Model;
    ModelId::ALL.into_iter().find(|id| id.as_str() == model.name())
}

/// Source text of the `.model` transcription of a builtin.
pub fn gallery_source(id: ModelId) -> &'static str {
    match id {
        ModelId::Std => include_str!("../../models/std.model"),
        ModelId::M1OmegaPlusOmega => include_str!("../../models/m1.model"),
        ModelId::M2OmegaIncomparable => include_str!("../../models/m2.model"),
        ModelId::M3Grid => include_str!("../../models/m3.model"),
        ModelId::M4OmegaPlusZeta => include_str!("../../models/m4.model"),
        ModelId::M5Reversed => include_str!("../../models/m5.model"),
        ModelId::M6Braid => include_str!("../../models/m6.model"),
        ModelId::M7Discrete => include_str!("../../models/m7.model"),
        ModelId::M8OmegaPlusZetaCut => include_str!("../../models/m8.model"),
    }
}

/// Evidence for a compiled model: the builtin bundle when the model is a
/// gallery transcription, otherwise its rank certificates plus a
/// reachability certificate when one verifies.
pub fn evidence_for(model: &CompiledModel, budget: usize) -> EvidenceBundle {
    if let Some(id) = gallery_link(model) {
        return gallery::evidence(id);
    }
    let mut items = model.rank_certificates();
    if verify_reachability(model, budget).is_ok_and(|c| c.is_verified()) {
        items.push(Evidence::Reachability);
    }
    EvidenceBundle::new(items)
}
