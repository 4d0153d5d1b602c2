//! Text formats for schemas, dependencies, databases, queries and sentences.
//!
//! Identifiers bound by the nearest enclosing `forall`/`exists` are variables;
//! every other identifier (and every numeral) is a constant.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use parser::{
    parse_database, parse_dependencies, parse_document, parse_fo, parse_query, Document, Section,
};
pub use printer::{print_database, print_dependencies, print_facts, print_fo, print_schema};

/// Location of a token: 1-based line and column plus byte offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    Lex,
    Syntax,
    Arity,
    UnknownPredicate,
    Safety,
    UnboundVar,
    DuplicateDecl,
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCode::Lex => "lex",
            ErrorCode::Syntax => "syntax",
            ErrorCode::Arity => "arity",
            ErrorCode::UnknownPredicate => "unknown-predicate",
            ErrorCode::Safety => "safety",
            ErrorCode::UnboundVar => "unbound-var",
            ErrorCode::DuplicateDecl => "duplicate-decl",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{}:{}: {message} [{code}]", span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub code: ErrorCode,
    pub message: String,
}

impl ParseError {
    pub fn new(span: SourceSpan, code: ErrorCode, message: impl Into<String>) -> Self {
        ParseError {
            span,
            code,
            message: message.into(),
        }
    }
}
