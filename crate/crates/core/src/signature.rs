//! Similarity types: named operation symbols with arities.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("empty signature")]
    Empty,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid symbol name `{0}`")]
    BadName(String),
    #[error("malformed arity for symbol `{0}`")]
    BadArity(String),
    #[error("malformed signature line `{0}`")]
    BadLine(String),
}

/// A single operation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpSym {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols with unique names.
///
/// A signature is *plural* when it has no nullary symbol and at least one
/// symbol of arity two or more. All of the semilattice-sum machinery
/// requires plurality; the flag is computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<OpSym>,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new(symbols: Vec<(impl Into<String>, usize)>) -> Result<Self, SignatureError> {
        let symbols: Vec<OpSym> = symbols
            .into_iter()
            .map(|(name, arity)| OpSym { name: name.into(), arity })
            .collect();
        if symbols.is_empty() {
            return Err(SignatureError::Empty);
        }
        for (i, sym) in symbols.iter().enumerate() {
            if !is_identifier(&sym.name) {
                return Err(SignatureError::BadName(sym.name.clone()));
            }
            if symbols[..i].iter().any(|s| s.name == sym.name) {
                return Err(SignatureError::DuplicateSymbol(sym.name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    /// Parses lines of the form `name arity`, one symbol per line.
    /// `#` starts a comment; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, SignatureError> {
        let mut symbols = Vec::new();
        for raw in text.lines() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (name, arity) = match (parts.next(), parts.next(), parts.next()) {
                (Some(name), Some(arity), None) => (name, arity),
                _ => return Err(SignatureError::BadLine(line.to_string())),
            };
            let arity: usize = arity
                .parse()
                .map_err(|_| SignatureError::BadArity(name.to_string()))?;
            symbols.push((name.to_string(), arity));
        }
        Signature::new(symbols)
    }

    pub fn symbols(&self) -> &[OpSym] {
        &self.symbols
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|s| s.name == name).map(|s| s.arity)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.arity(name).is_some()
    }

    /// No nullary symbol and at least one symbol of arity >= 2.
    pub fn is_plural(&self) -> bool {
        self.symbols.iter().all(|s| s.arity > 0) && self.symbols.iter().any(|s| s.arity >= 2)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for sym in &self.symbols {
            writeln!(f, "{} {}", sym.name, sym.arity)?;
        }
        Ok(())
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
