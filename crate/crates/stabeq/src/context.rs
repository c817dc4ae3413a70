//! Ordered variable contexts.
//!
//! A [`VariableContext`] fixes the ambient polynomial ring: an ordered list
//! of distinct variable names. Every polynomial, map, derivation and matrix
//! in this crate refers to exactly one context, and the order is significant
//! (monomial orders, gradients and display all follow it). Contexts compare
//! by value, so two independently built contexts over the same names are
//! interchangeable.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextError {
    #[error("variable name `{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is already present in the context")]
    NameCollision(String),
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Inner {
    names: Vec<String>,
}

/// An ordered list of distinct variable identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext(Arc<Inner>);

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VariableContext {
    /// Builds a context from identifiers, preserving their order.
    pub fn new<I, S>(names: I) -> Result<Self, ContextError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(ContextError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(ContextError::DuplicateName(name.clone()));
            }
        }
        Ok(VariableContext(Arc::new(Inner { names })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    /// Name of the variable at `idx`. Panics if out of range.
    pub fn name(&self, idx: usize) -> &str {
        &self.0.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn resolve(&self, name: &str) -> Result<usize, ContextError> {
        self.index_of(name)
            .ok_or_else(|| ContextError::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// New context with `name` appended.
    pub fn with_variable(&self, name: &str) -> Result<Self, ContextError> {
        if self.contains(name) {
            return Err(ContextError::NameCollision(name.to_string()));
        }
        let mut names = self.0.names.clone();
        names.push(name.to_string());
        VariableContext::new(names)
    }

    /// New context with `name` removed, other variables keeping their order.
    pub fn without_variable(&self, name: &str) -> Result<Self, ContextError> {
        self.resolve(name)?;
        VariableContext::new(self.0.names.iter().filter(|n| *n != name).cloned())
    }

    /// New context with `from` renamed to `to`, in place.
    pub fn renamed(&self, from: &str, to: &str) -> Result<Self, ContextError> {
        let idx = self.resolve(from)?;
        if self.contains(to) {
            return Err(ContextError::NameCollision(to.to_string()));
        }
        let mut names = self.0.names.clone();
        names[idx] = to.to_string();
        VariableContext::new(names)
    }

    /// For each variable of `self`, its index in `target` (matched by name).
    /// `None` if some variable of `self` is absent from `target`.
    pub fn embedding_into(&self, target: &VariableContext) -> Option<Vec<usize>> {
        self.0
            .names
            .iter()
            .map(|n| target.index_of(n))
            .collect()
    }
}

impl fmt::Display for VariableContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_resolves() {
        let ctx = VariableContext::new(["x", "y", "z"]).unwrap();
        assert_eq!(ctx.len(), 3);
        assert_eq!(ctx.index_of("y"), Some(1));
        assert_eq!(ctx.resolve("t"), Err(ContextError::UnknownVariable("t".into())));
    }

    #[test]
    fn rejects_duplicates_and_bad_names() {
        assert_eq!(
            VariableContext::new(["x", "x"]),
            Err(ContextError::DuplicateName("x".into()))
        );
        assert_eq!(
            VariableContext::new(["2x"]),
            Err(ContextError::InvalidName("2x".into()))
        );
        assert!(VariableContext::new(["x1", "x2", "_t"]).is_ok());
    }

    #[test]
    fn value_equality_across_instances() {
        let a = VariableContext::new(["x", "y"]).unwrap();
        let b = VariableContext::new(["x", "y"]).unwrap();
        let c = VariableContext::new(["y", "x"]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn extend_remove_rename() {
        let ctx = VariableContext::new(["x", "y"]).unwrap();
        let ext = ctx.with_variable("z").unwrap();
        assert_eq!(ext.names(), ["x", "y", "z"]);
        assert!(ctx.with_variable("x").is_err());
        let rem = ext.without_variable("y").unwrap();
        assert_eq!(rem.names(), ["x", "z"]);
        let ren = ctx.renamed("y", "u").unwrap();
        assert_eq!(ren.names(), ["x", "u"]);
        assert!(ctx.renamed("y", "x").is_err());
    }

    #[test]
    fn embeddings_match_by_name() {
        let small = VariableContext::new(["y", "x"]).unwrap();
        let big = VariableContext::new(["x", "y", "z"]).unwrap();
        assert_eq!(small.embedding_into(&big), Some(vec![1, 0]));
        assert_eq!(big.embedding_into(&small), None);
    }
}
