//! Monomial orders: lex, grevlex and degree-then-lex, each with an explicit
//! variable priority (a permutation of the context, strongest variable first).

use std::cmp::Ordering;
use std::fmt;

use crate::context::{ContextError, VariableContext};
use crate::monomial::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    /// Pure lexicographic.
    Lex,
    /// Graded reverse lexicographic.
    GrevLex,
    /// Total degree first, ties broken lexicographically ("lexdeg").
    LexDeg,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::Lex => write!(f, "lex"),
            OrderKind::GrevLex => write!(f, "grevlex"),
            OrderKind::LexDeg => write!(f, "lexdeg"),
        }
    }
}

/// A concrete monomial order on a fixed context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    context: VariableContext,
    /// Permutation of variable indices, strongest first.
    priority: Vec<usize>,
}

impl MonomialOrder {
    /// Order of the given kind with the context's own variable order as priority.
    pub fn new(kind: OrderKind, context: &VariableContext) -> Self {
        MonomialOrder {
            kind,
            context: context.clone(),
            priority: (0..context.len()).collect(),
        }
    }

    pub fn lex(context: &VariableContext) -> Self {
        Self::new(OrderKind::Lex, context)
    }

    pub fn grevlex(context: &VariableContext) -> Self {
        Self::new(OrderKind::GrevLex, context)
    }

    pub fn lexdeg(context: &VariableContext) -> Self {
        Self::new(OrderKind::LexDeg, context)
    }

    /// Order with an explicit priority prefix: the named variables rank
    /// strongest, in the order given; remaining variables follow in context
    /// order. `lexdeg(y > x)` over `(x, y)` is `with_priority(LexDeg, ctx, ["y"])`.
    pub fn with_priority(
        kind: OrderKind,
        context: &VariableContext,
        strongest_first: &[&str],
    ) -> Result<Self, ContextError> {
        let mut priority = Vec::with_capacity(context.len());
        for name in strongest_first {
            let idx = context.resolve(name)?;
            if priority.contains(&idx) {
                return Err(ContextError::DuplicateName(name.to_string()));
            }
            priority.push(idx);
        }
        for idx in 0..context.len() {
            if !priority.contains(&idx) {
                priority.push(idx);
            }
        }
        Ok(MonomialOrder { kind, context: context.clone(), priority })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn context(&self) -> &VariableContext {
        &self.context
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.arity(), self.context.len());
        debug_assert_eq!(b.arity(), self.context.len());
        match self.kind {
            OrderKind::Lex => self.cmp_lex(a, b),
            OrderKind::LexDeg => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| self.cmp_lex(a, b)),
            OrderKind::GrevLex => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| {
                    for &idx in self.priority.iter().rev() {
                        match a.exponent(idx).cmp(&b.exponent(idx)) {
                            Ordering::Equal => continue,
                            ord => return ord.reverse(),
                        }
                    }
                    Ordering::Equal
                }),
        }
    }

    fn cmp_lex(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &idx in &self.priority {
            match a.exponent(idx).cmp(&b.exponent(idx)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.priority.iter().map(|&i| self.context.name(i)).collect();
        write!(f, "{}({})", self.kind, names.join(" > "))
    }
}
