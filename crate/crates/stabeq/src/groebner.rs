//! Desk-scale Buchberger engine: reduced Gröbner bases, ideal membership,
//! emptiness of varieties over the algebraic closure (weak Nullstellensatz),
//! and combinatorial ideal dimension from the initial ideal.
//!
//! Pair selection is normal (sugar) selection with Buchberger's product and
//! chain criteria; runs are deterministic for a fixed input and order. A
//! configurable watchdog bounds the working degree and the number of pairs
//! processed — exceeding a cap is an explicit error, never a silent wrong
//! answer.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::context::VariableContext;
use crate::degree::Degree;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::{PolyError, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("generator {0} is the zero polynomial")]
    ZeroGenerator(usize),
    #[error("generators and order must share one context")]
    MixedContexts,
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

/// Caps for a Buchberger run. Defaults are generous for desk-scale inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerConfig {
    /// Maximal total degree any basis element may reach.
    pub max_degree: u64,
    /// Maximal number of S-pairs processed.
    pub max_pairs: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig { max_degree: 40, max_pairs: 5000 }
    }
}

/// A finitely generated ideal together with the monomial order used to
/// compute with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
}

impl Ideal {
    /// Generators must be nonzero and live over the order's context. An empty
    /// generator list is allowed and denotes the zero ideal.
    pub fn new(generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, GroebnerError> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                return Err(GroebnerError::ZeroGenerator(i));
            }
            if g.context() != order.context() {
                return Err(GroebnerError::MixedContexts);
            }
        }
        Ok(Ideal { generators, order })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn context(&self) -> &VariableContext {
        self.order.context()
    }
}

/// A reduced Gröbner basis: auto-reduced, monic, sorted by leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    elements: Vec<Polynomial>,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn context(&self) -> &VariableContext {
        self.order.context()
    }

    /// Ideal membership: true iff the normal form of `f` modulo the basis is
    /// zero.
    pub fn contains(&self, f: &Polynomial) -> Result<bool, GroebnerError> {
        if f.context() != self.order.context() {
            return Err(GroebnerError::MixedContexts);
        }
        Ok(normal_form(f, &self.elements, &self.order).is_zero())
    }

    /// True iff the basis is `{1}`, i.e. the ideal is the whole ring.
    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_one()
    }
}

/// Full normal form of `f` modulo the (not necessarily reduced) list `basis`:
/// leading terms are rewritten by the first applicable reducer, irreducible
/// leading terms move to the remainder.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let mut work = f.clone();
    let mut remainder = Polynomial::zero(f.context().clone());
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = work.leading_term(order).expect("nonzero");
            (m.clone(), c.clone())
        };
        for g in basis {
            let (glm, glc) = g.leading_term(order).expect("basis elements are nonzero");
            if glm.divides(&lm) {
                let quot_mono = glm.checked_div(&lm).expect("divides");
                let quot_coeff = &lc / glc;
                work = work
                    .try_sub(&g.mul_term(&quot_coeff, &quot_mono))
                    .expect("shared context");
                continue 'outer;
            }
        }
        let head = Polynomial::from_monomial(f.context().clone(), lm.clone(), lc.clone());
        remainder = remainder.try_add(&head).expect("shared context");
        work = work.try_sub(&head).expect("shared context");
    }
    remainder
}

/// The S-polynomial of `f` and `g`.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (flm, flc) = f.leading_term(order).expect("nonzero");
    let (glm, glc) = g.leading_term(order).expect("nonzero");
    let lcm = flm.lcm(glm);
    let fm = flm.checked_div(&lcm).expect("lcm");
    let gm = glm.checked_div(&lcm).expect("lcm");
    let left = f.mul_term(&flc.recip(), &fm);
    let right = g.mul_term(&glc.recip(), &gm);
    left.try_sub(&right).expect("shared context")
}

fn pair_key(
    i: usize,
    j: usize,
    basis: &[Polynomial],
    sugars: &[u64],
    order: &MonomialOrder,
) -> (u64, Monomial, usize, usize) {
    let lm_i = basis[i].leading_term(order).expect("nonzero").0;
    let lm_j = basis[j].leading_term(order).expect("nonzero").0;
    let lcm = lm_i.lcm(lm_j);
    let sugar = (sugars[i] + (lcm.total_degree() - lm_i.total_degree()))
        .max(sugars[j] + (lcm.total_degree() - lm_j.total_degree()));
    (sugar, lcm, i, j)
}

/// Computes the reduced Gröbner basis of the ideal under its order.
pub fn buchberger(ideal: &Ideal, config: &GroebnerConfig) -> Result<GroebnerBasis, GroebnerError> {
    let order = ideal.order.clone();
    let mut basis: Vec<Polynomial> = ideal.generators.to_vec();
    let mut sugars: Vec<u64> = basis
        .iter()
        .map(|g| g.total_degree().clamp_zero())
        .collect();

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 1..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }

    let mut processed = 0usize;
    while !pending.is_empty() {
        // normal selection: smallest (sugar, lcm, i, j)
        let &(i, j) = pending
            .iter()
            .min_by(|&&(ai, aj), &&(bi, bj)| {
                let ka = pair_key(ai, aj, &basis, &sugars, &order);
                let kb = pair_key(bi, bj, &basis, &sugars, &order);
                ka.0
                    .cmp(&kb.0)
                    .then_with(|| order.cmp(&ka.1, &kb.1))
                    .then_with(|| (ka.2, ka.3).cmp(&(kb.2, kb.3)))
            })
            .expect("nonempty");
        pending.remove(&(i, j));

        processed += 1;
        if processed > config.max_pairs {
            return Err(GroebnerError::Resource(format!(
                "more than {} S-pairs processed",
                config.max_pairs
            )));
        }

        let lm_i = basis[i].leading_term(&order).expect("nonzero").0.clone();
        let lm_j = basis[j].leading_term(&order).expect("nonzero").0.clone();

        // product criterion
        if lm_i.coprime_with(&lm_j) {
            continue;
        }
        // chain criterion: some k with lm_k | lcm(i, j) whose pairs with both
        // i and j are already handled
        let lcm_ij = lm_i.lcm(&lm_j);
        let chain_hit = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let lm_k = basis[k].leading_term(&order).expect("nonzero").0;
            lm_k.divides(&lcm_ij)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain_hit {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j], &order);
        let reduced = normal_form(&s, &basis, &order);
        if reduced.is_zero() {
            continue;
        }
        if reduced.total_degree().clamp_zero() > config.max_degree {
            return Err(GroebnerError::Resource(format!(
                "working degree exceeded {} (reached {})",
                config.max_degree,
                reduced.total_degree()
            )));
        }
        let sugar = pair_key(i, j, &basis, &sugars, &order).0;
        let new_index = basis.len();
        basis.push(reduced.monic(&order));
        sugars.push(sugar);
        for t in 0..new_index {
            pending.insert((t, new_index));
        }
    }

    Ok(reduce_basis(basis, order))
}

/// Minimalizes and auto-reduces a Gröbner basis, returning it monic and
/// sorted by leading monomial.
fn reduce_basis(mut basis: Vec<Polynomial>, order: MonomialOrder) -> GroebnerBasis {
    basis.retain(|g| !g.is_zero());
    // minimal: drop g when another kept element's lm divides lm(g)
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_term(&order).expect("nonzero").0.clone())
        .collect();
    let mut keep = vec![true; basis.len()];
    for a in 0..basis.len() {
        if !keep[a] {
            continue;
        }
        for b in 0..basis.len() {
            if a == b || !keep[b] {
                continue;
            }
            if lms[b].divides(&lms[a]) && (lms[b] != lms[a] || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Polynomial> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g.monic(&order))
        .collect();

    // inter-reduce to the unique reduced basis
    loop {
        let mut changed = false;
        for i in 0..minimal.len() {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let reduced = normal_form(&minimal[i], &others, &order).monic(&order);
            if reduced != minimal[i] {
                minimal[i] = reduced;
                changed = true;
            }
        }
        minimal.retain(|g| !g.is_zero());
        if !changed {
            break;
        }
    }

    minimal.sort_by(|a, b| {
        let la = a.leading_term(&order).expect("nonzero").0;
        let lb = b.leading_term(&order).expect("nonzero").0;
        order.cmp(la, lb)
    });
    GroebnerBasis { elements: minimal, order }
}

/// Weak Nullstellensatz test: the generators have no common zero over the
/// algebraic closure iff the reduced basis is `{1}`.
pub fn is_variety_empty(basis: &GroebnerBasis) -> bool {
    basis.is_trivial()
}

/// Krull dimension of the quotient ring, computed combinatorially as the
/// largest set of variables independent modulo the initial ideal. Returns
/// `-1` for the empty variety and the full ambient dimension for the zero
/// ideal.
pub fn ideal_dimension(basis: &GroebnerBasis) -> i64 {
    let n = basis.context().len();
    let supports: Vec<Vec<usize>> = basis
        .elements
        .iter()
        .map(|g| {
            g.leading_term(&basis.order)
                .expect("nonzero")
                .0
                .support()
                .collect()
        })
        .collect();
    assert!(n < 32, "dimension computation expects desk-scale contexts");
    let mut best: i64 = -1;
    for mask in 0u32..(1u32 << n) {
        let independent = !supports.iter().any(|support| {
            support.iter().all(|&v| mask & (1 << v) != 0)
        });
        if independent {
            best = best.max(mask.count_ones() as i64);
        }
    }
    best
}
