//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! canonical grevlex order, so equality is a plain term-set comparison and no
//! zero coefficients are ever stored. All values are immutable after
//! construction; operations are pure functions returning fresh polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::context::{ContextError, VariableContext};
use crate::degree::Degree;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("expected {expected} images for context {context}, got {given}")]
    ImageCount {
        context: String,
        expected: usize,
        given: usize,
    },
    #[error("image of `{0}` does not live over the declared target context")]
    ImageContext(String),
    #[error("cannot embed into {target}: variable `{missing}` is absent")]
    EmbedMissing { target: String, missing: String },
    #[error("contexts have different sizes: {left} vs {right}")]
    ArityMismatch { left: String, right: String },
}

/// Convenience constructor for integer rationals.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Convenience constructor for `n/d`.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse exact-rational multivariate polynomial over a fixed context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    context: VariableContext,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Polynomial {
    pub fn zero(context: VariableContext) -> Self {
        Polynomial { context, terms: BTreeMap::new() }
    }

    pub fn one(context: VariableContext) -> Self {
        Self::constant(context, BigRational::one())
    }

    pub fn constant(context: VariableContext, value: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::unit(context.len()), value);
        }
        Polynomial { context, terms }
    }

    pub fn variable(context: &VariableContext, name: &str) -> Result<Self, PolyError> {
        let idx = context.resolve(name)?;
        Ok(Self::from_monomial(
            context.clone(),
            Monomial::variable(context.len(), idx),
            BigRational::one(),
        ))
    }

    pub fn from_monomial(context: VariableContext, monomial: Monomial, coeff: BigRational) -> Self {
        assert_eq!(monomial.arity(), context.len(), "monomial arity mismatch");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(monomial, coeff);
        }
        Polynomial { context, terms }
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(context: VariableContext, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (mono, coeff) in terms {
            assert_eq!(mono.arity(), context.len(), "monomial arity mismatch");
            if coeff.is_zero() {
                continue;
            }
            match map.entry(mono) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &coeff;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Polynomial { context, terms: map }
    }

    pub fn context(&self) -> &VariableContext {
        &self.context
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_unit)
    }

    /// The constant value when the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (mono, coeff) = self.terms.iter().next().unwrap();
            if mono.is_unit() {
                return Some(coeff.clone());
            }
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical (grevlex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check_same_context(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.context != other.context {
            return Err(PolyError::ContextMismatch {
                left: self.context.to_string(),
                right: other.context.to_string(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_context(other)?;
        let mut terms = self.terms.clone();
        for (mono, coeff) in &other.terms {
            match terms.entry(mono.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + coeff;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Ok(Polynomial { context: self.context.clone(), terms })
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_same_context(other)?;
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono = ma.mul(mb);
                let coeff = ca * cb;
                match terms.entry(mono) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(coeff);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get() + &coeff;
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
        }
        Ok(Polynomial { context: self.context.clone(), terms })
    }

    fn neg_ref(&self) -> Polynomial {
        Polynomial {
            context: self.context.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Multiplies by a single term. Used heavily by polynomial reduction.
    pub fn mul_term(&self, coeff: &BigRational, mono: &Monomial) -> Polynomial {
        if coeff.is_zero() {
            return Polynomial::zero(self.context.clone());
        }
        Polynomial {
            context: self.context.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c * coeff))
                .collect(),
        }
    }

    pub fn scale(&self, coeff: &BigRational) -> Polynomial {
        self.mul_term(coeff, &Monomial::unit(self.context.len()))
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.context.clone());
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same context by construction");
        }
        acc
    }

    /// Formal partial derivative with respect to a named variable.
    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial, PolyError> {
        let idx = self.context.resolve(var)?;
        Ok(self.partial_derivative_idx(idx))
    }

    pub fn partial_derivative_idx(&self, idx: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(mono, coeff)| {
            let e = mono.exponent(idx);
            if e == 0 {
                return None;
            }
            let mut exps = mono.exponents().to_vec();
            exps[idx] = e - 1;
            Some((Monomial::from_exponents(exps), coeff * rat(i64::from(e))))
        });
        Polynomial::from_terms(self.context.clone(), terms)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| Degree::finite(m.total_degree()))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn degree_in(&self, var: &str) -> Result<Degree, PolyError> {
        let idx = self.context.resolve(var)?;
        Ok(self.degree_in_idx(idx))
    }

    pub fn degree_in_idx(&self, idx: usize) -> Degree {
        self.terms
            .keys()
            .map(|m| Degree::Finite(i64::from(m.exponent(idx))))
            .max()
            .unwrap_or(Degree::NegInfinity)
    }

    pub fn depends_on(&self, var: &str) -> Result<bool, PolyError> {
        Ok(self.degree_in(var)? > Degree::Finite(0))
    }

    /// Maximal monomial under the given order. Errors on the zero polynomial.
    pub fn leading_monomial(&self, order: &MonomialOrder) -> Result<Monomial, PolyError> {
        self.leading_term(order)
            .map(|(m, _)| m.clone())
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &BigRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    /// Coefficient (a polynomial in the remaining variables, over the same
    /// context) of `var^k`.
    pub fn coefficient_of_power(&self, idx: usize, k: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(idx) == k)
            .map(|(m, c)| (m.without_variable(idx), c.clone()));
        Polynomial::from_terms(self.context.clone(), terms)
    }

    /// Top homogeneous component (zero polynomial for zero input).
    pub fn top_degree_form(&self) -> Polynomial {
        match self.total_degree() {
            Degree::NegInfinity => self.clone(),
            Degree::Finite(d) => {
                let terms = self
                    .terms
                    .iter()
                    .filter(|(m, _)| m.total_degree() as i64 == d)
                    .map(|(m, c)| (m.clone(), c.clone()));
                Polynomial::from_terms(self.context.clone(), terms)
            }
        }
    }

    /// If `self == c * other` for a nonzero constant `c`, returns `c`.
    pub fn constant_ratio_to(&self, other: &Polynomial) -> Option<BigRational> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<BigRational> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ma != mb {
                return None;
            }
            let r = ca / cb;
            match &ratio {
                None => ratio = Some(r),
                Some(prev) if *prev == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    /// Applies a polynomial map: every variable is replaced by its image and
    /// the result is expanded over the map's target context.
    pub fn substitute(&self, map: &PolyMap) -> Result<Polynomial, PolyError> {
        if self.context != *map.source() {
            return Err(PolyError::ContextMismatch {
                left: self.context.to_string(),
                right: map.source().to_string(),
            });
        }
        let target = map.target().clone();
        // power cache per variable: powers[v][e] = image_v^e
        let mut powers: Vec<Vec<Polynomial>> = (0..self.context.len())
            .map(|_| vec![Polynomial::one(target.clone())])
            .collect();
        let mut acc = Polynomial::zero(target.clone());
        for (mono, coeff) in &self.terms {
            let mut term = Polynomial::constant(target.clone(), coeff.clone());
            for idx in mono.support() {
                let e = mono.exponent(idx) as usize;
                while powers[idx].len() <= e {
                    let next = powers[idx]
                        .last()
                        .unwrap()
                        .try_mul(map.image(idx))
                        .expect("images share the target context");
                    powers[idx].push(next);
                }
                term = term.try_mul(&powers[idx][e])?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Reinterprets the polynomial over a larger (or reordered) context,
    /// matching variables by name.
    pub fn embed(&self, target: &VariableContext) -> Result<Polynomial, PolyError> {
        let mapping = self.context.embedding_into(target).ok_or_else(|| {
            let missing = self
                .context
                .names()
                .iter()
                .find(|n| !target.contains(n))
                .cloned()
                .unwrap_or_default();
            PolyError::EmbedMissing { target: target.to_string(), missing }
        })?;
        let terms = self.terms.iter().map(|(mono, coeff)| {
            let mut exps = vec![0u32; target.len()];
            for (from, &to) in mapping.iter().enumerate() {
                exps[to] = mono.exponent(from);
            }
            (Monomial::from_exponents(exps), coeff.clone())
        });
        Ok(Polynomial::from_terms(target.clone(), terms))
    }

    /// Carries the terms positionally onto a same-size context (used when a
    /// generator is renamed).
    pub fn with_context(&self, target: &VariableContext) -> Result<Polynomial, PolyError> {
        if target.len() != self.context.len() {
            return Err(PolyError::ArityMismatch {
                left: self.context.to_string(),
                right: target.to_string(),
            });
        }
        Ok(Polynomial {
            context: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Divides by the leading coefficient under the given order.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition: context mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction: context mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication: context mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::format_polynomial(self))
    }
}

/// A named assignment of image polynomials to context variables.
///
/// Maps are total by construction: one image per source variable, all images
/// over one declared target context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    source: VariableContext,
    target: VariableContext,
    images: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(
        source: VariableContext,
        target: VariableContext,
        images: Vec<Polynomial>,
    ) -> Result<Self, PolyError> {
        if images.len() != source.len() {
            return Err(PolyError::ImageCount {
                context: source.to_string(),
                expected: source.len(),
                given: images.len(),
            });
        }
        for (i, image) in images.iter().enumerate() {
            if *image.context() != target {
                return Err(PolyError::ImageContext(source.name(i).to_string()));
            }
        }
        Ok(PolyMap { source, target, images })
    }

    pub fn identity(context: &VariableContext) -> Self {
        let images = context
            .names()
            .iter()
            .map(|n| Polynomial::variable(context, n).expect("name from context"))
            .collect();
        PolyMap {
            source: context.clone(),
            target: context.clone(),
            images,
        }
    }

    pub fn source(&self) -> &VariableContext {
        &self.source
    }

    pub fn target(&self) -> &VariableContext {
        &self.target
    }

    pub fn image(&self, idx: usize) -> &Polynomial {
        &self.images[idx]
    }

    pub fn image_of(&self, name: &str) -> Result<&Polynomial, PolyError> {
        Ok(&self.images[self.source.resolve(name)?])
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    /// Composition: first apply `self`, then `next` (i.e. `x ↦ next(self(x))`).
    pub fn then(&self, next: &PolyMap) -> Result<PolyMap, PolyError> {
        let images = self
            .images
            .iter()
            .map(|img| img.substitute(next))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMap::new(self.source.clone(), next.target().clone(), images)
    }

    /// True when source and target coincide and every variable maps to itself.
    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.images.iter().enumerate().all(|(i, img)| {
                img.num_terms() == 1
                    && img
                        .terms()
                        .next()
                        .map(|(m, c)| {
                            c.is_one() && *m == Monomial::variable(self.source.len(), i)
                        })
                        .unwrap_or(false)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn ctx_xyz() -> VariableContext {
        VariableContext::new(["x", "y", "z"]).unwrap()
    }

    fn p(ctx: &VariableContext, s: &str) -> Polynomial {
        parse_polynomial(s, ctx).unwrap()
    }

    #[test]
    fn addition_cancels() {
        let c = VariableContext::new(["x", "y"]).unwrap();
        let sum = &p(&c, "x + y") + &p(&c, "x - y");
        assert_eq!(sum, p(&c, "2*x"));
    }

    #[test]
    fn binomial_square() {
        let c = VariableContext::new(["x"]).unwrap();
        assert_eq!(p(&c, "x + 1").pow(2), p(&c, "x^2 + 2*x + 1"));
    }

    #[test]
    fn self_subtraction_is_zero() {
        let c = ctx_xyz();
        let q = p(&c, "x*y^2 + z^2 + 1");
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = Polynomial::one(VariableContext::new(["x"]).unwrap());
        let b = Polynomial::one(VariableContext::new(["y"]).unwrap());
        assert!(matches!(a.try_add(&b), Err(PolyError::ContextMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(PolyError::ContextMismatch { .. })));
    }

    #[test]
    fn partial_derivatives() {
        let c = ctx_xyz();
        assert_eq!(
            p(&c, "x*y^2 + z^2 + 1").partial_derivative("y").unwrap(),
            p(&c, "2*x*y")
        );
        assert_eq!(
            p(&c, "x*y^2 + z^2*y - z^2 + y - 1").partial_derivative("z").unwrap(),
            p(&c, "2*y*z - 2*z")
        );
        assert!(p(&c, "y^2 + 1").partial_derivative("x").unwrap().is_zero());
        assert!(p(&c, "y^2 + 1").partial_derivative("t").is_err());
    }

    #[test]
    fn degrees_and_sentinel() {
        let c = ctx_xyz();
        assert_eq!(p(&c, "x*z^2").degree_in("z").unwrap(), Degree::Finite(2));
        assert_eq!(p(&c, "x*y^2 + z^2 + 1").total_degree(), Degree::Finite(3));
        assert_eq!(p(&c, "x + y").degree_in("z").unwrap(), Degree::Finite(0));
        assert_eq!(Polynomial::zero(c.clone()).total_degree(), Degree::NegInfinity);
        assert_eq!(Polynomial::zero(c).degree_in("z").unwrap(), Degree::NegInfinity);
    }

    #[test]
    fn leading_monomial_lexdeg() {
        use crate::order::{MonomialOrder, OrderKind};
        let c = VariableContext::new(["x", "y"]).unwrap();
        let ord = MonomialOrder::with_priority(OrderKind::LexDeg, &c, &["y"]).unwrap();
        let lm = p(&c, "x*y + x^2").leading_monomial(&ord).unwrap();
        assert_eq!(lm, Monomial::from_exponents(vec![1, 1]));
        let lm = p(&c, "x^3*y + x*y^2").leading_monomial(&ord).unwrap();
        assert_eq!(lm, Monomial::from_exponents(vec![3, 1]));
        let lm = p(&c, "5").leading_monomial(&ord).unwrap();
        assert!(lm.is_unit());
        assert!(Polynomial::zero(c).leading_monomial(&ord).is_err());
    }

    #[test]
    fn substitution_identity_and_shift() {
        let c = ctx_xyz();
        let q = p(&c, "x*y^2 + z^2 + 1");
        let id = PolyMap::identity(&c);
        assert_eq!(q.substitute(&id).unwrap(), q);

        let shift = PolyMap::new(
            c.clone(),
            c.clone(),
            vec![p(&c, "x + 1"), p(&c, "y"), p(&c, "z")],
        )
        .unwrap();
        assert_eq!(p(&c, "x^2").substitute(&shift).unwrap(), p(&c, "x^2 + 2*x + 1"));
    }

    #[test]
    fn coefficient_extraction() {
        let c = ctx_xyz();
        let q = p(&c, "x*z^2 + y*z^2 + z + 7");
        let z = c.resolve("z").unwrap();
        assert_eq!(q.coefficient_of_power(z, 2), p(&c, "x + y"));
        assert_eq!(q.coefficient_of_power(z, 0), p(&c, "7"));
        assert_eq!(q.top_degree_form(), p(&c, "x*z^2 + y*z^2"));
    }

    #[test]
    fn constant_ratio() {
        let c = ctx_xyz();
        assert_eq!(
            p(&c, "2*x + 2*y").constant_ratio_to(&p(&c, "x + y")),
            Some(rat(2))
        );
        assert_eq!(
            p(&c, "-3*x*y^2").constant_ratio_to(&p(&c, "x*y^2")),
            Some(rat(-3))
        );
        assert_eq!(p(&c, "x + 2*y").constant_ratio_to(&p(&c, "x + y")), None);
        assert_eq!(p(&c, "x").constant_ratio_to(&p(&c, "y")), None);
    }

    #[test]
    fn embedding_by_name() {
        let small = VariableContext::new(["y", "x"]).unwrap();
        let big = ctx_xyz();
        let q = p(&small, "x*y^2 + x");
        let embedded = q.embed(&big).unwrap();
        assert_eq!(embedded, p(&big, "x*y^2 + x"));
        assert!(p(&big, "z").embed(&small).is_err());
    }

    #[test]
    fn map_then_composes() {
        let c = ctx_xyz();
        let f = PolyMap::new(c.clone(), c.clone(), vec![p(&c, "x + y"), p(&c, "y"), p(&c, "z")]).unwrap();
        let g = PolyMap::new(c.clone(), c.clone(), vec![p(&c, "x"), p(&c, "y + 1"), p(&c, "z")]).unwrap();
        let fg = f.then(&g).unwrap();
        // x ↦ x + y ↦ x + y + 1
        assert_eq!(fg.image_of("x").unwrap(), &p(&c, "x + y + 1"));
        assert!(PolyMap::identity(&c).is_identity());
        assert!(!f.is_identity());
    }
}
