//! Derivations on polynomial rings: Jacobian derivations, bounded
//! local-nilpotency certification, the chain-rule factorization of Jacobians,
//! slices, kernel membership, and extension by new kernel variables.
//!
//! A derivation is represented by its images on the context variables; the
//! unique extension to the whole ring is computed on demand through
//! `D(g) = Σ D(x_i) · ∂g/∂x_i`, so equality of derivations is equality of
//! image tables. Local nilpotency in general is only certified by bounded
//! iteration; for Jacobian derivations `g ↦ (∂q/∂x)·(∂g/∂z)` with a z-free
//! `q`, the z-degree of `D(g)` strictly drops, giving the a-priori bound
//! `D^{deg_z g + 1}(g) = 0`.

use std::fmt;

use thiserror::Error;

use crate::context::VariableContext;
use crate::degree::Degree;
use crate::expr::format_polynomial;
use crate::poly::{PolyError, PolyMap, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the two Jacobian variables must differ, both were `{0}`")]
    EqualVariables(String),
    #[error("nilpotency cap must be at least 1")]
    ZeroCap,
    #[error("degree-drop check requires deg_z q = 0, got {0}")]
    QDependsOnZ(Degree),
}

/// A derivation of the polynomial ring, given by one image per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    context: VariableContext,
    images: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(context: VariableContext, images: Vec<Polynomial>) -> Result<Self, DerivationError> {
        if images.len() != context.len() {
            return Err(DerivationError::Poly(PolyError::ImageCount {
                context: context.to_string(),
                expected: context.len(),
                given: images.len(),
            }));
        }
        for (i, image) in images.iter().enumerate() {
            if *image.context() != context {
                return Err(DerivationError::Poly(PolyError::ImageContext(
                    context.name(i).to_string(),
                )));
            }
        }
        Ok(Derivation { context, images })
    }

    /// The coordinate derivation `∂/∂v`.
    pub fn coordinate(context: &VariableContext, v: &str) -> Result<Self, DerivationError> {
        let idx = context.resolve(v).map_err(PolyError::from)?;
        let images = (0..context.len())
            .map(|i| {
                if i == idx {
                    Polynomial::one(context.clone())
                } else {
                    Polynomial::zero(context.clone())
                }
            })
            .collect();
        Ok(Derivation { context: context.clone(), images })
    }

    pub fn context(&self) -> &VariableContext {
        &self.context
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image_of(&self, name: &str) -> Result<&Polynomial, DerivationError> {
        Ok(&self.images[self.context.resolve(name).map_err(PolyError::from)?])
    }

    /// Applies the derivation to an arbitrary ring element via the Leibniz
    /// rule: `D(g) = Σ D(x_i) · ∂g/∂x_i`.
    pub fn apply(&self, g: &Polynomial) -> Result<Polynomial, DerivationError> {
        if *g.context() != self.context {
            return Err(DerivationError::Poly(PolyError::ContextMismatch {
                left: g.context().to_string(),
                right: self.context.to_string(),
            }));
        }
        let mut acc = Polynomial::zero(self.context.clone());
        for (idx, image) in self.images.iter().enumerate() {
            if image.is_zero() {
                continue;
            }
            let partial = g.partial_derivative_idx(idx);
            acc = acc.try_add(&image.try_mul(&partial)?)?;
        }
        Ok(acc)
    }

    /// True iff `D(s) = 1` exactly.
    pub fn has_slice(&self, s: &Polynomial) -> Result<bool, DerivationError> {
        Ok(self.apply(s)?.is_one())
    }

    /// True iff `D(f) = 0`.
    pub fn in_kernel(&self, f: &Polynomial) -> Result<bool, DerivationError> {
        Ok(self.apply(f)?.is_zero())
    }

    /// Extends the derivation to a context enlarged by `new_var`, sending the
    /// new variable to zero (so it lands in the kernel).
    pub fn extend(&self, new_var: &str) -> Result<Derivation, DerivationError> {
        let bigger = self.context.with_variable(new_var).map_err(PolyError::from)?;
        let mut images = self
            .images
            .iter()
            .map(|img| img.embed(&bigger))
            .collect::<Result<Vec<_>, _>>()
            .map_err(DerivationError::Poly)?;
        images.push(Polynomial::zero(bigger.clone()));
        Ok(Derivation { context: bigger, images })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .context
            .names()
            .iter()
            .zip(&self.images)
            .map(|(n, img)| format!("{n} -> {}", format_polynomial(img)))
            .collect();
        write!(f, "{}", parts.join(" ; "))
    }
}

/// The Jacobian derivation `g ↦ J_{x,z}(q, g) = (∂q/∂x)(∂g/∂z) − (∂q/∂z)(∂g/∂x)`,
/// represented by its variable images `x ↦ −∂q/∂z`, `z ↦ ∂q/∂x`, others `↦ 0`.
pub fn jacobian_derivation(
    q: &Polynomial,
    x: &str,
    z: &str,
) -> Result<Derivation, DerivationError> {
    if x == z {
        return Err(DerivationError::EqualVariables(x.to_string()));
    }
    let context = q.context().clone();
    let x_idx = context.resolve(x).map_err(PolyError::from)?;
    let z_idx = context.resolve(z).map_err(PolyError::from)?;
    let q_x = q.partial_derivative_idx(x_idx);
    let q_z = q.partial_derivative_idx(z_idx);
    let images = (0..context.len())
        .map(|i| {
            if i == x_idx {
                -&q_z
            } else if i == z_idx {
                q_x.clone()
            } else {
                Polynomial::zero(context.clone())
            }
        })
        .collect();
    Ok(Derivation { context, images })
}

/// Default iteration cap for [`nilpotency_index`]: when `q` is free of `z`
/// the Jacobian-derivation degree bound applies and `deg_z g + 2` is always
/// enough; otherwise `None` (the caller must supply a cap).
pub fn default_nilpotency_cap(q: &Polynomial, z: &str, g: &Polynomial) -> Result<Option<u64>, DerivationError> {
    let q_deg = q.degree_in(z).map_err(DerivationError::Poly)?;
    if q_deg > Degree::Finite(0) {
        return Ok(None);
    }
    Ok(Some(g.degree_in(z).map_err(DerivationError::Poly)?.clamp_zero() + 2))
}

/// Result of iterating a derivation on one subject polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotencyReport {
    pub subject: Polynomial,
    /// Smallest `i` with `D^i(subject) = 0`, or `None` when the cap was hit.
    pub index: Option<u64>,
    pub cap: u64,
    /// Degrees are not tracked here; callers interested in the degree-drop
    /// property check it per iterate via [`degree_drop_check`].
    pub iterations_taken: u64,
}

impl NilpotencyReport {
    pub fn cap_exceeded(&self) -> bool {
        self.index.is_none()
    }
}

/// Iterates `D` on `g` until zero or the cap: if `D^i(g) = 0` for some
/// `i ≤ cap`, the report carries the smallest such `i` (so `i − 1`
/// applications give a nonzero polynomial); otherwise the cap-exceeded
/// marker, signalling a possibly non-nilpotent derivation.
pub fn nilpotency_index(
    d: &Derivation,
    g: &Polynomial,
    cap: u64,
) -> Result<NilpotencyReport, DerivationError> {
    if cap == 0 {
        return Err(DerivationError::ZeroCap);
    }
    let mut current = g.clone();
    let mut applications = 0u64;
    loop {
        if current.is_zero() {
            return Ok(NilpotencyReport {
                subject: g.clone(),
                index: Some(applications),
                cap,
                iterations_taken: applications,
            });
        }
        if applications == cap {
            return Ok(NilpotencyReport {
                subject: g.clone(),
                index: None,
                cap,
                iterations_taken: applications,
            });
        }
        current = d.apply(&current)?;
        applications += 1;
    }
}

/// For a z-free `q`, checks the engine behind the nilpotency bound:
/// `deg_z J_{x,z}(q, g) < deg_z g` (with the `-inf` sentinel for zero).
pub fn degree_drop_check(
    q: &Polynomial,
    x: &str,
    z: &str,
    g: &Polynomial,
) -> Result<bool, DerivationError> {
    let q_deg = q.degree_in(z).map_err(DerivationError::Poly)?;
    if q_deg > Degree::Finite(0) {
        return Err(DerivationError::QDependsOnZ(q_deg));
    }
    let d = jacobian_derivation(q, x, z)?;
    let image = d.apply(g)?;
    Ok(image.degree_in(z).map_err(DerivationError::Poly)? < g.degree_in(z).map_err(DerivationError::Poly)?)
}

/// Exact check of the chain-rule factorization
/// `J_{x,z}(p(u,v), f(u,v)) = J_{x,z}(u, v) · J_{s,t}(p, f)|_{(s,t)=(u,v)}`
/// for two-variable `p`, `f` composed with `u`, `v` from the ambient ring.
pub fn chain_rule_factor_check(
    u: &Polynomial,
    v: &Polynomial,
    p: &Polynomial,
    f: &Polynomial,
    x: &str,
    z: &str,
) -> Result<bool, DerivationError> {
    if u.context() != v.context() {
        return Err(DerivationError::Poly(PolyError::ContextMismatch {
            left: u.context().to_string(),
            right: v.context().to_string(),
        }));
    }
    if p.context() != f.context() {
        return Err(DerivationError::Poly(PolyError::ContextMismatch {
            left: p.context().to_string(),
            right: f.context().to_string(),
        }));
    }
    let ambient = u.context().clone();
    let x_idx = ambient.resolve(x).map_err(PolyError::from)?;
    let z_idx = ambient.resolve(z).map_err(PolyError::from)?;

    let jac = |a: &Polynomial, b: &Polynomial| -> Result<Polynomial, DerivationError> {
        let ax = a.partial_derivative_idx(x_idx);
        let az = a.partial_derivative_idx(z_idx);
        let bx = b.partial_derivative_idx(x_idx);
        let bz = b.partial_derivative_idx(z_idx);
        Ok(ax.try_mul(&bz)?.try_sub(&az.try_mul(&bx)?)?)
    };

    let compose = PolyMap::new(p.context().clone(), ambient.clone(), vec![u.clone(), v.clone()])?;
    let p_uv = p.substitute(&compose)?;
    let f_uv = f.substitute(&compose)?;
    let lhs = jac(&p_uv, &f_uv)?;

    // J_{s,t}(p, f) over p's own two-variable context, then (s,t) ↦ (u,v)
    let s = p.context().name(0).to_string();
    let t = p.context().name(1).to_string();
    let ps = p.partial_derivative(&s).map_err(DerivationError::Poly)?;
    let pt = p.partial_derivative(&t).map_err(DerivationError::Poly)?;
    let fs = f.partial_derivative(&s).map_err(DerivationError::Poly)?;
    let ft = f.partial_derivative(&t).map_err(DerivationError::Poly)?;
    let inner = ps.try_mul(&ft)?.try_sub(&pt.try_mul(&fs)?)?;
    let rhs = jac(u, v)?.try_mul(&inner.substitute(&compose)?)?;

    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn ctx(names: &[&str]) -> VariableContext {
        VariableContext::new(names.iter().copied()).unwrap()
    }

    fn p(c: &VariableContext, s: &str) -> Polynomial {
        parse_polynomial(s, c).unwrap()
    }

    #[test]
    fn leibniz_extension() {
        let c = ctx(&["x", "z"]);
        let ddz = Derivation::coordinate(&c, "z").unwrap();
        assert_eq!(ddz.apply(&p(&c, "z^2")).unwrap(), p(&c, "2*z"));
        assert!(ddz.apply(&p(&c, "x")).unwrap().is_zero());

        // D = (x -> z, z -> x): D(xz) = z·z + x·x
        let swap = Derivation::new(c.clone(), vec![p(&c, "z"), p(&c, "x")]).unwrap();
        assert_eq!(swap.apply(&p(&c, "x*z")).unwrap(), p(&c, "x^2 + z^2"));
    }

    #[test]
    fn jacobian_derivation_images() {
        let c = ctx(&["x", "z"]);
        let d = jacobian_derivation(&p(&c, "x"), "x", "z").unwrap();
        assert!(d.image_of("x").unwrap().is_zero());
        assert!(d.image_of("z").unwrap().is_one());

        let d = jacobian_derivation(&p(&c, "x^2"), "x", "z").unwrap();
        assert!(d.image_of("x").unwrap().is_zero());
        assert_eq!(d.image_of("z").unwrap(), &p(&c, "2*x"));

        let c3 = ctx(&["x", "y", "z"]);
        let d = jacobian_derivation(&p(&c3, "x"), "x", "z").unwrap();
        assert!(d.image_of("y").unwrap().is_zero());

        assert!(jacobian_derivation(&p(&c, "x"), "x", "x").is_err());
    }

    #[test]
    fn nilpotency_classical_and_bounded() {
        let c = ctx(&["x", "z"]);
        let ddz = Derivation::coordinate(&c, "z").unwrap();
        let report = nilpotency_index(&ddz, &p(&c, "z^3"), 10).unwrap();
        assert_eq!(report.index, Some(4));

        // q = x^2: D(z^2) = 4xz, D^2 = 8x^2, D^3 = 0, matching deg_z + 1
        let d = jacobian_derivation(&p(&c, "x^2"), "x", "z").unwrap();
        let g = p(&c, "z^2");
        assert_eq!(d.apply(&g).unwrap(), p(&c, "4*x*z"));
        assert_eq!(d.apply(&p(&c, "4*x*z")).unwrap(), p(&c, "8*x^2"));
        let report = nilpotency_index(&d, &g, 10).unwrap();
        assert_eq!(report.index, Some(3));
        assert_eq!(
            default_nilpotency_cap(&p(&c, "x^2"), "z", &g).unwrap(),
            Some(4)
        );
    }

    #[test]
    fn non_nilpotent_hits_cap() {
        let c = ctx(&["x"]);
        let euler = Derivation::new(c.clone(), vec![p(&c, "x")]).unwrap();
        let report = nilpotency_index(&euler, &p(&c, "x"), 10).unwrap();
        assert!(report.cap_exceeded());
        assert_eq!(report.iterations_taken, 10);
        assert!(nilpotency_index(&euler, &p(&c, "x"), 0).is_err());
    }

    #[test]
    fn degree_drop_examples() {
        let c = ctx(&["x", "z"]);
        assert!(degree_drop_check(&p(&c, "x"), "x", "z", &p(&c, "z^2")).unwrap());
        // z-free subject drops to the -inf sentinel
        assert!(degree_drop_check(&p(&c, "x"), "x", "z", &p(&c, "x^3")).unwrap());
        assert!(degree_drop_check(&p(&c, "x^2"), "x", "z", &p(&c, "x*z + z^3")).unwrap());
        // expand: D(g) = 2x·(x + 3z^2)
        let d = jacobian_derivation(&p(&c, "x^2"), "x", "z").unwrap();
        assert_eq!(
            d.apply(&p(&c, "x*z + z^3")).unwrap(),
            p(&c, "2*x^2 + 6*x*z^2")
        );
        assert!(degree_drop_check(&p(&c, "z"), "x", "z", &p(&c, "z")).is_err());
    }

    #[test]
    fn chain_rule_small_cases() {
        let c = ctx(&["x", "z"]);
        let st = ctx(&["s", "t"]);
        // identity substitution: p = s^2, f = t
        assert!(chain_rule_factor_check(
            &p(&c, "x"),
            &p(&c, "z"),
            &p(&st, "s^2"),
            &p(&st, "t"),
            "x",
            "z"
        )
        .unwrap());
        // u = x + z, v = z, p = s t, f = s: both sides −x − z
        assert!(chain_rule_factor_check(
            &p(&c, "x + z"),
            &p(&c, "z"),
            &p(&st, "s*t"),
            &p(&st, "s"),
            "x",
            "z"
        )
        .unwrap());
    }

    #[test]
    fn slices_and_kernels() {
        let c = ctx(&["x", "z"]);
        let ddz = Derivation::coordinate(&c, "z").unwrap();
        assert!(ddz.has_slice(&p(&c, "z")).unwrap());
        assert!(!ddz.has_slice(&p(&c, "2*z")).unwrap());
        let d = jacobian_derivation(&p(&c, "x"), "x", "z").unwrap();
        assert!(d.in_kernel(&p(&c, "x")).unwrap());
        assert!(d.has_slice(&p(&c, "z")).unwrap());
    }

    #[test]
    fn extension_puts_new_variables_in_the_kernel() {
        let c = ctx(&["x", "z"]);
        let ddz = Derivation::coordinate(&c, "z").unwrap();
        let ext = ddz.extend("t").unwrap();
        let big = ctx(&["x", "z", "t"]);
        assert!(ext.in_kernel(&p(&big, "t")).unwrap());
        assert!(ext.has_slice(&p(&big, "z")).unwrap());

        let ext2 = ext.extend("w").unwrap();
        let bigger = ctx(&["x", "z", "t", "w"]);
        assert!(ext2.in_kernel(&p(&bigger, "t")).unwrap());
        assert!(ext2.in_kernel(&p(&bigger, "w")).unwrap());

        let report = nilpotency_index(&ext, &p(&big, "t"), 5).unwrap();
        assert_eq!(report.index, Some(1));

        assert!(ddz.extend("x").is_err());
    }
}
