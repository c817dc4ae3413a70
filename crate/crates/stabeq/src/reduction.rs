//! Elementary and linear transformations on polynomial pairs, reducedness
//! predicates, and the degree blow-up experiment for specializations
//! `z ↦ x^m y^n + c`.
//!
//! A pair `(u, v)` is *z-reduced* when no admissible move lowers
//! `deg_z u + deg_z v`, and *elementary reduced* (for two-variable pairs)
//! when no move lowers the total-degree sum. Admissible moves are
//!
//! * type (i): `(u, v) → (u + μ·v^k, v)` with `μ ≠ 0`, `k ≥ 2`,
//! * type (ii): `(u, v) → (u, v + μ·u^k)`,
//! * nondegenerate linear transformations (including translations).
//!
//! # Completeness of the witness search
//!
//! The predicates quantify over infinitely many moves, but the search is
//! finite and complete. Ledger degrees live in the naturals (the zero
//! polynomial counts as degree 0 for the measure), so a move lowers the sum
//! only by lowering the degree of one component from some `d ≥ 1`, which
//! requires cancelling that component's leading form (the `z^d`-coefficient
//! for the z-measure, the top homogeneous part for total degree):
//!
//! * a type (i) move needs `deg u = k · deg v` with `deg v ≥ 1`, which forces
//!   `k`, and needs `lf(u) = -μ · lf(v)^k`, which forces `μ` and requires the
//!   ratio to be a nonzero constant;
//! * type (ii) is symmetric;
//! * a linear image `a·u + b·v + e` can only lose degree through cancellation
//!   of leading forms, which requires `deg u = deg v ≥ 1` and `lf(u) = ρ·lf(v)`
//!   with constant `ρ`; the two rows of an invertible matrix cannot both
//!   cancel, so a single row operation is the general witness. Translations
//!   shift only constants and never change a degree in the naturals.
//!
//! So each kind admits at most one candidate move, every improving move is
//! one of the candidates, and checking the (at most three) candidates decides
//! the predicate. When several kinds witness, the smallest kind in the order
//! type (i) < type (ii) < linear is reported; a linear witness rewrites the
//! component whose rewrite leaves the fewest terms (ties rewrite the first).

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::context::VariableContext;
use crate::degree::Degree;
use crate::expr::format_polynomial;
use crate::monomial::Monomial;
use crate::order::{MonomialOrder, OrderKind};
use crate::poly::{PolyError, PolyMap, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("move parameter out of range: {0}")]
    BadMove(String),
    #[error("linear move is degenerate (zero determinant)")]
    DegenerateLinear,
    #[error("elementary reducedness is defined for two-variable pairs, context is {0}")]
    NotTwoVariables(String),
    #[error("blow-up experiment precondition failed: {0}")]
    BlowupPrecondition(String),
    #[error("composition check precondition failed: {0}")]
    CompositionPrecondition(String),
}

/// A pair of polynomials over one shared context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyPair {
    u: Polynomial,
    v: Polynomial,
}

impl PolyPair {
    pub fn new(u: Polynomial, v: Polynomial) -> Result<Self, ReductionError> {
        if u.context() != v.context() {
            return Err(ReductionError::Poly(PolyError::ContextMismatch {
                left: u.context().to_string(),
                right: v.context().to_string(),
            }));
        }
        Ok(PolyPair { u, v })
    }

    pub fn u(&self) -> &Polynomial {
        &self.u
    }

    pub fn v(&self) -> &Polynomial {
        &self.v
    }

    pub fn context(&self) -> &VariableContext {
        self.u.context()
    }
}

impl fmt::Display for PolyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_polynomial(&self.u), format_polynomial(&self.v))
    }
}

/// An admissible transformation of a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// `(u, v) → (u + μ·v^k, v)`, `μ ≠ 0`, `k ≥ 2`.
    ElemI { mu: BigRational, k: u32 },
    /// `(u, v) → (u, v + μ·u^k)`, `μ ≠ 0`, `k ≥ 2`.
    ElemII { mu: BigRational, k: u32 },
    /// `(u, v) → (a·u + b·v + e, c·u + d·v + f)` with `ad − bc ≠ 0`.
    Linear {
        matrix: [[BigRational; 2]; 2],
        translation: [BigRational; 2],
    },
}

impl Move {
    pub fn elem_i(mu: BigRational, k: u32) -> Result<Move, ReductionError> {
        if mu.is_zero() {
            return Err(ReductionError::BadMove("mu must be nonzero".into()));
        }
        if k < 2 {
            return Err(ReductionError::BadMove(format!("k must be at least 2, got {k}")));
        }
        Ok(Move::ElemI { mu, k })
    }

    pub fn elem_ii(mu: BigRational, k: u32) -> Result<Move, ReductionError> {
        match Move::elem_i(mu, k)? {
            Move::ElemI { mu, k } => Ok(Move::ElemII { mu, k }),
            _ => unreachable!(),
        }
    }

    pub fn linear(
        matrix: [[BigRational; 2]; 2],
        translation: [BigRational; 2],
    ) -> Result<Move, ReductionError> {
        let det = &matrix[0][0] * &matrix[1][1] - &matrix[0][1] * &matrix[1][0];
        if det.is_zero() {
            return Err(ReductionError::DegenerateLinear);
        }
        Ok(Move::Linear { matrix, translation })
    }

    /// Row operation `u ← u + ρ·v`.
    pub fn add_v_to_u(rho: BigRational) -> Move {
        Move::Linear {
            matrix: [
                [BigRational::one(), rho],
                [BigRational::zero(), BigRational::one()],
            ],
            translation: [BigRational::zero(), BigRational::zero()],
        }
    }

    /// Row operation `v ← v + ρ·u`.
    pub fn add_u_to_v(rho: BigRational) -> Move {
        Move::Linear {
            matrix: [
                [BigRational::one(), BigRational::zero()],
                [rho, BigRational::one()],
            ],
            translation: [BigRational::zero(), BigRational::zero()],
        }
    }

    fn validate(&self) -> Result<(), ReductionError> {
        match self {
            Move::ElemI { mu, k } | Move::ElemII { mu, k } => {
                if mu.is_zero() {
                    Err(ReductionError::BadMove("mu must be nonzero".into()))
                } else if *k < 2 {
                    Err(ReductionError::BadMove(format!("k must be at least 2, got {k}")))
                } else {
                    Ok(())
                }
            }
            Move::Linear { matrix, .. } => {
                let det = &matrix[0][0] * &matrix[1][1] - &matrix[0][1] * &matrix[1][0];
                if det.is_zero() {
                    Err(ReductionError::DegenerateLinear)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The inverse transformation; `apply(apply(p, m), m.inverted()) == p`.
    pub fn inverted(&self) -> Result<Move, ReductionError> {
        self.validate()?;
        Ok(match self {
            Move::ElemI { mu, k } => Move::ElemI { mu: -mu, k: *k },
            Move::ElemII { mu, k } => Move::ElemII { mu: -mu, k: *k },
            Move::Linear { matrix, translation } => {
                let det = &matrix[0][0] * &matrix[1][1] - &matrix[0][1] * &matrix[1][0];
                let inv = [
                    [&matrix[1][1] / &det, -(&matrix[0][1] / &det)],
                    [-(&matrix[1][0] / &det), &matrix[0][0] / &det],
                ];
                let t = [
                    -(&inv[0][0] * &translation[0] + &inv[0][1] * &translation[1]),
                    -(&inv[1][0] * &translation[0] + &inv[1][1] * &translation[1]),
                ];
                Move::Linear { matrix: inv, translation: t }
            }
        })
    }

    fn kind_rank(&self) -> u8 {
        match self {
            Move::ElemI { .. } => 0,
            Move::ElemII { .. } => 1,
            Move::Linear { .. } => 2,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ElemI { mu, k } => write!(f, "type (i): u <- u + ({mu})*v^{k}"),
            Move::ElemII { mu, k } => write!(f, "type (ii): v <- v + ({mu})*u^{k}"),
            Move::Linear { matrix, translation } => write!(
                f,
                "linear: (u, v) <- (({})*u + ({})*v + ({}), ({})*u + ({})*v + ({}))",
                matrix[0][0], matrix[0][1], translation[0], matrix[1][0], matrix[1][1], translation[1]
            ),
        }
    }
}

/// Applies a move to a pair. The transformation is invertible; see
/// [`Move::inverted`].
pub fn apply_move(pair: &PolyPair, mv: &Move) -> Result<PolyPair, ReductionError> {
    mv.validate()?;
    let ctx = pair.context().clone();
    match mv {
        Move::ElemI { mu, k } => {
            let shift = pair.v.pow(*k).scale(mu);
            PolyPair::new(pair.u.try_add(&shift)?, pair.v.clone())
        }
        Move::ElemII { mu, k } => {
            let shift = pair.u.pow(*k).scale(mu);
            PolyPair::new(pair.u.clone(), pair.v.try_add(&shift)?)
        }
        Move::Linear { matrix, translation } => {
            let combo = |a: &BigRational, b: &BigRational, t: &BigRational| {
                pair.u
                    .scale(a)
                    .try_add(&pair.v.scale(b))
                    .and_then(|s| s.try_add(&Polynomial::constant(ctx.clone(), t.clone())))
            };
            PolyPair::new(
                combo(&matrix[0][0], &matrix[0][1], &translation[0])?,
                combo(&matrix[1][0], &matrix[1][1], &translation[1])?,
            )
        }
    }
}

/// Which degree a reduction ledger tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMeasure {
    /// Degree in one distinguished variable (by index).
    Variable(usize),
    Total,
}

impl DegreeMeasure {
    fn degree(&self, p: &Polynomial) -> Degree {
        match self {
            DegreeMeasure::Variable(idx) => p.degree_in_idx(*idx),
            DegreeMeasure::Total => p.total_degree(),
        }
    }

    /// Leading form whose cancellation is the only way to lose degree:
    /// the coefficient of `z^deg` for the variable measure, the top
    /// homogeneous component for total degree.
    fn leading_form(&self, p: &Polynomial) -> Polynomial {
        match self {
            DegreeMeasure::Variable(idx) => {
                let d = self.degree(p).as_finite().unwrap_or(0);
                p.coefficient_of_power(*idx, d as u32)
            }
            DegreeMeasure::Total => p.top_degree_form(),
        }
    }

    /// Ledger value: degrees clamped into the naturals.
    pub fn ledger(&self, pair: &PolyPair) -> u64 {
        self.degree(&pair.u).clamp_zero() + self.degree(&pair.v).clamp_zero()
    }
}

fn elem_candidate(
    from: &Polynomial,
    other: &Polynomial,
    measure: DegreeMeasure,
) -> Option<(BigRational, u32)> {
    let d_from = measure.degree(from).as_finite()?;
    let d_other = measure.degree(other).as_finite()?;
    if d_from < 1 || d_other < 1 || d_from % d_other != 0 {
        return None;
    }
    let k = (d_from / d_other) as u32;
    if k < 2 {
        return None;
    }
    let lf_from = measure.leading_form(from);
    let lf_other_pow = measure.leading_form(other).pow(k);
    let ratio = lf_from.constant_ratio_to(&lf_other_pow)?;
    Some((-ratio, k))
}

fn linear_candidate(pair: &PolyPair, measure: DegreeMeasure) -> Option<Move> {
    let d_u = measure.degree(&pair.u).as_finite()?;
    let d_v = measure.degree(&pair.v).as_finite()?;
    if d_u != d_v || d_u < 1 {
        return None;
    }
    let rho = measure
        .leading_form(&pair.u)
        .constant_ratio_to(&measure.leading_form(&pair.v))?;
    // Either component can absorb the other; pick the rewrite that leaves the
    // smaller pair (total term count), ties rewriting u.
    let rewrite_u = Move::add_v_to_u(-rho.clone());
    let rewrite_v = Move::add_u_to_v(-rho.recip());
    let size = |mv: &Move| {
        apply_move(pair, mv)
            .map(|next| next.u.num_terms() + next.v.num_terms())
            .unwrap_or(usize::MAX)
    };
    if size(&rewrite_v) < size(&rewrite_u) {
        Some(rewrite_v)
    } else {
        Some(rewrite_u)
    }
}

/// The smallest move (in the kind order type (i) < type (ii) < linear) that
/// strictly lowers the pair's ledger under the given measure, if any.
pub fn improving_move(pair: &PolyPair, measure: DegreeMeasure) -> Option<Move> {
    let mut candidates = Vec::new();
    if let Some((mu, k)) = elem_candidate(&pair.u, &pair.v, measure) {
        candidates.push(Move::ElemI { mu, k });
    }
    if let Some((mu, k)) = elem_candidate(&pair.v, &pair.u, measure) {
        candidates.push(Move::ElemII { mu, k });
    }
    if let Some(mv) = linear_candidate(pair, measure) {
        candidates.push(mv);
    }
    candidates.sort_by_key(Move::kind_rank);
    debug_assert!(candidates.iter().all(|mv| {
        let next = apply_move(pair, mv).expect("candidate moves are valid");
        measure.ledger(&next) < measure.ledger(pair)
    }));
    candidates.into_iter().next()
}

/// True iff no admissible move lowers `deg_z u + deg_z v`; when false, also
/// returns one witnessing move.
pub fn is_z_reduced(
    pair: &PolyPair,
    z: &str,
) -> Result<(bool, Option<Move>), ReductionError> {
    let idx = pair.context().resolve(z).map_err(PolyError::from)?;
    let witness = improving_move(pair, DegreeMeasure::Variable(idx));
    Ok((witness.is_none(), witness))
}

/// True iff no admissible move lowers the total-degree sum of a two-variable
/// pair.
pub fn is_elementary_reduced(pair: &PolyPair) -> Result<bool, ReductionError> {
    if pair.context().len() != 2 {
        return Err(ReductionError::NotTwoVariables(pair.context().to_string()));
    }
    Ok(improving_move(pair, DegreeMeasure::Total).is_none())
}

/// Which ledger a recorded move lowered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LedgerKind {
    ZDegree,
    TotalDegree,
}

impl fmt::Display for LedgerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LedgerKind::ZDegree => write!(f, "z-degree"),
            LedgerKind::TotalDegree => write!(f, "total-degree"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub mv: Move,
    pub ledger: LedgerKind,
    pub before: u64,
    pub after: u64,
}

/// Ledger of the moves applied by [`z_reduce`]; strictly decreasing in the
/// recorded measure at every entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub entries: Vec<TraceEntry>,
}

impl ReductionTrace {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Drives the pair to a z-reduced fixpoint.
///
/// Moves lowering the z-degree sum are applied first; once none applies, the
/// total-degree sum is lowered by moves that leave the z-degree sum unchanged
/// (a cosmetic normalization: the z-reduced predicate already holds), and the
/// two phases alternate until neither applies. The pair of ledgers decreases
/// lexicographically at every step, so the loop terminates.
pub fn z_reduce(pair: &PolyPair, z: &str) -> Result<(PolyPair, ReductionTrace), ReductionError> {
    let idx = pair.context().resolve(z).map_err(PolyError::from)?;
    let z_measure = DegreeMeasure::Variable(idx);
    let total = DegreeMeasure::Total;
    let mut current = pair.clone();
    let mut trace = ReductionTrace::default();
    loop {
        if let Some(mv) = improving_move(&current, z_measure) {
            let before = z_measure.ledger(&current);
            let next = apply_move(&current, &mv)?;
            let after = z_measure.ledger(&next);
            trace.entries.push(TraceEntry { mv, ledger: LedgerKind::ZDegree, before, after });
            current = next;
            continue;
        }
        let total_witness = improving_move(&current, total).filter(|mv| {
            apply_move(&current, mv)
                .map(|next| z_measure.ledger(&next) == z_measure.ledger(&current))
                .unwrap_or(false)
        });
        match total_witness {
            Some(mv) => {
                let before = total.ledger(&current);
                let next = apply_move(&current, &mv)?;
                let after = total.ledger(&next);
                trace.entries.push(TraceEntry {
                    mv,
                    ledger: LedgerKind::TotalDegree,
                    before,
                    after,
                });
                current = next;
            }
            None => break,
        }
    }
    Ok((current, trace))
}

/// Outcome of substituting `z ↦ w = x^m y^n + c` (and all further variables
/// `↦ 0`) into `p(u, v)`.
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub w: Polynomial,
    pub u_specialized: Polynomial,
    pub v_specialized: Polynomial,
    pub composed: Polynomial,
    pub composed_degree: Degree,
    pub bound: u64,
    pub exceeds_bound: bool,
    /// Whether `m, n > 2N`, the hypothesis under which the degree lower bound
    /// is asserted. The experiment still measures degrees when it fails.
    pub exponents_exceed_twice_bound: bool,
}

/// Specializes a z-reduced pair along `z ↦ x^m y^n + c` and measures the
/// total degree of `p(u, v)` against the bound `N`.
///
/// `p` must be a nonconstant two-variable polynomial; the pair must be
/// z-reduced with both members depending on `z`. The first two variables of
/// the pair's context play the roles of `x` and `y`; all variables other than
/// those two and `z` are sent to zero.
pub fn degree_blowup_experiment(
    p: &Polynomial,
    pair: &PolyPair,
    z: &str,
    m: u32,
    n: u32,
    c: &BigRational,
    bound: u64,
) -> Result<BlowupReport, ReductionError> {
    if p.context().len() != 2 {
        return Err(ReductionError::BlowupPrecondition(format!(
            "p must be a two-variable polynomial, context is {}",
            p.context()
        )));
    }
    if p.is_constant() {
        return Err(ReductionError::BlowupPrecondition("p must be nonconstant".into()));
    }
    if m < 1 || n < 1 {
        return Err(ReductionError::BlowupPrecondition("m and n must be at least 1".into()));
    }
    let ctx = pair.context();
    if ctx.len() < 3 {
        return Err(ReductionError::BlowupPrecondition(format!(
            "pair context must have at least three variables, got {ctx}"
        )));
    }
    let z_idx = ctx.resolve(z).map_err(PolyError::from)?;
    if z_idx < 2 {
        return Err(ReductionError::BlowupPrecondition(
            "z must not be one of the first two (base) variables".into(),
        ));
    }
    for member in [pair.u(), pair.v()] {
        if member.degree_in_idx(z_idx) < Degree::Finite(1) {
            return Err(ReductionError::BlowupPrecondition(
                "both pair members must depend on z".into(),
            ));
        }
    }
    let (reduced, _) = is_z_reduced(pair, z)?;
    if !reduced {
        return Err(ReductionError::BlowupPrecondition("pair is not z-reduced".into()));
    }

    let target = VariableContext::new([ctx.name(0), ctx.name(1)]).map_err(PolyError::from)?;
    let x = Polynomial::variable(&target, ctx.name(0)).map_err(ReductionError::Poly)?;
    let y = Polynomial::variable(&target, ctx.name(1)).map_err(ReductionError::Poly)?;
    let w = x
        .pow(m)
        .try_mul(&y.pow(n))?
        .try_add(&Polynomial::constant(target.clone(), c.clone()))?;
    let images = (0..ctx.len())
        .map(|i| {
            if i == 0 {
                x.clone()
            } else if i == 1 {
                y.clone()
            } else if i == z_idx {
                w.clone()
            } else {
                Polynomial::zero(target.clone())
            }
        })
        .collect();
    let specialize = PolyMap::new(ctx.clone(), target.clone(), images)?;
    let u_specialized = pair.u().substitute(&specialize)?;
    let v_specialized = pair.v().substitute(&specialize)?;
    let compose = PolyMap::new(
        p.context().clone(),
        target,
        vec![u_specialized.clone(), v_specialized.clone()],
    )?;
    let composed = p.substitute(&compose)?;
    let composed_degree = composed.total_degree();
    Ok(BlowupReport {
        w,
        u_specialized,
        v_specialized,
        composed_degree,
        exceeds_bound: composed_degree > Degree::Finite(bound as i64),
        exponents_exceed_twice_bound: u64::from(m) > 2 * bound && u64::from(n) > 2 * bound,
        bound,
        composed,
    })
}

/// Outcome of the composed z-dependence check for `p(u, v)` with `u` z-free.
#[derive(Debug, Clone)]
pub struct ZDependenceReport {
    pub composed: Polynomial,
    pub composed_z_degree: Degree,
    pub depends_on_z: bool,
    /// Leading monomial of `p` under lexdeg with the second variable strongest.
    pub leading_monomial: Monomial,
    pub predicted_z_degree: Option<u64>,
    pub prediction_holds: Option<bool>,
    /// Set when the prediction's hypotheses fail (the check still runs).
    pub boundary: Option<String>,
}

/// Substitutes a z-free `u` and a z-dependent `v` into a two-variable `p` and
/// compares the z-degree of the result against the leading-monomial
/// prediction: if `x^m y^n` is the leading monomial of `p` under lexdeg with
/// `y` strongest, the composition has z-degree `n · deg_z v`.
///
/// The prediction is sound when `u` is nonconstant and the leading monomial
/// realizes the full y-degree of `p`; outside those hypotheses the report
/// carries a boundary note instead of an error.
pub fn composed_z_dependence(
    p: &Polynomial,
    u: &Polynomial,
    v: &Polynomial,
    z: &str,
) -> Result<ZDependenceReport, ReductionError> {
    if p.context().len() != 2 {
        return Err(ReductionError::CompositionPrecondition(format!(
            "p must be a two-variable polynomial, context is {}",
            p.context()
        )));
    }
    if p.is_constant() {
        return Err(ReductionError::CompositionPrecondition("p must be nonconstant".into()));
    }
    if u.context() != v.context() {
        return Err(ReductionError::Poly(PolyError::ContextMismatch {
            left: u.context().to_string(),
            right: v.context().to_string(),
        }));
    }
    let z_idx = u.context().resolve(z).map_err(PolyError::from)?;
    if u.degree_in_idx(z_idx) > Degree::Finite(0) {
        return Err(ReductionError::CompositionPrecondition("u must be z-free".into()));
    }
    let v_z_degree = match v.degree_in_idx(z_idx) {
        Degree::Finite(d) if d >= 1 => d as u64,
        _ => {
            return Err(ReductionError::CompositionPrecondition(
                "v must depend on z".into(),
            ))
        }
    };

    let compose = PolyMap::new(
        p.context().clone(),
        u.context().clone(),
        vec![u.clone(), v.clone()],
    )?;
    let composed = p.substitute(&compose)?;
    let composed_z_degree = composed.degree_in_idx(z_idx);

    let second = p.context().name(1);
    let order = MonomialOrder::with_priority(OrderKind::LexDeg, p.context(), &[second])
        .map_err(PolyError::from)?;
    let leading_monomial = p.leading_monomial(&order).map_err(ReductionError::Poly)?;
    let n_y = u64::from(leading_monomial.exponent(1));
    let max_y = p.degree_in_idx(1).clamp_zero();

    let mut boundary = None;
    if n_y == 0 {
        boundary = Some(format!(
            "leading monomial does not involve {second}; the prediction needs a positive power"
        ));
    } else if u.is_constant() {
        boundary = Some("u is constant; cancellation in the composition is possible".into());
    } else if n_y < max_y {
        boundary = Some(format!(
            "leading monomial does not realize the full {second}-degree of p; a lower-degree term can dominate in z"
        ));
    }

    let predicted_z_degree = if n_y >= 1 { Some(n_y * v_z_degree) } else { None };
    let prediction_holds = predicted_z_degree
        .map(|pred| composed_z_degree == Degree::Finite(pred as i64));

    Ok(ZDependenceReport {
        depends_on_z: composed_z_degree > Degree::Finite(0),
        composed,
        composed_z_degree,
        leading_monomial,
        predicted_z_degree,
        prediction_holds,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;
    use crate::poly::rat;

    fn ctx(names: &[&str]) -> VariableContext {
        VariableContext::new(names.iter().copied()).unwrap()
    }

    fn p(c: &VariableContext, s: &str) -> Polynomial {
        parse_polynomial(s, c).unwrap()
    }

    fn pair(c: &VariableContext, u: &str, v: &str) -> PolyPair {
        PolyPair::new(p(c, u), p(c, v)).unwrap()
    }

    #[test]
    fn moves_act_as_defined() {
        let c = ctx(&["x", "y"]);
        let start = pair(&c, "x + y^3", "y");
        let done = apply_move(&start, &Move::elem_i(rat(-1), 3).unwrap()).unwrap();
        assert_eq!(done, pair(&c, "x", "y"));

        let two = apply_move(&pair(&c, "x", "y"), &Move::elem_ii(rat(2), 2).unwrap()).unwrap();
        assert_eq!(two, pair(&c, "x", "y + 2*x^2"));

        let c3 = ctx(&["x", "y", "z"]);
        let lin = apply_move(&pair(&c3, "z", "z + x"), &Move::add_u_to_v(rat(-1))).unwrap();
        assert_eq!(lin, pair(&c3, "z", "x"));
    }

    #[test]
    fn degenerate_linear_rejected() {
        let c = ctx(&["x", "y"]);
        let singular = Move::Linear {
            matrix: [[rat(1), rat(1)], [rat(2), rat(2)]],
            translation: [rat(0), rat(0)],
        };
        assert!(matches!(
            apply_move(&pair(&c, "x", "y"), &singular),
            Err(ReductionError::DegenerateLinear)
        ));
        assert!(Move::elem_i(rat(0), 2).is_err());
        assert!(Move::elem_i(rat(1), 1).is_err());
    }

    #[test]
    fn moves_invert_exactly() {
        let c = ctx(&["x", "y"]);
        let start = pair(&c, "x^2 + y", "x - y^2");
        for mv in [
            Move::elem_i(crate::poly::frac(3, 2), 2).unwrap(),
            Move::elem_ii(rat(-2), 3).unwrap(),
            Move::linear(
                [[rat(2), rat(1)], [rat(1), rat(1)]],
                [rat(5), crate::poly::frac(-1, 3)],
            )
            .unwrap(),
        ] {
            let there = apply_move(&start, &mv).unwrap();
            let back = apply_move(&there, &mv.inverted().unwrap()).unwrap();
            assert_eq!(back, start, "move {mv} did not invert");
        }
    }

    #[test]
    fn z_reduced_examples() {
        let c = ctx(&["x", "y", "z"]);
        let (reduced, witness) = is_z_reduced(&pair(&c, "z", "x*z"), "z").unwrap();
        assert!(reduced);
        assert!(witness.is_none());

        let (reduced, witness) = is_z_reduced(&pair(&c, "z", "z + x"), "z").unwrap();
        assert!(!reduced);
        assert_eq!(witness, Some(Move::add_u_to_v(rat(-1))));

        let (reduced, witness) = is_z_reduced(&pair(&c, "x + z^4", "z^2"), "z").unwrap();
        assert!(!reduced);
        assert_eq!(witness, Some(Move::ElemI { mu: rat(-1), k: 2 }));
    }

    #[test]
    fn z_reduce_single_cancellation() {
        let c = ctx(&["x", "y", "z"]);
        let (fixed, trace) = z_reduce(&pair(&c, "x + z^4", "z^2"), "z").unwrap();
        assert_eq!(fixed, pair(&c, "x", "z^2"));
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.entries[0].ledger, LedgerKind::ZDegree);
        assert!(trace.entries[0].after < trace.entries[0].before);
    }

    #[test]
    fn z_reduce_fixpoint_is_stable() {
        let c = ctx(&["x", "y", "z"]);
        let start = pair(&c, "z", "x*z");
        let (fixed, trace) = z_reduce(&start, "z").unwrap();
        assert_eq!(fixed, start);
        assert!(trace.is_empty());
    }

    #[test]
    fn z_reduce_normalizes_total_degree() {
        // the z-sum of (z + x^2, x^2) is already minimal, but the total-degree
        // normalization still strips the x^2 from the first component
        let c = ctx(&["x", "y", "z"]);
        let (fixed, trace) = z_reduce(&pair(&c, "z + x^2", "x^2"), "z").unwrap();
        assert_eq!(fixed, pair(&c, "z", "x^2"));
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.entries[0].ledger, LedgerKind::TotalDegree);
        let (reduced, _) = is_z_reduced(&fixed, "z").unwrap();
        assert!(reduced);
    }

    #[test]
    fn elementary_reduced_examples() {
        let c = ctx(&["x", "y"]);
        assert!(is_elementary_reduced(&pair(&c, "x", "y")).unwrap());
        assert!(!is_elementary_reduced(&pair(&c, "x + y^2", "y")).unwrap());
        assert!(is_elementary_reduced(&pair(&c, "x^2 + y^3", "x*y")).unwrap());
        let c3 = ctx(&["x", "y", "z"]);
        assert!(is_elementary_reduced(&pair(&c3, "x", "y")).is_err());
    }

    #[test]
    fn blowup_on_the_basic_pair() {
        let cxy = ctx(&["x", "y"]);
        let c3 = ctx(&["x", "y", "z"]);
        let report = degree_blowup_experiment(
            &p(&cxy, "x*y"),
            &pair(&c3, "z", "x*z"),
            "z",
            3,
            3,
            &rat(0),
            12,
        )
        .unwrap();
        assert_eq!(report.composed, p(&cxy, "x^7*y^6"));
        assert_eq!(report.composed_degree, Degree::Finite(13));
        assert!(report.exceeds_bound);
        assert!(!report.exponents_exceed_twice_bound);

        let coordinate = degree_blowup_experiment(
            &p(&cxy, "x"),
            &pair(&c3, "z", "x*z"),
            "z",
            3,
            3,
            &rat(0),
            2,
        )
        .unwrap();
        assert_eq!(coordinate.composed, p(&cxy, "x^3*y^3"));
        assert_eq!(coordinate.composed_degree, Degree::Finite(6));
        assert!(coordinate.exceeds_bound);
    }

    #[test]
    fn blowup_rejects_bad_inputs() {
        let cxy = ctx(&["x", "y"]);
        let c3 = ctx(&["x", "y", "z"]);
        let constant = degree_blowup_experiment(
            &p(&cxy, "5"),
            &pair(&c3, "z", "x*z"),
            "z",
            3,
            3,
            &rat(0),
            2,
        );
        assert!(matches!(constant, Err(ReductionError::BlowupPrecondition(_))));

        // (z, z + x) is not z-reduced
        let unreduced = degree_blowup_experiment(
            &p(&cxy, "x*y"),
            &pair(&c3, "z", "z + x"),
            "z",
            3,
            3,
            &rat(0),
            2,
        );
        assert!(matches!(unreduced, Err(ReductionError::BlowupPrecondition(_))));

        // u does not depend on z
        let zfree = degree_blowup_experiment(
            &p(&cxy, "x*y"),
            &pair(&c3, "x", "x*z"),
            "z",
            3,
            3,
            &rat(0),
            2,
        );
        assert!(matches!(zfree, Err(ReductionError::BlowupPrecondition(_))));
    }

    #[test]
    fn blowup_specializes_extra_variables_to_zero() {
        let cxy = ctx(&["x", "y"]);
        let c4 = ctx(&["x", "y", "z", "t"]);
        let report = degree_blowup_experiment(
            &p(&cxy, "x*y"),
            &pair(&c4, "z + t", "x*z"),
            "z",
            1,
            1,
            &rat(0),
            1,
        )
        .unwrap();
        // t ↦ 0, z ↦ x y: (x y) · (x · x y) = x^3 y^2
        assert_eq!(report.composed, p(&cxy, "x^3*y^2"));
    }

    #[test]
    fn composition_keeps_z_dependence() {
        let cxy = ctx(&["x", "y"]);
        let c3 = ctx(&["x", "y", "z"]);
        let report =
            composed_z_dependence(&p(&cxy, "x*y"), &p(&c3, "x"), &p(&c3, "z"), "z").unwrap();
        assert!(report.depends_on_z);
        assert_eq!(report.composed_z_degree, Degree::Finite(1));
        assert_eq!(report.predicted_z_degree, Some(1));
        assert_eq!(report.prediction_holds, Some(true));
        assert!(report.boundary.is_none());

        let report =
            composed_z_dependence(&p(&cxy, "y^2 + x"), &p(&c3, "x"), &p(&c3, "x + z"), "z")
                .unwrap();
        assert_eq!(report.composed_z_degree, Degree::Finite(2));
        assert_eq!(report.predicted_z_degree, Some(2));
        assert_eq!(report.prediction_holds, Some(true));
    }

    #[test]
    fn composition_boundary_cases() {
        let cxy = ctx(&["x", "y"]);
        let c3 = ctx(&["x", "y", "z"]);
        // p does not involve y: flagged, not an error
        let report =
            composed_z_dependence(&p(&cxy, "x"), &p(&c3, "x^2"), &p(&c3, "z"), "z").unwrap();
        assert!(!report.depends_on_z);
        assert_eq!(report.composed_z_degree, Degree::Finite(0));
        assert!(report.boundary.is_some());
        assert_eq!(report.predicted_z_degree, None);

        // the leading monomial (x^3 y, degree 4) hides the larger y-power y^2
        let report = composed_z_dependence(
            &p(&cxy, "y^2 + x^3*y"),
            &p(&c3, "x"),
            &p(&c3, "z"),
            "z",
        )
        .unwrap();
        assert_eq!(report.composed_z_degree, Degree::Finite(2));
        assert_eq!(report.predicted_z_degree, Some(1));
        assert_eq!(report.prediction_holds, Some(false));
        assert!(report.boundary.is_some());

        // z-dependent u is a hard error
        assert!(composed_z_dependence(&p(&cxy, "x*y"), &p(&c3, "z"), &p(&c3, "z"), "z").is_err());
    }
}
