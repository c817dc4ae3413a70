//! Jacobian matrices, symbolic rank via vanishing minors, the algebraic
//! dependence test, and the good-constant search for specializations
//! `z ↦ x^m y^n + c`.
//!
//! Polynomials `f_1, …, f_m` over a characteristic-0 field are algebraically
//! dependent exactly when their Jacobian matrix (with respect to all context
//! variables) has symbolic rank below `m`, i.e. when every `m × m` minor is
//! the zero polynomial. Rank is decided by exact Laplace expansion of the
//! minors; the matrices in scope are tiny, so exactness wins over
//! asymptotics.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::context::VariableContext;
use crate::poly::{PolyError, PolyMap, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobianError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("matrix rows must have equal length")]
    RaggedRows,
    #[error("matrix entries must share one context")]
    MixedContexts,
    #[error("minor size {k} out of range for a {rows}x{cols} matrix")]
    MinorSize { k: usize, rows: usize, cols: usize },
    #[error("matrix dimensions {lr}x{lc} and {rr}x{rc} do not compose")]
    Shape { lr: usize, lc: usize, rr: usize, rc: usize },
    #[error("determinant requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a nonempty list of polynomials")]
    Empty,
    #[error("good-constant search requires a context of exactly three variables, got {0}")]
    BadSpecializationContext(String),
    #[error("exponents m, n must be at least 1")]
    BadExponents,
    #[error(
        "no good constant found among 0..={cap}; over an infinite field one is guaranteed to exist, raise the cap"
    )]
    CapExhausted { cap: u64 },
}

/// Rectangular matrix of polynomials over one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    context: VariableContext,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self, JacobianError> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(JacobianError::Empty);
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(JacobianError::RaggedRows);
        }
        let entries: Vec<Polynomial> = rows.into_iter().flatten().collect();
        let context = entries
            .first()
            .map(|p| p.context().clone())
            .ok_or(JacobianError::Empty)?;
        if entries.iter().any(|p| *p.context() != context) {
            return Err(JacobianError::MixedContexts);
        }
        Ok(PolyMatrix { context, rows: nrows, cols: ncols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn context(&self) -> &VariableContext {
        &self.context
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.cols + col]
    }

    /// Matrix product, exact.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, JacobianError> {
        if self.cols != other.rows {
            return Err(JacobianError::Shape {
                lr: self.rows,
                lc: self.cols,
                rr: other.rows,
                rc: other.cols,
            });
        }
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(other.cols);
            for j in 0..other.cols {
                let mut acc = Polynomial::zero(self.context.clone());
                for k in 0..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        PolyMatrix::from_rows(rows)
    }

    /// Applies a polynomial map to every entry.
    pub fn substitute(&self, map: &PolyMap) -> Result<PolyMatrix, JacobianError> {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self.get(i, j).substitute(map)?);
            }
            rows.push(row);
        }
        PolyMatrix::from_rows(rows)
    }

    /// Exact determinant by Laplace expansion along the first row.
    pub fn determinant(&self) -> Result<Polynomial, JacobianError> {
        if self.rows != self.cols {
            return Err(JacobianError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_recursive(&all, &all))
    }

    fn det_recursive(&self, row_idx: &[usize], col_idx: &[usize]) -> Polynomial {
        debug_assert_eq!(row_idx.len(), col_idx.len());
        match row_idx.len() {
            0 => Polynomial::one(self.context.clone()),
            1 => self.get(row_idx[0], col_idx[0]).clone(),
            _ => {
                let mut acc = Polynomial::zero(self.context.clone());
                let rest_rows = &row_idx[1..];
                for (j, &col) in col_idx.iter().enumerate() {
                    let entry = self.get(row_idx[0], col);
                    if entry.is_zero() {
                        continue;
                    }
                    let rest_cols: Vec<usize> = col_idx
                        .iter()
                        .enumerate()
                        .filter(|(jj, _)| *jj != j)
                        .map(|(_, &c)| c)
                        .collect();
                    let minor = self.det_recursive(rest_rows, &rest_cols);
                    let signed = if j % 2 == 0 {
                        entry.try_mul(&minor)
                    } else {
                        entry.try_mul(&minor).map(|p| -&p)
                    }
                    .expect("shared context");
                    acc = acc.try_add(&signed).expect("shared context");
                }
                acc
            }
        }
    }

    /// The `k × k` minor determinant on the given row and column index sets.
    pub fn minor(&self, row_idx: &[usize], col_idx: &[usize]) -> Polynomial {
        self.det_recursive(row_idx, col_idx)
    }
}

/// Jacobian matrix: entry `(i, j)` is `∂ fs[i] / ∂ vars[j]`.
pub fn jacobian_matrix(fs: &[Polynomial], vars: &[&str]) -> Result<PolyMatrix, JacobianError> {
    let first = fs.first().ok_or(JacobianError::Empty)?;
    let context = first.context().clone();
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs {
        if *f.context() != context {
            return Err(JacobianError::MixedContexts);
        }
        let row = vars
            .iter()
            .map(|v| f.partial_derivative(v))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    PolyMatrix::from_rows(rows)
}

/// True iff every `k × k` minor of `m` is the zero polynomial.
pub fn minors_vanish(m: &PolyMatrix, k: usize) -> Result<bool, JacobianError> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return Err(JacobianError::MinorSize { k, rows: m.rows(), cols: m.cols() });
    }
    for row_idx in (0..m.rows()).combinations(k) {
        for col_idx in (0..m.cols()).combinations(k) {
            if !m.minor(&row_idx, &col_idx).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// If some `k × k` minor of `m` is nonzero, returns its row/column index sets
/// and its determinant. Used for the CLI's independence witness.
pub fn nonzero_minor(
    m: &PolyMatrix,
    k: usize,
) -> Result<Option<(Vec<usize>, Vec<usize>, Polynomial)>, JacobianError> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return Err(JacobianError::MinorSize { k, rows: m.rows(), cols: m.cols() });
    }
    for row_idx in (0..m.rows()).combinations(k) {
        for col_idx in (0..m.cols()).combinations(k) {
            let det = m.minor(&row_idx, &col_idx);
            if !det.is_zero() {
                return Ok(Some((row_idx, col_idx, det)));
            }
        }
    }
    Ok(None)
}

/// Algebraic dependence over the rationals, decided by the Jacobian
/// criterion: the family is dependent iff the Jacobian over *all* context
/// variables has symbolic rank below the family size.
pub fn algebraically_dependent(fs: &[Polynomial]) -> Result<bool, JacobianError> {
    let Some(first) = fs.first() else {
        // the empty family is independent
        return Ok(false);
    };
    let context = first.context().clone();
    if fs.len() > context.len() {
        // rank is at most the number of variables
        return Ok(true);
    }
    let vars: Vec<&str> = context.names().iter().map(String::as_str).collect();
    let jac = jacobian_matrix(fs, &vars)?;
    minors_vanish(&jac, fs.len())
}

/// Builds the specialization map `(x, y, z) → (x, y)` sending the third
/// context variable to `x^m y^n + c` (first two variables fixed).
pub fn specialization_map(
    context: &VariableContext,
    m: u32,
    n: u32,
    c: &BigRational,
) -> Result<PolyMap, JacobianError> {
    if context.len() != 3 {
        return Err(JacobianError::BadSpecializationContext(context.to_string()));
    }
    if m < 1 || n < 1 {
        return Err(JacobianError::BadExponents);
    }
    let target = VariableContext::new([context.name(0), context.name(1)])
        .map_err(PolyError::from)?;
    let x = Polynomial::variable(&target, context.name(0)).map_err(JacobianError::Poly)?;
    let y = Polynomial::variable(&target, context.name(1)).map_err(JacobianError::Poly)?;
    let w = x
        .pow(m)
        .try_mul(&y.pow(n))?
        .try_add(&Polynomial::constant(target.clone(), c.clone()))?;
    Ok(PolyMap::new(context.clone(), target, vec![x, y, w])?)
}

/// Smallest `c` in the enumeration `0, 1, 2, …, cap` such that
/// `u(x, y, x^m y^n + c)` and `v(x, y, x^m y^n + c)` are algebraically
/// independent. Requires `u`, `v` over a three-variable context; the last
/// variable is the one specialized.
pub fn find_good_constant(
    u: &Polynomial,
    v: &Polynomial,
    m: u32,
    n: u32,
    cap: u64,
) -> Result<BigRational, JacobianError> {
    if u.context() != v.context() {
        return Err(JacobianError::Poly(PolyError::ContextMismatch {
            left: u.context().to_string(),
            right: v.context().to_string(),
        }));
    }
    for c in 0..=cap {
        let constant = BigRational::from_integer(BigInt::from(c));
        let map = specialization_map(u.context(), m, n, &constant)?;
        let specialized = [u.substitute(&map)?, v.substitute(&map)?];
        if !algebraically_dependent(&specialized)? {
            return Ok(constant);
        }
    }
    Err(JacobianError::CapExhausted { cap })
}

/// The tall factor in the chain-rule factorization of the specialized
/// Jacobian: the Jacobian of `(x, y, x^m y^n + c)` with respect to `(x, y)`.
pub fn specialization_jacobian_factor(
    context: &VariableContext,
    m: u32,
    n: u32,
    c: &BigRational,
) -> Result<PolyMatrix, JacobianError> {
    let map = specialization_map(context, m, n, c)?;
    let target = map.target().clone();
    let fs = vec![
        Polynomial::variable(&target, target.name(0)).map_err(JacobianError::Poly)?,
        Polynomial::variable(&target, target.name(1)).map_err(JacobianError::Poly)?,
        map.image(2).clone(),
    ];
    jacobian_matrix(&fs, &[target.name(0), target.name(1)])
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

    #[test]
    fn jacobian_entries() {
        let c = ctx(&["x", "y"]);
        let jac = jacobian_matrix(&[p(&c, "x^2"), p(&c, "y")], &["x", "y"]).unwrap();
        assert_eq!(jac.get(0, 0), &p(&c, "2*x"));
        assert!(jac.get(0, 1).is_zero());
        assert!(jac.get(1, 0).is_zero());
        assert_eq!(jac.get(1, 1), &p(&c, "1"));
    }

    #[test]
    fn jacobian_of_specialization_triple() {
        // rows (1, 0), (0, 1), (m x^{m-1} y^n, n x^m y^{n-1}) for m = 2, n = 3
        let c = ctx(&["x", "y", "z"]);
        let factor = specialization_jacobian_factor(&c, 2, 3, &rat(5)).unwrap();
        let t = ctx(&["x", "y"]);
        assert_eq!(factor.get(0, 0), &p(&t, "1"));
        assert!(factor.get(0, 1).is_zero());
        assert!(factor.get(1, 0).is_zero());
        assert_eq!(factor.get(1, 1), &p(&t, "1"));
        assert_eq!(factor.get(2, 0), &p(&t, "2*x*y^3"));
        assert_eq!(factor.get(2, 1), &p(&t, "3*x^2*y^2"));
    }

    #[test]
    fn jacobian_with_chosen_variables() {
        let c = ctx(&["x", "z"]);
        let jac = jacobian_matrix(&[p(&c, "z"), p(&c, "x*z")], &["x", "z"]).unwrap();
        assert!(jac.get(0, 0).is_zero());
        assert_eq!(jac.get(0, 1), &p(&c, "1"));
        assert_eq!(jac.get(1, 0), &p(&c, "z"));
        assert_eq!(jac.get(1, 1), &p(&c, "x"));
    }

    #[test]
    fn minors_vanish_detects_rank() {
        let c = ctx(&["x", "y"]);
        let full =
            PolyMatrix::from_rows(vec![vec![p(&c, "2*x"), p(&c, "0")], vec![p(&c, "0"), p(&c, "1")]])
                .unwrap();
        assert!(!minors_vanish(&full, 2).unwrap());

        let jac = jacobian_matrix(&[p(&c, "x"), p(&c, "x^2")], &["x", "y"]).unwrap();
        assert!(minors_vanish(&jac, 2).unwrap());
        assert!(minors_vanish(&full, 3).is_err());
    }

    #[test]
    fn two_by_three_specialized_jacobian_has_rank_two() {
        let c = ctx(&["x", "y", "z"]);
        let jac = jacobian_matrix(&[p(&c, "z"), p(&c, "x*z")], &["x", "y", "z"]).unwrap();
        assert!(!minors_vanish(&jac, 2).unwrap());
    }

    #[test]
    fn dependence_examples() {
        let c = ctx(&["x", "y"]);
        // u = x + y, v = (x + y)^2: explicit relation v = u^2
        assert!(algebraically_dependent(&[p(&c, "x + y"), p(&c, "x^2 + 2*x*y + y^2")]).unwrap());
        assert!(!algebraically_dependent(&[p(&c, "x"), p(&c, "y")]).unwrap());
        let c3 = ctx(&["x", "y", "z"]);
        assert!(!algebraically_dependent(&[p(&c3, "z"), p(&c3, "x*z")]).unwrap());
        // more polynomials than variables
        assert!(algebraically_dependent(&[p(&c, "x"), p(&c, "y"), p(&c, "x + y")]).unwrap());
        assert!(!algebraically_dependent(&[]).unwrap());
    }

    #[test]
    fn good_constant_simple_cases() {
        let c = ctx(&["x", "y", "z"]);
        assert_eq!(
            find_good_constant(&p(&c, "z"), &p(&c, "x*z"), 3, 3, 10).unwrap(),
            rat(0)
        );
        assert_eq!(
            find_good_constant(&p(&c, "z"), &p(&c, "x"), 1, 1, 10).unwrap(),
            rat(0)
        );
    }

    #[test]
    fn good_constant_skips_a_bad_constant() {
        // u = z, v = x z - x^2 y + z^2: specializing z -> x y gives
        // v' = (x y)^2 = u'^2 (dependent), while z -> x y + 1 is independent.
        let c = ctx(&["x", "y", "z"]);
        let u = p(&c, "z");
        let v = p(&c, "x*z - x^2*y + z^2");
        assert_eq!(find_good_constant(&u, &v, 1, 1, 10).unwrap(), rat(1));
    }

    #[test]
    fn good_constant_cap_exhaustion() {
        // dependent pair stays dependent under every specialization
        let c = ctx(&["x", "y", "z"]);
        let err = find_good_constant(&p(&c, "z"), &p(&c, "z^2"), 1, 1, 3).unwrap_err();
        assert_eq!(err, JacobianError::CapExhausted { cap: 3 });
    }

    #[test]
    fn specialized_jacobian_factorizes() {
        // D(u(x,y,s), v(x,y,s)) = D(u,v)|_s · D(x, y, s) with s = x^m y^n + c
        let c = ctx(&["x", "y", "z"]);
        let u = p(&c, "z^2 + x*y");
        let v = p(&c, "x*z - y + 1");
        let (m, n, cval) = (2, 1, frac_c());
        let map = specialization_map(&c, m, n, &cval).unwrap();

        let specialized = [u.substitute(&map).unwrap(), v.substitute(&map).unwrap()];
        let lhs = jacobian_matrix(&specialized, &["x", "y"]).unwrap();

        let big = jacobian_matrix(&[u, v], &["x", "y", "z"]).unwrap();
        let factor = specialization_jacobian_factor(&c, m, n, &cval).unwrap();
        let rhs = big.substitute(&map).unwrap().mul(&factor).unwrap();
        assert_eq!(lhs, rhs);
    }

    fn frac_c() -> BigRational {
        crate::poly::frac(3, 2)
    }
}
