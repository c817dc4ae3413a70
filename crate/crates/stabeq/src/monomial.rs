//! Exponent vectors.
//!
//! A [`Monomial`] stores one exponent per context variable. The `Ord`
//! implementation is graded reverse lexicographic over the context order;
//! that ordering is the crate's canonical internal term order (display and
//! user-selected orders live in [`crate::order`]). Exponent arithmetic is
//! overflow-checked: wrapping silently is never acceptable, so `mul` and
//! `pow` panic with a clear message on overflow instead.

use std::cmp::Ordering;

/// Exponent vector over a fixed variable context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    /// The unit monomial (all exponents zero) for a context of `arity` variables.
    pub fn unit(arity: usize) -> Self {
        Monomial { exps: vec![0; arity] }
    }

    /// The monomial consisting of a single variable to the first power.
    pub fn variable(arity: usize, idx: usize) -> Self {
        assert!(idx < arity, "variable index {idx} out of range for arity {arity}");
        let mut exps = vec![0; arity];
        exps[idx] = 1;
        Monomial { exps }
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.exps[idx]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Indices of variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// Product of monomials. Panics on arity mismatch or exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.arity(), other.arity(), "monomial arity mismatch");
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.checked_add(b).expect("monomial exponent overflow"))
            .collect();
        Monomial { exps }
    }

    /// `self` raised to the `k`-th power. Panics on exponent overflow.
    pub fn pow(&self, k: u32) -> Monomial {
        let exps = self
            .exps
            .iter()
            .map(|&a| a.checked_mul(k).expect("monomial exponent overflow"))
            .collect();
        Monomial { exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.arity() == other.arity()
            && self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(&b, &a)| b - a).collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.arity(), other.arity(), "monomial arity mismatch");
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn coprime_with(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Copy with the exponent of variable `idx` set to zero.
    pub fn without_variable(&self, idx: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[idx] = 0;
        Monomial { exps }
    }
}

/// Graded reverse lexicographic order over the natural context order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // Monomials of different arity never belong to the same polynomial;
        // still give them a total order so collections stay well-behaved.
        self.arity()
            .cmp(&other.arity())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| {
                for (a, b) in self.exps.iter().rev().zip(other.exps.iter().rev()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        // larger exponent in a *later* position means smaller in grevlex
                        ord => return ord.reverse(),
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exponents(exps.to_vec())
    }

    #[test]
    fn grevlex_classics() {
        // over (x, y, z): y^2 > x z and x y > z^2
        assert!(m(&[0, 2, 0]) > m(&[1, 0, 1]));
        assert!(m(&[1, 1, 0]) > m(&[0, 0, 2]));
        // degree dominates
        assert!(m(&[0, 0, 3]) > m(&[1, 1, 0]));
    }

    #[test]
    fn division_and_lcm() {
        let xy = m(&[1, 1, 0]);
        let x2y3 = m(&[2, 3, 0]);
        assert!(xy.divides(&x2y3));
        assert_eq!(xy.checked_div(&x2y3), Some(m(&[1, 2, 0])));
        assert_eq!(x2y3.checked_div(&xy), None);
        assert_eq!(xy.lcm(&m(&[0, 0, 2])), m(&[1, 1, 2]));
        assert!(m(&[1, 0, 0]).coprime_with(&m(&[0, 2, 1])));
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn overflow_is_loud() {
        let big = m(&[u32::MAX, 0]);
        let _ = big.mul(&m(&[1, 0]));
    }
}
