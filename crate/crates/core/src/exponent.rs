//! Exponent vectors: points of Q^n with nonnegative entries.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::rational::Rational;

/// A point in Q^n_{>=0}; the exponent beta of a monomial x^beta, or a
/// weight vector alpha.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector {
    entries: Vec<Rational>,
}

impl ExponentVector {
    /// Builds a vector, rejecting negative entries.
    pub fn new(entries: Vec<Rational>) -> CoreResult<Self> {
        if entries.iter().any(|e| e.is_negative()) {
            return Err(CoreError::NegativeWeight);
        }
        Ok(ExponentVector { entries })
    }

    pub fn from_integers(entries: &[i64]) -> CoreResult<Self> {
        ExponentVector::new(entries.iter().map(|&e| Rational::from_integer(e)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ExponentVector {
            entries: vec![Rational::zero(); dim],
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = ExponentVector::zero(dim);
        v.entries[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rational::is_integer)
    }

    /// Indices with strictly positive entry.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.entries[i].is_positive()).collect()
    }

    pub fn check_dim(&self, other: &ExponentVector) -> CoreResult<()> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn dot(&self, other: &ExponentVector) -> CoreResult<Rational> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn add(&self, other: &ExponentVector) -> CoreResult<ExponentVector> {
        self.check_dim(other)?;
        Ok(ExponentVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, t: &Rational) -> ExponentVector {
        assert!(!t.is_negative());
        ExponentVector {
            entries: self.entries.iter().map(|e| e * t).collect(),
        }
    }

    pub fn sum_entries(&self) -> Rational {
        self.entries.iter().cloned().sum()
    }

    pub fn max_entry(&self) -> Rational {
        self.entries
            .iter()
            .cloned()
            .fold(Rational::zero(), Rational::max)
    }

    /// Componentwise order: self <= other everywhere.
    pub fn dominated_by(&self, other: &ExponentVector) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// Graded-lexicographic order used as the canonical generator order.
    pub fn grlex_cmp(&self, other: &ExponentVector) -> Ordering {
        self.sum_entries()
            .cmp(&other.sum_entries())
            .then_with(|| self.entries.cmp(&other.entries))
    }

    /// Integer entries as i64, when all entries are integral and fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(Rational::to_i64).collect()
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.entries.iter().map(Rational::to_f64).collect()
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn rejects_negative_entries() {
        assert!(ExponentVector::new(vec![rat(-1, 2)]).is_err());
    }

    #[test]
    fn dot_and_domination() {
        let a = ExponentVector::from_integers(&[1, 2]).unwrap();
        let b = ExponentVector::from_integers(&[3, 1]).unwrap();
        assert_eq!(a.dot(&b).unwrap(), rat(5, 1));
        assert!(!a.dominated_by(&b));
        assert!(a.dominated_by(&ExponentVector::from_integers(&[1, 3]).unwrap()));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = ExponentVector::from_integers(&[1]).unwrap();
        let b = ExponentVector::from_integers(&[1, 2]).unwrap();
        assert!(a.dot(&b).is_err());
    }

    #[test]
    fn grlex_orders_by_degree_first() {
        let lo = ExponentVector::from_integers(&[0, 1]).unwrap();
        let hi = ExponentVector::from_integers(&[2, 0]).unwrap();
        assert_eq!(lo.grlex_cmp(&hi), Ordering::Less);
    }
}
