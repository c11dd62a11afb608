//! Monomial valuations v_alpha and their valuation ideals.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::ideal::MonomialIdeal;
use crate::rational::{Extended, Rational};

/// The monomial valuation with weight vector alpha: v(x^beta) = <alpha, beta>.
/// Weights are nonnegative rationals, not all zero.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct MonomialValuation {
    weights: ExponentVector,
}

impl MonomialValuation {
    pub fn new(weights: ExponentVector) -> CoreResult<Self> {
        if weights.is_zero() {
            return Err(CoreError::ZeroWeight);
        }
        Ok(MonomialValuation { weights })
    }

    pub fn from_integers(weights: &[i64]) -> CoreResult<Self> {
        MonomialValuation::new(ExponentVector::from_integers(weights)?)
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    pub fn weights(&self) -> &ExponentVector {
        &self.weights
    }

    pub fn eval_monomial(&self, beta: &ExponentVector) -> CoreResult<Rational> {
        self.weights.dot(beta)
    }

    /// v(a) = min over generators; infinity on the zero ideal.
    pub fn eval_ideal(&self, a: &MonomialIdeal) -> CoreResult<Extended> {
        if a.dim() != self.dim() {
            return Err(CoreError::DimensionMismatch(self.dim(), a.dim()));
        }
        let mut best: Option<Rational> = None;
        for g in a.generators() {
            let v = self.eval_monomial(g)?;
            best = Some(match best {
                None => v,
                Some(b) => b.min(v),
            });
        }
        Ok(best.map_or(Extended::Infinite, Extended::Finite))
    }

    /// Log discrepancy A(v_alpha) = sum of the weights.
    pub fn log_discrepancy(&self) -> Rational {
        self.weights.sum_entries()
    }

    /// The valuation ideal {x^beta : v(beta) >= s}, by its minimal
    /// generators. The unit ideal when s <= 0.
    pub fn valuation_ideal(&self, s: &Rational) -> MonomialIdeal {
        valuation_ideal(&self.weights, s)
    }
}

/// Integer ceiling division for positive divisor.
fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Minimal monomial generators of {beta integral >= 0 : <alpha, beta> >= s}.
///
/// Works on an integer rescaling of (alpha, s) and walks the staircase:
/// along each support coordinate we branch on the exponent until the
/// running weight reaches the threshold, which bounds the tree by the
/// staircase size. A final local test keeps exactly the minimal corners.
pub fn valuation_ideal(alpha: &ExponentVector, s: &Rational) -> MonomialIdeal {
    let dim = alpha.dim();
    if !s.is_positive() {
        return MonomialIdeal::unit(dim);
    }
    let support = alpha.support();
    if support.is_empty() {
        // zero weight: no monomial ever reaches a positive threshold
        return MonomialIdeal::zero(dim);
    }

    // common denominator rescale to integers
    let mut l = s.denom().clone();
    for &i in &support {
        l = num_integer::lcm(l, alpha.get(i).denom().clone());
    }
    let scale = Rational::from(l);
    let w: Vec<i64> = support
        .iter()
        .map(|&i| {
            (alpha.get(i) * &scale)
                .to_i64()
                .expect("rescaled weight out of range")
        })
        .collect();
    let t = (s * &scale).to_i64().expect("rescaled threshold out of range");

    let mut corners: Vec<Vec<i64>> = Vec::new();
    let mut prefix = vec![0i64; support.len()];
    staircase(&w, t, 0, 0, &mut prefix, &mut corners);

    // local minimality: beta is minimal iff dropping one from any positive
    // coordinate falls below the threshold
    let gens: Vec<ExponentVector> = corners
        .into_iter()
        .filter(|beta| {
            let total: i64 = beta.iter().zip(&w).map(|(b, wi)| b * wi).sum();
            beta.iter()
                .zip(&w)
                .all(|(&b, &wi)| b == 0 || total - wi < t)
        })
        .map(|beta| {
            let mut full = vec![0i64; dim];
            for (k, &i) in support.iter().enumerate() {
                full[i] = beta[k];
            }
            ExponentVector::from_integers(&full).unwrap()
        })
        .collect();
    MonomialIdeal::new(dim, gens).unwrap()
}

fn staircase(
    w: &[i64],
    t: i64,
    idx: usize,
    acc: i64,
    prefix: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if idx + 1 == w.len() {
        prefix[idx] = ceil_div(t - acc, w[idx]);
        out.push(prefix.clone());
        prefix[idx] = 0;
        return;
    }
    let mut b = 0i64;
    loop {
        let here = acc + b * w[idx];
        prefix[idx] = b;
        if here >= t {
            // corner with all later coordinates zero; larger b is dominated
            out.push(prefix.clone());
            prefix[idx] = 0;
            return;
        }
        staircase(w, t, idx + 1, here, prefix, out);
        b += 1;
    }
}
