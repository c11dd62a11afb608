//! Monomial ideals in n variables, stored by their unique minimal
//! generating set.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::Rational;

/// A monomial ideal, canonically represented: generators form the minimal
/// antichain under componentwise division, sorted graded-lexicographically.
///
/// The zero ideal is the empty generator list. Generators must have
/// nonnegative integer exponents.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct MonomialIdeal {
    dim: usize,
    generators: Vec<ExponentVector>,
}

/// Removes generators divisible by another and sorts canonically.
fn minimalize(mut gens: Vec<ExponentVector>) -> Vec<ExponentVector> {
    gens.sort_by(|a, b| a.grlex_cmp(b));
    gens.dedup();
    let mut out: Vec<ExponentVector> = Vec::with_capacity(gens.len());
    // grlex order means a divisor always precedes its multiples, so one
    // backward scan per candidate suffices.
    for g in gens {
        if !out.iter().any(|m| m.dominated_by(&g)) {
            out.push(g);
        }
    }
    out
}

impl MonomialIdeal {
    /// Builds an ideal from an arbitrary generating set.
    pub fn new(dim: usize, generators: Vec<ExponentVector>) -> CoreResult<Self> {
        for g in &generators {
            if g.dim() != dim {
                return Err(CoreError::DimensionMismatch(dim, g.dim()));
            }
            if !g.is_integral() {
                return Err(CoreError::InvalidInput(format!(
                    "non-integral generator exponent {g:?}"
                )));
            }
        }
        Ok(MonomialIdeal {
            dim,
            generators: minimalize(generators),
        })
    }

    pub fn from_integer_rows(dim: usize, rows: &[&[i64]]) -> CoreResult<Self> {
        let gens = rows
            .iter()
            .map(|r| ExponentVector::from_integers(r))
            .collect::<CoreResult<Vec<_>>>()?;
        MonomialIdeal::new(dim, gens)
    }

    pub fn zero(dim: usize) -> Self {
        MonomialIdeal {
            dim,
            generators: vec![],
        }
    }

    pub fn unit(dim: usize) -> Self {
        MonomialIdeal {
            dim,
            generators: vec![ExponentVector::zero(dim)],
        }
    }

    /// The maximal ideal (x_1, ..., x_n).
    pub fn maximal(dim: usize) -> Self {
        MonomialIdeal {
            dim,
            generators: minimalize((0..dim).map(|i| ExponentVector::unit(dim, i)).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[ExponentVector] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.first().is_some_and(ExponentVector::is_zero)
    }

    /// Monomial membership: x^beta lies in the ideal iff some generator
    /// divides it.
    pub fn contains_monomial(&self, beta: &ExponentVector) -> CoreResult<bool> {
        if beta.dim() != self.dim {
            return Err(CoreError::DimensionMismatch(self.dim, beta.dim()));
        }
        Ok(self.generators.iter().any(|g| g.dominated_by(beta)))
    }

    /// Ideal containment: self is a subset of other.
    pub fn contained_in(&self, other: &MonomialIdeal) -> CoreResult<bool> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch(self.dim, other.dim));
        }
        for g in &self.generators {
            if !other.contains_monomial(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> CoreResult<MonomialIdeal> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch(self.dim, other.dim));
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(MonomialIdeal {
            dim: self.dim,
            generators: minimalize(gens),
        })
    }

    pub fn product(&self, other: &MonomialIdeal) -> CoreResult<MonomialIdeal> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch(self.dim, other.dim));
        }
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.add(b)?);
            }
        }
        Ok(MonomialIdeal {
            dim: self.dim,
            generators: minimalize(gens),
        })
    }

    /// Ideal power by binary exponentiation. `a^0` is the unit ideal,
    /// including for the zero ideal (the empty product convention).
    pub fn power(&self, mut e: u64) -> MonomialIdeal {
        let mut result = MonomialIdeal::unit(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.product(&base).expect("dims match");
            }
            e >>= 1;
            if e > 0 {
                base = base.product(&base).expect("dims match");
            }
        }
        result
    }

    /// Newton polyhedron: the convex hull of the generator exponents plus
    /// the nonnegative orthant, represented by its generating points.
    /// Errors on the zero ideal, which has an empty polyhedron.
    pub fn newton_polyhedron(&self) -> CoreResult<NewtonPolyhedron> {
        if self.is_zero() {
            return Err(CoreError::ZeroIdeal);
        }
        NewtonPolyhedron::new(self.dim, self.generators.clone())
    }

    /// Largest generator coordinate; 0 for the zero/unit ideal.
    pub fn max_degree(&self) -> Rational {
        self.generators
            .iter()
            .map(ExponentVector::max_entry)
            .fold(Rational::zero(), Rational::max)
    }
}
