//! Newton polyhedra: unbounded convex regions of the form
//! conv(points) + R^n_{>=0}, represented only by generating points.
//!
//! No facet enumeration anywhere. Membership, interior membership and
//! support values are answered by small exact linear programs, so the
//! representation stays dual-free and every answer carries an implicit
//! certificate (a convex combination, or a separating weight vector).

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::lp::{lp_solve, Constraint, LpProblem, LpStatus, Sense};
use crate::rational::Rational;

/// conv(points) + nonnegative orthant. Points may have rational
/// coordinates. Canonical form: exactly the vertices, sorted
/// graded-lexicographically, so equal regions compare equal.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize, Debug)]
pub struct NewtonPolyhedron {
    dim: usize,
    points: Vec<ExponentVector>,
}

impl NewtonPolyhedron {
    /// Builds the region generated by a nonempty point set.
    pub fn new(dim: usize, points: Vec<ExponentVector>) -> CoreResult<Self> {
        if points.is_empty() {
            return Err(CoreError::InvalidInput(
                "a Newton polyhedron needs at least one generating point".into(),
            ));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(CoreError::DimensionMismatch(dim, p.dim()));
            }
        }
        let mut poly = NewtonPolyhedron { dim, points };
        poly.canonicalize();
        Ok(poly)
    }

    /// Reduces the generating set to the vertex set.
    fn canonicalize(&mut self) {
        self.points.sort_by(|a, b| a.grlex_cmp(b));
        self.points.dedup();
        // Domination pass first (cheap): a point above another is interior
        // to that point's orthant cone.
        let pts = std::mem::take(&mut self.points);
        for p in pts {
            if !self.points.iter().any(|q| q.dominated_by(&p)) {
                self.points.push(p);
            }
        }
        // Then drop any point expressible from the others (one LP each).
        let mut i = 0;
        while i < self.points.len() && self.points.len() > 1 {
            let candidate = self.points[i].clone();
            let rest: Vec<ExponentVector> = self
                .points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let rest_poly = NewtonPolyhedron {
                dim: self.dim,
                points: rest,
            };
            if rest_poly.contains_point(&candidate).unwrap() {
                self.points.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The vertex set, in graded-lexicographic order.
    pub fn points(&self) -> &[ExponentVector] {
        &self.points
    }

    /// Builds the membership LP: convex weights y >= 0 with sum(y) = 1 and
    /// sum(y_u u) componentwise <= p (the orthant slack). An extra variable
    /// `eps` with coefficient +1 in every coordinate row turns the same
    /// system into the interior test.
    fn membership_lp(&self, p: &ExponentVector, with_eps: bool) -> LpProblem {
        let k = self.points.len();
        let nv = k + usize::from(with_eps);
        let mut constraints = Vec::with_capacity(self.dim + 1);
        for i in 0..self.dim {
            let mut coeffs: Vec<Rational> =
                self.points.iter().map(|u| u.get(i).clone()).collect();
            if with_eps {
                coeffs.push(Rational::one());
            }
            constraints.push(Constraint::new(coeffs, Sense::Le, p.get(i).clone()));
        }
        let mut ones = vec![Rational::one(); k];
        if with_eps {
            ones.push(Rational::zero());
        }
        constraints.push(Constraint::new(ones, Sense::Eq, Rational::one()));
        let mut objective = vec![Rational::zero(); nv];
        if with_eps {
            objective[k] = Rational::from_integer(-1); // maximize eps
        }
        LpProblem {
            num_vars: nv,
            objective,
            constraints,
        }
    }

    /// Exact membership test.
    pub fn contains_point(&self, p: &ExponentVector) -> CoreResult<bool> {
        if p.dim() != self.dim {
            return Err(CoreError::DimensionMismatch(self.dim, p.dim()));
        }
        let sol = lp_solve(&self.membership_lp(p, false));
        Ok(sol.status == LpStatus::Optimal)
    }

    /// Exact topological-interior test.
    ///
    /// p is interior iff p - eps*(1,...,1) still lies in the region for
    /// some eps > 0 (the region is closed under adding the orthant, so a
    /// uniform inward shift witnesses a full neighbourhood). We solve for
    /// the largest such eps directly and test its sign, which is exact and
    /// avoids any iterative shrinking.
    pub fn interior_contains(&self, p: &ExponentVector) -> CoreResult<bool> {
        if p.dim() != self.dim {
            return Err(CoreError::DimensionMismatch(self.dim, p.dim()));
        }
        let sol = lp_solve(&self.membership_lp(p, true));
        match sol.status {
            LpStatus::Infeasible => Ok(false),
            LpStatus::Optimal => Ok(sol.value.unwrap().is_negative()),
            LpStatus::Unbounded => unreachable!("eps is bounded above by min(p)"),
        }
    }

    /// Support value min_{x in P} <alpha, x> for a nonnegative weight
    /// alpha; attained at a generating point.
    pub fn support_value(&self, alpha: &ExponentVector) -> CoreResult<Rational> {
        if alpha.dim() != self.dim {
            return Err(CoreError::DimensionMismatch(self.dim, alpha.dim()));
        }
        let mut best: Option<Rational> = None;
        for u in &self.points {
            let v = alpha.dot(u)?;
            best = Some(match best {
                None => v,
                Some(b) => b.min(v),
            });
        }
        Ok(best.expect("nonempty point set"))
    }

    /// Scales the region by a positive factor.
    pub fn scale(&self, c: &Rational) -> NewtonPolyhedron {
        assert!(c.is_positive(), "scale factor must be positive");
        NewtonPolyhedron {
            dim: self.dim,
            points: self.points.iter().map(|u| u.scale(c)).collect(),
        }
    }

    /// Minkowski-style union bound: the region generated by both point
    /// sets (the polyhedron of the ideal sum).
    pub fn join(&self, other: &NewtonPolyhedron) -> CoreResult<NewtonPolyhedron> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch(self.dim, other.dim));
        }
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().cloned());
        NewtonPolyhedron::new(self.dim, pts)
    }

    /// Minkowski sum (the polyhedron of the ideal product).
    pub fn minkowski_sum(&self, other: &NewtonPolyhedron) -> CoreResult<NewtonPolyhedron> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch(self.dim, other.dim));
        }
        let mut pts = Vec::with_capacity(self.points.len() * other.points.len());
        for a in &self.points {
            for b in &other.points {
                pts.push(a.add(b)?);
            }
        }
        NewtonPolyhedron::new(self.dim, pts)
    }

    /// For a point outside the region, a nonnegative weight alpha with
    /// <alpha, p> strictly below the support value: a separating
    /// certificate extracted from the infeasibility dual. Returns None
    /// when p is in the region.
    pub fn separate(&self, p: &ExponentVector) -> CoreResult<Option<ExponentVector>> {
        if p.dim() != self.dim {
            return Err(CoreError::DimensionMismatch(self.dim, p.dim()));
        }
        let sol = lp_solve(&self.membership_lp(p, false));
        if sol.status != LpStatus::Infeasible {
            return Ok(None);
        }
        // Farkas dual: lambda_i <= 0 on the coordinate rows; alpha = -lambda
        // separates. (The equality-row multiplier certifies the gap.)
        let alpha = ExponentVector::new(
            sol.dual[..self.dim].iter().map(|l| -l).collect(),
        )?;
        debug_assert!(
            &alpha.dot(p)? < &self.support_value(&alpha)?,
            "separating certificate failed its own check"
        );
        Ok(Some(alpha))
    }
}
