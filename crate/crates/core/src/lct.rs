//! Log canonical thresholds, jumping numbers, Arnold multiplicities and
//! polyhedral multiplier ideals of monomial ideals.
//!
//! The threshold of a monomial ideal is the infimum over monomial
//! valuations v_alpha of (A(alpha) + v_alpha(q)) / v_alpha(a), which is a
//! finite linear program once it is split over the generators of q. All
//! values are exact.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::ideal::MonomialIdeal;
use crate::lp::{lp_solve, Constraint, LpProblem, LpStatus, Sense};
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::{Extended, Rational};

/// Outcome of a threshold computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub value: Extended,
    /// An optimal weight vector alpha attaining the infimum, when the
    /// value is finite and positive.
    pub minimizer: Option<ExponentVector>,
    /// For jumping numbers: the generator of q the minimum decomposes
    /// through (graded-lex-first among the winners).
    pub witness_generator: Option<ExponentVector>,
}

impl ThresholdResult {
    fn degenerate(value: Extended) -> Self {
        ThresholdResult {
            value,
            minimizer: None,
            witness_generator: None,
        }
    }
}

fn feasibility_rows(a: &MonomialIdeal) -> Vec<Constraint> {
    a.generators()
        .iter()
        .map(|u| Constraint::new(u.entries().to_vec(), Sense::Ge, Rational::one()))
        .collect()
}

/// Jumping number lct^q(a): degenerate cases first (zero a -> 0, unit a
/// or zero q -> infinity), then one LP per generator of q.
pub fn jumping(a: &MonomialIdeal, q: &MonomialIdeal) -> CoreResult<ThresholdResult> {
    if a.dim() != q.dim() {
        return Err(CoreError::DimensionMismatch(a.dim(), q.dim()));
    }
    if a.is_zero() {
        return Ok(ThresholdResult::degenerate(Extended::zero()));
    }
    if a.is_unit() || q.is_zero() {
        return Ok(ThresholdResult::degenerate(Extended::Infinite));
    }
    let n = a.dim();
    let rows = feasibility_rows(a);
    let mut best: Option<(Rational, ExponentVector, ExponentVector)> = None;
    for w in q.generators() {
        // objective <1 + w, alpha>
        let objective: Vec<Rational> = (0..n)
            .map(|i| &Rational::one() + w.get(i))
            .collect();
        let problem = LpProblem {
            num_vars: n,
            objective,
            constraints: rows.clone(),
        };
        let sol = lp_solve(&problem);
        debug_assert_eq!(sol.status, LpStatus::Optimal, "threshold LP is always feasible");
        let value = sol.value.clone().unwrap();
        let alpha = ExponentVector::new(sol.primal)?;
        // strict improvement only, so the graded-lex-first winner is kept
        if best.as_ref().is_none_or(|(b, _, _)| &value < b) {
            best = Some((value, alpha, w.clone()));
        }
    }
    let (value, alpha, w) = best.expect("q has a generator");
    Ok(ThresholdResult {
        value: Extended::Finite(value),
        minimizer: Some(alpha),
        witness_generator: Some(w),
    })
}

/// Log canonical threshold lct(a) = lct^{(1)}(a).
pub fn lct(a: &MonomialIdeal) -> CoreResult<ThresholdResult> {
    let mut r = jumping(a, &MonomialIdeal::unit(a.dim()))?;
    r.witness_generator = None;
    Ok(r)
}

/// Arnold multiplicity: the reciprocal threshold, with 0 <-> infinity.
pub fn arnold(a: &MonomialIdeal) -> CoreResult<Extended> {
    Ok(lct(a)?.value.recip())
}

/// Arnold multiplicity twisted by q.
pub fn arnold_jumping(a: &MonomialIdeal, q: &MonomialIdeal) -> CoreResult<Extended> {
    Ok(jumping(a, q)?.value.recip())
}

/// Independent oracle for the threshold: the diagonal point s*(1,...,1)
/// first entering the Newton polyhedron satisfies lct(a) = 1/s*. Solved
/// as a single LP over convex weights; shares no code path with the
/// valuation-side LP of [`lct`].
pub fn lct_dual(a: &MonomialIdeal) -> CoreResult<Extended> {
    if a.is_zero() {
        return Ok(Extended::zero());
    }
    if a.is_unit() {
        return Ok(Extended::Infinite);
    }
    let n = a.dim();
    let points = a.generators();
    let k = points.len();
    // variables: y_1..y_k, s ; minimize s
    let mut constraints = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut coeffs: Vec<Rational> = points.iter().map(|u| u.get(i).clone()).collect();
        coeffs.push(Rational::from_integer(-1));
        constraints.push(Constraint::new(coeffs, Sense::Le, Rational::zero()));
    }
    let mut ones = vec![Rational::one(); k];
    ones.push(Rational::zero());
    constraints.push(Constraint::new(ones, Sense::Eq, Rational::one()));
    let mut objective = vec![Rational::zero(); k];
    objective.push(Rational::one());
    let sol = lp_solve(&LpProblem {
        num_vars: k + 1,
        objective,
        constraints,
    });
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    Ok(Extended::Finite(sol.value.clone().unwrap()).recip())
}

/// Polyhedral multiplier ideal at coefficient c >= 0: generated by the
/// monomials x^beta with beta + (1,...,1) interior to c * P(a).
///
/// Scans a bounding box in graded-lex order; a candidate dominated by an
/// accepted generator is skipped without an LP (sound because grlex
/// emits potential divisors first).
pub fn multiplier_ideal(a: &MonomialIdeal, c: &Rational) -> CoreResult<MonomialIdeal> {
    if c.is_negative() {
        return Err(CoreError::InvalidInput("negative coefficient".into()));
    }
    let n = a.dim();
    if c.is_zero() || a.is_unit() {
        return Ok(MonomialIdeal::unit(n));
    }
    if a.is_zero() {
        return Ok(MonomialIdeal::zero(n));
    }
    let pc = a.newton_polyhedron()?.scale(c);
    multiplier_ideal_of_region(&pc)
}

/// Multiplier ideal of an already-scaled region: generated by the beta
/// with beta + (1,...,1) interior to the region. Shared by the finite
/// and asymptotic multiplier-ideal computations.
pub fn multiplier_ideal_of_region(pc: &NewtonPolyhedron) -> CoreResult<MonomialIdeal> {
    let n = pc.dim();
    let max_coord = pc
        .points()
        .iter()
        .map(ExponentVector::max_entry)
        .fold(Rational::zero(), Rational::max);
    let bound = max_coord.ceil_i64() + n as i64;

    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut beta = vec![0i64; n];
    'odometer: loop {
        candidates.push(beta.clone());
        let mut i = 0;
        loop {
            if i == n {
                break 'odometer;
            }
            beta[i] += 1;
            if beta[i] <= bound {
                break;
            }
            beta[i] = 0;
            i += 1;
        }
    }
    candidates.sort_by_key(|b| (b.iter().sum::<i64>(), b.clone()));

    let one = ExponentVector::from_integers(&vec![1i64; n]).unwrap();
    let mut accepted: Vec<ExponentVector> = Vec::new();
    for b in candidates {
        let bv = ExponentVector::from_integers(&b)?;
        if accepted.iter().any(|g| g.dominated_by(&bv)) {
            continue;
        }
        if pc.interior_contains(&bv.add(&one)?)? {
            accepted.push(bv);
        }
    }
    MonomialIdeal::new(n, accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ideal(rows: &[&[i64]]) -> MonomialIdeal {
        MonomialIdeal::from_integer_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn lct_of_cusp() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        let r = lct(&a).unwrap();
        assert_eq!(r.value, Extended::finite(rat(5, 6)));
        let alpha = r.minimizer.unwrap();
        assert_eq!(alpha.entries(), &[rat(1, 2), rat(1, 3)]);
    }

    #[test]
    fn lct_of_maximal_ideal_is_dimension() {
        for n in 1..=4usize {
            let m = MonomialIdeal::maximal(n);
            assert_eq!(
                lct(&m).unwrap().value,
                Extended::finite(Rational::from_integer(n as i64))
            );
        }
    }

    #[test]
    fn lct_degenerate_conventions() {
        assert_eq!(lct(&MonomialIdeal::zero(2)).unwrap().value, Extended::zero());
        assert_eq!(lct(&MonomialIdeal::unit(2)).unwrap().value, Extended::Infinite);
        assert_eq!(arnold(&MonomialIdeal::zero(2)).unwrap(), Extended::Infinite);
        assert_eq!(arnold(&MonomialIdeal::unit(2)).unwrap(), Extended::zero());
    }

    #[test]
    fn lct_agrees_with_diagonal_oracle() {
        let cases: Vec<MonomialIdeal> = vec![
            ideal(&[&[2, 0], &[0, 3]]),
            ideal(&[&[1, 0], &[0, 2]]),
            ideal(&[&[3, 0], &[1, 1], &[0, 3]]),
            ideal(&[&[4, 0, 0], &[0, 5, 0], &[0, 0, 6]]),
            ideal(&[&[2, 1, 0], &[0, 0, 3], &[1, 0, 1]]),
            MonomialIdeal::maximal(3),
            MonomialIdeal::unit(2),
            MonomialIdeal::zero(2),
        ];
        for a in cases {
            assert_eq!(lct(&a).unwrap().value, lct_dual(&a).unwrap(), "{a:?}");
        }
    }

    #[test]
    fn lct_is_a_lower_bound_over_a_weight_grid() {
        // A(alpha)/v_alpha(a) >= lct(a) for every weight; coarse grid probe.
        let a = ideal(&[&[3, 0], &[1, 1], &[0, 3]]);
        let l = lct(&a).unwrap().value;
        let lv = l.as_finite().unwrap();
        for p in 0..=20i64 {
            for q in 0..=20i64 {
                if p == 0 && q == 0 {
                    continue;
                }
                let alpha = ExponentVector::new(vec![rat(p, 20), rat(q, 20)]).unwrap();
                let v = a
                    .generators()
                    .iter()
                    .map(|g| alpha.dot(g).unwrap())
                    .min()
                    .unwrap();
                if v.is_zero() {
                    continue;
                }
                let ratio = alpha.sum_entries() / v;
                assert!(&ratio >= lv, "alpha=({p}/20,{q}/20)");
            }
        }
    }

    #[test]
    fn jumping_numbers_dimension_one() {
        // lct^{(x^k)}((x^a)) = (1 + k) / a
        for a_exp in 1..=5i64 {
            for k in 0..=4i64 {
                let a = ideal(&[&[a_exp]]);
                let q = ideal(&[&[k]]);
                let r = jumping(&a, &q).unwrap();
                assert_eq!(r.value, Extended::finite(rat(1 + k, a_exp)));
            }
        }
    }

    #[test]
    fn jumping_picks_graded_lex_first_winner() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        let q = MonomialIdeal::maximal(2);
        let r = jumping(&a, &q).unwrap();
        assert_eq!(r.value, Extended::finite(rat(7, 6)));
        assert_eq!(
            r.witness_generator.unwrap(),
            ExponentVector::from_integers(&[0, 1]).unwrap()
        );
        // symmetric ideal: both generators of q win; (0,1) is grlex-first
        let s = ideal(&[&[2, 0], &[0, 2]]);
        let rs = jumping(&s, &q).unwrap();
        assert_eq!(rs.value, Extended::finite(rat(3, 2)));
        assert_eq!(
            rs.witness_generator.unwrap(),
            ExponentVector::from_integers(&[0, 1]).unwrap()
        );
    }

    #[test]
    fn jumping_degenerate_conventions() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            jumping(&a, &MonomialIdeal::zero(2)).unwrap().value,
            Extended::Infinite
        );
        assert_eq!(
            jumping(&MonomialIdeal::zero(2), &a).unwrap().value,
            Extended::zero()
        );
        assert_eq!(
            jumping(&MonomialIdeal::unit(2), &a).unwrap().value,
            Extended::Infinite
        );
        // unit twist reduces to the plain threshold
        assert_eq!(
            jumping(&a, &MonomialIdeal::unit(2)).unwrap().value,
            lct(&a).unwrap().value
        );
    }

    #[test]
    fn multiplier_ideals_of_cusp() {
        let a = ideal(&[&[2, 0], &[0, 3]]);
        // below the threshold: trivial
        assert!(multiplier_ideal(&a, &rat(4, 5)).unwrap().is_unit());
        assert!(multiplier_ideal(&a, &rat(0, 1)).unwrap().is_unit());
        // at the threshold the ideal jumps to the maximal ideal
        assert_eq!(
            multiplier_ideal(&a, &rat(5, 6)).unwrap(),
            MonomialIdeal::maximal(2)
        );
        assert_eq!(
            multiplier_ideal(&a, &rat(1, 1)).unwrap(),
            MonomialIdeal::maximal(2)
        );
        assert_eq!(
            multiplier_ideal(&a, &rat(3, 2)).unwrap(),
            ideal(&[&[2, 0], &[1, 1], &[0, 3]])
        );
    }

    #[test]
    fn multiplier_ideal_is_monotone_in_c() {
        let a = ideal(&[&[3, 0], &[1, 1], &[0, 3]]);
        let cs = [rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1), rat(5, 2)];
        for pair in cs.windows(2) {
            let lo = multiplier_ideal(&a, &pair[0]).unwrap();
            let hi = multiplier_ideal(&a, &pair[1]).unwrap();
            assert!(hi.contained_in(&lo).unwrap(), "c={} vs {}", pair[0], pair[1]);
        }
    }

    #[test]
    fn multiplier_ideal_jump_detects_threshold() {
        // J(c a) is trivial exactly for c < lct(a)
        let a = ideal(&[&[3, 0], &[1, 1], &[0, 3]]);
        let l = lct(&a).unwrap().value;
        let lv = l.as_finite().unwrap().clone();
        let eps = rat(1, 100);
        let below = &lv - &eps;
        assert!(multiplier_ideal(&a, &below).unwrap().is_unit());
        assert!(!multiplier_ideal(&a, &lv).unwrap().is_unit());
    }

    #[test]
    fn multiplier_ideal_degenerate_inputs() {
        assert!(multiplier_ideal(&MonomialIdeal::unit(2), &rat(7, 1))
            .unwrap()
            .is_unit());
        assert!(multiplier_ideal(&MonomialIdeal::zero(2), &rat(1, 1))
            .unwrap()
            .is_zero());
        assert!(multiplier_ideal(&MonomialIdeal::maximal(2), &rat(-1, 1)).is_err());
    }
}
