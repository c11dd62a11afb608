//! Graded and subadditive sequences of monomial ideals and their
//! Fekete-limit invariants.
//!
//! A graded sequence satisfies a_i * a_j inside a_{i+j}; its limit
//! invariant v(a_.) = inf_j v(a_j)/j exists by Fekete's lemma and is the
//! support value of a limit region when the presentation gives one in
//! closed form. A subadditive sequence satisfies the reverse containment
//! b_{i+j} inside b_i * b_j with v(b_.) = sup_j v(b_j)/j.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::ideal::MonomialIdeal;
use crate::lct::{arnold_jumping, jumping, multiplier_ideal_of_region};
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::{Extended, Rational};
use crate::valuation::{valuation_ideal, MonomialValuation};
use crate::witness::compute_lct_witness;

#[derive(Clone, Debug)]
pub enum GradedPresentation {
    /// a_j = a^j
    PowerFamily(MonomialIdeal),
    /// a_j = { beta : <weights, beta> >= j * threshold }
    ValuationFamily {
        weights: ExponentVector,
        threshold: Rational,
    },
    /// listed terms a_1..a_J; later terms are the minimal graded closure
    /// (the sum of a_i * a_{j-i} over all splittings)
    Explicit(Vec<MonomialIdeal>),
}

/// The limit region of a sequence: exact when the presentation yields it
/// in closed form, otherwise the inner approximation P(a_J)/J tagged with
/// its index. Approximations are never reported as limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitPolyhedron {
    Exact(NewtonPolyhedron),
    Approx { poly: NewtonPolyhedron, index: u64 },
}

impl LimitPolyhedron {
    pub fn exact(&self) -> Option<&NewtonPolyhedron> {
        match self {
            LimitPolyhedron::Exact(p) => Some(p),
            LimitPolyhedron::Approx { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GradedSequence {
    dim: usize,
    presentation: GradedPresentation,
    cache: Arc<Mutex<BTreeMap<u64, MonomialIdeal>>>,
}

impl GradedSequence {
    pub fn new(presentation: GradedPresentation) -> CoreResult<Self> {
        let dim = match &presentation {
            GradedPresentation::PowerFamily(a) => {
                if a.is_zero() {
                    return Err(CoreError::ZeroIdeal);
                }
                a.dim()
            }
            GradedPresentation::ValuationFamily { weights, .. } => {
                if weights.is_zero() {
                    return Err(CoreError::ZeroWeight);
                }
                weights.dim()
            }
            GradedPresentation::Explicit(list) => {
                let first = list.first().ok_or_else(|| {
                    CoreError::InvalidInput("explicit sequence needs at least one term".into())
                })?;
                if list.iter().all(MonomialIdeal::is_zero) {
                    return Err(CoreError::ZeroIdeal);
                }
                let dim = first.dim();
                if list.iter().any(|a| a.dim() != dim) {
                    return Err(CoreError::DimensionMismatch(dim, 0));
                }
                dim
            }
        };
        Ok(GradedSequence {
            dim,
            presentation,
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        })
    }

    pub fn power_family(a: MonomialIdeal) -> CoreResult<Self> {
        GradedSequence::new(GradedPresentation::PowerFamily(a))
    }

    pub fn valuation_family(weights: ExponentVector, threshold: Rational) -> CoreResult<Self> {
        GradedSequence::new(GradedPresentation::ValuationFamily { weights, threshold })
    }

    pub fn explicit(list: Vec<MonomialIdeal>) -> CoreResult<Self> {
        GradedSequence::new(GradedPresentation::Explicit(list))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn presentation(&self) -> &GradedPresentation {
        &self.presentation
    }

    /// The j-th term, memoized.
    pub fn term(&self, j: u64) -> CoreResult<MonomialIdeal> {
        assert!(j >= 1, "terms are indexed from 1");
        if let Some(t) = self.cache.lock().unwrap().get(&j) {
            return Ok(t.clone());
        }
        let t = match &self.presentation {
            GradedPresentation::PowerFamily(a) => a.power(j),
            GradedPresentation::ValuationFamily { weights, threshold } => {
                valuation_ideal(weights, &(threshold * &Rational::from_integer(j as i64)))
            }
            GradedPresentation::Explicit(list) => {
                if (j as usize) <= list.len() {
                    list[j as usize - 1].clone()
                } else {
                    // minimal graded closure: sum over splittings
                    let mut acc = MonomialIdeal::zero(self.dim);
                    for i in 1..j {
                        let p = self.term(i)?.product(&self.term(j - i)?)?;
                        acc = acc.sum(&p)?;
                    }
                    acc
                }
            }
        };
        self.cache.lock().unwrap().insert(j, t.clone());
        Ok(t)
    }

    /// The limit region. `approx_index` is used only for presentations
    /// with no closed form (Explicit), which yield a tagged inner
    /// approximation P(a_J)/J.
    pub fn limit_polyhedron(&self, approx_index: u64) -> CoreResult<LimitPolyhedron> {
        match &self.presentation {
            GradedPresentation::PowerFamily(a) => {
                Ok(LimitPolyhedron::Exact(a.newton_polyhedron()?))
            }
            GradedPresentation::ValuationFamily { weights, threshold } => {
                Ok(LimitPolyhedron::Exact(half_space_region(weights, threshold)?))
            }
            GradedPresentation::Explicit(_) => {
                let j = approx_index.max(1);
                let a = self.term(j)?;
                if a.is_zero() {
                    return Err(CoreError::ZeroIdeal);
                }
                let inv = Rational::new(1, j as i64);
                Ok(LimitPolyhedron::Approx {
                    poly: a.newton_polyhedron()?.scale(&inv),
                    index: j,
                })
            }
        }
    }

    pub fn exact_limit(&self) -> Option<NewtonPolyhedron> {
        match self.limit_polyhedron(1) {
            Ok(LimitPolyhedron::Exact(p)) => Some(p),
            _ => None,
        }
    }
}

/// { u >= 0 : <weights, u> >= threshold } as a point-generated region:
/// the points (threshold / w_i) e_i over the support of the weights.
/// The whole orthant when threshold <= 0.
pub fn half_space_region(
    weights: &ExponentVector,
    threshold: &Rational,
) -> CoreResult<NewtonPolyhedron> {
    let dim = weights.dim();
    if !threshold.is_positive() {
        return NewtonPolyhedron::new(dim, vec![ExponentVector::zero(dim)]);
    }
    if weights.is_zero() {
        return Err(CoreError::ZeroWeight);
    }
    let pts = weights
        .support()
        .into_iter()
        .map(|i| {
            let mut entries = vec![Rational::zero(); dim];
            entries[i] = threshold / weights.get(i);
            ExponentVector::new(entries)
        })
        .collect::<CoreResult<Vec<_>>>()?;
    NewtonPolyhedron::new(dim, pts)
}

#[derive(Clone, Debug)]
pub enum SubadditivePresentation {
    /// b_j = the multiplier ideal of j times an exact limit region.
    MultiplierFamily { limit: NewtonPolyhedron },
    /// listed terms b_1..b_J only; terms beyond the list are undefined
    /// unless the whole list is the unit ideal (then the sequence is the
    /// constant unit sequence).
    Explicit(Vec<MonomialIdeal>),
}

#[derive(Clone, Debug)]
pub struct SubadditiveSequence {
    dim: usize,
    presentation: SubadditivePresentation,
    cache: Arc<Mutex<BTreeMap<u64, MonomialIdeal>>>,
}

impl SubadditiveSequence {
    /// Asymptotic multiplier ideals of a graded sequence. Requires the
    /// graded presentation to have an exact limit region.
    pub fn from_graded(seq: &GradedSequence) -> CoreResult<Self> {
        let limit = seq.exact_limit().ok_or(CoreError::InexactLimit)?;
        Ok(SubadditiveSequence::from_region(limit))
    }

    /// Multiplier ideals of the scalings of an explicit region.
    pub fn from_region(limit: NewtonPolyhedron) -> Self {
        SubadditiveSequence {
            dim: limit.dim(),
            presentation: SubadditivePresentation::MultiplierFamily { limit },
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn explicit(list: Vec<MonomialIdeal>) -> CoreResult<Self> {
        let first = list.first().ok_or_else(|| {
            CoreError::InvalidInput("explicit sequence needs at least one term".into())
        })?;
        let dim = first.dim();
        if list.iter().any(|b| b.dim() != dim) {
            return Err(CoreError::DimensionMismatch(dim, 0));
        }
        if list.iter().any(MonomialIdeal::is_zero) {
            return Err(CoreError::ZeroIdeal);
        }
        Ok(SubadditiveSequence {
            dim,
            presentation: SubadditivePresentation::Explicit(list),
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn presentation(&self) -> &SubadditivePresentation {
        &self.presentation
    }

    /// Exact limit region when the presentation carries one.
    pub fn exact_limit(&self) -> Option<&NewtonPolyhedron> {
        match &self.presentation {
            SubadditivePresentation::MultiplierFamily { limit } => Some(limit),
            SubadditivePresentation::Explicit(_) => None,
        }
    }

    fn is_constant_unit(&self) -> bool {
        match &self.presentation {
            SubadditivePresentation::Explicit(list) => list.iter().all(MonomialIdeal::is_unit),
            SubadditivePresentation::MultiplierFamily { .. } => false,
        }
    }

    pub fn term(&self, j: u64) -> CoreResult<MonomialIdeal> {
        assert!(j >= 1, "terms are indexed from 1");
        if let Some(t) = self.cache.lock().unwrap().get(&j) {
            return Ok(t.clone());
        }
        let t = match &self.presentation {
            SubadditivePresentation::MultiplierFamily { limit } => {
                multiplier_ideal_of_region(&limit.scale(&Rational::from_integer(j as i64)))?
            }
            SubadditivePresentation::Explicit(list) => {
                if (j as usize) <= list.len() {
                    list[j as usize - 1].clone()
                } else if self.is_constant_unit() {
                    MonomialIdeal::unit(self.dim)
                } else {
                    return Err(CoreError::Unsupported(format!(
                        "explicit subadditive sequence has no term at index {j} (list length {})",
                        list.len()
                    )));
                }
            }
        };
        self.cache.lock().unwrap().insert(j, t.clone());
        Ok(t)
    }

    /// Largest index <= cap for which terms are defined.
    fn available_max(&self, cap: u64) -> u64 {
        match &self.presentation {
            SubadditivePresentation::Explicit(list) if !self.is_constant_unit() => {
                cap.min(list.len() as u64)
            }
            _ => cap,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentViolation {
    pub i: u64,
    pub j: u64,
    /// a monomial exhibiting the failed containment
    pub witness: ExponentVector,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub max_index: u64,
    pub violations: Vec<ContainmentViolation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies a_i * a_j inside a_{i+j} for every i <= j with i + j <= J.
pub fn check_graded(seq: &GradedSequence, max_index: u64) -> CoreResult<CheckReport> {
    assert!(max_index >= 2);
    let mut violations = Vec::new();
    for i in 1..=max_index / 2 {
        for j in i..=(max_index - i) {
            let prod = seq.term(i)?.product(&seq.term(j)?)?;
            let target = seq.term(i + j)?;
            for g in prod.generators() {
                if !target.contains_monomial(g)? {
                    violations.push(ContainmentViolation {
                        i,
                        j,
                        witness: g.clone(),
                    });
                    break;
                }
            }
        }
    }
    Ok(CheckReport {
        max_index,
        violations,
    })
}

/// Verifies b_{i+j} inside b_i * b_j for tested indices.
pub fn check_subadditive(seq: &SubadditiveSequence, max_index: u64) -> CoreResult<CheckReport> {
    assert!(max_index >= 2);
    let cap = seq.available_max(max_index);
    let mut violations = Vec::new();
    for i in 1..=cap / 2 {
        for j in i..=(cap - i) {
            let prod = seq.term(i)?.product(&seq.term(j)?)?;
            let sub = seq.term(i + j)?;
            for g in sub.generators() {
                if !prod.contains_monomial(g)? {
                    violations.push(ContainmentViolation {
                        i,
                        j,
                        witness: g.clone(),
                    });
                    break;
                }
            }
        }
    }
    Ok(CheckReport {
        max_index: cap,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VBounds {
    /// min_{j<=J} v(a_j)/j, a certified upper bound for v(a_.)
    pub upper: Rational,
    /// the Fekete limit itself, when the presentation is exact
    pub exact: Option<Rational>,
}

/// v(a_.) = inf_j v(a_j)/j = lim_j v(a_j)/j (over nonzero terms).
pub fn v_of_graded(
    v: &MonomialValuation,
    seq: &GradedSequence,
    max_index: u64,
) -> CoreResult<VBounds> {
    assert!(max_index >= 1);
    let mut upper: Option<Rational> = None;
    for j in 1..=max_index {
        let a = seq.term(j)?;
        match v.eval_ideal(&a)? {
            Extended::Infinite => continue, // zero term, skipped
            Extended::Finite(val) => {
                let q = val / Rational::from_integer(j as i64);
                upper = Some(match upper {
                    None => q,
                    Some(u) => u.min(q),
                });
            }
        }
    }
    let upper = upper.ok_or_else(|| {
        CoreError::InvalidInput("all sequence terms up to the index bound are zero".into())
    })?;
    let exact = match seq.limit_polyhedron(max_index)? {
        LimitPolyhedron::Exact(p) => Some(p.support_value(v.weights())?),
        LimitPolyhedron::Approx { .. } => None,
    };
    if let Some(e) = &exact {
        debug_assert!(&upper >= e, "upper bound undercuts the exact limit");
    }
    Ok(VBounds { upper, exact })
}

#[derive(Clone, Debug, Serialize)]
pub struct LctBounds {
    /// max_{j<=J} j * lct^q(a_j), a certified lower bound for lct^q(a_.)
    pub lower: Extended,
    pub exact: Option<Extended>,
}

/// lct^q(a_.) = sup_j j * lct^q(a_j).
pub fn lct_of_graded(
    seq: &GradedSequence,
    q: &MonomialIdeal,
    max_index: u64,
) -> CoreResult<LctBounds> {
    assert!(max_index >= 1);
    let mut lower: Option<Extended> = None;
    let mut any_nonzero = false;
    for j in 1..=max_index {
        let a = seq.term(j)?;
        if a.is_zero() {
            continue;
        }
        any_nonzero = true;
        let val = jumping(&a, q)?.value.scale(&Rational::from_integer(j as i64));
        lower = Some(match lower {
            None => val,
            Some(l) => l.max(val),
        });
    }
    if !any_nonzero {
        return Err(CoreError::InvalidInput(
            "all sequence terms up to the index bound are zero".into(),
        ));
    }
    let exact = match seq.limit_polyhedron(max_index)? {
        LimitPolyhedron::Exact(p) => Some(compute_lct_witness(&p, q)?.value),
        LimitPolyhedron::Approx { .. } => None,
    };
    Ok(LctBounds {
        lower: lower.unwrap(),
        exact,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubadditiveVBounds {
    /// max_{j<=J} v(b_j)/j, a certified lower bound for v(b_.)
    pub lower: Rational,
    pub exact: Option<Rational>,
}

/// v(b_.) = sup_j v(b_j)/j; exact via the limit region for multiplier
/// families (where it agrees with the graded-side limit).
pub fn v_of_subadditive(
    v: &MonomialValuation,
    seq: &SubadditiveSequence,
    max_index: u64,
) -> CoreResult<SubadditiveVBounds> {
    assert!(max_index >= 1);
    let cap = seq.available_max(max_index);
    let mut lower = Rational::zero();
    for j in 1..=cap {
        let b = seq.term(j)?;
        if let Extended::Finite(val) = v.eval_ideal(&b)? {
            lower = lower.max(val / Rational::from_integer(j as i64));
        }
    }
    let exact = match seq.exact_limit() {
        Some(p) => Some(p.support_value(v.weights())?),
        None if seq.is_constant_unit() => Some(Rational::zero()),
        None => None,
    };
    if let Some(e) = &exact {
        debug_assert!(&lower <= e, "lower bound exceeds the exact limit");
    }
    Ok(SubadditiveVBounds { lower, exact })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthViolation {
    pub weights: ExponentVector,
    pub index: u64,
    /// the violated bound (v(b_j) + A(v)) / j
    pub bound: Rational,
    /// the exact v(b_.) (or a certified lower bound exceeding the bound)
    pub asymptotic: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub max_index: u64,
    pub checked_valuations: usize,
    /// true when v(b_.) was available exactly; false when violations were
    /// certified from lower bounds alone
    pub exact: bool,
    pub violations: Vec<GrowthViolation>,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Controlled growth: v(b_j)/j <= v(b_.) <= (v(b_j) + A(v))/j for all j.
///
/// With an exact limit both inequalities are verified exactly. Without
/// one, a violation of the right inequality can still be certified from
/// the lower bound sup_k v(b_k)/k <= v(b_.); if no violation is found in
/// that mode the check refuses rather than claim a pass.
pub fn controlled_growth_check(
    seq: &SubadditiveSequence,
    valuations: &[MonomialValuation],
    max_index: u64,
) -> CoreResult<GrowthReport> {
    assert!(max_index >= 1);
    let cap = seq.available_max(max_index);
    let exact_available = seq.exact_limit().is_some() || seq.is_constant_unit();
    let mut violations = Vec::new();
    for v in valuations {
        let bounds = v_of_subadditive(v, seq, cap)?;
        let a_disc = v.log_discrepancy();
        let asymptotic = match &bounds.exact {
            Some(e) => e.clone(),
            None => bounds.lower.clone(),
        };
        for j in 1..=cap {
            let b = seq.term(j)?;
            let vbj = match v.eval_ideal(&b)? {
                Extended::Finite(x) => x,
                Extended::Infinite => unreachable!("subadditive terms are nonzero"),
            };
            let jr = Rational::from_integer(j as i64);
            let left = &vbj / &jr;
            let right = &(&vbj + &a_disc) / &jr;
            // left <= asymptotic holds by construction when asymptotic is
            // the lower bound; with an exact value it is a real check
            if (exact_available && left > asymptotic) || asymptotic > right {
                violations.push(GrowthViolation {
                    weights: v.weights().clone(),
                    index: j,
                    bound: right,
                    asymptotic: asymptotic.clone(),
                });
            }
        }
    }
    if !exact_available && violations.is_empty() {
        // cannot certify a pass from one-sided bounds
        return Err(CoreError::InexactLimit);
    }
    Ok(GrowthReport {
        max_index: cap,
        checked_valuations: valuations.len(),
        exact: exact_available,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichViolation {
    pub index: u64,
    pub lower: Rational,
    pub upper: Rational,
    pub value: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub max_index: u64,
    /// exact Arn^q(b_.)
    pub asymptotic: Extended,
    /// lct^q(b_.) > 0, a consequence of the sandwich
    pub positive_threshold: bool,
    pub violations: Vec<SandwichViolation>,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.positive_threshold
    }
}

/// Arnold sandwich: (1/j) Arn^q(b_j) <= Arn^q(b_.) <= (1/j) Arn^q(b_j) + 1/j.
pub fn arn_sandwich_check(
    seq: &SubadditiveSequence,
    q: &MonomialIdeal,
    max_index: u64,
) -> CoreResult<SandwichReport> {
    assert!(max_index >= 1);
    let cap = seq.available_max(max_index);
    let lam = match seq.exact_limit() {
        Some(p) => compute_lct_witness(p, q)?.value,
        None if seq.is_constant_unit() => Extended::Infinite,
        None => return Err(CoreError::InexactLimit),
    };
    let arn = lam.recip(); // Arn^q(b_.)
    let positive_threshold = !lam.is_zero();
    let mut violations = Vec::new();
    for j in 1..=cap {
        let b = seq.term(j)?;
        let arn_j = arnold_jumping(&b, q)?;
        let jr = Rational::from_integer(j as i64);
        match (&arn, &arn_j) {
            (Extended::Finite(a), Extended::Finite(aj)) => {
                let lower = aj / &jr;
                let upper = &lower + &jr.recip();
                if a < &lower || a > &upper {
                    violations.push(SandwichViolation {
                        index: j,
                        lower,
                        upper,
                        value: a.clone(),
                    });
                }
            }
            (Extended::Infinite, Extended::Infinite) => {}
            (Extended::Infinite, Extended::Finite(aj)) => {
                // finite-level bound cannot cap an infinite limit
                violations.push(SandwichViolation {
                    index: j,
                    lower: aj / &jr,
                    upper: &(aj / &jr) + &jr.recip(),
                    value: Rational::from_integer(-1),
                });
            }
            (Extended::Finite(_), Extended::Infinite) => {
                unreachable!("subadditive terms are nonzero")
            }
        }
    }
    Ok(SandwichReport {
        max_index: cap,
        asymptotic: arn,
        positive_threshold,
        violations,
    })
}

/// b_j = J(a_.^j): the multiplier ideal against j times the exact limit
/// region of a graded sequence.
pub fn asymptotic_multiplier_ideal(seq: &GradedSequence, j: u64) -> CoreResult<MonomialIdeal> {
    assert!(j >= 1);
    let limit = seq.exact_limit().ok_or(CoreError::InexactLimit)?;
    multiplier_ideal_of_region(&limit.scale(&Rational::from_integer(j as i64)))
}
