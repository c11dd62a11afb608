//! Toric model plurisubharmonic functions
//! phi(z) = max_i (sum_j c_ij log|z_j| + d_i) with c_i >= 0, their
//! Kiselman numbers, singularity exponents, and the approximation
//! sequence of multiplier ideals they generate.
//!
//! Everything asymptotic is exact; the floating-point "limit estimate"
//! path exists only to exercise the defining limit numerically.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, CoreResult};
use crate::exponent::ExponentVector;
use crate::ideal::MonomialIdeal;
use crate::lct::ThresholdResult;
use crate::lp::{lp_solve, Constraint, LpProblem, LpStatus, Sense};
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::{Extended, Rational};
use crate::sequences::SubadditiveSequence;
use crate::valuation::MonomialValuation;
use crate::witness::compute_lct_witness;

/// A max of rational-coefficient monomial logs. The class is closed
/// under max (piece-list union), positive scaling, and constant shifts,
/// and every invariant in this crate is exactly computable on it.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ToricPsh {
    dim: usize,
    /// (c_i, d_i): the piece <c_i, log|z|> + d_i
    pieces: Vec<(ExponentVector, Rational)>,
}

impl ToricPsh {
    pub fn new(dim: usize, pieces: Vec<(ExponentVector, Rational)>) -> CoreResult<Self> {
        if pieces.is_empty() {
            return Err(CoreError::InvalidInput(
                "a toric psh function needs at least one piece".into(),
            ));
        }
        for (c, _) in &pieces {
            if c.dim() != dim {
                return Err(CoreError::DimensionMismatch(dim, c.dim()));
            }
        }
        Ok(ToricPsh { dim, pieces })
    }

    /// log|a| = log max over generators |x^u|: pieces (u, 0).
    pub fn from_ideal(a: &MonomialIdeal) -> CoreResult<Self> {
        if a.is_zero() {
            return Err(CoreError::ZeroIdeal);
        }
        ToricPsh::new(
            a.dim(),
            a.generators().iter().map(|u| (u.clone(), Rational::zero())).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[(ExponentVector, Rational)] {
        &self.pieces
    }

    /// t * phi for rational t > 0.
    pub fn scale(&self, t: &Rational) -> ToricPsh {
        assert!(t.is_positive());
        ToricPsh {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|(c, d)| (c.scale(t), d * t))
                .collect(),
        }
    }

    /// phi + constant.
    pub fn shift(&self, constant: &Rational) -> ToricPsh {
        ToricPsh {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|(c, d)| (c.clone(), d + constant))
                .collect(),
        }
    }

    /// max{phi, psi}: the union of the piece lists.
    pub fn max_with(&self, other: &ToricPsh) -> CoreResult<ToricPsh> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch(self.dim, other.dim));
        }
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        ToricPsh::new(self.dim, pieces)
    }

    /// The region conv{c_i} + orthant carrying all asymptotic invariants
    /// of phi (constants d_i drop out).
    pub fn newton_region(&self) -> CoreResult<NewtonPolyhedron> {
        NewtonPolyhedron::new(self.dim, self.pieces.iter().map(|(c, _)| c.clone()).collect())
    }

    /// H(t) = sup of phi over the closed polydisc with log-radii t <= 0;
    /// attained on the distinguished boundary because c_i >= 0.
    pub fn sup_on_polydisc(&self, t: &[Rational]) -> CoreResult<Rational> {
        if t.len() != self.dim {
            return Err(CoreError::DimensionMismatch(self.dim, t.len()));
        }
        if t.iter().any(Rational::is_positive) {
            return Err(CoreError::InvalidInput(
                "polydisc log-radii must be <= 0".into(),
            ));
        }
        Ok(self
            .pieces
            .iter()
            .map(|(c, d)| {
                let dot: Rational = c.entries().iter().zip(t).map(|(a, b)| a * b).sum();
                dot + d.clone()
            })
            .reduce(Rational::max)
            .expect("nonempty piece list"))
    }

    /// H as a float, for the numerical limit path.
    fn sup_f64(&self, t: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|(c, d)| {
                let dot: f64 = c.to_f64s().iter().zip(t).map(|(a, b)| a * b).sum();
                dot + d.to_f64()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KiselmanEvaluation {
    pub alpha: ExponentVector,
    /// min_i <c_i, alpha>, the exact closed form (epsilon-free)
    pub direct_value: Rational,
    /// H(log(eps) + s*alpha)/s at the deep sample point s
    pub limit_estimate: f64,
    pub s_used: i64,
    pub epsilon: f64,
}

/// The Kiselman number h(alpha) = lim_{s -> -inf} H(log(eps)*1 + s*alpha)/s.
/// H is piecewise affine in s, so the limit is the eventual slope
/// min_i <c_i, alpha>; one deep float sample stands in for the limit.
pub fn kiselman_number(phi: &ToricPsh, alpha: &MonomialValuation) -> CoreResult<KiselmanEvaluation> {
    kiselman_number_at(phi, alpha, 0.5, -10_000)
}

pub fn kiselman_number_at(
    phi: &ToricPsh,
    alpha: &MonomialValuation,
    epsilon: f64,
    s: i64,
) -> CoreResult<KiselmanEvaluation> {
    if alpha.dim() != phi.dim() {
        return Err(CoreError::DimensionMismatch(phi.dim(), alpha.dim()));
    }
    assert!(s < 0 && epsilon > 0.0 && epsilon < 1.0);
    let direct_value = phi
        .pieces
        .iter()
        .map(|(c, _)| c.dot(alpha.weights()).unwrap())
        .reduce(Rational::min)
        .expect("nonempty piece list");
    // H is piecewise affine in s with eventual slope h(alpha); a secant
    // through two deep samples sits on the final piece and recovers the
    // limit to machine precision (the plain ratio H/s carries an O(1/s)
    // offset from the constants)
    let af = alpha.weights().to_f64s();
    let eval = |depth: f64| {
        let t: Vec<f64> = af.iter().map(|a| epsilon.ln() + depth * a).collect();
        phi.sup_f64(&t)
    };
    let (s1, s0) = (s as f64, s as f64 / 2.0);
    let limit_estimate = (eval(s1) - eval(s0)) / (s1 - s0);
    Ok(KiselmanEvaluation {
        alpha: alpha.weights().clone(),
        direct_value,
        limit_estimate,
        s_used: s,
        epsilon,
    })
}

/// Integrability exponent of e^{-2 phi} twisted by |q|^2: one LP per
/// generator of q over the piece coefficients. Constants d_i are bounded
/// and do not affect integrability, so they are ignored.
pub fn singularity_exponent(phi: &ToricPsh, q: &MonomialIdeal) -> CoreResult<ThresholdResult> {
    if q.is_zero() {
        return Err(CoreError::ZeroIdeal);
    }
    if q.dim() != phi.dim() {
        return Err(CoreError::DimensionMismatch(phi.dim(), q.dim()));
    }
    let n = phi.dim();
    let rows: Vec<Constraint> = phi
        .pieces
        .iter()
        .map(|(c, _)| Constraint::new(c.entries().to_vec(), Sense::Ge, Rational::one()))
        .collect();
    let mut best: Option<(Rational, ExponentVector, ExponentVector)> = None;
    for w in q.generators() {
        let objective: Vec<Rational> = (0..n).map(|i| &Rational::one() + w.get(i)).collect();
        let sol = lp_solve(&LpProblem {
            num_vars: n,
            objective,
            constraints: rows.clone(),
        });
        match sol.status {
            LpStatus::Infeasible => continue, // a piece with c = 0: phi is bounded below
            LpStatus::Unbounded => unreachable!("objective is nonnegative"),
            LpStatus::Optimal => {}
        }
        let value = sol.value.clone().unwrap();
        let alpha = ExponentVector::new(sol.primal)?;
        if best.as_ref().is_none_or(|(b, _, _)| &value < b) {
            best = Some((value, alpha, w.clone()));
        }
    }
    Ok(match best {
        None => ThresholdResult {
            value: Extended::Infinite,
            minimizer: None,
            witness_generator: None,
        },
        Some((value, alpha, w)) => ThresholdResult {
            value: Extended::Finite(value),
            minimizer: Some(alpha),
            witness_generator: Some(w),
        },
    })
}

/// The approximation sequence b_j = J(j * phi) as a multiplier family
/// over the region of phi.
pub fn demailly_sequence(phi: &ToricPsh) -> CoreResult<SubadditiveSequence> {
    Ok(SubadditiveSequence::from_region(phi.newton_region()?))
}

/// Exact growth bound behind the limit definition: for rational L < 0
/// and every t <= L*1,
///   H(t) <= h(alpha) * max_{i in supp(alpha)} (t_i - L)/alpha_i + H(L*1).
pub fn sup_growth_estimate_holds(
    phi: &ToricPsh,
    alpha: &MonomialValuation,
    level: &Rational,
    t: &[Rational],
) -> CoreResult<bool> {
    assert!(level.is_negative());
    if t.iter().any(|ti| ti > level) {
        return Err(CoreError::InvalidInput("grid point must be <= level".into()));
    }
    let h = kiselman_number(phi, alpha)?.direct_value;
    let m = alpha
        .weights()
        .support()
        .into_iter()
        .map(|i| &(&t[i] - level) / alpha.weights().get(i))
        .reduce(Rational::max)
        .ok_or(CoreError::ZeroWeight)?;
    let at_level = phi.sup_on_polydisc(&vec![level.clone(); phi.dim()])?;
    Ok(phi.sup_on_polydisc(t)? <= &h * &m + at_level)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaBatteryReport {
    pub samples: usize,
    pub violations: Vec<String>,
}

impl LemmaBatteryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn h_of(phi: &ToricPsh, alpha: &ExponentVector) -> Rational {
    phi.pieces
        .iter()
        .map(|(c, _)| c.dot(alpha).unwrap())
        .reduce(Rational::min)
        .unwrap()
}

/// phi >= psi + O(1) near the origin whenever every piece of psi is
/// beaten from below by some piece of phi coefficientwise.
fn dominates(phi: &ToricPsh, psi: &ToricPsh) -> bool {
    psi.pieces
        .iter()
        .all(|(cj, _)| phi.pieces.iter().any(|(ci, _)| ci.dominated_by(cj)))
}

/// Exact property battery for the Kiselman number h and the singularity
/// exponent tau on a pair of functions:
/// nonnegativity, 1-homogeneity, concavity, monotonicity in alpha,
/// invariance under constant shifts, monotonicity under domination, and
/// the max rule h_{max{phi,psi}}(alpha) = min{h_phi(alpha), h_psi(alpha)}
/// (the min is genuinely over the two distinct arguments).
pub fn lemma_battery(
    phi: &ToricPsh,
    psi: &ToricPsh,
    alphas: &[MonomialValuation],
) -> CoreResult<LemmaBatteryReport> {
    if phi.dim() != psi.dim() {
        return Err(CoreError::DimensionMismatch(phi.dim(), psi.dim()));
    }
    let mut violations = Vec::new();
    let mut push = |cond: bool, msg: String| {
        if !cond {
            violations.push(msg);
        }
    };

    for (k, a) in alphas.iter().enumerate() {
        let alpha = a.weights();
        let h = h_of(phi, alpha);
        push(!h.is_negative(), format!("h < 0 at sample {k}"));
        // 1-homogeneity at a few rational scales
        for t in [Rational::new(3, 2), Rational::new(1, 3), Rational::from_integer(4)] {
            push(
                h_of(phi, &alpha.scale(&t)) == &h * &t,
                format!("homogeneity failed at sample {k}, t={t}"),
            );
        }
        // monotonicity in each coordinate
        for i in 0..phi.dim() {
            let mut e = alpha.clone();
            e = e.add(&ExponentVector::unit(phi.dim(), i))?;
            push(
                h_of(phi, &e) >= h,
                format!("monotonicity failed at sample {k}, coord {i}"),
            );
        }
        // constant shifts leave h untouched
        push(
            h_of(&phi.shift(&Rational::from_integer(-7)), alpha) == h,
            format!("shift invariance failed at sample {k}"),
        );
    }
    // concavity on consecutive sample pairs
    for (k, pair) in alphas.windows(2).enumerate() {
        let (a, b) = (pair[0].weights(), pair[1].weights());
        let mid = a.add(b)?.scale(&Rational::new(1, 2));
        let lhs = &h_of(phi, &mid) * &Rational::from_integer(2);
        let rhs = &h_of(phi, a) + &h_of(phi, b);
        push(lhs >= rhs, format!("concavity failed at pair {k}"));
    }

    let unit = MonomialIdeal::unit(phi.dim());
    let tau_phi = singularity_exponent(phi, &unit)?.value;
    let tau_psi = singularity_exponent(psi, &unit)?.value;
    // constant shifts leave tau untouched
    push(
        singularity_exponent(&phi.shift(&Rational::from_integer(3)), &unit)?.value == tau_phi,
        "tau shift invariance failed".into(),
    );
    // domination
    if dominates(phi, psi) {
        push(
            tau_phi >= tau_psi,
            format!("domination monotonicity failed: {tau_phi} < {tau_psi}"),
        );
    }
    if dominates(psi, phi) {
        push(
            tau_psi >= tau_phi,
            format!("domination monotonicity failed: {tau_psi} < {tau_phi}"),
        );
    }
    // max rule on the Kiselman numbers, per sampled weight
    let joined = phi.max_with(psi)?;
    for (k, a) in alphas.iter().enumerate() {
        let lhs = h_of(&joined, a.weights());
        let rhs = h_of(phi, a.weights()).min(h_of(psi, a.weights()));
        push(
            lhs == rhs,
            format!("max rule failed at sample {k}: {lhs} vs {rhs}"),
        );
    }

    Ok(LemmaBatteryReport {
        samples: alphas.len(),
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct P102Report {
    /// singularity exponent equals the witness-search threshold of the
    /// approximation sequence
    pub exponent_identity: bool,
    pub growth: crate::sequences::GrowthReport,
    /// samples where h(alpha) != v_alpha(b_.)
    pub kiselman_identity_failures: usize,
    pub sandwich: crate::sequences::SandwichReport,
}

impl P102Report {
    pub fn passed(&self) -> bool {
        self.exponent_identity
            && self.growth.passed()
            && self.kiselman_identity_failures == 0
            && self.sandwich.passed()
    }
}

/// Battery tying phi to its approximation sequence b_j = J(j*phi):
/// (i) the singularity exponent equals lct^q(b_.) computed by the
///     witness search on the region of phi;
/// (ii) b_. has controlled growth;
/// (iii) h(alpha) = v_alpha(b_.) exactly for the sampled alpha;
/// (iv) the reciprocal sandwich through each finite level p <= J.
pub fn p102_battery(
    phi: &ToricPsh,
    q: &MonomialIdeal,
    valuations: &[MonomialValuation],
    max_index: u64,
) -> CoreResult<P102Report> {
    let seq = demailly_sequence(phi)?;
    let region = phi.newton_region()?;

    let exponent = singularity_exponent(phi, q)?.value;
    let witness = compute_lct_witness(&region, q)?.value;
    let exponent_identity = exponent == witness;

    let growth = crate::sequences::controlled_growth_check(&seq, valuations, max_index)?;

    let mut kiselman_identity_failures = 0usize;
    for v in valuations {
        let h = kiselman_number(phi, v)?.direct_value;
        let vb = crate::sequences::v_of_subadditive(v, &seq, 1)?
            .exact
            .expect("multiplier family has an exact limit");
        if h != vb {
            kiselman_identity_failures += 1;
        }
    }

    let sandwich = crate::sequences::arn_sandwich_check(&seq, q, max_index)?;

    Ok(P102Report {
        exponent_identity,
        growth,
        kiselman_identity_failures,
        sandwich,
    })
}
