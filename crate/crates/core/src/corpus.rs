//! Built-in corpus of toric model functions (dims 1-3) used by the
//! self-test batteries and the volume experiment.

use crate::exponent::ExponentVector;
use crate::kiselman::ToricPsh;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub phi: ToricPsh,
    /// suitable for the volume experiment's deterministic quadrature
    pub quadrature_ready: bool,
    /// suitable for the Monte Carlo volume path
    pub monte_carlo_ready: bool,
}

fn piece(c: &[(i64, i64)], d: (i64, i64)) -> (ExponentVector, Rational) {
    let entries = c.iter().map(|&(p, q)| Rational::new(p, q)).collect();
    (
        ExponentVector::new(entries).unwrap(),
        Rational::new(d.0, d.1),
    )
}

fn psh(dim: usize, pieces: Vec<(ExponentVector, Rational)>) -> ToricPsh {
    ToricPsh::new(dim, pieces).unwrap()
}

/// Ten functions exercising single pieces, ties, rational coefficients,
/// constant shifts, and dimension 3.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "log|z1|",
            phi: psh(1, vec![piece(&[(1, 1)], (0, 1))]),
            quadrature_ready: true,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "log|z1^3|",
            phi: psh(1, vec![piece(&[(3, 1)], (0, 1))]),
            quadrature_ready: false,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "log|(x^2,y^3)|",
            phi: psh(2, vec![piece(&[(2, 1), (0, 1)], (0, 1)), piece(&[(0, 1), (3, 1)], (0, 1))]),
            quadrature_ready: true,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "log max(|z1|,|z2|)",
            phi: psh(2, vec![piece(&[(1, 1), (0, 1)], (0, 1)), piece(&[(0, 1), (1, 1)], (0, 1))]),
            quadrature_ready: true,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "log|z1 z2|",
            phi: psh(2, vec![piece(&[(1, 1), (1, 1)], (0, 1))]),
            quadrature_ready: true,
            monte_carlo_ready: true,
        },
        CorpusEntry {
            name: "log|(x,y^2)|",
            phi: psh(2, vec![piece(&[(1, 1), (0, 1)], (0, 1)), piece(&[(0, 1), (2, 1)], (0, 1))]),
            quadrature_ready: false,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "(1/2)log|x| max log|y^3|",
            phi: psh(2, vec![piece(&[(1, 2), (0, 1)], (0, 1)), piece(&[(0, 1), (3, 1)], (0, 1))]),
            quadrature_ready: false,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "log max(|x|, |y|/e)",
            phi: psh(2, vec![piece(&[(1, 1), (0, 1)], (0, 1)), piece(&[(0, 1), (1, 1)], (-1, 1))]),
            quadrature_ready: false,
            monte_carlo_ready: false,
        },
        CorpusEntry {
            name: "log|(x^2,y^3,z)| diagonal",
            phi: psh(
                3,
                vec![
                    piece(&[(2, 1), (0, 1), (0, 1)], (0, 1)),
                    piece(&[(0, 1), (3, 1), (0, 1)], (0, 1)),
                    piece(&[(0, 1), (0, 1), (1, 1)], (0, 1)),
                ],
            ),
            quadrature_ready: false,
            monte_carlo_ready: true,
        },
        CorpusEntry {
            name: "log max(|xy|,|z^2|)",
            phi: psh(
                3,
                vec![
                    piece(&[(1, 1), (1, 1), (0, 1)], (0, 1)),
                    piece(&[(0, 1), (0, 1), (2, 1)], (0, 1)),
                ],
            ),
            quadrature_ready: false,
            monte_carlo_ready: true,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::MonomialIdeal;
    use crate::kiselman::{p102_battery, singularity_exponent};
    use crate::rational::{rat, Extended};
    use crate::valuation::MonomialValuation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        assert_eq!(c.len(), 10);
        assert!(c.iter().all(|e| (1..=3).contains(&e.phi.dim())));
    }

    #[test]
    fn corpus_exponents_are_as_expected() {
        let c = corpus();
        let tau = |i: usize| {
            singularity_exponent(&c[i].phi, &MonomialIdeal::unit(c[i].phi.dim()))
                .unwrap()
                .value
        };
        assert_eq!(tau(0), Extended::finite(rat(1, 1)));
        assert_eq!(tau(1), Extended::finite(rat(1, 3)));
        assert_eq!(tau(2), Extended::finite(rat(5, 6)));
        assert_eq!(tau(3), Extended::finite(rat(2, 1)));
        assert_eq!(tau(4), Extended::finite(rat(1, 1)));
        assert_eq!(tau(5), Extended::finite(rat(3, 2)));
        assert_eq!(tau(6), Extended::finite(rat(7, 3)));
        assert_eq!(tau(7), Extended::finite(rat(2, 1)));
        assert_eq!(tau(8), Extended::finite(rat(11, 6)));
        assert_eq!(tau(9), Extended::finite(rat(3, 2)));
    }

    #[test]
    fn p102_battery_passes_on_full_corpus() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for entry in corpus() {
            let dim = entry.phi.dim();
            let vals: Vec<MonomialValuation> = (0..6)
                .filter_map(|_| {
                    let w: Vec<Rational> =
                        (0..dim).map(|_| rat(rng.gen_range(0..4), 1)).collect();
                    MonomialValuation::new(ExponentVector::new(w).ok()?).ok()
                })
                .collect();
            let vals = if vals.is_empty() {
                vec![MonomialValuation::new(ExponentVector::new(vec![
                        Rational::one();
                        dim
                    ])
                    .unwrap())
                .unwrap()]
            } else {
                vals
            };
            let r = p102_battery(&entry.phi, &MonomialIdeal::unit(dim), &vals, 8).unwrap();
            assert!(r.passed(), "{}: {r:?}", entry.name);
        }
    }
}
