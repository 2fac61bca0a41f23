//! Grover iteration scheduling and closed-form success analytics.
//!
//! One iteration is the phase oracle followed by the diffusion operator.
//! Starting from the uniform superposition over `2^N` states with `m` of
//! them marked, `k` iterations leave the marked subspace holding probability
//! `sin^2((2k+1) * asin(sqrt(m / 2^N)))`, which this module both simulates
//! and predicts.

use crate::error::Result;
use crate::qsim::{MarkedSet, StateVector};

/// A fully specified amplification run.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverPlan {
    pub num_qubits: usize,
    pub marked: MarkedSet,
    pub iterations: usize,
}

/// Run the plan: uniform superposition, then `iterations` rounds of
/// oracle + diffusion. Deterministic; an empty marked set leaves the state
/// uniform regardless of the iteration count.
pub fn grover_search(plan: &GroverPlan) -> Result<StateVector> {
    let mut sv = StateVector::uniform(plan.num_qubits)?;
    for _ in 0..plan.iterations {
        sv.apply_phase_oracle(&plan.marked)?;
        sv.apply_diffusion();
    }
    Ok(sv)
}

/// Closed-form probability that measuring after `k` iterations lands in the
/// marked set: `sin^2((2k+1) * asin(sqrt(m / 2^N)))`. Depends on the marked
/// count only, never on which states are marked.
pub fn success_probability(num_qubits: usize, marked_count: usize, iterations: usize) -> f64 {
    let dim = 1usize << num_qubits;
    assert!(marked_count <= dim, "marked count exceeds state space");
    let theta = (marked_count as f64 / dim as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Iteration count maximizing the success probability:
/// `floor(pi/4 * sqrt(2^N / m))`, raised to at least 1 whenever some state
/// is unmarked. Returns `None` for an empty marked set — nothing to
/// amplify, callers skip the amplification stage. All states marked yields
/// `Some(0)`: the uniform state already measures into the marked set.
pub fn optimal_iterations(num_qubits: usize, marked_count: usize) -> Option<usize> {
    if marked_count == 0 {
        return None;
    }
    let dim = 1usize << num_qubits;
    assert!(marked_count <= dim, "marked count exceeds state space");
    let k = (std::f64::consts::FRAC_PI_4 * (dim as f64 / marked_count as f64).sqrt()) as usize;
    if marked_count < dim {
        Some(k.max(1))
    } else {
        Some(k) // k = 0: amplification is pointless when everything is marked
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn marked_probability(sv: &StateVector, marked: &MarkedSet) -> f64 {
        marked
            .iter()
            .map(|i| sv.amplitudes()[i].norm_sqr())
            .sum()
    }

    #[test]
    fn two_qubits_one_iteration_is_certain() {
        // asin(1/2) = pi/6, so sin^2(3 * pi/6) = 1: the marked state absorbs
        // all probability after a single iteration.
        let plan = GroverPlan {
            num_qubits: 2,
            marked: MarkedSet::new([2]),
            iterations: 1,
        };
        let sv = grover_search(&plan).unwrap();
        assert_eq!(sv.amplitudes()[2].norm_sqr(), 1.0);
        assert_abs_diff_eq!(success_probability(2, 1, 1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn empty_marked_set_leaves_the_state_uniform() {
        for iterations in [0usize, 1, 5] {
            let plan = GroverPlan {
                num_qubits: 3,
                marked: MarkedSet::empty(),
                iterations,
            };
            let sv = grover_search(&plan).unwrap();
            let expect = StateVector::uniform(3).unwrap();
            for (a, b) in sv.amplitudes().iter().zip(expect.amplitudes()) {
                assert!((a - b).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn three_qubits_two_iterations() {
        let plan = GroverPlan {
            num_qubits: 3,
            marked: MarkedSet::new([5]),
            iterations: 2,
        };
        let sv = grover_search(&plan).unwrap();
        assert_abs_diff_eq!(sv.amplitudes()[5].norm_sqr(), 0.9453, epsilon = 1e-4);
    }

    #[test]
    fn closed_form_examples() {
        assert_abs_diff_eq!(success_probability(3, 1, 2), 0.945313, epsilon = 1e-6);
        // Zero iterations: plain uniform measurement.
        for (n, m) in [(3usize, 1usize), (4, 3), (5, 32)] {
            assert_abs_diff_eq!(
                success_probability(n, m, 0),
                m as f64 / (1 << n) as f64,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn optimal_iteration_examples() {
        assert_eq!(optimal_iterations(10, 1), Some(25));
        assert_eq!(optimal_iterations(2, 1), Some(1));
        assert_eq!(optimal_iterations(4, 16), Some(0));
        assert_eq!(optimal_iterations(6, 0), None);
    }

    #[test]
    fn simulation_tracks_the_closed_form() {
        for n in 2usize..=8 {
            for m in [1usize, 2, 4] {
                let dim = 1usize << n;
                // Spread the marked states across the space; the closed form
                // must hold for any placement.
                let marked = MarkedSet::new((0..m).map(|i| i * (dim / m) + (dim / m) / 2));
                let k_opt = optimal_iterations(n, m).unwrap();
                let mut sv = StateVector::uniform(n).unwrap();
                for k in 0..=(2 * k_opt) {
                    if k > 0 {
                        sv.apply_phase_oracle(&marked).unwrap();
                        sv.apply_diffusion();
                    }
                    let sim = marked_probability(&sv, &marked);
                    let predicted = success_probability(n, m, k);
                    assert!(
                        (sim - predicted).abs() <= 1e-9,
                        "N={n} m={m} k={k}: sim {sim} vs closed form {predicted}"
                    );
                }
            }
        }
    }

    #[test]
    fn probability_ascends_until_the_optimum() {
        for n in [4usize, 6, 9] {
            let m = 2;
            let marked = MarkedSet::new([1, 5]);
            let k_opt = optimal_iterations(n, m).unwrap();
            let mut last = success_probability(n, m, 0);
            let mut sv = StateVector::uniform(n).unwrap();
            for k in 1..=k_opt {
                sv.apply_phase_oracle(&marked).unwrap();
                sv.apply_diffusion();
                let p = marked_probability(&sv, &marked);
                assert!(p > last, "N={n}: P({k}) = {p} did not rise above {last}");
                last = p;
            }
        }
    }

    #[test]
    fn probabilities_are_uniform_within_marked_and_unmarked_classes() {
        let marked = MarkedSet::new([3, 12, 17]);
        let plan = GroverPlan {
            num_qubits: 5,
            marked: marked.clone(),
            iterations: 2,
        };
        let sv = grover_search(&plan).unwrap();
        let probs = sv.probabilities();
        let marked_p = probs[3];
        let unmarked_p = probs[0];
        for (i, &p) in probs.iter().enumerate() {
            let expect = if marked.contains(i) { marked_p } else { unmarked_p };
            assert!((p - expect).abs() <= 1e-12, "index {i}");
        }
    }
}
