//! Seeded random generation of channels, priors and reward matrices with
//! small rational entries. Used by the decision-problem falsifier and by the
//! randomized test suites.

use crate::channel::{Channel, DecisionProblem, Prior, RewardMatrix};
use crate::exact_linear::{Mat, Rat};
use num_bigint::BigInt;
use rand::Rng;

/// Random channel: each row is a random composition of small nonnegative
/// integer weights, normalized exactly.
pub fn random_channel<R: Rng>(rng: &mut R, inputs: usize, outputs: usize) -> Channel {
    let mut m = Mat::zeros(inputs, outputs);
    for x in 0..inputs {
        let mut weights: Vec<i64> = (0..outputs).map(|_| rng.gen_range(0..=4)).collect();
        if weights.iter().all(|&w| w == 0) {
            weights[rng.gen_range(0..outputs)] = 1;
        }
        let total: i64 = weights.iter().sum();
        for (y, w) in weights.into_iter().enumerate() {
            m[(x, y)] = Rat::new(BigInt::from(w), BigInt::from(total));
        }
    }
    Channel::new(m).expect("normalized rows are stochastic")
}

/// Random full-support prior.
pub fn random_prior<R: Rng>(rng: &mut R, n: usize) -> Prior {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let total: i64 = weights.iter().sum();
    Prior::new(
        weights
            .into_iter()
            .map(|w| Rat::new(BigInt::from(w), BigInt::from(total)))
            .collect(),
    )
    .expect("positive weights normalize to a distribution")
}

/// Random reward matrix with entries n/d, n in [-6, 6], d in [1, 3].
pub fn random_reward<R: Rng>(rng: &mut R, states: usize, actions: usize) -> RewardMatrix {
    let mut m = Mat::zeros(states, actions);
    for x in 0..states {
        for a in 0..actions {
            let n: i64 = rng.gen_range(-6..=6);
            let d: i64 = rng.gen_range(1..=3);
            m[(x, a)] = Rat::new(BigInt::from(n), BigInt::from(d));
        }
    }
    RewardMatrix::new(m)
}

/// Random decision problem with a uniform prior.
pub fn random_decision_problem<R: Rng>(
    rng: &mut R,
    states: usize,
    actions: usize,
) -> DecisionProblem {
    DecisionProblem::new(Prior::uniform(states), random_reward(rng, states, actions))
        .expect("dimensions agree by construction")
}
