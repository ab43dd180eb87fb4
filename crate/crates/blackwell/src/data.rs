//! Embedded reference matrices for the two counterexamples the crate
//! reproduces:
//!
//! * a 3-input pair (kappa, mu) where Z_mu is contained in Z_kappa yet mu is
//!   not a garbling of kappa, separated by a 3-action decision problem;
//! * a pair (kappa1, kappa2) whose zonotope intersection is not a zonotope,
//!   which rules out greatest lower bounds on 3-input channels.

use crate::channel::{Channel, RewardMatrix};
use crate::exact_linear::{rat, rint, Mat, Rat};

/// The 3x4 channel kappa of the garbling-vs-zonotope separation.
pub fn separating_kappa() -> Channel {
    Channel::from_i64_ratios(&[
        &[(1, 2), (0, 1), (0, 1), (1, 2)],
        &[(0, 1), (1, 2), (0, 1), (1, 2)],
        &[(0, 1), (0, 1), (1, 2), (1, 2)],
    ])
    .expect("embedded kappa is stochastic")
}

/// The 3x3 channel mu of the garbling-vs-zonotope separation.
pub fn separating_mu() -> Channel {
    Channel::from_i64_ratios(&[
        &[(1, 2), (1, 2), (0, 1)],
        &[(1, 2), (0, 1), (1, 2)],
        &[(0, 1), (1, 2), (1, 2)],
    ])
    .expect("embedded mu is stochastic")
}

/// The unique nonnegative solution of mu = kappa lambda. Its last row is
/// zero, so it is not stochastic: kappa does not garble to mu.
pub fn separating_lambda() -> Mat {
    Mat::from_i64(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[0, 0, 0]])
}

/// Three-action reward: penalty -5 for guessing x itself, +1 otherwise.
/// Separates mu from kappa under the uniform prior.
pub fn separating_reward() -> RewardMatrix {
    RewardMatrix::new(Mat::from_i64(&[&[-5, 1, 1], &[1, -5, 1], &[1, 1, -5]]))
}

/// Reference optimal reward of mu under the uniform prior and
/// `separating_reward`.
pub fn separating_mu_reward() -> Rat {
    rint(1)
}

/// Published optimal reward of kappa in the same decision problem. Direct
/// exact evaluation gives 0 instead; the separation R(mu) > R(kappa) is what
/// the verification suite asserts, printing both values.
pub fn separating_kappa_reward_published() -> Rat {
    rint(-2)
}

/// First channel of the non-lattice pair.
pub fn lattice_kappa1() -> Channel {
    Channel::from_i64_ratios(&[
        &[(1, 3), (2, 3), (0, 1)],
        &[(0, 1), (1, 3), (2, 3)],
        &[(2, 3), (0, 1), (1, 3)],
    ])
    .expect("embedded kappa1 is stochastic")
}

/// Second channel of the non-lattice pair.
pub fn lattice_kappa2() -> Channel {
    Channel::from_i64_ratios(&[
        &[(2, 3), (1, 3), (0, 1)],
        &[(0, 1), (2, 3), (1, 3)],
        &[(1, 3), (0, 1), (2, 3)],
    ])
    .expect("embedded kappa2 is stochastic")
}

/// The eight vertices of the intersection of the two zonotopes of the
/// non-lattice pair, sorted lexicographically.
pub fn lattice_intersection_vertices() -> Vec<Vec<Rat>> {
    let mut vs: Vec<Vec<Rat>> = vec![
        vec![rint(0), rint(0), rint(0)],
        vec![rat(5, 6), rat(2, 6), rat(2, 6)],
        vec![rat(2, 6), rat(5, 6), rat(2, 6)],
        vec![rat(2, 6), rat(2, 6), rat(5, 6)],
        vec![rat(1, 6), rat(4, 6), rat(4, 6)],
        vec![rat(4, 6), rat(1, 6), rat(4, 6)],
        vec![rat(4, 6), rat(4, 6), rat(1, 6)],
        vec![rint(1), rint(1), rint(1)],
    ];
    vs.sort();
    vs
}
