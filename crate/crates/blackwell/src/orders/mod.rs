//! The order relations on channels with a shared input alphabet: garbling,
//! zonotope inclusion, the k-decision orders, the induced equivalence, and
//! a randomized decision-problem falsifier that cross-checks them.

mod registry;

pub use registry::{order_by_name, order_registry, OrderRelation, OrderReport};

use crate::channel::{
    channels_from_joint, optimal_reward, Channel, ChannelError, DecisionProblem,
    JointDistribution,
};
use crate::convexity::extreme_points;
use crate::exact_linear::{lp_solve, LpOutcome, LpProblem, Mat, Rat};
use crate::sample::random_decision_problem;
use crate::zonotope::{Zonotope, ZonotopeError};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

/// Assignment-count cap for the standard-polytope enumeration.
pub const MAX_ASSIGNMENTS: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum OrderError {
    #[error("channels have different input alphabets: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("{0} assignments exceed the enumeration cap of {1}")]
    TooManyAssignments(u64, u64),
    #[error("k must be at least 1")]
    InvalidK,
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Zonotope(#[from] ZonotopeError),
}

/// A stochastic matrix lambda with kappa lambda = mu, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct GarblingWitness {
    pub lambda: Channel,
}

/// Result of one directional garbling test.
#[derive(Clone, Debug, PartialEq)]
pub enum GarblingOutcome {
    Garbles(GarblingWitness),
    /// Farkas certificate refuting the garbling LP.
    Refuted { certificate: Vec<Rat> },
}

impl GarblingOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, GarblingOutcome::Garbles(_))
    }

    pub fn witness(&self) -> Option<&GarblingWitness> {
        match self {
            GarblingOutcome::Garbles(w) => Some(w),
            GarblingOutcome::Refuted { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    StrictlyMore,
    StrictlyLess,
    Equivalent,
    Incomparable,
}

/// Two-directional comparison with all witnesses and certificates attached.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderResult {
    pub verdict: Verdict,
    /// kappa garbles to mu?
    pub forward: GarblingOutcome,
    /// mu garbles to kappa?
    pub backward: GarblingOutcome,
}

fn check_alphabets(kappa: &Channel, mu: &Channel) -> Result<(), OrderError> {
    if kappa.input_size() != mu.input_size() {
        return Err(OrderError::AlphabetMismatch(
            kappa.input_size(),
            mu.input_size(),
        ));
    }
    Ok(())
}

/// Decide whether `mu = kappa lambda` for some stochastic lambda, by one LP
/// over the entries of lambda. The returned witness recomposes exactly; a
/// refusal carries the LP's infeasibility certificate.
pub fn garbling_order(kappa: &Channel, mu: &Channel) -> Result<GarblingOutcome, OrderError> {
    check_alphabets(kappa, mu)?;
    let nx = kappa.input_size();
    let ny = kappa.output_size();
    let nz = mu.output_size();
    // variables lambda(y, z), index y * nz + z
    let mut a = Mat::zeros(nx * nz + ny, ny * nz);
    let mut b = Vec::with_capacity(nx * nz + ny);
    for x in 0..nx {
        for z in 0..nz {
            let row = x * nz + z;
            for y in 0..ny {
                a[(row, y * nz + z)] = kappa.entry(x, y).clone();
            }
            b.push(mu.entry(x, z).clone());
        }
    }
    for y in 0..ny {
        let row = nx * nz + y;
        for z in 0..nz {
            a[(row, y * nz + z)] = Rat::one();
        }
        b.push(Rat::one());
    }
    match lp_solve(&LpProblem::unit_box(a, b)).expect("well-formed garbling LP") {
        LpOutcome::Feasible { x, .. } => {
            let mut m = Mat::zeros(ny, nz);
            for y in 0..ny {
                for z in 0..nz {
                    m[(y, z)] = x[y * nz + z].clone();
                }
            }
            let lambda = Channel::new(m)?;
            debug_assert_eq!(&kappa.compose(&lambda)?, mu);
            Ok(GarblingOutcome::Garbles(GarblingWitness { lambda }))
        }
        LpOutcome::Infeasible { certificate } => Ok(GarblingOutcome::Refuted { certificate }),
    }
}

/// Zonotope inclusion Z_mu within Z_kappa.
pub fn zonotope_order(kappa: &Channel, mu: &Channel) -> Result<bool, OrderError> {
    check_alphabets(kappa, mu)?;
    Ok(Zonotope::of_channel(kappa).includes(&Zonotope::of_channel(mu))?)
}

/// A vertex of the k-part standard polytope: a tuple of vectors, one per
/// action, each the sum of the channel columns assigned to that action.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StandardPolytopeVertex {
    pub parts: Vec<Vec<Rat>>,
}

impl StandardPolytopeVertex {
    fn from_assignment(kappa: &Channel, assignment: &[usize], k: usize) -> Self {
        let nx = kappa.input_size();
        let mut parts = vec![vec![Rat::zero(); nx]; k];
        for (y, &i) in assignment.iter().enumerate() {
            let col = kappa.column(y);
            for (pv, cv) in parts[i].iter_mut().zip(&col) {
                *pv += cv;
            }
        }
        StandardPolytopeVertex { parts }
    }

    fn flatten(&self) -> Vec<Rat> {
        self.parts.iter().flatten().cloned().collect()
    }

    /// The tuple as a channel from X to the k actions (the parts are
    /// nonnegative and sum to the all-ones vector).
    pub fn as_channel(&self) -> Result<Channel, ChannelError> {
        let k = self.parts.len();
        let nx = self.parts[0].len();
        let mut m = Mat::zeros(nx, k);
        for (i, part) in self.parts.iter().enumerate() {
            for x in 0..nx {
                m[(x, i)] = part[x].clone();
            }
        }
        Channel::new(m)
    }
}

fn assignment_count(k: usize, outputs: usize) -> Result<(), OrderError> {
    let mut total: u64 = 1;
    for _ in 0..outputs {
        total = total.saturating_mul(k as u64);
        if total > MAX_ASSIGNMENTS {
            return Err(OrderError::TooManyAssignments(total, MAX_ASSIGNMENTS));
        }
    }
    Ok(())
}

/// All vertices of the k-part standard polytope of `kappa`: tuples from
/// deterministic assignments of outputs to actions, deduplicated and
/// filtered to the extreme points of their convex hull.
pub fn standard_polytope_vertices(
    kappa: &Channel,
    k: usize,
) -> Result<Vec<StandardPolytopeVertex>, OrderError> {
    if k == 0 {
        return Err(OrderError::InvalidK);
    }
    let ny = kappa.output_size();
    assignment_count(k, ny)?;
    let mut seen: BTreeSet<StandardPolytopeVertex> = BTreeSet::new();
    let mut assignment = vec![0usize; ny];
    loop {
        seen.insert(StandardPolytopeVertex::from_assignment(kappa, &assignment, k));
        // increment base-k counter
        let mut pos = 0;
        loop {
            if pos == ny {
                let tuples: Vec<StandardPolytopeVertex> = seen.into_iter().collect();
                let flat: Vec<Vec<Rat>> = tuples.iter().map(|t| t.flatten()).collect();
                let keep: BTreeSet<Vec<Rat>> = extreme_points(&flat).into_iter().collect();
                return Ok(tuples
                    .into_iter()
                    .filter(|t| keep.contains(&t.flatten()))
                    .collect());
            }
            assignment[pos] += 1;
            if assignment[pos] < k {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

// Canonical assignments in restricted-growth form: part labels appear in
// first-use order. Realizability is invariant under permuting the parts, so
// one representative per set partition (into at most k parts) suffices.
fn canonical_assignments(outputs: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; outputs];
    fn rec(cur: &mut Vec<usize>, pos: usize, max_used: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        let limit = (max_used + 1).min(k - 1);
        for label in 0..=limit {
            cur[pos] = label;
            rec(cur, pos + 1, max_used.max(label), k, out);
        }
    }
    if outputs == 0 {
        out.push(Vec::new());
    } else {
        rec(&mut cur, 0, 0, k, &mut out);
    }
    out
}

/// The k-decision order: does kappa dominate mu on every decision problem
/// with at most k actions? Decided by realizability LPs: every standard
/// tuple of mu (one per set partition of mu's outputs; part permutations
/// are symmetric) must be reachable as kappa lambda for a stochastic lambda
/// into the k actions.
pub fn k_decision_order(kappa: &Channel, mu: &Channel, k: usize) -> Result<bool, OrderError> {
    if k == 0 {
        return Err(OrderError::InvalidK);
    }
    check_alphabets(kappa, mu)?;
    assignment_count(k.min(mu.output_size()), mu.output_size())?;
    for assignment in canonical_assignments(mu.output_size(), k) {
        let tuple = StandardPolytopeVertex::from_assignment(mu, &assignment, k);
        let target = tuple.as_channel()?;
        if !garbling_order(kappa, &target)?.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full two-directional comparison in the garbling order.
pub fn blackwell_compare(kappa: &Channel, mu: &Channel) -> Result<OrderResult, OrderError> {
    let forward = garbling_order(kappa, mu)?;
    let backward = garbling_order(mu, kappa)?;
    let verdict = match (forward.holds(), backward.holds()) {
        (true, true) => Verdict::Equivalent,
        (true, false) => Verdict::StrictlyMore,
        (false, true) => Verdict::StrictlyLess,
        (false, false) => Verdict::Incomparable,
    };
    Ok(OrderResult {
        verdict,
        forward,
        backward,
    })
}

/// Equivalence: equal zonotopes, decided by vertex-set equality.
pub fn equivalent(kappa: &Channel, mu: &Channel) -> Result<bool, OrderError> {
    check_alphabets(kappa, mu)?;
    let zk = Zonotope::of_channel(kappa);
    let zm = Zonotope::of_channel(mu);
    Ok(zk.try_vertices()? == zm.try_vertices()?)
}

/// Compare two random variables through their joint distributions with X.
/// Requires a shared full-support X-marginal; delegates to the channel
/// comparison of the conditional distributions.
pub fn random_variable_order(
    xy: &JointDistribution,
    xz: &JointDistribution,
) -> Result<OrderResult, OrderError> {
    let (_p, kappa, mu) = channels_from_joint(xy, xz)?;
    blackwell_compare(&kappa, &mu)
}

/// Search for a decision problem with at most `k` actions on which `mu`
/// strictly beats `kappa`. Candidates are tried first, then `trials` random
/// reward matrices under the uniform prior. Deterministic given the seed.
pub fn falsify_with_candidates(
    kappa: &Channel,
    mu: &Channel,
    k: usize,
    trials: usize,
    seed: u64,
    candidates: &[DecisionProblem],
) -> Result<Option<DecisionProblem>, OrderError> {
    check_alphabets(kappa, mu)?;
    let beats = |dp: &DecisionProblem| -> Result<bool, OrderError> {
        let (rk, _) = optimal_reward(kappa, dp)?;
        let (rm, _) = optimal_reward(mu, dp)?;
        Ok(rm > rk)
    };
    for dp in candidates {
        if beats(dp)? {
            return Ok(Some(dp.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let dp = random_decision_problem(&mut rng, kappa.input_size(), k);
        if beats(&dp)? {
            return Ok(Some(dp));
        }
    }
    Ok(None)
}

/// `falsify_with_candidates` without seeded candidates.
pub fn falsify_by_decision_problem(
    kappa: &Channel,
    mu: &Channel,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<Option<DecisionProblem>, OrderError> {
    falsify_with_candidates(kappa, mu, k, trials, seed, &[])
}
