//! Channels (row-stochastic matrices), priors, decision problems and exact
//! optimal-reward evaluation.

use crate::exact_linear::{dot, LinearError, Mat, Rat};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: Rat },
    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("output {0} has probability zero under this prior")]
    ZeroProbabilityOutput(usize),
    #[error("the two joint distributions have different X-marginals")]
    MarginalMismatch,
    #[error("marginal probability of x = {0} is zero")]
    ZeroMarginal(usize),
    #[error("coefficient {idx} = {value} is outside [0, 1]")]
    CoefficientOutOfRange { idx: usize, value: Rat },
    #[error("probabilities must be nonnegative and sum to 1 (got sum {0})")]
    NotADistribution(Rat),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

/// A channel from X to Y: a row-stochastic matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Channel {
    matrix: Mat,
}

impl Channel {
    /// Validate and wrap a matrix.
    pub fn new(matrix: Mat) -> Result<Self, ChannelError> {
        for i in 0..matrix.rows() {
            let mut sum = Rat::zero();
            for j in 0..matrix.cols() {
                if matrix[(i, j)].is_negative() {
                    return Err(ChannelError::NegativeEntry { row: i, col: j });
                }
                sum += &matrix[(i, j)];
            }
            if !sum.is_one() {
                return Err(ChannelError::NotStochastic { row: i, sum });
            }
        }
        Ok(Channel { matrix })
    }

    pub fn from_i64_ratios(rows: &[&[(i64, i64)]]) -> Result<Self, ChannelError> {
        let m = Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| crate::exact_linear::rat(n, d)).collect())
                .collect(),
        );
        Channel::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Channel {
            matrix: Mat::identity(n),
        }
    }

    /// Number of input symbols |X|.
    pub fn input_size(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of output symbols |Y|.
    pub fn output_size(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn entry(&self, x: usize, y: usize) -> &Rat {
        &self.matrix[(x, y)]
    }

    /// Column y of the matrix, the generator the zonotope construction uses.
    pub fn column(&self, y: usize) -> Vec<Rat> {
        self.matrix.col(y)
    }

    /// Exact matrix product; closed on stochastic matrices.
    pub fn compose(&self, other: &Channel) -> Result<Channel, ChannelError> {
        if self.output_size() != other.input_size() {
            return Err(ChannelError::DimensionMismatch(format!(
                "cannot chain a channel with {} outputs into one with {} inputs",
                self.output_size(),
                other.input_size()
            )));
        }
        let product = self.matrix.mul(&other.matrix)?;
        Channel::new(product)
    }
}

/// Prior distribution over X.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Prior {
    probs: Vec<Rat>,
}

impl Prior {
    pub fn new(probs: Vec<Rat>) -> Result<Self, ChannelError> {
        let mut sum = Rat::zero();
        for p in &probs {
            if p.is_negative() {
                return Err(ChannelError::NotADistribution(sum));
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(ChannelError::NotADistribution(sum));
        }
        Ok(Prior { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Prior {
            probs: vec![Rat::new(1.into(), (n as i64).into()); n],
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![Rat::zero(); n];
        probs[at] = Rat::one();
        Prior { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, x: usize) -> &Rat {
        &self.probs[x]
    }

    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    pub fn full_support(&self) -> bool {
        self.probs.iter().all(|p| p.is_positive())
    }
}

/// Reward matrix u(x, a); actions are column indices. No stochasticity
/// constraint, entries may be negative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RewardMatrix {
    matrix: Mat,
}

impl RewardMatrix {
    pub fn new(matrix: Mat) -> Self {
        RewardMatrix { matrix }
    }

    pub fn states(&self) -> usize {
        self.matrix.rows()
    }

    pub fn actions(&self) -> usize {
        self.matrix.cols()
    }

    pub fn reward(&self, x: usize, a: usize) -> &Rat {
        &self.matrix[(x, a)]
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecisionProblem {
    pub prior: Prior,
    pub rewards: RewardMatrix,
}

impl DecisionProblem {
    pub fn new(prior: Prior, rewards: RewardMatrix) -> Result<Self, ChannelError> {
        if prior.len() != rewards.states() {
            return Err(ChannelError::DimensionMismatch(format!(
                "prior over {} states vs reward matrix with {} rows",
                prior.len(),
                rewards.states()
            )));
        }
        Ok(DecisionProblem { prior, rewards })
    }

    pub fn actions(&self) -> usize {
        self.rewards.actions()
    }
}

/// An agent's strategy: either a deterministic map from outputs to actions
/// or a stochastic channel from outputs to actions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Strategy {
    Deterministic(Vec<usize>),
    Stochastic(Channel),
}

impl Strategy {
    /// The strategy as a channel from outputs to actions.
    pub fn as_channel(&self, actions: usize) -> Channel {
        match self {
            Strategy::Stochastic(c) => c.clone(),
            Strategy::Deterministic(map) => {
                let mut m = Mat::zeros(map.len(), actions);
                for (y, &a) in map.iter().enumerate() {
                    m[(y, a)] = Rat::one();
                }
                Channel { matrix: m }
            }
        }
    }
}

/// Joint distribution over X x Y.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JointDistribution {
    table: Mat,
}

impl JointDistribution {
    pub fn new(table: Mat) -> Result<Self, ChannelError> {
        let mut sum = Rat::zero();
        for i in 0..table.rows() {
            for j in 0..table.cols() {
                if table[(i, j)].is_negative() {
                    return Err(ChannelError::NegativeEntry { row: i, col: j });
                }
                sum += &table[(i, j)];
            }
        }
        if !sum.is_one() {
            return Err(ChannelError::NotADistribution(sum));
        }
        Ok(JointDistribution { table })
    }

    /// P(X=x, Y=y) = p(x) kappa(x; y).
    pub fn from_prior_and_channel(p: &Prior, kappa: &Channel) -> Result<Self, ChannelError> {
        if p.len() != kappa.input_size() {
            return Err(ChannelError::DimensionMismatch(format!(
                "prior over {} states vs channel with {} inputs",
                p.len(),
                kappa.input_size()
            )));
        }
        let mut table = Mat::zeros(kappa.input_size(), kappa.output_size());
        for x in 0..kappa.input_size() {
            for y in 0..kappa.output_size() {
                table[(x, y)] = p.prob(x) * kappa.entry(x, y);
            }
        }
        Ok(JointDistribution { table })
    }

    pub fn table(&self) -> &Mat {
        &self.table
    }

    pub fn x_marginal(&self) -> Vec<Rat> {
        (0..self.table.rows())
            .map(|x| {
                self.table
                    .row(x)
                    .iter()
                    .fold(Rat::zero(), |acc, v| acc + v)
            })
            .collect()
    }
}

/// P(X = . | Y = y) under prior `p`. Errors when P(Y=y) = 0.
pub fn posterior(kappa: &Channel, p: &Prior, y: usize) -> Result<Vec<Rat>, ChannelError> {
    if p.len() != kappa.input_size() {
        return Err(ChannelError::DimensionMismatch(format!(
            "prior over {} states vs channel with {} inputs",
            p.len(),
            kappa.input_size()
        )));
    }
    let weights: Vec<Rat> = (0..p.len()).map(|x| p.prob(x) * kappa.entry(x, y)).collect();
    let total = weights.iter().fold(Rat::zero(), |acc, w| acc + w);
    if total.is_zero() {
        return Err(ChannelError::ZeroProbabilityOutput(y));
    }
    Ok(weights.into_iter().map(|w| w / &total).collect())
}

/// Maximal expected reward over deterministic strategies, together with a
/// strategy attaining it. Per output the best action is chosen exactly; ties
/// break toward the smallest action index. Outputs with probability zero
/// contribute nothing (their action is the tie-break default 0).
pub fn optimal_reward(
    kappa: &Channel,
    dp: &DecisionProblem,
) -> Result<(Rat, Strategy), ChannelError> {
    if dp.prior.len() != kappa.input_size() {
        return Err(ChannelError::DimensionMismatch(format!(
            "prior over {} states vs channel with {} inputs",
            dp.prior.len(),
            kappa.input_size()
        )));
    }
    let mut total = Rat::zero();
    let mut strat = Vec::with_capacity(kappa.output_size());
    for y in 0..kappa.output_size() {
        // q(a) = sum_x p(x) kappa(x;y) u(x,a): unnormalized expected reward.
        let mut best: Option<(usize, Rat)> = None;
        for a in 0..dp.actions() {
            let q: Rat = (0..dp.prior.len())
                .map(|x| dp.prior.prob(x) * kappa.entry(x, y) * dp.rewards.reward(x, a))
                .fold(Rat::zero(), |acc, t| acc + t);
            match &best {
                Some((_, b)) if q <= *b => {}
                _ => best = Some((a, q)),
            }
        }
        let (a, q) = best.expect("decision problem has no actions");
        strat.push(a);
        total += q;
    }
    Ok((total, Strategy::Deterministic(strat)))
}

/// Exact expected reward of playing strategy `s` on `kappa`.
pub fn strategy_reward(
    kappa: &Channel,
    dp: &DecisionProblem,
    s: &Strategy,
) -> Result<Rat, ChannelError> {
    if dp.prior.len() != kappa.input_size() {
        return Err(ChannelError::DimensionMismatch(format!(
            "prior over {} states vs channel with {} inputs",
            dp.prior.len(),
            kappa.input_size()
        )));
    }
    let s_chan = s.as_channel(dp.actions());
    if s_chan.input_size() != kappa.output_size() {
        return Err(ChannelError::DimensionMismatch(format!(
            "strategy over {} outputs vs channel with {} outputs",
            s_chan.input_size(),
            kappa.output_size()
        )));
    }
    // E[u] = sum_{x,a} p(x) (kappa s)(x;a) u(x,a)
    let action_chan = kappa.compose(&s_chan)?;
    let mut total = Rat::zero();
    for x in 0..dp.prior.len() {
        for a in 0..dp.actions() {
            total += dp.prior.prob(x) * action_chan.entry(x, a) * dp.rewards.reward(x, a);
        }
    }
    Ok(total)
}

/// Split a channel into the binary kernel mu_(v) = (v, 1 - v) where
/// v = kappa a for coefficients a in [0,1]^Y, together with the stochastic
/// witness lambda = (a, 1 - a) satisfying kappa lambda = mu_(v).
pub fn binary_split(
    kappa: &Channel,
    coeffs: &[Rat],
) -> Result<(Channel, Channel), ChannelError> {
    if coeffs.len() != kappa.output_size() {
        return Err(ChannelError::DimensionMismatch(format!(
            "{} coefficients vs {} outputs",
            coeffs.len(),
            kappa.output_size()
        )));
    }
    for (idx, a) in coeffs.iter().enumerate() {
        if a.is_negative() || *a > Rat::one() {
            return Err(ChannelError::CoefficientOutOfRange {
                idx,
                value: a.clone(),
            });
        }
    }
    let v = kappa.matrix.mul_vec(coeffs)?;
    let mut split = Mat::zeros(kappa.input_size(), 2);
    for x in 0..kappa.input_size() {
        split[(x, 0)] = v[x].clone();
        split[(x, 1)] = Rat::one() - &v[x];
    }
    let mut witness = Mat::zeros(kappa.output_size(), 2);
    for y in 0..kappa.output_size() {
        witness[(y, 0)] = coeffs[y].clone();
        witness[(y, 1)] = Rat::one() - &coeffs[y];
    }
    let mu_v = Channel::new(split)?;
    let witness = Channel::new(witness)?;
    debug_assert_eq!(kappa.compose(&witness).unwrap(), mu_v);
    Ok((mu_v, witness))
}

/// Recover (p, kappa, mu) from two joints that share a full-support
/// X-marginal.
pub fn channels_from_joint(
    xy: &JointDistribution,
    xz: &JointDistribution,
) -> Result<(Prior, Channel, Channel), ChannelError> {
    let px = xy.x_marginal();
    if px != xz.x_marginal() {
        return Err(ChannelError::MarginalMismatch);
    }
    if let Some(x) = px.iter().position(|p| p.is_zero()) {
        return Err(ChannelError::ZeroMarginal(x));
    }
    let extract = |joint: &JointDistribution| {
        let t = joint.table();
        let mut m = Mat::zeros(t.rows(), t.cols());
        for x in 0..t.rows() {
            for y in 0..t.cols() {
                m[(x, y)] = &t[(x, y)] / &px[x];
            }
        }
        Channel::new(m)
    };
    let kappa = extract(xy)?;
    let mu = extract(xz)?;
    Ok((Prior::new(px)?, kappa, mu))
}

/// The reward-reweighting construction: u'(x,a) = q(x)/p(x) u(x,a), which
/// turns optimal play under prior q into optimal play under prior p.
pub fn reweight_reward(
    p: &Prior,
    q: &Prior,
    u: &RewardMatrix,
) -> Result<RewardMatrix, ChannelError> {
    if p.len() != q.len() || p.len() != u.states() {
        return Err(ChannelError::DimensionMismatch(format!(
            "priors over {} / {} states vs reward matrix with {} rows",
            p.len(),
            q.len(),
            u.states()
        )));
    }
    if let Some(x) = p.probs().iter().position(|v| v.is_zero()) {
        return Err(ChannelError::ZeroMarginal(x));
    }
    let mut m = Mat::zeros(u.states(), u.actions());
    for x in 0..u.states() {
        let f = q.prob(x) / p.prob(x);
        for a in 0..u.actions() {
            m[(x, a)] = &f * u.reward(x, a);
        }
    }
    Ok(RewardMatrix::new(m))
}

/// Marginal output distribution P(Y = y).
pub fn output_distribution(kappa: &Channel, p: &Prior) -> Result<Vec<Rat>, ChannelError> {
    if p.len() != kappa.input_size() {
        return Err(ChannelError::DimensionMismatch(format!(
            "prior over {} states vs channel with {} inputs",
            p.len(),
            kappa.input_size()
        )));
    }
    Ok((0..kappa.output_size())
        .map(|y| dot(p.probs(), &kappa.column(y)))
        .collect())
}
