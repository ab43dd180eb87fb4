//! Small exact convexity predicates shared by the zonotope and polytope
//! modules.

use crate::exact_linear::{lp_solve, LpOutcome, LpProblem, Mat, Rat};
use num_traits::One;

/// Is `p` a convex combination of `points`? Decided by one LP over the
/// combination weights.
pub fn in_convex_hull(points: &[Vec<Rat>], p: &[Rat]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = p.len();
    let n = points.len();
    // rows: one per coordinate plus the weight-sum row
    let mut a = Mat::zeros(dim + 1, n);
    for (j, q) in points.iter().enumerate() {
        for i in 0..dim {
            a[(i, j)] = q[i].clone();
        }
        a[(dim, j)] = Rat::one();
    }
    let mut b: Vec<Rat> = p.to_vec();
    b.push(Rat::one());
    match lp_solve(&LpProblem::nonneg(a, b)).expect("well-formed hull membership LP") {
        LpOutcome::Feasible { .. } => true,
        LpOutcome::Infeasible { .. } => false,
    }
}

/// Filter a deduplicated point set down to the extreme points of its convex
/// hull, preserving order.
pub fn extreme_points(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    points
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<Vec<Rat>> = points
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| q.clone())
                .collect();
            !in_convex_hull(&others, p)
        })
        .map(|(_, p)| p.clone())
        .collect()
}
