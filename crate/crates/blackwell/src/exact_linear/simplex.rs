//! Exact two-phase simplex over the rationals with Bland's pivoting rule.
//!
//! The solver decides feasibility of `A x = b` under box bounds, optionally
//! maximizing a linear objective. Feasible outcomes carry a point that
//! satisfies every constraint with exact equality; infeasible outcomes carry
//! a dual vector `y` over the equality rows that refutes the system by the
//! box-Farkas argument: `sup { (yᵀA)x : l ≤ x ≤ u } < yᵀb`.

use super::{dot, LinearError, Mat, Rat};
use num_traits::{One, Signed, Zero};

/// Bound of a single variable on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Free,
    At(Rat),
}

impl Bound {
    fn as_rat(&self) -> Option<&Rat> {
        match self {
            Bound::Free => None,
            Bound::At(r) => Some(r),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpProblem {
    /// Equality constraints `a · x = b`.
    pub a: Mat,
    pub b: Vec<Rat>,
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
    /// Linear objective to maximize, if any.
    pub objective: Option<Vec<Rat>>,
}

impl LpProblem {
    /// Pure feasibility problem with all variables in `[0, 1]`.
    pub fn unit_box(a: Mat, b: Vec<Rat>) -> Self {
        let n = a.cols();
        LpProblem {
            a,
            b,
            lower: vec![Bound::At(Rat::zero()); n],
            upper: vec![Bound::At(Rat::one()); n],
            objective: None,
        }
    }

    /// Pure feasibility problem with all variables nonnegative.
    pub fn nonneg(a: Mat, b: Vec<Rat>) -> Self {
        let n = a.cols();
        LpProblem {
            a,
            b,
            lower: vec![Bound::At(Rat::zero()); n],
            upper: vec![Bound::Free; n],
            objective: None,
        }
    }

    fn check(&self) -> Result<(), LinearError> {
        let n = self.a.cols();
        if self.b.len() != self.a.rows() {
            return Err(LinearError::DimensionMismatch(format!(
                "{} rows vs {} rhs entries",
                self.a.rows(),
                self.b.len()
            )));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LinearError::DimensionMismatch(format!(
                "{} columns vs bounds ({}, {})",
                n,
                self.lower.len(),
                self.upper.len()
            )));
        }
        if let Some(c) = &self.objective {
            if c.len() != n {
                return Err(LinearError::DimensionMismatch(format!(
                    "{} columns vs objective length {}",
                    n,
                    c.len()
                )));
            }
        }
        for j in 0..n {
            if let (Bound::At(l), Bound::At(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(LinearError::InvalidBounds(j));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible {
        x: Vec<Rat>,
        /// Exact optimum of the objective, when one was given.
        objective: Option<Rat>,
    },
    Infeasible {
        /// Farkas-type dual vector over the equality rows.
        certificate: Vec<Rat>,
    },
}

/// Check an infeasibility certificate by pure arithmetic:
/// `sup { (yᵀA)x : l ≤ x ≤ u }` must be strictly below `yᵀb`.
pub fn certificate_refutes(p: &LpProblem, y: &[Rat]) -> bool {
    if y.len() != p.a.rows() {
        return false;
    }
    let d: Vec<Rat> = (0..p.a.cols())
        .map(|j| dot(y, &p.a.col(j)))
        .collect();
    let mut sup = Rat::zero();
    for (j, dj) in d.iter().enumerate() {
        if dj.is_zero() {
            continue;
        }
        let bound = if dj.is_positive() {
            p.upper[j].as_rat()
        } else {
            p.lower[j].as_rat()
        };
        match bound {
            Some(v) => sup += dj * v,
            None => return false, // supremum is +infinity
        }
    }
    sup < dot(y, &p.b)
}

// Internal standard form: minimize over x' >= 0 subject to G x' = h.
// Each original variable maps to shifted/mirrored/split columns.
struct StandardForm {
    g: Vec<Vec<Rat>>, // rows
    h: Vec<Rat>,
    n_cols: usize,
    // var j of the original problem: x_j = shift[j] + sum of coeff * col
    shift: Vec<Rat>,
    col_map: Vec<Vec<(usize, i8)>>,
    // rows 0..n_eq come from the equality system (with recorded sign flips)
    n_eq: usize,
    row_sign: Vec<i8>,
}

fn standardize(p: &LpProblem) -> StandardForm {
    let n = p.a.cols();
    let m = p.a.rows();
    let mut col_map: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    let mut shift = vec![Rat::zero(); n];
    let mut n_cols = 0usize;
    // (column, range) pairs for variables with two finite bounds
    let mut ub_rows: Vec<(usize, Rat)> = Vec::new();
    for j in 0..n {
        match (&p.lower[j], &p.upper[j]) {
            (Bound::At(l), Bound::At(u)) => {
                shift[j] = l.clone();
                col_map[j].push((n_cols, 1));
                ub_rows.push((n_cols, u - l));
                n_cols += 1;
            }
            (Bound::At(l), Bound::Free) => {
                shift[j] = l.clone();
                col_map[j].push((n_cols, 1));
                n_cols += 1;
            }
            (Bound::Free, Bound::At(u)) => {
                shift[j] = u.clone();
                col_map[j].push((n_cols, -1));
                n_cols += 1;
            }
            (Bound::Free, Bound::Free) => {
                col_map[j].push((n_cols, 1));
                col_map[j].push((n_cols + 1, -1));
                n_cols += 2;
            }
        }
    }
    let n_slack = ub_rows.len();
    let total_cols = n_cols + n_slack;
    let n_rows = m + n_slack;
    let mut g = vec![vec![Rat::zero(); total_cols]; n_rows];
    let mut h = vec![Rat::zero(); n_rows];
    for i in 0..m {
        let mut rhs = p.b[i].clone();
        for j in 0..n {
            let aij = &p.a[(i, j)];
            if aij.is_zero() {
                continue;
            }
            rhs -= aij * &shift[j];
            for &(col, sgn) in &col_map[j] {
                if sgn > 0 {
                    g[i][col] += aij;
                } else {
                    g[i][col] -= aij;
                }
            }
        }
        h[i] = rhs;
    }
    for (k, (col, range)) in ub_rows.into_iter().enumerate() {
        g[m + k][col] = Rat::one();
        g[m + k][n_cols + k] = Rat::one();
        h[m + k] = range;
    }
    // Normalize to nonnegative right-hand sides.
    let mut row_sign = vec![1i8; n_rows];
    for i in 0..n_rows {
        if h[i].is_negative() {
            row_sign[i] = -1;
            h[i] = -h[i].clone();
            for v in g[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    StandardForm {
        g,
        h,
        n_cols: total_cols,
        shift,
        col_map,
        n_eq: m,
        row_sign,
    }
}

// Dense simplex tableau. Columns 0..n are structural, n..n+m artificial.
struct Tableau {
    rows: Vec<Vec<Rat>>, // m x (n + m)
    rhs: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(sf: &StandardForm) -> Self {
        let m = sf.g.len();
        let n = sf.n_cols;
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = sf.g[i].clone();
            row.extend((0..m).map(|k| {
                if k == i {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }));
            rows.push(row);
        }
        Tableau {
            rows,
            rhs: sf.h.clone(),
            basis: (n..n + m).collect(),
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= piv.clone();
        }
        self.rhs[r] /= piv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Reduced cost of column `c` for the cost vector `cost`
    /// (length `n_struct + m`, artificial costs included).
    fn reduced_cost(&self, cost: &[Rat], c: usize) -> Rat {
        let mut rc = cost[c].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[r][c].is_zero() {
                rc -= &cost[b] * &self.rows[r][c];
            }
        }
        rc
    }

    /// Bland's rule: smallest-index entering column with negative reduced
    /// cost, smallest-basic-index leaving row. Returns false on optimality.
    /// `allowed` limits the entering columns.
    fn bland_step(&mut self, cost: &[Rat], allowed: usize) -> Result<bool, LinearError> {
        let entering = (0..allowed).find(|&c| {
            !self.basis.contains(&c) && self.reduced_cost(cost, c).is_negative()
        });
        let Some(c) = entering else {
            return Ok(false);
        };
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..self.rows.len() {
            if !self.rows[r][c].is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / &self.rows[r][c];
            let better = match &leave {
                None => true,
                Some((lr, lratio)) => {
                    ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                }
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        match leave {
            Some((r, _)) => {
                self.pivot(r, c);
                Ok(true)
            }
            None => Err(LinearError::UnboundedObjective),
        }
    }

    fn objective_value(&self, cost: &[Rat]) -> Rat {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &cost[b] * v)
            .fold(Rat::zero(), |acc, t| acc + t)
    }
}

/// Exact simplex solve. Deterministic: Bland's rule everywhere.
pub fn lp_solve(p: &LpProblem) -> Result<LpOutcome, LinearError> {
    p.check()?;
    let sf = standardize(p);
    let m = sf.g.len();
    let n = sf.n_cols;
    let mut t = Tableau::new(&sf);

    // Phase one: minimize the sum of artificial variables.
    let mut phase1_cost = vec![Rat::zero(); n + m];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = Rat::one();
    }
    while t.bland_step(&phase1_cost, n + m)? {}
    let p1 = t.objective_value(&phase1_cost);
    if p1.is_positive() {
        // y = c_B B^{-1}; the artificial block of the tableau is B^{-1}.
        let mut y = vec![Rat::zero(); m];
        for (i, yi) in y.iter_mut().enumerate() {
            for (r, &b) in t.basis.iter().enumerate() {
                if b >= n {
                    *yi += &t.rows[r][n + i];
                }
            }
        }
        // Undo row sign flips and keep only the equality-row components.
        let certificate: Vec<Rat> = (0..sf.n_eq)
            .map(|i| {
                if sf.row_sign[i] < 0 {
                    -y[i].clone()
                } else {
                    y[i].clone()
                }
            })
            .collect();
        debug_assert!(certificate_refutes(p, &certificate));
        return Ok(LpOutcome::Infeasible { certificate });
    }

    // Drive remaining artificial variables out of the basis; rows where
    // that is impossible are redundant and get dropped.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(c) = (0..n).find(|&c| !t.rows[r][c].is_zero()) {
                t.pivot(r, c);
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    // Phase two, if there is an objective. Maximizing c'x is minimizing -c'x.
    if let Some(c) = &p.objective {
        let mut phase2_cost = vec![Rat::zero(); n + m];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for &(col, sgn) in &sf.col_map[j] {
                if sgn > 0 {
                    phase2_cost[col] -= cj;
                } else {
                    phase2_cost[col] += cj;
                }
            }
        }
        while t.bland_step(&phase2_cost, n)? {}
    }

    // Read off the solution and map it back to the original variables.
    let mut xs = vec![Rat::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            xs[b] = t.rhs[r].clone();
        }
    }
    let x: Vec<Rat> = (0..p.a.cols())
        .map(|j| {
            let mut v = sf.shift[j].clone();
            for &(col, sgn) in &sf.col_map[j] {
                if sgn > 0 {
                    v += &xs[col];
                } else {
                    v -= &xs[col];
                }
            }
            v
        })
        .collect();
    debug_assert_eq!(p.a.mul_vec(&x).unwrap(), p.b);
    let objective = p.objective.as_ref().map(|c| dot(c, &x));
    Ok(LpOutcome::Feasible { x, objective })
}
