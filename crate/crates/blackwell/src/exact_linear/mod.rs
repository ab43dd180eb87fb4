//! Exact rational scalars, dense matrices and linear solving.
//!
//! Everything in this module is exact: no tolerances, no rounding. A
//! feasibility or rank answer can always be re-checked by substitution.

mod simplex;

pub use simplex::{certificate_refutes, lp_solve, Bound, LpOutcome, LpProblem};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational. `num_rational` keeps values reduced with a
/// positive denominator, so structural equality is mathematical equality.
pub type Rat = num_rational::BigRational;

/// `n/d` as a `Rat`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `Rat`.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rzero() -> Rat {
    Rat::zero()
}

pub fn rone() -> Rat {
    Rat::one()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinearError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("objective is unbounded above")]
    UnboundedObjective,
    #[error("variable {0} has lower bound greater than its upper bound")]
    InvalidBounds(usize),
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rint(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat, LinearError> {
        if self.cols != other.rows {
            return Err(LinearError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(k, j)];
                    out[(i, j)] += term;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>, LinearError> {
        if self.cols != v.len() {
            return Err(LinearError::DimensionMismatch(format!(
                "{}x{} * vec {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rat::zero(), |acc, t| acc + t)
}

/// Reduced row echelon form of `[a | rhs]`; returns the pivot columns.
/// `rhs` may be empty. Mutates in place.
fn rref(a: &mut Mat, rhs: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = a.rows();
    let cols = a.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
            rhs.swap(p, r);
        }
        let piv = a[(r, c)].clone();
        for j in 0..cols {
            a[(r, j)] /= piv.clone();
        }
        for v in rhs[r].iter_mut() {
            *v /= piv.clone();
        }
        let pivot_rhs = rhs[r].clone();
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in 0..cols {
                let t = &f * &a[(r, j)];
                a[(i, j)] -= t;
            }
            for (k, v) in rhs[i].iter_mut().enumerate() {
                let t = &f * &pivot_rhs[k];
                *v -= t;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// One exact solution of `A x = b`, or `None` if the system is inconsistent.
pub fn solve_linear(a: &Mat, b: &[Rat]) -> Result<Option<Vec<Rat>>, LinearError> {
    if a.rows() != b.len() {
        return Err(LinearError::DimensionMismatch(format!(
            "{} rows vs {} rhs entries",
            a.rows(),
            b.len()
        )));
    }
    let mut m = a.clone();
    let mut rhs: Vec<Vec<Rat>> = b.iter().map(|v| vec![v.clone()]).collect();
    let pivots = rref(&mut m, &mut rhs);
    // Inconsistent iff a zero row has nonzero rhs.
    for i in pivots.len()..a.rows() {
        if !rhs[i][0].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Rat::zero(); a.cols()];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rhs[r][0].clone();
    }
    Ok(Some(x))
}

/// Exact rank over the rationals.
pub fn rank(a: &Mat) -> usize {
    let mut m = a.clone();
    let mut rhs: Vec<Vec<Rat>> = vec![Vec::new(); a.rows()];
    rref(&mut m, &mut rhs).len()
}

/// Basis of the null space of `A` (as column vectors of length `a.cols()`).
pub fn null_space(a: &Mat) -> Vec<Vec<Rat>> {
    let mut m = a.clone();
    let mut rhs: Vec<Vec<Rat>> = vec![Vec::new(); a.rows()];
    let pivots = rref(&mut m, &mut rhs);
    let mut basis = Vec::new();
    for free in 0..a.cols() {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); a.cols()];
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[(r, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scale a rational vector to coprime integers with positive leading nonzero
/// entry. Used to canonicalize hyperplane normals.
pub fn canonical_direction(v: &[Rat]) -> Option<Vec<Rat>> {
    use num_integer::Integer;
    let first = v.iter().find(|x| !x.is_zero())?;
    let sign = if first.is_negative() { -1 } else { 1 };
    // Clear denominators, then divide by the gcd of numerators.
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()) * sign)
        .collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    Some(ints.into_iter().map(|n| Rat::from_integer(n / &g)).collect())
}
