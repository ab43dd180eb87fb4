//! The zonotope of a channel: the image of the unit cube under the channel
//! matrix, equivalently the Minkowski sum of the column segments.

use crate::channel::{Channel, ChannelError};
use crate::convexity::extreme_points;
use crate::exact_linear::{lp_solve, LpOutcome, LpProblem, Mat, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::sync::OnceLock;
use thiserror::Error;

/// Generator-count cap for the 2^m vertex enumeration.
pub const MAX_GENERATORS: usize = 20;

#[derive(Debug, Error, PartialEq)]
pub enum ZonotopeError {
    #[error("{0} generators exceed the enumeration cap of {1}")]
    TooManyGenerators(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polygon is not centrally symmetric about (1/2, 1/2)")]
    NotSymmetric,
    #[error("points are not the vertex set of a convex polygon")]
    NotConvex,
    #[error("polygon is missing the corner {0}")]
    MissingCorner(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// Membership answer with an exact witness either way.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// Coefficients `a` in the unit cube with `kappa a = v`.
    Inside(Vec<Rat>),
    /// Farkas certificate refuting the membership LP.
    Outside(Vec<Rat>),
}

#[derive(Debug)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<Vec<Rat>>,
    vertex_cache: OnceLock<Vec<Vec<Rat>>>,
}

impl Clone for Zonotope {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(v) = self.vertex_cache.get() {
            let _ = cache.set(v.clone());
        }
        Zonotope {
            dim: self.dim,
            generators: self.generators.clone(),
            vertex_cache: cache,
        }
    }
}

impl PartialEq for Zonotope {
    /// Geometric equality: same vertex set.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices() == other.vertices()
    }
}

impl Zonotope {
    /// The zonotope generated by the columns of a channel.
    pub fn of_channel(kappa: &Channel) -> Self {
        let generators = (0..kappa.output_size()).map(|y| kappa.column(y)).collect();
        Zonotope {
            dim: kappa.input_size(),
            generators,
            vertex_cache: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    fn nonzero_generators(&self) -> Vec<&Vec<Rat>> {
        self.generators
            .iter()
            .filter(|g| g.iter().any(|v| !v.is_zero()))
            .collect()
    }

    /// Images of all 0/1 coefficient vectors, deduplicated and sorted.
    /// Zero generators are skipped; they change nothing.
    pub fn corner_images(&self) -> Result<Vec<Vec<Rat>>, ZonotopeError> {
        let gens = self.nonzero_generators();
        if gens.len() > MAX_GENERATORS {
            return Err(ZonotopeError::TooManyGenerators(gens.len(), MAX_GENERATORS));
        }
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1u32 << gens.len()) {
            let mut point = vec![Rat::zero(); self.dim];
            for (k, g) in gens.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    for (pi, gi) in point.iter_mut().zip(g.iter()) {
                        *pi += gi;
                    }
                }
            }
            seen.insert(point);
        }
        Ok(seen.into_iter().collect())
    }

    /// Exact vertex set, sorted lexicographically. Computed once and cached;
    /// recomputation by a racing thread is idempotent.
    pub fn try_vertices(&self) -> Result<&[Vec<Rat>], ZonotopeError> {
        if let Some(v) = self.vertex_cache.get() {
            return Ok(v);
        }
        let corners = self.corner_images()?;
        let vertices = extreme_points(&corners);
        Ok(self.vertex_cache.get_or_init(|| vertices))
    }

    /// Exact vertex set; panics past the generator cap (use `try_vertices`
    /// when the generator count is not under your control).
    pub fn vertices(&self) -> &[Vec<Rat>] {
        self.try_vertices().expect("generator count exceeds cap")
    }

    /// Decide `v in Z` by LP feasibility of `kappa a = v`, `0 <= a <= 1`,
    /// returning an exact witness either way.
    pub fn membership(&self, v: &[Rat]) -> Result<Membership, ZonotopeError> {
        if v.len() != self.dim {
            return Err(ZonotopeError::DimensionMismatch(format!(
                "point of dimension {} vs zonotope of dimension {}",
                v.len(),
                self.dim
            )));
        }
        let m = self.generators.len();
        let mut a = Mat::zeros(self.dim, m);
        for (j, g) in self.generators.iter().enumerate() {
            for i in 0..self.dim {
                a[(i, j)] = g[i].clone();
            }
        }
        let problem = LpProblem::unit_box(a, v.to_vec());
        match lp_solve(&problem).expect("well-formed membership LP") {
            LpOutcome::Feasible { x, .. } => Ok(Membership::Inside(x)),
            LpOutcome::Infeasible { certificate } => Ok(Membership::Outside(certificate)),
        }
    }

    /// Membership without the certificate.
    pub fn contains_point(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>, ZonotopeError> {
        Ok(match self.membership(v)? {
            Membership::Inside(a) => Some(a),
            Membership::Outside(_) => None,
        })
    }

    /// Zonotope inclusion: every vertex of `inner` is a point of `self`.
    pub fn includes(&self, inner: &Zonotope) -> Result<bool, ZonotopeError> {
        if self.dim != inner.dim {
            return Err(ZonotopeError::DimensionMismatch(format!(
                "outer dimension {} vs inner dimension {}",
                self.dim, inner.dim
            )));
        }
        for v in inner.try_vertices()? {
            if self.contains_point(v)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn proportional(c: &[Rat], d: &[Rat]) -> bool {
    let n = c.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if &c[i] * &d[j] != &c[j] * &d[i] {
                return false;
            }
        }
    }
    true
}

/// Reduce a channel to its minimal zonotope generators: zero columns are
/// dropped, proportional columns are merged. Returns `(nu, lambda1, lambda2)`
/// with `nu = kappa lambda1` and `kappa = nu lambda2`, both exact, so the two
/// channels are mutual garblings of each other.
pub fn minimal_generators(kappa: &Channel) -> (Channel, Channel, Channel) {
    let ny = kappa.output_size();
    let cols: Vec<Vec<Rat>> = (0..ny).map(|y| kappa.column(y)).collect();
    // Partition the nonzero columns into proportionality classes.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of: Vec<Option<usize>> = vec![None; ny];
    for (y, col) in cols.iter().enumerate() {
        if col.iter().all(|v| v.is_zero()) {
            continue;
        }
        let found = groups
            .iter()
            .position(|g| proportional(&cols[g[0]], col));
        match found {
            Some(i) => {
                groups[i].push(y);
                group_of[y] = Some(i);
            }
            None => {
                groups.push(vec![y]);
                group_of[y] = Some(groups.len() - 1);
            }
        }
    }
    let r = groups.len();
    let nx = kappa.input_size();
    let mut nu = Mat::zeros(nx, r);
    for (i, g) in groups.iter().enumerate() {
        for &y in g {
            for x in 0..nx {
                nu[(x, i)] += &cols[y][x];
            }
        }
    }
    // lambda1: deterministic, sends y to its class (zero columns to class 0).
    let mut l1 = Mat::zeros(ny, r);
    for y in 0..ny {
        l1[(y, group_of[y].unwrap_or(0))] = Rat::one();
    }
    // lambda2: class i emits y in class i with the proportionality factor.
    let mut l2 = Mat::zeros(r, ny);
    for (i, g) in groups.iter().enumerate() {
        let k = (0..nx)
            .find(|&x| !nu[(x, i)].is_zero())
            .expect("nonzero group");
        for &y in g {
            l2[(i, y)] = &cols[y][k] / &nu[(k, i)];
        }
    }
    let nu = Channel::new(nu).expect("merged generators form a stochastic matrix");
    let lambda1 = Channel::new(l1).expect("class assignment is stochastic");
    let lambda2 = Channel::new(l2).expect("proportionality factors are stochastic");
    assert_eq!(kappa.compose(&lambda1).unwrap(), nu);
    assert_eq!(nu.compose(&lambda2).unwrap(), *kappa);
    (nu, lambda1, lambda2)
}

// --- binary polygon <-> channel correspondence -----------------------------

fn cross2(a: &[Rat], b: &[Rat]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Sort distinct 2D points counterclockwise around `center`, starting from
/// the direction (1, 0). Exact: comparisons by half-plane and cross product.
pub(crate) fn sort_ccw(points: &mut [Vec<Rat>], center: &[Rat]) {
    let half = |v: &[Rat]| -> u8 {
        if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
            0
        } else {
            1
        }
    };
    points.sort_by(|p, q| {
        let vp = [&p[0] - &center[0], &p[1] - &center[1]];
        let vq = [&q[0] - &center[0], &q[1] - &center[1]];
        half(&vp).cmp(&half(&vq)).then_with(|| {
            let c = cross2(&vp, &vq);
            if c.is_positive() {
                std::cmp::Ordering::Less
            } else if c.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
}

/// Rebuild a binary channel from the vertex set of its zonotope polygon.
///
/// The polygon must lie in the unit square, contain the corners (0,0) and
/// (1,1), and be centrally symmetric about (1/2, 1/2). Vertices are ordered
/// counterclockwise starting at the origin; the edge vectors of the chain up
/// to (1,1) become the channel columns.
pub fn polygon_to_channel(vertices: &[Vec<Rat>]) -> Result<Channel, ZonotopeError> {
    for v in vertices {
        if v.len() != 2 {
            return Err(ZonotopeError::DimensionMismatch(format!(
                "expected 2D points, got dimension {}",
                v.len()
            )));
        }
    }
    let mut pts: Vec<Vec<Rat>> = BTreeSet::from_iter(vertices.iter().cloned())
        .into_iter()
        .collect();
    let zero = vec![Rat::zero(), Rat::zero()];
    let one = vec![Rat::one(), Rat::one()];
    if !pts.contains(&zero) {
        return Err(ZonotopeError::MissingCorner("(0, 0)".into()));
    }
    if !pts.contains(&one) {
        return Err(ZonotopeError::MissingCorner("(1, 1)".into()));
    }
    for p in &pts {
        let mirror = vec![Rat::one() - &p[0], Rat::one() - &p[1]];
        if !pts.contains(&mirror) {
            return Err(ZonotopeError::NotSymmetric);
        }
    }
    if pts.len() == 2 {
        // degenerate diagonal segment: the constant channel
        let m = Mat::from_rows(vec![vec![Rat::one()], vec![Rat::one()]]);
        return Ok(Channel::new(m)?);
    }
    let center = vec![crate::exact_linear::rat(1, 2), crate::exact_linear::rat(1, 2)];
    sort_ccw(&mut pts, &center);
    let start = pts.iter().position(|p| *p == zero).expect("checked above");
    pts.rotate_left(start);
    // strict convexity of the cyclic sequence
    let n = pts.len();
    for i in 0..n {
        let a = &pts[i];
        let b = &pts[(i + 1) % n];
        let c = &pts[(i + 2) % n];
        let ab = [&b[0] - &a[0], &b[1] - &a[1]];
        let bc = [&c[0] - &b[0], &c[1] - &b[1]];
        if !cross2(&ab, &bc).is_positive() {
            return Err(ZonotopeError::NotConvex);
        }
    }
    if n % 2 != 0 || pts[n / 2] != one {
        return Err(ZonotopeError::NotSymmetric);
    }
    let mut cols = Vec::with_capacity(n / 2);
    for i in 1..=n / 2 {
        cols.push(vec![
            &pts[i][0] - &pts[i - 1][0],
            &pts[i][1] - &pts[i - 1][1],
        ]);
    }
    let mut m = Mat::zeros(2, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m[(0, j)] = c[0].clone();
        m[(1, j)] = c[1].clone();
    }
    Ok(Channel::new(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::exact_linear::{rat, rint};

    fn pt(v: &[(i64, i64)]) -> Vec<Rat> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn identity_zonotope_is_the_cube() {
        let z = Zonotope::of_channel(&Channel::identity(3));
        assert_eq!(z.vertices().len(), 8);
        assert!(z.vertices().contains(&vec![rint(1), rint(0), rint(1)]));
    }

    #[test]
    fn constant_channel_is_the_diagonal_segment() {
        let c = Channel::from_i64_ratios(&[&[(1, 1)], &[(1, 1)], &[(1, 1)]]).unwrap();
        let z = Zonotope::of_channel(&c);
        assert_eq!(
            z.vertices(),
            &[vec![rint(0); 3], vec![rint(1); 3]]
        );
    }

    #[test]
    fn mu_zonotope_has_eight_vertices() {
        let mu = data::separating_mu();
        let z = Zonotope::of_channel(&mu);
        let vs = z.vertices();
        assert_eq!(vs.len(), 8);
        for i in 0..3 {
            assert!(vs.contains(&mu.column(i)));
            let compl: Vec<Rat> = mu.column(i).iter().map(|v| Rat::one() - v).collect();
            assert!(vs.contains(&compl));
        }
        assert!(vs.contains(&vec![rint(0); 3]));
        assert!(vs.contains(&vec![rint(1); 3]));
    }

    #[test]
    fn membership_with_witnesses() {
        let kappa = data::separating_kappa();
        let zk = Zonotope::of_channel(&kappa);
        // mu's first column is in Z_kappa with coefficients (1,1,0,0)
        let a = zk
            .contains_point(&pt(&[(1, 2), (1, 2), (0, 1)]))
            .unwrap()
            .expect("inside");
        assert_eq!(a, vec![rint(1), rint(1), rint(0), rint(0)]);
        // the origin with the all-zero witness
        let a0 = zk.contains_point(&vec![rint(0); 3]).unwrap().expect("inside");
        assert!(a0.iter().all(|v| v.is_zero()));
        // (1,1,0) is outside Z_mu
        let zm = Zonotope::of_channel(&data::separating_mu());
        match zm.membership(&pt(&[(1, 1), (1, 1), (0, 1)])).unwrap() {
            Membership::Outside(cert) => assert_eq!(cert.len(), 3),
            other => panic!("expected outside, got {other:?}"),
        }
    }

    #[test]
    fn inclusion_of_separating_pair() {
        let zk = Zonotope::of_channel(&data::separating_kappa());
        let zm = Zonotope::of_channel(&data::separating_mu());
        assert!(zk.includes(&zm).unwrap());
        assert!(!zm.includes(&zk).unwrap());
        assert!(zk.includes(&zk).unwrap());
    }

    #[test]
    fn minimal_generators_merges_proportional_columns() {
        let c = Channel::from_i64_ratios(&[
            &[(1, 4), (1, 4), (1, 2)],
            &[(0, 1), (0, 1), (1, 1)],
        ])
        .unwrap();
        let (nu, _, _) = minimal_generators(&c);
        assert_eq!(nu.output_size(), 2);
        assert_eq!(nu.column(0), pt(&[(1, 2), (0, 1)]));
        assert_eq!(nu.column(1), pt(&[(1, 2), (1, 1)]));
        assert_eq!(
            Zonotope::of_channel(&c).vertices(),
            Zonotope::of_channel(&nu).vertices()
        );
    }

    #[test]
    fn minimal_generators_drops_zero_columns() {
        let c = Channel::from_i64_ratios(&[
            &[(0, 1), (1, 2), (1, 2)],
            &[(0, 1), (1, 1), (0, 1)],
        ])
        .unwrap();
        let (nu, _, _) = minimal_generators(&c);
        assert_eq!(nu.output_size(), 2);
    }

    #[test]
    fn minimal_generators_identity_on_irredundant_channels() {
        let mu = data::separating_mu();
        let (nu, _, _) = minimal_generators(&mu);
        assert_eq!(nu, mu);
    }

    #[test]
    fn unit_square_round_trip() {
        let square = vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(1, 1), (1, 1)]),
            pt(&[(0, 1), (1, 1)]),
        ];
        let c = polygon_to_channel(&square).unwrap();
        assert_eq!(c, Channel::identity(2));
    }

    #[test]
    fn hexagon_edge_vectors() {
        let hexagon = vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 2), (0, 1)]),
            pt(&[(1, 1), (1, 2)]),
            pt(&[(1, 1), (1, 1)]),
            pt(&[(1, 2), (1, 1)]),
            pt(&[(0, 1), (1, 2)]),
        ];
        let c = polygon_to_channel(&hexagon).unwrap();
        assert_eq!(c.column(0), pt(&[(1, 2), (0, 1)]));
        assert_eq!(c.column(1), pt(&[(1, 2), (1, 2)]));
        assert_eq!(c.column(2), pt(&[(0, 1), (1, 2)]));
        // round trip through the zonotope
        let z = Zonotope::of_channel(&c);
        let mut expect = hexagon.clone();
        expect.sort();
        assert_eq!(z.vertices(), &expect[..]);
    }

    #[test]
    fn degenerate_segment_is_the_constant_channel() {
        let seg = vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (1, 1)])];
        let c = polygon_to_channel(&seg).unwrap();
        assert_eq!(c.output_size(), 1);
    }

    #[test]
    fn polygon_validation_errors() {
        let missing = vec![pt(&[(0, 1), (0, 1)]), pt(&[(1, 1), (0, 1)])];
        assert!(matches!(
            polygon_to_channel(&missing),
            Err(ZonotopeError::MissingCorner(_))
        ));
        let asym = vec![
            pt(&[(0, 1), (0, 1)]),
            pt(&[(1, 1), (0, 1)]),
            pt(&[(1, 1), (1, 1)]),
        ];
        assert!(matches!(
            polygon_to_channel(&asym),
            Err(ZonotopeError::NotSymmetric)
        ));
    }
}
