//! Exact convex-polytope geometry in ambient dimension <= 3: hulls,
//! halfspace representations, intersection, 2-face enumeration, zonotope
//! recognition and the binary-case lattice operations.

use crate::channel::{Channel, ChannelError};
use crate::convexity::extreme_points;
use crate::exact_linear::{
    canonical_direction, dot, null_space, rank, solve_linear, Mat, Rat,
};
use crate::zonotope::{polygon_to_channel, sort_ccw, Zonotope, ZonotopeError};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolytopeError {
    #[error("ambient dimension {0} exceeds the supported maximum of 3")]
    DimensionTooLarge(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires binary channels (|X| = 2), got |X| = {0}")]
    WrongInputDimension(usize),
    #[error("convex hull of an empty point set")]
    NoPoints,
    #[error(transparent)]
    Zonotope(#[from] ZonotopeError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// `normal . x <= offset`, with the normal scaled to coprime integers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    fn satisfied_by(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) <= self.offset
    }

    fn tight_at(&self, x: &[Rat]) -> bool {
        dot(&self.normal, x) == self.offset
    }

    fn canonical(normal: Vec<Rat>, offset: Rat) -> Option<Halfspace> {
        let mut scaled = canonical_direction(&normal)?;
        let k = normal.iter().position(|v| !v.is_zero()).unwrap();
        let mut factor = &scaled[k] / &normal[k];
        // scaling by a negative factor would flip the inequality
        if factor.is_negative() {
            scaled = scaled.iter().map(|v| -v).collect();
            factor = -factor;
        }
        Some(Halfspace {
            normal: scaled,
            offset: offset * factor,
        })
    }
}

/// A 2-dimensional face, vertices in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<Vec<Rat>>,
}

impl Face {
    /// Even vertex count and opposite vertices summing to a common center.
    pub fn centrally_symmetric(&self) -> bool {
        let n = self.vertices.len();
        if n % 2 != 0 {
            return false;
        }
        let h = n / 2;
        let center: Vec<Rat> = self.vertices[0]
            .iter()
            .zip(&self.vertices[h])
            .map(|(a, b)| a + b)
            .collect();
        (0..h).all(|i| {
            self.vertices[i]
                .iter()
                .zip(&self.vertices[i + h])
                .map(|(a, b)| a + b)
                .collect::<Vec<Rat>>()
                == center
        })
    }
}

/// Bounded convex polytope with exact V- and H-representations. For
/// lower-dimensional polytopes the affine hull is carried as equalities.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    halfspaces: Vec<Halfspace>,
    /// `normal . x = offset` equalities cutting out the affine hull.
    affine_eqs: Vec<(Vec<Rat>, Rat)>,
}

impl Polytope {
    pub fn empty(dim: usize) -> Self {
        Polytope {
            dim,
            vertices: Vec::new(),
            halfspaces: Vec::new(),
            affine_eqs: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn affine_eqs(&self) -> &[(Vec<Rat>, Rat)] {
        &self.affine_eqs
    }

    /// Dimension of the affine hull.
    pub fn affine_dim(&self) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        self.dim - self.affine_eqs.len()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.is_empty()
            && self.affine_eqs.iter().all(|(n, o)| dot(n, x) == *o)
            && self.halfspaces.iter().all(|h| h.satisfied_by(x))
    }

    /// Cross-validation of the two representations; used by tests.
    pub fn validate(&self) -> bool {
        for v in &self.vertices {
            if !self.contains(v) {
                return false;
            }
        }
        if self.affine_dim() == self.dim {
            // every facet must be tight at >= dim affinely independent vertices
            for h in &self.halfspaces {
                let tight: Vec<&Vec<Rat>> =
                    self.vertices.iter().filter(|v| h.tight_at(v)).collect();
                if tight.len() < self.dim || affine_rank(&tight) < self.dim - 1 {
                    return false;
                }
            }
        }
        true
    }
}

fn affine_rank(points: &[&Vec<Rat>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let p0 = points[0];
    let diffs: Vec<Vec<Rat>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rank(&Mat::from_rows(diffs))
}

// Halfspaces of a full-dimensional hull: hyperplanes through every
// dim-subset of vertices that keep all vertices on one side.
fn full_dim_halfspaces(vertices: &[Vec<Rat>], dim: usize) -> Vec<Halfspace> {
    let n = vertices.len();
    let mut out = BTreeSet::new();
    let mut subset = vec![0usize; dim];
    fn visit(
        vertices: &[Vec<Rat>],
        dim: usize,
        n: usize,
        start: usize,
        depth: usize,
        subset: &mut Vec<usize>,
        out: &mut BTreeSet<Halfspace>,
    ) {
        if depth == dim {
            let pts: Vec<&Vec<Rat>> = subset.iter().map(|&i| &vertices[i]).collect();
            let p0 = pts[0];
            let diffs: Vec<Vec<Rat>> = pts[1..]
                .iter()
                .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
                .collect();
            let d = Mat::from_rows(if diffs.is_empty() {
                vec![vec![Rat::zero(); dim]; 0]
            } else {
                diffs
            });
            let d = if d.rows() == 0 { Mat::zeros(0, dim) } else { d };
            let ns = null_space(&d);
            if ns.len() != 1 {
                return; // degenerate subset; facet found elsewhere
            }
            let normal = ns.into_iter().next().unwrap();
            let offset = dot(&normal, p0);
            let mut pos = false;
            let mut neg = false;
            for v in vertices {
                let s = dot(&normal, v) - &offset;
                if s.is_positive() {
                    pos = true;
                } else if s.is_negative() {
                    neg = true;
                }
                if pos && neg {
                    return;
                }
            }
            if pos && neg {
                return;
            }
            let (normal, offset) = if pos {
                (normal.iter().map(|v| -v.clone()).collect(), -offset)
            } else {
                (normal, offset)
            };
            if let Some(h) = Halfspace::canonical(normal, offset) {
                out.insert(h);
            }
            return;
        }
        for i in start..n {
            subset[depth] = i;
            visit(vertices, dim, n, i + 1, depth + 1, subset, out);
        }
    }
    visit(vertices, dim, n, 0, 0, &mut subset, &mut out);
    out.into_iter().collect()
}

/// Exact convex hull of a point set in ambient dimension <= 3.
pub fn convex_hull(points: &[Vec<Rat>], dim: usize) -> Result<Polytope, PolytopeError> {
    if dim > 3 {
        return Err(PolytopeError::DimensionTooLarge(dim));
    }
    if points.is_empty() {
        return Err(PolytopeError::NoPoints);
    }
    for p in points {
        if p.len() != dim {
            return Err(PolytopeError::DimensionMismatch(format!(
                "point of dimension {} in ambient dimension {}",
                p.len(),
                dim
            )));
        }
    }
    let dedup: Vec<Vec<Rat>> = BTreeSet::from_iter(points.iter().cloned())
        .into_iter()
        .collect();
    let vertices = extreme_points(&dedup);

    // Affine hull: normals orthogonal to every difference vector.
    let p0 = &vertices[0];
    let diffs: Vec<Vec<Rat>> = vertices[1..]
        .iter()
        .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let diff_mat = if diffs.is_empty() {
        Mat::zeros(0, dim)
    } else {
        Mat::from_rows(diffs.clone())
    };
    let hull_normals = null_space(&diff_mat);
    let affine_eqs: Vec<(Vec<Rat>, Rat)> = hull_normals
        .iter()
        .map(|n| {
            let c = canonical_direction(n).expect("null space vectors are nonzero");
            let o = dot(&c, p0);
            (c, o)
        })
        .collect();
    let adim = dim - affine_eqs.len();

    let halfspaces = if adim == 0 {
        Vec::new()
    } else if adim == dim {
        full_dim_halfspaces(&vertices, dim)
    } else {
        // Work in affine coordinates: x = p0 + U t with U an ambient x adim
        // basis of the direction space, t = (UᵀU)⁻¹ Uᵀ (x - p0).
        let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
        for d in &diffs {
            basis_rows.push(d.clone());
            if rank(&Mat::from_rows(basis_rows.clone())) < basis_rows.len() {
                basis_rows.pop();
            }
            if basis_rows.len() == adim {
                break;
            }
        }
        let u = Mat::from_rows(basis_rows).transpose(); // ambient x adim
        let gram = u.transpose().mul(&u).expect("dims agree");
        let coords: Vec<Vec<Rat>> = vertices
            .iter()
            .map(|v| {
                let rel: Vec<Rat> = v.iter().zip(p0.iter()).map(|(a, b)| a - b).collect();
                let rhs = u.transpose().mul_vec(&rel).expect("dims agree");
                solve_linear(&gram, &rhs)
                    .expect("dims agree")
                    .expect("gram matrix of a basis is invertible")
            })
            .collect();
        full_dim_halfspaces(&coords, adim)
            .into_iter()
            .filter_map(|h| {
                // n_x = U (UᵀU)⁻¹ n_t; offset shifts by n_x . p0
                let w = solve_linear(&gram, &h.normal)
                    .expect("dims agree")
                    .expect("gram matrix of a basis is invertible");
                let nx = u.mul_vec(&w).expect("dims agree");
                let off = h.offset + dot(&nx, p0);
                Halfspace::canonical(nx, off)
            })
            .collect()
    };
    Ok(Polytope {
        dim,
        vertices,
        halfspaces,
        affine_eqs,
    })
}

/// Exact intersection. An empty intersection is a valid empty polytope.
pub fn intersect(p: &Polytope, q: &Polytope) -> Result<Polytope, PolytopeError> {
    if p.dim != q.dim {
        return Err(PolytopeError::DimensionMismatch(format!(
            "ambient dimensions {} vs {}",
            p.dim, q.dim
        )));
    }
    let dim = p.dim;
    if dim > 3 {
        return Err(PolytopeError::DimensionTooLarge(dim));
    }
    if p.is_empty() || q.is_empty() {
        return Ok(Polytope::empty(dim));
    }
    // Constraint rows (normal, offset); equalities become halfspace pairs.
    let mut rows: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for poly in [p, q] {
        for h in &poly.halfspaces {
            rows.push((h.normal.clone(), h.offset.clone()));
        }
        for (n, o) in &poly.affine_eqs {
            rows.push((n.clone(), o.clone()));
            rows.push((n.iter().map(|v| -v.clone()).collect(), -o.clone()));
        }
    }
    let feasible = |x: &[Rat]| rows.iter().all(|(n, o)| dot(n, x) <= *o);
    // Candidate vertices: unique solutions of dim constraints at equality.
    let mut candidates: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let m = rows.len();
    let mut idx = vec![0usize; dim];
    fn visit(
        rows: &[(Vec<Rat>, Rat)],
        dim: usize,
        m: usize,
        start: usize,
        depth: usize,
        idx: &mut Vec<usize>,
        feasible: &dyn Fn(&[Rat]) -> bool,
        candidates: &mut BTreeSet<Vec<Rat>>,
    ) {
        if depth == dim {
            let a = Mat::from_rows(idx.iter().map(|&i| rows[i].0.clone()).collect());
            if rank(&a) < dim {
                return;
            }
            let b: Vec<Rat> = idx.iter().map(|&i| rows[i].1.clone()).collect();
            if let Ok(Some(x)) = solve_linear(&a, &b) {
                if feasible(&x) {
                    candidates.insert(x);
                }
            }
            return;
        }
        for i in start..m {
            idx[depth] = i;
            visit(rows, dim, m, i + 1, depth + 1, idx, feasible, candidates);
        }
    }
    visit(&rows, dim, m, 0, 0, &mut idx, &feasible, &mut candidates);
    if candidates.is_empty() {
        return Ok(Polytope::empty(dim));
    }
    let pts: Vec<Vec<Rat>> = candidates.into_iter().collect();
    convex_hull(&pts, dim)
}

/// Cyclic ordering of coplanar points around their centroid, exact.
fn order_cyclic(points: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let n = points.len();
    let centroid: Vec<Rat> = (0..dim)
        .map(|i| {
            points
                .iter()
                .map(|p| p[i].clone())
                .fold(Rat::zero(), |a, v| a + v)
                / Rat::from_integer((n as i64).into())
        })
        .collect();
    if dim == 2 {
        let mut pts = points.to_vec();
        sort_ccw(&mut pts, &centroid);
        return pts;
    }
    // dim == 3: points lie on a plane; order by angle around the centroid
    // using triple products with the plane normal.
    let cross3 = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
        vec![
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ]
    };
    let sub = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    };
    let r = sub(&points[0], &centroid);
    // normal from two independent directions in the plane
    let normal = points[1..]
        .iter()
        .map(|p| cross3(&r, &sub(p, &centroid)))
        .find(|v| v.iter().any(|x| !x.is_zero()))
        .expect("face has at least two independent directions");
    let half = |w: &[Rat]| -> u8 {
        let up = dot(&normal, &cross3(&r, w));
        if up.is_positive() || (up.is_zero() && dot(&r, w).is_positive()) {
            0
        } else {
            1
        }
    };
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        let va = sub(a, &centroid);
        let vb = sub(b, &centroid);
        half(&va).cmp(&half(&vb)).then_with(|| {
            let c = dot(&normal, &cross3(&va, &vb));
            if c.is_positive() {
                std::cmp::Ordering::Less
            } else if c.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    pts
}

/// All 2-dimensional faces. For a full-dimensional 3-polytope these are its
/// facets; a planar polytope is its own single face; segments and points
/// have none.
pub fn faces_2d(p: &Polytope) -> Result<Vec<Face>, PolytopeError> {
    if p.dim > 3 {
        return Err(PolytopeError::DimensionTooLarge(p.dim));
    }
    if p.is_empty() {
        return Ok(Vec::new());
    }
    match p.affine_dim() {
        0 | 1 => Ok(Vec::new()),
        2 => Ok(vec![Face {
            vertices: order_cyclic(&p.vertices, p.dim),
        }]),
        _ => {
            let mut faces = Vec::new();
            for h in &p.halfspaces {
                let tight: Vec<Vec<Rat>> = p
                    .vertices
                    .iter()
                    .filter(|v| h.tight_at(v))
                    .cloned()
                    .collect();
                if tight.len() >= 3 {
                    faces.push(Face {
                        vertices: order_cyclic(&tight, p.dim),
                    });
                }
            }
            Ok(faces)
        }
    }
}

/// A polytope is a zonotope iff every 2-face is centrally symmetric.
/// Returns an offending face when it is not.
pub fn is_zonotope(p: &Polytope) -> Result<(bool, Option<Face>), PolytopeError> {
    for face in faces_2d(p)? {
        if !face.centrally_symmetric() {
            return Ok((false, Some(face)));
        }
    }
    Ok((true, None))
}

/// Polytope of the zonotope polygon of a binary channel.
fn binary_zonotope_polytope(c: &Channel) -> Result<Polytope, PolytopeError> {
    let z = Zonotope::of_channel(c);
    convex_hull(z.try_vertices()?, 2)
}

/// Greatest lower bound of two binary channels: intersect the zonotope
/// polygons and read the edge vectors back off as a channel.
pub fn binary_meet(kappa: &Channel, mu: &Channel) -> Result<Channel, PolytopeError> {
    if kappa.input_size() != 2 {
        return Err(PolytopeError::WrongInputDimension(kappa.input_size()));
    }
    if mu.input_size() != 2 {
        return Err(PolytopeError::WrongInputDimension(mu.input_size()));
    }
    let zp = binary_zonotope_polytope(kappa)?;
    let zq = binary_zonotope_polytope(mu)?;
    let meet = intersect(&zp, &zq)?;
    Ok(polygon_to_channel(meet.vertices())?)
}

/// Least upper bound of two binary channels: hull of the union of the
/// zonotope polygons.
pub fn binary_join(kappa: &Channel, mu: &Channel) -> Result<Channel, PolytopeError> {
    if kappa.input_size() != 2 {
        return Err(PolytopeError::WrongInputDimension(kappa.input_size()));
    }
    if mu.input_size() != 2 {
        return Err(PolytopeError::WrongInputDimension(mu.input_size()));
    }
    let mut pts: Vec<Vec<Rat>> = Zonotope::of_channel(kappa).try_vertices()?.to_vec();
    pts.extend(Zonotope::of_channel(mu).try_vertices()?.iter().cloned());
    let join = convex_hull(&pts, 2)?;
    Ok(polygon_to_channel(join.vertices())?)
}
