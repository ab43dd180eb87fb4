//! Shared helpers for the integration suites: an independent vertex oracle
//! for zonotopes in dimension 2 and 3 built from facet normals, with no
//! linear programming involved.

use blackwell::channel::Channel;
use blackwell::exact_linear::{dot, rank, Mat, Rat};
use num_traits::Zero;
use std::collections::BTreeSet;

/// All 2^m corner images of the unit cube under the channel's columns.
pub fn corner_images(kappa: &Channel) -> Vec<Vec<Rat>> {
    let m = kappa.output_size();
    let d = kappa.input_size();
    assert!(m <= 20, "too many generators for corner enumeration");
    let cols: Vec<Vec<Rat>> = (0..m).map(|y| kappa.column(y)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << m) {
        let mut p = vec![Rat::zero(); d];
        for (y, col) in cols.iter().enumerate() {
            if mask & (1 << y) != 0 {
                for (pv, cv) in p.iter_mut().zip(col) {
                    *pv += cv;
                }
            }
        }
        out.insert(p);
    }
    out.into_iter().collect()
}

fn cross3(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// Candidate facet normals of the zonotope: in dimension 3 the cross
/// products of generator pairs, in dimension 2 the rotations of single
/// generators; each with both signs.
fn facet_normals(kappa: &Channel) -> Vec<Vec<Rat>> {
    let cols: Vec<Vec<Rat>> = (0..kappa.output_size())
        .map(|y| kappa.column(y))
        .collect();
    let mut normals = Vec::new();
    match kappa.input_size() {
        2 => {
            for g in &cols {
                let n = vec![g[1].clone(), -g[0].clone()];
                if n.iter().any(|v| !v.is_zero()) {
                    normals.push(n);
                }
            }
        }
        3 => {
            for i in 0..cols.len() {
                for j in (i + 1)..cols.len() {
                    let n = cross3(&cols[i], &cols[j]);
                    if n.iter().any(|v| !v.is_zero()) {
                        normals.push(n);
                    }
                }
            }
        }
        d => panic!("facet-normal oracle only covers dimensions 2 and 3, got {d}"),
    }
    let mut both: Vec<Vec<Rat>> = Vec::new();
    for n in normals {
        both.push(n.iter().map(|v| -v.clone()).collect());
        both.push(n);
    }
    both
}

/// Is the channel's generator matrix full-dimensional? The facet-normal
/// oracle is only meaningful in that case.
pub fn full_rank_generators(kappa: &Channel) -> bool {
    rank(kappa.matrix()) == kappa.input_size()
}

/// Vertex oracle: a corner image is a vertex of the zonotope iff the facet
/// normals tight at it span the whole space. Requires full-dimensional
/// generators.
pub fn oracle_vertices(kappa: &Channel) -> Vec<Vec<Rat>> {
    assert!(full_rank_generators(kappa));
    let d = kappa.input_size();
    let corners = corner_images(kappa);
    let normals = facet_normals(kappa);
    // max of each linear functional over all corner points
    let maxima: Vec<Rat> = normals
        .iter()
        .map(|n| {
            corners
                .iter()
                .map(|p| dot(n, p))
                .max()
                .expect("at least one corner")
        })
        .collect();
    corners
        .into_iter()
        .filter(|p| {
            let tight: Vec<Vec<Rat>> = normals
                .iter()
                .zip(&maxima)
                .filter(|(n, m)| &dot(n, p) == *m)
                .map(|(n, _)| n.clone())
                .collect();
            tight.len() >= d && rank(&Mat::from_rows(tight)) == d
        })
        .collect()
}
