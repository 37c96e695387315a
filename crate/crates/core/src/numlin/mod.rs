//! Desk-scale linear algebra and polyhedral geometry.

mod cone;
mod conic;
mod dist;
mod linalg;
mod lp;
mod polytope;

pub use cone::{extreme_rays_hcone, PolyhedralCone};
pub use conic::{
    closed_conic_hull_of_polytope_plus_cone, meets_neg_cone, piece_member, ClosedConicUnion,
    ConicPiece,
};
pub use dist::{dist_to_cone, min_norm_hull, min_norm_polyhedron, wolfe_min_norm, MinNorm};
pub use linalg::{affine_independent, least_squares, null_space, orthonormal_basis, solve_square};
pub use lp::{lp_solve, Constraint, LinearProgram, LpOutcome, RelOp, Sense};
pub use polytope::{vertex_enumeration, Polytope};
pub(crate) use polytope::hull_contains;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub type Vector = Vec<f64>;

/// The three supported norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    /// Polyhedral norms are handled exactly by LP.
    pub fn is_polyhedral(self) -> bool {
        !matches!(self, Norm::L2)
    }

    pub fn parse(s: &str) -> Option<Norm> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Some(Norm::L1),
            "l2" => Some(Norm::L2),
            "linf" | "l_inf" | "inf" => Some(Norm::Linf),
            _ => None,
        }
    }
}

impl std::fmt::Display for Norm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

/// Ambient space: R^dim with one of the supported norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub dim: usize,
    pub norm: Norm,
}

impl Space {
    pub fn new(dim: usize, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        Ok(Space { dim, norm })
    }

    pub fn check(&self, v: &[f64]) -> Result<()> {
        check_dim(self.dim, v)
    }
}

pub fn check_dim(dim: usize, v: &[f64]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    Ok(())
}

/// Norm of `v` in `space`, with a dimension check.
pub fn norm(v: &[f64], space: &Space) -> Result<f64> {
    space.check(v)?;
    Ok(space.norm.of(v))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[f64], t: f64) -> Vector {
    a.iter().map(|x| x * t).collect()
}

pub fn neg(a: &[f64]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Euclidean unit vector, or `None` for (near) zero input.
pub fn unit(a: &[f64]) -> Option<Vector> {
    let n = norm2(a);
    (n > 1e-15).then(|| scale(a, 1.0 / n))
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm2(a), norm2(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot(a, b) / (na * nb)
}

/// Linear combination `sum_i w_i v_i`.
pub fn combo(vs: &[Vector], w: &[f64], dim: usize) -> Vector {
    let mut out = vec![0.0; dim];
    for (v, &c) in vs.iter().zip(w) {
        if c != 0.0 {
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
    }
    out
}

/// Remove near-duplicate points (Euclidean distance below `tol`).
pub fn dedup_points(points: Vec<Vector>, tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| norm2(&sub(&p, q)) <= tol) {
            out.push(p);
        }
    }
    out
}

/// Remove directions that duplicate an earlier one (cosine above 1 - 1e-12).
pub fn dedup_directions(dirs: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(dirs.len());
    for d in dirs {
        if !out.iter().any(|e| cosine(&d, e) > 1.0 - 1e-12) {
            out.push(d);
        }
    }
    out
}
