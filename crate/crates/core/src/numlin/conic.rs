use serde::Serialize;

use super::{check_dim, combo, neg, norm2, scale, LinearProgram, PolyhedralCone, Polytope, RelOp, Sense, Vector};
use crate::{Result, TAU_GEOM};

/// The closed convex cone `{sum mu_i p_i + sum nu_j r_j : mu, nu >= 0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicPiece {
    pub apex: Vec<Vector>,
    pub recession: Vec<Vector>,
}

impl ConicPiece {
    pub fn new(apex: Vec<Vector>, recession: Vec<Vector>) -> Self {
        ConicPiece { apex, recession }
    }

    pub fn dim(&self) -> usize {
        self.apex.first().or(self.recession.first()).map_or(0, |v| v.len())
    }

    /// All nonzero generating directions.
    pub fn directions(&self) -> Vec<Vector> {
        self.apex.iter().chain(&self.recession).filter(|v| norm2(v) > TAU_GEOM).cloned().collect()
    }

    /// The piece as a polyhedral cone; `None` when it is `{0}`.
    pub fn as_cone(&self, norm: super::Norm) -> Option<Result<PolyhedralCone>> {
        let dirs = self.directions();
        (!dirs.is_empty()).then(|| PolyhedralCone::new(dirs, norm))
    }
}

/// A finite union of closed conic pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedConicUnion {
    pub pieces: Vec<ConicPiece>,
}

/// `cl cone(P + C)` as a single piece.
pub fn closed_conic_hull_of_polytope_plus_cone(p: &Polytope, c: &PolyhedralCone) -> Result<ConicPiece> {
    if p.dim() != c.dim() {
        return Err(crate::Error::DimensionMismatch { expected: c.dim(), got: p.dim() });
    }
    Ok(ConicPiece::new(p.vertices().to_vec(), c.generators().to_vec()))
}

/// LP feasibility of `y` in the piece.
pub fn piece_member(y: &[f64], piece: &ConicPiece) -> Result<bool> {
    let dim = piece.dim();
    check_dim(dim, y)?;
    let gens: Vec<&Vector> = piece.apex.iter().chain(&piece.recession).collect();
    if gens.is_empty() {
        return Ok(norm2(y) <= TAU_GEOM);
    }
    let k = gens.len();
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k).objective(&vec![0.0; k], Sense::Min);
    for i in 0..dim {
        lp.add(gens.iter().map(|g| g[i]).collect(), RelOp::Eq, y[i])?;
    }
    Ok(lp.solve()?.is_feasible())
}

/// A nonzero point of `piece ∩ (-C)`, if any.
///
/// The LP normalizes the `-C` coefficients to sum to one, which rules out
/// the zero solution for pointed `C`. The witness is then rescaled so that
/// its apex coefficients sum to one when they are not all zero.
pub fn meets_neg_cone(piece: &ConicPiece, c: &PolyhedralCone) -> Result<Option<Vector>> {
    let dim = c.dim();
    let nonzero = |vs: &[Vector]| vs.iter().filter(|v| norm2(v) > TAU_GEOM).cloned().collect::<Vec<_>>();
    let piece = &ConicPiece::new(nonzero(&piece.apex), nonzero(&piece.recession));
    let (na, nr, ng) = (piece.apex.len(), piece.recession.len(), c.generators().len());
    let k = na + nr + ng;
    if na + nr == 0 {
        return Ok(None);
    }
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k);
    for i in 0..dim {
        let mut row = Vec::with_capacity(k);
        row.extend(piece.apex.iter().map(|p| p[i]));
        row.extend(piece.recession.iter().map(|r| r[i]));
        row.extend(c.generators().iter().map(|g| g[i]));
        lp.add(row, RelOp::Eq, 0.0)?;
    }
    let mut norm_row = vec![0.0; k];
    for v in norm_row.iter_mut().skip(na + nr) {
        *v = 1.0;
    }
    lp.add(norm_row, RelOp::Eq, 1.0)?;
    // Prefer witnesses built from apex points: maximize the apex weight.
    let mut obj = vec![0.0; k];
    for v in obj.iter_mut().take(na) {
        *v = 1.0;
    }
    lp.objective(&obj, Sense::Max);
    let out = lp.solve()?;
    let x = match out {
        super::LpOutcome::Optimal { x, .. } => x,
        super::LpOutcome::Unbounded => {
            // Unbounded apex weight: rerun as a pure feasibility problem.
            lp.objective(&vec![0.0; k], Sense::Min);
            match lp.solve()? {
                super::LpOutcome::Optimal { x, .. } => x,
                _ => return Ok(None),
            }
        }
        super::LpOutcome::Infeasible => return Ok(None),
    };
    let y = neg(&combo(c.generators(), &x[na + nr..], dim));
    let apex_sum: f64 = x[..na].iter().sum();
    let y = if apex_sum > 1e-9 { scale(&y, 1.0 / apex_sum) } else { y };
    Ok(Some(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::Norm;

    #[test]
    fn single_translated_cone() {
        let c = PolyhedralCone::orthant(2, Norm::L2);
        let p = Polytope::point(vec![1.0, 0.0]);
        let piece = closed_conic_hull_of_polytope_plus_cone(&p, &c).unwrap();
        assert_eq!(piece.apex, vec![vec![1.0, 0.0]]);
        assert_eq!(piece.recession.len(), 2);
    }

    #[test]
    fn membership_examples() {
        let c = PolyhedralCone::orthant(2, Norm::L2);
        let piece = closed_conic_hull_of_polytope_plus_cone(&Polytope::point(vec![-1.0, 1.0]), &c).unwrap();
        assert!(!piece_member(&[-1.0, 0.0], &piece).unwrap());
        assert!(piece_member(&[0.0, 0.0], &piece).unwrap());
        let p2 = ConicPiece::new(vec![vec![1.0, 0.0]], vec![vec![0.0, 1.0]]);
        assert!(piece_member(&[2.0, 2.0], &p2).unwrap());
    }

    #[test]
    fn segment_plus_diagonal_ray() {
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let seg = Polytope::new(vec![vec![-1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let piece = closed_conic_hull_of_polytope_plus_cone(&seg, &c).unwrap();
        assert!(piece_member(&[-1.0, 0.0], &piece).unwrap());
        assert!(!piece_member(&[-2.0, -1.0], &piece).unwrap());
    }

    #[test]
    fn negative_cone_witness_is_rescaled_to_apex_point() {
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let piece = ConicPiece::new(vec![vec![-1.0, -1.0], vec![0.0, -1.0]], vec![]);
        let y = meets_neg_cone(&piece, &c).unwrap().unwrap();
        assert!((y[0] + 1.0).abs() < 1e-9 && (y[1] + 1.0).abs() < 1e-9);
        let clear = ConicPiece::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![]);
        assert!(meets_neg_cone(&clear, &c).unwrap().is_none());
    }
}
