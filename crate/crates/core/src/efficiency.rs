//! Tri-state classifiers for Min and the proper-efficiency notions.
//!
//! On the data handled here (finite unions of polytopes, polyhedral pointed
//! `C`) several notions coincide: the Borwein, Benson, super, Hartley, Henig
//! and generalized Henig notions all reduce to "no piece of
//! `cl cone(A - x0)` meets `-C \ {0}`", and positive efficiency equals
//! Hurwicz efficiency. The classifiers still compute each notion from its
//! own characterization so that the harness can check the inclusions.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::augdual::{base_from_functional, hartley_cone_member, henig_dilation, positive_functionals, HenigDilation};
use crate::numlin::{
    add, check_dim, combo, dist_to_cone, dot, meets_neg_cone, norm2, scale, sub, ClosedConicUnion, ConicPiece,
    LinearProgram, LpOutcome, Norm, PolyhedralCone, Polytope, RelOp, Sense, Space, Vector,
};
use crate::{Error, Result, TAU_GEOM};

/// The set `A`: a finite union of polytopes (points are one-vertex blocks).
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    pub blocks: Vec<Polytope>,
}

impl FeasibleSet {
    pub fn new(blocks: Vec<Polytope>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::InvalidInput("feasible set needs at least one block".into()));
        };
        let dim = first.dim();
        for b in &blocks {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: b.dim() });
            }
        }
        Ok(FeasibleSet { blocks })
    }

    pub fn from_points(points: Vec<Vector>) -> Result<Self> {
        FeasibleSet::new(points.into_iter().map(Polytope::point).collect())
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn is_convex_block(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        check_dim(self.dim(), x)?;
        for b in &self.blocks {
            if b.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn require_member(&self, x: &[f64]) -> Result<()> {
        if self.contains(x)? {
            Ok(())
        } else {
            Err(Error::PointNotInSet)
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vector> {
        self.blocks.iter().flat_map(|b| b.vertices())
    }
}

/// The notions decided by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Notion {
    Min,
    Pos,
    Hu,
    Be,
    Ha,
    Bo,
    GHe,
    He,
    SE,
    TBo,
}

impl Notion {
    pub const ALL: [Notion; 10] = [
        Notion::Min,
        Notion::Pos,
        Notion::Hu,
        Notion::Be,
        Notion::Ha,
        Notion::Bo,
        Notion::GHe,
        Notion::He,
        Notion::SE,
        Notion::TBo,
    ];

    pub fn parse(s: &str) -> Option<Notion> {
        Notion::ALL.into_iter().find(|n| n.to_string() == s)
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Data that lets an independent checker confirm a positive verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Certificate {
    /// Per block, the largest total cone weight of a dominating point (zero).
    Dominance { maxima: Vec<f64> },
    /// Per conic piece, `h` with `h >= 0` on the piece and `h(g) >= 1` on `C`.
    Separating { functionals: Vec<Vector> },
    /// `f` strictly positive on `C` and minimized over `A` at `x0`.
    Positive { f: Vector },
    /// The Hartley cone `C(eps)` parameter.
    Hartley { eps: f64 },
    /// The base `{f = 1}` and dilation radius of a Henig dilation.
    Henig { f: Vector, eta: f64 },
    /// `cl cone(A - x0) ∩ (B_X - C)` lies in the ball of radius `rho`.
    Super { rho: f64, functionals: Vec<Vector> },
    /// A scalarization pair whose minimum over the set is attained only at `x0`.
    Scalarization { f: Vector, alpha: f64 },
    /// Minimum of the scalarization over the set is nonnegative.
    Bound { f: Vector, alpha: f64, min_value: f64 },
}

/// Tri-state outcome. `No` carries a vector in the forbidden intersection
/// (for Min, a dominating point of `A`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Verdict {
    Yes(Certificate),
    No(Vector),
    Unknown(String),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Search breadth for the Henig classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HenigSearch {
    pub functionals: usize,
    pub etas: usize,
    pub seed: u64,
}

impl Default for HenigSearch {
    fn default() -> Self {
        HenigSearch { functionals: 5, etas: 12, seed: 0 }
    }
}

fn pointed(c: &PolyhedralCone) -> Result<()> {
    c.require_pointed()
}

fn prepare(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<()> {
    check_dim(c.dim(), x0)?;
    if a.dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), got: a.dim() });
    }
    pointed(c)?;
    a.require_member(x0)
}

/// Min: no point of `A` other than `x0` lies in `x0 - C`.
pub fn is_min(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    let n = c.dim();
    let gens = c.generators();
    let mut maxima = Vec::with_capacity(a.blocks.len());
    for block in &a.blocks {
        let vs = block.vertices();
        let (nv, ng) = (vs.len(), gens.len());
        // x = sum w_j v_j, x0 - x = sum k_i g_i; maximize sum k_i.
        let mut lp = LinearProgram::new(nv + ng);
        lp.nonneg(0..nv + ng);
        let mut obj = vec![0.0; nv + ng];
        obj[nv..].iter_mut().for_each(|v| *v = 1.0);
        lp.objective(&obj, Sense::Max);
        lp.add_sparse(&(0..nv).map(|j| (j, 1.0)).collect::<Vec<_>>(), RelOp::Eq, 1.0);
        for i in 0..n {
            let mut row: Vec<(usize, f64)> = (0..nv).map(|j| (j, vs[j][i])).collect();
            row.extend((0..ng).map(|k| (nv + k, gens[k][i])));
            lp.add_sparse(&row, RelOp::Eq, x0[i]);
        }
        match lp.solve()? {
            LpOutcome::Optimal { value, x } => {
                if value > TAU_GEOM {
                    return Ok(Verdict::No(combo(vs, &x[..nv], n)));
                }
                maxima.push(value.max(0.0));
            }
            LpOutcome::Infeasible => maxima.push(0.0),
            LpOutcome::Unbounded => return Err(Error::NumericalFailure("dominance LP unbounded".into())),
        }
    }
    Ok(Verdict::Yes(Certificate::Dominance { maxima }))
}

fn shifted(block: &Polytope, x0: &[f64]) -> Vec<Vector> {
    block.vertices().iter().map(|v| sub(v, x0)).collect()
}

/// `cl cone(A + C - x0)` as one piece per block.
pub fn benson_cone(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> ClosedConicUnion {
    ClosedConicUnion {
        pieces: a.blocks.iter().map(|b| ConicPiece::new(shifted(b, x0), c.generators().to_vec())).collect(),
    }
}

/// `cl cone(A - x0)` as one piece per block.
pub fn borwein_cone(a: &FeasibleSet, x0: &[f64]) -> ClosedConicUnion {
    ClosedConicUnion { pieces: a.blocks.iter().map(|b| ConicPiece::new(shifted(b, x0), vec![])).collect() }
}

/// `cl co cone((A - x0) ∪ C)` as a single piece.
pub fn hurwicz_cone(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> ClosedConicUnion {
    let apex = a.vertices().map(|v| sub(v, x0)).collect();
    ClosedConicUnion { pieces: vec![ConicPiece::new(apex, c.generators().to_vec())] }
}

/// The contingent cone `T(A + C, x0)`: pieces of the blocks active at `x0`.
pub fn tbo_cone(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<ClosedConicUnion> {
    let mut pieces = Vec::new();
    for b in &a.blocks {
        let piece = ConicPiece::new(shifted(b, x0), c.generators().to_vec());
        if in_polytope_plus_cone(b, c, x0)? {
            pieces.push(piece);
        }
    }
    Ok(ClosedConicUnion { pieces })
}

/// LP test of `y in P + C`.
pub fn in_polytope_plus_cone(p: &Polytope, c: &PolyhedralCone, y: &[f64]) -> Result<bool> {
    let vs = p.vertices();
    let gens = c.generators();
    let (nv, ng) = (vs.len(), gens.len());
    let mut lp = LinearProgram::new(nv + ng);
    lp.nonneg(0..nv + ng).objective(&vec![0.0; nv + ng], Sense::Min);
    lp.add_sparse(&(0..nv).map(|j| (j, 1.0)).collect::<Vec<_>>(), RelOp::Eq, 1.0);
    for i in 0..y.len() {
        let mut row: Vec<(usize, f64)> = (0..nv).map(|j| (j, vs[j][i])).collect();
        row.extend((0..ng).map(|k| (nv + k, gens[k][i])));
        lp.add_sparse(&row, RelOp::Eq, y[i]);
    }
    Ok(lp.solve()?.is_feasible())
}

/// `h` with `h >= 0` on the piece and `h(g) >= 1` on every generator of `C`.
fn separating_functional(piece: &ConicPiece, c: &PolyhedralCone) -> Result<Option<Vector>> {
    let n = c.dim();
    let mut lp = LinearProgram::new(2 * n);
    lp.nonneg(n..2 * n);
    let mut obj = vec![0.0; 2 * n];
    obj[n..].iter_mut().for_each(|v| *v = 1.0);
    lp.objective(&obj, Sense::Min);
    for i in 0..n {
        lp.add_sparse(&[(i, 1.0), (n + i, -1.0)], RelOp::Le, 0.0);
        lp.add_sparse(&[(i, 1.0), (n + i, 1.0)], RelOp::Ge, 0.0);
    }
    for p in piece.directions() {
        let row: Vec<(usize, f64)> = (0..n).map(|i| (i, p[i])).collect();
        lp.add_sparse(&row, RelOp::Ge, 0.0);
    }
    for g in c.generators() {
        let row: Vec<(usize, f64)> = (0..n).map(|i| (i, g[i])).collect();
        lp.add_sparse(&row, RelOp::Ge, 1.0);
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal { x, .. } => Some(x[..n].to_vec()),
        _ => None,
    })
}

/// Decide whether every piece meets `-C` only at the origin.
pub fn separate_pieces(union: &ClosedConicUnion, c: &PolyhedralCone) -> Result<Verdict> {
    let mut functionals = Vec::with_capacity(union.pieces.len());
    for piece in &union.pieces {
        match separating_functional(piece, c)? {
            Some(h) => functionals.push(h),
            None => {
                return Ok(match meets_neg_cone(piece, c)? {
                    Some(y) => Verdict::No(y),
                    None => Verdict::Unknown("separation LP infeasible but no intersection point found".into()),
                })
            }
        }
    }
    Ok(Verdict::Yes(Certificate::Separating { functionals }))
}

/// Check a separating certificate against a union and a cone.
pub fn verify_separating(functionals: &[Vector], union: &ClosedConicUnion, c: &PolyhedralCone) -> bool {
    functionals.len() == union.pieces.len()
        && functionals.iter().zip(&union.pieces).all(|(h, piece)| {
            piece.directions().iter().all(|p| dot(h, p) >= -1e-7 * norm2(p).max(1.0))
                && c.generators().iter().all(|g| dot(h, g) > 0.5)
        })
}

pub fn is_benson(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    separate_pieces(&benson_cone(a, c, x0), c)
}

pub fn is_borwein(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    separate_pieces(&borwein_cone(a, x0), c)
}

pub fn is_hurwicz(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    separate_pieces(&hurwicz_cone(a, c, x0), c)
}

pub fn is_tbo(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    separate_pieces(&tbo_cone(a, c, x0)?, c)
}

/// Pos: some `f in C^#` attains its infimum over `A` at `x0`.
pub fn is_pos(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    let hu = hurwicz_cone(a, c, x0);
    Ok(match separate_pieces(&hu, c)? {
        Verdict::Yes(Certificate::Separating { functionals }) => Verdict::Yes(Certificate::Positive { f: functionals[0].clone() }),
        other => other,
    })
}

/// SE: bounded intersection of `cl cone(A - x0)` with `B_X - C`.
pub fn is_super(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], space: &Space) -> Result<Verdict> {
    prepare(a, c, x0)?;
    let bo = borwein_cone(a, x0);
    let functionals = match separate_pieces(&bo, c)? {
        Verdict::Yes(Certificate::Separating { functionals }) => functionals,
        other => return Ok(other),
    };
    let n = c.dim();
    let mut m: f64 = 0.0;
    for piece in &bo.pieces {
        let dirs = piece.directions();
        if dirs.is_empty() {
            continue;
        }
        // y = sum mu_j p_j = b - sum k_i g_i with b in [-1, 1]^n.
        let (np, ng) = (dirs.len(), c.generators().len());
        let k = np + ng + n;
        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut lp = LinearProgram::new(k);
                lp.nonneg(0..np + ng);
                let mut obj = vec![0.0; k];
                for j in 0..np {
                    obj[j] = sign * dirs[j][i];
                }
                lp.objective(&obj, Sense::Max);
                for r in 0..n {
                    let mut row: Vec<(usize, f64)> = (0..np).map(|j| (j, dirs[j][r])).collect();
                    row.extend((0..ng).map(|j| (np + j, c.generators()[j][r])));
                    row.push((np + ng + r, -1.0));
                    lp.add_sparse(&row, RelOp::Eq, 0.0);
                    lp.add_sparse(&[(np + ng + r, 1.0)], RelOp::Le, 1.0);
                    lp.add_sparse(&[(np + ng + r, 1.0)], RelOp::Ge, -1.0);
                }
                match lp.solve()? {
                    LpOutcome::Optimal { value, .. } => m = m.max(value),
                    LpOutcome::Unbounded => {
                        return Ok(Verdict::Unknown("bounded-section LP unbounded despite separation".into()))
                    }
                    LpOutcome::Infeasible => {}
                }
            }
        }
    }
    let constant = match space.norm {
        Norm::L1 => n as f64,
        Norm::L2 => (n as f64).sqrt(),
        Norm::Linf => 1.0,
    };
    Ok(Verdict::Yes(Certificate::Super { rho: (m * constant).max(1.0), functionals }))
}

/// Directions of `cone(P - x0)` used when a notion has no exact test on a
/// polytope block: vertices, pairwise segments and seeded convex combinations.
fn sample_block_directions(block: &Polytope, x0: &[f64], rng: &mut ChaCha8Rng) -> Vec<Vector> {
    let vs = shifted(block, x0);
    let mut out = vs.clone();
    if vs.len() > 1 {
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                for s in 1..16 {
                    let t = s as f64 / 16.0;
                    out.push(add(&scale(&vs[i], 1.0 - t), &scale(&vs[j], t)));
                }
            }
        }
        for _ in 0..64 {
            let w: Vec<f64> = (0..vs.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
            let s: f64 = w.iter().sum();
            out.push(scale(&combo(&vs, &w, x0.len()), 1.0 / s));
        }
    }
    out.into_iter().filter(|y| norm2(y) > TAU_GEOM).collect()
}

/// Ha, through Q-minimality with respect to the Hartley cone `C(eps)`.
pub fn is_hartley(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], space: &Space) -> Result<Verdict> {
    prepare(a, c, x0)?;
    if let Verdict::No(y) = separate_pieces(&borwein_cone(a, x0), c)? {
        return Ok(Verdict::No(y));
    }
    let neg = c.neg();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a);
    let mut eps_star = f64::INFINITY;
    let mut sampled = false;
    for block in &a.blocks {
        let dirs = if block.is_point() {
            shifted(block, x0).into_iter().filter(|y| norm2(y) > TAU_GEOM).collect()
        } else {
            sampled = true;
            sample_block_directions(block, x0, &mut rng)
        };
        for y in dirs {
            let dc = dist_to_cone(&y, c, space)?;
            if dc <= TAU_GEOM * norm2(&y).max(1.0) {
                continue;
            }
            let dn = dist_to_cone(&y, &neg, space)?;
            if dn <= TAU_GEOM * norm2(&y).max(1.0) {
                return Ok(Verdict::No(y));
            }
            eps_star = eps_star.min(dn / dc);
        }
    }
    if eps_star.is_infinite() {
        return Ok(Verdict::Yes(Certificate::Hartley { eps: 1.0 }));
    }
    if sampled && eps_star < 10.0 * TAU_GEOM {
        return Ok(Verdict::Unknown(format!("sampled Hartley margin {eps_star:e} too small")));
    }
    Ok(Verdict::Yes(Certificate::Hartley { eps: eps_star / 2.0 }))
}

/// A Henig dilation `V_eta(B)` for which every Borwein piece is clear.
fn find_henig_dilation(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    x0: &[f64],
    space: &Space,
    search: &HenigSearch,
) -> Result<Option<HenigDilation>> {
    let pieces: Vec<Vec<Vector>> = borwein_cone(a, x0).pieces.iter().map(|p| p.directions()).collect();
    let c_space = c.with_norm(space.norm);
    for f in positive_functionals(&c_space, search.functionals, search.seed)? {
        let base = base_from_functional(&c_space, &f)?;
        for j in 1..=search.etas {
            let eta = base.delta_b / 2f64.powi(j as i32);
            let v = henig_dilation(&base, eta, space)?;
            let mut clear = true;
            for dirs in &pieces {
                if !dirs.is_empty() && !v.cone_avoids_negative(dirs)? {
                    clear = false;
                    break;
                }
            }
            if clear {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

/// He: some Henig dilation of some base keeps `cl cone(A - x0)` off `-V`.
pub fn is_henig(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], space: &Space, search: &HenigSearch) -> Result<Verdict> {
    prepare(a, c, x0)?;
    if let Verdict::No(y) = separate_pieces(&borwein_cone(a, x0), c)? {
        return Ok(Verdict::No(y));
    }
    Ok(match find_henig_dilation(a, c, x0, space, search)? {
        Some(v) => Verdict::Yes(Certificate::Henig { f: v.base.f, eta: v.eta }),
        None => Verdict::Unknown("no Henig dilation found within the search budget".into()),
    })
}

/// GHe: equal to Be for a single block; otherwise bracketed by He and Be.
pub fn is_ghe(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], space: &Space, search: &HenigSearch) -> Result<Verdict> {
    prepare(a, c, x0)?;
    if a.is_convex_block() {
        return is_benson(a, c, x0);
    }
    if let Verdict::Yes(cert) = is_henig(a, c, x0, space, search)? {
        return Ok(Verdict::Yes(cert));
    }
    Ok(match is_benson(a, c, x0)? {
        Verdict::No(y) => Verdict::No(y),
        _ => Verdict::Unknown("multi-block set: Henig search failed and Benson holds".into()),
    })
}

/// An open cone `Q` for Q-minimality tests.
pub trait OpenCone {
    /// Strict membership of `y` in `Q`.
    fn contains(&self, y: &[f64]) -> Result<bool>;

    /// Whether `(P - x0) ∩ (-Q)` is empty for the block with shifted vertices
    /// `dirs`. `None` means undecided.
    fn block_clear(&self, dirs: &[Vector]) -> Result<Option<bool>> {
        let _ = dirs;
        Err(Error::UnsupportedQ("no polytope-block test for this cone".into()))
    }

    fn certificate(&self) -> Option<Certificate> {
        None
    }
}

/// `{x : f(x) > 0}`.
pub struct Halfspace(pub Vector);

impl OpenCone for Halfspace {
    fn contains(&self, y: &[f64]) -> Result<bool> {
        Ok(dot(&self.0, y) > TAU_GEOM * norm2(y).max(1.0))
    }

    fn block_clear(&self, dirs: &[Vector]) -> Result<Option<bool>> {
        Ok(Some(dirs.iter().all(|d| dot(&self.0, d) >= -TAU_GEOM * norm2(d).max(1.0))))
    }

    fn certificate(&self) -> Option<Certificate> {
        Some(Certificate::Positive { f: self.0.clone() })
    }
}

/// The Hartley cone `C(eps)`.
pub struct HartleyCone<'a> {
    pub cone: &'a PolyhedralCone,
    pub eps: f64,
    pub space: Space,
}

impl OpenCone for HartleyCone<'_> {
    fn contains(&self, y: &[f64]) -> Result<bool> {
        hartley_cone_member(y, self.cone, self.eps, &self.space)
    }

    fn block_clear(&self, _dirs: &[Vector]) -> Result<Option<bool>> {
        Ok(None)
    }

    fn certificate(&self) -> Option<Certificate> {
        Some(Certificate::Hartley { eps: self.eps })
    }
}

impl OpenCone for HenigDilation {
    fn contains(&self, y: &[f64]) -> Result<bool> {
        Ok(self.member(y).strict)
    }

    fn block_clear(&self, dirs: &[Vector]) -> Result<Option<bool>> {
        let dirs: Vec<Vector> = dirs.iter().filter(|d| norm2(d) > TAU_GEOM).cloned().collect();
        if dirs.is_empty() {
            return Ok(Some(true));
        }
        let d = crate::numlin::min_norm_polyhedron(self.base.polytope.vertices(), &dirs, self.base.norm)?.value;
        Ok(if d > self.eta + TAU_GEOM {
            Some(true)
        } else if d < self.eta - TAU_GEOM {
            Some(false)
        } else {
            None
        })
    }

    fn certificate(&self) -> Option<Certificate> {
        Some(Certificate::Henig { f: self.base.f.clone(), eta: self.eta })
    }
}

/// Point predicate wrapper; polytope blocks raise [`Error::UnsupportedQ`].
pub struct MembershipQ<F: Fn(&[f64]) -> bool>(pub F);

impl<F: Fn(&[f64]) -> bool> OpenCone for MembershipQ<F> {
    fn contains(&self, y: &[f64]) -> Result<bool> {
        Ok((self.0)(y))
    }
}

/// Q-minimality: `(A - x0) ∩ (-Q)` is empty.
pub fn q_min(a: &FeasibleSet, x0: &[f64], q: &dyn OpenCone) -> Result<Verdict> {
    a.require_member(x0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let mut undecided = false;
    for block in &a.blocks {
        let dirs = shifted(block, x0);
        if block.is_point() {
            let y = &dirs[0];
            if norm2(y) > TAU_GEOM && q.contains(&scale(y, -1.0))? {
                return Ok(Verdict::No(y.clone()));
            }
            continue;
        }
        let clear = q.block_clear(&dirs)?;
        if clear == Some(true) {
            continue;
        }
        let samples = sample_block_directions(block, x0, &mut rng);
        let mut hit = None;
        for y in &samples {
            if q.contains(&scale(y, -1.0))? {
                hit = Some(y.clone());
                break;
            }
        }
        match hit {
            Some(y) => return Ok(Verdict::No(y)),
            None => undecided = true,
        }
    }
    if undecided {
        return Ok(Verdict::Unknown("polytope block not decided exactly and no sampled violation".into()));
    }
    Ok(match q.certificate() {
        Some(c) => Verdict::Yes(c),
        None => Verdict::Yes(Certificate::Dominance { maxima: vec![] }),
    })
}

/// Classification of one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub point: Vector,
    pub verdicts: BTreeMap<Notion, Verdict>,
}

pub fn classify_notion(
    notion: Notion,
    a: &FeasibleSet,
    c: &PolyhedralCone,
    x0: &[f64],
    space: &Space,
    search: &HenigSearch,
) -> Result<Verdict> {
    match notion {
        Notion::Min => is_min(a, c, x0),
        Notion::Pos => is_pos(a, c, x0),
        Notion::Hu => is_hurwicz(a, c, x0),
        Notion::Be => is_benson(a, c, x0),
        Notion::Ha => is_hartley(a, c, x0, space),
        Notion::Bo => is_borwein(a, c, x0),
        Notion::GHe => is_ghe(a, c, x0, space, search),
        Notion::He => is_henig(a, c, x0, space, search),
        Notion::SE => is_super(a, c, x0, space),
        Notion::TBo => is_tbo(a, c, x0),
    }
}

pub fn classify(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    x0: &[f64],
    space: &Space,
    notions: &[Notion],
    search: &HenigSearch,
) -> Result<EfficiencyReport> {
    let mut verdicts = BTreeMap::new();
    for &n in notions {
        verdicts.insert(n, classify_notion(n, a, c, x0, space, search)?);
    }
    Ok(EfficiencyReport { point: x0.to_vec(), verdicts })
}

/// Stronger-to-weaker pairs of the inclusion chain.
pub const INCLUSIONS: [(Notion, Notion); 10] = [
    (Notion::Pos, Notion::Hu),
    (Notion::Hu, Notion::Be),
    (Notion::Be, Notion::Bo),
    (Notion::SE, Notion::Ha),
    (Notion::Ha, Notion::Be),
    (Notion::SE, Notion::GHe),
    (Notion::GHe, Notion::Be),
    (Notion::SE, Notion::He),
    (Notion::Be, Notion::Min),
    (Notion::Be, Notion::TBo),
];

/// Pairs `(stronger, weaker)` where the stronger notion is Yes and the weaker No.
pub fn chain_violations(report: &EfficiencyReport) -> Vec<(Notion, Notion)> {
    INCLUSIONS
        .iter()
        .filter(|(s, w)| {
            matches!((report.verdicts.get(s), report.verdicts.get(w)), (Some(Verdict::Yes(_)), Some(Verdict::No(_))))
        })
        .copied()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> PolyhedralCone {
        PolyhedralCone::orthant(2, Norm::L2)
    }

    fn l2() -> Space {
        Space::new(2, Norm::L2).unwrap()
    }

    fn pts(p: &[[f64; 2]]) -> FeasibleSet {
        FeasibleSet::from_points(p.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    fn three() -> FeasibleSet {
        pts(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    }

    fn segment_and_ray() -> (FeasibleSet, PolyhedralCone) {
        let seg = Polytope::new(vec![vec![-1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        (FeasibleSet::new(vec![seg]).unwrap(), PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap())
    }

    fn witness(v: &Verdict) -> Vector {
        match v {
            Verdict::No(y) => y.clone(),
            other => panic!("expected No, got {other:?}"),
        }
    }

    #[test]
    fn min_examples() {
        assert!(is_min(&three(), &q2(), &[1.0, 0.0]).unwrap().is_yes());
        let w = witness(&is_min(&three(), &q2(), &[1.0, 1.0]).unwrap());
        assert!(norm2(&sub(&w, &[1.0, 0.0])) < 1e-9 || norm2(&sub(&w, &[0.0, 1.0])) < 1e-9);
        assert!(is_min(&pts(&[[2.0, 3.0]]), &q2(), &[2.0, 3.0]).unwrap().is_yes());
        assert_eq!(is_min(&three(), &q2(), &[5.0, 5.0]), Err(Error::PointNotInSet));
    }

    #[test]
    fn benson_cone_pieces() {
        let u = benson_cone(&pts(&[[0.0, 1.0]]), &q2(), &[1.0, 0.0]);
        assert_eq!(u.pieces[0].apex, vec![vec![-1.0, 1.0]]);
        assert_eq!(u.pieces[0].recession.len(), 2);
        let (a, c) = segment_and_ray();
        let u = benson_cone(&a, &c, &[0.0, 0.0]);
        assert_eq!(u.pieces[0].apex.len(), 2);
    }

    #[test]
    fn benson_borwein_hurwicz_examples() {
        assert!(is_benson(&three(), &q2(), &[1.0, 0.0]).unwrap().is_yes());
        assert!(is_benson(&pts(&[[0.0, 0.0]]), &q2(), &[0.0, 0.0]).unwrap().is_yes());
        let two = pts(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!(is_borwein(&two, &q2(), &[1.0, 0.0]).unwrap().is_yes());
        let dom = pts(&[[1.0, 0.0], [0.0, 0.0]]);
        let w = witness(&is_borwein(&dom, &q2(), &[1.0, 0.0]).unwrap());
        assert!(w[0] < 0.0 && w[1].abs() < 1e-12);
        assert!(is_hurwicz(&two, &q2(), &[1.0, 0.0]).unwrap().is_yes());
        assert!(is_hurwicz(&dom, &q2(), &[1.0, 0.0]).unwrap().is_no());
        let (a, c) = segment_and_ray();
        assert!(is_benson(&a, &c, &[0.0, 0.0]).unwrap().is_yes());
    }

    #[test]
    fn separating_certificates_verify() {
        let a = three();
        let x0 = [1.0, 0.0];
        if let Verdict::Yes(Certificate::Separating { functionals }) = is_benson(&a, &q2(), &x0).unwrap() {
            assert!(verify_separating(&functionals, &benson_cone(&a, &q2(), &x0), &q2()));
        } else {
            panic!("expected a separating certificate");
        }
    }

    #[test]
    fn pos_examples() {
        let two = pts(&[[1.0, 0.0], [0.0, 1.0]]);
        match is_pos(&two, &q2(), &[1.0, 0.0]).unwrap() {
            Verdict::Yes(Certificate::Positive { f }) => {
                assert!(f[0] > 0.0 && f[1] > 0.0 && f[1] - f[0] >= -1e-9);
            }
            other => panic!("{other:?}"),
        }
        assert!(is_pos(&pts(&[[1.0, 0.0], [0.0, 0.0]]), &q2(), &[1.0, 0.0]).unwrap().is_no());
        assert!(is_pos(&pts(&[[3.0, 1.0]]), &q2(), &[3.0, 1.0]).unwrap().is_yes());
    }

    #[test]
    fn hartley_examples() {
        match is_hartley(&three(), &q2(), &[1.0, 0.0], &l2()).unwrap() {
            Verdict::Yes(Certificate::Hartley { eps }) => assert!((eps - 0.5).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(is_hartley(&pts(&[[1.0, 0.0], [0.0, 0.0]]), &q2(), &[1.0, 0.0], &l2()).unwrap().is_no());
        assert_eq!(
            is_hartley(&pts(&[[1.0, 1.0]]), &q2(), &[1.0, 1.0], &l2()).unwrap(),
            Verdict::Yes(Certificate::Hartley { eps: 1.0 })
        );
    }

    #[test]
    fn henig_super_ghe_tbo_examples() {
        let s = HenigSearch::default();
        let two = pts(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!(is_henig(&two, &q2(), &[1.0, 0.0], &l2(), &s).unwrap().is_yes());
        assert!(is_henig(&pts(&[[1.0, 0.0], [0.0, 0.0]]), &q2(), &[1.0, 0.0], &l2(), &s).unwrap().is_no());
        assert!(is_super(&two, &q2(), &[1.0, 0.0], &l2()).unwrap().is_yes());
        assert!(is_super(&pts(&[[1.0, 0.0], [0.0, 0.0]]), &q2(), &[1.0, 0.0], &l2()).unwrap().is_no());
        let (a, c) = segment_and_ray();
        assert!(is_ghe(&a, &c, &[0.0, 0.0], &l2(), &s).unwrap().is_yes());
        assert!(is_ghe(&two, &q2(), &[1.0, 0.0], &l2(), &s).unwrap().is_yes());
        assert!(is_tbo(&three(), &q2(), &[1.0, 0.0]).unwrap().is_yes());
        assert_eq!(tbo_cone(&three(), &q2(), &[1.0, 0.0]).unwrap().pieces.len(), 1);
        assert!(is_tbo(&a, &c, &[0.0, 0.0]).unwrap().is_yes());
    }

    #[test]
    fn q_minimality() {
        let two = pts(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!(q_min(&two, &[1.0, 0.0], &Halfspace(vec![1.0, 1.0])).unwrap().is_yes());
        let h = HartleyCone { cone: &q2(), eps: 0.5, space: l2() };
        let direct = q_min(&two, &[1.0, 0.0], &h).unwrap();
        assert!(direct.is_yes() && is_hartley(&two, &q2(), &[1.0, 0.0], &l2()).unwrap().is_yes());
        let dom = pts(&[[1.0, 0.0], [0.0, 0.0]]);
        assert!(q_min(&dom, &[1.0, 0.0], &h).unwrap().is_no());
        let (a, _) = segment_and_ray();
        let q = MembershipQ(|y: &[f64]| y[0] > 0.0);
        assert!(matches!(q_min(&a, &[0.0, 0.0], &q), Err(Error::UnsupportedQ(_))));
    }

    #[test]
    fn report_has_no_chain_violations_on_examples() {
        let r = classify(&three(), &q2(), &[1.0, 0.0], &l2(), &Notion::ALL, &HenigSearch::default()).unwrap();
        assert!(chain_violations(&r).is_empty());
        assert!(r.verdicts.values().all(|v| v.is_yes()));
    }
}
