//! The sublinear scalarization `g(x) = f(x - x0) + alpha ||x - x0||` and the
//! certificate searches built on it.

use serde::Serialize;

use crate::augdual::{augmented_alpha_bound, positive_functionals, AugmentedFunctional, ClassTag};
use crate::efficiency::{benson_cone, in_polytope_plus_cone, is_benson, FeasibleSet, Verdict};
use crate::numlin::{
    add, affine_independent, combo, dot, hull_contains, least_squares, norm2, orthonormal_basis, scale, sub,
    LinearProgram, LpOutcome, Norm, PolyhedralCone, RelOp, Sense, Space, Vector,
};
use crate::separation::{ssp_check_sections, ssp_witness_sections, vee_set_union, wedge_set, SphereSection, SspVerdict};
use crate::{Error, Result, TAU_GEOM};

/// Default number of candidates tried by the certificate searches.
pub const DEFAULT_BUDGET: usize = 64;

/// `min_{x in A} f(x - x0) + alpha ||x - x0||`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarProblem {
    pub fa: AugmentedFunctional,
    pub x0: Vector,
    pub a: FeasibleSet,
    pub space: Space,
}

impl ScalarProblem {
    /// Requires `(f, alpha)` in the strict augmented dual cone and `x0 in A`.
    pub fn new(fa: AugmentedFunctional, x0: Vector, a: FeasibleSet, space: Space) -> Result<Self> {
        space.check(&fa.f)?;
        space.check(&x0)?;
        if fa.class_tag != ClassTag::ASharpPlus {
            return Err(Error::InvalidInput(format!("scalarization needs an a#+ pair, got {:?}", fa.class_tag)));
        }
        a.require_member(&x0)?;
        Ok(ScalarProblem { fa, x0, a, space })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalarSolution {
    pub min_value: f64,
    /// `(block index, minimizer)` for each block attaining the minimum.
    pub minimizers: Vec<(usize, Vector)>,
    /// Minimum of each block.
    pub block_minima: Vec<f64>,
    /// Infimum of `g` away from `x0`: over blocks not containing `x0`, and over
    /// the faces of the other blocks that avoid `x0`.
    pub x0_free_min: f64,
    pub unique_at_x0: bool,
}

pub fn g_eval(fa: &AugmentedFunctional, x0: &[f64], x: &[f64], space: &Space) -> Result<f64> {
    space.check(x0)?;
    space.check(x)?;
    let w = sub(x, x0);
    Ok(dot(&fa.f, &w) + fa.alpha * space.norm.of(&w))
}

fn phi(f: &[f64], alpha: f64, w: &[f64], norm: Norm) -> f64 {
    dot(f, w) + alpha * norm.of(w)
}

fn subsets(m: usize, max: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << m)).filter(|s| (s.count_ones() as usize) <= max).map(|s| (0..m).filter(|i| s & (1 << i) != 0).collect()).collect()
}

/// Minimum of `f . w + alpha ||w||_2` over `conv(pts)` among stationary points
/// on the affine hulls of affinely independent subsets.
fn l2_min(pts: &[Vector], f: &[f64], alpha: f64, include_origin: bool) -> (f64, Vector) {
    let n = f.len();
    let mut best = (f64::INFINITY, pts[0].clone());
    let mut consider = |w: Vector| {
        let v = phi(f, alpha, &w, Norm::L2);
        if v < best.0 {
            best = (v, w);
        }
    };
    if include_origin {
        consider(vec![0.0; n]);
    }
    for s in subsets(pts.len(), n + 1) {
        let sp: Vec<Vector> = s.iter().map(|&i| pts[i].clone()).collect();
        if sp.len() == 1 {
            consider(sp[0].clone());
            continue;
        }
        if !affine_independent(&sp) {
            continue;
        }
        let dirs: Vec<Vector> = sp[1..].iter().map(|p| sub(p, &sp[0])).collect();
        let u = orthonormal_basis(&dirs, n);
        let coef: Vec<f64> = u.iter().map(|b| dot(&sp[0], b)).collect();
        let perp = sub(&sp[0], &combo(&u, &coef, n));
        let s_vec: Vec<f64> = u.iter().map(|b| dot(f, b) / alpha).collect();
        let s2 = dot(&s_vec, &s_vec);
        let rp = norm2(&perp);
        if s2 >= 1.0 || rp < 1e-14 {
            continue;
        }
        let r = rp / (1.0 - s2).sqrt();
        let w = sub(&perp, &scale(&combo(&u, &s_vec, n), r));
        // Barycentric coordinates in the simplex.
        let cols: Vec<Vector> = sp.iter().map(|p| {
            let mut c = p.clone();
            c.push(1.0);
            c
        }).collect();
        let mut target = w.clone();
        target.push(1.0);
        if let Some(lam) = least_squares(&cols, &target) {
            if lam.iter().all(|&l| l >= -1e-12) {
                consider(w);
            }
        }
    }
    best
}

/// Exact minimum of `f . w + alpha ||w||` over `conv(pts)` for a polyhedral norm.
fn lp_min(pts: &[Vector], f: &[f64], alpha: f64, norm: Norm) -> Result<(f64, Vector)> {
    let n = f.len();
    let m = pts.len();
    let extra = if norm == Norm::Linf { 1 } else { n };
    let k = m + extra;
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k);
    let mut obj: Vec<f64> = pts.iter().map(|p| dot(f, p)).collect();
    obj.extend(std::iter::repeat_n(alpha, extra));
    lp.objective(&obj, Sense::Min);
    lp.add_sparse(&(0..m).map(|j| (j, 1.0)).collect::<Vec<_>>(), RelOp::Eq, 1.0);
    for i in 0..n {
        let t = if norm == Norm::Linf { m } else { m + i };
        let mut row: Vec<(usize, f64)> = (0..m).map(|j| (j, pts[j][i])).collect();
        row.push((t, -1.0));
        lp.add_sparse(&row, RelOp::Le, 0.0);
        let mut row: Vec<(usize, f64)> = (0..m).map(|j| (j, pts[j][i])).collect();
        row.push((t, 1.0));
        lp.add_sparse(&row, RelOp::Ge, 0.0);
    }
    match lp.solve()? {
        LpOutcome::Optimal { x, .. } => {
            let w = combo(pts, &x[..m], n);
            Ok((phi(f, alpha, &w, norm), w))
        }
        _ => Err(Error::NumericalFailure("scalarization LP not optimal".into())),
    }
}

/// Minimum of `f . w + alpha ||w||` over `conv(pts)`.
pub fn hull_min(pts: &[Vector], f: &[f64], alpha: f64, norm: Norm) -> Result<(f64, Vector)> {
    if norm == Norm::L2 {
        let origin = hull_contains(pts, &vec![0.0; f.len()])?;
        Ok(l2_min(pts, f, alpha, origin))
    } else {
        lp_min(pts, f, alpha, norm)
    }
}

/// Minimum over the faces of `conv(pts)` that avoid the origin.
fn origin_free_min(pts: &[Vector], f: &[f64], alpha: f64, norm: Norm) -> Result<f64> {
    let n = f.len();
    let zero = vec![0.0; n];
    let mut best = f64::INFINITY;
    for s in subsets(pts.len(), n + 1) {
        let sp: Vec<Vector> = s.iter().map(|&i| pts[i].clone()).collect();
        if !affine_independent(&sp) || hull_contains(&sp, &zero)? {
            continue;
        }
        best = best.min(hull_min(&sp, f, alpha, norm)?.0);
    }
    Ok(best)
}

pub fn minimize_g(problem: &ScalarProblem) -> Result<ScalarSolution> {
    let ScalarProblem { fa, x0, a, space } = problem;
    let norm = space.norm;
    let mut block_minima = Vec::with_capacity(a.blocks.len());
    let mut points = Vec::with_capacity(a.blocks.len());
    let mut x0_free_min = f64::INFINITY;
    for block in &a.blocks {
        let w: Vec<Vector> = block.vertices().iter().map(|v| sub(v, x0)).collect();
        let (v, p) = hull_min(&w, &fa.f, fa.alpha, norm)?;
        block_minima.push(v);
        points.push(add(&p, x0));
        if block.contains(x0)? {
            x0_free_min = x0_free_min.min(origin_free_min(&w, &fa.f, fa.alpha, norm)?);
        } else {
            x0_free_min = x0_free_min.min(v);
        }
    }
    let min_value = block_minima.iter().copied().fold(f64::INFINITY, f64::min);
    let minimizers = block_minima
        .iter()
        .zip(points)
        .enumerate()
        .filter(|(_, (v, _))| **v <= min_value + TAU_GEOM)
        .map(|(i, (_, p))| (i, p))
        .collect();
    let unique_at_x0 = min_value >= -TAU_GEOM && x0_free_min > TAU_GEOM;
    Ok(ScalarSolution { min_value, minimizers, block_minima, x0_free_min, unique_at_x0 })
}

/// A validated scalarization certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScalarCertificate {
    pub f: Vector,
    pub alpha: f64,
    pub source: CandidateSource,
    pub solution: ScalarSolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CandidateSource {
    SspWitness,
    SeparationLp,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "camelCase")]
pub enum CertifyOutcome {
    Certificate(ScalarCertificate),
    Refuted { witness: Vector },
    Exhausted { tried: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certification {
    pub outcome: CertifyOutcome,
    /// SSP of `(-C, cl cone(A + C - x0))`, when it could be evaluated.
    pub ssp: Option<SspVerdict>,
}

impl Certification {
    pub fn certificate(&self) -> Option<&ScalarCertificate> {
        match &self.outcome {
            CertifyOutcome::Certificate(c) => Some(c),
            _ => None,
        }
    }
}

/// Sphere sections of `-C` and of the union of conic pieces, or `None` when
/// some piece is the whole space.
pub(crate) fn piece_sections(
    c: &PolyhedralCone,
    pieces: &[Vec<Vector>],
    space: &Space,
) -> Result<Option<(SphereSection, SphereSection, Vec<PolyhedralCone>)>> {
    let mut cones = Vec::new();
    for dirs in pieces {
        if dirs.is_empty() {
            continue;
        }
        match PolyhedralCone::new(dirs.clone(), space.norm) {
            Ok(k) => cones.push(k),
            Err(Error::InvalidInput(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    let wedge = wedge_set(&c.neg().with_norm(space.norm), space)?;
    let vee = vee_set_union(&cones, space)?;
    Ok(Some((wedge, vee, cones)))
}

/// `(f, alpha)` maximizing the margin `s` of
/// `f(c) - alpha >= s` on unit points of `C` and `f(k) + alpha >= s` on unit
/// points of each piece.
pub(crate) fn separation_lp_candidate(
    c: &PolyhedralCone,
    cones: &[PolyhedralCone],
    space: &Space,
) -> Result<Option<(Vector, f64)>> {
    let n = space.dim;
    let c_pts = wedge_set(&c.with_norm(space.norm), space)?.points();
    let mut k_pts = Vec::new();
    for k in cones {
        k_pts.extend(wedge_set(k, space)?.points());
    }
    // Variables: f (n, free in [-1, 1]), alpha >= 0, s free.
    let mut lp = LinearProgram::new(n + 2);
    lp.nonneg(n..n + 1);
    let mut obj = vec![0.0; n + 2];
    obj[n + 1] = 1.0;
    lp.objective(&obj, Sense::Max);
    for i in 0..n {
        lp.add_sparse(&[(i, 1.0)], RelOp::Le, 1.0);
        lp.add_sparse(&[(i, 1.0)], RelOp::Ge, -1.0);
    }
    lp.add_sparse(&[(n, 1.0), (n + 1, -1.0)], RelOp::Ge, 0.0);
    for p in &c_pts {
        let mut row: Vec<(usize, f64)> = (0..n).map(|i| (i, p[i])).collect();
        row.push((n, -1.0));
        row.push((n + 1, -1.0));
        lp.add_sparse(&row, RelOp::Ge, 0.0);
    }
    for p in &k_pts {
        let mut row: Vec<(usize, f64)> = (0..n).map(|i| (i, p[i])).collect();
        row.push((n, 1.0));
        row.push((n + 1, -1.0));
        lp.add_sparse(&row, RelOp::Ge, 0.0);
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal { value, x } if value > TAU_GEOM => Some((x[..n].to_vec(), x[n])),
        _ => None,
    })
}

pub(crate) fn validate(
    c: &PolyhedralCone,
    a: &FeasibleSet,
    x0: &[f64],
    space: &Space,
    f: Vector,
    alpha: f64,
    source: CandidateSource,
) -> Result<Option<ScalarCertificate>> {
    let fa = match AugmentedFunctional::new(c, f, alpha, space) {
        Ok(fa) if fa.is_strict() => fa,
        Ok(_) | Err(Error::AlphaOutOfRange { .. }) | Err(Error::NotStrictlyPositive) => return Ok(None),
        Err(e) => return Err(e),
    };
    let problem = ScalarProblem::new(fa.clone(), x0.to_vec(), a.clone(), *space)?;
    let solution = minimize_g(&problem)?;
    Ok(solution.unique_at_x0.then_some(ScalarCertificate { f: fa.f, alpha: fa.alpha, source, solution }))
}

/// Outcome of a candidate search: the accepted value, candidates tried and
/// the SSP verdict of `(-C, union of pieces)` when it could be evaluated.
pub(crate) struct Search<T> {
    pub found: Option<T>,
    pub tried: usize,
    pub ssp: Option<SspVerdict>,
}

/// Candidate pairs in order: the SSP witness, the separation LP, then seeded
/// strictly positive functionals with `alpha = alpha_max / 2`.
pub(crate) fn search_candidates<T>(
    c: &PolyhedralCone,
    pieces: &[Vec<Vector>],
    space: &Space,
    budget: usize,
    seed: u64,
    mut accept: impl FnMut(Vector, f64, CandidateSource) -> Result<Option<T>>,
) -> Result<Search<T>> {
    let mut tried = 0;
    let mut ssp = None;
    if let Some((wedge, vee, cones)) = piece_sections(c, pieces, space)? {
        let verdict = ssp_check_sections(&wedge, &vee);
        let holds = verdict.holds;
        ssp = Some(verdict);
        if holds && tried < budget {
            if let Ok(w) = ssp_witness_sections(&wedge, &vee) {
                tried += 1;
                let f = scale(&w.f, -1.0);
                let amax = augmented_alpha_bound(c, &f, space).unwrap_or(0.0);
                let alpha = (0.5 * (w.delta1 + w.delta2)).min(0.5 * amax);
                if let Some(t) = accept(f, alpha, CandidateSource::SspWitness)? {
                    return Ok(Search { found: Some(t), tried, ssp });
                }
            }
        }
        if tried < budget {
            if let Some((f, alpha)) = separation_lp_candidate(c, &cones, space)? {
                tried += 1;
                if let Some(t) = accept(f, alpha, CandidateSource::SeparationLp)? {
                    return Ok(Search { found: Some(t), tried, ssp });
                }
            }
        }
    }
    if tried < budget {
        for f in positive_functionals(c, budget - tried, seed)? {
            tried += 1;
            let amax = augmented_alpha_bound(c, &f, space)?;
            if let Some(t) = accept(f, amax / 2.0, CandidateSource::Random)? {
                return Ok(Search { found: Some(t), tried, ssp });
            }
        }
    }
    Ok(Search { found: None, tried, ssp })
}

/// Search a pair `(f, alpha)` whose scalarization is minimized only at `x0`.
pub fn certify_benson(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    x0: &[f64],
    space: &Space,
    budget: usize,
    seed: u64,
) -> Result<Certification> {
    let c = &c.with_norm(space.norm);
    if let Verdict::No(witness) = is_benson(a, c, x0)? {
        return Ok(Certification { outcome: CertifyOutcome::Refuted { witness }, ssp: None });
    }
    let pieces: Vec<Vec<Vector>> = benson_cone(a, c, x0).pieces.iter().map(|p| p.directions()).collect();
    let search = search_candidates(c, &pieces, space, budget, seed, |f, alpha, source| {
        validate(c, a, x0, space, f, alpha, source)
    })?;
    let outcome = match search.found {
        Some(cert) => CertifyOutcome::Certificate(cert),
        None => CertifyOutcome::Exhausted { tried: search.tried },
    };
    Ok(Certification { outcome, ssp: search.ssp })
}

/// Generalized Henig certificate; requires `A + C` convex (a single block).
pub fn certify_ghe(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    x0: &[f64],
    space: &Space,
    budget: usize,
    seed: u64,
) -> Result<Certification> {
    if !a.is_convex_block() {
        return Err(Error::NotConvexData);
    }
    certify_benson(a, c, x0, space, budget, seed)
}

/// Checks that `A + C` is starshaped at `x0` on a grid of segment points.
pub fn starshaped_violation(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<Option<Vector>> {
    if a.is_convex_block() {
        return Ok(None);
    }
    for v in a.vertices() {
        for k in 1..8 {
            let t = k as f64 / 8.0;
            let p = add(&scale(v, t), &scale(x0, 1.0 - t));
            let mut inside = false;
            for b in &a.blocks {
                if in_polytope_plus_cone(b, c, &p)? {
                    inside = true;
                    break;
                }
            }
            if !inside {
                return Ok(Some(p));
            }
        }
    }
    Ok(None)
}

/// Tangential Borwein certificate; requires `A + C` starshaped at `x0`.
pub fn certify_tbo(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    x0: &[f64],
    space: &Space,
    budget: usize,
    seed: u64,
) -> Result<Certification> {
    a.require_member(x0)?;
    if let Some(p) = starshaped_violation(a, c, x0)? {
        return Err(Error::NotStarshaped(p));
    }
    certify_benson(a, c, x0, space, budget, seed)
}
