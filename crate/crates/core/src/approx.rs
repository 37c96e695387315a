//! Approximate (D, eps) proper efficiency and approximate minimizers of the
//! scalarization.

use serde::Serialize;

use crate::augdual::{base_from_functional, henig_dilation, positive_functionals, AugmentedFunctional};
use crate::efficiency::{separate_pieces, Certificate, FeasibleSet, HenigSearch, Verdict};
use crate::numlin::{
    add, hull_contains, meets_neg_cone, norm2, scale, sub, ClosedConicUnion, ConicPiece, PolyhedralCone, Polytope,
    Space, Vector,
};
use crate::scalarize::{hull_min, minimize_g, search_candidates, validate, CandidateSource, ScalarProblem, ScalarSolution};
use crate::separation::{ssp_check_sections, wedge_set, SspVerdict};
use crate::{Error, Result, TAU_GEOM};

/// The approximation set `D`: finitely many points, or a polytope.
#[derive(Debug, Clone, PartialEq)]
pub enum ApproxSet {
    Points(Vec<Vector>),
    Polytope(Polytope),
}

impl ApproxSet {
    pub fn vertices(&self) -> &[Vector] {
        match self {
            ApproxSet::Points(p) => p,
            ApproxSet::Polytope(p) => p.vertices(),
        }
    }
}

/// `D` and `eps`, checked to lie in the family `H̄` for the cone `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSpec {
    pub d: ApproxSet,
    pub eps: f64,
}

impl ApproxSpec {
    /// Requires `0 ∉ D`, `eps >= 0` and `cl cone(D) ∩ (-C) = {0}`.
    pub fn new(d: ApproxSet, eps: f64, c: &PolyhedralCone) -> Result<ApproxSpec> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!("eps must be finite and nonnegative, got {eps}")));
        }
        let verts = d.vertices();
        if verts.is_empty() {
            return Err(Error::InvalidInput("approximation set is empty".into()));
        }
        for v in verts {
            crate::numlin::check_dim(c.dim(), v)?;
            if norm2(v) <= TAU_GEOM {
                return Err(Error::NotInHbar("D contains the origin".into()));
            }
        }
        if let ApproxSet::Polytope(p) = &d {
            if hull_contains(p.vertices(), &vec![0.0; c.dim()])? {
                return Err(Error::NotInHbar("D contains the origin".into()));
            }
        }
        if let Some(y) = meets_neg_cone(&ConicPiece::new(verts.to_vec(), vec![]), c)? {
            return Err(Error::NotInHbar(format!("cl cone(D) meets -C at {y:?}")));
        }
        Ok(ApproxSpec { d, eps })
    }
}

/// `D(eps) = eps D` for `eps > 0`, or the punctured cone over `D` at zero.
#[derive(Debug, Clone, PartialEq)]
pub enum EffectiveD {
    Scaled(ApproxSet),
    PuncturedCone(ConicPiece),
}

pub fn d_eps(spec: &ApproxSpec) -> Result<EffectiveD> {
    if spec.eps > 0.0 {
        Ok(EffectiveD::Scaled(match &spec.d {
            ApproxSet::Points(p) => ApproxSet::Points(p.iter().map(|d| scale(d, spec.eps)).collect()),
            ApproxSet::Polytope(p) => ApproxSet::Polytope(Polytope::new(p.vertices().iter().map(|d| scale(d, spec.eps)).collect())?),
        }))
    } else {
        Ok(EffectiveD::PuncturedCone(ConicPiece::new(vec![], spec.d.vertices().to_vec())))
    }
}

/// The blocks of `A + D(eps)` for `eps > 0`.
pub fn augmented_blocks(a: &FeasibleSet, spec: &ApproxSpec) -> Result<Vec<Polytope>> {
    let mut out = Vec::new();
    for b in &a.blocks {
        match &spec.d {
            ApproxSet::Points(ds) => {
                for d in ds {
                    out.push(b.translate(&scale(d, spec.eps)));
                }
            }
            ApproxSet::Polytope(p) => {
                let mut vs = Vec::new();
                for v in b.vertices() {
                    for d in p.vertices() {
                        vs.push(add(v, &scale(d, spec.eps)));
                    }
                }
                out.push(Polytope::new(vs)?);
            }
        }
    }
    Ok(out)
}

/// `cl cone(A + D(eps) - x0)` as a union of conic pieces.
pub fn approx_benson_cone(a: &FeasibleSet, spec: &ApproxSpec, x0: &[f64]) -> Result<ClosedConicUnion> {
    if spec.eps > 0.0 {
        let pieces = augmented_blocks(a, spec)?
            .iter()
            .map(|b| ConicPiece::new(b.vertices().iter().map(|v| sub(v, x0)).collect(), vec![]))
            .collect();
        return Ok(ClosedConicUnion { pieces });
    }
    let pieces = a
        .blocks
        .iter()
        .map(|b| ConicPiece::new(b.vertices().iter().map(|v| sub(v, x0)).collect(), spec.d.vertices().to_vec()))
        .collect();
    Ok(ClosedConicUnion { pieces })
}

fn prepare(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64]) -> Result<()> {
    crate::numlin::check_dim(c.dim(), x0)?;
    c.require_pointed()?;
    a.require_member(x0)
}

/// Benson (D, eps)-efficiency: no piece of `cl cone(A + D(eps) - x0)` meets `-C \ {0}`.
pub fn is_approx_benson(a: &FeasibleSet, c: &PolyhedralCone, spec: &ApproxSpec, x0: &[f64]) -> Result<Verdict> {
    prepare(a, c, x0)?;
    separate_pieces(&approx_benson_cone(a, spec, x0)?, c)
}

/// SSP of `(-C, cl cone(A + D(eps) - x0))`, or `None` if some piece is the
/// whole space.
pub fn approx_ssp(a: &FeasibleSet, c: &PolyhedralCone, spec: &ApproxSpec, x0: &[f64], space: &Space) -> Result<Option<SspVerdict>> {
    let pieces: Vec<Vec<Vector>> = approx_benson_cone(a, spec, x0)?.pieces.iter().map(|p| p.directions()).collect();
    let c = c.with_norm(space.norm);
    Ok(crate::scalarize::piece_sections(&c, &pieces, space)?.map(|(w, v, _)| ssp_check_sections(&w, &v)))
}

/// Henig (D, eps)-efficiency. Under SSP the notion agrees with the Benson
/// version in finite dimension; otherwise a dilation avoiding `-D` is searched.
pub fn is_approx_henig(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    spec: &ApproxSpec,
    x0: &[f64],
    space: &Space,
    search: &HenigSearch,
) -> Result<Verdict> {
    prepare(a, c, x0)?;
    let benson = is_approx_benson(a, c, spec, x0)?;
    if let Some(v) = approx_ssp(a, c, spec, x0, space)? {
        if v.holds {
            return Ok(benson);
        }
    }
    if benson.is_no() {
        return Ok(benson);
    }
    let pieces: Vec<Vec<Vector>> = approx_benson_cone(a, spec, x0)?.pieces.iter().map(|p| p.directions()).collect();
    let c_space = c.with_norm(space.norm);
    for f in positive_functionals(&c_space, search.functionals, search.seed)? {
        let base = base_from_functional(&c_space, &f)?;
        'eta: for j in 1..=search.etas {
            let eta = base.delta_b / 2f64.powi(j as i32);
            let v = henig_dilation(&base, eta, space)?;
            if spec.d.vertices().iter().any(|d| v.member(&scale(d, -1.0)).closed) {
                continue;
            }
            for dirs in &pieces {
                if !dirs.is_empty() && !v.cone_avoids_negative(dirs)? {
                    continue 'eta;
                }
            }
            return Ok(Verdict::Yes(Certificate::Henig { f: v.base.f, eta }));
        }
    }
    Ok(Verdict::Unknown("no member of G(D) found within the search budget".into()))
}

/// `lambda = inf_{d in D(eps)} f(d) + alpha ||d||`.
pub fn lambda_bound(spec: &ApproxSpec, fa: &AugmentedFunctional, space: &Space) -> Result<f64> {
    let m = match &spec.d {
        ApproxSet::Points(ds) => {
            let mut m = f64::INFINITY;
            for d in ds {
                space.check(d)?;
                m = m.min(fa.eval(d, space.norm) + 2.0 * fa.alpha * space.norm.of(d));
            }
            m
        }
        ApproxSet::Polytope(p) => hull_min(p.vertices(), &fa.f, fa.alpha, space.norm)?.0,
    };
    if spec.eps > 0.0 {
        Ok(spec.eps * m)
    } else if m >= 0.0 {
        Ok(0.0)
    } else {
        Ok(f64::NEG_INFINITY)
    }
}

/// `x0` with `g(x0) - lambda <= g(z)` for every `z in A`.
#[derive(Debug, Clone, PartialEq)]
pub struct AMinQuery {
    pub fa: AugmentedFunctional,
    pub x0: Vector,
    pub lambda: f64,
}

pub fn is_amin(a: &FeasibleSet, query: &AMinQuery, space: &Space) -> Result<bool> {
    if !(query.lambda >= 0.0) {
        return Err(Error::InvalidInput(format!("lambda must be nonnegative, got {}", query.lambda)));
    }
    let problem = ScalarProblem::new(query.fa.clone(), query.x0.clone(), a.clone(), *space)?;
    let sol = minimize_g(&problem)?;
    Ok(-query.lambda <= sol.min_value + TAU_GEOM)
}

/// Scalarization pair found for the necessary conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ApproxCertificate {
    pub f: Vector,
    pub alpha: f64,
    pub source: CandidateSource,
    /// Minimization over `(A + D(eps)) ∪ {x0}`; absent at `eps = 0`, where the
    /// pair is validated by positivity on the conic pieces instead.
    pub solution: Option<ScalarSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NecessaryConditions {
    /// Condition (i): a pair whose minimum over `(A + D(eps)) ∪ {x0}` is
    /// attained only at `x0`; `None` when the search was exhausted.
    pub condition_i: Option<ApproxCertificate>,
    /// Condition (ii): `x0 in AMin(g, A, lambda)` for the pair of (i).
    pub condition_ii: Option<bool>,
    pub lambda: Option<f64>,
    pub tried: usize,
    pub ssp: SspVerdict,
}

/// `f(y) + alpha ||y|| > 0` for every nonzero `y` of every piece.
fn positive_on_pieces(pieces: &[Vec<Vector>], f: &[f64], alpha: f64, space: &Space) -> Result<bool> {
    let neg_f = scale(f, -1.0);
    for dirs in pieces {
        if dirs.is_empty() {
            continue;
        }
        let k = match PolyhedralCone::new(dirs.clone(), space.norm) {
            Ok(k) => k,
            Err(Error::InvalidInput(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        if wedge_set(&k, space)?.support(&neg_f).0 >= alpha - TAU_GEOM {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search the scalarization pair of the necessary conditions and report both.
pub fn necessary_conditions(
    a: &FeasibleSet,
    c: &PolyhedralCone,
    spec: &ApproxSpec,
    x0: &[f64],
    space: &Space,
    budget: usize,
    seed: u64,
) -> Result<NecessaryConditions> {
    prepare(a, c, x0)?;
    let c = &c.with_norm(space.norm);
    if !is_approx_benson(a, c, spec, x0)?.is_yes() {
        return Err(Error::PreconditionFailed("x0 is not Benson (D, eps)-efficient".into()));
    }
    let ssp = match approx_ssp(a, c, spec, x0, space)? {
        Some(v) if v.holds => v,
        _ => return Err(Error::PreconditionFailed("SSP of (-C, cl cone(A + D(eps) - x0)) fails".into())),
    };
    let pieces: Vec<Vec<Vector>> = approx_benson_cone(a, spec, x0)?.pieces.iter().map(|p| p.directions()).collect();
    let search = if spec.eps > 0.0 {
        let mut blocks = augmented_blocks(a, spec)?;
        blocks.push(Polytope::point(x0.to_vec()));
        let aug = FeasibleSet::new(blocks)?;
        search_candidates(c, &pieces, space, budget, seed, |f, alpha, source| {
            Ok(validate(c, &aug, x0, space, f, alpha, source)?
                .map(|s| ApproxCertificate { f: s.f, alpha: s.alpha, source, solution: Some(s.solution) }))
        })?
    } else {
        search_candidates(c, &pieces, space, budget, seed, |f, alpha, source| {
            let fa = match AugmentedFunctional::new(c, f, alpha, space) {
                Ok(fa) if fa.is_strict() => fa,
                _ => return Ok(None),
            };
            Ok(positive_on_pieces(&pieces, &fa.f, fa.alpha, space)?
                .then_some(ApproxCertificate { f: fa.f, alpha: fa.alpha, source, solution: None }))
        })?
    };
    let (condition_ii, lambda) = match &search.found {
        Some(cert) => {
            let fa = AugmentedFunctional::new(c, cert.f.clone(), cert.alpha, space)?;
            let lambda = lambda_bound(spec, &fa, space)?;
            let q = AMinQuery { fa, x0: x0.to_vec(), lambda };
            (Some(is_amin(a, &q, space)?), Some(lambda))
        }
        None => (None, None),
    };
    Ok(NecessaryConditions { condition_i: search.found, condition_ii, lambda, tried: search.tried, ssp })
}

/// If `g >= 0` on `A + D(eps)` then `x0` is Benson (D, eps)-efficient.
pub fn sufficient_condition(
    a: &FeasibleSet,
    spec: &ApproxSpec,
    x0: &[f64],
    fa: &AugmentedFunctional,
    space: &Space,
) -> Result<Verdict> {
    if !fa.is_strict() {
        return Err(Error::InvalidInput("sufficient condition needs an a#+ pair".into()));
    }
    a.require_member(x0)?;
    let min_value = if spec.eps > 0.0 {
        let mut m = f64::INFINITY;
        for b in augmented_blocks(a, spec)? {
            let w: Vec<Vector> = b.vertices().iter().map(|v| sub(v, x0)).collect();
            m = m.min(hull_min(&w, &fa.f, fa.alpha, space.norm)?.0);
        }
        m
    } else {
        // g is positively homogeneous about x0, so its sign on A + D(0) is its
        // sign on the closed conic pieces.
        let pieces: Vec<Vec<Vector>> = approx_benson_cone(a, spec, x0)?.pieces.iter().map(|p| p.directions()).collect();
        let neg_f = scale(&fa.f, -1.0);
        let mut worst = 0.0_f64;
        for dirs in &pieces {
            if dirs.is_empty() {
                continue;
            }
            match PolyhedralCone::new(dirs.clone(), space.norm) {
                Ok(k) => worst = worst.max(wedge_set(&k, space)?.support(&neg_f).0 - fa.alpha),
                Err(Error::InvalidInput(_)) => worst = f64::INFINITY,
                Err(e) => return Err(e),
            }
        }
        -worst
    };
    if min_value >= -TAU_GEOM {
        Ok(Verdict::Yes(Certificate::Bound { f: fa.f.clone(), alpha: fa.alpha, min_value }))
    } else {
        Ok(Verdict::Unknown(format!("g attains {min_value} < 0 on A + D(eps); no conclusion")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::Norm;

    fn golden() -> (FeasibleSet, PolyhedralCone, ApproxSpec, Space) {
        let a = FeasibleSet::new(vec![Polytope::new(vec![vec![-1.0, 0.0], vec![0.0, 0.0]]).unwrap()]).unwrap();
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let h = 0.5f64.sqrt();
        let d = ApproxSet::Points(vec![vec![1.0, 0.0], vec![h, -h], vec![0.0, -1.0]]);
        let spec = ApproxSpec::new(d, 1.0, &c).unwrap();
        (a, c, spec, Space::new(2, Norm::L2).unwrap())
    }

    #[test]
    fn d_eps_examples() {
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let two = ApproxSpec::new(ApproxSet::Points(vec![vec![0.0, -1.0], vec![1.0, 0.0]]), 1.0, &c).unwrap();
        assert_eq!(d_eps(&two).unwrap(), EffectiveD::Scaled(two.d.clone()));
        let half = ApproxSpec::new(ApproxSet::Points(vec![vec![0.0, -1.0]]), 0.5, &c).unwrap();
        assert_eq!(d_eps(&half).unwrap(), EffectiveD::Scaled(ApproxSet::Points(vec![vec![0.0, -0.5]])));
        let zero = ApproxSpec::new(ApproxSet::Points(vec![vec![0.0, -1.0]]), 0.0, &c).unwrap();
        assert!(matches!(d_eps(&zero).unwrap(), EffectiveD::PuncturedCone(_)));
    }

    #[test]
    fn hbar_violations_are_rejected() {
        let c = PolyhedralCone::orthant(2, Norm::L2);
        let bad = ApproxSpec::new(ApproxSet::Points(vec![vec![-1.0, -1.0]]), 1.0, &c);
        assert!(matches!(bad, Err(Error::NotInHbar(_))));
        let zero = ApproxSpec::new(ApproxSet::Points(vec![vec![0.0, 0.0]]), 1.0, &c);
        assert!(matches!(zero, Err(Error::NotInHbar(_))));
    }

    #[test]
    fn golden_instance() {
        let (a, c, spec, s) = golden();
        let fa = AugmentedFunctional::new(&c, vec![1.0, 1.0], 4.0 / 3.0, &s).unwrap();
        let lambda = lambda_bound(&spec, &fa, &s).unwrap();
        assert!((lambda - 1.0 / 3.0).abs() < 1e-12);
        assert!(is_amin(&a, &AMinQuery { fa: fa.clone(), x0: vec![0.0, 0.0], lambda }, &s).unwrap());
        match is_approx_benson(&a, &c, &spec, &[0.0, 0.0]).unwrap() {
            Verdict::No(y) => assert!((y[0] + 1.0).abs() < 1e-9 && (y[1] + 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        assert!(is_approx_henig(&a, &c, &spec, &[0.0, 0.0], &s, &HenigSearch::default()).unwrap().is_no());
        assert!(matches!(
            necessary_conditions(&a, &c, &spec, &[0.0, 0.0], &s, 64, 0),
            Err(Error::PreconditionFailed(_))
        ));
        let v = sufficient_condition(&a, &spec, &[0.0, 0.0], &fa, &s).unwrap();
        assert!(v.is_unknown());
        let half = ApproxSpec { eps: 0.5, ..spec.clone() };
        assert!((lambda_bound(&half, &fa, &s).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn golden_at_eps_zero_is_still_refuted() {
        let (a, c, spec, _) = golden();
        let zero = ApproxSpec { eps: 0.0, ..spec };
        let y = match is_approx_benson(&a, &c, &zero, &[0.0, 0.0]).unwrap() {
            Verdict::No(y) => y,
            other => panic!("{other:?}"),
        };
        assert!(y[0] < 0.0 && (y[0] - y[1]).abs() < 1e-9);
    }

    #[test]
    fn single_point_examples() {
        let c = PolyhedralCone::orthant(2, Norm::L2);
        let s = Space::new(2, Norm::L2).unwrap();
        let a = FeasibleSet::from_points(vec![vec![0.0, 0.0]]).unwrap();
        let spec = ApproxSpec::new(ApproxSet::Points(vec![vec![1.0, 0.0]]), 1.0, &c).unwrap();
        assert!(is_approx_benson(&a, &c, &spec, &[0.0, 0.0]).unwrap().is_yes());
        let fa = AugmentedFunctional::new(&c, vec![1.0, 1.0], 0.5, &s).unwrap();
        assert!((lambda_bound(&spec, &fa, &s).unwrap() - 1.5).abs() < 1e-12);
        assert!(sufficient_condition(&a, &spec, &[0.0, 0.0], &fa, &s).unwrap().is_yes());
        let lin = Space::new(2, Norm::Linf).unwrap();
        let cl = c.with_norm(Norm::Linf);
        let nc = necessary_conditions(&a, &cl, &spec, &[0.0, 0.0], &lin, 64, 0).unwrap();
        let cert = nc.condition_i.expect("certificate");
        assert_eq!(nc.condition_ii, Some(true));
        let fa = AugmentedFunctional::new(&cl, cert.f.clone(), cert.alpha, &lin).unwrap();
        assert!((nc.lambda.unwrap() - (cert.f[0] + fa.alpha)).abs() < 1e-9);
    }

    #[test]
    fn eps_zero_conditions_on_a_cone() {
        let c = PolyhedralCone::orthant(2, Norm::Linf);
        let s = Space::new(2, Norm::Linf).unwrap();
        let a = FeasibleSet::from_points(vec![vec![0.0, 0.0], vec![2.0, 1.0]]).unwrap();
        let spec = ApproxSpec::new(ApproxSet::Points(vec![vec![1.0, 0.0], vec![0.0, 1.0]]), 0.0, &c).unwrap();
        assert!(is_approx_benson(&a, &c, &spec, &[0.0, 0.0]).unwrap().is_yes());
        let nc = necessary_conditions(&a, &c, &spec, &[0.0, 0.0], &s, 64, 0).unwrap();
        assert!(nc.condition_i.is_some());
        assert_eq!(nc.condition_ii, Some(true));
        let fa = AugmentedFunctional::new(&c, vec![1.0, 1.0], 0.5, &s).unwrap();
        assert!(sufficient_condition(&a, &spec, &[0.0, 0.0], &fa, &s).unwrap().is_yes());
        assert!(is_approx_henig(&a, &c, &spec, &[0.0, 0.0], &s, &HenigSearch::default()).unwrap().is_yes());
    }
}
