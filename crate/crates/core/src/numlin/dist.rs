use nalgebra::{DMatrix, DVector};

use super::{
    check_dim, combo, dot, linalg, norm2, scale, sub, vertex_enumeration, LinearProgram, LpOutcome,
    Norm, PolyhedralCone, RelOp, Sense, Space, Vector,
};
use crate::{Error, Result};

/// Result of a minimum-norm computation.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNorm {
    pub value: f64,
    pub point: Vector,
}

/// Wolfe's minimum-norm-point algorithm over the convex hull of a set that
/// is only accessed through its linear minimization oracle `lmo`.
pub fn wolfe_min_norm(start: Vector, lmo: impl Fn(&[f64]) -> Vector) -> MinNorm {
    let mut corral: Vec<Vector> = vec![start.clone()];
    let mut lambda = vec![1.0];
    let mut x = start;
    for _ in 0..500 {
        let q = lmo(&x);
        let xx = dot(&x, &x);
        let scale_sq = corral.iter().chain(std::iter::once(&q)).map(|p| dot(p, p)).fold(1.0, f64::max);
        if xx - dot(&x, &q) <= 1e-13 * scale_sq || xx <= 1e-26 {
            break;
        }
        if corral.iter().any(|p| norm2(&sub(p, &q)) <= 1e-14 * scale_sq.sqrt()) {
            break;
        }
        corral.push(q);
        lambda.push(0.0);
        for _ in 0..(corral.len() + 2) {
            let mu = affine_min(&corral);
            if mu.iter().all(|&m| m > 1e-12) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0_f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= 1e-12 && l - m > 1e-15 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let mut i = 0;
            let mut removed = false;
            while i < corral.len() {
                if lambda[i] <= 1e-12 && corral.len() > 1 {
                    corral.remove(i);
                    lambda.remove(i);
                    removed = true;
                } else {
                    i += 1;
                }
            }
            if !removed {
                // Numerical stalemate: drop the smallest weight.
                let (imin, _) = lambda
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
                corral.remove(imin);
                lambda.remove(imin);
            }
            let s: f64 = lambda.iter().sum();
            for l in lambda.iter_mut() {
                *l /= s;
            }
        }
        x = combo(&corral, &lambda, x.len());
    }
    MinNorm { value: norm2(&x), point: x }
}

/// Affine minimizer of `|sum mu_i s_i|` subject to `sum mu_i = 1`.
fn affine_min(points: &[Vector]) -> Vec<f64> {
    let k = points.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = dot(&points[i], &points[j]);
        }
        m[(i, k)] = 1.0;
        m[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = match m.clone().lu().solve(&rhs) {
        Some(s) if s.iter().all(|v| v.is_finite()) => s,
        _ => m.pseudo_inverse(1e-12).map(|p| p * rhs).unwrap_or_else(|_| DVector::from_element(k + 1, 1.0 / k as f64)),
    };
    sol.iter().take(k).copied().collect()
}

/// Minimum Euclidean norm over the convex hull of `points`.
pub fn min_norm_hull(points: &[Vector]) -> MinNorm {
    let start = points
        .iter()
        .min_by(|a, b| dot(a, a).partial_cmp(&dot(b, b)).unwrap())
        .cloned()
        .expect("nonempty point set");
    wolfe_min_norm(start, |x| argmin(points, x))
}

fn argmin(points: &[Vector], x: &[f64]) -> Vector {
    points
        .iter()
        .min_by(|a, b| dot(a, x).partial_cmp(&dot(b, x)).unwrap())
        .cloned()
        .expect("nonempty point set")
}

/// Minimum of `||v + r||` over `v` in conv(verts) and `r` in cone(rays).
pub fn min_norm_polyhedron(verts: &[Vector], rays: &[Vector], norm: Norm) -> Result<MinNorm> {
    let dim = verts.first().ok_or_else(|| Error::InvalidInput("empty vertex set".into()))?.len();
    let rays: Vec<Vector> = rays.iter().filter(|r| norm2(r) > 1e-12).cloned().collect();
    if norm.is_polyhedral() {
        return lp_min_norm(verts, &rays, norm, dim);
    }
    if rays.is_empty() {
        return Ok(min_norm_hull(verts));
    }
    // Any optimal ray part has norm at most bound, so truncating the cone to a
    // polytope containing that ball leaves the optimum unchanged.
    let best_vert = verts.iter().map(|v| norm2(v)).fold(f64::INFINITY, f64::min);
    let max_vert = verts.iter().map(|v| norm2(v)).fold(0.0, f64::max);
    let bound = 1.5 * (best_vert + max_vert) + 1.0;
    let truncated = truncate_cone(&rays, bound, dim)?;
    let start = sub_add(&verts[0], &truncated[0]);
    Ok(wolfe_min_norm(start, |x| {
        let a = argmin(verts, x);
        let b = argmin(&truncated, x);
        a.iter().zip(&b).map(|(p, q)| p + q).collect()
    }))
}

fn sub_add(a: &[f64], b: &[f64]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Vertices of cone(rays) intersected with the Euclidean ball of radius `bound`
/// (over-approximated by a polytope that contains that ball section).
fn truncate_cone(rays: &[Vector], bound: f64, dim: usize) -> Result<Vec<Vector>> {
    let cone = match PolyhedralCone::new(rays.to_vec(), Norm::L2) {
        Ok(c) => Some(c),
        Err(Error::InvalidInput(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(c) = &cone {
        if c.is_pointed() {
            // h . x <= |h| bound for |x| <= bound; h strictly positive on the rays.
            if let Some(h) = positive_functional(c.generators())? {
                let cap = norm2(&h) * bound;
                let mut out = vec![vec![0.0; dim]];
                out.extend(c.generators().iter().map(|g| scale(g, cap / dot(&h, g))));
                return Ok(out);
            }
        }
    }
    let mut hs: Vec<(Vector, f64)> = Vec::new();
    if let Some(c) = &cone {
        hs.extend(c.facets().iter().map(|a| (a.iter().map(|x| -x).collect(), 0.0)));
    }
    for i in 0..dim {
        let mut e = vec![0.0; dim];
        e[i] = 1.0;
        hs.push((e.clone(), bound));
        e[i] = -1.0;
        hs.push((e, bound));
    }
    let vs = vertex_enumeration(&hs, dim);
    if vs.is_empty() {
        return Err(Error::NumericalFailure("empty truncated cone".into()));
    }
    Ok(vs)
}

fn positive_functional(gens: &[Vector]) -> Result<Option<Vector>> {
    let dim = gens[0].len();
    let mut lp = LinearProgram::new(dim);
    lp.objective(&vec![0.0; dim], Sense::Min);
    for g in gens {
        lp.add(g.clone(), RelOp::Ge, 1.0)?;
    }
    Ok(match lp.solve()? {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

fn lp_min_norm(verts: &[Vector], rays: &[Vector], norm: Norm, dim: usize) -> Result<MinNorm> {
    let (nv, nr) = (verts.len(), rays.len());
    // Variables: lambda (nv), nu (nr), then t (Linf) or u (L1, dim entries).
    let extra = if norm == Norm::Linf { 1 } else { dim };
    let k = nv + nr + extra;
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k);
    let mut obj = vec![0.0; k];
    for o in obj.iter_mut().skip(nv + nr) {
        *o = 1.0;
    }
    lp.objective(&obj, Sense::Min);
    lp.add_sparse(&(0..nv).map(|i| (i, 1.0)).collect::<Vec<_>>(), RelOp::Eq, 1.0);
    for i in 0..dim {
        let mut row: Vec<(usize, f64)> = (0..nv).map(|j| (j, verts[j][i])).collect();
        row.extend((0..nr).map(|j| (nv + j, rays[j][i])));
        let t = if norm == Norm::Linf { nv + nr } else { nv + nr + i };
        let mut up = row.clone();
        up.push((t, -1.0));
        lp.add_sparse(&up, RelOp::Le, 0.0);
        let mut lo = row;
        lo.push((t, 1.0));
        lp.add_sparse(&lo, RelOp::Ge, 0.0);
    }
    match lp.solve()? {
        LpOutcome::Optimal { x, .. } => {
            let mut p = combo(verts, &x[..nv], dim);
            let r = combo(rays, &x[nv..nv + nr], dim);
            for (a, b) in p.iter_mut().zip(&r) {
                *a += b;
            }
            Ok(MinNorm { value: norm.of(&p), point: p })
        }
        _ => Err(Error::NumericalFailure("distance LP not optimal".into())),
    }
}

/// Exact distance from `y` to the cone `k`.
pub fn dist_to_cone(y: &[f64], k: &PolyhedralCone, space: &Space) -> Result<f64> {
    space.check(y)?;
    check_dim(k.dim(), y)?;
    let gens = k.generators();
    if space.norm.is_polyhedral() {
        let neg_y = vec![y.iter().map(|v| -v).collect::<Vector>()];
        return Ok(lp_min_norm(&neg_y, gens, space.norm, y.len())?.value);
    }
    if gens.len() > 8 {
        return Err(Error::FaceEnumerationOverflow(gens.len()));
    }
    let mut best = norm2(y);
    let n = y.len();
    let m = gens.len();
    for mask in 1u32..(1 << m) {
        if mask.count_ones() as usize > n {
            continue;
        }
        let sub_gens: Vec<Vector> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| gens[i].clone()).collect();
        let Some(coef) = linalg::least_squares(&sub_gens, y) else { continue };
        if coef.iter().all(|&c| c >= -1e-12) {
            let p = combo(&sub_gens, &coef, n);
            best = best.min(norm2(&sub(y, &p)));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let k = PolyhedralCone::orthant(2, Norm::L2);
        let l2 = Space::new(2, Norm::L2).unwrap();
        assert!((dist_to_cone(&[-1.0, 1.0], &k, &l2).unwrap() - 1.0).abs() < 1e-12);
        for norm in [Norm::L1, Norm::L2, Norm::Linf] {
            let s = Space::new(2, norm).unwrap();
            assert!(dist_to_cone(&[1.0, 1.0], &k.with_norm(norm), &s).unwrap().abs() < 1e-12);
        }
        let li = Space::new(2, Norm::Linf).unwrap();
        let k_inf = PolyhedralCone::orthant(2, Norm::Linf);
        assert!((dist_to_cone(&[-1.0, -1.0], &k_inf, &li).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wolfe_on_triangle() {
        let pts = vec![vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = min_norm_hull(&pts);
        assert!((m.value - 0.5_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn polyhedron_distance_l2_and_linf() {
        // conv{(1,2)} + cone{(1,0)}: the nearest point is (1,2).
        let verts = vec![vec![1.0, 2.0]];
        let rays = vec![vec![1.0, 0.0]];
        let l2 = min_norm_polyhedron(&verts, &rays, Norm::L2).unwrap();
        assert!((l2.value - 5.0_f64.sqrt()).abs() < 1e-9);
        // conv{(2,1)} + cone{(-1,0)}: nearest point (0,1).
        let l2b = min_norm_polyhedron(&[vec![2.0, 1.0]], &[vec![-1.0, 0.0]], Norm::L2).unwrap();
        assert!((l2b.value - 1.0).abs() < 1e-9);
        let li = min_norm_polyhedron(&[vec![2.0, 1.0]], &[vec![-1.0, 0.0]], Norm::Linf).unwrap();
        assert!((li.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn overflow_beyond_eight_generators() {
        let gens: Vec<Vector> = (0..9)
            .map(|i| {
                let t = 0.1 * i as f64;
                vec![t.cos(), t.sin(), 1.0]
            })
            .collect();
        let k = PolyhedralCone::new(gens, Norm::L2).unwrap();
        let s = Space::new(3, Norm::L2).unwrap();
        assert_eq!(dist_to_cone(&[0.0, 0.0, -1.0], &k, &s), Err(Error::FaceEnumerationOverflow(9)));
    }

    #[test]
    fn near_degenerate_l1_polytope_touching_origin() {
        // The origin lies on this triangle up to ~3e-7; a tiny pivot once gave 0.296.
        let verts = vec![
            vec![-0.026686334101680045, -0.4000967840537472, -0.7376477878974024],
            vec![0.77331366589832, 0.0499032159462528, 0.012352212102597612],
            vec![-0.4552577626731086, 0.1356175016605385, 0.2980664978168833],
        ];
        for norm in [Norm::L1, Norm::Linf] {
            let m = min_norm_polyhedron(&verts, &[], norm).unwrap();
            assert!(m.value < 1e-6, "{norm:?}: {}", m.value);
        }
    }
}
