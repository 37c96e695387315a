//! Dual cones, strictly positive functionals, bases, the augmented dual
//! cone and the dilations built from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::numlin::{
    dist_to_cone, dot, min_norm_polyhedron, norm2, scale, sub, LinearProgram, LpOutcome, Norm,
    PolyhedralCone, Polytope, RelOp, Sense, Space, Vector,
};
use crate::{Error, Result, TAU_GEOM};

/// Membership class of a pair `(f, alpha)` in the augmented dual cones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassTag {
    #[serde(rename = "a*")]
    AStar,
    #[serde(rename = "a#")]
    ASharp,
    #[serde(rename = "a*+")]
    AStarPlus,
    #[serde(rename = "a#+")]
    ASharpPlus,
}

/// A pair `(f, alpha)` acting as `x -> f(x) - alpha ||x||` on the cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AugmentedFunctional {
    pub f: Vector,
    pub alpha: f64,
    pub class_tag: ClassTag,
}

impl AugmentedFunctional {
    /// Classify `(f, alpha)` against `c`. Fails unless `f` is strictly
    /// positive on `c` and `0 <= alpha <= alpha_max(f)`.
    pub fn new(c: &PolyhedralCone, f: Vector, alpha: f64, space: &Space) -> Result<Self> {
        let max = augmented_alpha_bound(c, &f, space)?;
        if !(alpha >= 0.0) || alpha > max * (1.0 + 1e-12) {
            return Err(Error::AlphaOutOfRange { alpha, max });
        }
        let class_tag = if alpha == 0.0 {
            ClassTag::ASharp
        } else if alpha >= max * (1.0 - 1e-12) {
            ClassTag::AStarPlus
        } else {
            ClassTag::ASharpPlus
        };
        Ok(AugmentedFunctional { f, alpha, class_tag })
    }

    /// The default admissible pair: `alpha = alpha_max(f) / 2`.
    pub fn interior(c: &PolyhedralCone, f: Vector, space: &Space) -> Result<Self> {
        let max = augmented_alpha_bound(c, &f, space)?;
        Ok(AugmentedFunctional { f, alpha: max / 2.0, class_tag: ClassTag::ASharpPlus })
    }

    pub fn is_strict(&self) -> bool {
        self.class_tag == ClassTag::ASharpPlus
    }

    /// `f(x) - alpha ||x||`.
    pub fn eval(&self, x: &[f64], norm: Norm) -> f64 {
        dot(&self.f, x) - self.alpha * norm.of(x)
    }
}

/// A base `B = {x in C : f(x) = 1}` of a pointed cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeBase {
    pub f: Vector,
    pub polytope: Polytope,
    /// `inf { ||b|| : b in B }`.
    pub delta_b: f64,
    pub norm: Norm,
}

/// The polyhedral dual cone `C*`.
pub fn dual_cone(c: &PolyhedralCone) -> Result<PolyhedralCone> {
    PolyhedralCone::new(c.facets().to_vec(), c.norm())
}

/// An `f` with `f(g) >= 1` on every canonical generator, minimizing `sum |f_i|`.
pub fn strictly_positive_functional(c: &PolyhedralCone) -> Result<Vector> {
    let n = c.dim();
    // Variables: f (free, n), then t >= |f| (n).
    let mut lp = LinearProgram::new(2 * n);
    lp.nonneg(n..2 * n);
    let mut obj = vec![0.0; 2 * n];
    obj[n..].iter_mut().for_each(|v| *v = 1.0);
    lp.objective(&obj, Sense::Min);
    for g in c.generators() {
        let mut row = g.clone();
        row.resize(2 * n, 0.0);
        lp.add(row, RelOp::Ge, 1.0)?;
    }
    for i in 0..n {
        lp.add_sparse(&[(i, 1.0), (n + i, -1.0)], RelOp::Le, 0.0);
        lp.add_sparse(&[(i, 1.0), (n + i, 1.0)], RelOp::Ge, 0.0);
    }
    match lp.solve()? {
        LpOutcome::Optimal { x, .. } => Ok(x[..n].to_vec()),
        _ => Err(Error::NotPointed),
    }
}

/// The LP witness followed by up to `k - 1` perturbed witnesses (scale 0.1),
/// each re-verified to be strictly positive on the generators.
pub fn positive_functionals(c: &PolyhedralCone, k: usize, seed: u64) -> Result<Vec<Vector>> {
    let f0 = strictly_positive_functional(c)?;
    let mut out = vec![f0.clone()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = 0.1 * norm2(&f0);
    let mut attempts = 0;
    while out.len() < k && attempts < 50 * k {
        attempts += 1;
        let f: Vector = f0.iter().map(|v| v + s * rng.gen_range(-1.0..=1.0)).collect();
        if c.generators().iter().all(|g| dot(&f, g) > TAU_GEOM) {
            out.push(f);
        }
    }
    Ok(out)
}

/// The base cut out by `f`: vertices `g / f(g)` over the extreme rays.
pub fn base_from_functional(c: &PolyhedralCone, f: &[f64]) -> Result<ConeBase> {
    let mut verts = Vec::with_capacity(c.generators().len());
    for g in c.generators() {
        let v = dot(f, g);
        if v <= TAU_GEOM {
            return Err(Error::NotStrictlyPositive);
        }
        verts.push(scale(g, 1.0 / v));
    }
    let norm = c.norm();
    let delta_b = min_norm_polyhedron(&verts, &[], norm)?.value;
    Ok(ConeBase { f: f.to_vec(), polytope: Polytope::new(verts)?, delta_b, norm })
}

/// `alpha_max(f) = 1 / max ||b||` over the base vertices.
pub fn augmented_alpha_bound(c: &PolyhedralCone, f: &[f64], space: &Space) -> Result<f64> {
    space.check(f)?;
    let base = base_from_functional(c, f)?;
    let m = base.polytope.vertices().iter().map(|v| space.norm.of(v)).fold(0.0, f64::max);
    Ok(1.0 / m)
}

/// Membership answer for a closed set with a strictness flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    /// In the closure.
    pub closed: bool,
    /// In the interior, with margin `TAU_GEOM`.
    pub strict: bool,
}

/// The Henig dilation `V_eta(B) = cone(B + eta * open unit ball)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HenigDilation {
    pub base: ConeBase,
    pub eta: f64,
}

pub fn henig_dilation(base: &ConeBase, eta: f64, space: &Space) -> Result<HenigDilation> {
    space.check(&base.f)?;
    if !(eta > 0.0 && eta < base.delta_b) {
        return Err(Error::EtaOutOfRange { eta, delta_b: base.delta_b });
    }
    let mut base = base.clone();
    base.norm = space.norm;
    Ok(HenigDilation { base, eta })
}

impl HenigDilation {
    fn dist_to_base(&self, p: &[f64]) -> f64 {
        let shifted: Vec<Vector> = self.base.polytope.vertices().iter().map(|v| sub(v, p)).collect();
        min_norm_polyhedron(&shifted, &[], self.base.norm).map_or(f64::INFINITY, |m| m.value)
    }

    /// `min_{mu >= 0} dist(mu y, B)` by ternary search on a convex function.
    pub fn scaled_distance(&self, y: &[f64]) -> f64 {
        let ny = self.base.norm.of(y);
        if ny == 0.0 {
            return self.dist_to_base(y);
        }
        let max_b = self.base.polytope.vertices().iter().map(|v| self.base.norm.of(v)).fold(0.0, f64::max);
        let (mut lo, mut hi) = (0.0, 2.0 * (max_b + self.eta) / ny);
        while hi - lo > 1e-10 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if self.dist_to_base(&scale(y, m1)) <= self.dist_to_base(&scale(y, m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        self.dist_to_base(&scale(y, 0.5 * (lo + hi)))
    }

    pub fn member(&self, y: &[f64]) -> Membership {
        if norm2(y) == 0.0 {
            return Membership { closed: true, strict: false };
        }
        let d = self.scaled_distance(y);
        Membership { closed: d <= self.eta + TAU_GEOM, strict: d < self.eta - TAU_GEOM }
    }

    /// True when the cone generated by `dirs` meets `-cl V_eta(B)` only at 0,
    /// with margin `TAU_GEOM`: `min ||b + p||` over `B + cone(dirs)` exceeds eta.
    pub fn cone_avoids_negative(&self, dirs: &[Vector]) -> Result<bool> {
        let d = min_norm_polyhedron(self.base.polytope.vertices(), dirs, self.base.norm)?.value;
        Ok(d > self.eta + TAU_GEOM)
    }
}

/// `y in C(eps)`, i.e. `d(y, C) < eps d(y, -C) - TAU_GEOM`.
pub fn hartley_cone_member(y: &[f64], c: &PolyhedralCone, eps: f64, space: &Space) -> Result<bool> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("Hartley parameter must be positive, got {eps}")));
    }
    let dc = dist_to_cone(y, c, space)?;
    let dn = dist_to_cone(y, &c.neg(), space)?;
    Ok(dc < eps * dn - TAU_GEOM)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    fn has_dir(set: &[Vector], d: &[f64]) -> bool {
        let u = scale(d, 1.0 / norm2(d));
        set.iter().any(|g| close(&scale(g, 1.0 / norm2(g)), &u, 1e-9))
    }

    fn l2() -> Space {
        Space::new(2, Norm::L2).unwrap()
    }

    #[test]
    fn orthant_is_self_dual() {
        let d = dual_cone(&PolyhedralCone::orthant(2, Norm::L2)).unwrap();
        assert!(has_dir(d.generators(), &[1.0, 0.0]) && has_dir(d.generators(), &[0.0, 1.0]));
        assert_eq!(d.generators().len(), 2);
    }

    #[test]
    fn dual_of_ray_is_halfplane() {
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let d = dual_cone(&c).unwrap();
        assert!(d.contains(&[1.0, -1.0]) && d.contains(&[-1.0, 1.0]) && d.contains(&[1.0, 1.0]));
        assert!(!d.contains(&[-1.0, -0.5]));
        assert!(!d.is_pointed());
    }

    #[test]
    fn dual_of_wedge() {
        let c = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Norm::L2).unwrap();
        let d = dual_cone(&c).unwrap();
        assert!(has_dir(d.generators(), &[2.0, -1.0]) && has_dir(d.generators(), &[-1.0, 2.0]));
        let dd = dual_cone(&d).unwrap();
        assert!(has_dir(dd.generators(), &[2.0, 1.0]) && has_dir(dd.generators(), &[1.0, 2.0]));
    }

    #[test]
    fn positive_functionals_examples() {
        let f = strictly_positive_functional(&PolyhedralCone::orthant(2, Norm::L2)).unwrap();
        assert!(close(&f, &[1.0, 1.0], 1e-9));
        let c = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Norm::L2).unwrap();
        let f = strictly_positive_functional(&c).unwrap();
        assert!(2.0 * f[0] + f[1] >= 5f64.sqrt() - 1e-9 && f[0] + 2.0 * f[1] >= 5f64.sqrt() - 1e-9);
        let line = PolyhedralCone::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]], Norm::L2).unwrap();
        assert_eq!(strictly_positive_functional(&line), Err(Error::NotPointed));
        let fs = positive_functionals(&c, 5, 7).unwrap();
        assert_eq!(fs.len(), 5);
        assert!(fs.iter().all(|f| c.generators().iter().all(|g| dot(f, g) > 0.0)));
    }

    #[test]
    fn bases_and_their_infimum_norm() {
        let b = base_from_functional(&PolyhedralCone::orthant(2, Norm::L2), &[1.0, 1.0]).unwrap();
        assert_eq!(b.polytope.vertices().len(), 2);
        assert!((b.delta_b - 0.5f64.sqrt()).abs() < 1e-12);
        let c = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Norm::L2).unwrap();
        let b = base_from_functional(&c, &[1.0, 1.0]).unwrap();
        let v = b.polytope.vertices();
        assert!(v.iter().any(|x| close(x, &[2.0 / 3.0, 1.0 / 3.0], 1e-12)));
        assert!(v.iter().any(|x| close(x, &[1.0 / 3.0, 2.0 / 3.0], 1e-12)));
        assert!((b.delta_b - 0.5f64.sqrt()).abs() < 1e-12);
        let b = base_from_functional(&PolyhedralCone::orthant(2, Norm::L2), &[1.0, 2.0]).unwrap();
        assert!(b.polytope.vertices().iter().any(|x| close(x, &[0.0, 0.5], 1e-12)));
        assert!((b.delta_b - 1.0 / 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            base_from_functional(&PolyhedralCone::orthant(2, Norm::L2), &[1.0, -1.0]),
            Err(Error::NotStrictlyPositive)
        );
    }

    #[test]
    fn alpha_bounds() {
        let o = PolyhedralCone::orthant(2, Norm::L2);
        assert!((augmented_alpha_bound(&o, &[1.0, 1.0], &l2()).unwrap() - 1.0).abs() < 1e-12);
        let c = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Norm::L2).unwrap();
        let a = augmented_alpha_bound(&c, &[1.0, 1.0], &l2()).unwrap();
        assert!((a - 3.0 / 5f64.sqrt()).abs() < 1e-12);
        let l1 = Space::new(2, Norm::L1).unwrap();
        let o1 = PolyhedralCone::orthant(2, Norm::L1);
        assert!((augmented_alpha_bound(&o1, &[1.0, 1.0], &l1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn class_tags() {
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let s = l2();
        let tag = |a: f64| AugmentedFunctional::new(&c, vec![1.0, 1.0], a, &s).map(|x| x.class_tag);
        assert_eq!(tag(0.0), Ok(ClassTag::ASharp));
        assert_eq!(tag(4.0 / 3.0), Ok(ClassTag::ASharpPlus));
        assert_eq!(tag(2f64.sqrt()), Ok(ClassTag::AStarPlus));
        assert!(matches!(tag(1.5), Err(Error::AlphaOutOfRange { .. })));
    }

    #[test]
    fn henig_membership_examples() {
        let s = l2();
        let b = base_from_functional(&PolyhedralCone::orthant(2, Norm::L2), &[1.0, 1.0]).unwrap();
        let v = henig_dilation(&b, 0.5, &s).unwrap();
        assert!(v.member(&[1.0, 1.0]).strict);
        assert!(!v.member(&[-1.0, 0.0]).closed);
        assert!(v.member(&[1.0, -0.3]).strict);
        assert!(matches!(henig_dilation(&b, 0.8, &s), Err(Error::EtaOutOfRange { .. })));
        assert!(v.cone_avoids_negative(&[vec![-1.0, 1.0]]).unwrap());
        assert!(!v.cone_avoids_negative(&[vec![-1.0, 0.1]]).unwrap());
    }

    #[test]
    fn hartley_examples() {
        let c = PolyhedralCone::orthant(2, Norm::L2);
        let s = l2();
        assert!(hartley_cone_member(&[1.0, 1.0], &c, 0.1, &s).unwrap());
        assert!(!hartley_cone_member(&[0.0, 0.0], &c, 1.0, &s).unwrap());
        assert!(!hartley_cone_member(&[-1.0, 1.0], &c, 0.5, &s).unwrap());
    }
}
