//! Sphere sections of cones, the strict separation property (SSP) and its
//! constructive witnesses.

use serde::Serialize;

use crate::numlin::{
    combo, dot, norm2, orthonormal_basis, scale, sub, vertex_enumeration, wolfe_min_norm, Norm,
    PolyhedralCone, Polytope, Space, Vector,
};
use crate::{Error, Result, TAU_GEOM};

/// A face of a sphere section: a closed cone together with its relative
/// boundary faces, used for exact support computations under L2.
#[derive(Debug, Clone)]
struct FaceNode {
    gens: Vec<Vector>,
    basis: Vec<Vector>,
    /// `None` when the face is a whole linear subspace.
    cone: Option<PolyhedralCone>,
    children: Vec<FaceNode>,
}

impl FaceNode {
    fn build(gens: &[Vector], n: usize) -> Result<FaceNode> {
        let gens: Vec<Vector> = gens.iter().map(|g| scale(g, 1.0 / norm2(g))).collect();
        let basis = orthonormal_basis(&gens, n);
        let k = basis.len();
        if k <= 1 {
            return Ok(FaceNode { cone: Some(PolyhedralCone::new(gens.clone(), Norm::L2)?), gens, basis, children: vec![] });
        }
        let reduced: Vec<Vector> = gens.iter().map(|g| basis.iter().map(|b| dot(g, b)).collect()).collect();
        let rc = match PolyhedralCone::new(reduced, Norm::L2) {
            Ok(rc) => rc,
            Err(Error::InvalidInput(_)) => return Ok(FaceNode { gens, basis, cone: None, children: vec![] }),
            Err(e) => return Err(e),
        };
        let mut children = Vec::new();
        for face in rc.boundary_faces() {
            let lifted: Vec<Vector> = face.iter().map(|z| combo(&basis, z, n)).collect();
            children.push(FaceNode::build(&lifted, n)?);
        }
        Ok(FaceNode { cone: Some(PolyhedralCone::new(gens.clone(), Norm::L2)?), gens, basis, children })
    }

    fn project(&self, d: &[f64]) -> Vector {
        let w: Vec<f64> = self.basis.iter().map(|b| dot(d, b)).collect();
        combo(&self.basis, &w, d.len())
    }

    fn holds(&self, x: &[f64]) -> bool {
        self.cone.as_ref().is_none_or(|c| c.contains_tol(x, 1e-11))
    }

    /// Max of `d . x` over unit vectors `x` of the face.
    fn support(&self, d: &[f64]) -> (f64, Vector) {
        let dp = self.project(d);
        let nd = norm2(&dp);
        if nd > 1e-14 && self.holds(&dp) {
            return (nd, scale(&dp, 1.0 / nd));
        }
        let mut best = (f64::NEG_INFINITY, self.gens[0].clone());
        if self.children.is_empty() {
            for g in &self.gens {
                let v = dot(d, g);
                if v > best.0 {
                    best = (v, g.clone());
                }
            }
        }
        for c in &self.children {
            let s = c.support(d);
            if s.0 > best.0 {
                best = s;
            }
        }
        best
    }

    fn mesh(&self, h: f64, n: usize, out: &mut Vec<Vector>) {
        out.extend(self.gens.iter().cloned());
        match self.basis.len() {
            2 => {
                let steps = (std::f64::consts::TAU / h).ceil() as usize;
                for i in 0..steps {
                    let t = i as f64 * std::f64::consts::TAU / steps as f64;
                    let x = combo(&self.basis, &[t.cos(), t.sin()], n);
                    if self.holds(&x) {
                        out.push(x);
                    }
                }
            }
            3 => {
                let count = (4.0 * std::f64::consts::PI / (h * h)).ceil() as usize;
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                for i in 0..count {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * i as f64;
                    let x = combo(&self.basis, &[r * t.cos(), r * t.sin(), z], n);
                    if self.holds(&x) {
                        out.push(x);
                    }
                }
            }
            _ => {}
        }
        for c in &self.children {
            c.mesh(h, n, out);
        }
    }
}

/// The convex hull of a cone's (or a union of cones') intersection with the
/// unit sphere, optionally with the origin adjoined.
#[derive(Debug, Clone)]
pub struct SphereSection {
    pub dim: usize,
    pub norm: Norm,
    /// Whether the origin is adjoined.
    pub origin: bool,
    /// Exact hull (L1/LINF only).
    pub hull: Option<Polytope>,
    /// Unit-norm sample points (L2 only).
    pub mesh_points: Vec<Vector>,
    pub exact: bool,
    faces: Vec<FaceNode>,
}

impl SphereSection {
    /// Section of the union of the cones spanned by each generator list.
    pub fn from_faces(faces: &[Vec<Vector>], origin: bool, space: &Space) -> Result<SphereSection> {
        let n = space.dim;
        let faces: Vec<Vec<Vector>> = faces
            .iter()
            .map(|f| f.iter().filter(|g| norm2(g) > TAU_GEOM).cloned().collect::<Vec<_>>())
            .filter(|f: &Vec<Vector>| !f.is_empty())
            .collect();
        for f in &faces {
            for g in f {
                space.check(g)?;
            }
        }
        if space.norm.is_polyhedral() {
            let mut verts = Vec::new();
            for f in &faces {
                verts.extend(polyhedral_face_vertices(f, space)?);
            }
            if origin {
                verts.push(vec![0.0; n]);
            }
            let hull = if verts.is_empty() { None } else { Some(Polytope::new(verts)?) };
            return Ok(SphereSection { dim: n, norm: space.norm, origin, hull, mesh_points: vec![], exact: true, faces: vec![] });
        }
        let nodes = faces.iter().map(|f| FaceNode::build(f, n)).collect::<Result<Vec<_>>>()?;
        let h = if n <= 2 { 0.01 } else { 0.05 };
        let mut mesh = Vec::new();
        for node in &nodes {
            node.mesh(h, n, &mut mesh);
        }
        Ok(SphereSection { dim: n, norm: space.norm, origin, hull: None, mesh_points: mesh, exact: false, faces: nodes })
    }

    /// No points at all (a union of cones with empty boundary and no origin).
    pub fn is_empty(&self) -> bool {
        !self.origin && self.hull.is_none() && self.faces.is_empty()
    }

    /// Max of `d . x` over the section and a maximizer.
    pub fn support(&self, d: &[f64]) -> (f64, Vector) {
        let mut best = (f64::NEG_INFINITY, vec![0.0; self.dim]);
        if self.origin {
            best.0 = 0.0;
        }
        if let Some(h) = &self.hull {
            for v in h.vertices() {
                let s = dot(d, v);
                if s > best.0 {
                    best = (s, v.clone());
                }
            }
        }
        for f in &self.faces {
            let s = f.support(d);
            if s.0 > best.0 {
                best = s;
            }
        }
        best
    }

    /// Finite point set whose hull is the section (exact) or approximates it.
    pub fn points(&self) -> Vec<Vector> {
        let mut pts = match &self.hull {
            Some(h) => h.vertices().to_vec(),
            None => self.mesh_points.clone(),
        };
        if self.origin && self.hull.is_none() {
            pts.push(vec![0.0; self.dim]);
        }
        pts
    }
}

/// Vertices of `F ∩ B_X` of unit norm, for a polyhedral unit ball.
fn polyhedral_face_vertices(face: &[Vector], space: &Space) -> Result<Vec<Vector>> {
    let n = space.dim;
    let cone = PolyhedralCone::new(face.to_vec(), space.norm)?;
    let mut hs: Vec<(Vector, f64)> = cone.facets().iter().map(|a| (a.iter().map(|x| -x).collect(), 0.0)).collect();
    match space.norm {
        Norm::Linf => {
            for i in 0..n {
                for s in [1.0, -1.0] {
                    let mut e = vec![0.0; n];
                    e[i] = s;
                    hs.push((e, 1.0));
                }
            }
        }
        _ => {
            for mask in 0..(1usize << n) {
                let row = (0..n).map(|i| if mask & (1 << i) != 0 { -1.0 } else { 1.0 }).collect();
                hs.push((row, 1.0));
            }
        }
    }
    Ok(vertex_enumeration(&hs, n).into_iter().filter(|v| (space.norm.of(v) - 1.0).abs() < 1e-9).collect())
}

/// `C∧ = co(C ∩ S_X)`.
pub fn wedge_set(c: &PolyhedralCone, space: &Space) -> Result<SphereSection> {
    SphereSection::from_faces(&[c.generators().to_vec()], false, space)
}

/// `K∨ = co((bd K ∩ S_X) ∪ {0})`.
pub fn vee_set(k: &PolyhedralCone, space: &Space) -> Result<SphereSection> {
    SphereSection::from_faces(&k.boundary_faces(), true, space)
}

/// `K∨` for a union of cones, using the union of their boundaries. This
/// contains the true boundary of the union, so SSP verdicts stay sound.
pub fn vee_set_union(cones: &[PolyhedralCone], space: &Space) -> Result<SphereSection> {
    let faces: Vec<Vec<Vector>> = cones.iter().flat_map(|k| k.boundary_faces()).collect();
    SphereSection::from_faces(&faces, true, space)
}

/// Decision of the strict separation property for a cone pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SspVerdict {
    pub holds: bool,
    /// Euclidean distance between the two hulls (upper end of the bracket).
    pub distance: f64,
    pub exact: bool,
    /// Certified `[lower, upper]` bounds on the distance.
    pub bracket: (f64, f64),
    /// Unit direction from the `K∨` side to the `C∧` side of the nearest pair.
    pub direction: Vector,
}

/// SSP for two sphere sections.
pub fn ssp_check_sections(wedge: &SphereSection, vee: &SphereSection) -> SspVerdict {
    let n = wedge.dim;
    if wedge.is_empty() || vee.is_empty() {
        return SspVerdict { holds: true, distance: f64::INFINITY, exact: wedge.exact, bracket: (f64::INFINITY, f64::INFINITY), direction: vec![0.0; n] };
    }
    let start = sub(&wedge.support(&vec![0.0; n]).1, &vee.support(&vec![0.0; n]).1);
    let start = if wedge.exact { start } else { sub(&wedge.points()[0], &vee.points()[0]) };
    let lmo = |x: &[f64]| {
        let (_, p) = wedge.support(&scale(x, -1.0));
        let (_, q) = vee.support(x);
        sub(&p, &q)
    };
    let m = wolfe_min_norm(start, lmo);
    let upper = m.value;
    if upper <= 1e-14 {
        return SspVerdict { holds: false, distance: 0.0, exact: wedge.exact, bracket: (0.0, 0.0), direction: vec![0.0; n] };
    }
    let dir = scale(&m.point, 1.0 / upper);
    let lower = (-wedge.support(&scale(&dir, -1.0)).0 - vee.support(&dir).0).max(0.0);
    SspVerdict {
        holds: lower > TAU_GEOM,
        distance: upper,
        exact: wedge.exact && vee.exact,
        bracket: (lower.min(upper), upper),
        direction: dir,
    }
}

/// SSP of `(C, K)`: `0` is not in `cl(C∧ - K∨)`.
pub fn ssp_check(c: &PolyhedralCone, k: &PolyhedralCone, space: &Space) -> Result<SspVerdict> {
    Ok(ssp_check_sections(&wedge_set(c, space)?, &vee_set(k, space)?))
}

/// A separating triple: for `delta1 < alpha < delta2`,
/// `f(x) + alpha ||x|| < 0` on `-C \ {0}` and `> 0` on `bd(-K) \ {0}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SspWitness {
    pub f: Vector,
    pub delta1: f64,
    pub delta2: f64,
}

impl SspWitness {
    pub fn new(f: Vector, delta1: f64, delta2: f64) -> Result<SspWitness> {
        if !(0.0 < delta1 && delta1 < delta2) {
            return Err(Error::InvalidInput(format!("witness needs 0 < delta1 < delta2, got {delta1}, {delta2}")));
        }
        Ok(SspWitness { f, delta1, delta2 })
    }

    /// `count` values spread across the open interval `(delta1, delta2)`.
    pub fn alphas(&self, count: usize) -> Vec<f64> {
        (1..=count).map(|i| self.delta1 + (self.delta2 - self.delta1) * i as f64 / (count + 1) as f64).collect()
    }
}

/// Witness from sections already built.
pub fn ssp_witness_sections(wedge: &SphereSection, vee: &SphereSection) -> Result<SspWitness> {
    let v = ssp_check_sections(wedge, vee);
    if !v.holds {
        return Err(Error::SspDoesNotHold);
    }
    let f = if v.distance.is_finite() { v.direction } else { fallback_direction(wedge)? };
    let s = vee.support(&f).0.max(0.0);
    let m_c = -wedge.support(&scale(&f, -1.0)).0;
    let gap = m_c - s;
    if !(gap > 0.0) {
        return Err(Error::SspDoesNotHold);
    }
    SspWitness::new(f, s + gap / 4.0, s + 3.0 * gap / 4.0)
}

fn fallback_direction(wedge: &SphereSection) -> Result<Vector> {
    let pts = wedge.points();
    let n = wedge.dim;
    let sum = combo(&pts, &vec![1.0; pts.len()], n);
    crate::numlin::unit(&sum).ok_or(Error::SspDoesNotHold)
}

/// Construct `(f, delta1, delta2)` from the nearest pair of `C∧` and `K∨`.
pub fn ssp_witness(c: &PolyhedralCone, k: &PolyhedralCone, space: &Space) -> Result<SspWitness> {
    ssp_witness_sections(&wedge_set(c, space)?, &vee_set(k, space)?)
}

/// Where `C \ {0}` sits relative to `K` under SSP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelativePosition {
    InsideInt,
    InsideComplement,
}

/// Either `C \ {0}` lies in `int K` or in the open complement of `K`.
pub fn relative_position(c: &PolyhedralCone, k: &PolyhedralCone) -> Result<RelativePosition> {
    let space = Space::new(c.dim(), c.norm())?;
    if !ssp_check(c, k, &space)?.holds {
        return Err(Error::SspDoesNotHold);
    }
    let p = c.interior_point();
    let sample = if norm2(&p) > TAU_GEOM { p } else { c.generators()[0].clone() };
    if k.interior_contains(&sample) {
        if c.generators().iter().all(|g| k.interior_contains(g)) {
            return Ok(RelativePosition::InsideInt);
        }
    } else if c.generators().iter().all(|g| !k.contains(g)) {
        return Ok(RelativePosition::InsideComplement);
    }
    Err(Error::DichotomyViolated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linf() -> Space {
        Space::new(2, Norm::Linf).unwrap()
    }

    fn hull_has(s: &SphereSection, p: &[f64]) -> bool {
        s.hull.as_ref().unwrap().vertices().iter().any(|v| norm2(&sub(v, p)) < 1e-9)
    }

    #[test]
    fn wedge_examples() {
        let ray = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::Linf).unwrap();
        let w = wedge_set(&ray, &linf()).unwrap();
        assert_eq!(w.hull.as_ref().unwrap().vertices().len(), 1);
        assert!(hull_has(&w, &[1.0, 1.0]));
        let q = wedge_set(&PolyhedralCone::orthant(2, Norm::Linf), &linf()).unwrap();
        assert_eq!(q.hull.as_ref().unwrap().vertices().len(), 3);
        assert!(hull_has(&q, &[1.0, 0.0]) && hull_has(&q, &[1.0, 1.0]) && hull_has(&q, &[0.0, 1.0]));
        let l2 = Space::new(2, Norm::L2).unwrap();
        let r = wedge_set(&PolyhedralCone::new(vec![vec![1.0, 0.0]], Norm::L2).unwrap(), &l2).unwrap();
        assert!(!r.exact);
        assert!(r.mesh_points.iter().all(|p| norm2(&sub(p, &[1.0, 0.0])) < 1e-12));
        assert!(r.mesh_points.iter().all(|p| (norm2(p) - 1.0).abs() < 1e-12));
    }

    #[test]
    fn vee_examples() {
        let v = vee_set(&PolyhedralCone::orthant(2, Norm::Linf), &linf()).unwrap();
        assert_eq!(v.hull.as_ref().unwrap().vertices().len(), 3);
        assert!(hull_has(&v, &[0.0, 0.0]) && hull_has(&v, &[1.0, 0.0]) && hull_has(&v, &[0.0, 1.0]));
        let half = PolyhedralCone::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]], Norm::Linf).unwrap();
        let v = vee_set(&half, &linf()).unwrap();
        assert!(hull_has(&v, &[1.0, 0.0]) && hull_has(&v, &[-1.0, 0.0]));
        assert_eq!(v.hull.as_ref().unwrap().vertices().len(), 2);
    }

    #[test]
    fn ssp_examples() {
        let ray = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::Linf).unwrap();
        let q = PolyhedralCone::orthant(2, Norm::Linf);
        let v = ssp_check(&ray, &q, &linf()).unwrap();
        assert!(v.holds && v.exact);
        assert!((v.distance - 0.5f64.sqrt()).abs() < 1e-12);
        let v = ssp_check(&q, &q, &linf()).unwrap();
        assert!(!v.holds && v.distance.abs() < 1e-12);
        assert!(!ssp_check(&ray, &ray, &linf()).unwrap().holds);
    }

    #[test]
    fn l2_bracket_is_tight() {
        let l2 = Space::new(2, Norm::L2).unwrap();
        let ray = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let v = ssp_check(&ray, &PolyhedralCone::orthant(2, Norm::L2), &l2).unwrap();
        assert!(v.holds && !v.exact);
        // Nearest point of conv{0, e1, e2} to (1,1)/sqrt2 is (1/2, 1/2).
        let expect = 1.0 - 0.5f64.sqrt();
        assert!((v.bracket.0 - expect).abs() < 1e-9 && (v.bracket.1 - expect).abs() < 1e-9);
    }

    #[test]
    fn witness_separates() {
        let ray = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::Linf).unwrap();
        let q = PolyhedralCone::orthant(2, Norm::Linf);
        let w = ssp_witness(&ray, &q, &linf()).unwrap();
        assert!(0.0 < w.delta1 && w.delta1 < w.delta2);
        for a in w.alphas(10) {
            let g = |x: &[f64]| dot(&w.f, x) + a * Norm::Linf.of(x);
            assert!(g(&[-1.0, -1.0]) < 0.0);
            assert!(g(&[-1.0, 0.0]) > 0.0 && g(&[0.0, -3.0]) > 0.0);
        }
        let wedge = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Norm::Linf).unwrap();
        let neg_ray = PolyhedralCone::new(vec![vec![-1.0, -1.0]], Norm::Linf).unwrap();
        let w = ssp_witness(&wedge, &neg_ray, &linf()).unwrap();
        assert!(w.f[0] > 0.0 && w.f[1] > 0.0);
        assert_eq!(ssp_witness(&q, &q, &linf()), Err(Error::SspDoesNotHold));
        assert!(SspWitness::new(vec![1.0, 1.0], 2.0, 1.0).is_err());
    }

    #[test]
    fn dichotomy_examples() {
        let q = PolyhedralCone::orthant(2, Norm::Linf);
        let ray = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::Linf).unwrap();
        assert_eq!(relative_position(&ray, &q), Ok(RelativePosition::InsideInt));
        let neg = PolyhedralCone::new(vec![vec![-1.0, -1.0]], Norm::Linf).unwrap();
        assert_eq!(relative_position(&neg, &q), Ok(RelativePosition::InsideComplement));
        let straddle = PolyhedralCone::new(vec![vec![1.0, 1.0], vec![-1.0, 1.0]], Norm::Linf).unwrap();
        assert_eq!(relative_position(&straddle, &q), Err(Error::SspDoesNotHold));
    }

    #[test]
    fn l2_support_on_a_three_dimensional_orthant() {
        let s = Space::new(3, Norm::L2).unwrap();
        let sec = wedge_set(&PolyhedralCone::orthant(3, Norm::L2), &s).unwrap();
        let (v, x) = sec.support(&[1.0, -1.0, 1.0]);
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
        assert!(x[1].abs() < 1e-12);
        let (v, _) = sec.support(&[-1.0, -2.0, -3.0]);
        assert!((v + 1.0).abs() < 1e-12);
        assert!(sec.mesh_points.len() > 500);
    }
}
