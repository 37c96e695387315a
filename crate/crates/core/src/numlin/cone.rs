use super::{
    check_dim, combo, cosine, dedup_directions, dot, linalg, neg, norm2, scale, unit, LinearProgram,
    Norm, RelOp, Sense, Vector,
};
use crate::{Error, Result, TAU_GEOM};

/// Finitely generated convex cone with derived facet normals.
///
/// Generators are irredundant and of unit length in the norm given at
/// construction. `facets` holds normals `a` with `a . x >= 0` on the cone;
/// together they cut out the cone exactly (equalities appear as `a`, `-a`).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    dim: usize,
    norm: Norm,
    generators: Vec<Vector>,
    facets: Vec<Vector>,
    pointed: bool,
}

impl PolyhedralCone {
    pub fn new(generators: Vec<Vector>, norm: Norm) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidInput("cone needs at least one generator".into()));
        };
        let dim = first.len();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            check_dim(dim, &g)?;
            let n = norm.of(&g);
            if n <= TAU_GEOM {
                return Err(Error::InvalidInput("zero cone generator".into()));
            }
            gens.push(scale(&g, 1.0 / n));
        }
        let mut gens = dedup_directions(gens);
        let mut i = 0;
        while i < gens.len() && gens.len() > 1 {
            let others: Vec<Vector> =
                gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            if in_cone(&others, &gens[i])? {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        let facets = extreme_rays_hcone(&gens, dim);
        if facets.is_empty() {
            return Err(Error::InvalidInput("cone is the whole space".into()));
        }
        let pointed = is_pointed(&gens)?;
        Ok(PolyhedralCone { dim, norm, generators: gens, facets, pointed })
    }

    /// The nonnegative orthant of R^n.
    pub fn orthant(n: usize, norm: Norm) -> Self {
        let gens = (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        PolyhedralCone::new(gens, norm).expect("orthant is a valid cone")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn require_pointed(&self) -> Result<()> {
        if self.pointed {
            Ok(())
        } else {
            Err(Error::NotPointed)
        }
    }

    /// Full-dimensional cones have no paired (equality) facet normals.
    pub fn is_full_dim(&self) -> bool {
        !self.facets.iter().enumerate().any(|(i, a)| {
            self.facets[i + 1..].iter().any(|b| cosine(a, b) < -1.0 + 1e-9)
        })
    }

    pub fn neg(&self) -> PolyhedralCone {
        PolyhedralCone {
            dim: self.dim,
            norm: self.norm,
            generators: self.generators.iter().map(|g| neg(g)).collect(),
            facets: self.facets.iter().map(|a| neg(a)).collect(),
            pointed: self.pointed,
        }
    }

    /// Re-canonicalize under another norm.
    pub fn with_norm(&self, norm: Norm) -> PolyhedralCone {
        PolyhedralCone {
            dim: self.dim,
            norm,
            generators: self.generators.iter().map(|g| scale(g, 1.0 / norm.of(g))).collect(),
            facets: self.facets.clone(),
            pointed: self.pointed,
        }
    }

    /// Membership with tolerance `tol` on the facet inequalities.
    pub fn contains_tol(&self, y: &[f64], tol: f64) -> bool {
        let s = norm2(y).max(1.0);
        self.facets.iter().all(|a| dot(a, y) >= -tol * s)
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.contains_tol(y, TAU_GEOM)
    }

    /// Strict interior membership (never true for lower-dimensional cones).
    pub fn interior_contains(&self, y: &[f64]) -> bool {
        if !self.is_full_dim() {
            return false;
        }
        let s = norm2(y);
        s > 0.0 && self.facets.iter().all(|a| dot(a, y) > TAU_GEOM * s)
    }

    /// Faces whose union is the topological boundary: the facets of a
    /// full-dimensional cone, or the cone itself otherwise.
    pub fn boundary_faces(&self) -> Vec<Vec<Vector>> {
        if !self.is_full_dim() {
            return vec![self.generators.clone()];
        }
        self.facets
            .iter()
            .map(|a| self.generators.iter().filter(|g| dot(a, g).abs() <= 1e-9).cloned().collect::<Vec<_>>())
            .filter(|f: &Vec<Vector>| !f.is_empty())
            .collect()
    }

    /// A point in the relative interior (sum of generators) if nonzero.
    pub fn interior_point(&self) -> Vector {
        let w = vec![1.0; self.generators.len()];
        combo(&self.generators, &w, self.dim)
    }
}

fn in_cone(gens: &[Vector], y: &[f64]) -> Result<bool> {
    let k = gens.len();
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k).objective(&vec![0.0; k], Sense::Min);
    for i in 0..y.len() {
        lp.add(gens.iter().map(|g| g[i]).collect(), RelOp::Eq, y[i])?;
    }
    Ok(lp.solve()?.is_feasible())
}

fn is_pointed(gens: &[Vector]) -> Result<bool> {
    let k = gens.len();
    let dim = gens[0].len();
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k).objective(&vec![0.0; k], Sense::Min);
    for i in 0..dim {
        lp.add(gens.iter().map(|g| g[i]).collect(), RelOp::Eq, 0.0)?;
    }
    lp.add(vec![1.0; k], RelOp::Eq, 1.0)?;
    Ok(!lp.solve()?.is_feasible())
}

/// Generators of `{x : r . x >= 0 for r in rows}`: extreme rays of the
/// pointed part plus both signs of a lineality basis, all unit length.
pub fn extreme_rays_hcone(rows: &[Vector], n: usize) -> Vec<Vector> {
    let lineality = linalg::null_space(rows, n);
    let ell = lineality.len();
    if ell == n {
        return Vec::new();
    }
    // Orthonormal basis of the complement of the lineality space.
    let mut candidates: Vec<Vector> = lineality.clone();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        candidates.push(e);
    }
    let full = linalg::orthonormal_basis(&candidates, n);
    let u: Vec<Vector> = full[ell..].to_vec();
    let k = u.len();
    let reduced: Vec<Vector> = rows.iter().map(|r| u.iter().map(|b| dot(r, b)).collect()).collect();
    let lift = |z: &[f64]| -> Vector { combo(&u, z, n) };
    let feasible = |z: &[f64]| -> bool {
        let s = norm2(z);
        reduced.iter().all(|r| dot(r, z) >= -1e-10 * s.max(1.0) * norm2(r).max(1.0))
    };
    let mut rays = Vec::new();
    if k == 1 {
        for z in [[1.0], [-1.0]] {
            if feasible(&z) {
                rays.push(lift(&z));
            }
        }
    } else {
        let m = reduced.len();
        let mut idx: Vec<usize> = (0..k - 1).collect();
        if m >= k - 1 {
            loop {
                let sub: Vec<Vector> = idx.iter().map(|&i| reduced[i].clone()).collect();
                let ns = linalg::null_space(&sub, k);
                if ns.len() == 1 {
                    for z in [ns[0].clone(), neg(&ns[0])] {
                        if feasible(&z) {
                            rays.push(lift(&z));
                        }
                    }
                }
                let mut j = k - 1;
                let mut done = true;
                while j > 0 {
                    j -= 1;
                    if idx[j] < m - (k - 1) + j {
                        idx[j] += 1;
                        for l in j + 1..k - 1 {
                            idx[l] = idx[l - 1] + 1;
                        }
                        done = false;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
        }
    }
    let mut out: Vec<Vector> = rays.iter().filter_map(|r| unit(r)).collect();
    for l in lineality {
        out.push(l.clone());
        out.push(neg(&l));
    }
    dedup_directions(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
    }

    #[test]
    fn orthant_facets_are_axes() {
        let c = PolyhedralCone::orthant(2, Norm::L2);
        assert!(c.is_pointed() && c.is_full_dim());
        assert_eq!(c.facets().len(), 2);
        assert!(c.contains(&[1.0, 2.0]));
        assert!(!c.contains(&[-1.0, 2.0]));
    }

    #[test]
    fn ray_is_pointed_lower_dimensional() {
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        assert!(c.is_pointed());
        assert!(!c.is_full_dim());
        assert_eq!(c.facets().len(), 3);
        assert!(c.contains(&[2.0, 2.0]));
        assert!(!c.contains(&[2.0, 1.0]));
        assert_eq!(c.boundary_faces().len(), 1);
    }

    #[test]
    fn line_is_not_pointed() {
        let c = PolyhedralCone::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0]], Norm::L2).unwrap();
        assert!(!c.is_pointed());
        assert_eq!(c.require_pointed(), Err(Error::NotPointed));
    }

    #[test]
    fn redundant_and_duplicate_generators_merge() {
        let c = PolyhedralCone::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![2.0, 0.0]],
            Norm::Linf,
        )
        .unwrap();
        assert_eq!(c.generators().len(), 2);
    }

    #[test]
    fn linf_canonical_generators_have_unit_norm() {
        let c = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], Norm::Linf).unwrap();
        assert!(close(&c.generators()[0], &[1.0, 0.5]));
    }

    #[test]
    fn whole_space_rejected() {
        let r = PolyhedralCone::new(
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
            Norm::L2,
        );
        assert!(r.is_err());
    }

    #[test]
    fn zero_generator_rejected() {
        assert!(PolyhedralCone::new(vec![vec![0.0, 0.0]], Norm::L2).is_err());
    }

    #[test]
    fn halfplane_boundary_is_a_line() {
        let c = PolyhedralCone::new(vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]], Norm::L2).unwrap();
        assert!(c.is_full_dim());
        let faces = c.boundary_faces();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].len(), 2);
    }
}
