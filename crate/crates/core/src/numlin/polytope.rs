use super::{check_dim, combo, dedup_points, linalg, LinearProgram, RelOp, Sense, Vector};
use crate::{Error, Result, TAU_GEOM};

/// Convex hull of a finite, irredundant vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<Vector>,
}

impl Polytope {
    /// Canonicalize: drop duplicates and vertices lying in the hull of the rest.
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidInput("polytope needs at least one vertex".into()));
        };
        let dim = first.len();
        for v in &vertices {
            check_dim(dim, v)?;
        }
        let mut vs = dedup_points(vertices, TAU_GEOM);
        let mut i = 0;
        while i < vs.len() && vs.len() > 1 {
            let others: Vec<Vector> = vs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
            if hull_contains(&others, &vs[i])? {
                vs.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Polytope { vertices: vs })
    }

    pub fn point(p: Vector) -> Self {
        Polytope { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn contains(&self, y: &[f64]) -> Result<bool> {
        check_dim(self.dim(), y)?;
        hull_contains(&self.vertices, y)
    }

    pub fn translate(&self, t: &[f64]) -> Polytope {
        Polytope { vertices: self.vertices.iter().map(|v| super::add(v, t)).collect() }
    }

    pub fn centroid(&self) -> Vector {
        let w = vec![1.0 / self.vertices.len() as f64; self.vertices.len()];
        combo(&self.vertices, &w, self.dim())
    }
}

/// LP test of `y` in conv(points).
pub(crate) fn hull_contains(points: &[Vector], y: &[f64]) -> Result<bool> {
    let k = points.len();
    let mut lp = LinearProgram::new(k);
    lp.nonneg(0..k);
    for i in 0..y.len() {
        lp.add(points.iter().map(|p| p[i]).collect(), RelOp::Eq, y[i])?;
    }
    lp.add(vec![1.0; k], RelOp::Eq, 1.0)?;
    lp.objective(&vec![0.0; k], Sense::Min);
    Ok(lp.solve()?.is_feasible())
}

/// Vertices of `{x : a_i . x <= b_i}` by enumerating n-subsets of rows.
pub fn vertex_enumeration(halfspaces: &[(Vector, f64)], n: usize) -> Vec<Vector> {
    let m = halfspaces.len();
    let mut out = Vec::new();
    if m < n {
        return out;
    }
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vector> = idx.iter().map(|&i| halfspaces[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| halfspaces[i].1).collect();
        if let Some(x) = linalg::solve_square(&rows, &b) {
            let feasible = halfspaces.iter().all(|(a, bb)| {
                super::dot(a, &x) <= bb + 1e-9 * (1.0 + bb.abs())
            });
            if feasible {
                out.push(x);
            }
        }
        // Next combination in lexicographic order.
        let mut k = n;
        loop {
            if k == 0 {
                return dedup_points(out, 1e-9);
            }
            k -= 1;
            if idx[k] < m - n + k {
                idx[k] += 1;
                for j in k + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn redundant_vertex_removed() {
        let p = Polytope::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn unit_square_vertices() {
        let hs = vec![
            (vec![1.0, 0.0], 1.0),
            (vec![-1.0, 0.0], 0.0),
            (vec![0.0, 1.0], 1.0),
            (vec![0.0, -1.0], 0.0),
        ];
        let vs = vertex_enumeration(&hs, 2);
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn membership() {
        let p = Polytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(p.contains(&[0.2, 0.2]).unwrap());
        assert!(!p.contains(&[0.8, 0.8]).unwrap());
    }
}
