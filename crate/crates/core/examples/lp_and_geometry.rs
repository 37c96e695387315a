//! The numeric kernel: a small LP, norms, and distances to cones and hulls.

use proper_eff::numlin::{
    dist_to_cone, min_norm_polyhedron, vertex_enumeration, LinearProgram, Norm, PolyhedralCone, RelOp, Sense, Space,
};
use proper_eff::Result;

fn main() -> Result<()> {
    // max x + 2y  s.t.  x + y <= 4, x <= 3, x, y >= 0
    let mut lp = LinearProgram::new(2);
    lp.nonneg(0..2).objective(&[1.0, 2.0], Sense::Max);
    lp.add(vec![1.0, 1.0], RelOp::Le, 4.0)?;
    lp.add(vec![1.0, 0.0], RelOp::Le, 3.0)?;
    println!("lp: {:?}", lp.solve()?);

    let y = [3.0, -4.0];
    for norm in [Norm::L1, Norm::L2, Norm::Linf] {
        let space = Space::new(2, norm)?;
        let k = PolyhedralCone::orthant(2, norm);
        println!("{norm:?}: |y| = {}, dist(y, R^2_+) = {}", norm.of(&y), dist_to_cone(&y, &k, &space)?);
    }

    let square = vec![vec![1.0, 1.0], vec![2.0, 1.0], vec![2.0, 2.0], vec![1.0, 2.0]];
    for norm in [Norm::L1, Norm::L2, Norm::Linf] {
        let m = min_norm_polyhedron(&square, &[], norm)?;
        println!("{norm:?}: nearest point of the square to 0 is {:?} at {}", m.point, m.value);
    }

    let box_faces = vec![(vec![1.0, 0.0], 1.0), (vec![-1.0, 0.0], 1.0), (vec![0.0, 1.0], 1.0), (vec![0.0, -1.0], 1.0)];
    println!("box vertices: {:?}", vertex_enumeration(&box_faces, 2));
    Ok(())
}
