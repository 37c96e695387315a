//! Dual cones, strictly positive functionals, augmented pairs and dilations.

use proper_eff::augdual::{
    augmented_alpha_bound, base_from_functional, dual_cone, henig_dilation, strictly_positive_functional,
    AugmentedFunctional,
};
use proper_eff::numlin::{Norm, PolyhedralCone, Space};
use proper_eff::Result;

fn main() -> Result<()> {
    let space = Space::new(2, Norm::L2)?;
    let c = PolyhedralCone::new(vec![vec![1.0, 0.0], vec![1.0, 1.0]], Norm::L2)?;
    println!("C generators {:?}", c.generators());
    println!("C* generators {:?}", dual_cone(&c)?.generators());

    let f = strictly_positive_functional(&c)?;
    let alpha_max = augmented_alpha_bound(&c, &f, &space)?;
    println!("f = {f:?}, admissible alpha in (0, {alpha_max})");
    let fa = AugmentedFunctional::new(&c, f.clone(), alpha_max / 2.0, &space)?;
    for x in [[1.0, 0.0], [1.0, 1.0], [-1.0, 0.0]] {
        println!("f(x) - alpha|x| at {x:?}: {}", fa.eval(&x, Norm::L2));
    }

    let base = base_from_functional(&c, &f)?;
    let v = henig_dilation(&base, base.delta_b / 2.0, &space)?;
    for y in [[1.0, -0.05], [1.0, -1.0], [0.0, 1.0]] {
        println!("{y:?} in the Henig dilation: {:?}", v.member(&y));
    }
    Ok(())
}
