//! A point that is an approximate minimizer of a sublinear scalarization yet
//! fails approximate Benson efficiency.

use proper_eff::approx::{
    is_amin, is_approx_benson, lambda_bound, sufficient_condition, AMinQuery, ApproxSet, ApproxSpec,
};
use proper_eff::augdual::AugmentedFunctional;
use proper_eff::efficiency::FeasibleSet;
use proper_eff::numlin::{Norm, PolyhedralCone, Polytope, Space};
use proper_eff::Result;

fn main() -> Result<()> {
    let space = Space::new(2, Norm::L2)?;
    let a = FeasibleSet::new(vec![Polytope::new(vec![vec![-1.0, 0.0], vec![0.0, 0.0]])?])?;
    let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2)?;
    let h = 0.5f64.sqrt();
    let d = ApproxSet::Points(vec![vec![1.0, 0.0], vec![h, -h], vec![0.0, -1.0]]);
    let spec = ApproxSpec::new(d, 1.0, &c)?;
    let x0 = vec![0.0, 0.0];

    let fa = AugmentedFunctional::new(&c, vec![1.0, 1.0], 4.0 / 3.0, &space)?;
    let lambda = lambda_bound(&spec, &fa, &space)?;
    println!("lambda = {lambda}");
    println!("x0 in AMin(g, A, lambda): {}", is_amin(&a, &AMinQuery { fa: fa.clone(), x0: x0.clone(), lambda }, &space)?);
    println!("Benson (D, eps): {:?}", is_approx_benson(&a, &c, &spec, &x0)?);
    println!("sufficient condition: {:?}", sufficient_condition(&a, &spec, &x0, &fa, &space)?);
    Ok(())
}
