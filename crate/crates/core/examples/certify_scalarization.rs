//! Find a sublinear scalarization minimized only at the query point.

use proper_eff::augdual::AugmentedFunctional;
use proper_eff::efficiency::FeasibleSet;
use proper_eff::numlin::{Norm, PolyhedralCone, Polytope, Space};
use proper_eff::scalarize::{certify_benson, minimize_g, ScalarProblem, DEFAULT_BUDGET};
use proper_eff::Result;

fn main() -> Result<()> {
    let space = Space::new(2, Norm::Linf)?;
    let c = PolyhedralCone::orthant(2, Norm::Linf);
    let a = FeasibleSet::new(vec![
        Polytope::new(vec![vec![0.0, 3.0], vec![1.0, 1.0], vec![3.0, 0.0]])?,
        Polytope::point(vec![4.0, -1.0]),
    ])?;
    let x0 = vec![1.0, 1.0];

    let cert = certify_benson(&a, &c, &x0, &space, DEFAULT_BUDGET, 0)?;
    match cert.certificate() {
        Some(s) => println!("certificate f = {:?}, alpha = {} from {:?}", s.f, s.alpha, s.source),
        None => println!("no certificate: {:?}", cert.outcome),
    }

    let fa = AugmentedFunctional::new(&c, vec![1.0, 1.0], 0.5, &space)?;
    let sol = minimize_g(&ScalarProblem::new(fa, x0, a, space)?)?;
    println!("min g = {}, minimizers {:?}", sol.min_value, sol.minimizers);
    Ok(())
}
