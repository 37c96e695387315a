//! Classify points of a union of polytopes under the componentwise order.

use proper_eff::efficiency::{chain_violations, classify, FeasibleSet, HenigSearch, Notion};
use proper_eff::numlin::{Norm, PolyhedralCone, Polytope, Space};
use proper_eff::Result;

fn main() -> Result<()> {
    let space = Space::new(2, Norm::Linf)?;
    let c = PolyhedralCone::orthant(2, Norm::Linf);
    let a = FeasibleSet::new(vec![
        Polytope::new(vec![vec![0.0, 3.0], vec![1.0, 1.0], vec![3.0, 0.0]])?,
        Polytope::point(vec![0.0, 2.0]),
        Polytope::point(vec![2.0, 0.0]),
        Polytope::new(vec![vec![2.0, 2.0], vec![3.0, 2.0]])?,
    ])?;
    for x0 in [vec![1.0, 1.0], vec![0.0, 2.0], vec![3.0, 2.0]] {
        let report = classify(&a, &c, &x0, &space, &Notion::ALL, &HenigSearch::default())?;
        println!("x0 = {x0:?}");
        for (notion, verdict) in &report.verdicts {
            println!("  {notion:?}: {}", verdict.status());
        }
        assert!(chain_violations(&report).is_empty());
    }
    Ok(())
}
