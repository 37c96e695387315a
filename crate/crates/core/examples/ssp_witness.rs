//! Strict separation of two cones and the functional that witnesses it.

use proper_eff::numlin::{Norm, PolyhedralCone, Space};
use proper_eff::separation::{relative_position, ssp_check, ssp_witness};
use proper_eff::Result;

fn main() -> Result<()> {
    for norm in [Norm::Linf, Norm::L1, Norm::L2] {
        let space = Space::new(2, norm)?;
        let c = PolyhedralCone::new(vec![vec![2.0, 1.0], vec![1.0, 2.0]], norm)?;
        let k = PolyhedralCone::orthant(2, norm);
        let v = ssp_check(&c, &k, &space)?;
        println!("{norm:?}: holds {} exact {} bracket {:?}", v.holds, v.exact, v.bracket);
        if !v.holds {
            // The L1 sphere is flat along x + y = 1, so C's section touches K's.
            continue;
        }
        let w = ssp_witness(&c, &k, &space)?;
        println!("  witness f {:?}, delta1 {}, delta2 {}", w.f, w.delta1, w.delta2);
        println!("  admissible alphas {:?}", w.alphas(3));
        println!("  C sits {:?} of K", relative_position(&c, &k)?);
    }

    let space = Space::new(2, Norm::Linf)?;
    let q = PolyhedralCone::orthant(2, Norm::Linf);
    println!("SSP(orthant, orthant) holds: {}", ssp_check(&q, &q, &space)?.holds);
    Ok(())
}
