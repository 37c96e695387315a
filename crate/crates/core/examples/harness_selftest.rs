//! Seeded instances checked against brute-force oracles.

use proper_eff::efficiency::is_benson;
use proper_eff::harness::{generate_instance, oracle_benson, selftest, InstanceSeed, OracleGrid};
use proper_eff::Result;

fn main() -> Result<()> {
    for seed in 0..5 {
        let inst = generate_instance(&InstanceSeed::from_seed(seed));
        let exact = is_benson(&inst.a, &inst.c, &inst.x0)?;
        let oracle = oracle_benson(&inst.a, &inst.c, &inst.x0, &OracleGrid::default());
        println!(
            "seed {seed}: dim {}, {} blocks, Benson {} / oracle {} (margin {:.3e})",
            inst.space.dim,
            inst.a.blocks.len(),
            exact.status(),
            oracle.efficient,
            oracle.margin
        );
    }
    let report = selftest(7, 40)?;
    print!("{}", report.table());
    println!("passed: {}", report.passed());
    Ok(())
}
