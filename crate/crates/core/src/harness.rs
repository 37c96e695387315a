//! Seeded instance generation and brute-force oracles.
//!
//! The oracles recompute each notion from its definition by sampling and
//! local refinement. They use only vector arithmetic and small dense linear
//! algebra, never the LPs behind the classifiers.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::{is_approx_benson, sufficient_condition, ApproxSet, ApproxSpec};
use crate::augdual::{augmented_alpha_bound, strictly_positive_functional, AugmentedFunctional};
use crate::efficiency::{
    benson_cone, chain_violations, classify, is_benson, is_borwein, is_hurwicz, is_min, is_tbo, verify_separating,
    Certificate, FeasibleSet, HenigSearch, Notion, Verdict,
};
use crate::numlin::{dot, norm2, scale, sub, Norm, PolyhedralCone, Polytope, Space, Vector};
use crate::scalarize::{certify_benson, g_eval, DEFAULT_BUDGET};
use crate::separation::{relative_position, ssp_check, ssp_witness, SspWitness};
use crate::{Error, Result, TAU_GEOM};

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceSeed {
    pub seed: u64,
    pub dim: usize,
    pub block_count: usize,
    pub vertices_per_block: usize,
    pub cone_generators: usize,
    pub norm: Norm,
}

impl InstanceSeed {
    /// Sizes drawn from the seed itself: dimension 2 or 3, at most four of
    /// everything, any norm.
    pub fn from_seed(seed: u64) -> InstanceSeed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
        InstanceSeed {
            seed,
            dim: rng.gen_range(2..=3),
            block_count: rng.gen_range(1..=4),
            vertices_per_block: rng.gen_range(1..=4),
            cone_generators: rng.gen_range(2..=4),
            norm: [Norm::L1, Norm::L2, Norm::Linf][rng.gen_range(0..3)],
        }
    }

    pub fn with_norm(self, norm: Norm) -> InstanceSeed {
        InstanceSeed { norm, ..self }
    }
}

/// A generated problem with its query point.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub seed: InstanceSeed,
    pub a: FeasibleSet,
    pub c: PolyhedralCone,
    pub space: Space,
    pub x0: Vector,
}

fn int_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v: Vector = (0..dim).map(|_| rng.gen_range(-4..=4) as f64).collect();
        if v.iter().any(|x| *x != 0.0) {
            return v;
        }
    }
}

/// Pointed, full-dimensional cone with integer generators, by rejection.
pub fn generate_cone(rng: &mut ChaCha8Rng, dim: usize, max_generators: usize, norm: Norm) -> PolyhedralCone {
    let max = max_generators.max(dim);
    loop {
        let m = rng.gen_range(dim..=max);
        let gens = (0..m).map(|_| int_vector(rng, dim)).collect();
        if let Ok(c) = PolyhedralCone::new(gens, norm) {
            if c.is_pointed() && c.is_full_dim() {
                return c;
            }
        }
    }
}

/// Deterministic instance. Half of the query points minimize a strictly
/// positive functional over the vertices, so efficient points are common.
pub fn generate_instance(seed: &InstanceSeed) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
    let c = generate_cone(&mut rng, seed.dim, seed.cone_generators, seed.norm);
    let blocks: Vec<Polytope> = (0..seed.block_count.max(1))
        .map(|_| {
            let k = rng.gen_range(1..=seed.vertices_per_block.max(1));
            let vs = (0..k).map(|_| (0..seed.dim).map(|_| rng.gen_range(-4..=4) as f64).collect()).collect();
            Polytope::new(vs).expect("integer vertices form a polytope")
        })
        .collect();
    let a = FeasibleSet::new(blocks).expect("blocks share one dimension");
    let verts: Vec<Vector> = a.vertices().cloned().collect();
    let x0 = if rng.gen_bool(0.5) {
        let w: Vec<f64> = (0..c.facets().len()).map(|_| rng.gen_range(0.5..1.5)).collect();
        let f = c.facets().iter().zip(&w).fold(vec![0.0; seed.dim], |acc, (a, t)| crate::numlin::add(&acc, &scale(a, *t)));
        verts.iter().min_by(|p, q| dot(&f, p).total_cmp(&dot(&f, q))).unwrap().clone()
    } else {
        verts[rng.gen_range(0..verts.len())].clone()
    };
    let space = Space::new(seed.dim, seed.norm).expect("dimension is positive");
    Instance { seed: *seed, a, c, space, x0 }
}

/// Euclidean projection onto a finitely generated cone by enumerating
/// linearly independent generator subsets.
#[derive(Debug, Clone)]
pub struct ConeProjector {
    dim: usize,
    // (generator columns, least-squares map onto their coefficients)
    subsets: Vec<(DMatrix<f64>, DMatrix<f64>)>,
}

impl ConeProjector {
    pub fn new(gens: &[Vector], dim: usize) -> ConeProjector {
        let m = gens.len();
        let mut subsets = Vec::new();
        for mask in 1u32..(1u32 << m) {
            let idx: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            if idx.len() > dim {
                continue;
            }
            let g = DMatrix::from_fn(dim, idx.len(), |i, j| gens[idx[j]][i]);
            let gram = g.transpose() * &g;
            let scale = gram.diagonal().max();
            if gram.determinant().abs() <= 1e-10 * scale.powi(idx.len() as i32) {
                continue;
            }
            if let Some(inv) = gram.try_inverse() {
                let map = inv * g.transpose();
                subsets.push((g, map));
            }
        }
        ConeProjector { dim, subsets }
    }

    /// Euclidean distance from `y` to the cone.
    pub fn distance(&self, y: &[f64]) -> f64 {
        let v = DMatrix::from_column_slice(self.dim, 1, y);
        let mut best = norm2(y);
        for (g, map) in &self.subsets {
            let coef = map * &v;
            if coef.iter().all(|c| *c >= -1e-12) {
                best = best.min((&v - g * coef).norm());
            }
        }
        best
    }
}

/// How densely an oracle samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleGrid {
    /// Random convex combinations per generator list.
    pub samples: usize,
    /// Steps along each segment between two generators.
    pub segment_steps: usize,
    /// Starting points handed to the local refinement.
    pub starts: usize,
    pub seed: u64,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid { samples: 200, segment_steps: 8, starts: 4, seed: 0 }
    }
}

/// Brute-force answer: `efficient` is false when some sampled direction lies
/// within `1e-6` (relative) of `-C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleVerdict {
    pub efficient: bool,
    /// Smallest relative distance `dist(y, -C) / |y|` found.
    pub margin: f64,
    pub witness: Option<Vector>,
}

/// Relative distance below which a sample counts as a point of `-C`.
pub const ORACLE_HIT: f64 = 1e-6;

fn ratio(gens: &[Vector], w: &[f64], neg_c: &ConeProjector) -> (f64, Vector) {
    let n = gens[0].len();
    let mut y = vec![0.0; n];
    for (g, t) in gens.iter().zip(w) {
        for i in 0..n {
            y[i] += t * g[i];
        }
    }
    let len = norm2(&y);
    let scale = gens.iter().map(|g| norm2(g)).fold(0.0, f64::max);
    if len <= 1e-9 * scale.max(1.0) {
        return (f64::INFINITY, y);
    }
    (neg_c.distance(&y) / len, y)
}

fn dirichlet(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..m).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|t| *t /= s);
    w
}

/// Minimize `dist(y, -C) / |y|` over `y` in the convex hull of `gens`.
fn sweep(gens: &[Vector], neg_c: &ConeProjector, grid: &OracleGrid, rng: &mut ChaCha8Rng) -> (f64, Vector) {
    let m = gens.len();
    let mut cands: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        let mut w = vec![0.0; m];
        w[i] = 1.0;
        cands.push(w);
        for j in i + 1..m {
            for s in 1..grid.segment_steps {
                let t = s as f64 / grid.segment_steps as f64;
                let mut w = vec![0.0; m];
                w[i] = 1.0 - t;
                w[j] = t;
                cands.push(w);
            }
        }
    }
    for _ in 0..grid.samples {
        cands.push(dirichlet(rng, m));
    }
    let mut scored: Vec<(f64, Vec<f64>)> = cands.into_iter().map(|w| (ratio(gens, &w, neg_c).0, w)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = (f64::INFINITY, vec![0.0; gens[0].len()]);
    for (r0, w0) in scored.into_iter().take(grid.starts) {
        let (r, w) = refine(gens, w0, r0, neg_c, rng);
        if r < best.0 {
            best = (r, ratio(gens, &w, neg_c).1);
        }
        if best.0 <= ORACLE_HIT * 1e-3 {
            break;
        }
    }
    best
}

/// Pattern search on the simplex: move weight between pairs of generators,
/// halving the step on failure.
fn refine(gens: &[Vector], mut w: Vec<f64>, mut r: f64, neg_c: &ConeProjector, rng: &mut ChaCha8Rng) -> (f64, Vec<f64>) {
    let m = gens.len();
    if m < 2 || !r.is_finite() {
        return (r, w);
    }
    let mut step: f64 = 0.25;
    let mut evals = 0;
    while step > 1e-12 && evals < 4000 && r > ORACLE_HIT * 1e-3 {
        let mut improved = false;
        let pairs: Vec<(usize, usize)> = if m * (m - 1) <= 40 {
            (0..m).flat_map(|i| (0..m).filter(move |j| *j != i).map(move |j| (i, j))).collect()
        } else {
            (0..40).map(|_| (rng.gen_range(0..m), rng.gen_range(0..m))).filter(|(i, j)| i != j).collect()
        };
        for (i, j) in pairs {
            let d = step.min(w[i]);
            if d <= 0.0 {
                continue;
            }
            let mut t = w.clone();
            t[i] -= d;
            t[j] += d;
            let (rt, _) = ratio(gens, &t, neg_c);
            evals += 1;
            if rt < r {
                r = rt;
                w = t;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (r, w)
}

fn nonzero_shifted(vs: &[Vector], x0: &[f64]) -> Vec<Vector> {
    vs.iter().map(|v| sub(v, x0)).filter(|d| norm2(d) > 1e-12).collect()
}

fn run(lists: &[Vec<Vector>], c: &PolyhedralCone, grid: &OracleGrid) -> OracleVerdict {
    let neg_c = ConeProjector::new(c.neg().generators(), c.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
    let mut best = (f64::INFINITY, None);
    for gens in lists.iter().filter(|g| !g.is_empty()) {
        let (r, y) = sweep(gens, &neg_c, grid, &mut rng);
        if r < best.0 {
            best = (r, Some(y));
        }
    }
    let efficient = best.0 > ORACLE_HIT;
    OracleVerdict { efficient, margin: best.0, witness: if efficient { None } else { best.1 } }
}

/// Min by sampling points `p` of `A` with `p - x0` in `-C \ {0}`.
pub fn oracle_min(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], grid: &OracleGrid) -> OracleVerdict {
    // A ratio test over the convex hull of the shifted vertices is a test
    // over the points of the block itself.
    let lists: Vec<Vec<Vector>> = a
        .blocks
        .iter()
        .map(|b| b.vertices().iter().map(|v| sub(v, x0)).collect::<Vec<_>>())
        .filter(|vs: &Vec<Vector>| vs.iter().any(|d| norm2(d) > 1e-12))
        .collect();
    run(&lists, c, grid)
}

/// Borwein: directions of `A - x0`.
pub fn oracle_borwein(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], grid: &OracleGrid) -> OracleVerdict {
    let lists: Vec<Vec<Vector>> = a.blocks.iter().map(|b| nonzero_shifted(b.vertices(), x0)).collect();
    run(&lists, c, grid)
}

/// Benson: directions `s (p - x0) + k` with `p` in a block and `k` in `C`.
pub fn oracle_benson(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], grid: &OracleGrid) -> OracleVerdict {
    let lists: Vec<Vec<Vector>> = a
        .blocks
        .iter()
        .map(|b| {
            let mut g = nonzero_shifted(b.vertices(), x0);
            g.extend(c.generators().iter().cloned());
            g
        })
        .collect();
    run(&lists, c, grid)
}

/// Hurwicz: nonnegative combinations across all blocks and `C`.
pub fn oracle_hurwicz(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], grid: &OracleGrid) -> OracleVerdict {
    let mut g: Vec<Vector> = a.blocks.iter().flat_map(|b| nonzero_shifted(b.vertices(), x0)).collect();
    g.extend(c.generators().iter().cloned());
    run(&[g], c, grid)
}

/// `x0` in `P + C`, as membership of `(x0, 1)` in the cone over `(v, 1)`
/// and `(g, 0)`.
fn oracle_in_polytope_plus_cone(p: &Polytope, c: &PolyhedralCone, x0: &[f64]) -> bool {
    let n = x0.len();
    let mut gens: Vec<Vector> = p.vertices().iter().map(|v| v.iter().copied().chain([1.0]).collect()).collect();
    gens.extend(c.generators().iter().map(|g| g.iter().copied().chain([0.0]).collect()));
    let y: Vector = x0.iter().copied().chain([1.0]).collect();
    ConeProjector::new(&gens, n + 1).distance(&y) <= TAU_GEOM * norm2(&y).max(1.0)
}

/// TBo: Benson directions of the blocks with `x0 in P + C`.
pub fn oracle_tbo(a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], grid: &OracleGrid) -> OracleVerdict {
    let lists: Vec<Vec<Vector>> = a
        .blocks
        .iter()
        .filter(|b| oracle_in_polytope_plus_cone(b, c, x0))
        .map(|b| {
            let mut g = nonzero_shifted(b.vertices(), x0);
            g.extend(c.generators().iter().cloned());
            g
        })
        .collect();
    run(&lists, c, grid)
}

/// Run the oracle of a notion that has one.
pub fn oracle_for(notion: Notion, a: &FeasibleSet, c: &PolyhedralCone, x0: &[f64], grid: &OracleGrid) -> Option<OracleVerdict> {
    Some(match notion {
        Notion::Min => oracle_min(a, c, x0, grid),
        Notion::Bo => oracle_borwein(a, c, x0, grid),
        Notion::Be => oracle_benson(a, c, x0, grid),
        Notion::Hu => oracle_hurwicz(a, c, x0, grid),
        Notion::TBo => oracle_tbo(a, c, x0, grid),
        _ => return None,
    })
}

/// Notions with a brute-force oracle.
pub const ORACLE_NOTIONS: [Notion; 5] = [Notion::Min, Notion::Be, Notion::Bo, Notion::Hu, Notion::TBo];

/// Violation counts of the witness inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SepStats {
    pub samples: usize,
    pub violations_c: usize,
    pub violations_k: usize,
}

impl SepStats {
    pub fn passed(&self) -> bool {
        self.violations_c == 0 && self.violations_k == 0
    }
}

fn cone_sample(rng: &mut ChaCha8Rng, gens: &[Vector], n: usize) -> Vector {
    let mut y = vec![0.0; n];
    let k = rng.gen_range(1..=gens.len());
    for _ in 0..k {
        let g = &gens[rng.gen_range(0..gens.len())];
        let t: f64 = rng.gen_range(0.0..1.0);
        for i in 0..n {
            y[i] += t * g[i];
        }
    }
    y
}

/// Sample `x in -C \ {0}` and `y in bd(-K) \ {0}` and count failures of
/// `f(x) + alpha ||x|| < 0 < f(y) + alpha ||y||` at `alpha`.
pub fn oracle_sep_inequalities(
    witness: &SspWitness,
    alpha: f64,
    c: &PolyhedralCone,
    k: &PolyhedralCone,
    space: &Space,
    samples: usize,
    seed: u64,
) -> Result<SepStats> {
    if !(witness.delta1 < alpha && alpha < witness.delta2) {
        return Err(Error::InvalidInput(format!("alpha {alpha} outside ({}, {})", witness.delta1, witness.delta2)));
    }
    let n = space.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &witness.f;
    let faces = k.boundary_faces();
    let mut stats = SepStats { samples, violations_c: 0, violations_k: 0 };
    for _ in 0..samples {
        let x = scale(&cone_sample(&mut rng, c.generators(), n), -1.0);
        let nx = space.norm.of(&x);
        if nx > 1e-12 && dot(f, &x) + alpha * nx >= -TAU_GEOM * nx {
            stats.violations_c += 1;
        }
        let face = &faces[rng.gen_range(0..faces.len())];
        let y = scale(&cone_sample(&mut rng, face, n), -1.0);
        let ny = space.norm.of(&y);
        if ny > 1e-12 && dot(f, &y) + alpha * ny <= TAU_GEOM * ny {
            stats.violations_k += 1;
        }
    }
    Ok(stats)
}

/// Sample `y` outside `int(-K)` and count failures of `f(y) + alpha ||y|| > 0`.
pub fn oracle_sep_extension(
    witness: &SspWitness,
    alpha: f64,
    k: &PolyhedralCone,
    space: &Space,
    samples: usize,
    seed: u64,
) -> SepStats {
    let n = space.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let neg_k = k.neg();
    let mut stats = SepStats { samples: 0, violations_c: 0, violations_k: 0 };
    while stats.samples < samples {
        let y: Vector = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if norm2(&y) < 1e-6 || neg_k.interior_contains(&y) {
            continue;
        }
        stats.samples += 1;
        let ny = space.norm.of(&y);
        if dot(&witness.f, &y) + alpha * ny <= TAU_GEOM * ny {
            stats.violations_k += 1;
        }
    }
    stats
}

/// Sample ordered pairs `y = x + k`, `k in C \ {0}`, and count failures of
/// `g(x) < g(y)`.
pub fn oracle_strong_monotonicity(fa: &AugmentedFunctional, x0: &[f64], c: &PolyhedralCone, space: &Space, samples: usize, seed: u64) -> Result<usize> {
    let n = space.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let x: Vector = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let k = cone_sample(&mut rng, c.generators(), n);
        if norm2(&k) < 1e-9 {
            continue;
        }
        let y = crate::numlin::add(&x, &k);
        if g_eval(fa, x0, &x, space)? >= g_eval(fa, x0, &y, space)? {
            violations += 1;
        }
    }
    Ok(violations)
}

/// One line of the self-test table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub suite: String,
    pub checked: usize,
    pub failures: usize,
    pub skipped: usize,
}

impl SuiteRow {
    fn new(suite: &str) -> SuiteRow {
        SuiteRow { suite: suite.into(), checked: 0, failures: 0, skipped: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub count: usize,
    pub rows: Vec<SuiteRow>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.failures == 0)
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:<28} {:>8} {:>9} {:>8}\n", "suite", "checked", "failures", "skipped");
        for r in &self.rows {
            s.push_str(&format!("{:<28} {:>8} {:>9} {:>8}\n", r.suite, r.checked, r.failures, r.skipped));
        }
        s
    }
}

/// Inclusion chain over all ten notions: counts instances with a violated
/// inclusion between certified verdicts.
pub fn suite_chain(instances: &[Instance]) -> Result<(SuiteRow, Vec<Certificate>)> {
    let mut row = SuiteRow::new("inclusion chain");
    let mut certs = Vec::new();
    for inst in instances {
        let report = classify(&inst.a, &inst.c, &inst.x0, &inst.space, &Notion::ALL, &HenigSearch::default())?;
        row.checked += 1;
        if !chain_violations(&report).is_empty() {
            row.failures += 1;
        }
        certs.extend(report.verdicts.into_values().filter_map(|v| match v {
            Verdict::Yes(c) => Some(c),
            _ => None,
        }));
    }
    Ok((row, certs))
}

/// Re-check every certificate of a Benson-or-stronger notion through an
/// independent Benson check of the same instance.
pub fn suite_soundness(instances: &[Instance]) -> Result<SuiteRow> {
    let mut row = SuiteRow::new("certificate soundness");
    for inst in instances {
        let report = classify(&inst.a, &inst.c, &inst.x0, &inst.space, &Notion::ALL, &HenigSearch::default())?;
        let stronger = [Notion::Pos, Notion::Hu, Notion::Be, Notion::Ha, Notion::GHe, Notion::SE];
        let certified = stronger.iter().any(|n| report.verdicts.get(n).is_some_and(|v| v.is_yes()));
        if !certified {
            continue;
        }
        row.checked += 1;
        let ok = match is_benson(&inst.a, &inst.c, &inst.x0)? {
            Verdict::Yes(Certificate::Separating { functionals }) => {
                verify_separating(&functionals, &benson_cone(&inst.a, &inst.c, &inst.x0), &inst.c)
                    && oracle_benson(&inst.a, &inst.c, &inst.x0, &OracleGrid::default()).efficient
            }
            _ => false,
        };
        if !ok {
            row.failures += 1;
        }
    }
    Ok(row)
}

/// Classifier against oracle for Min, Be, Bo, Hu and TBo.
pub fn suite_oracles(instances: &[Instance], grid: &OracleGrid) -> Result<SuiteRow> {
    let mut row = SuiteRow::new("oracle agreement");
    for inst in instances {
        for n in ORACLE_NOTIONS {
            let v = match n {
                Notion::Min => is_min(&inst.a, &inst.c, &inst.x0)?,
                Notion::Be => is_benson(&inst.a, &inst.c, &inst.x0)?,
                Notion::Bo => is_borwein(&inst.a, &inst.c, &inst.x0)?,
                Notion::Hu => is_hurwicz(&inst.a, &inst.c, &inst.x0)?,
                _ => is_tbo(&inst.a, &inst.c, &inst.x0)?,
            };
            if v.is_unknown() {
                row.skipped += 1;
                continue;
            }
            row.checked += 1;
            let o = oracle_for(n, &inst.a, &inst.c, &inst.x0, grid).expect("oracle notion");
            if o.efficient != v.is_yes() {
                row.failures += 1;
            }
        }
    }
    Ok(row)
}

/// Every Yes of the augmented-functional sufficient condition must agree with
/// the exact approximate Benson check. `D` is the generator list of `C`.
pub fn suite_approx_soundness(instances: &[Instance]) -> Result<SuiteRow> {
    let mut row = SuiteRow::new("approx sufficient condition");
    for (i, inst) in instances.iter().enumerate() {
        let eps = [0.05, 0.25, 1.0][i % 3];
        let spec = ApproxSpec::new(ApproxSet::Points(inst.c.generators().to_vec()), eps, &inst.c)?;
        let f = strictly_positive_functional(&inst.c)?;
        let alpha = augmented_alpha_bound(&inst.c, &f, &inst.space)? / 2.0;
        let fa = AugmentedFunctional::new(&inst.c, f, alpha, &inst.space)?;
        if !sufficient_condition(&inst.a, &spec, &inst.x0, &fa, &inst.space)?.is_yes() {
            row.skipped += 1;
            continue;
        }
        row.checked += 1;
        if !is_approx_benson(&inst.a, &inst.c, &spec, &inst.x0)?.is_yes() {
            row.failures += 1;
        }
    }
    Ok(row)
}

/// Pairs `(C, K)` of generated cones for which SSP holds.
pub fn ssp_pairs(seed: u64, count: usize, norms: &[Norm]) -> Result<Vec<(PolyhedralCone, PolyhedralCone, Space)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 200 * count.max(1) {
            return Err(Error::NumericalFailure("too few SSP-holding pairs generated".into()));
        }
        let dim = rng.gen_range(2..=3);
        let norm = norms[rng.gen_range(0..norms.len())];
        let c = generate_cone(&mut rng, dim, 3, norm);
        let k = generate_cone(&mut rng, dim, 4, norm);
        let space = Space::new(dim, norm)?;
        if ssp_check(&c, &k, &space)?.holds {
            out.push((c, k, space));
        }
    }
    Ok(out)
}

/// Witness inequalities on SSP-holding pairs, ten alphas per witness.
pub fn suite_witness(pairs: &[(PolyhedralCone, PolyhedralCone, Space)], samples: usize) -> Result<(SuiteRow, SuiteRow)> {
    let mut row = SuiteRow::new("witness inequalities");
    let mut ext = SuiteRow::new("witness extension");
    for (i, (c, k, space)) in pairs.iter().enumerate() {
        let w = ssp_witness(c, k, space)?;
        let meets = c.generators().iter().any(|g| k.contains(g));
        for (j, alpha) in w.alphas(10).into_iter().enumerate() {
            row.checked += 1;
            let seed = (i * 10 + j) as u64;
            if !oracle_sep_inequalities(&w, alpha, c, k, space, samples, seed)?.passed() {
                row.failures += 1;
            }
            if meets {
                ext.checked += 1;
                if !oracle_sep_extension(&w, alpha, k, space, samples, seed).passed() {
                    ext.failures += 1;
                }
            } else {
                ext.skipped += 1;
            }
        }
    }
    Ok((row, ext))
}

/// The relative-position dichotomy never fails under SSP.
pub fn suite_dichotomy(pairs: &[(PolyhedralCone, PolyhedralCone, Space)]) -> SuiteRow {
    let mut row = SuiteRow::new("relative position");
    for (c, k, _) in pairs {
        row.checked += 1;
        if relative_position(c, k).is_err() {
            row.failures += 1;
        }
    }
    row
}

/// `SSP(C, K) = SSP(-C, -K) = SSP(C', K)` with `C'` the same cone given by a
/// redundant generator list.
pub fn suite_symmetry(seed: u64, count: usize) -> Result<SuiteRow> {
    let mut row = SuiteRow::new("ssp symmetry");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let dim = rng.gen_range(2..=3);
        let norm = [Norm::L1, Norm::L2, Norm::Linf][rng.gen_range(0..3)];
        let c = generate_cone(&mut rng, dim, 3, norm);
        let k = generate_cone(&mut rng, dim, 4, norm);
        let space = Space::new(dim, norm)?;
        let base = ssp_check(&c, &k, &space)?.holds;
        let neg = ssp_check(&c.neg(), &k.neg(), &space)?.holds;
        let mut gens = c.generators().to_vec();
        gens.push(gens.iter().fold(vec![0.0; dim], |acc, g| crate::numlin::add(&acc, g)));
        let hull = ssp_check(&PolyhedralCone::new(gens, norm)?, &k, &space)?.holds;
        row.checked += 1;
        if base != neg || base != hull {
            row.failures += 1;
        }
    }
    Ok(row)
}

/// Strong monotonicity of `g` on generated instances.
pub fn suite_monotonicity(instances: &[Instance], samples: usize) -> Result<SuiteRow> {
    let mut row = SuiteRow::new("strong monotonicity");
    for (i, inst) in instances.iter().enumerate() {
        let f = strictly_positive_functional(&inst.c)?;
        let alpha = augmented_alpha_bound(&inst.c, &f, &inst.space)? / 2.0;
        let fa = AugmentedFunctional::new(&inst.c, f, alpha, &inst.space)?;
        row.checked += 1;
        if oracle_strong_monotonicity(&fa, &inst.x0, &inst.c, &inst.space, samples, i as u64)? > 0 {
            row.failures += 1;
        }
    }
    Ok(row)
}

/// LINF instances where the Benson cone has SSP with `-C` and `x0` is
/// Benson efficient; counts those without a certificate in the budget.
pub fn suite_necessity(seed: u64, count: usize) -> Result<SuiteRow> {
    let mut row = SuiteRow::new("scalarization necessity");
    let mut s = seed;
    let mut attempts = 0;
    while row.checked < count {
        attempts += 1;
        if attempts > 100 * count.max(1) {
            return Err(Error::NumericalFailure("too few instances for the necessity suite".into()));
        }
        let inst = generate_instance(&InstanceSeed::from_seed(s).with_norm(Norm::Linf));
        s = s.wrapping_add(1);
        if !is_benson(&inst.a, &inst.c, &inst.x0)?.is_yes() {
            continue;
        }
        let cert = certify_benson(&inst.a, &inst.c, &inst.x0, &inst.space, DEFAULT_BUDGET, 0)?;
        if !cert.ssp.as_ref().is_some_and(|v| v.holds) {
            continue;
        }
        row.checked += 1;
        if cert.certificate().is_none() {
            row.failures += 1;
        }
    }
    Ok(row)
}

pub fn instances(seed: u64, count: usize) -> Vec<Instance> {
    (0..count as u64).map(|i| generate_instance(&InstanceSeed::from_seed(seed.wrapping_add(i)))).collect()
}

/// Every seeded suite at the given size.
pub fn selftest(seed: u64, count: usize) -> Result<SelftestReport> {
    let insts = instances(seed, count);
    let mut rows = Vec::new();
    rows.push(suite_chain(&insts)?.0);
    rows.push(suite_soundness(&insts)?);
    rows.push(suite_approx_soundness(&insts)?);
    rows.push(suite_oracles(&insts, &OracleGrid { seed, ..OracleGrid::default() })?);
    let small = count.clamp(1, 50);
    let pairs = ssp_pairs(seed, small, &[Norm::L1, Norm::L2, Norm::Linf])?;
    let (w, e) = suite_witness(&pairs, 1000)?;
    rows.push(w);
    rows.push(e);
    rows.push(suite_dichotomy(&pairs));
    rows.push(suite_symmetry(seed, small)?);
    rows.push(suite_monotonicity(&insts[..small.min(insts.len())], 1000)?);
    rows.push(suite_necessity(seed, small.min(20))?);
    Ok(SelftestReport { seed, count, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let s = InstanceSeed::from_seed(1);
        assert_eq!(generate_instance(&s), generate_instance(&s));
    }

    #[test]
    fn generated_cones_are_pointed() {
        for seed in 0..1000 {
            let inst = generate_instance(&InstanceSeed::from_seed(seed));
            assert!(inst.c.is_pointed() && inst.c.is_full_dim(), "seed {seed}");
            assert!(inst.a.contains(&inst.x0).unwrap());
        }
    }

    #[test]
    fn single_block_is_convex() {
        let s = InstanceSeed { seed: 3, dim: 2, block_count: 1, vertices_per_block: 4, cone_generators: 2, norm: Norm::L2 };
        assert!(generate_instance(&s).a.is_convex_block());
    }

    #[test]
    fn projector_matches_orthant() {
        let p = ConeProjector::new(PolyhedralCone::orthant(3, Norm::L2).generators(), 3);
        assert!((p.distance(&[-1.0, 2.0, -2.0]) - 5f64.sqrt()).abs() < 1e-12);
        assert_eq!(p.distance(&[1.0, 2.0, 0.0]), 0.0);
    }

    #[test]
    fn benson_oracle_on_golden_data() {
        // A + D at eps = 1 contains (-1, -1), which lies in -C.
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::L2).unwrap();
        let blocks = vec![
            Polytope::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![-1.0, -1.0]]).unwrap(),
        ];
        let a = FeasibleSet::new(blocks).unwrap();
        let o = oracle_borwein(&a, &c, &[0.0, 0.0], &OracleGrid::default());
        assert!(!o.efficient);
        let y = crate::numlin::unit(&o.witness.unwrap()).unwrap();
        assert!((y[0] + 0.5f64.sqrt()).abs() < 1e-5 && (y[1] + 0.5f64.sqrt()).abs() < 1e-5);
        let single = FeasibleSet::from_points(vec![vec![2.0, 3.0]]).unwrap();
        assert!(oracle_benson(&single, &c, &[2.0, 3.0], &OracleGrid::default()).efficient);
    }

    #[test]
    fn corrupted_witness_is_rejected() {
        assert!(SspWitness::new(vec![1.0, 0.0], 2.0, 1.0).is_err());
        let c = PolyhedralCone::new(vec![vec![1.0, 1.0]], Norm::Linf).unwrap();
        let k = PolyhedralCone::orthant(2, Norm::Linf);
        let s = Space::new(2, Norm::Linf).unwrap();
        let w = ssp_witness(&c, &k, &s).unwrap();
        assert!(oracle_sep_inequalities(&w, w.delta2 + 1.0, &c, &k, &s, 10, 0).is_err());
        let alpha = w.alphas(1)[0];
        assert!(oracle_sep_inequalities(&w, alpha, &c, &k, &s, 10_000, 0).unwrap().passed());
        assert!(oracle_sep_extension(&w, alpha, &k, &s, 10_000, 0).passed());
    }

    #[test]
    fn small_selftest_passes() {
        let r = selftest(42, 20).unwrap();
        assert!(r.passed(), "{}", r.table());
    }
}
