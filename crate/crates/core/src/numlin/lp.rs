//! Dense two-phase simplex with Bland's anti-cycling rule.

use crate::{Error, Result, TAU_FEAS};

const PIVOT_EPS: f64 = 1e-9;
const COST_EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub op: RelOp,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, op: RelOp, rhs: f64) -> Self {
        Constraint { coeffs, op, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn optimal(&self) -> Option<(f64, &[f64])> {
        match self {
            LpOutcome::Optimal { value, x } => Some((*value, x)),
            _ => None,
        }
    }
}

/// Solve an LP over free variables.
pub fn lp_solve(objective: &[f64], constraints: &[Constraint], sense: Sense) -> Result<LpOutcome> {
    let mut lp = LinearProgram::new(objective.len());
    lp.objective(objective, sense);
    for c in constraints {
        lp.add(c.coeffs.clone(), c.op, c.rhs)?;
    }
    lp.solve()
}

/// LP builder. Variables are free unless marked nonnegative.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    n: usize,
    objective: Vec<f64>,
    sense: Sense,
    rows: Vec<Constraint>,
    nonneg: Vec<bool>,
}

impl LinearProgram {
    pub fn new(n: usize) -> Self {
        LinearProgram {
            n,
            objective: vec![0.0; n],
            sense: Sense::Min,
            rows: Vec::new(),
            nonneg: vec![false; n],
        }
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn nonneg(&mut self, range: std::ops::Range<usize>) -> &mut Self {
        for i in range {
            self.nonneg[i] = true;
        }
        self
    }

    pub fn objective(&mut self, c: &[f64], sense: Sense) -> &mut Self {
        self.objective = c.to_vec();
        self.sense = sense;
        self
    }

    pub fn add(&mut self, coeffs: Vec<f64>, op: RelOp, rhs: f64) -> Result<&mut Self> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !c.is_finite()) || !rhs.is_finite() {
            return Err(Error::InvalidInput("non-finite LP coefficient".into()));
        }
        self.rows.push(Constraint::new(coeffs, op, rhs));
        Ok(self)
    }

    /// Add a constraint given as sparse `(index, coefficient)` pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, f64)], op: RelOp, rhs: f64) -> &mut Self {
        let mut coeffs = vec![0.0; self.n];
        for &(i, c) in terms {
            coeffs[i] += c;
        }
        self.rows.push(Constraint::new(coeffs, op, rhs));
        self
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        if self.objective.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: self.objective.len() });
        }
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// m rows of `cols + 1` entries; the last entry is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    /// First artificial column.
    art: usize,
    /// Column index of each original variable: (plus, optional minus).
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.n);
        let mut next = 0;
        for i in 0..lp.n {
            if lp.nonneg[i] {
                var_cols.push((next, None));
                next += 1;
            } else {
                var_cols.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let structural = next;
        // Normalize to nonnegative right-hand sides.
        let rows: Vec<(Vec<f64>, RelOp, f64)> = lp
            .rows
            .iter()
            .map(|r| {
                if r.rhs < 0.0 {
                    let op = match r.op {
                        RelOp::Le => RelOp::Ge,
                        RelOp::Ge => RelOp::Le,
                        RelOp::Eq => RelOp::Eq,
                    };
                    (r.coeffs.iter().map(|c| -c).collect(), op, -r.rhs)
                } else {
                    (r.coeffs.clone(), r.op, r.rhs)
                }
            })
            .collect();
        let slack_count = rows.iter().filter(|r| r.1 != RelOp::Eq).count();
        let art_count = rows.iter().filter(|r| r.1 != RelOp::Le).count();
        let art = structural + slack_count;
        let cols = art + art_count;
        let mut t = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut s, mut a) = (structural, art);
        for (coeffs, op, rhs) in rows {
            let mut row = vec![0.0; cols + 1];
            for (i, c) in coeffs.iter().enumerate() {
                let (p, m) = var_cols[i];
                row[p] = *c;
                if let Some(m) = m {
                    row[m] = -c;
                }
            }
            row[cols] = rhs;
            match op {
                RelOp::Le => {
                    row[s] = 1.0;
                    basis.push(s);
                    s += 1;
                }
                RelOp::Ge => {
                    row[s] = -1.0;
                    s += 1;
                    row[a] = 1.0;
                    basis.push(a);
                    a += 1;
                }
                RelOp::Eq => {
                    row[a] = 1.0;
                    basis.push(a);
                    a += 1;
                }
            }
            t.push(row);
        }
        Tableau { t, basis, cols, art, var_cols }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.cols + 1;
        let p = self.t[r][c];
        for j in 0..width {
            self.t[r][j] /= p;
        }
        self.t[r][c] = 1.0;
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..width {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Minimize `cost . x` over the current tableau with Bland's rule.
    /// Columns at or beyond `limit` never enter. Returns false when unbounded.
    fn optimize(&mut self, cost: &[f64], limit: usize, pivots: &mut usize) -> Result<bool> {
        loop {
            *pivots += 1;
            if *pivots > MAX_PIVOTS {
                return Err(Error::NumericalFailure("simplex pivot limit exceeded".into()));
            }
            // Reduced costs r_j = c_j - sum_i c_B(i) t_ij, entering by smallest index.
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j];
                for (i, row) in self.t.iter().enumerate() {
                    r -= cost[self.basis[i]] * row[j];
                }
                if r < -COST_EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return Ok(true) };
            // Tiny pivots relative to the column blow up the tableau.
            let col_max = self.t.iter().fold(1.0_f64, |m, row| m.max(row[c].abs()));
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.t.iter().enumerate() {
                let a = row[c];
                if a > PIVOT_EPS * col_max {
                    let ratio = row[self.cols].max(0.0) / a;
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12 * (1.0 + br.abs())
                                || (ratio <= br + 1e-12 * (1.0 + br.abs())
                                    && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = best else { return Ok(false) };
            self.pivot(r, c);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpOutcome> {
        let mut pivots = 0;
        if self.cols > self.art {
            let mut cost = vec![0.0; self.cols];
            for c in cost.iter_mut().skip(self.art) {
                *c = 1.0;
            }
            self.optimize(&cost, self.cols, &mut pivots)?;
            let infeas: f64 = self
                .basis
                .iter()
                .zip(&self.t)
                .filter(|(b, _)| **b >= self.art)
                .map(|(_, row)| row[self.cols])
                .sum();
            let scale = lp.rows.iter().fold(1.0_f64, |m, r| m.max(r.rhs.abs()));
            if infeas > TAU_FEAS * scale {
                return Ok(LpOutcome::Infeasible);
            }
            // Drive remaining artificials out of the basis or drop redundant rows.
            let mut i = 0;
            while i < self.t.len() {
                if self.basis[i] >= self.art {
                    let col = (0..self.art).find(|&j| self.t[i][j].abs() > 1e-9);
                    match col {
                        Some(j) => {
                            self.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            self.t.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = vec![0.0; self.cols];
        let sign = if lp.sense == Sense::Max { -1.0 } else { 1.0 };
        for (i, &(p, m)) in self.var_cols.iter().enumerate() {
            cost[p] = sign * lp.objective[i];
            if let Some(m) = m {
                cost[m] = -sign * lp.objective[i];
            }
        }
        if !self.optimize(&cost, self.art, &mut pivots)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut col_val = vec![0.0; self.cols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_val[b] = self.t[i][self.cols];
        }
        let x: Vec<f64> = self
            .var_cols
            .iter()
            .map(|&(p, m)| col_val[p] - m.map_or(0.0, |m| col_val[m]))
            .collect();
        let value = super::dot(&lp.objective, &x);
        Ok(LpOutcome::Optimal { value, x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_constraint_minimum() {
        let out = lp_solve(&[1.0], &[Constraint::new(vec![1.0], RelOp::Ge, 2.0)], Sense::Min).unwrap();
        let (v, x) = out.optimal().unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!((x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn box_maximum_at_corner() {
        let mut lp = LinearProgram::new(2);
        lp.nonneg(0..2).objective(&[1.0, 1.0], Sense::Max);
        lp.add(vec![1.0, 0.0], RelOp::Le, 1.0).unwrap();
        lp.add(vec![0.0, 1.0], RelOp::Le, 1.0).unwrap();
        let out = lp.solve().unwrap();
        let (v, x) = out.optimal().unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let out = lp_solve(
            &[0.0],
            &[
                Constraint::new(vec![1.0], RelOp::Ge, 1.0),
                Constraint::new(vec![1.0], RelOp::Le, 0.0),
            ],
            Sense::Min,
        )
        .unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_ray() {
        let out = lp_solve(&[-1.0], &[Constraint::new(vec![1.0], RelOp::Ge, 0.0)], Sense::Min).unwrap();
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn equality_with_redundant_row() {
        let mut lp = LinearProgram::new(2);
        lp.nonneg(0..2).objective(&[1.0, 2.0], Sense::Min);
        lp.add(vec![1.0, 1.0], RelOp::Eq, 1.0).unwrap();
        lp.add(vec![2.0, 2.0], RelOp::Eq, 2.0).unwrap();
        let (v, _) = lp.solve().unwrap().optimal().map(|(v, x)| (v, x.to_vec())).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = LinearProgram::new(2);
        assert!(matches!(lp.add(vec![1.0], RelOp::Le, 0.0), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling instance; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4);
        lp.nonneg(0..4).objective(&[-0.75, 150.0, -0.02, 6.0], Sense::Min);
        lp.add(vec![0.25, -60.0, -0.04, 9.0], RelOp::Le, 0.0).unwrap();
        lp.add(vec![0.5, -90.0, -0.02, 3.0], RelOp::Le, 0.0).unwrap();
        lp.add(vec![0.0, 0.0, 1.0, 0.0], RelOp::Le, 1.0).unwrap();
        let (v, _) = lp.solve().unwrap().optimal().map(|(v, x)| (v, x.to_vec())).unwrap();
        assert!((v + 0.05).abs() < 1e-9);
    }
}
