//! Exact two-phase simplex over the rationals.
//!
//! Variables are non-negative. Pivoting follows Bland's rule (smallest
//! entering index, ties in the ratio test to the smallest basic index), so
//! the method terminates and its output is deterministic.

use num_traits::{One, Signed, Zero};

use crate::linalg::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

/// Maximize `objective · x` subject to the constraints and `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rat>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rat>, value: Rat },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn maximize(objective: Vec<Rat>) -> Self {
        LinearProgram {
            num_vars: objective.len(),
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds `coeffs · x (relation) rhs`. Panics if `coeffs` has the wrong length.
    pub fn constrain(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> &mut Self {
        assert_eq!(
            coeffs.len(),
            self.num_vars,
            "constraint length must match the variable count"
        );
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    /// rows × (cols + 1), the last column is the right-hand side
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
    num_vars: usize,
    artificial_from: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.constraints.len();
        // normalize to non-negative right-hand sides
        let normalized: Vec<(Vec<Rat>, Relation, Rat)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|x| -x).collect(), flipped, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let slacks = normalized.iter().filter(|c| c.1 != Relation::Eq).count();
        let artificials = normalized.iter().filter(|c| c.1 != Relation::Le).count();
        let n = lp.num_vars;
        let cols = n + slacks + artificials;
        let artificial_from = n + slacks;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s, mut a) = (n, artificial_from);
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![Rat::zero(); cols + 1];
            row[..n].clone_from_slice(&coeffs);
            row[cols] = rhs;
            match rel {
                Relation::Le => {
                    row[s] = Rat::one();
                    basis.push(s);
                    s += 1;
                }
                Relation::Ge => {
                    row[s] = -Rat::one();
                    s += 1;
                    row[a] = Rat::one();
                    basis.push(a);
                    a += 1;
                }
                Relation::Eq => {
                    row[a] = Rat::one();
                    basis.push(a);
                    a += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            basis,
            cols,
            num_vars: n,
            artificial_from,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: usize) -> bool {
        loop {
            // reduced cost of column j: c_B · column − c_j
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut z = -cost[j].clone();
                for (row, &b) in self.rows.iter().zip(&self.basis) {
                    if !row[j].is_zero() && !cost[b].is_zero() {
                        z += &cost[b] * &row[j];
                    }
                }
                z.is_negative()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(Rat, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((br, _, bb)) => ratio < *br || (ratio == *br && self.basis[i] < *bb),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn value(&self, cost: &[Rat]) -> Rat {
        self.rows
            .iter()
            .zip(&self.basis)
            .fold(Rat::zero(), |acc, (row, &b)| acc + &cost[b] * &row[self.cols])
    }

    fn run(mut self, objective: &[Rat]) -> LpOutcome {
        // phase 1: maximize −Σ artificials
        let mut phase1 = vec![Rat::zero(); self.cols];
        for x in phase1[self.artificial_from..].iter_mut() {
            *x = -Rat::one();
        }
        self.optimize(&phase1, self.cols);
        if !self.value(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_from {
                match (0..self.artificial_from).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let mut cost = vec![Rat::zero(); self.cols];
        cost[..self.num_vars].clone_from_slice(objective);
        if !self.optimize(&cost, self.artificial_from) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rat::zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                x[b] = row[self.cols].clone();
            }
        }
        let value = x.iter().zip(objective).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
        LpOutcome::Optimal { x, value }
    }
}
