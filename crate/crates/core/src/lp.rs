//! Exact-rational two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems are in equality standard form: minimize `c·x` subject to
//! `A x = b`, `x >= 0`. Every outcome carries a dual object that can be
//! re-checked by direct arithmetic.

use num_traits::{Signed, Zero};

use crate::rational::{int, Rat};

#[derive(Debug, Clone)]
pub struct LinearProgram {
    /// Constraint rows, each of length `num_vars`.
    pub rows: Vec<Vec<Rat>>,
    pub rhs: Vec<Rat>,
    pub cost: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// `dual` satisfies `cost_j - dual·A_j >= 0` and `dual·b = objective`.
    Optimal {
        x: Vec<Rat>,
        objective: Rat,
        dual: Vec<Rat>,
    },
    /// Farkas certificate: `y·A_j >= 0` for every column and `y·b < 0`.
    Infeasible { farkas: Vec<Rat> },
    /// Feasible point plus a ray `d >= 0` with `A d = 0` and `c·d < 0`.
    Unbounded { x: Vec<Rat>, ray: Vec<Rat> },
}

struct Tableau {
    /// rows x (n + m) coefficient block
    t: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    n: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let pivot_row = self.t[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.t.len() {
            if i == row || self.t[i][col].is_zero() {
                continue;
            }
            let factor = self.t[i][col].clone();
            for (v, p) in self.t[i].iter_mut().zip(pivot_row.iter()) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn reduced_cost(&self, cost: &[Rat], j: usize) -> Rat {
        let mut r = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.t[i][j].is_zero() {
                r -= &cost[b] * &self.t[i][j];
            }
        }
        r
    }

    /// Runs simplex iterations with Bland's rule over the allowed columns.
    fn run(&mut self, cost: &[Rat], allowed: usize) -> PhaseEnd {
        loop {
            let entering = (0..allowed)
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative());
            let Some(col) = entering else {
                return PhaseEnd::Optimal;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.t[i][col];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return PhaseEnd::Unbounded(col),
            }
        }
    }

    /// `y = c_B^T B^{-1}`, read off the artificial block (initially the identity).
    fn multipliers(&self, cost: &[Rat]) -> Vec<Rat> {
        let m = self.t.len();
        (0..m)
            .map(|k| {
                let mut y = Rat::zero();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.t[i][self.n + k].is_zero() {
                        y += &cost[b] * &self.t[i][self.n + k];
                    }
                }
                y
            })
            .collect()
    }

    fn primal(&self) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.num_vars();
        let m = self.rows.len();
        // Normalize to b >= 0; remember the row signs for the duals.
        let signs: Vec<bool> = self.rhs.iter().map(|b| b.is_negative()).collect();
        let mut t = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for i in 0..m {
            let mut row: Vec<Rat> = self.rows[i].clone();
            let mut b = self.rhs[i].clone();
            if signs[i] {
                row.iter_mut().for_each(|v| *v = -v.clone());
                b = -b;
            }
            row.extend((0..m).map(|k| if k == i { int(1) } else { Rat::zero() }));
            t.push(row);
            rhs.push(b);
        }
        let mut tab = Tableau {
            t,
            rhs,
            basis: (n..n + m).collect(),
            n,
        };
        let unsign = |y: Vec<Rat>| -> Vec<Rat> {
            y.into_iter()
                .zip(signs.iter())
                .map(|(v, &neg)| if neg { -v } else { v })
                .collect()
        };

        // Phase 1: minimize the sum of artificials.
        let phase1: Vec<Rat> = (0..n + m)
            .map(|j| if j < n { Rat::zero() } else { int(1) })
            .collect();
        tab.run(&phase1, n + m);
        let infeasibility: Rat = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= n)
            .map(|(i, _)| tab.rhs[i].clone())
            .sum();
        if infeasibility.is_positive() {
            // y·A_j <= 0, y·b > 0  ==>  -y is a Farkas certificate.
            let y = unsign(tab.multipliers(&phase1));
            return LpOutcome::Infeasible {
                farkas: y.into_iter().map(|v| -v).collect(),
            };
        }
        // Drive zero-level artificials out where a real column allows it.
        for i in 0..m {
            if tab.basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                    tab.pivot(i, j);
                }
            }
        }

        // Phase 2 over the real columns only.
        let phase2: Vec<Rat> = (0..n + m)
            .map(|j| if j < n { self.cost[j].clone() } else { Rat::zero() })
            .collect();
        match tab.run(&phase2, n) {
            PhaseEnd::Optimal => {
                let x = tab.primal();
                let objective = x
                    .iter()
                    .zip(self.cost.iter())
                    .map(|(a, b)| a * b)
                    .sum();
                LpOutcome::Optimal {
                    x,
                    objective,
                    dual: unsign(tab.multipliers(&phase2)),
                }
            }
            PhaseEnd::Unbounded(col) => {
                let mut ray = vec![Rat::zero(); n];
                ray[col] = int(1);
                for (i, &b) in tab.basis.iter().enumerate() {
                    if b < n {
                        ray[b] = -tab.t[i][col].clone();
                    }
                }
                LpOutcome::Unbounded {
                    x: tab.primal(),
                    ray,
                }
            }
        }
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

/// Column `j` of the constraint matrix.
pub fn column(rows: &[Vec<Rat>], j: usize) -> Vec<Rat> {
    rows.iter().map(|r| r[j].clone()).collect()
}
