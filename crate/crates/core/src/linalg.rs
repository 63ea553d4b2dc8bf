//! Dense exact linear algebra over [`Rat`]. Matrices are row-major `Vec<Vec<Rat>>`.

use num_traits::{Signed, Zero};

use crate::rational::{int, Rat};

pub type Matrix = Vec<Vec<Rat>>;

/// Outcome of solving `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rat>),
    /// Consistent, with a free direction; carries one particular solution
    /// (free variables set to zero).
    Underdetermined(Vec<Rat>),
    Inconsistent,
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Matrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c].clone();
            let (pivot_row, other) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (o, pv) in other.iter_mut().zip(pivot_row.iter()) {
                if !pv.is_zero() {
                    *o -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut work = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(vectors: &[Vec<Rat>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Matrix = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Solves `sum_j x_j * columns[j] = rhs`.
pub fn solve_columns(columns: &[Vec<Rat>], rhs: &[Rat]) -> Solution {
    let n = columns.len();
    let mut aug: Matrix = (0..rhs.len())
        .map(|i| {
            let mut row: Vec<Rat> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent;
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    if pivots.len() == n {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x)
    }
}

pub fn inverse(m: &[Vec<Rat>]) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { int(1) } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() != n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Sylvester inertia of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Inertia by symmetric (congruence) elimination.
pub fn inertia(sym: &[Vec<Rat>]) -> Inertia {
    let mut a = sym.to_vec();
    let n = a.len();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut positive, mut negative) = (0, 0);
    while !active.is_empty() {
        let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // All active diagonals vanish: fold a coupled pair row_i += row_j.
                let pair = active.iter().find_map(|&i| {
                    active
                        .iter()
                        .copied()
                        .find(|&j| j != i && !a[i][j].is_zero())
                        .map(|j| (i, j))
                });
                let Some((i, j)) = pair else {
                    break;
                };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            positive += 1;
        } else {
            negative += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let factor = &a[i][p] / &d;
            for &k in &active {
                let delta = &factor * &a[p][k];
                a[i][k] -= delta;
            }
        }
    }
    Inertia {
        positive,
        negative,
        zero: n - positive - negative,
    }
}

pub fn is_negative_definite(sym: &[Vec<Rat>]) -> bool {
    inertia(sym).negative == sym.len()
}
