//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves min c.x subject to A x = b, x >= 0.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

struct Tableau {
    rows: usize,
    cols: usize, // structural + artificial, rhs stored separately
    a: Vec<f64>,
    rhs: Vec<f64>,
    obj: Vec<f64>,
    obj_rhs: f64,
    basis: Vec<usize>,
    /// Sign-normalised [A | I] and b, kept for reinversion.
    orig: Vec<f64>,
    orig_rhs: Vec<f64>,
    /// Cost of the current phase.
    cost: Vec<f64>,
}

/// Pivots between rebuilds of the tableau from the original rows.
const REINVERT_EVERY: usize = 25;

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let cols = self.cols;
        let p = self.a[r * cols + c];
        for j in 0..cols {
            self.a[r * cols + j] /= p;
        }
        self.rhs[r] /= p;
        let (before, rest) = self.a.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for (i, row) in before.chunks_mut(cols).chain(after.chunks_mut(cols)).enumerate() {
            let i = if i < r { i } else { i + 1 };
            let f = row[c];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
                self.rhs[i] -= f * self.rhs[r];
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (x, y) in self.obj.iter_mut().zip(prow.iter()) {
                *x -= f * y;
            }
            self.obj[c] = 0.0;
            self.obj_rhs -= f * self.rhs[r];
        }
        self.basis[r] = c;
    }

    /// Reduced costs for the current phase from the current body.
    fn price(&mut self) {
        let cols = self.cols;
        self.obj.copy_from_slice(&self.cost);
        self.obj_rhs = 0.0;
        for r in 0..self.rows {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                for j in 0..cols {
                    self.obj[j] -= cb * self.a[r * cols + j];
                }
                self.obj_rhs -= cb * self.rhs[r];
            }
        }
        for &b in &self.basis {
            self.obj[b] = 0.0;
        }
    }

    /// Rebuilds B^-1 [A | b] from the original rows by partial-pivot elimination.
    /// Leaves the tableau untouched if the basis is numerically singular.
    fn reinvert(&mut self) {
        let (m, cols) = (self.rows, self.cols);
        let w = cols + 1;
        let mut basis_mat: Vec<f64> = (0..m * m).map(|k| self.orig[(k / m) * cols + self.basis[k % m]]).collect();
        let mut body: Vec<f64> = (0..m * w)
            .map(|k| {
                let (i, j) = (k / w, k % w);
                if j < cols {
                    self.orig[i * cols + j]
                } else {
                    self.orig_rhs[i]
                }
            })
            .collect();
        for col in 0..m {
            let piv = (col..m)
                .max_by(|&p, &q| basis_mat[p * m + col].abs().total_cmp(&basis_mat[q * m + col].abs()))
                .unwrap();
            if basis_mat[piv * m + col].abs() < 1e-14 {
                return;
            }
            if piv != col {
                for j in 0..m {
                    basis_mat.swap(piv * m + j, col * m + j);
                }
                for j in 0..w {
                    body.swap(piv * w + j, col * w + j);
                }
            }
            let p = basis_mat[col * m + col];
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = basis_mat[r * m + col] / p;
                if f != 0.0 {
                    for j in 0..m {
                        basis_mat[r * m + j] -= f * basis_mat[col * m + j];
                    }
                    for j in 0..w {
                        body[r * w + j] -= f * body[col * w + j];
                    }
                }
            }
        }
        // basis_mat is now diagonal; row `col` corresponds to basis position `col`
        for r in 0..m {
            let p = basis_mat[r * m + r];
            for j in 0..cols {
                self.a[r * cols + j] = body[r * w + j] / p;
            }
            self.rhs[r] = (body[r * w + cols] / p).max(0.0);
        }
        for (r, &b) in self.basis.iter().enumerate() {
            for i in 0..m {
                self.a[i * cols + b] = if i == r { 1.0 } else { 0.0 };
            }
        }
        self.price();
    }

    /// Pivots over columns `0..allowed` until optimal. Returns false if unbounded.
    ///
    /// Entering column by Bland's rule; leaving row by a two-pass Harris test that
    /// prefers the largest pivot among near-tied ratios.
    fn run(&mut self, allowed: usize) -> Result<bool> {
        for it in 0..MAX_ITERATIONS {
            if it > 0 && it % REINVERT_EVERY == 0 {
                self.reinvert();
            }
            let Some(enter) = (0..allowed).find(|&j| self.obj[j] < -PIVOT_TOL) else {
                return Ok(true);
            };
            let mut theta = f64::INFINITY;
            for i in 0..self.rows {
                let aij = self.at(i, enter);
                if aij > PIVOT_TOL {
                    theta = theta.min((self.rhs[i].max(0.0) + HARRIS_DELTA) / aij);
                }
            }
            if theta.is_infinite() {
                return Ok(false);
            }
            let mut leave: Option<usize> = None;
            for i in 0..self.rows {
                let aij = self.at(i, enter);
                if aij > PIVOT_TOL && self.rhs[i].max(0.0) / aij <= theta {
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            let al = self.at(l, enter);
                            aij > al || (aij == al && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some(i);
                    }
                }
            }
            self.pivot(leave.expect("theta finite implies a candidate row"), enter);
        }
        Err(Error::Simplex { reason: format!("no convergence in {MAX_ITERATIONS} pivots") })
    }
}

/// Primal feasibility tolerance in the Harris ratio test.
const HARRIS_DELTA: f64 = 1e-11;

/// Minimises `c.x` over `{x >= 0 : A x = b}`. `a` is row-major with
/// `b.len()` rows of `c.len()` entries.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = b.len();
    let n = c.len();
    if a.len() != m || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("constraint matrix shape mismatch".into()));
    }
    let cols = n + m;
    let mut orig = vec![0.0; m * cols];
    let mut orig_rhs = vec![0.0; m];
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            orig[i * cols + j] = s * a[i][j];
        }
        orig[i * cols + n + i] = 1.0;
        orig_rhs[i] = s * b[i];
    }
    // phase one: minimise the sum of artificials
    let mut cost = vec![0.0; cols];
    cost[n..].fill(1.0);
    let mut t = Tableau {
        rows: m,
        cols,
        a: orig.clone(),
        rhs: orig_rhs.clone(),
        obj: vec![0.0; cols],
        obj_rhs: 0.0,
        basis: (n..n + m).collect(),
        orig,
        orig_rhs,
        cost,
    };
    t.price();
    t.run(n)?;
    t.reinvert();
    let scale = 1.0 + b.iter().map(|x| x.abs()).sum::<f64>();
    if -t.obj_rhs > 1e-9 * scale {
        return Err(Error::Simplex { reason: format!("infeasible (phase one residual {:.3e})", -t.obj_rhs) });
    }
    // drive artificials out of the basis where possible
    for r in 0..m {
        if t.basis[r] >= n {
            let best = (0..n).max_by(|&p, &q| t.at(r, p).abs().total_cmp(&t.at(r, q).abs()));
            if let Some(j) = best.filter(|&j| t.at(r, j).abs() > PIVOT_TOL) {
                t.pivot(r, j);
            }
        }
    }
    // phase two; artificials left in the basis sit at zero on redundant rows
    t.cost = vec![0.0; cols];
    t.cost[..n].copy_from_slice(c);
    t.reinvert();
    t.price();
    if !t.run(n)? {
        return Err(Error::Simplex { reason: "unbounded".into() });
    }
    t.reinvert();
    let mut x = vec![0.0; n];
    for r in 0..m {
        if t.basis[r] < n {
            x[t.basis[r]] = t.rhs[r].max(0.0);
        }
    }
    let objective = x.iter().zip(c).map(|(a, b)| a * b).sum();
    Ok(LpSolution { x, objective })
}
