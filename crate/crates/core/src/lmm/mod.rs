//! Local moment matching: find a measure on [0, B] of prescribed mass whose
//! power sums match noisy estimates within tolerances, then round it to a
//! finite spectrum.

pub mod simplex;

use crate::error::{Error, Result};

/// Accepted slack on the optimal normalised violation.
pub const FEASIBILITY_SLACK: f64 = 1e-6;

/// Estimates p_k with tolerances V_k for k = 1..K, on [0, upper], total mass.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentConstraints {
    pub estimates: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub upper: f64,
    pub mass: f64,
    pub grid_points: usize,
}

impl MomentConstraints {
    /// Grid of max(512, 64 d) points.
    pub fn new(estimates: Vec<f64>, tolerances: Vec<f64>, upper: f64, mass: f64, d: usize) -> Self {
        MomentConstraints { estimates, tolerances, upper, mass, grid_points: 512.max(64 * d) }
    }

    pub fn order(&self) -> usize {
        self.estimates.len()
    }

    fn validate(&self) -> Result<()> {
        if self.estimates.is_empty() || self.estimates.len() != self.tolerances.len() {
            return Err(Error::InvalidArgument("need matching non-empty estimates and tolerances".into()));
        }
        if self.tolerances.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidArgument("tolerances must be non-negative".into()));
        }
        if !(self.upper > 0.0) || !(self.mass >= 0.0) || self.grid_points < 2 {
            return Err(Error::InvalidArgument("need upper > 0, mass >= 0 and at least two grid points".into()));
        }
        Ok(())
    }
}

/// Finitely supported measure on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizedMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscretizedMeasure {
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// sum_g w_g x_g^k
    pub fn moment(&self, k: usize) -> f64 {
        self.points.iter().zip(&self.weights).map(|(x, w)| w * x.powi(k as i32)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmmSolution {
    pub measure: DiscretizedMeasure,
    /// Optimal max_k |moment_k - p_k| / V_k (feasible iff <= 1).
    pub violation: f64,
}

/// Minimises the largest normalised moment violation over measures on the
/// grid; accepts iff it is at most 1 (+ slack).
pub fn solve_moment_lp(c: &MomentConstraints) -> Result<LmmSolution> {
    c.validate()?;
    let g = c.grid_points;
    let kk = c.order();
    let b = c.upper;
    let y: Vec<f64> = (0..g).map(|i| i as f64 / (g - 1) as f64).collect();
    // working in y = x / B keeps the rows well scaled
    let q: Vec<f64> = (0..kk).map(|k| c.estimates[k] / b.powi(k as i32 + 1)).collect();
    let s: Vec<f64> =
        (0..kk).map(|k| c.tolerances[k].max(1e-8 * b.powi(k as i32 + 1)) / b.powi(k as i32 + 1)).collect();
    // columns: grid weights, t, then per moment u_k, v_k (signed gap) and a bound slack z_k
    //   sum_g w_g y_g^k + u_k - v_k = q_k
    //   u_k + v_k - s_k t + z_k = 0
    let n = g + 1 + 3 * kk;
    let tcol = g;
    let mut a = Vec::with_capacity(1 + 2 * kk);
    let mut rhs = Vec::with_capacity(1 + 2 * kk);
    let mut row = vec![0.0; n];
    row[..g].fill(1.0);
    a.push(row);
    rhs.push(c.mass);
    for k in 0..kk {
        let (u, v, z) = (g + 1 + 3 * k, g + 2 + 3 * k, g + 3 + 3 * k);
        let mut eq = vec![0.0; n];
        for (dst, yv) in eq[..g].iter_mut().zip(&y) {
            *dst = yv.powi(k as i32 + 1);
        }
        eq[u] = 1.0;
        eq[v] = -1.0;
        a.push(eq);
        rhs.push(q[k]);
        let mut bound = vec![0.0; n];
        bound[u] = 1.0;
        bound[v] = 1.0;
        bound[tcol] = -s[k];
        bound[z] = 1.0;
        a.push(bound);
        rhs.push(0.0);
    }
    let mut cost = vec![0.0; n];
    cost[tcol] = 1.0;
    let sol = simplex::solve(&a, &rhs, &cost)?;
    let violation = sol.x[tcol];
    if violation > 1.0 + FEASIBILITY_SLACK {
        return Err(Error::Infeasible { violation });
    }
    let (points, weights): (Vec<f64>, Vec<f64>) =
        (0..g).filter(|&i| sol.x[i] > 0.0).map(|i| (y[i] * b, sol.x[i])).unzip();
    let measure = DiscretizedMeasure { points, weights };
    // independent re-check in the original scale
    for k in 0..kk {
        let gap = (measure.moment(k + 1) - c.estimates[k]).abs();
        let v = c.tolerances[k];
        let allowed = v * (1.0 + FEASIBILITY_SLACK) + 1e-7 * v.max(b.powi(k as i32 + 1));
        if gap > allowed {
            return Err(Error::Simplex { reason: format!("moment {} off by {gap:.3e} after solve", k + 1) });
        }
    }
    Ok(LmmSolution { measure, violation })
}

/// Quantile rounding: value i (1-based) is the point where the cumulative
/// weight, scanned upward, first reaches (i - 1/2) mass / count. Output is
/// non-increasing.
pub fn round_measure(mu: &DiscretizedMeasure, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(vec![]);
    }
    let mut pairs: Vec<(f64, f64)> =
        mu.points.iter().copied().zip(mu.weights.iter().copied()).filter(|p| p.1 > 0.0).collect();
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("measure has no mass".into()));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mass: f64 = pairs.iter().map(|p| p.1).sum();
    let mut out = Vec::with_capacity(count);
    let mut j = 0;
    let mut acc = pairs[0].1;
    for i in 1..=count {
        let target = (i as f64 - 0.5) * mass / count as f64;
        while acc < target && j + 1 < pairs.len() {
            j += 1;
            acc += pairs[j].1;
        }
        out.push(pairs[j].0);
    }
    out.reverse();
    Ok(out)
}

/// sqrt(B d) / K + 2^(9K/2) B sum_k B^-k V_k
pub fn lmm_error_bound(upper: f64, d: usize, tolerances: &[f64]) -> f64 {
    let k = tolerances.len();
    let s: f64 = tolerances.iter().enumerate().map(|(i, v)| v / upper.powi(i as i32 + 1)).sum();
    (upper * d as f64).sqrt() / k as f64 + 2f64.powf(4.5 * k as f64) * upper * s
}

/// Solve then round to `count` values.
pub fn local_moment_matching(c: &MomentConstraints, count: usize) -> Result<Vec<f64>> {
    let sol = solve_moment_lp(c)?;
    round_measure(&sol.measure, count)
}
