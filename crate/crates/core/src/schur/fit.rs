use crate::error::{Error, Result};

/// n ~ a d^c + b
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub a: f64,
    pub c: f64,
    pub b: f64,
    pub rss: f64,
}

fn check(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit { reason: format!("{} points", points.len()) });
    }
    if points.iter().any(|p| !(p.0 > 0.0) || !p.1.is_finite()) {
        return Err(Error::DegenerateFit { reason: "d must be positive and n finite".into() });
    }
    let d0 = points[0].0;
    if points.iter().all(|p| p.0 == d0) {
        return Err(Error::DegenerateFit { reason: "all d equal".into() });
    }
    Ok(())
}

/// Least squares for (a, b) with the exponent held at c.
pub fn fixed_exponent_fit(points: &[(f64, f64)], c: f64) -> Result<PowerLawFit> {
    check(points)?;
    let len = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.powf(c)).collect();
    let mx = xs.iter().sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit { reason: "no spread in d^c".into() });
    }
    let a = sxy / sxx;
    let b = my - a * mx;
    let rss = xs.iter().zip(points).map(|(x, p)| (p.1 - a * x - b).powi(2)).sum();
    Ok(PowerLawFit { a, c, b, rss })
}

/// Grid search over c in [0.25, 3] (step 1e-3) with closed-form (a, b).
pub fn power_law_fit(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    check(points)?;
    let mut best: Option<PowerLawFit> = None;
    for i in 0..=2750 {
        let c = 0.25 + i as f64 * 1e-3;
        let f = fixed_exponent_fit(points, c)?;
        if best.is_none_or(|b| f.rss < b.rss) {
            best = Some(f);
        }
    }
    Ok(best.expect("grid is non-empty"))
}
