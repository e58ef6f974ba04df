//! One function per experiment, each returning its table rows in trial order.

use specest::bucketing::{alignment_error, bucket, large_bucket_spectrum_error, misclassification, tomography};
use specest::classical::{
    classical_two_bucket_lmm, sample_categorical, ClassicalLmmParams, DEFAULT_ORDER_CONSTANT, DEFAULT_SAMPLE_CONSTANT,
};
use specest::linalg::{
    dirichlet_spectrum, operator_norm, random_density_from_spectrum, tv_distance, DensityMatrix, Spectrum,
};
use specest::moments::{moment_estimate, renyi_entropy, renyi_estimate};
use specest::pipeline::learn_spectrum_amplified;
use specest::povm::measure_batch;
use specest::rng::StreamKey;
use specest::schur::{fixed_exponent_fit, game_success, min_copies, power_law_fit, reference, spectra_family};

use crate::config::{Config, Experiment, SpectrumKind};
use crate::table::{header, Row};
use crate::Failure;

fn runtime(e: specest::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn target_spectrum(c: &Config, key: &StreamKey) -> specest::Result<Spectrum> {
    match c.spectrum_kind {
        SpectrumKind::Dirichlet => Ok(dirichlet_spectrum(c.d, &mut key.child("spectrum").rng())),
        SpectrumKind::Pure => Spectrum::new(vec![1.0]),
        SpectrumKind::Mixed => Ok(Spectrum::uniform(c.d)),
    }
}

fn trial_state(c: &Config, key: &StreamKey) -> specest::Result<(Spectrum, DensityMatrix)> {
    let alpha = target_spectrum(c, key)?;
    let rho = random_density_from_spectrum(&alpha, c.d, &mut key.child("basis").rng())?;
    Ok((alpha, rho))
}

/// Runs `row` for every trial on its own stream, in trial order.
fn per_trial<F>(c: &Config, row: F) -> Result<Vec<Row>, Failure>
where
    F: Fn(usize, &StreamKey) -> specest::Result<Row> + Sync + Send,
{
    let root = StreamKey::root(c.seed).child(c.experiment.name());
    specest::par::try_map_indexed(c.trials, |t| row(t, &root.index(t))).map_err(runtime)
}

pub fn run(c: &Config) -> Result<Vec<Row>, Failure> {
    let (d, n, seed) = (c.d, c.copies(), c.seed);
    match c.experiment {
        Experiment::Tomography => per_trial(c, |t, key| {
            let (_, rho) = trial_state(c, key)?;
            let rho_hat = tomography(&rho, n, &key.child("copies"))?;
            let err = operator_norm(&(rho_hat.matrix() - rho.matrix()))?;
            let scaled = err / (c.c1 * (d as f64 / n as f64).sqrt());
            Ok(vec![d.into(), n.into(), t.into(), seed.into(), err.into(), scaled.into()])
        }),
        Experiment::Moments | Experiment::Renyi => per_trial(c, |t, key| {
            let (alpha, rho) = trial_state(c, key)?;
            let records = measure_batch(&rho, n, &key.child("copies"))?;
            let (est, truth) = if c.experiment == Experiment::Moments {
                (moment_estimate(&records, c.k)?, alpha.power_sum(c.k as u32))
            } else {
                (renyi_estimate(&records, c.k)?, renyi_entropy(alpha.as_slice(), c.k))
            };
            Ok(vec![d.into(), c.k.into(), n.into(), t.into(), est.into(), truth.into()])
        }),
        Experiment::Bucket => per_trial(c, |t, key| {
            let (_, rho) = trial_state(c, key)?;
            let out = bucket(&tomography(&rho, n, &key.child("copies"))?, c.b)?;
            Ok(vec![
                d.into(),
                c.b.into(),
                c.eps.into(),
                n.into(),
                t.into(),
                seed.into(),
                large_bucket_spectrum_error(&rho, &out)?.into(),
                misclassification(&rho, &out.pi)?.into(),
                alignment_error(&rho, &out.pi)?.into(),
                out.rank.into(),
            ])
        }),
        Experiment::Spectrum => {
            let params = c.pipeline();
            per_trial(c, |t, key| {
                let (alpha, rho) = trial_state(c, key)?;
                let run = learn_spectrum_amplified(&rho, &params, c.repeats, &key.child("pipeline"))?;
                let pi = &run.bucketing.pi;
                Ok(vec![
                    d.into(),
                    c.eps.into(),
                    t.into(),
                    seed.into(),
                    tv_distance(run.estimate.as_slice(), &alpha.padded(d)).into(),
                    alignment_error(&rho, pi)?.into(),
                    misclassification(&rho, pi)?.into(),
                    run.bucketing.rank.into(),
                ])
            })
        }
        Experiment::Classical => {
            let mut params = ClassicalLmmParams::choose(d, c.eps, n, DEFAULT_ORDER_CONSTANT, DEFAULT_SAMPLE_CONSTANT);
            if let Some(kk) = c.big_k {
                params.order = kk;
            }
            per_trial(c, |t, key| {
                let alpha = target_spectrum(c, key)?.padded(d);
                let samples = sample_categorical(&alpha, 2 * n, &mut key.child("samples").rng());
                let est = classical_two_bucket_lmm(&samples, d, &params)?;
                Ok(vec![
                    d.into(),
                    c.eps.into(),
                    n.into(),
                    t.into(),
                    seed.into(),
                    tv_distance(est.as_slice(), &alpha).into(),
                ])
            })
        }
        Experiment::Game => {
            let pair = spectra_family(c.k, d).map_err(runtime)?;
            let success = game_success(&pair, n, c.m, &StreamKey::root(seed).child("game")).map_err(runtime)?;
            Ok(vec![vec![d.into(), n.into(), c.m.into(), seed.into(), success.into()]])
        }
        Experiment::Scan => {
            let root = StreamKey::root(seed).child("scan").child(c.k);
            c.scan_dimensions()
                .into_iter()
                .map(|d| {
                    let pair = spectra_family(c.k, d).map_err(runtime)?;
                    let n_min = min_copies(&pair, c.threshold, c.m, &root.index(d)).map_err(runtime)?;
                    Ok(vec![c.k.into(), d.into(), n_min.into(), c.m.into(), c.threshold.into(), seed.into()])
                })
                .collect()
        }
        Experiment::Fit => {
            let points = match &c.input {
                Some(p) => read_scan(p, c.k)?,
                None => reference::scan_points(c.k).expect("checked during validation"),
            };
            let exponent = reference::fixed_exponent(c.k).expect("checked during validation");
            let free = power_law_fit(&points).map_err(runtime)?;
            let fixed = fixed_exponent_fit(&points, exponent).map_err(runtime)?;
            Ok([free, fixed]
                .iter()
                .map(|f| vec![c.k.into(), f.a.into(), f.c.into(), f.b.into(), f.rss.into()])
                .collect())
        }
    }
}

/// (d, n_min) rows of family `k` from a scan CSV.
fn read_scan(path: &std::path::Path, k: usize) -> Result<Vec<(f64, f64)>, Failure> {
    let bad = |msg: String| Failure::Config(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let head = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if head.iter().ne(header(Experiment::Scan).iter().copied()) {
        return Err(bad(format!("not a scan table, header {head:?}")));
    }
    let mut points = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num =
            |i: usize| rec.get(i).and_then(|f| f.parse::<f64>().ok()).ok_or_else(|| bad(format!("bad row {rec:?}")));
        if num(0)? == k as f64 {
            points.push((num(1)?, num(2)?));
        }
    }
    if points.len() < 3 {
        return Err(bad(format!("{} rows for family {k}, need 3", points.len())));
    }
    Ok(points)
}

/// Column averaged in the summary line.
pub fn headline(e: Experiment) -> &'static str {
    match e {
        Experiment::Tomography => "scaled_error",
        Experiment::Moments | Experiment::Renyi => "estimate",
        Experiment::Bucket => "alignment_err",
        Experiment::Spectrum | Experiment::Classical => "tv_error",
        Experiment::Game => "success",
        Experiment::Scan => "n_min",
        Experiment::Fit => "c",
    }
}
