//! Flat JSON config plus `--key value` overrides. Command line beats file,
//! file beats the per-experiment defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Tomography,
    Moments,
    Renyi,
    Bucket,
    Spectrum,
    Classical,
    Game,
    Scan,
    Fit,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Tomography => "tomography",
            Experiment::Moments => "moments",
            Experiment::Renyi => "renyi",
            Experiment::Bucket => "bucket",
            Experiment::Spectrum => "spectrum",
            Experiment::Classical => "classical",
            Experiment::Game => "game",
            Experiment::Scan => "scan",
            Experiment::Fit => "fit",
        }
    }
}

/// Which spectrum the simulated states are drawn with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    /// uniform on the simplex
    Dirichlet,
    Pure,
    Mixed,
}

/// Every key accepted in the config file and on the command line.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Flat JSON file with any of the keys below
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; falls back to $THREADS, then all cores
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Moment order, or spectra family for game / scan / fit
    #[arg(long)]
    pub k: Option<usize>,
    /// Copies (samples per half for classical)
    #[arg(long)]
    pub n: Option<usize>,
    /// Game rounds per spectrum
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Bucketing threshold
    #[arg(long = "B")]
    #[serde(rename = "B")]
    pub b: Option<f64>,
    /// Number of matched moments (classical)
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub big_k: Option<usize>,
    #[arg(long = "C1")]
    #[serde(rename = "C1")]
    pub c1: Option<f64>,
    #[arg(long = "C2")]
    #[serde(rename = "C2")]
    pub c2: Option<f64>,
    #[arg(long = "c_K")]
    #[serde(rename = "c_K")]
    pub c_k: Option<f64>,
    #[arg(long = "c_B")]
    #[serde(rename = "c_B")]
    pub c_b: Option<f64>,
    #[arg(long = "v_mult")]
    pub v_mult: Option<f64>,
    /// Success threshold of a scan
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Last dimension of a scan
    #[arg(long = "d_max")]
    pub d_max: Option<usize>,
    #[arg(long = "d_step")]
    pub d_step: Option<usize>,
    #[arg(long = "spectrum_kind", value_enum)]
    pub spectrum_kind: Option<SpectrumKind>,
    /// Independent pipeline repetitions per spectrum trial
    #[arg(long = "repeats")]
    pub repeats: Option<usize>,
    /// Scan CSV read by fit
    #[arg(long)]
    pub input: Option<PathBuf>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr, $($f:ident),*) => {
        Settings { config: None, $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Settings {
    /// Fields set here win over `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        overlay!(
            self,
            lower,
            seed,
            threads,
            out,
            d,
            eps,
            k,
            n,
            m,
            trials,
            b,
            big_k,
            c1,
            c2,
            c_k,
            c_b,
            v_mult,
            threshold,
            d_max,
            d_step,
            spectrum_kind,
            repeats,
            input
        )
    }

    pub fn from_file(path: &Path) -> Result<Settings, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub experiment: Experiment,
    pub seed: u64,
    pub threads: usize,
    pub out: PathBuf,
    pub d: usize,
    pub eps: f64,
    pub k: usize,
    pub n: Option<usize>,
    pub m: usize,
    pub trials: usize,
    pub b: f64,
    pub big_k: Option<usize>,
    pub c1: f64,
    pub c2: f64,
    pub c_k: f64,
    pub c_b: f64,
    pub v_mult: f64,
    pub threshold: f64,
    pub d_max: usize,
    pub d_step: usize,
    pub spectrum_kind: SpectrumKind,
    pub repeats: usize,
    pub input: Option<PathBuf>,
}

fn default_dimension(e: Experiment) -> usize {
    match e {
        Experiment::Tomography | Experiment::Spectrum => 8,
        Experiment::Moments | Experiment::Renyi => 4,
        Experiment::Bucket => 16,
        Experiment::Classical => 256,
        Experiment::Game | Experiment::Scan | Experiment::Fit => 6,
    }
}

fn default_eps(e: Experiment) -> f64 {
    match e {
        Experiment::Bucket => 0.2,
        Experiment::Classical => 0.25,
        _ => 0.3,
    }
}

fn default_step(k: usize) -> usize {
    specest::schur::reference::SCANS.iter().find(|s| s.0 == k).map_or(1, |s| s.2)
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var("THREADS") {
        Ok(v) if !v.trim().is_empty() => {
            v.trim().parse().map(Some).map_err(|_| Failure::Config(format!("THREADS = {v:?} is not a count")))
        }
        _ => Ok(None),
    }
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

impl Config {
    pub fn resolve(experiment: Experiment, cli: Settings) -> Result<Config, Failure> {
        let file = match &cli.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let s = cli.over(file);
        let k = s.k.unwrap_or(2);
        let d = s.d.unwrap_or(default_dimension(experiment));
        let threads = match s.threads {
            Some(t) => t,
            None => threads_from_env()?.unwrap_or(0),
        };
        let c = Config {
            experiment,
            seed: s.seed.unwrap_or(1),
            threads,
            out: s.out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", experiment.name()))),
            d,
            eps: s.eps.unwrap_or(default_eps(experiment)),
            k,
            n: s.n,
            m: s.m.unwrap_or(10_000),
            trials: s.trials.unwrap_or(20),
            b: s.b.unwrap_or(0.25),
            big_k: s.big_k,
            c1: s.c1.unwrap_or(2.5),
            c2: s.c2.unwrap_or(1.0),
            c_k: s.c_k.unwrap_or(0.1),
            c_b: s.c_b.unwrap_or(4.0),
            v_mult: s.v_mult.unwrap_or(0.1),
            threshold: s.threshold.unwrap_or(0.7),
            d_max: s.d_max.unwrap_or(d),
            d_step: s.d_step.unwrap_or(default_step(k)),
            spectrum_kind: s.spectrum_kind.unwrap_or(SpectrumKind::Dirichlet),
            repeats: s.repeats.unwrap_or(1),
            input: s.input,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), Failure> {
        let positive =
            [("C1", self.c1), ("C2", self.c2), ("c_K", self.c_k), ("c_B", self.c_b), ("v_mult", self.v_mult)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(bad(format!("eps must lie in (0, 1], got {}", self.eps)));
        }
        if !(self.b > 0.0 && self.b <= 1.0) {
            return Err(bad(format!("B must lie in (0, 1], got {}", self.b)));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(bad(format!("threshold must lie in (0, 1), got {}", self.threshold)));
        }
        for (name, v) in
            [("d", self.d), ("trials", self.trials), ("m", self.m), ("repeats", self.repeats), ("d_step", self.d_step)]
        {
            if v == 0 {
                return Err(bad(format!("{name} must be positive")));
            }
        }
        if self.n == Some(0) || self.big_k == Some(0) {
            return Err(bad("n and K must be positive"));
        }
        match self.experiment {
            Experiment::Moments | Experiment::Renyi => {
                let lo = if self.experiment == Experiment::Renyi { 2 } else { 1 };
                if self.k < lo || self.k > specest::moments::MAX_ORDER {
                    return Err(bad(format!("k must lie in {lo}..={}", specest::moments::MAX_ORDER)));
                }
                if self.n.unwrap_or(self.default_copies()) < self.k {
                    return Err(bad("need n >= k copies"));
                }
            }
            Experiment::Spectrum => {
                specest::pipeline::choose_parameters(self.d, &self.pipeline()).map_err(|e| bad(e.to_string()))?;
            }
            Experiment::Classical if self.d < 2 => return Err(bad("classical needs d >= 2")),
            Experiment::Game => {
                specest::schur::spectra_family(self.k, self.d).map_err(|e| bad(e.to_string()))?;
                if self.n.is_none() {
                    return Err(bad("game needs n"));
                }
            }
            Experiment::Scan => {
                if self.d_max < self.d {
                    return Err(bad("d_max must be at least d"));
                }
                for d in self.scan_dimensions() {
                    specest::schur::spectra_family(self.k, d).map_err(|e| bad(e.to_string()))?;
                }
            }
            Experiment::Fit => {
                if specest::schur::reference::fixed_exponent(self.k).is_none() {
                    return Err(bad(format!("no family k = {}", self.k)));
                }
                if self.input.is_none() && specest::schur::reference::scan_points(self.k).is_none() {
                    return Err(bad(format!("no reference scan for k = {}", self.k)));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn scan_dimensions(&self) -> Vec<usize> {
        (self.d..=self.d_max).step_by(self.d_step).collect()
    }

    pub fn pipeline(&self) -> specest::pipeline::PipelineParams {
        specest::pipeline::PipelineParams {
            eps: self.eps,
            c_k: self.c_k,
            c_b: self.c_b,
            c2: self.c2,
            v_mult: self.v_mult,
        }
    }

    /// Copies when `n` is not given.
    pub fn default_copies(&self) -> usize {
        match self.experiment {
            Experiment::Tomography => 10_000,
            Experiment::Bucket => (self.c2 * self.d as f64 / (self.b * self.b * self.eps * self.eps)).ceil() as usize,
            Experiment::Classical => {
                specest::classical::classical_sample_size(self.d, self.eps, specest::classical::DEFAULT_SAMPLE_CONSTANT)
            }
            _ => 200,
        }
    }

    pub fn copies(&self) -> usize {
        self.n.unwrap_or(self.default_copies())
    }
}
