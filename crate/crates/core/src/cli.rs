//! Scenario presets, parameter sweeps, figure-data regeneration and CSV
//! emission: the user-facing surface behind the command-line binary.
//!
//! Configuration is a flat `key = value` text file (command-line flags
//! override file values); results are one CSV file per observable series
//! plus a sidecar that echoes the configuration and records the spectrum.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64 as C64;

use crate::channel::{evolve_noisy_with_sign, BasisState, PictureSign, TimeSeries};
use crate::correlations::{
    detect_cusps, discord_derivative, geometric_discord, negativity, purity, CuspReport,
};
use crate::dirac::{eigenprojectors, DiracParams};
use crate::error::{Error, Result};
use crate::qmat::{DensityMatrix, Subsystem};

/// Default relative threshold of the cusp detector.
pub const CUSP_REL_THRESHOLD: f64 = 5.0;

/// Initial-state preset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatePreset {
    /// `(|a> + |d>)/sqrt(2)` — the Schroedinger cat superposition.
    Cat,
    /// `(|b> + |c>)/sqrt(2)` — the Werner-type superposition, living in the
    /// decoherence-free subspace.
    Werner,
    /// A bare ionic level `|j><j|`.
    Basis(BasisState),
}

impl StatePreset {
    pub fn slug(&self) -> String {
        match self {
            StatePreset::Cat => "cat".into(),
            StatePreset::Werner => "werner".into(),
            StatePreset::Basis(b) => format!("basis_{}", b.label()),
        }
    }
}

impl fmt::Display for StatePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatePreset::Cat => write!(f, "cat"),
            StatePreset::Werner => write!(f, "werner"),
            StatePreset::Basis(b) => write!(f, "basis:{}", b.label()),
        }
    }
}

impl FromStr for StatePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cat" => Ok(StatePreset::Cat),
            "werner" => Ok(StatePreset::Werner),
            other => {
                if let Some(level) = other.strip_prefix("basis:") {
                    Ok(StatePreset::Basis(BasisState::parse(level)?))
                } else {
                    Err(Error::InvalidInput(format!(
                        "unknown state '{other}' (expected cat, werner or basis:a..d)"
                    )))
                }
            }
        }
    }
}

/// The density matrix of a preset initial state.
pub fn preset_state(preset: StatePreset) -> DensityMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let h = C64::new(r, 0.0);
    match preset {
        StatePreset::Cat => DensityMatrix::from_pure([h, z, z, h]).unwrap(),
        StatePreset::Werner => DensityMatrix::from_pure([z, h, h, z]).unwrap(),
        StatePreset::Basis(b) => b.density(),
    }
}

/// Observables a scenario can record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    Survival,
    Negativity,
    Discord,
    DiscordDerivative,
    Purity,
    Populations,
}

impl Observable {
    pub const ALL: [Observable; 6] = [
        Observable::Survival,
        Observable::Negativity,
        Observable::Discord,
        Observable::DiscordDerivative,
        Observable::Purity,
        Observable::Populations,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Observable::Survival => "survival",
            Observable::Negativity => "negativity",
            Observable::Discord => "discord",
            Observable::DiscordDerivative => "discord_derivative",
            Observable::Purity => "purity",
            Observable::Populations => "populations",
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .iter()
            .find(|o| o.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown observable '{s}'")))
    }
}

/// Parse a comma-separated observable list, deduplicating while keeping
/// the order of first appearance.
pub fn parse_observable_list(s: &str) -> Result<Vec<Observable>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let obs: Observable = part.parse()?;
        if !out.contains(&obs) {
            out.push(obs);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidInput("no observables requested".into()));
    }
    Ok(out)
}

fn side_to_str(side: Subsystem) -> &'static str {
    match side {
        Subsystem::One => "1",
        Subsystem::Two => "2",
    }
}

/// Parse a discord side flag: "1" or "2".
pub fn parse_discord_side(s: &str) -> Result<Subsystem> {
    match s {
        "1" => Ok(Subsystem::One),
        "2" => Ok(Subsystem::Two),
        other => Err(Error::InvalidInput(format!(
            "discord side must be 1 or 2, got '{other}'"
        ))),
    }
}

fn sign_to_str(sign: PictureSign) -> &'static str {
    match sign {
        PictureSign::Standard => "standard",
        PictureSign::PaperLiteral => "paper_literal",
    }
}

/// Parse a picture-sign flag: "standard" or "paper_literal".
pub fn parse_picture_sign(s: &str) -> Result<PictureSign> {
    match s {
        "standard" => Ok(PictureSign::Standard),
        "paper_literal" => Ok(PictureSign::PaperLiteral),
        other => Err(Error::InvalidInput(format!(
            "picture sign must be standard or paper_literal, got '{other}'"
        ))),
    }
}

/// A full scenario description in the dimensionless figure parameters
/// (ratios to the momentum p, time axis p*t).
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub state: StatePreset,
    pub m_over_p: f64,
    pub e_over_p: f64,
    pub gamma_over_p: f64,
    pub kappa: f64,
    pub mu: f64,
    pub theta: f64,
    pub t_max: f64,
    pub steps: usize,
    pub observables: Vec<Observable>,
    pub discord_side: Subsystem,
    pub picture_sign: PictureSign,
}

impl Default for ScenarioConfig {
    /// The figure defaults: kappa = mu = 1, E/p = 1, Gamma/p = 1/2,
    /// theta = pi/4, m/p = 0, p*t over [0, 50] with 2000 points.
    fn default() -> Self {
        ScenarioConfig {
            state: StatePreset::Cat,
            m_over_p: 0.0,
            e_over_p: 1.0,
            gamma_over_p: 0.5,
            kappa: 1.0,
            mu: 1.0,
            theta: std::f64::consts::FRAC_PI_4,
            t_max: 50.0,
            steps: 2000,
            observables: vec![
                Observable::Survival,
                Observable::Negativity,
                Observable::Discord,
            ],
            discord_side: Subsystem::One,
            picture_sign: PictureSign::Standard,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidInput(format!(
                "steps must be >= 2, got {}",
                self.steps
            )));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "t_max must be positive, got {}",
                self.t_max
            )));
        }
        if self.observables.is_empty() {
            return Err(Error::InvalidInput("no observables requested".into()));
        }
        self.dirac_params().validate()
    }

    /// Natural-unit parameters with p = 1, so times are p*t and the ratios
    /// map through unchanged.
    pub fn dirac_params(&self) -> DiracParams {
        DiracParams {
            m: self.m_over_p,
            p: 1.0,
            e_field: self.e_over_p,
            kappa: self.kappa,
            mu: self.mu,
            theta: self.theta,
            gamma_rate: self.gamma_over_p,
        }
    }

    /// Flat `key = value` echo of the configuration; floats use the
    /// shortest representation that parses back to the same bits.
    pub fn to_key_values(&self) -> String {
        let obs: Vec<&str> = self.observables.iter().map(|o| o.name()).collect();
        format!(
            "state = {}\nm_over_p = {}\ne_over_p = {}\ngamma_over_p = {}\nkappa = {}\n\
             mu = {}\ntheta = {}\nt_max = {}\nsteps = {}\nobservables = {}\n\
             discord_side = {}\npicture_sign = {}\n",
            self.state,
            self.m_over_p,
            self.e_over_p,
            self.gamma_over_p,
            self.kappa,
            self.mu,
            self.theta,
            self.t_max,
            self.steps,
            obs.join(","),
            side_to_str(self.discord_side),
            sign_to_str(self.picture_sign),
        )
    }

    /// Parse a flat key-value document (comments start with '#'); absent
    /// keys keep their defaults, unknown keys are rejected.
    pub fn from_key_values(text: &str) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| -> Result<f64> {
                v.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!("line {}: '{v}' is not a number", lineno + 1))
                })
            };
            match key {
                "state" => cfg.state = value.parse()?,
                "m_over_p" => cfg.m_over_p = parse_f64(value)?,
                "e_over_p" => cfg.e_over_p = parse_f64(value)?,
                "gamma_over_p" => cfg.gamma_over_p = parse_f64(value)?,
                "kappa" => cfg.kappa = parse_f64(value)?,
                "mu" => cfg.mu = parse_f64(value)?,
                "theta" => cfg.theta = parse_f64(value)?,
                "t_max" => cfg.t_max = parse_f64(value)?,
                "steps" => {
                    cfg.steps = value.parse::<usize>().map_err(|_| {
                        Error::InvalidInput(format!(
                            "line {}: '{value}' is not a step count",
                            lineno + 1
                        ))
                    })?
                }
                "observables" => cfg.observables = parse_observable_list(value)?,
                "discord_side" => cfg.discord_side = parse_discord_side(value)?,
                "picture_sign" => cfg.picture_sign = parse_picture_sign(value)?,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<ScenarioConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ScenarioConfig::from_key_values(&text)
    }
}

/// Everything one scenario run produced: the requested series, the spectrum
/// behind the evolution, a cusp report when the discord derivative was
/// requested, and bookkeeping metadata.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: ScenarioConfig,
    pub series: Vec<TimeSeries>,
    pub lambdas: [f64; 4],
    pub c1: f64,
    pub c2: f64,
    pub cusps: Option<CuspReport>,
    pub version: String,
    pub wall_seconds: f64,
}

/// Evaluate every requested observable of a scenario on its full time grid.
/// Deterministic for a given configuration.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunResult> {
    cfg.validate()?;
    let started = Instant::now();
    let params = cfg.dirac_params();
    let spec = eigenprojectors(&params)?;
    let rho0 = preset_state(cfg.state);
    let times = TimeSeries::uniform_grid(cfg.t_max, cfg.steps)?;

    let evolved: Vec<DensityMatrix> = times
        .iter()
        .map(|&t| evolve_noisy_with_sign(&rho0, &spec, params.gamma_rate, t, cfg.picture_sign))
        .collect::<Result<_>>()?;

    let wants = |o: Observable| cfg.observables.contains(&o);
    let discord_needed = wants(Observable::Discord) || wants(Observable::DiscordDerivative);
    let discord_series = if discord_needed {
        let values = evolved
            .iter()
            .map(|r| geometric_discord(r, cfg.discord_side))
            .collect();
        Some(TimeSeries::new(
            times.clone(),
            values,
            Observable::Discord.name(),
        )?)
    } else {
        None
    };

    let mut series = Vec::new();
    let mut cusps = None;
    for &obs in &cfg.observables {
        match obs {
            Observable::Survival => {
                let values = evolved
                    .iter()
                    .map(|r| crate::channel::survival_probability(&rho0, r))
                    .collect();
                series.push(TimeSeries::new(times.clone(), values, obs.name())?);
            }
            Observable::Negativity => {
                let values = evolved
                    .iter()
                    .map(|r| negativity(r, Subsystem::One))
                    .collect();
                series.push(TimeSeries::new(times.clone(), values, obs.name())?);
            }
            Observable::Discord => {
                series.push(discord_series.clone().expect("computed above"));
            }
            Observable::DiscordDerivative => {
                let deriv = discord_derivative(discord_series.as_ref().expect("computed above"))?;
                cusps = Some(detect_cusps(&deriv, CUSP_REL_THRESHOLD)?);
                series.push(TimeSeries::new(
                    times.clone(),
                    deriv.values().to_vec(),
                    obs.name(),
                )?);
            }
            Observable::Purity => {
                let values = evolved.iter().map(purity).collect();
                series.push(TimeSeries::new(times.clone(), values, obs.name())?);
            }
            Observable::Populations => {
                for level in BasisState::ALL {
                    let idx = level.index();
                    let values = evolved.iter().map(|r| r.matrix()[(idx, idx)].re).collect();
                    series.push(TimeSeries::new(
                        times.clone(),
                        values,
                        format!("populations_{}", level.label()),
                    )?);
                }
            }
        }
    }

    Ok(RunResult {
        config: cfg.clone(),
        series,
        lambdas: spec.lambdas(),
        c1: spec.c1,
        c2: spec.c2,
        cusps,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// `x` rendered for file names: integers without a decimal point.
fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Data rows carry 17 significant digits so re-runs are byte-identical and
/// parsing recovers the exact doubles.
fn fmt_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn series_csv(ts: &TimeSeries) -> String {
    let mut out = String::with_capacity(ts.len() * 48 + 32);
    out.push_str(&format!("pt,{}\n", ts.label()));
    for (t, v) in ts.times().iter().zip(ts.values()) {
        out.push_str(&fmt_value(*t));
        out.push(',');
        out.push_str(&fmt_value(*v));
        out.push('\n');
    }
    out
}

/// The sidecar: a parseable config echo plus commented metadata lines
/// (spectrum, invariants, tool version).
fn sidecar_text(result: &RunResult) -> String {
    let mut out = result.config.to_key_values();
    out.push_str(&format!("# lambda_00 = {}\n", result.lambdas[0]));
    out.push_str(&format!("# lambda_01 = {}\n", result.lambdas[1]));
    out.push_str(&format!("# lambda_10 = {}\n", result.lambdas[2]));
    out.push_str(&format!("# lambda_11 = {}\n", result.lambdas[3]));
    out.push_str(&format!("# c1 = {}\n", result.c1));
    out.push_str(&format!("# c2 = {}\n", result.c2));
    out.push_str(&format!("# version = {}\n", result.version));
    if let Some(cusps) = &result.cusps {
        for (t, j) in cusps.times.iter().zip(&cusps.jump_sizes) {
            out.push_str(&format!("# cusp = {t} {j}\n"));
        }
    }
    out
}

/// File stem identifying a scenario: state, mass ratio, noise ratio.
fn scenario_stem(cfg: &ScenarioConfig) -> String {
    format!(
        "{}_m{}_g{}",
        cfg.state.slug(),
        fmt_num(cfg.m_over_p),
        fmt_num(cfg.gamma_over_p)
    )
}

/// Write one CSV per series (`<stem>_<label>.csv`) and a `<stem>.meta`
/// sidecar into `out_dir`; returns the paths written.
pub fn emit_csv(result: &RunResult, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let stem = scenario_stem(&result.config);
    emit_named(
        result,
        out_dir,
        |label| format!("{stem}_{label}.csv"),
        &format!("{stem}.meta"),
    )
}

fn emit_named(
    result: &RunResult,
    out_dir: &Path,
    csv_name: impl Fn(&str) -> String,
    meta_name: &str,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    for ts in &result.series {
        let path = out_dir.join(csv_name(ts.label()));
        write_text(&path, &series_csv(ts))?;
        written.push(path);
    }
    let meta = out_dir.join(meta_name);
    write_text(&meta, &sidecar_text(result))?;
    written.push(meta);
    Ok(written)
}

/// Scenario set behind each reference figure: survival probabilities
/// (fig 1), negativities (fig 2) for cat and Werner states at
/// m/p in {0, 1, 10}, and cat-state discord plus its derivative (fig 3)
/// at m/p in {0, 1, 10, 20}.
pub fn figure_scenarios(fig: u8) -> Result<Vec<ScenarioConfig>> {
    let base = ScenarioConfig::default();
    let mut configs = Vec::new();
    match fig {
        1 | 2 => {
            let obs = if fig == 1 {
                Observable::Survival
            } else {
                Observable::Negativity
            };
            for state in [StatePreset::Cat, StatePreset::Werner] {
                for m in [0.0, 1.0, 10.0] {
                    configs.push(ScenarioConfig {
                        state,
                        m_over_p: m,
                        observables: vec![obs],
                        ..base.clone()
                    });
                }
            }
        }
        3 => {
            for m in [0.0, 1.0, 10.0, 20.0] {
                configs.push(ScenarioConfig {
                    state: StatePreset::Cat,
                    m_over_p: m,
                    observables: vec![Observable::Discord, Observable::DiscordDerivative],
                    ..base.clone()
                });
            }
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown figure id {other} (expected 1-3)"
            )))
        }
    }
    Ok(configs)
}

/// Run every scenario behind figure `fig` and write
/// `fig<N>_<state>_<observable>_m<value>.csv` files plus one sidecar per
/// scenario into `out_dir`.
pub fn figure_command(fig: u8, out_dir: &Path) -> Result<Vec<RunResult>> {
    let configs = figure_scenarios(fig)?;
    let mut results = Vec::new();
    for cfg in configs {
        let result = run_scenario(&cfg)?;
        let state = cfg.state.slug();
        let mass = fmt_num(cfg.m_over_p);
        emit_named(
            &result,
            out_dir,
            |label| format!("fig{fig}_{state}_{label}_m{mass}.csv"),
            &format!("fig{fig}_{state}_m{mass}.meta"),
        )?;
        results.push(result);
    }
    Ok(results)
}

/// Cartesian product of per-parameter value lists over a base scenario.
/// Empty lists keep the base value.
pub fn expand_sweep(
    base: &ScenarioConfig,
    m_list: &[f64],
    e_list: &[f64],
    gamma_list: &[f64],
    kappa_list: &[f64],
    mu_list: &[f64],
) -> Vec<ScenarioConfig> {
    let or_base = |list: &[f64], v: f64| -> Vec<f64> {
        if list.is_empty() {
            vec![v]
        } else {
            list.to_vec()
        }
    };
    let ms = or_base(m_list, base.m_over_p);
    let es = or_base(e_list, base.e_over_p);
    let gs = or_base(gamma_list, base.gamma_over_p);
    let ks = or_base(kappa_list, base.kappa);
    let us = or_base(mu_list, base.mu);
    let mut out = Vec::new();
    for &m in &ms {
        for &e in &es {
            for &g in &gs {
                for &k in &ks {
                    for &u in &us {
                        out.push(ScenarioConfig {
                            m_over_p: m,
                            e_over_p: e,
                            gamma_over_p: g,
                            kappa: k,
                            mu: u,
                            ..base.clone()
                        });
                    }
                }
            }
        }
    }
    out
}

/// File stem for a sweep point: every swept parameter is spelled out.
pub fn sweep_stem(cfg: &ScenarioConfig) -> String {
    format!(
        "sweep_{}_m{}_e{}_g{}_k{}_u{}",
        cfg.state.slug(),
        fmt_num(cfg.m_over_p),
        fmt_num(cfg.e_over_p),
        fmt_num(cfg.gamma_over_p),
        fmt_num(cfg.kappa),
        fmt_num(cfg.mu),
    )
}

/// Like [`emit_csv`] but with an explicit stem (used by sweeps, where the
/// scenario stem would collide).
pub fn emit_csv_with_stem(result: &RunResult, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    emit_named(
        result,
        out_dir,
        |label| format!("{stem}_{label}.csv"),
        &format!("{stem}.meta"),
    )
}
