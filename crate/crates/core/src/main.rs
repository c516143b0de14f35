use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dirac_ion_sim::cli::{
    emit_csv, emit_csv_with_stem, expand_sweep, figure_command, parse_discord_side,
    parse_observable_list, parse_picture_sign, run_scenario, sweep_stem, ScenarioConfig,
};
use dirac_ion_sim::dirac::{eigenprojectors, eigenvalues, from_ion_params, DiracParams, IonParams};
use dirac_ion_sim::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "dirac-ion-sim",
    version,
    about = "Disentanglement dynamics of cat and Werner states of a Dirac-mapped \
             trapped ion under collective dephasing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print c1, c2 and the closed-form eigenvalues for given parameters
    Eigen(EigenArgs),
    /// Run a single scenario and write one CSV per observable
    Evolve(EvolveArgs),
    /// Regenerate the data behind reference figure 1, 2 or 3
    Fig(FigArgs),
    /// Cartesian-product sweep over comma-separated parameter lists
    Sweep(SweepArgs),
}

#[derive(Args)]
struct PhysicsFlags {
    /// Mass ratio m/p
    #[arg(long)]
    m_over_p: Option<f64>,
    /// Field ratio E/p
    #[arg(long)]
    e_over_p: Option<f64>,
    /// Dephasing ratio Gamma/p
    #[arg(long)]
    gamma_over_p: Option<f64>,
    /// Tensor coupling kappa
    #[arg(long)]
    kappa: Option<f64>,
    /// Pseudotensor coupling mu
    #[arg(long)]
    mu: Option<f64>,
    /// Field angle theta in radians
    #[arg(long)]
    theta: Option<f64>,
}

impl PhysicsFlags {
    fn any_set(&self) -> bool {
        self.m_over_p.is_some()
            || self.e_over_p.is_some()
            || self.gamma_over_p.is_some()
            || self.kappa.is_some()
            || self.mu.is_some()
            || self.theta.is_some()
    }

    fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(v) = self.m_over_p {
            cfg.m_over_p = v;
        }
        if let Some(v) = self.e_over_p {
            cfg.e_over_p = v;
        }
        if let Some(v) = self.gamma_over_p {
            cfg.gamma_over_p = v;
        }
        if let Some(v) = self.kappa {
            cfg.kappa = v;
        }
        if let Some(v) = self.mu {
            cfg.mu = v;
        }
        if let Some(v) = self.theta {
            cfg.theta = v;
        }
    }
}

#[derive(Args)]
struct ScenarioFlags {
    /// Initial state: cat, werner or basis:a..d
    #[arg(long)]
    state: Option<String>,
    /// Time span in p*t
    #[arg(long)]
    t_max: Option<f64>,
    /// Number of grid points (>= 2)
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated observables: survival, negativity, discord,
    /// discord_derivative, purity, populations
    #[arg(long)]
    observables: Option<String>,
    /// Side of the geometric discord: 1 or 2
    #[arg(long)]
    discord_side: Option<String>,
    /// Picture-transport phase convention: standard or paper_literal
    #[arg(long)]
    picture_sign: Option<String>,
}

impl ScenarioFlags {
    fn apply(&self, cfg: &mut ScenarioConfig) -> Result<()> {
        if let Some(s) = &self.state {
            cfg.state = s.parse()?;
        }
        if let Some(v) = self.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(s) = &self.observables {
            cfg.observables = parse_observable_list(s)?;
        }
        if let Some(s) = &self.discord_side {
            cfg.discord_side = parse_discord_side(s)?;
        }
        if let Some(s) = &self.picture_sign {
            cfg.picture_sign = parse_picture_sign(s)?;
        }
        Ok(())
    }
}

#[derive(Args)]
struct EigenArgs {
    #[command(flatten)]
    physics: PhysicsFlags,
    /// Derive the Dirac parameters from a trapped-ion parameter file
    /// (keys: eta, omega_tilde, delta, width, omega1_x/y/z, omega2_x/y/z,
    /// optional p) instead of the physics flags
    #[arg(long)]
    ion_params: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    /// Flat key = value configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    physics: PhysicsFlags,
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Output directory for CSV files
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct FigArgs {
    /// Figure id: 1, 2 or 3
    id: u8,
    /// Output directory for CSV files
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Flat key = value configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated m/p values
    #[arg(long)]
    m_over_p: Option<String>,
    /// Comma-separated E/p values
    #[arg(long)]
    e_over_p: Option<String>,
    /// Comma-separated Gamma/p values
    #[arg(long)]
    gamma_over_p: Option<String>,
    /// Comma-separated kappa values
    #[arg(long)]
    kappa: Option<String>,
    /// Comma-separated mu values
    #[arg(long)]
    mu: Option<String>,
    /// Field angle theta in radians
    #[arg(long)]
    theta: Option<f64>,
    #[command(flatten)]
    scenario: ScenarioFlags,
    /// Output directory for CSV files
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("'{p}' is not a number")))
        })
        .collect()
}

fn base_config(path: &Option<PathBuf>) -> Result<ScenarioConfig> {
    match path {
        Some(p) => ScenarioConfig::from_file(p),
        None => Ok(ScenarioConfig::default()),
    }
}

fn print_spectrum(params: &DiracParams) -> Result<()> {
    let lambdas = eigenvalues(params)?;
    let spec = eigenprojectors(params)?;
    println!("c1 = {}", spec.c1);
    println!("c2 = {}", spec.c2);
    println!("lambda_00 = {}", lambdas[0]);
    println!("lambda_01 = {}", lambdas[1]);
    println!("lambda_10 = {}", lambdas[2]);
    println!("lambda_11 = {}", lambdas[3]);
    Ok(())
}

fn run_eigen(args: &EigenArgs) -> Result<()> {
    if let Some(path) = &args.ion_params {
        if args.physics.any_set() {
            return Err(Error::InvalidInput(
                "--ion-params derives the physics parameters; drop the physics flags".into(),
            ));
        }
        let (ion, momentum) = read_ion_file(path)?;
        let conv = from_ion_params(&ion)?;
        println!("c = {}", conv.c);
        println!("m = {}", conv.params.m);
        println!("e_field = {}", conv.params.e_field);
        println!("kappa = {}", conv.params.kappa);
        println!("mu = {}", conv.params.mu);
        println!("theta = {}", conv.params.theta);
        println!("p = {momentum}");
        let params = DiracParams {
            p: momentum,
            ..conv.params
        };
        return print_spectrum(&params);
    }
    let mut cfg = ScenarioConfig::default();
    args.physics.apply(&mut cfg);
    print_spectrum(&cfg.dirac_params())
}

fn read_ion_file(path: &PathBuf) -> Result<(IonParams, f64)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut ion = IonParams {
        eta: 0.0,
        omega_tilde: 0.0,
        delta: 0.0,
        width: 0.0,
        omega1: [0.0; 3],
        omega2: [0.0; 3],
    };
    let mut momentum = 0.0;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!(
                "{}: line {}: expected 'key = value'",
                path.display(),
                lineno + 1
            ))
        })?;
        let v: f64 = value.trim().parse().map_err(|_| {
            Error::InvalidInput(format!(
                "{}: line {}: '{}' is not a number",
                path.display(),
                lineno + 1,
                value.trim()
            ))
        })?;
        match key.trim() {
            "eta" => ion.eta = v,
            "omega_tilde" => ion.omega_tilde = v,
            "delta" => ion.delta = v,
            "width" => ion.width = v,
            "omega1_x" => ion.omega1[0] = v,
            "omega1_y" => ion.omega1[1] = v,
            "omega1_z" => ion.omega1[2] = v,
            "omega2_x" => ion.omega2[0] = v,
            "omega2_y" => ion.omega2[1] = v,
            "omega2_z" => ion.omega2[2] = v,
            "p" => momentum = v,
            other => {
                return Err(Error::InvalidInput(format!(
                    "{}: line {}: unknown key '{other}'",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok((ion, momentum))
}

fn run_evolve(args: &EvolveArgs) -> Result<()> {
    let mut cfg = base_config(&args.config)?;
    args.physics.apply(&mut cfg);
    args.scenario.apply(&mut cfg)?;
    let result = run_scenario(&cfg)?;
    let paths = emit_csv(&result, &args.out_dir)?;
    for p in &paths {
        println!("{}", p.display());
    }
    eprintln!("run completed in {:.3} s", result.wall_seconds);
    Ok(())
}

fn run_fig(args: &FigArgs) -> Result<()> {
    let results = figure_command(args.id, &args.out_dir)?;
    let total: f64 = results.iter().map(|r| r.wall_seconds).sum();
    println!(
        "figure {}: {} scenarios, {} series, written to {}",
        args.id,
        results.len(),
        results.iter().map(|r| r.series.len()).sum::<usize>(),
        args.out_dir.display()
    );
    eprintln!("completed in {total:.3} s");
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let mut base = base_config(&args.config)?;
    if let Some(v) = args.theta {
        base.theta = v;
    }
    args.scenario.apply(&mut base)?;
    let ms = args
        .m_over_p
        .as_deref()
        .map(parse_f64_list)
        .transpose()?
        .unwrap_or_default();
    let es = args
        .e_over_p
        .as_deref()
        .map(parse_f64_list)
        .transpose()?
        .unwrap_or_default();
    let gs = args
        .gamma_over_p
        .as_deref()
        .map(parse_f64_list)
        .transpose()?
        .unwrap_or_default();
    let ks = args
        .kappa
        .as_deref()
        .map(parse_f64_list)
        .transpose()?
        .unwrap_or_default();
    let us = args
        .mu
        .as_deref()
        .map(parse_f64_list)
        .transpose()?
        .unwrap_or_default();
    let combos = expand_sweep(&base, &ms, &es, &gs, &ks, &us);
    println!("sweep: {} scenarios", combos.len());
    for cfg in &combos {
        let result = run_scenario(cfg)?;
        emit_csv_with_stem(&result, &args.out_dir, &sweep_stem(cfg))?;
    }
    println!("written to {}", args.out_dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eigen(args) => run_eigen(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Fig(args) => run_fig(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
