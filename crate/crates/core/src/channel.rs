//! Collective-dephasing Kraus channel and the time evolution it composes
//! with: noiseless spectral evolution, the channel-then-rotate noisy
//! solution, and survival / transition probabilities.
//!
//! Both qubits couple to the same stochastic field, so the channel damps
//! only coherences that see the collective phase: the |b>, |c> span is a
//! decoherence-free subspace, the |a><d| corner decays as e^(-2 Gamma t)
//! and single-excitation coherences as e^(-Gamma t / 2).

use num_complex::Complex64 as C64;

use crate::dirac::SpectralData;
use crate::error::{Error, Result};
use crate::qmat::{DensityMatrix, QMatrix};

/// The three diagonal Kraus operators of the collective channel at one
/// instant, with the map written as `rho -> sum_mu D_mu^dag rho D_mu`.
#[derive(Clone, Copy, Debug)]
pub struct KrausSet {
    pub d1: QMatrix,
    pub d2: QMatrix,
    pub d3: QMatrix,
    pub t: f64,
    pub gamma_rate: f64,
}

impl KrausSet {
    /// `sum_mu D_mu D_mu^dag` minus the identity, as a max-entry defect.
    /// Zero (to roundoff) for every valid channel.
    pub fn completeness_defect(&self) -> f64 {
        let total =
            self.d1 * self.d1.adjoint() + self.d2 * self.d2.adjoint() + self.d3 * self.d3.adjoint();
        total.max_abs_diff(&QMatrix::identity())
    }
}

/// Kraus operators at time `t` for dephasing rate `gamma_rate`:
/// with `x = e^(-Gamma t)`, `gamma = sqrt(x)`, `omega1 = sqrt(1-x)`,
/// `omega2 = -omega1 x`, `omega3 = omega1^2 sqrt(1+x)`,
///
/// ```text
/// D1 = diag(gamma, 1, 1, gamma)
/// D2 = diag(omega1, 0, 0, omega2)
/// D3 = diag(0, 0, 0, omega3)
/// ```
pub fn kraus_set(gamma_rate: f64, t: f64) -> Result<KrausSet> {
    if gamma_rate < 0.0 || t < 0.0 || !gamma_rate.is_finite() || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "channel requires Gamma >= 0 and t >= 0, got Gamma = {gamma_rate}, t = {t}"
        )));
    }
    let x = (-gamma_rate * t).exp();
    let gamma = (-gamma_rate * t / 2.0).exp();
    let omega1 = (1.0 - x).max(0.0).sqrt();
    let omega2 = -omega1 * x;
    let omega3 = omega1 * omega1 * (1.0 + x).sqrt();
    Ok(KrausSet {
        d1: QMatrix::diag_re([gamma, 1.0, 1.0, gamma]),
        d2: QMatrix::diag_re([omega1, 0.0, 0.0, omega2]),
        d3: QMatrix::diag_re([0.0, 0.0, 0.0, omega3]),
        t,
        gamma_rate,
    })
}

/// Operator-sum application `rho -> sum_mu D_mu^dag rho D_mu`.
pub fn apply_channel(rho0: &DensityMatrix, ks: &KrausSet) -> DensityMatrix {
    let r = rho0.matrix();
    let out =
        ks.d1.adjoint() * *r * ks.d1 + ks.d2.adjoint() * *r * ks.d2 + ks.d3.adjoint() * *r * ks.d3;
    DensityMatrix::new(out).expect("the collective channel preserves density matrices")
}

/// Phase convention for transporting the interaction-picture state back to
/// the Schroedinger picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PictureSign {
    /// Spectral-expansion phases `e^(-i (lambda_ns - lambda_ml) t)`, the
    /// convention both evolution equations of the model state. Default.
    Standard,
    /// The opposite sign, matching the operator form `e^(+iHt) rho e^(-iHt)`
    /// as literally printed; kept for sensitivity checks.
    PaperLiteral,
}

/// `U(t) = sum_ns e^(-i lambda_ns t) varrho_ns` (sign flipped for
/// [`PictureSign::PaperLiteral`]).
pub fn propagator(spec: &SpectralData, t: f64, sign: PictureSign) -> QMatrix {
    let dir = match sign {
        PictureSign::Standard => -1.0,
        PictureSign::PaperLiteral => 1.0,
    };
    let mut u = QMatrix::zero();
    for (lambda, proj) in spec.pairs() {
        let phase = C64::from_polar(1.0, dir * lambda * t);
        u = u + proj.matrix().scale_c(phase);
    }
    u
}

fn conjugate_by(u: &QMatrix, rho: &DensityMatrix) -> DensityMatrix {
    let out = *u * *rho.matrix() * u.adjoint();
    DensityMatrix::new(out).expect("unitary conjugation preserves density matrices")
}

/// Closed-form unitary evolution
/// `rho(t) = sum e^(-i (lambda_ns - lambda_ml) t) varrho_ns rho0 varrho_ml`,
/// evaluated as conjugation by the spectral propagator.
pub fn evolve_noiseless(rho0: &DensityMatrix, spec: &SpectralData, t: f64) -> DensityMatrix {
    evolve_noiseless_with_sign(rho0, spec, t, PictureSign::Standard)
}

pub fn evolve_noiseless_with_sign(
    rho0: &DensityMatrix,
    spec: &SpectralData,
    t: f64,
    sign: PictureSign,
) -> DensityMatrix {
    conjugate_by(&propagator(spec, t, sign), rho0)
}

/// Full noisy evolution: the channel acts on the initial state in the
/// interaction picture, then one spectral rotation transports the result to
/// the Schroedinger picture,
/// `rho(t) = sum_nsml sum_mu e^(-i (l_ns - l_ml) t) varrho_ns D_mu^dag rho0 D_mu varrho_ml`.
/// Reduces to [`evolve_noiseless`] at `gamma_rate = 0`.
pub fn evolve_noisy(
    rho0: &DensityMatrix,
    spec: &SpectralData,
    gamma_rate: f64,
    t: f64,
) -> Result<DensityMatrix> {
    evolve_noisy_with_sign(rho0, spec, gamma_rate, t, PictureSign::Standard)
}

pub fn evolve_noisy_with_sign(
    rho0: &DensityMatrix,
    spec: &SpectralData,
    gamma_rate: f64,
    t: f64,
    sign: PictureSign,
) -> Result<DensityMatrix> {
    let ks = kraus_set(gamma_rate, t)?;
    let damped = apply_channel(rho0, &ks);
    Ok(evolve_noiseless_with_sign(&damped, spec, t, sign))
}

/// Overlap `Tr[rho0 rho_t]`: the probability of finding the evolved state
/// in its initial configuration.
pub fn survival_probability(rho0: &DensityMatrix, rho_t: &DensityMatrix) -> f64 {
    (*rho0.matrix() * *rho_t.matrix()).trace().re
}

/// Ionic level label in the fixed |a>,|b>,|c>,|d> = |00>,|01>,|10>,|11>
/// ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisState {
    A,
    B,
    C,
    D,
}

impl BasisState {
    pub const ALL: [BasisState; 4] = [BasisState::A, BasisState::B, BasisState::C, BasisState::D];

    pub fn index(&self) -> usize {
        match self {
            BasisState::A => 0,
            BasisState::B => 1,
            BasisState::C => 2,
            BasisState::D => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            BasisState::A => "a",
            BasisState::B => "b",
            BasisState::C => "c",
            BasisState::D => "d",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(BasisState::A),
            "b" => Ok(BasisState::B),
            "c" => Ok(BasisState::C),
            "d" => Ok(BasisState::D),
            other => Err(Error::InvalidInput(format!(
                "unknown basis state '{other}'"
            ))),
        }
    }

    /// The projector `|k><k|` as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let mut d = [0.0; 4];
        d[self.index()] = 1.0;
        DensityMatrix::new(QMatrix::diag_re(d)).expect("basis projector is a valid state")
    }
}

/// Noiseless quantum-oscillation probability `Tr[P_k rho_j(t)]` of finding
/// level `k` when starting from level `j`; sums to one over `k`.
pub fn transition_probability(j: BasisState, k: BasisState, spec: &SpectralData, t: f64) -> f64 {
    let rho_t = evolve_noiseless(&j.density(), spec, t);
    rho_t.matrix()[(k.index(), k.index())].re
}

/// A scalar observable sampled on a strictly increasing time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    label: String,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "time grid has {} points but {} values were provided",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(TimeSeries {
            times,
            values,
            label: label.into(),
        })
    }

    /// Uniform grid of `steps` points covering `[0, t_max]` inclusive.
    pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
        if steps < 2 || t_max <= 0.0 || !t_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid requires steps >= 2 and t_max > 0, got steps = {steps}, t_max = {t_max}"
            )));
        }
        let h = t_max / (steps - 1) as f64;
        Ok((0..steps).map(|i| i as f64 * h).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Grid spacing, provided the grid is uniform to relative 1e-9;
    /// otherwise an input error.
    pub fn uniform_spacing(&self) -> Result<f64> {
        if self.times.len() < 2 {
            return Err(Error::InvalidInput(
                "series needs at least two points".into(),
            ));
        }
        let h = self.times[1] - self.times[0];
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300) {
                return Err(Error::InvalidInput("time grid is not uniform".into()));
            }
        }
        Ok(h)
    }
}
