//! Two-qubit correlation quantifiers: Fano decomposition, negativity,
//! geometric discord, the discord time derivative and detection of
//! sudden-transition cusps in it.

use crate::channel::TimeSeries;
use crate::error::{Error, Result};
use crate::qmat::{
    kron, partial_transpose, pauli, trace_norm, Axis, DensityMatrix, QMatrix, QMatrix2, Subsystem,
};

/// Bloch vectors of both qubits and the 3x3 correlation matrix
/// `t_ij = Tr[rho (s_i x s_j)]` of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FanoComponents {
    pub a1: [f64; 3],
    pub a2: [f64; 3],
    pub t: [[f64; 3]; 3],
}

fn pauli_axes() -> [QMatrix2; 3] {
    [pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z)]
}

/// Fano decomposition: `a1_i = Tr[rho (s_i x I)]`, `a2_j = Tr[rho (I x s_j)]`,
/// `t_ij = Tr[rho (s_i x s_j)]`.
pub fn fano(rho: &DensityMatrix) -> FanoComponents {
    let s = pauli_axes();
    let i2 = QMatrix2::identity();
    let m = rho.matrix();
    let mut a1 = [0.0; 3];
    let mut a2 = [0.0; 3];
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        a1[i] = (*m * kron(&s[i], &i2)).trace().re;
        a2[i] = (*m * kron(&i2, &s[i])).trace().re;
        for j in 0..3 {
            t[i][j] = (*m * kron(&s[i], &s[j])).trace().re;
        }
    }
    FanoComponents { a1, a2, t }
}

impl FanoComponents {
    /// Rebuild the density matrix
    /// `1/4 [I + a1.s x I + I x a2.s + sum t_ij s_i x s_j]`.
    pub fn reconstruct(&self) -> QMatrix {
        let s = pauli_axes();
        let i2 = QMatrix2::identity();
        let mut m = QMatrix::identity();
        for i in 0..3 {
            m = m + kron(&s[i], &i2).scale(self.a1[i]) + kron(&i2, &s[i]).scale(self.a2[i]);
            for j in 0..3 {
                m = m + kron(&s[i], &s[j]).scale(self.t[i][j]);
            }
        }
        m.scale(0.25)
    }
}

/// Entanglement negativity `N = ||rho^(T_side)||_1 - 1`, clamped at zero
/// from below (roundoff can land at -1e-12 for separable states). The two
/// partial transposes give the same value for two qubits.
pub fn negativity(rho: &DensityMatrix, subsystem: Subsystem) -> f64 {
    let pt = partial_transpose(rho, subsystem);
    let norm = trace_norm(&pt).expect("partial transposes of density matrices are Hermitian");
    (norm - 1.0).max(0.0)
}

/// Eigenvalues (ascending) of a real symmetric 3x3 matrix by the
/// trigonometric closed form of the characteristic cubic.
fn sym3_eigenvalues(k: [[f64; 3]; 3]) -> [f64; 3] {
    let p1 = k[0][1] * k[0][1] + k[0][2] * k[0][2] + k[1][2] * k[1][2];
    if p1 == 0.0 {
        let mut d = [k[0][0], k[1][1], k[2][2]];
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return d;
    }
    let q = (k[0][0] + k[1][1] + k[2][2]) / 3.0;
    let p2 = (k[0][0] - q).powi(2) + (k[1][1] - q).powi(2) + (k[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (k[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::FRAC_PI_3).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e3, e2, e1]
}

/// Geometric discord
/// `D = 1/4 (|a|^2 + ||T||^2 - k_max)` with `k_max` the largest eigenvalue
/// of `a a^T + T T^T` (side 1) or `a2 a2^T + T^T T` (side 2). Clamped at
/// zero from below.
///
/// Ranges over `[0, 1/2]`; against the negativity (which ranges over
/// `[0, 1]`) it satisfies `2 D >= N^2`, with equality on pure states.
pub fn geometric_discord(rho: &DensityMatrix, side: Subsystem) -> f64 {
    let f = fano(rho);
    let (a, tt) = match side {
        Subsystem::One => {
            let mut tt = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for l in 0..3 {
                        tt[i][j] += f.t[i][l] * f.t[j][l];
                    }
                }
            }
            (f.a1, tt)
        }
        Subsystem::Two => {
            let mut tt = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    for l in 0..3 {
                        tt[i][j] += f.t[l][i] * f.t[l][j];
                    }
                }
            }
            (f.a2, tt)
        }
    };
    let mut kmat = tt;
    for i in 0..3 {
        for j in 0..3 {
            kmat[i][j] += a[i] * a[j];
        }
    }
    let a_sq = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
    let t_sq: f64 = f.t.iter().flatten().map(|v| v * v).sum();
    let k_max = sym3_eigenvalues(kmat)[2];
    (0.25 * (a_sq + t_sq - k_max)).max(0.0)
}

/// `Tr[rho^2]`, in `[1/4, 1]` for two qubits.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    (*m * *m).trace().re
}

/// First derivative of a uniformly sampled series: second-order central
/// differences inside, second-order one-sided stencils at the ends (exact
/// for quadratics everywhere).
pub fn discord_derivative(series: &TimeSeries) -> Result<TimeSeries> {
    let n = series.len();
    if n < 3 {
        return Err(Error::InvalidInput(
            "derivative needs at least three points".into(),
        ));
    }
    let h = series.uniform_spacing()?;
    let v = series.values();
    let mut d = vec![0.0; n];
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for i in 1..n - 1 {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    TimeSeries::new(
        series.times().to_vec(),
        d,
        format!("{}_derivative", series.label()),
    )
}

/// Locations and jump estimates of detected derivative discontinuities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CuspReport {
    pub times: Vec<f64>,
    pub jump_sizes: Vec<f64>,
}

impl CuspReport {
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }
}

/// Fraction of the largest second difference below which a candidate is
/// treated as arithmetic noise rather than structure (f64 noise sits ~1e-16
/// of scale, genuine jumps at >= 1e-3 of scale in practice).
const CUSP_NOISE_FLOOR: f64 = 1e-9;
/// Flags closer than this many samples merge into one cusp.
const CUSP_MERGE_GAP: usize = 3;

/// One detection pass: interior local maxima of the absolute second
/// difference exceeding `rel` times both the trailing-window median and the
/// centered-window median (the immediate neighbourhood excluded), above the
/// noise floor. Returns (index, jump estimate) clusters.
fn raw_cusp_scan(values: &[f64], rel: f64) -> Vec<(usize, f64)> {
    let n = values.len();
    if n < 7 {
        return Vec::new();
    }
    let win = (n / 8).clamp(4, 32);
    let mut s = vec![0.0; n];
    for i in 1..n - 1 {
        s[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]).abs();
    }
    let floor = CUSP_NOISE_FLOOR * s.iter().cloned().fold(0.0, f64::max);

    let median = |slice: &mut Vec<f64>| -> f64 {
        slice.sort_by(|a, b| a.partial_cmp(b).unwrap());
        slice[slice.len() / 2]
    };

    let mut flagged: Vec<usize> = Vec::new();
    for i in 2..n - 2 {
        if s[i] <= floor || s[i] < s[i - 1] || s[i] < s[i + 1] {
            continue;
        }
        let lo = i.saturating_sub(win).max(1);
        let mut trailing: Vec<f64> = s[lo..i].to_vec();
        if trailing.len() < 3 {
            continue;
        }
        let med_trailing = median(&mut trailing);
        let hi = (i + win + 1).min(n - 1);
        let mut centered: Vec<f64> = Vec::with_capacity(2 * win);
        centered.extend_from_slice(&s[lo..i.saturating_sub(1)]);
        centered.extend_from_slice(&s[(i + 2).min(hi)..hi]);
        if centered.len() < 3 {
            continue;
        }
        let med_centered = median(&mut centered);
        if s[i] > rel * med_trailing && s[i] > rel * med_centered {
            flagged.push(i);
        }
    }

    // merge neighbouring flags, keep the strongest representative
    let mut out: Vec<(usize, f64)> = Vec::new();
    for i in flagged {
        if let Some(last) = out.last_mut() {
            if i - last.0 <= CUSP_MERGE_GAP {
                if s[i] > last.1 {
                    *last = (i, s[i]);
                }
                continue;
            }
        }
        out.push((i, s[i]));
    }
    out
}

/// Detects discontinuities of a (derivative) series on a uniform grid by
/// thresholding second differences against trailing- and centered-window
/// medians, keeping only jumps that persist when the grid is halved
/// (every-other-sample rescan). `rel_threshold` defaults to 5 in callers.
pub fn detect_cusps(deriv: &TimeSeries, rel_threshold: f64) -> Result<CuspReport> {
    if deriv.len() < 16 {
        return Err(Error::InvalidInput(format!(
            "cusp detection needs at least 16 points, got {}",
            deriv.len()
        )));
    }
    if !(rel_threshold > 1.0) {
        return Err(Error::InvalidInput("rel_threshold must exceed 1".into()));
    }
    let h = deriv.uniform_spacing()?;
    let times = deriv.times();
    let fine = raw_cusp_scan(deriv.values(), rel_threshold);

    let coarse_values: Vec<f64> = deriv.values().iter().step_by(2).cloned().collect();
    let coarse_times: Vec<f64> = times.iter().step_by(2).cloned().collect();
    let coarse = raw_cusp_scan(&coarse_values, rel_threshold);
    let match_tol = 4.0 * h;

    let mut report = CuspReport::default();
    for (i, jump) in fine {
        let t = times[i];
        if coarse
            .iter()
            .any(|&(j, _)| (coarse_times[j] - t).abs() <= match_tol)
        {
            report.times.push(t);
            report.jump_sizes.push(jump);
        }
    }
    Ok(report)
}
