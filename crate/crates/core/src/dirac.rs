//! Dirac-like Hamiltonians with tensor and pseudotensor external-field
//! couplings, their closed-form eigenvalues and eigenprojectors, and the
//! trapped-ion parameter correspondence.
//!
//! The Dirac representation is fixed by the two-qubit decomposition of the
//! Hamiltonian: beta = sz (x) I, alpha_k = sx (x) s_k, Sigma_k = I (x) s_k,
//! gamma5 = sx (x) I. Qubit 1 carries the total-angular-momentum degree of
//! freedom, qubit 2 its projection onto the lifting magnetic field.

use crate::error::{Error, Result};
use crate::qmat::{kron, pauli, Axis, DensityMatrix, QMatrix, QMatrix2};

/// Relative threshold below which `c2` is treated as zero and the spectrum
/// as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Tolerance used for the internal identities the projector ansatz relies
/// on (O^2 = c2 I, [H, O] = 0, purity of the projectors).
const ANSATZ_TOL: f64 = 1e-10;

/// Physical parameters of the Dirac Hamiltonian in natural units
/// (hbar = c = 1): momentum along x, electric field of magnitude `e_field`
/// in the xy-plane at angle `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiracParams {
    /// Mass m >= 0.
    pub m: f64,
    /// Momentum magnitude along x.
    pub p: f64,
    /// Electric-field magnitude.
    pub e_field: f64,
    /// Tensor coupling.
    pub kappa: f64,
    /// Pseudotensor coupling.
    pub mu: f64,
    /// Field angle in the xy-plane, radians.
    pub theta: f64,
    /// Collective-dephasing rate Gamma >= 0 (consumed by the channel module).
    pub gamma_rate: f64,
}

impl DiracParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 || self.e_field > 0.0) {
            return Err(Error::InvalidInput(
                "at least one of p, E must be positive".into(),
            ));
        }
        if self.m < 0.0 || self.e_field < 0.0 || self.gamma_rate < 0.0 {
            return Err(Error::InvalidInput(
                "m, E and Gamma must be nonnegative".into(),
            ));
        }
        if ![
            self.m,
            self.p,
            self.e_field,
            self.kappa,
            self.mu,
            self.theta,
            self.gamma_rate,
        ]
        .iter()
        .all(|v| v.is_finite())
        {
            return Err(Error::InvalidInput("parameters must be finite".into()));
        }
        Ok(())
    }

    /// Field vector E (cos theta, sin theta, 0).
    pub fn field_vector(&self) -> [f64; 3] {
        [
            self.e_field * self.theta.cos(),
            self.e_field * self.theta.sin(),
            0.0,
        ]
    }

    /// Embed into the generalized parameter set: kappa_a B -> kappa E,
    /// mu_a B -> mu E, momentum along x, all other couplings zero.
    pub fn to_generalized(&self) -> GeneralizedParams {
        GeneralizedParams {
            m: self.m,
            momentum: [self.p, 0.0, 0.0],
            nu: 0.0,
            q: 0.0,
            w: [0.0; 3],
            kappa_a: self.kappa,
            mu_a: self.mu,
            b_field: self.field_vector(),
        }
    }
}

/// Parameters of the generalized Hamiltonian carrying every global external
/// coupling: pseudoscalar `nu`, pseudovector `(q, w)`, and tensor /
/// pseudotensor couplings `kappa_a`, `mu_a` to the field `b_field`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedParams {
    pub m: f64,
    pub momentum: [f64; 3],
    pub nu: f64,
    pub q: f64,
    pub w: [f64; 3],
    pub kappa_a: f64,
    pub mu_a: f64,
    pub b_field: [f64; 3],
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn axes() -> [QMatrix2; 3] {
    [pauli(Axis::X), pauli(Axis::Y), pauli(Axis::Z)]
}

/// The Dirac Hamiltonian in two-qubit form:
/// `(sz x I) m + (sx x s_x) p + (sz x s_k) kappa E_k - (sy x s_k) mu E_k`.
/// Hermitian and traceless by construction.
pub fn build_hd(params: &DiracParams) -> QMatrix {
    let i2 = QMatrix2::identity();
    let s = axes();
    let e = params.field_vector();
    let mut h =
        kron(&pauli(Axis::Z), &i2).scale(params.m) + kron(&pauli(Axis::X), &s[0]).scale(params.p);
    for k in 0..3 {
        h = h + kron(&pauli(Axis::Z), &s[k]).scale(params.kappa * e[k])
            - kron(&pauli(Axis::Y), &s[k]).scale(params.mu * e[k]);
    }
    h
}

/// The generalized Hamiltonian
/// `beta m + alpha.P + i beta gamma5 nu - gamma5 q + gamma5 alpha.W
///  + beta Sigma.(kappa_a B) + i beta alpha.(mu_a B)`.
///
/// In the fixed representation the terms reduce to
/// `m (sz x I) + P_k (sx x s_k) - nu (sy x I) - q (sx x I) + W_k (I x s_k)
///  + kappa_a B_k (sz x s_k) - mu_a B_k (sy x s_k)`,
/// which reproduces [`build_hd`] exactly under the reduction of
/// [`DiracParams::to_generalized`].
pub fn build_hg(params: &GeneralizedParams) -> QMatrix {
    let i2 = QMatrix2::identity();
    let s = axes();
    let mut h = kron(&pauli(Axis::Z), &i2).scale(params.m)
        + kron(&pauli(Axis::Y), &i2).scale(-params.nu)
        + kron(&pauli(Axis::X), &i2).scale(-params.q);
    for k in 0..3 {
        h = h
            + kron(&pauli(Axis::X), &s[k]).scale(params.momentum[k])
            + kron(&i2, &s[k]).scale(params.w[k])
            + kron(&pauli(Axis::Z), &s[k]).scale(params.kappa_a * params.b_field[k])
            - kron(&pauli(Axis::Y), &s[k]).scale(params.mu_a * params.b_field[k]);
    }
    h
}

/// The operator `O = (H_G^2 - c1 I)/2`: traceless, orthogonal to `H_G`
/// under the trace inner product.
pub fn operator_o(params: &GeneralizedParams) -> QMatrix {
    let h = build_hg(params);
    let (c1, _) = invariants(params);
    (h * h - QMatrix::identity().scale(c1)).scale(0.5)
}

/// Closed-form invariants of the generalized Hamiltonian:
/// `c1 = Tr[H^2]/4` and `c2 = Tr[(H^2 - c1 I)^2]/16`.
///
/// `c2` is assembled from the squared coefficients of `O` in the Pauli
/// tensor basis:
///
/// ```text
/// c2 = |(nu mu_a + m kappa_a) B - q P|^2
///    + |m W + mu_a (P x B)|^2
///    + |nu W - kappa_a (P x B)|^2
///    + q^2 W^2 + (P.W)^2 + (kappa_a^2 + mu_a^2) (W.B)^2
/// ```
///
/// For the `build_hd` special case this reduces to
/// `c2 = E^2 [m^2 kappa^2 + (kappa^2 + mu^2) p^2 sin^2 theta]`.
pub fn invariants(params: &GeneralizedParams) -> (f64, f64) {
    let GeneralizedParams {
        m,
        momentum: p,
        nu,
        q,
        w,
        kappa_a,
        mu_a,
        b_field: b,
    } = *params;
    let c1 = dot(p, p)
        + m * m
        + nu * nu
        + q * q
        + dot(w, w)
        + (kappa_a * kappa_a + mu_a * mu_a) * dot(b, b);

    let pxb = cross(p, b);
    let mut v1 = [0.0; 3];
    let mut v2 = [0.0; 3];
    let mut v3 = [0.0; 3];
    for k in 0..3 {
        v1[k] = (nu * mu_a + m * kappa_a) * b[k] - q * p[k];
        v2[k] = m * w[k] + mu_a * pxb[k];
        v3[k] = nu * w[k] - kappa_a * pxb[k];
    }
    let wb = dot(w, b);
    let c2 = dot(v1, v1)
        + dot(v2, v2)
        + dot(v3, v3)
        + q * q * dot(w, w)
        + dot(p, w) * dot(p, w)
        + (kappa_a * kappa_a + mu_a * mu_a) * wb * wb;
    (c1, c2)
}

/// `c1` and `c2` straight from the traces of the assembled Hamiltonian.
/// This is the route the spectral constructions use, so any field angle is
/// supported without a special-case formula.
fn invariants_from_matrix(h: &QMatrix) -> (f64, f64) {
    let h2 = *h * *h;
    let c1 = h2.trace().re / 4.0;
    let m = h2 - QMatrix::identity().scale(c1);
    let c2 = (m * m).trace().re / 16.0;
    (c1, c2)
}

fn check_degeneracy(c1: f64, c2: f64) -> Result<()> {
    if c2 <= DEGENERACY_TOL * (c1 * c1).max(1.0) {
        return Err(Error::DegenerateSpectrum { c1, c2 });
    }
    Ok(())
}

/// Eigenvalue for labels `(n, s)`, each in {0, 1}:
/// `lambda_{n,s} = (-1)^n sqrt(c1 + 2 (-1)^s sqrt(c2))`.
fn lambda_ns(c1: f64, c2: f64, n: usize, s: usize) -> f64 {
    let sign_n = if n == 0 { 1.0 } else { -1.0 };
    let sign_s = if s == 0 { 1.0 } else { -1.0 };
    let radicand = c1 + 2.0 * sign_s * c2.sqrt();
    // c1 >= 2 sqrt(c2) holds for every Hermitian H; guard against roundoff.
    debug_assert!(radicand > -1e-12 * c1.max(1.0));
    sign_n * radicand.max(0.0).sqrt()
}

/// Closed-form eigenvalues of the Dirac Hamiltonian, ordered
/// `[(0,0), (0,1), (1,0), (1,1)]` in the `(n, s)` labels.
///
/// Fails with [`Error::DegenerateSpectrum`] when `c2` vanishes (for example
/// the free Dirac doublet), where the four values collapse pairwise.
pub fn eigenvalues(params: &DiracParams) -> Result<[f64; 4]> {
    params.validate()?;
    let h = build_hd(params);
    let (c1, c2) = invariants_from_matrix(&h);
    check_degeneracy(c1, c2)?;
    Ok([
        lambda_ns(c1, c2, 0, 0),
        lambda_ns(c1, c2, 0, 1),
        lambda_ns(c1, c2, 1, 0),
        lambda_ns(c1, c2, 1, 1),
    ])
}

/// Eigenvalues, eigenprojectors and the invariants of a Dirac Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralData {
    lambdas: [f64; 4],
    projectors: [DensityMatrix; 4],
    pub c1: f64,
    pub c2: f64,
}

impl SpectralData {
    /// All four `(n, s)` label pairs in storage order.
    pub const LABELS: [(usize, usize); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

    pub fn lambda(&self, n: usize, s: usize) -> f64 {
        self.lambdas[2 * n + s]
    }

    pub fn projector(&self, n: usize, s: usize) -> &DensityMatrix {
        &self.projectors[2 * n + s]
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }

    /// `(lambda, projector)` pairs in `LABELS` order.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.lambdas.iter().copied().zip(self.projectors.iter())
    }
}

/// One factor-ordered evaluation of the projector ansatz
/// `1/4 (I + (-1)^s O / sqrt(c2)) (I + (-1)^n H / |lambda|)`.
fn ansatz_product(
    h: &QMatrix,
    o: &QMatrix,
    sqrt_c2: f64,
    lambda: f64,
    n: usize,
    s: usize,
) -> QMatrix {
    let sign_n = if n == 0 { 1.0 } else { -1.0 };
    let sign_s = if s == 0 { 1.0 } else { -1.0 };
    let id = QMatrix::identity();
    let left = id + o.scale(sign_s / sqrt_c2);
    let right = id + h.scale(sign_n / lambda.abs());
    (left * right).scale(0.25)
}

fn purity_of(m: &QMatrix) -> f64 {
    (*m * *m).trace().re
}

/// Builds the four stationary eigenprojectors of the Dirac Hamiltonian via
/// the polynomial ansatz and verifies the identities it relies on:
/// `O^2 = c2 I`, `[H, O] = 0` (so both factor orders agree), and purity of
/// every projector.
pub fn eigenprojectors(params: &DiracParams) -> Result<SpectralData> {
    params.validate()?;
    let h = build_hd(params);
    let (c1, c2) = invariants_from_matrix(&h);
    check_degeneracy(c1, c2)?;
    let o = (h * h - QMatrix::identity().scale(c1)).scale(0.5);

    let scale = c2.max(1.0);
    let o2_defect = (o * o - QMatrix::identity().scale(c2)).max_abs();
    if o2_defect > ANSATZ_TOL * scale {
        return Err(Error::InternalConsistency(format!(
            "O^2 deviates from c2 I by {o2_defect:.3e}; the ansatz does not apply"
        )));
    }
    let comm = (h * o - o * h).max_abs();
    if comm > ANSATZ_TOL * scale {
        return Err(Error::InternalConsistency(format!(
            "[H, O] = {comm:.3e} is not zero; factor orders would disagree"
        )));
    }

    let sqrt_c2 = c2.sqrt();
    let mut lambdas = [0.0f64; 4];
    let mut projectors: Vec<DensityMatrix> = Vec::with_capacity(4);
    for &(n, s) in SpectralData::LABELS.iter() {
        let l = lambda_ns(c1, c2, n, s);
        lambdas[2 * n + s] = l;
        let varrho = ansatz_product(&h, &o, sqrt_c2, l, n, s);
        // Opposite factor order; equal because [H, O] = 0.
        let sign_n = if n == 0 { 1.0 } else { -1.0 };
        let sign_s = if s == 0 { 1.0 } else { -1.0 };
        let id = QMatrix::identity();
        let swapped =
            ((id + h.scale(sign_n / l.abs())) * (id + o.scale(sign_s / sqrt_c2))).scale(0.25);
        let order_defect = varrho.max_abs_diff(&swapped);
        if order_defect > ANSATZ_TOL {
            return Err(Error::InternalConsistency(format!(
                "ansatz factor orders differ by {order_defect:.3e}"
            )));
        }
        let purity = purity_of(&varrho);
        if (purity - 1.0).abs() > ANSATZ_TOL {
            return Err(Error::InternalConsistency(format!(
                "projector ({n},{s}) has purity {purity}; expected a pure state \
                 (O^2 = c2 I must fail for these parameters)"
            )));
        }
        projectors.push(DensityMatrix::new(varrho)?);
    }
    let projectors: [DensityMatrix; 4] = match projectors.try_into() {
        Ok(a) => a,
        Err(_) => unreachable!(),
    };
    Ok(SpectralData {
        lambdas,
        projectors,
        c1,
        c2,
    })
}

/// Coefficients `[xi0, xi1, xi2, xi3]` of the cubic polynomial expansion
/// `varrho = xi0 I + xi1 H + xi2 H^2 + xi3 H^3` of the `(n, s)` projector.
pub fn xi_coefficients(params: &DiracParams, n: usize, s: usize) -> Result<[f64; 4]> {
    params.validate()?;
    if n > 1 || s > 1 {
        return Err(Error::InvalidInput(format!(
            "labels must be 0 or 1, got ({n},{s})"
        )));
    }
    let h = build_hd(params);
    let (c1, c2) = invariants_from_matrix(&h);
    check_degeneracy(c1, c2)?;
    let sqrt_c2 = c2.sqrt();
    let l = lambda_ns(c1, c2, n, s).abs();
    let sign_n = if n == 0 { 1.0 } else { -1.0 };
    let sign_s = if s == 0 { 1.0 } else { -1.0 };
    Ok([
        0.25 - sign_s * c1 / (8.0 * sqrt_c2),
        sign_n / (4.0 * l) - sign_n * sign_s * c1 / (8.0 * sqrt_c2 * l),
        sign_s / (8.0 * sqrt_c2),
        sign_n * sign_s / (8.0 * sqrt_c2 * l),
    ])
}

/// Trapped-ion drive parameters entering the Dirac correspondence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IonParams {
    /// Lamb-Dicke parameter eta.
    pub eta: f64,
    /// Sideband Rabi frequency Omega-tilde.
    pub omega_tilde: f64,
    /// Detuning delta.
    pub delta: f64,
    /// Ground-state delocalization width Delta.
    pub width: f64,
    /// Carrier frequencies Omega_j^(1) driving the tensor coupling.
    pub omega1: [f64; 3],
    /// Carrier frequencies Omega_j^(2) driving the pseudotensor coupling.
    pub omega2: [f64; 3],
}

/// Result of the ion -> Dirac conversion: the natural-unit parameters plus
/// the raw speed-of-light analogue `c = 2 eta Delta Omega-tilde` so the
/// ion-frame scales can be reconstructed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IonConversion {
    pub params: DiracParams,
    pub c: f64,
}

/// Maps ion parameters to natural-unit Dirac parameters.
///
/// The ion-frame energies are `m c^2 = 2 delta`, `kappa E = 2 |Omega^(1)|`
/// and `mu E / c = 2 |Omega^(2)|` with `c = 2 eta Delta Omega-tilde`.
/// Natural units divide the whole Hamiltonian by `c^2` (one time rescaling,
/// so `c` is not double-counted), giving `m = 2 delta / c^2` and field
/// couplings `2 |Omega| / c^2`. The field magnitude is anchored at
/// `kappa = 1` whenever the tensor carrier is present; only the products
/// `kappa E` and `mu E` enter the Hamiltonian.
///
/// The momentum is left at zero: it labels the motional state and is not an
/// ion drive parameter.
pub fn from_ion_params(ion: &IonParams) -> Result<IonConversion> {
    if !(ion.width > 0.0 && ion.omega_tilde > 0.0 && ion.eta > 0.0) {
        return Err(Error::InvalidInput(
            "eta, Omega-tilde and Delta must be positive (no speed-of-light analogue otherwise)"
                .into(),
        ));
    }
    let c = 2.0 * ion.eta * ion.width * ion.omega_tilde;
    let c2 = c * c;
    let m = 2.0 * ion.delta / c2;

    let v1 = [
        2.0 * ion.omega1[0] / c2,
        2.0 * ion.omega1[1] / c2,
        2.0 * ion.omega1[2] / c2,
    ];
    let v2 = [
        2.0 * ion.omega2[0] / c2,
        2.0 * ion.omega2[1] / c2,
        2.0 * ion.omega2[2] / c2,
    ];
    let n1 = dot(v1, v1).sqrt();
    let n2 = dot(v2, v2).sqrt();

    for (label, v, n) in [("Omega^(1)", v1, n1), ("Omega^(2)", v2, n2)] {
        if n > 0.0 && v[2].abs() > 1e-12 * n {
            return Err(Error::InvalidInput(format!(
                "{label} must lie in the xy-plane for the in-plane field layout"
            )));
        }
    }
    if n1 > 0.0 && n2 > 0.0 {
        let cr = cross(v1, v2);
        if dot(cr, cr).sqrt() > 1e-9 * n1 * n2 {
            return Err(Error::InvalidInput(
                "Omega^(1) and Omega^(2) must be collinear: both couple to the same field".into(),
            ));
        }
    }

    let (e_field, kappa, mu, theta) = if n1 > 0.0 {
        // mu is signed by the relative orientation of the two carriers.
        (n1, 1.0, dot(v1, v2) / (n1 * n1), v1[1].atan2(v1[0]))
    } else if n2 > 0.0 {
        (n2, 0.0, 1.0, v2[1].atan2(v2[0]))
    } else {
        (0.0, 0.0, 0.0, std::f64::consts::FRAC_PI_4)
    };

    Ok(IonConversion {
        params: DiracParams {
            m,
            p: 0.0,
            e_field,
            kappa,
            mu,
            theta,
            gamma_rate: 0.0,
        },
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::hermitian_eigen;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    pub(crate) fn base_params(m: f64) -> DiracParams {
        DiracParams {
            m,
            p: 1.0,
            e_field: 1.0,
            kappa: 1.0,
            mu: 1.0,
            theta: FRAC_PI_4,
            gamma_rate: 0.5,
        }
    }

    fn random_params(rng: &mut impl Rng) -> DiracParams {
        loop {
            let params = DiracParams {
                m: rng.gen_range(0.0..3.0),
                p: rng.gen_range(0.05..3.0),
                e_field: rng.gen_range(0.05..3.0),
                kappa: rng.gen_range(-2.0..2.0),
                mu: rng.gen_range(-2.0..2.0),
                theta: rng.gen_range(0.05..std::f64::consts::FRAC_PI_2),
                gamma_rate: rng.gen_range(0.0..2.0),
            };
            let h = build_hd(&params);
            let (c1, c2) = invariants_from_matrix(&h);
            if c2 > 1e-6 * (c1 * c1).max(1.0) {
                return params;
            }
        }
    }

    fn random_generalized(rng: &mut impl Rng) -> GeneralizedParams {
        let mut v = || rng.gen_range(-2.0..2.0f64);
        GeneralizedParams {
            m: v(),
            momentum: [v(), v(), v()],
            nu: v(),
            q: v(),
            w: [v(), v(), v()],
            kappa_a: v(),
            mu_a: v(),
            b_field: [v(), v(), v()],
        }
    }

    #[test]
    fn hd_mass_term_only() {
        let params = DiracParams {
            m: 1.0,
            p: 0.0,
            e_field: 0.0,
            kappa: 0.0,
            mu: 0.0,
            theta: 0.0,
            gamma_rate: 0.0,
        };
        let h = build_hd(&params);
        assert!(h.max_abs_diff(&QMatrix::diag_re([1.0, 1.0, -1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn hd_kinetic_term_only() {
        let params = DiracParams {
            m: 0.0,
            p: 1.0,
            e_field: 0.0,
            kappa: 0.0,
            mu: 0.0,
            theta: 0.0,
            gamma_rate: 0.0,
        };
        let h = build_hd(&params);
        let want = kron(&pauli(Axis::X), &pauli(Axis::X));
        assert!(h.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn hd_full_case_spectrum() {
        let h = build_hd(&base_params(0.0));
        let eig = hermitian_eigen(&h).unwrap();
        let s5 = 5.0f64.sqrt();
        for (got, want) in eig.values.iter().zip([-s5, -1.0, 1.0, s5]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn hd_is_hermitian_and_traceless() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let h = build_hd(&random_params(&mut rng));
            assert!(h.hermiticity_defect() < 1e-14);
            assert!(h.trace().norm() < 1e-14);
        }
    }

    #[test]
    fn hg_free_mass() {
        let params = GeneralizedParams {
            m: 2.0,
            momentum: [0.0; 3],
            nu: 0.0,
            q: 0.0,
            w: [0.0; 3],
            kappa_a: 0.0,
            mu_a: 0.0,
            b_field: [0.0; 3],
        };
        let h = build_hg(&params);
        assert!(h.max_abs_diff(&QMatrix::diag_re([2.0, 2.0, -2.0, -2.0])) < 1e-15);
    }

    #[test]
    fn hg_reduces_to_hd() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let params = random_params(&mut rng);
            let hd = build_hd(&params);
            let hg = build_hg(&params.to_generalized());
            assert!(hd.max_abs_diff(&hg) < 1e-14);
        }
    }

    #[test]
    fn hg_pseudoscalar_spectrum() {
        let params = GeneralizedParams {
            m: 0.0,
            momentum: [0.0; 3],
            nu: 1.0,
            q: 0.0,
            w: [0.0; 3],
            kappa_a: 0.0,
            mu_a: 0.0,
            b_field: [0.0; 3],
        };
        let h = build_hg(&params);
        let eig = hermitian_eigen(&h).unwrap();
        for (got, want) in eig.values.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn operator_o_free_particle_is_zero() {
        let params = GeneralizedParams {
            m: 1.3,
            momentum: [0.7, 0.0, 0.0],
            nu: 0.0,
            q: 0.0,
            w: [0.0; 3],
            kappa_a: 0.0,
            mu_a: 0.0,
            b_field: [0.0; 3],
        };
        assert!(operator_o(&params).max_abs() < 1e-14);
    }

    #[test]
    fn operator_o_squares_to_g2() {
        // massless case: g2 = E^2 (mu^2 + kappa^2) p^2 / 2 = 1
        let o = operator_o(&base_params(0.0).to_generalized());
        assert!((o * o).max_abs_diff(&QMatrix::identity()) < 1e-12);
        // massive case: g2 = E^2 (m^2 kappa^2 + (mu^2+kappa^2) p^2/2) = 2
        let o = operator_o(&base_params(1.0).to_generalized());
        assert!((o * o).max_abs_diff(&QMatrix::identity().scale(2.0)) < 1e-12);
    }

    #[test]
    fn operator_o_is_traceless_and_orthogonal_to_h() {
        // Tr[O H] vanishes on the family the ansatz applies to, i.e. when
        // (m kappa_a + nu mu_a)(W.B) = q (P.W); w = 0 covers every Dirac
        // configuration.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..30 {
            let mut g = random_generalized(&mut rng);
            if i % 2 == 0 {
                g.w = [0.0; 3];
            } else {
                // keep w but orthogonalize it against both b_field and momentum
                let pxb = cross(g.momentum, g.b_field);
                let norm = dot(pxb, pxb).sqrt();
                if norm < 1e-6 {
                    g.w = [0.0; 3];
                } else {
                    g.w = [pxb[0] / norm, pxb[1] / norm, pxb[2] / norm];
                }
            }
            let o = operator_o(&g);
            let h = build_hg(&g);
            assert!(o.trace().norm() < 1e-10);
            assert!((o * h).trace().norm() < 1e-9);
        }
    }

    #[test]
    fn o_squared_obstruction_identity() {
        // For arbitrary couplings, O^2 - c2 I =
        // 2 [(m kappa_a + nu mu_a)(W.B) - q (P.W)] H.
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..50 {
            let g = random_generalized(&mut rng);
            let h = build_hg(&g);
            let o = operator_o(&g);
            let (_, c2) = invariants(&g);
            let coeff = 2.0
                * ((g.m * g.kappa_a + g.nu * g.mu_a) * dot(g.w, g.b_field)
                    - g.q * dot(g.momentum, g.w));
            let lhs = o * o - QMatrix::identity().scale(c2);
            let defect = lhs.max_abs_diff(&h.scale(coeff));
            assert!(
                defect < 1e-9 * c2.max(1.0),
                "obstruction identity defect {defect}"
            );
        }
    }

    #[test]
    fn invariants_examples() {
        let (c1, c2) = invariants(&base_params(0.0).to_generalized());
        assert!((c1 - 3.0).abs() < 1e-12 && (c2 - 1.0).abs() < 1e-12);
        let (c1, c2) = invariants(&base_params(1.0).to_generalized());
        assert!((c1 - 4.0).abs() < 1e-12 && (c2 - 2.0).abs() < 1e-12);
        let free = GeneralizedParams {
            m: 0.0,
            momentum: [2.0, 0.0, 0.0],
            nu: 0.0,
            q: 0.0,
            w: [0.0; 3],
            kappa_a: 0.0,
            mu_a: 0.0,
            b_field: [0.0; 3],
        };
        let (c1, c2) = invariants(&free);
        assert!((c1 - 4.0).abs() < 1e-12 && c2.abs() < 1e-12);
    }

    #[test]
    fn invariants_match_trace_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let g = random_generalized(&mut rng);
            let (c1, c2) = invariants(&g);
            let (c1_tr, c2_tr) = invariants_from_matrix(&build_hg(&g));
            assert!(
                (c1 - c1_tr).abs() < 1e-9 * c1.abs().max(1.0),
                "{c1} vs {c1_tr}"
            );
            assert!(
                (c2 - c2_tr).abs() < 1e-9 * c2.abs().max(1.0),
                "{c2} vs {c2_tr}"
            );
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let l = eigenvalues(&base_params(0.0)).unwrap();
        let s5 = 5.0f64.sqrt();
        assert!((l[0] - s5).abs() < 1e-12);
        assert!((l[1] - 1.0).abs() < 1e-12);
        assert!((l[2] + s5).abs() < 1e-12);
        assert!((l[3] + 1.0).abs() < 1e-12);

        let l = eigenvalues(&base_params(1.0)).unwrap();
        let r2 = 2.0f64.sqrt();
        assert!((l[0] - (4.0 + 2.0 * r2).sqrt()).abs() < 1e-12);
        assert!((l[1] - (4.0 - 2.0 * r2).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn free_dirac_is_degenerate() {
        let params = DiracParams {
            m: 1.0,
            p: 1.0,
            e_field: 0.0,
            kappa: 1.0,
            mu: 1.0,
            theta: FRAC_PI_4,
            gamma_rate: 0.0,
        };
        match eigenvalues(&params) {
            Err(Error::DegenerateSpectrum { .. }) => {}
            other => panic!("expected DegenerateSpectrum, got {other:?}"),
        }
    }

    #[test]
    fn closed_form_matches_dense_eigen() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..200 {
            let params = random_params(&mut rng);
            let mut closed = eigenvalues(&params).unwrap();
            let dense = hermitian_eigen(&build_hd(&params)).unwrap().values;
            closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in closed.iter().zip(dense.iter()) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn projector_completeness_and_eigen_relation() {
        let spec = eigenprojectors(&base_params(0.0)).unwrap();
        let h = build_hd(&base_params(0.0));
        let mut total = QMatrix::zero();
        for (l, proj) in spec.pairs() {
            total = total + *proj.matrix();
            let resid = (h * *proj.matrix() - proj.matrix().scale(l)).max_abs();
            assert!(resid < 1e-10, "eigen relation residual {resid}");
        }
        assert!(total.max_abs_diff(&QMatrix::identity()) < 1e-10);
        assert!((spec.lambda(0, 0) - 5.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn projector_orthogonality_idempotence_and_stationarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..40 {
            let params = random_params(&mut rng);
            let spec = eigenprojectors(&params).unwrap();
            let h = build_hd(&params);
            for (n, s) in SpectralData::LABELS {
                let pa = spec.projector(n, s).matrix();
                assert!((*pa * *pa).max_abs_diff(pa) < 1e-10);
                assert!((*pa * h - h * *pa).max_abs() < 1e-9);
                assert!(((h * *pa).trace().re - spec.lambda(n, s)).abs() < 1e-9);
                for (m, l) in SpectralData::LABELS {
                    if (m, l) == (n, s) {
                        continue;
                    }
                    let pb = spec.projector(m, l).matrix();
                    assert!((*pa * *pb).trace().norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn ansatz_with_zero_o_is_mixed() {
        // Hypothetical O = 0 input: the product collapses to the mixed state
        // 1/4 (I + (-1)^n H / |lambda|) with purity (1 + c1 / lambda^2) / 4.
        let params = base_params(1.0);
        let h = build_hd(&params);
        let (c1, _) = invariants_from_matrix(&h);
        let l = lambda_ns(c1, 2.0, 0, 0);
        let candidate = ansatz_product(&h, &QMatrix::zero(), 1.0, l, 0, 0);
        let purity = purity_of(&candidate);
        let expected = 0.25 * (1.0 + c1 / (l * l));
        assert!((purity - expected).abs() < 1e-12);
        assert!((purity - 1.0).abs() > 1e-3, "must fail the purity gate");
    }

    #[test]
    fn xi_polynomial_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let params = random_params(&mut rng);
            let spec = eigenprojectors(&params).unwrap();
            let h = build_hd(&params);
            let h2 = h * h;
            let h3 = h2 * h;
            for (n, s) in SpectralData::LABELS {
                let xi = xi_coefficients(&params, n, s).unwrap();
                let poly = QMatrix::identity().scale(xi[0])
                    + h.scale(xi[1])
                    + h2.scale(xi[2])
                    + h3.scale(xi[3]);
                assert!(poly.max_abs_diff(spec.projector(n, s).matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn xi_known_values() {
        // xi2 = (-1)^s / (8 sqrt(c2)); xi0 = 5/8 for (n,s) = (0,1) at c1 = 3,
        // sqrt(c2) = 1.
        let params = base_params(0.0);
        let xi = xi_coefficients(&params, 0, 1).unwrap();
        assert!((xi[0] - 0.625).abs() < 1e-12);
        assert!((xi[2] + 0.125).abs() < 1e-12);
        let xi = xi_coefficients(&params, 0, 0).unwrap();
        assert!((xi[2] - 0.125).abs() < 1e-12);
    }

    #[test]
    fn ion_conversion() {
        // zero detuning is massless
        let ion = IonParams {
            eta: 0.3,
            omega_tilde: 1.0,
            delta: 0.0,
            width: 0.8,
            omega1: [1.0, 0.0, 0.0],
            omega2: [2.0, 0.0, 0.0],
        };
        let conv = from_ion_params(&ion).unwrap();
        assert_eq!(conv.params.m, 0.0);

        // eta = Delta = Omega-tilde = 1/2 gives c = 1/4, m = 32 delta
        let ion = IonParams {
            eta: 0.5,
            omega_tilde: 0.5,
            delta: 0.7,
            width: 0.5,
            omega1: [0.0; 3],
            omega2: [0.0; 3],
        };
        let conv = from_ion_params(&ion).unwrap();
        assert!((conv.c - 0.25).abs() < 1e-15);
        assert!((conv.params.m - 32.0 * 0.7).abs() < 1e-12);
        // no carriers: free Dirac couplings
        assert_eq!(conv.params.e_field * conv.params.kappa, 0.0);
        assert_eq!(conv.params.e_field * conv.params.mu, 0.0);

        // zero Rabi frequency: no speed-of-light analogue
        let bad = IonParams {
            omega_tilde: 0.0,
            ..ion
        };
        assert!(from_ion_params(&bad).is_err());
    }

    #[test]
    fn ion_conversion_rejects_skew_carriers() {
        let ion = IonParams {
            eta: 0.5,
            omega_tilde: 0.5,
            delta: 0.0,
            width: 0.5,
            omega1: [1.0, 0.0, 0.0],
            omega2: [0.0, 1.0, 0.0],
        };
        assert!(from_ion_params(&ion).is_err());
    }
}
