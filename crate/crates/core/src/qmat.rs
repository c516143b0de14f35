//! Dense complex 2x2/4x4 matrix kernel: Pauli constructors, Kronecker
//! products, Hermitian eigendecomposition, partial transposition and the
//! trace norm.
//!
//! Everything is fixed at two-qubit size. The basis ordering is
//! |a> = |00>, |b> = |01>, |c> = |10>, |d> = |11> as indices 0..3, with the
//! first (left) tensor factor belonging to qubit 1.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hermiticity tolerance on the largest entry of `m - m^dag`.
pub const TOL_HERM: f64 = 1e-10;
/// Unit-trace tolerance for density matrices.
pub const TOL_TRACE: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may carry before rejection;
/// anything in `[TOL_PSD, 0)` is treated as roundoff and clamped to zero.
pub const TOL_PSD: f64 = -1e-10;

/// Off-diagonal norm threshold (relative to the Frobenius norm) at which the
/// Jacobi eigensolver stops sweeping.
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Pauli axis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Which qubit an operation acts on; qubit 1 is the left tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    One,
    Two,
}

/// Dense 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QMatrix2 {
    e: [[C64; 2]; 2],
}

impl QMatrix2 {
    pub fn zero() -> Self {
        QMatrix2 {
            e: [[C64::new(0.0, 0.0); 2]; 2],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.e[0][0] = C64::new(1.0, 0.0);
        m.e[1][1] = C64::new(1.0, 0.0);
        m
    }

    pub fn from_rows(e: [[C64; 2]; 2]) -> Self {
        QMatrix2 { e }
    }

    pub fn mul(&self, rhs: &QMatrix2) -> QMatrix2 {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += self.e[i][k] * rhs.e[k][j];
                }
                out.e[i][j] = acc;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for QMatrix2 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.e[i][j]
    }
}

/// The standard Pauli matrix for the given axis.
pub fn pauli(axis: Axis) -> QMatrix2 {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match axis {
        Axis::X => QMatrix2::from_rows([[z, one], [one, z]]),
        Axis::Y => QMatrix2::from_rows([[z, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), z]]),
        Axis::Z => QMatrix2::from_rows([[one, z], [z, -one]]),
    }
}

/// Dense 4x4 complex matrix with value semantics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QMatrix {
    e: [[C64; 4]; 4],
}

impl QMatrix {
    pub fn zero() -> Self {
        QMatrix {
            e: [[C64::new(0.0, 0.0); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.e[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(e: [[C64; 4]; 4]) -> Self {
        QMatrix { e }
    }

    pub fn diag_re(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.e[i][i] = C64::new(d[i], 0.0);
        }
        m
    }

    /// Outer product `|ket><ket|` of a (not necessarily normalized) vector.
    pub fn outer(ket: [C64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] = ket[i] * ket[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> QMatrix {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = self.e[j][i].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = self.e[j][i];
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2] + self.e[3][3]
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn scale_c(&self, s: C64) -> QMatrix {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    /// Largest entry magnitude of `self - other`.
    pub fn max_abs_diff(&self, other: &QMatrix) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.e[i][j] - other.e[i][j]).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&QMatrix::zero())
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += self.e[i][j].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Largest entry magnitude of `m - m^dag`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unit_trace(&self, tol: f64) -> bool {
        (self.trace() - C64::new(1.0, 0.0)).norm() <= tol
    }

    /// True when every eigenvalue is at least `tol` (pass a small negative
    /// `tol` such as [`TOL_PSD`] to allow roundoff).
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(TOL_HERM) {
            return false;
        }
        match hermitian_eigen(self) {
            Ok(eig) => eig.values[0] >= tol,
            Err(_) => false,
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.e[i][j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.e[i][j]
    }
}

impl Add for QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: QMatrix) -> QMatrix {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }
}

impl Sub for QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: QMatrix) -> QMatrix {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] -= rhs.e[i][j];
            }
        }
        out
    }
}

impl Neg for QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale(-1.0)
    }
}

impl Mul for QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: QMatrix) -> QMatrix {
        let mut out = QMatrix::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.e[i][k] * rhs.e[k][j];
                }
                out.e[i][j] = acc;
            }
        }
        out
    }
}

/// Kronecker product with qubit 1 as the left factor:
/// `(a ⊗ b)[2i+k][2j+l] = a[i][j] b[k][l]`.
pub fn kron(a: &QMatrix2, b: &QMatrix2) -> QMatrix {
    let mut out = QMatrix::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.e[2 * i + k][2 * j + l] = a.e[i][j] * b.e[k][l];
                }
            }
        }
    }
    out
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns of a
/// Hermitian matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigensystem {
    pub values: [f64; 4],
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: QMatrix,
}

impl Eigensystem {
    /// `V diag(f(values)) V^dag` for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> QMatrix {
        let mut out = QMatrix::zero();
        for k in 0..4 {
            let fk = f(self.values[k]);
            for i in 0..4 {
                for j in 0..4 {
                    out.e[i][j] += fk * self.vectors.e[i][k] * self.vectors.e[j][k].conj();
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi sweeps with a fixed
/// (p, q) visiting order, so results are reproducible bit-for-bit.
///
/// Rejects inputs whose hermiticity defect exceeds [`TOL_HERM`].
pub fn hermitian_eigen(m: &QMatrix) -> Result<Eigensystem> {
    let defect = m.hermiticity_defect();
    if defect > TOL_HERM {
        return Err(Error::ContractViolation(format!(
            "hermitian_eigen expects a Hermitian matrix; defect = {defect:.3e}"
        )));
    }

    let mut a = *m;
    // Work on the exactly Hermitian average so the diagonal stays real.
    for i in 0..4 {
        for j in 0..4 {
            let h = (a.e[i][j] + m.e[j][i].conj()) * 0.5;
            a.e[i][j] = h;
        }
        a.e[i][i] = C64::new(a.e[i][i].re, 0.0);
    }

    let scale = a.frobenius_norm().max(1.0);
    let mut v = QMatrix::identity();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                off += 2.0 * a.e[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.e[p][q];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase factor turning the (p,q) block real, then the usual
                // symmetric Schur rotation on the realified block.
                let phase = apq / mag;
                let app = a.e[p][p].re;
                let aqq = a.e[q][q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Block unitary: [[c, s], [-s e^{-i phi}, c e^{-i phi}]].
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -s * phase.conj();
                let jqq = c * phase.conj();

                // a <- J^dag a J, applied as column then row updates.
                for r in 0..4 {
                    let arp = a.e[r][p];
                    let arq = a.e[r][q];
                    a.e[r][p] = arp * jpp + arq * jqp;
                    a.e[r][q] = arp * jpq + arq * jqq;
                }
                for r in 0..4 {
                    let apr = a.e[p][r];
                    let aqr = a.e[q][r];
                    a.e[p][r] = jpp.conj() * apr + jqp.conj() * aqr;
                    a.e[q][r] = jpq.conj() * apr + jqq.conj() * aqr;
                }
                a.e[p][p] = C64::new(a.e[p][p].re, 0.0);
                a.e[q][q] = C64::new(a.e[q][q].re, 0.0);
                // v <- v J
                for r in 0..4 {
                    let vrp = v.e[r][p];
                    let vrq = v.e[r][q];
                    v.e[r][p] = vrp * jpp + vrq * jqp;
                    v.e[r][q] = vrp * jpq + vrq * jqq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.e[i][i].re.partial_cmp(&a.e[j][j].re).unwrap());

    let mut values = [0.0f64; 4];
    let mut vectors = QMatrix::zero();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a.e[src][src].re;
        for r in 0..4 {
            vectors.e[r][dst] = v.e[r][src];
        }
    }
    Ok(Eigensystem { values, vectors })
}

/// Transpose the indices of one qubit only. Hermitian in, Hermitian out;
/// the trace is untouched.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> QMatrix {
    partial_transpose_matrix(rho.matrix(), subsystem)
}

/// [`partial_transpose`] on a bare matrix: a pure index permutation, so
/// applying it twice returns the input exactly.
pub fn partial_transpose_matrix(m: &QMatrix, subsystem: Subsystem) -> QMatrix {
    let mut out = QMatrix::zero();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let (r, c) = (2 * i + k, 2 * j + l);
                    out.e[r][c] = match subsystem {
                        Subsystem::One => m.e[2 * j + k][2 * i + l],
                        Subsystem::Two => m.e[2 * i + l][2 * j + k],
                    };
                }
            }
        }
    }
    out
}

/// Trace norm of a Hermitian matrix: the sum of absolute eigenvalues.
pub fn trace_norm(m: &QMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    Ok(eig.values.iter().map(|l| l.abs()).sum())
}

/// A validated two-qubit density matrix: Hermitian within [`TOL_HERM`],
/// unit trace within [`TOL_TRACE`], eigenvalues at least [`TOL_PSD`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    m: QMatrix,
}

impl DensityMatrix {
    /// Validate and construct. Eigenvalues in `[TOL_PSD, 0)` are clamped to
    /// zero (with the trace renormalized); anything lower is rejected.
    pub fn new(m: QMatrix) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > TOL_HERM {
            return Err(Error::ContractViolation(format!(
                "density matrix is not Hermitian; defect = {defect:.3e}"
            )));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TOL_TRACE {
            return Err(Error::ContractViolation(format!(
                "density matrix trace is {tr}; expected 1"
            )));
        }
        let eig = hermitian_eigen(&m)?;
        let min = eig.values[0];
        if min < TOL_PSD {
            return Err(Error::ContractViolation(format!(
                "density matrix has eigenvalue {min:.3e} below the PSD tolerance"
            )));
        }
        if min < 0.0 {
            let mut clamped = eig.values;
            for v in clamped.iter_mut() {
                *v = v.max(0.0);
            }
            let total: f64 = clamped.iter().sum();
            let mut m2 = QMatrix::zero();
            for k in 0..4 {
                let w = C64::new(clamped[k] / total, 0.0);
                for i in 0..4 {
                    for j in 0..4 {
                        m2.e[i][j] += w * eig.vectors.e[i][k] * eig.vectors.e[j][k].conj();
                    }
                }
            }
            return Ok(DensityMatrix { m: m2 });
        }
        Ok(DensityMatrix { m })
    }

    /// Normalized pure-state projector `|psi><psi| / <psi|psi>`.
    pub fn from_pure(ket: [C64; 4]) -> Result<Self> {
        let norm_sqr: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr <= 0.0 {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        Ok(DensityMatrix {
            m: QMatrix::outer(ket).scale(1.0 / norm_sqr),
        })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> QMatrix {
        self.m
    }
}
