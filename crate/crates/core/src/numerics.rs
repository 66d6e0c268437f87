//! Fixed-size complex linear algebra for one- and two-qubit operators.
//!
//! Everything here works on stack arrays: [`Mat2`] and [`Mat4`] are row-major,
//! [`Vec4`] is a two-qubit state in the computational basis `|00>, |01>, |10>, |11>`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default tolerance for accepting a matrix as unitary.
pub const UNITARITY_TOL: f64 = 1e-9;
/// Default tolerance for treating two phases as equal.
pub const PHASE_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// A 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const PAULI_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const PAULI_Y: Mat2 = Mat2([[ZERO, C64::new(0.0, -1.0)], [I, ZERO]]);
    pub const PAULI_Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]]);

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        Mat2(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }
}

/// A 4×4 complex matrix acting on two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat4 {
    pub const ZERO: Mat4 = Mat4([[ZERO; 4]; 4]);

    pub fn identity() -> Mat4 {
        Mat4::from_diagonal([ONE; 4])
    }

    pub fn from_diagonal(d: [C64; 4]) -> Mat4 {
        let mut m = Mat4::ZERO;
        for (k, z) in d.into_iter().enumerate() {
            m.0[k][k] = z;
        }
        m
    }

    /// The SWAP gate `|ab> -> |ba>`.
    pub fn swap() -> Mat4 {
        let mut m = Mat4::ZERO;
        m.0[0][0] = ONE;
        m.0[1][2] = ONE;
        m.0[2][1] = ONE;
        m.0[3][3] = ONE;
        m
    }

    pub fn adjoint(&self) -> Mat4 {
        let mut out = Mat4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat4 {
        let mut out = Mat4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat4 {
        Mat4(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn diagonal(&self) -> [C64; 4] {
        std::array::from_fn(|k| self.0[k][k])
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().iter().sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest off-diagonal entry modulus.
    pub fn max_offdiag(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst = worst.max(self.0[i][j].norm());
                }
            }
        }
        worst
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * v.0[j]).sum()))
    }

    /// `<v| M |v>`.
    pub fn expectation(&self, v: &Vec4) -> C64 {
        v.inner(&self.apply(v))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap();
            if a[pivot][col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                let (upper, lower) = a.split_at_mut(row);
                for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                    *dst -= f * src;
                }
            }
        }
        det
    }
}

impl Mul for Mat4 {
    type Output = Mat4;

    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::ZERO;
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl Add for Mat4 {
    type Output = Mat4;

    fn add(self, rhs: Mat4) -> Mat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat4 {
    type Output = Mat4;

    fn sub(self, rhs: Mat4) -> Mat4 {
        self + rhs.scale(C64::new(-1.0, 0.0))
    }
}

/// A two-qubit state vector in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4(pub [C64; 4]);

impl Vec4 {
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Vec4) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn normalized(&self) -> Vec4 {
        let n = self.norm_sqr().sqrt();
        Vec4(self.0.map(|z| z / n))
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn conj(&self) -> Vec4 {
        Vec4(self.0.map(|z| z.conj()))
    }
}

/// Kronecker product `a ⊗ b`; block `(i, j)` of the result is `a[i][j]·b`.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = Mat4::ZERO;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Product state `a ⊗ b`.
pub fn kron_vec(a: [C64; 2], b: [C64; 2]) -> Vec4 {
    Vec4([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
}

/// `max |m†m - I|` over all entries.
pub fn unitarity_deviation(m: &Mat4) -> f64 {
    (m.adjoint() * *m - Mat4::identity()).max_abs()
}

pub fn is_unitary(m: &Mat4, tol: f64) -> bool {
    unitarity_deviation(m) <= tol
}

/// Coefficients `c[0..=4]` of `det(zI - m) = Σ c[k] z^k` (Faddeev–LeVerrier).
pub fn characteristic_polynomial(m: &Mat4) -> [C64; 5] {
    let mut coeffs = [ZERO; 5];
    coeffs[4] = ONE;
    let mut aux = Mat4::ZERO;
    for k in 1..=4 {
        // aux_k = m·aux_{k-1} + c_{n-k+1}·I
        aux = *m * aux + Mat4::identity().scale(coeffs[4 - k + 1]);
        let c = -(*m * aux).trace() / k as f64;
        coeffs[4 - k] = c;
    }
    coeffs
}

pub fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// Eigenphases `θ_k ∈ (-π, π]` of a unitary, with multiplicity, so that the
/// eigenvalues are `e^{iθ_k}`.
pub fn unitary_eigenphases(m: &Mat4) -> Result<[f64; 4]> {
    unitary_eigenphases_tol(m, UNITARITY_TOL)
}

pub fn unitary_eigenphases_tol(m: &Mat4, tol: f64) -> Result<[f64; 4]> {
    let deviation = unitarity_deviation(m);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    let (_, eigenvalues) = normal_eigen(m);
    Ok(eigenvalues.map(|z| wrap_phase(z.arg())))
}

/// Diagonalizes a normal matrix: returns unitary `V` and eigenvalues `d`
/// with `m ≈ V diag(d) V†`.
///
/// The matrix is split into commuting Hermitian parts `H = (m + m†)/2` and
/// `K = (m - m†)/2i`; a Jacobi sweep diagonalizes `H + γK` and the eigenvalues
/// are read off `V† m V`. A second `γ` resolves the rare case where two distinct
/// eigenvalues project onto the same value of `H + γK`.
pub(crate) fn normal_eigen(m: &Mat4) -> (Mat4, [C64; 4]) {
    const MIXES: [f64; 4] = [
        0.577_215_664_901_532_9,
        -1.618_033_988_749_895,
        2.236_067_977_499_79,
        -0.414_213_562_373_095,
    ];
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut v = Mat4::identity();
    let mut w = *m;
    for gamma in MIXES {
        let wd = w.adjoint();
        let herm = (w + wd).scale(C64::new(0.5, 0.0));
        let skew = (w - wd).scale(C64::new(0.0, -0.5));
        let mixed = herm + skew.scale(C64::new(gamma, 0.0));
        let p = jacobi_hermitian(&mixed);
        w = p.adjoint() * w * p;
        v = v * p;
        if w.max_offdiag() <= 1e-14 * scale {
            break;
        }
    }
    (v, w.diagonal())
}

/// Cyclic complex Jacobi: returns unitary `P` with `P† a P` diagonal.
fn jacobi_hermitian(a: &Mat4) -> Mat4 {
    let mut a = *a;
    let mut p_acc = Mat4::identity();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        if a.max_offdiag() <= 1e-16 * scale {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                let apq = a.0[p][q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = D·R with D = diag(.., e^{-iφ} at q, ..) making a_pq real.
                let mut j = Mat4::identity();
                j.0[p][p] = C64::new(c, 0.0);
                j.0[p][q] = C64::new(s, 0.0);
                j.0[q][p] = phase.conj() * (-s);
                j.0[q][q] = phase.conj() * c;
                a = j.adjoint() * a * j;
                // Re-impose exact Hermitian structure on the pivot pair.
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;
                p_acc = p_acc * j;
            }
        }
    }
    p_acc
}
