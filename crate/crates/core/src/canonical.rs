//! Magic-basis machinery and the nonlocal (interaction) content of two-qubit gates.
//!
//! Every gate of the form `exp(-i(αx XX + αy YY + αz ZZ))` is diagonal in the
//! magic basis
//!
//! ```text
//! |Φ1> = |Φ+>,  |Φ2> = -i|Φ->,  |Φ3> = |Ψ->,  |Φ4> = -i|Ψ+>
//! ```
//!
//! with eigenvalues `e^{-iλ_j}`, where
//! `λ = (αx-αy+αz, -αx+αy+αz, -αx-αy-αz, αx+αy-αz)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::numerics::{kron, normal_eigen, unitarity_deviation, wrap_phase, Mat2, Mat4, C64, UNITARITY_TOL};

/// Off-diagonal magic-basis entries above this reject an input as having local parts.
pub const MAGIC_DIAGONAL_TOL: f64 = 1e-8;

/// Slack allowed when validating user-supplied Weyl coordinates.
pub const CHAMBER_TOL: f64 = 1e-9;

const CLASSIFY_TOL: f64 = 1e-10;

/// Columns are the magic basis states in the computational basis.
pub fn magic_basis() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let im = |x: f64| C64::new(0.0, x);
    Mat4([
        [r(s), im(-s), z, z],
        [z, z, r(s), im(-s)],
        [z, z, r(-s), im(-s)],
        [r(s), im(s), z, z],
    ])
}

/// `M† U M`: an operator written in the magic basis.
pub fn to_magic(u: &Mat4) -> Mat4 {
    let m = magic_basis();
    m.adjoint() * *u * m
}

/// Inverse of [`to_magic`].
pub fn from_magic(u: &Mat4) -> Mat4 {
    let m = magic_basis();
    m * *u * m.adjoint()
}

/// Weyl-chamber coordinates `0 ≤ αz ≤ αy ≤ αx ≤ π/4`, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionVector {
    pub alpha_x: f64,
    pub alpha_y: f64,
    pub alpha_z: f64,
}

impl InteractionVector {
    /// Validates the chamber ordering. Violations up to [`CHAMBER_TOL`] are
    /// clamped onto the chamber boundary so decimal input like `0.7853981634`
    /// is accepted as `π/4`.
    pub fn new(alpha_x: f64, alpha_y: f64, alpha_z: f64) -> Result<Self> {
        if !(alpha_x.is_finite() && alpha_y.is_finite() && alpha_z.is_finite()) {
            return Err(Error::Domain("interaction coefficients must be finite".into()));
        }
        let checks = [
            (0.0 - alpha_z, "alpha_z >= 0"),
            (alpha_z - alpha_y, "alpha_z <= alpha_y"),
            (alpha_y - alpha_x, "alpha_y <= alpha_x"),
            (alpha_x - FRAC_PI_4, "alpha_x <= pi/4"),
        ];
        for (excess, constraint) in checks {
            if excess > CHAMBER_TOL {
                return Err(Error::Domain(format!(
                    "Weyl chamber constraint {constraint} violated by {excess:.3e} \
                     (given alpha = ({alpha_x}, {alpha_y}, {alpha_z}))"
                )));
            }
        }
        let alpha_x = alpha_x.clamp(0.0, FRAC_PI_4);
        let alpha_y = alpha_y.clamp(0.0, alpha_x);
        let alpha_z = alpha_z.clamp(0.0, alpha_y);
        Ok(Self {
            alpha_x,
            alpha_y,
            alpha_z,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha_x, self.alpha_y, self.alpha_z]
    }

    /// Inverse of [`lambda_phases`]: recovers `α` from unwrapped `λ` values.
    pub fn from_lambdas(lambda: [f64; 4]) -> Result<Self> {
        Self::new(
            (lambda[0] + lambda[3]) / 2.0,
            (lambda[1] + lambda[3]) / 2.0,
            (lambda[0] + lambda[1]) / 2.0,
        )
    }
}

/// Four phases indexed by the magic-basis states, each wrapped into `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSet(pub [f64; 4]);

impl PhaseSet {
    pub fn new(phases: [f64; 4]) -> Result<Self> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("phases must be finite".into()));
        }
        Ok(PhaseSet(phases.map(wrap_phase)))
    }

    pub fn phases(&self) -> [f64; 4] {
        self.0
    }

    pub fn negated(&self) -> PhaseSet {
        PhaseSet(self.0.map(|p| wrap_phase(-p)))
    }

    /// `Σ_j e^{-iφ_j} |Φ_j><Φ_j|` in the computational basis.
    pub fn magic_diagonal_operator(&self) -> Mat4 {
        from_magic(&Mat4::from_diagonal(self.0.map(|p| C64::from_polar(1.0, -p))))
    }
}

/// `λ_1..λ_4` for a chamber vector; always ordered `λ4 ≥ λ1 ≥ λ2 ≥ λ3`.
pub fn lambda_phases(d: &InteractionVector) -> PhaseSet {
    PhaseSet(lambda_values(d).map(wrap_phase))
}

fn lambda_values(d: &InteractionVector) -> [f64; 4] {
    let (x, y, z) = (d.alpha_x, d.alpha_y, d.alpha_z);
    [x - y + z, -x + y + z, -x - y - z, x + y - z]
}

/// The entangling part `U_d = Σ_j e^{-iλ_j} |Φ_j><Φ_j|`.
pub fn build_ud(d: &InteractionVector) -> Mat4 {
    PhaseSet(lambda_values(d)).magic_diagonal_operator()
}

/// `exp(-i(αx XX + αy YY + αz ZZ))` as a product of three commuting exponentials.
pub fn build_ud_exponential(d: &InteractionVector) -> Mat4 {
    let factor = |alpha: f64, pauli: &Mat2| {
        let pp = kron(pauli, pauli);
        Mat4::identity().scale(C64::new(alpha.cos(), 0.0)) + pp.scale(C64::new(0.0, -alpha.sin()))
    };
    factor(d.alpha_x, &Mat2::PAULI_X) * factor(d.alpha_y, &Mat2::PAULI_Y) * factor(d.alpha_z, &Mat2::PAULI_Z)
}

/// Nonlocal content of an arbitrary two-qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction {
    /// Canonical chamber representative.
    pub vector: InteractionVector,
    /// Magic-basis phases `λ_j` (summing to zero) before canonicalization.
    pub raw_phases: PhaseSet,
    /// `φ` with `U = e^{iφ} (A⊗B) U_d (C⊗D)`, `A..D ∈ SU(2)`, in `(-π/2, π/2]`.
    pub global_phase: f64,
    /// The gate lies in the mirror half of the Weyl chamber (canonical `αz < 0`):
    /// it is locally equivalent to the complex conjugate of `build_ud(vector)`.
    pub mirrored: bool,
}

/// Recovers the interaction coefficients `α` of `u = e^{iφ}(A⊗B) U_d(α) (C⊗D)`.
///
/// In the magic basis local gates are real orthogonal, so the eigenphases of
/// `ŨᵀŨ` (with `Ũ` the determinant-normalized magic-basis form) are `-2λ_j`.
/// The halved phases are mapped to `α` and folded into the chamber.
pub fn extract_interaction(u: &Mat4) -> Result<Interaction> {
    let deviation = unitarity_deviation(u);
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let phase0 = u.det().arg() / 4.0;
    let normalized = u.scale(C64::from_polar(1.0, -phase0));
    let magic = to_magic(&normalized);
    let gram = magic.transpose() * magic;
    let (_, eig) = normal_eigen(&gram);
    let theta = eig.map(|z| z.arg());

    let mut lambda = theta.map(|t| -t / 2.0);
    let excess = lambda.iter().sum::<f64>();
    lambda[3] -= PI * (excess / PI).round();

    let raw = [
        (lambda[0] + lambda[3]) / 2.0,
        (lambda[1] + lambda[3]) / 2.0,
        (lambda[0] + lambda[1]) / 2.0,
    ];
    let (canon, mirrored) = canonicalize(raw);
    let vector = InteractionVector::new(canon[0], canon[1], canon[2])?;

    // φ is fixed modulo π/2 by det(u); pick the branch whose squared spectrum
    // matches e^{∓2iλ_j} of the canonical vector.
    let target = lambda_values(&vector).map(|l| if mirrored { 2.0 * l } else { -2.0 * l });
    let gram_raw = eig.map(|z| z * C64::from_polar(1.0, 2.0 * phase0));
    let mut best: (f64, f64) = (f64::INFINITY, 0.0);
    for k in 0..2 {
        let phi = phase0 + k as f64 * FRAC_PI_2;
        let shifted = gram_raw.map(|z| z * C64::from_polar(1.0, -2.0 * phi));
        let mismatch = multiset_mismatch(&shifted, &target.map(|t| C64::from_polar(1.0, t)));
        let phi = wrap_half(phi);
        if mismatch < best.0 - 1e-9 || ((mismatch - best.0).abs() <= 1e-9 && phi.abs() < best.1.abs()) {
            best = (mismatch, phi);
        }
    }

    Ok(Interaction {
        vector,
        raw_phases: PhaseSet(lambda.map(wrap_phase)),
        global_phase: best.1,
        mirrored,
    })
}

fn wrap_half(phi: f64) -> f64 {
    let mut p = phi % PI;
    if p <= -FRAC_PI_2 {
        p += PI;
    } else if p > FRAC_PI_2 {
        p -= PI;
    }
    p
}

/// Greedy matching distance between two 4-element multisets.
fn multiset_mismatch(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    let mut used = [false; 4];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = (0..4)
            .filter(|&j| !used[j])
            .map(|j| (j, (x - b[j]).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Folds `α` into `π/4 ≥ αx ≥ αy ≥ |αz|` using the local equivalences
/// (shifts by π/2, permutations, paired sign flips), then reports whether the
/// result needed `αz < 0`.
fn canonicalize(alpha: [f64; 3]) -> ([f64; 3], bool) {
    let mut a = alpha.map(|x| x - FRAC_PI_2 * (x / FRAC_PI_2).round());

    let negatives = a.iter().filter(|x| **x < 0.0).count();
    for x in a.iter_mut() {
        *x = x.abs();
    }
    a.sort_by(|p, q| q.total_cmp(p));
    if negatives % 2 == 1 {
        a[2] = -a[2];
    }
    // On the αx = π/4 face, (π/4, b, -c) ~ (π/4, b, c).
    if a[2] < 0.0 && a[0] >= FRAC_PI_4 - CHAMBER_TOL {
        a[2] = -a[2];
    }
    let mirrored = a[2] < -CHAMBER_TOL;
    a[2] = a[2].abs();
    (a, mirrored)
}

/// Which of the distinguished gates a chamber vector represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateClass {
    Identity,
    Swap,
    Entangling,
}

pub fn classify(d: &InteractionVector) -> GateClass {
    let near = |target: f64| d.as_array().iter().all(|a| (a - target).abs() <= CLASSIFY_TOL);
    if near(0.0) {
        GateClass::Identity
    } else if near(FRAC_PI_4) {
        GateClass::Swap
    } else {
        GateClass::Entangling
    }
}

/// Checks that `u` is unitary and diagonal in the magic basis; returns its
/// magic-basis form.
pub fn require_magic_diagonal(u: &Mat4, tol: f64) -> Result<Mat4> {
    let deviation = unitarity_deviation(u);
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let magic = to_magic(u);
    let max_offdiag = magic.max_offdiag();
    if max_offdiag > tol {
        return Err(Error::NotMagicDiagonal { max_offdiag });
    }
    Ok(magic)
}

/// Phases `ω_j` with `U1† U2 = Σ_j e^{-iω_j} |Φ_j><Φ_j|`.
pub fn relative_phases(u1: &Mat4, u2: &Mat4) -> Result<PhaseSet> {
    relative_phases_tol(u1, u2, MAGIC_DIAGONAL_TOL)
}

pub fn relative_phases_tol(u1: &Mat4, u2: &Mat4, tol: f64) -> Result<PhaseSet> {
    require_magic_diagonal(u1, tol)?;
    require_magic_diagonal(u2, tol)?;
    let product = to_magic(&(u1.adjoint() * *u2));
    let max_offdiag = product.max_offdiag();
    if max_offdiag > tol {
        return Err(Error::NotMagicDiagonal { max_offdiag });
    }
    PhaseSet::new(product.diagonal().map(|z| -z.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: f64, y: f64, z: f64) -> InteractionVector {
        InteractionVector::new(x, y, z).unwrap()
    }

    fn assert_phases(got: PhaseSet, want: [f64; 4], tol: f64) {
        for (g, w) in got.0.iter().zip(want) {
            assert!((wrap_phase(g - w)).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn magic_basis_is_unitary() {
        let m = magic_basis();
        assert!(unitarity_deviation(&m) <= 1e-15);
        let s = FRAC_1_SQRT_2;
        assert_eq!(m.0[0][0], C64::new(s, 0.0));
        assert_eq!(m.0[3][0], C64::new(s, 0.0));
        assert_eq!(m.0[1][0], C64::new(0.0, 0.0));
    }

    #[test]
    fn lambda_examples() {
        assert_phases(lambda_phases(&iv(0.0, 0.0, 0.0)), [0.0; 4], 0.0);
        let q = FRAC_PI_4;
        assert_phases(lambda_phases(&iv(q, q, q)), [q, q, -3.0 * q, q], 1e-15);
        assert_phases(lambda_phases(&iv(q, 0.0, 0.0)), [q, -q, -q, q], 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn chamber_violations_are_rejected() {
        assert!(InteractionVector::new(0.1, 0.2, 0.0).is_err());
        assert!(InteractionVector::new(0.9, 0.2, 0.0).is_err());
        assert!(InteractionVector::new(0.3, 0.2, -0.1).is_err());
        assert!(InteractionVector::new(f64::NAN, 0.0, 0.0).is_err());
        let d = InteractionVector::new(0.7853981634, 0.7853981634, 0.7853981634).unwrap();
        assert_eq!(d.alpha_x, FRAC_PI_4);
    }

    #[test]
    fn build_ud_special_points() {
        let id = build_ud(&iv(0.0, 0.0, 0.0));
        assert!((id - Mat4::identity()).max_abs() < 1e-15);

        let q = FRAC_PI_4;
        let swap_like = build_ud(&iv(q, q, q));
        let phase = C64::from_polar(1.0, -q);
        assert!((swap_like - Mat4::swap().scale(phase)).max_abs() < 1e-15);

        let cnot_class = to_magic(&build_ud(&iv(q, 0.0, 0.0)));
        let want = [-q, q, q, -q].map(|t| C64::from_polar(1.0, t));
        for (g, w) in cnot_class.diagonal().iter().zip(want) {
            assert!((g - w).norm() < 1e-15);
        }
        assert!(cnot_class.max_offdiag() < 1e-15);
    }

    #[test]
    fn spectral_and_exponential_forms_agree() {
        for d in [iv(0.3, 0.2, 0.1), iv(FRAC_PI_4, 0.5, 0.0), iv(0.7, 0.7, 0.7)] {
            let diff = (build_ud(&d) - build_ud_exponential(&d)).max_abs();
            assert!(diff < 1e-14, "{d:?}: {diff}");
        }
    }

    #[test]
    fn extract_simple_cases() {
        let id = extract_interaction(&Mat4::identity()).unwrap();
        assert_eq!(id.vector.as_array().map(|a| (a * 1e12).round()), [0.0; 3]);
        assert!(id.global_phase.abs() < 1e-12);

        let d = iv(FRAC_PI_4, 0.0, 0.0);
        let got = extract_interaction(&build_ud(&d)).unwrap();
        for (g, w) in got.vector.as_array().iter().zip(d.as_array()) {
            assert!((g - w).abs() < 1e-8);
        }
    }

    #[test]
    fn extract_reports_global_phase() {
        let d = iv(0.4, 0.25, 0.1);
        let u = build_ud(&d).scale(C64::from_polar(1.0, 0.3));
        let got = extract_interaction(&u).unwrap();
        assert!((got.global_phase - 0.3).abs() < 1e-9, "{got:?}");
        assert!(!got.mirrored);
    }

    #[test]
    fn extract_flags_mirror_half() {
        // conj(U_d(α)) is locally equivalent to U_d(αx, αy, -αz).
        let d = iv(0.5, 0.3, 0.1);
        let u = build_ud(&d);
        let conj = Mat4(u.0.map(|row| row.map(|z| z.conj())));
        let got = extract_interaction(&conj).unwrap();
        assert!(got.mirrored);
        for (g, w) in got.vector.as_array().iter().zip(d.as_array()) {
            assert!((g - w).abs() < 1e-8);
        }
    }

    #[test]
    fn relative_phase_examples() {
        let u = build_ud(&iv(0.3, 0.2, 0.1));
        assert_phases(relative_phases(&u, &u).unwrap(), [0.0; 4], 1e-14);

        let q = FRAC_PI_4;
        let cn = build_ud(&iv(q, 0.0, 0.0));
        let id = Mat4::identity();
        assert_phases(relative_phases(&id, &cn).unwrap(), [q, -q, -q, q], 1e-14);
        assert_phases(relative_phases(&cn, &id).unwrap(), [-q, q, q, -q], 1e-14);
    }

    #[test]
    fn relative_phases_reject_local_parts() {
        let h = Mat2([
            [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
            [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)],
        ]);
        let dressed = kron(&h, &Mat2::IDENTITY) * build_ud(&iv(0.3, 0.1, 0.0));
        assert!(matches!(
            relative_phases(&Mat4::identity(), &dressed),
            Err(Error::NotMagicDiagonal { .. })
        ));
        let bad = Mat4::identity().scale(C64::new(2.0, 0.0));
        assert!(matches!(
            relative_phases(&bad, &Mat4::identity()),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn classification() {
        let q = FRAC_PI_4;
        assert_eq!(classify(&iv(0.0, 0.0, 0.0)), GateClass::Identity);
        assert_eq!(classify(&iv(q, q, q)), GateClass::Swap);
        assert_eq!(classify(&iv(PI / 8.0, 0.0, 0.0)), GateClass::Entangling);
    }
}
