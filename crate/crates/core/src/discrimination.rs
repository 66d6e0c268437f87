//! Fidelity, Helstrom error and optimal product probes for pairs of
//! magic-diagonal two-qubit unitaries.
//!
//! For `U1† U2 = Σ_j e^{-iω_j} |Φ_j><Φ_j|` and a probe `|ψ> = Σ_k u_k |Φ_k>`,
//! `<ψ|U1† U2|ψ> = Σ_k |u_k|² e^{-iω_k}` ranges over the convex hull of the
//! points `e^{-iω_k}`, so the fidelity is the hull's distance from the origin.
//! A probe is a product state exactly when `Σ_k u_k² = 0`; [`construct_probe`]
//! always finds such a probe reaching the hull distance.

use std::f64::consts::PI;

use crate::canonical::{magic_basis, relative_phases_tol, PhaseSet, MAGIC_DIAGONAL_TOL};
use crate::error::{Error, Result};
use crate::geometry::{
    arc_spread, circular_order, convex_coefficients, hull_of_phases, midpoints_of_cycle, HullResult, Point,
};
use crate::numerics::{kron_vec, Mat2, Mat4, Vec4, C64};
use crate::oracle::{self, SearchConfig};

const NORMALIZATION_TOL: f64 = 1e-10;

/// Tolerances used across a discrimination run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest magic-basis off-diagonal entry accepted on input.
    pub magic_diagonal: f64,
    /// Largest concurrence for which local factors are extracted.
    pub product: f64,
    /// Allowed gap between the probe's value and the hull distance.
    pub achievement: f64,
    /// Fidelities at or below this count as perfect discrimination.
    pub perfect: f64,
    /// Arc spreads at or above `π - spread_slack` count as perfectly distinguishable.
    pub spread_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            magic_diagonal: MAGIC_DIAGONAL_TOL,
            product: 1e-8,
            achievement: 1e-9,
            perfect: 1e-9,
            spread_slack: 1e-10,
        }
    }
}

/// A probe state, in the magic basis and the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState {
    /// Magic-basis amplitudes `u_k`.
    pub u: [C64; 4],
    pub psi_computational: Vec4,
    /// Local factors with `psi = local_a ⊗ local_b` (up to global phase), if product.
    pub local_a: Option<[C64; 2]>,
    pub local_b: Option<[C64; 2]>,
}

impl ProbeState {
    /// Builds a probe from magic-basis amplitudes, extracting local factors
    /// when the state is a product state within `product_tol`.
    pub fn from_magic(u: [C64; 4], product_tol: f64) -> Result<Self> {
        let norm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let psi = magic_basis().apply(&Vec4(u));
        let factors = if concurrence(&u)? <= product_tol {
            Some(factor_product_tol(&u, product_tol)?)
        } else {
            None
        };
        Ok(Self {
            u,
            psi_computational: psi,
            local_a: factors.map(|f| f.0),
            local_b: factors.map(|f| f.1),
        })
    }

    /// Builds the product probe `a ⊗ b`.
    pub fn from_product(a: [C64; 2], b: [C64; 2]) -> Result<Self> {
        let psi = kron_vec(a, b).normalized();
        let u = magic_basis().adjoint().apply(&psi).0;
        Self::from_magic(u, f64::INFINITY)
    }

    pub fn concurrence(&self) -> f64 {
        self.u.iter().map(|z| z * z).sum::<C64>().norm()
    }

    /// `|Σ_k |u_k|² e^{-iω_k}|`, the overlap `|<ψ|U1†U2|ψ>|` this probe attains.
    pub fn achieved(&self, omega: &PhaseSet) -> f64 {
        self.u
            .iter()
            .zip(omega.0)
            .map(|(z, w)| C64::from_polar(z.norm_sqr(), -w))
            .sum::<C64>()
            .norm()
    }
}

/// Concurrence `|Σ_k u_k²|` of a state given by magic-basis amplitudes.
pub fn concurrence(u: &[C64; 4]) -> Result<f64> {
    let norm_sqr: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(u.iter().map(|z| z * z).sum::<C64>().norm())
}

/// Concurrence `|<ψ| σy⊗σy |ψ*>|` from computational-basis amplitudes.
pub fn concurrence_computational(psi: &Vec4) -> Result<f64> {
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let yy = crate::numerics::kron(&Mat2::PAULI_Y, &Mat2::PAULI_Y);
    Ok(psi.inner(&yy.apply(&psi.conj())).norm())
}

/// Splits a product state into unit local factors `(a, b)`.
///
/// The first non-negligible component of `a` is made real and nonnegative;
/// the remaining phase goes into `b`.
pub fn factor_product(u: &[C64; 4]) -> Result<([C64; 2], [C64; 2])> {
    factor_product_tol(u, 1e-8)
}

pub fn factor_product_tol(u: &[C64; 4], tol: f64) -> Result<([C64; 2], [C64; 2])> {
    let c = concurrence(u)?;
    if c > tol {
        return Err(Error::NotProduct { concurrence: c });
    }
    let psi = magic_basis().apply(&Vec4(*u)).0;
    let rows = [[psi[0], psi[1]], [psi[2], psi[3]]];
    let row_norm = |r: &[C64; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    let pivot = if row_norm(&rows[0]) >= row_norm(&rows[1]) { 0 } else { 1 };
    let n = row_norm(&rows[pivot]);
    let mut b = rows[pivot].map(|z| z / n);
    let mut a = rows.map(|r| r[0] * b[0].conj() + r[1] * b[1].conj());
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    a = a.map(|z| z / na);

    let lead = if a[0].norm() > 1e-12 { a[0] } else { a[1] };
    let phase = C64::from_polar(1.0, -lead.arg());
    a = a.map(|z| z * phase);
    b = b.map(|z| z / phase);
    Ok((a, b))
}

/// `min_ψ |<ψ|U1†U2|ψ>|` and the relative phases `ω`.
pub fn fidelity(u1: &Mat4, u2: &Mat4) -> Result<(f64, PhaseSet)> {
    fidelity_tol(u1, u2, MAGIC_DIAGONAL_TOL)
}

pub fn fidelity_tol(u1: &Mat4, u2: &Mat4, tol: f64) -> Result<(f64, PhaseSet)> {
    let omega = relative_phases_tol(u1, u2, tol)?;
    Ok((hull_of_phases(&omega).min_distance, omega))
}

/// Minimum-error (Helstrom) probability `½(1 - √(1 - 4 p1 p2 F²))`.
pub fn error_probability(fidelity: f64, p1: f64, p2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Domain(format!("fidelity {fidelity} outside [0, 1]")));
    }
    if !(p1 >= 0.0 && p2 >= 0.0) || (p1 + p2 - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "priors ({p1}, {p2}) must be nonnegative and sum to 1"
        )));
    }
    let disc = (1.0 - 4.0 * p1 * p2 * fidelity * fidelity).max(0.0);
    Ok((0.5 * (1.0 - disc.sqrt())).clamp(0.0, 0.5))
}

/// Single-query perfect distinguishability: the eigenphases of `U1†U2`
/// cannot be covered by an arc shorter than π.
pub fn perfectly_distinguishable(u1: &Mat4, u2: &Mat4) -> Result<bool> {
    let omega = relative_phases_tol(u1, u2, MAGIC_DIAGONAL_TOL)?;
    Ok(spread_is_perfect(&omega, Tolerances::default().spread_slack))
}

fn spread_is_perfect(omega: &PhaseSet, slack: f64) -> bool {
    arc_spread(omega) >= PI - slack
}

/// Which side of the origin the hull of `e^{-iω}` lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullCase {
    OriginInside,
    OriginOutside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConstruction {
    pub probe: ProbeState,
    pub case: HullCase,
    /// Hull distance the probe has to reach.
    pub target: f64,
    pub achieved: f64,
    pub fallback_used: bool,
}

/// An optimal product probe for relative phases `ω`.
pub fn construct_probe(omega: &PhaseSet) -> Result<ProbeConstruction> {
    construct_probe_with(omega, &Tolerances::default())
}

pub fn construct_probe_with(omega: &PhaseSet, tol: &Tolerances) -> Result<ProbeConstruction> {
    let hull = hull_of_phases(omega);
    let case = if hull.contains_origin {
        HullCase::OriginInside
    } else {
        HullCase::OriginOutside
    };
    let primary = match case {
        HullCase::OriginInside => inside_amplitudes(omega),
        HullCase::OriginOutside => Ok(outside_amplitudes(&hull)),
    };
    if let Ok(u) = primary {
        if let Ok(probe) = ProbeState::from_magic(u, tol.product) {
            let achieved = probe.achieved(omega);
            if validate(&probe, achieved, hull.min_distance, tol) {
                return Ok(ProbeConstruction {
                    probe,
                    case,
                    target: hull.min_distance,
                    achieved,
                    fallback_used: false,
                });
            }
        }
    }
    fallback_probe(omega, &hull, case, tol)
}

fn validate(probe: &ProbeState, achieved: f64, target: f64, tol: &Tolerances) -> bool {
    probe.local_a.is_some() && probe.concurrence() <= tol.achievement && (achieved - target).abs() <= tol.achievement
}

/// Origin inside the hull: walk the four points counter-clockwise (repeated
/// phases occupy adjacent slots), write the origin as a convex combination
/// `Σ α_i M_i` of the side midpoints, and give slot `k` weight
/// `(α_{k-1} + α_k)/2` with amplitude phase alternating `1, i, 1, i`.
/// The alternation makes `Σ u_k²` telescope to zero.
fn inside_amplitudes(omega: &PhaseSet) -> Result<[C64; 4]> {
    let order = circular_order(omega);
    let corners: Vec<Point> = order.iter().map(|&k| [omega.0[k].cos(), omega.0[k].sin()]).collect();
    let mids = midpoints_of_cycle(&corners);
    let alpha = convex_coefficients(&mids, [0.0, 0.0])?;
    let mut u = [C64::new(0.0, 0.0); 4];
    for (slot, &idx) in order.iter().enumerate() {
        let weight = (alpha[(slot + 3) % 4] + alpha[slot]) / 2.0;
        let phase = if slot % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 1.0)
        };
        u[idx] = phase * weight.sqrt();
    }
    Ok(u)
}

/// Origin outside: amplitude `1/√2` and `i/√2` on the two angular extremes.
fn outside_amplitudes(hull: &HullResult) -> [C64; 4] {
    let (end, start) = hull.extremes.expect("outside hull records its extremes");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = [C64::new(0.0, 0.0); 4];
    u[end] = C64::new(s, 0.0);
    u[start] = C64::new(0.0, s);
    u
}

fn fallback_probe(omega: &PhaseSet, hull: &HullResult, case: HullCase, tol: &Tolerances) -> Result<ProbeConstruction> {
    let w = omega.magic_diagonal_operator();
    let search = oracle::min_product_expectation(&w, &SearchConfig::fallback());
    let probe = search.probe()?;
    let achieved = probe.achieved(omega);
    if validate(&probe, achieved, hull.min_distance, tol) {
        Ok(ProbeConstruction {
            probe,
            case,
            target: hull.min_distance,
            achieved,
            fallback_used: true,
        })
    } else {
        Err(Error::ConstructionFailed {
            achieved,
            target: hull.min_distance,
            concurrence: probe.concurrence(),
        })
    }
}

/// Everything known about discriminating `U1` from `U2` with one query.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationReport {
    pub omega: PhaseSet,
    pub spread: f64,
    pub fidelity: f64,
    pub priors: (f64, f64),
    pub error_probability: f64,
    pub perfectly_distinguishable: bool,
    pub probe: ProbeState,
    pub achieved: f64,
    pub case: HullCase,
    pub fallback_used: bool,
    pub tolerances: Tolerances,
}

pub fn discriminate(u1: &Mat4, u2: &Mat4, p1: f64) -> Result<DiscriminationReport> {
    discriminate_with(u1, u2, p1, &Tolerances::default())
}

pub fn discriminate_with(u1: &Mat4, u2: &Mat4, p1: f64, tol: &Tolerances) -> Result<DiscriminationReport> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::Domain(format!("prior p1 = {p1} outside [0, 1]")));
    }
    let p2 = 1.0 - p1;
    let (fidelity, omega) = fidelity_tol(u1, u2, tol.magic_diagonal)?;
    let construction = construct_probe_with(&omega, tol)?;
    Ok(DiscriminationReport {
        omega,
        spread: arc_spread(&omega),
        fidelity,
        priors: (p1, p2),
        error_probability: error_probability(fidelity, p1, p2)?,
        perfectly_distinguishable: spread_is_perfect(&omega, tol.spread_slack),
        probe: construction.probe,
        achieved: construction.achieved,
        case: construction.case,
        fallback_used: construction.fallback_used,
        tolerances: *tol,
    })
}
