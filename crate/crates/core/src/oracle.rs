//! Brute-force cross-checks that do not use the hull geometry: direct search
//! for the smallest overlap `|<ψ|U1†U2|ψ>|` over product and over general
//! probes, and a shot-based simulation of the optimal two-outcome measurement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::discrimination::ProbeState;
use crate::error::{Error, Result};
use crate::numerics::{Mat4, Vec4, C64};

/// Points per axis in each local refinement grid.
const LOCAL_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    grid_steps: usize,
    refinement_rounds: usize,
    shrink_factor: f64,
    seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid_steps: 32,
            refinement_rounds: 4,
            shrink_factor: 0.25,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn new(grid_steps: usize, refinement_rounds: usize, shrink_factor: f64, seed: u64) -> Result<Self> {
        if grid_steps < 8 {
            return Err(Error::Domain(format!("grid_steps must be >= 8, got {grid_steps}")));
        }
        if !(shrink_factor > 0.0 && shrink_factor < 1.0) {
            return Err(Error::Domain(format!(
                "shrink_factor must lie in (0, 1), got {shrink_factor}"
            )));
        }
        Ok(Self {
            grid_steps,
            refinement_rounds,
            shrink_factor,
            seed,
        })
    }

    /// Coarse grid with deep refinement, for recovering a probe to ~1e-12.
    pub fn fallback() -> Self {
        Self {
            grid_steps: 16,
            refinement_rounds: 80,
            shrink_factor: 0.5,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn grid_steps(&self) -> usize {
        self.grid_steps
    }

    pub fn refinement_rounds(&self) -> usize {
        self.refinement_rounds
    }

    pub fn shrink_factor(&self) -> f64 {
        self.shrink_factor
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `(cos θ/2, e^{iφ} sin θ/2)`.
fn bloch(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::from_polar(s, phi)]
}

/// `(a⊗I)† W (a⊗I)`, the operator `W` sees on qubit B once qubit A is fixed.
fn reduce_first(w: &Mat4, a: &[C64; 2]) -> [[C64; 2]; 2] {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (k, row) in out.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += a[i].conj() * w.0[2 * i + k][2 * j + l] * a[j];
                }
            }
            *entry = acc;
        }
    }
    out
}

fn quad2(m: &[[C64; 2]; 2], b: &[C64; 2]) -> f64 {
    let mb0 = m[0][0] * b[0] + m[0][1] * b[1];
    let mb1 = m[1][0] * b[0] + m[1][1] * b[1];
    (b[0].conj() * mb0 + b[1].conj() * mb1).norm()
}

fn product_value(w: &Mat4, angles: &[f64; 4]) -> f64 {
    let a = bloch(angles[0], angles[1]);
    let b = bloch(angles[2], angles[3]);
    quad2(&reduce_first(w, &a), &b)
}

/// Result of a product-state search.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSearch {
    pub value: f64,
    /// Bloch angles `(θ_A, φ_A, θ_B, φ_B)` of the best probe.
    pub angles: [f64; 4],
    /// Best value after the coarse grid and after each refinement round.
    pub history: Vec<f64>,
}

impl ProductSearch {
    pub fn probe(&self) -> Result<ProbeState> {
        let [ta, pa, tb, pb] = self.angles;
        ProbeState::from_product(bloch(ta, pa), bloch(tb, pb))
    }
}

/// Minimizes `|<a⊗b| W |a⊗b>|` over product states by an exhaustive Bloch-angle
/// grid followed by shrinking local grids around the incumbent.
///
/// The coarse grid is split across threads; ties are broken by the lowest
/// linear grid index so the result does not depend on the thread count.
pub fn min_product_expectation(w: &Mat4, cfg: &SearchConfig) -> ProductSearch {
    let n = cfg.grid_steps;
    let thetas: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
    let phis: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    let singles: Vec<(f64, f64, [C64; 2])> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p, bloch(t, p))))
        .collect();
    let m = singles.len();

    let (value, index) = (0..m)
        .into_par_iter()
        .map(|ia| {
            let reduced = reduce_first(w, &singles[ia].2);
            let mut best = (f64::INFINITY, usize::MAX);
            for (ib, single) in singles.iter().enumerate() {
                let v = quad2(&reduced, &single.2);
                if v < best.0 {
                    best = (v, ia * m + ib);
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |x, y| if (y.0, y.1) < (x.0, x.1) { y } else { x },
        );
    let (ia, ib) = (index / m, index % m);
    let mut angles = [singles[ia].0, singles[ia].1, singles[ib].0, singles[ib].1];
    let mut best = value;
    let mut history = vec![best];

    let mut half = [PI / (n - 1) as f64, TAU / n as f64, PI / (n - 1) as f64, TAU / n as f64];
    let offsets: Vec<f64> = (0..LOCAL_POINTS)
        .map(|k| 2.0 * k as f64 / (LOCAL_POINTS - 1) as f64 - 1.0)
        .collect();
    for _ in 0..cfg.refinement_rounds {
        let center = angles;
        for o0 in &offsets {
            for o1 in &offsets {
                for o2 in &offsets {
                    for o3 in &offsets {
                        let cand = [
                            center[0] + o0 * half[0],
                            center[1] + o1 * half[1],
                            center[2] + o2 * half[2],
                            center[3] + o3 * half[3],
                        ];
                        let v = product_value(w, &cand);
                        if v < best {
                            best = v;
                            angles = cand;
                        }
                    }
                }
            }
        }
        history.push(best);
        half = half.map(|h| h * cfg.shrink_factor);
    }

    ProductSearch {
        value: best,
        angles,
        history,
    }
}

/// `min |<ψ_A⊗ψ_B| U1†U2 |ψ_A⊗ψ_B>|` by grid search.
pub fn min_over_product_states(u1: &Mat4, u2: &Mat4, cfg: &SearchConfig) -> (f64, ProbeState) {
    let search = min_product_expectation(&(u1.adjoint() * *u2), cfg);
    let probe = search.probe().expect("Bloch-angle states are normalized");
    (search.value, probe)
}

/// Unit vector from three hyperspherical angles and three relative phases.
fn general_state(p: &[f64; 6]) -> Vec4 {
    let (s1, c1) = p[0].sin_cos();
    let (s2, c2) = p[1].sin_cos();
    let (s3, c3) = p[2].sin_cos();
    let mags = [c1, s1 * c2, s1 * s2 * c3, s1 * s2 * s3];
    Vec4([
        C64::new(mags[0], 0.0),
        C64::from_polar(mags[1], p[3]),
        C64::from_polar(mags[2], p[4]),
        C64::from_polar(mags[3], p[5]),
    ])
}

fn general_value(w: &Mat4, p: &[f64; 6]) -> f64 {
    w.expectation(&general_state(p)).norm()
}

/// Coordinate-wise pattern search with step halving.
fn compass_search(w: &Mat4, start: [f64; 6], mut step: f64) -> ([f64; 6], f64) {
    let mut point = start;
    let mut value = general_value(w, &point);
    let mut iterations = 0;
    while step > 1e-12 && iterations < 50_000 {
        iterations += 1;
        let mut improved = false;
        for d in 0..6 {
            for sign in [1.0, -1.0] {
                let mut cand = point;
                cand[d] += sign * step;
                let v = general_value(w, &cand);
                if v < value {
                    value = v;
                    point = cand;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (point, value)
}

/// `min |<ψ| U1†U2 |ψ>|` over all normalized two-qubit states, by seeded
/// random multistart and pattern-search refinement.
pub fn min_over_all_states(u1: &Mat4, u2: &Mat4, cfg: &SearchConfig) -> (f64, Vec4) {
    let w = u1.adjoint() * *u2;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts = cfg.grid_steps * cfg.grid_steps;
    let mut samples: Vec<(f64, [f64; 6])> = (0..starts)
        .map(|_| {
            let p: [f64; 6] = std::array::from_fn(|k| {
                if k < 3 {
                    rng.random_range(0.0..FRAC_PI_2)
                } else {
                    rng.random_range(0.0..TAU)
                }
            });
            (general_value(&w, &p), p)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let keep = (2 * cfg.refinement_rounds).max(4).min(samples.len());

    let (value, point) = samples[..keep]
        .par_iter()
        .enumerate()
        .map(|(k, (_, p))| {
            let (point, value) = compass_search(&w, *p, 0.2);
            (value, k, point)
        })
        .reduce_with(|x, y| if (y.0, y.1) < (x.0, x.1) { y } else { x })
        .map(|(v, _, p)| (v, p))
        .expect("at least one start");
    (value, general_state(&point))
}

/// Counts from a simulated discrimination experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotOutcome {
    pub shots: u64,
    pub errors: u64,
    pub empirical_rate: f64,
    pub std_error: f64,
    pub seed: u64,
    /// Error probability of the simulated measurement, computed exactly.
    pub exact_rate: f64,
}

/// The optimal measurement for telling `φ1` (prior `p1`) from `φ2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelstromMeasurement {
    /// Probability of announcing "1" when the state is `φ1`.
    pub guess1_given1: f64,
    /// Probability of announcing "1" when the state is `φ2`.
    pub guess1_given2: f64,
}

impl HelstromMeasurement {
    pub fn error_rate(&self, p1: f64) -> f64 {
        p1 * (1.0 - self.guess1_given1) + (1.0 - p1) * self.guess1_given2
    }
}

/// Projects onto the positive part of `p1|φ1><φ1| - p2|φ2><φ2|`, worked out
/// in the orthonormal basis `{φ1, (φ2 - <φ1|φ2>φ1)/s}` of the states' span.
pub fn helstrom_measurement(phi1: &Vec4, phi2: &Vec4, p1: f64) -> HelstromMeasurement {
    let p2 = 1.0 - p1;
    let c = phi1.inner(phi2);
    let s = (1.0 - c.norm_sqr()).max(0.0).sqrt();
    if s <= 1e-15 {
        let guess1 = if p1 > p2 { 1.0 } else { 0.0 };
        return HelstromMeasurement {
            guess1_given1: guess1,
            guess1_given2: guess1,
        };
    }
    // Γ = [[a, b], [b̄, d]] in that basis; φ1 = (1, 0), φ2 = (c, s).
    let a = p1 - p2 * c.norm_sqr();
    let b = -p2 * c * s;
    let d = -p2 * s * s;
    let mean = (a + d) / 2.0;
    let radius = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    let top = mean + radius;
    if top <= 0.0 {
        return HelstromMeasurement {
            guess1_given1: 0.0,
            guess1_given2: 0.0,
        };
    }
    // Eigenvector from whichever row of Γ - top·I is better conditioned.
    let from_first = [b, C64::new(top - a, 0.0)];
    let from_second = [C64::new(top - d, 0.0), b.conj()];
    let norm = |r: &[C64; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    let raw = if norm(&from_first) >= norm(&from_second) {
        from_first
    } else {
        from_second
    };
    let n = norm(&raw);
    let v = if n > 0.0 {
        [raw[0] / n, raw[1] / n]
    } else {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    };
    let on1 = v[0].conj();
    let on2 = v[0].conj() * c + v[1].conj() * s;
    HelstromMeasurement {
        guess1_given1: on1.norm_sqr().min(1.0),
        guess1_given2: on2.norm_sqr().min(1.0),
    }
}

/// Samples `shots` rounds of: draw the hidden operation by prior, apply it
/// to the probe, measure with the Helstrom measurement, and count mistakes.
pub fn helstrom_simulate(
    u1: &Mat4,
    u2: &Mat4,
    probe: &ProbeState,
    p1: f64,
    shots: u64,
    seed: u64,
) -> Result<ShotOutcome> {
    if !(0.0..=1.0).contains(&p1) {
        return Err(Error::Domain(format!("prior p1 = {p1} outside [0, 1]")));
    }
    if shots == 0 {
        return Err(Error::Domain("shots must be positive".into()));
    }
    let psi = probe.psi_computational;
    let norm_sqr = psi.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let phi1 = u1.apply(&psi);
    let phi2 = u2.apply(&psi);
    let meas = helstrom_measurement(&phi1, &phi2, p1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = 0u64;
    for _ in 0..shots {
        let first = rng.random::<f64>() < p1;
        let p_guess1 = if first { meas.guess1_given1 } else { meas.guess1_given2 };
        let guessed_first = rng.random::<f64>() < p_guess1;
        if guessed_first != first {
            errors += 1;
        }
    }
    let rate = errors as f64 / shots as f64;
    Ok(ShotOutcome {
        shots,
        errors,
        empirical_rate: rate,
        std_error: (rate * (1.0 - rate) / shots as f64).sqrt(),
        seed,
        exact_rate: meas.error_rate(p1),
    })
}
