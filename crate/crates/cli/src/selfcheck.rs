//! Randomized end-to-end checks of the analytic pipeline against the
//! brute-force searches. Trial `t` of a run seeded `s` uses seed `s + t`
//! alone, so any trial replays as a one-trial run.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unidisc::canonical::{build_ud, extract_interaction};
use unidisc::discrimination::{construct_probe, fidelity, perfectly_distinguishable};
use unidisc::oracle::{min_over_all_states, min_over_product_states, SearchConfig};
use unidisc::sampling;

pub const EXTRACT_TOL: f64 = 1e-7;
pub const PROBE_TOL: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 2e-3;

/// Worst deviations seen in one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub extract: f64,
    pub probe_gap: f64,
    pub concurrence: f64,
    pub product_oracle: f64,
    pub general_oracle: f64,
    pub predicate_agrees: bool,
    pub error: Option<&'static str>,
}

impl TrialResult {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.extract <= EXTRACT_TOL
            && self.probe_gap <= PROBE_TOL
            && self.concurrence <= PROBE_TOL
            && self.product_oracle <= ORACLE_TOL
            && self.general_oracle <= ORACLE_TOL
            && self.predicate_agrees
    }

    pub fn line(&self) -> String {
        format!(
            "seed {}: {} extract={:.3e} probe={:.3e} concurrence={:.3e} product={:.3e} general={:.3e} predicate={}{}",
            self.seed,
            if self.passed() { "ok" } else { "FAIL" },
            self.extract,
            self.probe_gap,
            self.concurrence,
            self.product_oracle,
            self.general_oracle,
            if self.predicate_agrees { "agree" } else { "disagree" },
            self.error.map(|e| format!(" error={e}")).unwrap_or_default()
        )
    }
}

pub fn run_trial(seed: u64) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d1 = sampling::random_interaction_vector(&mut rng);
    let d2 = sampling::random_interaction_vector(&mut rng);
    let left = sampling::random_local(&mut rng);
    let right = sampling::random_local(&mut rng);
    let (u1, u2) = (build_ud(&d1), build_ud(&d2));

    let mut result = TrialResult {
        seed,
        extract: f64::NAN,
        probe_gap: f64::NAN,
        concurrence: f64::NAN,
        product_oracle: f64::NAN,
        general_oracle: f64::NAN,
        predicate_agrees: false,
        error: None,
    };

    match extract_interaction(&(left * u1 * right)) {
        Ok(got) => {
            result.extract = got
                .vector
                .as_array()
                .iter()
                .zip(d1.as_array())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
        }
        Err(_) => result.error = Some("extraction"),
    }

    let Ok((f, omega)) = fidelity(&u1, &u2) else {
        result.error = Some("fidelity");
        return result;
    };
    match construct_probe(&omega) {
        Ok(c) => {
            result.probe_gap = (c.achieved - f).abs();
            result.concurrence = c.probe.concurrence();
        }
        Err(_) => result.error = Some("probe construction"),
    }
    result.predicate_agrees = perfectly_distinguishable(&u1, &u2).is_ok_and(|p| p == (f <= 1e-9));

    let cfg = SearchConfig::default().with_seed(seed);
    let (prod, _) = min_over_product_states(&u1, &u2, &cfg);
    let (all, _) = min_over_all_states(&u1, &u2, &cfg);
    result.product_oracle = (prod - f).abs();
    result.general_oracle = (all - f).abs();
    result
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub trials: Vec<TrialResult>,
}

impl Summary {
    pub fn failures(&self) -> Vec<&TrialResult> {
        self.trials.iter().filter(|t| !t.passed()).collect()
    }

    pub fn worst(&self, pick: impl Fn(&TrialResult) -> f64) -> f64 {
        self.trials.iter().map(pick).fold(0.0, f64::max)
    }
}

pub fn run(trials: u64, seed: u64) -> Summary {
    Summary {
        trials: (0..trials).map(|t| run_trial(seed.wrapping_add(t))).collect(),
    }
}
