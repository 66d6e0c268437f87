//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8, PI};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unidisc::canonical::{build_ud, extract_interaction, magic_basis};
use unidisc::discrimination::{
    concurrence, concurrence_computational, construct_probe, error_probability, fidelity, perfectly_distinguishable,
};
use unidisc::geometry::{circular_order, convex_coefficients, hull_of_phases, midpoints_of_cycle, Point};
use unidisc::numerics::{Mat4, C64};
use unidisc::oracle::{helstrom_simulate, min_over_all_states, min_over_product_states, SearchConfig};
use unidisc::{sampling, InteractionVector, PhaseSet};

const ACHIEVEMENT_TOL: f64 = 1e-9;
const PRODUCT_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 2e-3;
const PERFECT_TOL: f64 = 1e-9;
const SIGMAS: f64 = 3.0;
const EXTRACT_TOL: f64 = 1e-8;
const DRESSED_TOL: f64 = 1e-7;
const CONCURRENCE_TOL: f64 = 1e-10;
const CASE_II_TOL: f64 = 1e-15;
const MIDPOINT_TOL: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn check(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn ud(x: f64, y: f64, z: f64) -> Mat4 {
    build_ud(&InteractionVector::new(x, y, z).unwrap())
}

fn achievability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_gap, mut worst_conc, mut failures, mut fallbacks) = (0.0f64, 0.0f64, 0, 0);
    for _ in 0..10_000 {
        let u1 = sampling::random_magic_diagonal(&mut rng);
        let u2 = sampling::random_magic_diagonal(&mut rng);
        let (f, omega) = fidelity(&u1, &u2).unwrap();
        match construct_probe(&omega) {
            Ok(c) => {
                let gap = (c.achieved - f).abs();
                let conc = c.probe.concurrence();
                worst_gap = worst_gap.max(gap);
                worst_conc = worst_conc.max(conc);
                fallbacks += c.fallback_used as usize;
                if gap > ACHIEVEMENT_TOL || conc > PRODUCT_TOL {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    check(
        failures == 0,
        format!("10000 pairs, failures {failures}, fallbacks {fallbacks}, worst gap {worst_gap:.2e}, worst concurrence {worst_conc:.2e}"),
    )
}

fn locc_equals_global() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = SearchConfig::default();
    let (mut worst, mut failures) = (0.0f64, 0);
    for trial in 0..200u64 {
        let u1 = sampling::random_magic_diagonal(&mut rng);
        let u2 = sampling::random_magic_diagonal(&mut rng);
        let (f, _) = fidelity(&u1, &u2).unwrap();
        let (prod, _) = min_over_product_states(&u1, &u2, &cfg);
        let (all, _) = min_over_all_states(&u1, &u2, &cfg.with_seed(trial));
        let dev = (f - prod).abs().max((f - all).abs()).max((prod - all).abs());
        worst = worst.max(dev);
        if dev > ORACLE_TOL {
            failures += 1;
        }
    }
    check(
        failures == 0,
        format!("200 pairs, failures {failures}, worst pairwise deviation {worst:.2e}"),
    )
}

fn perfect_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut disagreements = 0;
    let mut perfect = 0;
    for _ in 0..10_000 {
        let u1 = sampling::random_magic_diagonal(&mut rng);
        let u2 = sampling::random_magic_diagonal(&mut rng);
        let predicate = perfectly_distinguishable(&u1, &u2).unwrap();
        let (f, _) = fidelity(&u1, &u2).unwrap();
        perfect += predicate as usize;
        if predicate != (f <= PERFECT_TOL) {
            disagreements += 1;
        }
    }
    let boundary = [
        [0.0, PI, 0.3, 1.2],
        [0.0, PI, 0.0, PI],
        [0.0, 0.0, 0.0, PI],
        [-PI / 2.0, PI / 2.0, 0.7, 0.1],
        [1.0, 1.0 - PI, 1.0 - PI / 3.0, 1.0 - PI / 2.0],
        [0.25, 0.25 + PI, 0.25 + PI / 4.0, 0.25 + 3.0 * PI / 4.0],
    ];
    let mut boundary_failures = 0;
    for w in boundary {
        let u2 = PhaseSet::new(w).unwrap().magic_diagonal_operator();
        let predicate = perfectly_distinguishable(&Mat4::identity(), &u2).unwrap();
        let (f, _) = fidelity(&Mat4::identity(), &u2).unwrap();
        if !predicate || f > PERFECT_TOL {
            boundary_failures += 1;
        }
    }
    check(
        disagreements == 0 && boundary_failures == 0,
        format!(
            "10000 pairs ({perfect} perfect), disagreements {disagreements}; {} boundary cases, failures {boundary_failures}",
            boundary.len()
        ),
    )
}

fn error_probability_formula() -> Outcome {
    let shots = 100_000;
    let id = Mat4::identity();
    let u2 = ud(FRAC_PI_8, 0.0, 0.0);
    let (f, omega) = fidelity(&id, &u2).unwrap();
    let probe = construct_probe(&omega).unwrap().probe;
    let anchor = error_probability(f, 0.5, 0.5).unwrap();
    let expected = 0.5 * (1.0 - FRAC_PI_8.sin());
    let out = helstrom_simulate(&id, &u2, &probe, 0.5, shots, 42).unwrap();
    let anchor_z = (out.empirical_rate - anchor) / out.std_error;
    let mut ok = (anchor - expected).abs() <= 1e-12 && anchor_z.abs() <= SIGMAS;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_z, mut failures) = (0.0f64, 0);
    for case in 0..20u64 {
        // Only pairs with a nonzero error probability.
        let (u1, u2, f, omega) = loop {
            let u1 = sampling::random_magic_diagonal(&mut rng);
            let u2 = sampling::random_magic_diagonal(&mut rng);
            let (f, omega) = fidelity(&u1, &u2).unwrap();
            if f > 0.05 {
                break (u1, u2, f, omega);
            }
        };
        let p1 = 0.1 + 0.8 * (case as f64 / 19.0);
        let probe = construct_probe(&omega).unwrap().probe;
        let analytic = error_probability(f, p1, 1.0 - p1).unwrap();
        let out = helstrom_simulate(&u1, &u2, &probe, p1, shots, 1000 + case).unwrap();
        let diff = (out.empirical_rate - analytic).abs();
        let within = diff <= SIGMAS * out.std_error;
        if out.std_error > 0.0 {
            worst_z = worst_z.max(diff / out.std_error);
        }
        if !within {
            failures += 1;
        }
    }
    ok &= failures == 0;
    check(
        ok,
        format!(
            "anchor P_E {anchor:.7} (z {anchor_z:.2}); 20 random cases, failures {failures}, worst |z| {worst_z:.2}"
        ),
    )
}

fn max_diff(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn decomposition_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_plain, mut worst_dressed, mut failures) = (0.0f64, 0.0f64, 0);
    for _ in 0..1000 {
        let (d, u) = sampling::random_ud(&mut rng);
        let dressed = sampling::random_local(&mut rng) * u * sampling::random_local(&mut rng);
        let plain = extract_interaction(&u).map(|i| max_diff(i.vector.as_array(), d.as_array()));
        let local = extract_interaction(&dressed).map(|i| max_diff(i.vector.as_array(), d.as_array()));
        match (plain, local) {
            (Ok(p), Ok(l)) => {
                worst_plain = worst_plain.max(p);
                worst_dressed = worst_dressed.max(l);
                if p > EXTRACT_TOL || l > DRESSED_TOL {
                    failures += 1;
                }
            }
            _ => failures += 1,
        }
    }
    check(
        failures == 0,
        format!("1000 vectors, failures {failures}, worst {worst_plain:.2e} plain, {worst_dressed:.2e} dressed"),
    )
}

fn concurrence_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let m_adj = magic_basis().adjoint();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let psi = sampling::random_state(&mut rng);
        let u = m_adj.apply(&psi).0;
        worst = worst.max((concurrence(&u).unwrap() - concurrence_computational(&psi).unwrap()).abs());
    }
    let s = FRAC_1_SQRT_2;
    let zero = C64::new(0.0, 0.0);
    let case_ii = concurrence(&[zero, C64::new(s, 0.0), C64::new(0.0, s), zero]).unwrap();
    check(
        worst <= CONCURRENCE_TOL && case_ii <= CASE_II_TOL,
        format!("10000 states, worst deviation {worst:.2e}; two-point state concurrence {case_ii:.1e}"),
    )
}

fn midpoint_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut inside_mid, mut probe_failures, mut fallbacks, mut sets) = (0usize, 0usize, 0usize, 0usize);
    while sets < 100_000 {
        let omega = sampling::random_phase_set(&mut rng);
        if !hull_of_phases(&omega).contains_origin {
            continue;
        }
        sets += 1;
        let corners: Vec<Point> = circular_order(&omega)
            .iter()
            .map(|&k| [omega.0[k].cos(), omega.0[k].sin()])
            .collect();
        let mids = midpoints_of_cycle(&corners);
        if let Ok(w) = convex_coefficients(&mids, [0.0, 0.0]) {
            let x: f64 = w.iter().zip(&mids).map(|(a, p)| a * p[0]).sum();
            let y: f64 = w.iter().zip(&mids).map(|(a, p)| a * p[1]).sum();
            if x.hypot(y) <= MIDPOINT_TOL {
                inside_mid += 1;
            }
        }
        match construct_probe(&omega) {
            Ok(c) => {
                fallbacks += c.fallback_used as usize;
                if c.achieved > ACHIEVEMENT_TOL || c.probe.concurrence() > PRODUCT_TOL {
                    probe_failures += 1;
                }
            }
            Err(_) => probe_failures += 1,
        }
    }
    check(
        probe_failures == 0,
        format!(
            "{sets} sets with O inside, midpoint containment rate {:.6}, fallbacks {fallbacks}, probe failures {probe_failures}",
            inside_mid as f64 / sets as f64
        ),
    )
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name)
}

struct CliRun {
    code: i32,
    stdout: Vec<u8>,
    svg: Option<Vec<u8>>,
}

fn run_cli(args: &[&str], svg_out: Option<&Path>) -> CliRun {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unidisc"));
    for a in args {
        if a.ends_with(".json") {
            cmd.arg(corpus(a));
        } else {
            cmd.arg(a);
        }
    }
    if let Some(p) = svg_out {
        let _ = std::fs::remove_file(p);
        cmd.arg("--svg-out").arg(p);
    }
    let out = cmd.output().expect("binary runs");
    CliRun {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        svg: svg_out.and_then(|p| std::fs::read(p).ok()),
    }
}

fn golden_corpus() -> Outcome {
    let table: &[(&[&str], i32)] = &[
        (&["decompose", "identity.json"], 0),
        (&["decompose", "swap.json"], 0),
        (&["decompose", "cnot.json"], 0),
        (&["decompose", "alpha_generic.json"], 0),
        (&["decompose", "non_unitary.json"], 2),
        (&["decompose", "malformed.json"], 2),
        (&["decompose", "alpha_outside_chamber.json"], 2),
        (&["discriminate", "identity.json", "alpha_bdi.json"], 0),
        (&["discriminate", "identity.json", "swap.json"], 0),
        (&["discriminate", "identity.json", "alpha_pi8.json"], 1),
        (&["discriminate", "identity.json", "identity.json"], 1),
        (&["discriminate", "alpha_zero.json", "alpha_cnot_class.json"], 1),
        (&["discriminate", "alpha_generic.json", "alpha_near_swap.json"], 1),
        (&["discriminate", "identity.json", "cnot.json"], 2),
        (&["discriminate", "identity.json", "non_unitary.json"], 2),
        (&["discriminate", "malformed.json", "identity.json"], 2),
        (&["discriminate", "identity.json", "alpha_outside_chamber.json"], 2),
        (
            &[
                "simulate",
                "identity.json",
                "alpha_pi8.json",
                "--shots",
                "100000",
                "--seed",
                "42",
            ],
            0,
        ),
        (&["simulate", "identity.json", "alpha_bdi.json", "--shots", "10000"], 0),
        (&["simulate", "identity.json", "alpha_pi8.json", "--shots", "0"], 2),
    ];
    let tmp = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-corpus");
    std::fs::create_dir_all(&tmp).unwrap();
    let mut problems = Vec::new();
    for (i, (args, expected)) in table.iter().enumerate() {
        let svg = (args[0] == "discriminate").then(|| tmp.join(format!("case{i}.svg")));
        let first = run_cli(args, svg.as_deref());
        let second = run_cli(args, svg.as_deref());
        if first.code != *expected {
            problems.push(format!("{} exited {} (want {expected})", args.join(" "), first.code));
        }
        if first.stdout != second.stdout || first.code != second.code || first.svg != second.svg {
            problems.push(format!("{} not reproducible", args.join(" ")));
        }
        if *expected != 2 && svg.is_some() && first.svg.is_none() {
            problems.push(format!("{} wrote no SVG", args.join(" ")));
        }
    }
    let used = std::fs::read_dir(corpus("")).unwrap().count();
    check(
        problems.is_empty() && used == 12,
        format!(
            "{} invocations over {used} corpus files; {}",
            table.len(),
            if problems.is_empty() {
                "all as specified".into()
            } else {
                problems.join("; ")
            }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("product probe achieves the hull distance", achievability),
        ("product and unrestricted minima agree", locc_equals_global),
        ("perfect distinguishability predicate", perfect_criterion),
        ("error probability matches simulation", error_probability_formula),
        ("decomposition round trip", decomposition_round_trip),
        ("concurrence consistency", concurrence_consistency),
        ("midpoint containment and probe construction", midpoint_containment),
        ("CLI golden corpus", golden_corpus),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {}: {name}: {} [{:.2}s]",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        failed += !outcome.passed as usize;
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
