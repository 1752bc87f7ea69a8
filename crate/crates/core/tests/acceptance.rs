//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported as FAIL but do not fail
//! the run; set `ACCEPTANCE_STRICT=1` to make every FAIL fatal.

use std::f64::consts::PI;
use std::time::Instant;

use composite_pulses::catalog::{self, CatalogEntry};
use composite_pulses::conditions::{self, PhaseVector, SequenceSpec};
use composite_pulses::profiles::{self, BeamModel};
use composite_pulses::solver::{self, SolveOptions};
use composite_pulses::su2::{self, Propagator};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot be met with the published data; see the README.
const KNOWN_FAILURES: &[u32] = &[1, 4];

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self {
            passed,
            summary: summary.into(),
            details,
        }
    }
}

fn entry(name: &str) -> CatalogEntry {
    catalog::find(name).expect("catalog entry")
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn table_fidelity() -> Outcome {
    let catalog = catalog::load_catalog();
    let report = catalog::verify_all(&catalog).expect("verification runs");
    let details: Vec<String> = report
        .entries
        .iter()
        .map(|e| {
            let f = &e.fidelity;
            format!(
                "{:5} {:22} residual {:.2e}  refined {:.1e}  max drift {:.2e}π",
                mark(f.passed),
                e.name,
                f.residual_norm,
                f.refined_residual.unwrap_or(f64::NAN),
                f.max_drift() / PI
            )
        })
        .collect();
    let good = report.entries.iter().filter(|e| e.fidelity.passed).count();
    Outcome::new(
        good == report.entries.len(),
        format!("table fidelity: {good}/{} entries", report.entries.len()),
        details,
    )
}

fn crosstalk_radii() -> Outcome {
    let beam = BeamModel::default();
    let mut passed = true;
    let mut details = Vec::new();
    for (name, radius, fraction) in [("N5(pi)", 0.83, 0.15), ("P17(pi)", 0.70, 0.27), ("N21(pi)", 0.51, 0.48)] {
        let e = entry(name);
        let r = profiles::crosstalk_radius(&e.spec, &e.published_phases, &beam, 1e-4).unwrap();
        let g = profiles::beam_scaling(r);
        let ok = (r - radius).abs() <= 0.02 && (g - fraction).abs() <= 0.02;
        passed &= ok;
        details.push(format!(
            "{:5} {name}: r = {r:.4}ξ (claim {radius}), g = {g:.4} (claim {fraction})",
            mark(ok)
        ));
    }
    Outcome::new(passed, "crosstalk radii at 1e-4", details)
}

fn robustness_radii() -> Outcome {
    let beam = BeamModel::default();
    let mut passed = true;
    let mut details = Vec::new();
    let cases = [
        (catalog::single_pulse_reference(), 0.05, 0.005),
        (entry("P7(pi)"), 0.18, 0.01),
        (entry("P17(pi)"), 0.21, 0.01),
    ];
    for (e, radius, tol) in cases {
        let r = profiles::robustness_radius(&e.spec, &e.published_phases, &beam, 1e-4).unwrap();
        let ok = (r - radius).abs() <= tol;
        passed &= ok;
        details.push(format!(
            "{:5} {}: r = {r:.4}ξ (claim {radius} ± {tol})",
            mark(ok),
            e.name
        ));
    }
    Outcome::new(passed, "robustness radii at 1e-4", details)
}

fn phase_robustness() -> Outcome {
    let threshold = profiles::infidelity_threshold_phase();
    let p11 = entry("P11(pi,3pi/2)");
    let n7 = entry("N7(pi,3pi/2)");
    let width = |e: &CatalogEntry| {
        profiles::phase_robust_half_width(&e.spec, &e.published_phases, threshold, 0.5, 0.0).unwrap()
    };
    let w11 = width(&p11);
    let w7 = width(&n7);
    let scan = profiles::phase_deviation_scan(
        &p11.spec,
        &p11.published_phases,
        profiles::ScaleRange::around_nominal(0.2, 4001),
        0.0,
    )
    .unwrap();
    let worst = scan.ordinate.iter().copied().fold(0.0, f64::max);

    let mut details = vec![
        format!("      threshold 2·asin(1e-2) = {threshold:.5} rad"),
        format!(
            "{:5} P11(pi,3pi/2): below threshold for |d| <= {w11:.4}; max deviation on |d| <= 0.2 is {worst:.5}",
            mark(w11 >= 0.2)
        ),
        format!(
            "{:5} N7(pi,3pi/2): below threshold for |d| <= {w7:.4} (narrower)",
            mark(w7 < w11)
        ),
    ];
    let mut shifts_ok = true;
    for e in [&p11, &n7] {
        let plain = profiles::phase_deviation(&e.spec, &e.published_phases, 1.0, 0.0)
            .unwrap()
            .unwrap();
        let detuned = profiles::phase_deviation(&e.spec, &e.published_phases, 1.0, 1e-3)
            .unwrap()
            .unwrap();
        let shift = (detuned - plain).abs();
        let ok = shift < threshold;
        shifts_ok &= ok;
        details.push(format!(
            "{:5} {}: detuning shift at d = 0 is {shift:.2e}",
            mark(ok),
            e.name
        ));
    }
    Outcome::new(
        w11 >= 0.2 && w7 < w11 && shifts_ok,
        "phase robustness over ±20% area",
        details,
    )
}

fn noise_claim() -> Outcome {
    let mut passed = true;
    let mut details = Vec::new();
    for name in ["P11(pi,3pi/2)", "N7(pi,3pi/2)"] {
        let e = entry(name);
        let stats = profiles::noise_phase_error(&e.spec, &e.published_phases, 0.05, 10_000, 0).unwrap();
        let claim = 2.5e-3 * PI;
        let ok = stats.rms >= claim / 3.0 && stats.rms <= claim * 3.0;
        passed &= ok;
        details.push(format!(
            "{:5} {name}: rms {:.3e}π, mean {:.3e}π, max {:.3e}π",
            mark(ok),
            stats.rms / PI,
            stats.mean / PI,
            stats.max / PI
        ));
    }
    Outcome::new(passed, "±5% area noise, 1e4 trials, rms within ×3 of 2.5e-3π", details)
}

/// Finite-difference base step is `FD_BASE / N`: the propagator oscillates
/// with frequencies up to `N/2` in the per-pulse area.
const FD_BASE: f64 = 0.8;
const FD_LEVELS: usize = 3;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central `k`-th difference with steps `h, h/2, …`, Richardson-extrapolated
/// over `levels` halvings to cancel the even error terms.
fn fd_derivative(f: &dyn Fn(f64) -> Complex64, x: f64, k: usize, h: f64, levels: usize) -> Complex64 {
    if k == 0 {
        return f(x);
    }
    let central = |h: f64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += f(x + (k as f64 / 2.0 - j as f64) * h) * (sign * binomial(k, j));
        }
        acc / h.powi(k as i32)
    };
    let mut table: Vec<Complex64> = (0..levels).map(|i| central(h / 2f64.powi(i as i32))).collect();
    for m in 1..levels {
        let factor = 4f64.powi(m as i32);
        for i in (m..levels).rev() {
            table[i] = (table[i] * factor - table[i - 1]) / (factor - 1.0);
        }
    }
    table[levels - 1]
}

type Entry<'a> = dyn Fn(f64) -> Complex64 + 'a;

fn oracle_equivalence() -> Outcome {
    let single = SequenceSpec::new(1, PI, PI).unwrap();
    let curve = profiles::excitation_profile(&single, &PhaseVector::default(), 3.0, 3001).unwrap();
    let profile_err = curve
        .points()
        .map(|(r, p)| (p - (PI * profiles::beam_scaling(r) / 2.0).sin().powi(2)).abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let pulses = 2 * rng.gen_range(0..=10) + 1;
        let spec = SequenceSpec::new(pulses, rng.gen_range(0.2..2.0 * PI), PI).unwrap();
        let phases = PhaseVector::new((0..pulses / 2).map(|_| rng.gen_range(0.0..2.0 * PI)).collect());
        let s0 = rng.gen_range(0.0..2.0 * PI);
        let jet = su2::sequence_jet(&spec, &phases, s0, 4).unwrap();
        let list = su2::symmetric_phase_list(&spec, &phases).unwrap();
        let u = |s: f64| su2::sequence_propagator(&list, s).unwrap();
        let u11 = |s: f64| u(s).u11();
        let u21 = |s: f64| u(s).u21();
        let entries: [(usize, usize, &Entry<'_>); 2] = [(0, 0, &u11), (1, 0, &u21)];
        for (row, col, f) in entries {
            for k in 0..=4 {
                let exact = jet.derivative(row, col, k);
                let fd = fd_derivative(f, s0, k, FD_BASE / pulses as f64, FD_LEVELS);
                worst = worst.max((exact - fd).norm() / exact.norm().max(1.0));
            }
        }
    }
    Outcome::new(
        profile_err <= 1e-12 && worst <= 1e-5,
        "single-pulse profile and jet derivatives against oracles",
        vec![
            format!(
                "{:5} N=1 profile, 3001 points: max error {profile_err:.1e}",
                mark(profile_err <= 1e-12)
            ),
            format!(
                "{:5} jets vs finite differences, 100 specs, k <= 4: max relative error {worst:.1e}",
                mark(worst <= 1e-5)
            ),
        ],
    )
}

fn invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut unitarity = 0.0f64;
    let mut imag_u11 = 0.0f64;
    for _ in 0..500 {
        let pulses = 2 * rng.gen_range(0..=10) + 1;
        let phases: Vec<f64> = (0..pulses / 2).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let spec = SequenceSpec::new(pulses, rng.gen_range(0.1..2.0 * PI), PI).unwrap();
        let list = su2::symmetric_phase_list(&spec, &PhaseVector::new(phases)).unwrap();
        let area = rng.gen_range(0.0..3.0 * PI);
        let u = su2::sequence_propagator(&list, area).unwrap();
        unitarity = unitarity.max(u.unitarity_defect());
        imag_u11 = imag_u11.max(u.u11().im.abs());
        let pulses: Vec<Propagator> = list.iter().map(|&p| su2::resonant_pulse(area, p)).collect();
        unitarity = unitarity.max(su2::compose(&pulses).unwrap().unitarity_defect());
    }

    let mut mirror = 0.0f64;
    for e in catalog::load_catalog()
        .iter()
        .filter(|e| e.spec.target_phase().is_none())
    {
        let refined = solver::refine(&e.spec, &e.published_phases, &SolveOptions::default()).unwrap();
        let r = conditions::residuals(&e.spec, &refined.phases.mirrored()).unwrap();
        mirror = mirror.max(r.iter().map(|x| x * x).sum::<f64>().sqrt());
    }

    let spec = entry("N5(pi)").spec;
    let options = SolveOptions {
        max_starts: 40,
        rng_seed: 99,
        ..SolveOptions::default()
    };
    let deterministic = solver::solve(&spec, &options).unwrap() == solver::solve(&spec, &options).unwrap();

    let ok = [unitarity <= 1e-12, imag_u11 <= 1e-10, mirror <= 1e-8, deterministic];
    Outcome::new(
        ok.iter().all(|&b| b),
        "invariant suite",
        vec![
            format!("{:5} unitarity defect {unitarity:.1e}", mark(ok[0])),
            format!("{:5} |Im U11| of palindromes {imag_u11:.1e}", mark(ok[1])),
            format!("{:5} mirrored unphased solutions, residual {mirror:.1e}", mark(ok[2])),
            format!("{:5} solve is deterministic under a fixed seed", mark(ok[3])),
        ],
    )
}

fn solver_discovery() -> Outcome {
    let mut passed = true;
    let mut details = Vec::new();
    for name in ["N5(pi)", "N7(pi/2)", "P7(pi)"] {
        let e = entry(name);
        let options = SolveOptions {
            max_starts: 500,
            rng_seed: 1,
            ..SolveOptions::default()
        };
        let solutions = solver::solve(&e.spec, &options).unwrap();
        let best = solutions
            .iter()
            .map(|s| {
                s.phases
                    .circular_distance(&e.published_phases)
                    .min(s.phases.mirrored().circular_distance(&e.published_phases))
            })
            .fold(f64::INFINITY, f64::min);
        let ok = best <= 2e-3 * PI;
        passed &= ok;
        details.push(format!(
            "{:5} {name}: {} distinct solutions, closest to the table at {:.2e}π",
            mark(ok),
            solutions.len(),
            best / PI
        ));
    }
    Outcome::new(passed, "multistart recovers tabulated phases (500 starts)", details)
}

fn main() {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, table_fidelity),
        (2, crosstalk_radii),
        (3, robustness_radii),
        (4, phase_robustness),
        (5, noise_claim),
        (6, oracle_equivalence),
        (7, invariants),
        (8, solver_discovery),
    ];
    let mut unexpected = Vec::new();
    let mut failed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.contains(&id);
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        let note = if !outcome.passed && known {
            " [known, see README]"
        } else {
            ""
        };
        println!("{tag} criterion {id}: {}{note} ({elapsed:.1}s)", outcome.summary);
        for line in &outcome.details {
            println!("      {line}");
        }
        if !outcome.passed {
            failed += 1;
            if strict || !known {
                unexpected.push(id);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
