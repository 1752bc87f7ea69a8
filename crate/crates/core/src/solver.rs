//! Damped least-squares refinement and multistart search for phase vectors.
//!
//! [`refine`] runs Levenberg–Marquardt on the residual vector of a
//! [`ConditionSet`](crate::conditions::ConditionSet): the step solves
//! `(JᵀJ + λI) δ = −Jᵀr`, with `λ` divided by ten after an accepted step and
//! multiplied by ten after a rejected one. Overdetermined systems are handled
//! in the least-squares sense; a solution is only reported when the residual
//! norm reaches the tolerance.
//!
//! [`solve`] seeds `refine` from uniform points of `[0, 2π)ⁿ` drawn from a
//! seeded ChaCha stream, so its output depends only on the spec and options.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditions::{build_conditions, matrix_rank, ConditionSet, PhaseVector, SequenceSpec, JACOBIAN_STEP};
use crate::{Error, Result};

const INITIAL_LAMBDA: f64 = 1e-3;
const MIN_LAMBDA: f64 = 1e-15;
const MAX_LAMBDA: f64 = 1e12;
/// Singular values above this fraction of the largest count toward the Jacobian rank.
pub const RANK_TOLERANCE: f64 = 1e-6;
const POLISH_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub max_starts: usize,
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    /// Componentwise circular distance (radians) below which two solutions coincide.
    pub dedup_tolerance: f64,
    pub rng_seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_starts: 200,
            max_iterations: 200,
            residual_tolerance: 1e-10,
            dedup_tolerance: 1e-4,
            rng_seed: 0,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_starts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidArgument("starts and iterations must be positive".into()));
        }
        if self.residual_tolerance.is_nan()
            || self.residual_tolerance <= 0.0
            || self.dedup_tolerance.is_nan()
            || self.dedup_tolerance <= 0.0
        {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub phases: PhaseVector,
    pub residual_norm: f64,
    pub jacobian_rank: usize,
    /// Representative of `{φ, −φ}` for mirror-symmetric specs, otherwise `φ`.
    pub symmetry_class: PhaseVector,
    pub iterations: usize,
}

/// Refines `initial` until the residual norm drops to `options.residual_tolerance`.
pub fn refine(spec: &SequenceSpec, initial: &PhaseVector, options: &SolveOptions) -> Result<Solution> {
    options.validate()?;
    let conditions = build_conditions(spec)?;
    if initial.len() != conditions.unknowns() {
        return Err(Error::PhaseCountMismatch {
            expected: conditions.unknowns(),
            found: initial.len(),
        });
    }
    refine_with(&conditions, spec, initial.as_slice(), options)
}

fn refine_with(
    conditions: &ConditionSet,
    spec: &SequenceSpec,
    initial: &[f64],
    options: &SolveOptions,
) -> Result<Solution> {
    let mut x = initial.to_vec();
    let mut r = conditions.residuals_raw(&x);
    let mut cost = sum_sq(&r);
    let mut lambda = INITIAL_LAMBDA;
    let tol_sq = options.residual_tolerance * options.residual_tolerance;

    let mut iterations = 0;
    while cost > tol_sq {
        if iterations == options.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual_norm: cost.sqrt(),
            });
        }
        iterations += 1;

        let jac = conditions.jacobian_raw(&x, JACOBIAN_STEP);
        let jt = jac.transpose();
        let normal = &jt * &jac;
        let gradient = &jt * DVector::from_column_slice(&r);

        loop {
            let damped = &normal + DMatrix::identity(x.len(), x.len()) * lambda;
            let step = match damped.clone().cholesky() {
                Some(chol) => chol.solve(&(-&gradient)),
                None => match damped.lu().solve(&(-&gradient)) {
                    Some(step) => step,
                    None => {
                        lambda *= 10.0;
                        if lambda > MAX_LAMBDA {
                            return stalled(iterations, cost);
                        }
                        continue;
                    }
                },
            };
            let candidate: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, di)| xi + di).collect();
            let r_new = conditions.residuals_raw(&candidate);
            let cost_new = sum_sq(&r_new);
            if cost_new < cost {
                x = candidate;
                r = r_new;
                cost = cost_new;
                lambda = (lambda / 10.0).max(MIN_LAMBDA);
                break;
            }
            lambda *= 10.0;
            if lambda > MAX_LAMBDA {
                return stalled(iterations, cost);
            }
        }
    }

    if iterations > 0 {
        polish(conditions, &mut x, cost);
    }

    let phases = PhaseVector::new(x);
    let rank = if conditions.is_empty() {
        0
    } else {
        matrix_rank(
            &conditions.jacobian_raw(phases.as_slice(), JACOBIAN_STEP),
            RANK_TOLERANCE,
        )
    };
    let residual_norm = sum_sq(&conditions.residuals_raw(phases.as_slice())).sqrt();
    Ok(Solution {
        symmetry_class: canonical(spec, &phases),
        phases,
        residual_norm,
        jacobian_rank: rank,
        iterations,
    })
}

/// A few undamped least-squares steps past the tolerance, so that solutions of
/// ill-conditioned systems agree to well below the dedup tolerance.
fn polish(conditions: &ConditionSet, x: &mut Vec<f64>, mut cost: f64) {
    for _ in 0..POLISH_STEPS {
        let r = DVector::from_column_slice(&conditions.residuals_raw(x));
        let jac = conditions.jacobian_raw(x, JACOBIAN_STEP);
        let Ok(step) = jac.svd(true, true).solve(&(-r), 1e-14) else {
            return;
        };
        let candidate: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, di)| xi + di).collect();
        let cost_new = sum_sq(&conditions.residuals_raw(&candidate));
        if cost_new > cost {
            return;
        }
        *x = candidate;
        cost = cost_new;
        if step.norm() < 1e-14 {
            return;
        }
    }
}

fn stalled(iterations: usize, cost: f64) -> Result<Solution> {
    Err(Error::NoConvergence {
        iterations,
        residual_norm: cost.sqrt(),
    })
}

fn sum_sq(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Canonical representative up to the mirror symmetry, when the spec has it.
pub fn canonical(spec: &SequenceSpec, phases: &PhaseVector) -> PhaseVector {
    if !spec.is_mirror_symmetric() {
        return phases.clone();
    }
    let mirror = phases.mirrored();
    match lexicographic(phases.as_slice(), mirror.as_slice()) {
        Ordering::Greater => mirror,
        _ => phases.clone(),
    }
}

fn lexicographic(x: &[f64], y: &[f64]) -> Ordering {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Whether two phase vectors coincide within `tolerance`, up to the spec's symmetries.
pub fn same_solution(spec: &SequenceSpec, x: &PhaseVector, y: &PhaseVector, tolerance: f64) -> bool {
    x.circular_distance(y) < tolerance || (spec.is_mirror_symmetric() && x.circular_distance(&y.mirrored()) < tolerance)
}

/// Multistart search. Returns every distinct converged solution, sorted by
/// residual norm and then lexicographically by canonical phases.
pub fn solve(spec: &SequenceSpec, options: &SolveOptions) -> Result<Vec<Solution>> {
    options.validate()?;
    let conditions = build_conditions(spec)?;
    let n = conditions.unknowns();
    if n == 0 {
        return Ok(vec![refine_with(&conditions, spec, &[], options)?]);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.rng_seed);
    let seeds: Vec<Vec<f64>> = (0..options.max_starts)
        .map(|_| (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect())
        .collect();

    let attempt = |seed: &Vec<f64>| refine_with(&conditions, spec, seed, options).ok();
    #[cfg(feature = "parallel")]
    let found: Vec<Option<Solution>> = {
        use rayon::prelude::*;
        seeds.par_iter().map(attempt).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Option<Solution>> = seeds.iter().map(attempt).collect();

    let mut candidates: Vec<Solution> = found.into_iter().flatten().collect();
    candidates.sort_by(|a, b| {
        a.residual_norm
            .total_cmp(&b.residual_norm)
            .then_with(|| lexicographic(a.symmetry_class.as_slice(), b.symmetry_class.as_slice()))
    });

    let mut distinct: Vec<Solution> = Vec::new();
    for candidate in candidates {
        if !distinct
            .iter()
            .any(|kept| same_solution(spec, &kept.phases, &candidate.phases, options.dedup_tolerance))
        {
            distinct.push(candidate);
        }
    }
    Ok(distinct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::residuals;
    use std::f64::consts::PI;

    fn n5() -> SequenceSpec {
        SequenceSpec::new(5, PI, PI).unwrap().with_flat_bottom(2)
    }

    fn within_seed(solution: &PhaseVector, seed_pi: &[f64], tol_pi: f64) -> bool {
        solution.circular_distance(&PhaseVector::from_units_of_pi(seed_pi)) <= tol_pi * PI
    }

    #[test]
    fn refine_n5_from_published_seed() {
        let seed = [0.839, 1.420];
        let sol = refine(&n5(), &PhaseVector::from_units_of_pi(&seed), &SolveOptions::default()).unwrap();
        assert!(sol.residual_norm <= 1e-10);
        assert!(within_seed(&sol.phases, &seed, 2e-3));
        assert_eq!(sol.jacobian_rank, 2);
    }

    #[test]
    fn refine_n9_from_published_seed() {
        let spec = SequenceSpec::new(9, PI, PI).unwrap().with_flat_bottom(4);
        let seed = [0.426, 1.490, 0.858, 1.300];
        let sol = refine(&spec, &PhaseVector::from_units_of_pi(&seed), &SolveOptions::default()).unwrap();
        assert!(sol.residual_norm <= 1e-10);
        assert!(within_seed(&sol.phases, &seed, 2e-3));
    }

    #[test]
    fn trivial_spec_returns_seed() {
        let spec = SequenceSpec::new(5, PI, PI).unwrap();
        let seed = PhaseVector::new(vec![0.3, 2.0]);
        let sol = refine(&spec, &seed, &SolveOptions::default()).unwrap();
        assert_eq!(sol.phases, seed);
        assert_eq!(sol.residual_norm, 0.0);
        assert_eq!(sol.iterations, 0);

        let single = SequenceSpec::new(1, PI, PI).unwrap();
        let all = solve(&single, &SolveOptions::default()).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].phases.is_empty());
    }

    #[test]
    fn no_convergence_is_reported() {
        let opts = SolveOptions {
            max_iterations: 1,
            ..SolveOptions::default()
        };
        let err = refine(&n5(), &PhaseVector::new(vec![0.1, 0.2]), &opts).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 1, .. }), "{err:?}");
    }

    #[test]
    fn wrong_seed_length() {
        let err = refine(&n5(), &PhaseVector::new(vec![0.1]), &SolveOptions::default()).unwrap_err();
        assert_eq!(err, Error::PhaseCountMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn multistart_recovers_n5() {
        let opts = SolveOptions {
            max_starts: 200,
            rng_seed: 7,
            ..SolveOptions::default()
        };
        let sols = solve(&n5(), &opts).unwrap();
        assert!(!sols.is_empty());
        assert!(sols.iter().any(|s| {
            within_seed(&s.phases, &[0.839, 1.420], 2e-3) || within_seed(&s.phases.mirrored(), &[0.839, 1.420], 2e-3)
        }));
        for s in &sols {
            let r = residuals(&n5(), &s.phases).unwrap();
            assert!(r.iter().map(|v| v * v).sum::<f64>().sqrt() <= opts.residual_tolerance);
        }
        // no two entries are mirror images of each other
        for (i, a) in sols.iter().enumerate() {
            for b in &sols[i + 1..] {
                assert!(!same_solution(&n5(), &a.phases, &b.phases, opts.dedup_tolerance));
            }
        }
    }

    #[test]
    fn canonical_picks_lexicographic_minimum() {
        let phases = PhaseVector::from_units_of_pi(&[1.5, 0.2]);
        let c = canonical(&n5(), &phases);
        assert!((c.as_slice()[0] - 0.5 * PI).abs() < 1e-12);
        let phased = n5().with_target_phase(0.25 * PI);
        assert_eq!(canonical(&phased, &phases), phases);
    }
}
