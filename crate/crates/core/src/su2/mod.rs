//! Two-level propagator algebra.
//!
//! Propagators are kept in Cayley–Klein form
//!
//! ```text
//! U = [  a    b  ]
//!     [ -b*   a* ]      |a|² + |b|² = 1
//! ```
//!
//! A phase shift `φ` of the driving field multiplies `b` by `e^{-iφ}`. A
//! sequence `P_1, …, P_N` (first pulse first) composes to `P_N ⋯ P_1`.

mod jet;

pub use jet::Jet;

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conditions::{PhaseVector, SequenceSpec};
use crate::{reduce_angle, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub a: Complex64,
    pub b: Complex64,
}

impl Propagator {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// Resonant pulse: `a = cos(A/2)`, `b = -i sin(A/2) e^{-iφ}`.
    pub fn resonant(area: f64, phase: f64) -> Self {
        let (s, c) = (area / 2.0).sin_cos();
        let b = Complex64::new(0.0, -s) * Complex64::from_polar(1.0, -phase);
        Self::new(Complex64::new(c, 0.0), b)
    }

    /// Rectangular pulse with detuning, in the interaction picture whose
    /// Hamiltonian is `½[[-Δ, Ω e^{-iφ}], [Ω e^{iφ}, Δ]]`.
    pub fn detuned(params: &PulseParams) -> Self {
        let (area, detuning) = (params.area, params.detuning_area);
        if detuning == 0.0 {
            return Self::resonant(area, params.phase);
        }
        let theta = area.hypot(detuning);
        if theta == 0.0 {
            return Self::identity();
        }
        let (s, c) = (theta / 2.0).sin_cos();
        let a = Complex64::new(c, detuning / theta * s);
        let b = Complex64::new(0.0, -area / theta * s) * Complex64::from_polar(1.0, -params.phase);
        Self::new(a, b)
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [-self.b.conj(), self.a.conj()]]
    }

    pub fn u11(&self) -> Complex64 {
        self.a
    }

    pub fn u21(&self) -> Complex64 {
        -self.b.conj()
    }

    /// Transition probability `|b|²`.
    pub fn probability(&self) -> f64 {
        self.b.norm_sqr()
    }

    /// `| |a|² + |b|² − 1 |`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() - 1.0).abs()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.a.conj(), -self.b)
    }
}

impl Mul for Propagator {
    type Output = Propagator;

    fn mul(self, rhs: Propagator) -> Propagator {
        Propagator::new(
            self.a * rhs.a - self.b * rhs.b.conj(),
            self.a * rhs.b + self.b * rhs.a.conj(),
        )
    }
}

/// Area, phase and detuning of one rectangular pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub area: f64,
    pub phase: f64,
    /// Δ·T, zero on resonance.
    pub detuning_area: f64,
}

impl PulseParams {
    pub fn new(area: f64, phase: f64, detuning_area: f64) -> Result<Self> {
        if !area.is_finite() || area < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "pulse area must be finite and >= 0, got {area}"
            )));
        }
        if !phase.is_finite() || !detuning_area.is_finite() {
            return Err(Error::InvalidArgument("pulse phase and detuning must be finite".into()));
        }
        Ok(Self {
            area,
            phase: reduce_angle(phase),
            detuning_area,
        })
    }

    pub fn resonant(area: f64, phase: f64) -> Result<Self> {
        Self::new(area, phase, 0.0)
    }
}

pub fn resonant_pulse(area: f64, phase: f64) -> Propagator {
    Propagator::resonant(area, phase)
}

pub fn detuned_pulse(params: &PulseParams) -> Propagator {
    Propagator::detuned(params)
}

/// Composes pulses given in physical order; the first pulse is the rightmost factor.
pub fn compose(pulses: &[Propagator]) -> Result<Propagator> {
    let (first, rest) = pulses.split_first().ok_or(Error::EmptySequence)?;
    Ok(rest.iter().fold(*first, |acc, &p| p * acc))
}

/// Expands the free phases into the palindrome `[0, φ2, …, φ_{n+1}, …, φ2, 0]`.
pub fn symmetric_phase_list(spec: &SequenceSpec, phases: &PhaseVector) -> Result<Vec<f64>> {
    let n = spec.free_phase_count();
    if phases.len() != n {
        return Err(Error::PhaseCountMismatch {
            expected: n,
            found: phases.len(),
        });
    }
    Ok(palindrome(phases.as_slice()))
}

pub(crate) fn palindrome(free: &[f64]) -> Vec<f64> {
    if free.is_empty() {
        return vec![0.0];
    }
    let mut list = Vec::with_capacity(2 * free.len() + 1);
    list.push(0.0);
    list.extend_from_slice(free);
    list.extend(free.iter().rev().skip(1));
    list.push(0.0);
    list
}

/// Propagator of equal-area resonant pulses with the given phases.
pub fn sequence_propagator(phase_list: &[f64], area: f64) -> Result<Propagator> {
    let pulses: Vec<Propagator> = phase_list.iter().map(|&phi| Propagator::resonant(area, phi)).collect();
    compose(&pulses)
}

/// Propagator with an individual area per pulse and a shared detuning `Δ·T`.
pub fn sequence_propagator_with_areas(phase_list: &[f64], areas: &[f64], detuning_area: f64) -> Result<Propagator> {
    if phase_list.len() != areas.len() {
        return Err(Error::InvalidArgument(format!(
            "{} phases but {} areas",
            phase_list.len(),
            areas.len()
        )));
    }
    let pulses: Vec<Propagator> = phase_list
        .iter()
        .zip(areas)
        .map(|(&phase, &area)| {
            Propagator::detuned(&PulseParams {
                area,
                phase,
                detuning_area,
            })
        })
        .collect();
    compose(&pulses)
}

/// Jet of the sequence propagator in the common per-pulse area `s` around `s0`.
pub fn sequence_jet(spec: &SequenceSpec, phases: &PhaseVector, s0: f64, order: usize) -> Result<Jet> {
    let list = symmetric_phase_list(spec, phases)?;
    Ok(phase_list_jet(&list, s0, order))
}

pub(crate) fn phase_list_jet(phase_list: &[f64], s0: f64, order: usize) -> Jet {
    phase_list.iter().fold(Jet::identity(s0, order), |acc, &phi| {
        &Jet::resonant_pulse(s0, order, phi) * &acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    /// RK4 integration of `i ċ = H c` over unit time for the rectangular pulse
    /// Hamiltonian; returns the propagator columns.
    fn integrate(area: f64, phase: f64, detuning: f64) -> [[Complex64; 2]; 2] {
        let i = Complex64::new(0.0, 1.0);
        let h = [
            [
                Complex64::new(-detuning / 2.0, 0.0),
                area / 2.0 * Complex64::from_polar(1.0, -phase),
            ],
            [
                area / 2.0 * Complex64::from_polar(1.0, phase),
                Complex64::new(detuning / 2.0, 0.0),
            ],
        ];
        let deriv = |c: [Complex64; 2]| -> [Complex64; 2] {
            [
                -i * (h[0][0] * c[0] + h[0][1] * c[1]),
                -i * (h[1][0] * c[0] + h[1][1] * c[1]),
            ]
        };
        let steps = 20_000;
        let dt = 1.0 / steps as f64;
        let mut cols = [[Complex64::new(0.0, 0.0); 2]; 2];
        for col in 0..2 {
            let mut c = [Complex64::new(0.0, 0.0); 2];
            c[col] = Complex64::new(1.0, 0.0);
            for _ in 0..steps {
                let k1 = deriv(c);
                let k2 = deriv([c[0] + k1[0] * (dt / 2.0), c[1] + k1[1] * (dt / 2.0)]);
                let k3 = deriv([c[0] + k2[0] * (dt / 2.0), c[1] + k2[1] * (dt / 2.0)]);
                let k4 = deriv([c[0] + k3[0] * dt, c[1] + k3[1] * dt]);
                for r in 0..2 {
                    c[r] += (k1[r] + k2[r] * 2.0 + k3[r] * 2.0 + k4[r]) * (dt / 6.0);
                }
            }
            cols[col] = c;
        }
        // cols[j][i] = U_ij
        [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]
    }

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() < tol
    }

    #[test]
    fn resonant_pi_pulse_inverts() {
        let p = resonant_pulse(PI, 0.0);
        assert!(p.a.norm() < 1e-15);
        assert!(close(p.b, Complex64::new(0.0, -1.0), 1e-15));
        assert!((p.probability() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_area_is_identity() {
        let p = resonant_pulse(0.0, 1.3);
        assert_eq!(p.a, Complex64::new(1.0, 0.0));
        assert_eq!(p.b.norm(), 0.0);
    }

    #[test]
    fn half_pi_pulse_matches_schrodinger_integration() {
        let p = resonant_pulse(PI / 2.0, PI / 2.0);
        assert!(close(p.a, Complex64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(p.b, Complex64::new(-FRAC_1_SQRT_2, 0.0), 1e-15));
        let u = integrate(PI / 2.0, PI / 2.0, 0.0);
        let m = p.matrix();
        for r in 0..2 {
            for c in 0..2 {
                assert!(
                    close(u[r][c], m[r][c], 1e-12),
                    "entry {r}{c}: {} vs {}",
                    u[r][c],
                    m[r][c]
                );
            }
        }
    }

    #[test]
    fn detuned_pulse_matches_schrodinger_integration() {
        for &(area, phase, detuning) in &[(PI, 0.0, 0.001 * PI), (2.1, 0.4, 1.7), (0.3, 5.0, -0.8)] {
            let p = detuned_pulse(&PulseParams::new(area, phase, detuning).unwrap());
            let u = integrate(area, phase, detuning);
            let m = p.matrix();
            for r in 0..2 {
                for c in 0..2 {
                    assert!(
                        close(u[r][c], m[r][c], 1e-11),
                        "({area},{phase},{detuning}) entry {r}{c}"
                    );
                }
            }
        }
    }

    #[test]
    fn detuned_limits() {
        let resonant = detuned_pulse(&PulseParams::new(PI, 0.0, 0.0).unwrap());
        assert!(resonant.a.norm() < 1e-15);
        assert!(close(resonant.b, Complex64::new(0.0, -1.0), 1e-15));

        let uncoupled = detuned_pulse(&PulseParams::new(0.0, 0.0, 2.0).unwrap());
        assert_eq!(uncoupled.b.norm(), 0.0);
        assert!((uncoupled.a.norm() - 1.0).abs() < 1e-15);

        let slight = detuned_pulse(&PulseParams::new(PI, 0.0, 0.001 * PI).unwrap());
        let theta = PI.hypot(0.001 * PI);
        let expected = (PI / theta).powi(2) * (theta / 2.0).sin().powi(2);
        assert!((slight.probability() - expected).abs() < 1e-15);
        assert!(1.0 - slight.probability() < 1e-5);
    }

    #[test]
    fn pulse_params_validation() {
        assert!(PulseParams::new(-1.0, 0.0, 0.0).is_err());
        assert!(PulseParams::new(f64::NAN, 0.0, 0.0).is_err());
        let p = PulseParams::new(1.0, -PI / 2.0, 0.0).unwrap();
        assert!((p.phase - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn composition_examples() {
        let half = resonant_pulse(PI / 2.0, 0.0);
        let full = compose(&[half, half]).unwrap();
        assert!(full.a.norm() < 1e-15);
        assert!(close(full.b, Complex64::new(0.0, -1.0), 1e-15));

        let u = resonant_pulse(1.234, 0.567);
        assert_eq!(compose(&[u, Propagator::identity()]).unwrap(), u);

        // explicit 2x2 product [[0, i],[i, 0]] · [[0, -i],[-i, 0]] = identity
        let echo = compose(&[resonant_pulse(PI, 0.0), resonant_pulse(PI, PI)]).unwrap();
        assert!(close(echo.a, Complex64::new(1.0, 0.0), 1e-15));
        assert!(echo.b.norm() < 1e-15);

        assert_eq!(compose(&[]), Err(Error::EmptySequence));
    }

    #[test]
    fn compose_order_is_right_to_left() {
        let first = resonant_pulse(0.7, 0.2);
        let second = resonant_pulse(1.9, 2.5);
        let m1 = first.matrix();
        let m2 = second.matrix();
        let product = compose(&[first, second]).unwrap().matrix();
        for r in 0..2 {
            for c in 0..2 {
                let expected = m2[r][0] * m1[0][c] + m2[r][1] * m1[1][c];
                assert!(close(product[r][c], expected, 1e-15));
            }
        }
    }

    #[test]
    fn palindrome_layout() {
        let spec = SequenceSpec::new(5, PI, PI).unwrap();
        let list = symmetric_phase_list(&spec, &PhaseVector::new(vec![0.3, 1.1])).unwrap();
        assert_eq!(list, vec![0.0, 0.3, 1.1, 0.3, 0.0]);

        let single = SequenceSpec::new(1, PI, PI).unwrap();
        assert_eq!(
            symmetric_phase_list(&single, &PhaseVector::new(vec![])).unwrap(),
            vec![0.0]
        );

        let n7 = SequenceSpec::new(7, 3.0 * PI / 7.0, PI / 2.0).unwrap();
        let free = PhaseVector::from_units_of_pi(&[0.471, 1.196, 1.315]);
        let list = symmetric_phase_list(&n7, &free).unwrap();
        let expected = [0.0, 0.471, 1.196, 1.315, 1.196, 0.471, 0.0];
        for (got, want) in list.iter().zip(expected) {
            assert!((got - want * PI).abs() < 1e-15);
        }

        assert_eq!(
            symmetric_phase_list(&spec, &PhaseVector::new(vec![0.1])),
            Err(Error::PhaseCountMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn sequence_jet_order_zero_matches_composition() {
        let spec = SequenceSpec::new(7, 3.0 * PI / 7.0, PI / 2.0).unwrap();
        let phases = PhaseVector::from_units_of_pi(&[0.471, 1.196, 1.315]);
        let jet = sequence_jet(&spec, &phases, 1.1, 0).unwrap();
        let list = symmetric_phase_list(&spec, &phases).unwrap();
        let direct = sequence_propagator(&list, 1.1).unwrap();
        assert!(close(jet.value().a, direct.a, 1e-12));
        assert!(close(jet.value().b, direct.b, 1e-12));
    }

    #[test]
    fn n5_flat_bottom_from_published_phases() {
        let spec = SequenceSpec::new(5, PI, PI).unwrap();
        let phases = PhaseVector::from_units_of_pi(&[0.839, 1.420]);
        let jet = sequence_jet(&spec, &phases, 0.0, 4).unwrap();
        assert!(jet.coefficients(0, 0)[2].norm() < 5e-3);
    }
}
