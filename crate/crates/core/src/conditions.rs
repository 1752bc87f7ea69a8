//! Condition systems for symmetric composite sequences.
//!
//! A [`SequenceSpec`] selects which constraints a phase vector must satisfy;
//! [`build_conditions`] turns it into an ordered list of real residual
//! equations:
//!
//! 1. rotation: `U11(s*) = cos(𝒜/2)` at the nominal per-pulse area `s*`;
//! 2. flat bottom: `∂ᵏU11(0) = 0` for `k = 2, 4, …, 2·n1`;
//! 3. flat top: `∂ᵏU11(s*) = 0` for `k = 1, …, n2`;
//! 4. target phase: `arg U21(s*) = φ`;
//! 5. phase stabilization for `k = 1, …, n3` (see [`Eq7Variant`]).
//!
//! When both `𝒜` and `s*` equal π, the sequence propagator satisfies
//! `U(2π − s) = −σz U(s) σz` up to the sign `(−1)^N`, so `U11` is odd and `U21`
//! is even around π. The rotation condition, even-order flat-top conditions
//! and odd-order phase conditions then hold identically and are omitted.
//!
//! Derivative residuals are Taylor coefficients (`∂ᵏ/k!`), which keeps all
//! equations of order one even for sequences of twenty pulses.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::su2::{palindrome, phase_list_jet, Jet};
use crate::{reduce_angle, wrap_angle, Error, Result};

/// Tolerance used to decide whether an angle equals π.
const ANGLE_EPS: f64 = 1e-12;

/// Step of the central differences in [`jacobian`].
pub const JACOBIAN_STEP: f64 = 1e-6;

/// How the phase-stabilization condition on `∂ᵏU21` is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Eq7Variant {
    /// The k-th coefficient of `U21` has no component along `e^{iφ}`.
    #[default]
    Quadrature,
    /// The k-th coefficient of `U21` is parallel (or antiparallel) to `e^{iφ}`.
    Parallel,
    /// The k-th derivative of `arg U21` vanishes.
    ArgDerivative,
}

impl Eq7Variant {
    pub const ALL: [Eq7Variant; 3] = [Eq7Variant::Quadrature, Eq7Variant::Parallel, Eq7Variant::ArgDerivative];

    pub fn name(self) -> &'static str {
        match self {
            Eq7Variant::Quadrature => "quadrature",
            Eq7Variant::Parallel => "parallel",
            Eq7Variant::ArgDerivative => "arg-derivative",
        }
    }
}

impl fmt::Display for Eq7Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Eq7Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Eq7Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown phase-derivative variant '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    Narrowband,
    Passband,
    PhasedNarrowband,
    PhasedPassband,
}

/// A composite sequence design problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pulse_count: usize,
    nominal_area: f64,
    target_area: f64,
    target_phase: Option<f64>,
    n1: usize,
    n2: usize,
    n3: usize,
    eq7_variant: Eq7Variant,
}

impl SequenceSpec {
    /// A spec with no conditions; add them with the `with_*` builders.
    pub fn new(pulse_count: usize, nominal_area: f64, target_area: f64) -> Result<Self> {
        let spec = Self {
            pulse_count,
            nominal_area,
            target_area,
            target_phase: None,
            n1: 0,
            n2: 0,
            n3: 0,
            eq7_variant: Eq7Variant::default(),
        };
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn with_flat_bottom(mut self, n1: usize) -> Self {
        self.n1 = n1;
        self
    }

    pub fn with_flat_top(mut self, n2: usize) -> Self {
        self.n2 = n2;
        self
    }

    pub fn with_target_phase(mut self, phase: f64) -> Self {
        self.target_phase = Some(reduce_angle(phase));
        self
    }

    pub fn with_phase_stabilization(mut self, n3: usize) -> Self {
        self.n3 = n3;
        self
    }

    pub fn with_eq7_variant(mut self, variant: Eq7Variant) -> Self {
        self.eq7_variant = variant;
        self
    }

    fn check_shape(&self) -> Result<()> {
        if self.pulse_count == 0 || self.pulse_count.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "pulse count must be odd and positive, got {}",
                self.pulse_count
            )));
        }
        if !self.nominal_area.is_finite() || self.nominal_area <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "nominal area must be finite and positive, got {}",
                self.nominal_area
            )));
        }
        if !self.target_area.is_finite() {
            return Err(Error::InvalidSpec("target area must be finite".into()));
        }
        if let Some(phi) = self.target_phase {
            if !phi.is_finite() {
                return Err(Error::InvalidSpec("target phase must be finite".into()));
            }
        }
        Ok(())
    }

    /// Full validation, including the condition orders.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        if self.n3 > 0 && self.target_phase.is_none() {
            return Err(Error::StabilizationWithoutTargetPhase { n3: self.n3 });
        }
        Ok(())
    }

    pub fn pulse_count(&self) -> usize {
        self.pulse_count
    }

    /// `n = (N − 1)/2`.
    pub fn free_phase_count(&self) -> usize {
        (self.pulse_count - 1) / 2
    }

    pub fn nominal_area(&self) -> f64 {
        self.nominal_area
    }

    pub fn target_area(&self) -> f64 {
        self.target_area
    }

    pub fn target_phase(&self) -> Option<f64> {
        self.target_phase
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    pub fn eq7_variant(&self) -> Eq7Variant {
        self.eq7_variant
    }

    pub fn kind(&self) -> SequenceKind {
        match (self.target_phase.is_some(), self.n2 > 0 || self.n3 > 0) {
            (false, false) => SequenceKind::Narrowband,
            (false, true) => SequenceKind::Passband,
            (true, false) => SequenceKind::PhasedNarrowband,
            (true, true) => SequenceKind::PhasedPassband,
        }
    }

    /// Target transition probability at the beam center, `sin²(𝒜/2)`.
    pub fn target_probability(&self) -> f64 {
        (self.target_area / 2.0).sin().powi(2)
    }

    /// Whether `𝒜 = s* = π`, where the parity identities apply.
    pub fn is_pi_parity(&self) -> bool {
        (self.target_area - PI).abs() < ANGLE_EPS && (self.nominal_area - PI).abs() < ANGLE_EPS
    }

    /// Whether the system is invariant under `φ → −φ` of all free phases.
    ///
    /// Mirroring maps `U21 → −conj(U21)`, so a target phase `φ` becomes `π − φ`;
    /// only `φ = π/2` and `φ = 3π/2` are fixed points.
    pub fn is_mirror_symmetric(&self) -> bool {
        match self.target_phase {
            None => true,
            Some(phi) => wrap_angle(2.0 * phi - PI).abs() < ANGLE_EPS,
        }
    }
}

/// The `n` free phases `φ2 … φ_{n+1}`, each in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseVector(Vec<f64>);

impl PhaseVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values.into_iter().map(reduce_angle).collect())
    }

    pub fn from_units_of_pi(values: &[f64]) -> Self {
        Self::new(values.iter().map(|v| v * PI).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_units_of_pi(&self) -> Vec<f64> {
        self.0.iter().map(|v| v / PI).collect()
    }

    /// `−φ mod 2π`, componentwise.
    pub fn mirrored(&self) -> Self {
        Self::new(self.0.iter().map(|v| -v).collect())
    }

    /// Largest componentwise circular distance.
    pub fn circular_distance(&self, other: &PhaseVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(x, y)| wrap_angle(x - y).abs())
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for PhaseVector {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationKind {
    /// `U11(s*) − cos(𝒜/2)`.
    TargetAmplitude,
    /// Taylor coefficient of `U11` at zero area.
    BottomDerivative,
    /// Taylor coefficient of `U11` at the operating area.
    TopDerivative,
    /// `arg U21(s*) − φ`, wrapped to `(−π, π]`.
    TargetPhase,
    PhaseDerivative(Eq7Variant),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equation {
    pub kind: EquationKind,
    pub evaluation_point: f64,
    pub derivative_order: usize,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EquationKind::TargetAmplitude => write!(f, "rotation"),
            EquationKind::BottomDerivative => write!(f, "flat-bottom k={}", self.derivative_order),
            EquationKind::TopDerivative => write!(f, "flat-top k={}", self.derivative_order),
            EquationKind::TargetPhase => write!(f, "target-phase"),
            EquationKind::PhaseDerivative(v) => write!(f, "phase-{v} k={}", self.derivative_order),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Determinacy {
    Square,
    Overdetermined,
    Underdetermined,
}

/// Ordered residual equations for one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSet {
    equations: Vec<Equation>,
    unknowns: usize,
    nominal_area: f64,
    target_amplitude: f64,
    target_phase: Option<f64>,
    numerically_trivial: Vec<Equation>,
}

impl ConditionSet {
    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Number of free phases.
    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn determinacy(&self) -> Determinacy {
        use std::cmp::Ordering::*;
        match self.len().cmp(&self.unknowns) {
            Equal => Determinacy::Square,
            Greater => Determinacy::Overdetermined,
            Less => Determinacy::Underdetermined,
        }
    }

    /// Equations dropped because they vanished with zero gradient at every probe point.
    pub fn numerically_trivial(&self) -> &[Equation] {
        &self.numerically_trivial
    }

    /// Residuals, one per equation, in order.
    pub fn evaluate(&self, phases: &PhaseVector) -> Result<Vec<f64>> {
        self.check_len(phases.len())?;
        Ok(self.evaluate_raw(&self.equations, phases.as_slice()))
    }

    /// Central-difference Jacobian (equations × unknowns).
    pub fn jacobian(&self, phases: &PhaseVector, step: f64) -> Result<DMatrix<f64>> {
        self.check_len(phases.len())?;
        Ok(self.jacobian_raw(phases.as_slice(), step))
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.unknowns {
            return Err(Error::PhaseCountMismatch {
                expected: self.unknowns,
                found,
            });
        }
        Ok(())
    }

    pub(crate) fn residuals_raw(&self, free: &[f64]) -> Vec<f64> {
        self.evaluate_raw(&self.equations, free)
    }

    pub(crate) fn jacobian_raw(&self, free: &[f64], step: f64) -> DMatrix<f64> {
        let m = self.len();
        let n = self.unknowns;
        let mut jac = DMatrix::zeros(m, n);
        let mut x = free.to_vec();
        for j in 0..n {
            let x0 = x[j];
            x[j] = x0 + step;
            let plus = self.residuals_raw(&x);
            x[j] = x0 - step;
            let minus = self.residuals_raw(&x);
            x[j] = x0;
            for i in 0..m {
                jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * step);
            }
        }
        jac
    }

    fn evaluate_raw(&self, equations: &[Equation], free: &[f64]) -> Vec<f64> {
        if equations.is_empty() {
            return Vec::new();
        }
        let list = palindrome(free);
        let bottom_order = equations
            .iter()
            .filter(|e| e.kind == EquationKind::BottomDerivative)
            .map(|e| e.derivative_order)
            .max();
        let top_order = equations
            .iter()
            .filter(|e| e.kind != EquationKind::BottomDerivative)
            .map(|e| e.derivative_order)
            .max();
        let bottom = bottom_order.map(|k| phase_list_jet(&list, 0.0, k));
        let top = top_order.map(|k| phase_list_jet(&list, self.nominal_area, k));

        equations
            .iter()
            .map(|eq| {
                let k = eq.derivative_order;
                match eq.kind {
                    EquationKind::TargetAmplitude => {
                        top.as_ref().expect("operating-point jet").coefficients(0, 0)[0].re - self.target_amplitude
                    }
                    EquationKind::BottomDerivative => bottom.as_ref().expect("zero-area jet").coefficients(0, 0)[k].re,
                    EquationKind::TopDerivative => top.as_ref().expect("operating-point jet").coefficients(0, 0)[k].re,
                    EquationKind::TargetPhase => {
                        let u21 = top.as_ref().expect("operating-point jet").coefficients(1, 0)[0];
                        wrap_angle(u21.arg() - self.target_phase.unwrap_or(0.0))
                    }
                    EquationKind::PhaseDerivative(variant) => {
                        let jet = top.as_ref().expect("operating-point jet");
                        phase_derivative_residual(jet, k, self.target_phase.unwrap_or(0.0), variant)
                    }
                }
            })
            .collect()
    }
}

fn phase_derivative_residual(jet: &Jet, k: usize, target_phase: f64, variant: Eq7Variant) -> f64 {
    let u21 = jet.coefficients(1, 0);
    let rotated = u21[k] * Complex64::from_polar(1.0, -target_phase);
    match variant {
        Eq7Variant::Quadrature => rotated.re,
        Eq7Variant::Parallel => rotated.im,
        Eq7Variant::ArgDerivative => log_series(&u21[..=k])[k].im,
    }
}

/// Taylor coefficients of `log f` from those of `f` (`f(0) ≠ 0`), dropping the constant term.
fn log_series(f: &[Complex64]) -> Vec<Complex64> {
    let q: Vec<Complex64> = f.iter().map(|c| c / f[0]).collect();
    let mut log = vec![Complex64::new(0.0, 0.0); f.len()];
    // (log q)' = q'/q  =>  m L_m = m q_m − Σ_{j=1}^{m−1} j L_j q_{m−j}
    for m in 1..f.len() {
        let mut acc = q[m] * m as f64;
        for j in 1..m {
            acc -= log[j] * q[m - j] * j as f64;
        }
        log[m] = acc / m as f64;
    }
    log
}

/// Builds the ordered condition set of a spec.
pub fn build_conditions(spec: &SequenceSpec) -> Result<ConditionSet> {
    spec.validate()?;
    let parity = spec.is_pi_parity();
    let s_star = spec.nominal_area();
    let mut equations = Vec::new();

    if !parity {
        equations.push(Equation {
            kind: EquationKind::TargetAmplitude,
            evaluation_point: s_star,
            derivative_order: 0,
        });
    }
    for k in (2..=2 * spec.n1()).step_by(2) {
        equations.push(Equation {
            kind: EquationKind::BottomDerivative,
            evaluation_point: 0.0,
            derivative_order: k,
        });
    }
    for k in 1..=spec.n2() {
        if parity && k % 2 == 0 {
            continue;
        }
        equations.push(Equation {
            kind: EquationKind::TopDerivative,
            evaluation_point: s_star,
            derivative_order: k,
        });
    }
    if spec.target_phase().is_some() {
        equations.push(Equation {
            kind: EquationKind::TargetPhase,
            evaluation_point: s_star,
            derivative_order: 0,
        });
        for k in 1..=spec.n3() {
            if parity && k % 2 == 1 {
                continue;
            }
            equations.push(Equation {
                kind: EquationKind::PhaseDerivative(spec.eq7_variant()),
                evaluation_point: s_star,
                derivative_order: k,
            });
        }
    }

    let mut set = ConditionSet {
        equations,
        unknowns: spec.free_phase_count(),
        nominal_area: s_star,
        target_amplitude: (spec.target_area() / 2.0).cos(),
        target_phase: spec.target_phase(),
        numerically_trivial: Vec::new(),
    };
    set.drop_numerically_trivial();
    Ok(set)
}

const TRIVIAL_PROBES: usize = 3;
const TRIVIAL_TOLERANCE: f64 = 1e-12;
const TRIVIAL_STEP: f64 = 1e-3;

impl ConditionSet {
    /// Drops equations whose value and phase gradient stay below
    /// [`TRIVIAL_TOLERANCE`] at a few fixed pseudo-random phase vectors.
    fn drop_numerically_trivial(&mut self) {
        if self.unknowns == 0 || self.equations.is_empty() {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x7269_7669_616c);
        let probes: Vec<Vec<f64>> = (0..TRIVIAL_PROBES)
            .map(|_| {
                (0..self.unknowns)
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect()
            })
            .collect();
        let mut trivial = vec![true; self.equations.len()];
        for x in &probes {
            let value = self.residuals_raw(x);
            let jac = self.jacobian_raw(x, TRIVIAL_STEP);
            for (i, flag) in trivial.iter_mut().enumerate() {
                let grad_max = jac.row(i).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if value[i].abs() >= TRIVIAL_TOLERANCE || grad_max >= TRIVIAL_TOLERANCE {
                    *flag = false;
                }
            }
        }
        let (kept, dropped): (Vec<_>, Vec<_>) = self.equations.iter().zip(&trivial).partition(|(_, &t)| !t);
        self.numerically_trivial = dropped.into_iter().map(|(e, _)| *e).collect();
        self.equations = kept.into_iter().map(|(e, _)| *e).collect();
    }
}

pub fn residuals(spec: &SequenceSpec, phases: &PhaseVector) -> Result<Vec<f64>> {
    build_conditions(spec)?.evaluate(phases)
}

/// Jacobian of [`residuals`] by central differences with step [`JACOBIAN_STEP`].
pub fn jacobian(spec: &SequenceSpec, phases: &PhaseVector) -> Result<DMatrix<f64>> {
    build_conditions(spec)?.jacobian(phases, JACOBIAN_STEP)
}

/// Numerical rank: singular values above `tolerance` times the largest one.
pub fn matrix_rank(matrix: &DMatrix<f64>, tolerance: f64) -> usize {
    if matrix.nrows() == 0 || matrix.ncols() == 0 {
        return 0;
    }
    let singular = matrix.clone().svd(false, false).singular_values;
    let cutoff = tolerance * singular.max();
    singular.iter().filter(|&&s| s > cutoff).count()
}
