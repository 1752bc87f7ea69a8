//! Excitation and phase profiles of a composite sequence.
//!
//! Spatial scans assume a Gaussian Rabi-frequency profile of full width at
//! half maximum `ξ`: a qubit at distance `r` (in units of `ξ`) sees every pulse
//! area scaled by `g(r) = exp(−4 ln2 r²)`. Radii are reported in units of `ξ`.

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditions::{PhaseVector, SequenceSpec};
use crate::su2::{self, Propagator};
use crate::{wrap_angle, Error, Result};

/// The quantum-information error benchmark used for thresholds.
pub const INFIDELITY_BENCHMARK: f64 = 1e-4;
/// Spatial scans cover `r ∈ [0, MAX_OFFSET]`.
pub const MAX_OFFSET: f64 = 3.0;
/// Grid step of the coarse radius scan, in units of `ξ`.
pub const RADIUS_SCAN_STEP: f64 = 1e-3;
/// Default number of points per profile.
pub const DEFAULT_GRID: usize = 2001;

const BISECTION_TOLERANCE: f64 = 1e-9;
const VANISHING_AMPLITUDE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamModel {
    /// Full width at half maximum of the Rabi frequency.
    pub fwhm_rabi: f64,
}

impl Default for BeamModel {
    fn default() -> Self {
        Self { fwhm_rabi: 1.0 }
    }
}

impl BeamModel {
    pub fn new(fwhm_rabi: f64) -> Result<Self> {
        if !fwhm_rabi.is_finite() || fwhm_rabi <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "beam FWHM must be positive, got {fwhm_rabi}"
            )));
        }
        Ok(Self { fwhm_rabi })
    }

    /// Intensity scales as the square of the Rabi frequency, so its FWHM is `ξ/√2`.
    pub fn intensity_fwhm(&self) -> f64 {
        self.fwhm_rabi / std::f64::consts::SQRT_2
    }

    /// Rabi-frequency fraction at a physical distance from the beam center.
    pub fn rabi_fraction(&self, distance: f64) -> f64 {
        beam_scaling(distance.abs() / self.fwhm_rabi)
    }

    pub fn intensity_fraction(&self, distance: f64) -> f64 {
        self.rabi_fraction(distance).powi(2)
    }
}

/// Unit-peak Gaussian with unit FWHM.
pub fn beam_scaling(offset: f64) -> f64 {
    (-4.0 * LN_2 * offset * offset).exp()
}

/// Inverse of [`beam_scaling`] on `(0, 1]`.
pub fn offset_for_fraction(fraction: f64) -> f64 {
    (-fraction.ln() / (4.0 * LN_2)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanKind {
    /// `p` against offset `r/ξ`.
    Excitation,
    /// `|arg U21 − φ|` against fractional area deviation.
    PhaseDeviation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub kind: ScanKind,
    pub label: String,
    pub abscissa: Vec<f64>,
    pub ordinate: Vec<f64>,
    /// Indices where the ordinate is undefined (stored as NaN).
    pub undefined: Vec<usize>,
}

impl ProfileCurve {
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.abscissa.iter().copied().zip(self.ordinate.iter().copied())
    }
}

/// `n` evenly spaced points from `start` to `end`, inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| start + (end - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn map_points<T: Send, F: Fn(f64) -> T + Sync + Send>(xs: &[f64], f: F) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        xs.par_iter().map(|&x| f(x)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        xs.iter().map(|&x| f(x)).collect()
    }
}

struct Sequence {
    phase_list: Vec<f64>,
    nominal_area: f64,
}

impl Sequence {
    fn new(spec: &SequenceSpec, phases: &PhaseVector) -> Result<Self> {
        Ok(Self {
            phase_list: su2::symmetric_phase_list(spec, phases)?,
            nominal_area: spec.nominal_area(),
        })
    }

    fn propagator(&self, scale: f64) -> Propagator {
        su2::sequence_propagator(&self.phase_list, self.nominal_area * scale).expect("nonempty phase list")
    }

    fn detuned(&self, scale: f64, detuning_area: f64) -> Propagator {
        let areas = vec![self.nominal_area * scale; self.phase_list.len()];
        su2::sequence_propagator_with_areas(&self.phase_list, &areas, detuning_area).expect("matching lengths")
    }

    fn probability(&self, scale: f64) -> f64 {
        self.propagator(scale).probability()
    }

    fn at_offset(&self, offset: f64) -> f64 {
        self.probability(beam_scaling(offset))
    }
}

/// `|U21|²` with every pulse area scaled by `scale`.
pub fn excitation_probability(spec: &SequenceSpec, phases: &PhaseVector, scale: f64) -> Result<f64> {
    if scale.is_nan() || scale < 0.0 {
        return Err(Error::InvalidArgument(format!("area scale must be >= 0, got {scale}")));
    }
    Ok(Sequence::new(spec, phases)?.probability(scale))
}

/// Excitation probability at `points` offsets evenly spread over `[0, max_offset]` (units of `ξ`).
pub fn excitation_profile(
    spec: &SequenceSpec,
    phases: &PhaseVector,
    max_offset: f64,
    points: usize,
) -> Result<ProfileCurve> {
    if max_offset.is_nan() || max_offset < 0.0 {
        return Err(Error::InvalidArgument("maximum offset must be >= 0".into()));
    }
    let seq = Sequence::new(spec, phases)?;
    let offsets = linspace(0.0, max_offset, points);
    let ordinate = map_points(&offsets, |r| seq.at_offset(r));
    Ok(ProfileCurve {
        kind: ScanKind::Excitation,
        label: "p".into(),
        abscissa: offsets,
        ordinate,
        undefined: Vec::new(),
    })
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in (0, 1), got {threshold}"
        )));
    }
    Ok(())
}

fn radius_grid() -> Vec<f64> {
    let steps = (MAX_OFFSET / RADIUS_SCAN_STEP).round() as usize;
    linspace(0.0, MAX_OFFSET, steps + 1)
}

/// Bisects for the crossing of `f` between `lo` (where `above(lo)`) and `hi` (where `!above(hi)`).
fn bisect(mut lo: f64, mut hi: f64, above: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest offset beyond which the excitation stays at or below `threshold`,
/// in the units of `beam.fwhm_rabi` (units of `ξ` for the default beam).
pub fn crosstalk_radius(spec: &SequenceSpec, phases: &PhaseVector, beam: &BeamModel, threshold: f64) -> Result<f64> {
    Ok(crosstalk_radius_xi(spec, phases, threshold)? * beam.fwhm_rabi)
}

fn crosstalk_radius_xi(spec: &SequenceSpec, phases: &PhaseVector, threshold: f64) -> Result<f64> {
    check_threshold(threshold)?;
    let seq = Sequence::new(spec, phases)?;
    let grid = radius_grid();
    let p = map_points(&grid, |r| seq.at_offset(r));
    let Some(last_above) = p.iter().rposition(|&v| v > threshold) else {
        return Ok(0.0);
    };
    if last_above + 1 == grid.len() {
        return Err(Error::NoCrosstalkRadius {
            threshold,
            max_offset: MAX_OFFSET,
        });
    }
    Ok(bisect(grid[last_above], grid[last_above + 1], |r| {
        seq.at_offset(r) > threshold
    }))
}

/// Largest offset up to which `|p0 − p|` stays within `threshold`, with `p0 = sin²(𝒜/2)`,
/// in the units of `beam.fwhm_rabi`.
pub fn robustness_radius(spec: &SequenceSpec, phases: &PhaseVector, beam: &BeamModel, threshold: f64) -> Result<f64> {
    Ok(robustness_radius_xi(spec, phases, threshold)? * beam.fwhm_rabi)
}

fn robustness_radius_xi(spec: &SequenceSpec, phases: &PhaseVector, threshold: f64) -> Result<f64> {
    check_threshold(threshold)?;
    let seq = Sequence::new(spec, phases)?;
    let p0 = spec.target_probability();
    let deviation = |r: f64| (p0 - seq.at_offset(r)).abs();
    let center = deviation(0.0);
    if center > threshold {
        return Err(Error::RobustnessViolatedAtCenter { deviation: center });
    }
    let grid = radius_grid();
    let dev = map_points(&grid, deviation);
    match dev.iter().position(|&v| v > threshold) {
        None => Ok(MAX_OFFSET),
        Some(first) => Ok(bisect(grid[first - 1], grid[first], |r| deviation(r) <= threshold)),
    }
}

/// Area-scale range of a phase scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl ScaleRange {
    /// Symmetric range `1 ± half_width`.
    pub fn around_nominal(half_width: f64, points: usize) -> Self {
        Self {
            min: 1.0 - half_width,
            max: 1.0 + half_width,
            points,
        }
    }
}

/// `|arg U21 − φ|` (wrapped) at one area scale; `None` where `U21` vanishes.
pub fn phase_deviation(
    spec: &SequenceSpec,
    phases: &PhaseVector,
    scale: f64,
    detuning_area: f64,
) -> Result<Option<f64>> {
    let target = spec
        .target_phase()
        .ok_or_else(|| Error::InvalidArgument("phase scans need a spec with a target phase".into()))?;
    let seq = Sequence::new(spec, phases)?;
    Ok(deviation_of(&seq.detuned(scale, detuning_area), target))
}

fn deviation_of(u: &Propagator, target: f64) -> Option<f64> {
    let u21 = u.u21();
    (u21.norm() >= VANISHING_AMPLITUDE).then(|| wrap_angle(u21.arg() - target).abs())
}

/// Phase deviation against fractional area deviation `scale − 1`.
///
/// A nonzero `detuning_area` applies the same `Δ·T` to every pulse, with no
/// free evolution between pulses.
pub fn phase_deviation_scan(
    spec: &SequenceSpec,
    phases: &PhaseVector,
    range: ScaleRange,
    detuning_area: f64,
) -> Result<ProfileCurve> {
    let target = spec
        .target_phase()
        .ok_or_else(|| Error::InvalidArgument("phase scans need a spec with a target phase".into()))?;
    if range.min.is_nan() || range.max.is_nan() || range.min < 0.0 || range.max < range.min {
        return Err(Error::InvalidArgument(format!(
            "invalid scale range [{}, {}]",
            range.min, range.max
        )));
    }
    let seq = Sequence::new(spec, phases)?;
    let scales = linspace(range.min, range.max, range.points);
    let values = map_points(&scales, |s| deviation_of(&seq.detuned(s, detuning_area), target));
    let undefined = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.is_none().then_some(i))
        .collect();
    Ok(ProfileCurve {
        kind: ScanKind::PhaseDeviation,
        label: if detuning_area == 0.0 {
            "phase deviation".into()
        } else {
            format!("phase deviation (detuning {detuning_area})")
        },
        abscissa: scales.iter().map(|s| s - 1.0).collect(),
        ordinate: values.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect(),
        undefined,
    })
}

/// Largest `w ≤ max_half_width` such that the phase deviation stays at or
/// below `threshold` for every area deviation in `[−w, w]`.
pub fn phase_robust_half_width(
    spec: &SequenceSpec,
    phases: &PhaseVector,
    threshold: f64,
    max_half_width: f64,
    detuning_area: f64,
) -> Result<f64> {
    let target = spec
        .target_phase()
        .ok_or_else(|| Error::InvalidArgument("phase scans need a spec with a target phase".into()))?;
    if threshold.is_nan() || threshold <= 0.0 || !(0.0..1.0).contains(&max_half_width) || max_half_width == 0.0 {
        return Err(Error::InvalidArgument(
            "threshold and half width must be positive, half width below 1".into(),
        ));
    }
    let seq = Sequence::new(spec, phases)?;
    let within = |d: f64| deviation_of(&seq.detuned(1.0 + d, detuning_area), target).is_some_and(|v| v <= threshold);
    if !within(0.0) {
        return Ok(0.0);
    }
    let steps = (max_half_width / RADIUS_SCAN_STEP).ceil() as usize;
    let grid = linspace(0.0, max_half_width, steps + 1);
    let side = |sign: f64| {
        let ok = map_points(&grid, |d| within(sign * d));
        match ok.iter().position(|&v| !v) {
            None => max_half_width,
            Some(i) => bisect(grid[i - 1], grid[i], |d| within(sign * d)),
        }
    };
    Ok(side(1.0).min(side(-1.0)))
}

/// Gate infidelity `1 − |Tr(U_target† U)/2|²`.
pub fn trace_infidelity(target: &Propagator, actual: &Propagator) -> f64 {
    let overlap = target.adjoint() * *actual;
    // Tr of a Cayley–Klein matrix is a + a* = 2 Re a
    1.0 - overlap.a.re.powi(2)
}

/// `R_z(δ) = diag(e^{−iδ/2}, e^{iδ/2})`.
pub fn z_rotation(angle: f64) -> Propagator {
    Propagator::new(
        num_complex::Complex64::from_polar(1.0, -angle / 2.0),
        num_complex::Complex64::new(0.0, 0.0),
    )
}

/// Infidelity of a phase error `δ`, modelled as a spurious `R_z(δ)` after the target gate:
/// `1 − |Tr(U† R_z(δ) U)/2|² = sin²(δ/2)` for any target `U`.
pub fn phase_error_infidelity(target: &Propagator, delta: f64) -> f64 {
    trace_infidelity(target, &(z_rotation(delta) * *target))
}

/// Phase error at which [`phase_error_infidelity`] reaches `infidelity`: `2·asin(√infidelity)`.
pub fn infidelity_threshold_phase_for(infidelity: f64) -> f64 {
    2.0 * infidelity.clamp(0.0, 1.0).sqrt().asin()
}

/// Phase-error threshold of the `1e-4` benchmark (≈ 0.02 rad).
pub fn infidelity_threshold_phase() -> f64 {
    infidelity_threshold_phase_for(INFIDELITY_BENCHMARK)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseStats {
    pub trials: usize,
    pub rms: f64,
    pub mean: f64,
    pub max: f64,
}

/// Monte Carlo over independent per-pulse area multipliers uniform in
/// `[1 − a, 1 + a]`. Trial `i` draws from ChaCha stream `i` of `rng_seed`.
pub fn noise_phase_error(
    spec: &SequenceSpec,
    phases: &PhaseVector,
    relative_amplitude: f64,
    trials: usize,
    rng_seed: u64,
) -> Result<NoiseStats> {
    let target = spec
        .target_phase()
        .ok_or_else(|| Error::InvalidArgument("noise runs need a spec with a target phase".into()))?;
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if !(0.0..=1.0).contains(&relative_amplitude) {
        return Err(Error::InvalidArgument(format!(
            "relative amplitude must lie in [0, 1], got {relative_amplitude}"
        )));
    }
    let seq = Sequence::new(spec, phases)?;
    let pulses = seq.phase_list.len();

    let trial = |index: usize| -> std::result::Result<f64, f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(index as u64);
        let areas: Vec<f64> = (0..pulses)
            .map(|_| {
                let m = if relative_amplitude > 0.0 {
                    rng.gen_range(1.0 - relative_amplitude..=1.0 + relative_amplitude)
                } else {
                    1.0
                };
                seq.nominal_area * m
            })
            .collect();
        let u = su2::sequence_propagator_with_areas(&seq.phase_list, &areas, 0.0).expect("matching lengths");
        deviation_of(&u, target).ok_or(areas[0] / seq.nominal_area)
    };

    let indices: Vec<usize> = (0..trials).collect();
    #[cfg(feature = "parallel")]
    let errors: Vec<std::result::Result<f64, f64>> = {
        use rayon::prelude::*;
        indices.par_iter().map(|&i| trial(i)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let errors: Vec<std::result::Result<f64, f64>> = indices.iter().map(|&i| trial(i)).collect();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut max = 0.0f64;
    for e in errors {
        let e = e.map_err(|scale| Error::UndefinedPhase { scale })?;
        sum += e;
        sum_sq += e * e;
        max = max.max(e);
    }
    let n = trials as f64;
    Ok(NoiseStats {
        trials,
        rms: (sum_sq / n).sqrt(),
        mean: sum / n,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single_pi() -> (SequenceSpec, PhaseVector) {
        (SequenceSpec::new(1, PI, PI).unwrap(), PhaseVector::default())
    }

    fn n5() -> (SequenceSpec, PhaseVector) {
        (
            SequenceSpec::new(5, PI, PI).unwrap().with_flat_bottom(2),
            PhaseVector::from_units_of_pi(&[0.839, 1.420]),
        )
    }

    #[test]
    fn beam_scaling_values() {
        assert_eq!(beam_scaling(0.0), 1.0);
        assert!((beam_scaling(0.5) - 0.5).abs() < 1e-15);
        assert!((beam_scaling(0.83) - 0.148).abs() < 1e-3);
        assert!((offset_for_fraction(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn beam_model_mapping() {
        let beam = BeamModel::new(2.0).unwrap();
        // intensity halves at ξ/(2√2) from the center
        let half = beam.intensity_fwhm() / 2.0;
        assert!((beam.intensity_fraction(half) - 0.5).abs() < 1e-14);
        assert!((beam.rabi_fraction(1.0) - 0.5).abs() < 1e-15);
        assert!(BeamModel::new(0.0).is_err());
    }

    #[test]
    fn probability_examples() {
        let (spec, phases) = single_pi();
        assert!((excitation_probability(&spec, &phases, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let (spec, phases) = n5();
        assert_eq!(excitation_probability(&spec, &phases, 0.0).unwrap(), 0.0);
        assert!((excitation_probability(&spec, &phases, 1.0).unwrap() - 1.0).abs() < 1e-4);
        assert!(excitation_probability(&spec, &phases, -0.1).is_err());
    }

    #[test]
    fn single_pulse_crosstalk_matches_closed_form() {
        let (spec, phases) = single_pi();
        let r = crosstalk_radius(&spec, &phases, &BeamModel::default(), 1e-4).unwrap();
        let g = 2.0 / PI * 1e-2f64.asin();
        let expected = offset_for_fraction(g);
        assert!((r - expected).abs() < 1e-8, "{r} vs {expected}");
        assert!((r - 1.35).abs() < 0.005);
    }

    #[test]
    fn single_pulse_robustness() {
        let (spec, phases) = single_pi();
        let r = robustness_radius(&spec, &phases, &BeamModel::default(), 1e-4).unwrap();
        // cos²(π g/2) = 1e-4
        let g = 1.0 - 2.0 / PI * 1e-2f64.asin();
        assert!((r - offset_for_fraction(g)).abs() < 1e-8);
        assert!((r - 0.05).abs() < 0.005);
    }

    #[test]
    fn n5_crosstalk() {
        let (spec, phases) = n5();
        let r = crosstalk_radius(&spec, &phases, &BeamModel::default(), 1e-4).unwrap();
        assert!((r - 0.83).abs() < 0.02, "{r}");
    }

    #[test]
    fn radii_scale_with_beam_width() {
        let (spec, phases) = n5();
        let unit = crosstalk_radius(&spec, &phases, &BeamModel::default(), 1e-4).unwrap();
        let wide = crosstalk_radius(&spec, &phases, &BeamModel::new(2.5).unwrap(), 1e-4).unwrap();
        assert!((wide - 2.5 * unit).abs() < 1e-12);
    }

    #[test]
    fn radius_errors() {
        let (spec, phases) = single_pi();
        assert!(crosstalk_radius(&spec, &phases, &BeamModel::default(), 0.0).is_err());
        assert!(matches!(
            crosstalk_radius(&spec, &phases, &BeamModel::default(), 1e-30),
            Err(Error::NoCrosstalkRadius { .. })
        ));
        // a π/2 pulse misses p0 = 1 at the center
        let half = SequenceSpec::new(1, PI / 2.0, PI).unwrap();
        assert!(matches!(
            robustness_radius(&half, &phases, &BeamModel::default(), 1e-4),
            Err(Error::RobustnessViolatedAtCenter { .. })
        ));
    }

    #[test]
    fn threshold_phase_is_self_consistent() {
        assert_eq!(infidelity_threshold_phase_for(0.0), 0.0);
        let delta = infidelity_threshold_phase();
        assert!((delta - 0.02).abs() < 1e-5, "{delta}");
        for target in [Propagator::resonant(PI, 1.5 * PI), Propagator::resonant(0.7, 0.3)] {
            assert!((phase_error_infidelity(&target, delta) - 1e-4).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_scan_requires_target() {
        let (spec, phases) = n5();
        assert!(phase_deviation_scan(&spec, &phases, ScaleRange::around_nominal(0.1, 11), 0.0).is_err());
    }

    #[test]
    fn single_pulse_phase_is_area_independent() {
        let spec = SequenceSpec::new(1, PI, PI).unwrap().with_target_phase(1.5 * PI);
        let stats = noise_phase_error(&spec, &PhaseVector::default(), 0.05, 500, 3).unwrap();
        assert!(stats.max < 1e-12);
    }

    #[test]
    fn vanishing_u21_is_flagged() {
        let spec = SequenceSpec::new(1, PI, PI).unwrap().with_target_phase(1.5 * PI);
        let curve = phase_deviation_scan(
            &spec,
            &PhaseVector::default(),
            ScaleRange {
                min: 0.0,
                max: 1.0,
                points: 3,
            },
            0.0,
        )
        .unwrap();
        assert_eq!(curve.undefined, vec![0]);
        assert!(curve.ordinate[0].is_nan());
        assert!(curve.ordinate[2] < 1e-12);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let spec = SequenceSpec::new(7, PI, PI)
            .unwrap()
            .with_flat_bottom(2)
            .with_target_phase(1.5 * PI);
        let phases = PhaseVector::from_units_of_pi(&[1.256, 0.792, 0.072]);
        let a = noise_phase_error(&spec, &phases, 0.05, 200, 11).unwrap();
        let b = noise_phase_error(&spec, &phases, 0.05, 200, 11).unwrap();
        let c = noise_phase_error(&spec, &phases, 0.05, 200, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        let exact = noise_phase_error(&spec, &phases, 0.0, 5, 11).unwrap();
        assert_eq!(exact.rms, exact.max);
        assert!(exact.max <= 5e-3 * PI);
    }
}
