//! Browser bindings for the interactive demo page in `www/`.
//!
//! Angles cross the boundary in units of π, matching the catalog.

use std::f64::consts::PI;

use composite_pulses::catalog;
use composite_pulses::profiles::{self, BeamModel, ScaleRange};
use composite_pulses::solver::{self, SolveOptions};
use composite_pulses::{PhaseVector, Result, SequenceSpec};
use wasm_bindgen::prelude::*;

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

fn catalog_names_impl() -> String {
    catalog::load_catalog()
        .iter()
        .map(|e| e.name.as_str())
        .collect::<Vec<_>>()
        .join("\n")
}

fn describe_impl(name: &str) -> Result<String> {
    let e = catalog::find(name)?;
    let s = &e.spec;
    let mut text = format!(
        "{}: N = {}, A = {:.4}π, target {:.4}π",
        e.name,
        s.pulse_count(),
        s.nominal_area() / PI,
        s.target_area() / PI
    );
    if let Some(phi) = s.target_phase() {
        text.push_str(&format!(", phase {:.4}π", phi / PI));
    }
    text.push_str(&format!(
        ", n1 = {}, n2 = {}, n3 = {}; phases/π = ({})",
        s.n1(),
        s.n2(),
        s.n3(),
        e.printed_phases
            .iter()
            .map(|p| format!("{p:.3}"))
            .collect::<Vec<_>>()
            .join("; ")
    ));
    Ok(text)
}

fn profile_of(spec: &SequenceSpec, phases: &PhaseVector, max_offset: f64, points: usize) -> Result<Vec<f64>> {
    Ok(profiles::excitation_profile(spec, phases, max_offset, points)?.ordinate)
}

fn radii_of(spec: &SequenceSpec, phases: &PhaseVector, threshold: f64) -> Vec<f64> {
    let beam = BeamModel::default();
    vec![
        profiles::crosstalk_radius(spec, phases, &beam, threshold).unwrap_or(f64::NAN),
        profiles::robustness_radius(spec, phases, &beam, threshold).unwrap_or(f64::NAN),
    ]
}

fn inline_spec(pulses: usize, area_pi: f64, target_pi: f64, n1: usize, n2: usize) -> Result<SequenceSpec> {
    let spec = SequenceSpec::new(pulses, area_pi * PI, target_pi * PI)?
        .with_flat_bottom(n1)
        .with_flat_top(n2);
    spec.validate()?;
    Ok(spec)
}

fn solve_impl(
    pulses: usize,
    area_pi: f64,
    target_pi: f64,
    n1: usize,
    n2: usize,
    starts: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let spec = inline_spec(pulses, area_pi, target_pi, n1, n2)?;
    let options = SolveOptions {
        max_starts: starts,
        rng_seed: seed,
        ..SolveOptions::default()
    };
    let solutions = solver::solve(&spec, &options)?;
    let mut out = vec![solutions.len() as f64];
    for s in &solutions {
        out.push(s.residual_norm);
        out.extend(s.phases.to_units_of_pi());
    }
    Ok(out)
}

/// Catalog entry names, one per line.
#[wasm_bindgen(js_name = catalogNames)]
pub fn catalog_names() -> String {
    catalog_names_impl()
}

/// One-line summary of a catalog entry.
#[wasm_bindgen]
pub fn describe(name: &str) -> std::result::Result<String, JsError> {
    js(describe_impl(name))
}

/// Excitation probability at `points` offsets evenly spread over `[0, max_offset]` (units of ξ).
#[wasm_bindgen(js_name = excitationProfile)]
pub fn excitation_profile(name: &str, max_offset: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    let e = js(catalog::find(name))?;
    js(profile_of(&e.spec, &e.published_phases, max_offset, points))
}

/// Excitation profile of an inline sequence with phases given in units of π.
#[wasm_bindgen(js_name = inlineProfile)]
pub fn inline_profile(
    pulses: usize,
    area_pi: f64,
    target_pi: f64,
    phases_pi: Vec<f64>,
    max_offset: f64,
    points: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    let spec = js(SequenceSpec::new(pulses, area_pi * PI, target_pi * PI))?;
    js(profile_of(
        &spec,
        &PhaseVector::from_units_of_pi(&phases_pi),
        max_offset,
        points,
    ))
}

/// `[crosstalk radius, robustness radius]` in units of ξ; NaN where undefined.
#[wasm_bindgen]
pub fn radii(name: &str, threshold: f64) -> std::result::Result<Vec<f64>, JsError> {
    let e = js(catalog::find(name))?;
    Ok(radii_of(&e.spec, &e.published_phases, threshold))
}

/// `|arg U21 − φ|` in units of π over area deviations `[−half_width, half_width]`; NaN where undefined.
#[wasm_bindgen(js_name = phaseScan)]
pub fn phase_scan(
    name: &str,
    half_width: f64,
    points: usize,
    detuning_area: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    let e = js(catalog::find(name))?;
    let curve = js(profiles::phase_deviation_scan(
        &e.spec,
        &e.published_phases,
        ScaleRange::around_nominal(half_width, points),
        detuning_area,
    ))?;
    Ok(curve.ordinate.iter().map(|v| v / PI).collect())
}

/// Phase threshold (units of π) at which a phase error reaches `infidelity`.
#[wasm_bindgen(js_name = phaseThreshold)]
pub fn phase_threshold(infidelity: f64) -> f64 {
    profiles::infidelity_threshold_phase_for(infidelity) / PI
}

/// Multistart search. Returns `[count, residual, φ2/π, …, residual, φ2/π, …]`.
#[wasm_bindgen]
pub fn solve(
    pulses: usize,
    area_pi: f64,
    target_pi: f64,
    n1: usize,
    n2: usize,
    starts: usize,
    seed: u64,
) -> std::result::Result<Vec<f64>, JsError> {
    js(solve_impl(pulses, area_pi, target_pi, n1, n2, starts, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_cover_catalog() {
        let names = catalog_names_impl();
        assert_eq!(names.lines().count(), 21);
        assert!(names.lines().any(|n| n == "P17(pi)"));
    }

    #[test]
    fn description_mentions_phases() {
        let text = describe_impl("N5(pi)").unwrap();
        assert!(text.contains("0.839; 1.420"), "{text}");
    }

    #[test]
    fn profile_and_radii() {
        let e = catalog::find("N5(pi)").unwrap();
        let p = profile_of(&e.spec, &e.published_phases, 1.5, 31).unwrap();
        assert_eq!(p.len(), 31);
        assert!((p[0] - 1.0).abs() < 1e-4);
        let r = radii_of(&e.spec, &e.published_phases, 1e-4);
        assert!((r[0] - 0.83).abs() < 0.02);
    }

    #[test]
    fn solve_layout() {
        let out = solve_impl(5, 1.0, 1.0, 2, 0, 40, 0).unwrap();
        let count = out[0] as usize;
        assert!(count >= 1);
        assert_eq!(out.len(), 1 + count * 3);
        assert!(out[1] < 1e-8);
    }

    #[test]
    fn invalid_inline_spec_is_rejected() {
        assert!(solve_impl(4, 1.0, 1.0, 1, 0, 10, 0).is_err());
    }
}
