//! Published composite sequences and their verification.
//!
//! Every entry carries the spec it was designed for, the printed phases (in
//! units of π, exactly as tabulated) and any quantitative claims made about
//! it. [`verify_entry`] checks that the printed phases nearly solve their
//! condition system, that refinement lands close by, and that each claim holds.
//!
//! The catalog can be exported to and read back from a TOML document with
//! one `[[entry]]` table per sequence; see [`to_toml`].

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::conditions::{self, Eq7Variant, PhaseVector, SequenceSpec};
use crate::profiles::{self, BeamModel};
use crate::solver::{self, SolveOptions};
use crate::{wrap_angle, Error, Result};

/// Residual norm allowed at the printed, 3-decimal phases.
pub const RESIDUAL_TOLERANCE: f64 = 0.05;
/// Largest per-phase move allowed during refinement (radians).
pub const DRIFT_TOLERANCE: f64 = 2e-3 * PI;
/// Residual norm refinement has to reach.
pub const REFINED_TOLERANCE: f64 = 1e-8;
/// Excitation and infidelity benchmark used by all claims.
pub const BENCHMARK: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ClaimKind {
    /// Crosstalk radius at the benchmark, in units of `ξ`.
    CrosstalkRadius,
    /// Robustness radius at the benchmark, in units of `ξ`.
    RobustnessRadius,
    /// Half-width of the area-deviation interval on which the phase error
    /// stays below the benchmark phase threshold.
    PhaseRobustHalfWidth,
    /// RMS target-phase error under uniform per-pulse area noise (radians).
    NoiseRms {
        relative_amplitude: f64,
        trials: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "value")]
pub enum Tolerance {
    /// `|measured − value| ≤ t`.
    Absolute(f64),
    /// `measured ≥ value`.
    AtLeast,
    /// `value/f ≤ measured ≤ value·f`.
    Factor(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub kind: ClaimKind,
    pub value: f64,
    pub tolerance: Tolerance,
}

impl Claim {
    pub fn accepts(&self, measured: f64) -> bool {
        match self.tolerance {
            Tolerance::Absolute(t) => (measured - self.value).abs() <= t,
            Tolerance::AtLeast => measured >= self.value,
            Tolerance::Factor(f) => measured >= self.value / f && measured <= self.value * f,
        }
    }

    /// Measures the claimed quantity for a sequence.
    pub fn measure(&self, spec: &SequenceSpec, phases: &PhaseVector) -> Result<f64> {
        let beam = BeamModel::default();
        match self.kind {
            ClaimKind::CrosstalkRadius => profiles::crosstalk_radius(spec, phases, &beam, BENCHMARK),
            ClaimKind::RobustnessRadius => profiles::robustness_radius(spec, phases, &beam, BENCHMARK),
            ClaimKind::PhaseRobustHalfWidth => profiles::phase_robust_half_width(
                spec,
                phases,
                profiles::infidelity_threshold_phase_for(BENCHMARK),
                0.5,
                0.0,
            ),
            ClaimKind::NoiseRms {
                relative_amplitude,
                trials,
                seed,
            } => profiles::noise_phase_error(spec, phases, relative_amplitude, trials, seed).map(|s| s.rms),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ClaimKind::CrosstalkRadius => "crosstalk radius/xi".to_string(),
            ClaimKind::RobustnessRadius => "robustness radius/xi".to_string(),
            ClaimKind::PhaseRobustHalfWidth => "phase-robust half width".to_string(),
            ClaimKind::NoiseRms {
                relative_amplitude,
                trials,
                ..
            } => format!("noise rms (±{relative_amplitude}, {trials} trials)"),
        };
        match self.tolerance {
            Tolerance::Absolute(t) => write!(f, "{what} = {} ± {t}", self.value),
            Tolerance::AtLeast => write!(f, "{what} >= {}", self.value),
            Tolerance::Factor(x) => write!(f, "{what} = {} within ×{x}", self.value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    /// 1 for rotations, 2 for phased rotations.
    pub table: u8,
    pub spec: SequenceSpec,
    /// Free phases `φ2 … φ(n+1)` in radians.
    pub published_phases: PhaseVector,
    /// The same phases in units of π, as printed.
    pub printed_phases: Vec<f64>,
    pub claims: Vec<Claim>,
}

struct Row {
    name: &'static str,
    table: u8,
    pulses: usize,
    area: f64,
    target: f64,
    phase: Option<f64>,
    n: [usize; 3],
    phases: &'static [f64],
}

fn rows() -> Vec<Row> {
    let nb = |name, pulses, area, target, n1, phases| Row {
        name,
        table: 1,
        pulses,
        area,
        target,
        phase: None,
        n: [n1, 0, 0],
        phases,
    };
    let pb = |name, pulses, area, target, n1, n2, phases| Row {
        name,
        table: 1,
        pulses,
        area,
        target,
        phase: None,
        n: [n1, n2, 0],
        phases,
    };
    let phased = |name, pulses, area, target, phase, n2, n3, phases| Row {
        name,
        table: 2,
        pulses,
        area,
        target,
        phase: Some(phase),
        n: [2, n2, n3],
        phases,
    };
    vec![
        nb("N5(pi)", 5, PI, PI, 2, &[0.839, 1.420]),
        nb("N9(pi)", 9, PI, PI, 4, &[0.426, 1.490, 0.858, 1.300]),
        nb("N13(pi)", 13, PI, PI, 6, &[1.103, 0.876, 0.154, 1.708, 1.020, 0.229]),
        nb(
            "N21(pi)",
            21,
            PI,
            PI,
            10,
            &[1.073, 0.919, 0.131, 1.831, 1.156, 0.721, 0.096, 1.521, 0.812, 1.954],
        ),
        nb("N7(pi/2)", 7, 3.0 * PI / 7.0, PI / 2.0, 2, &[0.471, 1.196, 1.315]),
        nb("N7(pi/sqrt2)", 7, PI / 2.0, PI / SQRT_2, 2, &[0.577, 1.161, 1.573]),
        nb(
            "N7(pi/2sqrt2)",
            7,
            3.0 * PI / 8.0,
            PI / (2.0 * SQRT_2),
            2,
            &[1.532, 0.800, 0.698],
        ),
        nb(
            "N7(sqrt2·pi)",
            7,
            2.0 * PI / 3.0,
            SQRT_2 * PI,
            2,
            &[1.505, 0.823, 0.609],
        ),
        pb("P7(pi)", 7, PI, PI, 2, 1, &[0.508, 1.337, 1.083]),
        pb(
            "P17(pi)",
            17,
            PI,
            PI,
            6,
            3,
            &[1.235, 0.721, 0.934, 0.126, 1.872, 1.515, 0.873, 0.217],
        ),
        pb(
            "P9(pi/2)",
            9,
            3.0 * PI / 5.0,
            PI / 2.0,
            2,
            1,
            &[1.270, 1.106, 0.464, 0.053],
        ),
        pb(
            "P17(pi/2)",
            17,
            2.0 * PI / 3.0,
            PI / 2.0,
            4,
            3,
            &[0.459, 0.097, 0.302, 1.445, 0.829, 1.324, 1.290, 0.995],
        ),
        pb(
            "P9(pi/sqrt2)",
            9,
            3.0 * PI / 5.0,
            PI / SQRT_2,
            2,
            1,
            &[0.676, 0.87, 1.503, 1.836],
        ),
        pb(
            "P9(pi/2sqrt2)",
            9,
            3.0 * PI / 5.0,
            PI / (2.0 * SQRT_2),
            2,
            1,
            &[0.356, 1.517, 0.957, 1.023],
        ),
        pb(
            "P9(sqrt2·pi)",
            9,
            3.0 * PI / 5.0,
            SQRT_2 * PI,
            2,
            1,
            &[1.909, 1.197, 0.861, 0.660],
        ),
        phased("N7(pi,3pi/2)", 7, PI, PI, 1.5 * PI, 0, 0, &[1.256, 0.792, 0.072]),
        phased(
            "P11(pi,3pi/2)",
            11,
            PI,
            PI,
            1.5 * PI,
            1,
            4,
            &[0.221, 1.109, 0.753, 1.304, 1.878],
        ),
        phased(
            "N9(pi/2,pi/2)",
            9,
            3.0 * PI / 4.0,
            PI / 2.0,
            PI / 2.0,
            0,
            0,
            &[1.074, 0.935, 0.173, 1.562],
        ),
        phased(
            "P13(pi/2,pi/2)",
            13,
            3.0 * PI / 4.0,
            PI / 2.0,
            PI / 2.0,
            1,
            1,
            &[0.959, 1.048, 0.367, 1.967, 1.511, 0.860],
        ),
        phased(
            "N9(pi/sqrt2,3pi/2)",
            9,
            3.0 * PI / 5.0,
            PI / SQRT_2,
            1.5 * PI,
            0,
            0,
            &[1.326, 0.958, 0.137, 0.791],
        ),
        phased(
            "P13(pi/sqrt2,3pi/2)",
            13,
            3.0 * PI / 5.0,
            PI / SQRT_2,
            1.5 * PI,
            1,
            1,
            &[0.183, 0.978, 1.421, 0.769, 1.924, 1.916],
        ),
    ]
}

fn claims_for(name: &str) -> Vec<Claim> {
    let radius = |kind, value, tol| Claim {
        kind,
        value,
        tolerance: Tolerance::Absolute(tol),
    };
    let noise = Claim {
        kind: ClaimKind::NoiseRms {
            relative_amplitude: 0.05,
            trials: 10_000,
            seed: 0,
        },
        value: 2.5e-3 * PI,
        tolerance: Tolerance::Factor(3.0),
    };
    match name {
        "N5(pi)" => vec![radius(ClaimKind::CrosstalkRadius, 0.83, 0.02)],
        "N21(pi)" => vec![radius(ClaimKind::CrosstalkRadius, 0.51, 0.02)],
        "P7(pi)" => vec![radius(ClaimKind::RobustnessRadius, 0.18, 0.01)],
        "P17(pi)" => vec![
            radius(ClaimKind::CrosstalkRadius, 0.70, 0.02),
            radius(ClaimKind::RobustnessRadius, 0.21, 0.01),
        ],
        "P11(pi,3pi/2)" => vec![
            Claim {
                kind: ClaimKind::PhaseRobustHalfWidth,
                value: 0.20,
                tolerance: Tolerance::AtLeast,
            },
            noise,
        ],
        "N7(pi,3pi/2)" => vec![noise],
        _ => Vec::new(),
    }
}

fn entry_from_row(row: &Row) -> CatalogEntry {
    let mut spec = SequenceSpec::new(row.pulses, row.area, row.target)
        .expect("catalog rows are valid")
        .with_flat_bottom(row.n[0])
        .with_flat_top(row.n[1]);
    if let Some(phase) = row.phase {
        spec = spec.with_target_phase(phase).with_phase_stabilization(row.n[2]);
    }
    CatalogEntry {
        name: row.name.to_string(),
        table: row.table,
        spec,
        published_phases: PhaseVector::from_units_of_pi(row.phases),
        printed_phases: row.phases.to_vec(),
        claims: claims_for(row.name),
    }
}

/// All tabulated sequences, rotations first.
pub fn load_catalog() -> Vec<CatalogEntry> {
    rows().iter().map(entry_from_row).collect()
}

/// A lone π pulse, carrying the single-pulse robustness figure quoted alongside the tables.
pub fn single_pulse_reference() -> CatalogEntry {
    CatalogEntry {
        name: "single(pi)".into(),
        table: 0,
        spec: SequenceSpec::new(1, PI, PI).expect("valid"),
        published_phases: PhaseVector::default(),
        printed_phases: Vec::new(),
        claims: vec![Claim {
            kind: ClaimKind::RobustnessRadius,
            value: 0.05,
            tolerance: Tolerance::Absolute(0.005),
        }],
    }
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, '*' | '·' | '_'))
        .collect::<String>()
        .to_lowercase()
        .replace('π', "pi")
        .replace('√', "sqrt")
}

/// Looks an entry up by name; case, spaces and `*`/`·` separators are ignored.
pub fn find(name: &str) -> Result<CatalogEntry> {
    let key = normalize(name);
    load_catalog()
        .into_iter()
        .chain(std::iter::once(single_pulse_reference()))
        .find(|e| normalize(&e.name) == key)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

/// SHA-256 of the tabulated data, as lowercase hex.
pub fn fixture_checksum() -> String {
    let mut hasher = Sha256::new();
    for row in rows() {
        let line = format!(
            "{}|{}|{}|{:?}|{:?}|{:?}|{:?}|{:?}\n",
            row.name, row.table, row.pulses, row.area, row.target, row.phase, row.n, row.phases
        );
        hasher.update(line.as_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// One `[[entry]]` table of the structured-text export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub pulses: usize,
    /// Per-pulse area `A/π`.
    pub pulse_area: f64,
    /// Target rotation angle `𝒜/π`.
    pub target_area: f64,
    /// Target phase `φ/π`, absent for plain rotations.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target_phase: Option<f64>,
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eq7_variant: Option<String>,
    /// `φ2 … φ(n+1)` in units of π.
    pub phases: Vec<f64>,
}

impl CatalogRecord {
    pub fn from_entry(entry: &CatalogEntry) -> Self {
        let spec = &entry.spec;
        Self {
            name: entry.name.clone(),
            pulses: spec.pulse_count(),
            pulse_area: spec.nominal_area() / PI,
            target_area: spec.target_area() / PI,
            target_phase: spec.target_phase().map(|p| p / PI),
            n1: spec.n1(),
            n2: spec.n2(),
            n3: spec.n3(),
            eq7_variant: (spec.n3() > 0).then(|| spec.eq7_variant().name().to_string()),
            phases: entry.printed_phases.clone(),
        }
    }

    pub fn to_spec(&self) -> Result<SequenceSpec> {
        let mut spec = SequenceSpec::new(self.pulses, self.pulse_area * PI, self.target_area * PI)?
            .with_flat_bottom(self.n1)
            .with_flat_top(self.n2);
        if let Some(phase) = self.target_phase {
            spec = spec.with_target_phase(phase * PI).with_phase_stabilization(self.n3);
        } else if self.n3 > 0 {
            return Err(Error::StabilizationWithoutTargetPhase { n3: self.n3 });
        }
        if let Some(variant) = &self.eq7_variant {
            spec = spec.with_eq7_variant(variant.parse()?);
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Serialize, Deserialize)]
struct Document {
    entry: Vec<CatalogRecord>,
}

/// Structured-text export: a TOML array of `[[entry]]` tables.
pub fn to_toml(entries: &[CatalogEntry]) -> String {
    let doc = Document {
        entry: entries.iter().map(CatalogRecord::from_entry).collect(),
    };
    toml::to_string(&doc).expect("records serialize")
}

/// Parses a document written by [`to_toml`]. Claims are not part of the format.
pub fn from_toml(text: &str) -> Result<Vec<CatalogEntry>> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    doc.entry
        .into_iter()
        .map(|record| {
            let spec = record.to_spec()?;
            let expected = spec.free_phase_count();
            if record.phases.len() != expected {
                return Err(Error::PhaseCountMismatch {
                    expected,
                    found: record.phases.len(),
                });
            }
            Ok(CatalogEntry {
                table: if spec.target_phase().is_some() { 2 } else { 1 },
                published_phases: PhaseVector::from_units_of_pi(&record.phases),
                printed_phases: record.phases,
                name: record.name,
                spec,
                claims: Vec::new(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityCheck {
    pub variant: Option<Eq7Variant>,
    pub residual_max: f64,
    pub residual_norm: f64,
    pub refined_phases: Option<PhaseVector>,
    pub refined_residual: Option<f64>,
    /// `|refined − published|` per phase, radians.
    pub drift: Vec<f64>,
    pub jacobian_rank: Option<usize>,
    pub error: Option<String>,
    pub passed: bool,
}

impl FidelityCheck {
    pub fn max_drift(&self) -> f64 {
        self.drift.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: Claim,
    pub measured: Option<f64>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub name: String,
    pub equations: usize,
    pub unknowns: usize,
    /// Result for the entry's own Eq. 7 variant.
    pub fidelity: FidelityCheck,
    /// Results for the other variants of phase-stabilized rows.
    pub alternatives: Vec<FidelityCheck>,
    pub claims: Vec<ClaimResult>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub entries: Vec<EntryReport>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn pass_count(&self) -> usize {
        self.entries.iter().filter(|e| e.passed).count()
    }

    /// The full report as a TOML document.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("reports serialize")
    }
}

fn check_fidelity(spec: &SequenceSpec, phases: &PhaseVector) -> Result<FidelityCheck> {
    let residuals = conditions::residuals(spec, phases)?;
    let residual_max = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let residual_norm = residuals.iter().map(|r| r * r).sum::<f64>().sqrt();
    let variant = (spec.n3() > 0).then(|| spec.eq7_variant());
    let options = SolveOptions {
        residual_tolerance: 1e-10,
        ..SolveOptions::default()
    };
    let mut check = FidelityCheck {
        variant,
        residual_max,
        residual_norm,
        refined_phases: None,
        refined_residual: None,
        drift: Vec::new(),
        jacobian_rank: None,
        error: None,
        passed: false,
    };
    match solver::refine(spec, phases, &options) {
        Ok(solution) => {
            check.drift = solution
                .phases
                .as_slice()
                .iter()
                .zip(phases.as_slice())
                .map(|(x, y)| wrap_angle(x - y).abs())
                .collect();
            check.refined_residual = Some(solution.residual_norm);
            check.jacobian_rank = Some(solution.jacobian_rank);
            check.refined_phases = Some(solution.phases);
            check.passed = residual_norm <= RESIDUAL_TOLERANCE
                && solution.residual_norm <= REFINED_TOLERANCE
                && check.max_drift() <= DRIFT_TOLERANCE;
        }
        Err(e) => check.error = Some(e.to_string()),
    }
    Ok(check)
}

fn check_claim(claim: &Claim, entry: &CatalogEntry) -> ClaimResult {
    match claim.measure(&entry.spec, &entry.published_phases) {
        Ok(measured) => ClaimResult {
            claim: *claim,
            measured: Some(measured),
            error: None,
            passed: claim.accepts(measured),
        },
        Err(e) => ClaimResult {
            claim: *claim,
            measured: None,
            error: Some(e.to_string()),
            passed: false,
        },
    }
}

/// Residuals at the printed phases, refinement drift, and every claim.
pub fn verify_entry(entry: &CatalogEntry) -> Result<EntryReport> {
    let set = conditions::build_conditions(&entry.spec)?;
    let fidelity = if entry.published_phases.is_empty() {
        FidelityCheck {
            variant: None,
            residual_max: 0.0,
            residual_norm: 0.0,
            refined_phases: Some(PhaseVector::default()),
            refined_residual: Some(0.0),
            drift: Vec::new(),
            jacobian_rank: Some(0),
            error: None,
            passed: conditions::residuals(&entry.spec, &entry.published_phases)?
                .iter()
                .all(|r| r.abs() <= REFINED_TOLERANCE),
        }
    } else {
        check_fidelity(&entry.spec, &entry.published_phases)?
    };
    let alternatives = if entry.spec.n3() > 0 {
        Eq7Variant::ALL
            .iter()
            .filter(|&&v| v != entry.spec.eq7_variant())
            .map(|&v| check_fidelity(&entry.spec.clone().with_eq7_variant(v), &entry.published_phases))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let claims: Vec<ClaimResult> = entry.claims.iter().map(|c| check_claim(c, entry)).collect();
    let passed = fidelity.passed && claims.iter().all(|c| c.passed);
    Ok(EntryReport {
        name: entry.name.clone(),
        equations: set.len(),
        unknowns: set.unknowns(),
        fidelity,
        alternatives,
        claims,
        passed,
    })
}

/// Verifies entries concurrently; report order follows input order.
pub fn verify_all(entries: &[CatalogEntry]) -> Result<VerificationReport> {
    #[cfg(feature = "parallel")]
    let reports: Result<Vec<EntryReport>> = {
        use rayon::prelude::*;
        entries.par_iter().map(verify_entry).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let reports: Result<Vec<EntryReport>> = entries.iter().map(verify_entry).collect();
    let entries = reports?;
    let passed = entries.iter().all(|e| e.passed);
    Ok(VerificationReport { entries, passed })
}
