mod args;
mod output;

use std::f64::consts::PI;
use std::process::ExitCode;

use clap::Parser;
use composite_pulses::catalog::{self, CatalogRecord};
use composite_pulses::profiles::{self, BeamModel, ScaleRange};
use composite_pulses::solver::{self, SolveOptions};
use composite_pulses::{Eq7Variant, Error, PhaseVector, SequenceSpec};

use args::{Cli, Command, Format, SpecArgs};
use output::{field, num, Document};

enum Failure {
    Verification,
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::UndefinedPhase { .. }
            | Error::NoCrosstalkRadius { .. }
            | Error::RobustnessViolatedAtCenter { .. } => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Converts between radians and the user's angle unit.
#[derive(Clone, Copy)]
struct Units {
    radians: bool,
}

impl Units {
    fn input(self, x: f64) -> f64 {
        if self.radians {
            x
        } else {
            x * PI
        }
    }

    fn output(self, x: f64) -> f64 {
        if self.radians {
            x
        } else {
            x / PI
        }
    }

    fn name(self) -> &'static str {
        if self.radians {
            "rad"
        } else {
            "pi"
        }
    }

    fn list(self, phases: &PhaseVector) -> String {
        phases
            .as_slice()
            .iter()
            .map(|&p| num(self.output(p)))
            .collect::<Vec<_>>()
            .join(";")
    }
}

struct Resolved {
    label: String,
    spec: SequenceSpec,
    phases: Option<PhaseVector>,
}

fn resolve(args: &SpecArgs, units: Units) -> Result<Resolved, Failure> {
    let override_phases = args
        .phases
        .as_ref()
        .map(|v| PhaseVector::new(v.iter().map(|&p| units.input(p)).collect()));
    let variant = args.eq7_variant.as_deref().map(str::parse::<Eq7Variant>).transpose()?;

    if let Some(name) = &args.name {
        let entry = catalog::find(name)?;
        let spec = match variant {
            Some(v) => entry.spec.with_eq7_variant(v),
            None => entry.spec,
        };
        return Ok(Resolved {
            label: entry.name,
            spec,
            phases: Some(override_phases.unwrap_or(entry.published_phases)),
        });
    }

    let (Some(pulses), Some(area)) = (args.pulses, args.area) else {
        return Err(Failure::Usage("give either --name or --pulses with --area".into()));
    };
    let target = match (args.target, pulses) {
        (Some(t), _) => t,
        (None, 1) => area,
        (None, _) => return Err(Failure::Usage("--target is required for multi-pulse specs".into())),
    };
    let mut spec = SequenceSpec::new(pulses, units.input(area), units.input(target))?
        .with_flat_bottom(args.n1)
        .with_flat_top(args.n2);
    if let Some(phase) = args.phase {
        spec = spec.with_target_phase(units.input(phase));
    }
    if args.n3 > 0 {
        spec = spec.with_phase_stabilization(args.n3);
    }
    if let Some(v) = variant {
        spec = spec.with_eq7_variant(v);
    }
    spec.validate()?;
    let phases = override_phases.or_else(|| (pulses == 1).then(PhaseVector::default));
    Ok(Resolved {
        label: "inline".into(),
        spec,
        phases,
    })
}

impl Resolved {
    fn phases(&self) -> Result<&PhaseVector, Failure> {
        let phases = self
            .phases
            .as_ref()
            .ok_or_else(|| Failure::Usage("--phases is required for inline multi-pulse specs".into()))?;
        if phases.len() != self.spec.free_phase_count() {
            return Err(Error::PhaseCountMismatch {
                expected: self.spec.free_phase_count(),
                found: phases.len(),
            }
            .into());
        }
        Ok(phases)
    }

    fn describe(&self, doc: &mut Document, units: Units) {
        let s = &self.spec;
        doc.set("spec", &self.label);
        doc.set("pulses", s.pulse_count());
        doc.set("pulse_area", units.output(s.nominal_area()));
        doc.set("target_area", units.output(s.target_area()));
        if let Some(phi) = s.target_phase() {
            doc.set("target_phase", units.output(phi));
        }
        doc.set("n1", s.n1());
        doc.set("n2", s.n2());
        doc.set("n3", s.n3());
        if s.n3() > 0 {
            doc.set("eq7_variant", s.eq7_variant());
        }
        if let Some(p) = &self.phases {
            doc.set("phases", units.list(p));
        }
    }
}

fn solve_cmd(doc: &mut Document, units: Units, spec: &SpecArgs, options: SolveOptions) -> Result<(), Failure> {
    let resolved = resolve(spec, units)?;
    resolved.describe(doc, units);
    doc.set("starts", options.max_starts);
    doc.set("seed", options.rng_seed);
    doc.set("max_iterations", options.max_iterations);
    doc.set("tolerance", options.residual_tolerance);
    let solutions = solver::solve(&resolved.spec, &options)?;
    doc.set("solutions", solutions.len());

    let n = resolved.spec.free_phase_count();
    let mut columns = vec![
        "index".to_string(),
        "residual_norm".into(),
        "jacobian_rank".into(),
        "iterations".into(),
    ];
    columns.extend((2..n + 2).map(|k| format!("phi{k}_{}", units.name())));
    doc.columns = columns;
    for (i, s) in solutions.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            num(s.residual_norm),
            s.jacobian_rank.to_string(),
            s.iterations.to_string(),
        ];
        row.extend(s.phases.as_slice().iter().map(|&p| num(units.output(p))));
        doc.push_row(row);
    }
    Ok(())
}

fn verify_cmd(
    doc: &mut Document,
    units: Units,
    names: &[String],
    report_path: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    let entries = if names.is_empty() {
        catalog::load_catalog()
    } else {
        names.iter().map(|n| catalog::find(n)).collect::<Result<Vec<_>, _>>()?
    };
    doc.set("entries", entries.len());
    doc.set("residual_tolerance", catalog::RESIDUAL_TOLERANCE);
    doc.set("drift_tolerance", units.output(catalog::DRIFT_TOLERANCE));
    doc.set("refined_tolerance", catalog::REFINED_TOLERANCE);
    let report = catalog::verify_all(&entries)?;

    doc.columns(&[
        "name",
        "status",
        "equations",
        "unknowns",
        "residual_norm",
        "residual_max",
        "refined_residual",
        &format!("max_drift_{}", units.name()),
        "jacobian_rank",
        "claims_passed",
        "claims",
    ]);
    let mut text = String::new();
    for e in &report.entries {
        let f = &e.fidelity;
        let status = if e.passed { "PASS" } else { "FAIL" };
        let claims_passed = e.claims.iter().filter(|c| c.passed).count();
        doc.push_row(vec![
            field(&e.name),
            status.into(),
            e.equations.to_string(),
            e.unknowns.to_string(),
            num(f.residual_norm),
            num(f.residual_max),
            f.refined_residual.map(num).unwrap_or_default(),
            num(units.output(f.max_drift())),
            f.jacobian_rank.map(|r| r.to_string()).unwrap_or_default(),
            claims_passed.to_string(),
            e.claims.len().to_string(),
        ]);
        text.push_str(&format!(
            "{status} {} residual={:.3e} refined={} drift={:.3e}{} claims={claims_passed}/{}",
            e.name,
            f.residual_norm,
            f.refined_residual
                .map(|r| format!("{r:.1e}"))
                .unwrap_or_else(|| "none".into()),
            units.output(f.max_drift()),
            units.name(),
            e.claims.len()
        ));
        if let Some(err) = &f.error {
            text.push_str(&format!(" error=\"{err}\""));
        }
        text.push('\n');
        for c in e.claims.iter().filter(|c| !c.passed) {
            let measured = c
                .measured
                .map(num)
                .unwrap_or_else(|| c.error.clone().unwrap_or_default());
            text.push_str(&format!("  claim failed: {} (measured {measured})\n", c.claim));
        }
    }
    text.push_str(&format!(
        "{}/{} entries pass\n",
        report.pass_count(),
        report.entries.len()
    ));
    doc.text_body = Some(text);

    if let Some(path) = report_path {
        std::fs::write(path, report.to_toml()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report.passed)
}

fn profile_cmd(
    doc: &mut Document,
    units: Units,
    spec: &SpecArgs,
    max_offset: f64,
    grid: usize,
    threshold: f64,
) -> Result<(), Failure> {
    let resolved = resolve(spec, units)?;
    let phases = resolved.phases()?;
    resolved.describe(doc, units);
    doc.set("max_offset", max_offset);
    doc.set("grid", grid);
    doc.set("threshold", threshold);
    let beam = BeamModel::default();
    let radius = |r: Result<f64, Error>| r.map(num).unwrap_or_else(|e| format!("none ({e})"));
    doc.set(
        "crosstalk_radius",
        radius(profiles::crosstalk_radius(&resolved.spec, phases, &beam, threshold)),
    );
    doc.set(
        "robustness_radius",
        radius(profiles::robustness_radius(&resolved.spec, phases, &beam, threshold)),
    );

    let p0 = resolved.spec.target_probability();
    let curve = profiles::excitation_profile(&resolved.spec, phases, max_offset, grid)?;
    doc.columns(&["r_over_xi", "p", "p0_minus_p"]);
    for (r, p) in curve.points() {
        doc.push_row(vec![num(r), num(p), num(p0 - p)]);
    }
    Ok(())
}

fn scan_cmd(
    doc: &mut Document,
    units: Units,
    spec: &SpecArgs,
    range: f64,
    grid: usize,
    detuning: Option<f64>,
    threshold: f64,
) -> Result<(), Failure> {
    let resolved = resolve(spec, units)?;
    let phases = resolved.phases()?;
    resolved.describe(doc, units);
    doc.set("range", range);
    doc.set("grid", grid);
    if let Some(d) = detuning {
        doc.set("detuning_area", d);
    }
    let delta = profiles::infidelity_threshold_phase_for(threshold);
    doc.set("infidelity", threshold);
    doc.set("phase_threshold", units.output(delta));

    let scale = ScaleRange::around_nominal(range, grid);
    let plain = profiles::phase_deviation_scan(&resolved.spec, phases, scale, 0.0)?;
    let shifted = detuning
        .map(|d| profiles::phase_deviation_scan(&resolved.spec, phases, scale, d))
        .transpose()?;
    let dev = format!("phase_deviation_{}", units.name());
    let dev_detuned = format!("phase_deviation_detuned_{}", units.name());
    let mut columns = vec!["area_deviation", dev.as_str()];
    if shifted.is_some() {
        columns.push(&dev_detuned);
    }
    doc.columns(&columns);
    for i in 0..plain.len() {
        let mut row = vec![num(plain.abscissa[i]), num(units.output(plain.ordinate[i]))];
        if let Some(s) = &shifted {
            row.push(num(units.output(s.ordinate[i])));
        }
        doc.push_row(row);
    }
    Ok(())
}

fn noise_cmd(
    doc: &mut Document,
    units: Units,
    spec: &SpecArgs,
    amplitude: f64,
    trials: usize,
    seed: u64,
) -> Result<(), Failure> {
    let resolved = resolve(spec, units)?;
    let phases = resolved.phases()?;
    resolved.describe(doc, units);
    doc.set("amplitude", amplitude);
    doc.set("trials", trials);
    doc.set("seed", seed);
    let stats = profiles::noise_phase_error(&resolved.spec, phases, amplitude, trials, seed)?;
    let u = units.name();
    doc.columns(&["trials", &format!("rms_{u}"), &format!("mean_{u}"), &format!("max_{u}")]);
    doc.push_row(vec![
        stats.trials.to_string(),
        num(units.output(stats.rms)),
        num(units.output(stats.mean)),
        num(units.output(stats.max)),
    ]);
    Ok(())
}

fn catalog_cmd(doc: &mut Document) {
    let entries = catalog::load_catalog();
    doc.set("angles", "units of pi");
    doc.set("entries", entries.len());
    doc.set("checksum", catalog::fixture_checksum());
    doc.text_body = Some(catalog::to_toml(&entries));
    doc.columns(&[
        "name",
        "pulses",
        "pulse_area",
        "target_area",
        "target_phase",
        "n1",
        "n2",
        "n3",
        "eq7_variant",
        "phases",
    ]);
    for e in &entries {
        let r = CatalogRecord::from_entry(e);
        doc.push_row(vec![
            field(&r.name),
            r.pulses.to_string(),
            num(r.pulse_area),
            num(r.target_area),
            r.target_phase.map(num).unwrap_or_default(),
            r.n1.to_string(),
            r.n2.to_string(),
            r.n3.to_string(),
            r.eq7_variant.unwrap_or_default(),
            r.phases.iter().map(|&p| num(p)).collect::<Vec<_>>().join(";"),
        ]);
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.output.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let units = Units {
        radians: cli.output.radians,
    };
    let name = match &cli.command {
        Command::Solve { .. } => "solve",
        Command::Verify { .. } => "verify",
        Command::Profile { .. } => "profile",
        Command::Scan { .. } => "scan",
        Command::Noise { .. } => "noise",
        Command::Catalog => "catalog",
    };
    let format = cli.output.format.unwrap_or(match cli.command {
        Command::Verify { .. } | Command::Catalog => Format::Text,
        _ => Format::Csv,
    });
    let mut doc = Document::new(name);
    if cli.output.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        doc.set("timestamp_unix", secs);
    }
    doc.set("angle_unit", units.name());

    let mut verified = true;
    match &cli.command {
        Command::Solve {
            spec,
            starts,
            seed,
            max_iterations,
            tolerance,
        } => {
            let options = SolveOptions {
                max_starts: *starts,
                max_iterations: *max_iterations,
                residual_tolerance: *tolerance,
                rng_seed: *seed,
                ..SolveOptions::default()
            };
            solve_cmd(&mut doc, units, spec, options)?;
        }
        Command::Verify { names, report } => verified = verify_cmd(&mut doc, units, names, report.as_deref())?,
        Command::Profile {
            spec,
            max_offset,
            grid,
            threshold,
        } => profile_cmd(&mut doc, units, spec, *max_offset, *grid, *threshold)?,
        Command::Scan {
            spec,
            range,
            grid,
            detuning,
            threshold,
        } => scan_cmd(&mut doc, units, spec, *range, *grid, *detuning, *threshold)?,
        Command::Noise {
            spec,
            amplitude,
            trials,
            seed,
        } => noise_cmd(&mut doc, units, spec, *amplitude, *trials, *seed)?,
        Command::Catalog => catalog_cmd(&mut doc),
    }

    let text = doc.render(format);
    output::emit(&text, cli.output.out.as_deref()).map_err(|e| {
        let target = cli
            .output
            .out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "stdout".into());
        Failure::Io(format!("{target}: {e}"))
    })?;
    if verified {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("cannot write output: {msg}");
            ExitCode::from(4)
        }
    }
}
