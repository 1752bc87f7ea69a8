use composite_pulses::catalog;

fn main() {
    let report = catalog::verify_all(&catalog::load_catalog()).unwrap();
    for e in &report.entries {
        let f = &e.fidelity;
        println!(
            "{:5} {:22} eq={}/{} res={:.2e} refined={:?} drift/pi={:.2e} rank={:?} err={:?}",
            if e.passed { "PASS" } else { "FAIL" },
            e.name,
            e.equations,
            e.unknowns,
            f.residual_norm,
            f.refined_residual,
            f.max_drift() / std::f64::consts::PI,
            f.jacobian_rank,
            f.error
        );
        for a in &e.alternatives {
            println!(
                "      alt {:?} res={:.2e} drift/pi={:.2e} pass={}",
                a.variant,
                a.residual_norm,
                a.max_drift() / std::f64::consts::PI,
                a.passed
            );
        }
        for c in &e.claims {
            println!("      claim {} measured={:?} pass={}", c.claim, c.measured, c.passed);
        }
    }
}
