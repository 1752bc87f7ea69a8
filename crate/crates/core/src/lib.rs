//! Composite pulse sequences for high-fidelity local addressing of qubits.
//!
//! A composite pulse is a train of `N = 2n + 1` resonant pulses with equal
//! area and individually chosen phases. Choosing the phases so that the
//! excitation profile is flat near zero area (narrowband) and optionally flat
//! near the operating area (passband) confines the transition to the center
//! of a Gaussian laser spot while neighbouring qubits stay untouched.
//!
//! The crate is organised bottom-up:
//!
//! - [`su2`]: Cayley–Klein propagators, pulse composition and truncated Taylor
//!   jets of a sequence propagator in the common per-pulse area.
//! - [`conditions`]: the real residual system a phase vector must zero.
//! - [`solver`]: damped least-squares refinement and seeded multistart search.
//! - [`profiles`]: excitation and phase profiles under a Gaussian beam,
//!   crosstalk and robustness radii, detuned and noisy-area scans.
//! - [`catalog`]: the reference sequences with their published phases and a
//!   verification engine.
//!
//! ```
//! use composite_pulses::catalog;
//! use composite_pulses::profiles::{self, BeamModel};
//!
//! let entry = catalog::find("N5(pi)").unwrap();
//! let beam = BeamModel::default();
//! let radius = profiles::crosstalk_radius(&entry.spec, &entry.published_phases, &beam, 1e-4).unwrap();
//! assert!((radius - 0.83).abs() < 0.02);
//! ```

pub mod catalog;
pub mod conditions;
mod error;
pub mod profiles;
pub mod solver;
pub mod su2;

pub use conditions::{Eq7Variant, PhaseVector, SequenceKind, SequenceSpec};
pub use error::{Error, Result};
pub use su2::{Jet, Propagator, PulseParams};

use std::f64::consts::{PI, TAU};

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = reduce_angle(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}
