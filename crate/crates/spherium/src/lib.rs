//! Two Coulomb-interacting electrons confined to a (d−1)-sphere admit
//! closed-form s-state eigenfunctions at special sphere radii. This crate
//! constructs those states, evaluates their linear-entropy entanglement in
//! closed form through multicenter chord integrals, and verifies every
//! closed form against independent quadrature and Monte Carlo oracles.
//!
//! Module map:
//!
//! * [`specfun`] — log-Gamma, Pochhammer, Gegenbauer, sphere areas, ₅F₄
//!   series at unit argument;
//! * [`eigen`] — coefficient recurrence, energy quantization, radius
//!   relation, node counting, radial-equation residuals;
//! * [`chords`] — closed-form one/two/three/four-center chord integrals and
//!   state normalization;
//! * [`entangle`] — entanglement reports, parameter sweeps and the
//!   reference tables;
//! * [`oracle`] — uniform sphere sampling, deterministic Monte Carlo
//!   estimation, Gauss–Legendre quadrature and the verification suite;
//! * [`cli`] — the `spherium` command-line front end.
//!
//! The `examples/` directory has one runnable program per capability; start
//! with `solve_states` and `entanglement_report`.

pub mod chords;
pub mod eigen;
pub mod error;
pub mod oracle;
pub mod specfun;

pub use chords::{ChordIntegralValue, ChordPattern};
pub use eigen::{solve_state, solve_states, SpheriumState, StateSpec};
pub use error::{Error, Result};
pub use oracle::MCEstimate;
