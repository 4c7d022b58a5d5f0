//! Lindblad master-equation engine: Liouvillian assembly, steady states,
//! adaptive time evolution and second-order correlations.

mod correlation;
mod evolve;
mod integrate;
mod liouvillian;
pub mod sparse;
mod steady;

pub use correlation::{g2_equal_time, g2_two_time, g2_two_time_with, occupation};
pub use evolve::{evolve, evolve_with, Envelope, Evolution, Generator, Observable, TimeDependentHamiltonian, TimeTrace};
pub use integrate::{integrate, IntegrationStats, IntegratorSettings, OdeSystem};
pub use liouvillian::{build_liouvillian, DecayChannel, Liouvillian};
pub use steady::{steady_state, SteadyState, SteadyStateMethod};
