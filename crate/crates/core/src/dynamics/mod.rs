//! Lindblad time evolution, steady states, input-output spectra, and
//! correlation functions.

mod integrator;
mod master;
mod spectra;

pub use integrator::IntegratorOptions;
pub use master::{
    evolve, evolve_observables, fock_tail_population, g2, liouvillian, purcell_decay_rate,
    steady_state, vacuum_rabi_trace, EvolutionResult,
};
pub use spectra::{
    driven_hamiltonian, numerical_response, reflection_amplitude, spectrum_scan,
    transmission_amplitude, DriveSpec, DriveTarget, InputSide, SpectrumPoint, WeakDriveResponse,
};
