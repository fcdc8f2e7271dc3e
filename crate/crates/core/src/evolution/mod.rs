//! Time stepping for the physical and rescaled flows and the maps between
//! them.

mod exponents;
mod remap;
mod run;
mod scheme;

pub use exponents::Exponents;
pub use remap::{
    pressure_scale, remap_scaled, rescale_backward, rescale_backward_to, rescale_forward, rescale_forward_to,
};
pub use run::{run, step_physical, step_rescaled, FlowMode, Trajectory};
pub use scheme::{Frame, Integrator, SolverConfig, Stepper};

pub(crate) use scheme::{face_velocities, upwind_dissipation};
