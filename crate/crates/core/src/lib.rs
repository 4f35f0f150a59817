//! Simulator for two capacitively coupled quantum-dot charge qubits read
//! out through a MOSFET channel.
//!
//! * [`capnet`]: electrostatics of the ten-capacitor network and its
//!   small-C3 expansion.
//! * [`qubit`]: the two-qubit Hamiltonian and its conditional level
//!   crossings.
//! * [`dynamics`]: piecewise-constant evolution with optional relaxation,
//!   and CNOT scheduling.
//! * [`readout`]: long-channel MOSFET current through a series of
//!   qubit-gated segments.
//!
//! Everything is generic over [`Real`]; the aliases below fix `f64`.

pub mod capnet;
pub mod dynamics;
mod error;
pub mod export;
pub mod qubit;
pub mod readout;
mod scalar;
pub mod units;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type CapacitanceSet = capnet::CapacitanceSet<f64>;
pub type CapacitanceSet32 = capnet::CapacitanceSet<f32>;
pub type Occupation = capnet::Occupation<f64>;
pub type GateBias = capnet::GateBias<f64>;
pub type QubitParams = capnet::QubitParams<f64>;
pub type TwoQubitHamiltonian = qubit::TwoQubitHamiltonian<f64>;
pub type StateVector = dynamics::StateVector<f64>;
pub type DensityMatrix = dynamics::DensityMatrix<f64>;
pub type PulseSchedule = dynamics::PulseSchedule<f64>;
pub type ChargeTrace = dynamics::ChargeTrace<f64>;
pub type Device = dynamics::Device<f64>;
pub type ChannelParams = readout::ChannelParams<f64>;
pub type ChannelSolution = readout::ChannelSolution<f64>;
