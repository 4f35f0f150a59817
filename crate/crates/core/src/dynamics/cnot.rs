//! Conditional-resonance CNOT: qubit b is the control, qubit a the target.
//!
//! Both qubits are parked far from their charge degeneracy, then V_a is
//! stepped to the level crossing that holds only when qubit b is in the
//! control state and held for a π pulse, then parked again. For the other
//! control state qubit a stays detuned by η/2 and barely moves.

use super::{evolve_unitary, Device, PulseSchedule, PulseSegment, StateVector};
use crate::capnet::{coupling, voltage_for_bias_energy, GateBias};
use crate::error::{domain, Result};
use crate::qubit::{level_crossing_voltage, ChargeState};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnotOptions<T: Real = f64> {
    /// Parking detuning in units of (η + Ω_a + Ω_b).
    pub park_factor: T,
    /// Duration of each parking segment; defaults to the π-pulse time.
    pub park_duration: Option<T>,
}

impl<T: Real> Default for CnotOptions<T> {
    fn default() -> Self {
        Self {
            park_factor: T::lit(20.0),
            park_duration: None,
        }
    }
}

/// Full transfer time π/(2Ω) under a resonant Ω·σ_x.
pub fn pi_pulse_duration<T: Real>(omega: T) -> T {
    T::pi() / (T::lit(2.0) * omega)
}

/// Park / resonant π pulse / park, without checking that the coupling can
/// actually discriminate the control state.
pub fn conditional_flip_schedule<T: Real>(
    device: &Device<T>,
    control: ChargeState,
    options: &CnotOptions<T>,
) -> Result<PulseSchedule<T>> {
    if device.omega_a <= T::zero() {
        return domain("CNOT needs a positive tunneling amplitude on the target qubit");
    }
    let caps = &device.caps;
    let eta = coupling(caps);
    let detuning = options.park_factor * (eta + device.omega_a + device.omega_b);
    let v_park = voltage_for_bias_energy(caps, device.total, detuning);
    let v_res = level_crossing_voltage(caps, device.total, control)?;
    let t_pi = pi_pulse_duration(device.omega_a);
    let t_park = options.park_duration.unwrap_or(t_pi);

    PulseSchedule::new(vec![
        PulseSegment {
            bias: GateBias::new(v_park, v_park),
            duration: t_park,
        },
        PulseSegment {
            bias: GateBias::new(v_res, v_park),
            duration: t_pi,
        },
        PulseSegment {
            bias: GateBias::new(v_park, v_park),
            duration: t_park,
        },
    ])
}

/// Three-segment CNOT schedule for the given control state.
///
/// Fails when the qubits are uncoupled; warns when Ω_a is not well below η.
pub fn cnot_schedule<T: Real>(
    device: &Device<T>,
    control: ChargeState,
    options: &CnotOptions<T>,
) -> Result<PulseSchedule<T>> {
    let eta = coupling(&device.caps);
    if eta <= T::zero() {
        return domain("η = 0: without inter-qubit coupling the level crossing does not depend on the control qubit");
    }
    if device.omega_a > eta * T::lit(0.1) {
        log::warn!(
            "Ω_a/η = {} is not small; off-resonant leakage will degrade the CNOT",
            device.omega_a / eta
        );
    }
    conditional_flip_schedule(device, control, options)
}

/// Output populations for each basis input: `populations[input][output]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthTable<T: Real = f64> {
    pub populations: [[T; 4]; 4],
}

impl<T: Real> TruthTable<T> {
    /// Permutation matrix of a CNOT with control b = `control`, target a.
    pub fn ideal(control: ChargeState) -> Self {
        let mut populations = [[T::zero(); 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                let out_a = if b == control.bit() { a ^ 1 } else { a };
                populations[2 * a + b][2 * out_a + b] = T::one();
            }
        }
        Self { populations }
    }

    pub fn max_deviation(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.populations[i][j] - other.populations[i][j]).abs());
            }
        }
        worst
    }

    pub fn row_sums(&self) -> [T; 4] {
        self.populations.map(|row| row.iter().fold(T::zero(), |a, &p| a + p))
    }

    /// Probability that qubit a ends flipped for basis input |a b⟩.
    pub fn flip_probability(&self, a: ChargeState, b: ChargeState) -> T {
        let row = &self.populations[crate::qubit::basis_index(a, b)];
        let flipped = a.flipped().bit();
        row[2 * flipped] + row[2 * flipped + 1]
    }

    /// Largest difference in target flip probability between the two
    /// control states.
    pub fn conditional_contrast(&self) -> T {
        [ChargeState::Zero, ChargeState::One]
            .iter()
            .map(|&a| (self.flip_probability(a, ChargeState::One) - self.flip_probability(a, ChargeState::Zero)).abs())
            .fold(T::zero(), T::max)
    }
}

/// Runs a schedule on each of the four basis states.
pub fn truth_table_for_schedule<T: Real>(device: &Device<T>, schedule: &PulseSchedule<T>) -> Result<TruthTable<T>> {
    let dt = schedule.total_duration().max(T::min_positive());
    let mut populations = [[T::zero(); 4]; 4];
    for (input, row) in populations.iter_mut().enumerate() {
        let run = evolve_unitary(device, schedule, &StateVector::basis_index(input), dt)?;
        *row = run.final_state.populations();
    }
    Ok(TruthTable { populations })
}

pub fn truth_table<T: Real>(
    device: &Device<T>,
    control: ChargeState,
    options: &CnotOptions<T>,
) -> Result<TruthTable<T>> {
    let schedule = cnot_schedule(device, control, options)?;
    truth_table_for_schedule(device, &schedule)
}
