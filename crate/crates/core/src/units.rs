//! Natural units and conversions.
//!
//! Internally e = 1 and ħ = 1, capacitances are in attofarads, so the
//! energy unit is e²/aF, the voltage unit is (e²/aF)/e = e/aF and the time
//! unit is ħ/(e²/aF).

/// Elementary charge (C).
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;

/// Reduced Planck constant (eV·s).
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// Vacuum permittivity in aF per nm.
pub const EPS0_AF_PER_NM: f64 = 8.854_187_812_8e-3;

/// One energy unit e²/aF in meV (≈ 160.2 meV).
pub const ENERGY_UNIT_MEV: f64 = ELEMENTARY_CHARGE_C / 1.0e-18 * 1.0e3;

/// One voltage unit e/aF in volts.
pub const VOLTAGE_UNIT_V: f64 = ELEMENTARY_CHARGE_C / 1.0e-18;

/// One time unit ħ/(e²/aF) in seconds (≈ 4.11 fs).
pub const TIME_UNIT_S: f64 = HBAR_EV_S / (ENERGY_UNIT_MEV * 1.0e-3);

/// Dephasing and relaxation time scale of the phonon-limited estimate (s).
pub const DEFAULT_COHERENCE_TIME_S: f64 = 1.0e-7;

pub fn energy_to_mev(e: f64) -> f64 {
    e * ENERGY_UNIT_MEV
}

pub fn mev_to_energy(mev: f64) -> f64 {
    mev / ENERGY_UNIT_MEV
}

pub fn voltage_to_volts(v: f64) -> f64 {
    v * VOLTAGE_UNIT_V
}

pub fn volts_to_voltage(v: f64) -> f64 {
    v / VOLTAGE_UNIT_V
}

pub fn time_to_seconds(t: f64) -> f64 {
    t * TIME_UNIT_S
}

pub fn seconds_to_time(s: f64) -> f64 {
    s / TIME_UNIT_S
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_constants() {
        assert!((ENERGY_UNIT_MEV - 160.217_663_4).abs() < 1e-6);
        assert!((VOLTAGE_UNIT_V - 0.160_217_663_4).abs() < 1e-12);
        assert!((TIME_UNIT_S - 4.108_236e-15).abs() < 1e-20);
        assert!((seconds_to_time(time_to_seconds(3.5)) - 3.5).abs() < 1e-12);
        assert!((mev_to_energy(energy_to_mev(0.25)) - 0.25).abs() < 1e-15);
    }
}
