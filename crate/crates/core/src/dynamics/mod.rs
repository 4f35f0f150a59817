//! Time evolution of the two-qubit register under piecewise-constant gate
//! voltages.

mod bloch;
mod cnot;
mod period;
mod unitary;

pub use bloch::{evolve_bloch, evolve_bloch_segments, BlochRun, Relaxation};
pub use cnot::{
    cnot_schedule, conditional_flip_schedule, pi_pulse_duration, truth_table, truth_table_for_schedule, CnotOptions,
    TruthTable,
};
pub use period::{oscillation_period, signal_period, Oscillation, Qubit};
pub use unitary::{evolve_segments, evolve_unitary, UnitaryRun};

use std::io::Write;

use nalgebra::{Matrix4, Vector4};

use crate::capnet::{qubit_parameters, CapacitanceSet, GateBias, QubitParams};
use crate::error::{domain, Result};
use crate::export::{fmt_float, write_csv_rows};
use crate::qubit::{sigma_z_diagonals, ChargeState, TwoQubitHamiltonian, BASIS_LABELS};
use crate::scalar::{re, Real, C};

/// Normalized pure state of the register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<T: Real = f64> {
    amplitudes: Vector4<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes, requiring ‖ψ‖ = 1 to 1e−10.
    pub fn new(amplitudes: Vector4<C<T>>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - T::one()).abs() > T::tol(1e-10) {
            return domain(format!("state vector must be normalized, got norm {norm}"));
        }
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_raw(amplitudes: Vector4<C<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn basis(a: ChargeState, b: ChargeState) -> Self {
        let mut v = Vector4::zeros();
        v[crate::qubit::basis_index(a, b)] = re(T::one());
        Self { amplitudes: v }
    }

    pub fn basis_index(index: usize) -> Self {
        let mut v = Vector4::zeros();
        v[index] = re(T::one());
        Self { amplitudes: v }
    }

    pub fn amplitudes(&self) -> &Vector4<C<T>> {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    pub fn populations(&self) -> [T; 4] {
        std::array::from_fn(|i| self.amplitudes[i].norm_sqr())
    }

    /// |⟨φ|ψ⟩|².
    pub fn fidelity(&self, other: &Self) -> T {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            rho: self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// 4×4 density matrix of the register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    rho: Matrix4<C<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Requires Hermiticity, unit trace to 1e−10 and eigenvalues ≥ −1e−10.
    pub fn new(rho: Matrix4<C<T>>) -> Result<Self> {
        let tol = T::tol(1e-10);
        if (rho - rho.adjoint()).norm() > tol {
            return domain("density matrix must be Hermitian");
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return domain(format!("density matrix must have unit trace, got {tr}"));
        }
        let dm = Self { rho };
        if dm.min_eigenvalue() < -tol {
            return domain("density matrix must be positive semidefinite");
        }
        Ok(dm)
    }

    pub(crate) fn from_raw(rho: Matrix4<C<T>>) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &Matrix4<C<T>> {
        &self.rho
    }

    pub fn trace(&self) -> T {
        self.rho.trace().re
    }

    pub fn purity(&self) -> T {
        (self.rho * self.rho).trace().re
    }

    pub fn populations(&self) -> [T; 4] {
        std::array::from_fn(|i| self.rho[(i, i)].re)
    }

    pub fn element(&self, row: usize, col: usize) -> C<T> {
        self.rho[(row, col)]
    }

    pub fn min_eigenvalue(&self) -> T {
        let h = (self.rho + self.rho.adjoint()) * re(T::lit(0.5));
        h.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(T::max_value().unwrap_or_else(T::one), T::min)
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn fidelity_with(&self, psi: &StateVector<T>) -> T {
        psi.amplitudes.dotc(&(self.rho * psi.amplitudes)).re
    }
}

/// Fixed device: capacitances, total pair charge N and tunneling amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Device<T: Real = f64> {
    pub caps: CapacitanceSet<T>,
    pub total: T,
    pub omega_a: T,
    pub omega_b: T,
}

impl<T: Real> Device<T> {
    pub fn new(caps: CapacitanceSet<T>, total: T, omega_a: T, omega_b: T) -> Result<Self> {
        caps.require_symmetric()?;
        if !(omega_a >= T::zero() && omega_b >= T::zero()) {
            return domain("tunneling amplitudes must be non-negative");
        }
        Ok(Self {
            caps,
            total,
            omega_a,
            omega_b,
        })
    }

    pub fn params_at(&self, bias: &GateBias<T>) -> Result<QubitParams<T>> {
        qubit_parameters(&self.caps, self.total, bias, self.omega_a, self.omega_b)
    }

    /// Two-level parameters for every segment of a schedule.
    pub fn resolve(&self, schedule: &PulseSchedule<T>) -> Result<Vec<Segment<T>>> {
        schedule
            .segments()
            .iter()
            .map(|s| {
                Ok(Segment {
                    params: self.params_at(&s.bias)?,
                    duration: s.duration,
                })
            })
            .collect()
    }
}

/// Gate bias held for a duration (natural time units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment<T: Real = f64> {
    pub bias: GateBias<T>,
    pub duration: T,
}

/// Ordered list of pulse segments with positive durations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSchedule<T: Real = f64> {
    segments: Vec<PulseSegment<T>>,
}

impl<T: Real> PulseSchedule<T> {
    pub fn new(segments: Vec<PulseSegment<T>>) -> Result<Self> {
        for (i, s) in segments.iter().enumerate() {
            if !(s.duration > T::zero() && s.duration.is_finite_real()) {
                return domain(format!("segment {i} has non-positive duration {}", s.duration));
            }
            s.bias.validate()?;
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[PulseSegment<T>] {
        &self.segments
    }

    pub fn total_duration(&self) -> T {
        self.segments.iter().fold(T::zero(), |acc, s| acc + s.duration)
    }
}

/// Two-level parameters held for a duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T: Real = f64> {
    pub params: QubitParams<T>,
    pub duration: T,
}

impl<T: Real> Segment<T> {
    pub fn new(params: QubitParams<T>, duration: T) -> Result<Self> {
        params.validate()?;
        if !(duration > T::zero() && duration.is_finite_real()) {
            return domain(format!("segment duration must be positive, got {duration}"));
        }
        Ok(Self { params, duration })
    }

    pub fn hamiltonian(&self) -> TwoQubitHamiltonian<T> {
        TwoQubitHamiltonian::build(&self.params)
    }
}

/// Sampled observables of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeTrace<T: Real = f64> {
    pub times: Vec<T>,
    pub sz_a: Vec<T>,
    pub sz_b: Vec<T>,
    pub populations: Vec<[T; 4]>,
    /// ‖ψ‖ for pure states, Tr ρ for density matrices.
    pub norm: Vec<T>,
}

impl<T: Real> Default for ChargeTrace<T> {
    fn default() -> Self {
        Self {
            times: Vec::new(),
            sz_a: Vec::new(),
            sz_b: Vec::new(),
            populations: Vec::new(),
            norm: Vec::new(),
        }
    }
}

impl<T: Real> ChargeTrace<T> {
    pub(crate) fn push(&mut self, t: T, populations: [T; 4], norm: T) {
        let (za, zb) = sigma_z_diagonals::<T>();
        let dot = |z: [T; 4]| (0..4).fold(T::zero(), |acc, i| acc + z[i] * populations[i]);
        self.times.push(t);
        self.sz_a.push(dot(za));
        self.sz_b.push(dot(zb));
        self.populations.push(populations);
        self.norm.push(norm);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with columns t, sz_a, sz_b, p00…p11, norm. Times are scaled by
    /// `time_scale` on output.
    pub fn write_csv<W: Write>(&self, out: W, time_scale: f64) -> csv::Result<()> {
        let mut header = vec!["t".to_string(), "sz_a".into(), "sz_b".into()];
        header.extend(BASIS_LABELS.iter().map(|l| format!("p{l}")));
        header.push("norm".into());
        let rows = (0..self.len()).map(|i| {
            let mut row = vec![
                fmt_float(self.times[i].as_f64() * time_scale),
                fmt_float(self.sz_a[i].as_f64()),
                fmt_float(self.sz_b[i].as_f64()),
            ];
            row.extend(self.populations[i].iter().map(|p| fmt_float(p.as_f64())));
            row.push(fmt_float(self.norm[i].as_f64()));
            row
        });
        write_csv_rows(out, &header, rows)
    }
}

/// Sample times k·dt inside [start, end), plus `end` itself when `last`.
pub(crate) fn sample_offsets<T: Real>(dt: T, start: T, end: T, next_k: &mut u64, last: bool) -> Vec<T> {
    let mut out = Vec::new();
    loop {
        let t = dt * T::from_int(*next_k as i64);
        if t < end {
            out.push(t - start);
            *next_k += 1;
        } else {
            break;
        }
    }
    if last {
        out.push(end - start);
    }
    out
}

pub(crate) fn validate_dt<T: Real>(dt: T) -> Result<()> {
    if dt > T::zero() && dt.is_finite_real() {
        Ok(())
    } else {
        domain(format!("sample interval must be positive, got {dt}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn state_vector_requires_normalization() {
        let v = Vector4::new(re(1.0), re(1.0), re(0.0), re(0.0));
        assert!(StateVector::new(v).is_err());
        let s = StateVector::new(v / re(2f64.sqrt())).unwrap();
        assert!((s.populations()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let pure = StateVector::<f64>::basis(ChargeState::One, ChargeState::Zero).to_density();
        assert!(DensityMatrix::new(*pure.matrix()).is_ok());
        assert!((pure.purity() - 1.0).abs() < 1e-15);
        let mut bad = *pure.matrix();
        bad[(0, 1)] = cplx(0.0, 0.3);
        assert!(DensityMatrix::new(bad).is_err());
        let neg = Matrix4::from_diagonal(&Vector4::new(re(1.2), re(-0.2), re(0.0), re(0.0)));
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn schedule_rejects_non_positive_duration() {
        let seg = |d| PulseSegment {
            bias: GateBias::new(0.0, 0.0),
            duration: d,
        };
        assert!(PulseSchedule::new(vec![seg(1.0), seg(0.0)]).is_err());
        assert!(PulseSchedule::new(vec![seg(1.0), seg(2.5)]).unwrap().total_duration() == 3.5);
    }

    #[test]
    fn sampling_grid() {
        let mut k = 0;
        let a = sample_offsets(0.5_f64, 0.0, 1.2, &mut k, false);
        assert_eq!(a, vec![0.0, 0.5, 1.0]);
        let b = sample_offsets(0.5_f64, 1.2, 2.0, &mut k, true);
        assert_eq!(k, 4);
        assert!((b[0] - 0.3).abs() < 1e-15 && (b[1] - 0.8).abs() < 1e-15);
    }
}
