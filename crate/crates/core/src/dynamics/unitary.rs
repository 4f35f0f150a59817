use nalgebra::Vector4;

use super::{sample_offsets, validate_dt, ChargeTrace, Device, PulseSchedule, Segment, StateVector};
use crate::error::{domain, Result};
use crate::scalar::{cplx, Real};

/// Result of a unitary evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRun<T: Real = f64> {
    pub trace: ChargeTrace<T>,
    pub final_state: StateVector<T>,
}

/// Evolves `psi0` through the schedule, rebuilding the Hamiltonian from the
/// device at every segment's bias.
pub fn evolve_unitary<T: Real>(
    device: &Device<T>,
    schedule: &PulseSchedule<T>,
    psi0: &StateVector<T>,
    sample_dt: T,
) -> Result<UnitaryRun<T>> {
    let segments = device.resolve(schedule)?;
    evolve_segments(&segments, psi0, sample_dt)
}

/// Exact evolution through piecewise-constant Hamiltonians.
///
/// Each segment is propagated by its eigendecomposition; the trace is
/// sampled every `sample_dt` from the segment's start state, so the final
/// state does not depend on the sampling.
pub fn evolve_segments<T: Real>(segments: &[Segment<T>], psi0: &StateVector<T>, sample_dt: T) -> Result<UnitaryRun<T>> {
    validate_dt(sample_dt)?;
    let norm0 = psi0.norm();
    if (norm0 - T::one()).abs() > T::tol(1e-10) {
        return domain(format!("initial state must be normalized, got norm {norm0}"));
    }

    let mut trace = ChargeTrace::default();
    let mut psi = *psi0.amplitudes();
    let mut start = T::zero();
    let mut next_k = 0u64;

    for (i, seg) in segments.iter().enumerate() {
        let es = seg.hamiltonian().eigensystem();
        let end = start + seg.duration;
        // Coefficients in the eigenbasis.
        let coeffs = es.vectors.adjoint() * psi;
        let at = |tau: T| -> Vector4<_> {
            let mut v = Vector4::zeros();
            for k in 0..4 {
                let phase = -es.values[k] * tau;
                v += es.vectors.column(k) * (coeffs[k] * cplx(phase.cos(), phase.sin()));
            }
            v
        };
        let last = i + 1 == segments.len();
        for tau in sample_offsets(sample_dt, start, end, &mut next_k, last) {
            let v = at(tau);
            let pops = std::array::from_fn(|j| v[j].norm_sqr());
            trace.push(start + tau, pops, v.norm());
        }
        psi = es.propagator(seg.duration) * psi;
        start = end;
    }
    if segments.is_empty() {
        trace.push(T::zero(), psi0.populations(), norm0);
    }

    Ok(UnitaryRun {
        trace,
        final_state: StateVector::from_raw(psi),
    })
}
