//! Phenomenological T1/T2 relaxation of each qubit's Bloch vector.
//!
//! Within a segment, qubit j sees the local field h_j = (Ω_j, 0, ε_j) in
//! (σ_x, σ_y, σ_z) components. Longitudinal relaxation (rate 1/T1) drives
//! the Bloch vector along that axis toward its equilibrium polarization
//! tanh(|h_j|/kT), which is full ground-state polarization at T = 0 and
//! zero polarization when the field vanishes. Transverse components decay
//! at 1/T2. This is realized as a Lindblad generator with, per qubit,
//!
//! ```text
//! √γ↓ σ⁻,  √γ↑ σ⁺,  √(γ_φ/2) n̂·σ
//! γ↓ = (1 + p)/(2T1),  γ↑ = (1 − p)/(2T1),  γ_φ = 1/T2 − 1/(2T1)
//! ```
//!
//! with σ± defined in the eigenbasis of n̂·σ. The generator is constant over
//! a segment and propagated exactly by its matrix exponential.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};

use super::{sample_offsets, validate_dt, ChargeTrace, DensityMatrix, Device, PulseSchedule, Segment};
use crate::capnet::QubitParams;
use crate::error::{domain, Result};
use crate::scalar::{cplx, re, Real, C};
use crate::units::{seconds_to_time, DEFAULT_COHERENCE_TIME_S};

type Superop<T> = SMatrix<C<T>, 16, 16>;

/// Relaxation times (natural units) and bath temperature (energy units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation<T: Real = f64> {
    pub t1: T,
    pub t2: T,
    pub temperature: T,
}

impl<T: Real> Relaxation<T> {
    pub fn new(t1: T, t2: T, temperature: T) -> Result<Self> {
        let r = Self { t1, t2, temperature };
        r.validate()?;
        Ok(r)
    }

    /// T1 = T2 = 1e−7 s at zero temperature.
    pub fn phonon_default() -> Self {
        let t = T::lit(seconds_to_time(DEFAULT_COHERENCE_TIME_S));
        Self {
            t1: t,
            t2: t,
            temperature: T::zero(),
        }
    }

    /// No dissipation.
    pub fn none() -> Self {
        let inf = T::lit(f64::INFINITY);
        Self {
            t1: inf,
            t2: inf,
            temperature: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t1 > T::zero() && self.t2 > T::zero()) {
            return domain("T1 and T2 must be positive");
        }
        if !(self.temperature >= T::zero() && self.temperature.is_finite_real()) {
            return domain("temperature must be non-negative and finite");
        }
        // Compare rates so that infinite times are handled.
        let slack = T::one() + T::tol(1e-12);
        if T::one() / self.t2 * slack < T::one() / (T::lit(2.0) * self.t1) {
            return domain(format!("T2 = {} exceeds 2·T1 = {}", self.t2, T::lit(2.0) * self.t1));
        }
        Ok(())
    }

    fn rates(&self) -> (T, T) {
        let g1 = T::one() / self.t1;
        let gphi = (T::one() / self.t2 - g1 * T::lit(0.5)).max(T::zero());
        (g1, gphi)
    }
}

/// Result of a dissipative evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochRun<T: Real = f64> {
    pub trace: ChargeTrace<T>,
    pub final_state: DensityMatrix<T>,
    /// Purity Tr ρ² at each sample.
    pub purity: Vec<T>,
}

pub fn evolve_bloch<T: Real>(
    device: &Device<T>,
    schedule: &PulseSchedule<T>,
    rho0: &DensityMatrix<T>,
    relaxation: &Relaxation<T>,
    sample_dt: T,
) -> Result<BlochRun<T>> {
    let segments = device.resolve(schedule)?;
    evolve_bloch_segments(&segments, rho0, relaxation, sample_dt)
}

pub fn evolve_bloch_segments<T: Real>(
    segments: &[Segment<T>],
    rho0: &DensityMatrix<T>,
    relaxation: &Relaxation<T>,
    sample_dt: T,
) -> Result<BlochRun<T>> {
    validate_dt(sample_dt)?;
    relaxation.validate()?;
    DensityMatrix::new(*rho0.matrix())?;

    let mut trace = ChargeTrace::default();
    let mut purity = Vec::new();
    let mut record = |t: T, rho: &Matrix4<C<T>>| {
        let dm = DensityMatrix::from_raw(*rho);
        trace.push(t, dm.populations(), dm.trace());
        purity.push(dm.purity());
    };

    let mut rho = vectorize(rho0.matrix());
    let mut start = T::zero();
    let mut next_k = 0u64;
    for (i, seg) in segments.iter().enumerate() {
        let gen = generator(&seg.params, relaxation);
        let end = start + seg.duration;
        let offsets = sample_offsets(sample_dt, start, end, &mut next_k, i + 1 == segments.len());
        if let Some(&first) = offsets.first() {
            let mut cur = (gen * re(first)).exp() * rho;
            record(start + first, &unvectorize(&cur));
            let mut prev = first;
            let mut step_cache: Option<(T, Superop<T>)> = None;
            for &tau in &offsets[1..] {
                let h = tau - prev;
                let step = match &step_cache {
                    Some((dt, m)) if *dt == h => *m,
                    _ => {
                        let m = (gen * re(h)).exp();
                        step_cache = Some((h, m));
                        m
                    }
                };
                cur = step * cur;
                record(start + tau, &unvectorize(&cur));
                prev = tau;
            }
        }
        rho = (gen * re(seg.duration)).exp() * rho;
        start = end;
    }
    if segments.is_empty() {
        record(T::zero(), rho0.matrix());
    }

    Ok(BlochRun {
        trace,
        final_state: DensityMatrix::from_raw(unvectorize(&rho)),
        purity,
    })
}

/// Column-stacked vec(ρ).
fn vectorize<T: Real>(m: &Matrix4<C<T>>) -> SVector<C<T>, 16> {
    SVector::from_column_slice(m.as_slice())
}

fn unvectorize<T: Real>(v: &SVector<C<T>, 16>) -> Matrix4<C<T>> {
    Matrix4::from_column_slice(v.as_slice())
}

/// Lowering, raising and field-axis operators, plus the thermal polarization.
type LocalOps<T> = (Matrix2<C<T>>, Matrix2<C<T>>, Matrix2<C<T>>, T);

fn single_qubit_ops<T: Real>(eps: T, omega: T, temperature: T) -> LocalOps<T> {
    let field = eps.hypot(omega);
    let (theta, polarization) = if field > T::zero() {
        let p = if temperature > T::zero() {
            (field / temperature).tanh()
        } else {
            T::one()
        };
        (omega.atan2(eps), p)
    } else {
        (T::zero(), T::zero())
    };
    let (s, c) = ((theta * T::lit(0.5)).sin(), (theta * T::lit(0.5)).cos());
    // |+⟩ = (cos θ/2, sin θ/2), |−⟩ = (−sin θ/2, cos θ/2) for n̂ = (sin θ, 0, cos θ).
    let plus = nalgebra::Vector2::new(re(c), re(s));
    let minus = nalgebra::Vector2::new(re(-s), re(c));
    let lower = minus * plus.adjoint();
    let raise = plus * minus.adjoint();
    let axis = plus * plus.adjoint() - minus * minus.adjoint();
    (lower, raise, axis, polarization)
}

fn embed<T: Real>(op: &Matrix2<C<T>>, qubit_a: bool) -> Matrix4<C<T>> {
    let id = Matrix2::<C<T>>::identity();
    if qubit_a {
        op.kronecker(&id)
    } else {
        id.kronecker(op)
    }
}

/// Lindblad generator acting on column-stacked vec(ρ).
fn generator<T: Real>(p: &QubitParams<T>, relax: &Relaxation<T>) -> Superop<T> {
    let h = *crate::qubit::TwoQubitHamiltonian::build(p).matrix();
    let id = Matrix4::<C<T>>::identity();
    let mut gen: Superop<T> = (id.kronecker(&h) - h.transpose().kronecker(&id)) * cplx(T::zero(), -T::one());

    let (g1, gphi) = relax.rates();
    let half = T::lit(0.5);
    for (qubit_a, eps, omega) in [(true, p.eps_a, p.omega_a), (false, p.eps_b, p.omega_b)] {
        let (lower, raise, axis, pol) = single_qubit_ops(eps, omega, relax.temperature);
        let jumps = [
            (lower, g1 * half * (T::one() + pol)),
            (raise, g1 * half * (T::one() - pol)),
            (axis, gphi * half),
        ];
        for (op, rate) in jumps {
            if rate == T::zero() {
                continue;
            }
            let l = embed(&op, qubit_a) * re(rate.sqrt());
            let ldl = l.adjoint() * l;
            gen +=
                l.conjugate().kronecker(&l) - id.kronecker(&ldl) * re(half) - ldl.transpose().kronecker(&id) * re(half);
        }
    }
    gen
}
