use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::units::EPS0_AF_PER_NM;

/// Geometry of one dot-to-electrode (or dot-to-dot) capacitor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DotGeometry<T: Real = f64> {
    /// Dot radius (nm).
    pub radius_nm: T,
    /// Insulator thickness of the capacitor (nm).
    pub gap_nm: T,
    /// Relative permittivity of the oxide.
    pub eps_ox: T,
    /// Relative permittivity of silicon.
    pub eps_si: T,
}

impl<T: Real> DotGeometry<T> {
    /// SiO₂ / Si permittivities 4 and 12.
    pub fn silicon(radius_nm: T, gap_nm: T) -> Self {
        Self {
            radius_nm,
            gap_nm,
            eps_ox: T::lit(4.0),
            eps_si: T::lit(12.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("radius", self.radius_nm),
            ("gap", self.gap_nm),
            ("eps_ox", self.eps_ox),
            ("eps_si", self.eps_si),
        ];
        for (name, v) in fields {
            if !(v.is_finite_real() && v > T::zero()) {
                return domain(format!("dot geometry {name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }
}

/// Capacitance of a spherical dot facing an electrode through a gap, in aF:
/// 2π·ε₀·ε_ox·r² / (d + (ε_ox/ε_Si)·r).
pub fn estimate_capacitance<T: Real>(geom: &DotGeometry<T>) -> Result<T> {
    geom.validate()?;
    let r = geom.radius_nm;
    let denom = geom.gap_nm + geom.eps_ox / geom.eps_si * r;
    Ok(T::two_pi() * T::lit(EPS0_AF_PER_NM) * geom.eps_ox * r * r / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_geometry() {
        // 2π·8.8541878128e-3·4·100/(2 + 10/3)
        let c = estimate_capacitance(&DotGeometry::<f64>::silicon(10.0, 2.0)).unwrap();
        assert!((c - 4.172_437_707_929_514_5).abs() < 1e-12);
    }

    #[test]
    fn vanishes_for_wide_gap() {
        let mut prev = f64::INFINITY;
        for k in 0..12 {
            let d = 10f64.powi(k);
            let c = estimate_capacitance(&DotGeometry::<f64>::silicon(10.0, d)).unwrap();
            assert!(c < prev);
            prev = c;
        }
        assert!(prev < 1e-8);
    }

    #[test]
    fn doubles_with_radius_when_gap_negligible() {
        let c1 = estimate_capacitance(&DotGeometry::<f64>::silicon(100.0, 1e-3)).unwrap();
        let c2 = estimate_capacitance(&DotGeometry::<f64>::silicon(200.0, 1e-3)).unwrap();
        assert!((c2 / c1 - 2.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_non_positive_fields() {
        assert!(estimate_capacitance(&DotGeometry::<f64>::silicon(0.0, 1.0)).is_err());
        assert!(estimate_capacitance(&DotGeometry::<f64>::silicon(1.0, -1.0)).is_err());
        let g = DotGeometry {
            eps_si: 0.0,
            ..DotGeometry::<f64>::silicon(1.0, 1.0)
        };
        assert!(estimate_capacitance(&g).is_err());
    }
}
