//! Device description file.

use std::path::Path;

use cqsim::capnet::{estimate_capacitance, DotGeometry};
use cqsim::dynamics::Relaxation;
use cqsim::readout::SegmentModel;
use cqsim::{CapacitanceSet, ChannelParams, Device};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "cqsim-device/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub schema: String,
    pub capacitances: Capacitances,
    /// Total excess charge N on the four dots.
    pub n_total: i64,
    pub tunneling: Tunneling,
    pub channel: Channel,
    pub threshold_shift: ThresholdShift,
    #[serde(default)]
    pub dissipation: Option<Dissipation>,
    #[serde(default)]
    pub units: Units,
}

/// The four independent capacitors of the symmetric network (aF).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Capacitances {
    pub c3: CapacitorSpec,
    pub c5: CapacitorSpec,
    pub c6: CapacitorSpec,
    pub c7: CapacitorSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CapacitorSpec {
    Value(f64),
    Geometry(Geometry),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub radius_nm: f64,
    pub gap_nm: f64,
    #[serde(default = "default_eps_ox")]
    pub eps_ox: f64,
    #[serde(default = "default_eps_si")]
    pub eps_si: f64,
}

fn default_eps_ox() -> f64 {
    4.0
}

fn default_eps_si() -> f64 {
    12.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tunneling {
    pub omega_a: f64,
    pub omega_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Channel {
    pub width: f64,
    pub mobility: f64,
    pub c_ox: f64,
    pub segment_length: f64,
    pub phi_b: f64,
    pub q_b: f64,
    pub v_fb: f64,
    #[serde(default)]
    pub model: Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    #[default]
    Quadratic,
    Linear,
}

/// Threshold shift of the segment under each qubit when that qubit is in n = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdShift {
    pub qubit_a: f64,
    pub qubit_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dissipation {
    pub t1: f64,
    pub t2: f64,
    #[serde(default)]
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    Natural,
    Physical,
}

impl DeviceConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// A complete example configuration.
    pub fn example() -> Self {
        Self {
            schema: SCHEMA.into(),
            capacitances: Capacitances {
                c3: CapacitorSpec::Value(0.02),
                c5: CapacitorSpec::Value(1.0),
                c6: CapacitorSpec::Value(1.3),
                c7: CapacitorSpec::Value(0.8),
            },
            n_total: 1,
            tunneling: Tunneling {
                omega_a: 1.8e-5,
                omega_b: 0.0,
            },
            channel: Channel {
                width: 1.0,
                mobility: 1.0,
                c_ox: 1.0,
                segment_length: 1.0,
                phi_b: 1.0,
                q_b: 1.2,
                v_fb: -3.2,
                model: Model::Quadratic,
            },
            threshold_shift: ThresholdShift {
                qubit_a: 0.05,
                qubit_b: 0.05,
            },
            dissipation: None,
            units: Units::Natural,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(CliError::Config(format!(
                "schema: expected \"{SCHEMA}\", got \"{}\"",
                self.schema
            )));
        }
        self.caps()?;
        let t = &self.tunneling;
        for (name, v) in [("tunneling.omega_a", t.omega_a), ("tunneling.omega_b", t.omega_b)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name}: must be non-negative, got {v}")));
            }
        }
        self.channel_params()?;
        let s = &self.threshold_shift;
        if !(s.qubit_a.is_finite() && s.qubit_b.is_finite()) {
            return Err(CliError::Config("threshold_shift: values must be finite".into()));
        }
        if self.dissipation.is_some() {
            self.relaxation()?;
        }
        Ok(())
    }

    pub fn caps(&self) -> Result<CapacitanceSet, CliError> {
        let c = &self.capacitances;
        let resolve = |name: &str, spec: &CapacitorSpec| -> Result<f64, CliError> {
            match spec {
                CapacitorSpec::Value(v) => Ok(*v),
                CapacitorSpec::Geometry(g) => {
                    let geom = DotGeometry {
                        radius_nm: g.radius_nm,
                        gap_nm: g.gap_nm,
                        eps_ox: g.eps_ox,
                        eps_si: g.eps_si,
                    };
                    estimate_capacitance(&geom).map_err(|e| CliError::Config(format!("capacitances.{name}: {e}")))
                }
            }
        };
        let (c3, c5, c6, c7) = (
            resolve("c3", &c.c3)?,
            resolve("c5", &c.c5)?,
            resolve("c6", &c.c6)?,
            resolve("c7", &c.c7)?,
        );
        CapacitanceSet::symmetric(c3, c5, c6, c7).map_err(|e| CliError::Config(format!("capacitances: {e}")))
    }

    pub fn device(&self) -> Result<Device, CliError> {
        Device::new(
            self.caps()?,
            self.n_total as f64,
            self.tunneling.omega_a,
            self.tunneling.omega_b,
        )
        .map_err(|e| CliError::Config(format!("tunneling: {e}")))
    }

    pub fn channel_params(&self) -> Result<ChannelParams, CliError> {
        let c = &self.channel;
        let model = match c.model {
            Model::Quadratic => SegmentModel::Quadratic,
            Model::Linear => SegmentModel::Linear,
        };
        ChannelParams::new(c.width, c.mobility, c.c_ox, c.segment_length, c.phi_b, c.q_b, c.v_fb)
            .map(|p| p.with_model(model))
            .map_err(|e| CliError::Config(format!("channel: {e}")))
    }

    /// Configured relaxation, or the default phonon-limited times.
    pub fn relaxation(&self) -> Result<Relaxation, CliError> {
        match &self.dissipation {
            Some(d) => {
                Relaxation::new(d.t1, d.t2, d.temperature).map_err(|e| CliError::Config(format!("dissipation: {e}")))
            }
            None => Ok(Relaxation::phonon_default()),
        }
    }

    pub fn shifts(&self) -> [f64; 2] {
        [self.threshold_shift.qubit_a, self.threshold_shift.qubit_b]
    }
}
