use cqsim::capnet::{
    charging_energy, check_weak_coupling, closed_form_energy, coupling, expanded_energy, minimize_energy,
    DEFAULT_WEAK_COUPLING_THRESHOLD,
};
use cqsim::dynamics::{
    cnot_schedule, evolve_bloch, evolve_unitary, truth_table_for_schedule, CnotOptions, PulseSegment, TruthTable,
};
use cqsim::export::{fmt_float, write_csv_rows};
use cqsim::qubit::{crossing_separation, level_crossing_voltage, ChargeState, BASIS_LABELS};
use cqsim::readout::{delta_current_two_qubit, readout_map, SegmentModel};
use cqsim::units::{energy_to_mev, time_to_seconds, voltage_to_volts};
use cqsim::{ChannelParams, GateBias, Occupation, PulseSchedule, StateVector, TwoQubitHamiltonian};
use serde_json::{json, Map, Value};

use crate::config::{DeviceConfig, Units};
use crate::error::CliError;
use crate::grid::{Grid, IntRange};

/// CSV body plus facts for the metadata sidecar.
pub struct Report {
    pub csv: Vec<u8>,
    pub meta: Map<String, Value>,
}

#[derive(Debug, Clone, Copy)]
pub struct Scale {
    pub energy: f64,
    pub voltage: f64,
    pub time: f64,
}

impl Scale {
    pub fn new(units: Units) -> Self {
        match units {
            Units::Natural => Self {
                energy: 1.0,
                voltage: 1.0,
                time: 1.0,
            },
            Units::Physical => Self {
                energy: energy_to_mev(1.0),
                voltage: voltage_to_volts(1.0),
                time: time_to_seconds(1.0),
            },
        }
    }

    pub fn describe(units: Units) -> Value {
        match units {
            Units::Natural => {
                json!({ "energy": "e^2/aF", "voltage": "e/aF", "time": "hbar aF/e^2", "current": "channel units" })
            }
            Units::Physical => json!({ "energy": "meV", "voltage": "V", "time": "s", "current": "channel units" }),
        }
    }
}

fn csv(header: &[String], rows: Vec<Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_csv_rows(&mut buf, header, rows)?;
    Ok(buf)
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn device_facts(cfg: &DeviceConfig, scale: Scale) -> Result<Map<String, Value>, CliError> {
    let caps = cfg.caps()?;
    let weak = check_weak_coupling(&caps, DEFAULT_WEAK_COUPLING_THRESHOLD);
    let mut m = Map::new();
    m.insert("capacitances_af".into(), json!(caps.values()));
    m.insert("charging_energy".into(), json!(charging_energy(&caps) * scale.energy));
    m.insert("coupling_eta".into(), json!(coupling(&caps) * scale.energy));
    m.insert("weak_coupling_ratio".into(), json!(weak.ratio));
    m.insert("weak_coupling_satisfied".into(), json!(weak.satisfied));
    Ok(m)
}

/// One-line JSON summary of the derived device quantities.
pub fn device_summary(cfg: &DeviceConfig, scale: Scale) -> Result<String, CliError> {
    Ok(Value::Object(device_facts(cfg, scale)?).to_string())
}

pub fn energy(
    cfg: &DeviceConfig,
    scale: Scale,
    na: IntRange,
    nb: IntRange,
    va: &Grid,
    vb: &Grid,
) -> Result<Report, CliError> {
    let caps = cfg.caps()?;
    let total = cfg.n_total as f64;
    let mut rows = Vec::new();
    for &v_a in &va.values() {
        for &v_b in &vb.values() {
            let bias = GateBias::new(v_a, v_b);
            let at = |a: i64, b: i64| Occupation::new(a as f64, b as f64, total);
            let origin = at(0, 0);
            let closed0 = closed_form_energy(&caps, &origin, &bias)?;
            let expanded0 = expanded_energy(&caps, &origin, &bias)?;
            let oracle0 = minimize_energy(&caps, &origin, &bias)?.energy;
            for a in na.values() {
                for b in nb.values() {
                    let occ = at(a, b);
                    let closed = closed_form_energy(&caps, &occ, &bias)? - closed0;
                    let expanded = expanded_energy(&caps, &occ, &bias)? - expanded0;
                    let oracle = minimize_energy(&caps, &occ, &bias)?.energy - oracle0;
                    rows.push(vec![
                        a.to_string(),
                        b.to_string(),
                        fmt_float(v_a * scale.voltage),
                        fmt_float(v_b * scale.voltage),
                        fmt_float(closed * scale.energy),
                        fmt_float(expanded * scale.energy),
                        fmt_float(oracle * scale.energy),
                    ]);
                }
            }
        }
    }
    let csv = csv(
        &header(&["n_a", "n_b", "va", "vb", "u_closed", "u_expanded", "u_oracle"]),
        rows,
    )?;
    Ok(Report {
        csv,
        meta: device_facts(cfg, scale)?,
    })
}

pub fn spectrum(cfg: &DeviceConfig, scale: Scale, va: &Grid, vb: f64) -> Result<Report, CliError> {
    let device = cfg.device()?;
    let mut rows = Vec::new();
    for &v_a in &va.values() {
        let params = device.params_at(&GateBias::new(v_a, vb))?;
        let es = TwoQubitHamiltonian::build(&params).eigensystem();
        let mut row = vec![fmt_float(v_a * scale.voltage)];
        row.extend(es.values.iter().map(|e| fmt_float(e * scale.energy)));
        rows.push(row);
    }
    let csv = csv(&header(&["va", "e0", "e1", "e2", "e3"]), rows)?;

    let caps = &device.caps;
    let mut meta = device_facts(cfg, scale)?;
    let v0 = level_crossing_voltage(caps, device.total, ChargeState::Zero)?;
    let v1 = level_crossing_voltage(caps, device.total, ChargeState::One)?;
    meta.insert("crossing_va_control_0".into(), json!(v0 * scale.voltage));
    meta.insert("crossing_va_control_1".into(), json!(v1 * scale.voltage));
    meta.insert(
        "crossing_separation".into(),
        json!(crossing_separation(caps)? * scale.voltage),
    );
    Ok(Report { csv, meta })
}

fn parse_basis(label: &str) -> Result<usize, CliError> {
    BASIS_LABELS
        .iter()
        .position(|&l| l == label)
        .ok_or_else(|| CliError::Config(format!("initial state must be one of {BASIS_LABELS:?}, got '{label}'")))
}

pub struct EvolveArgs<'a> {
    pub va: f64,
    pub vb: f64,
    pub initial: &'a str,
    pub duration: f64,
    pub dt: f64,
    pub dissipative: bool,
}

pub fn evolve(cfg: &DeviceConfig, scale: Scale, args: &EvolveArgs) -> Result<Report, CliError> {
    let device = cfg.device()?;
    let schedule = PulseSchedule::new(vec![PulseSegment {
        bias: GateBias::new(args.va, args.vb),
        duration: args.duration,
    }])?;
    let psi0 = StateVector::basis_index(parse_basis(args.initial)?);
    let (trace, final_pops, purity) = if args.dissipative {
        let relax = cfg.relaxation()?;
        let run = evolve_bloch(&device, &schedule, &psi0.to_density(), &relax, args.dt)?;
        let purity = run.final_state.purity();
        (run.trace, run.final_state.populations(), Some(purity))
    } else {
        let run = evolve_unitary(&device, &schedule, &psi0, args.dt)?;
        (run.trace, run.final_state.populations(), None)
    };
    let mut csv = Vec::new();
    trace.write_csv(&mut csv, scale.time)?;

    let mut meta = device_facts(cfg, scale)?;
    let params = device.params_at(&GateBias::new(args.va, args.vb))?;
    meta.insert("eps_a".into(), json!(params.eps_a * scale.energy));
    meta.insert("eps_b".into(), json!(params.eps_b * scale.energy));
    meta.insert("final_populations".into(), json!(final_pops));
    meta.insert(
        "max_norm_deviation".into(),
        json!(trace.norm.iter().fold(0.0f64, |a, n| a.max((n - 1.0).abs()))),
    );
    meta.insert("dissipative".into(), json!(args.dissipative));
    if let Some(p) = purity {
        meta.insert("final_purity".into(), json!(p));
    }
    Ok(Report { csv, meta })
}

pub fn cnot(cfg: &DeviceConfig, scale: Scale, control: u8, park_factor: f64) -> Result<Report, CliError> {
    let device = cfg.device()?;
    let control = ChargeState::from_bit(control)?;
    let options = CnotOptions {
        park_factor,
        park_duration: None,
    };
    let schedule = cnot_schedule(&device, control, &options)?;
    let table = truth_table_for_schedule(&device, &schedule)?;

    let mut head = vec!["input".to_string()];
    head.extend(BASIS_LABELS.iter().map(|l| format!("p{l}")));
    let rows = (0..4)
        .map(|i| {
            let mut row = vec![BASIS_LABELS[i].to_string()];
            row.extend(table.populations[i].iter().map(|&p| fmt_float(p)));
            row
        })
        .collect();
    let csv = csv(&head, rows)?;

    let mut meta = device_facts(cfg, scale)?;
    let segments: Vec<Value> = schedule
        .segments()
        .iter()
        .map(|s| json!({ "va": s.bias.va * scale.voltage, "vb": s.bias.vb * scale.voltage, "duration": s.duration * scale.time }))
        .collect();
    meta.insert("schedule".into(), json!(segments));
    meta.insert(
        "max_deviation_from_ideal".into(),
        json!(table.max_deviation(&TruthTable::ideal(control))),
    );
    meta.insert("conditional_contrast".into(), json!(table.conditional_contrast()));
    Ok(Report { csv, meta })
}

fn state_currents(p: &ChannelParams, v_gate: f64, v_ds: f64, shifts: [f64; 2]) -> Result<[f64; 4], CliError> {
    let mut out = [0.0; 4];
    for (s, current) in out.iter_mut().enumerate() {
        let mut pops = [0.0; 4];
        pops[s] = 1.0;
        *current = readout_map(p, v_gate, v_ds, shifts, pops)?.mean;
    }
    Ok(out)
}

pub fn readout(cfg: &DeviceConfig, v_gate: f64, v_ds: f64) -> Result<Report, CliError> {
    let p = cfg.channel_params()?;
    let linear = p.with_model(SegmentModel::Linear);
    let shifts = cfg.shifts();
    let i = state_currents(&p, v_gate, v_ds, shifts)?;
    let il = state_currents(&linear, v_gate, v_ds, shifts)?;
    let mut rows: Vec<Vec<String>> = (0..4)
        .map(|s| vec![BASIS_LABELS[s].to_string(), fmt_float(i[s]), fmt_float(il[s])])
        .collect();
    rows.push(vec!["10-01".into(), fmt_float(i[2] - i[1]), fmt_float(il[2] - il[1])]);
    let csv = csv(&header(&["state", "i_d", "i_d_linear"]), rows)?;

    let mut meta = Map::new();
    meta.insert("threshold_voltage".into(), json!(p.threshold()));
    meta.insert("beta0".into(), json!(p.beta0()));
    meta.insert("alpha".into(), json!(p.alpha()));
    if shifts[0] == shifts[1] && shifts[0] >= 0.0 {
        let overdrive = v_gate - p.threshold();
        if let Ok(c) = delta_current_two_qubit(&p, overdrive, shifts[0], v_ds) {
            meta.insert("contrast_closed_form".into(), json!(c.formula));
        }
    }
    Ok(Report { csv, meta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    VGate,
    VDs,
}

pub fn sweep(cfg: &DeviceConfig, param: SweepParam, range: &Grid, v_gate: f64, v_ds: f64) -> Result<Report, CliError> {
    let p = cfg.channel_params()?;
    let shifts = cfg.shifts();
    let mut rows = Vec::new();
    for &x in &range.values() {
        let (g, d) = match param {
            SweepParam::VGate => (x, v_ds),
            SweepParam::VDs => (v_gate, x),
        };
        let i = state_currents(&p, g, d, shifts)?;
        let mut row = vec![fmt_float(x)];
        row.extend(i.iter().map(|&c| fmt_float(c)));
        row.push(fmt_float(i[2] - i[1]));
        rows.push(row);
    }
    let name = match param {
        SweepParam::VGate => "v_gate",
        SweepParam::VDs => "v_ds",
    };
    let csv = csv(&header(&[name, "i_00", "i_01", "i_10", "i_11", "delta_i"]), rows)?;
    let mut meta = Map::new();
    meta.insert("sweep".into(), json!(name));
    meta.insert("points".into(), json!(range.points));
    Ok(Report { csv, meta })
}
