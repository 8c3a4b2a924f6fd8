//! Executes a [`RunConfig`] and renders the result.

use std::io::Write;

use cone_core::geometry::reduce_angle;
use cone_core::integrate::{
    conservation_report, integrate_with, perturbation_divergence_with, DivergenceOptions, IntegrationOptions,
};
use cone_core::qosc::eigenfunction_osc;
use cone_core::{ConeGeometry, FreeEigenstate, OscillatorLevel, ParticleParams, PhasePoint};
use serde::Serialize;

use crate::config::{Format, Mode, RunConfig};
use crate::format::{csv, Cell, Record};
use crate::CliError;

pub const TRAJECTORY_COLUMNS: [&str; 9] = ["t", "l", "phi", "p_l", "p_phi", "E", "x1", "x2", "x3"];
pub const SPECTRUM_COLUMNS: [&str; 4] = ["j", "n", "s", "energy"];
pub const EIGENFUNCTION_COLUMNS: [&str; 3] = ["l", "value_re", "value_im"];
pub const DIVERGENCE_COLUMNS: [&str; 4] = [
    "eps_J",
    "sup_l_deviation",
    "crossing_detected",
    "perturbed_changes_nappe",
];

/// Diagnostics attached to a table in JSON output.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conservation: Option<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<Vec<Record>>,
}

/// Result of a run: named columns, rows and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    pub reports: Report,
}

impl Table {
    pub fn to_csv(&self) -> String {
        csv(self.columns, &self.rows)
    }

    pub fn to_json(&self, cfg: &RunConfig) -> String {
        #[derive(Serialize)]
        struct Document<'a> {
            config: serde_json::Value,
            columns: &'a [&'a str],
            rows: &'a [Vec<Cell>],
            reports: &'a Report,
        }
        let doc = Document {
            config: cfg.to_json(),
            columns: self.columns,
            rows: &self.rows,
            reports: &self.reports,
        };
        let mut out = serde_json::to_string(&doc).expect("table serializes");
        out.push('\n');
        out
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(cfg),
        }
    }
}

/// Computes the table described by `cfg`.
pub fn run(cfg: &RunConfig) -> Result<Table, CliError> {
    let geom = ConeGeometry::new(cfg.alpha)?;
    match cfg.mode {
        Mode::Free | Mode::Osc => trajectory(cfg, &geom),
        Mode::Spectrum => spectrum(cfg, &geom),
        Mode::Eigfn => eigenfunction(cfg, &geom),
        Mode::Instability => instability(cfg, &geom),
    }
}

/// Runs `cfg` and writes the rendering to its output path or to `sink`.
pub fn execute(cfg: &RunConfig, sink: &mut dyn Write) -> Result<(), CliError> {
    let text = run(cfg)?.render(cfg);
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => sink
            .write_all(text.as_bytes())
            .and_then(|()| sink.flush())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn params(cfg: &RunConfig) -> Result<ParticleParams, CliError> {
    Ok(ParticleParams::new(cfg.mass, cfg.omega)?)
}

fn trajectory(cfg: &RunConfig, geom: &ConeGeometry) -> Result<Table, CliError> {
    let params = params(cfg)?;
    let start = PhasePoint::new(0.0, cfg.l0, cfg.phi0, cfg.pl0, cfg.angular_momentum);
    let opts = IntegrationOptions {
        record_steps: false,
        ..IntegrationOptions::new(cfg.tol, cfg.sample_interval)
    };
    let traj = integrate_with(&start, &params, geom, cfg.t_end, &opts)?;
    let rows = traj
        .samples()
        .iter()
        .zip(traj.energy_series())
        .zip(traj.embedding())
        .map(|((s, &e), x)| {
            [s.t, s.l, reduce_angle(s.phi), s.p_l, s.p_phi, e, x.x1, x.x2, x.x3]
                .into_iter()
                .map(Cell::Real)
                .collect()
        })
        .collect();
    let report = conservation_report(&traj, &params, geom)?;
    Ok(Table {
        columns: &TRAJECTORY_COLUMNS,
        rows,
        reports: Report {
            conservation: Some(Record(vec![
                ("max_rel_energy_drift", Cell::Real(report.max_rel_energy_drift)),
                ("max_abs_j_drift", Cell::Real(report.max_abs_j_drift)),
                ("steps", Cell::Int(report.steps as i64)),
                ("rejected_steps", Cell::Int(report.rejected_steps as i64)),
            ])),
            divergence: None,
        },
    })
}

fn spectrum(cfg: &RunConfig, geom: &ConeGeometry) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for j in cfg.j_range.0..=cfg.j_range.1 {
        for n in cfg.n_range.0..=cfg.n_range.1 {
            let level = OscillatorLevel::new(j as f64, n, cfg.omega, geom)?;
            rows.push(vec![
                Cell::Int(j),
                Cell::Int(n.into()),
                Cell::Real(level.s()),
                Cell::Real(level.energy()),
            ]);
        }
    }
    Ok(Table {
        columns: &SPECTRUM_COLUMNS,
        rows,
        reports: Report::default(),
    })
}

fn eigenfunction(cfg: &RunConfig, geom: &ConeGeometry) -> Result<Table, CliError> {
    let j = cfg.j as f64;
    let value: Box<dyn Fn(f64) -> cone_core::Result<_>> = if cfg.omega > 0.0 {
        let level = OscillatorLevel::new(j, cfg.n, cfg.omega, geom)?;
        Box::new(move |l| eigenfunction_osc(&level, l, cfg.phi0, cfg.mass))
    } else {
        let state = FreeEigenstate::normalized(j, cfg.energy, cfg.mass, cfg.upper_weight, geom)?;
        Box::new(move |l| state.evaluate(l, cfg.phi0, cfg.mass))
    };
    let rows = cfg
        .grid
        .nodes()
        .into_iter()
        .map(|l| {
            let psi = value(l)?;
            Ok(vec![Cell::Real(l), Cell::Real(psi.re), Cell::Real(psi.im)])
        })
        .collect::<Result<_, CliError>>()?;
    Ok(Table {
        columns: &EIGENFUNCTION_COLUMNS,
        rows,
        reports: Report::default(),
    })
}

fn instability(cfg: &RunConfig, geom: &ConeGeometry) -> Result<Table, CliError> {
    let params = params(cfg)?;
    let base = PhasePoint::new(0.0, cfg.l0, cfg.phi0, cfg.pl0, 0.0);
    let opts = DivergenceOptions {
        tol: cfg.tol,
        ..DivergenceOptions::default()
    };
    let reports = perturbation_divergence_with(&base, &cfg.eps, &params, geom, cfg.t_end, &opts)?;
    let rows: Vec<Vec<Cell>> = reports
        .iter()
        .map(|r| {
            vec![
                Cell::Real(r.eps_j),
                Cell::Real(r.sup_l_deviation),
                Cell::Bool(r.crossing_detected),
                Cell::Bool(r.perturbed_changes_nappe),
            ]
        })
        .collect();
    let records = rows
        .iter()
        .map(|row| Record(DIVERGENCE_COLUMNS.iter().copied().zip(row.iter().copied()).collect()))
        .collect();
    Ok(Table {
        columns: &DIVERGENCE_COLUMNS,
        rows,
        reports: Report {
            conservation: None,
            divergence: Some(records),
        },
    })
}
