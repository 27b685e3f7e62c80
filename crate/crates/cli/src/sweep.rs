use std::path::Path;
use std::process::ExitCode;

use geodiscord::measures::{analytic_reference, measure_report, AnalyticFamily};
use geodiscord::state_zoo;
use geodiscord::DensityMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::{Format, OptimizerArgs, SweepArgs, SweepFamily};
use crate::commands::{read_input, report_config, CliError};
use crate::output::{csv_bytes, float_cell, json_bytes, opt_cell, write_output};

const ALL_COLUMNS: [&str; 6] = ["param", "d_p", "d_g", "q", "analytic_d_g", "abs_err"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub m: usize,
    #[serde(default)]
    pub n: Option<usize>,
    /// `x` for werner/isotropic, `s1` for pure_schmidt.
    #[serde(default)]
    pub parameter: Option<String>,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    #[serde(default)]
    pub columns: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    param: f64,
    d_p: f64,
    d_g: Option<f64>,
    q: f64,
    analytic_d_g: Option<f64>,
    abs_err: Option<f64>,
}

impl SweepSpec {
    fn from_args(a: &SweepArgs) -> Result<Self, CliError> {
        if let Some(path) = &a.spec {
            return serde_json::from_str(&read_input(path)?)
                .map_err(|e| CliError::Input(format!("invalid sweep spec: {e}")));
        }
        let missing = |flag: &str| CliError::Input(format!("sweep needs --{flag} (or --spec)"));
        Ok(SweepSpec {
            family: a.family.ok_or_else(|| missing("family"))?,
            m: a.m.ok_or_else(|| missing("m"))?,
            n: a.n,
            parameter: a.param.clone(),
            start: a.start.ok_or_else(|| missing("start"))?,
            stop: a.stop.ok_or_else(|| missing("stop"))?,
            steps: a.steps.ok_or_else(|| missing("steps"))?,
            columns: a.columns.clone(),
        })
    }

    fn parameter_name(&self) -> Result<&'static str, CliError> {
        let expected = match self.family {
            SweepFamily::Werner | SweepFamily::Isotropic => "x",
            SweepFamily::PureSchmidt => "s1",
        };
        match self.parameter.as_deref() {
            None => Ok(expected),
            Some(p) if p == expected => Ok(expected),
            Some(p) => Err(CliError::Input(format!("family {:?} sweeps `{expected}`, not `{p}`", self.family))),
        }
    }

    fn grid(&self) -> Result<Vec<f64>, CliError> {
        if self.steps < 2 {
            return Err(CliError::Input(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Input("sweep range must be finite".into()));
        }
        let k = (self.steps - 1) as f64;
        Ok((0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + (self.stop - self.start) * i as f64 / k })
            .collect())
    }

    fn state_at(&self, v: f64) -> Result<(DensityMatrix, AnalyticFamily), CliError> {
        let m = self.m;
        Ok(match self.family {
            SweepFamily::Werner => (state_zoo::werner(m, v)?, AnalyticFamily::Werner { m, x: v }),
            SweepFamily::Isotropic => (state_zoo::isotropic(m, v)?, AnalyticFamily::Isotropic { m, x: v }),
            SweepFamily::PureSchmidt => {
                if m < 2 {
                    return Err(CliError::Input("pure_schmidt needs m >= 2".into()));
                }
                // Remaining weight spread evenly over the other coefficients.
                let rest = (1.0 - v) / (m - 1) as f64;
                let mut s = vec![rest; m];
                s[0] = v;
                let n = self.n.unwrap_or(m);
                (state_zoo::pure_schmidt(&s, n)?, AnalyticFamily::PureSchmidt { s })
            }
        })
    }

    fn columns(&self, param: &str) -> Result<Vec<&'static str>, CliError> {
        let Some(cols) = &self.columns else {
            return Ok(ALL_COLUMNS.to_vec());
        };
        cols.iter()
            .map(|c| {
                let c = c.trim();
                let key = if c == param { "param" } else { c };
                ALL_COLUMNS
                    .iter()
                    .copied()
                    .find(|k| *k == key)
                    .ok_or_else(|| CliError::Input(format!("unknown column `{c}`")))
            })
            .collect()
    }
}

fn cell(row: &Row, col: &str) -> String {
    match col {
        "param" => float_cell(row.param),
        "d_p" => float_cell(row.d_p),
        "d_g" => opt_cell(row.d_g),
        "q" => float_cell(row.q),
        "analytic_d_g" => opt_cell(row.analytic_d_g),
        _ => opt_cell(row.abs_err),
    }
}

pub fn run(a: &SweepArgs, seed: u64, format: Format, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let spec = SweepSpec::from_args(a)?;
    sweep_spec(&spec, &a.optimizer, seed, format, out)
}

fn sweep_spec(
    spec: &SweepSpec,
    opt: &OptimizerArgs,
    seed: u64,
    format: Format,
    out: Option<&Path>,
) -> Result<ExitCode, CliError> {
    let param = spec.parameter_name()?;
    let columns = spec.columns(param)?;
    let cfg = report_config(opt, seed)?;
    // Validate the whole range before doing any optimization.
    let points: Vec<(f64, DensityMatrix, AnalyticFamily)> = spec
        .grid()?
        .into_iter()
        .map(|v| spec.state_at(v).map(|(rho, fam)| (v, rho, fam)))
        .collect::<Result<_, _>>()?;
    let rows: Vec<Row> = points
        .par_iter()
        .map(|(v, rho, fam)| {
            let report = measure_report(rho, &cfg)?;
            let analytic = analytic_reference(fam).ok().map(|r| r.d_g);
            let abs_err = match (report.d_g, analytic) {
                (Some(g), Some(a)) => Some((g - a).abs()),
                _ => None,
            };
            Ok(Row { param: *v, d_p: report.d_p, d_g: report.d_g, q: report.q, analytic_d_g: analytic, abs_err })
        })
        .collect::<Result<_, CliError>>()?;

    let bytes = match format {
        Format::Csv => {
            let header: Vec<String> =
                columns.iter().map(|c| if *c == "param" { param.to_string() } else { c.to_string() }).collect();
            let table: Vec<Vec<String>> = rows.iter().map(|r| columns.iter().map(|c| cell(r, c)).collect()).collect();
            csv_bytes(&header, &table)?
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    let full = serde_json::to_value(r).expect("row serializes");
                    columns
                        .iter()
                        .map(|c| {
                            let key = if *c == "param" { param } else { c };
                            (key.to_string(), full[*c].clone())
                        })
                        .collect()
                })
                .collect();
            json_bytes(&objects)?
        }
    };
    write_output(out, &bytes)?;
    Ok(ExitCode::SUCCESS)
}
