use std::fs;
use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use geodiscord::acceptance::{run_all, CriterionOutcome, SuiteOptions};
use geodiscord::io::{parse_state, state_to_json};
use geodiscord::measures::{measure_report, MeasureReport, ReportConfig};
use geodiscord::operator_basis::GeneratorOrdering;
use geodiscord::state_zoo::StateSpec;
use geodiscord::{DiscordError, OptimizerConfig};
use serde::Serialize;

use crate::args::{AnalyzeArgs, Cli, Command, Family, Format, GenerateArgs, OptimizerArgs, SelftestArgs};
use crate::output::{csv_bytes, float_cell, json_bytes, opt_cell, write_output};
use crate::sweep;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] DiscordError),
}

pub fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Analyze(a) => analyze(a, cli.seed, cli.format.unwrap_or(Format::Json), out),
        Command::Generate(g) => generate(g, cli.seed, cli.format.unwrap_or(Format::Json), out),
        Command::Sweep(s) => sweep::run(s, cli.seed, cli.format.unwrap_or(Format::Csv), out),
        Command::Selftest(s) => selftest(s, cli.seed, cli.format, out),
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
    }
}

pub fn report_config(opt: &OptimizerArgs, seed: u64) -> Result<ReportConfig, CliError> {
    if opt.restarts == 0 && !opt.skip_dg {
        return Err(CliError::Input("--restarts must be at least 1".into()));
    }
    Ok(ReportConfig {
        optimizer: OptimizerConfig { restarts: opt.restarts.max(1), seed, ..OptimizerConfig::default() },
        skip_dg: opt.skip_dg,
    })
}

fn ok() -> Result<ExitCode, CliError> {
    Ok(ExitCode::SUCCESS)
}

fn analyze(a: &AnalyzeArgs, seed: u64, format: Format, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let mut rho = parse_state(&read_input(&a.input)?)?;
    if a.swap_parties {
        rho = rho.swap_parties();
    }
    let report = measure_report(&rho, &report_config(&a.optimizer, seed)?)?;
    let bytes = match format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => report_csv(&report)?,
    };
    write_output(out, &bytes)?;
    ok()
}

fn report_csv(r: &MeasureReport) -> Result<Vec<u8>, CliError> {
    let header = ["m", "n", "d_p", "i_p", "c_p", "q", "d_g", "d_g_method", "d_g_converged", "zero_discord"];
    let method = serde_json::to_value(r.d_g_method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let row = vec![
        r.m.to_string(),
        r.n.to_string(),
        float_cell(r.d_p),
        float_cell(r.i_p),
        float_cell(r.c_p),
        float_cell(r.q),
        opt_cell(r.d_g),
        method,
        r.d_g_converged.to_string(),
        r.zero_discord.to_string(),
    ];
    csv_bytes(&header.map(String::from), &[row])
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("family {family} needs --{flag}")))
}

fn spec_from_flags(g: &GenerateArgs, seed: u64) -> Result<StateSpec, CliError> {
    let family = g.family.ok_or_else(|| CliError::Input("either --spec or --family is required".into()))?;
    let name = format!("{family:?}");
    Ok(match family {
        Family::Werner => StateSpec::Werner { m: need(g.m, "m", &name)?, x: need(g.x, "x", &name)? },
        Family::Isotropic => StateSpec::Isotropic { m: need(g.m, "m", &name)?, x: need(g.x, "x", &name)? },
        Family::PureSchmidt => {
            let s = need(g.s.clone(), "s", &name)?;
            let n = g.n.unwrap_or(s.len());
            StateSpec::PureSchmidt { s, n }
        }
        Family::MaxEntangled => StateSpec::MaxEntangled { m: need(g.m, "m", &name)? },
        Family::ClassicalQuantum => StateSpec::ClassicalQuantum {
            m: need(g.m, "m", &name)?,
            n: need(g.n, "n", &name)?,
            p: g.p.clone(),
            seed,
        },
        Family::Product => StateSpec::Product { m: need(g.m, "m", &name)?, n: need(g.n, "n", &name)?, seed },
        Family::RandomMixed => {
            StateSpec::RandomMixed { m: need(g.m, "m", &name)?, n: need(g.n, "n", &name)?, rank: g.rank, seed }
        }
        Family::RandomPure => StateSpec::RandomPure { m: need(g.m, "m", &name)?, n: need(g.n, "n", &name)?, seed },
    })
}

fn generate(g: &GenerateArgs, seed: u64, format: Format, out: Option<&Path>) -> Result<ExitCode, CliError> {
    if format != Format::Json {
        return Err(CliError::Input("generate only writes matrix JSON".into()));
    }
    let spec = match &g.spec {
        Some(path) => serde_json::from_str::<StateSpec>(&read_input(path)?)
            .map_err(|e| CliError::Input(format!("invalid state spec: {e}")))?,
        None => spec_from_flags(g, seed)?,
    };
    let rho = spec.build()?;
    let mut text = state_to_json(&rho);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_output(out, text.as_bytes())?;
    ok()
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    id: u8,
    name: &'a str,
    passed: bool,
    measured: f64,
    threshold: f64,
    samples: usize,
    elapsed_seconds: f64,
    time_limit_seconds: u64,
    detail: &'a str,
}

impl<'a> From<&'a CriterionOutcome> for OutcomeJson<'a> {
    fn from(o: &'a CriterionOutcome) -> Self {
        OutcomeJson {
            id: o.id,
            name: o.name,
            passed: o.passed(),
            measured: o.measured,
            threshold: o.threshold,
            samples: o.samples,
            elapsed_seconds: o.elapsed.as_secs_f64(),
            time_limit_seconds: o.time_limit.as_secs(),
            detail: &o.detail,
        }
    }
}

fn selftest(s: &SelftestArgs, seed: u64, format: Option<Format>, out: Option<&Path>) -> Result<ExitCode, CliError> {
    let opts = SuiteOptions {
        quick: s.quick,
        ordering: if s.corrupt_generator_ordering {
            GeneratorOrdering::CorruptedForTesting
        } else {
            GeneratorOrdering::CartanFirst
        },
        optimizer: OptimizerConfig { seed, ..OptimizerConfig::default() },
    };
    let outcomes = run_all(&opts);
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let bytes = match format {
        Some(Format::Json) => json_bytes(&outcomes.iter().map(OutcomeJson::from).collect::<Vec<_>>())?,
        Some(Format::Csv) => {
            let header = ["id", "name", "passed", "measured", "threshold", "samples", "elapsed_seconds"];
            let rows: Vec<Vec<String>> = outcomes
                .iter()
                .map(|o| {
                    vec![
                        o.id.to_string(),
                        o.name.to_string(),
                        o.passed().to_string(),
                        float_cell(o.measured),
                        float_cell(o.threshold),
                        o.samples.to_string(),
                        format!("{:.3}", o.elapsed.as_secs_f64()),
                    ]
                })
                .collect();
            csv_bytes(&header.map(String::from), &rows)?
        }
        None => {
            let mut text: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
            text.push_str(&format!("{} of {} criteria passed\n", outcomes.len() - failed, outcomes.len()));
            text.into_bytes()
        }
    };
    write_output(out, &bytes)?;
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
