//! CSV and JSON serialization of campaign results.
//!
//! CSV columns are fixed: `trial,dim,property,nu,mu,lambda,margin,pass`, with
//! unset parameters written as empty fields. The JSON form holds the same
//! rows under `"reports"` next to a `"summary"` object.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::campaign::{CampaignError, CampaignResult};

pub const CSV_HEADER: [&str; 8] = ["trial", "dim", "property", "nu", "mu", "lambda", "margin", "pass"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format '{other}' (expected csv or json)")),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv<W: Write>(result: &CampaignResult, out: W) -> Result<(), CampaignError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &result.reports {
        w.write_record([
            r.trial.to_string(),
            r.dim.to_string(),
            r.property.name().to_string(),
            opt(r.nu),
            opt(r.mu),
            opt(r.lambda),
            r.margin.to_string(),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(result: &CampaignResult, mut out: W) -> Result<(), CampaignError> {
    serde_json::to_writer_pretty(&mut out, result)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn render(result: &CampaignResult, format: ReportFormat) -> Result<Vec<u8>, CampaignError> {
    let mut buf = Vec::new();
    match format {
        ReportFormat::Csv => write_csv(result, &mut buf)?,
        ReportFormat::Json => write_json(result, &mut buf)?,
    }
    Ok(buf)
}

pub fn write_report(result: &CampaignResult, format: ReportFormat, path: &Path) -> Result<(), CampaignError> {
    std::fs::write(path, render(result, format)?)?;
    Ok(())
}
