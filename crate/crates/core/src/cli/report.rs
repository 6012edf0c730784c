//! Rendering of decomposition tables.

use serde::Serialize;

use crate::decompose::{DecompositionReport, ReportRow};
use crate::half::{format_halves, Half};

use super::state_file::FORMAT_VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

pub fn vector_id(index: usize, row: &ReportRow) -> String {
    format!("v{index:03}-d{}", row.degree)
}

fn list<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

#[derive(Serialize)]
struct JsonRow {
    degree: usize,
    energy: Half,
    d: Half,
    s: Vec<u64>,
    sigma: Vec<u64>,
    mu: Vec<Half>,
    gauge_dim: String,
    vector_id: String,
}

#[derive(Serialize)]
struct JsonReport {
    format_version: &'static str,
    n: usize,
    p: usize,
    max_degree: usize,
    rows: Vec<JsonRow>,
}

pub fn render(report: &DecompositionReport, format: Format) -> String {
    let ids: Vec<String> = report.rows.iter().enumerate().map(|(i, r)| vector_id(i, r)).collect();
    match format {
        Format::Json => {
            let doc = JsonReport {
                format_version: FORMAT_VERSION,
                n: report.params.n(),
                p: report.params.p(),
                max_degree: report.max_degree,
                rows: report
                    .rows
                    .iter()
                    .zip(&ids)
                    .map(|(r, id)| JsonRow {
                        degree: r.degree,
                        energy: r.energy,
                        d: r.osp.d,
                        s: r.osp.s.clone(),
                        sigma: r.gauge.sigma.clone(),
                        mu: r.mu.clone(),
                        gauge_dim: r.gauge_dim.to_string(),
                        vector_id: id.clone(),
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
        Format::Tsv => {
            let mut out = String::from("degree\tenergy\td\ts-vector\tsigma-vector\tmu-vector\tgauge_dim\tvector_id\n");
            for (r, id) in report.rows.iter().zip(&ids) {
                out += &format!(
                    "{}\t{}\t{}\t{}\t{}\t({})\t{}\t{}\n",
                    r.degree,
                    r.energy,
                    r.osp.d,
                    list(&r.osp.s),
                    list(&r.gauge.sigma),
                    format_halves(&r.mu),
                    r.gauge_dim,
                    id
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = format!(
                "joint lowest/highest weight vectors, n = {}, p = {}, degrees 0..={}\n",
                report.params.n(),
                report.params.p(),
                report.max_degree
            );
            let header = ["degree", "E", "osp signature", "sigma", "mu", "dim", "vector"];
            let rows: Vec<[String; 7]> = report
                .rows
                .iter()
                .zip(&ids)
                .map(|(r, id)| {
                    [
                        r.degree.to_string(),
                        r.energy.to_string(),
                        r.osp.to_string(),
                        r.gauge.to_string(),
                        format!("({})", format_halves(&r.mu)),
                        r.gauge_dim.to_string(),
                        id.clone(),
                    ]
                })
                .collect();
            let widths: Vec<usize> = (0..7)
                .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([header[c].len()]).max().unwrap())
                .collect();
            let line = |cells: Vec<&str>| -> String {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
                    + "\n"
            };
            out += &line(header.to_vec());
            for r in &rows {
                out += &line(r.iter().map(String::as_str).collect());
            }
            if rows.is_empty() {
                out += "(no rows)\n";
            }
            out
        }
    }
}
