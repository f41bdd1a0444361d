use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::report::{format12, round12, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    /// Optimized Bell value over the qutrit Schmidt triangle.
    Fig1,
    /// Entropy and optimized value along route r1.
    Fig2R1,
    /// Entropy and optimized value along route r2.
    Fig2R2,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2R1 => "fig2-r1",
            Figure::Fig2R2 => "fig2-r2",
        }
    }

    pub fn default_resolution(self) -> usize {
        match self {
            Figure::Fig1 => 40,
            Figure::Fig2R1 | Figure::Fig2R2 => 50,
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1 => &["c0sq", "c1sq", "c2sq", "bell_max"],
            Figure::Fig2R1 | Figure::Fig2R2 => &["entropy", "bell_max"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Figure data as emitted; values are already rounded to 12 significant digits.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FigureData {
    pub schema_version: String,
    pub figure: Figure,
    pub resolution: usize,
    pub restarts: usize,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureData {
    pub fn new(
        figure: Figure,
        resolution: usize,
        restarts: usize,
        seed: u64,
        rows: Vec<Vec<f64>>,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            figure,
            resolution,
            restarts,
            seed,
            columns: figure.columns().iter().map(|c| c.to_string()).collect(),
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(round12).collect())
                .collect(),
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                out.write_all(b"\n")
            }
            Format::Csv => {
                out.write_all(self.columns.join(",").as_bytes())?;
                out.write_all(b"\n")?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&x| format12(x)).collect();
                    out.write_all(cells.join(",").as_bytes())?;
                    out.write_all(b"\n")?;
                }
                Ok(())
            }
        }
    }
}
