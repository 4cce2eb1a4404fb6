//! Side-by-side comparison of the two summation conventions along a sweep.

use std::fmt;

use super::{group_by_channel, run_sweep, ModeSelection, SweepConfig, SweepRow};
use crate::error::Result;
use crate::qfi::SummationMode;

/// Largest change of a curve between adjacent grid points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jump {
    pub p_from: f64,
    pub p_to: f64,
    /// `mean_f(p_to) − mean_f(p_from)`.
    pub delta: f64,
}

impl Jump {
    pub fn size(&self) -> f64 {
        self.delta.abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelDiscrepancy {
    pub channel: String,
    /// `(p, mean_f paper, mean_f full)` per grid point.
    pub points: Vec<(f64, f64, f64)>,
    pub paper_jump: Option<Jump>,
    pub full_jump: Option<Jump>,
}

impl ChannelDiscrepancy {
    pub fn max_gap(&self) -> f64 {
        self.points
            .iter()
            .map(|(_, a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub channels: Vec<ChannelDiscrepancy>,
}

fn largest_jump(curve: &[(f64, f64)]) -> Option<Jump> {
    curve
        .windows(2)
        .map(|w| Jump {
            p_from: w[0].0,
            p_to: w[1].0,
            delta: w[1].1 - w[0].1,
        })
        .fold(None, |best: Option<Jump>, j| match best {
            Some(b) if b.size() >= j.size() => Some(b),
            _ => Some(j),
        })
}

impl DiscrepancyReport {
    /// Builds the report from rows that contain both modes.
    pub fn from_rows(rows: &[SweepRow]) -> Self {
        let channels = group_by_channel(rows)
            .into_iter()
            .map(|(channel, rows)| {
                let curve = |mode: SummationMode| -> Vec<(f64, f64)> {
                    rows.iter()
                        .filter(|r| r.mode == mode)
                        .map(|r| (r.p, r.mean_f))
                        .collect()
                };
                let paper = curve(SummationMode::PaperSupport);
                let full = curve(SummationMode::FullSpectrum);
                let points = paper
                    .iter()
                    .zip(&full)
                    .map(|(&(p, a), &(_, b))| (p, a, b))
                    .collect();
                ChannelDiscrepancy {
                    channel,
                    points,
                    paper_jump: largest_jump(&paper),
                    full_jump: largest_jump(&full),
                }
            })
            .collect();
        Self { channels }
    }
}

/// Runs the sweep with both conventions and compares them.
pub fn discrepancy_report(cfg: &SweepConfig) -> Result<DiscrepancyReport> {
    let cfg = SweepConfig {
        mode: ModeSelection::Both,
        ..cfg.clone()
    };
    Ok(DiscrepancyReport::from_rows(&run_sweep(&cfg)?))
}

impl fmt::Display for DiscrepancyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ch in &self.channels {
            writeln!(f, "channel {}", ch.channel)?;
            writeln!(
                f,
                "{:>10}  {:>14}  {:>14}  {:>14}",
                "p", "mean_f paper", "mean_f full", "|difference|"
            )?;
            for (p, a, b) in &ch.points {
                writeln!(
                    f,
                    "{p:>10.6}  {a:>14.9}  {b:>14.9}  {:>14.9}",
                    (a - b).abs()
                )?;
            }
            for (name, jump) in [("paper", ch.paper_jump), ("full", ch.full_jump)] {
                match jump {
                    Some(j) => writeln!(
                        f,
                        "largest {name} jump: {:+.9} between p={:.6} and p={:.6}",
                        j.delta, j.p_from, j.p_to
                    )?,
                    None => writeln!(f, "largest {name} jump: n/a")?,
                }
            }
            writeln!(f, "max |paper - full|: {:.9}", ch.max_gap())?;
            writeln!(f)?;
        }
        Ok(())
    }
}
