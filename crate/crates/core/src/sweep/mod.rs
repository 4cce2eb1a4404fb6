//! Decoherence-strength sweeps and their CSV / SVG / text outputs.

mod config;
mod csv;
mod report;
mod svg;

use std::path::PathBuf;
use std::str::FromStr;

pub use self::config::{resolve_epsilon, SweepSettings, EPSILON_ENV};
pub use self::csv::{csv_string, emit_csv, format_sig, CSV_HEADER};
pub use self::report::{discrepancy_report, ChannelDiscrepancy, DiscrepancyReport, Jump};
pub use self::svg::{emit_svg, svg_string, CurveGroup};

use crate::channels::{read_kraus_file, ChannelKind, KrausChannel};
use crate::error::{QfiError, Result};
use crate::matcore::{hermitian_eig, ComplexMatrix};
use crate::par;
use crate::qfi::{c_matrix_from_eigen, qcrb, result_from_c, Classification, SummationMode};
use crate::states::{density_from_pure, DensityMatrix, StateSpec};

/// Which summation conventions a sweep evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSelection {
    Paper,
    Full,
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> &'static [SummationMode] {
        match self {
            ModeSelection::Paper => &[SummationMode::PaperSupport],
            ModeSelection::Full => &[SummationMode::FullSpectrum],
            ModeSelection::Both => &[SummationMode::PaperSupport, SummationMode::FullSpectrum],
        }
    }
}

impl FromStr for ModeSelection {
    type Err = QfiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(ModeSelection::Paper),
            "full" => Ok(ModeSelection::Full),
            "both" => Ok(ModeSelection::Both),
            other => Err(QfiError::InvalidArgument(format!(
                "unknown mode {other:?} (expected paper, full or both)"
            ))),
        }
    }
}

/// `dpc`, `adc`, `pdc` or `custom:<path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChannelSpec {
    Builtin(ChannelKind),
    Custom(PathBuf),
}

impl ChannelSpec {
    pub fn label(&self) -> String {
        match self {
            ChannelSpec::Builtin(kind) => kind.short_name().to_string(),
            ChannelSpec::Custom(path) => format!("custom:{}", path.display()),
        }
    }

    /// Parses a comma-separated list; `all` expands to the three built-ins.
    pub fn parse_list(s: &str) -> Result<Vec<ChannelSpec>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(
                    [
                        ChannelKind::Depolarizing,
                        ChannelKind::AmplitudeDamping,
                        ChannelKind::PhaseDamping,
                    ]
                    .map(ChannelSpec::Builtin),
                );
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(QfiError::InvalidArgument("no channel given".into()));
        }
        Ok(out)
    }
}

impl FromStr for ChannelSpec {
    type Err = QfiError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dpc" => Ok(ChannelSpec::Builtin(ChannelKind::Depolarizing)),
            "adc" => Ok(ChannelSpec::Builtin(ChannelKind::AmplitudeDamping)),
            "pdc" => Ok(ChannelSpec::Builtin(ChannelKind::PhaseDamping)),
            other => match other.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Ok(ChannelSpec::Custom(PathBuf::from(path))),
                _ => Err(QfiError::InvalidArgument(format!(
                    "unknown channel {other:?} (expected dpc, adc, pdc or custom:<path>)"
                ))),
            },
        }
    }
}

/// Channel family ready to be instantiated at any strength.
#[derive(Clone, Debug)]
pub enum ChannelFamily {
    Builtin(ChannelKind),
    /// `(1-p)·id + p·E` for user-supplied operators `E`.
    Custom(Vec<ComplexMatrix>),
}

impl ChannelFamily {
    pub fn load(spec: &ChannelSpec) -> Result<Self> {
        match spec {
            ChannelSpec::Builtin(kind) => Ok(ChannelFamily::Builtin(*kind)),
            ChannelSpec::Custom(path) => {
                let ops = read_kraus_file(path)?;
                KrausChannel::custom(ops.clone())?.validate()?;
                Ok(ChannelFamily::Custom(ops))
            }
        }
    }

    pub fn at(&self, p: f64) -> Result<KrausChannel> {
        match self {
            ChannelFamily::Builtin(kind) => KrausChannel::of_kind(*kind, p),
            ChannelFamily::Custom(ops) => KrausChannel::custom_mixture(ops, p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub state: StateSpec,
    pub n_qubits: usize,
    pub channels: Vec<ChannelSpec>,
    pub p_start: f64,
    pub p_end: f64,
    pub steps: usize,
    pub mode: ModeSelection,
    pub epsilon: f64,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub n_m: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            state: StateSpec::W,
            n_qubits: 3,
            channels: vec![ChannelSpec::Builtin(ChannelKind::AmplitudeDamping)],
            p_start: 0.0,
            p_end: 1.0,
            steps: 101,
            mode: ModeSelection::Paper,
            epsilon: crate::qfi::DEFAULT_EPSILON,
            csv: None,
            svg: None,
            n_m: 1,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(QfiError::InvalidArgument(msg));
        if !(0.0..=1.0).contains(&self.p_start) || !(0.0..=1.0).contains(&self.p_end) {
            return bad(format!(
                "p range [{}, {}] must lie within [0, 1]",
                self.p_start, self.p_end
            ));
        }
        if self.p_start > self.p_end {
            return bad(format!(
                "p-start {} exceeds p-end {}",
                self.p_start, self.p_end
            ));
        }
        if self.steps < 2 {
            return bad(format!("steps must be at least 2, got {}", self.steps));
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.n_m == 0 {
            return bad("n-m must be at least 1".into());
        }
        if self.channels.is_empty() {
            return bad("no channel given".into());
        }
        Ok(())
    }

    /// `p_start + k (p_end − p_start)/(steps − 1)` for `k = 0..steps`.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.p_end
                } else {
                    self.p_start + (self.p_end - self.p_start) * (k as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub channel: String,
    pub p: f64,
    pub mode: SummationMode,
    pub c_xx: f64,
    pub c_yy: f64,
    pub c_zz: f64,
    /// Largest |off-diagonal| entry of C.
    pub c_off: f64,
    pub c_max: f64,
    pub f_max: f64,
    pub mean_f: f64,
    /// `None` when F = 0 (no phase information).
    pub qcrb: Option<f64>,
    pub classification: Classification,
}

/// Evaluates every requested mode at one strength.
pub fn evaluate_point(
    rho0: &DensityMatrix,
    family: &ChannelFamily,
    label: &str,
    p: f64,
    modes: &[SummationMode],
    epsilon: f64,
    n_m: u64,
) -> Result<Vec<SweepRow>> {
    let rho = family.at(p)?.apply_uniform(rho0)?;
    let eig = hermitian_eig(rho.matrix())?;
    let n = rho.n_qubits();
    modes
        .iter()
        .map(|&mode| {
            let c = c_matrix_from_eigen(&eig, n, mode, epsilon)?;
            let r = result_from_c(c, n, mode, epsilon);
            let [c_xx, c_yy, c_zz] = c.diagonal();
            Ok(SweepRow {
                channel: label.to_string(),
                p,
                mode,
                c_xx,
                c_yy,
                c_zz,
                c_off: c.max_off_diagonal(),
                c_max: r.c_max,
                f_max: r.f_max,
                mean_f: r.mean_f,
                qcrb: qcrb(r.f_max, n_m).ok(),
                classification: r.classification,
            })
        })
        .collect()
}

struct Prepared {
    rho0: DensityMatrix,
    families: Vec<(String, ChannelFamily)>,
    tasks: Vec<(usize, f64)>,
}

fn prepare(cfg: &SweepConfig) -> Result<Prepared> {
    cfg.validate()?;
    let rho0 = density_from_pure(&cfg.state.build(cfg.n_qubits)?);
    let families = cfg
        .channels
        .iter()
        .map(|spec| Ok((spec.label(), ChannelFamily::load(spec)?)))
        .collect::<Result<Vec<_>>>()?;
    let grid = cfg.grid();
    let tasks = (0..families.len())
        .flat_map(|c| grid.iter().map(move |&p| (c, p)))
        .collect();
    Ok(Prepared {
        rho0,
        families,
        tasks,
    })
}

fn run_with(
    cfg: &SweepConfig,
    map: impl FnOnce(
        &[(usize, f64)],
        &(dyn Fn(&(usize, f64)) -> Result<Vec<SweepRow>> + Sync),
    ) -> Vec<Result<Vec<SweepRow>>>,
) -> Result<Vec<SweepRow>> {
    let prep = prepare(cfg)?;
    let modes = cfg.mode.modes();
    let eval = |&(c, p): &(usize, f64)| {
        let (label, family) = &prep.families[c];
        evaluate_point(&prep.rho0, family, label, p, modes, cfg.epsilon, cfg.n_m)
    };
    let chunks = map(&prep.tasks, &eval);
    let mut rows = Vec::with_capacity(prep.tasks.len() * modes.len());
    for chunk in chunks {
        rows.extend(chunk?);
    }
    Ok(rows)
}

/// One row per (channel, grid point, mode), ordered by channel as given,
/// then ascending p, then paper before full. Grid points are evaluated on
/// the worker pool when the `parallel` feature is on.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_with(cfg, |tasks, f| par::map(tasks, f))
}

/// Same rows as [`run_sweep`], always on the calling thread.
pub fn run_sweep_serial(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_with(cfg, |tasks, f| par::map_serial(tasks, f))
}

/// Splits rows into per-channel groups, preserving first-seen order.
pub fn group_by_channel(rows: &[SweepRow]) -> Vec<(String, Vec<SweepRow>)> {
    let mut groups: Vec<(String, Vec<SweepRow>)> = Vec::new();
    for row in rows {
        match groups.iter_mut().find(|(label, _)| *label == row.channel) {
            Some((_, g)) => g.push(row.clone()),
            None => groups.push((row.channel.clone(), vec![row.clone()])),
        }
    }
    groups
}
