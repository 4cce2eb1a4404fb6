use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qfi_core::sweep::{
    csv_string, discrepancy_report, emit_csv, emit_svg, group_by_channel, ChannelFamily,
    ChannelSpec, CurveGroup, ModeSelection, SweepSettings, EPSILON_ENV,
};
use qfi_core::{
    density_from_pure, max_mean_qfi, pure_state_qfi, qcrb, qfi_along, run_sweep, Direction,
    QfiError, Result, StateSpec, SummationMode,
};

/// Quantum Fisher information of multiqubit states under decoherence.
#[derive(Debug, Parser)]
#[command(name = "qfi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the channel strength over a grid and write CSV / SVG.
    Sweep(SweepArgs),
    /// Evaluate the QFI of a single state at one channel strength.
    Qfi(QfiArgs),
    /// Check the completeness relation of a channel.
    ValidateChannel(ValidateArgs),
    /// Compare the support-only and full-spectrum conventions on a sweep.
    Report(SweepArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Plain-text key=value file supplying any of the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// w, ghz, dicke:k or zero.
    #[arg(long)]
    state: Option<StateSpec>,
    #[arg(long = "n-qubits", visible_alias = "n")]
    n_qubits: Option<usize>,
    /// dpc, adc, pdc, custom:<path>, a comma-separated list, or all.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    p_start: Option<f64>,
    #[arg(long)]
    p_end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// paper, full or both.
    #[arg(long)]
    mode: Option<ModeSelection>,
    /// Support tolerance for eigenvalues (default 1e-10, or $QFI_EPSILON).
    #[arg(long)]
    epsilon: Option<f64>,
    /// CSV output; with several channels the channel name is appended to
    /// the file stem. Printed to stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Number of repetitions for the Cramér-Rao column.
    #[arg(long)]
    n_m: Option<u64>,
}

#[derive(Debug, Args)]
struct QfiArgs {
    #[arg(long, default_value = "w")]
    state: StateSpec,
    #[arg(long = "n-qubits", visible_alias = "n", default_value_t = 3)]
    n_qubits: usize,
    /// dpc, adc, pdc or custom:<path>; omit for the pure state.
    #[arg(long)]
    channel: Option<ChannelSpec>,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long, default_value = "paper")]
    mode: SummationMode,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 1)]
    n_m: u64,
    /// Also report the QFI along this axis (x, y, z or "nx,ny,nz").
    #[arg(long)]
    direction: Option<Direction>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// dpc, adc, pdc or custom:<path>.
    #[arg(long)]
    channel: ChannelSpec,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
}

impl SweepArgs {
    fn settings(&self) -> Result<SweepSettings> {
        let flags = SweepSettings {
            state: self.state,
            n_qubits: self.n_qubits,
            channels: self
                .channel
                .as_deref()
                .map(ChannelSpec::parse_list)
                .transpose()?,
            p_start: self.p_start,
            p_end: self.p_end,
            steps: self.steps,
            mode: self.mode,
            epsilon: self.epsilon,
            csv: self.csv.clone(),
            svg: self.svg.clone(),
            n_m: self.n_m,
        };
        let file = match &self.config {
            Some(path) => SweepSettings::from_file(path)?,
            None => SweepSettings::default(),
        };
        Ok(flags.or(file))
    }
}

fn env_epsilon() -> Option<String> {
    std::env::var(EPSILON_ENV).ok()
}

fn channel_csv_path(base: &Path, channel: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tag: String = channel
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    base.with_file_name(name)
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = args.settings()?.finish(env_epsilon().as_deref())?;
    let rows = run_sweep(&cfg)?;
    if rows.is_empty() {
        return Err(QfiError::EmptyResult);
    }
    let groups = group_by_channel(&rows);
    match &cfg.csv {
        Some(path) if groups.len() == 1 => emit_csv(&rows, path)?,
        Some(path) => {
            for (label, g) in &groups {
                emit_csv(g, &channel_csv_path(path, label))?;
            }
        }
        None if groups.len() == 1 => print!("{}", csv_string(&rows)),
        None => {
            for (label, g) in &groups {
                println!("# channel {label}");
                print!("{}", csv_string(g));
            }
        }
    }
    if let Some(path) = &cfg.svg {
        let curves: Vec<CurveGroup> = groups
            .iter()
            .map(|(label, g)| CurveGroup { label, rows: g })
            .collect();
        let psi = cfg.state.build(cfg.n_qubits)?;
        let pure = max_mean_qfi(
            &density_from_pure(&psi),
            qfi_core::SummationMode::FullSpectrum,
            cfg.epsilon,
        )?;
        emit_svg(&curves, Some(pure.mean_f), path)?;
    }
    Ok(())
}

fn cmd_report(args: &SweepArgs) -> Result<()> {
    let cfg = args.settings()?.finish(env_epsilon().as_deref())?;
    print!("{}", discrepancy_report(&cfg)?);
    Ok(())
}

fn cmd_qfi(args: &QfiArgs) -> Result<()> {
    let epsilon = qfi_core::sweep::resolve_epsilon(args.epsilon, env_epsilon().as_deref())?;
    let psi = args.state.build(args.n_qubits)?;
    let mut rho = density_from_pure(&psi);
    if let Some(spec) = &args.channel {
        rho = ChannelFamily::load(spec)?.at(args.p)?.apply_uniform(&rho)?;
    }
    let r = max_mean_qfi(&rho, args.mode, epsilon)?;
    println!("state        {} (N = {})", args.state, args.n_qubits);
    match &args.channel {
        Some(spec) => println!("channel      {} at p = {}", spec.label(), args.p),
        None => println!("channel      none (pure state)"),
    }
    println!("mode         {}", r.mode);
    println!("epsilon      {:e}", r.epsilon);
    println!("C matrix");
    for row in r.c_matrix.0 {
        println!("  {:>16.10} {:>16.10} {:>16.10}", row[0], row[1], row[2]);
    }
    println!("c_max        {:.12}", r.c_max);
    println!("f_max        {:.12}", r.f_max);
    println!("mean_f       {:.12}", r.mean_f);
    match qcrb(r.f_max, args.n_m) {
        Ok(b) => println!("qcrb         {b:.12} (n_m = {})", args.n_m),
        Err(_) => println!("qcrb         inf (no phase information)"),
    }
    println!("class        {}", r.classification);
    if let Some(d) = args.direction {
        println!(
            "qfi_along    {:.12}",
            qfi_along(&rho, d, args.mode, epsilon)?
        );
        if args.channel.is_none() {
            println!("pure 4Var    {:.12}", pure_state_qfi(&psi, d)?);
        }
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<()> {
    let ch = ChannelFamily::load(&args.channel)?.at(args.p)?;
    let dev = ch.validate()?;
    println!(
        "ok: {} at p = {} satisfies completeness (max deviation {dev:e})",
        args.channel.label(),
        args.p
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion
                | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Qfi(a) => cmd_qfi(a),
        Command::ValidateChannel(a) => cmd_validate(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
