//! Analytic results for the three-qubit W state, used as an oracle for
//! the numeric pipeline.

use crate::channels::ChannelKind;
use crate::error::{QfiError, Result};

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QfiError::InvalidArgument(format!(
            "channel strength p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Spectrum of the depolarized W₃ state, with multiplicities.
pub fn w3_dpc_eigenvalues(p: f64) -> Result<[f64; 8]> {
    check_p(p)?;
    let p2 = p * p;
    let p3 = p2 * p;
    let l34 = p * (8.0 - 6.0 * p + p2) / 24.0;
    let l78 = (4.0 * p - p3) / 24.0;
    Ok([
        (p - 2.0) * (p - 2.0) * p / 8.0,
        -(p - 2.0) * p2 / 8.0,
        l34,
        l34,
        p * (16.0 - 24.0 * p + 11.0 * p2) / 24.0,
        (24.0 - 52.0 * p + 42.0 * p2 - 11.0 * p3) / 24.0,
        l78,
        l78,
    ])
}

/// Spectrum of the amplitude-damped W₃ state, zero padded.
pub fn w3_adc_eigenvalues(p: f64) -> Result<[f64; 8]> {
    check_p(p)?;
    Ok([1.0 - p, p, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
}

/// Spectrum of the phase-damped W₃ state, zero padded.
pub fn w3_pdc_eigenvalues(p: f64) -> Result<[f64; 8]> {
    check_p(p)?;
    let small = (2.0 * p - p * p) / 3.0;
    Ok([
        small,
        small,
        (3.0 - 4.0 * p + 2.0 * p * p) / 3.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ])
}

pub fn w3_eigenvalues(kind: ChannelKind, p: f64) -> Result<[f64; 8]> {
    match kind {
        ChannelKind::Depolarizing => w3_dpc_eigenvalues(p),
        ChannelKind::AmplitudeDamping => w3_adc_eigenvalues(p),
        ChannelKind::PhaseDamping => w3_pdc_eigenvalues(p),
        ChannelKind::Custom => Err(QfiError::InvalidArgument(
            "no closed form for custom channels".into(),
        )),
    }
}

/// Piecewise mean QFI of W₃ under amplitude damping, support-only sum:
/// 7/3 at p = 0, otherwise (1 − 2p)².
pub fn adc_mean_qfi_paper(p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        return Ok(7.0 / 3.0);
    }
    Ok((1.0 - 2.0 * p) * (1.0 - 2.0 * p))
}

/// Piecewise mean QFI of W₃ under phase damping, support-only sum:
/// 7/3 at p = 0, zero for any p > 0.
pub fn pdc_mean_qfi_paper(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(if p == 0.0 { 7.0 / 3.0 } else { 0.0 })
}

/// Mean QFI of a pure W_n state, `3 − 2/n`.
pub fn pure_w_mean_qfi(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(QfiError::InvalidArgument(format!(
            "W state needs at least 2 qubits, got {n}"
        )));
    }
    Ok(3.0 - 2.0 / n as f64)
}
