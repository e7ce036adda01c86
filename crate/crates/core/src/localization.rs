//! Localization radii of the ground state in the lab frame and in the
//! rotating frame.
//!
//! The rotating-frame density reduces to integrals over `θ ∈ [0, π/2]`
//! (with `sin θ = rΩ`):
//!
//! ```text
//! η = ∫ I₀(u) Y(w) sin θ dθ
//! ς = ∫ I₀′(u) Y(w) sin²θ dθ
//! ξ = ∫ I₀(u) Y(w) sin θ cos²θ dθ
//! u = ±κ√(𝓔₀² + 1) sin θ,   w = −κ(𝓔₀/2) sin²θ
//! ```
//!
//! They grow like `exp(cκ)`, so everything is carried as [`LogValue`]. The
//! quadrature runs in `s = π/2 − θ`, where the mass concentrates near `s = 0`
//! for large `κ`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logquad::{
    bessel_i0_prime_scaled, bessel_i0_scaled, integrate, integrate_mantissas, Grading, LogValue, QuadOptions,
};
use crate::params::{Branch, ModelParams};
use crate::wavefunction::{Convention, LabWavefunction};

/// Default relative tolerance of the rotating-frame quadratures.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Below this `κ` the large-`κ` statements about the rotating radius do not
/// apply and reports carry a warning.
pub const ASYMPTOTIC_KAPPA: f64 = 10.0;

/// Relative residual of the linear fit in [`asymptotic_coefficients`] above
/// which the fit is rejected.
pub const FIT_TOLERANCE: f64 = 1e-2;

/// Sign of `w` inside `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum YConvention {
    /// `Y(w) = e^w`, decaying in `κ sin²θ`.
    #[default]
    Decaying,
    /// `Y(−w)`, growing.
    Growing,
}

impl YConvention {
    fn sign(self) -> f64 {
        match self {
            YConvention::Decaying => 1.0,
            YConvention::Growing => -1.0,
        }
    }
}

impl std::fmt::Display for YConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            YConvention::Decaying => "decaying",
            YConvention::Growing => "growing",
        })
    }
}

impl std::str::FromStr for YConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decaying" => Ok(Self::Decaying),
            "growing" => Ok(Self::Growing),
            _ => Err(Error::InvalidInput(format!("unknown Y convention {s:?}"))),
        }
    }
}

/// Length in Compton units `ƛ` and in driving wavelengths `λ = 2πκƛ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Length {
    pub compton: f64,
    pub wavelengths: f64,
}

impl Length {
    pub fn from_compton(compton: f64, kappa: f64) -> Self {
        Self {
            compton,
            wavelengths: compton / (2.0 * PI * kappa),
        }
    }

    pub fn from_wavelengths(wavelengths: f64, kappa: f64) -> Self {
        Self {
            compton: wavelengths * 2.0 * PI * kappa,
            wavelengths,
        }
    }

    /// Physical length for a given reduced Compton wavelength.
    pub fn physical(&self, compton_length: f64) -> f64 {
        self.compton * compton_length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub panels: usize,
    pub relative_change: f64,
    pub rel_tol: f64,
}

/// The rotating-frame integrals at one `(κ, 𝓔₀, branch)`, plus the direct
/// quadratures of `∫I₀Y sin³θ` and `∫I₀′Y sin⁴θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotIntegrals {
    pub eta: LogValue,
    pub sigma: LogValue,
    pub xi: LogValue,
    pub sin3: LogValue,
    pub sin4: LogValue,
    /// `[η, ς, ξ, sin³, sin⁴]` divided by `exp(offset)`.
    pub mantissas: [f64; 5],
    pub kappa: f64,
    pub e0: f64,
    pub branch: Branch,
    pub y_convention: YConvention,
    /// Maximum of the exponent, `κ(√(𝓔₀²+1) ∓ 𝓔₀/2)`.
    pub offset: f64,
    pub convergence: Convergence,
}

impl RotIntegrals {
    fn sin3_mantissa(&self) -> f64 {
        let [eta, _, xi, _, _] = self.mantissas;
        eta - xi
    }

    fn sin4_mantissa(&self) -> f64 {
        let [_, sigma, xi, _, _] = self.mantissas;
        let a = (self.e0 * self.e0 + 1.0).sqrt();
        sigma - self.branch.sign() * a / self.e0 * xi + sigma / (self.kappa * self.e0)
    }

    /// `η − ξ`.
    pub fn sin3_identity(&self) -> LogValue {
        LogValue::from_scaled(self.sin3_mantissa(), self.offset)
    }

    /// `ς ∓ (√(𝓔₀²+1)/𝓔₀)ξ + ς/(κ𝓔₀)`.
    pub fn sin4_identity(&self) -> LogValue {
        LogValue::from_scaled(self.sin4_mantissa(), self.offset)
    }

    /// `[η, ς, ξ]` divided by `exp(log_ref)`.
    pub fn scaled(&self, log_ref: f64) -> [f64; 3] {
        let f = (self.offset - log_ref).exp();
        [self.mantissas[0] * f, self.mantissas[1] * f, self.mantissas[2] * f]
    }
}

fn check_rot_inputs(kappa: f64, e0: f64) -> Result<()> {
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "kappa must be finite and non-negative, got {kappa}"
        )));
    }
    if !(e0 > 0.0 && e0.is_finite()) {
        return Err(Error::InvalidInput(format!("e0 must be positive, got {e0}")));
    }
    Ok(())
}

/// Computes [`RotIntegrals`] in one pass over a shared exponent.
pub fn rot_integrals(kappa: f64, e0: f64, branch: Branch, y: YConvention, rel_tol: f64) -> Result<RotIntegrals> {
    check_rot_inputs(kappa, e0)?;
    let a = (e0 * e0 + 1.0).sqrt();
    let b = 0.5 * e0 * y.sign();
    let br = branch.sign();
    let offset = kappa * (a - b);
    // Laplace width of the peak at s = 0: exponent ≈ −κ(a/2 − b)s².
    let curvature = kappa * (0.5 * a - b);
    let width = if curvature > 0.0 {
        curvature.sqrt().recip()
    } else {
        f64::INFINITY
    };
    let opts = QuadOptions::new(0.0, FRAC_PI_2)
        .rel_tol(rel_tol)
        .grading(Grading::Geometric { width });
    let f = |s: f64| {
        let (sin_s, cos_s) = s.sin_cos();
        let half = (0.5 * s).sin();
        let u = br * kappa * a * cos_s;
        let i0 = bessel_i0_scaled(u).value;
        let i1 = bessel_i0_prime_scaled(u).value;
        let exponent = -2.0 * kappa * a * half * half + kappa * b * sin_s * sin_s;
        let c2 = cos_s * cos_s;
        (
            [
                i0 * cos_s,
                i1 * c2,
                i0 * cos_s * sin_s * sin_s,
                i0 * cos_s * c2,
                i1 * c2 * c2,
            ],
            exponent,
        )
    };
    let r = integrate_mantissas(f, &opts)?;
    let [eta, sigma, xi, sin3, sin4] = r.value.map(|m| LogValue::from_scaled(m, offset));
    Ok(RotIntegrals {
        eta,
        sigma,
        xi,
        sin3,
        sin4,
        mantissas: r.value,
        kappa,
        e0,
        branch,
        y_convention: y,
        offset,
        convergence: Convergence {
            panels: r.panels,
            relative_change: r.relative_change,
            rel_tol,
        },
    })
}

/// Right-hand sides `[dη/dκ, dς/dκ, dξ/dκ]` of the evolution system, from
/// values scaled by a common factor.
pub fn ode_rhs(kappa: f64, e0: f64, branch: Branch, [eta, sigma, xi]: [f64; 3]) -> [f64; 3] {
    let a = (e0 * e0 + 1.0).sqrt();
    let br = branch.sign();
    let b = 0.5 * e0;
    [
        br * a * sigma - b * eta + b * xi,
        br * a * eta - br * 0.5 * a * xi - b * sigma - 1.5 * sigma / kappa,
        a * a / (2.0 * e0) * xi - br * a / (2.0 * kappa * e0) * sigma - 1.5 * xi / kappa + eta / (2.0 * kappa),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeResiduals {
    pub kappa: f64,
    pub e0: f64,
    pub branch: Branch,
    pub y_convention: YConvention,
    pub fd_step: f64,
    /// Relative residuals of the `η`, `ς`, `ξ` equations.
    pub residuals: [f64; 3],
    /// Derivatives and right-hand sides, both divided by `exp(log_scale)`.
    pub derivatives: [f64; 3],
    pub rhs: [f64; 3],
    pub log_scale: f64,
    pub warnings: Vec<String>,
}

impl OdeResiduals {
    pub fn max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks the evolution system by central differences of [`rot_integrals`]
/// in `κ`, improved by Richardson extrapolation against step `2·fd_step`
/// when `κ ≥ 2·fd_step`.
pub fn ode_residual(
    kappa: f64,
    e0: f64,
    branch: Branch,
    fd_step: f64,
    y: YConvention,
    rel_tol: f64,
) -> Result<OdeResiduals> {
    if !(fd_step > 0.0 && kappa >= fd_step) {
        return Err(Error::InvalidInput(format!(
            "need kappa >= fd_step > 0, got kappa {kappa}, fd_step {fd_step}"
        )));
    }
    let at = |k: f64| rot_integrals(k, e0, branch, y, rel_tol);
    let center = at(kappa)?;
    let log_scale = center.offset;
    let values = center.scaled(log_scale);
    let diff = |h: f64| -> Result<[f64; 3]> {
        let p = at(kappa + h)?.scaled(log_scale);
        let m = at(kappa - h)?.scaled(log_scale);
        Ok(std::array::from_fn(|i| (p[i] - m[i]) / (2.0 * h)))
    };
    let d1 = diff(fd_step)?;
    let mut warnings = Vec::new();
    let derivatives = if kappa >= 2.0 * fd_step {
        let d2 = diff(2.0 * fd_step)?;
        for i in 0..3 {
            let spread = (d1[i] - d2[i]).abs() / d1[i].abs().max(f64::MIN_POSITIVE);
            if spread > 1e-3 {
                warnings.push(format!(
                    "fd_step {fd_step} looks too large (Richardson spread {spread:.1e})"
                ));
                break;
            }
        }
        std::array::from_fn(|i| (4.0 * d1[i] - d2[i]) / 3.0)
    } else {
        warnings.push("kappa < 2·fd_step; Richardson check skipped".to_string());
        d1
    };
    let noise = rel_tol * values.iter().map(|v| v.abs()).fold(0.0, f64::max) / fd_step;
    if derivatives.iter().any(|d| noise > 1e-7 * d.abs()) {
        warnings.push(format!("fd_step {fd_step} looks too small for rel_tol {rel_tol:e}"));
    }
    let rhs = ode_rhs(kappa, e0, branch, values);
    let residuals = std::array::from_fn(|i| {
        let m = derivatives[i].abs().max(rhs[i].abs());
        if m == 0.0 {
            0.0
        } else {
            (derivatives[i] - rhs[i]).abs() / m
        }
    });
    Ok(OdeResiduals {
        kappa,
        e0,
        branch,
        y_convention: y,
        fd_step,
        residuals,
        derivatives,
        rhs,
        log_scale,
        warnings,
    })
}

/// Closed-form lab radius in wavelengths, `√((𝓔₀² + 1)/(π𝓔₀²))`.
pub fn lab_radius_closed(e0: f64) -> Result<f64> {
    if !(e0 > 0.0) {
        return Err(Error::InvalidInput(format!("e0 must be positive, got {e0}")));
    }
    Ok(((e0 * e0 + 1.0) / (PI * e0 * e0)).sqrt())
}

/// `√⟨r²⟩` in wavelengths of the singular state at leading order in `h`,
/// from `⟨r²⟩ = 1/d + (d₂/d)²` with `d = 𝓔₀/2κ`, `d₂ = ±√(𝓔₀²+1)/2`.
pub fn lab_radius_moment(e0: f64, kappa: f64) -> Result<f64> {
    lab_radius_closed(e0)?;
    let d = e0 / (2.0 * kappa);
    let d2 = 0.5 * (e0 * e0 + 1.0).sqrt();
    Ok((1.0 / d + (d2 / d).powi(2)).sqrt() / (2.0 * PI * kappa))
}

/// Transverse moments of `|Ψ|²` by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabMoment {
    /// `∫|Ψ|² dx dy`.
    pub norm: f64,
    /// `∫r²|Ψ|² dx dy`.
    pub r2: f64,
    /// Closed form `1/d + (d₂/d)²`.
    pub r2_closed: f64,
    pub rms: Length,
    pub panels: usize,
}

/// 2D quadrature of the lab density at `z = t = 0` in polar coordinates on a
/// disk of radius `8/√d` around the density maximum.
pub fn lab_radius_numeric(params: &ModelParams, convention: Convention, rel_tol: f64) -> Result<LabMoment> {
    let wf = LabWavefunction::new(*params, convention)?;
    let (cx, cy) = wf.density_peak(0.0, 0.0);
    let log_peak = wf.log_density(cx, cy, 0.0, 0.0);
    let radius = 8.0 / params.d.sqrt();
    let mut panels = 0;
    let mut moments = |weight: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        let outer = integrate(
            |rho| {
                let inner = integrate(
                    |alpha| {
                        let (s, c) = alpha.sin_cos();
                        let (x, y) = (cx + rho * c, cy + rho * s);
                        weight(x, y) * (wf.log_density(x, y, 0.0, 0.0) - log_peak).exp()
                    },
                    &QuadOptions::new(0.0, 2.0 * PI).rel_tol(rel_tol),
                );
                // The angular integrand is smooth and periodic; a failure here
                // surfaces as a NaN in the outer estimate.
                rho * inner.map(|r| r.value).unwrap_or(f64::NAN)
            },
            &QuadOptions::new(0.0, radius).rel_tol(rel_tol),
        )?;
        if !outer.value.is_finite() {
            return Err(Error::NonConvergence {
                panels: outer.panels,
                last: outer.value,
                previous: f64::NAN,
            });
        }
        panels = panels.max(outer.panels);
        Ok(outer.value * log_peak.exp())
    };
    let norm = moments(&|_, _| 1.0)?;
    let r2 = moments(&|x, y| x * x + y * y)?;
    Ok(LabMoment {
        norm,
        r2,
        r2_closed: wf.r2_moment(),
        rms: Length::from_compton(r2.sqrt(), params.kappa),
        panels,
    })
}

/// Rotating-frame localization for the singular state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub kappa: f64,
    pub e0: f64,
    pub branch: Branch,
    pub y_convention: YConvention,
    /// Closed form `λ√((𝓔₀² + 1)/(π𝓔₀²))`.
    pub lab_rms: Length,
    /// `√(1/d + (d₂/d)²)` with the leading singular `d₂`.
    pub lab_rms_moment: Length,
    pub rot_rms: Length,
    /// `rot_rms/(λ/2π)`.
    pub ratio_rot_over_bound: f64,
    /// `lab_rms/rot_rms`.
    pub lab_over_rot: f64,
    pub integrals: RotIntegrals,
    pub convergence: Convergence,
    pub warnings: Vec<String>,
}

/// Rotating-frame radius from the ratio of the `r²`-weighted to the plain
/// density integral. The singular bilinears `ψ†ψ = 4h²𝓔₀²` and
/// `ψ†α₁ψ = ∓4h²𝓔₀³/√(1+𝓔₀²)` enter through their ratio `∓𝓔₀/√(1+𝓔₀²)`:
///
/// ```text
/// ⟨r²⟩Ω² = [(η − ξ) ∓ c·(ς ∓ (√(𝓔₀²+1)/𝓔₀)ξ + ς/(κ𝓔₀))] / [η ∓ c·ς]
/// ```
pub fn rot_radius(kappa: f64, e0: f64, branch: Branch, y: YConvention, rel_tol: f64) -> Result<LocalizationReport> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidInput(format!("kappa must be positive, got {kappa}")));
    }
    let ints = rot_integrals(kappa, e0, branch, y, rel_tol)?;
    let c = branch.sign() * e0 / (e0 * e0 + 1.0).sqrt();
    // Both sides share exp(offset), so the ratio is formed from mantissas.
    let den = ints.mantissas[0] - c * ints.mantissas[1];
    let num = ints.sin3_mantissa() - c * ints.sin4_mantissa();
    let ratio_sq = num / den;
    if !(ratio_sq > 0.0) {
        return Err(Error::Degenerate(format!(
            "non-positive mean square radius ratio {ratio_sq} at kappa {kappa}"
        )));
    }
    let ratio = ratio_sq.sqrt();
    let lab_w = lab_radius_closed(e0)?;
    let rot = Length::from_wavelengths(ratio / (2.0 * PI), kappa);
    let mut warnings = Vec::new();
    if kappa < ASYMPTOTIC_KAPPA {
        warnings.push(format!(
            "kappa = {kappa} < {ASYMPTOTIC_KAPPA}: large-kappa asymptotics do not apply"
        ));
    }
    if ratio > 1.0 {
        warnings.push(format!("rotating radius exceeds the λ/2π bound (ratio {ratio})"));
    }
    Ok(LocalizationReport {
        kappa,
        e0,
        branch,
        y_convention: y,
        lab_rms: Length::from_wavelengths(lab_w, kappa),
        lab_rms_moment: Length::from_wavelengths(lab_radius_moment(e0, kappa)?, kappa),
        rot_rms: rot,
        ratio_rot_over_bound: ratio,
        lab_over_rot: lab_w / rot.wavelengths,
        integrals: ints,
        convergence: ints.convergence,
        warnings,
    })
}

/// One row of a `κ` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa: f64,
    pub e0: f64,
    pub branch: Branch,
    pub eta_log: f64,
    pub sigma_log: f64,
    pub xi_log: f64,
    pub rot_rms_over_bound: f64,
}

/// `points` log-spaced values from `from` to `to` inclusive.
pub fn log_grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to >= from && points >= 1) || (points == 1 && to != from) {
        return Err(Error::InvalidInput(format!(
            "bad grid: from {from}, to {to}, points {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    // Base 10 keeps decade points exact.
    let (lf, lt) = (from.log10(), to.log10());
    Ok((0..points)
        .map(|i| match i {
            0 => from,
            i if i == points - 1 => to,
            i => 10f64.powf(lf + (lt - lf) * i as f64 / (points - 1) as f64),
        })
        .collect())
}

/// [`rot_radius`] over a grid, in parallel; rows keep grid order.
pub fn sweep(kappas: &[f64], e0: f64, branch: Branch, y: YConvention, rel_tol: f64) -> Result<Vec<SweepRow>> {
    kappas
        .par_iter()
        .map(|&kappa| {
            let r = rot_radius(kappa, e0, branch, y, rel_tol)?;
            Ok(SweepRow {
                kappa,
                e0,
                branch,
                eta_log: r.integrals.eta.log_mag(),
                sigma_log: r.integrals.sigma.log_mag(),
                xi_log: r.integrals.xi.log_mag(),
                rot_rms_over_bound: r.ratio_rot_over_bound,
            })
        })
        .collect()
}

/// Candidate exponential rates of the large-`κ` solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// `(𝓔₀² + 1)/(2𝓔₀)`.
    pub rho1: f64,
    /// `±√(𝓔₀² + 1) − 𝓔₀/2`.
    pub rho2: f64,
    /// `∓√(𝓔₀² + 1) − 𝓔₀/2`.
    pub rho3: f64,
}

impl Rates {
    pub fn new(e0: f64, branch: Branch) -> Self {
        let a = (e0 * e0 + 1.0).sqrt();
        let br = branch.sign();
        Self {
            rho1: a * a / (2.0 * e0),
            rho2: br * a - 0.5 * e0,
            rho3: -br * a - 0.5 * e0,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.rho1, self.rho2, self.rho3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Least-squares slope of `ln|Q|` against `κ`.
    pub slope: f64,
    /// `C` in `|Q| ≈ C·exp(slope·κ)`.
    pub coefficient: LogValue,
    /// Largest fit residual relative to the span of `ln|Q|`.
    pub fit_residual: f64,
    /// Index (1-based) of the closest candidate rate.
    pub nearest: usize,
    /// `(slope − ρ_k)/ρ_k` for each candidate.
    pub rel_error: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub e0: f64,
    pub branch: Branch,
    pub kappas: Vec<f64>,
    pub rates: Rates,
    /// Maximum of the exponent on the interval, `√(𝓔₀² + 1) − 𝓔₀/2`.
    pub endpoint_rate: f64,
    pub eta: RateFit,
    pub sigma: RateFit,
    pub xi: RateFit,
}

fn fit_rate(kappas: &[f64], logs: &[f64], rates: &Rates) -> Result<RateFit> {
    let n = kappas.len() as f64;
    let mk = kappas.iter().sum::<f64>() / n;
    let ml = logs.iter().sum::<f64>() / n;
    let sxx: f64 = kappas.iter().map(|k| (k - mk).powi(2)).sum();
    let sxy: f64 = kappas.iter().zip(logs).map(|(k, l)| (k - mk) * (l - ml)).sum();
    let slope = sxy / sxx;
    let intercept = ml - slope * mk;
    let span =
        logs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - logs.iter().copied().fold(f64::INFINITY, f64::min);
    let worst = kappas
        .iter()
        .zip(logs)
        .map(|(k, l)| (l - intercept - slope * k).abs())
        .fold(0.0, f64::max);
    let fit_residual = if span > 0.0 { worst / span } else { worst };
    if !(fit_residual <= FIT_TOLERANCE) {
        return Err(Error::FitQuality(format!(
            "linear fit of ln|Q| leaves relative residual {fit_residual:.2e} > {FIT_TOLERANCE:e}"
        )));
    }
    let cand = rates.as_array();
    let rel_error = cand.map(|r| (slope - r) / r);
    let nearest = (0..3)
        .min_by(|&i, &j| (slope - cand[i]).abs().total_cmp(&(slope - cand[j]).abs()))
        .unwrap_or(0)
        + 1;
    Ok(RateFit {
        slope,
        coefficient: LogValue::new(1, intercept),
        fit_residual,
        nearest,
        rel_error,
    })
}

/// Fits the exponential growth of `η`, `ς`, `ξ` over `kappas`.
pub fn asymptotic_coefficients(kappas: &[f64], e0: f64, branch: Branch, rel_tol: f64) -> Result<AsymptoticReport> {
    let (lo, hi) = kappas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| {
        (lo.min(k), hi.max(k))
    });
    if kappas.len() < 3 || lo < 100.0 || hi < 10.0 * lo {
        return Err(Error::InvalidInput(
            "kappa grid needs at least 3 points, kappa >= 100, and one decade of span".into(),
        ));
    }
    let rows: Vec<RotIntegrals> = kappas
        .par_iter()
        .map(|&k| rot_integrals(k, e0, branch, YConvention::Decaying, rel_tol))
        .collect::<Result<_>>()?;
    let rates = Rates::new(e0, branch);
    let logs = |f: fn(&RotIntegrals) -> LogValue| rows.iter().map(|r| f(r).log_mag()).collect::<Vec<_>>();
    Ok(AsymptoticReport {
        e0,
        branch,
        kappas: kappas.to_vec(),
        rates,
        endpoint_rate: (e0 * e0 + 1.0).sqrt() - 0.5 * e0,
        eta: fit_rate(kappas, &logs(|r| r.eta), &rates)?,
        sigma: fit_rate(kappas, &logs(|r| r.sigma), &rates)?,
        xi: fit_rate(kappas, &logs(|r| r.xi), &rates)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(kappa: f64, e0: f64, branch: Branch) -> RotIntegrals {
        rot_integrals(kappa, e0, branch, YConvention::Decaying, DEFAULT_REL_TOL).unwrap()
    }

    #[test]
    fn kappa_zero_values() {
        let r = ints(0.0, 1.0, Branch::Plus);
        assert!(r.eta.log_mag().abs() < 1e-14 && r.eta.sign() == 1);
        assert!(r.sigma.is_zero());
        assert!((r.xi.to_f64() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn branch_parity() {
        for kappa in [0.3, 4.0, 200.0] {
            let p = ints(kappa, 1.5, Branch::Plus);
            let m = ints(kappa, 1.5, Branch::Minus);
            assert_eq!(p.eta, m.eta);
            assert_eq!(p.xi, m.xi);
            assert_eq!(p.sigma, -m.sigma);
            assert_eq!(p.sigma.sign(), 1);
        }
    }

    #[test]
    fn direct_sine_powers_match_identities() {
        for (kappa, e0) in [(0.5, 2.0), (3.0, 1.0), (40.0, 0.5), (1e4, 1.0)] {
            for branch in Branch::BOTH {
                let r = ints(kappa, e0, branch);
                let s3 = r.sin3_identity();
                let s4 = r.sin4_identity();
                assert!((s3.log_mag() - r.sin3.log_mag()).abs() < 1e-10, "sin3 κ={kappa}");
                assert!((s4.log_mag() - r.sin4.log_mag()).abs() < 1e-9, "sin4 κ={kappa}");
                assert_eq!(s4.sign(), r.sin4.sign());
            }
        }
    }

    #[test]
    fn huge_kappa_matches_laplace() {
        let (kappa, e0) = (1e9, 1.0);
        let r = ints(kappa, e0, Branch::Plus);
        let a = 2f64.sqrt();
        let b = 0.5;
        // I₀(u) ≈ e^u/√(2πu); ∫₀^∞ exp(−κ(a/2 − b)s²) ds = ½√(π/(κ(a/2 − b))).
        let laplace =
            kappa * (a - b) - 0.5 * (2.0 * PI * kappa * a).ln() + (0.5 * (PI / (kappa * (a / 2.0 - b))).sqrt()).ln();
        assert!(r.eta.log_mag().is_finite());
        assert!((r.eta.log_mag() - laplace).abs() < 1e-6);
        assert!(((r.eta.log_mag() - kappa * (a - b)) / kappa).abs() < 1e-7);
    }

    #[test]
    fn ode_system_holds() {
        for (kappa, e0, branch) in [
            (10.0, 1.0, Branch::Plus),
            (0.5, 2.0, Branch::Plus),
            (10.0, 1.0, Branch::Minus),
        ] {
            let r = ode_residual(kappa, e0, branch, 1e-4, YConvention::Decaying, DEFAULT_REL_TOL).unwrap();
            assert!(r.max() <= 1e-6, "{r:?}");
        }
        let g = ode_residual(10.0, 1.0, Branch::Plus, 1e-4, YConvention::Growing, DEFAULT_REL_TOL).unwrap();
        assert!(g.max() > 1e-2);
        assert!(ode_residual(0.5, 1.0, Branch::Plus, 1.0, YConvention::Decaying, DEFAULT_REL_TOL).is_err());
    }

    #[test]
    fn lab_closed_values() {
        assert!((lab_radius_closed(1.0).unwrap() - 0.797_884_560_8).abs() < 1e-9);
        assert!((lab_radius_closed(0.5).unwrap() - 1.261_566_261).abs() < 1e-8);
        assert!((lab_radius_closed(1e8).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-12);
        assert!(lab_radius_closed(0.0).is_err());
    }

    #[test]
    fn lab_numeric_matches_moment() {
        let params = ModelParams::singular(1.0, 0.01, 0.05, Branch::Plus).unwrap();
        let m = lab_radius_numeric(&params, Convention::CANONICAL, 1e-12).unwrap();
        assert!((m.norm - 1.0).abs() < 1e-8);
        assert!((m.r2 / m.r2_closed - 1.0).abs() < 1e-8);
        // Centered Gaussian: h = 0 on a root away from 𝓔₀.
        let (om, p) = (0.05, 0.3);
        let b = 2.0 * p - om;
        let root = (-b + (b * b + 4.0f64).sqrt()) / 2.0;
        let free = ModelParams::with_root(1.0, 0.0, om, p, root, Branch::Plus).unwrap();
        let m = lab_radius_numeric(&free, Convention::CANONICAL, 1e-12).unwrap();
        assert!((m.r2 * free.d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn moment_scaling_with_d() {
        let base = ModelParams::singular(1.0, 0.01, 0.05, Branch::Plus).unwrap();
        let doubled = ModelParams::singular(2.0, 0.01, 0.05, Branch::Plus).unwrap();
        let wf = LabWavefunction::new(doubled, Convention::CANONICAL).unwrap();
        let want = 1.0 / doubled.d + (doubled.d2 / doubled.d).powi(2);
        assert!((wf.r2_moment() - want).abs() < 1e-12 * want);
        assert!((doubled.d - 2.0 * base.d).abs() < 1e-15);
    }

    #[test]
    fn rot_ratio_approaches_bound() {
        let mut last = 0.0;
        for kappa in [1e2, 1e3, 1e4, 1e6, 1e9] {
            let r = rot_radius(kappa, 1.0, Branch::Plus, YConvention::Decaying, DEFAULT_REL_TOL).unwrap();
            assert!(r.ratio_rot_over_bound > last && r.ratio_rot_over_bound <= 1.0);
            assert!(r.rot_rms.compton <= kappa);
            assert!(r.lab_over_rot > 1.0);
            last = r.ratio_rot_over_bound;
        }
        // 1 − ratio ~ c/κ persists at κ = 10⁹ without losing precision.
        assert!((1.0 - last) < 1e-8 && (1.0 - last) > 0.0);
        let k6 = rot_radius(1e6, 1.0, Branch::Plus, YConvention::Decaying, DEFAULT_REL_TOL).unwrap();
        let scaled = |r: f64, k: f64| (1.0 - r) * k;
        assert!((scaled(last, 1e9) / scaled(k6.ratio_rot_over_bound, 1e6) - 1.0).abs() < 1e-4);
        let r = rot_radius(1e4, 1.0, Branch::Minus, YConvention::Decaying, DEFAULT_REL_TOL).unwrap();
        assert!((1.0 - r.ratio_rot_over_bound).abs() < 1e-3);
        let low = rot_radius(1.0, 1.0, Branch::Plus, YConvention::Decaying, DEFAULT_REL_TOL).unwrap();
        assert!(!low.warnings.is_empty());
    }

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1e2, 1e6, 9).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!((g[0], g[8]), (1e2, 1e6));
        assert!((g[4] - 1e4).abs() < 1e-8);
        assert!(log_grid(0.0, 1.0, 3).is_err());
    }

    #[test]
    fn rate_fit_identifies_endpoint_rate() {
        let grid = log_grid(1e2, 1e4, 9).unwrap();
        let rep = asymptotic_coefficients(&grid, 1.0, Branch::Plus, DEFAULT_REL_TOL).unwrap();
        assert!((rep.xi.slope - rep.endpoint_rate).abs() < 2e-3);
        assert_eq!(rep.eta.nearest, 2);
        assert!(asymptotic_coefficients(&[10.0, 20.0, 30.0], 1.0, Branch::Plus, DEFAULT_REL_TOL).is_err());
    }
}
