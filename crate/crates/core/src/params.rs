//! Unit normalization and the assembled model parameters.
//!
//! Physical inputs are Gaussian-CGS (rad/s, gauss, grams). Normalized
//! quantities use `ƛ = ħ/mc` for length, `ħ/mc²` for time, and the field scale
//! `eƛ²/(cħ)` with the signed particle charge absorbed into the field.

use serde::{Deserialize, Serialize};

use crate::characteristic::{self, CharInput};
use crate::error::{Error, Result};

/// CODATA 2018 constants in Gaussian-CGS units.
pub mod constants {
    /// Reduced Planck constant, erg·s.
    pub const HBAR: f64 = 1.054_571_817e-27;
    /// Speed of light, cm/s.
    pub const C: f64 = 2.997_924_58e10;
    /// Electron mass, g.
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;
    /// Elementary charge, statC.
    pub const ELEMENTARY_CHARGE: f64 = 4.803_204_712_570_263e-10;
    /// Bohr magneton `eħ/(2m_e c)`, erg/G.
    pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-21;
}

use constants::{C, ELEMENTARY_CHARGE, HBAR};

/// `|h|` at or above this value is flagged as outside the small-`h` regime.
pub const H_SMALL_LIMIT: f64 = 0.1;

/// Pair splittings below this fraction of the root scale fall back to the
/// first-order expansion.
const UNRESOLVED_GAP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalInput {
    /// Angular frequency of the wave, rad/s.
    pub omega: f64,
    /// Constant magnetic field along the propagation axis, gauss (signed).
    pub h_z: f64,
    /// Magnetic amplitude of the circularly polarized wave, gauss.
    pub h_wave: f64,
    /// Particle mass, g.
    pub mass: f64,
    /// Sign of the particle charge, −1 for the electron.
    #[serde(default = "default_charge_sign")]
    pub charge_sign: i8,
}

fn default_charge_sign() -> i8 {
    -1
}

impl PhysicalInput {
    pub fn electron(omega: f64, h_z: f64, h_wave: f64) -> Self {
        Self {
            omega,
            h_z,
            h_wave,
            mass: constants::ELECTRON_MASS,
            charge_sign: -1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega, self.h_z, self.h_wave, self.mass]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidInput("non-finite physical input".into()));
        }
        if self.omega <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.mass <= 0.0 {
            return Err(Error::InvalidInput(format!("mass must be positive, got {}", self.mass)));
        }
        if !matches!(self.charge_sign, -1 | 1) {
            return Err(Error::InvalidInput(format!(
                "charge_sign must be -1 or +1, got {}",
                self.charge_sign
            )));
        }
        Ok(())
    }

    /// Reduced Compton wavelength `ħ/mc`, cm.
    pub fn compton_length(&self) -> f64 {
        HBAR / (self.mass * C)
    }

    /// Multiplier taking gauss to normalized field units (charge sign excluded).
    fn field_scale(&self) -> f64 {
        let lb = self.compton_length();
        ELEMENTARY_CHARGE * lb * lb / (C * HBAR)
    }
}

/// Member of the singular pair: `+` has `d₂ > 0`, `−` has `d₂ < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];
}

impl TryFrom<i8> for Branch {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            _ => Err(format!("branch must be +1 or -1, got {v}")),
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        match b {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+1",
            Branch::Minus => "-1",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Branch::Plus),
            "-" | "-1" | "minus" => Ok(Branch::Minus),
            other => Err(format!("unknown branch '{other}', expected +1 or -1")),
        }
    }
}

/// All normalized scalars of one ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// `Ωƛ/c`.
    pub omega_n: f64,
    /// Wave amplitude over frequency, `H/Ω`.
    pub h: f64,
    pub e0: f64,
    /// Gaussian decay rate `Ω𝓔₀/2`.
    pub d: f64,
    pub d2: f64,
    /// Longitudinal momentum.
    pub p: f64,
    /// Exact energy `E = 𝓔 + p` of the selected root.
    pub energy: f64,
    /// The root `𝓔` of the characteristic equation.
    pub e_root: f64,
    /// `1/Ω`, i.e. `λ/λ_C`.
    pub kappa: f64,
    pub branch: Branch,
    /// False when `|h| ≥ 0.1`.
    pub h_small: bool,
}

impl ModelParams {
    /// Singular state on `branch` at the momentum that supports the pair.
    ///
    /// At `h = 0` the root is `𝓔₀` and `d₂` takes its `h → 0` limit.
    pub fn singular(e0: f64, h: f64, omega_n: f64, branch: Branch) -> Result<Self> {
        if !(e0 > 0.0) {
            return Err(Error::Domain(format!("e0 must be positive, got {e0}")));
        }
        let p = singular_momentum(e0, omega_n);
        let slope = e0 / (e0 * e0 + 1.0).sqrt();
        let (e_root, d2) = if h == 0.0 {
            (e0, characteristic::leading_d2(e0, branch.sign()))
        } else if h * slope < UNRESOLVED_GAP * e0.max(1.0 / e0) {
            // The pair splitting is below what the cubic solver resolves.
            (
                e0 + branch.sign() * h * slope,
                characteristic::leading_d2(e0, branch.sign()),
            )
        } else {
            let input = CharInput::new(e0, h, 2.0 * p - omega_n);
            let pair = characteristic::solve_characteristic(&input)?
                .singular_pair()
                .ok_or_else(|| Error::Degenerate("singular pair not detected".into()))?;
            let root = match branch {
                Branch::Plus => pair.plus,
                Branch::Minus => pair.minus,
            };
            (root, characteristic::gaussian_params(e0, root, h, omega_n)?.d2)
        };
        Self::assemble(e0, h, omega_n, p, e_root, d2, branch)
    }

    /// State for an arbitrary root `e_root` at momentum `p`.
    pub fn with_root(e0: f64, h: f64, omega_n: f64, p: f64, e_root: f64, branch: Branch) -> Result<Self> {
        let g = characteristic::gaussian_params(e0, e_root, h, omega_n)?;
        Self::assemble(e0, h, omega_n, p, e_root, g.d2, branch)
    }

    fn assemble(e0: f64, h: f64, omega_n: f64, p: f64, e_root: f64, d2: f64, branch: Branch) -> Result<Self> {
        let params = ModelParams {
            omega_n,
            h,
            e0,
            d: omega_n * e0 / 2.0,
            d2,
            p,
            energy: e_root + p,
            e_root,
            kappa: 1.0 / omega_n,
            branch,
            h_small: h.abs() < H_SMALL_LIMIT,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_n > 0.0 && self.omega_n.is_finite()) {
            return Err(Error::Domain(format!("omega_n must be positive, got {}", self.omega_n)));
        }
        if !(self.e0 > 0.0) {
            return Err(Error::Domain(format!("e0 must be positive, got {}", self.e0)));
        }
        if !(self.d > 0.0) {
            return Err(Error::Domain(format!("d must be positive, got {}", self.d)));
        }
        Ok(())
    }

    /// Normalized constant field; `e0 > 0` corresponds to `H_z = −Ω𝓔₀`.
    pub fn h_z(&self) -> f64 {
        -2.0 * self.d
    }

    /// Normalized wave amplitude `H = hΩ`.
    pub fn h_wave(&self) -> f64 {
        self.h * self.omega_n
    }

    /// Wavelength in Compton units, `2πκ`.
    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.kappa
    }
}

/// Normalizes a physical input onto the singular state on `branch`.
///
/// With the signed charge absorbed into the field, `𝓔₀ = −H_z/Ω`, which is
/// `−2μH_z/(ħΩ)` with `μ` the signed magneton. `𝓔₀ ≤ 0` is rejected.
pub fn normalize(input: &PhysicalInput, branch: Branch) -> Result<ModelParams> {
    input.validate()?;
    let omega_n = HBAR * input.omega / (input.mass * C * C);
    let scale = input.field_scale();
    let charge = f64::from(input.charge_sign);
    let h_z_n = charge * scale * input.h_z;
    let e0 = -h_z_n / omega_n;
    if !(e0 > 0.0) {
        return Err(Error::Domain(format!(
            "e0 = {e0:e} is not positive; the resonance parameter requires H_z antiparallel to \
             the charge-weighted magneton (reverse H_z or the wave polarization)"
        )));
    }
    // A sign flip of the wave amplitude is a half-period time shift.
    let h = (charge * scale * input.h_wave).abs() / omega_n;
    ModelParams::singular(e0, h, omega_n, branch)
}

/// Inverse of [`normalize`] for a given mass and charge sign.
pub fn denormalize(params: &ModelParams, mass: f64, charge_sign: i8) -> Result<PhysicalInput> {
    let probe = PhysicalInput {
        omega: 1.0,
        h_z: 0.0,
        h_wave: 0.0,
        mass,
        charge_sign,
    };
    probe.validate()?;
    let scale = probe.field_scale();
    let charge = f64::from(charge_sign);
    Ok(PhysicalInput {
        omega: params.omega_n * mass * C * C / HBAR,
        h_z: -params.e0 * params.omega_n / (charge * scale),
        h_wave: params.h * params.omega_n / scale,
        mass,
        charge_sign,
    })
}

/// Momentum supporting the singular pair, `½(1/𝓔₀ − 𝓔₀) + ½Ω`.
pub fn singular_momentum(e0: f64, omega_n: f64) -> f64 {
    0.5 * (1.0 / e0 - e0) + 0.5 * omega_n
}

/// Leading-order energy of the singular pair, `½(1/𝓔₀ + 𝓔₀) + ½Ω`.
/// The two members differ at order `h`.
pub fn singular_energy(e0: f64, omega_n: f64) -> f64 {
    0.5 * (1.0 / e0 + e0) + 0.5 * omega_n
}
