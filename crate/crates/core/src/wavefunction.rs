//! Lab-frame wavefunction of the ground state and its Dirac residual.
//!
//! ```text
//! Ψ = N·exp(−iEt + ipz + D)·exp(−½α₁α₂φ)·ψ,   φ = Ωt − Ωz
//! D = −(d/2)r² − i·d₂·(x̃ + iỹ),              x̃ + iỹ = e^{−iφ}(x + iy)
//! ```
//!
//! The sign conventions left implicit by the ansatz (rotation sense of the
//! co-rotating coordinates, polarization sense, orientation of the constant
//! field, sign of the spin rotation) are carried in [`Convention`] and pinned
//! by substituting into the Dirac equation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dirac::{dirac_matrices, DiracMatrices, Matrix4C, Spinor4};
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Largest residual accepted by [`LabWavefunction::pinned`].
pub const PIN_TOLERANCE: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Discrete sign choices, each `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    /// `x̃ + iỹ = e^{−i·rotation·φ}(x + iy)`.
    pub rotation: i8,
    /// `A_y` wave term `polarization·h·sin φ`.
    pub polarization: i8,
    /// `H_z = −field·2d`.
    pub field: i8,
    /// Spin factor `exp(−½·spin·α₁α₂φ)`.
    pub spin: i8,
}

impl Convention {
    pub const CANONICAL: Convention = Convention {
        rotation: 1,
        polarization: 1,
        field: 1,
        spin: 1,
    };

    /// All 16 combinations, canonical first.
    pub fn all() -> Vec<Convention> {
        let signs = [1i8, -1];
        let mut out = Vec::with_capacity(16);
        for rotation in signs {
            for polarization in signs {
                for field in signs {
                    for spin in signs {
                        out.push(Convention {
                            rotation,
                            polarization,
                            field,
                            spin,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn label(&self) -> String {
        let s = |v: i8| if v > 0 { '+' } else { '-' };
        format!(
            "rotation{} polarization{} field{} spin{}",
            s(self.rotation),
            s(self.polarization),
            s(self.field),
            s(self.spin)
        )
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::CANONICAL
    }
}

/// Normalized vector potential of the constant field plus the rotating wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPotential {
    pub h_z: f64,
    pub h_wave_amp: f64,
    pub omega_n: f64,
    /// Propagation constant, equal to `omega_n`.
    pub k: f64,
    pub polarization: i8,
}

impl FieldPotential {
    pub fn new(h_z: f64, h_wave_amp: f64, omega_n: f64) -> Self {
        Self {
            h_z,
            h_wave_amp,
            omega_n,
            k: omega_n,
            polarization: 1,
        }
    }

    pub fn from_params(params: &ModelParams, convention: Convention) -> Self {
        Self {
            polarization: convention.polarization,
            ..Self::new(
                f64::from(convention.field) * params.h_z(),
                params.h_wave(),
                params.omega_n,
            )
        }
    }

    /// `(A_x, A_y)`.
    pub fn potential_at(&self, x: f64, y: f64, z: f64, t: f64) -> (f64, f64) {
        let phase = self.omega_n * t - self.k * z;
        let amp = if self.h_wave_amp == 0.0 {
            0.0
        } else {
            self.h_wave_amp / self.omega_n
        };
        (
            -0.5 * self.h_z * y + amp * phase.cos(),
            0.5 * self.h_z * x + f64::from(self.polarization) * amp * phase.sin(),
        )
    }
}

/// Unnormalized ground-state spinor `ψ` and `ln N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundSpinor {
    pub psi: Spinor4,
    /// `ln N` with `∫Ψ†Ψ dx dy = 1`.
    pub ln_norm: f64,
}

impl GroundSpinor {
    /// `ψ = (h𝓔, −(𝓔+1)(𝓔−𝓔₀), h𝓔, −(𝓔−1)(𝓔−𝓔₀))`, normalized with the
    /// displaced-Gaussian integral `(π/d)·exp(d₂²/d)`.
    pub fn new(e_root: f64, e0: f64, h: f64, d: f64, d2: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::Domain(format!("d must be positive, got {d}")));
        }
        let gap = e_root - e0;
        let psi = Spinor4::from_real([h * e_root, -(e_root + 1.0) * gap, h * e_root, -(e_root - 1.0) * gap]);
        let norm_sqr = psi.norm_sqr();
        if norm_sqr == 0.0 {
            return Err(Error::Degenerate(format!(
                "spinor vanishes at root {e_root} (h = {h}, e0 = {e0})"
            )));
        }
        let ln_norm = -0.5 * (norm_sqr.ln() + (PI / d).ln() + d2 * d2 / d);
        Ok(Self { psi, ln_norm })
    }

    pub fn from_params(params: &ModelParams) -> Result<Self> {
        Self::new(params.e_root, params.e0, params.h, params.d, params.d2)
    }

    /// `ψ†ψ = 2[h²𝓔² + (𝓔² + 1)(𝓔 − 𝓔₀)²]`.
    pub fn norm_sqr(&self) -> f64 {
        self.psi.norm_sqr()
    }

    /// `ψ/|ψ|`.
    pub fn unit(&self) -> Spinor4 {
        self.psi.scale(Complex64::new(1.0 / self.psi.norm(), 0.0))
    }

    /// `N·ψ`; may overflow or underflow when `d₂²/d` is large.
    pub fn normalized(&self) -> Spinor4 {
        self.psi.scale(Complex64::new(self.ln_norm.exp(), 0.0))
    }

    /// `ψ†α₁ψ/ψ†ψ`.
    pub fn alpha1_ratio(&self) -> f64 {
        let dm = dirac_matrices();
        self.psi.bilinear(&dm.alpha[0]).re / self.norm_sqr()
    }

    /// `|lower pair|/|upper pair|`.
    pub fn lower_upper_ratio(&self) -> f64 {
        let n = |a: Complex64, b: Complex64| (a.norm_sqr() + b.norm_sqr()).sqrt();
        n(self.psi.0[2], self.psi.0[3]) / n(self.psi.0[0], self.psi.0[1])
    }
}

/// Leading small-`h` value of `ψ†ψ` on the singular pair, `4h²𝓔₀²`.
pub fn singular_norm_sqr(e0: f64, h: f64) -> f64 {
    4.0 * h * h * e0 * e0
}

/// Leading small-`h` value of `ψ†α₁ψ` on the singular pair,
/// `∓4h²𝓔₀³/√(1 + 𝓔₀²)`.
pub fn singular_alpha1(e0: f64, h: f64, branch: f64) -> f64 {
    -branch * 4.0 * h * h * e0.powi(3) / (1.0 + e0 * e0).sqrt()
}

/// Spin rotation `exp(−½·s·α₁α₂φ)`. Since `(α₁α₂)² = −1` this is
/// `cos(φ/2) − s·sin(φ/2)·α₁α₂`.
pub fn spin_rotation(alpha12: &Matrix4C, phi: f64, spin: i8) -> Matrix4C {
    let half = 0.5 * phi;
    Matrix4C::identity().scale_re(half.cos()) - alpha12.scale_re(f64::from(spin) * half.sin())
}

/// The exact lab-frame wavefunction under one sign convention.
#[derive(Debug, Clone)]
pub struct LabWavefunction {
    pub params: ModelParams,
    pub convention: Convention,
    pub spinor: GroundSpinor,
    pub potential: FieldPotential,
    dm: DiracMatrices,
    alpha12: Matrix4C,
}

/// Pieces shared by evaluation and residual at one event.
struct Local {
    /// `e^{−i·rotation·φ}`.
    rot: Complex64,
    /// `x̃ + iỹ`.
    zeta: Complex64,
    /// `−iEt + ipz + D`.
    exponent: Complex64,
    r_mat: Matrix4C,
}

impl LabWavefunction {
    pub fn new(params: ModelParams, convention: Convention) -> Result<Self> {
        params.validate()?;
        let spinor = GroundSpinor::from_params(&params)?;
        let dm = dirac_matrices();
        let alpha12 = dm.alpha[0] * dm.alpha[1];
        Ok(Self {
            params,
            convention,
            spinor,
            potential: FieldPotential::from_params(&params, convention),
            dm,
            alpha12,
        })
    }

    /// Scans [`Convention::all`] at `points` and keeps the one with the
    /// smallest residual. Returns the scan alongside.
    pub fn pinned(params: ModelParams, points: &[[f64; 4]]) -> Result<(Self, Vec<(Convention, f64)>)> {
        let mut scan = Vec::with_capacity(16);
        for c in Convention::all() {
            let wf = Self::new(params, c)?;
            scan.push((c, wf.residual_check(points)));
        }
        let (best, res) = scan
            .iter()
            .copied()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty convention list");
        if !(res <= PIN_TOLERANCE) {
            return Err(Error::ConventionUnresolved { best: res });
        }
        Ok((Self::new(params, best)?, scan))
    }

    fn local(&self, x: f64, y: f64, z: f64, t: f64) -> Local {
        let p = &self.params;
        let phi = p.omega_n * (t - z);
        let rot = Complex64::from_polar(1.0, -f64::from(self.convention.rotation) * phi);
        let zeta = rot * Complex64::new(x, y);
        let d_term = Complex64::new(-0.5 * p.d * (x * x + y * y), 0.0) - I * p.d2 * zeta;
        Local {
            rot,
            zeta,
            exponent: Complex64::new(0.0, -p.energy * t + p.p * z) + d_term,
            r_mat: spin_rotation(&self.alpha12, phi, self.convention.spin),
        }
    }

    /// Co-rotating coordinates `(x̃, ỹ)`.
    pub fn corotating(&self, x: f64, y: f64, z: f64, t: f64) -> (f64, f64) {
        let l = self.local(x, y, z, t);
        (l.zeta.re, l.zeta.im)
    }

    /// `Ψ(x, y, z, t)`.
    pub fn eval(&self, x: f64, y: f64, z: f64, t: f64) -> Spinor4 {
        let l = self.local(x, y, z, t);
        l.r_mat
            .apply(&self.spinor.psi)
            .scale((l.exponent + self.spinor.ln_norm).exp())
    }

    /// `ln Ψ†Ψ`, finite even where `Ψ†Ψ` itself under- or overflows.
    pub fn log_density(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        let l = self.local(x, y, z, t);
        2.0 * (self.spinor.ln_norm + l.exponent.re) + self.spinor.norm_sqr().ln()
    }

    /// Relative residual `‖(−i∂_t − iα·∇ − α·A + β)Ψ‖/‖Ψ‖` from analytic
    /// derivatives of the exponent.
    pub fn residual_at(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        let p = &self.params;
        let c = self.convention;
        let l = self.local(x, y, z, t);
        let w = l.r_mat.apply(&self.spinor.psi);
        // ∂_φ of the rotation matrix applied to ψ: −½·s·α₁α₂·Rψ.
        let dr = self
            .alpha12
            .apply(&w)
            .scale(Complex64::new(-0.5 * f64::from(c.spin), 0.0));
        let s_rot = f64::from(c.rotation);
        let dphi_d = -s_rot * p.d2 * l.zeta;
        let dx = Complex64::new(-p.d * x, 0.0) - I * p.d2 * l.rot;
        let dy = Complex64::new(-p.d * y, 0.0) + p.d2 * l.rot;
        let dt = Complex64::new(0.0, -p.energy) + p.omega_n * dphi_d;
        let dz = Complex64::new(0.0, p.p) - p.omega_n * dphi_d;
        let om = Complex64::new(p.omega_n, 0.0);

        let d_t = w.scale(dt) + dr.scale(om);
        let d_z = w.scale(dz) - dr.scale(om);
        let d_x = w.scale(dx);
        let d_y = w.scale(dy);
        let [a1, a2, a3] = self.dm.alpha;
        let (ax, ay) = self.potential.potential_at(x, y, z, t);
        let minus_i = Complex64::new(0.0, -1.0);
        let res = d_t.scale(minus_i) + (a1.apply(&d_x) + a2.apply(&d_y) + a3.apply(&d_z)).scale(minus_i)
            - (a1.scale_re(ax) + a2.scale_re(ay)).apply(&w)
            + self.dm.beta.apply(&w);
        res.norm() / w.norm()
    }

    /// Largest [`Self::residual_at`] over `points` of `[x, y, z, t]`.
    pub fn residual_check(&self, points: &[[f64; 4]]) -> f64 {
        points
            .par_iter()
            .map(|&[x, y, z, t]| self.residual_at(x, y, z, t))
            .reduce(|| 0.0, f64::max)
    }

    /// Transverse second moment `⟨r²⟩ = 1/d + (d₂/d)²` of the density.
    pub fn r2_moment(&self) -> f64 {
        let p = &self.params;
        1.0 / p.d + (p.d2 / p.d).powi(2)
    }

    /// Density maximum in lab coordinates at `(z, t)`: `(x̃, ỹ) = (0, d₂/d)`
    /// rotated back.
    pub fn density_peak(&self, z: f64, t: f64) -> (f64, f64) {
        let p = &self.params;
        let phi = p.omega_n * (t - z);
        let back = Complex64::from_polar(1.0, f64::from(self.convention.rotation) * phi);
        let c = back * Complex64::new(0.0, p.d2 / p.d);
        (c.re, c.im)
    }
}
