//! Rotating-frame coordinate map on cylindrical events.
//!
//! At fixed radius `r` the map is linear in `(φ, z, t)`:
//!
//! ```text
//! φ̃ = φ + Ωz − Ωt
//! z̃ = (−r²Ωφ + r²Ω²t)/√(1 − r²Ω²) + z√(1 − r²Ω²)
//! t̃ = (−r²Ωφ + t)/√(1 − r²Ω²)
//! ```
//!
//! and is only defined for `r²Ω² < 1`, i.e. `r < 1/Ω = λ/2π`.

use serde::{Deserialize, Serialize};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};

/// Default margin below `r²Ω² = 1` that is still treated as interior.
pub const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylindricalEvent {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
    pub t: f64,
}

impl CylindricalEvent {
    pub fn new(r: f64, phi: f64, z: f64, t: f64) -> Self {
        Self { r, phi, z, t }
    }
}

/// The linear map at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameMap {
    pub omega_n: f64,
    pub r: f64,
    /// `r²Ω²`.
    pub rho2: f64,
    /// `√(1 − r²Ω²)`.
    pub contraction: f64,
    /// `1/√(1 − r²Ω²)`.
    pub gamma: f64,
}

impl FrameMap {
    pub fn new(r: f64, omega_n: f64) -> Result<Self> {
        Self::with_eps(r, omega_n, BOUNDARY_EPS)
    }

    pub fn with_eps(r: f64, omega_n: f64, eps: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite() && omega_n.is_finite()) {
            return Err(Error::InvalidInput(format!("bad radius {r} or frequency {omega_n}")));
        }
        let v = r * omega_n;
        let rho2 = v * v;
        if rho2 > 1.0 - eps {
            return Err(Error::Domain(format!(
                "r²Ω² = {rho2} reaches the boundary; the map requires r < λ/2π = {}",
                max_radius(omega_n.abs())
            )));
        }
        let contraction = (1.0 - rho2).sqrt();
        Ok(Self {
            omega_n,
            r,
            rho2,
            contraction,
            gamma: 1.0 / contraction,
        })
    }

    /// `r²Ω`.
    fn q(&self) -> f64 {
        self.r * self.r * self.omega_n
    }

    /// Row-major matrix of `∂(φ̃, z̃, t̃)/∂(φ, z, t)`.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let (om, q, g, c, rho2) = (self.omega_n, self.q(), self.gamma, self.contraction, self.rho2);
        [[1.0, om, -om], [-q * g, c, rho2 * g], [-q * g, 0.0, g]]
    }

    pub fn apply(&self, phi: f64, z: f64, t: f64) -> (f64, f64, f64) {
        let (om, q, g, c, rho2) = (self.omega_n, self.q(), self.gamma, self.contraction, self.rho2);
        (
            phi + z * om - om * t,
            (-q * phi + rho2 * t) * g + z * c,
            (-q * phi + t) * g,
        )
    }

    /// Inverse by linear elimination: `z̃ − r²Ω²t̃ = √(1 − r²Ω²)(z − r²Ωφ)` and
    /// `t̃ = (t − r²Ωφ)/√(1 − r²Ω²)`.
    pub fn invert(&self, phi_r: f64, z_r: f64, t_r: f64) -> (f64, f64, f64) {
        let (om, q, c) = (self.omega_n, self.q(), self.contraction);
        let z_shift = (z_r - self.rho2 * t_r) / c;
        let t_shift = c * t_r;
        let phi = phi_r - om * (z_shift - t_shift);
        (phi, z_shift + q * phi, t_shift + q * phi)
    }

    /// Analytic determinant. The matrix factors as a unit shear (adding
    /// `r²Ω²` times the last row to the middle one) and a core whose
    /// cofactor expansion has no `γ²` cancellation.
    pub fn jacobian_det(&self) -> f64 {
        let (om, q, g, c) = (self.omega_n, self.q(), self.gamma, self.contraction);
        let core = [[1.0, om, -om], [-q * c, c, 0.0], [-q * g, 0.0, g]];
        det3(&core)
    }

    /// Determinant of a central-difference Jacobian of [`Self::apply`],
    /// evaluated in double-double arithmetic.
    pub fn jacobian_det_fd(&self, phi: f64, z: f64, t: f64, step: f64) -> f64 {
        let dd = DoubleDouble::from;
        let (om, q, g, c, rho2) = (
            dd(self.omega_n),
            dd(self.q()),
            dd(self.gamma),
            dd(self.contraction),
            dd(self.rho2),
        );
        let map = |v: [DoubleDouble; 3]| -> [DoubleDouble; 3] {
            let [phi, z, t] = v;
            [
                phi + z * om - om * t,
                (-(q * phi) + rho2 * t) * g + z * c,
                (-(q * phi) + t) * g,
            ]
        };
        let base = [dd(phi), dd(z), dd(t)];
        let h = dd(step);
        let inv_2h = dd(0.5 / step);
        let mut jac = [[DoubleDouble::ZERO; 3]; 3];
        for col in 0..3 {
            let mut plus = base;
            let mut minus = base;
            plus[col] = plus[col] + h;
            minus[col] = minus[col] - h;
            let (fp, fm) = (map(plus), map(minus));
            for row in 0..3 {
                jac[row][col] = (fp[row] - fm[row]) * inv_2h;
            }
        }
        let m = |i: usize, j: usize| jac[i][j];
        let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        det.to_f64()
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Maps a lab event into the rotating frame; `r` is unchanged.
pub fn to_rotating(e: &CylindricalEvent, omega_n: f64) -> Result<CylindricalEvent> {
    let map = FrameMap::new(e.r, omega_n)?;
    let (phi, z, t) = map.apply(e.phi, e.z, e.t);
    Ok(CylindricalEvent { r: e.r, phi, z, t })
}

pub fn from_rotating(e: &CylindricalEvent, omega_n: f64) -> Result<CylindricalEvent> {
    let map = FrameMap::new(e.r, omega_n)?;
    let (phi, z, t) = map.invert(e.phi, e.z, e.t);
    Ok(CylindricalEvent { r: e.r, phi, z, t })
}

pub fn jacobian_det(e: &CylindricalEvent, omega_n: f64) -> Result<f64> {
    Ok(FrameMap::new(e.r, omega_n)?.jacobian_det())
}

/// Finite-difference cross-check of [`jacobian_det`] with unit step.
pub fn jacobian_det_fd(e: &CylindricalEvent, omega_n: f64) -> Result<f64> {
    Ok(FrameMap::new(e.r, omega_n)?.jacobian_det_fd(e.phi, e.z, e.t, 1.0))
}

/// Largest admissible radius `1/Ω` in Compton units, i.e. `λ/2π`.
pub fn max_radius(omega_n: f64) -> f64 {
    1.0 / omega_n
}

/// `λ/2π` for a physical wavelength.
pub fn max_radius_physical(wavelength: f64) -> f64 {
    wavelength / (2.0 * std::f64::consts::PI)
}
