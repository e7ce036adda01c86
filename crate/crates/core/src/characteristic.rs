//! Cubic characteristic equation for the light-front energy `𝓔 = E − p`.
//!
//! With `b = 2p − Ω` the equation `𝓔(𝓔 + b) − 1 − 𝓔h²/(𝓔 − 𝓔₀) = 0` is
//! cleared of its pole into the cubic `(𝓔 − 𝓔₀)[𝓔(𝓔 + b) − 1] − h²𝓔 = 0`.
//! At `b = 1/𝓔₀ − 𝓔₀` and `h = 0` the cubic has the double root `𝓔₀`, which
//! splits linearly in `h` into the singular pair.

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance on `|b − (1/𝓔₀ − 𝓔₀)|` for flagging the singular pair.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Roots closer than this (and not at the singular `b`) raise a warning.
pub const CLOSE_ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharInput {
    pub e0: f64,
    pub h: f64,
    /// `2p − Ω`.
    pub b: f64,
}

impl CharInput {
    pub fn new(e0: f64, h: f64, b: f64) -> Self {
        Self { e0, h, b }
    }

    /// Input at the momentum that supports the singular pair.
    pub fn singular(e0: f64, h: f64) -> Self {
        Self {
            e0,
            h,
            b: 1.0 / e0 - e0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.e0.is_finite() && self.h.is_finite() && self.b.is_finite()) {
            return Err(Error::InvalidInput("non-finite characteristic input".into()));
        }
        if self.e0 <= 0.0 {
            return Err(Error::InvalidInput(format!("e0 must be positive, got {}", self.e0)));
        }
        if self.h < 0.0 {
            return Err(Error::InvalidInput(format!("h must be non-negative, got {}", self.h)));
        }
        Ok(())
    }

    /// The `b` value at which the singular pair exists.
    pub fn singular_b(&self) -> f64 {
        1.0 / self.e0 - self.e0
    }

    pub fn is_singular(&self, tol: f64) -> bool {
        (self.b - self.singular_b()).abs() <= tol
    }

    /// Monic coefficients `[c0, c1, c2]` of `𝓔³ + c2 𝓔² + c1 𝓔 + c0`.
    pub fn monic_coefficients(&self) -> [f64; 3] {
        let CharInput { e0, h, b } = *self;
        [e0, -1.0 - b * e0 - h * h, b - e0]
    }

    /// Cleared cubic evaluated in factored form.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let CharInput { e0, h, b } = *self;
        (z - e0) * (z * (z + b) - 1.0) - z * (h * h)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let CharInput { e0, h, b } = *self;
        (z * (z + b) - 1.0) + (z - e0) * (2.0 * z + b) - h * h
    }

    /// Sum of the magnitudes of the terms of the cleared cubic at `z`.
    fn residual_scale(&self, z: Complex64) -> f64 {
        let CharInput { e0, h, b } = *self;
        let q = z * (z + b);
        (z - e0).norm() * (q.norm() + 1.0) + (z * (h * h)).norm() + f64::MIN_POSITIVE
    }

    /// Relative residual of the cleared cubic at `z`.
    pub fn relative_residual(&self, z: Complex64) -> f64 {
        self.eval(z).norm() / self.residual_scale(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    SingularPair,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharRoots {
    pub input: CharInput,
    /// Sorted by descending real part.
    pub roots: [Complex64; 3],
    pub residuals: [f64; 3],
    pub class: RootClass,
    /// `𝓔₀/√(𝓔₀² + 1)` when the configuration is singular.
    pub pair_slope: Option<f64>,
    pub warnings: Vec<String>,
}

/// The singular pair and the remaining root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularRoots {
    pub plus: f64,
    pub minus: f64,
    pub third: f64,
}

impl CharRoots {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Real parts of the roots, or `None` if any root has a non-negligible
    /// imaginary part.
    pub fn real_roots(&self) -> Option<[f64; 3]> {
        let mut out = [0.0; 3];
        for (o, r) in out.iter_mut().zip(self.roots.iter()) {
            if r.im.abs() > 1e-10 * (1.0 + r.re.abs()) {
                return None;
            }
            *o = r.re;
        }
        Some(out)
    }

    /// Splits the roots into the pair closest to `𝓔₀` and the third root.
    pub fn singular_pair(&self) -> Option<SingularRoots> {
        if self.class != RootClass::SingularPair {
            return None;
        }
        let re = self.roots.map(|r| r.re);
        let e0 = self.input.e0;
        let third = (0..3)
            .max_by(|&i, &j| (re[i] - e0).abs().total_cmp(&(re[j] - e0).abs()))
            .expect("three roots");
        let mut pair: Vec<f64> = (0..3).filter(|&i| i != third).map(|i| re[i]).collect();
        pair.sort_by(|a, b| b.total_cmp(a));
        Some(SingularRoots {
            plus: pair[0],
            minus: pair[1],
            third: re[third],
        })
    }
}

fn polish(input: &CharInput, mut z: Complex64) -> Complex64 {
    let mut last_step = f64::INFINITY;
    for _ in 0..200 {
        let df = input.eval_derivative(z);
        if df.norm() == 0.0 {
            break;
        }
        let step = input.eval(z) / df;
        let size = step.norm();
        // Stalls when rounding dominates; linear convergence near the double
        // root still shrinks the step every iteration.
        if !(size < last_step) && size <= 1e-12 * (1.0 + z.norm()) {
            break;
        }
        z -= step;
        if size <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
        last_step = size;
    }
    z
}

pub fn solve_characteristic(input: &CharInput) -> Result<CharRoots> {
    solve_characteristic_with_tol(input, SINGULAR_TOL)
}

/// All three roots of the cleared cubic: companion-matrix eigenvalues,
/// then Newton polishing on the factored form.
pub fn solve_characteristic_with_tol(input: &CharInput, singular_tol: f64) -> Result<CharRoots> {
    input.validate()?;
    let [c0, c1, c2] = input.monic_coefficients();
    let companion = Matrix3::new(-c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    let eig = companion.complex_eigenvalues();
    let mut roots = [eig[0], eig[1], eig[2]].map(|z| polish(input, z));
    for r in roots.iter_mut() {
        if r.im.abs() <= 1e-14 * (1.0 + r.re.abs()) {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let residuals = roots.map(|z| input.relative_residual(z));

    let singular = input.is_singular(singular_tol);
    let mut warnings = Vec::new();
    if !singular {
        for i in 0..3 {
            for j in i + 1..3 {
                if (roots[i] - roots[j]).norm() < CLOSE_ROOT_TOL {
                    warnings.push(format!(
                        "ill-conditioned: roots {i} and {j} are within {CLOSE_ROOT_TOL:e} away from the singular momentum"
                    ));
                }
            }
        }
    }
    let e0 = input.e0;
    Ok(CharRoots {
        input: *input,
        roots,
        residuals,
        class: if singular {
            RootClass::SingularPair
        } else {
            RootClass::Generic
        },
        pair_slope: singular.then(|| e0 / (e0 * e0 + 1.0).sqrt()),
        warnings,
    })
}

/// Exact singular pair `(𝓔₊, 𝓔₋)` from the solver.
pub fn singular_roots(e0: f64, h: f64) -> Result<SingularRoots> {
    let roots = solve_characteristic(&CharInput::singular(e0, h))?;
    roots
        .singular_pair()
        .ok_or_else(|| Error::Degenerate("singular pair not found".into()))
}

/// Second-order coefficient `𝓔₂` of the singular expansion, obtained from
/// the exact roots by Richardson extrapolation of `(𝓔₊ + 𝓔₋ − 2𝓔₀)/(2h²)`.
/// Odd orders cancel in the sum, so the error series is in powers of `h²`.
pub fn fit_second_order_coefficient(e0: f64) -> Result<f64> {
    let h0 = 1e-2;
    let s = |h: f64| -> Result<f64> {
        let r = singular_roots(e0, h)?;
        Ok((r.plus + r.minus - 2.0 * e0) / (2.0 * h * h))
    };
    let (s1, s2, s4) = (s(h0)?, s(h0 / 2.0)?, s(h0 / 4.0)?);
    let r1 = (4.0 * s2 - s1) / 3.0;
    let r2 = (4.0 * s4 - s2) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

/// Expansion order for [`singular_expansion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionOrder {
    First,
    Second,
}

/// `𝓔± = 𝓔₀ ± h𝓔₀/√(𝓔₀² + 1) [+ h²𝓔₂]`, returned as `(𝓔₊, 𝓔₋)`.
pub fn singular_expansion(e0: f64, h: f64, order: ExpansionOrder) -> Result<(f64, f64)> {
    if e0 <= 0.0 {
        return Err(Error::InvalidInput(format!("e0 must be positive, got {e0}")));
    }
    let slope = e0 / (e0 * e0 + 1.0).sqrt();
    let second = match order {
        ExpansionOrder::First => 0.0,
        ExpansionOrder::Second => fit_second_order_coefficient(e0)? * h * h,
    };
    Ok((e0 + h * slope + second, e0 - h * slope + second))
}

/// Third root to second order, `−1/𝓔₀ − 𝓔₀h²/(1 + 𝓔₀²)²`.
pub fn third_root_expansion(e0: f64, h: f64) -> f64 {
    let a2 = 1.0 + e0 * e0;
    -1.0 / e0 - e0 * h * h / (a2 * a2)
}

/// Gaussian envelope parameters of the ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    /// Decay rate `d = Ω𝓔₀/2`.
    pub d: f64,
    /// Displacement parameter `d₂ = 𝓔₀h/(2(𝓔 − 𝓔₀))`.
    pub d2: f64,
}

/// Leading-order `d₂` on the singular branch with sign `branch`.
pub fn leading_d2(e0: f64, branch: f64) -> f64 {
    branch * (e0 * e0 + 1.0).sqrt() / 2.0
}

pub fn gaussian_params(e0: f64, e_root: f64, h: f64, omega_n: f64) -> Result<GaussianParams> {
    let d = omega_n * e0 / 2.0;
    if !(d > 0.0) {
        return Err(Error::Domain(format!(
            "Gaussian decay rate d = Ω·e0/2 = {d} must be positive"
        )));
    }
    let gap = e_root - e0;
    if gap.abs() < 1e-14 {
        return Err(Error::Degenerate(format!(
            "d2 undefined: root {e_root} coincides with e0 = {e0}"
        )));
    }
    Ok(GaussianParams {
        d,
        d2: e0 * h / (2.0 * gap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_re(r: &CharRoots) -> Vec<f64> {
        let mut v: Vec<f64> = r.roots.iter().map(|z| z.re).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    #[test]
    fn degenerate_cubic_factors() {
        let r = solve_characteristic(&CharInput::new(1.0, 0.0, 0.0)).unwrap();
        let v = sorted_re(&r);
        assert!((v[0] + 1.0).abs() < 1e-14);
        assert!((v[1] - 1.0).abs() < 1e-12);
        assert!((v[2] - 1.0).abs() < 1e-12);
        assert_eq!(r.class, RootClass::SingularPair);
    }

    #[test]
    fn pair_splits_with_slope() {
        let h = 0.01;
        let s = singular_roots(1.0, h).unwrap();
        let slope = 1.0 / 2f64.sqrt();
        // O(h²) with coefficient 1/8.
        assert!((s.plus - (1.0 + h * slope)).abs() < 2e-5);
        assert!((s.minus - (1.0 - h * slope)).abs() < 2e-5);
    }

    #[test]
    fn third_root_second_order() {
        // Perturbation oracle: 𝓔 = −1/𝓔₀ + x, (𝓔 − 𝓔₀)Q'(−1/𝓔₀)x = h²𝓔 gives
        // x = −𝓔₀h²/(1 + 𝓔₀²)², so −1.000025 at 𝓔₀ = 1, h = 0.01.
        let s = singular_roots(1.0, 0.01).unwrap();
        assert!((s.third - (-1.000025)).abs() < 1e-8, "{}", s.third);
        for e0 in [0.5, 2.0, 5.0] {
            let h = 1e-3;
            let s = singular_roots(e0, h).unwrap();
            assert!((s.third - third_root_expansion(e0, h)).abs() < 10.0 * h.powi(4));
        }
    }

    #[test]
    fn vieta_and_residuals() {
        for &(e0, h, b) in &[(1.0, 0.01, 0.0), (2.0, 0.3, -1.0), (0.5, 0.05, 4.0), (3.0, 0.0, 0.7)] {
            let input = CharInput::new(e0, h, b);
            let r = solve_characteristic(&input).unwrap();
            assert!(r.max_residual() < 1e-12, "{:?}", r.residuals);
            let [c0, c1, c2] = input.monic_coefficients();
            let [z1, z2, z3] = r.roots;
            let scale = 1.0 + c0.abs() + c1.abs() + c2.abs();
            assert!(((z1 + z2 + z3) + c2).norm() < 1e-12 * scale);
            assert!(((z1 * z2 + z1 * z3 + z2 * z3) - c1).norm() < 1e-12 * scale);
            assert!(((z1 * z2 * z3) + c0).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn pair_symmetry_is_second_order() {
        for h in [1e-2, 1e-3] {
            let s = singular_roots(2.0, h).unwrap();
            let sum = (s.plus - 2.0) + (s.minus - 2.0);
            assert!(sum.abs() < 0.1 * h * h);
        }
    }

    #[test]
    fn slope_converges_linearly() {
        let e0 = 2.0;
        let target = e0 / (e0 * e0 + 1f64).sqrt();
        let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&h| ((singular_roots(e0, h).unwrap().plus - e0) / h - target).abs())
            .collect();
        assert!(errs[1] < errs[0] / 5.0 && errs[2] < errs[1] / 5.0, "{errs:?}");
    }

    #[test]
    fn expansion_examples() {
        let (p, m) = singular_expansion(1.0, 0.0, ExpansionOrder::First).unwrap();
        assert_eq!((p, m), (1.0, 1.0));
        let (p, m) = singular_expansion(1.0, 0.02, ExpansionOrder::First).unwrap();
        assert!((p - 1.0141421).abs() < 1e-7 && (m - 0.9858579).abs() < 1e-7);
        let (p, m) = singular_expansion(2.0, 0.01, ExpansionOrder::First).unwrap();
        assert!((p - 2.0089443).abs() < 1e-7 && (m - 1.9910557).abs() < 1e-7);
    }

    #[test]
    fn fitted_second_order_matches_perturbation() {
        // 𝓔₂ = 𝓔₀/(2(1 + 𝓔₀²)²) from matching the h³ terms of the cubic.
        for e0 in [0.5, 1.0, 2.0, 5.0] {
            let a2 = 1.0 + e0 * e0;
            let exact = e0 / (2.0 * a2 * a2);
            let fit = fit_second_order_coefficient(e0).unwrap();
            assert!((fit - exact).abs() < 1e-6 * exact.max(1e-3), "{e0}: {fit} vs {exact}");
        }
        let (p, _) = singular_expansion(1.0, 0.01, ExpansionOrder::Second).unwrap();
        let exact = singular_roots(1.0, 0.01).unwrap().plus;
        assert!((p - exact).abs() < 1e-6);
    }

    #[test]
    fn gaussian_examples() {
        let g = gaussian_params(1.0, 1.5, 0.0, 0.01).unwrap();
        assert!((g.d - 0.005).abs() < 1e-18);
        assert_eq!(g.d2, 0.0);
        let s = singular_roots(1.0, 0.01).unwrap();
        let g = gaussian_params(1.0, s.plus, 0.01, 0.01).unwrap();
        assert!((g.d2 - leading_d2(1.0, 1.0)).abs() < 0.01);
        let s = singular_roots(1.0, 1e-6).unwrap();
        let g = gaussian_params(1.0, s.plus, 1e-6, 0.01).unwrap();
        assert!((g.d2 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
        assert!(matches!(
            gaussian_params(1.0, 1.0, 0.0, 0.01),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(gaussian_params(1.0, 1.2, 0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn generic_classification_and_warning() {
        let r = solve_characteristic(&CharInput::new(1.0, 0.1, 0.5)).unwrap();
        assert_eq!(r.class, RootClass::Generic);
        assert!(r.pair_slope.is_none());
        assert!(r.singular_pair().is_none());
        // Double root e0 away from the singular b: h = 0 and Q(e0) = 0 needs
        // b = 1/e0 − e0, so perturb b by less than the detection tolerance.
        let r = solve_characteristic_with_tol(&CharInput::new(1.0, 0.0, 1e-12), 0.0).unwrap();
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_characteristic(&CharInput::new(-1.0, 0.0, 0.0)).is_err());
        assert!(solve_characteristic(&CharInput::new(1.0, -0.1, 0.0)).is_err());
    }
}
