//! 4×4 complex Dirac algebra in the Dirac–Pauli representation.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest 1-norm accepted by [`mat_exp`]; `e^512` is still finite.
pub const MAT_EXP_NORM_CAP: f64 = 512.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4C(pub Matrix4<Complex64>);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spinor4(pub [Complex64; 4]);

impl Matrix4C {
    pub fn zeros() -> Self {
        Self(Matrix4::zeros())
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn from_fn(f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(Matrix4::from_fn(f))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..4)
            .map(|j| (0..4).map(|i| self.0[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn apply(&self, s: &Spinor4) -> Spinor4 {
        Spinor4::from_vector(self.0 * s.to_vector())
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }
}

impl Mul for Matrix4C {
    type Output = Matrix4C;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl Add for Matrix4C {
    type Output = Matrix4C;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for Matrix4C {
    type Output = Matrix4C;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for Matrix4C {
    type Output = Matrix4C;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Spinor4 {
    pub fn new(c: [Complex64; 4]) -> Self {
        Self(c)
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Self(c.map(|x| Complex64::new(x, 0.0)))
    }

    fn to_vector(self) -> Vector4<Complex64> {
        Vector4::from(self.0)
    }

    fn from_vector(v: Vector4<Complex64>) -> Self {
        Self([v[0], v[1], v[2], v[3]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    /// `ψ†χ`.
    pub fn inner(&self, other: &Spinor4) -> Complex64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `ψ†Mψ`.
    pub fn bilinear(&self, m: &Matrix4C) -> Complex64 {
        self.inner(&m.apply(self))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

/// The four Dirac matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrices {
    pub alpha: [Matrix4C; 3],
    pub beta: Matrix4C,
}

fn block_off_diagonal(pauli: [[Complex64; 2]; 2]) -> Matrix4C {
    Matrix4C::from_fn(|i, j| match (i < 2, j < 2) {
        (true, false) => pauli[i][j - 2],
        (false, true) => pauli[i - 2][j],
        _ => ZERO,
    })
}

/// `β = diag(1, 1, −1, −1)`, `α_k` with the Pauli matrix `σ_k` in both
/// off-diagonal blocks.
pub fn dirac_matrices() -> DiracMatrices {
    let s1 = [[ZERO, ONE], [ONE, ZERO]];
    let s2 = [[ZERO, -I], [I, ZERO]];
    let s3 = [[ONE, ZERO], [ZERO, -ONE]];
    let beta = Matrix4C::from_fn(|i, j| match (i == j, i < 2) {
        (true, true) => ONE,
        (true, false) => -ONE,
        _ => ZERO,
    });
    DiracMatrices {
        alpha: [block_off_diagonal(s1), block_off_diagonal(s2), block_off_diagonal(s3)],
        beta,
    }
}

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// series. The scaled matrix has 1-norm at most 1/2, where 18 terms reach
/// double precision.
pub fn mat_exp(m: &Matrix4C) -> Result<Matrix4C> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix exponential of non-finite matrix".into()));
    }
    let norm = m.norm_one();
    if norm > MAT_EXP_NORM_CAP {
        return Err(Error::Overflow {
            norm,
            cap: MAT_EXP_NORM_CAP,
        });
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale_re(2f64.powi(-squarings));
    let mut term = Matrix4C::identity();
    let mut sum = Matrix4C::identity();
    for k in 1..=18 {
        term = (term * a).scale_re(1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    Ok(sum)
}

/// Hyperbolic and trigonometric angles of the rotating-frame map at radius
/// `r`: `cosh Φ = 1/√(1 − r²Ω²)`, `sinh Φ = rΩ/√(1 − r²Ω²)`, `sin Φ₁ = −rΩ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameAngles {
    pub phi: f64,
    pub phi1: f64,
}

impl FrameAngles {
    pub fn at_radius(r: f64, omega_n: f64) -> Result<Self> {
        let v = r * omega_n;
        if !(v * v < 1.0) {
            return Err(Error::Domain(format!(
                "r²Ω² = {} must be below 1 (r ≤ λ/2π); the rapidity diverges at the boundary",
                v * v
            )));
        }
        Ok(Self {
            phi: v.atanh(),
            phi1: (-v).asin(),
        })
    }

    pub fn cosh_phi(&self) -> f64 {
        self.phi.cosh()
    }
}

/// `P = exp(½α₂α₃Φ₁ + ½α₂Φ)` as a single exponential, and `P̃ = βPβ`.
pub fn boost_operator(angles: FrameAngles) -> Result<(Matrix4C, Matrix4C)> {
    let dm = dirac_matrices();
    let [_, a2, a3] = dm.alpha;
    let generator = (a2 * a3).scale_re(0.5 * angles.phi1) + a2.scale_re(0.5 * angles.phi);
    let p = mat_exp(&generator)?;
    let p_tilde = dm.beta * p * dm.beta;
    Ok((p, p_tilde))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &Matrix4C, b: &Matrix4C, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn anticommutation_table() {
        let dm = dirac_matrices();
        let all = [dm.alpha[0], dm.alpha[1], dm.alpha[2], dm.beta];
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let expected = if i == j {
                    Matrix4C::identity().scale_re(2.0)
                } else {
                    Matrix4C::zeros()
                };
                assert!(close(&a.anticommutator(b), &expected, 1e-15), "{i},{j}");
            }
        }
        for a in dm.alpha {
            assert_eq!(a.trace(), ZERO);
            assert_eq!(a.adjoint(), a);
        }
        assert!(close(&(dm.beta * dm.beta), &Matrix4C::identity(), 0.0));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(mat_exp(&Matrix4C::zeros()).unwrap(), Matrix4C::identity());
    }

    #[test]
    fn spin_rotation_by_pi() {
        // α₁α₂ = diag(i, −i, i, −i): exp(π α₁α₂) = −I, exp(½π α₁α₂) = α₁α₂.
        let dm = dirac_matrices();
        let s = dm.alpha[0] * dm.alpha[1];
        let diag = [I, -I, I, -I];
        let oracle = Matrix4C::from_fn(|i, j| {
            if i == j {
                (diag[i] * std::f64::consts::PI).exp()
            } else {
                ZERO
            }
        });
        let e = mat_exp(&s.scale_re(std::f64::consts::PI)).unwrap();
        assert!(close(&e, &oracle, 1e-14));
        assert!(close(&e, &Matrix4C::identity().scale_re(-1.0), 1e-14));
        let half = mat_exp(&s.scale_re(std::f64::consts::FRAC_PI_2)).unwrap();
        assert!(close(&half, &s, 1e-14));
    }

    #[test]
    fn boost_generator_closed_form() {
        let a2 = dirac_matrices().alpha[1];
        let e = mat_exp(&a2.scale_re(0.25)).unwrap();
        let oracle = Matrix4C::identity().scale_re(0.25f64.cosh()) + a2.scale_re(0.25f64.sinh());
        assert!(close(&e, &oracle, 1e-15));
    }

    #[test]
    fn exp_overflow_cap() {
        let m = Matrix4C::identity().scale_re(1000.0);
        assert!(matches!(mat_exp(&m), Err(Error::Overflow { .. })));
    }

    #[test]
    fn boost_examples() {
        let (p, pt) = boost_operator(FrameAngles { phi: 0.0, phi1: 0.0 }).unwrap();
        assert_eq!(p, Matrix4C::identity());
        assert_eq!(pt, Matrix4C::identity());
        let angles = FrameAngles::at_radius(0.5, 1.0).unwrap();
        assert!((angles.cosh_phi() - 1.154_700_538_379_251_5).abs() < 1e-14);
        assert!(FrameAngles::at_radius(1.0, 1.0).is_err());
        assert!(FrameAngles::at_radius(2.0, 1.0).is_err());
    }

    #[test]
    fn boost_generators_do_not_commute() {
        let dm = dirac_matrices();
        let [_, a2, a3] = dm.alpha;
        assert!((a2 * a3).commutator(&a2).max_abs() > 1.0);
    }

    fn bounded_matrix() -> impl Strategy<Value = Matrix4C> {
        prop::collection::vec((-0.75f64..0.75, -0.75f64..0.75), 16).prop_map(|v| {
            Matrix4C::from_fn(|i, j| {
                let (re, im) = v[4 * i + j];
                Complex64::new(re, im)
            })
        })
    }

    proptest! {
        #[test]
        fn exp_inverse(m in bounded_matrix()) {
            let prod = mat_exp(&m).unwrap() * mat_exp(&-m).unwrap();
            prop_assert!(close(&prod, &Matrix4C::identity(), 1e-12));
        }

        #[test]
        fn boost_unimodular(r in 0.0f64..0.999, om in 0.1f64..3.0) {
            let angles = FrameAngles::at_radius(r / om, om).unwrap();
            let (p, pt) = boost_operator(angles).unwrap();
            prop_assert!((p.determinant().norm() - 1.0).abs() < 1e-12);
            let dm = dirac_matrices();
            prop_assert!(close(&(dm.beta * pt * dm.beta), &p, 1e-14));
        }
    }
}
