use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A real number stored as `sign · exp(log_mag)`.
///
/// `sign == 0` marks an exact zero; `log_mag` is then ignored and kept at
/// `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    sign: i8,
    log_mag: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue { sign: 1, log_mag: 0.0 };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_mag,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    /// `x · exp(offset)` without forming `exp(offset)`.
    pub fn from_scaled(x: f64, offset: f64) -> Self {
        let v = Self::from_f64(x);
        if v.is_zero() {
            v
        } else {
            Self::new(v.sign, v.log_mag + offset)
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Overflows to `±inf` when the magnitude exceeds `f64::MAX`.
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log_mag.exp()
    }

    /// `self / exp(log_ref)` as a plain float.
    pub fn scaled(&self, log_ref: f64) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            f64::from(self.sign) * (self.log_mag - log_ref).exp()
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.sign.abs(), self.log_mag)
    }

    /// Square root of a non-negative value; `None` for negative input.
    pub fn sqrt(&self) -> Option<Self> {
        match self.sign {
            0 => Some(Self::ZERO),
            1 => Some(Self::new(1, 0.5 * self.log_mag)),
            _ => None,
        }
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        *self * Self::from_f64(x)
    }
}

impl Neg for LogValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            log_mag: self.log_mag,
        }
    }
}

impl Mul for LogValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            Self::ZERO
        } else {
            Self::new(self.sign * rhs.sign, self.log_mag + rhs.log_mag)
        }
    }
}

impl Div for LogValue {
    type Output = Self;
    /// Division by zero yields `±inf` magnitude, like `f64`.
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            Self::ZERO
        } else if rhs.is_zero() {
            Self::new(self.sign, f64::INFINITY)
        } else {
            Self::new(self.sign * rhs.sign, self.log_mag - rhs.log_mag)
        }
    }
}

impl Add for LogValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = (small.log_mag - big.log_mag).exp();
        if big.sign == small.sign {
            Self::new(big.sign, big.log_mag + ratio.ln_1p())
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.log_mag + (-ratio).ln_1p())
        }
    }
}

impl Sub for LogValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_mag),
        }
    }
}
