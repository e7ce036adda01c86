//! Composite Gauss–Legendre quadrature with panel doubling.

use std::sync::OnceLock;

use super::LogValue;
use crate::error::{Error, Result};

/// Nodes per panel.
pub const GL_ORDER: usize = 20;

/// Tightest relative tolerance accepted.
pub const MIN_REL_TOL: f64 = 1e-13;

const DEFAULT_MAX_PANELS: usize = 1 << 14;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Integrand `prefactor · exp(exponent)` with the exponent reported relative
/// to a constant offset: `eval` returns `(prefactor, exponent − offset)`.
///
/// Choosing the offset near the maximum of the exponent keeps
/// `prefactor · exp(exponent − offset)` of order one.
pub trait ScaledIntegrand {
    fn eval(&self, x: f64) -> (f64, f64);
    fn exponent_offset(&self) -> f64;
}

/// Closure-backed [`ScaledIntegrand`].
pub struct FnIntegrand<F> {
    pub f: F,
    pub offset: f64,
}

impl<F: Fn(f64) -> (f64, f64)> ScaledIntegrand for FnIntegrand<F> {
    fn eval(&self, x: f64) -> (f64, f64) {
        (self.f)(x)
    }
    fn exponent_offset(&self) -> f64 {
        self.offset
    }
}

/// Initial panel layout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading {
    Uniform {
        panels: usize,
    },
    /// Panels doubling in width away from the lower endpoint, starting
    /// well inside the characteristic `width` of a peak there.
    Geometric {
        width: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub lower: f64,
    pub upper: f64,
    pub rel_tol: f64,
    pub grading: Grading,
    pub max_panels: usize,
}

impl QuadOptions {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self {
            lower,
            upper,
            rel_tol: 1e-12,
            grading: Grading::Uniform { panels: 4 },
            max_panels: DEFAULT_MAX_PANELS,
        }
    }

    pub fn rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }

    pub fn max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return Err(Error::InvalidInput(format!(
                "bad integration interval [{}, {}]",
                self.lower, self.upper
            )));
        }
        if !(self.rel_tol >= MIN_REL_TOL) {
            return Err(Error::InvalidInput(format!(
                "rel_tol {} is below the minimum {MIN_REL_TOL:e}",
                self.rel_tol
            )));
        }
        Ok(())
    }

    fn initial_edges(&self) -> Vec<f64> {
        let (a, b) = (self.lower, self.upper);
        let len = b - a;
        let uniform = |n: usize| (0..=n).map(|i| a + len * i as f64 / n as f64).collect::<Vec<_>>();
        match self.grading {
            Grading::Uniform { panels } => uniform(panels.max(1)),
            Grading::Geometric { width } if !(width > 0.0) || width >= len / 4.0 => uniform(4),
            Grading::Geometric { width } => {
                let mut edges = vec![a];
                let mut s = width / 256.0;
                while s < len {
                    edges.push(a + s);
                    s *= 2.0;
                }
                edges.push(b);
                edges
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub panels: usize,
    /// Largest relative change between the last two refinements.
    pub relative_change: f64,
}

fn sweep<const N: usize>(edges: &[f64], f: &impl Fn(f64) -> ([f64; N], f64)) -> ([f64; N], [f64; N]) {
    let (nodes, weights) = rule();
    let mut sum = [0.0; N];
    let mut abs = [0.0; N];
    for pair in edges.windows(2) {
        let half = 0.5 * (pair[1] - pair[0]);
        let mid = 0.5 * (pair[1] + pair[0]);
        for (x, w) in nodes.iter().zip(weights) {
            let (pre, expo) = f(mid + half * x);
            let scale = w * half * expo.exp();
            for k in 0..N {
                let v = pre[k] * scale;
                sum[k] += v;
                abs[k] += v.abs();
            }
        }
    }
    (sum, abs)
}

/// Integrates `N` integrands sharing one exponent:
/// `∫ prefactor_k(x) · exp(exponent(x) + offset) dx` for each `k`.
pub fn integrate_scaled_many<const N: usize>(
    f: impl Fn(f64) -> ([f64; N], f64),
    offset: f64,
    opts: &QuadOptions,
) -> Result<QuadResult<[LogValue; N]>> {
    let r = integrate_mantissas(f, opts)?;
    Ok(QuadResult {
        value: r.value.map(|s| LogValue::from_scaled(s, offset)),
        panels: r.panels,
        relative_change: r.relative_change,
    })
}

/// Like [`integrate_scaled_many`] but returns the plain sums
/// `∫ prefactor_k · exp(exponent) dx` without the offset. Differences of
/// results sharing an offset keep full relative precision this way, which a
/// [`LogValue`] with a large `log_mag` does not.
pub fn integrate_mantissas<const N: usize>(
    f: impl Fn(f64) -> ([f64; N], f64),
    opts: &QuadOptions,
) -> Result<QuadResult<[f64; N]>> {
    opts.validate()?;
    let mut edges = opts.initial_edges();
    let (mut prev, _) = sweep(&edges, &f);
    loop {
        let mut refined = Vec::with_capacity(2 * edges.len());
        for pair in edges.windows(2) {
            refined.push(pair[0]);
            refined.push(0.5 * (pair[0] + pair[1]));
        }
        refined.push(opts.upper);
        edges = refined;
        let panels = edges.len() - 1;
        let (sum, abs) = sweep(&edges, &f);
        let mut change: f64 = 0.0;
        for k in 0..N {
            if abs[k] > 0.0 {
                change = change.max((sum[k] - prev[k]).abs() / abs[k]);
            }
        }
        if change <= opts.rel_tol {
            return Ok(QuadResult {
                value: sum,
                panels,
                relative_change: change,
            });
        }
        if 2 * panels > opts.max_panels {
            let worst = (0..N)
                .max_by(|&i, &j| {
                    let ci = (sum[i] - prev[i]).abs() / abs[i].max(f64::MIN_POSITIVE);
                    let cj = (sum[j] - prev[j]).abs() / abs[j].max(f64::MIN_POSITIVE);
                    ci.total_cmp(&cj)
                })
                .unwrap_or(0);
            return Err(Error::NonConvergence {
                panels,
                last: sum.get(worst).copied().unwrap_or(f64::NAN),
                previous: prev.get(worst).copied().unwrap_or(f64::NAN),
            });
        }
        prev = sum;
    }
}

/// Integrates a single [`ScaledIntegrand`] into a [`LogValue`].
pub fn integrate_scaled<F: ScaledIntegrand + ?Sized>(f: &F, opts: &QuadOptions) -> Result<QuadResult<LogValue>> {
    let r = integrate_scaled_many(
        |x| {
            let (pre, expo) = f.eval(x);
            ([pre], expo)
        },
        f.exponent_offset(),
        opts,
    )?;
    Ok(QuadResult {
        value: r.value[0],
        panels: r.panels,
        relative_change: r.relative_change,
    })
}

/// Plain real-valued integral.
pub fn integrate(f: impl Fn(f64) -> f64, opts: &QuadOptions) -> Result<QuadResult<f64>> {
    let r = integrate_scaled_many(|x| ([f(x)], 0.0), 0.0, opts)?;
    Ok(QuadResult {
        value: r.value[0].to_f64(),
        panels: r.panels,
        relative_change: r.relative_change,
    })
}
