//! `rotloc` command-line front end.
//!
//! Every subcommand writes one report to standard output (or to `--out`):
//! JSON with `schema: 1` for everything except `sweep`, which defaults to
//! CSV. Exit codes: 0 success, 1 bad input, 2 domain error, 3 convergence
//! or convention failure.

mod report;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use rotloc::characteristic::{solve_characteristic, CharInput};
use rotloc::frame::{from_rotating, max_radius, to_rotating, FrameMap};
use rotloc::localization::{
    lab_radius_closed, lab_radius_moment, lab_radius_numeric, log_grid, ode_residual, rot_radius, sweep,
    DEFAULT_REL_TOL,
};
use rotloc::logquad::MIN_REL_TOL;
use rotloc::params::normalize;
use rotloc::{
    Branch, Convention, CylindricalEvent, Error, LabWavefunction, ModelParams, PhysicalInput, Result, YConvention,
};

use report::{envelope, q, Conventions, Tolerance};

const MAX_REL_TOL: f64 = 1e-3;

#[derive(Parser, Debug)]
#[command(
    name = "rotloc",
    version,
    about = "Dirac ground states in a rotating field and their localization radii"
)]
struct Cli {
    /// Relative tolerance for quadratures, in [1e-13, 1e-3].
    #[arg(long, global = true, env = "ROTLOC_REL_TOL", default_value_t = DEFAULT_REL_TOL)]
    rel_tol: f64,

    /// Seed for randomly drawn sample points.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; only `sweep` supports csv.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots of the cubic characteristic equation.
    Roots {
        #[arg(long, allow_hyphen_values = true)]
        e0: f64,
        #[arg(long, default_value_t = 0.0)]
        h: f64,
        /// Defaults to the singular value 1/e0 − e0.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
    },
    /// Localization radius in the lab or rotating frame.
    Localize {
        #[command(subcommand)]
        frame: LocalizeFrame,
    },
    /// Rotating-frame radius and integrals over a log-spaced kappa grid.
    Sweep {
        #[arg(long)]
        kappa_from: f64,
        #[arg(long)]
        kappa_to: f64,
        #[arg(long, default_value_t = 9)]
        points: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        e0: f64,
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        branch: Branch,
        #[arg(long, default_value = "decaying")]
        y_convention: YConvention,
    },
    /// Numerical verification of the exact solution and its reductions.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Evaluate the lab-frame wavefunction at one event.
    Wavefunction {
        /// Event as x,y,z,t.
        #[arg(long, value_parser = parse_event, allow_hyphen_values = true)]
        at: [f64; 4],
        #[command(flatten)]
        state: StateArgs,
    },
    /// Map a cylindrical event into (or out of) the rotating frame.
    Transform {
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        omega: f64,
        /// Treat the event as rotating-frame coordinates and map back.
        #[arg(long)]
        inverse: bool,
    },
}

#[derive(Subcommand, Debug)]
enum LocalizeFrame {
    /// Closed-form lab radius; with --kappa also the Gaussian moment and a
    /// 2D quadrature of the density.
    Lab {
        #[arg(long, allow_hyphen_values = true)]
        e0: Option<f64>,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        branch: Branch,
        /// JSON file holding a PhysicalInput or model parameters.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Rotating-frame radius against the λ/2π bound.
    Rot {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value = "decaying")]
        y_convention: YConvention,
    },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Dirac residual of the lab wavefunction under every sign convention.
    Dirac {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Residuals of the kappa-evolution system of the rotating integrals.
    Ode {
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        e0: f64,
        #[arg(long, default_value = "+1", allow_hyphen_values = true)]
        branch: Branch,
        #[arg(long, default_value_t = 1e-4)]
        fd_step: f64,
        #[arg(long, default_value = "decaying")]
        y_convention: YConvention,
    },
    /// Jacobian determinant and inverse of the rotating-frame map.
    Transform {
        #[arg(long, default_value_t = 0.5)]
        omega: f64,
        #[arg(long, default_value_t = 10_000)]
        events: usize,
    },
}

/// Normalized state parameters, or a config file that supplies them.
#[derive(Args, Debug, Clone)]
struct StateArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    e0: f64,
    #[arg(long, default_value_t = 0.01)]
    h: f64,
    /// Normalized frequency Ω; its reciprocal is kappa.
    #[arg(long, conflicts_with = "kappa")]
    omega: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, default_value = "+1", allow_hyphen_values = true)]
    branch: Branch,
    /// JSON file holding a PhysicalInput or model parameters.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct ModelSpec {
    e0: f64,
    #[serde(default)]
    h: f64,
    omega_n: f64,
    #[serde(default = "plus")]
    branch: Branch,
}

fn plus() -> Branch {
    Branch::Plus
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    Physical(PhysicalInput),
    Model(ModelSpec),
}

/// Resolved state plus the physical input it came from, if any.
struct State {
    params: ModelParams,
    physical: Option<PhysicalInput>,
}

fn load_config(path: &PathBuf, branch: Branch) -> Result<State> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let cfg: ConfigFile =
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    match cfg {
        ConfigFile::Physical(input) => Ok(State {
            params: normalize(&input, branch)?,
            physical: Some(input),
        }),
        ConfigFile::Model(m) => Ok(State {
            params: ModelParams::singular(m.e0, m.h, m.omega_n, m.branch)?,
            physical: None,
        }),
    }
}

impl StateArgs {
    fn resolve(&self) -> Result<State> {
        if let Some(path) = &self.config {
            return load_config(path, self.branch);
        }
        let omega = match (self.omega, self.kappa) {
            (Some(o), _) => o,
            (None, Some(k)) if k > 0.0 => 1.0 / k,
            (None, Some(k)) => return Err(Error::InvalidInput(format!("kappa must be positive, got {k}"))),
            (None, None) => 0.01,
        };
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
        }
        Ok(State {
            params: ModelParams::singular(self.e0, self.h, omega, self.branch)?,
            physical: None,
        })
    }
}

fn parse_event(s: &str) -> std::result::Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}': {e}")))
        .collect::<std::result::Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", v.len()))
}

enum Output {
    Json(Value),
    Csv(String),
}

fn roots(e0: f64, h: f64, b: Option<f64>, rel_tol: f64) -> Result<Output> {
    let input = match b {
        Some(b) => CharInput::new(e0, h, b),
        None => CharInput::singular(e0, h),
    };
    let r = solve_characteristic(&input)?;
    let roots: Vec<Value> = r
        .roots
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                json!(z.re)
            } else {
                json!({"re": z.re, "im": z.im})
            }
        })
        .collect();
    let result = json!({
        "e0": e0,
        "h": h,
        "b": input.b,
        "roots": roots,
        "residuals": r.residuals,
        "class": r.class,
        "pair_slope": r.pair_slope,
        "singular_pair": r.singular_pair(),
        "warnings": r.warnings,
    });
    Ok(Output::Json(envelope(
        "roots",
        Conventions::new(),
        Tolerance::new(rel_tol).with("max_residual", r.max_residual()),
        result,
    )))
}

fn localize_lab(
    e0: Option<f64>,
    kappa: Option<f64>,
    h: f64,
    branch: Branch,
    config: Option<&PathBuf>,
    rel_tol: f64,
) -> Result<Output> {
    let (e0, kappa, physical) = match config {
        Some(path) => {
            let s = load_config(path, branch)?;
            (s.params.e0, Some(s.params.kappa), s.physical)
        }
        None => (
            e0.ok_or_else(|| Error::InvalidInput("--e0 or --config is required".into()))?,
            kappa,
            None,
        ),
    };
    let closed = lab_radius_closed(e0)?;
    let mut result = json!({
        "e0": e0,
        "lab_rms": q(closed, "lambda"),
    });
    if let Some(kappa) = kappa {
        let params = ModelParams::singular(e0, h, 1.0 / kappa, branch)?;
        let numeric = lab_radius_numeric(&params, Convention::CANONICAL, rel_tol)?;
        result["kappa"] = json!(kappa);
        result["lab_rms_compton"] = json!(q(closed * 2.0 * PI * kappa, "compton_length"));
        result["lab_rms_moment"] = json!(q(lab_radius_moment(e0, kappa)?, "lambda"));
        result["lab_rms_quadrature"] = json!(q(numeric.rms.wavelengths, "lambda"));
        result["norm_quadrature"] = json!(q(numeric.norm, "dimensionless"));
        result["r2_quadrature"] = json!(q(numeric.r2, "compton_length^2"));
        result["r2_moment_closed"] = json!(q(numeric.r2_closed, "compton_length^2"));
        if let Some(p) = physical {
            result["lab_rms_physical"] = json!(q(closed * 2.0 * PI * kappa * p.compton_length(), "cm"));
        }
    }
    Ok(Output::Json(envelope(
        "localize lab",
        Conventions::new().branch(branch),
        Tolerance::new(rel_tol),
        result,
    )))
}

fn localize_rot(state: &StateArgs, y: YConvention, rel_tol: f64) -> Result<Output> {
    let s = state.resolve()?;
    let p = s.params;
    let r = rot_radius(p.kappa, p.e0, p.branch, y, rel_tol)?;
    let mut result = json!({
        "kappa": r.kappa,
        "e0": r.e0,
        "lab_rms": q(r.lab_rms.wavelengths, "lambda"),
        "lab_rms_moment": q(r.lab_rms_moment.wavelengths, "lambda"),
        "rot_rms": q(r.rot_rms.wavelengths, "lambda"),
        "rot_rms_compton": q(r.rot_rms.compton, "compton_length"),
        "ratio_rot_over_bound": q(r.ratio_rot_over_bound, "lambda/2pi"),
        "lab_over_rot": q(r.lab_over_rot, "dimensionless"),
        "eta": r.integrals.eta,
        "sigma": r.integrals.sigma,
        "xi": r.integrals.xi,
        "convergence": r.convergence,
        "warnings": r.warnings,
    });
    if let Some(input) = s.physical {
        let lb = input.compton_length();
        result["rot_rms_physical"] = json!(q(r.rot_rms.physical(lb), "cm"));
        result["lab_rms_physical"] = json!(q(r.lab_rms.physical(lb), "cm"));
        result["bound_physical"] = json!(q(p.kappa * lb, "cm"));
    }
    Ok(Output::Json(envelope(
        "localize rot",
        Conventions::new().y(y).branch(p.branch),
        Tolerance::new(rel_tol).with("relative_change", r.convergence.relative_change),
        result,
    )))
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    from: f64,
    to: f64,
    points: usize,
    e0: f64,
    branch: Branch,
    y: YConvention,
    rel_tol: f64,
    format: Format,
) -> Result<Output> {
    let grid = log_grid(from, to, points)?;
    let rows = sweep(&grid, e0, branch, y, rel_tol)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
            w.write_record([
                "kappa",
                "e0",
                "branch",
                "eta_log",
                "sigma_log",
                "xi_log",
                "rot_rms_over_bound",
            ])
            .map_err(csv_err)?;
            for r in &rows {
                w.write_record([
                    r.kappa.to_string(),
                    r.e0.to_string(),
                    i8::from(r.branch).to_string(),
                    r.eta_log.to_string(),
                    r.sigma_log.to_string(),
                    r.xi_log.to_string(),
                    r.rot_rms_over_bound.to_string(),
                ])
                .map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
            Ok(Output::Csv(String::from_utf8_lossy(&bytes).into_owned()))
        }
        Format::Json => Ok(Output::Json(envelope(
            "sweep",
            Conventions::new().y(y).branch(branch),
            Tolerance::new(rel_tol),
            json!({ "rows": rows }),
        ))),
    }
}

/// Points in the box |x|, |y| ≤ 4/√d, |z|, |t| ≤ 10.
fn sample_points(d: f64, n: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 4.0 / d.sqrt();
    (0..n)
        .map(|_| {
            [
                rng.random_range(-half..=half),
                rng.random_range(-half..=half),
                rng.random_range(-10.0..=10.0),
                rng.random_range(-10.0..=10.0),
            ]
        })
        .collect()
}

fn verify_dirac(state: &StateArgs, n: usize, seed: u64, rel_tol: f64) -> Result<Output> {
    let p = state.resolve()?.params;
    let pts = sample_points(p.d, n, seed);
    let scan: Vec<(Convention, f64)> = Convention::all()
        .into_iter()
        .map(|c| Ok((c, LabWavefunction::new(p, c)?.residual_check(&pts))))
        .collect::<Result<_>>()?;
    let best = scan
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("sixteen conventions");
    let scan_json: Vec<Value> = scan
        .iter()
        .map(|(c, r)| json!({"convention": c.label(), "max_residual": r}))
        .collect();
    let result = json!({
        "e0": p.e0,
        "h": p.h,
        "omega_n": p.omega_n,
        "e_root": p.e_root,
        "points": n,
        "seed": seed,
        "selected": best.0.label(),
        "max_residual": q(best.1, "relative"),
        "meets_1e-10": best.1 <= 1e-10,
        "scan": scan_json,
    });
    let report = envelope(
        "verify dirac",
        Conventions::new().branch(p.branch).dirac(best.0.label()),
        Tolerance::new(rel_tol).with("pin_tolerance", rotloc::wavefunction::PIN_TOLERANCE),
        result,
    );
    if best.1 > rotloc::wavefunction::PIN_TOLERANCE {
        eprintln!("{}", serde_json::to_string_pretty(&report).unwrap_or_default());
        return Err(Error::ConventionUnresolved { best: best.1 });
    }
    Ok(Output::Json(report))
}

fn verify_ode(kappa: f64, e0: f64, branch: Branch, fd_step: f64, y: YConvention, rel_tol: f64) -> Result<Output> {
    let r = ode_residual(kappa, e0, branch, fd_step, y, rel_tol)?;
    let result = json!({
        "kappa": kappa,
        "e0": e0,
        "fd_step": fd_step,
        "residuals": {
            "eta": q(r.residuals[0], "relative"),
            "sigma": q(r.residuals[1], "relative"),
            "xi": q(r.residuals[2], "relative"),
        },
        "derivatives": r.derivatives,
        "rhs": r.rhs,
        "log_scale": r.log_scale,
        "warnings": r.warnings,
    });
    Ok(Output::Json(envelope(
        "verify ode",
        Conventions::new().y(y).branch(branch),
        Tolerance::new(rel_tol).with("threshold", 1e-6),
        result,
    )))
}

fn verify_transform(omega: f64, events: usize, seed: u64, rel_tol: f64) -> Result<Output> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidInput(format!("omega must be positive, got {omega}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut det_err, mut fd_err, mut inv_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..events {
        let rho2: f64 = rng.random_range(0.0..=1.0 - 1e-6);
        let e = CylindricalEvent::new(
            rho2.sqrt() / omega,
            rng.random_range(-PI..PI),
            rng.random_range(-100.0..100.0),
            rng.random_range(-100.0..100.0),
        );
        let map = FrameMap::new(e.r, omega)?;
        det_err = det_err.max((map.jacobian_det() - 1.0).abs());
        fd_err = fd_err.max((map.jacobian_det_fd(e.phi, e.z, e.t, 1.0) - 1.0).abs());
        let back = from_rotating(&to_rotating(&e, omega)?, omega)?;
        let scale = 1.0 + e.phi.abs() + e.z.abs() + e.t.abs();
        inv_err = inv_err
            .max((back.phi - e.phi).abs() / scale)
            .max((back.z - e.z).abs() / scale)
            .max((back.t - e.t).abs() / scale);
    }
    let result = json!({
        "omega_n": omega,
        "events": events,
        "seed": seed,
        "max_det_error_analytic": q(det_err, "absolute"),
        "max_det_error_fd": q(fd_err, "absolute"),
        "max_inverse_error": q(inv_err, "relative"),
        "r_max": q(max_radius(omega), "compton_length"),
    });
    Ok(Output::Json(envelope(
        "verify transform",
        Conventions::new(),
        Tolerance::new(rel_tol).with("threshold", 1e-10),
        result,
    )))
}

fn wavefunction(at: [f64; 4], state: &StateArgs, rel_tol: f64) -> Result<Output> {
    let p = state.resolve()?.params;
    let [x, y, z, t] = at;
    let wf = LabWavefunction::new(p, Convention::CANONICAL)?;
    let psi = wf.eval(x, y, z, t);
    let (xt, yt) = wf.corotating(x, y, z, t);
    let components: Vec<Value> = psi.0.iter().map(|c| json!({"re": c.re, "im": c.im})).collect();
    let result = json!({
        "at": {"x": x, "y": y, "z": z, "t": t},
        "corotating": {"x": xt, "y": yt},
        "energy": q(p.energy, "mc^2"),
        "momentum": q(p.p, "mc"),
        "e_root": p.e_root,
        "d": p.d,
        "d2": p.d2,
        "components": components,
        "log_density": wf.log_density(x, y, z, t),
        "residual": q(wf.residual_at(x, y, z, t), "relative"),
    });
    Ok(Output::Json(envelope(
        "wavefunction",
        Conventions::new().branch(p.branch).dirac(wf.convention.label()),
        Tolerance::new(rel_tol),
        result,
    )))
}

fn transform(e: CylindricalEvent, omega: f64, inverse: bool, rel_tol: f64) -> Result<Output> {
    let map = FrameMap::new(e.r, omega)?;
    let out = if inverse {
        from_rotating(&e, omega)?
    } else {
        to_rotating(&e, omega)?
    };
    let result = json!({
        "input": e,
        "output": out,
        "direction": if inverse { "rotating_to_lab" } else { "lab_to_rotating" },
        "jacobian": map.matrix(),
        "jacobian_det": map.jacobian_det(),
        "r_max": q(max_radius(omega), "compton_length"),
    });
    Ok(Output::Json(envelope(
        "transform",
        Conventions::new(),
        Tolerance::new(rel_tol),
        result,
    )))
}

fn run(cli: &Cli) -> Result<Output> {
    let rel_tol = cli.rel_tol;
    if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
        return Err(Error::InvalidInput(format!(
            "rel_tol {rel_tol:e} outside [{MIN_REL_TOL:e}, {MAX_REL_TOL:e}]"
        )));
    }
    let json_only = |name: &str| -> Result<()> {
        if cli.format == Some(Format::Csv) {
            return Err(Error::InvalidInput(format!("{name} has no csv output")));
        }
        Ok(())
    };
    match &cli.command {
        Command::Roots { e0, h, b } => {
            json_only("roots")?;
            roots(*e0, *h, *b, rel_tol)
        }
        Command::Localize { frame } => {
            json_only("localize")?;
            match frame {
                LocalizeFrame::Lab {
                    e0,
                    kappa,
                    h,
                    branch,
                    config,
                } => localize_lab(*e0, *kappa, *h, *branch, config.as_ref(), rel_tol),
                LocalizeFrame::Rot { state, y_convention } => localize_rot(state, *y_convention, rel_tol),
            }
        }
        Command::Sweep {
            kappa_from,
            kappa_to,
            points,
            e0,
            branch,
            y_convention,
        } => run_sweep(
            *kappa_from,
            *kappa_to,
            *points,
            *e0,
            *branch,
            *y_convention,
            rel_tol,
            cli.format.unwrap_or(Format::Csv),
        ),
        Command::Verify { what } => {
            json_only("verify")?;
            match what {
                Verify::Dirac { state, points } => verify_dirac(state, *points, cli.seed, rel_tol),
                Verify::Ode {
                    kappa,
                    e0,
                    branch,
                    fd_step,
                    y_convention,
                } => verify_ode(*kappa, *e0, *branch, *fd_step, *y_convention, rel_tol),
                Verify::Transform { omega, events } => verify_transform(*omega, *events, cli.seed, rel_tol),
            }
        }
        Command::Wavefunction { at, state } => {
            json_only("wavefunction")?;
            wavefunction(*at, state, rel_tol)
        }
        Command::Transform {
            r,
            phi,
            z,
            t,
            omega,
            inverse,
        } => {
            json_only("transform")?;
            transform(CylindricalEvent::new(*r, *phi, *z, *t), *omega, *inverse, rel_tol)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(output) => {
            let text = match output {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("report serializes") + "\n",
                Output::Csv(s) => s,
            };
            if let Err(e) = emit(&cli.out, &text) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
