use serde::Serialize;
use serde_json::{json, Value};

use rotloc::{Branch, YConvention, MATRIX_REPRESENTATION};

pub const SCHEMA: u32 = 1;

/// Unit of every bare number in a report: m = c = ħ = 1, lengths in Compton
/// wavelengths, energies in mc², frequencies in mc²/ħ.
pub const DEFAULT_UNITS: &str = "normalized";

/// A number with its unit tag.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: &'static str,
}

pub fn q(value: f64, unit: &'static str) -> Quantity {
    Quantity { value, unit }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Conventions {
    pub matrix_representation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_convention: Option<YConvention>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Branch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dirac: Option<String>,
}

impl Conventions {
    pub fn new() -> Self {
        Self {
            matrix_representation: MATRIX_REPRESENTATION,
            ..Self::default()
        }
    }

    pub fn y(mut self, y: YConvention) -> Self {
        self.y_convention = Some(y);
        self
    }

    pub fn branch(mut self, b: Branch) -> Self {
        self.branch = Some(b);
        self
    }

    pub fn dirac(mut self, label: String) -> Self {
        self.dirac = Some(label);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerance {
    pub rel_tol: f64,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, Value>,
}

impl Tolerance {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            extra: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), json!(value));
        self
    }
}

pub fn envelope(command: &str, conventions: Conventions, tolerance: Tolerance, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "units": DEFAULT_UNITS,
        "conventions": conventions,
        "tolerance": tolerance,
        "result": result,
    })
}
