//! The JSON run configuration.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::estimates::{ENERGY_GAP_TOL, SLOPE_SLACK};
use crate::exponents::{ExponentField, ExponentPiece, Preset};
use crate::fields::{decaying_solenoidal, gradient_counterexample, ScalarField3, VectorField3};
use crate::quadrature::{Quadrature, Scheme};
use crate::regions::Region;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Norm,
    Volume,
    Decay,
    Energy,
    AlphaBeta,
    Certify,
    Lemmas,
    Liouville,
}

impl Command {
    pub fn id(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Volume => "volume",
            Command::Decay => "decay",
            Command::Energy => "energy",
            Command::AlphaBeta => "alpha-beta",
            Command::Certify => "certify",
            Command::Lemmas => "lemmas",
            Command::Liouville => "liouville",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Rationals are written as strings ("9/2") and read from either a string or a number.
mod ratio {
    use num_rational::Rational64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exponents::ratio_from_f64;

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => ratio_from_f64(x).map_err(D::Error::custom),
            Raw::Text(t) => t
                .trim()
                .parse::<Rational64>()
                .map_err(|_| D::Error::custom(format!("`{t}` is not a fraction a/b"))),
        }
    }
}

/// Exponent values: a number or the string "inf".
mod exponent_value {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(D::Error::custom(format!("exponent `{t}` must be a number or \"inf\""))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceSpec {
    pub region: Region,
    #[serde(with = "exponent_value")]
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentSpec {
    T1 {
        #[serde(with = "ratio")]
        p_in: Rational64,
        #[serde(with = "ratio")]
        p_out: Rational64,
    },
    T2 {
        #[serde(with = "ratio")]
        gamma: Rational64,
        #[serde(with = "ratio")]
        p_in: Rational64,
        #[serde(with = "ratio")]
        p_out: Rational64,
    },
    T3 {
        #[serde(with = "ratio")]
        sigma: Rational64,
        #[serde(with = "ratio")]
        p_out: Rational64,
    },
    Constant {
        #[serde(with = "exponent_value")]
        value: f64,
    },
    Piecewise {
        pieces: Vec<PieceSpec>,
        #[serde(with = "exponent_value")]
        default: f64,
    },
}

impl ExponentSpec {
    /// The preset as written, without checking its bands.
    pub fn preset_unchecked(&self) -> Option<Preset> {
        match *self {
            ExponentSpec::T1 { p_in, p_out } => Some(Preset::T1 { p_in, p_out }),
            ExponentSpec::T2 { gamma, p_in, p_out } => Some(Preset::T2 { gamma, p_in, p_out }),
            ExponentSpec::T3 { sigma, p_out } => Some(Preset::T3 { sigma, p_out }),
            _ => None,
        }
    }

    pub fn preset(&self) -> Result<Option<Preset>> {
        match self.preset_unchecked() {
            Some(p) => p.validate().map(|_| Some(p)).map_err(|e| usage("exponent", e)),
            None => Ok(None),
        }
    }

    pub fn field(&self) -> Result<ExponentField> {
        let piece = |v: f64| {
            if v.is_infinite() {
                Ok(ExponentPiece::Constant(f64::INFINITY))
            } else {
                ExponentPiece::constant(v)
            }
        };
        let built = match self {
            ExponentSpec::Constant { value } => ExponentField::new(vec![], piece(*value)?),
            ExponentSpec::Piecewise { pieces, default } => {
                let mut listed = Vec::with_capacity(pieces.len());
                for p in pieces {
                    p.region.validate()?;
                    listed.push((p.region.clone(), piece(p.value)?));
                }
                ExponentField::new(listed, piece(*default)?)
            }
            _ => return self.preset()?.expect("preset variant").field(),
        };
        built.map_err(|e| usage("exponent", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Zero,
    Constant { value: f64 },
    Gaussian,
    /// u = (x₁, x₂, −2x₃), P = −|u|²/2.
    Counterexample,
    DecayingSolenoidal { a: f64 },
}

impl FieldSpec {
    /// Scalar integrand: the field itself, or |u| for velocity fields.
    pub fn scalar(&self) -> Result<ScalarField3> {
        Ok(match self {
            FieldSpec::Zero => ScalarField3::zero(),
            FieldSpec::Constant { value } => ScalarField3::constant(*value),
            FieldSpec::Gaussian => ScalarField3::gaussian(),
            _ => self.flow()?.0.magnitude(),
        })
    }

    /// Velocity and pressure.
    pub fn flow(&self) -> Result<(VectorField3, ScalarField3)> {
        match self {
            FieldSpec::Zero => Ok((VectorField3::zero(), ScalarField3::zero())),
            FieldSpec::Counterexample => Ok(gradient_counterexample()),
            FieldSpec::DecayingSolenoidal { a } => {
                Ok((decaying_solenoidal(*a).map_err(|e| usage("field.a", e))?, ScalarField3::zero()))
            }
            FieldSpec::Constant { .. } | FieldSpec::Gaussian => Err(Error::Config {
                field: "field".into(),
                reason: "a scalar field was given where a velocity field is needed".into(),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub factor: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn radii(&self) -> Vec<f64> {
        crate::estimates::geometric_grid(self.start, self.factor, self.count)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative gap allowed in the energy identity.
    pub energy_gap: f64,
    /// Allowed excess of a fitted slope over its certified exponent.
    pub slope_slack: f64,
    /// Standard errors allowed between sampled and closed-form volumes.
    pub volume_sigmas: f64,
    /// Multiple of the combined error allowed in the restriction identity.
    pub restriction_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { energy_gap: ENERGY_GAP_TOL, slope_slack: SLOPE_SLACK, volume_sigmas: 3.0, restriction_factor: 3.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { dir: ".".into() }
    }
}

/// Product rule used when the configuration names no quadrature.
pub fn default_quadrature() -> Quadrature {
    Quadrature::radial(32, 16, 32)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<ExponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_grid: Option<GridSpec>,
    /// Single radius for `energy`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Power s of the power identity in `lemmas`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<f64>,
    #[serde(default = "default_quadrature")]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

pub(crate) fn usage(field: &str, e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => Error::Config { field: field.into(), reason: other.to_string() },
    }
}

fn missing(field: &str, command: Command) -> Error {
    Error::Config { field: field.into(), reason: format!("required by `{command}`") }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            exponent: None,
            field: None,
            region: None,
            r_grid: None,
            radius: None,
            power: None,
            quadrature: default_quadrature(),
            tolerances: Tolerances::default(),
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config { field: "config".into(), reason: e.to_string() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn exponent(&self) -> Result<&ExponentSpec> {
        self.exponent.as_ref().ok_or_else(|| missing("exponent", self.command))
    }

    pub fn field(&self) -> Result<&FieldSpec> {
        self.field.as_ref().ok_or_else(|| missing("field", self.command))
    }

    pub fn region(&self) -> Result<&Region> {
        let r = self.region.as_ref().ok_or_else(|| missing("region", self.command))?;
        r.validate().map_err(|e| usage("region", e))?;
        Ok(r)
    }

    pub fn radii(&self) -> Result<Vec<f64>> {
        Ok(self.r_grid.ok_or_else(|| missing("r_grid", self.command))?.radii())
    }

    fn needs_grid(&self) -> bool {
        matches!(self.command, Command::Decay | Command::AlphaBeta | Command::Liouville)
            || (self.command == Command::Volume && self.r_grid.is_some())
            || (self.command == Command::Energy && self.radius.is_none())
    }

    /// Checks the constraints that do not depend on the subcommand's own inputs.
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate().map_err(|e| usage("quadrature", e))?;
        if let Some(t) = self.quadrature.truncation {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Config { field: "quadrature.truncation".into(), reason: format!("{t} must be positive") });
            }
        }
        if let Some(g) = self.r_grid {
            let bad = |field: &str, reason: String| Err(Error::Config { field: format!("r_grid.{field}"), reason });
            if !(g.start > 0.0 && g.start.is_finite()) {
                return bad("start", format!("{} must be positive", g.start));
            }
            if !(g.factor > 1.0 && g.factor.is_finite()) {
                return bad("factor", format!("{} must exceed 1", g.factor));
            }
            if self.needs_grid() && g.count < 4 {
                return bad("count", format!("must be ≥ 4 for `{}`, got {}", self.command, g.count));
            }
        } else if self.needs_grid() {
            return Err(missing("r_grid", self.command));
        }
        let t = self.tolerances;
        for (name, v) in [
            ("energy_gap", t.energy_gap),
            ("slope_slack", t.slope_slack),
            ("volume_sigmas", t.volume_sigmas),
            ("restriction_factor", t.restriction_factor),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config { field: format!("tolerances.{name}"), reason: format!("{v} must be finite and ≥ 0") });
            }
        }
        Ok(())
    }

    /// Seed of the configured scheme, if random.
    pub fn seed(&self) -> Option<u64> {
        match self.quadrature.scheme {
            Scheme::MonteCarlo { seed, .. } | Scheme::Stratified { seed, .. } => Some(seed),
            Scheme::Radial { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_from_numbers_and_strings() {
        let c = RunConfig::from_json(
            r#"{"command":"certify","exponent":{"kind":"t2","gamma":0.5,"p_in":"11/2","p_out":4}}"#,
        )
        .unwrap();
        assert_eq!(
            c.exponent,
            Some(ExponentSpec::T2 { gamma: Rational64::new(1, 2), p_in: Rational64::new(11, 2), p_out: 4.into() })
        );
        assert!(RunConfig::from_json(r#"{"command":"certify","exponent":{"kind":"t1","p_in":"x","p_out":4}}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{
            "command": "lemmas",
            "exponent": {"kind": "piecewise", "pieces": [{"region": {"ball": {"center": [0, 0, 0], "radius": 1}}, "value": "inf"}], "default": 3.3},
            "field": {"name": "decaying_solenoidal", "a": 1.5},
            "region": {"annulus": {"inner": 2, "outer": 4}},
            "r_grid": {"start": 8, "factor": 2, "count": 5},
            "quadrature": {"scheme": "monte_carlo", "samples": 1000, "seed": 11, "rel_tol": 0.1, "truncation": 40.5},
            "tolerances": {"energy_gap": 0.01}
        }"#;
        let a = RunConfig::from_json(text).unwrap();
        let s = a.to_json();
        let b = RunConfig::from_json(&s).unwrap();
        assert_eq!(a, b);
        assert_eq!(s, b.to_json());
        assert_eq!(a.seed(), Some(11));
    }

    #[test]
    fn monte_carlo_requires_seed() {
        let e = RunConfig::from_json(r#"{"command":"norm","quadrature":{"scheme":"monte_carlo","samples":10,"rel_tol":0.1}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("seed"), "{e}");
    }

    #[test]
    fn grid_count() {
        let mut c = RunConfig::new(Command::Decay);
        c.r_grid = Some(GridSpec { start: 8.0, factor: 2.0, count: 3 });
        match c.validate().unwrap_err() {
            Error::Config { field, .. } => assert_eq!(field, "r_grid.count"),
            e => panic!("{e}"),
        }
        c.command = Command::Volume;
        assert!(c.validate().is_err());
        c.r_grid = None;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn preset_errors_name_the_inequality() {
        let spec = ExponentSpec::T2 { gamma: Rational64::new(1, 2), p_in: 7.into(), p_out: 4.into() };
        let msg = spec.field().unwrap_err().to_string();
        assert!(msg.contains("exponent") && msg.contains("(6γ+3)/(2γ) = 6"), "{msg}");
    }
}
