//! JSON scenario files.
//!
//! ```json
//! {
//!   "initial": {
//!     "g2": {
//!       "omega1": {
//!         "preset": "product",
//!         "params": {
//!           "first":  { "shape": "smooth_bump", "lo": -4.0, "hi": -2.0 },
//!           "second": { "shape": "poly_bump", "lo": 2.0, "hi": 4.0, "order": 3, "amplitude": [0.0, 1.0] }
//!         }
//!       }
//!     }
//!   },
//!   "phase": { "theta1": { "preset": "constant", "value": 0.5 } },
//!   "antisymmetric": false
//! }
//! ```
//!
//! Omitted components are zero. With `antisymmetric` set, only `omega1` data
//! may be given and `theta2` is derived as `-theta1`.

use super::{
    antisymmetric_extension, BoundaryPhase, DataFunction, InitialData, Interval, PhaseFunction, Profile1D,
    Scenario,
};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub phase: PhaseConfig,
    #[serde(default)]
    pub antisymmetric: bool,
    /// Time window for scattering runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scatter: Option<ScatterWindow>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    #[serde(default, skip_serializing_if = "HalvesConfig::is_empty")]
    pub g1: HalvesConfig,
    #[serde(default, skip_serializing_if = "HalvesConfig::is_empty")]
    pub g2: HalvesConfig,
    #[serde(default, skip_serializing_if = "HalvesConfig::is_empty")]
    pub g3: HalvesConfig,
    #[serde(default, skip_serializing_if = "HalvesConfig::is_empty")]
    pub g4: HalvesConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalvesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<DataConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<DataConfig>,
}

impl HalvesConfig {
    fn is_empty(&self) -> bool {
        self.omega1.is_none() && self.omega2.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataConfig {
    #[serde(flatten)]
    pub preset: DataPreset,
    /// Restriction box `[[x_lo, x_hi], [y_lo, y_hi]]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", content = "params", rename_all = "snake_case")]
pub enum DataPreset {
    Zero,
    /// `(x, y) ↦ first(x) second(y)`.
    Product { first: ProfileConfig, second: ProfileConfig },
    /// Constant value; needs a `support` box.
    Constant { value: AmplitudeConfig },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub shape: ShapeConfig,
    pub lo: f64,
    pub hi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<AmplitudeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<f64>,
    /// Rescale to unit L2 norm before applying `amplitude`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeConfig {
    SmoothBump,
    PolyBump,
}

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AmplitudeConfig {
    Real(f64),
    Complex([f64; 2]),
}

impl AmplitudeConfig {
    pub fn value(self) -> Complex64 {
        match self {
            AmplitudeConfig::Real(r) => Complex64::new(r, 0.0),
            AmplitudeConfig::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    #[serde(default)]
    pub theta1: ThetaConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta2: Option<ThetaConfig>,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            theta1: ThetaConfig::Constant { value: 0.0 },
            theta2: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThetaConfig {
    Constant { value: f64 },
    PlusI,
    MinusI,
    Linear { offset: f64, dt: f64, dz: f64 },
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig::Constant { value: 0.0 }
    }
}

impl ThetaConfig {
    pub fn build(&self) -> PhaseFunction {
        match *self {
            ThetaConfig::Constant { value } => PhaseFunction::Constant(value),
            ThetaConfig::PlusI => PhaseFunction::PlusI,
            ThetaConfig::MinusI => PhaseFunction::MinusI,
            ThetaConfig::Linear { offset, dt, dz } => PhaseFunction::Linear { offset, dt, dz },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl ProfileConfig {
    pub fn build(&self) -> Result<Profile1D> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidInput(format!(
                "profile support [{}, {}] is not a finite interval",
                self.lo, self.hi
            )));
        }
        let mut p = match self.shape {
            ShapeConfig::SmoothBump => {
                if self.order.is_some() {
                    return Err(Error::InvalidInput("smooth_bump takes no order".into()));
                }
                Profile1D::smooth_bump(self.lo, self.hi)
            }
            ShapeConfig::PolyBump => {
                let order = self
                    .order
                    .ok_or_else(|| Error::InvalidInput("poly_bump needs an order".into()))?;
                Profile1D::poly_bump(self.lo, self.hi, order)
            }
        };
        if let Some(k) = self.wavenumber {
            p = p.with_wavenumber(k);
        }
        if self.normalize {
            p = p.normalized();
        }
        if let Some(a) = self.amplitude {
            p.amplitude *= a.value();
        }
        Ok(p)
    }
}

impl DataConfig {
    pub fn build(&self) -> Result<DataFunction> {
        let f = match &self.preset {
            DataPreset::Zero => DataFunction::zero(),
            DataPreset::Product { first, second } => DataFunction::product(first.build()?, second.build()?),
            DataPreset::Constant { value } => {
                if self.support.is_none() {
                    return Err(Error::InvalidInput("constant data need a support box".into()));
                }
                DataFunction::constant(value.value())
            }
        };
        Ok(match self.support {
            Some([[a, b], [c, d]]) => {
                if !(a <= b && c <= d) {
                    return Err(Error::InvalidInput("support box bounds out of order".into()));
                }
                f.restricted(Interval::new(a, b), Interval::new(c, d))
            }
            None => f,
        })
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical single-line JSON of the parsed configuration.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("scenario config always serializes")
    }

    pub fn build(&self) -> Result<Scenario> {
        let gs = [&self.initial.g1, &self.initial.g2, &self.initial.g3, &self.initial.g4];
        let build_half = |pick: fn(&HalvesConfig) -> &Option<DataConfig>| -> Result<[DataFunction; 4]> {
            let mut out: [DataFunction; 4] = std::array::from_fn(|_| DataFunction::zero());
            for (slot, g) in out.iter_mut().zip(gs) {
                if let Some(cfg) = pick(g) {
                    *slot = cfg.build()?;
                }
            }
            Ok(out)
        };
        let omega1 = build_half(|h| &h.omega1)?;
        let theta1 = self.phase.theta1.build();
        if self.antisymmetric {
            if gs.iter().any(|g| g.omega2.is_some()) {
                return Err(Error::InvalidInput(
                    "antisymmetric scenarios take omega1 data only".into(),
                ));
            }
            if self.phase.theta2.is_some() {
                return Err(Error::InvalidInput(
                    "antisymmetric scenarios derive theta2 from theta1".into(),
                ));
            }
            return Ok(antisymmetric_extension(omega1, theta1));
        }
        let omega2 = build_half(|h| &h.omega2)?;
        let theta2 = self.phase.theta2.clone().unwrap_or_default().build();
        Ok(Scenario::new(
            InitialData { omega1, omega2 },
            BoundaryPhase::new(theta1, theta2),
        ))
    }
}
