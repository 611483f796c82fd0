//! Functional spec files.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use semiclass::griffin::{moments_by_quadrature, WeightSpec};
use semiclass::{FloatContext, HpFloat, MomentFunctional, Rational, Scalar};

use crate::report::Failure;

/// A rational given either as a JSON string (`"1/2"`, `"-0.25"`) or a number.
#[derive(Clone, Debug)]
pub struct Num(pub Rational);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = match Value::deserialize(d)? {
            Value::String(s) => s,
            Value::Number(n) => n.to_string(),
            other => return Err(serde::de::Error::custom(format!("expected a number, got {other}"))),
        };
        text.parse().map(Num).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FunctionalSpec {
    Hermite,
    Laguerre {
        alpha: Num,
    },
    Jacobi {
        alpha: Num,
        beta: Num,
    },
    Moments {
        values: Vec<Num>,
    },
    Griffin {
        #[serde(rename = "M")]
        big_m: Num,
        t: Num,
        c: Num,
    },
}

impl fmt::Display for FunctionalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalSpec::Hermite => write!(f, "hermite"),
            FunctionalSpec::Laguerre { alpha } => write!(f, "laguerre(alpha = {})", alpha.0),
            FunctionalSpec::Jacobi { alpha, beta } => write!(f, "jacobi(alpha = {}, beta = {})", alpha.0, beta.0),
            FunctionalSpec::Moments { values } => write!(f, "moments({} values)", values.len()),
            FunctionalSpec::Griffin { big_m, t, c } => write!(f, "griffin(M = {}, t = {}, c = {})", big_m.0, t.0, c.0),
        }
    }
}

impl FunctionalSpec {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }

    pub fn describe(&self) -> Value {
        serde_json::to_value(self).expect("spec serializes")
    }

    /// Moments up to degree `d`; explicit moment lists are taken as given.
    pub fn functional<S: Backend>(&self, ctx: &S::Context, d: usize) -> Result<MomentFunctional<S>, Failure> {
        let conv = |q: &Num| S::from_rational(ctx, &q.0);
        match self {
            FunctionalSpec::Hermite => Ok(MomentFunctional::hermite(ctx, d)),
            FunctionalSpec::Laguerre { alpha } => {
                MomentFunctional::laguerre(&conv(alpha), d).map_err(Failure::from_functional)
            }
            FunctionalSpec::Jacobi { alpha, beta } => {
                MomentFunctional::jacobi(&conv(alpha), &conv(beta), d).map_err(Failure::from_functional)
            }
            FunctionalSpec::Moments { values } => {
                MomentFunctional::from_moments(ctx, values.iter().map(conv).collect()).map_err(Failure::from_functional)
            }
            FunctionalSpec::Griffin { big_m, t, c } => S::griffin_moments(ctx, [&big_m.0, &t.0, &c.0], d),
        }
    }
}

/// Backend-specific hooks for the CLI.
pub trait Backend: Scalar + Serialize {
    fn float_context(ctx: &Self::Context) -> Option<FloatContext>;
    fn griffin_moments(ctx: &Self::Context, mtc: [&Rational; 3], d: usize) -> Result<MomentFunctional<Self>, Failure>;
}

impl Backend for Rational {
    fn float_context(_: &()) -> Option<FloatContext> {
        None
    }

    fn griffin_moments(_: &(), _: [&Rational; 3], _: usize) -> Result<MomentFunctional<Self>, Failure> {
        Err(Failure::exact_backend())
    }
}

impl Backend for HpFloat {
    fn float_context(ctx: &FloatContext) -> Option<FloatContext> {
        Some(*ctx)
    }

    fn griffin_moments(ctx: &FloatContext, [m, t, c]: [&Rational; 3], d: usize) -> Result<MomentFunctional<Self>, Failure> {
        let wide = FloatContext::new(2 * ctx.precision_bits, ctx.tolerance);
        let spec = WeightSpec::new(
            HpFloat::from_rational(&wide, m),
            HpFloat::from_rational(&wide, t),
            HpFloat::from_rational(&wide, c),
        )
        .map_err(Failure::from_griffin)?;
        moments_by_quadrature(&spec, d, ctx).map_err(Failure::from_griffin)
    }
}
