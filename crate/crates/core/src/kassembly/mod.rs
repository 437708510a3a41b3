//! Rational K-theory Poincaré series of connective ring spectra.
//!
//! A [`SpectrumDescriptor`] records the rational homotopy generators of a
//! spectrum `A` and the K-theory series of `π₀A`. The relative term
//! `K(A → Hπ₀A)` is read off as the positive-degree part of `ker(B)` on the
//! Hochschild model of `π_*A ⊗ Q`, computed by exact nullspaces; the absolute
//! series adds the base term back, and the periodic series adds the base term
//! once more, shifted up by one degree.

mod verify;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bar_oracle::OracleError;
use crate::galg::{FreeGradedAlgebra, GalgError, Generator};
use crate::hochschild::{HHModel, HochschildError};
use crate::series::{
    first_difference_degree, infinite_product, Polynomial, RationalFunction, SeriesError,
};
use crate::TruncatedSeries;

pub use verify::{verify_all, CheckResult, VerifyReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KAssemblyError {
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unknown preset `{0}` (expected ku, ko, ell, mu, mso or msp)")]
    UnknownPreset(String),
    #[error("{spectrum}: {reason}")]
    Refused { spectrum: String, reason: String },
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Algebra(#[from] GalgError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type Result<T> = std::result::Result<T, KAssemblyError>;

/// Rational homotopy generators of a spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HomotopyGenerators {
    Finite(Vec<Generator>),
    /// `{prefix}{k}` in degree `step * k` for every `k ≥ 1`.
    Family {
        prefix: String,
        step: u32,
    },
}

/// How the periodic spectrum relates to the connective one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Localization {
    /// `K(A) → K(A[1/x]) → BK(π₀A)` is rationally split.
    Split,
    /// Split as above, but `K(π₀A)` is not of finite type; only the relative
    /// part of the periodic series is reported.
    RelativeOnly,
    /// No rational computation of the periodic K-theory.
    Unavailable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Ku,
    Ko,
    Ell { p: u32 },
    Mu,
    Mso,
    Msp,
}

impl Preset {
    pub const NAMES: [&'static str; 6] = ["ku", "ko", "ell", "mu", "mso", "msp"];

    /// `ell` needs an odd prime; the other presets ignore `prime`.
    pub fn from_name(name: &str, prime: Option<u32>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ku" => Ok(Self::Ku),
            "ko" => Ok(Self::Ko),
            "mu" => Ok(Self::Mu),
            "mso" => Ok(Self::Mso),
            "msp" => Ok(Self::Msp),
            "ell" | "l" => {
                let p = prime
                    .ok_or_else(|| KAssemblyError::InvalidDescriptor("ell needs a prime".into()))?;
                Self::ell(p)
            }
            other => Err(KAssemblyError::UnknownPreset(other.to_string())),
        }
    }

    pub fn ell(p: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(KAssemblyError::InvalidDescriptor(format!(
                "ell needs an odd prime, got {p}"
            )));
        }
        Ok(Self::Ell { p })
    }

    pub fn descriptor(self) -> SpectrumDescriptor {
        let borel = borel_series();
        let finite = |name: &str, degree| {
            HomotopyGenerators::Finite(vec![Generator {
                name: name.into(),
                degree,
            }])
        };
        let family = |prefix: &str, step| HomotopyGenerators::Family {
            prefix: prefix.into(),
            step,
        };
        let (name, generators, finite_k1, localization, conjugation) = match self {
            Self::Ku => (
                "ku".to_string(),
                finite("u", 2),
                true,
                Localization::Split,
                vec!["u".into()],
            ),
            Self::Ko => (
                "ko".into(),
                finite("alpha", 4),
                true,
                Localization::Unavailable,
                vec![],
            ),
            Self::Ell { p } => (
                format!("ell({p})"),
                finite("v1", 2 * p - 2),
                false,
                Localization::RelativeOnly,
                vec![],
            ),
            Self::Mu => (
                "mu".into(),
                family("b", 2),
                true,
                Localization::Unavailable,
                vec![],
            ),
            Self::Mso => (
                "mso".into(),
                family("q", 4),
                true,
                Localization::Unavailable,
                vec![],
            ),
            Self::Msp => (
                "msp".into(),
                family("q", 4),
                true,
                Localization::Unavailable,
                vec![],
            ),
        };
        SpectrumDescriptor::new(name, generators, borel, finite_k1)
            .and_then(|d| {
                d.with_localization(localization)
                    .with_conjugation(conjugation)
            })
            .expect("preset descriptors are valid")
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ku => f.write_str("ku"),
            Self::Ko => f.write_str("ko"),
            Self::Ell { p } => write!(f, "ell({p})"),
            Self::Mu => f.write_str("mu"),
            Self::Mso => f.write_str("mso"),
            Self::Msp => f.write_str("msp"),
        }
    }
}

/// Accepts `ku`, `mu`, ... and `ell(p)`.
impl FromStr for Preset {
    type Err = KAssemblyError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("ell(").and_then(|r| r.strip_suffix(')')) {
            let p = inner
                .trim()
                .parse()
                .map_err(|_| KAssemblyError::InvalidDescriptor(format!("bad prime in `{s}`")))?;
            return Self::ell(p);
        }
        Self::from_name(s, None)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `1 + t^5/(1 - t^4)`: Borel's ranks of `K_*(Z) ⊗ Q`.
pub fn borel_series() -> RationalFunction {
    &RationalFunction::one() + &RationalFunction::geometric(1, 5, 4)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumDescriptor {
    name: String,
    generators: HomotopyGenerators,
    #[serde(serialize_with = "display")]
    base_series: RationalFunction,
    has_finite_type_k1: bool,
    localization: Localization,
    /// Generators negated by the conjugation involution, if there is one.
    conjugation: Vec<String>,
}

fn display<T: fmt::Display, S: Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

impl SpectrumDescriptor {
    /// Generator degrees must be even and at least 2.
    pub fn new(
        name: impl Into<String>,
        generators: HomotopyGenerators,
        base_series: RationalFunction,
        has_finite_type_k1: bool,
    ) -> Result<Self> {
        let name = name.into();
        let bad = |msg: String| Err(KAssemblyError::InvalidDescriptor(format!("{name}: {msg}")));
        match &generators {
            HomotopyGenerators::Finite(gens) => {
                for g in gens {
                    if g.degree < 2 || g.degree % 2 != 0 {
                        return bad(format!(
                            "generator `{}` has degree {}; degrees must be even and at least 2",
                            g.name, g.degree
                        ));
                    }
                }
                FreeGradedAlgebra::new(gens.clone())?;
            }
            HomotopyGenerators::Family { prefix, step } => {
                if prefix.is_empty() {
                    return bad("empty generator prefix".into());
                }
                if *step < 2 || step % 2 != 0 {
                    return bad(format!("family step {step} must be even and at least 2"));
                }
            }
        }
        Ok(Self {
            name,
            generators,
            base_series,
            has_finite_type_k1,
            localization: Localization::Unavailable,
            conjugation: Vec::new(),
        })
    }

    pub fn with_localization(mut self, localization: Localization) -> Self {
        self.localization = localization;
        self
    }

    /// Names must be finite generators of the descriptor.
    pub fn with_conjugation(mut self, negated: Vec<String>) -> Result<Self> {
        for n in &negated {
            let known = match &self.generators {
                HomotopyGenerators::Finite(gens) => gens.iter().any(|g| &g.name == n),
                HomotopyGenerators::Family { .. } => false,
            };
            if !known {
                return Err(KAssemblyError::InvalidDescriptor(format!(
                    "{}: conjugation names unknown generator `{n}`",
                    self.name
                )));
            }
        }
        self.conjugation = negated;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &HomotopyGenerators {
        &self.generators
    }

    pub fn base_series(&self) -> &RationalFunction {
        &self.base_series
    }

    pub fn has_finite_type_k1(&self) -> bool {
        self.has_finite_type_k1
    }

    pub fn localization(&self) -> Localization {
        self.localization
    }

    pub fn conjugation(&self) -> &[String] {
        &self.conjugation
    }

    /// The generators of degree at most `degree`.
    pub fn generators_through(&self, degree: u32) -> Vec<Generator> {
        match &self.generators {
            HomotopyGenerators::Finite(gens) => gens
                .iter()
                .filter(|g| g.degree <= degree)
                .cloned()
                .collect(),
            HomotopyGenerators::Family { prefix, step } => (1..=degree / step)
                .map(|k| Generator {
                    name: format!("{prefix}{k}"),
                    degree: step * k,
                })
                .collect(),
        }
    }

    /// `π_*A ⊗ Q`, exact in degrees `≤ degree`.
    pub fn homotopy_algebra(&self, degree: u32) -> Result<FreeGradedAlgebra> {
        Ok(FreeGradedAlgebra::new(self.generators_through(degree))?)
    }

    /// Hochschild model realized through `degree`. Finite generator lists
    /// give a model exact in every degree.
    pub fn hh_model(&self, degree: u32) -> Result<HHModel> {
        Ok(match &self.generators {
            HomotopyGenerators::Finite(gens) => {
                HHModel::new(FreeGradedAlgebra::new(gens.clone())?)?
            }
            HomotopyGenerators::Family { .. } => {
                HHModel::truncated(self.homotopy_algebra(degree)?, degree)?
            }
        })
    }

    /// Poincaré series of `π_*A ⊗ Q`.
    pub fn homotopy_series(&self, cutoff: usize) -> Result<TruncatedSeries> {
        Ok(self
            .homotopy_algebra(cutoff as u32)?
            .poincare_series(cutoff))
    }

    fn refuse<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(KAssemblyError::Refused {
            spectrum: self.name.clone(),
            reason: reason.into(),
        })
    }
}

/// Positive-degree `ker(B)` of the Hochschild model: the relative term
/// `K(A → Hπ₀A)`.
pub fn relative_k_series(s: &SpectrumDescriptor, cutoff: usize) -> Result<TruncatedSeries> {
    // ker(B) in degree D needs B: HH_D → HH_{D+1}.
    let model = s.hh_model(cutoff as u32 + 1)?;
    Ok(model.positive_kernel_series(cutoff)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentNote {
    pub component: String,
    pub source: String,
}

/// `total = base + relative`, coefficientwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KSeriesReport {
    pub spectrum: String,
    pub cutoff: usize,
    pub base: TruncatedSeries,
    pub relative: TruncatedSeries,
    pub total: TruncatedSeries,
    pub notes: Vec<ComponentNote>,
}

const K1_NOT_FINITE: &str = "K_1 of the base ring is not finitely generated, so the absolute \
     series is not reported; the relative series is available";

pub fn k_series(s: &SpectrumDescriptor, cutoff: usize) -> Result<KSeriesReport> {
    if !s.has_finite_type_k1 {
        return s.refuse(K1_NOT_FINITE);
    }
    let base = s.base_series.expand(cutoff);
    let relative = relative_k_series(s, cutoff)?;
    let total = &base + &relative;
    Ok(KSeriesReport {
        spectrum: s.name.clone(),
        cutoff,
        notes: vec![
            ComponentNote {
                component: "base".into(),
                source: format!("K(pi_0) series {}", s.base_series),
            },
            ComponentNote {
                component: "relative".into(),
                source: "positive-degree ker(B) on the Hochschild model, exact nullspaces".into(),
            },
        ],
        base,
        relative,
        total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicVariant {
    /// `K(A) → K(A[1/x]) → BK(π₀A)`.
    Localization,
    /// Fixed points of the conjugation action on the periodic series.
    FixedPoints,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicReport {
    pub spectrum: String,
    pub variant: PeriodicVariant,
    pub cutoff: usize,
    /// Series of the connective term; relative only when `relative_only`.
    pub connective: TruncatedSeries,
    /// `t` times the base series; zero when `relative_only`.
    pub delooped_base: TruncatedSeries,
    pub series: TruncatedSeries,
    pub relative_only: bool,
    pub annotation: Option<String>,
}

const FIXED_POINTS_NOTE: &str = "plausibility, not theorem: fixed points of the conjugation \
     action, expected to be close to K of the real periodic spectrum";

/// Periodic series via the split localization sequence. `BK(π₀A)` is the base
/// series shifted up by one degree.
pub fn k_periodic_series(
    s: &SpectrumDescriptor,
    cutoff: usize,
    variant: PeriodicVariant,
) -> Result<PeriodicReport> {
    match s.localization {
        Localization::Unavailable => {
            return s.refuse("no rational computation of the periodic K-theory is available")
        }
        Localization::RelativeOnly if variant == PeriodicVariant::FixedPoints => {
            return s.refuse("the fixed-points variant needs the absolute series")
        }
        _ => {}
    }
    let relative_only = s.localization == Localization::RelativeOnly;
    let (connective, annotation) = match variant {
        PeriodicVariant::Localization if relative_only => (
            relative_k_series(s, cutoff)?,
            Some("relative to K(pi_0) and its delooping".to_string()),
        ),
        PeriodicVariant::Localization => (k_series(s, cutoff)?.total, None),
        PeriodicVariant::FixedPoints => {
            if s.conjugation.is_empty() {
                return s.refuse("no conjugation action is recorded");
            }
            (
                fixed_k_series(s, cutoff)?,
                Some(FIXED_POINTS_NOTE.to_string()),
            )
        }
    };
    let delooped_base = if relative_only {
        TruncatedSeries::zero(cutoff)
    } else {
        s.base_series.expand(cutoff).shift(1)
    };
    let series = &connective + &delooped_base;
    Ok(PeriodicReport {
        spectrum: s.name.clone(),
        variant,
        cutoff,
        connective,
        delooped_base,
        series,
        relative_only,
        annotation,
    })
}

/// Base series plus the conjugation-fixed part of the relative term. The
/// base is fixed by conjugation.
fn fixed_k_series(s: &SpectrumDescriptor, cutoff: usize) -> Result<TruncatedSeries> {
    let model = s.hh_model(cutoff as u32 + 1)?;
    let negated: Vec<usize> = s
        .conjugation
        .iter()
        .map(|n| {
            model
                .base()
                .generator_index(n)
                .expect("validated conjugation")
        })
        .collect();
    let dims = model.fixed_kernel_dims(cutoff as u32, &negated)?;
    let relative = TruncatedSeries::from_dims(&dims, cutoff).positive_part();
    Ok(&s.base_series.expand(cutoff) + &relative)
}

/// `1 + t^5/(1 - t^4) + t^{2n+1}/(1 - t^{2n})`, the series of `A(S^{2n+1})`.
pub fn a_theory_sphere_series(n: usize, cutoff: usize) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(KAssemblyError::InvalidDescriptor(
            "sphere index n must be at least 1".into(),
        ));
    }
    let rf = &borel_series() + &RationalFunction::geometric(1, 2 * n + 1, 2 * n);
    Ok(rf.expand(cutoff))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitMapReport {
    pub spectrum: String,
    pub cutoff: usize,
    /// `t (p(t) - 1)` with `p` the series of `π_*A ⊗ Q`.
    pub bsl1: TruncatedSeries,
    pub relative: TruncatedSeries,
    pub first_difference: Option<usize>,
    /// `(bsl1, relative)` coefficients at `first_difference`.
    pub ranks_at_difference: Option<(u64, u64)>,
}

impl UnitMapReport {
    pub fn is_equivalence(&self) -> bool {
        self.first_difference.is_none()
    }
}

/// Compares the source and target series of the relative unit map
/// `BSL₁(π_A) → K(π_A)`.
pub fn unit_map_comparison(s: &SpectrumDescriptor, cutoff: usize) -> Result<UnitMapReport> {
    let p = s.homotopy_series(cutoff)?;
    let bsl1 = p.positive_part().shift(1);
    let relative = relative_k_series(s, cutoff)?;
    let first_difference = first_difference_degree(&bsl1, &relative);
    let rank =
        |x: &TruncatedSeries, d: usize| x.coeff(d).to_integer().to_u64().expect("ranks are small");
    let ranks_at_difference = first_difference.map(|d| (rank(&bsl1, d), rank(&relative, d)));
    Ok(UnitMapReport {
        spectrum: s.name.clone(),
        cutoff,
        bsl1,
        relative,
        first_difference,
        ranks_at_difference,
    })
}

/// `∏_{k≥1} (1 + t^{step·k+1}) / (1 - t^{step·k})`, the Hochschild series of
/// the polynomial algebra on one generator in each degree `step·k`.
pub fn family_hh_series(step: usize, cutoff: usize) -> Result<TruncatedSeries> {
    Ok(infinite_product(
        |k| {
            let m = step * k;
            let one = Polynomial::one();
            let num = &one + &Polynomial::monomial(BigInt::from(1), m + 1);
            let den = &one - &Polynomial::monomial(BigInt::from(1), m);
            RationalFunction::new(num, den).expect("1 - t^m has constant term 1")
        },
        cutoff,
    )?)
}

/// `∏_{k≥1} 1 / (1 - t^{step·k})`.
pub fn family_homotopy_series(step: usize, cutoff: usize) -> Result<TruncatedSeries> {
    Ok(infinite_product(
        |k| RationalFunction::geometric(1, 0, step * k),
        cutoff,
    )?)
}
