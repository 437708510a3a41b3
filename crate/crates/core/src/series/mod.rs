//! Truncated formal power series in `t` with exact rational coefficients.
//!
//! A [`TruncatedSeries`] stores `c_0 + c_1 t + ... + c_D t^D` and nothing
//! about higher degrees. Binary operations return a series whose cutoff is the
//! smaller of the two input cutoffs, and equality compares coefficients
//! through that common cutoff only.

mod parse;
mod rational;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use parse::parse_rational_function;
pub use rational::{Polynomial, RationalFunction};

use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("invalid rational function: denominator has zero constant term")]
    InvalidRationalFunction,
    #[error("division by a series with zero constant term")]
    NonUnitDivisor,
    #[error("divergent product: factor {index} has constant term {constant}, expected 1")]
    DivergentProduct { index: usize, constant: Rational },
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Ring operation selector for [`series_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Power series known exactly through degree `cutoff`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    // Always `cutoff + 1` entries.
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(cutoff: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); cutoff + 1],
        }
    }

    pub fn one(cutoff: usize) -> Self {
        Self::monomial(Rational::one(), 0, cutoff)
    }

    /// `c * t^degree`, or zero if `degree > cutoff`.
    pub fn monomial(c: Rational, degree: usize, cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        if degree <= cutoff {
            s.coeffs[degree] = c;
        }
        s
    }

    /// Builds a series from the leading coefficients; missing entries are
    /// zero and entries past the cutoff are dropped.
    pub fn from_coeffs<I>(coeffs: I, cutoff: usize) -> Self
    where
        I: IntoIterator<Item = Rational>,
    {
        let mut s = Self::zero(cutoff);
        for (d, c) in coeffs.into_iter().take(cutoff + 1).enumerate() {
            s.coeffs[d] = c;
        }
        s
    }

    pub fn from_integers<I>(coeffs: I, cutoff: usize) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        Self::from_coeffs(
            coeffs.into_iter().map(|c| Rational::from_integer(c.into())),
            cutoff,
        )
    }

    /// Series whose coefficients are the given dimensions.
    pub fn from_dims(dims: &[usize], cutoff: usize) -> Self {
        Self::from_integers(dims.iter().map(|&d| d as u64), cutoff)
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^degree`.
    ///
    /// Panics if `degree` exceeds the cutoff: that coefficient is unknown.
    pub fn coeff(&self, degree: usize) -> &Rational {
        assert!(
            degree <= self.cutoff(),
            "coefficient of t^{degree} requested from a series known through t^{}",
            self.cutoff()
        );
        &self.coeffs[degree]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-truncates at `cutoff`, which may not exceed the current one.
    pub fn truncate(&self, cutoff: usize) -> Self {
        let cutoff = cutoff.min(self.cutoff());
        Self {
            coeffs: self.coeffs[..=cutoff].to_vec(),
        }
    }

    /// Multiplication by `t^k`; the cutoff is unchanged.
    pub fn shift(&self, k: usize) -> Self {
        let cutoff = self.cutoff();
        let mut s = Self::zero(cutoff);
        for d in k..=cutoff {
            s.coeffs[d] = self.coeffs[d - k].clone();
        }
        s
    }

    /// The series with its constant term set to zero.
    pub fn positive_part(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = Rational::zero();
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `self / divisor`, defined when the divisor's constant term is a unit.
    pub fn checked_div(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let b0 = &divisor.coeffs[0];
        if b0.is_zero() {
            return Err(SeriesError::NonUnitDivisor);
        }
        let cutoff = self.cutoff().min(divisor.cutoff());
        let inv_b0 = b0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(cutoff + 1);
        for n in 0..=cutoff {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                let bk = &divisor.coeffs[k];
                if !bk.is_zero() {
                    acc -= bk * &out[n - k];
                }
            }
            out.push(acc * &inv_b0);
        }
        Ok(Self { coeffs: out })
    }

    /// Two-column TSV: `degree<TAB>coefficient`, one row per degree through
    /// the cutoff, with a header row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("degree\tcoefficient\n");
        for (d, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{d}\t{c}\n"));
        }
        out
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        let n = self.cutoff().min(other.cutoff());
        self.coeffs[..=n] == other.coeffs[..=n]
    }
}

/// Canonical text form: ascending degree, zero terms omitted, `c*t^d`.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if d == 0 {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*t^{d}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        let mut st = serializer.serialize_struct("TruncatedSeries", 3)?;
        st.serialize_field("cutoff", &self.cutoff())?;
        st.serialize_field("coefficients", &coeffs)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

impl<'a> Add<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.cutoff().min(rhs.cutoff());
        TruncatedSeries {
            coeffs: (0..=n).map(|d| &self.coeffs[d] + &rhs.coeffs[d]).collect(),
        }
    }
}

impl<'a> Sub<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.cutoff().min(rhs.cutoff());
        TruncatedSeries {
            coeffs: (0..=n).map(|d| &self.coeffs[d] - &rhs.coeffs[d]).collect(),
        }
    }
}

impl<'a> Mul<&'a TruncatedSeries> for &'a TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.cutoff().min(rhs.cutoff());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Applies one ring operation; the result cutoff is the smaller input cutoff.
pub fn series_arith(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    op: SeriesOp,
) -> Result<TruncatedSeries, SeriesError> {
    Ok(match op {
        SeriesOp::Add => a + b,
        SeriesOp::Sub => a - b,
        SeriesOp::Mul => a * b,
        SeriesOp::Div => a.checked_div(b)?,
    })
}

/// Expands a rational function through degree `cutoff`.
pub fn expand(rf: &RationalFunction, cutoff: usize) -> TruncatedSeries {
    rf.expand(cutoff)
}

/// Product `∏_{k≥1} factor_at(k)` truncated at `cutoff`.
///
/// Each factor must be `1 + O(t^{m(k)})` with `m(k)` strictly increasing, so
/// the factors with `m(k) > cutoff` are all `1` through the cutoff. Iteration
/// stops at the first such factor.
pub fn infinite_product<F>(mut factor_at: F, cutoff: usize) -> Result<TruncatedSeries, SeriesError>
where
    F: FnMut(usize) -> RationalFunction,
{
    let mut acc = TruncatedSeries::one(cutoff);
    // m(k) >= k, so no factor past cutoff + 1 can matter.
    for k in 1..=cutoff + 1 {
        let factor = factor_at(k).expand(cutoff);
        let c0 = factor.coeff(0);
        if !c0.is_one() {
            return Err(SeriesError::DivergentProduct {
                index: k,
                constant: c0.clone(),
            });
        }
        let order = (1..=cutoff).find(|&d| !factor.coeff(d).is_zero());
        if order.is_none() {
            break;
        }
        acc = &acc * &factor;
    }
    Ok(acc)
}

/// Least degree where the two series differ, within their common cutoff.
pub fn first_difference_degree(a: &TruncatedSeries, b: &TruncatedSeries) -> Option<usize> {
    let n = a.cutoff().min(b.cutoff());
    (0..=n).find(|&d| a.coeffs[d] != b.coeffs[d])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.integer_coeffs()
            .unwrap()
            .into_iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    fn poly(coeffs: &[i64]) -> Polynomial {
        Polynomial::from_integers(coeffs.iter().copied())
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(num), poly(den)).unwrap()
    }

    #[test]
    fn expand_t3_over_one_minus_t2() {
        let s = expand(&rf(&[0, 0, 0, 1], &[1, 0, -1]), 9);
        assert_eq!(ints(&s), vec![0, 0, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn expand_constant() {
        let s = expand(&RationalFunction::one(), 5);
        assert_eq!(ints(&s), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn expand_ku_numerator_splits() {
        let joint = expand(&rf(&[0, 0, 0, 1, 0, 2], &[1, 0, 0, 0, -1]), 9);
        assert_eq!(ints(&joint), vec![0, 0, 0, 1, 0, 2, 0, 1, 0, 2]);
        let a = expand(&rf(&[0, 0, 0, 1], &[1, 0, -1]), 9);
        let b = expand(&rf(&[0, 0, 0, 0, 0, 1], &[1, 0, 0, 0, -1]), 9);
        assert_eq!(joint, &a + &b);
    }

    #[test]
    fn zero_constant_denominator_is_rejected() {
        assert_eq!(
            RationalFunction::new(poly(&[1]), poly(&[0, 1])).unwrap_err(),
            SeriesError::InvalidRationalFunction
        );
    }

    #[test]
    fn one_plus_t_times_one_minus_t() {
        let a = TruncatedSeries::from_integers([1, 1], 6);
        let b = TruncatedSeries::from_integers([1, -1], 6);
        assert_eq!(ints(&(&a * &b)), vec![1, 0, -1, 0, 0, 0, 0]);
    }

    #[test]
    fn division_requires_unit_constant_term() {
        let a = TruncatedSeries::one(4);
        let b = TruncatedSeries::monomial(Rational::one(), 1, 4);
        assert_eq!(
            series_arith(&a, &b, SeriesOp::Div).unwrap_err(),
            SeriesError::NonUnitDivisor
        );
    }

    #[test]
    fn cutoff_is_minimum_of_inputs() {
        let a = TruncatedSeries::one(3);
        let b = TruncatedSeries::one(7);
        for op in [SeriesOp::Add, SeriesOp::Sub, SeriesOp::Mul, SeriesOp::Div] {
            assert_eq!(series_arith(&a, &b, op).unwrap().cutoff(), 3);
        }
    }

    #[test]
    fn empty_product_is_one() {
        // every factor is 1 + t^{10k}, all beyond the cutoff
        let s = infinite_product(
            |k| {
                let mut c = vec![0i64; 10 * k + 1];
                c[0] = 1;
                c[10 * k] = 1;
                RationalFunction::from_polynomial(poly(&c))
            },
            5,
        )
        .unwrap();
        assert_eq!(s, TruncatedSeries::one(5));
    }

    #[test]
    fn divergent_product_is_rejected() {
        let err = infinite_product(|_| rf(&[2], &[1]), 5).unwrap_err();
        assert!(matches!(
            err,
            SeriesError::DivergentProduct { index: 1, .. }
        ));
    }

    #[test]
    fn first_difference_trivial_cases() {
        let s = TruncatedSeries::from_integers([1, 2, 3], 4);
        assert_eq!(first_difference_degree(&s, &s), None);
        let one = TruncatedSeries::one(4);
        let one_plus_t = TruncatedSeries::from_integers([1, 1], 4);
        assert_eq!(first_difference_degree(&one, &one_plus_t), Some(1));
    }

    #[test]
    fn display_is_canonical() {
        let s = TruncatedSeries::from_coeffs(
            [
                Rational::from_integer(1.into()),
                Rational::zero(),
                Rational::new((-1).into(), 2.into()),
                Rational::from_integer(3.into()),
            ],
            5,
        );
        assert_eq!(s.to_string(), "1 - 1/2*t^2 + 3*t^3");
        assert_eq!(TruncatedSeries::zero(3).to_string(), "0");
        assert_eq!((-&TruncatedSeries::one(1)).to_string(), "-1");
    }

    #[test]
    fn tsv_has_one_row_per_degree() {
        let s = TruncatedSeries::from_integers([1, 0, 2], 2);
        assert_eq!(s.to_tsv(), "degree\tcoefficient\n0\t1\n1\t0\n2\t2\n");
    }

    #[test]
    fn equality_uses_common_cutoff() {
        let a = TruncatedSeries::from_integers([1, 1, 5], 2);
        let b = TruncatedSeries::from_integers([1, 1], 1);
        assert_eq!(a, b);
    }
}
