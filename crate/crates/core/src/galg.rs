//! Free graded-commutative Q-algebras on named generators.
//!
//! Parity is derived from the degree: an even generator is polynomial, an odd
//! generator is exterior and squares to zero. A [`Monomial`] is stored in
//! canonical form, the ordered product `g_0^{e_0} g_1^{e_1} ...` in
//! generator-list order.
//!
//! Sign convention: symbols transpose by the Koszul rule
//! `a b = (-1)^{|a||b|} b a`, with formal `d`-symbols carrying degree one more
//! than their generator. Multiplying two canonical monomials moves every
//! factor of the right operand left past the factors of the left operand that
//! come later in generator order. A derivation `D` of degree `s` obeys
//! `D(ab) = D(a) b + (-1)^{s|a|} a D(b)`.
//!
//! Bases are ordered by descending lexicographic order of exponent vectors:
//! the first generator's exponent is largest first.

use std::collections::btree_map::Entry;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::TruncatedSeries;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalgError {
    #[error("generator `{name}` has degree 0; degrees must be positive")]
    ZeroDegree { name: String },
    #[error("generator name must not be empty")]
    EmptyName,
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("exponent vector has {got} entries, algebra has {expected} generators")]
    ExponentLength { expected: usize, got: usize },
    #[error("exterior generator `{name}` given exponent {exponent}")]
    ExteriorExponent { name: String, exponent: u32 },
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
}

/// A named generator of positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Result<Self, GalgError> {
        let name = name.into();
        if name.is_empty() {
            return Err(GalgError::EmptyName);
        }
        if degree == 0 {
            return Err(GalgError::ZeroDegree { name });
        }
        Ok(Self { name, degree })
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// On-disk algebra description: `{"generators": [{"name": "u", "degree": 2}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub generators: Vec<Generator>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<FreeGradedAlgebra, GalgError> {
        let gens = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.degree))
            .collect::<Result<Vec<_>, _>>()?;
        FreeGradedAlgebra::new(gens)
    }
}

/// Fingerprint of a generator list, used to catch mixed-algebra operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgebraId(u64);

#[derive(Clone, Debug)]
pub struct FreeGradedAlgebra {
    generators: Vec<Generator>,
    id: AlgebraId,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    algebra: AlgebraId,
    exponents: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, generator: usize) -> u32 {
        self.exponents[generator]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }
}

/// Q-linear combination of monomials of one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    algebra: AlgebraId,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(algebra: &FreeGradedAlgebra) -> Self {
        Self {
            algebra: algebra.id,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(Rational::one(), m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut e = Self {
            algebra: m.algebra,
            terms: BTreeMap::new(),
        };
        e.add_term(c, m);
        e
    }

    pub fn add_term(&mut self, c: Rational, m: Monomial) {
        debug_assert_eq!(m.algebra, self.algebra);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Element) {
        for (m, c) in &other.terms {
            self.add_term(c.clone(), m.clone());
        }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let mut out = Element {
            algebra: self.algebra,
            terms: BTreeMap::new(),
        };
        for (m, x) in &self.terms {
            out.add_term(x * c, m.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The common degree of all terms; `None` for zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }
}

impl FreeGradedAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Self, GalgError> {
        let mut seen = HashSet::new();
        for g in &generators {
            if g.degree == 0 {
                return Err(GalgError::ZeroDegree {
                    name: g.name.clone(),
                });
            }
            if g.name.is_empty() {
                return Err(GalgError::EmptyName);
            }
            if !seen.insert(g.name.as_str()) {
                return Err(GalgError::DuplicateName(g.name.clone()));
            }
        }
        let mut h = DefaultHasher::new();
        generators.hash(&mut h);
        Ok(Self {
            id: AlgebraId(h.finish()),
            generators,
        })
    }

    /// The ground field `Q` with no generators.
    pub fn ground() -> Self {
        Self::new(Vec::new()).expect("empty generator list is valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn unit(&self) -> Monomial {
        Monomial {
            algebra: self.id,
            exponents: vec![0; self.generators.len()],
            degree: 0,
        }
    }

    pub fn generator(&self, index: usize) -> Monomial {
        let mut exponents = vec![0; self.generators.len()];
        exponents[index] = 1;
        Monomial {
            algebra: self.id,
            exponents,
            degree: self.generators[index].degree,
        }
    }

    pub fn monomial(&self, exponents: Vec<u32>) -> Result<Monomial, GalgError> {
        if exponents.len() != self.generators.len() {
            return Err(GalgError::ExponentLength {
                expected: self.generators.len(),
                got: exponents.len(),
            });
        }
        for (g, &e) in self.generators.iter().zip(&exponents) {
            if g.is_odd() && e > 1 {
                return Err(GalgError::ExteriorExponent {
                    name: g.name.clone(),
                    exponent: e,
                });
            }
        }
        let degree = self.degree_of(&exponents);
        Ok(Monomial {
            algebra: self.id,
            exponents,
            degree,
        })
    }

    fn degree_of(&self, exponents: &[u32]) -> u32 {
        self.generators
            .iter()
            .zip(exponents)
            .map(|(g, &e)| g.degree * e)
            .sum()
    }

    fn check(&self, m: &Monomial) -> Result<(), GalgError> {
        if m.algebra != self.id {
            return Err(GalgError::AlgebraMismatch);
        }
        Ok(())
    }

    /// All monomials of total degree `d`, in canonical order.
    pub fn basis(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.generators.len()];
        self.fill_basis(0, d, &mut exps, &mut out);
        out
    }

    fn fill_basis(
        &self,
        index: usize,
        remaining: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if index == self.generators.len() {
            if remaining == 0 {
                out.push(Monomial {
                    algebra: self.id,
                    exponents: exps.clone(),
                    degree: self.degree_of(exps),
                });
            }
            return;
        }
        let g = &self.generators[index];
        let mut max = remaining / g.degree;
        if g.is_odd() {
            max = max.min(1);
        }
        for e in (0..=max).rev() {
            exps[index] = e;
            self.fill_basis(index + 1, remaining - e * g.degree, exps, out);
        }
        exps[index] = 0;
    }

    /// Poincaré series `∏ (1 + t^{|y|}) ∏ 1/(1 - t^{|x|})` over odd `y` and
    /// even `x`, computed without enumerating monomials.
    pub fn poincare_series(&self, cutoff: usize) -> TruncatedSeries {
        let mut counts = vec![0u64; cutoff + 1];
        counts[0] = 1;
        for g in &self.generators {
            let deg = g.degree as usize;
            if g.is_odd() {
                for d in (deg..=cutoff).rev() {
                    counts[d] += counts[d - deg];
                }
            } else {
                for d in deg..=cutoff {
                    counts[d] += counts[d - deg];
                }
            }
        }
        TruncatedSeries::from_integers(counts, cutoff)
    }

    /// Product of canonical monomials: `None` when an exterior generator would
    /// be squared, otherwise the Koszul sign and the canonical product.
    pub fn multiply(
        &self,
        a: &Monomial,
        b: &Monomial,
    ) -> Result<Option<(i8, Monomial)>, GalgError> {
        self.check(a)?;
        self.check(b)?;
        let mut odd_in_a_after = 0u32;
        let mut sign_flips = 0u32;
        // Scan from the last generator down: each odd factor of `b` at index j
        // passes every odd factor of `a` with index > j.
        for j in (0..self.generators.len()).rev() {
            if !self.generators[j].is_odd() {
                continue;
            }
            let (ea, eb) = (a.exponents[j], b.exponents[j]);
            if ea + eb > 1 {
                return Ok(None);
            }
            if eb == 1 {
                sign_flips += odd_in_a_after;
            }
            odd_in_a_after += ea;
        }
        let exponents: Vec<u32> = a
            .exponents
            .iter()
            .zip(&b.exponents)
            .map(|(x, y)| x + y)
            .collect();
        let sign = if sign_flips % 2 == 0 { 1 } else { -1 };
        Ok(Some((
            sign,
            Monomial {
                algebra: self.id,
                exponents,
                degree: a.degree + b.degree,
            },
        )))
    }

    pub fn multiply_elements(&self, a: &Element, b: &Element) -> Result<Element, GalgError> {
        if a.algebra != self.id || b.algebra != self.id {
            return Err(GalgError::AlgebraMismatch);
        }
        let mut out = Element::zero(self);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some((sign, m)) = self.multiply(ma, mb)? {
                    out.add_term(Rational::from_integer(sign.into()) * ca * cb, m);
                }
            }
        }
        Ok(out)
    }

    /// Splits a monomial into `prefix * g_i^{e_i} * suffix` around generator `i`.
    fn split_at(&self, m: &Monomial, i: usize) -> (Monomial, Monomial) {
        let mut prefix = m.exponents.clone();
        let mut suffix = m.exponents.clone();
        for (j, (p, s)) in prefix.iter_mut().zip(suffix.iter_mut()).enumerate() {
            if j >= i {
                *p = 0;
            }
            if j <= i {
                *s = 0;
            }
        }
        let p_deg = self.degree_of(&prefix);
        let s_deg = self.degree_of(&suffix);
        (
            Monomial {
                algebra: self.id,
                exponents: prefix,
                degree: p_deg,
            },
            Monomial {
                algebra: self.id,
                exponents: suffix,
                degree: s_deg,
            },
        )
    }

    fn power(&self, i: usize, e: u32) -> Monomial {
        let mut exponents = vec![0; self.generators.len()];
        exponents[i] = e;
        Monomial {
            algebra: self.id,
            degree: self.generators[i].degree * e,
            exponents,
        }
    }
}

/// A derivation determined by its values on generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    algebra: AlgebraId,
    images: Vec<Element>,
    shift: i32,
}

impl Derivation {
    /// `images[i]` is the value on generator `i`; every nonzero image must be
    /// homogeneous of degree `|g_i| + shift`.
    pub fn new(
        algebra: &FreeGradedAlgebra,
        images: Vec<Element>,
        shift: i32,
    ) -> Result<Self, GalgError> {
        if images.len() != algebra.generators.len() {
            return Err(GalgError::InvalidDerivation(format!(
                "{} images for {} generators",
                images.len(),
                algebra.generators.len()
            )));
        }
        for (g, img) in algebra.generators.iter().zip(&images) {
            if img.algebra != algebra.id {
                return Err(GalgError::AlgebraMismatch);
            }
            if img.is_zero() {
                continue;
            }
            let Some(deg) = img.homogeneous_degree() else {
                return Err(GalgError::InvalidDerivation(format!(
                    "image of `{}` is not homogeneous",
                    g.name
                )));
            };
            if deg as i64 != g.degree as i64 + shift as i64 {
                return Err(GalgError::InvalidDerivation(format!(
                    "image of `{}` has degree {deg}, expected {} (shift {shift})",
                    g.name,
                    g.degree as i64 + shift as i64
                )));
            }
        }
        Ok(Self {
            algebra: algebra.id,
            images,
            shift,
        })
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn image(&self, generator: usize) -> &Element {
        &self.images[generator]
    }

    /// Graded Leibniz extension of the generator values to a monomial.
    pub fn apply(&self, algebra: &FreeGradedAlgebra, m: &Monomial) -> Result<Element, GalgError> {
        if self.algebra != algebra.id {
            return Err(GalgError::AlgebraMismatch);
        }
        algebra.check(m)?;
        let odd_shift = self.shift.rem_euclid(2) == 1;
        let mut out = Element::zero(algebra);
        for (i, &e) in m.exponents.iter().enumerate() {
            if e == 0 || self.images[i].is_zero() {
                continue;
            }
            let (prefix, suffix) = algebra.split_at(m, i);
            let sign = if odd_shift && prefix.degree % 2 == 1 {
                -1
            } else {
                1
            };
            // D(g^e) = e g^{e-1} D(g) for even g; e = 1 for odd g.
            let coeff = Rational::from_integer((sign * e as i64).into());
            let left = Element::from_monomial(
                algebra
                    .multiply(&prefix, &algebra.power(i, e - 1))?
                    .map(|(s, mono)| {
                        debug_assert_eq!(s, 1, "prefix precedes generator i, no reordering");
                        mono
                    })
                    .expect("prefix and power share no generators"),
            );
            let with_image = algebra.multiply_elements(&left, &self.images[i])?;
            let full = algebra.multiply_elements(&with_image, &Element::from_monomial(suffix))?;
            out.add_assign(&full.scale(&coeff));
        }
        Ok(out)
    }

    pub fn apply_element(
        &self,
        algebra: &FreeGradedAlgebra,
        x: &Element,
    ) -> Result<Element, GalgError> {
        let mut out = Element::zero(algebra);
        for (m, c) in &x.terms {
            out.add_assign(&self.apply(algebra, m)?.scale(c));
        }
        Ok(out)
    }
}

/// Displays a monomial as e.g. `b1^2*db2`, or `1` for the unit.
pub struct MonomialDisplay<'a> {
    algebra: &'a FreeGradedAlgebra,
    monomial: &'a Monomial,
}

impl FreeGradedAlgebra {
    pub fn display<'a>(&'a self, monomial: &'a Monomial) -> MonomialDisplay<'a> {
        MonomialDisplay {
            algebra: self,
            monomial,
        }
    }
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (g, &e) in self.algebra.generators.iter().zip(&self.monomial.exponents) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{e}", g.name)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}
