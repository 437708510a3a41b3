//! Brute-force normalized Hochschild complex of a free graded-commutative
//! algebra, used to validate [`crate::hochschild`].
//!
//! This computes Hochschild homology of the graded ring itself. For the free
//! models on even generators that the rest of the crate uses, the
//! Hochschild-filtration spectral sequence from the graded ring to the
//! simplicial ring collapses, so the graded computation is the answer.
//!
//! A word `a_0 ⊗ a_1 ⊗ ... ⊗ a_n` has homological degree `n` and total degree
//! `n + Σ |a_i|`. Tail letters are monomials of positive degree (the
//! normalized complex), `a_0` is any monomial.
//!
//! Sign convention, with letters carrying their internal degree:
//!
//! ```text
//! b(a_0 ⊗ ... ⊗ a_n) = Σ_{i<n} (-1)^i a_0 ⊗ ... ⊗ a_i a_{i+1} ⊗ ... ⊗ a_n
//!                      + (-1)^{n + |a_n|(|a_0| + ... + |a_{n-1}|)} a_n a_0 ⊗ a_1 ⊗ ... ⊗ a_{n-1}
//! τ(a_0 ⊗ ... ⊗ a_n) = (-1)^{n + |a_n|(|a_0| + ... + |a_{n-1}|)} a_n ⊗ a_0 ⊗ ... ⊗ a_{n-1}
//! B(w)               = Σ_{i=0}^{n} 1 ⊗ τ^i(w)
//! ```
//!
//! A word with a unit in a tail slot is zero, so `B(w) = 0` whenever `a_0` is
//! the unit. `b` lowers total degree by one and `B` raises it by one.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::galg::{FreeGradedAlgebra, GalgError, Monomial};
use crate::hochschild::{polynomial_base, HHModel, HochschildError};
use crate::linalg::Matrix;
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("generator `{name}` has degree 1; the normalized complex is only enumerated for generators of degree >= 2")]
    UnboundedBasis { name: String },
    #[error(transparent)]
    Algebra(#[from] GalgError),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarWord {
    letters: Vec<Monomial>,
}

impl BarWord {
    /// `letters[0]` is `a_0`; the rest is the tail.
    pub fn new(letters: Vec<Monomial>) -> Self {
        assert!(!letters.is_empty(), "a bar word needs a_0");
        Self { letters }
    }

    pub fn letters(&self) -> &[Monomial] {
        &self.letters
    }

    pub fn homological_degree(&self) -> usize {
        self.letters.len() - 1
    }

    pub fn internal_degree(&self) -> u32 {
        self.letters.iter().map(Monomial::degree).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.homological_degree() as u32 + self.internal_degree()
    }

    fn is_degenerate(&self) -> bool {
        self.letters[1..].iter().any(Monomial::is_unit)
    }
}

/// Q-linear combination of bar words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BarChain {
    terms: BTreeMap<BarWord, Rational>,
}

impl BarChain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: BarWord) -> Self {
        let mut c = Self::zero();
        c.add_term(Rational::one(), w);
        c
    }

    pub fn add_term(&mut self, c: Rational, w: BarWord) {
        if c.is_zero() || w.is_degenerate() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add_chain(&mut self, other: &BarChain, scale: &Rational) {
        for (w, c) in &other.terms {
            self.add_term(c * scale, w.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BarWord, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &BarWord) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }
}

fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// The normalized Hochschild complex of one algebra.
#[derive(Clone, Debug)]
pub struct BarComplex {
    algebra: FreeGradedAlgebra,
}

impl BarComplex {
    pub fn new(algebra: FreeGradedAlgebra) -> Result<Self, OracleError> {
        if let Some(g) = algebra.generators().iter().find(|g| g.degree < 2) {
            return Err(OracleError::UnboundedBasis {
                name: g.name.clone(),
            });
        }
        Ok(Self { algebra })
    }

    pub fn algebra(&self) -> &FreeGradedAlgebra {
        &self.algebra
    }

    /// All normalized words of total degree `d`, grouped by homological
    /// degree, deterministic order.
    pub fn basis(&self, d: u32) -> Vec<BarWord> {
        let bases: Vec<Vec<Monomial>> = (0..=d).map(|k| self.algebra.basis(k)).collect();
        let min_letter = self.algebra.generators().iter().map(|g| g.degree).min();
        let mut out = Vec::new();
        let mut n = 0u32;
        loop {
            // smallest total degree of a word with n tail letters
            let floor = match min_letter {
                Some(m) => n * (m + 1),
                None if n == 0 => 0,
                None => break,
            };
            if floor > d {
                break;
            }
            let internal = d - n;
            let mut letters = Vec::with_capacity(n as usize + 1);
            fill_words(&bases, internal, n as usize + 1, &mut letters, &mut out);
            n += 1;
        }
        out
    }

    fn product(&self, a: &Monomial, b: &Monomial) -> Option<(Rational, Monomial)> {
        self.algebra
            .multiply(a, b)
            .expect("letters belong to this algebra")
            .map(|(s, m)| (sign(s < 0), m))
    }

    /// Hochschild boundary of a single word.
    pub fn b_word(&self, w: &BarWord) -> BarChain {
        let mut out = BarChain::zero();
        let a = &w.letters;
        let n = a.len() - 1;
        if n == 0 {
            return out;
        }
        for i in 0..n {
            if let Some((s, m)) = self.product(&a[i], &a[i + 1]) {
                let mut letters = Vec::with_capacity(n);
                letters.extend_from_slice(&a[..i]);
                letters.push(m);
                letters.extend_from_slice(&a[i + 2..]);
                out.add_term(s * sign(i % 2 == 1), BarWord::new(letters));
            }
        }
        let before: u32 = a[..n].iter().map(Monomial::degree).sum();
        let koszul = (a[n].degree() * before) % 2 == 1;
        if let Some((s, m)) = self.product(&a[n], &a[0]) {
            let mut letters = Vec::with_capacity(n);
            letters.push(m);
            letters.extend_from_slice(&a[1..n]);
            out.add_term(s * sign((n % 2 == 1) ^ koszul), BarWord::new(letters));
        }
        out
    }

    /// Cyclic operator `τ`.
    fn rotate(&self, w: &BarWord) -> (Rational, BarWord) {
        let a = &w.letters;
        let n = a.len() - 1;
        let before: u32 = a[..n].iter().map(Monomial::degree).sum();
        let odd = (n % 2 == 1) ^ ((a[n].degree() * before) % 2 == 1);
        let mut letters = Vec::with_capacity(n + 1);
        letters.push(a[n].clone());
        letters.extend_from_slice(&a[..n]);
        (sign(odd), BarWord::new(letters))
    }

    /// Connes' operator on a single word.
    pub fn connes_b_word(&self, w: &BarWord) -> BarChain {
        let mut out = BarChain::zero();
        if w.letters[0].is_unit() {
            return out;
        }
        let unit = self.algebra.unit();
        let mut current = (Rational::one(), w.clone());
        for _ in 0..w.letters.len() {
            let mut letters = Vec::with_capacity(current.1.letters.len() + 1);
            letters.push(unit.clone());
            letters.extend_from_slice(&current.1.letters);
            out.add_term(current.0.clone(), BarWord::new(letters));
            let (s, next) = self.rotate(&current.1);
            current = (current.0 * s, next);
        }
        out
    }

    pub fn b_diff(&self, c: &BarChain) -> BarChain {
        let mut out = BarChain::zero();
        for (w, x) in c.terms() {
            out.add_chain(&self.b_word(w), x);
        }
        out
    }

    pub fn connes_b_diff(&self, c: &BarChain) -> BarChain {
        let mut out = BarChain::zero();
        for (w, x) in c.terms() {
            out.add_chain(&self.connes_b_word(w), x);
        }
        out
    }

    fn matrix_of<F>(&self, source: &[BarWord], target: &[BarWord], op: F) -> Matrix
    where
        F: Fn(&BarWord) -> BarChain,
    {
        let index: HashMap<&BarWord, usize> =
            target.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(target.len(), source.len());
        for (j, w) in source.iter().enumerate() {
            for (t, c) in op(w).terms() {
                let i = *index.get(t).expect("image lies in the target basis");
                m.set(i, j, c.clone());
            }
        }
        m
    }
}

fn fill_words(
    bases: &[Vec<Monomial>],
    remaining: u32,
    slots: usize,
    letters: &mut Vec<Monomial>,
    out: &mut Vec<BarWord>,
) {
    if letters.len() == slots {
        if remaining == 0 {
            out.push(BarWord::new(letters.clone()));
        }
        return;
    }
    let is_tail = !letters.is_empty();
    let min = u32::from(is_tail);
    for deg in min..=remaining {
        for m in &bases[deg as usize] {
            letters.push(m.clone());
            fill_words(bases, remaining - deg, slots, letters, out);
            letters.pop();
        }
    }
}

/// Chain groups and differentials of the complex through a total degree.
#[derive(Clone, Debug)]
pub struct BarMatrices {
    /// `bases[d]`, the words of total degree `d`
    pub bases: Vec<Vec<BarWord>>,
    /// `b[d]: C_d → C_{d-1}`; `b[0]` has no rows
    pub b: Vec<Matrix>,
    /// `connes[d]: C_d → C_{d+1}`, for `d < bases.len() - 1`
    pub connes: Vec<Matrix>,
}

impl BarComplex {
    pub fn matrices(&self, through: u32) -> BarMatrices {
        let bases: Vec<Vec<BarWord>> = (0..=through).map(|d| self.basis(d)).collect();
        let b = (0..=through as usize)
            .map(|d| {
                if d == 0 {
                    Matrix::zeros(0, bases[0].len())
                } else {
                    self.matrix_of(&bases[d], &bases[d - 1], |w| self.b_word(w))
                }
            })
            .collect();
        let connes = (0..through as usize)
            .map(|d| self.matrix_of(&bases[d], &bases[d + 1], |w| self.connes_b_word(w)))
            .collect();
        BarMatrices { bases, b, connes }
    }
}

/// Exact checks of `b² = 0`, `B² = 0` and `bB + Bb = 0` as matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub through: u32,
    pub b_squared_zero: bool,
    pub connes_squared_zero: bool,
    pub anticommute: bool,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.b_squared_zero && self.connes_squared_zero && self.anticommute
    }
}

impl BarMatrices {
    pub fn identities(&self) -> IdentityReport {
        let top = self.bases.len() - 1;
        let b_squared_zero = (2..=top).all(|d| self.b[d - 1].mul(&self.b[d]).is_zero());
        let connes_squared_zero =
            (0..top.saturating_sub(1)).all(|d| self.connes[d + 1].mul(&self.connes[d]).is_zero());
        // on C_d: b_{d+1} B_d + B_{d-1} b_d
        let anticommute = (0..top).all(|d| {
            let first = self.b[d + 1].mul(&self.connes[d]);
            if d == 0 {
                first.is_zero()
            } else {
                first.add(&self.connes[d - 1].mul(&self.b[d])).is_zero()
            }
        });
        IdentityReport {
            through: top as u32,
            b_squared_zero,
            connes_squared_zero,
            anticommute,
        }
    }
}

/// Homology and induced `B` in one total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDegree {
    pub degree: u32,
    pub dim: usize,
    /// rank of the induced map `H_d → H_{d+1}`
    pub b_rank: usize,
    /// `B` maps boundaries of degree `d` to boundaries
    pub well_defined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub degrees: Vec<OracleDegree>,
    pub identities: IdentityReport,
}

impl OracleReport {
    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }

    pub fn b_ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.b_rank).collect()
    }

    /// `dim ker/im` of the induced `B` on homology.
    pub fn derham_dims(&self) -> Vec<usize> {
        self.degrees
            .iter()
            .enumerate()
            .map(|(d, row)| {
                let incoming = if d == 0 {
                    0
                } else {
                    self.degrees[d - 1].b_rank
                };
                row.dim - row.b_rank - incoming
            })
            .collect()
    }
}

/// Hochschild homology through total degree `max_degree`, with the rank of the
/// induced `B` out of each degree.
pub fn hh_via_bar(
    algebra: &FreeGradedAlgebra,
    max_degree: u32,
) -> Result<OracleReport, OracleError> {
    let complex = BarComplex::new(algebra.clone())?;
    let mats = complex.matrices(max_degree + 2);
    let identities = mats.identities();
    let b_rank: Vec<usize> = mats.b.iter().map(Matrix::rank).collect();
    let mut degrees = Vec::with_capacity(max_degree as usize + 1);
    for d in 0..=max_degree as usize {
        let cycles = mats.b[d].nullspace();
        let dim = cycles.len() - b_rank[d + 1];
        let target_boundaries = &mats.b[d + 2];
        let boundary_rank = b_rank[d + 2];
        let images: Vec<Vec<Rational>> = cycles.iter().map(|z| mats.connes[d].mul_vec(z)).collect();
        let induced = Matrix::from_columns(mats.bases[d + 1].len(), &images);
        let b_rank_here = target_boundaries.hstack(&induced).rank() - boundary_rank;
        let boundary_images = mats.connes[d].mul(&mats.b[d + 1]);
        let well_defined = target_boundaries.hstack(&boundary_images).rank() == boundary_rank;
        degrees.push(OracleDegree {
            degree: d as u32,
            dim,
            b_rank: b_rank_here,
            well_defined,
        });
    }
    Ok(OracleReport {
        degrees,
        identities,
    })
}

/// One line of the oracle-versus-closed-form table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub degree: u32,
    pub oracle_dim: usize,
    pub closed_dim: usize,
    pub oracle_b_rank: usize,
    pub closed_b_rank: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub generator_degrees: Vec<u32>,
    pub rows: Vec<ComparisonRow>,
    pub identities: IdentityReport,
    pub well_defined: bool,
    pub derham_match: bool,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
            && self.identities.holds()
            && self.well_defined
            && self.derham_match
    }
}

/// Runs the oracle on the polynomial algebra with the given even generator
/// degrees and compares against [`HHModel`]. `B` ranks are compared in
/// degrees below `max_degree`.
pub fn compare_with_closed_form(
    generator_degrees: &[u32],
    max_degree: u32,
) -> Result<Comparison, OracleError> {
    let names: Vec<String> = (0..generator_degrees.len())
        .map(|i| format!("x{}", i + 1))
        .collect();
    let spec: Vec<(&str, u32)> = names
        .iter()
        .map(String::as_str)
        .zip(generator_degrees.iter().copied())
        .collect();
    let base = polynomial_base(&spec)?;
    let oracle = hh_via_bar(&base, max_degree)?;
    let model = HHModel::new(base)?;
    let closed = model.degree_report(max_degree)?;
    let rows = oracle
        .degrees
        .iter()
        .zip(&closed)
        .map(|(o, c)| {
            let rank_checked = o.degree < max_degree;
            ComparisonRow {
                degree: o.degree,
                oracle_dim: o.dim,
                closed_dim: c.hh,
                oracle_b_rank: o.b_rank,
                closed_b_rank: c.rank,
                pass: o.dim == c.hh && (!rank_checked || o.b_rank == c.rank),
            }
        })
        .collect();
    let closed_derham: Vec<usize> = closed.iter().map(|r| r.de_rham).collect();
    let oracle_derham = oracle.derham_dims();
    let n = max_degree as usize;
    Ok(Comparison {
        generator_degrees: generator_degrees.to_vec(),
        rows,
        well_defined: oracle.degrees.iter().all(|d| d.well_defined),
        identities: oracle.identities,
        // the oracle's last rank is exact too, so all degrees compare
        derham_match: oracle_derham[..=n] == closed_derham[..=n],
    })
}
