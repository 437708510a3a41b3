//! Hochschild homology of free graded-commutative Q-algebras on even
//! generators, with Connes' B-operator realized as exact matrices.
//!
//! For a base `Q[x_1, ..., x_n]` with every `|x_i|` even, the model is
//! `HH = Q[x_i] ⊗ E(dx_i)` with `|dx_i| = |x_i| + 1` and `B` the derivation
//! with `B(x_i) = dx_i`, `B(dx_i) = 0`. The generators of `HH` are listed as
//! `x_1, ..., x_n, dx_1, ..., dx_n`.
//!
//! Infinite families (such as `b_k`, `|b_k| = 2k`) are handled by building the
//! model from the finitely many generators of degree at most some bound `R`.
//! Such a model is marked as realized through `R`: its bases, and therefore
//! every rank computed from them, are exact in degrees `≤ R` only, and asking
//! for more is an [`HochschildError::InsufficientWindow`] error.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::galg::{Derivation, Element, FreeGradedAlgebra, GalgError, Generator, Monomial};
use crate::linalg::Matrix;
use crate::series::TruncatedSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HochschildError {
    #[error("unsupported algebra: generator `{name}` has odd degree {degree}; the closed form needs even generators")]
    UnsupportedAlgebra { name: String, degree: u32 },
    #[error("window too small: degree {needed} needed, model realized through degree {realized}")]
    InsufficientWindow { needed: u32, realized: u32 },
    #[error(transparent)]
    Algebra(#[from] GalgError),
}

pub type Result<T> = std::result::Result<T, HochschildError>;

#[derive(Clone, Debug)]
pub struct HHModel {
    base: FreeGradedAlgebra,
    hh: FreeGradedAlgebra,
    connes: Derivation,
    realized_through: Option<u32>,
}

/// One degree slice of a graded linear map: columns index
/// `basis(source, d)`, rows index `basis(target, d + shift)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMapSlice {
    pub source_degree: u32,
    pub matrix: Matrix,
}

impl LinearMapSlice {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn nullity(&self) -> usize {
        self.matrix.nullity()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedLinearMap {
    pub shift: i32,
    pub slices: Vec<LinearMapSlice>,
}

/// Per-degree dimensions of `HH` under `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeRow {
    pub degree: u32,
    pub hh: usize,
    /// `dim ker(B: HH_d → HH_{d+1})`
    pub kernel: usize,
    /// `dim (im B ∩ HH_d)`, the rank of `B` on `HH_{d-1}`
    pub image: usize,
    /// rank of `B` on `HH_d`
    pub rank: usize,
    pub de_rham: usize,
}

impl HHModel {
    /// Model exact in every degree. Fails on odd base generators.
    pub fn new(base: FreeGradedAlgebra) -> Result<Self> {
        Self::build(base, None)
    }

    /// Model whose base generators were instantiated only through degree
    /// `realized_through`.
    pub fn truncated(base: FreeGradedAlgebra, realized_through: u32) -> Result<Self> {
        Self::build(base, Some(realized_through))
    }

    fn build(base: FreeGradedAlgebra, realized_through: Option<u32>) -> Result<Self> {
        if let Some(g) = base.generators().iter().find(|g| g.is_odd()) {
            return Err(HochschildError::UnsupportedAlgebra {
                name: g.name.clone(),
                degree: g.degree,
            });
        }
        let n = base.generators().len();
        let mut gens: Vec<Generator> = base.generators().to_vec();
        for g in base.generators() {
            gens.push(Generator::new(format!("d{}", g.name), g.degree + 1)?);
        }
        let hh = FreeGradedAlgebra::new(gens)?;
        let images: Vec<Element> = (0..2 * n)
            .map(|i| {
                if i < n {
                    Element::from_monomial(hh.generator(n + i))
                } else {
                    Element::zero(&hh)
                }
            })
            .collect();
        let connes = Derivation::new(&hh, images, 1)?;
        Ok(Self {
            base,
            hh,
            connes,
            realized_through,
        })
    }

    pub fn base(&self) -> &FreeGradedAlgebra {
        &self.base
    }

    pub fn hh(&self) -> &FreeGradedAlgebra {
        &self.hh
    }

    pub fn connes_b(&self) -> &Derivation {
        &self.connes
    }

    pub fn realized_through(&self) -> Option<u32> {
        self.realized_through
    }

    fn ensure(&self, degree: u32) -> Result<()> {
        match self.realized_through {
            Some(realized) if degree > realized => Err(HochschildError::InsufficientWindow {
                needed: degree,
                realized,
            }),
            _ => Ok(()),
        }
    }

    /// Poincaré series of `HH`, `∏ (1 + t^{|x|+1}) / (1 - t^{|x|})`.
    pub fn hh_series(&self, cutoff: usize) -> Result<TruncatedSeries> {
        self.ensure(cutoff as u32)?;
        Ok(self.hh.poincare_series(cutoff))
    }

    pub fn basis(&self, degree: u32) -> Result<Vec<Monomial>> {
        self.ensure(degree)?;
        Ok(self.hh.basis(degree))
    }

    /// Matrix of `B: HH_d → HH_{d+1}` in canonical bases.
    pub fn b_matrix(&self, d: u32) -> Result<LinearMapSlice> {
        let source = self.basis(d)?;
        let target = self.basis(d + 1)?;
        Ok(LinearMapSlice {
            source_degree: d,
            matrix: self.operator_matrix(&source, &target)?,
        })
    }

    fn operator_matrix(&self, source: &[Monomial], target: &[Monomial]) -> Result<Matrix> {
        let index: HashMap<&Monomial, usize> =
            target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut matrix = Matrix::zeros(target.len(), source.len());
        for (j, m) in source.iter().enumerate() {
            let image = self.connes.apply(&self.hh, m)?;
            for (t, c) in image.terms() {
                let i = index[t];
                matrix.set(i, j, c.clone());
            }
        }
        Ok(matrix)
    }

    /// `B` on degrees `0..=through`.
    pub fn b_map(&self, through: u32) -> Result<GradedLinearMap> {
        let slices = (0..=through)
            .map(|d| self.b_matrix(d))
            .collect::<Result<_>>()?;
        Ok(GradedLinearMap { shift: 1, slices })
    }

    /// `(dim HH_d, rank B_d)` for `d = 0..=through`.
    fn dims_and_ranks(&self, through: u32) -> Result<Vec<(usize, usize)>> {
        self.ensure(through + 1)?;
        (0..=through)
            .map(|d| {
                let slice = self.b_matrix(d)?;
                Ok((slice.matrix.cols(), slice.rank()))
            })
            .collect()
    }

    /// Full per-degree report for `d = 0..=through`.
    pub fn degree_report(&self, through: u32) -> Result<Vec<DegreeRow>> {
        let dr = self.dims_and_ranks(through)?;
        Ok(dr
            .iter()
            .enumerate()
            .map(|(d, &(hh, rank))| {
                let kernel = hh - rank;
                let image = if d == 0 { 0 } else { dr[d - 1].1 };
                DegreeRow {
                    degree: d as u32,
                    hh,
                    kernel,
                    image,
                    rank,
                    de_rham: kernel - image,
                }
            })
            .collect())
    }

    pub fn kernel_dims(&self, through: u32) -> Result<Vec<usize>> {
        Ok(self
            .degree_report(through)?
            .iter()
            .map(|r| r.kernel)
            .collect())
    }

    /// `dim (im B ∩ HH_d)` for `d = 0..=through`.
    pub fn image_dims(&self, through: u32) -> Result<Vec<usize>> {
        Ok(self
            .degree_report(through)?
            .iter()
            .map(|r| r.image)
            .collect())
    }

    /// `rank(B: HH_d → HH_{d+1})` for `d = 0..=through`.
    pub fn rank_dims(&self, through: u32) -> Result<Vec<usize>> {
        Ok(self
            .degree_report(through)?
            .iter()
            .map(|r| r.rank)
            .collect())
    }

    /// `dim ker(B)/im(B)` per degree.
    pub fn derham_dims(&self, through: u32) -> Result<Vec<usize>> {
        Ok(self
            .degree_report(through)?
            .iter()
            .map(|r| r.de_rham)
            .collect())
    }

    /// Poincaré series of `ker(B)` from exact nullspace dimensions.
    pub fn kernel_series(&self, cutoff: usize) -> Result<TruncatedSeries> {
        let dims = self.kernel_dims(cutoff as u32)?;
        Ok(TruncatedSeries::from_dims(&dims, cutoff))
    }

    /// Positive-degree part of [`Self::kernel_series`]: the kernel of `B` on
    /// the relative term for the augmentation to `Q`.
    pub fn positive_kernel_series(&self, cutoff: usize) -> Result<TruncatedSeries> {
        Ok(self.kernel_series(cutoff)?.positive_part())
    }

    /// Kernel dimensions restricted to the fixed points of the involution that
    /// negates the listed base generators and their `d`-partners.
    ///
    /// `B` commutes with such an involution and the involution is diagonal on
    /// monomials, so this is the nullity of `B` on the `+1` monomials.
    pub fn fixed_kernel_dims(&self, through: u32, negated: &[usize]) -> Result<Vec<usize>> {
        self.ensure(through + 1)?;
        let n = self.base.generators().len();
        (0..=through)
            .map(|d| {
                let slice = self.b_matrix(d)?;
                let basis = self.hh.basis(d);
                let fixed: Vec<usize> = basis
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| {
                        negated
                            .iter()
                            .map(|&i| m.exponent(i) + m.exponent(n + i))
                            .sum::<u32>()
                            % 2
                            == 0
                    })
                    .map(|(j, _)| j)
                    .collect();
                Ok(slice.matrix.select_columns(&fixed).nullity())
            })
            .collect()
    }

    /// Builds the page `E² = Q[t] ⊗ HH_{>0}` on a finite window and takes
    /// homology with respect to `d²(t^i x) = t^{i+1} B(x)`.
    ///
    /// Entries are indexed by column `i` (the power of `t`, `0..=columns`) and
    /// total degree `n` (`1..=degrees`); the entry `(i, n)` is
    /// `t^i ⊗ HH_{n+2i}`. Needs the model realized through
    /// `degrees + 2 * columns + 2`.
    pub fn collapse_check(&self, degrees: u32, columns: u32) -> Result<CollapseReport> {
        self.ensure(degrees + 2 * columns + 2)?;
        let top = degrees + 2 * columns + 1;
        let slices: Vec<LinearMapSlice> =
            (0..=top).map(|q| self.b_matrix(q)).collect::<Result<_>>()?;

        // d² on the block t^i HH_q is B_q; d²∘d² is B_{q+1} B_q.
        let d2_squared_zero = slices
            .windows(2)
            .all(|w| w[1].matrix.mul(&w[0].matrix).is_zero());

        let ranks: Vec<usize> = slices.iter().map(LinearMapSlice::rank).collect();
        let mut e3 = Vec::with_capacity(columns as usize + 1);
        for i in 0..=columns {
            let mut column = Vec::with_capacity(degrees as usize);
            for n in 1..=degrees {
                let q = (n + 2 * i) as usize;
                let kernel = slices[q].matrix.cols() - ranks[q];
                // incoming from t^{i-1} HH_{q-1}, present for i ≥ 1 and q - 1 > 0
                let incoming = if i >= 1 && q >= 2 { ranks[q - 1] } else { 0 };
                column.push(kernel - incoming);
            }
            e3.push(column);
        }
        let kernel = self.kernel_dims(degrees)?;
        let positive_kernel: Vec<usize> = kernel[1..].to_vec();
        Ok(CollapseReport {
            degrees,
            columns,
            column_zero_matches_kernel: e3[0] == positive_kernel,
            higher_columns_vanish: e3[1..].iter().all(|c| c.iter().all(|&x| x == 0)),
            d2_squared_zero,
            e3,
            positive_kernel,
        })
    }

    /// Checks `dim im(B) = dim ker(B)` in each degree `1..=through`.
    pub fn im_equals_ker_positive(&self, through: u32) -> Result<ImKerReport> {
        let rows = self.degree_report(through)?;
        let per_degree = rows[1..]
            .iter()
            .map(|r| ImKerRow {
                degree: r.degree,
                kernel: r.kernel,
                image: r.image,
                equal: r.kernel == r.image,
            })
            .collect();
        Ok(ImKerReport { per_degree })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub degrees: u32,
    pub columns: u32,
    /// `e3[i][n - 1]` is the E³ dimension in column `i`, total degree `n`.
    pub e3: Vec<Vec<usize>>,
    pub positive_kernel: Vec<usize>,
    pub column_zero_matches_kernel: bool,
    pub higher_columns_vanish: bool,
    pub d2_squared_zero: bool,
}

impl CollapseReport {
    pub fn collapsed(&self) -> bool {
        self.column_zero_matches_kernel && self.higher_columns_vanish && self.d2_squared_zero
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImKerRow {
    pub degree: u32,
    pub kernel: usize,
    pub image: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImKerReport {
    pub per_degree: Vec<ImKerRow>,
}

impl ImKerReport {
    pub fn holds(&self) -> bool {
        self.per_degree.iter().all(|r| r.equal)
    }
}

/// One degree of the alternating-sum identity
/// `1 - (-1)^n k_n = h_0 - h_1 + ... + (-1)^{n-1} h_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerRow {
    pub degree: usize,
    pub lhs: i64,
    pub rhs: i64,
}

impl EulerRow {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluates the alternating-sum identity that ties kernel dimensions to
/// `HH` dimensions when de Rham homology is `Q` in degree zero.
pub fn euler_identity(hh_dims: &[usize], kernel_dims: &[usize]) -> Vec<EulerRow> {
    let mut partial = 0i64;
    let mut rows = Vec::with_capacity(kernel_dims.len());
    for (n, &k) in kernel_dims.iter().enumerate() {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        rows.push(EulerRow {
            degree: n,
            lhs: 1 - sign * k as i64,
            rhs: partial,
        });
        if let Some(&h) = hh_dims.get(n) {
            partial += sign * h as i64;
        }
    }
    rows
}

/// `(1 + t h(t)) / (1 + t)` expanded through `h`'s cutoff.
pub fn kernel_series_closed_form(hh: &TruncatedSeries) -> TruncatedSeries {
    let cutoff = hh.cutoff();
    let one = TruncatedSeries::one(cutoff);
    let one_plus_t = TruncatedSeries::from_integers([1, 1], cutoff);
    (&one + &hh.shift(1))
        .checked_div(&one_plus_t)
        .expect("1 + t is a unit")
}

/// TSV with columns `degree hh kernel image rank de_rham`.
pub fn degree_report_tsv(rows: &[DegreeRow]) -> String {
    let mut out = String::from("degree\thh\tkernel\timage\trank\tde_rham\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.degree, r.hh, r.kernel, r.image, r.rank, r.de_rham
        ));
    }
    out
}

/// Convenience: the polynomial algebra on named even generators.
pub fn polynomial_base(generators: &[(&str, u32)]) -> Result<FreeGradedAlgebra> {
    let gens = generators
        .iter()
        .map(|&(n, d)| Generator::new(n, d))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(FreeGradedAlgebra::new(gens)?)
}
