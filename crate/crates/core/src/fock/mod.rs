//! Truncated graded modules: the oscillator Fock space, induced affine
//! modules for sl₂ and their integrable quotients.
//!
//! Every operator is built by applying an exact action to basis vectors of
//! the untruncated module, so a truncated matrix is wrong only where its
//! output leaves the truncation. Each [`GradedOperator`] records the source
//! degrees on which it is exact, and identities are only checked there.

mod affine;
mod gluing;
mod oscillator;

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};

pub use affine::{
    annihilator_quotient_dims, check_l0_spectrum, check_sugawara_bracket, check_sugawara_derivation, conformal_weight,
    induced_module, integrable_quotient, sugawara_central_charge, sugawara_op, AffineRep, InducedModule,
    IntegrableQuotient, Sl2Gen,
};
pub use gluing::{gluing_tensor, GluingTensorSeries};
pub use oscillator::{check_virasoro_bracket, oscillator_basis, oscillator_op, virasoro_op};

/// One creation mode `X_κ t^{−k}`, stored as `(k, κ)`.
pub type Mode = (u32, u8);

/// A PBW monomial `X_{κ_1} t^{−k_1} ⋯ X_{κ_r} t^{−k_r} ⊗ v` with modes in
/// non-increasing order. For the oscillator `κ = 0` and `v = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub modes: Vec<Mode>,
    pub v: usize,
}

impl Monomial {
    pub fn vacuum(v: usize) -> Self {
        Monomial { modes: Vec::new(), v }
    }

    pub fn degree(&self) -> usize {
        self.modes.iter().map(|&(k, _)| k as usize).sum()
    }

    /// The monomial with `m` multiplied on the left, kept canonical.
    pub fn with_mode(&self, m: Mode) -> Self {
        let pos = self.modes.iter().position(|&x| x <= m).unwrap_or(self.modes.len());
        let mut modes = self.modes.clone();
        modes.insert(pos, m);
        Monomial { modes, v: self.v }
    }
}

/// Finite linear combination of monomials.
pub type SparseVec = HashMap<Monomial, Rational>;

pub(crate) fn axpy(acc: &mut SparseVec, c: &Rational, v: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (m, x) in v {
        let e = acc.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c * x;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BasisKind {
    Oscillator,
    InducedAffine { level: u32, mu: u32 },
    IntegrableQuotient { level: u32, mu: u32 },
}

/// Monomial basis of a graded module, truncated at `degree`.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    kind: BasisKind,
    degree: usize,
    pieces: Vec<Vec<Monomial>>,
    index: HashMap<Monomial, usize>,
}

impl GradedBasis {
    pub(crate) fn new(kind: BasisKind, pieces: Vec<Vec<Monomial>>) -> Self {
        let mut index = HashMap::new();
        for piece in &pieces {
            for (i, m) in piece.iter().enumerate() {
                index.insert(m.clone(), i);
            }
        }
        GradedBasis {
            kind,
            degree: pieces.len() - 1,
            pieces,
            index,
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn piece(&self, n: usize) -> &[Monomial] {
        &self.pieces[n]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.pieces.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(Vec::len).sum()
    }

    /// Position of `m` inside its degree piece.
    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Source degrees `lo..=hi` on which a truncated operator is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: usize,
    pub hi: usize,
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A degree-homogeneous operator on a truncated graded module.
///
/// `blocks[n]` maps the degree-`n` piece to the degree-`n + shift` piece, and
/// has zero rows when that degree lies outside the truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    dims: Vec<usize>,
    shift: i64,
    blocks: Vec<Matrix>,
    window: Window,
}

impl GradedOperator {
    fn target_dim(dims: &[usize], n: usize, shift: i64) -> usize {
        let t = n as i64 + shift;
        if t < 0 || t as usize >= dims.len() {
            0
        } else {
            dims[t as usize]
        }
    }

    /// Exact window for an operator of degree change `shift` built from an exact
    /// action: outputs must stay within the truncation.
    pub(crate) fn natural_window(degree: usize, shift: i64) -> Result<Window> {
        let hi = degree as i64 - shift.max(0);
        if hi < 0 {
            return Err(Error::EmptyWindow(format!(
                "shift {shift} leaves the degree-{degree} truncation"
            )));
        }
        Ok(Window {
            lo: 0,
            hi: (hi as usize).min(degree),
        })
    }

    pub(crate) fn from_blocks(dims: Vec<usize>, shift: i64, blocks: Vec<Matrix>, window: Window) -> Self {
        debug_assert_eq!(blocks.len(), dims.len());
        GradedOperator {
            dims,
            shift,
            blocks,
            window,
        }
    }

    /// Builds the operator column by column from `apply(n, i)`, the image of
    /// basis vector `i` of degree `n` as coordinates in degree `n + shift`.
    pub(crate) fn from_action(
        dims: &[usize],
        shift: i64,
        window: Window,
        mut apply: impl FnMut(usize, usize) -> Vec<Rational>,
    ) -> Self {
        let blocks = (0..dims.len())
            .map(|n| {
                let rows = Self::target_dim(dims, n, shift);
                if rows == 0 {
                    return Matrix::zeros(0, dims[n]);
                }
                let cols: Vec<Vec<Rational>> = (0..dims[n]).map(|i| apply(n, i)).collect();
                Matrix::from_columns(rows, &cols)
            })
            .collect();
        GradedOperator::from_blocks(dims.to_vec(), shift, blocks, window)
    }

    pub fn identity(dims: &[usize]) -> Self {
        let blocks = dims.iter().map(|&d| Matrix::identity(d)).collect();
        GradedOperator::from_blocks(
            dims.to_vec(),
            0,
            blocks,
            Window {
                lo: 0,
                hi: dims.len() - 1,
            },
        )
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The block acting on degree `n`.
    pub fn block(&self, n: usize) -> &Matrix {
        &self.blocks[n]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedOperator) -> Result<GradedOperator> {
        assert_eq!(self.dims, other.dims, "operators act on different modules");
        let shift = self.shift + other.shift;
        // lower degrees than the truncation start are exact zeros, so only the
        // upper end of the outer window constrains the inner output
        let hi = (other.window.hi as i64).min(self.window.hi as i64 - other.shift);
        let lo = other.window.lo;
        if hi < lo as i64 {
            return Err(Error::EmptyWindow("composition has no exact source degree".into()));
        }
        let blocks = (0..self.dims.len())
            .map(|n| {
                let mid = n as i64 + other.shift;
                let rows = Self::target_dim(&self.dims, n, shift);
                if mid < 0 || mid as usize >= self.dims.len() || rows == 0 {
                    Matrix::zeros(rows, self.dims[n])
                } else {
                    &self.blocks[mid as usize] * &other.blocks[n]
                }
            })
            .collect();
        Ok(GradedOperator::from_blocks(
            self.dims.clone(),
            shift,
            blocks,
            Window { lo, hi: hi as usize },
        ))
    }

    fn combine(&self, other: &GradedOperator, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<GradedOperator> {
        assert_eq!(self.dims, other.dims, "operators act on different modules");
        if self.shift != other.shift {
            return Err(Error::InvalidArgument(format!(
                "cannot add operators of degree {} and {}",
                self.shift, other.shift
            )));
        }
        let lo = self.window.lo.max(other.window.lo);
        let hi = self.window.hi.min(other.window.hi);
        if hi < lo {
            return Err(Error::EmptyWindow("sum has no common exact degree".into()));
        }
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Ok(GradedOperator::from_blocks(
            self.dims.clone(),
            self.shift,
            blocks,
            Window { lo, hi },
        ))
    }

    pub fn add(&self, other: &GradedOperator) -> Result<GradedOperator> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GradedOperator) -> Result<GradedOperator> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Rational) -> GradedOperator {
        GradedOperator {
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &GradedOperator) -> Result<GradedOperator> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Largest absolute entry over the source degrees of the window.
    pub fn residual_norm(&self) -> Rational {
        (self.window.lo..=self.window.hi)
            .map(|n| self.blocks[n].max_abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn is_zero_on_window(&self) -> bool {
        (self.window.lo..=self.window.hi).all(|n| self.blocks[n].is_zero())
    }

    /// The full matrix on the truncation, in degree-ordered coordinates.
    pub fn to_dense(&self) -> Matrix {
        let offsets: Vec<usize> = self
            .dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let total: usize = self.dims.iter().sum();
        let mut out = Matrix::zeros(total, total);
        for (n, b) in self.blocks.iter().enumerate() {
            let t = n as i64 + self.shift;
            if b.rows() == 0 {
                continue;
            }
            let t = t as usize;
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out[(offsets[t] + r, offsets[n] + c)] = b[(r, c)].clone();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_insertion_stays_canonical() {
        let m = Monomial {
            modes: vec![(3, 0), (1, 2), (1, 0)],
            v: 0,
        };
        assert_eq!(m.with_mode((2, 1)).modes, vec![(3, 0), (2, 1), (1, 2), (1, 0)]);
        assert_eq!(m.with_mode((1, 2)).modes, vec![(3, 0), (1, 2), (1, 2), (1, 0)]);
        assert_eq!(m.with_mode((4, 0)).modes[0], (4, 0));
        assert_eq!(m.with_mode((1, 0)).degree(), 6);
    }

    #[test]
    fn windows_compose() {
        assert_eq!(GradedOperator::natural_window(6, 2).unwrap(), Window { lo: 0, hi: 4 });
        assert_eq!(GradedOperator::natural_window(6, -3).unwrap(), Window { lo: 0, hi: 6 });
        assert!(GradedOperator::natural_window(2, 3).is_err());
    }
}
