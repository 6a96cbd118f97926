//! Brute-force ground truth for sl₂: explicit representation matrices and
//! exact coinvariant ranks for genus-zero conformal blocks.
//!
//! Everything here works directly on `V₁ ⊗ ⋯ ⊗ V_n` with dense rational
//! vectors; nothing depends on the fusion fast path.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{int, rat, Matrix, Rational, Subspace};

/// Weight-basis matrices of the irreducible sl₂-module of highest weight `m`.
///
/// Basis `v_0, …, v_m` with `H v_j = (m − 2j) v_j`, `E v_j = (m − j + 1) v_{j−1}`,
/// `F v_j = (j + 1) v_{j+1}`. Column `j` is the image of `v_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMatrices {
    pub m: u32,
    pub e: Matrix,
    pub f: Matrix,
    pub h: Matrix,
}

impl RepMatrices {
    pub fn dim(&self) -> usize {
        self.m as usize + 1
    }

    /// Checks the sl₂ relations and the level witness `E^{m+1} = 0 ≠ E^m`.
    pub fn verify(&self) -> Result<()> {
        let two = int(2);
        let (e, f, h) = (&self.e, &self.f, &self.h);
        if h.commutator(e) != e.scale(&two) {
            return Err(Error::Invariant("[H,E] != 2E".into()));
        }
        if h.commutator(f) != f.scale(&-two) {
            return Err(Error::Invariant("[H,F] != -2F".into()));
        }
        if e.commutator(f) != *h {
            return Err(Error::Invariant("[E,F] != H".into()));
        }
        if !e.pow(self.m + 1).is_zero() || e.pow(self.m).is_zero() {
            return Err(Error::Invariant("E is not nilpotent of order m+1".into()));
        }
        Ok(())
    }

    /// Weight of basis vector `j`.
    pub fn weight(&self, j: usize) -> i64 {
        self.m as i64 - 2 * j as i64
    }

    /// Matrices of the basis `[E, F, H]` in that order.
    pub fn basis(&self) -> [&Matrix; 3] {
        [&self.e, &self.f, &self.h]
    }
}

pub fn sl2_irrep_matrices(m: u32) -> RepMatrices {
    let n = m as usize + 1;
    let mut e = Matrix::zeros(n, n);
    let mut f = Matrix::zeros(n, n);
    let mut h = Matrix::zeros(n, n);
    for j in 0..n {
        h[(j, j)] = int(m as i64 - 2 * j as i64);
        if j > 0 {
            e[(j - 1, j)] = int(m as i64 - j as i64 + 1);
        }
        if j + 1 < n {
            f[(j + 1, j)] = int(j as i64 + 1);
        }
    }
    RepMatrices { m, e, f, h }
}

/// Source of explicit representation matrices together with the Casimir
/// tensor `c = Σ coeff · X_a ⊗ X_b` in the chosen basis of 𝔤.
pub trait RepProvider {
    /// Matrices of a fixed basis of 𝔤 acting on the irreducible module `label`.
    fn generators(&self, label: u32) -> Vec<Matrix>;
    /// Terms `(a, b, coeff)` of the Casimir tensor.
    fn casimir_terms(&self) -> Vec<(usize, usize, Rational)>;
    /// Index of a highest-root vector in the generator list.
    fn highest_root_index(&self) -> usize;
    fn dual_coxeter(&self) -> u32;
    fn dim_algebra(&self) -> usize;
    /// Weight of each basis vector of the module `label`, used for grading.
    fn weights(&self, label: u32) -> Vec<i64>;
}

/// sl₂ with basis `(E, F, H)` and `c = E⊗F + F⊗E + ½ H⊗H`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sl2;

impl RepProvider for Sl2 {
    fn generators(&self, label: u32) -> Vec<Matrix> {
        let r = sl2_irrep_matrices(label);
        vec![r.e, r.f, r.h]
    }

    fn casimir_terms(&self) -> Vec<(usize, usize, Rational)> {
        vec![(0, 1, int(1)), (1, 0, int(1)), (2, 2, rat(1, 2))]
    }

    fn highest_root_index(&self) -> usize {
        0
    }

    fn dual_coxeter(&self) -> u32 {
        2
    }

    fn dim_algebra(&self) -> usize {
        3
    }

    fn weights(&self, label: u32) -> Vec<i64> {
        (0..=label as i64).map(|j| label as i64 - 2 * j).collect()
    }
}

/// `V₁ ⊗ ⋯ ⊗ V_n` with the first factor most significant.
#[derive(Debug, Clone)]
pub struct TensorSpace {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl TensorSpace {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        TensorSpace {
            dims: dims.to_vec(),
            strides,
            total: dims.iter().product(),
        }
    }

    pub fn dim(&self) -> usize {
        self.total
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    /// Index of factor `i` in the multi-index of basis vector `idx`.
    pub fn digit(&self, idx: usize, i: usize) -> usize {
        (idx / self.strides[i]) % self.dims[i]
    }

    pub fn unit(&self, idx: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.total];
        v[idx] = Rational::one();
        v
    }

    /// Applies `op` on factor `i`, identity elsewhere.
    pub fn apply(&self, i: usize, op: &Matrix, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.total];
        let s = self.strides[i];
        for (idx, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let d = self.digit(idx, i);
            let base = idx - d * s;
            for r in 0..self.dims[i] {
                let a = &op[(r, d)];
                if !a.is_zero() {
                    out[base + r * s] += a * x;
                }
            }
        }
        out
    }

    /// Dense matrix of `op` acting on factor `i`.
    pub fn factor_matrix(&self, i: usize, op: &Matrix) -> Matrix {
        let cols: Vec<Vec<Rational>> = (0..self.total).map(|c| self.apply(i, op, &self.unit(c))).collect();
        Matrix::from_columns(self.total, &cols)
    }
}

fn add_into(acc: &mut [Rational], v: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += b;
        }
    }
}

/// The tensor product of sl₂ irreducibles with its weight grading.
struct Sl2Tensor {
    reps: Vec<RepMatrices>,
    space: TensorSpace,
    weights: Vec<i64>,
}

impl Sl2Tensor {
    fn new(labels: &[u32]) -> Self {
        let reps: Vec<RepMatrices> = labels.iter().map(|&m| sl2_irrep_matrices(m)).collect();
        let dims: Vec<usize> = reps.iter().map(|r| r.dim()).collect();
        let space = TensorSpace::new(&dims);
        let weights = (0..space.dim())
            .map(|idx| (0..reps.len()).map(|i| reps[i].weight(space.digit(idx, i))).sum())
            .collect();
        Sl2Tensor { reps, space, weights }
    }

    fn indices_of_weight(&self, w: i64) -> Vec<usize> {
        (0..self.space.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    /// Diagonal action of a basis element of 𝔤 (0 = E, 1 = F, 2 = H).
    fn diagonal(&self, which: usize, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.dim()];
        for (i, r) in self.reps.iter().enumerate() {
            add_into(&mut out, &self.space.apply(i, r.basis()[which], v));
        }
        out
    }

    /// `Σ z_i E^{(i)}` applied to `v`.
    fn weighted_e(&self, z: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.dim()];
        for (i, r) in self.reps.iter().enumerate() {
            if z[i].is_zero() {
                continue;
            }
            let part = self.space.apply(i, &r.e, v);
            for (o, p) in out.iter_mut().zip(part) {
                if !p.is_zero() {
                    *o += &z[i] * p;
                }
            }
        }
        out
    }

    /// Weight-zero part of `g·V`: it determines `V/gV` because every nonzero
    /// weight space lies in `H·V`.
    fn weight_zero_relations(&self, zero_idx: &[usize]) -> Subspace {
        let restrict = |v: Vec<Rational>| -> Vec<Rational> { zero_idx.iter().map(|&i| v[i].clone()).collect() };
        let mut rel = Subspace::zero(zero_idx.len());
        for b in self.indices_of_weight(-2) {
            rel.insert(restrict(self.diagonal(0, &self.space.unit(b))));
        }
        for b in self.indices_of_weight(2) {
            rel.insert(restrict(self.diagonal(1, &self.space.unit(b))));
        }
        rel
    }
}

/// `dim (V₁ ⊗ ⋯ ⊗ V_n)_𝔤`.
pub fn classical_coinvariant_dim(labels: &[u32]) -> usize {
    let t = Sl2Tensor::new(labels);
    let zero = t.indices_of_weight(0);
    t.weight_zero_relations(&zero).codim()
}

/// Block dimensions of the three-point problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreePointRank {
    pub rank: usize,
    pub classical_rank: usize,
}

fn check_labels(level: u32, labels: &[u32]) -> Result<()> {
    for &m in labels {
        if m > level {
            return Err(Error::LabelOutsideAlphabet {
                label: vec![m as i64],
                level,
            });
        }
    }
    Ok(())
}

/// Dimension of the largest quotient of `V₁⊗V₂⊗V₃` killed by the diagonal
/// 𝔤-action and by every `E^p ⊗ E^q ⊗ E^r` with `p + q + r > ℓ`.
///
/// Works on the full tensor product without using the weight grading.
pub fn three_point_rank(level: u32, m1: u32, m2: u32, m3: u32) -> Result<ThreePointRank> {
    check_labels(level, &[m1, m2, m3])?;
    let t = Sl2Tensor::new(&[m1, m2, m3]);
    let n = t.space.dim();
    let mut rel = Subspace::zero(n);
    for b in 0..n {
        let u = t.space.unit(b);
        for which in 0..3 {
            rel.insert(t.diagonal(which, &u));
        }
    }
    let classical_rank = rel.codim();
    let epow: Vec<Vec<Matrix>> = t.reps.iter().map(|r| (0..=r.m).map(|p| r.e.pow(p)).collect()).collect();
    for p in 0..=m1 {
        for q in 0..=m2 {
            for r in 0..=m3 {
                if p + q + r <= level {
                    continue;
                }
                for b in 0..n {
                    let mut v = t.space.unit(b);
                    v = t.space.apply(0, &epow[0][p as usize], &v);
                    v = t.space.apply(1, &epow[1][q as usize], &v);
                    v = t.space.apply(2, &epow[2][r as usize], &v);
                    rel.insert(v);
                }
            }
        }
    }
    Ok(ThreePointRank {
        rank: rel.codim(),
        classical_rank,
    })
}

/// Labels at marked points of ℙ¹ for the genus-zero block problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinvariantProblem {
    pub level: u32,
    pub labels: Vec<u32>,
    pub points: Option<Vec<Rational>>,
}

impl CoinvariantProblem {
    pub fn new(level: u32, labels: Vec<u32>, points: Vec<Rational>) -> Self {
        CoinvariantProblem {
            level,
            labels,
            points: Some(points),
        }
    }

    fn validated_points(&self) -> Result<&[Rational]> {
        check_labels(self.level, &self.labels)?;
        let z = self
            .points
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("n-point problem needs marked points".into()))?;
        if z.len() != self.labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels but {} points",
                self.labels.len(),
                z.len()
            )));
        }
        if z.is_empty() {
            return Err(Error::InvalidArgument("at least one marked point is required".into()));
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if z[i] == z[j] {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
        Ok(z)
    }
}

/// Dimension of `(V₁ ⊗ ⋯ ⊗ V_n)_𝔤` modulo the image of `(Σ z_i E^{(i)})^{ℓ+1}`.
pub fn npoint_block_rank(problem: &CoinvariantProblem) -> Result<usize> {
    let z = problem.validated_points()?;
    let t = Sl2Tensor::new(&problem.labels);
    let zero = t.indices_of_weight(0);
    let mut rel = t.weight_zero_relations(&zero);
    let power = problem.level as i64 + 1;
    for b in t.indices_of_weight(-2 * power) {
        let mut v = t.space.unit(b);
        for _ in 0..power {
            v = t.weighted_e(z, &v);
        }
        rel.insert(zero.iter().map(|&i| v[i].clone()).collect());
    }
    Ok(rel.codim())
}

/// Whether adding a trivially labeled point at `extra` leaves the block rank unchanged.
pub fn propagation_check(level: u32, labels: &[u32], z: &[Rational], extra: &Rational) -> Result<bool> {
    let base = npoint_block_rank(&CoinvariantProblem::new(level, labels.to_vec(), z.to_vec()))?;
    let mut l2 = labels.to_vec();
    l2.push(0);
    let mut z2 = z.to_vec();
    z2.push(extra.clone());
    let grown = npoint_block_rank(&CoinvariantProblem::new(level, l2, z2))?;
    Ok(base == grown)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::sl2_fusion_rule;

    fn pts(z: &[i64]) -> Vec<Rational> {
        z.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn irrep_matrices() {
        let r0 = sl2_irrep_matrices(0);
        assert!(r0.e.is_zero() && r0.f.is_zero() && r0.h.is_zero());
        assert_eq!(r0.dim(), 1);
        let r1 = sl2_irrep_matrices(1);
        assert_eq!(r1.e, Matrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(r1.h, Matrix::from_i64(&[&[1, 0], &[0, -1]]));
        let r2 = sl2_irrep_matrices(2);
        assert_eq!(r2.h, Matrix::from_i64(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]));
        for m in 0..7 {
            sl2_irrep_matrices(m).verify().unwrap();
        }
    }

    #[test]
    fn casimir_tensor_is_2h_on_adjoint() {
        // Σ_κ ad(X_κ) ad(X^κ) on the 3-dim adjoint module equals 2ȟ = 4
        let g = Sl2.generators(2);
        let mut cas = Matrix::zeros(3, 3);
        for (a, b, c) in Sl2.casimir_terms() {
            cas = &cas + &(&g[a] * &g[b]).scale(&c);
        }
        assert_eq!(cas, Matrix::scalar(3, &int(4)));
        let g1 = Sl2.generators(1);
        let mut cas1 = Matrix::zeros(2, 2);
        for (a, b, c) in Sl2.casimir_terms() {
            cas1 = &cas1 + &(&g1[a] * &g1[b]).scale(&c);
        }
        assert_eq!(cas1, Matrix::scalar(2, &rat(3, 2)));
    }

    #[test]
    fn three_point_examples() {
        assert_eq!(three_point_rank(1, 1, 1, 0).unwrap().rank, 1);
        assert_eq!(three_point_rank(1, 1, 1, 1).unwrap().rank, 0);
        let r = three_point_rank(2, 2, 2, 2).unwrap();
        assert_eq!((r.rank, r.classical_rank), (0, 1));
        assert!(matches!(
            three_point_rank(1, 2, 0, 2),
            Err(Error::LabelOutsideAlphabet { .. })
        ));
    }

    #[test]
    fn three_point_matches_closed_form() {
        for l in 0..=4 {
            for a in 0..=l {
                for b in 0..=l {
                    for c in 0..=l {
                        let r = three_point_rank(l, a, b, c).unwrap().rank as u64;
                        assert_eq!(r, sl2_fusion_rule(l, a, b, c), "l={l} ({a},{b},{c})");
                    }
                }
            }
        }
    }

    #[test]
    fn npoint_examples() {
        assert_eq!(
            npoint_block_rank(&CoinvariantProblem::new(1, vec![1, 1], pts(&[1, -1]))).unwrap(),
            1
        );
        for z in [[1, -1], [5, -5], [2, 7]] {
            assert_eq!(
                npoint_block_rank(&CoinvariantProblem::new(1, vec![1, 0], pts(&z))).unwrap(),
                0
            );
        }
        let four = CoinvariantProblem::new(1, vec![1, 1, 1, 1], pts(&[3, 1, -1, -3]));
        assert_eq!(classical_coinvariant_dim(&[1, 1, 1, 1]), 2);
        assert_eq!(npoint_block_rank(&four).unwrap(), 1);
    }

    #[test]
    fn npoint_errors() {
        let coincident = CoinvariantProblem::new(1, vec![1, 1], pts(&[1, 1]));
        assert_eq!(npoint_block_rank(&coincident), Err(Error::CoincidentPoints));
        let big = CoinvariantProblem::new(1, vec![2, 2], pts(&[1, -1]));
        assert!(matches!(
            npoint_block_rank(&big),
            Err(Error::LabelOutsideAlphabet { .. })
        ));
    }

    #[test]
    fn propagation_examples() {
        assert!(propagation_check(1, &[1, 1], &pts(&[1, -1]), &int(0)).unwrap());
        for z in [[1, -1], [3, -2], [4, -4]] {
            assert!(propagation_check(2, &[2, 2], &pts(&z), &int(9)).unwrap());
        }
        let z = [rat(1, 2), rat(-7, 3), int(2)];
        assert!(propagation_check(2, &[1, 1, 2], &z, &rat(5, 4)).unwrap());
        // the disk: a single trivially labeled point
        let disk = CoinvariantProblem::new(1, vec![0], pts(&[0]));
        assert_eq!(npoint_block_rank(&disk).unwrap(), 1);
    }

    #[test]
    fn three_points_need_no_all_z_condition() {
        // at three points the single-z quotient already equals the all-z one
        for l in 0..=3 {
            for a in 0..=l {
                for b in 0..=l {
                    for c in 0..=l {
                        let fixed =
                            npoint_block_rank(&CoinvariantProblem::new(l, vec![a, b, c], pts(&[3, -1, -2]))).unwrap();
                        assert_eq!(fixed, three_point_rank(l, a, b, c).unwrap().rank, "l={l} ({a},{b},{c})");
                    }
                }
            }
        }
    }
}
