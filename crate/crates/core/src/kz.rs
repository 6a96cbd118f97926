//! The Knizhnik–Zamolodchikov connection on genus-zero blocks of sl₂.
//!
//! On the trivial bundle with fibre `(V₁ ⊗ ⋯ ⊗ V_n)_𝔤` the connection form is
//! `Ω = Σ_{i<j} A_{ij} d(z_i − z_j)/(z_i − z_j)` with `A_{ij} = −c^{(ij)}/(ℓ + ȟ)`.
//! Everything here is exact except [`parallel_transport`], which integrates
//! `Y' = Ω(ż) Y` numerically.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{int, Matrix, Rational, Subspace};
use crate::oracle::{sl2_irrep_matrices, RepMatrices, TensorSpace};

const DUAL_COXETER: i64 = 2;

struct Tensor {
    reps: Vec<RepMatrices>,
    space: TensorSpace,
    zero: Vec<usize>,
    zero_pos: BTreeMap<usize, usize>,
}

impl Tensor {
    fn new(labels: &[u32]) -> Self {
        let reps: Vec<RepMatrices> = labels.iter().map(|&m| sl2_irrep_matrices(m)).collect();
        let dims: Vec<usize> = reps.iter().map(RepMatrices::dim).collect();
        let space = TensorSpace::new(&dims);
        let zero: Vec<usize> = (0..space.dim())
            .filter(|&i| Self::weight_of(&reps, &space, i) == 0)
            .collect();
        let zero_pos = zero.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        Tensor {
            reps,
            space,
            zero,
            zero_pos,
        }
    }

    fn weight_of(reps: &[RepMatrices], space: &TensorSpace, idx: usize) -> i64 {
        (0..reps.len()).map(|i| reps[i].weight(space.digit(idx, i))).sum()
    }

    fn weight(&self, idx: usize) -> i64 {
        Self::weight_of(&self.reps, &self.space, idx)
    }

    fn pair(&self, i: usize, j: usize, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.dim()];
        let (ri, rj) = (&self.reps[i], &self.reps[j]);
        let terms = [
            (&ri.e, &rj.f, int(1)),
            (&ri.f, &rj.e, int(1)),
            (&ri.h, &rj.h, crate::linalg::rat(1, 2)),
        ];
        for (x, y, c) in terms {
            let w = self.space.apply(i, x, &self.space.apply(j, y, v));
            for (o, a) in out.iter_mut().zip(w) {
                if !a.is_zero() {
                    *o += &c * a;
                }
            }
        }
        out
    }

    fn diagonal(&self, which: usize, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.dim()];
        for (i, r) in self.reps.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.space.apply(i, r.basis()[which], v)) {
                if !a.is_zero() {
                    *o += a;
                }
            }
        }
        out
    }

    fn restrict(&self, v: &[Rational]) -> Vec<Rational> {
        self.zero.iter().map(|&i| v[i].clone()).collect()
    }

    /// `𝔤V ∩ V_0`, which determines `V/𝔤V ≅ V_0/(𝔤V)_0`.
    fn relations(&self) -> Subspace {
        let mut rel = Subspace::zero(self.zero.len());
        for b in 0..self.space.dim() {
            let which = match self.weight(b) {
                -2 => 0,
                2 => 1,
                _ => continue,
            };
            rel.insert(self.restrict(&self.diagonal(which, &self.space.unit(b))));
        }
        rel
    }
}

fn check_labels(labels: &[u32]) -> Result<()> {
    if labels.len() < 2 {
        return Err(Error::InvalidArgument("at least two marked points are required".into()));
    }
    Ok(())
}

/// `c^{(ij)} = Σ_κ X_κ^{(i)} X^{κ(j)}` on `V₁ ⊗ ⋯ ⊗ V_n` (0-based factors).
pub fn casimir_pair_matrix(labels: &[u32], i: usize, j: usize) -> Result<Matrix> {
    let n = labels.len();
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidArgument(format!(
            "pair ({i},{j}) invalid for {n} factors"
        )));
    }
    let t = Tensor::new(labels);
    let cols: Vec<Vec<Rational>> = (0..t.space.dim()).map(|c| t.pair(i, j, &t.space.unit(c))).collect();
    Ok(Matrix::from_columns(t.space.dim(), &cols))
}

/// Connection matrices on the classical coinvariants `(V₁ ⊗ ⋯ ⊗ V_n)_𝔤`.
#[derive(Debug, Clone)]
pub struct KzSystem {
    level: u32,
    labels: Vec<u32>,
    matrices: BTreeMap<(usize, usize), Matrix>,
    projection: Matrix,
    representatives: Vec<usize>,
}

/// Builds the KZ connection matrices for sl₂ labels at level `ℓ`.
pub fn kz_system(level: u32, labels: &[u32]) -> Result<KzSystem> {
    check_labels(labels)?;
    if let Some(&m) = labels.iter().find(|&&m| m > level) {
        return Err(Error::LabelOutsideAlphabet {
            label: vec![m as i64],
            level,
        });
    }
    let t = Tensor::new(labels);
    let rel = t.relations();
    let comp = rel.complement_indices();
    let k = comp.len();
    let scale = -Rational::new(1.into(), (level as i64 + DUAL_COXETER).into());
    let mut matrices = BTreeMap::new();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            let cols: Vec<Vec<Rational>> = comp
                .iter()
                .map(|&c| {
                    let img = t.pair(i, j, &t.space.unit(t.zero[c]));
                    rel.quotient_coords(&t.restrict(&img))
                        .into_iter()
                        .map(|x| x * &scale)
                        .collect()
                })
                .collect();
            matrices.insert((i, j), Matrix::from_columns(k, &cols));
        }
    }
    let mut projection = Matrix::zeros(k, t.space.dim());
    for idx in 0..t.space.dim() {
        if let Some(&p) = t.zero_pos.get(&idx) {
            let mut e = vec![Rational::zero(); t.zero.len()];
            e[p] = int(1);
            for (r, x) in rel.quotient_coords(&e).into_iter().enumerate() {
                projection[(r, idx)] = x;
            }
        }
    }
    Ok(KzSystem {
        level,
        labels: labels.to_vec(),
        matrices,
        projection,
        representatives: comp.iter().map(|&c| t.zero[c]).collect(),
    })
}

impl KzSystem {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn points(&self) -> usize {
        self.labels.len()
    }

    /// Dimension of the coinvariant space.
    pub fn rank(&self) -> usize {
        self.projection.rows()
    }

    /// `A_{ij}`, symmetric in `i` and `j`.
    pub fn matrix(&self, i: usize, j: usize) -> &Matrix {
        let key = if i < j { (i, j) } else { (j, i) };
        &self.matrices[&key]
    }

    pub fn matrices(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.matrices
    }

    /// Map from `V₁ ⊗ ⋯ ⊗ V_n` onto coinvariant coordinates.
    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    /// `Ω(∂/∂z_k) = Σ_{j≠k} A_{kj}/(z_k − z_j)` at a rational point.
    pub fn connection_component(&self, z: &[Rational], k: usize) -> Result<Matrix> {
        self.check_points(z)?;
        let r = self.rank();
        let mut out = Matrix::zeros(r, r);
        for j in 0..self.points() {
            if j != k {
                let w = (&z[k] - &z[j]).recip();
                out = &out + &self.matrix(k, j).scale(&w);
            }
        }
        Ok(out)
    }

    fn check_points(&self, z: &[Rational]) -> Result<()> {
        if z.len() != self.points() {
            return Err(Error::InvalidArgument(format!(
                "{} points for {} labels",
                z.len(),
                self.points()
            )));
        }
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                if z[i] == z[j] {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
        Ok(())
    }

    /// `Σ_k Ω(∂/∂z_k)` at `z`, the connection on the translation vector field.
    pub fn translation_contraction(&self, z: &[Rational]) -> Result<Matrix> {
        let r = self.rank();
        let mut out = Matrix::zeros(r, r);
        for k in 0..self.points() {
            out = &out + &self.connection_component(z, k)?;
        }
        Ok(out)
    }

    /// Classes of `(Σ z_i E^{(i)})^{ℓ+1} V` in coinvariant coordinates.
    fn truncation_span(&self, t: &Tensor, z: &[Rational], power: u32, lead: Option<usize>) -> Vec<Vec<Rational>> {
        let push = |v: &[Rational]| -> Vec<Rational> {
            let mut v = v.to_vec();
            for _ in 0..power {
                let mut next = vec![Rational::zero(); t.space.dim()];
                for (i, r) in t.reps.iter().enumerate() {
                    if z[i].is_zero() {
                        continue;
                    }
                    for (o, a) in next.iter_mut().zip(t.space.apply(i, &r.e, &v)) {
                        if !a.is_zero() {
                            *o += &z[i] * a;
                        }
                    }
                }
                v = next;
            }
            v
        };
        let full = self.level as i64 + 1;
        (0..t.space.dim())
            .filter(|&b| t.weight(b) == -2 * full)
            .map(|b| {
                let mut v = push(&t.space.unit(b));
                if let Some(k) = lead {
                    v = t.space.apply(k, &t.reps[k].e, &v);
                    v.iter_mut().for_each(|x| *x *= int(full));
                }
                self.projection.mul_vec(&v)
            })
            .collect()
    }

    /// Whether `∇ = d − Ω` preserves the level-truncation subbundle
    /// `(Σ z_i E^{(i)})^{ℓ+1} V` of the coinvariants at the point `z`.
    pub fn truncation_compatible(&self, z: &[Rational]) -> Result<bool> {
        self.check_points(z)?;
        let t = Tensor::new(&self.labels);
        let full = self.level + 1;
        let sections = self.truncation_span(&t, z, full, None);
        let span = Subspace::spanned_by(self.rank(), sections.iter().cloned());
        for k in 0..self.points() {
            let omega = self.connection_component(z, k)?;
            let derivs = self.truncation_span(&t, z, full - 1, Some(k));
            for (s, ds) in sections.iter().zip(&derivs) {
                let os = omega.mul_vec(s);
                let cov: Vec<Rational> = ds.iter().zip(&os).map(|(a, b)| a - b).collect();
                if !span.contains(&cov) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Indices in `V₁ ⊗ ⋯ ⊗ V_n` of the basis vectors representing the coinvariant basis.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }
}

/// Exact flatness: the infinitesimal braid relations
/// `[A_{ij}, A_{ik} + A_{jk}] = 0` and `[A_{ij}, A_{kl}] = 0`.
pub fn flatness_check(system: &KzSystem) -> bool {
    let n = system.points();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let a = system.matrix(i, j);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let s = system.matrix(i, k) + system.matrix(j, k);
                if !a.commutator(&s).is_zero() {
                    return false;
                }
                for l in 0..n {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    if !a.commutator(system.matrix(k, l)).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Piecewise-linear path of configurations: `points[s][i]` is `z_i` at vertex `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub points: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub closed: bool,
}

impl Path {
    fn vertices(&self) -> Vec<Vec<Complex64>> {
        let mut v: Vec<Vec<Complex64>> = self
            .points
            .iter()
            .map(|c| c.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        if self.closed && !v.is_empty() {
            v.push(v[0].clone());
        }
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportResult {
    /// Row-major `[re, im]` entries.
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub steps: usize,
    pub segments: usize,
    pub error_estimate: f64,
    pub converged: bool,
}

impl TransportResult {
    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&[a, b]| Complex64::new(a, b)).collect())
            .collect()
    }
}

type CMat = Vec<Vec<Complex64>>;

fn cmat_identity(n: usize) -> CMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Complex64::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let x = a[i][k];
            if x == Complex64::zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * bk[j];
            }
        }
    }
    out
}

fn cmat_axpy(y: &CMat, s: Complex64, x: &CMat) -> CMat {
    y.iter()
        .zip(x)
        .map(|(yr, xr)| yr.iter().zip(xr).map(|(a, b)| a + s * b).collect())
        .collect()
}

pub(crate) fn cmat_max_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

/// Smallest `|a + s b|` for `s ∈ [0, 1]`.
fn segment_distance(a: Complex64, b: Complex64) -> f64 {
    let bb = b.norm_sqr();
    let s = if bb == 0.0 {
        0.0
    } else {
        (-(a.conj() * b).re / bb).clamp(0.0, 1.0)
    };
    (a + b * s).norm()
}

struct Integrator {
    rank: usize,
    pairs: Vec<((usize, usize), CMat)>,
}

impl Integrator {
    fn new(system: &KzSystem) -> Self {
        let pairs = system
            .matrices
            .iter()
            .map(|(&k, m)| {
                let f = m.to_f64();
                (
                    k,
                    f.iter()
                        .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                        .collect(),
                )
            })
            .collect();
        Integrator {
            rank: system.rank(),
            pairs,
        }
    }

    /// `Ω(ż)` at `z0 + s·dz`.
    fn field(&self, z0: &[Complex64], dz: &[Complex64], s: f64) -> CMat {
        let mut out = vec![vec![Complex64::zero(); self.rank]; self.rank];
        for ((i, j), a) in &self.pairs {
            let zi = z0[*i] + dz[*i] * s;
            let zj = z0[*j] + dz[*j] * s;
            let w = (dz[*i] - dz[*j]) / (zi - zj);
            out = cmat_axpy(&out, w, a);
        }
        out
    }

    fn run(&self, verts: &[Vec<Complex64>], per_segment: usize) -> CMat {
        let mut y = cmat_identity(self.rank);
        let h = 1.0 / per_segment as f64;
        for seg in verts.windows(2) {
            let z0 = &seg[0];
            let dz: Vec<Complex64> = seg[1].iter().zip(z0).map(|(b, a)| b - a).collect();
            for step in 0..per_segment {
                let s = step as f64 * h;
                let hc = Complex64::new(h, 0.0);
                let k1 = cmat_mul(&self.field(z0, &dz, s), &y);
                let y2 = cmat_axpy(&y, hc * 0.5, &k1);
                let k2 = cmat_mul(&self.field(z0, &dz, s + h / 2.0), &y2);
                let y3 = cmat_axpy(&y, hc * 0.5, &k2);
                let k3 = cmat_mul(&self.field(z0, &dz, s + h / 2.0), &y3);
                let y4 = cmat_axpy(&y, hc, &k3);
                let k4 = cmat_mul(&self.field(z0, &dz, s + h), &y4);
                let mut inc = cmat_axpy(&k1, Complex64::new(2.0, 0.0), &k2);
                inc = cmat_axpy(&inc, Complex64::new(2.0, 0.0), &k3);
                inc = cmat_axpy(&inc, Complex64::new(1.0, 0.0), &k4);
                y = cmat_axpy(&y, hc / 6.0, &inc);
            }
        }
        y
    }
}

/// Tolerance on the step-halving estimate below which a transport counts as converged.
pub const TRANSPORT_TOLERANCE: f64 = 1e-8;

fn validated_vertices(system: &KzSystem, path: &Path, steps: usize) -> Result<Vec<Vec<Complex64>>> {
    if steps < 100 {
        return Err(Error::InvalidArgument(format!(
            "at least 100 steps are required, got {steps}"
        )));
    }
    let verts = path.vertices();
    if verts.is_empty() {
        return Err(Error::InvalidArgument("path has no points".into()));
    }
    if let Some(bad) = verts.iter().find(|c| c.len() != system.points()) {
        return Err(Error::InvalidArgument(format!(
            "configuration has {} points, system has {}",
            bad.len(),
            system.points()
        )));
    }
    let scale = verts.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
    let eps = 1e-9 * scale;
    let n = system.points();
    let mut segs: Vec<(&Vec<Complex64>, &Vec<Complex64>)> = verts.windows(2).map(|w| (&w[0], &w[1])).collect();
    if verts.len() == 1 {
        segs.push((&verts[0], &verts[0]));
    }
    for (a, b) in segs {
        for i in 0..n {
            for j in i + 1..n {
                let d0 = a[i] - a[j];
                let d1 = (b[i] - b[j]) - d0;
                if segment_distance(d0, d1) <= eps {
                    return Err(Error::PathOnDiagonal { i, j });
                }
            }
        }
    }
    Ok(verts)
}

fn transport_with(system: &KzSystem, verts: &[Vec<Complex64>], steps: usize) -> CMat {
    let segments = verts.len().saturating_sub(1).max(1);
    let per = steps.div_ceil(segments);
    Integrator::new(system).run(verts, per)
}

/// RK4 transport of `Y' = Ω(ż) Y` along `path` with `steps` total steps.
pub fn parallel_transport(system: &KzSystem, path: &Path, steps: usize) -> Result<TransportResult> {
    let verts = validated_vertices(system, path, steps)?;
    let fine = transport_with(system, &verts, steps);
    let coarse = transport_with(system, &verts, steps / 2);
    // Richardson estimate for a fourth-order method
    let error_estimate = cmat_max_diff(&fine, &coarse) / 15.0;
    let segments = verts.len().saturating_sub(1).max(1);
    Ok(TransportResult {
        matrix: fine.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        steps: steps.div_ceil(segments) * segments,
        segments,
        error_estimate,
        converged: error_estimate <= TRANSPORT_TOLERANCE,
    })
}

/// `log₂(|Y_{N/2} − Y_N| / |Y_N − Y_{2N}|)`, the observed order of convergence.
pub fn convergence_order(system: &KzSystem, path: &Path, steps: usize) -> Result<f64> {
    let verts = validated_vertices(system, path, steps)?;
    let a = transport_with(system, &verts, steps / 2);
    let b = transport_with(system, &verts, steps);
    let c = transport_with(system, &verts, steps * 2);
    Ok((cmat_max_diff(&a, &b) / cmat_max_diff(&b, &c)).log2())
}
