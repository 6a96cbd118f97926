//! Root systems, weights and finite-dimensional representation theory of
//! simple Lie algebras.
//!
//! Weights are integer vectors of coefficients on the fundamental weights.
//! The invariant form is normalized so that long roots have squared length 2;
//! it is stored as an integer Gram matrix over a common denominator so that
//! every pairing is exact.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{int, rat, Matrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }
}

/// An integral weight in fundamental-weight coordinates.
pub type Weight = Vec<i64>;

/// An integral dominant weight: all fundamental-weight coordinates are ≥ 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DominantWeight(Vec<i64>);

impl DominantWeight {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.iter().any(|&c| c < 0) {
            return Err(Error::NonDominant(coords));
        }
        Ok(DominantWeight(coords))
    }

    pub fn zero(rank: usize) -> Self {
        DominantWeight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl TryFrom<Vec<i64>> for DominantWeight {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        DominantWeight::new(v)
    }
}

impl From<DominantWeight> for Vec<i64> {
    fn from(w: DominantWeight) -> Vec<i64> {
        w.0
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Multiplicities of irreducible summands in a tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorDecomposition {
    pub terms: BTreeMap<DominantWeight, u64>,
}

impl TensorDecomposition {
    pub fn multiplicity(&self, w: &DominantWeight) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    series: Series,
    rank: usize,
    /// `cartan[i][j] = ⟨α_i^∨, α_j⟩`; column `j` is `α_j` in fundamental coordinates.
    cartan: Vec<Vec<i64>>,
    /// `(ω_i, ω_j) = form_num[i][j] / form_den`.
    form_num: Vec<Vec<i64>>,
    form_den: i64,
    /// Squared lengths of the simple roots times `form_den`.
    simple_len2: Vec<i64>,
    /// Inverse of the Cartan matrix, mapping fundamental to simple-root coordinates.
    to_simple: Matrix,
    positive_roots: Vec<Weight>,
    highest_root: Weight,
    rho: Weight,
    comarks: Vec<i64>,
    dual_coxeter: u32,
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series && self.rank == other.rank
    }
}

impl Eq for RootSystem {}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl FromStr for RootSystem {
    type Err = Error;

    /// Parses names such as `"A1"`, `"e8"` or `"G2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = chars
            .next()
            .and_then(Series::from_letter)
            .ok_or_else(|| Error::UnknownAlgebra(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::UnknownAlgebra(s.to_string()))?;
        RootSystem::new(series, rank)
    }
}

/// Gram matrix of the simple roots with long roots of squared length 2.
fn simple_root_gram(series: Series, rank: usize) -> Result<Vec<Vec<Rational>>> {
    let bad = |reason: &str| Error::InvalidRootSystem {
        series: series.letter(),
        rank,
        reason: reason.to_string(),
    };
    let min = match series {
        Series::A => 1,
        Series::B | Series::C => 2,
        Series::D => 4,
        Series::E => 6,
        Series::F => 4,
        Series::G => 2,
    };
    if rank < min {
        return Err(bad(&format!("series {} requires rank >= {min}", series.letter())));
    }
    match series {
        Series::E if rank > 8 => return Err(bad("series E exists only for ranks 6, 7, 8")),
        Series::F if rank != 4 => return Err(bad("series F exists only for rank 4")),
        Series::G if rank != 2 => return Err(bad("series G exists only for rank 2")),
        _ => {}
    }
    let n = rank;
    let mut b = vec![vec![Rational::zero(); n]; n];
    let link = |b: &mut Vec<Vec<Rational>>, i: usize, j: usize, v: Rational| {
        b[i][j] = v.clone();
        b[j][i] = v;
    };
    match series {
        Series::A | Series::D | Series::E => {
            for (i, row) in b.iter_mut().enumerate() {
                row[i] = int(2);
            }
            match series {
                Series::A => {
                    for i in 0..n - 1 {
                        link(&mut b, i, i + 1, int(-1));
                    }
                }
                Series::D => {
                    for i in 0..n - 2 {
                        link(&mut b, i, i + 1, int(-1));
                    }
                    link(&mut b, n - 3, n - 1, int(-1));
                }
                _ => {
                    // Bourbaki numbering: 1-3-4-5-..., with 2 attached to 4.
                    link(&mut b, 0, 2, int(-1));
                    link(&mut b, 1, 3, int(-1));
                    for i in 2..n - 1 {
                        link(&mut b, i, i + 1, int(-1));
                    }
                }
            }
        }
        Series::B => {
            for (i, row) in b.iter_mut().enumerate() {
                row[i] = if i + 1 == n { int(1) } else { int(2) };
            }
            for i in 0..n - 1 {
                link(&mut b, i, i + 1, int(-1));
            }
        }
        Series::C => {
            for (i, row) in b.iter_mut().enumerate() {
                row[i] = if i + 1 == n { int(2) } else { int(1) };
            }
            for i in 0..n - 2 {
                link(&mut b, i, i + 1, rat(-1, 2));
            }
            link(&mut b, n - 2, n - 1, int(-1));
        }
        Series::F => {
            let diag = [int(2), int(2), int(1), int(1)];
            for (i, row) in b.iter_mut().enumerate() {
                row[i] = diag[i].clone();
            }
            link(&mut b, 0, 1, int(-1));
            link(&mut b, 1, 2, int(-1));
            link(&mut b, 2, 3, rat(-1, 2));
        }
        Series::G => {
            b[0][0] = rat(2, 3);
            b[1][1] = int(2);
            link(&mut b, 0, 1, int(-1));
        }
    }
    Ok(b)
}

fn lcm_i64(a: i64, b: i64) -> i64 {
    use num_integer::Integer;
    a.lcm(&b)
}

fn to_i64(r: &Rational) -> i64 {
    use num_traits::ToPrimitive;
    assert!(r.is_integer(), "expected integer, got {r}");
    r.to_integer().to_i64().expect("integer overflow")
}

impl RootSystem {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let gram = simple_root_gram(series, rank)?;
        let n = rank;
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| to_i64(&(&gram[i][j] * int(2) / &gram[i][i]))).collect())
            .collect();
        // Simple roots as columns in fundamental coordinates.
        let s = Matrix::from_fn(n, n, |i, j| int(cartan[i][j]));
        let s_inv = s
            .inverse()
            .ok_or_else(|| Error::Invariant("singular Cartan matrix".into()))?;
        // (ω, ω) = D S⁻¹ with D = diag((α_k, α_k)/2)
        let form = Matrix::from_fn(n, n, |k, j| &s_inv[(k, j)] * &gram[k][k] / int(2));
        if form != form.transpose() {
            return Err(Error::Invariant(format!(
                "{}{rank}: form not symmetric",
                series.letter()
            )));
        }
        let mut den = 1i64;
        for i in 0..n {
            for j in 0..n {
                den = lcm_i64(den, to_i64(&Rational::from_integer(form[(i, j)].denom().clone())));
            }
            den = lcm_i64(den, to_i64(&Rational::from_integer(gram[i][i].denom().clone())));
        }
        let form_num: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| to_i64(&(&form[(i, j)] * int(den)))).collect())
            .collect();
        let simple_len2: Vec<i64> = (0..n).map(|i| to_i64(&(&gram[i][i] * int(den)))).collect();

        let mut rs = RootSystem {
            series,
            rank,
            cartan,
            form_num,
            form_den: den,
            simple_len2,
            to_simple: s_inv,
            positive_roots: Vec::new(),
            highest_root: vec![0; n],
            rho: vec![1; n],
            comarks: vec![0; n],
            dual_coxeter: 0,
        };
        rs.positive_roots = rs.enumerate_positive_roots();
        rs.highest_root = rs
            .positive_roots
            .iter()
            .max_by_key(|r| rs.height(r))
            .cloned()
            .expect("nonempty root system");
        // θ^∨ = Σ a_i^∨ α_i^∨; with (θ, θ) = 2, a_i^∨ = θ's simple coordinates scaled by |α_i|²/2.
        let theta_simple = rs.simple_coords(&rs.highest_root);
        rs.comarks = (0..n)
            .map(|i| {
                let v = int(theta_simple[i]) * Rational::new(rs.simple_len2[i].into(), (2 * den).into());
                to_i64(&v)
            })
            .collect();
        let theta = rs.highest_root.clone();
        if rs.form(&theta, &theta) != int(2) {
            return Err(Error::Invariant(format!("{rs}: (θ, θ) != 2")));
        }
        let two_rho: Weight = vec![2; n];
        let c_adj = rs.form(&theta, &add(&theta, &two_rho));
        let h = &c_adj / int(2);
        if !h.is_integer() {
            return Err(Error::Invariant(format!("{rs}: non-integral dual Coxeter number")));
        }
        rs.dual_coxeter = to_i64(&h) as u32;
        Ok(rs)
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Gram matrix of the invariant form on fundamental weights.
    pub fn form_matrix(&self) -> Matrix {
        Matrix::from_fn(self.rank, self.rank, |i, j| {
            Rational::new(self.form_num[i][j].into(), self.form_den.into())
        })
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    pub fn rho(&self) -> &[i64] {
        &self.rho
    }

    pub fn dual_coxeter(&self) -> u32 {
        self.dual_coxeter
    }

    /// Coefficients of θ^∨ on the simple coroots; the level of ω_i is `comarks[i]`.
    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    /// Common denominator of the form on the weight lattice; bounds the
    /// denominator of every Casimir eigenvalue.
    pub fn form_denominator(&self) -> i64 {
        self.form_den
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn dim_algebra(&self) -> usize {
        self.rank + 2 * self.positive_roots.len()
    }

    /// Simple root `α_i` in fundamental coordinates.
    pub fn simple_root(&self, i: usize) -> Weight {
        (0..self.rank).map(|k| self.cartan[k][i]).collect()
    }

    /// Pairing scaled by the common denominator: `form(a, b) * form_den`.
    fn form_scaled(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                acc += ai * self.form_num[i][j] * bj;
            }
        }
        acc
    }

    pub fn form(&self, a: &[i64], b: &[i64]) -> Rational {
        Rational::new(self.form_scaled(a, b).into(), self.form_den.into())
    }

    /// Simple-root coordinates of a root-lattice element.
    pub fn simple_coords(&self, w: &[i64]) -> Vec<i64> {
        let v: Vec<Rational> = w.iter().map(|&x| int(x)).collect();
        self.to_simple.mul_vec(&v).iter().map(to_i64).collect()
    }

    /// Whether `w` lies in `Q₊`, the nonnegative span of simple roots.
    fn in_positive_cone(&self, w: &[i64]) -> bool {
        let v: Vec<Rational> = w.iter().map(|&x| int(x)).collect();
        self.to_simple
            .mul_vec(&v)
            .iter()
            .all(|c| c.is_integer() && *c >= Rational::zero())
    }

    fn height(&self, root: &[i64]) -> i64 {
        self.simple_coords(root).iter().sum()
    }

    fn enumerate_positive_roots(&self) -> Vec<Weight> {
        let n = self.rank;
        // roots in simple-root coordinates, grown by height
        let mut roots: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i64>> = roots.iter().cloned().collect();
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                // ⟨β, α_i^∨⟩
                let pairing: i64 = (0..n).map(|j| self.cartan[i][j] * beta[j]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        roots.push(up.clone());
                        queue.push_back(up);
                    }
                }
            }
        }
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        roots
            .into_iter()
            .map(|r| (0..n).map(|k| (0..n).map(|j| self.cartan[k][j] * r[j]).sum()).collect())
            .collect()
    }

    pub fn check_rank(&self, w: &[i64]) -> Result<()> {
        if w.len() != self.rank {
            return Err(Error::WrongRank {
                weight: w.to_vec(),
                rank: self.rank,
            });
        }
        Ok(())
    }

    /// Validates and wraps a dominant weight for this root system.
    pub fn dominant(&self, coords: &[i64]) -> Result<DominantWeight> {
        self.check_rank(coords)?;
        DominantWeight::new(coords.to_vec())
    }

    /// Simple reflection `s_i` on a weight.
    pub fn reflect(&self, w: &[i64], i: usize) -> Weight {
        let c = w[i];
        (0..self.rank).map(|k| w[k] - c * self.cartan[k][i]).collect()
    }

    /// Moves `w` into the dominant chamber, returning the image and whether
    /// an odd number of reflections was used.
    pub fn to_dominant(&self, w: &[i64]) -> (Weight, bool) {
        let mut v = w.to_vec();
        let mut odd = false;
        while let Some(i) = v.iter().position(|&c| c < 0) {
            v = self.reflect(&v, i);
            odd = !odd;
        }
        (v, odd)
    }

    /// `c(μ, μ + 2ρ)`.
    pub fn casimir_eigenvalue(&self, mu: &DominantWeight) -> Result<Rational> {
        self.check_rank(mu.coords())?;
        let shifted: Weight = mu.coords().iter().map(|&c| c + 2).collect();
        Ok(self.form(mu.coords(), &shifted))
    }

    /// `λ(θ^∨)`, the smallest level at which `V_λ` is admissible.
    pub fn level_of(&self, mu: &DominantWeight) -> Result<u32> {
        self.check_rank(mu.coords())?;
        let l: i64 = mu.coords().iter().zip(&self.comarks).map(|(a, b)| a * b).sum();
        Ok(l as u32)
    }

    /// `μ* = −w₀(μ)`.
    pub fn dual_weight(&self, mu: &DominantWeight) -> Result<DominantWeight> {
        self.check_rank(mu.coords())?;
        let neg: Weight = mu.coords().iter().map(|&c| -c).collect();
        let (d, _) = self.to_dominant(&neg);
        Ok(DominantWeight(d))
    }

    pub fn weyl_dim(&self, mu: &DominantWeight) -> Result<u64> {
        self.check_rank(mu.coords())?;
        let shifted: Weight = mu.coords().iter().map(|&c| c + 1).collect();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for alpha in &self.positive_roots {
            num *= BigInt::from(self.form_scaled(&shifted, alpha));
            den *= BigInt::from(self.form_scaled(&self.rho, alpha));
        }
        let q = Rational::new(num, den);
        if !q.is_integer() {
            return Err(Error::Invariant(format!(
                "{self}: non-integral Weyl dimension for {mu}"
            )));
        }
        use num_traits::ToPrimitive;
        q.to_integer()
            .to_u64()
            .ok_or_else(|| Error::Invariant("Weyl dimension overflow".into()))
    }

    /// Weight diagram of `V_μ` by Freudenthal's recursion.
    pub fn weight_multiplicities(&self, mu: &DominantWeight) -> Result<BTreeMap<Weight, u64>> {
        self.check_rank(mu.coords())?;
        let lam = mu.coords().to_vec();
        let lam_rho: Weight = lam.iter().map(|&c| c + 1).collect();
        let norm_top = self.form_scaled(&lam_rho, &lam_rho);
        let mut mult: HashMap<Weight, i64> = HashMap::new();
        mult.insert(lam.clone(), 1);
        // layers by depth (total simple-root coefficient of λ − β)
        let mut layer: Vec<Weight> = vec![lam.clone()];
        while !layer.is_empty() {
            let mut next: Vec<Weight> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for w in &layer {
                for i in 0..self.rank {
                    let cand: Weight = (0..self.rank).map(|k| w[k] - self.cartan[k][i]).collect();
                    if mult.contains_key(&cand) || !seen.insert(cand.clone()) {
                        continue;
                    }
                    let (dom, _) = self.to_dominant(&cand);
                    let diff: Weight = lam.iter().zip(&dom).map(|(a, b)| a - b).collect();
                    if !self.in_positive_cone(&diff) {
                        continue;
                    }
                    next.push(cand);
                }
            }
            let mut kept = Vec::new();
            for beta in next {
                let beta_rho: Weight = beta.iter().map(|&c| c + 1).collect();
                let denom = norm_top - self.form_scaled(&beta_rho, &beta_rho);
                let mut sum = 0i64;
                for alpha in &self.positive_roots {
                    let mut k = 1;
                    loop {
                        let up: Weight = beta.iter().zip(alpha).map(|(b, a)| b + k * a).collect();
                        match mult.get(&up) {
                            Some(&m) => sum += m * self.form_scaled(&up, alpha),
                            None => {
                                // weights along a string are contiguous; stop at the first gap
                                // that lies outside the dominant hull
                                let (dom, _) = self.to_dominant(&up);
                                let diff: Weight = lam.iter().zip(&dom).map(|(a, b)| a - b).collect();
                                if !self.in_positive_cone(&diff) {
                                    break;
                                }
                            }
                        }
                        k += 1;
                    }
                }
                if denom <= 0 {
                    return Err(Error::Invariant(format!(
                        "Freudenthal denominator vanished at {beta:?} for {mu}"
                    )));
                }
                let twice = 2 * sum;
                if twice % denom != 0 {
                    return Err(Error::Invariant(format!(
                        "non-integral Freudenthal multiplicity at {beta:?} for {mu}"
                    )));
                }
                let m = twice / denom;
                if m > 0 {
                    mult.insert(beta.clone(), m);
                    kept.push(beta);
                }
            }
            layer = kept;
        }
        Ok(mult.into_iter().map(|(w, m)| (w, m as u64)).collect())
    }

    /// Racah–Speiser decomposition of `V_μ ⊗ V_ν`.
    pub fn tensor_decompose(&self, mu: &DominantWeight, nu: &DominantWeight) -> Result<TensorDecomposition> {
        self.check_rank(mu.coords())?;
        self.check_rank(nu.coords())?;
        // iterate over the weights of the smaller factor
        let (big, small) = if self.weyl_dim(mu)? >= self.weyl_dim(nu)? {
            (mu, nu)
        } else {
            (nu, mu)
        };
        let weights = self.weight_multiplicities(small)?;
        let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
        for (beta, m) in &weights {
            let x: Weight = (0..self.rank).map(|k| big.0[k] + beta[k] + 1).collect();
            if let Some((dom, odd)) = self.to_dominant_regular(&x) {
                let lam: Weight = dom.iter().map(|c| c - 1).collect();
                *acc.entry(lam).or_insert(0) += if odd { -(*m as i64) } else { *m as i64 };
            }
        }
        let mut terms = BTreeMap::new();
        for (w, m) in acc {
            if m < 0 {
                return Err(Error::Invariant(format!(
                    "negative Racah-Speiser multiplicity at {w:?}"
                )));
            }
            if m > 0 {
                terms.insert(DominantWeight(w), m as u64);
            }
        }
        Ok(TensorDecomposition { terms })
    }

    /// Dominant-chamber image of a ρ-shifted weight; `None` if it lies on a wall.
    fn to_dominant_regular(&self, x: &[i64]) -> Option<(Weight, bool)> {
        let (d, odd) = self.to_dominant(x);
        if d.contains(&0) {
            None
        } else {
            Some((d, odd))
        }
    }

    /// Shifted affine Weyl action at level `k = ℓ + ȟ`: brings a ρ-shifted
    /// weight into the open fundamental alcove. `None` on a wall.
    pub(crate) fn to_alcove(&self, x: &[i64], k: i64) -> Option<(Weight, bool)> {
        let theta = &self.highest_root;
        let mut v = x.to_vec();
        let mut odd = false;
        loop {
            if let Some(i) = v.iter().position(|&c| c < 0) {
                v = self.reflect(&v, i);
                odd = !odd;
                continue;
            }
            if v.contains(&0) {
                return None;
            }
            let pairing = to_i64(&self.form(&v, theta));
            if pairing > k {
                // s₀: x ↦ x − ((x, θ) − k) θ
                let shift = pairing - k;
                v = v.iter().zip(theta).map(|(a, t)| a - shift * t).collect();
                odd = !odd;
                continue;
            }
            if pairing == k {
                return None;
            }
            return Some((v, odd));
        }
    }

    /// All dominant weights of level at most `level`, lexicographically sorted.
    pub fn dominant_weights_up_to_level(&self, level: u32) -> Vec<DominantWeight> {
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.rank];
        self.enumerate_level(0, level as i64, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate_level(&self, i: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<DominantWeight>) {
        if i == self.rank {
            out.push(DominantWeight(cur.clone()));
            return;
        }
        let step = self.comarks[i];
        let mut c = 0;
        while c * step <= budget {
            cur[i] = c;
            self.enumerate_level(i + 1, budget - c * step, cur, out);
            c += 1;
        }
        cur[i] = 0;
    }
}

fn add(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        s.parse().unwrap()
    }

    fn w(c: &[i64]) -> DominantWeight {
        DominantWeight::new(c.to_vec()).unwrap()
    }

    #[test]
    fn rejects_invalid_types() {
        for bad in ["A0", "B1", "C1", "D3", "E5", "E9", "F3", "G3"] {
            let err = bad.parse::<RootSystem>().unwrap_err();
            assert!(matches!(err, Error::InvalidRootSystem { .. }), "{bad}: {err}");
        }
        assert!(matches!("X2".parse::<RootSystem>(), Err(Error::UnknownAlgebra(_))));
        assert!(matches!("A".parse::<RootSystem>(), Err(Error::UnknownAlgebra(_))));
    }

    #[test]
    fn table_values_for_every_series() {
        // (name, ȟ, dim g) from the standard classification tables
        let table = [
            ("A1", 2, 3),
            ("A2", 3, 8),
            ("A4", 5, 24),
            ("B2", 3, 10),
            ("B3", 5, 21),
            ("C3", 4, 21),
            ("D4", 6, 28),
            ("D5", 8, 45),
            ("E6", 12, 78),
            ("E7", 18, 133),
            ("E8", 30, 248),
            ("F4", 9, 52),
            ("G2", 4, 14),
        ];
        for (name, h, dim) in table {
            let r = rs(name);
            assert_eq!(r.dual_coxeter(), h, "{name}");
            assert_eq!(r.dim_algebra(), dim, "{name}");
            let theta = r.highest_root().to_vec();
            assert_eq!(r.form(&theta, &theta), int(2), "{name}");
            let cm = r.cartan_matrix();
            for (i, row) in cm.iter().enumerate() {
                assert_eq!(row[i], 2);
                assert!(row.iter().enumerate().all(|(j, &a)| i == j || a <= 0));
            }
            // adjoint Casimir is 2ȟ
            let adj = DominantWeight::new(theta).unwrap();
            assert_eq!(r.casimir_eigenvalue(&adj).unwrap(), int(2 * h as i64), "{name}");
            assert_eq!(r.weyl_dim(&adj).unwrap(), dim as u64, "{name}");
        }
    }

    #[test]
    fn a1_conventions() {
        let r = rs("A1");
        assert_eq!(r.highest_root(), &[2]);
        assert_eq!(r.form_matrix()[(0, 0)], rat(1, 2));
        assert_eq!(r.casimir_eigenvalue(&w(&[0])).unwrap(), int(0));
        assert_eq!(r.casimir_eigenvalue(&w(&[1])).unwrap(), rat(3, 2));
        for m in 0..6 {
            assert_eq!(r.level_of(&w(&[m])).unwrap(), m as u32);
            assert_eq!(r.weyl_dim(&w(&[m])).unwrap(), m as u64 + 1);
            assert_eq!(r.dual_weight(&w(&[m])).unwrap(), w(&[m]));
        }
    }

    #[test]
    fn a2_examples() {
        let r = rs("A2");
        assert_eq!(r.casimir_eigenvalue(&w(&[1, 1])).unwrap(), int(6));
        assert_eq!(r.level_of(&w(&[1, 1])).unwrap(), 2);
        assert_eq!(r.dual_weight(&w(&[1, 0])).unwrap(), w(&[0, 1]));
        assert_eq!(r.dual_weight(&w(&[1, 1])).unwrap(), w(&[1, 1]));
        assert_eq!(r.weyl_dim(&w(&[1, 1])).unwrap(), 8);
        assert_eq!(r.weyl_dim(&w(&[0, 0])).unwrap(), 1);
        let mults = r.weight_multiplicities(&w(&[1, 1])).unwrap();
        assert_eq!(mults[&vec![0, 0]], 2);
        assert_eq!(mults.values().sum::<u64>(), 8);
    }

    #[test]
    fn non_dominant_and_wrong_rank_rejected() {
        assert!(matches!(DominantWeight::new(vec![1, -1]), Err(Error::NonDominant(_))));
        let r = rs("A2");
        assert!(matches!(r.casimir_eigenvalue(&w(&[1])), Err(Error::WrongRank { .. })));
    }

    #[test]
    fn a1_weight_string() {
        let r = rs("A1");
        let m = r.weight_multiplicities(&w(&[2])).unwrap();
        let expect: BTreeMap<Weight, u64> = [(vec![-2], 1), (vec![0], 1), (vec![2], 1)].into_iter().collect();
        assert_eq!(m, expect);
        let triv = r.weight_multiplicities(&w(&[0])).unwrap();
        assert_eq!(triv.len(), 1);
        assert_eq!(triv[&vec![0]], 1);
    }

    #[test]
    fn tensor_examples() {
        let a1 = rs("A1");
        let d = a1.tensor_decompose(&w(&[1]), &w(&[1])).unwrap();
        assert_eq!(d.terms, [(w(&[0]), 1), (w(&[2]), 1)].into_iter().collect());
        let d = a1.tensor_decompose(&w(&[3]), &w(&[0])).unwrap();
        assert_eq!(d.terms, [(w(&[3]), 1)].into_iter().collect());
        let a2 = rs("A2");
        let d = a2.tensor_decompose(&w(&[1, 0]), &w(&[0, 1])).unwrap();
        assert_eq!(d.terms, [(w(&[0, 0]), 1), (w(&[1, 1]), 1)].into_iter().collect());
    }

    #[test]
    fn weight_diagrams_are_weyl_invariant() {
        for (name, mu) in [
            ("A2", vec![2, 1]),
            ("B2", vec![1, 1]),
            ("G2", vec![1, 0]),
            ("C3", vec![0, 1, 0]),
        ] {
            let r = rs(name);
            let m = r.weight_multiplicities(&w(&mu)).unwrap();
            assert_eq!(m.values().sum::<u64>(), r.weyl_dim(&w(&mu)).unwrap(), "{name}");
            for (beta, k) in &m {
                for i in 0..r.rank() {
                    assert_eq!(m.get(&r.reflect(beta, i)), Some(k), "{name} {beta:?}");
                }
            }
        }
    }

    #[test]
    fn casimir_denominator_divides_form_denominator() {
        for name in ["A1", "A2", "A3", "B2", "C2", "G2", "D4", "F4", "E6"] {
            let r = rs(name);
            for mu in r.dominant_weights_up_to_level(if r.rank() > 3 { 2 } else { 6 }) {
                let c = r.casimir_eigenvalue(&mu).unwrap() * int(r.form_denominator());
                assert!(c.is_integer(), "{name} {mu}");
            }
        }
        // a denominator of 3 is not a universal bound: c = 3/2 for the sl2 doublet
        let a1 = rs("A1");
        let c = a1.casimir_eigenvalue(&w(&[1])).unwrap() * int(3);
        assert!(!c.is_integer());
        for name in ["A2", "G2", "E6", "F4"] {
            let r = rs(name);
            for mu in r.dominant_weights_up_to_level(3) {
                assert!(
                    (r.casimir_eigenvalue(&mu).unwrap() * int(3)).is_integer(),
                    "{name} {mu}"
                );
            }
        }
    }
}
