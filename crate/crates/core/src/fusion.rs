//! The level-ℓ fusion ring.
//!
//! Coefficients are computed by the Kac–Walton rule: decompose the classical
//! tensor product, then fold every summand into the fundamental alcove of the
//! ρ-shifted affine Weyl group at level ℓ + ȟ, with signs, dropping summands
//! that land on a wall. They are stored fully symmetrically as
//! `N_{λμν} := N_{λμ}^{ν*}`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::liealg::{DominantWeight, RootSystem};

#[derive(Debug, Clone)]
pub struct FusionAlphabet {
    rs: RootSystem,
    level: u32,
    labels: Vec<DominantWeight>,
    index: HashMap<DominantWeight, usize>,
    duals: Vec<usize>,
}

impl FusionAlphabet {
    pub fn new(rs: &RootSystem, level: u32) -> Self {
        let labels = rs.dominant_weights_up_to_level(level);
        let index: HashMap<_, _> = labels.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let duals = labels
            .iter()
            .map(|w| {
                let d = rs.dual_weight(w).expect("label has the right rank");
                index[&d]
            })
            .collect();
        FusionAlphabet {
            rs: rs.clone(),
            level,
            labels,
            index,
            duals,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn labels(&self) -> &[DominantWeight] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &DominantWeight {
        &self.labels[i]
    }

    /// Index of the trivial label.
    pub fn trivial(&self) -> usize {
        0
    }

    pub fn index_of(&self, w: &DominantWeight) -> Result<usize> {
        self.index.get(w).copied().ok_or_else(|| Error::LabelOutsideAlphabet {
            label: w.coords().to_vec(),
            level: self.level,
        })
    }

    pub fn index_of_coords(&self, coords: &[i64]) -> Result<usize> {
        let w = self.rs.dominant(coords)?;
        self.index_of(&w)
    }

    pub fn dual_index(&self, i: usize) -> usize {
        self.duals[i]
    }

    /// `N_{λμ}^ν` for all `ν`, as a map from label index to multiplicity.
    pub fn fusion_product(&self, i: usize, j: usize) -> Result<BTreeMap<usize, u64>> {
        let k = self.level as i64 + self.rs.dual_coxeter() as i64;
        let classical = self.rs.tensor_decompose(&self.labels[i], &self.labels[j])?;
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (sigma, m) in &classical.terms {
            let shifted: Vec<i64> = sigma.coords().iter().map(|c| c + 1).collect();
            if let Some((x, odd)) = self.rs.to_alcove(&shifted, k) {
                let nu: Vec<i64> = x.iter().map(|c| c - 1).collect();
                let idx = self
                    .index_of_coords(&nu)
                    .map_err(|_| Error::Invariant(format!("Kac-Walton image {nu:?} outside the alphabet")))?;
                *acc.entry(idx).or_insert(0) += if odd { -(*m as i64) } else { *m as i64 };
            }
        }
        let mut out = BTreeMap::new();
        for (idx, n) in acc {
            if n < 0 {
                return Err(Error::Invariant(format!(
                    "negative fusion multiplicity for {} x {} -> {}",
                    self.labels[i], self.labels[j], self.labels[idx]
                )));
            }
            if n > 0 {
                out.insert(idx, n as u64);
            }
        }
        Ok(out)
    }

    /// Symmetric fusion coefficient `N_{λμν}`, the dimension of the
    /// conformal-block space of a 3-holed sphere.
    pub fn fusion_coeff(&self, lambda: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight) -> Result<u64> {
        let (i, j, k) = (self.index_of(lambda)?, self.index_of(mu)?, self.index_of(nu)?);
        self.fusion_coeff_idx(i, j, k)
    }

    pub fn fusion_coeff_idx(&self, i: usize, j: usize, k: usize) -> Result<u64> {
        let prod = self.fusion_product(i, j)?;
        Ok(prod.get(&self.duals[k]).copied().unwrap_or(0))
    }
}

/// The full table of symmetric fusion coefficients, with ring axioms verified.
#[derive(Debug, Clone)]
pub struct FusionRing {
    alphabet: FusionAlphabet,
    n: usize,
    coeffs: Vec<u64>,
}

impl FusionRing {
    pub fn build(alphabet: &FusionAlphabet) -> Result<Self> {
        let n = alphabet.len();
        let mut coeffs = vec![0u64; n * n * n];
        for i in 0..n {
            for j in i..n {
                let prod = alphabet.fusion_product(i, j)?;
                for (nu, m) in prod {
                    let k = alphabet.dual_index(nu);
                    // fill N_{ijk} and let the axiom check confirm the symmetric copies
                    coeffs[(i * n + j) * n + k] = m;
                    coeffs[(j * n + i) * n + k] = m;
                }
            }
        }
        let ring = FusionRing {
            alphabet: alphabet.clone(),
            n,
            coeffs,
        };
        ring.verify_axioms()?;
        Ok(ring)
    }

    pub fn alphabet(&self) -> &FusionAlphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.coeffs[(i * self.n + j) * self.n + k]
    }

    /// Nonzero coefficients with `i ≤ j ≤ k`.
    pub fn nonzero_triples(&self) -> Vec<([usize; 3], u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i..self.n {
                for k in j..self.n {
                    let v = self.get(i, j, k);
                    if v > 0 {
                        out.push(([i, j, k], v));
                    }
                }
            }
        }
        out
    }

    fn witness(&self, idx: &[usize]) -> String {
        let parts: Vec<String> = idx.iter().map(|&i| self.alphabet.label(i).to_string()).collect();
        parts.join(", ")
    }

    /// `Σ_σ N_{λμσ*} N_{σντ}`.
    pub fn four_point(&self, l: usize, m: usize, n: usize, t: usize) -> u64 {
        (0..self.n)
            .map(|s| self.get(l, m, self.alphabet.dual_index(s)) * self.get(s, n, t))
            .sum()
    }

    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.n;
        let a = &self.alphabet;
        let fail = |axiom: &str, w: String| Err(Error::Invariant(format!("fusion {axiom} axiom fails at ({w})")));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    let perms = [(j, i, k), (i, k, j), (k, j, i), (j, k, i), (k, i, j)];
                    if perms.iter().any(|&(x, y, z)| self.get(x, y, z) != v) {
                        return fail("symmetry", self.witness(&[i, j, k]));
                    }
                    let (di, dj, dk) = (a.dual_index(i), a.dual_index(j), a.dual_index(k));
                    if self.get(di, dj, dk) != v {
                        return fail("duality", self.witness(&[i, j, k]));
                    }
                }
            }
        }
        let zero = a.trivial();
        for i in 0..n {
            for j in 0..n {
                let expect = u64::from(j == a.dual_index(i));
                if self.get(zero, i, j) != expect {
                    return fail("unit", self.witness(&[zero, i, j]));
                }
            }
        }
        for l in 0..n {
            for m in 0..n {
                for nn in 0..n {
                    for t in 0..n {
                        let base = self.four_point(l, m, nn, t);
                        let others = [
                            self.four_point(m, l, nn, t),
                            self.four_point(l, nn, m, t),
                            self.four_point(l, m, t, nn),
                        ];
                        if others.iter().any(|&o| o != base) {
                            return fail("associativity", self.witness(&[l, m, nn, t]));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Closed-form level-ℓ sl₂ fusion rule, independent of the alcove folding.
pub fn sl2_fusion_rule(level: u32, a: u32, b: u32, c: u32) -> u64 {
    let (a, b, c, l) = (a as i64, b as i64, c as i64, level as i64);
    let parity = (a + b + c) % 2 == 0;
    let triangle = c <= a + b && a <= b + c && b <= a + c;
    let truncation = a + b + c <= 2 * l;
    u64::from(parity && triangle && truncation && a <= l && b <= l && c <= l)
}
