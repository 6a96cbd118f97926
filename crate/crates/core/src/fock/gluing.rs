//! The gluing tensor `ε^μ = Σ_d ε_d τ^d` of two integrable modules paired
//! across a node.
//!
//! `H⁺ = ℍ_ℓ(V_μ)` and `H⁻ = ℍ_ℓ(V_{μ*})` are paired by the form `b` with
//! `b(X t^n u, u') + b(u, X t^{−n} u') = 0`, normalized on degree zero by
//! pairing the highest and lowest weight vectors to 1. `ε_d` is the
//! transpose inverse of its degree-`d` Gram matrix, stored with rows indexed
//! by `H⁺` and columns by `H⁻`.

use super::affine::{conformal_weight, induced_module, integrable_quotient, AffineRep, IntegrableQuotient, Sl2Gen};
use crate::error::{Error, Result};
use crate::linalg::{int, Matrix};

#[derive(Debug, Clone)]
pub struct GluingTensorSeries {
    level: u32,
    mu: u32,
    plus: IntegrableQuotient,
    minus: IntegrableQuotient,
    grams: Vec<Matrix>,
    terms: Vec<Matrix>,
}

/// Computes `ε_0, …, ε_d` for the sl₂ label `μ` at level `ℓ`.
pub fn gluing_tensor(level: u32, mu: u32, d: usize) -> Result<GluingTensorSeries> {
    let plus = integrable_quotient(induced_module(level, mu, d)?)?;
    // every sl₂ module is self-dual
    let minus = integrable_quotient(induced_module(level, mu, d)?)?;
    let full = plus.module().invariant_pairing_gram(minus.module());
    let mut grams = Vec::new();
    let mut terms = Vec::new();
    for (n, blocks) in full.iter().enumerate() {
        let dp = plus.basis().piece(n).len();
        let dm = minus.basis().piece(n).len();
        if dp != dm {
            return Err(Error::Invariant(format!(
                "degree {n}: dual pieces of sizes {dp} and {dm}"
            )));
        }
        let minus_reps = minus.block_reps(n);
        let mut g = Matrix::zeros(dp, dm);
        for (w, rows, off) in plus.block_reps(n) {
            let Some((_, cols, moff)) = minus_reps.iter().find(|(mw, _, _)| *mw == -w) else {
                continue;
            };
            let Some(b) = blocks.get(&w) else {
                continue;
            };
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    g[(off + i, moff + j)] = b[(r, c)].clone();
                }
            }
        }
        let inv = g
            .inverse()
            .ok_or_else(|| Error::Invariant(format!("pairing of degree-{n} pieces is not perfect")))?;
        terms.push(inv.transpose());
        grams.push(g);
    }
    Ok(GluingTensorSeries {
        level,
        mu,
        plus,
        minus,
        grams,
        terms,
    })
}

impl GluingTensorSeries {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn degree(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, d: usize) -> &Matrix {
        &self.terms[d]
    }

    /// Gram matrix of `b` between the degree-`d` pieces of `H⁺` and `H⁻`.
    pub fn gram(&self, d: usize) -> &Matrix {
        &self.grams[d]
    }

    pub fn plus(&self) -> &IntegrableQuotient {
        &self.plus
    }

    pub fn minus(&self) -> &IntegrableQuotient {
        &self.minus
    }

    /// `(X t₊ⁿ ⊗ 1) ε_{d+n} + (1 ⊗ X t₋^{−n}) ε_d`, which vanishes.
    pub fn recursion_residual(&self, x: Sl2Gen, n: i64, d: usize) -> Result<Matrix> {
        let top = d as i64 + n;
        if top < 0 || top as usize > self.degree() || d > self.degree() {
            return Err(Error::EmptyWindow(format!(
                "degrees {d} and {top} must lie in [0, {}]",
                self.degree()
            )));
        }
        let top = top as usize;
        let a_plus = self.plus.mode_op(x, n);
        let a_minus = self.minus.mode_op(x, -n);
        // the mode operators are exact on every degree that maps into the truncation
        let ap = match &a_plus {
            Ok(op) => op.block(top).clone(),
            Err(_) => return Err(Error::EmptyWindow(format!("X t^{n} leaves the truncation"))),
        };
        let am = match &a_minus {
            Ok(op) => op.block(d).clone(),
            Err(_) => return Err(Error::EmptyWindow(format!("X t^{} leaves the truncation", -n))),
        };
        Ok(&(&ap * &self.terms[top]) + &(&self.terms[d] * &am.transpose()))
    }

    /// `(T(D̂₀) ⊗ 1) ε_d + (d + c_μ/(2(ℓ + ȟ))) ε_d`, which vanishes: `Σ ε_d τ^d`
    /// is an eigenvector of `T(D̂₀) + τ d/dτ` with eigenvalue `−c_μ/(2(ℓ + ȟ))`.
    pub fn eigenvector_residual(&self, d: usize) -> Result<Matrix> {
        let l0 = super::affine::sugawara_op(&self.plus, 0)?;
        let h = conformal_weight(self.level, self.mu) + int(d as i64);
        Ok(&(l0.block(d) * &self.terms[d]) + &self.terms[d].scale(&h))
    }
}

#[cfg(test)]
mod tests {
    use super::super::affine::invariant_pairing_deg0;
    use super::*;

    #[test]
    fn constant_term_is_dual_pairing() {
        for (l, mu) in [(0, 0), (1, 0), (1, 1), (2, 2), (3, 3)] {
            let g = gluing_tensor(l, mu, 0).unwrap();
            let b = invariant_pairing_deg0(mu);
            assert_eq!(g.term(0), &b.inverse().unwrap().transpose());
        }
        assert_eq!(gluing_tensor(1, 0, 0).unwrap().term(0), &Matrix::identity(1));
    }

    #[test]
    fn recursion_level_one() {
        for mu in 0..=1 {
            let g = gluing_tensor(1, mu, 4).unwrap();
            for x in Sl2Gen::ALL {
                for n in -2i64..=2 {
                    for d in 0..=4usize {
                        let top = d as i64 + n;
                        if !(0..=4).contains(&top) {
                            continue;
                        }
                        assert!(
                            g.recursion_residual(x, n, d).unwrap().is_zero(),
                            "mu={mu} {x:?} n={n} d={d}"
                        );
                    }
                }
            }
            for d in 0..=4 {
                assert!(g.eigenvector_residual(d).unwrap().is_zero());
                assert!(g.gram(d).determinant() != int(0));
            }
        }
    }

    #[test]
    fn recursion_detects_a_wrong_sign() {
        let g = gluing_tensor(1, 1, 2).unwrap();
        let ap = g.plus().mode_op(Sl2Gen::E, 1).unwrap().block(2).clone();
        let am = g.minus().mode_op(Sl2Gen::E, -1).unwrap().block(1).clone();
        let wrong = &(&ap * g.term(2)) - &(g.term(1) * &am.transpose());
        assert!(!wrong.is_zero());
    }

    #[test]
    fn rescaling_is_covariant() {
        // ε scales inversely with b, so the recursion is invariant under rescaling
        let g = gluing_tensor(2, 1, 2).unwrap();
        let s = crate::linalg::rat(3, 7);
        let scaled: Vec<Matrix> = (0..=2).map(|d| g.term(d).scale(&s)).collect();
        let ap = g.plus().mode_op(Sl2Gen::F, 1).unwrap().block(2).clone();
        let am = g.minus().mode_op(Sl2Gen::F, -1).unwrap().block(1).clone();
        assert!((&(&ap * &scaled[2]) + &(&scaled[1] * &am.transpose())).is_zero());
    }
}
