//! The oscillator Fock space: polynomials in the creation modes `t^{−k}`,
//! with `[t^k, t^{−l}] = k δ_{kl}` and `t^0` acting as zero.

use num_traits::Zero;

use super::{axpy, BasisKind, GradedBasis, GradedOperator, Monomial, SparseVec};
use crate::error::{Error, Result};
use crate::linalg::{int, rat, Rational};

fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if n == 0 {
        out.push(Monomial {
            modes: prefix.iter().map(|&k| (k, 0)).collect(),
            v: 0,
        });
        return;
    }
    for k in (1..=max.min(n)).rev() {
        prefix.push(k);
        partitions(n - k, k, prefix, out);
        prefix.pop();
    }
}

/// Monomials `t^{−k_1} ⋯ t^{−k_r} v_o` of total degree at most `d`.
pub fn oscillator_basis(d: usize) -> GradedBasis {
    let pieces = (0..=d as u32)
        .map(|n| {
            let mut out = Vec::new();
            partitions(n, n, &mut Vec::new(), &mut out);
            out
        })
        .collect();
    GradedBasis::new(BasisKind::Oscillator, pieces)
}

/// `t^k` applied to a monomial.
fn mode(k: i64, m: &Monomial) -> SparseVec {
    let mut out = SparseVec::new();
    if k < 0 {
        out.insert(m.with_mode(((-k) as u32, 0)), int(1));
    } else if k > 0 {
        let key = (k as u32, 0u8);
        let count = m.modes.iter().filter(|&&x| x == key).count();
        if count > 0 {
            let pos = m.modes.iter().position(|&x| x == key).unwrap();
            let mut modes = m.modes.clone();
            modes.remove(pos);
            out.insert(Monomial { modes, v: 0 }, int(k * count as i64));
        }
    }
    out
}

fn mode_vec(k: i64, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (m, c) in v {
        axpy(&mut out, c, &mode(k, m));
    }
    out
}

/// `L_k = −½ Σ_{i+j=k} :t^i t^j:` applied to a monomial, where the factor
/// with the larger index acts first.
fn virasoro(k: i64, m: &Monomial) -> SparseVec {
    let n = m.degree() as i64;
    let mut start = SparseVec::new();
    start.insert(m.clone(), int(1));
    let mut out = SparseVec::new();
    let lo = k.div_euclid(2) + 1;
    for j in lo..=n {
        let i = k - j;
        if i == 0 || j == 0 {
            continue;
        }
        axpy(&mut out, &int(-1), &mode_vec(i, &mode_vec(j, &start)));
    }
    if k % 2 == 0 && k != 0 {
        let h = k / 2;
        axpy(&mut out, &rat(-1, 2), &mode_vec(h, &mode_vec(h, &start)));
    }
    out
}

fn build(d: usize, shift: i64, action: impl Fn(&Monomial) -> SparseVec) -> Result<GradedOperator> {
    let basis = oscillator_basis(d);
    let window = GradedOperator::natural_window(d, shift)?;
    let dims = basis.dims();
    Ok(GradedOperator::from_action(&dims, shift, window, |n, i| {
        let img = action(&basis.piece(n)[i]);
        let t = (n as i64 + shift) as usize;
        let mut col = vec![Rational::zero(); dims[t]];
        for (m, c) in img {
            // images outside the truncation are excluded by the window
            if let Some(p) = basis.position(&m).filter(|_| m.degree() == t) {
                col[p] = c;
            }
        }
        col
    }))
}

fn check_mode(k: i64, d: usize) -> Result<()> {
    if k.unsigned_abs() as usize > d {
        return Err(Error::EmptyWindow(format!("|k| = {} exceeds degree {d}", k.abs())));
    }
    Ok(())
}

/// Matrix of `t^k` on the degree-`d` truncation.
pub fn oscillator_op(k: i64, d: usize) -> Result<GradedOperator> {
    check_mode(k, d)?;
    build(d, -k, |m| mode(k, m))
}

/// Matrix of `L_k`; it lowers degree by `k`.
pub fn virasoro_op(k: i64, d: usize) -> Result<GradedOperator> {
    check_mode(k, d)?;
    build(d, -k, |m| virasoro(k, m))
}

/// `[L_k, L_l] − (l − k) L_{k+l} − δ_{k+l,0} (k³ − k)/12`, zero on its window.
pub fn check_virasoro_bracket(k: i64, l: i64, d: usize) -> Result<GradedOperator> {
    check_mode(k + l, d)?;
    let lk = virasoro_op(k, d)?;
    let ll = virasoro_op(l, d)?;
    let lkl = virasoro_op(k + l, d)?;
    let mut res = lk.commutator(&ll)?.sub(&lkl.scale(&int(l - k)))?;
    if k + l == 0 {
        let central = GradedOperator::identity(res.dims()).scale(&rat(k * k * k - k, 12));
        res = res.sub(&central)?;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn partition_counts() {
        let b = oscillator_basis(12);
        assert_eq!(b.dims(), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        let mut all: Vec<_> = (0..=12).flat_map(|n| b.piece(n).to_vec()).collect();
        let len = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), len);
    }

    #[test]
    fn oscillator_brackets() {
        let d = 6;
        let a = oscillator_op(1, d).unwrap();
        let c = oscillator_op(-1, d).unwrap();
        let br = a.commutator(&c).unwrap();
        let id = GradedOperator::identity(br.dims());
        let w = br.window();
        for n in w.lo..=w.hi {
            assert_eq!(br.block(n), id.block(n));
        }
        assert!(oscillator_op(2, d)
            .unwrap()
            .commutator(&oscillator_op(-3, d).unwrap())
            .unwrap()
            .is_zero_on_window());
        assert!(oscillator_op(2, d).unwrap().block(0).is_zero());
        assert!(oscillator_op(0, d).unwrap().is_zero_on_window());
        assert!(matches!(oscillator_op(7, d), Err(Error::EmptyWindow(_))));
        // [t^3, t^{-3}] = 3
        let br3 = oscillator_op(3, d)
            .unwrap()
            .commutator(&oscillator_op(-3, d).unwrap())
            .unwrap();
        assert_eq!(br3.block(2), &Matrix::scalar(2, &int(3)));
    }

    #[test]
    fn l0_counts_degree() {
        let l0 = virasoro_op(0, 8).unwrap();
        for n in 0..=8 {
            let d = l0.block(n).rows();
            assert_eq!(l0.block(n), &Matrix::scalar(d, &int(-(n as i64))));
        }
        for k in 0..=3 {
            assert!(virasoro_op(k, 6).unwrap().block(0).is_zero());
        }
    }

    #[test]
    fn bracket_examples() {
        for (k, l, d) in [(1, -1, 6), (2, 3, 12), (3, -3, 12), (2, -2, 8), (-1, -2, 8)] {
            let r = check_virasoro_bracket(k, l, d).unwrap();
            assert!(r.is_zero_on_window(), "({k},{l}) d={d}");
        }
        // the central term is really consumed: [L_2, L_{-2}] on the vacuum is ½
        let c = virasoro_op(2, 6)
            .unwrap()
            .commutator(&virasoro_op(-2, 6).unwrap())
            .unwrap();
        assert_eq!(c.block(0)[(0, 0)], rat(1, 2));
    }

    #[test]
    fn wrong_sign_is_detected() {
        let lk = virasoro_op(1, 6).unwrap();
        let ll = virasoro_op(-2, 6).unwrap();
        let l = virasoro_op(-1, 6).unwrap();
        let flipped = lk.commutator(&ll).unwrap().sub(&l.scale(&int(1 - (-2)))).unwrap();
        assert!(!flipped.is_zero_on_window());
    }
}
