use proptest::prelude::*;

use crate::fusion::{sl2_fusion_rule, FusionAlphabet, FusionRing};
use crate::linalg::{rat, Matrix, Rational};
use crate::oracle::{npoint_block_rank, CoinvariantProblem};

fn small_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_map(move |v| {
        let rows = v
            .chunks(n)
            .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
            .collect();
        Matrix::from_rows(n, rows)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_two_sided(m in small_matrix(4)) {
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(&m * &inv, Matrix::identity(4));
            prop_assert_eq!(&inv * &m, Matrix::identity(4));
        } else {
            prop_assert!(m.rank() < 4);
        }
    }

    #[test]
    fn sl2_fusion_is_associative(level in 0u32..=6, a in 0u32..=6, b in 0u32..=6, c in 0u32..=6, d in 0u32..=6) {
        prop_assume!(a <= level && b <= level && c <= level && d <= level);
        let left: u64 = (0..=level).map(|m| sl2_fusion_rule(level, a, b, m) * sl2_fusion_rule(level, m, c, d)).sum();
        let right: u64 = (0..=level).map(|m| sl2_fusion_rule(level, b, c, m) * sl2_fusion_rule(level, a, m, d)).sum();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ring_agrees_with_closed_form(level in 0u32..=5, a in 0usize..=5, b in 0usize..=5, c in 0usize..=5) {
        prop_assume!(a <= level as usize && b <= level as usize && c <= level as usize);
        let rs = "A1".parse().unwrap();
        let ring = FusionRing::build(&FusionAlphabet::new(&rs, level)).unwrap();
        prop_assert_eq!(ring.get(a, b, c), sl2_fusion_rule(level, a as u32, b as u32, c as u32));
    }

    #[test]
    fn coinvariants_are_affine_invariant(
        labels in prop::collection::vec(0u32..=2, 2..=4),
        scale in 1i64..=5,
        shift in -7i64..=7,
    ) {
        let level = 2;
        let z: Vec<Rational> = (0..labels.len() as i64).map(|i| rat(i * i + 2 * i - 1, 3)).collect();
        let moved: Vec<Rational> = z.iter().map(|x| x * rat(scale, 1) + rat(shift, 2)).collect();
        let a = npoint_block_rank(&CoinvariantProblem::new(level, labels.clone(), z)).unwrap();
        let b = npoint_block_rank(&CoinvariantProblem::new(level, labels, moved)).unwrap();
        prop_assert_eq!(a, b);
    }
}
