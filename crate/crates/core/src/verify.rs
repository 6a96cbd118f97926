//! Check reports and the suite runner behind `wzw verify`.
//!
//! Every exact check reports the max-entry residual as a rational string;
//! count-style checks report the number of mismatching cases.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fock::{
    check_l0_spectrum, check_sugawara_bracket, check_sugawara_derivation, check_virasoro_bracket, gluing_tensor,
    induced_module, integrable_quotient, Sl2Gen,
};
use crate::fusion::{FusionAlphabet, FusionRing};
use crate::kz::{convergence_order, flatness_check, kz_system, parallel_transport, Path};
use crate::liealg::{DominantWeight, RootSystem};
use crate::linalg::{int, rat, Matrix, Rational};
use crate::oracle::{npoint_block_rank, three_point_rank, CoinvariantProblem};
use crate::surface::{
    block_dimension, dehn_twist_eigenvalue, factorization_sum, twist_denominator_bound, MarkedSurface, TrivalentGraph,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u32>,
    pub name: String,
    pub window: String,
    pub residual_norm: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Check {
    fn exact(name: String, window: String, residual: Rational) -> Self {
        let status = if residual.is_zero() { Status::Pass } else { Status::Fail };
        Check {
            criterion: None,
            name,
            window,
            residual_norm: residual.to_string(),
            status,
            failures: vec![],
        }
    }

    fn cases(criterion: u32, name: &str, window: String, failures: Vec<String>) -> Self {
        Check {
            criterion: Some(criterion),
            name: name.to_string(),
            window,
            residual_norm: failures.len().to_string(),
            status: if failures.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// `[L_k, L_l]` on the oscillator truncation for `|k|, |l| ≤ kmax`.
pub fn virasoro(kmax: i64, degree: usize) -> Result<Report> {
    let mut checks = Vec::new();
    for k in -kmax..=kmax {
        for l in -kmax..=kmax {
            let r = check_virasoro_bracket(k, l, degree)?;
            checks.push(Check::exact(
                format!("[L_{k}, L_{l}]"),
                r.window().to_string(),
                r.residual_norm(),
            ));
        }
    }
    Ok(Report { checks })
}

/// Sugawara identities on `ℍ_ℓ(V_μ)` truncated at `degree`.
pub fn sugawara(level: u32, mu: u32, degree: usize) -> Result<Report> {
    let q = integrable_quotient(induced_module(level, mu, degree)?)?;
    let kmax = (degree / 2).min(2) as i64;
    let mut checks = Vec::new();
    let r = check_l0_spectrum(&q)?;
    checks.push(Check::exact(
        "L_0 spectrum".into(),
        r.window().to_string(),
        r.residual_norm(),
    ));
    for k in -kmax..=kmax {
        for x in Sl2Gen::ALL {
            for m in -kmax..=kmax {
                let r = check_sugawara_derivation(&q, k, x, m)?;
                checks.push(Check::exact(
                    format!("[T_{k}, {x:?} t^{m}]"),
                    r.window().to_string(),
                    r.residual_norm(),
                ));
            }
        }
    }
    for k in -kmax..=kmax {
        for l in -kmax..=kmax {
            let r = check_sugawara_bracket(&q, k, l)?;
            checks.push(Check::exact(
                format!("[T_{k}, T_{l}]"),
                r.window().to_string(),
                r.residual_norm(),
            ));
        }
    }
    Ok(Report { checks })
}

fn tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=max).map(move |x| {
                    let mut u = t.clone();
                    u.push(x);
                    u
                })
            })
            .collect();
    }
    out
}

/// `count` distinct rational points with small numerators and denominators.
pub fn random_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let mut z: Vec<Rational> = Vec::new();
    while z.len() < count {
        let p = rat(rng.gen_range(-20..=20), rng.gen_range(1..=5));
        if !z.contains(&p) {
            z.push(p);
        }
    }
    z
}

fn a1() -> RootSystem {
    "A1".parse().expect("A1 parses")
}

fn ring(rs: &RootSystem, level: u32) -> Result<Arc<FusionRing>> {
    Ok(Arc::new(FusionRing::build(&FusionAlphabet::new(rs, level))?))
}

fn indices(labels: &[u32]) -> Vec<usize> {
    labels.iter().map(|&x| x as usize).collect()
}

fn criterion_1() -> Result<Vec<Check>> {
    let r = virasoro(3, 12)?;
    let failures = r
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.name.clone())
        .collect();
    Ok(vec![Check::cases(
        1,
        "virasoro bracket",
        "|k|,|l| <= 3, d = 12".into(),
        failures,
    )])
}

fn criterion_2() -> Result<Vec<Check>> {
    let mut failures = Vec::new();
    for level in 1..=2 {
        for mu in 0..=level {
            let r = sugawara(level, mu, 6)?;
            failures.extend(
                r.checks
                    .iter()
                    .filter(|c| !c.passed())
                    .map(|c| format!("l={level} mu={mu} {}", c.name)),
            );
        }
    }
    Ok(vec![Check::cases(
        2,
        "sugawara identities",
        "A1, l in {1,2}, mu <= l, d = 6".into(),
        failures,
    )])
}

fn criterion_3() -> Result<Vec<Check>> {
    let rs = a1();
    let mut failures = Vec::new();
    for level in 0..=4u32 {
        let alpha = FusionAlphabet::new(&rs, level);
        for t in tuples(3, level) {
            let w = |m: u32| DominantWeight::new(vec![m as i64]);
            let fast = alpha.fusion_coeff(&w(t[0])?, &w(t[1])?, &w(t[2])?)?;
            let slow = three_point_rank(level, t[0], t[1], t[2])?.rank as u64;
            if fast != slow {
                failures.push(format!("l={level} {t:?}: {fast} vs {slow}"));
            }
        }
    }
    Ok(vec![Check::cases(
        3,
        "oracle equivalence",
        "A1, l <= 4, all triples".into(),
        failures,
    )])
}

fn criterion_4() -> Result<Vec<Check>> {
    let mut failures = Vec::new();
    for (name, max) in [("A1", 4u32), ("A2", 2)] {
        let rs: RootSystem = name.parse()?;
        for level in 0..=max {
            if let Err(e) = FusionRing::build(&FusionAlphabet::new(&rs, level)).and_then(|r| r.verify_axioms()) {
                failures.push(format!("{name} l={level}: {e}"));
            }
        }
    }
    Ok(vec![Check::cases(
        4,
        "fusion ring axioms",
        "A1 l <= 4, A2 l <= 2".into(),
        failures,
    )])
}

fn criterion_5() -> Result<Vec<Check>> {
    let rs = a1();
    let mut torus = Vec::new();
    for level in 0..=4u32 {
        let s = MarkedSurface::from_indices(ring(&rs, level)?, 1, vec![])?;
        let d = block_dimension(&s, None)?;
        if d != level as u64 + 1 {
            torus.push(format!("l={level}: {d}"));
        }
    }
    let mut genus2 = Vec::new();
    let g2 = MarkedSurface::from_indices(ring(&rs, 1)?, 2, vec![])?;
    for (name, g) in [
        ("theta", TrivalentGraph::theta()),
        ("dumbbell", TrivalentGraph::dumbbell()),
    ] {
        let d = block_dimension(&g2, Some(&g))?;
        if d != 4 {
            genus2.push(format!("{name}: {d}"));
        }
    }
    let mut channels = Vec::new();
    let s_graph = TrivalentGraph::four_holed_sphere([0, 1])?;
    let t_graph = TrivalentGraph::four_holed_sphere([0, 2])?;
    for level in 0..=3u32 {
        let r = ring(&rs, level)?;
        for labels in tuples(4, level) {
            let surf = MarkedSurface::from_indices(r.clone(), 0, indices(&labels))?;
            let (a, b) = (
                block_dimension(&surf, Some(&s_graph))?,
                block_dimension(&surf, Some(&t_graph))?,
            );
            if a != b {
                channels.push(format!("l={level} {labels:?}: {a} vs {b}"));
            }
        }
    }
    let mut fact = Vec::new();
    for level in 0..=3u32 {
        let r = ring(&rs, level)?;
        for g in 1..=2 {
            for n in 0..=2 {
                for labels in tuples(n, level) {
                    let surf = MarkedSurface::from_indices(r.clone(), g, indices(&labels))?;
                    if block_dimension(&surf, None)? != factorization_sum(&surf)? {
                        fact.push(format!("l={level} g={g} {labels:?}"));
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::cases(5, "torus dimension", "A1, l <= 4".into(), torus),
        Check::cases(5, "genus 2 theta and dumbbell", "A1, l = 1".into(), genus2),
        Check::cases(
            5,
            "four-holed sphere s/t channels",
            "A1, l <= 3, all labels".into(),
            channels,
        ),
        Check::cases(5, "factorization", "A1, l <= 3, g in {1,2}, <= 2 labels".into(), fact),
    ])
}

fn criterion_6(seed: u64) -> Result<Vec<Check>> {
    let rs = a1();
    let mut surf = Vec::new();
    for level in 0..=3u32 {
        let r = ring(&rs, level)?;
        for g in 0..=2 {
            for n in 0..=3 {
                for labels in tuples(n, level) {
                    let idx = indices(&labels);
                    let base = MarkedSurface::from_indices(r.clone(), g, idx.clone())?;
                    let more = [idx.as_slice(), &[0]].concat();
                    let grown = MarkedSurface::from_indices(r.clone(), g, more)?;
                    if block_dimension(&base, None)? != block_dimension(&grown, None)? {
                        surf.push(format!("l={level} g={g} {labels:?}"));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    for level in 0..=3u32 {
        for n in 1..=4 {
            for labels in tuples(n, level) {
                for _ in 0..3 {
                    let z = random_points(&mut rng, n + 1);
                    let base = npoint_block_rank(&CoinvariantProblem::new(level, labels.clone(), z[..n].to_vec()))?;
                    let more = [labels.as_slice(), &[0]].concat();
                    let grown = npoint_block_rank(&CoinvariantProblem::new(level, more, z.clone()))?;
                    if base != grown {
                        points.push(format!("l={level} {labels:?}"));
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::cases(
            6,
            "propagation of block dimension",
            "A1, l <= 3, g <= 2, <= 3 labels".into(),
            surf,
        ),
        Check::cases(
            6,
            "propagation of coinvariants",
            format!("A1, l <= 3, n <= 4, 3 configurations, seed {seed}"),
            points,
        ),
    ])
}

fn criterion_7() -> Result<Vec<Check>> {
    let mut exponent = Vec::new();
    let mut stated = Vec::new();
    let mut bound = Vec::new();
    for (name, max) in [("A1", 4u32), ("A2", 2)] {
        let rs: RootSystem = name.parse()?;
        for level in 0..=max {
            let shifted = int(level as i64 + rs.dual_coxeter() as i64);
            for mu in rs.dominant_weights_up_to_level(level) {
                let tw = dehn_twist_eigenvalue(&rs, level, &mu)?;
                let mut r = rs.casimir_eigenvalue(&mu)? / &shifted;
                while r >= int(2) {
                    r -= int(2);
                }
                if tw.exponent() != &r {
                    exponent.push(format!("{name} l={level} {mu}"));
                }
                let scaled = int(3) * &shifted * tw.exponent();
                if !scaled.is_integer() {
                    stated.push(format!("{name} l={level} {mu}: 3(l+h)r = {scaled}"));
                }
                if !(int(twist_denominator_bound(&rs, level)) * tw.exponent()).is_integer() {
                    bound.push(format!("{name} l={level} {mu}"));
                }
            }
        }
    }
    let rs = a1();
    let tw = dehn_twist_eigenvalue(&rs, 1, &rs.dominant(&[1])?)?;
    let minus_i = if tw.as_gaussian() == Some((0, -1)) {
        vec![]
    } else {
        vec![format!("got {tw}")]
    };
    Ok(vec![
        Check::cases(
            7,
            "twist exponent c/(l+h) mod 2",
            "A1 l <= 4, A2 l <= 2".into(),
            exponent,
        ),
        Check::cases(7, "3(l+h)r integral", "A1 l <= 4, A2 l <= 2".into(), stated),
        Check::cases(7, "form_den(l+h)r integral", "A1 l <= 4, A2 l <= 2".into(), bound),
        Check::cases(7, "A1 l=1 mu=1 twist is -i", "A1, l = 1".into(), minus_i),
    ])
}

fn criterion_8() -> Result<Vec<Check>> {
    let mut kohno = Vec::new();
    let mut translation = Vec::new();
    for level in 0..=3u32 {
        for n in 2..=4 {
            for labels in tuples(n, level) {
                let s = kz_system(level, &labels)?;
                if !flatness_check(&s) {
                    kohno.push(format!("l={level} {labels:?}"));
                }
                let z: Vec<Rational> = (0..n as i64).map(|i| rat(3 * i * i - 2 * i + 1, 2)).collect();
                if !s.translation_contraction(&z)?.is_zero() {
                    translation.push(format!("l={level} {labels:?}"));
                }
            }
        }
    }
    Ok(vec![
        Check::cases(8, "kohno relations", "A1, 2 <= n <= 4, l <= 3".into(), kohno),
        Check::cases(
            8,
            "translation contraction",
            "A1, 2 <= n <= 4, l <= 3".into(),
            translation,
        ),
    ])
}

fn float_check(name: &str, window: &str, value: f64, pass: bool) -> Check {
    Check {
        criterion: Some(9),
        name: name.into(),
        window: window.into(),
        residual_norm: format!("{value:.3e}"),
        status: if pass { Status::Pass } else { Status::Fail },
        failures: vec![],
    }
}

fn polygon(center: [f64; 2], radius: f64, k: usize, fixed: &[[f64; 2]]) -> Vec<Vec<[f64; 2]>> {
    (0..k)
        .map(|s| {
            let a = 2.0 * std::f64::consts::PI * s as f64 / k as f64;
            let mut c = vec![[center[0] + radius * a.cos(), center[1] + radius * a.sin()]];
            c.extend_from_slice(fixed);
            c
        })
        .collect()
}

fn criterion_9() -> Result<Vec<Check>> {
    let s = kz_system(2, &[1, 1, 1, 1])?;
    let fixed = [[1.0, 0.0], [-1.0, 0.0], [0.0, -3.0]];
    let lp = Path {
        points: polygon([1.6, 0.0], 0.5, 8, &fixed),
        closed: true,
    };
    let hol = parallel_transport(&s, &lp, 10_000)?.to_complex();
    let loop_err = hol
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(move |(j, x)| (x - if i == j { 1.0 } else { 0.0 }).norm())
        })
        .fold(0.0, f64::max);
    let start = vec![[0.0, 2.0], fixed[0], fixed[1], fixed[2]];
    let end = vec![[3.0, -1.0], fixed[0], fixed[1], fixed[2]];
    let route = |via: [f64; 2]| Path {
        points: vec![start.clone(), vec![via, fixed[0], fixed[1], fixed[2]], end.clone()],
        closed: false,
    };
    let ya = parallel_transport(&s, &route([2.0, 2.5]), 10_000)?.to_complex();
    let yb = parallel_transport(&s, &route([3.5, 1.0]), 10_000)?.to_complex();
    let homotopy = crate::kz::cmat_max_diff(&ya, &yb);
    let order = convergence_order(&s, &lp, 400)?;
    Ok(vec![
        float_check(
            "contractible loop holonomy",
            "10000 steps, tol 1e-6",
            loop_err,
            loop_err < 1e-6,
        ),
        float_check("homotopic paths", "10000 steps, tol 1e-6", homotopy, homotopy < 1e-6),
        Check {
            criterion: Some(9),
            name: "convergence order".into(),
            window: "400 steps, order >= 3.5".into(),
            residual_norm: format!("{order:.3}"),
            status: if order >= 3.5 { Status::Pass } else { Status::Fail },
            failures: vec![],
        },
    ])
}

fn criterion_10() -> Result<Vec<Check>> {
    let mut rec = Vec::new();
    let mut eps0 = Vec::new();
    for mu in 0..=1u32 {
        let g = gluing_tensor(1, mu, 4)?;
        let dim = mu as usize + 1;
        let mut b = Matrix::zeros(dim, dim);
        for j in 0..dim {
            b[(j, dim - 1 - j)] = int(if j % 2 == 0 { 1 } else { -1 });
        }
        if Some(g.term(0).clone()) != b.inverse().map(|m| m.transpose()) {
            eps0.push(format!("mu={mu}"));
        }
        for x in Sl2Gen::ALL {
            for n in -2i64..=2 {
                for d in 0..=4usize {
                    if !(0..=4).contains(&(d as i64 + n)) {
                        continue;
                    }
                    if !g.recursion_residual(x, n, d)?.is_zero() {
                        rec.push(format!("mu={mu} {x:?} n={n} d={d}"));
                    }
                }
            }
        }
    }
    Ok(vec![
        Check::cases(
            10,
            "gluing recursion",
            "A1, l = 1, mu in {0,1}, |n| <= 2, d <= 4".into(),
            rec,
        ),
        Check::cases(
            10,
            "constant term is dual pairing",
            "A1, l = 1, mu in {0,1}".into(),
            eps0,
        ),
    ])
}

fn criterion_11(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for level in 0..=2u32 {
        for n in 1..=4 {
            for labels in tuples(n, level) {
                let mut ranks = Vec::new();
                for _ in 0..3 {
                    let z = random_points(&mut rng, n);
                    ranks.push(npoint_block_rank(&CoinvariantProblem::new(level, labels.clone(), z))?);
                }
                if ranks.iter().any(|&r| r != ranks[0]) {
                    failures.push(format!("l={level} {labels:?}: {ranks:?}"));
                }
            }
        }
    }
    Ok(vec![Check::cases(
        11,
        "z-independence",
        format!("A1, l <= 2, n <= 4, 3 configurations, seed {seed}"),
        failures,
    )])
}

pub const CRITERIA: u32 = 11;

/// Runs one acceptance criterion. `seed` drives the random point configurations.
pub fn criterion(id: u32, seed: u64) -> Result<Vec<Check>> {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(seed),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(seed),
        _ => Err(crate::Error::InvalidArgument(format!(
            "criterion {id} is not in 1..={CRITERIA}"
        ))),
    }
}

pub fn all(seed: u64) -> Result<Report> {
    let mut checks = Vec::new();
    for id in 1..=CRITERIA {
        checks.extend(criterion(id, seed)?);
    }
    Ok(Report { checks })
}
