//! Induced modules of the affine algebra of sl₂ at level ℓ, their integrable
//! quotients and the Sugawara operators.
//!
//! `H̃(V_μ)` has the PBW basis `X_{κ_1} t^{−k_1} ⋯ X_{κ_r} t^{−k_r} ⊗ v` with
//! modes in non-increasing order. The action of any `X t^m` is computed by
//! straightening with `[X t^a, Y t^b] = [X, Y] t^{a+b} + a δ_{a+b,0} tr(XY) ℓ`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use num_traits::{One, Zero};

use super::{axpy, BasisKind, GradedBasis, GradedOperator, Monomial, SparseVec};
use crate::error::{Error, Result};
use crate::linalg::{int, rat, Matrix, Rational, Subspace};
use crate::oracle::{sl2_irrep_matrices, RepMatrices};

/// Chevalley basis of sl₂, in the order used for mode indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sl2Gen {
    E = 0,
    F = 1,
    H = 2,
}

impl Sl2Gen {
    pub const ALL: [Sl2Gen; 3] = [Sl2Gen::E, Sl2Gen::F, Sl2Gen::H];

    pub fn index(self) -> u8 {
        self as u8
    }

    fn from_index(i: u8) -> Sl2Gen {
        Sl2Gen::ALL[i as usize]
    }

    pub fn weight(self) -> i64 {
        match self {
            Sl2Gen::E => 2,
            Sl2Gen::F => -2,
            Sl2Gen::H => 0,
        }
    }

    /// The anti-involution `E ↔ F`, `H ↦ H`.
    pub fn sigma(self) -> Sl2Gen {
        match self {
            Sl2Gen::E => Sl2Gen::F,
            Sl2Gen::F => Sl2Gen::E,
            Sl2Gen::H => Sl2Gen::H,
        }
    }

    /// `[self, other]` in the basis.
    fn bracket(self, other: Sl2Gen) -> &'static [(Sl2Gen, i64)] {
        use Sl2Gen::*;
        match (self, other) {
            (E, F) => &[(H, 1)],
            (F, E) => &[(H, -1)],
            (H, E) => &[(E, 2)],
            (E, H) => &[(E, -2)],
            (H, F) => &[(F, -2)],
            (F, H) => &[(F, 2)],
            _ => &[],
        }
    }

    /// The trace form of the defining representation, with `(θ, θ) = 2`.
    fn pairing(self, other: Sl2Gen) -> i64 {
        use Sl2Gen::*;
        match (self, other) {
            (E, F) | (F, E) => 1,
            (H, H) => 2,
            _ => 0,
        }
    }
}

/// `Σ_κ X_κ ⊗ X^κ` for the trace form.
fn casimir_terms() -> [(Sl2Gen, Sl2Gen, Rational); 3] {
    [
        (Sl2Gen::E, Sl2Gen::F, int(1)),
        (Sl2Gen::F, Sl2Gen::E, int(1)),
        (Sl2Gen::H, Sl2Gen::H, rat(1, 2)),
    ]
}

const DUAL_COXETER: i64 = 2;

/// Weight-sorted basis data shared by the induced module and its quotient.
#[derive(Debug, Clone)]
struct WeightBlocks {
    /// per degree: weight → index range in the degree piece
    blocks: Vec<BTreeMap<i64, Range<usize>>>,
}

impl WeightBlocks {
    fn block(&self, n: usize, w: i64) -> Option<Range<usize>> {
        self.blocks.get(n)?.get(&w).cloned()
    }
}

/// `H̃(V_μ)` truncated at degree `d`, with the exact loop-algebra action.
#[derive(Debug)]
pub struct InducedModule {
    level: u32,
    mu: u32,
    rep: RepMatrices,
    basis: GradedBasis,
    weights: WeightBlocks,
    memo: RefCell<HashMap<(u8, i64, Monomial), SparseVec>>,
}

impl Clone for InducedModule {
    fn clone(&self) -> Self {
        InducedModule {
            level: self.level,
            mu: self.mu,
            rep: self.rep.clone(),
            basis: self.basis.clone(),
            weights: self.weights.clone(),
            memo: RefCell::new(HashMap::new()),
        }
    }
}

fn words(n: u32, max: (u32, u8), prefix: &mut Vec<(u32, u8)>, out: &mut Vec<Vec<(u32, u8)>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for k in (1..=n.min(max.0)).rev() {
        for g in (0..3u8).rev() {
            if (k, g) > max {
                continue;
            }
            prefix.push((k, g));
            words(n - k, (k, g), prefix, out);
            prefix.pop();
        }
    }
}

/// Builds `H̃(V_μ)` up to degree `d`.
pub fn induced_module(level: u32, mu: u32, d: usize) -> Result<InducedModule> {
    if mu > level {
        return Err(Error::LabelOutsideAlphabet {
            label: vec![mu as i64],
            level,
        });
    }
    let rep = sl2_irrep_matrices(mu);
    let mut pieces = Vec::new();
    let mut blocks = Vec::new();
    for n in 0..=d as u32 {
        let mut ws = Vec::new();
        words(n, (u32::MAX, u8::MAX), &mut Vec::new(), &mut ws);
        let mut piece: Vec<(i64, Monomial)> = ws
            .into_iter()
            .flat_map(|w| (0..=mu as usize).map(move |v| Monomial { modes: w.clone(), v }))
            .map(|m| (monomial_weight(mu, &m), m))
            .collect();
        piece.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut ranges: BTreeMap<i64, Range<usize>> = BTreeMap::new();
        for (i, (w, _)) in piece.iter().enumerate() {
            ranges.entry(*w).and_modify(|r| r.end = i + 1).or_insert(i..i + 1);
        }
        blocks.push(ranges);
        pieces.push(piece.into_iter().map(|(_, m)| m).collect());
    }
    Ok(InducedModule {
        level,
        mu,
        rep,
        basis: GradedBasis::new(BasisKind::InducedAffine { level, mu }, pieces),
        weights: WeightBlocks { blocks },
        memo: RefCell::new(HashMap::new()),
    })
}

fn monomial_weight(mu: u32, m: &Monomial) -> i64 {
    mu as i64 - 2 * m.v as i64
        + m.modes
            .iter()
            .map(|&(_, g)| Sl2Gen::from_index(g).weight())
            .sum::<i64>()
}

impl InducedModule {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mu(&self) -> u32 {
        self.mu
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn weight(&self, m: &Monomial) -> i64 {
        monomial_weight(self.mu, m)
    }

    /// Weights present in degree `n`, with their index ranges.
    pub fn weight_blocks(&self, n: usize) -> &BTreeMap<i64, Range<usize>> {
        &self.weights.blocks[n]
    }

    /// `X t^m` applied to a PBW monomial, exactly (no truncation).
    pub fn act(&self, x: Sl2Gen, m: i64, mono: &Monomial) -> SparseVec {
        let key = (x.index(), m, mono.clone());
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let out = self.straighten(x, m, mono);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    pub fn act_vec(&self, x: Sl2Gen, m: i64, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (mono, c) in v {
            axpy(&mut out, c, &self.act(x, m, mono));
        }
        out
    }

    fn straighten(&self, x: Sl2Gen, m: i64, mono: &Monomial) -> SparseVec {
        let mut out = SparseVec::new();
        if m < 0 {
            let mode = ((-m) as u32, x.index());
            if mono.modes.first().is_none_or(|&f| mode >= f) {
                out.insert(mono.with_mode(mode), Rational::one());
                return out;
            }
        }
        let Some((&(k1, g1), rest)) = mono.modes.split_first() else {
            if m == 0 {
                let mat = self.rep.basis()[x.index() as usize];
                for r in 0..self.rep.dim() {
                    let c = &mat[(r, mono.v)];
                    if !c.is_zero() {
                        out.insert(Monomial::vacuum(r), c.clone());
                    }
                }
            }
            return out;
        };
        let tail = Monomial {
            modes: rest.to_vec(),
            v: mono.v,
        };
        let (k1, y) = (k1 as i64, Sl2Gen::from_index(g1));
        // x·y·tail = y·(x·tail) + [x, y]·tail
        for (u, c) in &self.act(x, m, &tail) {
            axpy(&mut out, c, &self.act(y, -k1, u));
        }
        for &(z, coef) in x.bracket(y) {
            axpy(&mut out, &int(coef), &self.act(z, m - k1, &tail));
        }
        if m == k1 {
            let s = x.pairing(y) * m * self.level as i64;
            if s != 0 {
                let mut t = SparseVec::new();
                t.insert(tail, Rational::one());
                axpy(&mut out, &int(s), &t);
            }
        }
        out
    }

    /// `Ĉ(D_k) = ½ Σ_κ Σ_l :X_κ t^{k−l} X^κ t^l:` applied to a monomial.
    fn casimir_mode(&self, k: i64, mono: &Monomial) -> SparseVec {
        let n = mono.degree() as i64;
        let mut out = SparseVec::new();
        let lo = k.div_euclid(2) + 1;
        let pair = |a: i64, b: i64, weight: &Rational, out: &mut SparseVec| {
            for (x, y, c) in casimir_terms() {
                let inner = self.act(y, b, mono);
                axpy(out, &(weight * &c), &self.act_vec(x, a, &inner));
            }
        };
        for j in lo..=n {
            pair(k - j, j, &Rational::one(), &mut out);
        }
        if k % 2 == 0 {
            pair(k / 2, k / 2, &rat(1, 2), &mut out);
        }
        out
    }

    /// `T(D̂_k) = −Ĉ(D_k)/(ℓ + ȟ)` applied to a monomial.
    pub fn sugawara(&self, k: i64, mono: &Monomial) -> SparseVec {
        let c = self.casimir_mode(k, mono);
        let s = -Rational::new(1.into(), (self.level as i64 + DUAL_COXETER).into());
        let mut out = SparseVec::new();
        axpy(&mut out, &s, &c);
        out
    }

    /// Gram matrices of a pairing `⟨·,·⟩` with `right`, per degree and left weight,
    /// defined by `⟨X_κ t^{−k} a, b⟩ = sign(κ)·⟨a, X_{adj κ} t^{k} b⟩` and `deg0`.
    fn pairing_gram(
        &self,
        right: &InducedModule,
        deg0: &Matrix,
        adjoint: impl Fn(Sl2Gen) -> (Sl2Gen, i64),
        partner: impl Fn(i64) -> i64,
    ) -> Vec<BTreeMap<i64, Matrix>> {
        let mut grams: Vec<BTreeMap<i64, Matrix>> = Vec::new();
        let d = self.degree().min(right.degree());
        for n in 0..=d {
            let mut level_n = BTreeMap::new();
            for (&w, rows) in self.weight_blocks(n) {
                let Some(cols) = right.weights.block(n, partner(w)) else {
                    continue;
                };
                let mut g = Matrix::zeros(rows.len(), cols.len());
                if n == 0 {
                    for (i, a) in rows.clone().enumerate() {
                        for (j, b) in cols.clone().enumerate() {
                            let (va, vb) = (self.basis.piece(0)[a].v, right.basis.piece(0)[b].v);
                            g[(i, j)] = deg0[(va, vb)].clone();
                        }
                    }
                    level_n.insert(w, g);
                    continue;
                }
                let mut cache: HashMap<((u32, u8), usize), SparseVec> = HashMap::new();
                for (i, a) in rows.clone().enumerate() {
                    let am = &self.basis.piece(n)[a];
                    let (k, gi) = am.modes[0];
                    let x = Sl2Gen::from_index(gi);
                    let tail = Monomial {
                        modes: am.modes[1..].to_vec(),
                        v: am.v,
                    };
                    let nt = n - k as usize;
                    let wt = w - x.weight();
                    let tail_pos = self.basis.position(&tail).expect("tail is a basis monomial");
                    let trow = tail_pos - self.weights.block(nt, wt).expect("tail weight block").start;
                    let (ax, sign) = adjoint(x);
                    let Some(sub) = grams[nt].get(&wt) else {
                        continue;
                    };
                    let sub_cols = right.weights.block(nt, partner(wt)).expect("partner block");
                    for (j, b) in cols.clone().enumerate() {
                        let y = cache
                            .entry(((k, gi), b))
                            .or_insert_with(|| right.act(ax, k as i64, &right.basis.piece(n)[b]));
                        let mut acc = Rational::zero();
                        for (c, coef) in y.iter() {
                            let p = right.basis.position(c).expect("image lies in the basis");
                            let e = &sub[(trow, p - sub_cols.start)];
                            if !e.is_zero() {
                                acc += coef * e;
                            }
                        }
                        if sign < 0 {
                            acc = -acc;
                        }
                        g[(i, j)] = acc;
                    }
                }
                level_n.insert(w, g);
            }
            grams.push(level_n);
        }
        grams
    }

    /// Contravariant form for `E t^k ↔ F t^{−k}`, `H t^k ↔ H t^{−k}`, with
    /// `⟨v_j, v_j⟩ = binom(μ, j)` on `V_μ`.
    pub fn shapovalov_gram(&self) -> Vec<BTreeMap<i64, Matrix>> {
        let n = self.mu as usize + 1;
        let mut deg0 = Matrix::zeros(n, n);
        for j in 0..n {
            deg0[(j, j)] = int(binom(self.mu as i64, j as i64));
        }
        self.pairing_gram(self, &deg0, |x| (x.sigma(), 1), |w| w)
    }

    /// The pairing with `right` satisfying `b(X t^n u, u') + b(u, X t^{−n} u') = 0`
    /// and `b(v_j, v_{μ−j}) = (−1)^j binom(μ, j)`.
    pub fn invariant_pairing_gram(&self, right: &InducedModule) -> Vec<BTreeMap<i64, Matrix>> {
        self.pairing_gram(right, &invariant_pairing_deg0(self.mu), |x| (x, -1), |w| -w)
    }
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `b_μ` on `V_μ ⊗ V_μ`, pairing the highest and lowest weight vectors to 1.
pub(crate) fn invariant_pairing_deg0(mu: u32) -> Matrix {
    let n = mu as usize + 1;
    let mut b = Matrix::zeros(n, n);
    for j in 0..n {
        let s = if j % 2 == 0 { 1 } else { -1 };
        b[(j, n - 1 - j)] = int(s * binom(mu as i64, j as i64));
    }
    b
}

/// Anything spanned by monomials of an induced module: the module itself or a quotient.
pub trait AffineRep {
    fn module(&self) -> &InducedModule;
    fn basis(&self) -> &GradedBasis;
    /// Coordinates of a degree-`n` vector of the induced module.
    fn coords(&self, n: usize, v: &SparseVec) -> Vec<Rational>;

    fn degree(&self) -> usize {
        self.basis().degree()
    }

    fn dims(&self) -> Vec<usize> {
        self.basis().dims()
    }

    fn build_op(&self, shift: i64, action: &dyn Fn(&Monomial) -> SparseVec) -> Result<GradedOperator> {
        let window = GradedOperator::natural_window(self.degree(), shift)?;
        let basis = self.basis();
        Ok(GradedOperator::from_action(&self.dims(), shift, window, |n, i| {
            let img = action(&basis.piece(n)[i]);
            self.coords((n as i64 + shift) as usize, &img)
        }))
    }

    /// Matrix of `X t^m`.
    fn mode_op(&self, x: Sl2Gen, m: i64) -> Result<GradedOperator> {
        self.build_op(-m, &|mono| self.module().act(x, m, mono))
    }
}

impl AffineRep for InducedModule {
    fn module(&self) -> &InducedModule {
        self
    }

    fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    fn coords(&self, n: usize, v: &SparseVec) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.basis.piece(n).len()];
        for (m, c) in v {
            if m.degree() == n {
                if let Some(p) = self.basis.position(m) {
                    out[p] = c.clone();
                }
            }
        }
        out
    }
}

/// Matrix of the Sugawara operator `T(D̂_k)`, which lowers degree by `k`.
pub fn sugawara_op(rep: &dyn AffineRep, k: i64) -> Result<GradedOperator> {
    if k.unsigned_abs() as usize > rep.degree() {
        return Err(Error::EmptyWindow(format!(
            "|k| = {} exceeds degree {}",
            k.abs(),
            rep.degree()
        )));
    }
    let m = rep.module();
    rep.build_op(-k, &|mono| m.sugawara(k, mono))
}

/// `[T(D̂_k), X t^m] − m X t^{k+m}`, zero on its window.
pub fn check_sugawara_derivation(rep: &dyn AffineRep, k: i64, x: Sl2Gen, m: i64) -> Result<GradedOperator> {
    let t = sugawara_op(rep, k)?;
    let xm = rep.mode_op(x, m)?;
    let xkm = rep.mode_op(x, k + m)?;
    t.commutator(&xm)?.sub(&xkm.scale(&int(m)))
}

/// Central charge `ℓ·dim 𝔤/(ℓ + ȟ)` of the Sugawara construction.
pub fn sugawara_central_charge(level: u32) -> Rational {
    Rational::new((3 * level as i64).into(), (level as i64 + DUAL_COXETER).into())
}

/// `[T_k, T_l] − (l − k) T_{k+l} − δ_{k+l,0} (k³ − k)/12 · c`, zero on its window.
pub fn check_sugawara_bracket(rep: &dyn AffineRep, k: i64, l: i64) -> Result<GradedOperator> {
    let tk = sugawara_op(rep, k)?;
    let tl = sugawara_op(rep, l)?;
    let tkl = sugawara_op(rep, k + l)?;
    let mut res = tk.commutator(&tl)?.sub(&tkl.scale(&int(l - k)))?;
    if k + l == 0 {
        let c = sugawara_central_charge(rep.module().level()) * rat(k * k * k - k, 12);
        res = res.sub(&GradedOperator::identity(res.dims()).scale(&c))?;
    }
    Ok(res)
}

/// `c_μ/(2(ℓ + ȟ))` for the sl₂ label `μ`, with `c_μ = μ(μ + 2)/2`.
pub fn conformal_weight(level: u32, mu: u32) -> Rational {
    let c = rat((mu * (mu + 2)) as i64, 2);
    c / int(2 * (level as i64 + DUAL_COXETER))
}

/// `T(D̂_0) + (n + c_μ/(2(ℓ + ȟ)))` on each degree `n`, zero when the spectrum is right.
pub fn check_l0_spectrum(rep: &dyn AffineRep) -> Result<GradedOperator> {
    let l0 = sugawara_op(rep, 0)?;
    let h = conformal_weight(rep.module().level(), rep.module().mu());
    let dims = rep.dims();
    let expected = GradedOperator::from_action(&dims, 0, l0.window(), |n, i| {
        let mut col = vec![Rational::zero(); dims[n]];
        col[i] = -(int(n as i64) + &h);
        col
    });
    l0.sub(&expected)
}

/// Weight, rows of the module block, radical, and offset in the quotient basis.
type WeightBlock = (i64, Range<usize>, Subspace, usize);

/// The integrable quotient `ℍ_ℓ(V_μ)`: `H̃(V_μ)` modulo the radical of the
/// contravariant form, degree by degree.
#[derive(Debug, Clone)]
pub struct IntegrableQuotient {
    module: InducedModule,
    /// per degree: (weight, block range in the module, radical, offset in the quotient piece)
    blocks: Vec<Vec<WeightBlock>>,
    basis: GradedBasis,
}

/// Builds the integrable quotient of `module`.
pub fn integrable_quotient(module: InducedModule) -> Result<IntegrableQuotient> {
    let grams = module.shapovalov_gram();
    let mut blocks = Vec::new();
    let mut pieces = Vec::new();
    for (n, gram_n) in grams.iter().enumerate() {
        let mut piece = Vec::new();
        let mut bl = Vec::new();
        // highest weight first, matching the order of the module pieces
        for (&w, range) in module.weight_blocks(n).iter().rev() {
            let g = &gram_n[&w];
            let radical = Subspace::spanned_by(range.len(), g.transpose().kernel());
            if n == 0 && radical.rank() > 0 {
                return Err(Error::Invariant("contravariant form is singular on V_μ".into()));
            }
            let offset = piece.len();
            for i in radical.complement_indices() {
                piece.push(module.basis.piece(n)[range.start + i].clone());
            }
            bl.push((w, range.clone(), radical, offset));
        }
        blocks.push(bl);
        pieces.push(piece);
    }
    let basis = GradedBasis::new(
        BasisKind::IntegrableQuotient {
            level: module.level,
            mu: module.mu,
        },
        pieces,
    );
    Ok(IntegrableQuotient { module, blocks, basis })
}

impl IntegrableQuotient {
    /// Quotient dimension of each weight space, per degree.
    pub fn weight_dims(&self) -> Vec<BTreeMap<i64, usize>> {
        self.blocks
            .iter()
            .map(|bl| bl.iter().map(|(w, _, r, _)| (*w, r.codim())).collect())
            .collect()
    }

    /// Per weight block of degree `n`: weight, representative positions inside
    /// the module block, and offset in the quotient piece.
    pub(crate) fn block_reps(&self, n: usize) -> Vec<(i64, Vec<usize>, usize)> {
        self.blocks[n]
            .iter()
            .map(|(w, _, r, off)| (*w, r.complement_indices(), *off))
            .collect()
    }

    /// Whether the class of `v` (a degree-`n` vector of the induced module) vanishes.
    pub fn is_null(&self, n: usize, v: &SparseVec) -> bool {
        self.coords(n, v).iter().all(Zero::is_zero)
    }
}

impl AffineRep for IntegrableQuotient {
    fn module(&self) -> &InducedModule {
        &self.module
    }

    fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    fn coords(&self, n: usize, v: &SparseVec) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.basis.piece(n).len()];
        let mut by_weight: HashMap<i64, Vec<(usize, &Rational)>> = HashMap::new();
        for (m, c) in v {
            if m.degree() != n {
                continue;
            }
            if let Some(p) = self.module.basis.position(m) {
                by_weight.entry(self.module.weight(m)).or_default().push((p, c));
            }
        }
        for (w, range, radical, offset) in &self.blocks[n] {
            let Some(entries) = by_weight.get(w) else {
                continue;
            };
            let mut dense = vec![Rational::zero(); range.len()];
            for &(p, c) in entries {
                dense[p - range.start] = c.clone();
            }
            for (i, x) in radical.quotient_coords(&dense).into_iter().enumerate() {
                out[offset + i] = x;
            }
        }
        out
    }
}

/// Quotient weight-space dimensions computed without any bilinear form:
/// `N_n = {u : X t u ∈ N_{n−1} for every X}`, `N_0 = 0`.
pub fn annihilator_quotient_dims(module: &InducedModule) -> Vec<BTreeMap<i64, usize>> {
    let mut radicals: Vec<HashMap<i64, Subspace>> = Vec::new();
    let mut out = Vec::new();
    for n in 0..=module.degree() {
        let mut rad_n = HashMap::new();
        let mut dims_n = BTreeMap::new();
        for (&w, range) in module.weight_blocks(n) {
            let sub = if n == 0 {
                Subspace::zero(range.len())
            } else {
                // stack the maps u ↦ [X t u] into quotients of degree n−1
                let mut rows: Vec<Vec<Rational>> = Vec::new();
                let mut images: Vec<Vec<Vec<Rational>>> = Vec::new();
                for x in Sl2Gen::ALL {
                    let tw = w + x.weight();
                    let (Some(trange), Some(trad)) = (module.weights.block(n - 1, tw), radicals[n - 1].get(&tw)) else {
                        continue;
                    };
                    let trad: &Subspace = trad;
                    let cols: Vec<Vec<Rational>> = range
                        .clone()
                        .map(|i| {
                            let img = module.act(x, 1, &module.basis.piece(n)[i]);
                            let mut dense = vec![Rational::zero(); trange.len()];
                            for (m, c) in img {
                                let p = module.basis.position(&m).expect("image in basis");
                                dense[p - trange.start] = c;
                            }
                            trad.quotient_coords(&dense)
                        })
                        .collect();
                    images.push(cols);
                }
                for cols in &images {
                    let h = cols.first().map_or(0, Vec::len);
                    for r in 0..h {
                        rows.push(cols.iter().map(|c| c[r].clone()).collect());
                    }
                }
                let m = Matrix::from_rows(range.len(), rows);
                Subspace::spanned_by(range.len(), m.kernel())
            };
            dims_n.insert(w, sub.codim());
            rad_n.insert(w, sub);
        }
        radicals.push(rad_n);
        out.push(dims_n);
    }
    out
}
