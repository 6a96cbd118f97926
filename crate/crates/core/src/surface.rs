//! Marked surfaces and their conformal-block dimensions.
//!
//! A surface is cut into 3-holed spheres along the edges of a trivalent graph.
//! The dimension is a state sum over edge labelings: an internal edge carries
//! `μ` at one end and `μ*` at the other, a leg carries its boundary label, and
//! every vertex contributes the fusion coefficient of its three labels.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{FusionAlphabet, FusionRing};
use crate::liealg::{DominantWeight, RootSystem};
use crate::linalg::{fmt_rational, int, Rational};

/// A trivalent graph with external legs.
///
/// `edges[e] = [u, v]` joins vertices `u` and `v` (`u == v` is a loop);
/// `legs[k]` is the vertex carrying boundary component `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivalentGraph {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub legs: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Leg(usize),
    Head(usize),
    Tail(usize),
}

impl TrivalentGraph {
    pub fn new(vertices: usize, edges: Vec<[usize; 2]>, legs: Vec<usize>) -> Result<Self> {
        let g = TrivalentGraph { vertices, edges, legs };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices == 0 {
            return Err(Error::IncompatibleGraph("graph has no vertices".into()));
        }
        let mut degree = vec![0usize; self.vertices];
        for &[u, v] in &self.edges {
            if u >= self.vertices || v >= self.vertices {
                return Err(Error::IncompatibleGraph(format!(
                    "edge ({u},{v}) names a missing vertex"
                )));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        for &v in &self.legs {
            if v >= self.vertices {
                return Err(Error::IncompatibleGraph(format!("leg on missing vertex {v}")));
            }
            degree[v] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != 3) {
            return Err(Error::IncompatibleGraph(format!("vertex {v} has degree {}", degree[v])));
        }
        // connectivity
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &[u, v] in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..self.vertices).any(|v| find(&mut parent, v) != root) {
            return Err(Error::IncompatibleGraph("graph is disconnected".into()));
        }
        Ok(())
    }

    /// First Betti number.
    pub fn loop_rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Two vertices joined by three edges.
    pub fn theta() -> Self {
        TrivalentGraph {
            vertices: 2,
            edges: vec![[0, 1], [0, 1], [0, 1]],
            legs: vec![],
        }
    }

    /// Two loops joined by a bridge.
    pub fn dumbbell() -> Self {
        TrivalentGraph {
            vertices: 2,
            edges: vec![[0, 0], [0, 1], [1, 1]],
            legs: vec![],
        }
    }

    /// Four legs on two vertices; `pairs` lists which legs share the first vertex.
    pub fn four_holed_sphere(pair: [usize; 2]) -> Result<Self> {
        if pair[0] == pair[1] || pair.iter().any(|&k| k > 3) {
            return Err(Error::InvalidArgument(format!("bad leg pairing {pair:?}")));
        }
        let legs = (0..4).map(|k| if pair.contains(&k) { 0 } else { 1 }).collect();
        TrivalentGraph::new(2, vec![[0, 1]], legs)
    }

    /// The canonical graph: a chain of vertices carrying the legs first and
    /// then one loop per handle. `None` for the base-case surfaces, which have
    /// no trivalent decomposition.
    pub fn caterpillar(genus: usize, legs: usize) -> Option<Self> {
        let pendants = genus + legs;
        match (pendants, legs) {
            (0 | 1, _) | (2, 2) => return None,
            (2, 1) => {
                return Some(TrivalentGraph {
                    vertices: 1,
                    edges: vec![[0, 0]],
                    legs: vec![0],
                })
            }
            (2, _) => return Some(TrivalentGraph::dumbbell()),
            _ => {}
        }
        let mut vertices = pendants - 2;
        let mut edges: Vec<[usize; 2]> = (1..vertices).map(|v| [v - 1, v]).collect();
        let last = vertices - 1;
        let mut slots = vec![0, 0];
        slots.extend(1..last);
        slots.extend(if last > 0 { vec![last, last] } else { vec![0] });
        let mut leg_at = vec![0; legs];
        for (k, &attach) in slots.iter().enumerate() {
            if k < legs {
                leg_at[k] = attach;
            } else {
                let t = vertices;
                vertices += 1;
                edges.push([attach, t]);
                edges.push([t, t]);
            }
        }
        Some(TrivalentGraph {
            vertices,
            edges,
            legs: leg_at,
        })
    }

    fn slots(&self) -> Vec<Vec<Slot>> {
        let mut s = vec![Vec::with_capacity(3); self.vertices];
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            s[u].push(Slot::Head(e));
            s[v].push(Slot::Tail(e));
        }
        for (k, &v) in self.legs.iter().enumerate() {
            s[v].push(Slot::Leg(k));
        }
        s
    }
}

/// A closed oriented surface of genus `g` with labeled boundary components.
#[derive(Debug, Clone)]
pub struct MarkedSurface {
    ring: Arc<FusionRing>,
    genus: u32,
    boundary: Vec<usize>,
}

impl MarkedSurface {
    pub fn new(rs: &RootSystem, level: u32, genus: u32, boundary: &[DominantWeight]) -> Result<Self> {
        let ring = Arc::new(FusionRing::build(&FusionAlphabet::new(rs, level))?);
        Self::with_ring(ring, genus, boundary)
    }

    pub fn with_ring(ring: Arc<FusionRing>, genus: u32, boundary: &[DominantWeight]) -> Result<Self> {
        let idx = boundary
            .iter()
            .map(|w| ring.alphabet().index_of(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(MarkedSurface {
            ring,
            genus,
            boundary: idx,
        })
    }

    /// Same as [`MarkedSurface::with_ring`] with labels given as alphabet indices.
    pub fn from_indices(ring: Arc<FusionRing>, genus: u32, boundary: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = boundary.iter().find(|&&i| i >= ring.size()) {
            return Err(Error::InvalidArgument(format!("label index {bad} out of range")));
        }
        Ok(MarkedSurface { ring, genus, boundary })
    }

    pub fn ring(&self) -> &Arc<FusionRing> {
        &self.ring
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn boundary_indices(&self) -> &[usize] {
        &self.boundary
    }

    pub fn boundary_labels(&self) -> Vec<DominantWeight> {
        self.boundary
            .iter()
            .map(|&i| self.ring.alphabet().label(i).clone())
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary.len() as i64
    }

    fn base_case(&self) -> Option<u64> {
        let a = self.ring.alphabet();
        match (self.genus, self.boundary.as_slice()) {
            (0, []) => Some(1),
            (0, [l]) => Some((*l == a.trivial()) as u64),
            (0, [l, m]) => Some((*m == a.dual_index(*l)) as u64),
            (1, []) => Some(self.ring.size() as u64),
            _ => None,
        }
    }

    fn check_graph(&self, graph: &TrivalentGraph) -> Result<()> {
        graph.validate()?;
        if graph.legs.len() != self.boundary.len() {
            return Err(Error::IncompatibleGraph(format!(
                "graph has {} legs, surface has {} boundary components",
                graph.legs.len(),
                self.boundary.len()
            )));
        }
        if graph.loop_rank() != self.genus as usize {
            return Err(Error::IncompatibleGraph(format!(
                "graph has loop rank {}, surface has genus {}",
                graph.loop_rank(),
                self.genus
            )));
        }
        Ok(())
    }
}

/// Dimension of the space of conformal blocks.
pub fn block_dimension(surface: &MarkedSurface, graph: Option<&TrivalentGraph>) -> Result<u64> {
    if let Some(d) = surface.base_case() {
        if graph.is_some() {
            return Err(Error::IncompatibleGraph(
                "sphere, disk, cylinder and torus admit no trivalent decomposition".into(),
            ));
        }
        return Ok(d);
    }
    let canonical;
    let graph = match graph {
        Some(g) => {
            surface.check_graph(g)?;
            g
        }
        None => {
            canonical = TrivalentGraph::caterpillar(surface.genus as usize, surface.boundary.len())
                .ok_or_else(|| Error::Invariant("no canonical graph for a non-base surface".into()))?;
            surface.check_graph(&canonical)?;
            &canonical
        }
    };
    Ok(state_sum(&surface.ring, graph, &surface.boundary))
}

fn state_sum(ring: &FusionRing, graph: &TrivalentGraph, boundary: &[usize]) -> u64 {
    let slots = graph.slots();
    let alpha = ring.alphabet();
    // a vertex can be evaluated once its highest-numbered edge is labeled
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); graph.edges.len() + 1];
    for (v, s) in slots.iter().enumerate() {
        let last = s
            .iter()
            .filter_map(|sl| match sl {
                Slot::Head(e) | Slot::Tail(e) => Some(e + 1),
                Slot::Leg(_) => None,
            })
            .max()
            .unwrap_or(0);
        ready[last].push(v);
    }
    let label = |sl: Slot, edge_labels: &[usize]| match sl {
        Slot::Leg(k) => boundary[k],
        Slot::Head(e) => edge_labels[e],
        Slot::Tail(e) => alpha.dual_index(edge_labels[e]),
    };
    let weight = |v: usize, edge_labels: &[usize]| {
        let s = &slots[v];
        ring.get(
            label(s[0], edge_labels),
            label(s[1], edge_labels),
            label(s[2], edge_labels),
        )
    };

    fn go(
        depth: usize,
        labels: &mut Vec<usize>,
        n: usize,
        ready: &[Vec<usize>],
        weight: &dyn Fn(usize, &[usize]) -> u64,
    ) -> u64 {
        let mut w = 1u64;
        for &v in &ready[depth] {
            w *= weight(v, labels);
            if w == 0 {
                return 0;
            }
        }
        if depth == ready.len() - 1 {
            return w;
        }
        let mut total = 0;
        for a in 0..n {
            labels.push(a);
            total += go(depth + 1, labels, n, ready, weight);
            labels.pop();
        }
        w * total
    }

    let mut labels = Vec::with_capacity(graph.edges.len());
    go(0, &mut labels, ring.size(), &ready, &weight)
}

/// Whether two decompositions of the same surface give the same dimension.
pub fn decomposition_independence(surface: &MarkedSurface, g1: &TrivalentGraph, g2: &TrivalentGraph) -> Result<bool> {
    Ok(block_dimension(surface, Some(g1))? == block_dimension(surface, Some(g2))?)
}

/// Dimension of a disconnected surface: the product over components.
pub fn disconnected_block_dimension(components: &[MarkedSurface]) -> Result<u64> {
    components
        .iter()
        .try_fold(1u64, |acc, s| Ok(acc * block_dimension(s, None)?))
}

/// `Σ_μ dim(g − 1, labels ∪ {μ, μ*})`, the dimension after cutting one handle.
pub fn factorization_sum(surface: &MarkedSurface) -> Result<u64> {
    if surface.genus == 0 {
        return Err(Error::InvalidArgument(
            "cannot cut a handle of a genus-0 surface".into(),
        ));
    }
    let a = surface.ring.alphabet();
    let mut total = 0;
    for mu in 0..a.len() {
        let mut b = surface.boundary.clone();
        b.push(mu);
        b.push(a.dual_index(mu));
        let cut = MarkedSurface::from_indices(surface.ring.clone(), surface.genus - 1, b)?;
        total += block_dimension(&cut, None)?;
    }
    Ok(total)
}

/// Drops every boundary component labeled by the trivial weight.
pub fn remove_trivial_labels(surface: &MarkedSurface) -> MarkedSurface {
    let triv = surface.ring.alphabet().trivial();
    MarkedSurface {
        ring: surface.ring.clone(),
        genus: surface.genus,
        boundary: surface.boundary.iter().copied().filter(|&l| l != triv).collect(),
    }
}

/// The Dehn-twist eigenvalue `exp(−iπ r)` with `0 ≤ r < 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistEigenvalue {
    exponent: Rational,
}

impl TwistEigenvalue {
    pub fn from_exponent(r: &Rational) -> Self {
        let two = int(2);
        let q = (r / &two).floor();
        TwistEigenvalue { exponent: r - q * two }
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    /// Multiplicative order of the eigenvalue.
    pub fn order(&self) -> u64 {
        let half = &self.exponent / int(2);
        half.denom().to_u64().expect("small order")
    }

    pub fn to_complex(&self) -> Complex64 {
        let r = crate::linalg::to_f64(&self.exponent);
        Complex64::from_polar(1.0, -std::f64::consts::PI * r)
    }

    /// `(re, im)` when the eigenvalue is one of `1, −i, −1, i`.
    pub fn as_gaussian(&self) -> Option<(i64, i64)> {
        let four = (&self.exponent * int(2)).to_integer();
        if int(four.to_i64()?) != &self.exponent * int(2) {
            return None;
        }
        Some(match four.to_i64()? {
            0 => (1, 0),
            1 => (0, -1),
            2 => (-1, 0),
            3 => (0, 1),
            _ => return None,
        })
    }
}

impl fmt::Display for TwistEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.exponent;
        if r.is_zero() {
            return write!(f, "1");
        }
        if r.is_one() {
            return write!(f, "-1");
        }
        let (p, q) = (r.numer(), r.denom());
        match (p.is_one(), q.is_one()) {
            (true, _) => write!(f, "exp(-i*pi/{q})"),
            (false, true) => write!(f, "exp(-i*pi*{p})"),
            (false, false) => write!(f, "exp(-i*pi*{p}/{q})"),
        }
    }
}

impl Serialize for TwistEigenvalue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TwistEigenvalue", 2)?;
        st.serialize_field("exponent", &fmt_rational(&self.exponent))?;
        st.serialize_field("eigenvalue", &self.to_string())?;
        st.end()
    }
}

/// Eigenvalue of the Dehn twist around a boundary labeled `μ`.
pub fn dehn_twist_eigenvalue(rs: &RootSystem, level: u32, mu: &DominantWeight) -> Result<TwistEigenvalue> {
    if rs.level_of(mu)? > level {
        return Err(Error::LabelOutsideAlphabet {
            label: mu.coords().to_vec(),
            level,
        });
    }
    let c = rs.casimir_eigenvalue(mu)?;
    let t = TwistEigenvalue::from_exponent(&(c / int(level as i64 + rs.dual_coxeter() as i64)));
    debug_assert!(!t.exponent.is_negative());
    Ok(t)
}

/// Bound on the denominator of every twist exponent at this level.
pub fn twist_denominator_bound(rs: &RootSystem, level: u32) -> i64 {
    rs.form_denominator() * (level as i64 + rs.dual_coxeter() as i64)
}

/// Weight `ℓ·dim 𝔤 / (2(ℓ + ȟ))` of the projective connection.
pub fn connection_weight(rs: &RootSystem, level: u32) -> Rational {
    let num = level as i64 * rs.dim_algebra() as i64;
    Rational::new(num.into(), (2 * (level as i64 + rs.dual_coxeter() as i64)).into())
}
