//! Seeded random network models parameterized by target edge density, and
//! the attribute kernel that turns a topology into a similarity matrix.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView1;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SimilarityMatrix;

/// Default Watts–Strogatz rewiring probability.
pub const DEFAULT_REWIRE: f64 = 0.1;

// Guards products such as 0.29 * 100 = 28.999999999999996 against flooring
// one below the intended count.
const COUNT_EPS: f64 = 1e-9;

/// A `(seed, stream)` pair naming one reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// An independent stream derived from this one; `part` distinguishes
    /// siblings (structure, train noise, test noise, ...).
    pub fn child(&self, part: u64) -> Self {
        Self { seed: splitmix64(self.seed ^ splitmix64(self.stream.wrapping_add(1))), stream: part }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Simple undirected graph: no self-loops, no duplicate edges. Edges are
/// stored as sorted `(i, j)` pairs with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphTopology {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphTopology {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidArgument(format!("bad edge ({a}, {b}) for n = {n}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(Self { n, edges: set.into_iter().collect() })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphKind {
    ErdosRenyi,
    BarabasiAlbert,
    WattsStrogatz,
}

impl GraphKind {
    pub fn short_name(self) -> &'static str {
        match self {
            GraphKind::ErdosRenyi => "er",
            GraphKind::BarabasiAlbert => "ba",
            GraphKind::WattsStrogatz => "ws",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" | "erdos-renyi" => Ok(GraphKind::ErdosRenyi),
            "ba" | "barabasi-albert" => Ok(GraphKind::BarabasiAlbert),
            "ws" | "watts-strogatz" => Ok(GraphKind::WattsStrogatz),
            other => Err(Error::InvalidArgument(format!("unknown graph type {other:?}"))),
        }
    }
}

/// Dispatches to the generator for `kind`.
pub fn generate<R: Rng + ?Sized>(
    kind: GraphKind,
    n: usize,
    rho: f64,
    rewire: f64,
    rng: &mut R,
) -> Result<GraphTopology> {
    match kind {
        GraphKind::ErdosRenyi => gen_erdos_renyi(n, rho, rng),
        GraphKind::BarabasiAlbert => gen_barabasi_albert(n, rho, rng),
        GraphKind::WattsStrogatz => gen_watts_strogatz(n, rho, rewire, rng),
    }
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// `⌊rho · n(n-1)/2⌋`.
pub fn target_edge_count(n: usize, rho: f64) -> usize {
    (rho * pair_count(n) as f64 + COUNT_EPS).floor() as usize
}

fn check_density(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("density {rho} outside (0, 1]")));
    }
    Ok(())
}

/// `G(n, M)` with `M = ⌊rho · n(n-1)/2⌋` edges chosen uniformly.
pub fn gen_erdos_renyi<R: Rng + ?Sized>(n: usize, rho: f64, rng: &mut R) -> Result<GraphTopology> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    check_density(rho)?;
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let m = target_edge_count(n, rho).min(pairs.len());
    let chosen = index::sample(rng, pairs.len(), m);
    GraphTopology::new(n, chosen.iter().map(|p| pairs[p]))
}

/// Even ring degree `2 · round(rho (n-1) / 2)` used by [`gen_watts_strogatz`].
pub fn ring_degree(n: usize, rho: f64) -> usize {
    2 * (rho * (n - 1) as f64 / 2.0).round() as usize
}

/// Ring lattice of even degree `k` with every lattice edge rewired
/// independently with probability `p_rewire`.
pub fn gen_watts_strogatz<R: Rng + ?Sized>(
    n: usize,
    rho: f64,
    p_rewire: f64,
    rng: &mut R,
) -> Result<GraphTopology> {
    check_density(rho)?;
    if !(0.0..=1.0).contains(&p_rewire) {
        return Err(Error::InvalidArgument(format!("rewiring probability {p_rewire}")));
    }
    let k = ring_degree(n, rho);
    if k < 2 || k >= n {
        return Err(Error::DegreeOutOfRange { k, n });
    }
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for j in 1..=k / 2 {
            let v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for j in 1..=k / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !rng.random_bool(p_rewire) || !adj[u].contains(&v) || adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.random_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
    GraphTopology::new(n, edges)
}

/// Attachment count for a Barabási–Albert graph on `n` vertices whose edge
/// count `m(n - m)` is closest to the density target, capped at `⌊n/2⌋`.
pub fn ba_attachment(n: usize, rho: f64) -> usize {
    let target = target_edge_count(n, rho) as i64;
    (1..=(n / 2).max(1))
        .min_by_key(|&m| ((m * (n - m)) as i64 - target).abs())
        .expect("nonempty range")
}

/// Preferential attachment seeded with a star on `m + 1` vertices; every
/// later vertex attaches to `m` distinct existing vertices chosen with
/// probability proportional to degree. Produces exactly `m(n - m)` edges.
pub fn gen_barabasi_albert<R: Rng + ?Sized>(n: usize, rho: f64, rng: &mut R) -> Result<GraphTopology> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
    }
    check_density(rho)?;
    let m = ba_attachment(n, rho);
    let mut edges = Vec::with_capacity(m * (n - m));
    // Each vertex appears once per incident edge.
    let mut repeated = Vec::with_capacity(2 * m * (n - m));
    for leaf in 1..=m {
        edges.push((0, leaf));
        repeated.extend([0, leaf]);
    }
    let mut targets = BTreeSet::new();
    for source in m + 1..n {
        targets.clear();
        while targets.len() < m {
            targets.insert(repeated[rng.random_range(0..repeated.len())]);
        }
        for &t in &targets {
            edges.push((t, source));
            repeated.extend([t, source]);
        }
    }
    GraphTopology::new(n, edges)
}

/// Similarity matrix with `w(i, j) = exp(-|y_i - y_j|)` on every edge.
pub fn assign_weights(g: &GraphTopology, y_noisy: ArrayView1<'_, f64>) -> Result<SimilarityMatrix> {
    if y_noisy.len() != g.order() {
        return Err(Error::DimensionMismatch { expected: g.order(), found: y_noisy.len() });
    }
    let weighted: Vec<_> = g
        .edges()
        .iter()
        .map(|&(i, j)| (i, j, attribute_kernel(y_noisy[i], y_noisy[j])))
        .collect();
    SimilarityMatrix::from_edges(g.order(), &weighted)
}

/// Symmetrized attribute kernel `exp(-|a - b|)`.
pub fn attribute_kernel(a: f64, b: f64) -> f64 {
    (-(a - b).abs()).exp()
}
