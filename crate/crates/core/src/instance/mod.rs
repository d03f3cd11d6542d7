//! Weighted complete-graph instances and random edge colorings.

mod io;
mod seed;

use rand::distributions::Open01;
use rand::Rng;

pub use io::{load, parse, render, save};
pub use seed::{splitmix64, SeedSpec, Stream, RNG_VERSION};

use crate::error::{Error, Result};

/// Canonical index of the unordered pair `{i, j}`, `i < j`:
/// `id(i, j) = j (j - 1) / 2 + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop has no edge id");
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        EdgeId(j * (j - 1) / 2 + i)
    }

    pub fn index(self) -> usize {
        self.0
    }

    /// Inverse of [`EdgeId::new`]; returns `(i, j)` with `i < j`.
    pub fn endpoints(self) -> (usize, usize) {
        let id = self.0;
        // j is the largest integer with j(j-1)/2 <= id
        let mut j = ((1.0 + (1.0 + 8.0 * id as f64).sqrt()) / 2.0) as usize;
        while j * (j - 1) / 2 > id {
            j -= 1;
        }
        while (j + 1) * j / 2 <= id {
            j += 1;
        }
        (id - j * (j - 1) / 2, j)
    }
}

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `n` points in `[0, scale]^2`; edge cost is Euclidean distance.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanInstance {
    pub points: Vec<[f64; 2]>,
    pub scale: f64,
    pub seed: u64,
}

impl EuclideanInstance {
    pub fn new(points: Vec<[f64; 2]>, scale: f64) -> Self {
        Self {
            points,
            scale,
            seed: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        let (p, q) = (self.points[i], self.points[j]);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    /// The same point set rescaled to a square of side `side`.
    pub fn rescaled(&self, side: f64) -> Self {
        let f = side / self.scale;
        Self {
            points: self.points.iter().map(|p| [p[0] * f, p[1] * f]).collect(),
            scale: side,
            seed: self.seed,
        }
    }
}

/// Symmetric i.i.d. costs, stored by [`EdgeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct UniformCostInstance {
    n: usize,
    costs: Vec<f64>,
    pub seed: u64,
}

impl UniformCostInstance {
    /// Builds from costs listed in `EdgeId` order.
    pub fn from_edge_costs(n: usize, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != edge_count(n) {
            return Err(Error::Contract(format!(
                "{} costs given for {} edges",
                costs.len(),
                edge_count(n)
            )));
        }
        Ok(Self { n, costs, seed: 0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.costs[EdgeId::new(i, j).0]
        }
    }

    pub fn edge_costs(&self) -> &[f64] {
        &self.costs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Euclidean(EuclideanInstance),
    Uniform(UniformCostInstance),
}

impl Instance {
    pub fn n(&self) -> usize {
        match self {
            Instance::Euclidean(e) => e.n(),
            Instance::Uniform(u) => u.n(),
        }
    }

    pub fn edge_count(&self) -> usize {
        edge_count(self.n())
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> f64 {
        match self {
            Instance::Euclidean(e) => e.dist(i, j),
            Instance::Uniform(u) => u.cost(i, j),
        }
    }

    #[inline]
    pub fn edge_cost(&self, e: EdgeId) -> f64 {
        match self {
            Instance::Uniform(u) => u.costs[e.0],
            Instance::Euclidean(_) => {
                let (i, j) = e.endpoints();
                self.cost(i, j)
            }
        }
    }

    /// All edge costs in `EdgeId` order.
    pub fn all_edge_costs(&self) -> Vec<f64> {
        match self {
            Instance::Uniform(u) => u.costs.clone(),
            Instance::Euclidean(e) => {
                let n = e.n();
                let mut out = Vec::with_capacity(edge_count(n));
                for j in 1..n {
                    for i in 0..j {
                        out.push(e.dist(i, j));
                    }
                }
                out
            }
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Instance::Euclidean(e) => e.seed,
            Instance::Uniform(u) => u.seed,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Euclidean(_) => "euclid",
            Instance::Uniform(_) => "uniform",
        }
    }

    pub fn as_euclidean(&self) -> Option<&EuclideanInstance> {
        match self {
            Instance::Euclidean(e) => Some(e),
            Instance::Uniform(_) => None,
        }
    }

    /// Sum of `cost` over the given edges, accumulated in ascending id order so
    /// that equal edge sets always report bit-identical totals.
    pub fn total_cost(&self, edges: &[EdgeId]) -> f64 {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        sorted.iter().map(|&e| self.edge_cost(e)).sum()
    }
}

impl From<EuclideanInstance> for Instance {
    fn from(e: EuclideanInstance) -> Self {
        Instance::Euclidean(e)
    }
}

impl From<UniformCostInstance> for Instance {
    fn from(u: UniformCostInstance) -> Self {
        Instance::Uniform(u)
    }
}

/// Color of every edge of `K_n`, indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    q: usize,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(q: usize, colors: Vec<u32>) -> Result<Self> {
        if q == 0 && !colors.is_empty() {
            return Err(Error::InvalidPalette {
                edges: colors.len(),
            });
        }
        if let Some((e, &c)) = colors.iter().enumerate().find(|(_, &c)| c as usize >= q) {
            return Err(Error::Contract(format!(
                "edge {e} has color {c} outside palette of size {q}"
            )));
        }
        Ok(Self { q, colors })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn color(&self, e: EdgeId) -> u32 {
        self.colors[e.0]
    }

    #[inline]
    pub fn color_of(&self, i: usize, j: usize) -> u32 {
        self.colors[EdgeId::new(i, j).0]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Checks that this coloring covers exactly the edges of `K_n`.
    pub fn check_covers(&self, n: usize) -> Result<()> {
        if self.colors.len() != edge_count(n) {
            return Err(Error::Contract(format!(
                "coloring has {} entries, K_{n} has {} edges",
                self.colors.len(),
                edge_count(n)
            )));
        }
        Ok(())
    }
}

/// `n` i.i.d. uniform points in `[0, scale]^2`.
pub fn gen_euclidean(n: usize, scale: f64, seed: SeedSpec) -> EuclideanInstance {
    let mut rng = seed.rng(Stream::Geometry);
    let points = (0..n)
        .map(|_| [rng.gen::<f64>() * scale, rng.gen::<f64>() * scale])
        .collect();
    EuclideanInstance {
        points,
        scale,
        seed: seed.master,
    }
}

/// i.i.d. `U(0, 1)` costs on the edges of `K_n`.
pub fn gen_uniform_costs(n: usize, seed: SeedSpec) -> UniformCostInstance {
    let mut rng = seed.rng(Stream::Costs);
    let costs = (0..edge_count(n)).map(|_| rng.sample(Open01)).collect();
    UniformCostInstance {
        n,
        costs,
        seed: seed.master,
    }
}

/// Independent uniform colors from `{0, .., q-1}` for `edge_count` edges.
pub fn color_edges(edge_count: usize, q: usize, seed: SeedSpec) -> Result<Coloring> {
    if q == 0 {
        if edge_count == 0 {
            return Ok(Coloring {
                q,
                colors: Vec::new(),
            });
        }
        return Err(Error::InvalidPalette { edges: edge_count });
    }
    if q > u32::MAX as usize {
        return Err(Error::Parameter(format!("palette size {q} exceeds u32")));
    }
    let mut rng = seed.rng(Stream::Colors);
    let colors = (0..edge_count).map(|_| rng.gen_range(0..q as u32)).collect();
    Ok(Coloring { q, colors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_id_is_a_bijection_up_to_100() {
        let mut expected = 0;
        for j in 1..100 {
            for i in 0..j {
                let e = EdgeId::new(i, j);
                assert_eq!(e.0, expected);
                assert_eq!(e, EdgeId::new(j, i));
                assert_eq!(e.endpoints(), (i, j));
                expected += 1;
            }
        }
        assert_eq!(expected, edge_count(100));
    }

    #[test]
    fn empty_and_tiny_instances() {
        let e = gen_euclidean(0, 1.0, SeedSpec::new(1));
        assert_eq!(Instance::from(e).edge_count(), 0);
        let e = gen_euclidean(2, 1.0, SeedSpec::new(1));
        let d = e.dist(0, 1);
        assert!((0.0..=2f64.sqrt()).contains(&d));
        assert_eq!(gen_uniform_costs(1, SeedSpec::new(3)).edge_costs().len(), 0);
        let u = gen_uniform_costs(3, SeedSpec::new(3));
        for i in 0..3 {
            assert_eq!(u.cost(i, i), 0.0);
            for j in 0..3 {
                assert_eq!(u.cost(i, j), u.cost(j, i));
                if i != j {
                    assert!(u.cost(i, j) > 0.0 && u.cost(i, j) < 1.0);
                }
            }
        }
    }

    #[test]
    fn coloring_edge_cases() {
        assert!(color_edges(0, 5, SeedSpec::new(0)).unwrap().is_empty());
        assert!(matches!(
            color_edges(3, 0, SeedSpec::new(0)),
            Err(Error::InvalidPalette { edges: 3 })
        ));
        let c = color_edges(50, 1, SeedSpec::new(9)).unwrap();
        assert!(c.colors().iter().all(|&x| x == 0));
        assert!(Coloring::new(3, vec![0, 1, 3]).is_err());
    }

    #[test]
    fn color_frequencies_concentrate() {
        let c = color_edges(100_000, 10, SeedSpec::new(11)).unwrap();
        let mut counts = [0usize; 10];
        for &x in c.colors() {
            counts[x as usize] += 1;
        }
        for k in counts {
            assert!((k as f64 - 10_000.0).abs() <= 300.0, "count {k}");
        }
    }

    #[test]
    fn uniform_cost_mean_near_half() {
        let u = gen_uniform_costs(1000, SeedSpec::new(5));
        let m = u.edge_costs().iter().sum::<f64>() / u.edge_costs().len() as f64;
        assert!((m - 0.5).abs() < 0.005, "mean {m}");
    }

    #[test]
    fn recoloring_leaves_geometry_alone() {
        let s = SeedSpec::new(77);
        let a = gen_euclidean(20, 1.0, s);
        let c1 = color_edges(190, 19, s).unwrap();
        let c2 = color_edges(190, 19, SeedSpec::new(78)).unwrap();
        let b = gen_euclidean(20, 1.0, s);
        assert_eq!(a, b);
        assert_ne!(c1, c2);
        assert_eq!(gen_uniform_costs(20, s), gen_uniform_costs(20, s));
    }
}
