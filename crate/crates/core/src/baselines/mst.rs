use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::instance::{EdgeId, Instance};

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub edges: Vec<EdgeId>,
    pub total_cost: f64,
}

/// Minimum spanning tree of the complete graph by Kruskal's algorithm.
///
/// Edges are scanned by `(cost, EdgeId)`, so the output is unique even when
/// costs tie.
pub fn kruskal_mst(instance: &Instance) -> Result<SpanningTree> {
    let n = instance.n();
    if n == 0 {
        return Err(Error::EmptyInput("spanning tree of an empty instance"));
    }
    let costs = instance.all_edge_costs();
    let mut order: Vec<u32> = (0..costs.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        costs[a as usize]
            .total_cmp(&costs[b as usize])
            .then(a.cmp(&b))
    });
    let mut dsu = DisjointSets::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for e in order {
        let e = EdgeId(e as usize);
        let (i, j) = e.endpoints();
        if dsu.union(i, j) {
            edges.push(e);
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    let total_cost = instance.total_cost(&edges);
    Ok(SpanningTree { edges, total_cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{gen_euclidean, SeedSpec, UniformCostInstance};

    #[test]
    fn empty_instance_is_an_error() {
        let inst = Instance::from(gen_euclidean(0, 1.0, SeedSpec::new(0)));
        assert!(matches!(kruskal_mst(&inst), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn two_vertices_single_edge() {
        let inst = Instance::from(gen_euclidean(2, 1.0, SeedSpec::new(1)));
        let t = kruskal_mst(&inst).unwrap();
        assert_eq!(t.edges, vec![EdgeId::new(0, 1)]);
        assert_eq!(t.total_cost, inst.cost(0, 1));
    }

    #[test]
    fn four_vertex_example() {
        // EdgeId order: 01, 02, 12, 03, 13, 23
        let u = UniformCostInstance::from_edge_costs(4, vec![0.1, 0.9, 0.2, 0.8, 0.7, 0.3])
            .unwrap();
        let t = kruskal_mst(&Instance::from(u)).unwrap();
        let mut got = t.edges.clone();
        got.sort();
        assert_eq!(
            got,
            vec![EdgeId::new(0, 1), EdgeId::new(1, 2), EdgeId::new(2, 3)]
        );
        assert!((t.total_cost - 0.6).abs() < 1e-12);
    }
}
