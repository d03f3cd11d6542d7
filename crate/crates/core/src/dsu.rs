//! Disjoint-set forest with path halving and union by size.

#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// True iff the edge list forms a spanning tree on `n` vertices.
pub fn is_spanning_tree(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut dsu = DisjointSets::new(n);
    let mut count = 0;
    for (a, b) in edges {
        if a >= n || b >= n || !dsu.union(a, b) {
            return false;
        }
        count += 1;
    }
    count + 1 == n.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_and_components() {
        let mut d = DisjointSets::new(5);
        assert!(d.union(0, 1));
        assert!(d.union(3, 4));
        assert!(!d.union(1, 0));
        assert_eq!(d.components(), 3);
        assert!(d.same(3, 4));
        assert!(!d.same(0, 4));
    }

    #[test]
    fn spanning_tree_check() {
        assert!(is_spanning_tree(1, []));
        assert!(is_spanning_tree(3, [(0, 1), (1, 2)]));
        assert!(!is_spanning_tree(3, [(0, 1)]));
        assert!(!is_spanning_tree(3, [(0, 1), (1, 0)]));
    }
}
