/// Undirected graph with positive integer edge weights (multiplicities).
///
/// Adjacency lists are sorted by neighbor index. Self-loops are not allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, u32)>>,
    total_weight: u64,
    n_edges: usize,
}

impl WeightedGraph {
    /// Builds the graph from `(u, v, w)` triples; parallel entries for the same
    /// unordered pair are summed and zero weights dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, u32)>) -> Self {
        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for (u, v, w) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} vertices");
            assert_ne!(u, v, "self-loop on {u}");
            if w == 0 {
                continue;
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut total_weight = 0u64;
        let mut n_edges = 0usize;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            let mut merged: Vec<(usize, u32)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += w,
                    _ => merged.push((v, w)),
                }
            }
            for &(v, w) in &merged {
                if u < v {
                    total_weight += w as u64;
                    n_edges += 1;
                }
            }
            *list = merged;
        }
        WeightedGraph {
            adj,
            total_weight,
            n_edges,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    /// Number of distinct adjacent pairs.
    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.adj[v]
    }

    /// Sum of incident edge weights.
    pub fn degree(&self, v: usize) -> u64 {
        self.adj[v].iter().map(|&(_, w)| w as u64).sum()
    }

    pub fn weight(&self, u: usize, v: usize) -> u32 {
        self.adj[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .map_or(0, |i| self.adj[u][i].1)
    }

    /// Edges as `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    /// Total weight of edges with both endpoints in `subset`.
    pub fn induced_weight(&self, subset: &[usize]) -> u64 {
        let (mask, _) = super::subset_mask(self.n_vertices(), subset);
        let mut total = 0u64;
        for (u, &inside) in mask.iter().enumerate() {
            if !inside {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                if u < v && mask[v] {
                    total += w as u64;
                }
            }
        }
        total
    }
}
