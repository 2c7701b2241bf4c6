use std::io::Write;
use std::path::Path;

use super::{subset_mask, WeightedGraph};
use crate::dataset::ConferenceDataset;
use crate::error::{Error, Result};

/// Directed reviewer graph: `(a, b)` is an edge when `a` bid on at least one
/// paper authored by `b`.
///
/// Adjacency is kept by source and by target, each list sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniGraph {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    n_edges: usize,
}

impl UniGraph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        UniGraph {
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            n_edges: 0,
        }
    }

    /// Builds a graph from ordered pairs; duplicates collapse. Self-loops are
    /// rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = UniGraph::new(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invariant(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::invariant(format!("self-loop on vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn build(ds: &ConferenceDataset) -> Self {
        build_uni(ds)
    }

    pub fn n_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Inserts `(u, v)`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-loop on {u}");
        match self.out[u].binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.out[u].insert(i, v);
                let j = self.inn[v].binary_search(&u).unwrap_err();
                self.inn[v].insert(j, u);
                self.n_edges += 1;
                true
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    /// In-degree plus out-degree.
    pub fn total_degree(&self, v: usize) -> usize {
        self.out[v].len() + self.inn[v].len()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn induced_edge_count(&self, subset: &[usize]) -> usize {
        let (mask, _) = subset_mask(self.n_vertices(), subset);
        mask.iter()
            .enumerate()
            .filter(|&(_, &inside)| inside)
            .map(|(u, _)| self.out[u].iter().filter(|&&v| mask[v]).count())
            .sum()
    }

    /// `|E[S]| / (|S|(|S|-1))`; errors when `|S| < 2`.
    pub fn edge_density(&self, subset: &[usize]) -> Result<f64> {
        let (_, size) = subset_mask(self.n_vertices(), subset);
        if size < 2 {
            return Err(Error::SubsetTooSmall { size, min: 2 });
        }
        Ok(self.induced_edge_count(subset) as f64 / (size * (size - 1)) as f64)
    }

    /// Undirected multigraph where each unordered pair weighs the number of
    /// directions present (1 or 2).
    pub fn to_weighted(&self) -> WeightedGraph {
        WeightedGraph::from_edges(self.n_vertices(), self.edges().map(|(u, v)| (u, v, 1)))
    }

    /// Undirected simple graph keeping only reciprocated pairs.
    pub fn reciprocal(&self) -> WeightedGraph {
        WeightedGraph::from_edges(
            self.n_vertices(),
            self.edges()
                .filter(|&(u, v)| u < v && self.has_edge(v, u))
                .map(|(u, v)| (u, v, 1)),
        )
    }

    /// Writes a `src,dst` CSV edge list using reviewer names.
    pub fn write_edge_list(&self, ds: &ConferenceDataset, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "src,dst")?;
        for (u, v) in self.edges() {
            writeln!(w, "{},{}", ds.reviewer_name(u), ds.reviewer_name(v))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds the reviewer graph from bids and authorships.
pub fn build_uni(ds: &ConferenceDataset) -> UniGraph {
    let authors = ds.authors_by_paper();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); ds.n_reviewers()];
    for &(r, p) in ds.bids().keys() {
        out[r].extend(authors[p].iter().copied().filter(|&a| a != r));
    }
    let mut inn: Vec<Vec<usize>> = vec![Vec::new(); ds.n_reviewers()];
    let mut n_edges = 0;
    for (u, list) in out.iter_mut().enumerate() {
        list.sort_unstable();
        list.dedup();
        n_edges += list.len();
        for &v in list.iter() {
            inn[v].push(u);
        }
    }
    UniGraph { out, inn, n_edges }
}

pub fn induced_edge_count(graph: &UniGraph, subset: &[usize]) -> usize {
    graph.induced_edge_count(subset)
}

pub fn edge_density(graph: &UniGraph, subset: &[usize]) -> Result<f64> {
    graph.edge_density(subset)
}
