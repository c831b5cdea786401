use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::CoordSet;

/// Simple undirected graph on `0..n` with labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count || u == v {
                return Err(Error::InvalidParameters(format!("bad edge ({u},{v})")));
            }
            if !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        Ok(Graph {
            labels: (0..vertex_count).map(|v| v.to_string()).collect(),
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn is_proper_coloring(&self, coloring: &[usize]) -> bool {
        coloring.len() == self.vertex_count()
            && (0..self.vertex_count()).all(|u| self.adjacency[u].iter().all(|&v| coloring[u] != coloring[v]))
    }
}

/// `KG_{n,m}`: `m`-subsets of `[n]`, adjacent when disjoint. Vertices are
/// ordered lexicographically.
pub fn kneser_graph(n: usize, m: usize) -> Result<Graph> {
    if m == 0 || n < 2 * m || n > 63 {
        return Err(Error::InvalidParameters(format!(
            "Kneser graph needs 1 <= m and 2m <= n <= 63 (got n={n}, m={m})"
        )));
    }
    let mut sets: Vec<u64> = (0..1u64 << n).filter(|s| s.count_ones() as usize == m).collect();
    sets.sort_by_key(|&s| CoordSet::from_bits(n, s).coords());
    let edges = (0..sets.len())
        .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| sets[i] & sets[j] == 0);
    let mut g = Graph::new(sets.len(), edges.collect::<Vec<_>>())?;
    g.labels = sets
        .iter()
        .map(|&s| CoordSet::from_bits(n, s).coords().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
        .map(|s| format!("{{{s}}}"))
        .collect();
    Ok(g)
}

/// A proper colouring with at most `k` colours, by DSATUR backtracking.
/// New colours are introduced in order, which removes colour permutations.
pub fn color_graph(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(Vec::new());
    }
    if k == 0 {
        return None;
    }
    let mut coloring = vec![usize::MAX; n];
    if dsatur(g, k, &mut coloring, 0, 0) {
        Some(coloring)
    } else {
        None
    }
}

fn blocked(g: &Graph, coloring: &[usize], v: usize) -> u64 {
    g.neighbors(v)
        .iter()
        .filter(|&&u| coloring[u] != usize::MAX)
        .fold(0, |m, &u| m | 1 << coloring[u])
}

fn dsatur(g: &Graph, k: usize, coloring: &mut [usize], colored: usize, used: usize) -> bool {
    if colored == coloring.len() {
        return true;
    }
    let v = (0..coloring.len())
        .filter(|&v| coloring[v] == usize::MAX)
        .max_by_key(|&v| (blocked(g, coloring, v).count_ones(), g.neighbors(v).len(), usize::MAX - v))
        .expect("an uncoloured vertex remains");
    let taken = blocked(g, coloring, v);
    for c in 0..k.min(used + 1) {
        if taken >> c & 1 == 0 {
            coloring[v] = c;
            if dsatur(g, k, coloring, colored + 1, used.max(c + 1)) {
                return true;
            }
        }
    }
    coloring[v] = usize::MAX;
    false
}

/// Smallest `k <= limit` with a proper `k`-colouring, or `None` above `limit`.
pub fn chromatic_number(g: &Graph, limit: usize) -> Option<usize> {
    if g.vertex_count() == 0 {
        return Some(0);
    }
    // colour indices live in a u64 mask
    (1..=limit.min(64)).find(|&k| color_graph(g, k).is_some_and(|c| g.is_proper_coloring(&c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen() {
        let g = kneser_graph(5, 2).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert_eq!(chromatic_number(&g, 10), Some(3));
        assert_eq!(g.label(0), "{1,2}");
    }

    #[test]
    fn complete_and_invalid() {
        assert_eq!(chromatic_number(&kneser_graph(6, 1).unwrap(), 10), Some(6));
        assert_eq!(chromatic_number(&kneser_graph(6, 1).unwrap(), 5), None);
        assert!(kneser_graph(3, 2).is_err());
        assert!(kneser_graph(3, 0).is_err());
        assert!(Graph::new(2, [(0, 0)]).is_err());
    }
}
